//! Exact 0-1 matrix permanents: a pruned exhaustive oracle for tiny sizes
//! and a Gray-code Ryser engine for the real work.
//!
//! The permanent of the compatibility matrix of `kind` at size `n` equals
//! the number of compatible permutations, so everything here must be
//! exact: the Ryser inclusion-exclusion runs over all `2^n` column
//! subsets with signed 256-bit integer accumulation (row-sum products
//! reach `n^n ≈ 2^173` at `n = 34`, and floating point would cancel
//! catastrophically in the alternating sum).

use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::compat::{build_matrix, CompatKind, CompatMatrix};
use crate::{BigCount, Error, Result};

/// Hard ceiling for the exhaustive oracle.
pub const BRUTEFORCE_MAX_N: usize = 12;

/// Default ceiling for the Ryser engine: 2^34 subsets is already hours of
/// work, and the signed accumulator bound (< 2^238) is proven for n ≤ 34.
pub const RYSER_MAX_N: usize = 34;

/// Auto engine switches from the oracle to Ryser above this size.
const AUTO_BRUTEFORCE_MAX_N: usize = 10;

/// Square 0-1 matrix with rows packed into single words; the engines'
/// working regime is `n ≤ 64`.
#[derive(Debug, Clone)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > 64 {
            return Err(Error::InvalidArgument(format!(
                "bit matrix needs 1 ≤ n ≤ 64, got {n}"
            )));
        }
        Ok(BitMatrix { n, rows })
    }

    pub fn from_fn(n: usize, mut allowed: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidArgument(format!(
                "bit matrix needs 1 ≤ n ≤ 64, got {n}"
            )));
        }
        let rows = (0..n)
            .map(|i| (0..n).filter(|&j| allowed(i, j)).fold(0u64, |m, j| m | 1 << j))
            .collect();
        Ok(BitMatrix { n, rows })
    }

    pub fn from_compat(m: &CompatMatrix) -> Result<Self> {
        BitMatrix::from_rows(m.row_masks()?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    /// Column masks over rows (the transpose).
    fn cols(&self) -> Vec<u64> {
        let mut cols = vec![0u64; self.n];
        for (i, &row) in self.rows.iter().enumerate() {
            let mut w = row;
            while w != 0 {
                let j = w.trailing_zeros() as usize;
                w &= w - 1;
                cols[j] |= 1 << i;
            }
        }
        cols
    }
}

/// 256-bit two's-complement accumulator. Addition of a term magnitude and
/// the final cross-chunk combination are plain limb arithmetic; the value
/// never leaves `(-2^255, 2^255)` for `n ≤ 34`, so wrapping is never hit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct I256([u64; 4]);

impl I256 {
    const ZERO: I256 = I256([0; 4]);

    #[inline]
    fn add_limbs(&mut self, v: [u64; 4]) {
        let mut carry = 0u64;
        for (a, b) in self.0.iter_mut().zip(v) {
            let (s1, c1) = a.overflowing_add(b);
            let (s2, c2) = s1.overflowing_add(carry);
            *a = s2;
            carry = (c1 | c2) as u64;
        }
    }

    #[inline]
    fn sub_limbs(&mut self, v: [u64; 4]) {
        let mut borrow = 0u64;
        for (a, b) in self.0.iter_mut().zip(v) {
            let (d1, c1) = a.overflowing_sub(b);
            let (d2, c2) = d1.overflowing_sub(borrow);
            *a = d2;
            borrow = (c1 | c2) as u64;
        }
    }

    fn add_signed(&mut self, other: I256) {
        self.add_limbs(other.0);
    }

    fn is_negative(&self) -> bool {
        self.0[3] >> 63 == 1
    }

    fn to_bigcount(self) -> Result<BigCount> {
        if self.is_negative() {
            return Err(Error::Internal(
                "permanent accumulator ended negative".into(),
            ));
        }
        let mut out = BigCount::from(0u64);
        for &limb in self.0.iter().rev() {
            out = (out << 64) | BigCount::from(limb);
        }
        Ok(out)
    }
}

#[inline]
fn limbs_from_u128(x: u128) -> [u64; 4] {
    [x as u64, (x >> 64) as u64, 0, 0]
}

/// Full 256-bit product of two u128 values (inputs here are < 2^102 each).
#[inline]
fn mul_u128(a: u128, b: u128) -> [u64; 4] {
    let (a0, a1) = (a as u64 as u128, a >> 64);
    let (b0, b1) = (b as u64 as u128, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 as u64 as u128) + (p10 as u64 as u128);
    let hi = (mid >> 64) + (p01 >> 64) + (p10 >> 64) + (p11 as u64 as u128);
    [
        p00 as u64,
        mid as u64,
        hi as u64,
        ((hi >> 64) + (p11 >> 64)) as u64,
    ]
}

/// Exhaustive oracle: depth-first assignment with free-column pruning.
/// Deliberately simple and independent of the Ryser path.
pub fn permanent_bruteforce(m: &BitMatrix) -> Result<BigCount> {
    if m.n > BRUTEFORCE_MAX_N {
        return Err(Error::ResourceLimit(format!(
            "brute-force oracle refuses n = {} (max {BRUTEFORCE_MAX_N})",
            m.n
        )));
    }
    fn go(rows: &[u64], used: u64) -> u64 {
        match rows.split_first() {
            None => 1,
            Some((&row, rest)) => {
                let mut avail = row & !used;
                let mut total = 0;
                while avail != 0 {
                    let bit = avail & avail.wrapping_neg();
                    avail ^= bit;
                    total += go(rest, used | bit);
                }
                total
            }
        }
    }
    Ok(BigCount::from(go(&m.rows, 0)))
}

/// Exact permanent by Ryser's formula with Gray-code column updates:
/// `per(A) = (-1)^n Σ_S (-1)^{|S|} ∏_i Σ_{j∈S} a_ij`. Each Gray step
/// toggles one column and touches only the row sums in that column's
/// support; the product is skipped entirely while any row sum is zero.
pub fn permanent_ryser(m: &BitMatrix) -> Result<BigCount> {
    permanent_ryser_with(m, RYSER_MAX_N, default_chunks(m.n))
}

/// Ryser with explicit ceiling and subset-range partitioning. The 2^n
/// subset ranks are split into `chunks` contiguous ranges, each seeded
/// with its own Gray-code state; partial signed sums combine by exact
/// addition, so any partitioning yields bit-identical results.
pub fn permanent_ryser_with(m: &BitMatrix, max_n: usize, chunks: usize) -> Result<BigCount> {
    if m.n > max_n.min(RYSER_MAX_N) {
        return Err(Error::ResourceLimit(format!(
            "Ryser engine refuses n = {} (ceiling {})",
            m.n,
            max_n.min(RYSER_MAX_N)
        )));
    }
    let cols = m.cols();
    let total_ranks: u64 = 1u64 << m.n;
    let chunks = chunks.clamp(1, 1 << 16) as u64;
    let chunk_len = total_ranks.div_ceil(chunks);
    let ranges: Vec<(u64, u64)> = (0..chunks)
        .map(|i| {
            let lo = (i * chunk_len).max(1);
            let hi = ((i + 1) * chunk_len).min(total_ranks);
            (lo, hi)
        })
        .filter(|&(lo, hi)| lo < hi)
        .collect();

    let partials: Vec<I256> = ranges
        .par_iter()
        .map(|&(lo, hi)| ryser_range(m.n, &cols, lo, hi))
        .collect();

    let mut acc = I256::ZERO;
    for p in partials {
        acc.add_signed(p);
    }
    acc.to_bigcount()
}

/// Signed partial sum of Ryser terms for subset ranks `t ∈ [lo, hi)`.
fn ryser_range(n: usize, cols: &[u64], lo: u64, hi: u64) -> I256 {
    debug_assert!(lo >= 1);
    let mut row_sums = [0u8; 64];
    let mut zeros = n;
    let mut subset = lo ^ (lo >> 1); // Gray code of rank lo
    let mut ones = 0u32;
    {
        let mut s = subset;
        while s != 0 {
            let col = s.trailing_zeros() as usize;
            s &= s - 1;
            ones += 1;
            let mut rows = cols[col];
            while rows != 0 {
                let r = rows.trailing_zeros() as usize;
                rows &= rows - 1;
                if row_sums[r] == 0 {
                    zeros -= 1;
                }
                row_sums[r] += 1;
            }
        }
    }

    let mut acc = I256::ZERO;
    let mut t = lo;
    loop {
        if zeros == 0 {
            // sign of the term: (-1)^n (-1)^{|S|} = (-1)^{n - |S|}
            let negative = (n as u32 - ones) & 1 == 1;
            let limbs = if n <= 25 {
                // row sums ≤ n < 2^5 and ≤ 25 factors: product < 2^125
                let mut prod: u128 = 1;
                for &rs in &row_sums[..n] {
                    prod *= rs as u128;
                }
                limbs_from_u128(prod)
            } else {
                // two halves of ≤ 17 factors each stay below 2^102
                let half = n / 2;
                let mut p1: u128 = 1;
                for &rs in &row_sums[..half] {
                    p1 *= rs as u128;
                }
                let mut p2: u128 = 1;
                for &rs in &row_sums[half..n] {
                    p2 *= rs as u128;
                }
                mul_u128(p1, p2)
            };
            if negative {
                acc.sub_limbs(limbs);
            } else {
                acc.add_limbs(limbs);
            }
        }

        t += 1;
        if t >= hi {
            break;
        }
        let col = t.trailing_zeros() as usize;
        let bit = 1u64 << col;
        subset ^= bit;
        let added = subset & bit != 0;
        let mut rows = cols[col];
        if added {
            ones += 1;
            while rows != 0 {
                let r = rows.trailing_zeros() as usize;
                rows &= rows - 1;
                if row_sums[r] == 0 {
                    zeros -= 1;
                }
                row_sums[r] += 1;
            }
        } else {
            ones -= 1;
            while rows != 0 {
                let r = rows.trailing_zeros() as usize;
                rows &= rows - 1;
                row_sums[r] -= 1;
                if row_sums[r] == 0 {
                    zeros += 1;
                }
            }
        }
    }
    acc
}

/// Fixed, thread-count-independent partitioning: ~2^16 ranks per chunk.
fn default_chunks(n: usize) -> usize {
    if n <= 16 {
        1
    } else {
        (1usize << (n - 16)).min(2048)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Auto,
    Bruteforce,
    Ryser,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Engine::Auto),
            "bruteforce" | "brute-force" | "brute" => Ok(Engine::Bruteforce),
            "ryser" => Ok(Engine::Ryser),
            other => Err(Error::InvalidArgument(format!(
                "unknown engine {other:?} (expected auto, bruteforce, ryser)"
            ))),
        }
    }
}

/// One exact count with its size-normalized growth rate.
#[derive(Debug, Clone)]
pub struct CountResult {
    pub kind: CompatKind,
    pub n: usize,
    pub count: BigCount,
    /// `count^{1/n}` rounded to 4 decimal places.
    pub nth_root: f64,
    pub engine: &'static str,
    pub elapsed: Duration,
}

/// `count^{1/n}` via `exp(ln(count)/n)`, rounded to 4 decimals.
pub fn nth_root_4dp(count: &BigCount, n: usize) -> f64 {
    let x = count.to_f64().unwrap_or(f64::MAX);
    if x <= 0.0 {
        return 0.0;
    }
    let root = (x.ln() / n as f64).exp();
    (root * 1e4).round() / 1e4
}

/// Count the permutations of `[n]` compatible with `kind`, dispatching to
/// the requested engine (`Auto`: oracle for n ≤ 10, Ryser above).
pub fn count_permutations(kind: CompatKind, n: usize, engine: Engine) -> Result<CountResult> {
    let start = Instant::now();
    let matrix = build_matrix(kind, n)?;
    let bits = BitMatrix::from_compat(&matrix)?;
    let (count, engine_name) = match engine {
        Engine::Bruteforce => (permanent_bruteforce(&bits)?, "bruteforce"),
        Engine::Ryser => (permanent_ryser(&bits)?, "ryser"),
        Engine::Auto => {
            if n <= AUTO_BRUTEFORCE_MAX_N {
                (permanent_bruteforce(&bits)?, "bruteforce")
            } else {
                (permanent_ryser(&bits)?, "ryser")
            }
        }
    };
    Ok(CountResult {
        kind,
        n,
        nth_root: nth_root_4dp(&count, n),
        count,
        engine: engine_name,
        elapsed: start.elapsed(),
    })
}

/// One row of the counts table: both kinds at the same `n`.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub n: usize,
    pub div: CountResult,
    pub lcm: CountResult,
}

/// Exact `#S_div(n)` and `#S_lcm(n)` with their n-th roots for
/// `n = 1..=max_n`.
pub fn table1(max_n: usize) -> Result<Vec<TableRow>> {
    (1..=max_n)
        .map(|n| {
            Ok(TableRow {
                n,
                div: count_permutations(CompatKind::Div, n, Engine::Auto)?,
                lcm: count_permutations(CompatKind::Lcm, n, Engine::Auto)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(kind: CompatKind, n: usize) -> u64 {
        count_permutations(kind, n, Engine::Auto)
            .unwrap()
            .count
            .to_u64()
            .unwrap()
    }

    #[test]
    fn oracle_small_counts() {
        assert_eq!(count(CompatKind::Lcm, 3), 3);
        assert_eq!(count(CompatKind::Div, 6), 36);
        assert_eq!(count(CompatKind::Lcm, 6), 56);
        assert_eq!(count(CompatKind::AntiCoprime, 4), 2);
    }

    #[test]
    fn ryser_small_counts() {
        let m = build_matrix(CompatKind::Lcm, 6).unwrap();
        let bits = BitMatrix::from_compat(&m).unwrap();
        assert_eq!(permanent_ryser(&bits).unwrap(), BigCount::from(56u32));
        let m = build_matrix(CompatKind::Div, 12).unwrap();
        let bits = BitMatrix::from_compat(&m).unwrap();
        assert_eq!(permanent_ryser(&bits).unwrap(), BigCount::from(4010u32));
    }

    #[test]
    fn engines_agree_up_to_10() {
        for kind in CompatKind::ALL {
            for n in 1..=10usize {
                let m = build_matrix(kind, n).unwrap();
                let bits = BitMatrix::from_compat(&m).unwrap();
                assert_eq!(
                    permanent_bruteforce(&bits).unwrap(),
                    permanent_ryser(&bits).unwrap(),
                    "kind={kind} n={n}"
                );
            }
        }
    }

    #[test]
    fn partitioning_is_exact() {
        let m = build_matrix(CompatKind::Lcm, 14).unwrap();
        let bits = BitMatrix::from_compat(&m).unwrap();
        let reference = permanent_ryser_with(&bits, RYSER_MAX_N, 1).unwrap();
        for chunks in [2usize, 3, 7, 64, 1000] {
            assert_eq!(
                permanent_ryser_with(&bits, RYSER_MAX_N, chunks).unwrap(),
                reference
            );
        }
    }

    #[test]
    fn factorial_permanent() {
        // all-ones n×n has permanent n!
        for n in [1usize, 5, 16] {
            let bits = BitMatrix::from_fn(n, |_, _| true).unwrap();
            let expect: BigCount = (1..=n as u64).map(BigCount::from).product();
            assert_eq!(permanent_ryser(&bits).unwrap(), expect);
        }
    }

    #[test]
    fn engine_guards() {
        let bits = BitMatrix::from_fn(13, |_, _| true).unwrap();
        assert!(matches!(
            permanent_bruteforce(&bits),
            Err(Error::ResourceLimit(_))
        ));
        let bits = BitMatrix::from_fn(35, |i, j| i == j).unwrap();
        assert!(matches!(permanent_ryser(&bits), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn identity_count_per_kind() {
        for kind in CompatKind::ALL {
            assert_eq!(count(kind, 1), 1, "kind={kind}");
        }
    }

    #[test]
    fn anti_coprime_forcing() {
        // column 1 admits only row 1, so the count equals the permanent of
        // the gcd>1 submatrix on {2..n}
        for n in 2..=12usize {
            let full = count(CompatKind::AntiCoprime, n);
            let sub = BitMatrix::from_fn(n - 1, |i, j| {
                num_integer::gcd(i as u64 + 2, j as u64 + 2) > 1
            })
            .unwrap();
            assert_eq!(
                BigCount::from(full),
                permanent_bruteforce(&sub).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn nth_root_convention() {
        assert_eq!(nth_root_4dp(&BigCount::from(1184u32), 10), 2.0292);
        assert_eq!(nth_root_4dp(&BigCount::from(12192u32), 12), 2.1903);
        assert_eq!(nth_root_4dp(&BigCount::from(2u32), 2), 1.4142);
    }

    #[test]
    fn mul_u128_widening() {
        let a = (1u128 << 100) + 12345;
        let b = (1u128 << 101) + 67890;
        let limbs = mul_u128(a, b);
        // check against BigUint multiplication
        let big = BigCount::from(a) * BigCount::from(b);
        let mut rebuilt = BigCount::from(0u32);
        for &l in limbs.iter().rev() {
            rebuilt = (rebuilt << 64) | BigCount::from(l);
        }
        assert_eq!(big, rebuilt);
    }

    #[test]
    fn table1_shape() {
        let rows = table1(6).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[5].div.count, BigCount::from(36u32));
        assert_eq!(rows[5].lcm.count, BigCount::from(56u32));
        // S_div(n) ⊆ S_lcm(n)
        for row in &rows {
            assert!(row.div.count <= row.lcm.count);
        }
    }
}
