//! Materialized lower-bound permutation families.
//!
//! Fix a base `b` with sorted divisors `a_1 < … < a_τ`. Split `[n]` into
//! intervals `I_i = (n/a_{i+1}, n/a_i]` (and `I_τ = (0, n/b]`); for an
//! *admissible* generator `j ∈ I_i` — one with `v_p(j) ≡ 0 (mod v_p(b)+1)`
//! for every prime `p | b` — the dilated divisor set
//! `T(i, j) = {d·j : d ∈ s(a_i, b)}` lies in `[n]`, and all such sets are
//! pairwise disjoint. Permuting each block within itself (under the
//! `lcm ≤ a_i` constraint, which dilation turns into `lcm ≤ n`) and fixing
//! everything else yields `∏ p(a_i, b)` distinct lcm-compatible
//! permutations of `[n]`.

use crate::bounds::p_lcm;
use crate::compat::{is_compatible, CompatKind};
use crate::numtheory::{v_p, SpfTable};
use crate::permanent::BitMatrix;
use crate::{BigCount, Error, Result};

use num_integer::gcd;
use num_traits::ToPrimitive;

/// Ceiling for family construction; blocks are materialized.
pub const MAX_FAMILY_N: u64 = 10_000_000;

/// One block `T(i, j)`: the elements are `{d·j : d ∈ s(a_i, b)}` in
/// increasing order.
#[derive(Debug, Clone)]
pub struct Block {
    /// Interval index `i`, 1-based; equals the block size `#s(a_i, b)`.
    pub interval: usize,
    pub generator: u64,
    pub elements: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct BlockFamily {
    pub b: u64,
    pub n: u64,
    pub divisors: Vec<u64>,
    pub blocks: Vec<Block>,
    /// Number of admissible generators per interval (index `i − 1`).
    pub per_interval_counts: Vec<u64>,
}

impl BlockFamily {
    /// Blocks of size ≥ 2 — the ones carrying any non-identity
    /// permutations.
    pub fn nontrivial_blocks(&self) -> usize {
        self.blocks.iter().filter(|bl| bl.elements.len() >= 2).count()
    }
}

/// Is `j` an admissible generator for base `b`: `v_p(j) ≡ 0
/// (mod v_p(b)+1)` for every prime `p | b`?
pub fn admissible(table: &SpfTable, j: u64, b: u64) -> Result<bool> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be positive".into()));
    }
    let f = table.factorize(b)?;
    Ok(f.pairs()
        .iter()
        .all(|&(p, e)| v_p(j, p) % (e + 1) == 0))
}

/// Enumerate all blocks `T(i, j)` for admissible `j`, auditing the
/// pairwise-disjointness guarantee element by element.
pub fn build_family(table: &SpfTable, b: u64, n: u64) -> Result<BlockFamily> {
    if b < 2 {
        return Err(Error::InvalidArgument(format!("need b ≥ 2, got {b}")));
    }
    if n < b {
        return Err(Error::InvalidArgument(format!("need n ≥ b, got n={n}, b={b}")));
    }
    if n > MAX_FAMILY_N {
        return Err(Error::ResourceLimit(format!(
            "family size {n} exceeds the bound {MAX_FAMILY_N}"
        )));
    }
    let divisors = table.divisors(b)?;
    let tau = divisors.len();
    let b_primes: Vec<(u64, u32)> = table.factorize(b)?.pairs().to_vec();
    let is_adm = |j: u64| {
        b_primes
            .iter()
            .all(|&(p, e)| v_p(j, p) % (e + 1) == 0)
    };

    let mut blocks = Vec::new();
    let mut per_interval_counts = vec![0u64; tau];
    let mut seen = vec![false; n as usize + 1];
    for i in 1..=tau {
        // I_i = (n/a_{i+1}, n/a_i] for i < τ, I_τ = (0, n/b]
        let lo = if i < tau { n / divisors[i] } else { 0 };
        let hi = n / divisors[i - 1];
        for j in lo + 1..=hi {
            if !is_adm(j) {
                continue;
            }
            per_interval_counts[i - 1] += 1;
            let elements: Vec<u64> = divisors[..i].iter().map(|&d| d * j).collect();
            for &x in &elements {
                if x > n {
                    return Err(Error::Internal(format!(
                        "block element {x} escapes [1, {n}] (i={i}, j={j})"
                    )));
                }
                if seen[x as usize] {
                    return Err(Error::Internal(format!(
                        "blocks are not disjoint at element {x} (i={i}, j={j})"
                    )));
                }
                seen[x as usize] = true;
            }
            blocks.push(Block {
                interval: i,
                generator: j,
                elements,
            });
        }
    }
    Ok(BlockFamily {
        b,
        n,
        divisors,
        blocks,
        per_interval_counts,
    })
}

/// Exact number of permutations the family witnesses:
/// `∏_{blocks (i,j)} p(a_i, b)`.
pub fn family_count(table: &SpfTable, family: &BlockFamily) -> Result<BigCount> {
    let mut count = BigCount::from(1u32);
    for (i, &interval_count) in family.per_interval_counts.iter().enumerate() {
        if interval_count == 0 {
            continue;
        }
        let p = p_lcm(table, family.divisors[i], family.b)?;
        let exp = u32::try_from(interval_count)
            .map_err(|_| Error::ResourceLimit("family exponent overflows u32".into()))?;
        count *= p.pow(exp);
    }
    Ok(count)
}

/// Lexicographic list of the valid within-block patterns for a block of
/// the given interval: permutations σ of `{0..i-1}` with
/// `lcm(s[x], s[σ(x)]) ≤ a_i`, capped at `cap` entries.
fn block_patterns(divisors: &[u64], i: usize, cap: u64) -> Vec<Vec<u8>> {
    let s = &divisors[..i];
    let a = divisors[i - 1];
    let bits = BitMatrix::from_fn(i, |x, y| s[x] / gcd(s[x], s[y]) * s[y] <= a)
        .expect("block size fits the matrix bound");
    let mut out: Vec<Vec<u8>> = Vec::new();
    let mut current = vec![0u8; i];
    fn dfs(
        bits: &BitMatrix,
        pos: usize,
        used: u64,
        current: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
        cap: u64,
    ) {
        if out.len() as u64 >= cap {
            return;
        }
        if pos == bits.n() {
            out.push(current.clone());
            return;
        }
        let mut avail = bits.row(pos) & !used;
        while avail != 0 {
            let y = avail.trailing_zeros();
            avail &= avail - 1;
            current[pos] = y as u8;
            dfs(bits, pos + 1, used | 1 << y, current, out, cap);
            if out.len() as u64 >= cap {
                return;
            }
        }
    }
    dfs(&bits, 0, 0, &mut current, &mut out, cap.max(1));
    out
}

/// Up to `limit` distinct member permutations of the family, as 1-based
/// image vectors (`perm[x-1]` is the image of `x`). Members are composed
/// block by block in mixed radix over the per-interval pattern counts;
/// member 0 is the identity.
pub fn emit_members(
    table: &SpfTable,
    family: &BlockFamily,
    limit: u64,
) -> Result<Vec<Vec<u64>>> {
    if limit == 0 {
        return Ok(Vec::new());
    }
    let n = family.n as usize;
    if n > 10_000_000 {
        return Err(Error::ResourceLimit("member vectors too large".into()));
    }
    let tau = family.divisors.len();
    // pattern lists per interval; digit values never reach `limit`
    let patterns: Vec<Vec<Vec<u8>>> = (1..=tau)
        .map(|i| block_patterns(&family.divisors, i, limit))
        .collect();
    let radices: Vec<BigCount> = (0..tau)
        .map(|i| p_lcm(table, family.divisors[i], family.b))
        .collect::<Result<_>>()?;

    let total = family_count(table, family)?;
    let member_count = if BigCount::from(limit) <= total {
        limit
    } else {
        total.to_u64().unwrap_or(limit)
    };

    let mut members = Vec::with_capacity(member_count as usize);
    for t in 0..member_count {
        let mut perm: Vec<u64> = (1..=family.n).collect();
        let mut rest = BigCount::from(t);
        for block in &family.blocks {
            if rest == BigCount::from(0u32) {
                break;
            }
            let radix = &radices[block.interval - 1];
            let digit = (&rest % radix).to_u64().expect("digit below u64 radix");
            rest /= radix;
            if digit == 0 {
                continue;
            }
            let pattern = &patterns[block.interval - 1][digit as usize];
            for (x, &sigma) in pattern.iter().enumerate() {
                perm[block.elements[x] as usize - 1] = block.elements[sigma as usize];
            }
        }
        members.push(perm);
    }
    Ok(members)
}

/// Check that `perm` is a bijection of `[n]` lying in `S_lcm(n)`.
pub fn is_lcm_member(perm: &[u64], n: u64) -> Result<bool> {
    if perm.len() as u64 != n {
        return Ok(false);
    }
    let mut seen = vec![false; n as usize + 1];
    for (x0, &y) in perm.iter().enumerate() {
        if y == 0 || y > n || seen[y as usize] {
            return Ok(false);
        }
        seen[y as usize] = true;
        if !is_compatible(CompatKind::Lcm, x0 as u64 + 1, y, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}
