//! Compatibility predicates on `[n]` and their 0-1 matrices.
//!
//! Four kinds of constraint: `lcm[j, j'] ≤ n`, mutual divisibility,
//! anti-coprimality (`gcd > 1` except at `j = 1`), and coprimality. The
//! matrix of a kind at size `n` has row `j` equal to the set of allowed
//! images `j'`; its permanent counts the compatible permutations.

use std::fmt;
use std::str::FromStr;

use num_integer::gcd;

use crate::numtheory::SpfTable;
use crate::{Error, Result};

/// Largest `n` for which a full n×n matrix is materialized. Row-set
/// construction is cheap well past this; the bound caps bitset memory.
/// Larger scans (the `N_k` statistics at n = 10^6) never build a matrix.
pub const MAX_MATRIX_N: usize = 1 << 14;

/// Guard for the `N_k` counting scan.
pub const MAX_SCAN_N: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompatKind {
    /// `lcm[j, j'] ≤ n`.
    Lcm,
    /// `j | j'` or `j' | j`.
    Div,
    /// `gcd(j, j') > 1`, except `j = 1` maps anywhere.
    AntiCoprime,
    /// `gcd(j, j') = 1`.
    Coprime,
}

impl CompatKind {
    pub const ALL: [CompatKind; 4] = [
        CompatKind::Lcm,
        CompatKind::Div,
        CompatKind::AntiCoprime,
        CompatKind::Coprime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CompatKind::Lcm => "lcm",
            CompatKind::Div => "div",
            CompatKind::AntiCoprime => "anticoprime",
            CompatKind::Coprime => "coprime",
        }
    }
}

impl fmt::Display for CompatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CompatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lcm" => Ok(CompatKind::Lcm),
            "div" => Ok(CompatKind::Div),
            "anticoprime" | "anti-coprime" | "anti" => Ok(CompatKind::AntiCoprime),
            "coprime" => Ok(CompatKind::Coprime),
            other => Err(Error::InvalidArgument(format!(
                "unknown compatibility kind {other:?} (expected lcm, div, anticoprime, coprime)"
            ))),
        }
    }
}

/// Is `j → j'` allowed at size `n`? The lcm is computed in 128-bit so
/// `j·j'` cannot overflow at any supported `n`.
pub fn is_compatible(kind: CompatKind, j: u64, jp: u64, n: u64) -> Result<bool> {
    if j == 0 || jp == 0 || j > n || jp > n {
        return Err(Error::InvalidArgument(format!(
            "indices must lie in [1, {n}], got j={j}, j'={jp}"
        )));
    }
    Ok(match kind {
        CompatKind::Lcm => {
            let g = gcd(j, jp);
            (j as u128 / g as u128) * jp as u128 <= n as u128
        }
        CompatKind::Div => j % jp == 0 || jp % j == 0,
        CompatKind::AntiCoprime => j == 1 || gcd(j, jp) > 1,
        CompatKind::Coprime => gcd(j, jp) == 1,
    })
}

/// Unique triple `(a, b, c)` with `j = ab`, `j' = bc`, `gcd(a, c) = 1`,
/// and `abc = lcm[j, j'] ≤ n`; `None` when the lcm exceeds `n`.
pub fn triple_decomposition(j: u64, jp: u64, n: u64) -> Option<(u64, u64, u64)> {
    if j == 0 || jp == 0 {
        return None;
    }
    let b = gcd(j, jp);
    let (a, c) = (j / b, jp / b);
    // abc = lcm[j, j']
    if (a as u128) * (b as u128) * (c as u128) <= n as u128 {
        Some((a, b, c))
    } else {
        None
    }
}

/// Row-set compatibility matrix. Rows are packed bitsets indexed by
/// `j' − 1`, sized for word-parallel consumption by the permanent engines.
#[derive(Debug, Clone)]
pub struct CompatMatrix {
    kind: CompatKind,
    n: usize,
    words_per_row: usize,
    rows: Vec<u64>,
}

impl CompatMatrix {
    pub fn kind(&self) -> CompatKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn row_words(&self, j: usize) -> &[u64] {
        let w = self.words_per_row;
        &self.rows[(j - 1) * w..j * w]
    }

    fn row_words_mut(&mut self, j: usize) -> &mut [u64] {
        let w = self.words_per_row;
        &mut self.rows[(j - 1) * w..j * w]
    }

    fn set(&mut self, j: usize, jp: usize) {
        self.row_words_mut(j)[(jp - 1) / 64] |= 1 << ((jp - 1) % 64);
    }

    /// Does row `j` contain column `j'`? Both 1-based.
    pub fn contains(&self, j: usize, jp: usize) -> bool {
        self.row_words(j)[(jp - 1) / 64] >> ((jp - 1) % 64) & 1 == 1
    }

    /// Number of allowed images for `j`.
    pub fn row_count(&self, j: usize) -> usize {
        self.row_words(j).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Allowed images of `j` in increasing order (1-based).
    pub fn row_iter(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(j).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b + 1)
                }
            })
        })
    }

    /// Single-word row masks, available when `n ≤ 64` (the permanent
    /// engines' regime).
    pub fn row_masks(&self) -> Result<Vec<u64>> {
        if self.n > 64 {
            return Err(Error::ResourceLimit(format!(
                "row masks need n ≤ 64, matrix has n = {}",
                self.n
            )));
        }
        Ok((1..=self.n).map(|j| self.row_words(j)[0]).collect())
    }
}

/// Build the full matrix for a kind. Lcm and Div rows are generated from
/// divisor/multiple structure rather than all n² predicate tests; the gcd
/// kinds union per-prime multiple masks.
pub fn build_matrix(kind: CompatKind, n: usize) -> Result<CompatMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix size must be positive".into()));
    }
    if n > MAX_MATRIX_N {
        return Err(Error::ResourceLimit(format!(
            "matrix size {n} exceeds the materialization bound {MAX_MATRIX_N}"
        )));
    }
    let words_per_row = n.div_ceil(64);
    let mut m = CompatMatrix {
        kind,
        n,
        words_per_row,
        rows: vec![0; words_per_row * n],
    };
    match kind {
        CompatKind::Lcm => {
            // Row j is exactly {b·c : b | j, c ≤ n/j}: any such product has
            // lcm[j, bc] ≤ j·c ≤ n, and conversely b = gcd(j, j') works.
            let divs = divisor_lists(n);
            for j in 1..=n {
                for &b in &divs[j] {
                    for c in 1..=n / j {
                        m.set(j, b * c);
                    }
                }
            }
        }
        CompatKind::Div => {
            let divs = divisor_lists(n);
            for j in 1..=n {
                for &d in &divs[j] {
                    m.set(j, d);
                }
                for mult in (j..=n).step_by(j) {
                    m.set(j, mult);
                }
            }
        }
        CompatKind::AntiCoprime | CompatKind::Coprime => {
            let spf = small_spf(n);
            let prime_masks = prime_multiple_masks(n, words_per_row, &spf);
            let full_row = full_mask(n, words_per_row);
            for j in 1..=n {
                let mut acc = vec![0u64; words_per_row];
                let mut x = j;
                while x > 1 {
                    let p = spf[x] as usize;
                    for (a, &b) in acc.iter_mut().zip(&prime_masks[p]) {
                        *a |= b;
                    }
                    while x % p == 0 {
                        x /= p;
                    }
                }
                let row = m.row_words_mut(j);
                if kind == CompatKind::AntiCoprime {
                    if j == 1 {
                        row.copy_from_slice(&full_row);
                    } else {
                        row.copy_from_slice(&acc);
                    }
                } else {
                    for ((r, &a), &f) in row.iter_mut().zip(&acc).zip(&full_row) {
                        *r = !a & f;
                    }
                }
            }
        }
    }
    Ok(m)
}

fn full_mask(n: usize, words: usize) -> Vec<u64> {
    let mut v = vec![u64::MAX; words];
    let rem = n % 64;
    if rem != 0 {
        v[words - 1] = (1u64 << rem) - 1;
    }
    v
}

/// divisor_lists(n)[j] = divisors of j, for all j ≤ n, by multiple-marking.
fn divisor_lists(n: usize) -> Vec<Vec<usize>> {
    let mut lists = vec![Vec::new(); n + 1];
    for d in 1..=n {
        for j in (d..=n).step_by(d) {
            lists[j].push(d);
        }
    }
    lists
}

fn small_spf(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

fn prime_multiple_masks(n: usize, words: usize, spf: &[u32]) -> Vec<Vec<u64>> {
    let mut masks = vec![Vec::new(); n + 1];
    for p in 2..=n {
        if spf[p] as usize == p {
            let mut mask = vec![0u64; words];
            for mult in (p..=n).step_by(p) {
                mask[(mult - 1) / 64] |= 1 << ((mult - 1) % 64);
            }
            masks[p] = mask;
        }
    }
    masks
}

/// `N_k(j)`: the number of `j' ∈ (n/k, n]` with `lcm[j, j'] ≤ n`, for
/// `j ∈ (n/k, n]`. Enumerates the unique `(b, c)` representations
/// `j' = b·c` with `b | j`, `gcd(j/b, c) = 1`, so the cost is
/// `O(τ(j)·n/j)` rather than a scan over `j'`.
pub fn neighbor_count_nk(table: &SpfTable, j: u64, k: u64, n: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need k ≥ 2, got {k}")));
    }
    if !(j * k > n && j <= n) {
        return Err(Error::InvalidArgument(format!(
            "j must lie in (n/k, n] = ({}/{k}, {n}], got {j}",
            n
        )));
    }
    let mut count = 0u64;
    for &b in table.divisors(j)?.iter() {
        let a = j / b;
        for c in 1..=n / j {
            // j' = b·c; lcm[j, j'] = j·c ≤ n by the loop bound
            if gcd(a, c) == 1 && b * c * k > n {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `N_k(j)` for every `j ∈ (n/k, n]` at once, as a vector indexed by `j`
/// (entries at `j ≤ n/k` stay zero). Accumulates over coprime pairs
/// `(a, c)` with `a, c < k`, marking multiples of `a`, in
/// `O(Σ_{a<k} n/a)` total time.
pub fn nk_counts(k: u64, n: u64) -> Result<Vec<u32>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need k ≥ 2, got {k}")));
    }
    if n < k {
        return Err(Error::InvalidArgument(format!("need n ≥ k, got n={n}, k={k}")));
    }
    if n > MAX_SCAN_N {
        return Err(Error::ResourceLimit(format!(
            "scan size {n} exceeds the bound {MAX_SCAN_N}"
        )));
    }
    let mut counts = vec![0u32; n as usize + 1];
    for a in 1..k {
        for c in 1..k {
            if gcd(a, c) != 1 {
                continue;
            }
            // j ≡ 0 (mod a), j·k > n, j·c·k > n·a, j·c ≤ n
            let hi = n / c;
            let lo = (n / k).max(n * a / (c * k));
            if hi <= lo {
                continue;
            }
            let mut j = (lo / a + 1) * a;
            while j <= hi {
                counts[j as usize] += 1;
                j += a;
            }
        }
    }
    Ok(counts)
}
