//! Deterministic elementary number theory: smallest-prime-factor sieve,
//! factorization, divisor/multiplicative functions, and prime-density
//! products. Everything downstream (compatibility matrices, permanents,
//! bound constants) is built on this kernel.
//!
//! All operations are pure after table construction; [`SpfTable`] is
//! immutable and can be shared freely across threads.

use crate::{Error, Result};

/// Exact rational with reduced u64 numerator/denominator; large enough for
/// every multiplicative-function value handled here (`b ≤ sieve limit`).
pub type Rational = num_rational::Ratio<u64>;

/// Default sieve limit: covers factorizations for the 10^6-scale empirical
/// scans and primes below 10^4 for the density constants, from one table.
pub const DEFAULT_SPF_LIMIT: u64 = 1_000_001;

/// Smallest-prime-factor table for `2 ≤ m ≤ limit`, plus the primes up to
/// `limit` in increasing order.
#[derive(Debug, Clone)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

/// Prime factorization as (prime, exponent) pairs, strictly increasing in
/// the prime. `1` factorizes as the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// Product of `p^e` over all pairs; reconstructs the factored integer.
    pub fn value(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
            .max(1)
    }

    /// Exponent of `p` (zero when `p` does not divide the value).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.pairs
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }
}

impl SpfTable {
    /// Linear sieve up to `limit` inclusive.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        if limit >= u32::MAX as u64 {
            return Err(Error::ResourceLimit(format!(
                "sieve limit {limit} exceeds the 32-bit table bound"
            )));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let q = p as usize * i;
                if p > spf[i] || q > n {
                    break;
                }
                spf[q] = p;
            }
        }
        Ok(SpfTable { limit, spf, primes })
    }

    pub fn with_default_limit() -> Self {
        SpfTable::new(DEFAULT_SPF_LIMIT).expect("default limit is valid")
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `m` (`2 ≤ m ≤ limit`); equals `m` exactly
    /// when `m` is prime.
    pub fn spf(&self, m: u64) -> Result<u64> {
        if m < 2 || m > self.limit {
            return Err(Error::OutOfRange(format!(
                "spf defined for 2 ≤ m ≤ {}, got {m}",
                self.limit
            )));
        }
        Ok(self.spf[m as usize] as u64)
    }

    /// Primes `p < x` in increasing order.
    pub fn primes_below(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        self.primes
            .iter()
            .map(|&p| p as u64)
            .take_while(move |&p| p < x)
    }

    fn check_range(&self, m: u64) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be positive".into()));
        }
        if m > self.limit {
            return Err(Error::OutOfRange(format!(
                "{m} exceeds the sieve limit {}",
                self.limit
            )));
        }
        Ok(())
    }

    /// Factor `1 ≤ m ≤ limit` by repeated smallest-prime division.
    pub fn factorize(&self, m: u64) -> Result<Factorization> {
        self.check_range(m)?;
        let mut pairs = Vec::new();
        let mut x = m;
        while x > 1 {
            let p = self.spf[x as usize] as u64;
            let mut e = 0u32;
            while x % p == 0 {
                x /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
        Ok(Factorization { pairs })
    }

    /// Divisors of `m` in strictly increasing order; starts at 1, ends at
    /// `m`, length `τ(m)`.
    pub fn divisors(&self, m: u64) -> Result<Vec<u64>> {
        let f = self.factorize(m)?;
        let mut divs = vec![1u64];
        for &(p, e) in f.pairs() {
            let prev = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..prev {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        Ok(divs)
    }

    /// Divisor count τ(m).
    pub fn tau(&self, m: u64) -> Result<u64> {
        let f = self.factorize(m)?;
        Ok(f.pairs().iter().map(|&(_, e)| e as u64 + 1).product())
    }

    /// Divisor sum σ(m).
    pub fn sigma(&self, m: u64) -> Result<u64> {
        let f = self.factorize(m)?;
        Ok(f.pairs()
            .iter()
            .map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1))
            .product())
    }

    /// Euler totient φ(m).
    pub fn phi(&self, m: u64) -> Result<u64> {
        let f = self.factorize(m)?;
        Ok(f.pairs()
            .iter()
            .map(|&(p, e)| p.pow(e - 1) * (p - 1))
            .product())
    }

    /// α(b) = ∏_{p^i ∥ b} (p^{i+1} − p^i)/(p^{i+1} − 1), the density of
    /// integers `j` with `v_p(j) ≡ 0 (mod v_p(b)+1)` for all `p | b`.
    /// Equals `b/σ(b)` exactly.
    pub fn alpha(&self, b: u64) -> Result<Rational> {
        let f = self.factorize(b)?;
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for &(p, e) in f.pairs() {
            let p = p as u128;
            let hi = p.pow(e + 1);
            num *= hi - p.pow(e);
            den *= hi - 1;
        }
        let g = num_integer::gcd(num, den);
        Ok(Rational::new((num / g) as u64, (den / g) as u64))
    }

    /// φ(b)/b as an exact rational.
    pub fn phi_over_b(&self, b: u64) -> Result<Rational> {
        self.check_range(b)?;
        Ok(Rational::new(self.phi(b)?, b))
    }

    /// τ_z(m): number of divisors of `m` strictly below `z`.
    pub fn tau_below(&self, m: u64, z: f64) -> Result<u64> {
        let divs = self.divisors(m)?;
        Ok(divs.iter().take_while(|&&d| (d as f64) < z).count() as u64)
    }

    /// ∏_{p prime, p < x} (1 − 1/p), accumulated as a Kahan-compensated
    /// sum of `ln(1 − 1/p)`; good to ~12 significant digits, which the
    /// tight density inequalities downstream rely on.
    pub fn mertens_product(&self, x: u64) -> Result<f64> {
        if x < 2 {
            return Err(Error::InvalidArgument(format!(
                "mertens product needs x ≥ 2, got {x}"
            )));
        }
        if x > self.limit + 1 {
            return Err(Error::OutOfRange(format!(
                "primes below {x} exceed the sieve limit {}",
                self.limit
            )));
        }
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for p in self.primes_below(x) {
            let term = (-1.0 / p as f64).ln_1p();
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        Ok(sum.exp())
    }
}

/// Exponent of `p` in `m` (`v_p(m)`); works for any `m`, no table needed.
pub fn v_p(mut m: u64, p: u64) -> u32 {
    debug_assert!(p >= 2);
    let mut e = 0;
    while m != 0 && m % p == 0 {
        m /= p;
        e += 1;
    }
    e
}
