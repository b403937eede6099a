//! Prime generation for Euler products and Dirichlet polynomials.

use crate::error::{err, ErrorKind, Result};

/// Documented default sieve limit for standalone table construction.
pub const DEFAULT_SIEVE_LIMIT: u64 = 100_000_000;

const SEGMENT_BYTES: usize = 1 << 20;

/// Ordered primes up to a fixed limit. Immutable after construction and safe
/// to share across worker threads.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

/// A prime power `p^n <= Y` together with its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePower {
    pub p: u64,
    pub n: u32,
    pub value: u64,
}

impl PrimeTable {
    /// Segmented sieve of Eratosthenes over `[2, limit]`.
    pub fn sieve(limit: u64) -> Result<Self> {
        if !(2..=1_000_000_000).contains(&limit) {
            return Err(err!(
                "prime_table",
                "sieve",
                ErrorKind::Config(format!("limit {limit} outside [2, 1e9]"))
            ));
        }
        let root = (limit as f64).sqrt() as u64 + 1;
        let base = simple_sieve(root.max(3));
        let mut primes: Vec<u64> = Vec::new();
        if limit >= 2 {
            primes.push(2);
        }

        // Odd-only segments: bit i of a segment starting at `lo` encodes lo + 2i.
        let top = if limit % 2 == 0 { limit - 1 } else { limit };
        let mut lo: u64 = 3;
        let mut composite = vec![false; SEGMENT_BYTES];
        while lo <= top {
            let hi = (lo + 2 * SEGMENT_BYTES as u64 - 1).min(top);
            let len = ((hi - lo) / 2 + 1) as usize;
            composite[..len].fill(false);
            for &p in base.iter().skip(1) {
                // odd base primes only
                if p * p > hi {
                    break;
                }
                let mut start = p * p;
                if start < lo {
                    let k = (lo + p - 1) / p;
                    let k = if k % 2 == 0 { k + 1 } else { k };
                    start = k * p;
                }
                let mut j = ((start - lo) / 2) as usize;
                while j < len {
                    composite[j] = true;
                    j += p as usize;
                }
            }
            for (i, &c) in composite[..len].iter().enumerate() {
                if !c {
                    primes.push(lo + 2 * i as u64);
                }
            }
            lo = hi + 2;
        }
        Ok(PrimeTable { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primes `p <= bound` as a sub-slice.
    pub fn primes_upto(&self, bound: f64) -> Result<&[u64]> {
        if bound > self.limit as f64 {
            return Err(err!(
                "prime_table",
                "primes_upto",
                ErrorKind::InsufficientTable(format!(
                    "bound {bound} exceeds table limit {}",
                    self.limit
                ))
            ));
        }
        let cut = self.primes.partition_point(|&p| (p as f64) <= bound);
        Ok(&self.primes[..cut])
    }

    /// All `(p, n)` with `p^n <= y`, each exactly once, sorted by value.
    pub fn prime_powers(&self, y: f64) -> Result<Vec<PrimePower>> {
        if y > self.limit as f64 {
            return Err(err!(
                "prime_table",
                "prime_powers",
                ErrorKind::InsufficientTable(format!(
                    "Y {y} exceeds table limit {}",
                    self.limit
                ))
            ));
        }
        let ycap = y.floor() as u64;
        let mut out: Vec<PrimePower> = Vec::new();
        for &p in &self.primes {
            if p > ycap {
                break;
            }
            let mut v = p;
            let mut n = 1u32;
            loop {
                out.push(PrimePower { p, n, value: v });
                if v > ycap / p {
                    break;
                }
                v *= p;
                n += 1;
            }
        }
        out.sort_by_key(|pp| pp.value);
        Ok(out)
    }
}

/// Plain sieve for the base primes up to `n`.
fn simple_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut is_comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !is_comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                is_comp[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_trial(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn sieve_10() {
        let t = PrimeTable::sieve(10).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
    }

    #[test]
    fn sieve_boundary() {
        let t = PrimeTable::sieve(2).unwrap();
        assert_eq!(t.primes(), &[2]);
    }

    #[test]
    fn sieve_100_count_matches_trial_division() {
        let t = PrimeTable::sieve(100).unwrap();
        let brute: Vec<u64> = (2..=100).filter(|&n| is_prime_trial(n)).collect();
        assert_eq!(t.primes(), brute.as_slice());
        assert_eq!(t.len(), 25);
    }

    #[test]
    fn sieve_limit_out_of_range() {
        assert!(PrimeTable::sieve(1).is_err());
        assert!(PrimeTable::sieve(2_000_000_000).is_err());
    }

    #[test]
    fn segmented_matches_trial_division_to_30k() {
        let t = PrimeTable::sieve(30_000).unwrap();
        for &p in t.primes() {
            assert!(is_prime_trial(p), "{p} not prime");
        }
        let count = (2..=30_000u64).filter(|&n| is_prime_trial(n)).count();
        assert_eq!(t.len(), count);
    }

    #[test]
    fn prefix_property() {
        let big = PrimeTable::sieve(5000).unwrap();
        for limit in [2u64, 3, 10, 97, 100, 1234, 4999] {
            let small = PrimeTable::sieve(limit).unwrap();
            assert_eq!(small.primes(), &big.primes()[..small.len()]);
        }
    }

    #[test]
    fn prime_powers_y9() {
        let t = PrimeTable::sieve(100).unwrap();
        let pp = t.prime_powers(9.0).unwrap();
        let got: Vec<(u64, u32)> = pp.iter().map(|q| (q.p, q.n)).collect();
        assert_eq!(got, vec![(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]);
    }

    #[test]
    fn prime_powers_y2() {
        let t = PrimeTable::sieve(10).unwrap();
        let pp = t.prime_powers(2.0).unwrap();
        assert_eq!(pp.len(), 1);
        assert_eq!((pp[0].p, pp[0].n, pp[0].value), (2, 1, 2));
    }

    #[test]
    fn prime_powers_y30_count() {
        let t = PrimeTable::sieve(100).unwrap();
        // brute force: all p^n <= 30
        let mut brute = 0;
        for p in 2..=30u64 {
            if !is_prime_trial(p) {
                continue;
            }
            let mut v = p;
            while v <= 30 {
                brute += 1;
                if v > 30 / p {
                    break;
                }
                v *= p;
            }
        }
        assert_eq!(t.prime_powers(30.0).unwrap().len(), brute);
        // 2,3,4,5,7,8,9,11,13,16,17,19,23,25,27,29
        assert_eq!(brute, 16);
    }

    #[test]
    fn prime_powers_insufficient_table() {
        let t = PrimeTable::sieve(10).unwrap();
        assert!(t.prime_powers(11.0).is_err());
    }

    #[test]
    fn inverse_square_sum_matches_trial_division_oracle() {
        let t = PrimeTable::sieve(1_000_000).unwrap();
        let by_table: f64 = t.primes().iter().map(|&p| 1.0 / (p as f64 * p as f64)).sum();
        // truncated prime zeta at 2, recomputed with primality from trial division
        let mut direct = 0.0;
        for n in 2..=1_000_000u64 {
            if is_prime_trial(n) {
                direct += 1.0 / (n as f64 * n as f64);
            }
        }
        assert!((by_table - direct).abs() < 1e-14);
    }
}
