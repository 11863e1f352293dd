//! Elementary integer arithmetic: smallest-prime-factor sieve, factorization,
//! the Möbius function, divisors and prime-power decomposition.
//!
//! All inputs fit in a machine word. Factorization below [`SIEVE_LIMIT`] is a
//! table lookup; above it we fall back to trial division, which is plenty for
//! polynomial degrees and field orders.

use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

/// Upper bound of the shared smallest-prime-factor table.
pub const SIEVE_LIMIT: u32 = 1_000_000;

/// Smallest-prime-factor table for `0..=limit`. Entry `i` is the least prime
/// dividing `i` (0 for `i < 2`).
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u32) -> Self {
        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        let mut primes = Vec::new();
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m >= len {
                    break;
                }
                spf[m] = p;
            }
        }
        SpfSieve { spf, primes }
    }

    pub fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Least prime factor of `n`, if `2 <= n <= limit`.
    pub fn lookup(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit() {
            return None;
        }
        Some(self.spf[n as usize] as u64)
    }
}

/// The process-wide sieve, built on first use and read-only afterwards.
pub fn shared_sieve() -> &'static SpfSieve {
    static SIEVE: OnceLock<SpfSieve> = OnceLock::new();
    SIEVE.get_or_init(|| SpfSieve::new(SIEVE_LIMIT))
}

/// Prime factorization `n = ∏ prime^exponent`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The least prime divisor, `None` for `n = 1`.
    pub fn least_prime(&self) -> Option<u64> {
        self.factors.first().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn divisor_count(&self) -> usize {
        self.factors.iter().map(|&(_, e)| e as usize + 1).product()
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 1 {
        return Err(domain("factorize: n must be at least 1"));
    }
    let sieve = shared_sieve();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64| match factors.last_mut() {
        Some((last, e)) if *last == p => *e += 1,
        _ => factors.push((p, 1)),
    };
    let mut m = n;
    if m > sieve.limit() {
        for &p in sieve.primes() {
            let p = p as u64;
            if p * p > m {
                break;
            }
            while m % p == 0 {
                push(p);
                m /= p;
            }
            if m <= sieve.limit() {
                break;
            }
        }
    }
    if m > sieve.limit() {
        if is_prime(m) {
            push(m);
            m = 1;
        } else {
            // composite cofactor with every prime factor above the sieve
            let mut p = sieve.limit() + 1;
            while p.saturating_mul(p) <= m {
                while m % p == 0 {
                    push(p);
                    m /= p;
                }
                p += 1;
            }
            if m > 1 {
                push(m);
                m = 1;
            }
        }
    }
    while m > 1 {
        let p = sieve.lookup(m).expect("cofactor within sieve range");
        push(p);
        m /= p;
    }
    Ok(Factorization { n, factors })
}

/// The least prime dividing `n`.
pub fn least_prime_factor(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(domain(format!("least_prime_factor: n = {n} < 2")));
    }
    if let Some(p) = shared_sieve().lookup(n) {
        return Ok(p);
    }
    Ok(factorize(n)?.least_prime().expect("n >= 2 has a prime factor"))
}

/// Möbius function μ(d).
pub fn mobius(d: u64) -> Result<i8> {
    if d < 1 {
        return Err(domain("mobius: d must be at least 1"));
    }
    let f = factorize(d)?;
    if !f.is_squarefree() {
        return Ok(0);
    }
    Ok(if f.factors().len() % 2 == 0 { 1 } else { -1 })
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n < 1 {
        return Err(domain("divisors: n must be at least 1"));
    }
    let f = factorize(n)?;
    let mut out = Vec::with_capacity(f.divisor_count());
    out.push(1u64);
    for &(p, e) in f.factors() {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest `r` with `r^k <= n`.
fn integer_root(n: u64, k: u32) -> u64 {
    if k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    let pow_le = |r: u64| match r.checked_pow(k) {
        Some(v) => v <= n,
        None => false,
    };
    while r > 0 && !pow_le(r) {
        r -= 1;
    }
    while pow_le(r + 1) {
        r += 1;
    }
    r
}

/// Write `q = p^k` with `p` prime.
pub fn prime_power_decompose(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(domain(format!("prime_power_decompose: q = {q} < 2")));
    }
    // Try the largest exponent first so that e.g. 64 = 2^6, not 8^2.
    for k in (1..=63u32).rev() {
        let r = integer_root(q, k);
        if r >= 2 && r.checked_pow(k) == Some(q) && is_prime(r) {
            return Ok((r, k));
        }
    }
    Err(Error::NotPrimePower(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn least_prime_factor_examples() {
        assert_eq!(least_prime_factor(2).unwrap(), 2);
        assert_eq!(least_prime_factor(15).unwrap(), 3);
        assert_eq!(least_prime_factor(49).unwrap(), 7);
        assert!(matches!(least_prime_factor(1), Err(Error::Domain(_))));
        assert!(least_prime_factor(0).is_err());
    }

    #[test]
    fn least_prime_factor_above_sieve() {
        assert_eq!(least_prime_factor(1_000_003).unwrap(), 1_000_003);
        assert_eq!(least_prime_factor(1_000_003 * 1_000_033).unwrap(), 1_000_003);
        assert_eq!(least_prime_factor(3 * 1_000_003).unwrap(), 3);
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(12).unwrap(), 0);
        assert_eq!(mobius(30).unwrap(), -1);
        assert_eq!(mobius(6).unwrap(), 1);
        assert!(mobius(0).is_err());
    }

    #[test]
    fn divisors_examples() {
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(7).unwrap(), vec![1, 7]);
        assert!(divisors(0).is_err());
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(prime_power_decompose(8).unwrap(), (2, 3));
        assert_eq!(prime_power_decompose(9).unwrap(), (3, 2));
        assert_eq!(prime_power_decompose(6), Err(Error::NotPrimePower(6)));
        assert_eq!(prime_power_decompose(12), Err(Error::NotPrimePower(12)));
        assert!(matches!(prime_power_decompose(1), Err(Error::Domain(_))));
        assert_eq!(prime_power_decompose(64).unwrap(), (2, 6));
        assert_eq!(prime_power_decompose(1 << 62).unwrap(), (2, 62));
    }

    #[test]
    fn mobius_sum_identity() {
        for n in 1..=10_000u64 {
            let s: i64 = divisors(n)
                .unwrap()
                .into_iter()
                .map(|d| mobius(d).unwrap() as i64)
                .sum();
            assert_eq!(s, (n == 1) as i64, "n = {n}");
        }
    }

    #[test]
    fn prime_powers_up_to_97() {
        for p in (2..=97u64).filter(|&p| is_prime(p)) {
            let mut pk = p;
            let mut k = 1;
            while pk <= 1_000_000_000 {
                assert_eq!(prime_power_decompose(pk).unwrap(), (p, k));
                pk *= p;
                k += 1;
            }
        }
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let sieve = shared_sieve();
        for n in 0..100_000u64 {
            assert_eq!(is_prime(n), sieve.lookup(n) == Some(n), "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
    }

    proptest! {
        #[test]
        fn least_prime_factor_is_least(n in 2u64..2_000_000) {
            let p = least_prime_factor(n).unwrap();
            prop_assert_eq!(n % p, 0);
            prop_assert!(is_prime(p));
            for d in 2..p.min(2000) {
                prop_assert!(n % d != 0);
            }
        }

        #[test]
        fn factorization_round_trips(n in 1u64..u32::MAX as u64) {
            let f = factorize(n).unwrap();
            let prod: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(prod, n);
            prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.factors().iter().all(|&(p, e)| is_prime(p) && e >= 1));
            prop_assert_eq!(divisors(n).unwrap().len(), f.divisor_count());
        }

        #[test]
        fn divisors_are_exact(n in 1u64..200_000) {
            let ds = divisors(n).unwrap();
            let brute: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            prop_assert_eq!(ds, brute);
        }
    }
}
