//! Exact counts N_n(q) of monic irreducible degree-n polynomials over F_q.
//!
//! The count is evaluated through Möbius inversion,
//! `N_n(q) = (1/n) Σ_{d | n} μ(d) q^{n/d}`, for any integer base `q >= 2`.
//! Only prime-power bases have the combinatorial meaning; other bases are
//! admitted through [`PrimePower::any_base`] because the underlying
//! polynomial identities hold for every integer.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{domain, Error, Result};

/// Default cap on the bit length of any intermediate integer.
pub const DEFAULT_BIT_CAP: u64 = 1 << 26;

/// A field order `q = p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    q: u64,
    decomposition: Option<(u64, u32)>,
}

impl PrimePower {
    /// Validates that `q` is a prime power.
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = arith::prime_power_decompose(q)?;
        Ok(PrimePower {
            q,
            decomposition: Some((p, k)),
        })
    }

    /// Permissive constructor: any integer `q >= 2`. The result is marked
    /// unvalidated when `q` is not a prime power.
    pub fn any_base(q: u64) -> Result<Self> {
        match arith::prime_power_decompose(q) {
            Ok(pk) => Ok(PrimePower {
                q,
                decomposition: Some(pk),
            }),
            Err(Error::NotPrimePower(_)) => Ok(PrimePower {
                q,
                decomposition: None,
            }),
            Err(e) => Err(e),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Characteristic `p`, when `q` is a prime power.
    pub fn p(&self) -> Option<u64> {
        self.decomposition.map(|(p, _)| p)
    }

    /// Extension degree `k`, when `q` is a prime power.
    pub fn k(&self) -> Option<u32> {
        self.decomposition.map(|(_, k)| k)
    }

    pub fn validated(&self) -> bool {
        self.decomposition.is_some()
    }

    pub fn big(&self) -> BigUint {
        BigUint::from(self.q)
    }

    /// Upper estimate of the bit length of `q^e`.
    pub fn power_bits(&self, e: u64) -> u64 {
        ((e as f64) * (self.q as f64).log2()).ceil() as u64 + 1
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Arbitrary-precision nonnegative count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn check_cap(q: &PrimePower, e: u64, cap: u64) -> Result<()> {
    let needed = q.power_bits(e);
    if needed > cap {
        return Err(Error::Capacity {
            what: "q^n",
            needed,
            cap,
        });
    }
    Ok(())
}

/// Möbius sum divided by `n`, with `pow(m)` returning `q^m`.
fn mobius_count(n: u64, pow: impl Fn(u64) -> BigUint) -> Result<BigCount> {
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for d in arith::divisors(n)? {
        match arith::mobius(d)? {
            1 => plus += pow(n / d),
            -1 => minus += pow(n / d),
            _ => {}
        }
    }
    if plus < minus {
        return Err(Error::Internal(format!("negative Möbius sum at n = {n}")));
    }
    let (count, rem) = (plus - minus).div_rem(&BigUint::from(n));
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "Möbius sum not divisible by n = {n}"
        )));
    }
    if count.is_zero() {
        return Err(Error::Internal(format!("zero irreducible count at n = {n}")));
    }
    Ok(BigCount(count))
}

/// N_n(q) via Möbius inversion, with the default bit cap.
pub fn irreducible_count(n: u64, q: &PrimePower) -> Result<BigCount> {
    irreducible_count_capped(n, q, DEFAULT_BIT_CAP)
}

pub fn irreducible_count_capped(n: u64, q: &PrimePower, bit_cap: u64) -> Result<BigCount> {
    if n < 1 {
        return Err(domain("irreducible_count: n must be at least 1"));
    }
    check_cap(q, n, bit_cap)?;
    let base = q.big();
    mobius_count(n, |m| base.pow(m as u32))
}

/// The explicit polynomial-in-q forms of N_1 through N_7.
pub fn closed_form_count(n: u64, q: &PrimePower) -> Result<BigCount> {
    let x = BigInt::from(q.q());
    let pw = |e: u32| x.pow(e);
    let one = BigInt::one();
    let (num, den): (BigInt, u32) = match n {
        1 => (x.clone(), 1),
        2 => (&x * (&x - &one), 2),
        3 => (&x * (pw(2) - &one), 3),
        4 => (pw(2) * (pw(2) - &one), 4),
        5 => (&x * (pw(4) - &one), 5),
        6 => (pw(6) - pw(3) - pw(2) + &x, 6),
        7 => (pw(7) - &x, 7),
        _ => {
            return Err(domain(format!(
                "closed_form_count: n = {n} outside [1, 7]"
            )))
        }
    };
    let (value, rem) = num.div_rem(&BigInt::from(den));
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "closed form for n = {n} not integral at q = {q}"
        )));
    }
    value
        .to_biguint()
        .map(BigCount)
        .ok_or_else(|| Error::Internal("negative closed form".into()))
}

/// N_1(q), ..., N_{n_max}(q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    q: PrimePower,
    counts: Vec<BigCount>,
}

impl CountTable {
    pub fn q(&self) -> &PrimePower {
        &self.q
    }

    pub fn n_max(&self) -> u64 {
        self.counts.len() as u64
    }

    /// N_n(q) for `1 <= n <= n_max`.
    pub fn get(&self, n: u64) -> Option<&BigCount> {
        if n == 0 {
            return None;
        }
        self.counts.get(n as usize - 1)
    }

    pub fn counts(&self) -> &[BigCount] {
        &self.counts
    }

    /// Checks `Σ_{d | n} d · N_d(q) = q^n` for every `n` in the table.
    pub fn satisfies_inversion_identity(&self) -> bool {
        let q = self.q.big();
        let mut qn = BigUint::one();
        for n in 1..=self.n_max() {
            qn *= &q;
            let total: BigUint = arith::divisors(n)
                .expect("n >= 1")
                .into_iter()
                .map(|d| BigUint::from(d) * self.get(d).expect("d <= n").value())
                .sum();
            if total != qn {
                return false;
            }
        }
        true
    }
}

/// Table of N_n(q) for `n = 1..=n_max` with the default bit cap.
pub fn count_table(q: &PrimePower, n_max: u64) -> Result<CountTable> {
    count_table_capped(q, n_max, DEFAULT_BIT_CAP)
}

pub fn count_table_capped(q: &PrimePower, n_max: u64, bit_cap: u64) -> Result<CountTable> {
    if n_max < 1 {
        return Err(domain("count_table: n_max must be at least 1"));
    }
    check_cap(q, n_max, bit_cap)?;
    let base = q.big();
    let mut powers = Vec::with_capacity(n_max as usize + 1);
    powers.push(BigUint::one());
    for m in 1..=n_max as usize {
        let next = &powers[m - 1] * &base;
        powers.push(next);
    }
    let counts = (1..=n_max)
        .map(|n| mobius_count(n, |m| powers[m as usize].clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CountTable { q: *q, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    fn small(c: &BigCount) -> u64 {
        u64::try_from(c.value()).unwrap()
    }

    #[test]
    fn prime_power_validation() {
        let q = pp(9);
        assert_eq!((q.p(), q.k(), q.validated()), (Some(3), Some(2), true));
        assert_eq!(PrimePower::new(6), Err(Error::NotPrimePower(6)));
        assert!(matches!(PrimePower::new(1), Err(Error::Domain(_))));
        let six = PrimePower::any_base(6).unwrap();
        assert!(!six.validated());
        assert_eq!(six.p(), None);
        assert!(PrimePower::any_base(7).unwrap().validated());
        assert!(PrimePower::any_base(0).is_err());
    }

    #[test]
    fn irreducible_count_examples() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            assert_eq!(small(&irreducible_count(1, &pp(q)).unwrap()), q);
        }
        assert_eq!(small(&irreducible_count(2, &pp(2)).unwrap()), 1);
        assert_eq!(small(&irreducible_count(6, &pp(2)).unwrap()), 9);
        assert_eq!(small(&irreducible_count(3, &pp(3)).unwrap()), 8);
        assert!(matches!(
            irreducible_count(0, &pp(2)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(small(&closed_form_count(4, &pp(3)).unwrap()), 18);
        assert_eq!(small(&closed_form_count(2, &pp(4)).unwrap()), 6);
        assert_eq!(small(&closed_form_count(7, &pp(2)).unwrap()), 18);
        assert!(closed_form_count(0, &pp(2)).is_err());
        assert!(closed_form_count(8, &pp(2)).is_err());
    }

    #[test]
    fn count_table_examples() {
        let t = count_table(&pp(2), 4).unwrap();
        assert_eq!(t.counts().iter().map(small).collect::<Vec<_>>(), [2, 1, 2, 3]);
        let t = count_table(&pp(3), 2).unwrap();
        assert_eq!(t.counts().iter().map(small).collect::<Vec<_>>(), [3, 3]);
        let t = count_table(&pp(2), 1).unwrap();
        assert_eq!(t.counts().iter().map(small).collect::<Vec<_>>(), [2]);
        assert!(count_table(&pp(2), 0).is_err());
        assert_eq!(t.get(0), None);
        assert_eq!(t.get(2), None);
    }

    #[test]
    fn bit_cap_guards_tables() {
        let err = count_table_capped(&pp(2), 100, 64).unwrap_err();
        assert!(matches!(err, Error::Capacity { cap: 64, .. }));
        assert!(irreducible_count_capped(100, &pp(2), 64).is_err());
        assert!(count_table_capped(&pp(2), 60, 64).is_ok());
    }

    #[test]
    fn exact_division_and_inversion_on_grid() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let t = count_table(&pp(q), 500).unwrap();
            assert!(t.satisfies_inversion_identity(), "q = {q}");
            for n in [1u64, 2, 12, 97, 360, 500] {
                assert_eq!(t.get(n).unwrap(), &irreducible_count(n, &pp(q)).unwrap());
            }
        }
    }

    #[test]
    fn closed_forms_agree_for_all_integer_bases() {
        for q in 2..=100 {
            let base = PrimePower::any_base(q).unwrap();
            for n in 1..=7 {
                assert_eq!(
                    closed_form_count(n, &base).unwrap(),
                    irreducible_count(n, &base).unwrap(),
                    "n = {n}, q = {q}"
                );
            }
        }
    }

    #[test]
    fn non_prime_power_bases_still_integral() {
        let six = PrimePower::any_base(6).unwrap();
        let t = count_table(&six, 60).unwrap();
        assert!(t.satisfies_inversion_identity());
    }
}
