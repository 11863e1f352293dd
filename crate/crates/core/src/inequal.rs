//! Deciders for the three monotonicity properties of N_n(q).
//!
//! Each property at index n reduces to a strict comparison between two
//! products of powers of counts:
//!
//! | property              | holds iff                                                |
//! |-----------------------|----------------------------------------------------------|
//! | root increasing       | `N_{n+1}^n > N_n^{n+1}`                                  |
//! | root ratio decreasing | `N_{n+1}^{2n(n+2)} > N_n^{(n+1)(n+2)} N_{n+2}^{n(n+1)}`  |
//! | ratio increasing      | `N_n N_{n+2} > N_{n+1}^2`                                |
//!
//! The first two are tried with interval logarithms at increasing precision
//! and fall back to exact big-integer powering. Ties count as failures.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::count::{
    irreducible_count_capped, BigCount, CountTable, PrimePower, DEFAULT_BIT_CAP,
};
use crate::error::{domain, Error, Result};
use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    RootIncreasing,
    RootRatioDecreasing,
    RatioIncreasing,
}

impl Property {
    pub const ALL: [Property; 3] = [
        Property::RootIncreasing,
        Property::RootRatioDecreasing,
        Property::RatioIncreasing,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::RootIncreasing => "root_increasing",
            Property::RootRatioDecreasing => "root_ratio_decreasing",
            Property::RatioIncreasing => "ratio_increasing",
        }
    }

    /// Largest count index the decider at `n` reads.
    pub fn reach(&self, n: u64) -> u64 {
        match self {
            Property::RootIncreasing => n + 1,
            _ => n + 2,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Certified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Both products were materialized and compared.
    Exact {
        lhs_bits: u64,
        rhs_bits: u64,
        ordering: Ordering,
    },
    /// `difference` encloses `ln(lhs) - ln(rhs)` and excludes zero.
    Certified { difference: Interval },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub method: Method,
    pub witness: Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    pub start_precision: u32,
    pub max_precision: u32,
    pub exact_only: bool,
    pub bit_cap: u64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            start_precision: 128,
            max_precision: 8192,
            exact_only: false,
            bit_cap: DEFAULT_BIT_CAP,
        }
    }
}

impl DecideOptions {
    pub fn exact_only() -> Self {
        DecideOptions {
            exact_only: true,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOutcome {
    LhsGreater,
    RhsGreater,
    Indeterminate,
}

/// A product `∏ base^exponent`.
pub type PowerProduct<'a> = [(&'a BigUint, u64)];

fn log_of_product(terms: &PowerProduct<'_>, prec: u32) -> Interval {
    terms
        .iter()
        .filter(|&&(_, e)| e > 0)
        .fold(Interval::zero(prec), |acc, &(b, e)| {
            acc.add(&Interval::ln(b, prec).scale(&BigInt::from(e)))
        })
}

/// Enclosure of `ln(lhs) - ln(rhs)`.
pub fn log_difference(lhs: &PowerProduct<'_>, rhs: &PowerProduct<'_>, precision: u32) -> Interval {
    log_of_product(lhs, precision).sub(&log_of_product(rhs, precision))
}

/// Compares two power products through interval logarithms. Never returns a
/// strict outcome that is not proven; exact ties are always `Indeterminate`.
pub fn certified_power_compare(
    lhs: &PowerProduct<'_>,
    rhs: &PowerProduct<'_>,
    precision: u32,
) -> CompareOutcome {
    match log_difference(lhs, rhs, precision).sign() {
        Some(Ordering::Greater) => CompareOutcome::LhsGreater,
        Some(Ordering::Less) => CompareOutcome::RhsGreater,
        _ => CompareOutcome::Indeterminate,
    }
}

fn product_bits(terms: &PowerProduct<'_>) -> u64 {
    terms
        .iter()
        .map(|&(b, e)| b.bits().saturating_mul(e))
        .fold(0u64, u64::saturating_add)
}

fn exact_product(terms: &PowerProduct<'_>) -> BigUint {
    terms.iter().fold(BigUint::one(), |acc, &(b, e)| {
        let e = u32::try_from(e).expect("exponent checked against bit cap");
        acc * b.pow(e)
    })
}

/// Exact comparison; fails with a capacity error if either product would
/// exceed the bit cap.
pub fn exact_power_compare(
    lhs: &PowerProduct<'_>,
    rhs: &PowerProduct<'_>,
    bit_cap: u64,
) -> Result<(Ordering, u64, u64)> {
    let needed = product_bits(lhs).max(product_bits(rhs));
    if needed > bit_cap {
        return Err(Error::Capacity {
            what: "exact power product",
            needed,
            cap: bit_cap,
        });
    }
    let (a, b) = (exact_product(lhs), exact_product(rhs));
    Ok((a.cmp(&b), a.bits(), b.bits()))
}

/// Decides `lhs > rhs` strictly: certified first with precision doubling,
/// then exact.
pub fn decide_greater(
    lhs: &PowerProduct<'_>,
    rhs: &PowerProduct<'_>,
    opts: &DecideOptions,
) -> Result<Verdict> {
    if !opts.exact_only {
        let mut prec = opts.start_precision.max(32);
        while prec <= opts.max_precision {
            let difference = log_difference(lhs, rhs, prec);
            if let Some(ord) = difference.sign() {
                return Ok(Verdict {
                    holds: ord == Ordering::Greater,
                    method: Method::Certified,
                    witness: Witness::Certified { difference },
                });
            }
            prec = prec.saturating_mul(2);
        }
    }
    exact_verdict(lhs, rhs, opts.bit_cap)
}

fn exact_verdict(lhs: &PowerProduct<'_>, rhs: &PowerProduct<'_>, bit_cap: u64) -> Result<Verdict> {
    let (ordering, lhs_bits, rhs_bits) = exact_power_compare(lhs, rhs, bit_cap)?;
    Ok(Verdict {
        holds: ordering == Ordering::Greater,
        method: Method::Exact,
        witness: Witness::Exact {
            lhs_bits,
            rhs_bits,
            ordering,
        },
    })
}

/// Exponents `(2n(n+2), (n+1)(n+2), n(n+1))` of the root-ratio comparison.
pub fn root_ratio_exponents(n: u64) -> Result<(u64, u64, u64)> {
    let too_big = || domain(format!("root-ratio exponents overflow at n = {n}"));
    let a = n
        .checked_mul(n.checked_add(2).ok_or_else(too_big)?)
        .and_then(|v| v.checked_mul(2))
        .ok_or_else(too_big)?;
    let b = (n + 1).checked_mul(n + 2).ok_or_else(too_big)?;
    let c = n.checked_mul(n + 1).ok_or_else(too_big)?;
    if (b as u128 + c as u128) != a as u128 + 2 {
        return Err(Error::Internal(format!("exponent identity broken at n = {n}")));
    }
    Ok((a, b, c))
}

fn count_at(table: &CountTable, n: u64) -> Result<&BigUint> {
    table.get(n).map(BigCount::value).ok_or_else(|| {
        domain(format!(
            "count table for q = {} stops at {}, index {n} needed",
            table.q(),
            table.n_max()
        ))
    })
}

/// Decides `property` at index `n` using counts from `table`, which must
/// reach `property.reach(n)`.
pub fn decide(property: Property, table: &CountTable, n: u64, opts: &DecideOptions) -> Result<Verdict> {
    if n < 1 {
        return Err(domain("index n must be at least 1"));
    }
    let a = count_at(table, n)?;
    let b = count_at(table, n + 1)?;
    let c = match property {
        Property::RootIncreasing => None,
        _ => Some(count_at(table, n + 2)?),
    };
    decide_counts(property, n, a, b, c, opts)
}

fn decide_counts(
    property: Property,
    n: u64,
    a: &BigUint,
    b: &BigUint,
    c: Option<&BigUint>,
    opts: &DecideOptions,
) -> Result<Verdict> {
    let third = || c.ok_or_else(|| Error::Internal("missing N_{n+2}".into()));
    match property {
        Property::RootIncreasing => decide_greater(&[(b, n)], &[(a, n + 1)], opts),
        Property::RootRatioDecreasing => {
            let (eb, ea, ec) = root_ratio_exponents(n)?;
            decide_greater(&[(b, eb)], &[(a, ea), (third()?, ec)], opts)
        }
        Property::RatioIncreasing => {
            exact_verdict(&[(a, 1), (third()?, 1)], &[(b, 2)], opts.bit_cap)
        }
    }
}

fn decide_at(property: Property, n: u64, q: &PrimePower, opts: &DecideOptions) -> Result<Verdict> {
    if n < 1 {
        return Err(domain("index n must be at least 1"));
    }
    let count = |m: u64| irreducible_count_capped(m, q, opts.bit_cap).map(|c| c.0);
    let (a, b) = (count(n)?, count(n + 1)?);
    let c = match property {
        Property::RootIncreasing => None,
        _ => Some(count(n + 2)?),
    };
    decide_counts(property, n, &a, &b, c.as_ref(), opts)
}

/// Is `N_{n+1}^{1/(n+1)} > N_n^{1/n}`?
pub fn root_increasing_at(n: u64, q: &PrimePower, opts: &DecideOptions) -> Result<Verdict> {
    decide_at(Property::RootIncreasing, n, q, opts)
}

/// Is the ratio of consecutive roots at n strictly larger than at n+1?
pub fn root_ratio_decreasing_at(n: u64, q: &PrimePower, opts: &DecideOptions) -> Result<Verdict> {
    decide_at(Property::RootRatioDecreasing, n, q, opts)
}

/// Is `N_{n+1}^2 < N_n N_{n+2}`? Always exact.
pub fn ratio_increasing_at(n: u64, q: &PrimePower, opts: &DecideOptions) -> Result<Verdict> {
    decide_at(Property::RatioIncreasing, n, q, opts)
}

/// Rigorous enclosure of
/// `Δ_n(q) = 2 ln N_{n+1} / (n+1) - ln N_n / n - ln N_{n+2} / (n+2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaValue {
    pub n: u64,
    pub q: u64,
    pub enclosure: Interval,
}

impl DeltaValue {
    pub fn lower(&self) -> BigRational {
        self.enclosure.lower()
    }

    pub fn upper(&self) -> BigRational {
        self.enclosure.upper()
    }
}

pub fn delta_bounds(n: u64, q: &PrimePower, precision: u32) -> Result<DeltaValue> {
    if precision < 32 {
        return Err(domain("delta_bounds: precision must be at least 32 bits"));
    }
    if n < 1 {
        return Err(domain("delta_bounds: n must be at least 1"));
    }
    let count = |m: u64| irreducible_count_capped(m, q, DEFAULT_BIT_CAP).map(|c| c.0);
    delta_from_counts(n, q.q(), &count(n)?, &count(n + 1)?, &count(n + 2)?, precision)
}

pub fn delta_from_table(table: &CountTable, n: u64, precision: u32) -> Result<DeltaValue> {
    if n < 1 {
        return Err(domain("delta_bounds: n must be at least 1"));
    }
    let (a, b, c) = (count_at(table, n)?, count_at(table, n + 1)?, count_at(table, n + 2)?);
    delta_from_counts(n, table.q().q(), a, b, c, precision)
}

fn delta_from_counts(
    n: u64,
    q: u64,
    a: &BigUint,
    b: &BigUint,
    c: &BigUint,
    precision: u32,
) -> Result<DeltaValue> {
    let (eb, ea, ec) = root_ratio_exponents(n)?;
    let numerator = log_difference(&[(b, eb)], &[(a, ea), (c, ec)], precision);
    let denom = BigInt::from(n) * BigInt::from(n + 1) * BigInt::from(n + 2);
    Ok(DeltaValue {
        n,
        q,
        enclosure: numerator.div(&denom),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_table;
    use num_traits::Zero;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn root_increasing_examples() {
        let o = DecideOptions::default();
        assert!(!root_increasing_at(1, &pp(2), &o).unwrap().holds);
        assert!(root_increasing_at(2, &pp(2), &o).unwrap().holds);
        assert!(root_increasing_at(2, &pp(3), &o).unwrap().holds);
        let exact = root_increasing_at(2, &pp(3), &DecideOptions::exact_only()).unwrap();
        assert_eq!(
            exact.witness,
            Witness::Exact {
                lhs_bits: 7,
                rhs_bits: 5,
                ordering: Ordering::Greater
            }
        );
    }

    #[test]
    fn root_ratio_examples() {
        let o = DecideOptions::default();
        assert!(root_ratio_decreasing_at(14, &pp(2), &o).unwrap().holds);
        assert!(!root_ratio_decreasing_at(13, &pp(2), &o).unwrap().holds);
        assert!(root_ratio_decreasing_at(8, &pp(3), &o).unwrap().holds);
        assert!(root_ratio_decreasing_at(6, &pp(4), &o).unwrap().holds);
        let e = DecideOptions::exact_only();
        assert!(root_ratio_decreasing_at(14, &pp(2), &e).unwrap().holds);
        assert!(!root_ratio_decreasing_at(13, &pp(2), &e).unwrap().holds);
    }

    #[test]
    fn ratio_increasing_examples() {
        let o = DecideOptions::default();
        let v = ratio_increasing_at(2, &pp(2), &o).unwrap();
        assert!(!v.holds);
        assert_eq!(v.method, Method::Exact);
        assert!(ratio_increasing_at(3, &pp(2), &o).unwrap().holds);
        assert!(ratio_increasing_at(2, &pp(9), &o).unwrap().holds);
    }

    #[test]
    fn n_zero_is_rejected() {
        let o = DecideOptions::default();
        assert!(matches!(root_increasing_at(0, &pp(2), &o), Err(Error::Domain(_))));
        assert!(delta_bounds(0, &pp(2), 64).is_err());
        assert!(delta_bounds(3, &pp(2), 16).is_err());
    }

    #[test]
    fn certified_compare_examples() {
        let (two, three, eight) = (b(2), b(3), b(8));
        for prec in [32, 64, 128, 1024, 4096] {
            assert_eq!(
                certified_power_compare(&[(&two, 3)], &[(&eight, 1)], prec),
                CompareOutcome::Indeterminate
            );
        }
        assert_eq!(
            certified_power_compare(&[(&three, 2)], &[(&two, 3)], 64),
            CompareOutcome::LhsGreater
        );
        assert_eq!(
            certified_power_compare(&[(&two, 3)], &[(&three, 2)], 64),
            CompareOutcome::RhsGreater
        );
        let t = count_table(&pp(2), 16).unwrap();
        let (eb, ea, ec) = root_ratio_exponents(14).unwrap();
        let (n14, n15, n16) = (t.get(14).unwrap().value(), t.get(15).unwrap().value(), t.get(16).unwrap().value());
        assert_eq!(
            certified_power_compare(&[(n15, eb)], &[(n14, ea), (n16, ec)], 128),
            CompareOutcome::LhsGreater
        );
        let (ord, _, _) = exact_power_compare(&[(n15, eb)], &[(n14, ea), (n16, ec)], 1 << 26).unwrap();
        assert_eq!(ord, Ordering::Greater);
    }

    #[test]
    fn exact_ties_fall_back_and_fail_strictness() {
        let (two, eight) = (b(2), b(8));
        let v = decide_greater(&[(&two, 3)], &[(&eight, 1)], &DecideOptions::default()).unwrap();
        assert!(!v.holds);
        assert_eq!(v.method, Method::Exact);
        assert!(matches!(v.witness, Witness::Exact { ordering: Ordering::Equal, .. }));
    }

    #[test]
    fn exact_path_respects_bit_cap() {
        let opts = DecideOptions {
            bit_cap: 1000,
            ..DecideOptions::exact_only()
        };
        let err = root_ratio_decreasing_at(40, &pp(2), &opts).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn exponent_identity_holds() {
        for n in 1..=100_000u64 {
            let (a, b, c) = root_ratio_exponents(n).unwrap();
            assert_eq!(b + c - a, 2);
        }
        assert!(root_ratio_exponents(u64::MAX / 2).is_err());
    }

    #[test]
    fn delta_examples() {
        let below = delta_bounds(13, &pp(2), 128).unwrap();
        assert_eq!(below.enclosure.sign(), Some(Ordering::Less));
        let above = delta_bounds(14, &pp(2), 128).unwrap();
        assert_eq!(above.enclosure.sign(), Some(Ordering::Greater));
        let q16 = delta_bounds(4, &pp(16), 128).unwrap();
        assert!(q16.lower() > BigRational::zero());
    }

    #[test]
    fn delta_narrows_with_precision() {
        let coarse = delta_bounds(30, &pp(3), 64).unwrap();
        let fine = delta_bounds(30, &pp(3), 512).unwrap();
        assert!(fine.upper() - fine.lower() < coarse.upper() - coarse.lower());
    }

    #[test]
    fn delta_sign_matches_root_ratio() {
        for q in [2, 3, 4, 5, 7] {
            let t = count_table(&pp(q), 62).unwrap();
            for n in 1..=60 {
                let v = decide(Property::RootRatioDecreasing, &t, n, &DecideOptions::default()).unwrap();
                let d = delta_from_table(&t, n, 256).unwrap();
                let expected = if v.holds { Ordering::Greater } else { Ordering::Less };
                assert_eq!(d.enclosure.sign(), Some(expected), "q = {q}, n = {n}");
            }
        }
    }
}
