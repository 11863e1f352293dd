//! Exact checks of the quantitative bounds on N_n(q).
//!
//! Rational inequalities are compared after clearing denominators; the only
//! irrational quantities (logarithms) go through [`Interval`].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::least_prime_factor;
use crate::count::{irreducible_count, BigCount, PrimePower};
use crate::error::{domain, Result};
use crate::interval::Interval;

fn int(v: u64) -> BigInt {
    BigInt::from(v)
}

fn require_n(n: u64, min: u64, what: &str) -> Result<()> {
    if n < min {
        return Err(domain(format!("{what}: n = {n} must be at least {min}")));
    }
    Ok(())
}

/// `L_n(q) = (q-1) q^{n - n/p(n) - 1}`.
pub fn l_value(n: u64, q: &PrimePower) -> Result<BigCount> {
    require_n(n, 2, "L")?;
    let p = least_prime_factor(n)?;
    let e = n - n / p - 1;
    Ok(BigCount(BigUint::from(q.q() - 1) * q.big().pow(e as u32)))
}

fn q_pow(q: &PrimePower, e: u64) -> BigUint {
    q.big().pow(e as u32)
}

/// `n N_n(q) - q^n` as a signed integer.
fn deviation(n: u64, q: &PrimePower) -> Result<BigInt> {
    let count = irreducible_count(n, q)?;
    Ok(BigInt::from(count.0 * n) - BigInt::from(q_pow(q, n)))
}

/// `(q-1) |n N_n - q^n|` against `q^{n/p(n)+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eq21Check {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

pub fn check_eq21(n: u64, q: &PrimePower) -> Result<Eq21Check> {
    require_n(n, 2, "check_eq21")?;
    let p = least_prime_factor(n)?;
    let lhs = deviation(n, q)?.magnitude() * BigUint::from(q.q() - 1);
    let rhs = q_pow(q, n / p + 1);
    let holds = lhs < rhs;
    Ok(Eq21Check { lhs, rhs, holds })
}

/// The relative deviation `r_n(q)` with `n N_n(q) = q^n (1 + r_n(q))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualBound {
    pub n: u64,
    pub q: u64,
    /// In lowest terms, positive denominator.
    pub residual: BigRational,
    pub l: BigCount,
    /// `|r_n| < 1 / L_n`.
    pub c_bound_ok: bool,
}

impl ResidualBound {
    pub fn residual_num(&self) -> &BigInt {
        self.residual.numer()
    }

    pub fn residual_den(&self) -> &BigInt {
        self.residual.denom()
    }
}

pub fn residual(n: u64, q: &PrimePower) -> Result<ResidualBound> {
    require_n(n, 2, "residual")?;
    let dev = deviation(n, q)?;
    let qn = BigInt::from(q_pow(q, n));
    let l = l_value(n, q)?;
    let c_bound_ok = dev.abs() * BigInt::from(l.0.clone()) < qn;
    Ok(ResidualBound {
        n,
        q: q.q(),
        residual: BigRational::new(dev, qn),
        l,
        c_bound_ok,
    })
}

/// Outcome of the logarithmic bound `|ln N_n - ln(q^n/n)| < 2 / L_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eq22Check {
    pub holds: bool,
    /// Enclosure of `ln N_n - ln(q^n/n) = ln(n N_n / q^n)`.
    pub deviation: Interval,
    pub l: BigCount,
}

/// Certifies the logarithmic bound, doubling precision from `precision`
/// until the enclosure separates or the cap is reached. The start is raised
/// to the bit length of `L_n` since `2/L_n` is about that small.
pub fn check_eq22(n: u64, q: &PrimePower, precision: u32) -> Result<Eq22Check> {
    require_n(n, 2, "check_eq22")?;
    let count = irreducible_count(n, q)?;
    let l = l_value(n, q)?;
    let num = count.0 * n;
    let den = q_pow(q, n);
    let l_bits = l.bits() as u32;
    let mut prec = precision.max(32).max(l_bits + 32);
    let max_prec = 8192u32.max(4 * (l_bits + 32));
    let lbig = BigInt::from(l.0.clone());
    loop {
        let dev = Interval::ln_ratio(&num, &den, prec);
        let abs_hi = dev.lo_scaled().abs().max(dev.hi_scaled().abs());
        // |dev| <= abs_hi 2^-prec and abs_hi L < 2^(prec+1)  =>  |dev| < 2/L
        let holds = abs_hi * &lbig < BigInt::one() << (prec + 1);
        if holds || prec >= max_prec {
            return Ok(Eq22Check {
                holds,
                deviation: dev,
                l,
            });
        }
        prec = prec.saturating_mul(2).min(max_prec);
    }
}

/// Exact sufficient test for the logarithmic bound, no logarithms involved.
/// With `r = r_n(q)`: `ln(1+r) <= r` for `r >= 0`, and
/// `ln(1-x) >= -x/(1-x)` for `0 < x < 1`. A `false` result means "not
/// certified by this test", not "violated".
pub fn check_eq22_exact(n: u64, q: &PrimePower) -> Result<bool> {
    let r = residual(n, q)?;
    let l = BigInt::from(r.l.0.clone());
    let (num, den) = (r.residual_num().clone(), r.residual_den().clone());
    if !num.is_negative() {
        // r < 2/L  <=>  num L < 2 den
        return Ok(num * l < 2 * den);
    }
    // x/(1-x) < 2/L with x = |num|/den  <=>  |num| L < 2 (den - |num|)
    let x = -num;
    if x >= den {
        return Ok(false);
    }
    Ok(&x * l < 2 * (den - x))
}

/// `(L_n >= cubic lower bound, cubic lower bound > (n-1)^2/8)`.
pub fn check_eq23(n: u64, q: &PrimePower) -> Result<(bool, bool)> {
    require_n(n, 5, "check_eq23")?;
    let l = BigInt::from(l_value(n, q)?.0);
    let (ni, t) = (int(n), int(q.q() - 1));
    // 8 * [t + (n-2)/2 t^2 + (n-2)(n-4)/8 t^3]
    let middle8 = 8 * &t + 4 * (&ni - 2u32) * t.pow(2) + (&ni - 2u32) * (&ni - 4u32) * t.pow(3);
    let a = 8 * l >= middle8;
    let b = middle8 > (&ni - 1u32).pow(2);
    Ok((a, b))
}

/// `L_n >=` the quartic lower bound, for `n >= 6`.
pub fn check_eq24(n: u64, q: &PrimePower) -> Result<bool> {
    require_n(n, 6, "check_eq24")?;
    let l = BigInt::from(l_value(n, q)?.0);
    Ok(48 * l >= quartic48(n, q.q() - 1))
}

/// 48 times the quartic lower bound on `L_n` with `t = q - 1`.
fn quartic48(n: u64, t: u64) -> BigInt {
    let (n, t) = (int(n), int(t));
    48 * &t
        + 24 * (&n - 2u32) * t.pow(2)
        + 6 * (n.pow(2) - 6 * &n + 8) * t.pow(3)
        + (n.pow(3) - 12 * n.pow(2) + 44 * &n - 48) * t.pow(4)
}

/// `P(n) = 32n^3 - 360n^2 + 1276n - 1365`.
pub fn p_poly(n: u64) -> BigInt {
    let n = int(n);
    32 * n.pow(3) - 360 * n.pow(2) + 1276 * &n - 1365
}

fn ratio(num: i64, den: BigInt) -> BigRational {
    BigRational::new(BigInt::from(num), den)
}

/// For `q >= 9`: (a) `L_n >= (8/3) P(n)`; (b)
/// `-1/(n+1)^2 + 12/(8P(n+1)) + 6/(8P(n)) + 6/(8P(n+2)) < 0`.
pub fn check_pn_chain(n: u64, q: &PrimePower) -> Result<(bool, bool)> {
    require_n(n, 6, "check_pn_chain")?;
    if q.q() < 9 {
        return Err(domain(format!("check_pn_chain: q = {q} must be at least 9")));
    }
    let l = BigInt::from(l_value(n, q)?.0);
    let a = 3 * l >= 8 * p_poly(n);
    let total = -ratio(1, int(n + 1).pow(2))
        + ratio(12, 8 * p_poly(n + 1))
        + ratio(6, 8 * p_poly(n))
        + ratio(6, 8 * p_poly(n + 2));
    Ok((a, total < BigRational::zero()))
}

/// The `q <= 8` counterpart of [`check_pn_chain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmallQChain {
    /// `L_n >= (n/48)(n^2 - 6n + 32)`.
    pub l_n: bool,
    /// `L_{n+1} >= ((n+1)/48)(n^2 - 4n + 27)`.
    pub l_n1: bool,
    /// `L_{n+2} >= ((n+2)/48)(n^2 - 2n + 24)`.
    pub l_n2: bool,
    /// `-1/(n+1)^2 + 192/((n+1)(n^2-4n+27)) + 96/(n(n^2-6n+32))
    ///  + 96/((n+2)(n^2-2n+24)) < 0`; only claimed from n = 389 on.
    pub final_inequality: bool,
}

impl SmallQChain {
    pub fn lower_bounds_ok(&self) -> bool {
        self.l_n && self.l_n1 && self.l_n2
    }
}

pub fn check_smallq_chain(n: u64, q: &PrimePower) -> Result<SmallQChain> {
    require_n(n, 6, "check_smallq_chain")?;
    if q.q() > 8 {
        return Err(domain(format!("check_smallq_chain: q = {q} must be at most 8")));
    }
    let ni = int(n);
    let c0: BigInt = &ni * (ni.pow(2) - 6 * &ni + 32);
    let c1: BigInt = (&ni + 1u32) * (ni.pow(2) - 4 * &ni + 27);
    let c2: BigInt = (&ni + 2u32) * (ni.pow(2) - 2 * &ni + 24);
    let l = |m: u64| -> Result<BigInt> { Ok(48 * BigInt::from(l_value(m, q)?.0)) };
    let total = -ratio(1, int(n + 1).pow(2))
        + ratio(192, c1.clone())
        + ratio(96, c0.clone())
        + ratio(96, c2.clone());
    Ok(SmallQChain {
        l_n: l(n)? >= c0,
        l_n1: l(n + 1)? >= c1,
        l_n2: l(n + 2)? >= c2,
        final_inequality: total < BigRational::zero(),
    })
}

/// Enclosure of
/// `(ln n - 1)/(n(n+1)(n+2)) - 1/(n^2(n+2)) - 2/((n+1)L_{n+1}) - 1/(n L_n)
///  - 1/((n+2)L_{n+2})`, a lower bound for `Δ_n(q)/2`.
pub fn eq25_lower_bound(n: u64, q: &PrimePower, precision: u32) -> Result<Interval> {
    require_n(n, 2, "eq25_lower_bound")?;
    let prec = precision.max(32);
    let ni = int(n);
    let frac = |num: i64, den: BigInt| Interval::from_ratio(&BigInt::from(num), &den, prec);
    let l = |m: u64| -> Result<BigInt> { Ok(BigInt::from(l_value(m, q)?.0)) };
    let log_term = Interval::ln(&BigUint::from(n), prec)
        .sub(&Interval::from_int(&BigInt::one(), prec))
        .div(&(&ni * (&ni + 1u32) * (&ni + 2u32)));
    Ok(log_term
        .sub(&frac(1, ni.pow(2) * (&ni + 2u32)))
        .sub(&frac(2, (&ni + 1u32) * l(n + 1)?))
        .sub(&frac(1, &ni * l(n)?))
        .sub(&frac(1, (&ni + 2u32) * l(n + 2)?)))
}
