//! Rigorous intervals with dyadic endpoints and outward rounding.
//!
//! An [`Interval`] at precision `w` is `[lo, hi] * 2^-w` with integer
//! `lo <= hi`. Every operation rounds the lower endpoint down and the upper
//! endpoint up, so the true real value is always enclosed. Logarithms of
//! positive rationals are evaluated as `s*ln 2 + 2*atanh(y)` with
//! `|y| <= 0.18`, so the series gains more than 4.9 bits per term.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn ceil_shr(a: &BigUint, w: u32) -> BigUint {
    let floor = a >> w;
    if (&floor << w) == *a {
        floor
    } else {
        floor + 1u32
    }
}

impl Interval {
    pub fn zero(prec: u32) -> Self {
        Interval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            prec,
        }
    }

    /// The exact integer `v`.
    pub fn from_int(v: &BigInt, prec: u32) -> Self {
        let x = v << prec;
        Interval {
            lo: x.clone(),
            hi: x,
            prec,
        }
    }

    /// Enclosure of `num / den`, `den > 0`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(den.is_positive(), "from_ratio: non-positive denominator");
        let scaled = num << prec;
        Interval {
            lo: floor_div(&scaled, den),
            hi: ceil_div(&scaled, den),
            prec,
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Lower endpoint numerator, scaled by `2^precision`.
    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    /// Width in units of `2^-precision`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// `Greater` if the interval is strictly positive, `Less` if strictly
    /// negative, `None` if it contains zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    pub fn add(&self, other: &Interval) -> Interval {
        assert_eq!(self.prec, other.prec, "precision mismatch");
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        assert_eq!(self.prec, other.prec, "precision mismatch");
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    /// Exact multiplication by an integer.
    pub fn scale(&self, k: &BigInt) -> Interval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            Interval { lo: b, hi: a, prec: self.prec }
        } else {
            Interval { lo: a, hi: b, prec: self.prec }
        }
    }

    /// Division by a positive integer, rounded outward.
    pub fn div(&self, k: &BigInt) -> Interval {
        assert!(k.is_positive(), "division by non-positive integer");
        Interval {
            lo: floor_div(&self.lo, k),
            hi: ceil_div(&self.hi, k),
            prec: self.prec,
        }
    }

    /// Re-express at a lower precision, rounding outward.
    pub fn round_to(&self, prec: u32) -> Interval {
        assert!(prec <= self.prec);
        let d = BigInt::one() << (self.prec - prec);
        Interval {
            lo: floor_div(&self.lo, &d),
            hi: ceil_div(&self.hi, &d),
            prec,
        }
    }

    /// Enclosure of ln 2.
    pub fn ln2(prec: u32) -> Interval {
        static CACHE: RwLock<Option<HashMap<u32, Interval>>> = RwLock::new(None);
        if let Some(hit) = CACHE
            .read()
            .expect("ln2 cache poisoned")
            .as_ref()
            .and_then(|m| m.get(&prec))
        {
            return hit.clone();
        }
        // each series term costs up to one ulp; the guard bits absorb that
        let w = prec + 16 + (32 - prec.leading_zeros());
        let (lo, hi) = atanh_fixed(&BigUint::one(), &BigUint::from(3u32), w);
        let value = Interval {
            lo: BigInt::from(lo) << 1,
            hi: BigInt::from(hi) << 1,
            prec: w,
        }
        .round_to(prec);
        CACHE
            .write()
            .expect("ln2 cache poisoned")
            .get_or_insert_with(HashMap::new)
            .insert(prec, value.clone());
        value
    }

    /// Enclosure of `ln(num / den)` for positive integers.
    pub fn ln_ratio(num: &BigUint, den: &BigUint, prec: u32) -> Interval {
        assert!(!num.is_zero() && !den.is_zero(), "logarithm of zero");
        if num == den {
            return Interval::zero(prec);
        }
        let mut shift = num.bits() as i64 - den.bits() as i64;
        let scaled = |s: i64| -> (BigUint, BigUint) {
            if s >= 0 {
                (num.clone(), den << s as u64)
            } else {
                (num << (-s) as u64, den.clone())
            }
        };
        let (mut a, mut b) = scaled(shift);
        // a/b lies in (1/2, 2); pull it into roughly [1/sqrt 2, sqrt 2].
        let t: BigUint = (&a << 16u32) / &b;
        if t > BigUint::from(92_682u32) {
            shift += 1;
            (a, b) = scaled(shift);
        } else if t < BigUint::from(46_340u32) {
            shift -= 1;
            (a, b) = scaled(shift);
        }

        let guard = 16 + (32 - prec.leading_zeros()) + (64 - shift.unsigned_abs().leading_zeros());
        let w = prec + guard;
        let (y_num, negative) = if a >= b { (&a - &b, false) } else { (&b - &a, true) };
        let (lo, hi) = atanh_fixed(&y_num, &(&a + &b), w);
        let mut series = Interval {
            lo: BigInt::from(lo) << 1,
            hi: BigInt::from(hi) << 1,
            prec: w,
        };
        if negative {
            series = series.neg();
        }
        let total = if shift == 0 {
            series
        } else {
            Interval::ln2(w).scale(&BigInt::from(shift)).add(&series)
        };
        total.round_to(prec)
    }

    /// Enclosure of `ln n`, `n >= 1`.
    pub fn ln(n: &BigUint, prec: u32) -> Interval {
        Interval::ln_ratio(n, &BigUint::one(), prec)
    }
}

/// Fixed-point bounds `(lo, hi)` on `atanh(a/b) * 2^w` for `0 <= a/b <= 1/3`.
fn atanh_fixed(a: &BigUint, b: &BigUint, w: u32) -> (BigUint, BigUint) {
    assert!(a * 3u32 <= *b, "atanh argument out of range");
    let (y_lo, rem) = (a << w).div_rem(b);
    let y_hi = if rem.is_zero() { y_lo.clone() } else { &y_lo + 1u32 };
    let y2_lo = (&y_lo * &y_lo) >> w;
    let y2_hi = ceil_shr(&(&y_hi * &y_hi), w);

    let mut pow_lo = y_lo;
    let mut pow_hi = y_hi;
    let mut sum_lo = BigUint::zero();
    let mut sum_hi = BigUint::zero();
    let mut k: u64 = 0;
    let one = BigUint::one();
    loop {
        if pow_hi <= one {
            // tail <= y^(2k+1) / (1 - y^2) <= 2 y^(2k+1) for y <= 1/3
            sum_hi += &pow_hi << 1u32;
            break;
        }
        let odd = BigUint::from(2 * k + 1);
        sum_lo += &pow_lo / &odd;
        let (quo, rem) = pow_hi.div_rem(&odd);
        sum_hi += if rem.is_zero() { quo } else { quo + 1u32 };
        pow_lo = (&pow_lo * &y2_lo) >> w;
        pow_hi = ceil_shr(&(&pow_hi * &y2_hi), w);
        k += 1;
    }
    (sum_lo, sum_hi)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_dyadic(&self.lo, self.prec, false),
            format_dyadic(&self.hi, self.prec, true)
        )
    }
}

/// Decimal rendering of `m * 2^-prec` with 20 significant digits, rounded
/// down (`up = false`) or up. Purely for display.
pub fn format_dyadic(m: &BigInt, prec: u32, up: bool) -> String {
    if m.is_zero() {
        return "0".to_string();
    }
    let negative = m.sign() == Sign::Minus;
    let mag = m.abs();
    // value = mag / 2^prec = digits * 10^exp10
    let den = BigInt::one() << prec;
    let int_digits = {
        let ip = &mag / &den;
        if ip.is_zero() { 0 } else { ip.to_string().len() as i64 }
    };
    let mut exp10 = int_digits - 20;
    let scaled_num;
    let scaled_den;
    if exp10 >= 0 {
        scaled_num = mag.clone();
        scaled_den = &den * BigInt::from(10u32).pow(exp10 as u32);
    } else {
        // value below 1: find leading zeros so we still show 20 digits
        let mut e = -exp10;
        let mut num = &mag * BigInt::from(10u32).pow(e as u32);
        while (&num / &den).to_string().len() < 20 {
            num *= 10;
            e += 1;
        }
        exp10 = -e;
        scaled_num = num;
        scaled_den = den;
    }
    let round_up = up != negative;
    let digits = if round_up {
        ceil_div(&scaled_num, &scaled_den)
    } else {
        floor_div(&scaled_num, &scaled_den)
    };
    let sign = if negative { "-" } else { "" };
    let s = digits.to_string();
    let exponent = exp10 + s.len() as i64 - 1;
    format!("{sign}{}.{}e{exponent}", &s[..1], &s[1..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn bu(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn as_f64(r: &BigRational) -> f64 {
        r.to_f64().unwrap()
    }

    #[test]
    fn ln2_encloses_reference() {
        let iv = Interval::ln2(128);
        assert!(as_f64(&iv.lower()) <= std::f64::consts::LN_2 + 1e-15);
        assert!(as_f64(&iv.upper()) >= std::f64::consts::LN_2 - 1e-15);
        assert!(iv.width_ulps() <= BigInt::from(8));
        // 40 known digits of ln 2
        let digits: BigInt = "6931471805599453094172321214581765680755".parse().unwrap();
        let scale = BigInt::from(10u32).pow(40);
        let reference_lo = BigRational::new(digits.clone(), scale.clone());
        let reference_hi = BigRational::new(digits + 1, scale);
        assert!(iv.lower() < reference_hi && iv.upper() > reference_lo);
    }

    #[test]
    fn ln_of_powers_of_two_encloses_exactly() {
        for e in [1u32, 3, 10, 200, 5000] {
            let n = BigUint::one() << e;
            let iv = Interval::ln(&n, 96);
            let l2 = Interval::ln2(200);
            let exact_lo = l2.lower() * BigRational::from_integer(BigInt::from(e));
            let exact_hi = l2.upper() * BigRational::from_integer(BigInt::from(e));
            assert!(iv.lower() <= exact_hi && iv.upper() >= exact_lo);
        }
    }

    #[test]
    fn ln_matches_floats() {
        for n in [1u64, 2, 3, 7, 10, 116, 1000, 123_456_789, u64::MAX] {
            let iv = Interval::ln(&bu(n), 80);
            let f = (n as f64).ln();
            assert!(as_f64(&iv.lower()) <= f + 1e-12, "n = {n}");
            assert!(as_f64(&iv.upper()) >= f - 1e-12, "n = {n}");
            assert!(iv.width_ulps() <= BigInt::from(4), "n = {n}");
        }
        assert_eq!(Interval::ln(&bu(1), 64), Interval::zero(64));
    }

    #[test]
    fn ln_ratio_near_one_keeps_relative_accuracy() {
        // ln(1 + 2^-500) is about 2^-500
        let den = BigUint::one() << 500u32;
        let num = &den + 1u32;
        let iv = Interval::ln_ratio(&num, &den, 600);
        let tiny = BigRational::new(BigInt::one(), BigInt::one() << 500u32);
        assert!(iv.upper() >= tiny.clone() - BigRational::new(BigInt::one(), BigInt::one() << 1000u32));
        assert!(iv.lower() <= tiny.clone());
        assert_eq!(iv.sign(), Some(Ordering::Greater));
        let neg = Interval::ln_ratio(&den, &num, 600);
        assert_eq!(neg.sign(), Some(Ordering::Less));
    }

    #[test]
    fn width_shrinks_with_precision() {
        let n: BigUint = "98765432109876543210987654321".parse().unwrap();
        let coarse = Interval::ln(&n, 40);
        let fine = Interval::ln(&n, 400);
        assert!(fine.lower() >= coarse.lower());
        assert!(fine.upper() <= coarse.upper());
        assert!(fine.upper() - fine.lower() < coarse.upper() - coarse.lower());
    }

    #[test]
    fn directed_division_and_scaling() {
        let one_third = Interval::from_ratio(&BigInt::from(1), &BigInt::from(3), 10);
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(one_third.contains(&third));
        let neg = one_third.scale(&BigInt::from(-7));
        assert!(neg.contains(&(-third.clone() * BigRational::from_integer(BigInt::from(7)))));
        let d = neg.div(&BigInt::from(5));
        assert!(d.contains(&(-third * BigRational::new(BigInt::from(7), BigInt::from(5)))));
    }

    #[test]
    fn display_is_readable() {
        let iv = Interval::ln(&bu(10), 64);
        let s = iv.to_string();
        assert!(s.starts_with("[2.302585092994045"), "{s}");
        assert_eq!(format_dyadic(&BigInt::zero(), 10, false), "0");
    }
}
