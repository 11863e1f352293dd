//! Brute-force oracle: build F_q explicitly and count irreducible monic
//! polynomials with an Eratosthenes-style sieve.
//!
//! Nothing here touches the Möbius formula. Field elements are `u32`
//! indices whose base-p digits are the coefficients of the residue
//! polynomial, constant term least significant. Monic polynomials of degree
//! `d` are indexed by their `d` lower coefficients read in base q, which is
//! also the lexicographic order used to pick the smallest modulus.

use crate::arith;
use crate::error::{domain, Error, Result};

/// Default cap on `q^{n_max}` for sieve runs.
pub const DEFAULT_SIEVE_CAP: u64 = 1 << 22;

/// An explicit finite field F_{p^k}.
#[derive(Debug, Clone)]
pub struct FieldRep {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

/// Monic polynomial over a [`FieldRep`], coefficients ascending, the last one
/// equal to the field's one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonicPoly {
    coeffs: Vec<u32>,
}

impl MonicPoly {
    /// The monic polynomial of degree `degree` with sieve index `index`.
    pub fn from_index(index: u64, degree: u32, q: u32) -> Self {
        let mut coeffs = Vec::with_capacity(degree as usize + 1);
        let mut rest = index;
        for _ in 0..degree {
            coeffs.push((rest % q as u64) as u32);
            rest /= q as u64;
        }
        coeffs.push(1);
        MonicPoly { coeffs }
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn index(&self, q: u32) -> u64 {
        self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * q as u64 + c as u64)
    }
}

fn checked_pow(base: u64, e: u32) -> Option<u64> {
    base.checked_pow(e)
}

impl FieldRep {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Reduction modulus over F_p, ascending, monic of degree k.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= order { s - order } else { s }) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let order = self.q - 1;
        let l = self.log[a as usize];
        Some(self.exp[((order - l) % order) as usize])
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut rest = a;
        for _ in 0..self.k {
            out.push(rest % self.p);
            rest /= self.p;
        }
        out
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    /// Multiplication straight from the definition: polynomial product over
    /// F_p reduced by the modulus. Independent of the log tables.
    pub fn mul_reference(&self, a: u32, b: u32) -> u32 {
        let (p, k) = (self.p as u64, self.k as usize);
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            // x^top = x^{top-k} * x^k, and x^k = -(modulus lower part)
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + c * (p - m as u64)) % p;
            }
            prod[top] = 0;
        }
        let low: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.undigits(&low)
    }

    /// Sampled field-axiom checks; exhaustive for `q <= 9`.
    pub fn check_axioms(&self) -> Result<()> {
        let sample: Vec<u32> = if self.q <= 9 {
            (0..self.q).collect()
        } else {
            let step = (self.q / 12).max(1);
            let mut s: Vec<u32> = (0..self.q.min(6)).collect();
            s.extend((0..self.q).step_by(step as usize).map(|a| (a + 3) % self.q));
            s.push(self.q - 1);
            s
        };
        let fail = |what: &str, a: u32, b: u32, c: u32| {
            Err(Error::Internal(format!(
                "GF({}) fails {what} at ({a}, {b}, {c})",
                self.q
            )))
        };
        for &a in &sample {
            if self.pow(a, self.q as u64) != a {
                return fail("a^q = a", a, 0, 0);
            }
            if a != 0 && self.inv(a).map(|i| self.mul(a, i)) != Some(1) {
                return fail("inverse", a, 0, 0);
            }
            for &b in &sample {
                if self.mul(a, b) != self.mul_reference(a, b) {
                    return fail("table product", a, b, 0);
                }
                if self.mul(a, b) != self.mul(b, a) || self.add(a, b) != self.add(b, a) {
                    return fail("commutativity", a, b, 0);
                }
                for &c in &sample {
                    let lhs = self.mul(a, self.add(b, c));
                    let rhs = self.add(self.mul(a, b), self.mul(a, c));
                    if lhs != rhs {
                        return fail("distributivity", a, b, c);
                    }
                    if self.mul(a, self.mul(b, c)) != self.mul(self.mul(a, b), c) {
                        return fail("associativity", a, b, c);
                    }
                }
            }
        }
        Ok(())
    }

    fn assemble(p: u32, k: u32, modulus: Vec<u32>) -> Result<Self> {
        let q = p.pow(k);
        let mut field = FieldRep {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add_table: None,
        };
        field.neg = (0..q)
            .map(|a| {
                let d: Vec<u32> = field.digits(a).iter().map(|&c| (p - c) % p).collect();
                field.undigits(&d)
            })
            .collect();
        if p != 2 && q <= 256 {
            let mut t = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    t.push(field.add_digits(a, b));
                }
            }
            field.add_table = Some(t);
        }

        let order = (q - 1) as u64;
        let prime_factors: Vec<u64> = if order > 1 {
            arith::factorize(order)?
                .factors()
                .iter()
                .map(|&(r, _)| r)
                .collect()
        } else {
            Vec::new()
        };
        let ref_pow = |a: u32, mut e: u64| {
            let (mut acc, mut base) = (1u32, a);
            while e > 0 {
                if e & 1 == 1 {
                    acc = field.mul_reference(acc, base);
                }
                base = field.mul_reference(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = (1..q)
            .find(|&g| ref_pow(g, order) == 1 && prime_factors.iter().all(|&r| ref_pow(g, order / r) != 1))
            .ok_or_else(|| Error::Internal(format!("no primitive element in GF({q})")))?;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for i in 0..order as u32 {
            if log[x as usize] != u32::MAX {
                return Err(Error::Internal(format!("modulus for GF({q}) is reducible")));
            }
            exp.push(x);
            log[x as usize] = i;
            x = field.mul_reference(x, generator);
        }
        field.exp = exp;
        field.log = log;
        Ok(field)
    }
}

/// Constructs F_{p^k}. For `k > 1` the modulus is the lexicographically
/// smallest monic irreducible of degree k over F_p, found by sieving F_p.
pub fn build_field(p: u64, k: u32) -> Result<FieldRep> {
    build_field_capped(p, k, DEFAULT_SIEVE_CAP)
}

pub fn build_field_capped(p: u64, k: u32, cap: u64) -> Result<FieldRep> {
    if !arith::is_prime(p) {
        return Err(domain(format!("build_field: {p} is not prime")));
    }
    if k < 1 {
        return Err(domain("build_field: k must be at least 1"));
    }
    let q = checked_pow(p, k).filter(|&q| q <= cap).ok_or(Error::Capacity {
        what: "field order",
        needed: p.saturating_pow(k),
        cap,
    })?;
    let p32 = p as u32;
    let field = if k == 1 {
        FieldRep::assemble(p32, 1, vec![0, 1])?
    } else {
        let prime_field = FieldRep::assemble(p32, 1, vec![0, 1])?;
        let marks = sieve_marks(&prime_field, k, cap)?;
        let index = marks[k as usize]
            .iter()
            .position(|&reducible| !reducible)
            .ok_or_else(|| Error::Internal(format!("no irreducible of degree {k} over F_{p}")))?;
        let modulus = MonicPoly::from_index(index as u64, k, p32);
        FieldRep::assemble(p32, k, modulus.coeffs)?
    };
    debug_assert_eq!(field.q as u64, q);
    field.check_axioms()?;
    Ok(field)
}

/// `marks[d][i]` is true when the monic degree-d polynomial with index `i`
/// is reducible. `marks[0]` is empty.
fn sieve_marks(field: &FieldRep, n_max: u32, cap: u64) -> Result<Vec<Vec<bool>>> {
    let q = field.q as u64;
    let total = checked_pow(q, n_max).filter(|&t| t <= cap).ok_or(Error::Capacity {
        what: "q^n_max",
        needed: q.saturating_pow(n_max),
        cap,
    })?;
    let qpow: Vec<u64> = (0..=n_max).map(|i| q.pow(i)).collect();
    debug_assert_eq!(qpow[n_max as usize], total);
    let mut marks: Vec<Vec<bool>> = qpow
        .iter()
        .enumerate()
        .map(|(d, &size)| if d == 0 { Vec::new() } else { vec![false; size as usize] })
        .collect();

    let qm1 = field.q - 1;
    let inc_delta: Vec<u32> = (0..qm1).map(|a| field.sub(a + 1, a)).collect();
    let wrap_delta = field.neg(qm1);

    // Every reducible polynomial of degree m has an irreducible factor f of
    // degree d <= m/2 whose cofactor has degree >= d.
    for d in 1..=n_max / 2 {
        let (lower, upper) = marks.split_at_mut(d as usize + 1);
        for fidx in 0..qpow[d as usize] {
            if lower[d as usize][fidx as usize] {
                continue;
            }
            let f = MonicPoly::from_index(fidx, d, field.q);
            for e in d..=n_max - d {
                let target = &mut upper[(e - 1) as usize];
                mark_multiples(field, &f, e, &qpow, &inc_delta, wrap_delta, target);
            }
        }
    }
    Ok(marks)
}

/// Marks `f * g` for every monic `g` of degree `e`, walking the cofactors in
/// odometer order and updating the product incrementally.
fn mark_multiples(
    field: &FieldRep,
    f: &MonicPoly,
    e: u32,
    qpow: &[u64],
    inc_delta: &[u32],
    wrap_delta: u32,
    target: &mut [bool],
) {
    let fc = f.coeffs();
    let d = f.degree() as usize;
    let e = e as usize;
    let m = d + e;
    let mut h = vec![0u32; m + 1];
    h[e..].copy_from_slice(fc);
    let mut idx: u64 = (0..m).map(|i| h[i] as u64 * qpow[i]).sum();
    target[idx as usize] = true;

    let mut g = vec![0u32; e];
    let qm1 = field.q - 1;
    let apply = |h: &mut [u32], idx: &mut u64, j: usize, delta: u32| {
        for (t, &c) in fc.iter().enumerate() {
            let i = j + t;
            let old = h[i];
            let new = field.add(old, field.mul(delta, c));
            h[i] = new;
            *idx = *idx - old as u64 * qpow[i] + new as u64 * qpow[i];
        }
    };
    loop {
        let mut j = 0;
        loop {
            if j == e {
                return;
            }
            if g[j] == qm1 {
                apply(&mut h, &mut idx, j, wrap_delta);
                g[j] = 0;
                j += 1;
            } else {
                apply(&mut h, &mut idx, j, inc_delta[g[j] as usize]);
                g[j] += 1;
                break;
            }
        }
        target[idx as usize] = true;
    }
}

/// Number of monic irreducible polynomials of each degree `1..=n_max`
/// (entry 0 is degree 1), by sieving.
pub fn sieve_irreducible_counts(field: &FieldRep, n_max: u32) -> Result<Vec<u64>> {
    sieve_irreducible_counts_capped(field, n_max, DEFAULT_SIEVE_CAP)
}

pub fn sieve_irreducible_counts_capped(field: &FieldRep, n_max: u32, cap: u64) -> Result<Vec<u64>> {
    if n_max < 1 {
        return Err(domain("sieve_irreducible_counts: n_max must be at least 1"));
    }
    let marks = sieve_marks(field, n_max, cap)?;
    Ok(marks[1..]
        .iter()
        .map(|m| m.iter().filter(|&&r| !r).count() as u64)
        .collect())
}

/// Largest `n` with `q^n <= cap`.
pub fn max_sieve_degree(q: u64, cap: u64) -> u32 {
    let mut n = 0;
    let mut acc = 1u64;
    while let Some(next) = acc.checked_mul(q).filter(|&v| v <= cap) {
        acc = next;
        n += 1;
    }
    n
}
