//! Dense univariate polynomials over a [`FieldCtx`].
//!
//! Coefficients are ascending and never carry trailing zeros, so the zero
//! polynomial is the empty vector. Polynomials compare by degree first, then
//! by their ascending coefficient literals; this is the canonical order used
//! everywhere primes get sorted.
//!
//! Literal syntax is the comma-separated list of coefficient literals, lowest
//! degree first: over `F_2`, `"1,1,1"` is `X^2 + X + 1`.

mod factor;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith;
use crate::error::{Error, Result};
use crate::gf::{CtxId, FieldCtx, FieldElem, FieldEmbedding};

pub use factor::{factor, is_irreducible, Factorization};

/// Listing primes of degree `d` is allowed while `q^d` stays below this.
pub const PRIME_LISTING_BUDGET: u64 = 1 << 22;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ctx: CtxId,
    coeffs: Vec<FieldElem>,
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
            .then_with(|| self.ctx.cmp(&other.ctx))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{self}]")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c.literal())?;
        }
        Ok(())
    }
}

impl Poly {
    pub fn from_coeffs(field: &FieldCtx, mut coeffs: Vec<FieldElem>) -> Poly {
        debug_assert!(coeffs.iter().all(|&c| field.owns(c)));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            ctx: field.id(),
            coeffs,
        }
    }

    pub fn zero(field: &FieldCtx) -> Poly {
        Poly {
            ctx: field.id(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &FieldCtx) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &FieldCtx, c: FieldElem) -> Poly {
        Poly::from_coeffs(field, vec![c])
    }

    /// The monomial `X`.
    pub fn x(field: &FieldCtx) -> Poly {
        Poly::from_coeffs(field, vec![field.zero(), field.one()])
    }

    /// `X + a`.
    pub fn x_plus(field: &FieldCtx, a: FieldElem) -> Poly {
        Poly::from_coeffs(field, vec![a, field.one()])
    }

    pub fn from_literals(field: &FieldCtx, lits: &[u32]) -> Result<Poly> {
        let coeffs = lits
            .iter()
            .map(|&l| field.elem(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(field, coeffs))
    }

    /// Parses the comma-separated literal form; `"0"` or `""` is zero.
    pub fn parse(field: &FieldCtx, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Poly::zero(field));
        }
        let coeffs = s
            .split(',')
            .map(|t| field.parse_elem(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(field, coeffs))
    }

    pub fn ctx_id(&self) -> CtxId {
        self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn literals(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.literal()).collect()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, treating zero as degree 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].literal() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.literal() == 1)
    }

    pub fn coeff(&self, i: usize) -> Option<FieldElem> {
        self.coeffs.get(i).copied()
    }

    pub fn ensure_ctx(&self, field: &FieldCtx) -> Result<()> {
        if self.ctx != field.id() {
            return Err(Error::CtxMismatch(format!(
                "polynomial {self} does not live over F_{}",
                field.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Poly, field: &FieldCtx) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(z);
                let b = rhs.coeffs.get(i).copied().unwrap_or(z);
                field.add(a, b)
            })
            .collect();
        Poly::from_coeffs(field, coeffs)
    }

    pub fn neg(&self, field: &FieldCtx) -> Poly {
        let coeffs = self.coeffs.iter().map(|&c| field.neg(c)).collect();
        Poly::from_coeffs(field, coeffs)
    }

    pub fn sub(&self, rhs: &Poly, field: &FieldCtx) -> Poly {
        self.add(&rhs.neg(field), field)
    }

    pub fn scale(&self, c: FieldElem, field: &FieldCtx) -> Poly {
        let coeffs = self.coeffs.iter().map(|&a| field.mul(a, c)).collect();
        Poly::from_coeffs(field, coeffs)
    }

    pub fn mul(&self, rhs: &Poly, field: &FieldCtx) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(field);
        }
        let mut out = vec![field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::from_coeffs(field, out)
    }

    pub fn pow(&self, mut e: u64, field: &FieldCtx) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, field);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, field);
            }
        }
        acc
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Poly, field: &FieldCtx) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        if self.coeffs.len() <= dd {
            return (Poly::zero(field), self.clone());
        }
        let inv_lead = field.inv(divisor.coeffs[dd]).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![field.zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c.is_zero() {
                continue;
            }
            let factor = field.mul(c, inv_lead);
            quot[top - dd] = factor;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = field.sub(rem[idx], field.mul(factor, d));
            }
        }
        rem.truncate(dd);
        (Poly::from_coeffs(field, quot), Poly::from_coeffs(field, rem))
    }

    pub fn rem(&self, divisor: &Poly, field: &FieldCtx) -> Poly {
        self.div_rem(divisor, field).1
    }

    /// Quotient of an exact division.
    pub fn div_exact(&self, divisor: &Poly, field: &FieldCtx) -> Poly {
        let (q, r) = self.div_rem(divisor, field);
        debug_assert!(r.is_zero(), "inexact division of {self} by {divisor}");
        q
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn monic(&self, field: &FieldCtx) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(c) if c.literal() == 1 => self.clone(),
            Some(c) => self.scale(field.inv(c).unwrap(), field),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, rhs: &Poly, field: &FieldCtx) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b, field);
            a = b;
            b = r;
        }
        a.monic(field)
    }

    pub fn mul_mod(&self, rhs: &Poly, modulus: &Poly, field: &FieldCtx) -> Poly {
        self.mul(rhs, field).rem(modulus, field)
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Poly, field: &FieldCtx) -> Poly {
        let mut base = self.rem(modulus, field);
        let mut acc = Poly::one(field).rem(modulus, field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus, field);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, modulus, field);
            }
        }
        acc
    }

    pub fn derivative(&self, field: &FieldCtx) -> Poly {
        let p = field.characteristic() as usize;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| {
                let k = (i % p) as u32;
                // k * c by repeated addition in the prime field.
                let mut acc = field.zero();
                for _ in 0..k {
                    acc = field.add(acc, c);
                }
                acc
            })
            .collect();
        Poly::from_coeffs(field, coeffs)
    }

    /// Horner evaluation; `x` must live in the same field.
    pub fn eval_unchecked(&self, x: FieldElem, field: &FieldCtx) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, &c| field.add(field.mul(acc, x), c))
    }

    /// Coefficientwise map.
    pub fn map_coeffs(&self, field: &FieldCtx, f: impl Fn(FieldElem) -> FieldElem) -> Poly {
        Poly::from_coeffs(field, self.coeffs.iter().map(|&c| f(c)).collect())
    }
}

/// Horner evaluation at `x`, checked against the field context.
pub fn eval(f: &Poly, x: FieldElem, field: &FieldCtx) -> Result<FieldElem> {
    f.ensure_ctx(field)?;
    field.ensure_owns(x)?;
    Ok(f.eval_unchecked(x, field))
}

/// Coefficientwise `q`-th power.
pub fn poly_frobenius(f: &Poly, q: u32, field: &FieldCtx) -> Result<Poly> {
    f.ensure_ctx(field)?;
    field.check_base_order(q)?;
    Ok(f.map_coeffs(field, |c| field.pow(c, q as u64)))
}

/// Scalar extension `F_q[X] -> F_Q[X]` along the fixed subfield embedding.
pub fn embed(f: &Poly, embedding: &FieldEmbedding, target: &FieldCtx) -> Result<Poly> {
    if f.ctx != embedding.small_id() || target.id() != embedding.big_id() {
        return Err(Error::NotASubfield {
            small: 0,
            big: target.order(),
        });
    }
    Ok(f.map_coeffs(target, |c| embedding.embed_unchecked(c)))
}

/// Number of monic irreducibles of degree `d` over `F_q`:
/// `(1/d) sum_{e | d} mu(e) q^{d/e}`.
pub fn prime_count(q: u64, d: u64) -> BigUint {
    assert!(d >= 1);
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    for e in arith::divisors(d) {
        let term = BigUint::from(q).pow((d / e) as u32);
        match arith::mobius(e) {
            1 => pos += term,
            -1 => neg += term,
            _ => {}
        }
    }
    (pos - neg) / BigUint::from(d)
}

/// All monic irreducibles of degree `d`, canonically sorted.
pub fn primes_with_degree(field: &FieldCtx, d: usize) -> Result<Vec<Poly>> {
    if d == 0 {
        return Ok(Vec::new());
    }
    let q = field.order() as u64;
    let total = arith::checked_pow_bounded(q, d as u32, PRIME_LISTING_BUDGET).ok_or_else(|| {
        Error::BudgetExceeded(format!(
            "listing primes of degree {d} over F_{q} needs q^d <= {PRIME_LISTING_BUDGET}"
        ))
    })?;
    let mut out = Vec::new();
    let mut coeffs = vec![field.zero(); d + 1];
    coeffs[d] = field.one();
    for m in 0..total {
        // Lowest coefficient is the most significant digit, so `m` walks the
        // canonical order.
        let mut rest = m;
        for i in (0..d).rev() {
            coeffs[i] = field.elem((rest % q) as u32).unwrap();
            rest /= q;
        }
        if d > 1 && coeffs[0].is_zero() {
            continue;
        }
        let f = Poly::from_coeffs(field, coeffs.clone());
        if is_irreducible(&f, field) {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldCtx {
        FieldCtx::new(2, 1).unwrap()
    }

    fn f4() -> FieldCtx {
        FieldCtx::new(2, 2).unwrap()
    }

    #[test]
    fn literal_round_trip_and_trimming() {
        let f = f2();
        let p = Poly::parse(&f, "1,1,1,0,0").unwrap();
        assert_eq!(p.to_string(), "1,1,1");
        assert_eq!(p.degree(), Some(2));
        assert!(Poly::parse(&f, "0").unwrap().is_zero());
        assert_eq!(Poly::parse(&f, "0").unwrap().to_string(), "0");
        assert!(Poly::parse(&f, "1,2").is_err());
    }

    #[test]
    fn eval_examples() {
        let f = f2();
        let p = Poly::parse(&f, "1,1,1").unwrap();
        assert_eq!(eval(&p, f.zero(), &f).unwrap(), f.one());
        assert_eq!(eval(&Poly::one(&f), f.one(), &f).unwrap(), f.one());

        let g = f4();
        let w = g.generator();
        let w2 = g.mul(w, w);
        let a = Poly::x_plus(&g, w);
        let b = Poly::x_plus(&g, w2);
        let h = a.mul(&b.pow(2, &g), &g);
        assert_eq!(eval(&h, g.one(), &g).unwrap(), w);
        assert!(eval(&h, f.one(), &g).is_err());
        assert!(eval(&p, g.one(), &g).is_err());
    }

    #[test]
    fn div_rem_reconstructs() {
        let g = f4();
        let a = Poly::from_literals(&g, &[3, 2, 0, 1, 1, 2]).unwrap();
        let b = Poly::from_literals(&g, &[1, 3, 2]).unwrap();
        let (q, r) = a.div_rem(&b, &g);
        assert!(r.deg() < b.deg() || r.is_zero());
        assert_eq!(q.mul(&b, &g).add(&r, &g), a);
    }

    #[test]
    fn frobenius_examples() {
        let g = f4();
        let w = g.generator();
        let w2 = g.mul(w, w);
        assert_eq!(
            poly_frobenius(&Poly::x_plus(&g, w), 2, &g).unwrap(),
            Poly::x_plus(&g, w2)
        );
        let e = FieldEmbedding::new(&f2(), &g).unwrap();
        let p = embed(&Poly::parse(&f2(), "1,1,1").unwrap(), &e, &g).unwrap();
        assert_eq!(poly_frobenius(&p, 2, &g).unwrap(), p);
        assert!(poly_frobenius(&p, 3, &g).is_err());
    }

    #[test]
    fn embed_examples() {
        let small = f2();
        let big = f4();
        let e = FieldEmbedding::new(&small, &big).unwrap();
        let p = Poly::parse(&small, "1,1,1").unwrap();
        let ep = embed(&p, &e, &big).unwrap();
        assert_eq!(ep.literals(), vec![1, 1, 1]);
        assert_eq!(embed(&Poly::one(&small), &e, &big).unwrap(), Poly::one(&big));
        assert!(embed(&ep, &e, &big).is_err());
    }

    #[test]
    fn prime_listing_examples() {
        let f = f2();
        let p2 = primes_with_degree(&f, 2).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].to_string(), "1,1,1");
        assert_eq!(primes_with_degree(&f, 4).unwrap().len(), 3);
        assert_eq!(primes_with_degree(&f, 6).unwrap().len(), 9);
        assert!(matches!(
            primes_with_degree(&f, 23).unwrap_err(),
            Error::BudgetExceeded(_)
        ));
    }

    #[test]
    fn necklace_formula_matches_listing() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = FieldCtx::new(p, k).unwrap();
            let q = f.order() as u64;
            for d in 1..=8usize {
                if q.pow(d as u32) > 1 << 16 {
                    continue;
                }
                let listed = primes_with_degree(&f, d).unwrap();
                assert_eq!(
                    BigUint::from(listed.len()),
                    prime_count(q, d as u64),
                    "q={q} d={d}"
                );
                assert!(listed.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn necklace_formula_for_larger_degrees() {
        // (1/4)(2^4 - 2^2) and (1/6)(2^6 - 2^3 - 2^2 + 2)
        assert_eq!(prime_count(2, 4), BigUint::from(3u32));
        assert_eq!(prime_count(2, 6), BigUint::from(9u32));
        assert_eq!(prime_count(3, 8), BigUint::from(810u32));
        assert_eq!(prime_count(4, 8), BigUint::from(8160u32));
        assert_eq!(prime_count(5, 7), BigUint::from(11160u32));
    }
}
