//! Squarefree, distinct-degree and equal-degree factorization.
//!
//! Equal-degree splitting is Cantor-Zassenhaus, with the trace map in
//! characteristic 2. The random source is a ChaCha stream seeded with
//! [`FACTOR_SEED`], so the intermediate splits are reproducible; the final
//! factorization is canonically sorted and does not depend on them anyway.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::arith;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

pub const FACTOR_SEED: u64 = 0x5eed_f00d;

#[derive(Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElem,
    /// `(monic prime, multiplicity)`, canonically sorted.
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn product(&self, field: &FieldCtx) -> Poly {
        self.factors.iter().fold(
            Poly::constant(field, self.unit),
            |acc, (p, m)| acc.mul(&p.pow(*m as u64, field), field),
        )
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }
}

impl fmt::Debug for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `unit * (prime)^mult * ...`, the unit omitted when it is 1.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.unit.literal() != 1 || self.factors.is_empty() {
            parts.push(self.unit.to_string());
        }
        for (p, m) in &self.factors {
            parts.push(format!("({p})^{m}"));
        }
        write!(f, "{}", parts.join(" * "))
    }
}

/// Canonical factorization of a nonzero polynomial.
pub fn factor(f: &Poly, field: &FieldCtx) -> Result<Factorization> {
    f.ensure_ctx(field)?;
    let unit = f.leading().ok_or(Error::ZeroPolynomial)?;
    let monic = f.monic(field);
    let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&monic, field) {
        for (block, d) in distinct_degree(&part, field) {
            for prime in equal_degree(&block, d, field, &mut rng) {
                factors.push((prime, mult));
            }
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Rabin's test over `F_q`: `X^{q^d} = X mod f` and
/// `gcd(X^{q^{d/r}} - X, f) = 1` for every prime `r | d`.
pub fn is_irreducible(f: &Poly, field: &FieldCtx) -> bool {
    let Some(d) = f.degree() else {
        return false;
    };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if f.coeffs[0].is_zero() {
        return false;
    }
    let f = f.monic(field);
    let q = field.order() as u64;
    let x = Poly::x(field);
    let mut frob = Vec::with_capacity(d + 1);
    frob.push(x.rem(&f, field));
    for _ in 0..d {
        let next = frob.last().unwrap().pow_mod(q, &f, field);
        frob.push(next);
    }
    if frob[d] != frob[0] {
        return false;
    }
    arith::prime_divisors(d as u64).into_iter().all(|r| {
        let h = frob[d / r as usize].sub(&x, field);
        h.gcd(&f, field).is_one()
    })
}

/// `f = prod a_i^i` with each `a_i` squarefree and pairwise coprime.
fn squarefree_decomposition(f: &Poly, field: &FieldCtx) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let p = field.characteristic();
    let df = f.derivative(field);
    if df.is_zero() {
        let root = pth_root(f, field);
        for (g, m) in squarefree_decomposition(&root, field) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&df, field);
    let mut w = f.div_exact(&c, field);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c, field);
        let z = w.div_exact(&y, field);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w, field);
    }
    if !c.is_one() {
        let root = pth_root(&c, field);
        for (g, m) in squarefree_decomposition(&root, field) {
            out.push((g, m * p));
        }
    }
    out
}

/// For `f(X) = g(X^p)`, returns the `h` with `h^p = f`.
fn pth_root(f: &Poly, field: &FieldCtx) -> Poly {
    let p = field.characteristic() as usize;
    // a -> a^{Q/p} inverts a -> a^p on F_Q.
    let e = field.order() as u64 / p as u64;
    let coeffs = f
        .coeffs
        .iter()
        .step_by(p)
        .map(|&c| field.pow(c, e))
        .collect();
    Poly::from_coeffs(field, coeffs)
}

/// Splits a squarefree monic `f` into products of primes of equal degree.
fn distinct_degree(f: &Poly, field: &FieldCtx) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let q = field.order() as u64;
    let x = Poly::x(field);
    let mut rest = f.clone();
    let mut h = x.rem(&rest, field);
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(q, &rest, field);
        let g = h.sub(&x, field).gcd(&rest, field);
        if !g.is_one() {
            rest = rest.div_exact(&g, field);
            h = h.rem(&rest, field);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

fn random_poly(deg_bound: usize, field: &FieldCtx, rng: &mut ChaCha8Rng) -> Poly {
    let coeffs = (0..deg_bound)
        .map(|_| field.elem(rng.gen_range(0..field.order())).unwrap())
        .collect();
    Poly::from_coeffs(field, coeffs)
}

/// Cantor-Zassenhaus on a squarefree monic product of primes of degree `d`.
fn equal_degree(f: &Poly, d: usize, field: &FieldCtx, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let q = field.order() as u64;
    loop {
        let a = random_poly(n, field, rng);
        if a.is_constant() {
            continue;
        }
        let g = a.gcd(f, field);
        let splitter = if !g.is_one() {
            g
        } else if field.characteristic() == 2 {
            // Absolute trace of the residue field F_{q^d} down to F_2.
            let steps = field.degree() as usize * d;
            let mut t = a.rem(f, field);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = t.mul_mod(&t, f, field);
                acc = acc.add(&t, field);
            }
            acc.gcd(f, field)
        } else {
            // a^{(q^d - 1)/2} = (a^{1 + q + ... + q^{d-1}})^{(q-1)/2}
            let mut t = a.rem(f, field);
            let mut norm = t.clone();
            for _ in 1..d {
                t = t.pow_mod(q, f, field);
                norm = norm.mul_mod(&t, f, field);
            }
            let b = norm.pow_mod((q - 1) / 2, f, field);
            b.sub(&Poly::one(field), field).gcd(f, field)
        };
        if splitter.deg() > 0 && splitter.deg() < n {
            let other = f.div_exact(&splitter, field);
            let mut out = equal_degree(&splitter, d, field, rng);
            out.extend(equal_degree(&other, d, field, rng));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqpoly::primes_with_degree;

    #[test]
    fn factor_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let p = Poly::parse(&f2, "1,1,1").unwrap();
        let fac = factor(&p, &f2).unwrap();
        assert_eq!(fac.factors, vec![(p.clone(), 1)]);
        assert_eq!(fac.unit, f2.one());

        let cube = p.pow(3, &f2);
        assert_eq!(factor(&cube, &f2).unwrap().factors, vec![(p.clone(), 3)]);

        let f4 = FieldCtx::new(2, 2).unwrap();
        let w = f4.generator();
        let w2 = f4.mul(w, w);
        let q = Poly::from_literals(&f4, &[1, 1, 1]).unwrap();
        let fac = factor(&q, &f4).unwrap();
        assert_eq!(
            fac.factors,
            vec![(Poly::x_plus(&f4, w), 1), (Poly::x_plus(&f4, w2), 1)]
        );
        assert_eq!(fac.to_string(), "(2,1)^1 * (3,1)^1");

        assert_eq!(factor(&Poly::zero(&f2), &f2).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn factor_keeps_unit_and_pth_powers() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        // 2 (X + 1)^3 (X^2 + 1)^2 over F_3: derivative of the cube part vanishes.
        let a = Poly::parse(&f3, "1,1").unwrap();
        let b = Poly::parse(&f3, "1,0,1").unwrap();
        let f = a.pow(3, &f3).mul(&b.pow(2, &f3), &f3).scale(f3.elem(2).unwrap(), &f3);
        let fac = factor(&f, &f3).unwrap();
        assert_eq!(fac.unit.literal(), 2);
        assert_eq!(fac.factors, vec![(a, 3), (b, 2)]);
        assert_eq!(fac.product(&f3), f);
    }

    #[test]
    fn factor_round_trips_random_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, k) in [(2, 1), (3, 1), (2, 2)] {
            let field = FieldCtx::new(p, k).unwrap();
            let mut pool = Vec::new();
            for d in 1..=4 {
                pool.extend(primes_with_degree(&field, d).unwrap());
            }
            for _ in 0..60 {
                let count = rng.gen_range(1..=4);
                let mut f = Poly::one(&field);
                let mut expected: Vec<(Poly, u32)> = Vec::new();
                for _ in 0..count {
                    let pr = pool[rng.gen_range(0..pool.len())].clone();
                    f = f.mul(&pr, &field);
                    match expected.iter_mut().find(|(q, _)| *q == pr) {
                        Some(e) => e.1 += 1,
                        None => expected.push((pr, 1)),
                    }
                }
                expected.sort();
                let fac = factor(&f, &field).unwrap();
                assert_eq!(fac.factors, expected);
                assert_eq!(fac.product(&field), f);
                // Idempotent under refactoring the product.
                assert_eq!(factor(&fac.product(&field), &field).unwrap(), fac);
            }
        }
    }

    #[test]
    fn irreducibility_agrees_with_factorization() {
        let field = FieldCtx::new(3, 1).unwrap();
        for m in 0..243u32 {
            let mut lits = Vec::new();
            let mut r = m;
            for _ in 0..5 {
                lits.push(r % 3);
                r /= 3;
            }
            lits.push(1);
            let f = Poly::from_literals(&field, &lits).unwrap();
            let fac = factor(&f, &field).unwrap();
            let irreducible = fac.factors.len() == 1 && fac.factors[0].1 == 1;
            assert_eq!(is_irreducible(&f, &field), irreducible, "{f}");
        }
    }
}
