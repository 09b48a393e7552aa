//! Exact arithmetic in small finite fields `F_{p^k}`.
//!
//! Elements are stored as their *integer literal*: the base-`p` digits of the
//! literal, least significant first, are the coordinates in the power basis
//! `1, t, ..., t^{k-1}` of `F_p[t]/(modulus)`. Multiplication, inversion and
//! powers go through discrete-log tables; addition in odd characteristic goes
//! through the Zech logarithm `Z(i) = log(1 + g^i)`.
//!
//! Every context is fully determined by `(p, k)`: the modulus is the monic
//! irreducible polynomial of degree `k` whose ascending coefficient vector is
//! lexicographically least, and the generator is the least literal of full
//! multiplicative order. This pins the order-`l` character `chi_l` by
//! `chi_l(generator) = zeta_l`.
//!
//! ```
//! use cyclic_covers::gf::FieldCtx;
//!
//! let f4 = FieldCtx::new(2, 2).unwrap();
//! assert_eq!(f4.modulus(), &[1, 1, 1]);
//! let w = f4.generator();
//! assert_eq!(f4.mul(w, w), f4.add(w, f4.one()));
//! ```

use std::fmt;

use crate::arith;
use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// Identifies a field by `(p, k)`. Two contexts with the same id encode
/// elements identically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CtxId(u32);

impl CtxId {
    fn new(p: u32, k: u32) -> Self {
        CtxId(p * 64 + k)
    }
}

/// An element of some [`FieldCtx`]. Ordered by integer literal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    lit: u32,
    ctx: CtxId,
}

impl FieldElem {
    pub fn literal(self) -> u32 {
        self.lit
    }

    pub fn ctx_id(self) -> CtxId {
        self.ctx
    }

    pub fn is_zero(self) -> bool {
        self.lit == 0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lit)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lit)
    }
}

/// Value of an order-`l` character: `Zero` on non-units, otherwise the
/// exponent `e` in `chi(a) = zeta_l^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharClass {
    Zero,
    Exp(u32),
}

impl CharClass {
    /// `sum_{w=0}^{l-1} chi(a)^w` as an exact integer: `l` when the class is
    /// trivial, `0` for any other unit class.
    ///
    /// For `Zero` every power with `w >= 1` vanishes and the `w = 0` term is
    /// taken as the trivial character, which is `0` on non-units too.
    pub fn zeta_sum(self, ell: u32) -> u32 {
        match self {
            CharClass::Exp(0) => ell,
            _ => 0,
        }
    }

    pub fn exponent(self) -> Option<u32> {
        match self {
            CharClass::Zero => None,
            CharClass::Exp(e) => Some(e),
        }
    }

    /// Multiplicative combination: exponents add, `Zero` absorbs.
    pub fn combine(self, other: CharClass, ell: u32) -> CharClass {
        match (self, other) {
            (CharClass::Exp(a), CharClass::Exp(b)) => CharClass::Exp((a + b) % ell),
            _ => CharClass::Zero,
        }
    }

    /// Class of the `r`-th power.
    pub fn scale(self, r: u32, ell: u32) -> CharClass {
        match self {
            CharClass::Exp(a) => CharClass::Exp(((a as u64 * r as u64) % ell as u64) as u32),
            CharClass::Zero => CharClass::Zero,
        }
    }
}

/// Arithmetic context for `F_{p^k}`. Immutable after construction.
pub struct FieldCtx {
    id: CtxId,
    p: u32,
    k: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one_log: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl FieldCtx {
    /// Builds `F_{p^k}` with the canonical modulus and generator.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !arith::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::TooLarge {
                order: 1,
                bound: MAX_FIELD_ORDER,
            });
        }
        let order = arith::checked_pow_bounded(p as u64, k, MAX_FIELD_ORDER).ok_or(
            Error::TooLarge {
                order: (p as u64).saturating_pow(k),
                bound: MAX_FIELD_ORDER,
            },
        )? as u32;

        let modulus = canonical_modulus(p, k);
        debug_assert!(prime_field::is_irreducible(&modulus, p));
        let digits = Digits { p, k, modulus: &modulus };

        let units = order - 1;
        let cofactors: Vec<u64> = arith::prime_divisors(units as u64)
            .into_iter()
            .map(|r| units as u64 / r)
            .collect();
        let generator = (1..order)
            .find(|&g| {
                digits.pow(g, units as u64) == 1
                    && cofactors.iter().all(|&c| digits.pow(g, c) != 1)
            })
            .expect("a finite field has a primitive element");

        let mut exp = Vec::with_capacity(units as usize);
        let mut log = vec![NO_LOG; order as usize];
        let mut x = 1u32;
        for i in 0..units {
            assert!(
                log[x as usize] == NO_LOG,
                "generator {generator} of F_{p}^{k} has order {i} < {units}"
            );
            exp.push(x);
            log[x as usize] = i;
            x = digits.mul(x, generator);
        }
        assert_eq!(x, 1, "generator order does not divide p^k - 1");

        let mut zech = vec![NO_LOG; units as usize];
        for (i, z) in zech.iter_mut().enumerate() {
            let s = digits.add(1, exp[i]);
            if s != 0 {
                *z = log[s as usize];
            }
        }
        let neg_one_log = if p == 2 { 0 } else { units / 2 };

        Ok(FieldCtx {
            id: CtxId::new(p, k),
            p,
            k,
            order,
            modulus,
            generator,
            exp,
            log,
            zech,
            neg_one_log,
        })
    }

    pub fn id(&self) -> CtxId {
        self.id
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Ascending coefficients of the defining polynomial (length `k + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElem {
        self.wrap(self.generator)
    }

    pub fn zero(&self) -> FieldElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElem {
        self.wrap(1)
    }

    /// Element from its integer literal.
    pub fn elem(&self, lit: u32) -> Result<FieldElem> {
        if lit >= self.order {
            return Err(Error::Parse(format!(
                "literal {lit} out of range for a field of order {}",
                self.order
            )));
        }
        Ok(self.wrap(lit))
    }

    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        let lit: u32 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field element literal {s:?}")))?;
        self.elem(lit)
    }

    /// Coordinates in the power basis, lowest first.
    pub fn coords(&self, a: FieldElem) -> Vec<u32> {
        let mut lit = a.lit;
        (0..self.k)
            .map(|_| {
                let d = lit % self.p;
                lit /= self.p;
                d
            })
            .collect()
    }

    /// All elements in literal order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(|l| self.wrap(l))
    }

    pub fn units(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (1..self.order).map(|l| self.wrap(l))
    }

    /// `g^i` for the canonical generator `g`.
    pub fn gen_pow(&self, i: u64) -> FieldElem {
        self.wrap(self.exp[(i % (self.order as u64 - 1)) as usize])
    }

    /// Discrete log base the canonical generator.
    pub fn log(&self, a: FieldElem) -> Option<u32> {
        self.check(a);
        match self.log[a.lit as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    #[inline]
    fn wrap(&self, lit: u32) -> FieldElem {
        FieldElem { lit, ctx: self.id }
    }

    #[inline]
    fn check(&self, a: FieldElem) {
        debug_assert_eq!(a.ctx, self.id, "element from a different field");
    }

    pub fn owns(&self, a: FieldElem) -> bool {
        a.ctx == self.id
    }

    pub fn ensure_owns(&self, a: FieldElem) -> Result<()> {
        if self.owns(a) {
            Ok(())
        } else {
            Err(Error::CtxMismatch(format!(
                "element {} does not belong to F_{}^{}",
                a.lit, self.p, self.k
            )))
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        if self.p == 2 {
            return self.wrap(a.lit ^ b.lit);
        }
        if self.k == 1 {
            return self.wrap((a.lit + b.lit) % self.p);
        }
        if a.lit == 0 {
            return b;
        }
        if b.lit == 0 {
            return a;
        }
        let n = self.order - 1;
        let la = self.log[a.lit as usize];
        let lb = self.log[b.lit as usize];
        let d = if lb >= la { lb - la } else { lb + n - la };
        match self.zech[d as usize] {
            NO_LOG => self.zero(),
            z => {
                let s = la as u64 + z as u64;
                self.wrap(self.exp[(s % n as u64) as usize])
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.check(a);
        if self.p == 2 || a.lit == 0 {
            return a;
        }
        if self.k == 1 {
            return self.wrap(self.p - a.lit);
        }
        let n = self.order - 1;
        let l = self.log[a.lit as usize] + self.neg_one_log;
        self.wrap(self.exp[(l % n) as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        if a.lit == 0 || b.lit == 0 {
            return self.zero();
        }
        let n = self.order - 1;
        let s = self.log[a.lit as usize] + self.log[b.lit as usize];
        self.wrap(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        self.check(a);
        if a.lit == 0 {
            return None;
        }
        let n = self.order - 1;
        let l = self.log[a.lit as usize];
        Some(self.wrap(self.exp[((n - l) % n) as usize]))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        self.check(a);
        if e == 0 {
            return self.one();
        }
        if a.lit == 0 {
            return self.zero();
        }
        let n = (self.order - 1) as u64;
        let l = self.log[a.lit as usize] as u64;
        self.wrap(self.exp[((l * (e % n)) % n) as usize])
    }

    /// `a^q`, the `q`-power Frobenius, where the field order is a power of `q`.
    pub fn frobenius(&self, a: FieldElem, base_order: u32) -> Result<FieldElem> {
        self.ensure_owns(a)?;
        self.check_base_order(base_order)?;
        Ok(self.pow(a, base_order as u64))
    }

    /// Number of `q`-Frobenius steps that compose to the identity.
    pub fn check_base_order(&self, base_order: u32) -> Result<u32> {
        let mut m = 0;
        let mut acc: u64 = 1;
        if base_order >= 2 {
            while acc < self.order as u64 {
                acc *= base_order as u64;
                m += 1;
            }
        }
        if base_order < 2 || acc != self.order as u64 {
            return Err(Error::CtxMismatch(format!(
                "{} is not a power of the base order {base_order}",
                self.order
            )));
        }
        Ok(m)
    }

    /// Residue class of a unit under the order-`l` character pinned by
    /// `chi(generator) = zeta_l`: the discrete log mod `l`.
    pub fn lth_power_class(&self, a: FieldElem, ell: u32) -> Result<CharClass> {
        self.ensure_owns(a)?;
        if a.lit == 0 {
            return Err(Error::ZeroInput);
        }
        self.check_ell(ell)?;
        Ok(CharClass::Exp(self.log[a.lit as usize] % ell))
    }

    /// Like [`lth_power_class`](Self::lth_power_class) but total: zero maps to
    /// [`CharClass::Zero`]. Assumes `l | order - 1`.
    #[inline]
    pub fn char_class(&self, a: FieldElem, ell: u32) -> CharClass {
        self.check(a);
        debug_assert_eq!((self.order - 1) % ell, 0);
        match self.log[a.lit as usize] {
            NO_LOG => CharClass::Zero,
            l => CharClass::Exp(l % ell),
        }
    }

    pub fn check_ell(&self, ell: u32) -> Result<()> {
        if ell == 0 || (self.order - 1) % ell != 0 {
            return Err(Error::OrderMismatch {
                ell,
                units: self.order - 1,
            });
        }
        Ok(())
    }

    /// Schoolbook product in `F_p[t]/(modulus)` on coordinates, without the
    /// log tables. Used to cross-check the table arithmetic.
    pub fn mul_by_coords(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let d = Digits {
            p: self.p,
            k: self.k,
            modulus: &self.modulus,
        };
        self.wrap(d.mul(a.lit, b.lit))
    }

    /// Coordinatewise sum, without the Zech table.
    pub fn add_by_coords(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let d = Digits {
            p: self.p,
            k: self.k,
            modulus: &self.modulus,
        };
        self.wrap(d.add(a.lit, b.lit))
    }
}

/// Field embedding `F_q -> F_Q` with `Q = q^n`.
///
/// The image of the small generator is `G^{j (Q-1)/(q-1)}` for the least
/// `j >= 1` that makes the map additive; usually `j = 1`. The map is stored as
/// a table indexed by the small literal, with the inverse for restriction.
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    small: CtxId,
    big: CtxId,
    small_order: u32,
    big_order: u32,
    multiplier: u64,
    forward: Vec<FieldElem>,
}

impl FieldEmbedding {
    pub fn new(small: &FieldCtx, big: &FieldCtx) -> Result<Self> {
        let not_sub = || Error::NotASubfield {
            small: small.order,
            big: big.order,
        };
        if small.p != big.p || big.k % small.k != 0 {
            return Err(not_sub());
        }
        let q = small.order as u64;
        let big_units = big.order as u64 - 1;
        let small_units = q - 1;
        let step = big_units / small_units;
        for j in 1..=small_units.max(1) {
            if num_integer::gcd(j, small_units.max(1)) != 1 {
                continue;
            }
            let mut forward = vec![big.zero(); small.order as usize];
            for lit in 1..small.order {
                let l = small.log[lit as usize] as u64;
                forward[lit as usize] = big.gen_pow(l * j * step);
            }
            let additive = (1..small.order).all(|lit| {
                let a = small.wrap(lit);
                let sum = small.add(small.one(), a);
                forward[sum.lit as usize] == big.add(big.one(), forward[lit as usize])
            });
            if additive {
                return Ok(FieldEmbedding {
                    small: small.id,
                    big: big.id,
                    small_order: small.order,
                    big_order: big.order,
                    multiplier: j * step,
                    forward,
                });
            }
        }
        Err(not_sub())
    }

    /// Exponent `e` with `embed(g_small) = G^e`.
    pub fn generator_exponent(&self) -> u64 {
        self.multiplier
    }

    pub fn small_id(&self) -> CtxId {
        self.small
    }

    pub fn big_id(&self) -> CtxId {
        self.big
    }

    pub fn embed(&self, a: FieldElem) -> Result<FieldElem> {
        if a.ctx != self.small {
            return Err(Error::NotASubfield {
                small: self.small_order,
                big: self.big_order,
            });
        }
        Ok(self.forward[a.lit as usize])
    }

    #[inline]
    pub(crate) fn embed_unchecked(&self, a: FieldElem) -> FieldElem {
        debug_assert_eq!(a.ctx, self.small);
        self.forward[a.lit as usize]
    }

    /// Preimage of a big-field element lying in the image, if any.
    pub fn restrict(&self, a: FieldElem) -> Option<FieldElem> {
        if a.ctx != self.big {
            return None;
        }
        self.forward
            .iter()
            .position(|&x| x == a)
            .map(|i| FieldElem {
                lit: i as u32,
                ctx: self.small,
            })
    }
}

/// Lexicographically least monic irreducible of degree `k` over `F_p`,
/// compared on the ascending coefficient vector.
fn canonical_modulus(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(k);
    for m in 0..count {
        // a_0 is the most significant digit of m.
        let mut coeffs = vec![0u32; k as usize + 1];
        let mut rest = m;
        for i in (0..k as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[k as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        if prime_field::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Literal arithmetic on coordinate vectors, used only while building tables.
struct Digits<'a> {
    p: u32,
    k: u32,
    modulus: &'a [u32],
}

impl Digits<'_> {
    fn split(&self, mut lit: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let d = lit % self.p;
                lit /= self.p;
                d
            })
            .collect()
    }

    fn join(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.split(a), self.split(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.join(&s)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.split(a), self.split(b));
        let k = self.k as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * k];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p;
            }
        }
        // The modulus is monic: t^k = -sum_{i<k} m_i t^i.
        for top in (k..2 * k).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..k {
                let m = self.modulus[i] as u64;
                prod[top - k + i] = (prod[top - k + i] + (p - c) * m) % p;
            }
        }
        let out: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.join(&out)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Dense polynomials over a prime field, just enough for Rabin's test.
mod prime_field {
    use crate::arith;

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lead = arith::inv_mod(m[dm], p).expect("nonzero leading coefficient");
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * inv_lead % p;
            for i in 0..=dm {
                let idx = top - dm + i;
                r[idx] = (r[idx] + (p - c) * m[i]) % p;
            }
            trim(&mut r);
        }
        r
    }

    fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, m, p);
        let mut acc = rem(&[1], m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Rabin: `f` of degree `k` is irreducible iff `X^{p^k} = X mod f` and
    /// `gcd(X^{p^{k/r}} - X, f) = 1` for each prime `r | k`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let m: Vec<u64> = f.iter().map(|&c| c as u64).collect();
        let p = p as u64;
        let k = m.len() as u64 - 1;
        if k == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut frob = vec![rem(&x, &m, p)];
        for _ in 0..k {
            let next = powmod(frob.last().unwrap(), p, &m, p);
            frob.push(next);
        }
        if frob[k as usize] != rem(&x, &m, p) {
            return false;
        }
        for r in arith::prime_divisors(k) {
            let mut h = frob[(k / r) as usize].clone();
            h.resize(h.len().max(2), 0);
            h[1] = (h[1] + p - 1) % p;
            let g = gcd(&h, &m, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_f2() {
        let f = FieldCtx::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 2);
        assert_eq!(f.generator().literal(), 1);
        assert_eq!(f.add(f.one(), f.one()), f.zero());
    }

    #[test]
    fn f4_modulus_and_generator() {
        let f = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let w = f.generator();
        assert_eq!(w.literal(), 2);
        let w2 = f.mul(w, w);
        assert_eq!(w2.literal(), 3);
        assert_eq!(f.mul(w2, w), f.one());
    }

    #[test]
    fn f81_generator_has_full_order() {
        let f = FieldCtx::new(3, 4).unwrap();
        let g = f.generator();
        let mut x = g;
        let mut ord = 1;
        while x != f.one() {
            x = f.mul_by_coords(x, g);
            ord += 1;
        }
        assert_eq!(ord, 80);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            FieldCtx::new(2, 21).unwrap_err(),
            Error::TooLarge { .. }
        ));
        assert!(matches!(
            FieldCtx::new(3, 13).unwrap_err(),
            Error::TooLarge { .. }
        ));
    }

    #[test]
    fn same_parameters_same_encoding() {
        let a = FieldCtx::new(5, 2).unwrap();
        let b = FieldCtx::new(5, 2).unwrap();
        assert_eq!(a.id(), b.id());
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.generator(), b.generator());
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(a.mul(x, y), b.mul(x, y));
            }
        }
    }

    #[test]
    fn canonical_moduli_are_lex_least() {
        // Ascending (1, 0, 1, 1) = 1 + t^2 + t^3 precedes 1 + t + t^3.
        assert_eq!(FieldCtx::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
        // Over F_3: t^2 + 1 is irreducible (-1 is a non-square) and least.
        assert_eq!(FieldCtx::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // Over F_5: t^2 + 1 splits (2^2 = -1); t^2 + t + 1 has discriminant -3,
        // a non-square.
        assert_eq!(FieldCtx::new(5, 2).unwrap().modulus(), &[1, 1, 1]);
    }

    fn fields() -> Vec<FieldCtx> {
        [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (3, 4)]
            .iter()
            .map(|&(p, k)| FieldCtx::new(p, k).unwrap())
            .collect()
    }

    #[test]
    fn table_arithmetic_matches_coordinates() {
        for f in fields() {
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_by_coords(a, b));
                    assert_eq!(f.add(a, b), f.add_by_coords(a, b));
                    assert_eq!(f.add(f.sub(a, b), b), a);
                }
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if let Some(i) = f.inv(a) {
                    assert_eq!(f.mul(a, i), f.one());
                }
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let w = f4.generator();
        assert_eq!(f4.frobenius(w, 2).unwrap(), f4.mul(w, w));
        assert_eq!(f4.frobenius(f4.one(), 2).unwrap(), f4.one());
        let f81 = FieldCtx::new(3, 4).unwrap();
        for a in f81.elements() {
            let mut x = a;
            for _ in 0..4 {
                x = f81.frobenius(x, 3).unwrap();
            }
            assert_eq!(x, a);
        }
        assert!(f81.frobenius(f81.one(), 2).is_err());
        assert!(f81.frobenius(f4.one(), 3).is_err());
    }

    #[test]
    fn frobenius_is_automorphism() {
        for f in fields() {
            let q = f.characteristic();
            for a in f.elements() {
                for b in f.elements() {
                    let fa = f.frobenius(a, q).unwrap();
                    let fb = f.frobenius(b, q).unwrap();
                    assert_eq!(f.frobenius(f.add(a, b), q).unwrap(), f.add(fa, fb));
                    assert_eq!(f.frobenius(f.mul(a, b), q).unwrap(), f.mul(fa, fb));
                }
            }
        }
    }

    #[test]
    fn lth_power_class_examples() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let w = f4.generator();
        assert_eq!(f4.lth_power_class(f4.one(), 3).unwrap(), CharClass::Exp(0));
        assert_eq!(f4.lth_power_class(w, 3).unwrap(), CharClass::Exp(1));
        assert_eq!(f4.lth_power_class(f4.mul(w, w), 3).unwrap(), CharClass::Exp(2));
        assert_eq!(f4.lth_power_class(f4.zero(), 3).unwrap_err(), Error::ZeroInput);
        assert!(matches!(
            f4.lth_power_class(w, 5).unwrap_err(),
            Error::OrderMismatch { .. }
        ));

        let f81 = FieldCtx::new(3, 4).unwrap();
        let trivial = f81
            .units()
            .filter(|&a| f81.lth_power_class(a, 5).unwrap() == CharClass::Exp(0))
            .count();
        assert_eq!(trivial, 16);
    }

    #[test]
    fn lth_power_class_is_a_homomorphism() {
        for (p, k, ell) in [(2, 2, 3), (2, 4, 5), (2, 4, 3), (5, 2, 3), (3, 4, 5), (2, 10, 3), (2, 10, 11)] {
            let f = FieldCtx::new(p, k).unwrap();
            let q = p;
            for a in f.units() {
                let ca = f.lth_power_class(a, ell).unwrap();
                assert_eq!(f.lth_power_class(f.pow(a, ell as u64), ell).unwrap(), CharClass::Exp(0));
                let fa = f.frobenius(a, q).unwrap();
                assert_eq!(f.lth_power_class(fa, ell).unwrap(), ca.scale(q, ell));
                if f.order() <= 256 {
                    for b in f.units() {
                        let cb = f.lth_power_class(b, ell).unwrap();
                        assert_eq!(
                            f.lth_power_class(f.mul(a, b), ell).unwrap(),
                            ca.combine(cb, ell)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exhaustive_homomorphism_at_order_1024() {
        let f = FieldCtx::new(2, 10).unwrap();
        let ell = 3;
        let cls: Vec<u32> = f
            .elements()
            .map(|a| f.char_class(a, ell).exponent().unwrap_or(u32::MAX))
            .collect();
        for a in f.units() {
            for b in f.units() {
                let c = f.mul(a, b);
                assert_eq!(cls[c.literal() as usize], (cls[a.literal() as usize] + cls[b.literal() as usize]) % ell);
            }
        }
    }

    #[test]
    fn embeddings_are_field_homomorphisms() {
        for (p, k, n) in [(2, 1, 2), (5, 1, 2), (3, 1, 4), (2, 2, 2), (3, 2, 2), (7, 1, 3)] {
            let small = FieldCtx::new(p, k).unwrap();
            let big = FieldCtx::new(p, k * n).unwrap();
            let e = FieldEmbedding::new(&small, &big).unwrap();
            let q = small.order();
            for a in small.elements() {
                let ea = e.embed(a).unwrap();
                assert_eq!(big.frobenius(ea, q).unwrap(), ea);
                assert_eq!(e.restrict(ea), Some(a));
                for b in small.elements() {
                    let eb = e.embed(b).unwrap();
                    assert_eq!(e.embed(small.add(a, b)).unwrap(), big.add(ea, eb));
                    assert_eq!(e.embed(small.mul(a, b)).unwrap(), big.mul(ea, eb));
                }
            }
        }
        let f8 = FieldCtx::new(2, 3).unwrap();
        let f16 = FieldCtx::new(2, 4).unwrap();
        assert!(matches!(
            FieldEmbedding::new(&f8, &f16).unwrap_err(),
            Error::NotASubfield { .. }
        ));
    }

    #[test]
    fn zeta_sum_rule() {
        assert_eq!(CharClass::Exp(0).zeta_sum(3), 3);
        assert_eq!(CharClass::Exp(2).zeta_sum(3), 0);
        assert_eq!(CharClass::Zero.zeta_sum(3), 0);
    }
}
