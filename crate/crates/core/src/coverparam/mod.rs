//! From `(q, l, g)` to concrete cover data.
//!
//! A cover is described by a tuple `(f_1, ..., f_{l-1})` of monic,
//! squarefree, pairwise coprime polynomials over `F_q` whose prime factors
//! all have degree divisible by `n_q = ord_l(q)`, together with a twist
//! `b` in `F_Q^*`, `Q = q^{n_q}`. Over `F_Q` each prime `P` of the tuple
//! splits into `n_q` conjugates `P_1, ..., P_{n_q}` with `P_{j+1}` the
//! coefficientwise `q`-th power of `P_j`; the twisted model is
//! `F_v0 = prod_j (b_j F_j)^{v_j}` with `F_j = prod_P P_j^{slot(P)}`,
//! `b_j = b^{q^{j-1}}` and `v_j = q^{1-j} mod l`.

mod enumerate;
mod sample;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::fqpoly::{self, factor, poly_frobenius, primes_with_degree, Poly};
use crate::gf::{CharClass, FieldCtx, FieldElem, FieldEmbedding};

pub use enumerate::{
    count_tuples, enumerate_tuples, prime_subsets, slot_assignments, TupleIter,
    ENUMERATION_D_CAP,
};
pub use sample::{
    sample_params, sample_params_stream, sample_tuple, Sampler, SAMPLING_D_CAP,
};

/// Which conjugate of each Frobenius orbit is called `P_1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelingRule {
    /// Lexicographically least by ascending coefficient literals.
    #[default]
    Least,
    Greatest,
}

impl fmt::Display for LabelingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelingRule::Least => "least",
            LabelingRule::Greatest => "greatest",
        })
    }
}

impl std::str::FromStr for LabelingRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "least" => Ok(LabelingRule::Least),
            "greatest" => Ok(LabelingRule::Greatest),
            _ => Err(Error::Parse(format!("unknown labeling rule {s:?}"))),
        }
    }
}

/// `(q, l)` with `q` not `0, 1 mod l`, plus the fields `F_q` and `F_Q`.
///
/// Holds caches (prime lists, splittings over `F_Q`) behind locks, so share
/// it by reference across threads.
pub struct Regime {
    q: u32,
    ell: u32,
    n_q: u32,
    base: FieldCtx,
    ext: FieldCtx,
    embedding: FieldEmbedding,
    primes: RwLock<HashMap<usize, Arc<Vec<Poly>>>>,
    splits: RwLock<HashMap<Poly, Arc<Vec<Poly>>>>,
}

impl fmt::Debug for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Regime")
            .field("q", &self.q)
            .field("ell", &self.ell)
            .field("n_q", &self.n_q)
            .finish()
    }
}

pub fn make_regime(q: u32, ell: u32) -> Result<Regime> {
    Regime::new(q, ell)
}

impl Regime {
    pub fn new(q: u32, ell: u32) -> Result<Regime> {
        if !arith::is_prime(ell as u64) {
            return Err(Error::NotPrime(ell as u64));
        }
        let (p, k) = arith::prime_power(q as u64).ok_or(Error::NotPrimePower(q as u64))?;
        if p == ell as u64 {
            return Err(Error::CharacteristicDividesEll { q, ell });
        }
        if q % ell == 1 {
            return Err(Error::KummerRegime { q, ell });
        }
        let n_q = arith::mult_order(q as u64, ell as u64).expect("coprime") as u32;
        let base = FieldCtx::new(p as u32, k)?;
        let ext = FieldCtx::new(p as u32, k * n_q)?;
        let embedding = FieldEmbedding::new(&base, &ext)?;
        Ok(Regime {
            q,
            ell,
            n_q,
            base,
            ext,
            embedding,
            primes: RwLock::default(),
            splits: RwLock::default(),
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn n_q(&self) -> u32 {
        self.n_q
    }

    /// `Q = q^{n_q}`.
    pub fn big_q(&self) -> u32 {
        self.ext.order()
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn ext(&self) -> &FieldCtx {
        &self.ext
    }

    pub fn embedding(&self) -> &FieldEmbedding {
        &self.embedding
    }

    /// `v_j = q^{1-j} mod l` for `j = 1..=n_q`, minimal non-negative.
    pub fn twist_exponents(&self) -> Vec<u32> {
        let l = self.ell as u64;
        let qinv = arith::inv_mod(self.q as u64, l).expect("coprime");
        (0..self.n_q as u64)
            .map(|j| arith::pow_mod(qinv, j, l) as u32)
            .collect()
    }

    /// Cached, canonically sorted primes of degree `d` over `F_q`.
    pub fn primes(&self, d: usize) -> Result<Arc<Vec<Poly>>> {
        if let Some(v) = self.primes.read().unwrap().get(&d) {
            return Ok(v.clone());
        }
        let list = Arc::new(primes_with_degree(&self.base, d)?);
        self.primes.write().unwrap().insert(d, list.clone());
        Ok(list)
    }

    /// The `n_q` conjugate factors of a prime `P` over `F_Q`, sorted.
    pub fn split(&self, prime: &Poly) -> Result<Arc<Vec<Poly>>> {
        if let Some(v) = self.splits.read().unwrap().get(prime) {
            return Ok(v.clone());
        }
        let d = prime.deg();
        if d == 0 || d % self.n_q as usize != 0 {
            return Err(Error::InvalidTuple(format!(
                "prime {prime} has degree {d}, not divisible by n_q = {}",
                self.n_q
            )));
        }
        let big = fqpoly::embed(prime, &self.embedding, &self.ext)?;
        let fac = factor(&big, &self.ext)?;
        let parts: Vec<Poly> = fac.factors.into_iter().map(|(p, _)| p).collect();
        debug_assert_eq!(parts.len(), self.n_q as usize);
        let parts = Arc::new(parts);
        self.splits.write().unwrap().insert(prime.clone(), parts.clone());
        Ok(parts)
    }

    /// The Frobenius orbit `P_1, ..., P_{n_q}` of `prime` under `rule`.
    pub fn orbit(&self, prime: &Poly, rule: LabelingRule) -> Result<Vec<Poly>> {
        let parts = self.split(prime)?;
        let start = match rule {
            LabelingRule::Least => parts.first(),
            LabelingRule::Greatest => parts.last(),
        }
        .expect("nonempty split")
        .clone();
        let mut orbit = Vec::with_capacity(self.n_q as usize);
        orbit.push(start);
        for _ in 1..self.n_q {
            let next = poly_frobenius(orbit.last().unwrap(), self.q, &self.ext)?;
            orbit.push(next);
        }
        debug_assert!({
            let mut sorted = orbit.clone();
            sorted.sort();
            sorted == *parts
        });
        Ok(orbit)
    }

    /// `l`-th power residue class in `F_Q`; zero maps to `Zero`.
    pub fn class(&self, a: FieldElem) -> CharClass {
        self.ext.char_class(a, self.ell)
    }
}

/// True iff `f` is monic and every prime factor has degree divisible by `n`.
pub fn is_n_divisible(f: &Poly, n: u32, field: &FieldCtx) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Ok(false);
    }
    let fac = factor(f, field)?;
    Ok(fac.factors.iter().all(|(p, _)| p.deg() % n as usize == 0))
}

/// An element of the parameter space without its twist: the tuple
/// `(f_1, ..., f_{l-1})` and the prime-to-slot assignment behind it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tuple {
    /// `(prime, slot)` with slots in `1..l`, sorted by prime.
    assignment: Vec<(Poly, u32)>,
    parts: Vec<Poly>,
}

impl fmt::Debug for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tuple({self})")
    }
}

/// Semicolon-separated slot literals, the CLI tuple syntax.
impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl Tuple {
    /// Validates a user tuple: `l - 1` monic, squarefree, pairwise coprime,
    /// `n_q`-divisible polynomials over `F_q`.
    pub fn new(regime: &Regime, parts: Vec<Poly>) -> Result<Tuple> {
        let field = regime.base();
        if parts.len() != regime.ell as usize - 1 {
            return Err(Error::InvalidTuple(format!(
                "expected {} slots, got {}",
                regime.ell - 1,
                parts.len()
            )));
        }
        let mut assignment = Vec::new();
        for (i, f) in parts.iter().enumerate() {
            f.ensure_ctx(field)
                .map_err(|e| Error::InvalidTuple(format!("slot {}: {e}", i + 1)))?;
            if f.is_zero() || !f.is_monic() {
                return Err(Error::InvalidTuple(format!("f_{} = {f} is not monic", i + 1)));
            }
            let fac = factor(f, field)?;
            for (p, m) in fac.factors {
                if m > 1 {
                    return Err(Error::InvalidTuple(format!(
                        "f_{} is not squarefree: ({p})^{m} divides it",
                        i + 1
                    )));
                }
                if p.deg() % regime.n_q as usize != 0 {
                    return Err(Error::InvalidTuple(format!(
                        "f_{} has prime factor {p} of degree {}, not divisible by n_q = {}",
                        i + 1,
                        p.deg(),
                        regime.n_q
                    )));
                }
                assignment.push((p, i as u32 + 1));
            }
        }
        assignment.sort();
        for w in assignment.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidTuple(format!(
                    "f_{} and f_{} share the factor {}",
                    w[0].1, w[1].1, w[0].0
                )));
            }
        }
        Ok(Tuple { assignment, parts })
    }

    /// Builds a tuple from distinct primes with slots in `1..l`. The caller
    /// guarantees validity; enumeration and sampling go through here.
    pub fn from_assignment(regime: &Regime, mut assignment: Vec<(Poly, u32)>) -> Tuple {
        assignment.sort();
        let field = regime.base();
        let mut parts = vec![Poly::one(field); regime.ell as usize - 1];
        for (p, s) in &assignment {
            debug_assert!(*s >= 1 && *s < regime.ell);
            let slot = &mut parts[*s as usize - 1];
            *slot = slot.mul(p, field);
        }
        Tuple { assignment, parts }
    }

    /// Parses `"f_1;...;f_{l-1}"` with each slot a polynomial literal.
    pub fn parse(regime: &Regime, s: &str) -> Result<Tuple> {
        let parts = s
            .split(';')
            .map(|t| Poly::parse(regime.base(), t.trim()))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(regime, parts)
    }

    pub fn parts(&self) -> &[Poly] {
        &self.parts
    }

    pub fn assignment(&self) -> &[(Poly, u32)] {
        &self.assignment
    }

    /// `D = sum deg f_i`.
    pub fn degree(&self) -> usize {
        self.parts.iter().map(Poly::deg).sum()
    }

    /// `F = f_1 f_2^2 ... f_{l-1}^{l-1}`.
    pub fn product(&self, field: &FieldCtx) -> Poly {
        self.parts
            .iter()
            .enumerate()
            .fold(Poly::one(field), |acc, (i, f)| {
                acc.mul(&f.pow(i as u64 + 1, field), field)
            })
    }

    /// Applies `slot -> r * slot mod l`, `r` a unit mod `l`.
    pub fn scale_slots(&self, regime: &Regime, r: u32) -> Tuple {
        let l = regime.ell;
        let assignment = self
            .assignment
            .iter()
            .map(|(p, s)| (p.clone(), (s * r) % l))
            .collect();
        Tuple::from_assignment(regime, assignment)
    }

    pub fn with_b(self, b: FieldElem) -> CoverParams {
        CoverParams { tuple: self, b }
    }
}

/// A tuple together with its twist `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverParams {
    pub tuple: Tuple,
    pub b: FieldElem,
}

impl CoverParams {
    pub fn new(regime: &Regime, tuple: Tuple, b: FieldElem) -> Result<CoverParams> {
        if !regime.ext().owns(b) || b.is_zero() {
            return Err(Error::InvalidTuple(format!(
                "b = {b} must be a nonzero element of F_{}",
                regime.big_q()
            )));
        }
        Ok(CoverParams { tuple, b })
    }

    pub fn degree(&self) -> usize {
        self.tuple.degree()
    }
}

/// Genus `((l-1) D - 2l + 2) / 2`; `D = 0` has no curve.
pub fn genus_of(regime: &Regime, params: &CoverParams) -> Result<u64> {
    let d = params.degree() as i64;
    let l = regime.ell as i64;
    let twice = (l - 1) * d - 2 * l + 2;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::InvalidTuple(format!(
            "total degree {d} gives no curve for l = {l}"
        )));
    }
    Ok((twice / 2) as u64)
}

/// `D = (2g + 2l - 2)/(l - 1)` when it is integral and divisible by `n_q`.
pub fn admissible_d(regime: &Regime, g: u64) -> Option<u64> {
    let l = regime.ell as u64;
    let num = 2 * g + 2 * l - 2;
    if num % (l - 1) != 0 {
        return None;
    }
    let d = num / (l - 1);
    (d % regime.n_q as u64 == 0).then_some(d)
}

/// Like [`admissible_d`], with the reason spelled out when empty.
pub fn require_admissible_d(regime: &Regime, g: u64) -> Result<u64> {
    admissible_d(regime, g).ok_or_else(|| {
        Error::EmptyStratum(format!(
            "no admissible D for g = {g}, q = {}, l = {}: need (l-1) | 2g+2l-2 and n_q = {} | D",
            regime.q, regime.ell, regime.n_q
        ))
    })
}

/// `(F_1, ..., F_{n_q})` over `F_Q` with `prod F_j = F` and
/// `F_{j+1} = Frob_q(F_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableFactorization {
    pub parts: Vec<Poly>,
    pub rule: LabelingRule,
}

pub fn stable_factorization(
    regime: &Regime,
    tuple: &Tuple,
    rule: LabelingRule,
) -> Result<StableFactorization> {
    let ext = regime.ext();
    let mut parts = vec![Poly::one(ext); regime.n_q as usize];
    for (prime, slot) in tuple.assignment() {
        let orbit = regime.orbit(prime, rule)?;
        for (fj, pj) in parts.iter_mut().zip(&orbit) {
            *fj = fj.mul(&pj.pow(*slot as u64, ext), ext);
        }
    }
    Ok(StableFactorization { parts, rule })
}

/// Same result as [`stable_factorization`], but found by factoring the
/// scalar extension of `F` in one go and regrouping. Used as a cross-check.
pub fn stable_factorization_direct(
    regime: &Regime,
    tuple: &Tuple,
    rule: LabelingRule,
) -> Result<StableFactorization> {
    let ext = regime.ext();
    let n = regime.n_q as usize;
    let big = fqpoly::embed(&tuple.product(regime.base()), regime.embedding(), ext)?;
    let mut remaining = factor(&big, ext)?.factors;
    let mut parts = vec![Poly::one(ext); n];
    while !remaining.is_empty() {
        // Conjugates share a multiplicity; collect the orbit of the first
        // (least) remaining prime.
        let (seed, mult) = remaining[0].clone();
        let mut orbit = vec![seed];
        for _ in 1..n {
            orbit.push(poly_frobenius(orbit.last().unwrap(), regime.q, ext)?);
        }
        let start = match rule {
            LabelingRule::Least => orbit.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)),
            LabelingRule::Greatest => orbit.iter().enumerate().max_by(|a, b| a.1.cmp(b.1)),
        }
        .map(|(i, _)| i)
        .unwrap();
        for j in 0..n {
            let pj = &orbit[(start + j) % n];
            parts[j] = parts[j].mul(&pj.pow(mult as u64, ext), ext);
        }
        let before = remaining.len();
        remaining.retain(|(p, _)| !orbit.contains(p));
        if before - remaining.len() != n {
            return Err(Error::InvalidTuple(format!(
                "orbit of {} over F_{} has size {} instead of {n}",
                orbit[0],
                regime.big_q(),
                before - remaining.len()
            )));
        }
    }
    Ok(StableFactorization { parts, rule })
}

/// `F_v0 = prod_j (b_j F_j)^{v_j}` over `F_Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedModel {
    pub f_v0: Poly,
    pub exponents: Vec<u32>,
    pub rule: LabelingRule,
}

impl TwistedModel {
    pub fn leading(&self) -> FieldElem {
        self.f_v0.leading().expect("twisted model is nonzero")
    }
}

pub fn twisted_model(
    regime: &Regime,
    params: &CoverParams,
    rule: LabelingRule,
) -> Result<TwistedModel> {
    let ext = regime.ext();
    ext.ensure_owns(params.b)
        .map_err(|e| Error::InvalidTuple(format!("b: {e}")))?;
    if params.b.is_zero() {
        return Err(Error::InvalidTuple("b must be nonzero".into()));
    }
    let stable = stable_factorization(regime, &params.tuple, rule)?;
    let exponents = regime.twist_exponents();
    let mut f = Poly::one(ext);
    let mut bj = params.b;
    for (fj, &v) in stable.parts.iter().zip(&exponents) {
        let term = fj.scale(bj, ext).pow(v as u64, ext);
        f = f.mul(&term, ext);
        bj = ext.pow(bj, regime.q as u64);
    }
    let model = TwistedModel {
        f_v0: f,
        exponents,
        rule,
    };
    debug_assert_eq!(model.f_v0.deg() % regime.ell as usize, 0);
    debug_assert_eq!(
        regime.class(model.leading()),
        regime.class(ext.pow(params.b, regime.n_q as u64))
    );
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4_parts(regime: &Regime) -> (FieldElem, FieldElem) {
        let w = regime.ext().generator();
        (w, regime.ext().mul(w, w))
    }

    #[test]
    fn regime_examples() {
        assert_eq!(make_regime(2, 3).unwrap().n_q(), 2);
        assert_eq!(make_regime(3, 5).unwrap().n_q(), 4);
        assert_eq!(make_regime(5, 3).unwrap().n_q(), 2);
        assert_eq!(
            make_regime(4, 3).unwrap_err(),
            Error::KummerRegime { q: 4, ell: 3 }
        );
        assert_eq!(
            make_regime(9, 3).unwrap_err(),
            Error::CharacteristicDividesEll { q: 9, ell: 3 }
        );
        assert_eq!(make_regime(6, 5).unwrap_err(), Error::NotPrimePower(6));
        assert_eq!(make_regime(2, 9).unwrap_err(), Error::NotPrime(9));
        let r = make_regime(3, 5).unwrap();
        assert_eq!(r.twist_exponents(), vec![1, 2, 4, 3]);
        assert_eq!(r.big_q(), 81);
    }

    #[test]
    fn n_divisibility_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let p = |s| Poly::parse(&f2, s).unwrap();
        assert!(is_n_divisible(&p("1,1,1"), 2, &f2).unwrap());
        assert!(!is_n_divisible(&p("0,1"), 2, &f2).unwrap());
        assert!(is_n_divisible(&p("1"), 2, &f2).unwrap());
        assert_eq!(
            is_n_divisible(&Poly::zero(&f2), 2, &f2).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn genus_and_admissibility() {
        let r = make_regime(2, 3).unwrap();
        let t = Tuple::parse(&r, "1,1,1;1").unwrap();
        let params = t.with_b(r.ext().one());
        assert_eq!(genus_of(&r, &params).unwrap(), 0);
        assert_eq!(admissible_d(&r, 0), Some(2));
        assert_eq!(admissible_d(&r, 1), None);
        assert_eq!(admissible_d(&r, 8), Some(10));
        assert!(matches!(
            require_admissible_d(&r, 1),
            Err(Error::EmptyStratum(_))
        ));

        let r5 = make_regime(5, 3).unwrap();
        let quad = r5.primes(2).unwrap();
        let t = Tuple::from_assignment(&r5, vec![(quad[0].clone(), 1), (quad[1].clone(), 2)]);
        let params = t.with_b(r5.ext().one());
        assert_eq!(params.degree(), 4);
        assert_eq!(genus_of(&r5, &params).unwrap(), 2);

        let trivial = Tuple::parse(&r, "1;1").unwrap().with_b(r.ext().one());
        assert!(genus_of(&r, &trivial).is_err());
    }

    #[test]
    fn tuple_validation() {
        let r = make_regime(2, 3).unwrap();
        assert!(Tuple::parse(&r, "1,1,1;1").is_ok());
        // Linear factor.
        assert!(matches!(Tuple::parse(&r, "0,1;1"), Err(Error::InvalidTuple(_))));
        // Not coprime.
        assert!(matches!(Tuple::parse(&r, "1,1,1;1,1,1"), Err(Error::InvalidTuple(_))));
        // Not squarefree: (X^2+X+1)^2 = X^4+X^2+1.
        assert!(matches!(Tuple::parse(&r, "1,0,1,0,1;1"), Err(Error::InvalidTuple(_))));
        // Wrong slot count.
        assert!(matches!(Tuple::parse(&r, "1,1,1"), Err(Error::InvalidTuple(_))));
        let t = Tuple::parse(&r, "1;1,1,1").unwrap();
        assert_eq!(t.to_string(), "1;1,1,1");
        assert_eq!(t.assignment()[0].1, 2);
    }

    #[test]
    fn stable_factorization_of_the_f4_example() {
        let r = make_regime(2, 3).unwrap();
        let ext = r.ext();
        let (w, w2) = f4_parts(&r);
        let t = Tuple::parse(&r, "1,1,1;1").unwrap();
        let s = stable_factorization(&r, &t, LabelingRule::Least).unwrap();
        assert_eq!(s.parts, vec![Poly::x_plus(ext, w), Poly::x_plus(ext, w2)]);
        assert_eq!(poly_frobenius(&s.parts[0], 2, ext).unwrap(), s.parts[1]);
        let g = stable_factorization(&r, &t, LabelingRule::Greatest).unwrap();
        assert_eq!(g.parts, vec![Poly::x_plus(ext, w2), Poly::x_plus(ext, w)]);

        let one = Tuple::parse(&r, "1;1").unwrap();
        let s = stable_factorization(&r, &one, LabelingRule::Least).unwrap();
        assert!(s.parts.iter().all(Poly::is_one));
    }

    #[test]
    fn twisted_model_examples() {
        let r = make_regime(2, 3).unwrap();
        let ext = r.ext();
        let (w, w2) = f4_parts(&r);
        let t = Tuple::parse(&r, "1,1,1;1").unwrap();
        let expected = Poly::x_plus(ext, w).mul(&Poly::x_plus(ext, w2).pow(2, ext), ext);

        let m = twisted_model(&r, &t.clone().with_b(ext.one()), LabelingRule::Least).unwrap();
        assert_eq!(m.exponents, vec![1, 2]);
        assert_eq!(m.f_v0, expected);
        assert_eq!(m.f_v0.deg(), 3);

        let m = twisted_model(&r, &t.with_b(w), LabelingRule::Least).unwrap();
        assert_eq!(m.f_v0, expected.scale(w2, ext));
        assert_eq!(m.leading(), ext.pow(w, 2));

        let one = Tuple::parse(&r, "1;1").unwrap();
        let m = twisted_model(&r, &one.with_b(w), LabelingRule::Least).unwrap();
        assert_eq!(m.f_v0, Poly::constant(ext, w2));
    }

    #[test]
    fn leading_coefficient_is_b_to_the_n_up_to_lth_powers() {
        // For (5, 3) the exponent sum is 1 + 2*5 = 11, not n_q = 2; the
        // residue classes still agree since 11 = 2 mod 3.
        let r = make_regime(5, 3).unwrap();
        let ext = r.ext();
        let quad = r.primes(2).unwrap();
        let t = Tuple::from_assignment(&r, vec![(quad[3].clone(), 2)]);
        for b in ext.units().step_by(5) {
            let m = twisted_model(&r, &t.clone().with_b(b), LabelingRule::Least).unwrap();
            assert_eq!(m.leading(), ext.pow(b, 11));
            assert_eq!(r.class(m.leading()), r.class(ext.pow(b, 2)));
        }
    }

    #[test]
    fn direct_and_orbitwise_factorizations_agree() {
        for (q, ell, dmax) in [(2, 3, 8), (5, 3, 4), (3, 5, 4), (2, 5, 8)] {
            let r = make_regime(q, ell).unwrap();
            for d in 0..=dmax {
                for t in enumerate_tuples(&r, d).unwrap() {
                    for rule in [LabelingRule::Least, LabelingRule::Greatest] {
                        let a = stable_factorization(&r, &t, rule).unwrap();
                        let b = stable_factorization_direct(&r, &t, rule).unwrap();
                        assert_eq!(a, b, "{t}");
                        let prod = a
                            .parts
                            .iter()
                            .fold(Poly::one(r.ext()), |acc, f| acc.mul(f, r.ext()));
                        let big =
                            fqpoly::embed(&t.product(r.base()), r.embedding(), r.ext()).unwrap();
                        assert_eq!(prod, big);
                        for j in 0..a.parts.len() {
                            let next = &a.parts[(j + 1) % a.parts.len()];
                            assert_eq!(&poly_frobenius(&a.parts[j], q, r.ext()).unwrap(), next);
                            for k in j + 1..a.parts.len() {
                                assert!(a.parts[j].gcd(&a.parts[k], r.ext()).is_one());
                            }
                        }
                    }
                }
            }
        }
    }
}
