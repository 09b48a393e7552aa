//! Characters `chi_w` modulo `prod (X - x_i)`, their L-polynomials over
//! `F_Q(X)`, and the Euler products counting tuples with prescribed
//! character values at finitely many points.
//!
//! All coefficients live in `Z[zeta_l]` and are exact; floating point only
//! appears when locating roots.

mod cyclo;
mod roots;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::coverparam::{enumerate_tuples, twisted_model, LabelingRule, Regime};
use crate::error::{Error, Result};
use crate::fqpoly::Poly;
use crate::gf::{CharClass, FieldElem};

pub use cyclo::{CycloInt, SeriesPoly};
pub use roots::complex_roots;

/// Largest truncation accepted by [`g_series`].
pub const G_SERIES_CAP: usize = 24;

/// Largest number of monic polynomials summed for one L coefficient.
pub const L_COEFF_BUDGET: u64 = 1 << 24;

/// `chi_w(f) = prod_i chi(f(x_i))^{w_i}` on `F_Q[X]`, zero unless `f` is
/// prime to every `X - x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharW {
    points: Vec<FieldElem>,
    w: Vec<u32>,
    /// The points as elements of `F_Q`.
    embedded: Vec<FieldElem>,
    ell: u32,
}

impl CharW {
    pub fn new(regime: &Regime, points: Vec<FieldElem>, w: Vec<u32>) -> Result<CharW> {
        if points.len() != w.len() {
            return Err(Error::Parse(format!(
                "{} points but {} exponents",
                points.len(),
                w.len()
            )));
        }
        let ell = regime.ell();
        if let Some(bad) = w.iter().find(|&&wi| wi >= ell) {
            return Err(Error::Parse(format!("exponent {bad} is not in 0..{ell}")));
        }
        let mut sorted: Vec<u32> = points.iter().map(|p| p.literal()).collect();
        sorted.sort_unstable();
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::Parse("points must be distinct".into()));
        }
        let embedded = points
            .iter()
            .map(|&x| regime.embedding().embed(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(CharW {
            points,
            w,
            embedded,
            ell,
        })
    }

    /// From comma-separated literal lists, e.g. `"0,1"` and `"1,1"`.
    pub fn parse(regime: &Regime, points: &str, w: &str) -> Result<CharW> {
        let pts = split_list(points)?
            .into_iter()
            .map(|lit| regime.base().elem(lit))
            .collect::<Result<Vec<_>>>()?;
        CharW::new(regime, pts, split_list(w)?)
    }

    pub fn points(&self) -> &[FieldElem] {
        &self.points
    }

    pub fn w(&self) -> &[u32] {
        &self.w
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.w.iter().all(|&wi| wi == 0)
    }

    /// `chi_w` as an exponent of `zeta_l`, from the values `f(x_i)`.
    fn class_of_values(&self, regime: &Regime, values: &[FieldElem]) -> CharClass {
        let mut acc = CharClass::Exp(0);
        for (&v, &wi) in values.iter().zip(&self.w) {
            let c = regime.class(v);
            if c == CharClass::Zero {
                return CharClass::Zero;
            }
            acc = acc.combine(c.scale(wi, self.ell), self.ell);
        }
        acc
    }

    /// `chi_w(f)` for `f` over `F_Q`.
    pub fn eval(&self, regime: &Regime, f: &Poly) -> CharClass {
        let ext = regime.ext();
        let values: Vec<FieldElem> = self
            .embedded
            .iter()
            .map(|&x| f.eval_unchecked(x, ext))
            .collect();
        self.class_of_values(regime, &values)
    }
}

fn split_list(s: &str) -> Result<Vec<u32>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
        })
        .collect()
}

/// `c_n = sum over monic f of degree n over F_Q of chi(f)`.
pub fn l_coefficient(regime: &Regime, chi: &CharW, n: usize) -> Result<CycloInt> {
    let ext = regime.ext();
    let big_q = ext.order() as u64;
    let total = crate::arith::checked_pow_bounded(big_q, n as u32, L_COEFF_BUDGET).ok_or_else(|| {
        Error::BudgetExceeded(format!(
            "summing over {big_q}^{n} monic polynomials exceeds {L_COEFF_BUDGET}"
        ))
    })?;
    let ell = regime.ell() as usize;
    // Powers x_i^j for j = 0..=n.
    let powers: Vec<Vec<FieldElem>> = chi
        .embedded
        .iter()
        .map(|&x| (0..=n as u64).map(|j| ext.pow(x, j)).collect())
        .collect();
    let counts = (0..total)
        .into_par_iter()
        .fold(
            || vec![0i128; ell],
            |mut acc, m| {
                let mut values: Vec<FieldElem> = powers.iter().map(|p| p[n]).collect();
                let mut rest = m;
                for j in 0..n {
                    let a = ext.elem((rest % big_q) as u32).unwrap();
                    rest /= big_q;
                    if a.is_zero() {
                        continue;
                    }
                    for (v, p) in values.iter_mut().zip(&powers) {
                        *v = ext.add(*v, ext.mul(a, p[j]));
                    }
                }
                if let CharClass::Exp(e) = chi.class_of_values(regime, &values) {
                    acc[e as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0i128; ell],
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        );
    Ok(CycloInt::from_counts(&counts))
}

/// The L-polynomial of a nontrivial `chi_w`, of degree below `k`. The
/// coefficients for `n = k, k+1, k+2` are computed too and must vanish.
pub fn l_polynomial(regime: &Regime, chi: &CharW) -> Result<SeriesPoly> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let k = chi.k();
    let mut coeffs = Vec::with_capacity(k);
    for n in 0..k {
        coeffs.push(l_coefficient(regime, chi, n)?);
    }
    for n in k..k + 3 {
        let c = l_coefficient(regime, chi, n)?;
        if !c.is_zero() {
            return Err(Error::CrossCheckMismatch(format!(
                "L coefficient c_{n} = {c} should vanish for a character of modulus degree {k}"
            )));
        }
    }
    Ok(SeriesPoly {
        coeffs,
        trunc: k - 1,
    })
}

/// `sum_{j=1}^{l-1} zeta^{j e}`, which is `l - 1` when `e = 0` and `-1`
/// otherwise.
fn euler_weight(ell: u32, class: CharClass) -> Result<CycloInt> {
    let e = class
        .exponent()
        .ok_or_else(|| Error::UnexpectedRoot("prime above a rational point".into()))?;
    let mut c = CycloInt::zero(ell);
    for j in 1..ell {
        c.add_zeta_pow(j * e, 1);
    }
    Ok(c)
}

/// `G_w(u) = prod_P (1 + sum_{j=1}^{l-1} chi_w(P_1)^j u^{deg P})` over the
/// primes `P` of `F_q[X]` with `n_q | deg P <= trunc`, where `P_1` is a
/// conjugate of `P` over `F_Q`. The factor does not depend on which
/// conjugate is used; both labelings are computed and compared.
pub fn g_series(regime: &Regime, chi: &CharW, trunc: usize) -> Result<SeriesPoly> {
    if trunc > G_SERIES_CAP {
        return Err(Error::BudgetExceeded(format!(
            "series truncation {trunc} exceeds {G_SERIES_CAP}"
        )));
    }
    let ell = regime.ell();
    let n = regime.n_q() as usize;
    let mut series = SeriesPoly::one(ell, trunc);
    for d in (n..=trunc).step_by(n) {
        let primes = regime.primes(d)?;
        let weights = primes
            .par_iter()
            .map(|p| {
                let least = regime.orbit(p, LabelingRule::Least)?;
                let greatest = regime.orbit(p, LabelingRule::Greatest)?;
                let a = euler_weight(ell, chi.eval(regime, &least[0]))?;
                let b = euler_weight(ell, chi.eval(regime, &greatest[0]))?;
                if a != b {
                    return Err(Error::CrossCheckMismatch(format!(
                        "Euler factor of {p} depends on the labeling: {a} vs {b}"
                    )));
                }
                Ok(a)
            })
            .collect::<Result<Vec<_>>>()?;
        for c in &weights {
            series.mul_binomial(c, d);
        }
    }
    Ok(series)
}

/// All `w` in `(Z/l)^k`, lexicographically.
pub fn all_exponent_vectors(ell: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..ell).map(move |e| {
                    let mut v = v.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// Number of tuples of total degree `d` whose twisted model with twist `b`
/// has character class `eps_i` at `x_i` for every `i`, by character
/// averaging: `l^{-k} sum_w zeta^{sum w_i (n_q class(b) - eps_i)} G_w[d]`.
pub fn count_constrained_series(
    regime: &Regime,
    d: usize,
    points: &[FieldElem],
    eps: &[u32],
    b: FieldElem,
) -> Result<u128> {
    constrained_counts_series(regime, d, points, b)?
        .into_iter()
        .find(|(e, _)| e == eps)
        .map(|(_, c)| c)
        .ok_or_else(|| Error::Parse(format!("target classes {eps:?} out of range")))
}

/// [`count_constrained_series`] for every target vector at once.
pub fn constrained_counts_series(
    regime: &Regime,
    d: usize,
    points: &[FieldElem],
    b: FieldElem,
) -> Result<Vec<(Vec<u32>, u128)>> {
    let ell = regime.ell();
    let k = points.len();
    let cb = regime
        .class(b)
        .exponent()
        .ok_or_else(|| Error::InvalidTuple("b must be nonzero".into()))?;
    let shift = (regime.n_q() * cb) % ell;
    let ws = all_exponent_vectors(ell, k);
    let coeffs = ws
        .iter()
        .map(|w| {
            let chi = CharW::new(regime, points.to_vec(), w.clone())?;
            Ok(g_series(regime, &chi, d)?.coeff(d).clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let denom = (ell as i128).pow(k as u32);
    let mut out = Vec::new();
    for eps in all_exponent_vectors(ell, k) {
        let mut total = CycloInt::zero(ell);
        for (w, g) in ws.iter().zip(&coeffs) {
            let mut e = 0u64;
            for (&wi, &ei) in w.iter().zip(&eps) {
                e += wi as u64 * ((shift + ell - ei) % ell) as u64;
            }
            total = total.add(&g.mul(&CycloInt::zeta_pow(ell, (e % ell as u64) as u32)));
        }
        let value = total.as_int().filter(|v| v % denom == 0 && *v >= 0).ok_or_else(|| {
            Error::CrossCheckMismatch(format!(
                "character average {total} is not a non-negative multiple of {denom}"
            ))
        })?;
        out.push((eps, (value / denom) as u128));
    }
    Ok(out)
}

/// Class vectors `(chi(F_v0(x_i)))_i` over the enumerated stratum, tallied
/// for every target vector in the order of [`all_exponent_vectors`].
pub fn constrained_counts_direct(
    regime: &Regime,
    d: usize,
    points: &[FieldElem],
    b: FieldElem,
) -> Result<Vec<(Vec<u32>, u128)>> {
    let ell = regime.ell();
    let ext = regime.ext();
    let embedded = points
        .iter()
        .map(|&x| regime.embedding().embed(x))
        .collect::<Result<Vec<_>>>()?;
    let tuples: Vec<_> = enumerate_tuples(regime, d as u64)?.collect();
    let indices = tuples
        .into_par_iter()
        .map(|t| {
            let m = twisted_model(regime, &t.with_b(b), LabelingRule::Least)?;
            let mut idx = 0usize;
            for &x in &embedded {
                let e = regime
                    .class(m.f_v0.eval_unchecked(x, ext))
                    .exponent()
                    .ok_or_else(|| Error::UnexpectedRoot(format!("{x}")))?;
                idx = idx * ell as usize + e as usize;
            }
            Ok(idx)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = vec![0u128; (ell as usize).pow(points.len() as u32)];
    for i in indices {
        counts[i] += 1;
    }
    Ok(all_exponent_vectors(ell, points.len())
        .into_iter()
        .zip(counts)
        .collect())
}

/// The same count by filtering the enumerated stratum.
pub fn count_constrained_direct(
    regime: &Regime,
    d: usize,
    points: &[FieldElem],
    eps: &[u32],
    b: FieldElem,
) -> Result<u128> {
    constrained_counts_direct(regime, d, points, b)?
        .into_iter()
        .find(|(e, _)| e == eps)
        .map(|(_, c)| c)
        .ok_or_else(|| Error::Parse(format!("target classes {eps:?} out of range")))
}

/// Both computations; returns the direct count, or an error if they differ.
pub fn count_constrained(
    regime: &Regime,
    d: usize,
    points: &[FieldElem],
    eps: &[u32],
    b: FieldElem,
) -> Result<u128> {
    let direct = count_constrained_direct(regime, d, points, eps, b)?;
    let series = count_constrained_series(regime, d, points, eps, b)?;
    if direct != series {
        return Err(Error::CrossCheckMismatch(format!(
            "D = {d}, eps = {eps:?}: filter gives {direct}, character average gives {series}"
        )));
    }
    Ok(direct)
}

/// Sorted absolute values of the complex roots.
pub fn root_magnitudes(l: &SeriesPoly) -> Result<Vec<f64>> {
    let mut mags: Vec<f64> = complex_roots(&l.to_complex())?
        .iter()
        .map(|z| z.norm())
        .collect();
    mags.sort_by(f64::total_cmp);
    Ok(mags)
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    #[serde(rename = "D")]
    pub d: usize,
    pub total: u128,
    /// `(eps, count, r)` with `r = count l^k / total`.
    pub classes: Vec<(Vec<u32>, u128, f64)>,
    pub max_deviation: f64,
}

/// Equidistribution of the character classes at `points` as `D` grows.
pub fn growth_check(
    regime: &Regime,
    d_list: &[usize],
    points: &[FieldElem],
    b: FieldElem,
) -> Result<Vec<GrowthRow>> {
    let lk = (regime.ell() as f64).powi(points.len() as i32);
    d_list
        .iter()
        .map(|&d| {
            let counts = constrained_counts_series(regime, d, points, b)?;
            let total: u128 = counts.iter().map(|(_, c)| c).sum();
            let classes: Vec<(Vec<u32>, u128, f64)> = counts
                .into_iter()
                .map(|(e, c)| {
                    let r = if total == 0 { f64::NAN } else { c as f64 * lk / total as f64 };
                    (e, c, r)
                })
                .collect();
            let max_deviation = classes
                .iter()
                .map(|(_, _, r)| (r - 1.0).abs())
                .fold(0.0, f64::max);
            Ok(GrowthRow {
                d,
                total,
                classes,
                max_deviation,
            })
        })
        .collect()
}

/// Total count from the closed form `prod (1 + (l-1) u^{deg P})`.
pub fn g0_closed_form(regime: &Regime, trunc: usize) -> Vec<BigUint> {
    (0..=trunc)
        .map(|d| crate::coverparam::count_tuples(regime, d as u64))
        .collect()
}
