//! Order-`l` characters at the points of `P^1(F_q)` and point counts.
//!
//! For a finite point `x` the character value is the `l`-th power residue
//! class of `F_v0(x)` in `F_Q`; at infinity it is the class of the leading
//! coefficient. The fiber over `x` has `sum_w zeta^{w e}` points, which is
//! `l` when the class `e` is 0 and 0 otherwise, so everything here is exact
//! integer arithmetic.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::coverparam::{twisted_model, CoverParams, LabelingRule, Regime, TwistedModel};
use crate::error::{Error, Result};
use crate::gf::{CharClass, FieldElem};

/// A point of the projective line over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(FieldElem),
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(x) => write!(f, "{}", x.literal()),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The `q + 1` points: field elements by ascending literal, then infinity.
pub fn points(regime: &Regime) -> Vec<Point> {
    regime
        .base()
        .elements()
        .map(Point::Finite)
        .chain(std::iter::once(Point::Infinity))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCount {
    pub x: Point,
    pub n_x: u32,
}

/// The value of `F_v0` at `x` (leading coefficient at infinity).
fn value_at(regime: &Regime, model: &TwistedModel, x: Point) -> Result<FieldElem> {
    match x {
        Point::Infinity => Ok(model.leading()),
        Point::Finite(x) => {
            let ext = regime.ext();
            let y = model.f_v0.eval_unchecked(regime.embedding().embed(x)?, ext);
            if y.is_zero() {
                return Err(Error::UnexpectedRoot(x.literal().to_string()));
            }
            Ok(y)
        }
    }
}

pub fn chi_at_point(regime: &Regime, model: &TwistedModel, x: Point) -> Result<CharClass> {
    let y = value_at(regime, model, x)?;
    regime.ext().lth_power_class(y, regime.ell())
}

pub fn fiber_count(regime: &Regime, model: &TwistedModel, x: Point) -> Result<FiberCount> {
    let class = chi_at_point(regime, model, x)?;
    Ok(FiberCount {
        x,
        n_x: class.zeta_sum(regime.ell()),
    })
}

/// Counts `y` in `F_Q` with `y^l = F_v0(x)` by looping over the field;
/// at infinity the right-hand side is `b^{n_q}`.
pub fn fiber_count_oracle(
    regime: &Regime,
    model: &TwistedModel,
    b: FieldElem,
    x: Point,
) -> Result<FiberCount> {
    let ext = regime.ext();
    let target = match x {
        Point::Infinity => ext.pow(b, regime.n_q() as u64),
        finite => value_at(regime, model, finite)?,
    };
    let ell = regime.ell() as u64;
    let n_x = ext.elements().filter(|&y| ext.pow(y, ell) == target).count() as u32;
    Ok(FiberCount { x, n_x })
}

/// All fibers in point order.
pub fn fibers(regime: &Regime, model: &TwistedModel) -> Result<Vec<FiberCount>> {
    points(regime)
        .into_iter()
        .map(|x| fiber_count(regime, model, x))
        .collect()
}

/// `#C(F_q)`, a multiple of `l` between 0 and `(q + 1) l`.
pub fn point_count(regime: &Regime, model: &TwistedModel) -> Result<u32> {
    Ok(fibers(regime, model)?.iter().map(|f| f.n_x).sum())
}

/// Builds the twisted model under `rule` and counts its points.
pub fn count_params(regime: &Regime, params: &CoverParams, rule: LabelingRule) -> Result<u32> {
    point_count(regime, &twisted_model(regime, params, rule)?)
}

/// Per-curve point counts under both labeling rules. Only the ensemble
/// statistics are claimed to agree; this is a diagnostic.
pub fn labeling_diagnostic(regime: &Regime, params: &CoverParams) -> Result<(u32, u32)> {
    Ok((
        count_params(regime, params, LabelingRule::Least)?,
        count_params(regime, params, LabelingRule::Greatest)?,
    ))
}

/// The power-orbit image `(slot -> r slot mod l, b -> b^r)`.
pub fn power_orbit(regime: &Regime, params: &CoverParams, r: u32) -> CoverParams {
    params
        .tuple
        .scale_slots(regime, r)
        .with_b(regime.ext().pow(params.b, r as u64))
}
