//! The invariant sweep behind `cyclic-covers verify`.
//!
//! Every check walks all strata up to a degree bound and records how many
//! cases it examined and the first failure, if any.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::charsum::{fiber_count, fiber_count_oracle, points};
use crate::coverparam::{
    count_tuples, enumerate_tuples, stable_factorization, stable_factorization_direct,
    twisted_model, LabelingRule, Regime, Tuple, ENUMERATION_D_CAP,
};
use crate::ensemble::{exhaustive_histogram, RegimeEcho};
use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::lseries::{constrained_counts_direct, constrained_counts_series, g_series, CharW};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub cases: u64,
    /// First failure, or empty.
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "ok  " } else { "FAIL" };
        write!(f, "{status} {:<28} {:>8} cases", self.name, self.cases)?;
        if !self.detail.is_empty() {
            write!(f, "  {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub regime: RegimeEcho,
    pub max_d: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Default)]
struct Acc {
    cases: u64,
    failure: Option<String>,
}

impl Acc {
    fn expect(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.cases += other.cases;
        if self.failure.is_none() {
            self.failure = other.failure;
        }
        self
    }

    fn finish(self, name: &'static str) -> Check {
        Check {
            name,
            passed: self.failure.is_none(),
            cases: self.cases,
            detail: self.failure.unwrap_or_default(),
        }
    }
}

/// Oracle agreement, unramifiedness and the twisted-model invariants for
/// every `(tuple, b)` in one stratum.
fn per_curve_checks(regime: &Regime, tuples: &[Tuple]) -> Result<[Acc; 4]> {
    let units: Vec<FieldElem> = regime.ext().units().collect();
    let pts = points(regime);
    let ell = regime.ell();
    let n = regime.n_q() as u64;
    tuples
        .par_iter()
        .map(|t| {
            let mut accs: [Acc; 4] = Default::default();
            for rule in [LabelingRule::Least, LabelingRule::Greatest] {
                let a = stable_factorization(regime, t, rule)?;
                let b = stable_factorization_direct(regime, t, rule)?;
                accs[3].expect(a == b, || format!("{t} ({rule}): orbitwise and direct differ"));
            }
            for &b in &units {
                let params = t.clone().with_b(b);
                let model = twisted_model(regime, &params, LabelingRule::Least)?;
                let lead_ok = regime.class(model.leading())
                    == regime.class(b).scale(n as u32, ell);
                accs[2].expect(
                    model.f_v0.deg() % ell as usize == 0 && lead_ok,
                    || format!("{t} b={b}: deg F_v0 = {}", model.f_v0.deg()),
                );
                let mut total = 0;
                for &x in &pts {
                    let fast = fiber_count(regime, &model, x)?;
                    let slow = fiber_count_oracle(regime, &model, b, x)?;
                    accs[0].expect(fast == slow, || {
                        format!("{t} b={b} x={x}: {} vs oracle {}", fast.n_x, slow.n_x)
                    });
                    accs[1].expect(fast.n_x == 0 || fast.n_x == ell, || {
                        format!("{t} b={b} x={x}: N_x = {}", fast.n_x)
                    });
                    total += fast.n_x;
                }
                accs[1].expect(total % ell == 0, || format!("{t} b={b}: total {total}"));
            }
            Ok(accs)
        })
        .try_reduce(Default::default, |a, b| {
            let [a0, a1, a2, a3] = a;
            let [b0, b1, b2, b3] = b;
            Ok([a0.merge(b0), a1.merge(b1), a2.merge(b2), a3.merge(b3)])
        })
}

/// Subsets of `pts` with at most `k` elements, smallest first.
fn small_subsets(pts: &[FieldElem], k: usize) -> Vec<Vec<FieldElem>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::new(), 0usize)];
    for _ in 0..k {
        let mut next = Vec::new();
        for (set, start) in frontier {
            for i in start..pts.len() {
                let mut s: Vec<FieldElem> = set.clone();
                s.push(pts[i]);
                out.push(s.clone());
                next.push((s, i + 1));
            }
        }
        frontier = next;
    }
    out
}

/// Runs every check on all strata with `D <= max_d`.
pub fn verify(regime: &Regime, max_d: u64) -> Result<VerifyReport> {
    if max_d > ENUMERATION_D_CAP {
        return Err(Error::BudgetExceeded(format!(
            "verify enumerates strata; max D is capped at {ENUMERATION_D_CAP}"
        )));
    }
    let n = regime.n_q() as u64;
    let ds: Vec<u64> = (n..=max_d).step_by(n as usize).collect();

    let mut curve: [Acc; 4] = Default::default();
    for &d in &ds {
        let tuples: Vec<Tuple> = enumerate_tuples(regime, d)?.collect();
        let accs = per_curve_checks(regime, &tuples)?;
        curve = {
            let [a0, a1, a2, a3] = curve;
            let [b0, b1, b2, b3] = accs;
            [a0.merge(b0), a1.merge(b1), a2.merge(b2), a3.merge(b3)]
        };
    }
    let [oracle, unram, twisted, stable] = curve;

    let mut counts = Acc::default();
    let trivial = CharW::new(regime, Vec::new(), Vec::new())?;
    let g0 = g_series(regime, &trivial, max_d as usize)?;
    for d in 0..=max_d {
        let listed = BigUint::from(enumerate_tuples(regime, d)?.count());
        let counted = count_tuples(regime, d);
        let series = g0.coeff(d as usize).as_int();
        let ok = listed == counted
            && series.map(|s| BigUint::from(s as u128)) == Some(counted.clone());
        counts.expect(ok, || {
            format!("D={d}: enumerated {listed}, counted {counted}, series {series:?}")
        });
    }

    let mut constrained = Acc::default();
    let base_points: Vec<FieldElem> = regime.base().elements().collect();
    let k_max = 2.min(base_points.len());
    let twists = [regime.ext().one(), regime.ext().generator()];
    for set in small_subsets(&base_points, k_max) {
        for &b in &twists {
            for &d in &ds {
                let direct = constrained_counts_direct(regime, d as usize, &set, b)?;
                let series = constrained_counts_series(regime, d as usize, &set, b)?;
                for ((eps, x), (_, y)) in direct.iter().zip(&series) {
                    constrained.expect(x == y, || {
                        let lits: Vec<u32> = set.iter().map(|p| p.literal()).collect();
                        format!("points {lits:?} eps {eps:?} D={d} b={b}: {x} vs {y}")
                    });
                }
            }
        }
    }

    let mut labeling = Acc::default();
    let mut orbit = Acc::default();
    for &d in &ds {
        let least = exhaustive_histogram(regime, d, LabelingRule::Least, 1)?;
        let greatest = exhaustive_histogram(regime, d, LabelingRule::Greatest, 1)?;
        labeling.expect(least == greatest, || format!("D={d}: {least:?} vs {greatest:?}"));
        for r in 2..regime.ell() {
            let mapped = exhaustive_histogram(regime, d, LabelingRule::Least, r)?;
            orbit.expect(mapped == least, || format!("D={d} r={r}: {mapped:?} vs {least:?}"));
        }
    }

    Ok(VerifyReport {
        regime: RegimeEcho::of(regime),
        max_d,
        checks: vec![
            oracle.finish("fiber oracle"),
            unram.finish("N_x in {0, l}"),
            twisted.finish("twisted model degree"),
            stable.finish("stable factorization"),
            counts.finish("counts vs series"),
            constrained.finish("constrained cross-check"),
            labeling.finish("labeling invariance"),
            orbit.finish("power-orbit invariance"),
        ],
    })
}
