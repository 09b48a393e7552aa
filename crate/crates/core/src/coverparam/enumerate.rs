use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{Regime, Tuple};
use crate::error::{Error, Result};
use crate::fqpoly::{prime_count, Poly};

/// Largest `D` the exhaustive enumerator accepts.
pub const ENUMERATION_D_CAP: u64 = 16;

/// Sets of distinct primes of `n_q`-divisible degree with degree sum `d`,
/// each sorted, listed in lexicographic order of the prime sequence.
pub fn prime_subsets(regime: &Regime, d: u64) -> Result<Vec<Vec<Poly>>> {
    if d > ENUMERATION_D_CAP {
        return Err(Error::BudgetExceeded(format!(
            "enumeration is capped at D = {ENUMERATION_D_CAP}, asked for D = {d}"
        )));
    }
    let n = regime.n_q() as u64;
    if d % n != 0 {
        return Ok(Vec::new());
    }
    let mut candidates = Vec::new();
    for deg in (n..=d).step_by(n as usize) {
        candidates.extend(regime.primes(deg as usize)?.iter().cloned());
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    subsets_from(&candidates, 0, d as usize, &mut chosen, &mut out);
    Ok(out)
}

fn subsets_from(
    candidates: &[Poly],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<Poly>,
    out: &mut Vec<Vec<Poly>>,
) {
    if remaining == 0 {
        out.push(chosen.clone());
        return;
    }
    for i in start..candidates.len() {
        let deg = candidates[i].deg();
        // Candidates are sorted by degree.
        if deg > remaining {
            break;
        }
        chosen.push(candidates[i].clone());
        subsets_from(candidates, i + 1, remaining - deg, chosen, out);
        chosen.pop();
    }
}

/// Every slot assignment of `subset`, the first prime's slot varying slowest.
pub fn slot_assignments<'a>(
    regime: &'a Regime,
    subset: &'a [Poly],
) -> impl Iterator<Item = Tuple> + 'a {
    let total = (regime.ell() as u64 - 1).pow(subset.len() as u32);
    (0..total).map(move |code| decode(regime, subset, code))
}

fn decode(regime: &Regime, subset: &[Poly], mut code: u64) -> Tuple {
    let base = regime.ell() as u64 - 1;
    let mut slots = vec![0u32; subset.len()];
    for s in slots.iter_mut().rev() {
        *s = (code % base) as u32 + 1;
        code /= base;
    }
    let assignment = subset.iter().cloned().zip(slots).collect();
    Tuple::from_assignment(regime, assignment)
}

/// Lazy stream over the stratum, in canonical order.
pub struct TupleIter<'a> {
    regime: &'a Regime,
    subsets: Vec<Vec<Poly>>,
    subset: usize,
    code: u64,
}

impl Iterator for TupleIter<'_> {
    type Item = Tuple;

    fn next(&mut self) -> Option<Tuple> {
        let base = self.regime.ell() as u64 - 1;
        loop {
            let subset = self.subsets.get(self.subset)?;
            let total = base.pow(subset.len() as u32);
            if self.code < total {
                self.code += 1;
                return Some(decode(self.regime, subset, self.code - 1));
            }
            self.subset += 1;
            self.code = 0;
        }
    }
}

/// Every tuple with `sum deg f_i = d`, exactly once. Empty iff `n_q` does
/// not divide `d`. `d = 0` yields the single all-ones tuple.
pub fn enumerate_tuples(regime: &Regime, d: u64) -> Result<TupleIter<'_>> {
    Ok(TupleIter {
        regime,
        subsets: prime_subsets(regime, d)?,
        subset: 0,
        code: 0,
    })
}

/// `C(n, m) * w^m` for `m = 0..=mmax`.
pub(crate) fn class_weights(n: &BigUint, w: u64, mmax: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(mmax + 1);
    let mut binom = BigUint::one();
    let mut wpow = BigUint::one();
    for m in 0..=mmax {
        if m > 0 {
            if BigUint::from(m - 1) >= *n {
                break;
            }
            binom = binom * (n - BigUint::from(m - 1)) / BigUint::from(m);
            wpow *= w;
        }
        out.push(&binom * &wpow);
    }
    out
}

/// `|stratum(d')|` for all `d' <= d`, via the product over degree classes
/// of `sum_m C(N_e, m) (l-1)^m u^{e m}`.
pub(crate) fn count_table(regime: &Regime, d: u64) -> Vec<BigUint> {
    let n = regime.n_q() as u64;
    let w = regime.ell() as u64 - 1;
    let d = d as usize;
    let mut acc = vec![BigUint::zero(); d + 1];
    acc[0] = BigUint::one();
    for e in (n..=d as u64).step_by(n as usize) {
        let e = e as usize;
        let weights = class_weights(&prime_count(regime.q() as u64, e as u64), w, d / e);
        let mut next = vec![BigUint::zero(); d + 1];
        for (s, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (m, wt) in weights.iter().enumerate() {
                let t = s + e * m;
                if t > d {
                    break;
                }
                next[t] += a * wt;
            }
        }
        acc = next;
    }
    acc
}

/// `|stratum(d)|`. Agrees with the length of [`enumerate_tuples`].
pub fn count_tuples(regime: &Regime, d: u64) -> BigUint {
    count_table(regime, d).pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverparam::{make_regime, is_n_divisible};
    use crate::fqpoly::factor;

    #[test]
    fn enumeration_examples() {
        let r = make_regime(2, 3).unwrap();
        let d2: Vec<String> = enumerate_tuples(&r, 2).unwrap().map(|t| t.to_string()).collect();
        assert_eq!(d2, vec!["1,1,1;1", "1;1,1,1"]);
        assert_eq!(enumerate_tuples(&r, 3).unwrap().count(), 0);
        assert_eq!(enumerate_tuples(&r, 4).unwrap().count(), 6);
        assert_eq!(enumerate_tuples(&r, 0).unwrap().count(), 1);
        assert!(matches!(
            enumerate_tuples(&r, 17),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn counting_examples() {
        let r = make_regime(2, 3).unwrap();
        let expected = [(0, 1u32), (2, 2), (3, 0), (4, 6), (6, 30), (10, 450)];
        for (d, c) in expected {
            assert_eq!(count_tuples(&r, d), BigUint::from(c), "D = {d}");
        }
    }

    #[test]
    fn count_matches_enumeration() {
        for (q, ell, dmax) in [(2, 3, 12), (5, 3, 4), (3, 5, 8), (2, 5, 8), (3, 7, 6)] {
            let r = make_regime(q, ell).unwrap();
            for d in 0..=dmax {
                let listed = enumerate_tuples(&r, d).unwrap().count();
                assert_eq!(count_tuples(&r, d), BigUint::from(listed), "{q} {ell} {d}");
                assert_eq!(listed == 0, d % r.n_q() as u64 != 0);
            }
        }
    }

    #[test]
    fn enumerated_tuples_are_valid_and_distinct() {
        let r = make_regime(2, 3).unwrap();
        for d in 0..=8 {
            let all: Vec<Tuple> = enumerate_tuples(&r, d).unwrap().collect();
            let mut sorted = all.clone();
            sorted.sort_by(|a, b| a.assignment().cmp(b.assignment()));
            sorted.dedup();
            assert_eq!(sorted.len(), all.len());
            for t in &all {
                assert_eq!(t.degree() as u64, d);
                let reparsed = Tuple::parse(&r, &t.to_string()).unwrap();
                assert_eq!(&reparsed, t);
                for (i, f) in t.parts().iter().enumerate() {
                    assert!(is_n_divisible(f, 2, r.base()).unwrap());
                    assert!(factor(f, r.base()).unwrap().is_squarefree());
                    for g in &t.parts()[i + 1..] {
                        assert!(f.gcd(g, r.base()).is_one());
                    }
                }
            }
        }
    }
}
