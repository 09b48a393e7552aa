use std::collections::BTreeSet;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::{seq::index, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::enumerate::class_weights;
use super::{CoverParams, Regime, Tuple};
use crate::error::{Error, Result};
use crate::fqpoly::{is_irreducible, prime_count, Poly};

/// Largest `D` the sampler accepts.
pub const SAMPLING_D_CAP: u64 = 60;

/// Below this many monic polynomials of a degree, subsets are drawn from
/// the full prime list; above it, by rejection on random monics.
const SAMPLE_LISTING_LIMIT: u64 = 1 << 14;

/// Exactly uniform sampler over one stratum.
///
/// The stratum is a product over degree classes `e = n_q, 2 n_q, ...`;
/// class `e` contributes `C(N_e, m) (l-1)^m` choices for `m` primes. The
/// sampler walks the classes drawing `m` with probability proportional to
/// the number of completions, then a uniform `m`-subset and uniform slots.
pub struct Sampler<'a> {
    regime: &'a Regime,
    d: u64,
    classes: Vec<(usize, Vec<BigUint>)>,
    /// `suffix[i][s]`: number of ways to fill degree `s` from classes `i..`.
    suffix: Vec<Vec<BigUint>>,
}

impl<'a> Sampler<'a> {
    pub fn new(regime: &'a Regime, d: u64) -> Result<Sampler<'a>> {
        if d > SAMPLING_D_CAP {
            return Err(Error::BudgetExceeded(format!(
                "sampling is capped at D = {SAMPLING_D_CAP}, asked for D = {d}"
            )));
        }
        let n = regime.n_q() as u64;
        if d % n != 0 {
            return Err(Error::EmptyStratum(format!(
                "n_q = {n} does not divide D = {d}"
            )));
        }
        let w = regime.ell() as u64 - 1;
        let du = d as usize;
        let classes: Vec<(usize, Vec<BigUint>)> = (n..=d)
            .step_by(n as usize)
            .map(|e| {
                let e = e as usize;
                (e, class_weights(&prime_count(regime.q() as u64, e as u64), w, du / e))
            })
            .collect();
        let mut suffix = vec![vec![BigUint::zero(); du + 1]; classes.len() + 1];
        suffix[classes.len()][0] = BigUint::one();
        for i in (0..classes.len()).rev() {
            let (e, weights) = &classes[i];
            for s in 0..=du {
                let mut total = BigUint::zero();
                for (m, wt) in weights.iter().enumerate() {
                    if e * m > s {
                        break;
                    }
                    total += wt * &suffix[i + 1][s - e * m];
                }
                suffix[i][s] = total;
            }
        }
        Ok(Sampler {
            regime,
            d,
            classes,
            suffix,
        })
    }

    /// `|stratum(D)|`.
    pub fn size(&self) -> &BigUint {
        &self.suffix[0][self.d as usize]
    }

    pub fn sample_tuple(&self, rng: &mut ChaCha8Rng) -> Result<Tuple> {
        if self.d == 0 || self.size().is_zero() {
            return Err(Error::EmptyStratum(format!(
                "no nondegenerate tuples of total degree {}",
                self.d
            )));
        }
        let mut remaining = self.d as usize;
        let mut counts = Vec::with_capacity(self.classes.len());
        for (i, (e, weights)) in self.classes.iter().enumerate() {
            let mut r = rng.gen_biguint_below(&self.suffix[i][remaining]);
            let mut chosen = None;
            for (m, wt) in weights.iter().enumerate() {
                if e * m > remaining {
                    break;
                }
                let block = wt * &self.suffix[i + 1][remaining - e * m];
                if r < block {
                    chosen = Some(m);
                    break;
                }
                r -= block;
            }
            let m = chosen.expect("weights sum to the suffix total");
            counts.push((*e, m));
            remaining -= e * m;
        }
        debug_assert_eq!(remaining, 0);

        let mut primes = Vec::new();
        for (e, m) in counts {
            if m > 0 {
                primes.extend(self.uniform_primes(e, m, rng)?);
            }
        }
        let l = self.regime.ell();
        let assignment = primes
            .into_iter()
            .map(|p| (p, rng.gen_range(1..l)))
            .collect();
        Ok(Tuple::from_assignment(self.regime, assignment))
    }

    /// A uniform `m`-subset of the monic primes of degree `e`.
    fn uniform_primes(&self, e: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
        let base = self.regime.base();
        let q = base.order() as u64;
        let small = (q as f64).powi(e as i32) <= SAMPLE_LISTING_LIMIT as f64;
        if small {
            let list = self.regime.primes(e)?;
            return Ok(index::sample(rng, list.len(), m)
                .into_iter()
                .map(|i| list[i].clone())
                .collect());
        }
        // Distinct uniform draws in sequence give a uniform subset.
        let mut set = BTreeSet::new();
        while set.len() < m {
            let mut coeffs: Vec<_> = (0..e)
                .map(|_| base.elem(rng.gen_range(0..base.order())).unwrap())
                .collect();
            coeffs.push(base.one());
            let f = Poly::from_coeffs(base, coeffs);
            if is_irreducible(&f, base) {
                set.insert(f);
            }
        }
        Ok(set.into_iter().collect())
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<CoverParams> {
        let tuple = self.sample_tuple(rng)?;
        let ext = self.regime.ext();
        let b = ext.gen_pow(rng.gen_range(0..ext.order() as u64 - 1));
        Ok(tuple.with_b(b))
    }

    /// Draw number `index` of the run seeded with `seed`; independent of
    /// any other draw, so parallel runs reproduce exactly.
    pub fn sample_stream(&self, seed: u64, index: u64) -> Result<CoverParams> {
        self.sample(&mut stream_rng(seed, index))
    }
}

pub(crate) fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A uniform tuple of the stratum of total degree `d`.
pub fn sample_tuple(regime: &Regime, d: u64, rng: &mut ChaCha8Rng) -> Result<Tuple> {
    Sampler::new(regime, d)?.sample_tuple(rng)
}

/// Uniform tuple plus uniform `b`, determined by `seed`.
pub fn sample_params(regime: &Regime, d: u64, seed: u64) -> Result<CoverParams> {
    sample_params_stream(regime, d, seed, 0)
}

pub fn sample_params_stream(regime: &Regime, d: u64, seed: u64, index: u64) -> Result<CoverParams> {
    Sampler::new(regime, d)?.sample_stream(seed, index)
}
