use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;
const TOL: f64 = 1e-15;
const CLUSTER: f64 = 1e-3;
const POLISH_STEPS: usize = 8;

/// All complex roots of `sum c_i u^i` by Aberth-Ehrlich iteration.
pub fn complex_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs
        .iter()
        .rposition(|c| c.norm() != 0.0)
        .ok_or(Error::DegenerateZeroPolynomial)?;
    let c = &coeffs[..=deg];
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    let bound = 1.0 + monic[..deg].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(bound * 0.5, 0.4 + std::f64::consts::TAU * k as f64 / deg as f64))
        .collect();
    for _ in 0..MAX_ITER {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < TOL {
            break;
        }
    }
    // A root of multiplicity m only converges to about eps^{1/m}; it is a
    // simple root of the (m-1)-th derivative, so polish it there.
    let mut cluster: Vec<usize> = (0..deg).collect();
    for i in 0..deg {
        for j in 0..i {
            if (z[i] - z[j]).norm() < CLUSTER * z[i].norm().max(1.0) {
                cluster[i] = cluster[j];
                break;
            }
        }
    }
    let mut out = z.clone();
    for i in 0..deg {
        let members: Vec<Complex64> = (0..deg)
            .filter(|&j| cluster[j] == cluster[i])
            .map(|j| z[j])
            .collect();
        let mut r = members.iter().sum::<Complex64>() / members.len() as f64;
        let target = nth_derivative(&monic, members.len() - 1);
        for _ in 0..POLISH_STEPS {
            let (p, dp) = eval_with_derivative(&target, r);
            if dp.norm() == 0.0 {
                break;
            }
            r -= p / dp;
        }
        out[i] = r;
    }
    Ok(out)
}

fn nth_derivative(c: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut d = c.to_vec();
    for _ in 0..n {
        d = d
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * i as f64)
            .collect();
    }
    d
}

fn eval_with_derivative(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_roots() {
        // (u - 1)(u + 2)(u - i) = u^3 + (1 - i) u^2 + (-2 - i) u + 2i
        let c = [
            Complex64::new(0.0, 2.0),
            Complex64::new(-2.0, -1.0),
            Complex64::new(1.0, -1.0),
            Complex64::new(1.0, 0.0),
        ];
        let mut mags: Vec<f64> = complex_roots(&c).unwrap().iter().map(|z| z.norm()).collect();
        mags.sort_by(f64::total_cmp);
        for (m, e) in mags.iter().zip([1.0, 1.0, 2.0]) {
            assert!((m - e).abs() < 1e-12, "{mags:?}");
        }
        assert!(complex_roots(&[Complex64::new(3.0, 0.0)]).unwrap().is_empty());
        assert_eq!(
            complex_roots(&[Complex64::new(0.0, 0.0)]).unwrap_err(),
            Error::DegenerateZeroPolynomial
        );
    }

    #[test]
    fn repeated_roots_converge() {
        // (1 + u/2)^4 has a fourfold root at -2.
        let c: Vec<Complex64> = [1.0, 2.0, 1.5, 0.5, 0.0625]
            .iter()
            .map(|&a| Complex64::new(a, 0.0))
            .collect();
        for z in complex_roots(&c).unwrap() {
            assert!((z.norm() - 2.0).abs() < 1e-9, "{z}");
        }
    }
}
