use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

/// An element of `Z[zeta_l]` in the basis `1, zeta, ..., zeta^{l-2}`,
/// using `1 + zeta + ... + zeta^{l-1} = 0` to reduce `zeta^{l-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloInt {
    coords: Vec<i128>,
}

impl CycloInt {
    pub fn zero(ell: u32) -> CycloInt {
        CycloInt {
            coords: vec![0; ell as usize - 1],
        }
    }

    pub fn from_int(ell: u32, n: i128) -> CycloInt {
        let mut z = CycloInt::zero(ell);
        z.coords[0] = n;
        z
    }

    /// `zeta^e`.
    pub fn zeta_pow(ell: u32, e: u32) -> CycloInt {
        let mut z = CycloInt::zero(ell);
        z.add_zeta_pow(e, 1);
        z
    }

    /// From a histogram `counts[e]` = multiplicity of `zeta^e`.
    pub fn from_counts(counts: &[i128]) -> CycloInt {
        let ell = counts.len() as u32;
        let mut z = CycloInt::zero(ell);
        for (e, &c) in counts.iter().enumerate() {
            z.add_zeta_pow(e as u32, c);
        }
        z
    }

    pub fn ell(&self) -> u32 {
        self.coords.len() as u32 + 1
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }

    /// `self += c * zeta^e`.
    pub fn add_zeta_pow(&mut self, e: u32, c: i128) {
        let ell = self.ell();
        let e = e % ell;
        if e == ell - 1 {
            for x in &mut self.coords {
                *x -= c;
            }
        } else {
            self.coords[e as usize] += c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The integer value, if this lies in `Z`.
    pub fn as_int(&self) -> Option<i128> {
        self.coords[1..].iter().all(|&c| c == 0).then_some(self.coords[0])
    }

    pub fn add(&self, rhs: &CycloInt) -> CycloInt {
        CycloInt {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &CycloInt) -> CycloInt {
        CycloInt {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, n: i128) -> CycloInt {
        CycloInt {
            coords: self.coords.iter().map(|a| a * n).collect(),
        }
    }

    pub fn mul(&self, rhs: &CycloInt) -> CycloInt {
        let ell = self.ell();
        let mut out = CycloInt::zero(ell);
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coords.iter().enumerate() {
                if b != 0 {
                    out.add_zeta_pow((i + j) as u32, a * b);
                }
            }
        }
        out
    }

    /// Image under `zeta -> zeta^r`, `r` prime to `l`.
    pub fn galois(&self, r: u32) -> CycloInt {
        let ell = self.ell();
        let mut out = CycloInt::zero(ell);
        for (i, &a) in self.coords.iter().enumerate() {
            out.add_zeta_pow(((i as u64 * r as u64) % ell as u64) as u32, a);
        }
        out
    }

    /// Complex conjugate, `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> CycloInt {
        self.galois(self.ell() - 1)
    }

    /// Embedding with `zeta = exp(2 pi i / l)`.
    pub fn to_complex(&self) -> Complex64 {
        let ell = self.ell() as f64;
        self.coords
            .iter()
            .enumerate()
            .map(|(i, &a)| Complex64::from_polar(a as f64, std::f64::consts::TAU * i as f64 / ell))
            .sum()
    }
}

impl fmt::Debug for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Coordinate vector `[a_0,...,a_{l-2}]`.
impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for CycloInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// A power series in `u` known modulo `u^{trunc+1}`, or an exact
/// polynomial when `trunc` is at least its degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesPoly {
    pub coeffs: Vec<CycloInt>,
    pub trunc: usize,
}

impl SeriesPoly {
    pub fn one(ell: u32, trunc: usize) -> SeriesPoly {
        let mut coeffs = vec![CycloInt::zero(ell); trunc + 1];
        coeffs[0] = CycloInt::from_int(ell, 1);
        SeriesPoly { coeffs, trunc }
    }

    pub fn ell(&self) -> u32 {
        self.coeffs[0].ell()
    }

    pub fn coeff(&self, d: usize) -> &CycloInt {
        &self.coeffs[d]
    }

    /// `self *= (1 + c u^d)`, truncated.
    pub fn mul_binomial(&mut self, c: &CycloInt, d: usize) {
        if d == 0 || d > self.trunc || c.is_zero() {
            return;
        }
        for t in (d..=self.trunc).rev() {
            let add = self.coeffs[t - d].mul(c);
            self.coeffs[t] = self.coeffs[t].add(&add);
        }
    }

    pub fn mul(&self, rhs: &SeriesPoly) -> SeriesPoly {
        let trunc = self.trunc.min(rhs.trunc);
        let ell = self.ell();
        let mut coeffs = vec![CycloInt::zero(ell); trunc + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(trunc + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(trunc + 1 - i) {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        SeriesPoly { coeffs, trunc }
    }

    pub fn conj(&self) -> SeriesPoly {
        SeriesPoly {
            coeffs: self.coeffs.iter().map(CycloInt::conj).collect(),
            trunc: self.trunc,
        }
    }

    /// Degree of the nonzero part, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(CycloInt::to_complex).collect()
    }
}
