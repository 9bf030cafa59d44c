//! The sawtooth `ψ(x) = x − ⌊x⌋ − 1/2` and Vaaler's trigonometric
//! approximation
//!
//! ```text
//! ψ*_H(x) = −Σ_{h=1}^{H} Φ(h/(H+1)) sin(2πhx)/(πh),   Φ(t) = πt(1−t)cot(πt) + t
//! ```
//!
//! which satisfies `|ψ(x) − ψ*_H(x)| ≤ F_H(x)/(2H+2)` with `F_H` the Fejér
//! kernel of order `H`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const MAX_H: u64 = 1_000_000;
pub const MIN_GRID: u64 = 1_000;

pub fn psi_exact(x: f64) -> f64 {
    x - x.floor() - 0.5
}

/// `ψ(a/b)` for integers, without rounding in the fractional part.
pub fn psi_ratio(a: u64, b: u64) -> f64 {
    (a % b) as f64 / b as f64 - 0.5
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// `Φ(t) = πt(1−t)cot(πt) + t` on `0 < t < 1`.
pub fn vaaler_weight(t: f64) -> f64 {
    let pt = PI * t;
    pt * (1.0 - t) / pt.tan() + t
}

/// `Σ_{1≤|h|≤H} c_h e(hx)` with `c_{−h} = conj(c_h)`; only `h > 0` is stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigPolynomial {
    degree: u64,
    #[serde(serialize_with = "serialize_coefficients")]
    positive: Vec<Complex64>,
}

fn serialize_coefficients<S: serde::Serializer>(c: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(c.len()))?;
    for z in c {
        seq.serialize_element(&(z.re, z.im))?;
    }
    seq.end()
}

impl TrigPolynomial {
    pub fn new(positive: Vec<Complex64>) -> Result<Self> {
        if positive.is_empty() {
            return Err(Error::InvalidArgument("trigonometric polynomial needs H >= 1".into()));
        }
        Ok(TrigPolynomial {
            degree: positive.len() as u64,
            positive,
        })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// `c_h` for `1 ≤ |h| ≤ H`; zero otherwise.
    pub fn coefficient(&self, h: i64) -> Complex64 {
        let k = h.unsigned_abs();
        if h == 0 || k > self.degree {
            return Complex64::new(0.0, 0.0);
        }
        let c = self.positive[(k - 1) as usize];
        if h > 0 {
            c
        } else {
            c.conj()
        }
    }

    /// Sum over both signs of `h` without assuming the conjugate symmetry.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.positive.iter().enumerate() {
            let h = (i + 1) as f64;
            let e = crate::numeric::unit(frac(h * x));
            acc += c * e + c.conj() * e.conj();
        }
        acc
    }

    /// `2·Σ_{h≥1} Re(c_h e(hx))`.
    pub fn evaluate_real(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.positive.iter().enumerate() {
            let h = (i + 1) as f64;
            let (s, co) = (2.0 * PI * frac(h * x)).sin_cos();
            acc += c.re * co - c.im * s;
        }
        2.0 * acc
    }
}

pub fn vaaler_polynomial(h: u64) -> Result<TrigPolynomial> {
    if h == 0 || h > MAX_H {
        return Err(Error::InvalidArgument(format!("H = {h} outside [1, {MAX_H}]")));
    }
    let scale = (h + 1) as f64;
    let positive = (1..=h)
        .map(|k| {
            let k = k as f64;
            // −Φ/(2πik) = iΦ/(2πk)
            Complex64::new(0.0, vaaler_weight(k / scale) / (2.0 * PI * k))
        })
        .collect();
    TrigPolynomial::new(positive)
}

/// `F_H(x) = Σ_{|h|≤H} (1 − |h|/(H+1)) e(hx) = (sin(π(H+1)x)/sin(πx))²/(H+1)`.
pub fn fejer_kernel(h: u64, x: f64) -> f64 {
    let m = (h + 1) as f64;
    // distance to the nearest integer keeps sin(πt) away from cancellation
    let t = x - x.round();
    let s = (PI * t).sin();
    if s.abs() < 1e-7 {
        return m;
    }
    let r = (PI * frac(m * x)).sin() / s;
    r * r / m
}

/// The pointwise envelope `F_H(x)/(2H+2)`.
pub fn fejer_envelope(h: u64, x: f64) -> f64 {
    fejer_kernel(h, x) / (2 * h + 2) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub degree: u64,
    pub grid_size: u64,
    pub points: u64,
    /// `max (|ψ − ψ*| − F_H/(2H+2))` over the evaluated points.
    pub max_violation: f64,
    pub max_error: f64,
    pub max_envelope: f64,
    pub mean_envelope: f64,
    pub max_imaginary: f64,
}

/// `max_x (|ψ(x) − ψ*_H(x)| − F_H(x)/(2H+2))` over `x = k/grid_size`,
/// `0 ≤ k ≤ grid_size`, skipping the integer endpoints.
pub fn verify_pointwise_bound(h: u64, grid_size: u64) -> Result<f64> {
    Ok(pointwise_report(h, grid_size)?.max_violation)
}

pub fn pointwise_report(h: u64, grid_size: u64) -> Result<BoundReport> {
    if grid_size < MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid size {grid_size} below the minimum {MIN_GRID}"
        )));
    }
    let poly = vaaler_polynomial(h)?;
    let rows: Vec<(f64, f64, f64, f64)> = (1..grid_size)
        .into_par_iter()
        .map(|k| {
            let x = k as f64 / grid_size as f64;
            let approx = poly.evaluate(x);
            let err = (psi_exact(x) - approx.re).abs();
            let env = fejer_envelope(h, x);
            (err - env, err, env, approx.im.abs())
        })
        .collect();
    let points = rows.len() as u64;
    let fold = |f: fn(&(f64, f64, f64, f64)) -> f64| rows.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    Ok(BoundReport {
        degree: h,
        grid_size,
        points,
        max_violation: fold(|r| r.0),
        max_error: fold(|r| r.1),
        max_envelope: fold(|r| r.2),
        mean_envelope: rows.iter().map(|r| r.2).sum::<f64>() / points as f64,
        max_imaginary: fold(|r| r.3),
    })
}
