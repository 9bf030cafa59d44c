//! Scalar helpers shared across modules: the exact-or-real [`Numeric`] value
//! and Neumaier-compensated accumulators.

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::f64::consts::TAU;
use std::fmt;

/// A sum or table entry. Integer-valued functions stay exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Numeric {
    Int(i128),
    Real(f64),
}

impl Numeric {
    pub fn to_f64(self) -> f64 {
        match self {
            Numeric::Int(v) => v as f64,
            Numeric::Real(v) => v,
        }
    }

    pub fn as_int(self) -> Option<i128> {
        match self {
            Numeric::Int(v) => Some(v),
            Numeric::Real(_) => None,
        }
    }

    /// `|a - b| / max(1, |a|, |b|)`, or 0 for two equal integers.
    pub fn relative_gap(self, other: Numeric) -> f64 {
        match (self, other) {
            (Numeric::Int(a), Numeric::Int(b)) => {
                if a == b {
                    0.0
                } else {
                    let d = (a - b).unsigned_abs() as f64;
                    d / (a.unsigned_abs().max(b.unsigned_abs()).max(1) as f64)
                }
            }
            (a, b) => relative_gap(a.to_f64(), b.to_f64()),
        }
    }
}

impl fmt::Display for Numeric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Numeric::Int(v) => write!(f, "{v}"),
            Numeric::Real(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Numeric {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            // i128 is not representable in every JSON reader; small values
            // go out as numbers, the rest as decimal strings.
            Numeric::Int(v) => match i64::try_from(*v) {
                Ok(small) => s.serialize_i64(small),
                Err(_) => s.serialize_str(&v.to_string()),
            },
            Numeric::Real(v) => s.serialize_f64(*v),
        }
    }
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// `e(t) = exp(2πit)` for a phase already reduced mod 1.
#[inline]
pub fn unit(frac: f64) -> Complex64 {
    let (s, c) = (TAU * frac).sin_cos();
    Complex64::new(c, s)
}
