//! Direct evaluation of the exponential sums behind the error exponents, and
//! measured-versus-claimed checks of their upper bounds at desk scale.
//!
//! The checks are sanity checks only: the bounds are asymptotic and implied
//! constants are taken to be 1.

use crate::arith::{self, FunctionKind};
use crate::error::{Error, Result};
use crate::identities::PhaseFunction;
use crate::numeric::ComplexSum;
use crate::pairs_opt::{ExponentPair, Rational};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Largest `R1` accepted by [`exp_sum`].
pub const MAX_EXP_SUM: u64 = 1_000_000_000;
/// Largest `MN` accepted by the bilinear sums.
pub const MAX_BILINEAR: u64 = 400_000_000;
/// The fixed `ε` of every claimed bound, applied as the factor `z^ε`.
pub const EPSILON: f64 = 0.05;
/// Coefficient moduli above `1 + UNIT_SLACK` are rejected.
pub const UNIT_SLACK: f64 = 1e-12;

/// `Σ_{R<n≤R1} f(n) e(F(n))` with `1 < R < R1 ≤ 2R`.
pub fn exp_sum(kind: FunctionKind, r: u64, r1: u64, phase: &PhaseFunction) -> Result<Complex64> {
    if r <= 1 || r1 <= r || r1 > r.saturating_mul(2) {
        return Err(Error::InvalidArgument(format!("need 1 < R < R1 <= 2R, got R = {r}, R1 = {r1}")));
    }
    exp_sum_range(kind, r, r1, phase)
}

/// `Σ_{R<n≤R1} f(n) e(F(n))` without the dyadic restriction.
pub fn exp_sum_range(kind: FunctionKind, r: u64, r1: u64, phase: &PhaseFunction) -> Result<Complex64> {
    if r1 <= r {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if r1 > MAX_EXP_SUM {
        return Err(Error::Budget {
            what: "exponential sum range",
            requested: r1,
            limit: MAX_EXP_SUM,
        });
    }
    phase.validate()?;
    let parts = arith::map_segments(kind, r + 1, r1, |start, values| {
        let mut acc = ComplexSum::new();
        for i in 0..values.len() {
            let v = values.f64_at(i);
            if v != 0.0 {
                acc.add(phase.twist(start + i as u64) * v);
            }
        }
        acc.value()
    })?;
    Ok(parts.into_iter().collect::<ComplexSum>().value())
}

/// Inner weight of a type I sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    Unit,
    Log,
}

/// `Σ_{N<n≤2N} max_{R/n<M≤R1/n} |Σ_{R/n<m≤M} w(m) e(F(mn))|` for `N³ ≤ R`.
///
/// The maximum over `M` is exact: it is the largest modulus among the
/// partial sums of the inner range.
pub fn type_i_max(weight: Weight, n: u64, r: u64, r1: u64, phase: &PhaseFunction) -> Result<f64> {
    if n == 0 || r1 <= r {
        return Err(Error::InvalidArgument(format!("need N >= 1 and R < R1, got N = {n}, R = {r}, R1 = {r1}")));
    }
    if u128::from(n).pow(3) > u128::from(r) {
        return Err(Error::Window(format!("type I sums need N^3 <= R, got N = {n}, R = {r}")));
    }
    if r1 > MAX_BILINEAR {
        return Err(Error::Budget {
            what: "type I range",
            requested: r1,
            limit: MAX_BILINEAR,
        });
    }
    phase.validate()?;
    let rows: Vec<f64> = (n + 1..=2 * n)
        .into_par_iter()
        .map(|d| {
            let mut acc = ComplexSum::new();
            let mut best = 0.0f64;
            for m in r / d + 1..=r1 / d {
                let w = match weight {
                    Weight::Unit => 1.0,
                    Weight::Log => (m as f64).ln(),
                };
                acc.add(phase.twist(m * d) * w);
                best = best.max(acc.value().norm());
            }
            best
        })
        .collect();
    Ok(rows.into_iter().sum())
}

fn check_unit(seq: &[Complex64]) -> Result<()> {
    match seq.iter().position(|c| c.norm() > 1.0 + UNIT_SLACK) {
        Some(index) => Err(Error::Unbounded {
            index,
            modulus: seq[index].norm(),
        }),
        None => Ok(()),
    }
}

/// `Σ_{M<m≤2M} β_m Σ_{N<n≤2N} α_n e(F(mn))`, where `alpha[i]` is `α_{N+1+i}`
/// and `beta[j]` is `β_{M+1+j}`.
pub fn type_ii_sum(alpha: &[Complex64], beta: &[Complex64], m: u64, n: u64, phase: &PhaseFunction) -> Result<Complex64> {
    type_ii_sum_in(alpha, beta, m, n, None, phase)
}

/// [`type_ii_sum`] restricted to `R < mn ≤ R1` when `range` is given.
pub fn type_ii_sum_in(
    alpha: &[Complex64],
    beta: &[Complex64],
    m: u64,
    n: u64,
    range: Option<(u64, u64)>,
    phase: &PhaseFunction,
) -> Result<Complex64> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("need M, N >= 1".into()));
    }
    if alpha.len() as u64 != n || beta.len() as u64 != m {
        return Err(Error::InvalidArgument(format!(
            "expected {n} alpha and {m} beta coefficients, got {} and {}",
            alpha.len(),
            beta.len()
        )));
    }
    let size = m.saturating_mul(n);
    if size > MAX_BILINEAR {
        return Err(Error::Budget {
            what: "bilinear sum size MN",
            requested: size,
            limit: MAX_BILINEAR,
        });
    }
    check_unit(alpha)?;
    check_unit(beta)?;
    phase.validate()?;
    let (lo, hi) = range.unwrap_or((0, u64::MAX));
    let rows: Vec<Complex64> = (0..m as usize)
        .into_par_iter()
        .map(|j| {
            let b = beta[j];
            if b == Complex64::new(0.0, 0.0) {
                return Complex64::new(0.0, 0.0);
            }
            let mm = m + 1 + j as u64;
            let mut acc = ComplexSum::new();
            for (i, a) in alpha.iter().enumerate() {
                let t = mm * (n + 1 + i as u64);
                if t > lo && t <= hi {
                    acc.add(phase.twist(t) * a);
                }
            }
            acc.value() * b
        })
        .collect();
    Ok(rows.into_iter().collect::<ComplexSum>().value())
}

/// The exponential-sum estimates that can be checked numerically. Each uses
/// the phase `z/n` unless noted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(into = "String")]
pub enum BoundCase {
    /// `Σ Λ(n) e(z/n) ≪ z^{1/6} R^{(7k+ℓ+6)/(12(k+1))} + R^{7/8}`, `R ≤ z^{2/3}`.
    Lambda,
    /// `L⁻² Σ_n Σ_m e(z/(mn)^r) ≪ z^{1/6} R^{(2(4−r)+k(9−2r)+ℓ)/(12(k+1))} + R^{7/8}`
    /// with unit coefficients, `N = ⌊R^{7/12}⌋`, `M = ⌊R/N⌋`, `R ≤ z^{2/(2r+1)}`.
    Bilinear(u32),
    /// `Σ τ_r(n) e(z/n) ≪ T^k R^{(ℓ−k)/r+1−1/r} (log R)^r + R T⁻¹ (log R)^{r+1}`
    /// with `T = z/R`, `R ≤ z`.
    Divisor(u32),
    /// `Σ μ(n) e(z/n²) ≪ z^{1/6} R^{(5k+ℓ+4)/(12(k+1))} + z^k R^{(2ℓ+1−8k)/3} + R^{7/8}`,
    /// `R ≤ z^{2/5}`.
    MobiusSquares,
    /// `Σ μ²(n) e(z/n) ≪ z^{3497/13774} R^{15/71}`, `R ≤ z^{7/10}`.
    Squarefree,
    /// `Σ 2^{ω(n)} e(z/n) ≪ z^k R^{(1+ℓ−3k)/2}`, `R ≤ z^{2(k+1)/(3(k+1)−ℓ)}`.
    Unitary,
    /// `Σ ω(n) e(z/n) ≪ z^{1/6} R^{128/195}`, `R ≤ z^{26/41}`.
    Omega,
}

impl From<BoundCase> for String {
    fn from(c: BoundCase) -> String {
        c.to_string()
    }
}

impl fmt::Display for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundCase::Lambda => write!(f, "lambda"),
            BoundCase::Bilinear(r) => write!(f, "bilinear:{r}"),
            BoundCase::Divisor(r) => write!(f, "tau:{r}"),
            BoundCase::MobiusSquares => write!(f, "mu-squares"),
            BoundCase::Squarefree => write!(f, "mu2"),
            BoundCase::Unitary => write!(f, "2omega"),
            BoundCase::Omega => write!(f, "omega"),
        }
    }
}

impl FromStr for BoundCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let param = |p: &str| -> Result<u32> {
            match p.parse::<u32>() {
                Ok(r) if r >= 1 => Ok(r),
                _ => Err(Error::Parse(format!("bad parameter in case '{s}'"))),
            }
        };
        match s {
            "lambda" => Ok(BoundCase::Lambda),
            "mu-squares" => Ok(BoundCase::MobiusSquares),
            "mu2" => Ok(BoundCase::Squarefree),
            "2omega" => Ok(BoundCase::Unitary),
            "omega" => Ok(BoundCase::Omega),
            _ => {
                if let Some(p) = s.strip_prefix("bilinear:") {
                    Ok(BoundCase::Bilinear(param(p)?))
                } else if let Some(p) = s.strip_prefix("tau:") {
                    Ok(BoundCase::Divisor(param(p)?))
                } else {
                    Err(Error::Parse(format!(
                        "unknown case '{s}' (lambda|bilinear:<r>|tau:<r>|mu-squares|mu2|2omega|omega)"
                    )))
                }
            }
        }
    }
}

impl BoundCase {
    /// `θ` such that the estimate needs `R ≤ z^θ`.
    pub fn window(self, pair: &ExponentPair) -> f64 {
        let (k, l) = (pair.k.to_f64(), pair.l.to_f64());
        match self {
            BoundCase::Lambda => 2.0 / 3.0,
            BoundCase::Bilinear(r) => 2.0 / (2.0 * f64::from(r) + 1.0),
            BoundCase::Divisor(_) => 1.0,
            BoundCase::MobiusSquares => 0.4,
            BoundCase::Squarefree => 0.7,
            BoundCase::Unitary => 2.0 * (k + 1.0) / (3.0 * (k + 1.0) - l),
            BoundCase::Omega => 26.0 / 41.0,
        }
    }

    fn kind(self) -> &'static str {
        match self {
            BoundCase::Lambda => "lambda",
            BoundCase::Bilinear(_) => "bilinear",
            BoundCase::Divisor(_) => "tau",
            BoundCase::MobiusSquares => "mu",
            BoundCase::Squarefree => "mu2",
            BoundCase::Unitary => "2omega",
            BoundCase::Omega => "omega",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundParameters {
    pub z: f64,
    #[serde(rename = "R")]
    pub r: u64,
    #[serde(rename = "R1")]
    pub r1: u64,
    pub kind: String,
    pub k: Rational,
    pub l: Rational,
    pub epsilon: f64,
    /// Bilinear ranges `(M, N)` when the case uses them.
    pub bilinear: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheckReport {
    pub case: BoundCase,
    pub measured: f64,
    pub claimed: f64,
    pub ratio: f64,
    pub parameters: BoundParameters,
}

/// Range of `|F^{(j)}(t)| R^j / T` over `t ∈ [R, 2R]` for `F(t) = z/t`,
/// `T = z/R` and `j = 0..=max_j`. Bounded ranges mean `F` has the
/// derivative profile required of the phase in the divisor estimate.
pub fn reciprocal_derivative_profile(z: f64, r: u64, max_j: u32) -> Vec<(f64, f64)> {
    let rf = r as f64;
    let t_scale = z / rf;
    (0..=max_j)
        .map(|j| {
            let fact: f64 = (1..=j).map(f64::from).product();
            let at = |t: f64| fact * z / t.powi(j as i32 + 1) * rf.powi(j as i32) / t_scale;
            (at(2.0 * rf), at(rf))
        })
        .collect()
}

/// [`check_bound_with`] with `R1 = 2R` and `ε = EPSILON`.
pub fn check_bound(case: BoundCase, z: f64, r: u64, pair: &ExponentPair) -> Result<BoundCheckReport> {
    check_bound_with(case, z, r, r.saturating_mul(2), pair, EPSILON)
}

/// Measures `|S|` for `case` at `(z, R, R1)` and evaluates the claimed bound
/// times `z^ε`. Returns the report without judging it.
pub fn check_bound_with(
    case: BoundCase,
    z: f64,
    r: u64,
    r1: u64,
    pair: &ExponentPair,
    eps: f64,
) -> Result<BoundCheckReport> {
    if !(z.is_finite() && z >= 1.0) {
        return Err(Error::InvalidArgument(format!("need z >= 1, got {z}")));
    }
    if r <= 2 || r1 <= r || r1 > r.saturating_mul(2) {
        return Err(Error::InvalidArgument(format!("need 2 < R < R1 <= 2R, got R = {r}, R1 = {r1}")));
    }
    let theta = case.window(pair);
    let rf = r as f64;
    if rf.ln() > theta * z.ln() + 1e-12 {
        return Err(Error::Window(format!("{case} needs R <= z^{theta:.6}, got R = {r}, z = {z}")));
    }
    let (k, l) = (pair.k.to_f64(), pair.l.to_f64());
    let reciprocal = PhaseFunction::Reciprocal { z };
    let mut bilinear = None;
    let (measured, claimed) = match case {
        BoundCase::Lambda => (
            exp_sum(FunctionKind::Lambda, r, r1, &reciprocal)?.norm(),
            z.powf(1.0 / 6.0) * rf.powf((7.0 * k + l + 6.0) / (12.0 * (k + 1.0))) + rf.powf(7.0 / 8.0),
        ),
        BoundCase::Bilinear(rr) => {
            let nn = rf.powf(7.0 / 12.0).floor() as u64;
            let mm = (r / nn).max(1);
            bilinear = Some((mm, nn));
            let ones_n = vec![Complex64::new(1.0, 0.0); nn as usize];
            let ones_m = vec![Complex64::new(1.0, 0.0); mm as usize];
            let phase = PhaseFunction::PowerReciprocal { z, r: rr };
            let s = type_ii_sum(&ones_n, &ones_m, mm, nn, &phase)?.norm();
            let rr = f64::from(rr);
            let log2 = (z + 2.0).ln().powi(2);
            let e = (2.0 * (4.0 - rr) + k * (9.0 - 2.0 * rr) + l) / (12.0 * (k + 1.0));
            (s, log2 * (z.powf(1.0 / 6.0) * rf.powf(e) + rf.powf(7.0 / 8.0)))
        }
        BoundCase::Divisor(rr) => {
            let s = exp_sum(FunctionKind::TauR(rr), r, r1, &reciprocal)?.norm();
            let t = z / rf;
            let lr = rf.ln();
            let rr = f64::from(rr);
            let e = (l - k) / rr + 1.0 - 1.0 / rr;
            (s, t.powf(k) * rf.powf(e) * lr.powf(rr) + rf / t * lr.powf(rr + 1.0))
        }
        BoundCase::MobiusSquares => (
            exp_sum(FunctionKind::Mobius, r, r1, &PhaseFunction::PowerReciprocal { z, r: 2 })?.norm(),
            z.powf(1.0 / 6.0) * rf.powf((5.0 * k + l + 4.0) / (12.0 * (k + 1.0)))
                + z.powf(k) * rf.powf((2.0 * l + 1.0 - 8.0 * k) / 3.0)
                + rf.powf(7.0 / 8.0),
        ),
        BoundCase::Squarefree => (
            exp_sum(FunctionKind::MobiusSquared, r, r1, &reciprocal)?.norm(),
            z.powf(3497.0 / 13774.0) * rf.powf(15.0 / 71.0),
        ),
        BoundCase::Unitary => (
            exp_sum(FunctionKind::TwoPowOmega, r, r1, &reciprocal)?.norm(),
            z.powf(k) * rf.powf((1.0 + l - 3.0 * k) / 2.0),
        ),
        BoundCase::Omega => (
            exp_sum(FunctionKind::Omega, r, r1, &reciprocal)?.norm(),
            z.powf(1.0 / 6.0) * rf.powf(128.0 / 195.0),
        ),
    };
    let claimed = claimed * z.powf(eps);
    Ok(BoundCheckReport {
        case,
        measured,
        claimed,
        ratio: measured / claimed,
        parameters: BoundParameters {
            z,
            r,
            r1,
            kind: case.kind().into(),
            k: pair.k.clone(),
            l: pair.l.clone(),
            epsilon: eps,
            bilinear,
        },
    })
}

/// Runs independent checks in parallel, in input order.
pub fn check_bounds(points: &[(BoundCase, f64, u64)], pair: &ExponentPair) -> Vec<Result<BoundCheckReport>> {
    points.par_iter().map(|&(case, z, r)| check_bound(case, z, r, pair)).collect()
}
