//! Numerical checks of the combinatorial decompositions used to turn sums of
//! `Λ`, `μ` and convolutions `f ⋆ g` twisted by `e(F(n))` into type I and
//! type II sums.
//!
//! Every range condition is evaluated with integer floor division, so
//! `R/n < m ≤ R1/n` means `⌊R/n⌋ < m ≤ ⌊R1/n⌋`.

use crate::arith::{self, FunctionKind, SieveTable};
use crate::error::{Error, Result};
use crate::numeric::{unit, ComplexSum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Residual tolerance for all identity checks, relative to `1 + |LHS|`.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// The phase `F` in `e(F(n))`. The closed forms reduce `F(n)` modulo 1 with
/// integer arithmetic so that the phase keeps full precision for large `z`.
#[derive(Clone)]
pub enum PhaseFunction {
    /// `t ↦ z/t`
    Reciprocal { z: f64 },
    /// `t ↦ z/t^r`
    PowerReciprocal { z: f64, r: u32 },
    /// `t ↦ hx/(t + a)`, `a ∈ {0, 1}`
    ShiftedReciprocal { h: f64, x: f64, a: u32 },
    /// Any deterministic map `[1, ∞) → [0, ∞)`.
    Opaque(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for PhaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseFunction::Reciprocal { z } => write!(f, "z/t (z = {z})"),
            PhaseFunction::PowerReciprocal { z, r } => write!(f, "z/t^{r} (z = {z})"),
            PhaseFunction::ShiftedReciprocal { h, x, a } => write!(f, "hx/(t+{a}) (h = {h}, x = {x})"),
            PhaseFunction::Opaque(_) => write!(f, "opaque"),
        }
    }
}

/// `frac(c/d)` for `c ≥ 0` real and `d ≥ 1` integer, splitting `c` into its
/// integer and fractional parts.
fn frac_over(c: f64, d: u128) -> f64 {
    let ci = c.floor();
    let cf = c - ci;
    let rem = if ci < 2f64.powi(100) {
        (ci as u128 % d) as f64
    } else {
        ci.rem_euclid(d as f64)
    };
    let v = rem / d as f64 + cf / d as f64;
    v - v.floor()
}

impl PhaseFunction {
    pub fn zero() -> Self {
        PhaseFunction::Reciprocal { z: 0.0 }
    }

    pub fn opaque(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        PhaseFunction::Opaque(Arc::new(f))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        match *self {
            PhaseFunction::Reciprocal { z } | PhaseFunction::PowerReciprocal { z, .. } if !(z >= 0.0 && z.is_finite()) => {
                bad(format!("phase coefficient z = {z} must be finite and >= 0"))
            }
            PhaseFunction::PowerReciprocal { r: 0, .. } => bad("phase exponent r must be >= 1".into()),
            PhaseFunction::ShiftedReciprocal { h, x, a } => {
                if !(h >= 0.0 && x >= 0.0 && (h * x).is_finite()) {
                    bad(format!("phase needs h, x >= 0, got h = {h}, x = {x}"))
                } else if a > 1 {
                    bad(format!("phase shift a = {a} must be 0 or 1"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// `F(t)` as a real number.
    pub fn value(&self, t: f64) -> f64 {
        match self {
            PhaseFunction::Reciprocal { z } => z / t,
            PhaseFunction::PowerReciprocal { z, r } => z / t.powi(*r as i32),
            PhaseFunction::ShiftedReciprocal { h, x, a } => h * x / (t + f64::from(*a)),
            PhaseFunction::Opaque(f) => f(t),
        }
    }

    /// `F(n) mod 1` in `[0, 1)`.
    pub fn frac_at(&self, n: u64) -> f64 {
        match self {
            PhaseFunction::Reciprocal { z } => frac_over(*z, u128::from(n)),
            PhaseFunction::PowerReciprocal { z, r } => match u128::from(n).checked_pow(*r) {
                Some(d) => frac_over(*z, d),
                None => {
                    let v = self.value(n as f64);
                    v - v.floor()
                }
            },
            PhaseFunction::ShiftedReciprocal { h, x, a } => frac_over(h * x, u128::from(n) + u128::from(*a)),
            PhaseFunction::Opaque(f) => {
                let v = f(n as f64);
                v - v.floor()
            }
        }
    }

    /// `e(F(n))`.
    pub fn twist(&self, n: u64) -> Complex64 {
        unit(self.frac_at(n))
    }
}

/// LHS, RHS and residual of one identity instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SidesReport {
    pub lhs: (f64, f64),
    pub rhs: (f64, f64),
    /// `|LHS − RHS|`
    pub residual: f64,
    /// `|LHS − RHS| / (1 + |LHS|)`
    pub relative: f64,
}

impl SidesReport {
    fn new(lhs: Complex64, rhs: Complex64) -> Self {
        let residual = (lhs - rhs).norm();
        SidesReport {
            lhs: (lhs.re, lhs.im),
            rhs: (rhs.re, rhs.im),
            residual,
            relative: residual / (1.0 + lhs.norm()),
        }
    }

    pub fn lhs(&self) -> Complex64 {
        Complex64::new(self.lhs.0, self.lhs.1)
    }

    pub fn rhs(&self) -> Complex64 {
        Complex64::new(self.rhs.0, self.rhs.1)
    }

    pub fn holds(&self) -> bool {
        self.relative <= IDENTITY_TOLERANCE
    }
}

/// Convolution coefficients for cutoff `U`, indexed from 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VaughanCoefficients {
    pub u: u64,
    pub limit: u64,
    /// `(μ1_U⁻ ⋆ Λ1_U⁻)(n)`, `n ≤ U²`
    pub a_lambda: Vec<f64>,
    /// `(μ1_U⁻ ⋆ 1)(m)`, `m ≤ limit`
    pub b: Vec<i64>,
    /// `(μ1_U⁻ ⋆ μ1_U⁻)(n)`, `n ≤ U²`
    pub a_mu: Vec<i64>,
    /// `(μ1_U⁺ ⋆ 1)(n)`, `n ≤ limit`
    pub b_plus: Vec<i64>,
    omega: Vec<i64>,
}

impl VaughanCoefficients {
    pub fn a_lambda(&self, n: u64) -> f64 {
        self.a_lambda.get((n - 1) as usize).copied().unwrap_or(0.0)
    }

    pub fn a_mu(&self, n: u64) -> i64 {
        self.a_mu.get((n - 1) as usize).copied().unwrap_or(0)
    }

    pub fn b(&self, m: u64) -> i64 {
        self.b[(m - 1) as usize]
    }

    pub fn b_plus(&self, n: u64) -> i64 {
        self.b_plus[(n - 1) as usize]
    }

    /// `α_n = a_n / log R`, bounded by 1 in modulus for `U² ≤ R`.
    pub fn alpha(&self, n: u64, r: u64) -> f64 {
        self.a_lambda(n) / (r as f64).ln()
    }

    /// `β_m = b_m 2^{−ω(m)}`, bounded by 1 in modulus.
    pub fn beta(&self, m: u64) -> f64 {
        self.b(m) as f64 / (1u64 << self.omega[(m - 1) as usize]) as f64
    }
}

pub fn vaughan_coeffs(u: u64, limit: u64) -> Result<VaughanCoefficients> {
    if u == 0 {
        return Err(Error::InvalidArgument("U must be >= 1".into()));
    }
    let u2 = u.checked_mul(u).ok_or(Error::Overflow("U²"))?;
    if limit < u2 {
        return Err(Error::InvalidArgument(format!("limit {limit} below U² = {u2}")));
    }
    let mu = arith::build_sieve(FunctionKind::Mobius, 1, limit)?;
    let lambda = arith::build_sieve(FunctionKind::Lambda, 1, u)?;
    let omega = arith::build_sieve(FunctionKind::Omega, 1, limit)?;
    let len = limit as usize;
    let mut b = vec![0i64; len];
    for d in 1..=u {
        let m = mu.exact_at(d).unwrap_or(0);
        if m != 0 {
            for k in (d..=limit).step_by(d as usize) {
                b[(k - 1) as usize] += m;
            }
        }
    }
    // μ ⋆ 1 = [n = 1]
    let b_plus: Vec<i64> = b.iter().enumerate().map(|(i, v)| i64::from(i == 0) - v).collect();
    let mut a_lambda = vec![0.0; u2 as usize];
    let mut a_mu = vec![0i64; u2 as usize];
    for d in 1..=u {
        let md = mu.exact_at(d).unwrap_or(0);
        if md == 0 {
            continue;
        }
        for e in 1..=u {
            let i = (d * e - 1) as usize;
            a_lambda[i] += md as f64 * lambda.f64_at(e);
            a_mu[i] += md * mu.exact_at(e).unwrap_or(0);
        }
    }
    let omega = (1..=limit).map(|n| omega.exact_at(n).unwrap_or(0)).collect();
    Ok(VaughanCoefficients {
        u,
        limit,
        a_lambda,
        b,
        a_mu,
        b_plus,
        omega,
    })
}

fn check_vaughan_window(r: u64, r1: u64, u: u64) -> Result<()> {
    if !(1 < r && r < r1 && r1 <= 2 * r) {
        return Err(Error::Window(format!("need 1 < R < R1 <= 2R, got R = {r}, R1 = {r1}")));
    }
    if u == 0 || u.saturating_mul(u) > r {
        return Err(Error::Window(format!("need 1 <= U <= R^(1/2), got U = {u}, R = {r}")));
    }
    Ok(())
}

/// `Σ_{R<m≤R1, m ≡ 0 (n)} w(m/n) e(F(m))` over `R/n < m ≤ R1/n`, with an extra
/// lower bound `m > floor_lo` on the inner variable.
fn inner(phase: &PhaseFunction, r: u64, r1: u64, n: u64, floor_lo: u64, w: impl Fn(u64) -> f64) -> Complex64 {
    let mut acc = ComplexSum::new();
    for m in (r / n).max(floor_lo) + 1..=r1 / n {
        let c = w(m);
        if c != 0.0 {
            acc.add(phase.twist(m * n) * c);
        }
    }
    acc.value()
}

/// `Σ_{R<n≤R1} Λ(n) e(F(n))` against its three-sum decomposition at cutoff `U`.
pub fn vaughan_lambda_sides(r: u64, r1: u64, u: u64, phase: &PhaseFunction) -> Result<SidesReport> {
    check_vaughan_window(r, r1, u)?;
    phase.validate()?;
    let lambda = arith::build_sieve(FunctionKind::Lambda, 1, r1)?;
    let mu = arith::build_sieve(FunctionKind::Mobius, 1, u)?;
    let co = vaughan_coeffs(u, r1)?;

    let mut lhs = ComplexSum::new();
    for n in r + 1..=r1 {
        let v = lambda.f64_at(n);
        if v != 0.0 {
            lhs.add(phase.twist(n) * v);
        }
    }
    let mut rhs = ComplexSum::new();
    for n in 1..=u {
        let m = mu.f64_at(n);
        if m != 0.0 {
            rhs.add(inner(phase, r, r1, n, 0, |k| (k as f64).ln()) * m);
        }
    }
    for n in 1..=u * u {
        let a = co.a_lambda(n);
        if a != 0.0 {
            rhs.add(-inner(phase, r, r1, n, 0, |_| 1.0) * a);
        }
    }
    for n in u + 1..=r1 / u {
        let l = lambda.f64_at(n);
        if l != 0.0 {
            // the inner variable starts at 2: b_1 = 1 would otherwise
            // reintroduce the left side when U = 1
            rhs.add(-inner(phase, r, r1, n, 1, |k| co.b(k) as f64) * l);
        }
    }
    Ok(SidesReport::new(lhs.value(), rhs.value()))
}

/// `Σ_{R<n≤R1} μ(n) e(F(n))` against its three-sum decomposition at cutoff `U`.
pub fn vaughan_mobius_sides(r: u64, r1: u64, u: u64, phase: &PhaseFunction) -> Result<SidesReport> {
    mobius_sides(r, r1, u, phase, false)
}

/// The same split with a `log m` weight on the first two sums. It is not an
/// identity; kept to document that the weight must be absent.
pub fn vaughan_mobius_sides_log_weighted(r: u64, r1: u64, u: u64, phase: &PhaseFunction) -> Result<SidesReport> {
    mobius_sides(r, r1, u, phase, true)
}

fn mobius_sides(r: u64, r1: u64, u: u64, phase: &PhaseFunction, log_weight: bool) -> Result<SidesReport> {
    check_vaughan_window(r, r1, u)?;
    phase.validate()?;
    let mu = arith::build_sieve(FunctionKind::Mobius, 1, r1)?;
    let co = vaughan_coeffs(u, r1)?;
    let w = |k: u64| if log_weight { (k as f64).ln() } else { 1.0 };

    let mut lhs = ComplexSum::new();
    for n in r + 1..=r1 {
        let v = mu.f64_at(n);
        if v != 0.0 {
            lhs.add(phase.twist(n) * v);
        }
    }
    let mut rhs = ComplexSum::new();
    for n in 1..=u * u {
        let a = co.a_mu(n);
        if a != 0 {
            rhs.add(-inner(phase, r, r1, n, 0, w) * a as f64);
        }
    }
    for n in u + 1..=r1 / u {
        let b = co.b_plus(n);
        if b != 0 {
            rhs.add(inner(phase, r, r1, n, u, |k| mu.f64_at(k)) * b as f64);
        }
    }
    Ok(SidesReport::new(lhs.value(), rhs.value()))
}

fn check_cover(t: &SieveTable, hi: u64) -> Result<()> {
    if t.lo() != 1 {
        return Err(Error::InvalidArgument("convolution tables must start at 1".into()));
    }
    t.require(1, hi)
}

/// `(f ⋆ g)(n)` by direct divisor enumeration.
fn convolution_at(f: &SieveTable, g: &SieveTable, n: u64) -> f64 {
    let mut acc = 0.0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            let e = n / d;
            acc += f.f64_at(d) * g.f64_at(e);
            if e != d {
                acc += f.f64_at(e) * g.f64_at(d);
            }
        }
        d += 1;
    }
    acc
}

/// `Σ_{n≤x} (f⋆g)(n) h(n)` against the hyperbola split at `U`.
pub fn hyperbola_sides(
    f: &SieveTable,
    g: &SieveTable,
    h: &(dyn Fn(u64) -> Complex64 + Sync),
    x: u64,
    u: u64,
) -> Result<SidesReport> {
    if u == 0 || u > x {
        return Err(Error::InvalidArgument(format!("need 1 <= U <= x, got U = {u}, x = {x}")));
    }
    check_cover(f, x)?;
    check_cover(g, x)?;
    let mut lhs = ComplexSum::new();
    for n in 1..=x {
        let c = convolution_at(f, g, n);
        if c != 0.0 {
            lhs.add(h(n) * c);
        }
    }
    let mut rhs = ComplexSum::new();
    for n in 1..=u {
        let fv = f.f64_at(n);
        for m in 1..=x / n {
            rhs.add(h(m * n) * (fv * g.f64_at(m)));
        }
    }
    for n in 1..=x / u {
        let gv = g.f64_at(n);
        for m in 1..=x / n {
            rhs.add(h(m * n) * (gv * f.f64_at(m)));
        }
    }
    for n in 1..=u {
        let fv = f.f64_at(n);
        for m in 1..=x / u {
            rhs.add(-h(m * n) * (fv * g.f64_at(m)));
        }
    }
    Ok(SidesReport::new(lhs.value(), rhs.value()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolaExpReport {
    pub sides: SidesReport,
    /// `S1 + S2 + S3 − S4` compared against the same LHS.
    pub four_sum: SidesReport,
}

impl HyperbolaExpReport {
    pub fn holds(&self) -> bool {
        self.sides.holds() && self.four_sum.holds()
    }
}

/// `Σ_{R<n≤R1} (f⋆g)(n) e(F(n))` against the three-sum exponential hyperbola
/// split, and separately against the four-sum split it is derived from.
pub fn hyperbola_exp_sides(
    f: &SieveTable,
    g: &SieveTable,
    phase: &PhaseFunction,
    r: u64,
    r1: u64,
    u: u64,
) -> Result<HyperbolaExpReport> {
    if !(1 <= r && r < r1) {
        return Err(Error::Window(format!("need 1 <= R < R1, got R = {r}, R1 = {r1}")));
    }
    if u == 0 || u > r {
        return Err(Error::Window(format!("need 1 <= U <= R, got U = {u}, R = {r}")));
    }
    phase.validate()?;
    check_cover(f, r1)?;
    check_cover(g, r1)?;
    let e = |k: u64| phase.twist(k);

    let mut lhs = ComplexSum::new();
    for n in r + 1..=r1 {
        let c = convolution_at(f, g, n);
        if c != 0.0 {
            lhs.add(e(n) * c);
        }
    }
    let lhs = lhs.value();

    // Σ_{n∈ns} a(n) Σ_{lo(n)<m≤hi(n)} b(m) e(mn)
    let double = |ns: std::ops::RangeInclusive<u64>,
                  a: &SieveTable,
                  b: &SieveTable,
                  lo: &dyn Fn(u64) -> u64,
                  hi: &dyn Fn(u64) -> u64| {
        let mut acc = ComplexSum::new();
        for n in ns {
            let av = a.f64_at(n);
            if av == 0.0 {
                continue;
            }
            for m in lo(n) + 1..=hi(n) {
                let bv = b.f64_at(m);
                if bv != 0.0 {
                    acc.add(e(m * n) * (av * bv));
                }
            }
        }
        acc.value()
    };
    let t_hi = u * r1 / r;
    let t1 = double(1..=t_hi, f, g, &|n| r / n, &|n| r1 / n);
    let t2 = double(1..=r / u, g, f, &|n| r / n, &|n| r1 / n);
    let t3 = double(u + 1..=t_hi, f, g, &|n| r / n, &|_| r / u);
    let rhs = t1 + t2 - t3;

    let s1 = double(1..=u, f, g, &|n| r / n, &|n| r1 / n);
    let s3 = double(r / u + 1..=r1 / u, g, f, &|_| 0, &|n| r1 / n);
    let s4 = double(1..=u, f, g, &|_| r / u, &|_| r1 / u);
    let four = s1 + t2 + s3 - s4;

    Ok(HyperbolaExpReport {
        sides: SidesReport::new(lhs, rhs),
        four_sum: SidesReport::new(lhs, four),
    })
}

/// The exponential hyperbola split for `μ² = χ₂ ⋆ 1`, written with the
/// square roots made explicit:
///
/// ```text
/// Σ_{n ≤ √(UR1/R)} μ(n) Σ_{R/n² < m ≤ R1/n²} e(F(mn²))
///   + Σ_{n ≤ R/U} Σ_{√(R/n) < m ≤ √(R1/n)} μ(m) e(F(m²n))
///   − Σ_{√U < n ≤ √(UR1/R)} μ(n) Σ_{R/n² < m ≤ R/U} e(F(mn²))
/// ```
pub fn squarefree_split_sides(r: u64, r1: u64, u: u64, phase: &PhaseFunction) -> Result<SidesReport> {
    if !(1 <= r && r < r1) || u == 0 || u > r {
        return Err(Error::Window(format!(
            "need 1 <= U <= R < R1, got R = {r}, R1 = {r1}, U = {u}"
        )));
    }
    phase.validate()?;
    let mu = arith::build_sieve(FunctionKind::Mobius, 1, r1)?;
    let mu2 = arith::build_sieve(FunctionKind::MobiusSquared, 1, r1)?;
    let e = |k: u64| phase.twist(k);

    let mut lhs = ComplexSum::new();
    for n in r + 1..=r1 {
        if mu2.f64_at(n) != 0.0 {
            lhs.add(e(n));
        }
    }
    let t_hi = (u * r1 / r).isqrt();
    let mut rhs = ComplexSum::new();
    for n in 1..=t_hi {
        let m_n = mu.f64_at(n);
        if m_n == 0.0 {
            continue;
        }
        let n2 = n * n;
        for m in r / n2 + 1..=r1 / n2 {
            rhs.add(e(m * n2) * m_n);
        }
        if n > u.isqrt() {
            for m in r / n2 + 1..=r / u {
                rhs.add(-e(m * n2) * m_n);
            }
        }
    }
    for n in 1..=r / u {
        for m in (r / n).isqrt() + 1..=(r1 / n).isqrt() {
            let v = mu.f64_at(m);
            if v != 0.0 {
                rhs.add(e(m * m * n) * v);
            }
        }
    }
    Ok(SidesReport::new(lhs.value(), rhs.value()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityKind {
    VaughanLambda,
    VaughanMu,
    Hyperbola,
    HyperbolaExp,
}

impl std::str::FromStr for IdentityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vaughan-lambda" => Ok(IdentityKind::VaughanLambda),
            "vaughan-mu" => Ok(IdentityKind::VaughanMu),
            "hyperbola" => Ok(IdentityKind::Hyperbola),
            "hyperbola-exp" => Ok(IdentityKind::HyperbolaExp),
            _ => Err(Error::Parse(format!(
                "unknown identity '{s}' (vaughan-lambda|vaughan-mu|hyperbola|hyperbola-exp)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trial {
    pub index: u64,
    pub r: u64,
    pub r1: u64,
    pub u: u64,
    pub detail: String,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub identity: IdentityKind,
    pub seed: u64,
    pub trials: Vec<Trial>,
    pub max_relative: f64,
}

impl SuiteReport {
    pub fn holds(&self) -> bool {
        self.max_relative <= IDENTITY_TOLERANCE
    }
}

const TABLE_KINDS: [FunctionKind; 8] = [
    FunctionKind::One,
    FunctionKind::Mobius,
    FunctionKind::MobiusSquared,
    FunctionKind::Lambda,
    FunctionKind::TauR(2),
    FunctionKind::Omega,
    FunctionKind::TwoPowOmega,
    FunctionKind::ChiTwo,
];

/// A phase of a random form with parameters in `[1, 10⁶]`.
pub fn random_phase(rng: &mut impl Rng) -> PhaseFunction {
    let z: f64 = rng.gen_range(1.0..=1e6);
    match rng.gen_range(0..4) {
        0 => PhaseFunction::Reciprocal { z },
        1 => PhaseFunction::PowerReciprocal {
            z,
            r: rng.gen_range(1..=3),
        },
        2 => PhaseFunction::ShiftedReciprocal {
            h: rng.gen_range(1.0..=1e3),
            x: rng.gen_range(1.0..=1e3),
            a: rng.gen_range(0..=1),
        },
        _ => PhaseFunction::opaque(move |t| z * t.sqrt().recip() + t.ln()),
    }
}

fn one_trial(identity: IdentityKind, rng: &mut ChaCha8Rng, index: u64) -> Result<Trial> {
    let r: u64 = rng.gen_range(20..=500);
    let r1: u64 = rng.gen_range(r + 1..=2 * r);
    let phase = random_phase(rng);
    let (u, detail, relative) = match identity {
        IdentityKind::VaughanLambda | IdentityKind::VaughanMu => {
            let u = rng.gen_range(1..=r.isqrt());
            let rep = if identity == IdentityKind::VaughanLambda {
                vaughan_lambda_sides(r, r1, u, &phase)?
            } else {
                vaughan_mobius_sides(r, r1, u, &phase)?
            };
            (u, format!("{phase:?}"), rep.relative)
        }
        IdentityKind::Hyperbola => {
            let (fk, gk) = (TABLE_KINDS[rng.gen_range(0..8)], TABLE_KINDS[rng.gen_range(0..8)]);
            let u = rng.gen_range(1..=r);
            let f = arith::build_sieve(fk, 1, r)?;
            let g = arith::build_sieve(gk, 1, r)?;
            let rep = hyperbola_sides(&f, &g, &|n| phase.twist(n), r, u)?;
            (u, format!("f = {fk}, g = {gk}, {phase:?}"), rep.relative)
        }
        IdentityKind::HyperbolaExp => {
            let (fk, gk) = (TABLE_KINDS[rng.gen_range(0..8)], TABLE_KINDS[rng.gen_range(0..8)]);
            let u = rng.gen_range(1..=r);
            let f = arith::build_sieve(fk, 1, r1)?;
            let g = arith::build_sieve(gk, 1, r1)?;
            let rep = hyperbola_exp_sides(&f, &g, &phase, r, r1, u)?;
            (
                u,
                format!("f = {fk}, g = {gk}, {phase:?}"),
                rep.sides.relative.max(rep.four_sum.relative),
            )
        }
    };
    Ok(Trial {
        index,
        r,
        r1,
        u,
        detail,
        relative,
    })
}

/// `trials` seeded random instances. Trial `i` draws from its own ChaCha
/// stream, so results do not depend on scheduling.
pub fn random_suite(identity: IdentityKind, trials: u64, seed: u64) -> Result<SuiteReport> {
    let trials = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            one_trial(identity, &mut rng, i)
        })
        .collect::<Result<Vec<_>>>()?;
    let max_relative = trials.iter().map(|t| t.relative).fold(0.0, f64::max);
    Ok(SuiteReport {
        identity,
        seed,
        trials,
        max_relative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(kind: FunctionKind, hi: u64) -> SieveTable {
        arith::build_sieve(kind, 1, hi).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let co = vaughan_coeffs(2, 10).unwrap();
        assert!((co.a_lambda(4) + 2f64.ln()).abs() < 1e-15);
        assert_eq!(co.b(6), 0);
        assert_eq!(co.b(1), 1);
        assert_eq!(co.a_lambda(5), 0.0);
        assert!(vaughan_coeffs(4, 15).is_err());
        assert!(vaughan_coeffs(0, 15).is_err());
    }

    #[test]
    fn coefficients_match_double_sums() {
        let (u, limit) = (9, 400);
        let co = vaughan_coeffs(u, limit).unwrap();
        let mu = |n: u64| arith::eval_point(FunctionKind::Mobius, n).unwrap().to_f64();
        let lam = |n: u64| arith::eval_point(FunctionKind::Lambda, n).unwrap().to_f64();
        let tau = table(FunctionKind::TAU, limit);
        for n in 1..=limit {
            let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            let b: f64 = divs.iter().filter(|&&d| d <= u).map(|&d| mu(d)).sum();
            let bp: f64 = divs.iter().filter(|&&d| d > u).map(|&d| mu(d)).sum();
            assert_eq!(co.b(n) as f64, b);
            assert_eq!(co.b_plus(n) as f64, bp);
            if n <= u {
                assert_eq!(co.b(n), i64::from(n == 1));
            }
            assert!(co.beta(n).abs() <= 1.0);
            let pairs = divs.iter().filter(|&&d| d <= u && n / d <= u);
            let al: f64 = pairs.clone().map(|&d| mu(d) * lam(n / d)).sum();
            let am: f64 = pairs.map(|&d| mu(d) * mu(n / d)).sum();
            assert!((co.a_lambda(n) - al).abs() < 1e-12, "n={n}");
            assert_eq!(co.a_mu(n) as f64, am);
            assert!(co.a_mu(n).unsigned_abs() <= tau.exact_at(n).unwrap() as u64);
            if n <= u * u {
                assert!(co.alpha(n, u * u).abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn vaughan_lambda_examples() {
        let p = PhaseFunction::Reciprocal { z: 1234.5 };
        assert!(vaughan_lambda_sides(50, 97, 7, &p).unwrap().holds());
        let p = PhaseFunction::PowerReciprocal { z: 1e5, r: 2 };
        assert!(vaughan_lambda_sides(20, 40, 4, &p).unwrap().holds());
        let rep = vaughan_lambda_sides(100, 150, 3, &PhaseFunction::zero()).unwrap();
        let chebyshev: f64 = (101..=150u64)
            .map(|n| arith::eval_point(FunctionKind::Lambda, n).unwrap().to_f64())
            .sum();
        assert!((rep.lhs().re - chebyshev).abs() < 1e-9);
        assert!(rep.holds());
        for u in 1..=7 {
            assert!(vaughan_lambda_sides(50, 97, u, &p).unwrap().holds(), "U={u}");
        }
    }

    #[test]
    fn vaughan_mobius_examples() {
        let p = PhaseFunction::PowerReciprocal { z: 9999.0, r: 2 };
        assert!(vaughan_mobius_sides(50, 97, 7, &p).unwrap().holds());
        let rep = vaughan_mobius_sides(100, 190, 5, &PhaseFunction::zero()).unwrap();
        let mertens = |x: u64| -> f64 { (1..=x).map(|n| arith::eval_point(FunctionKind::Mobius, n).unwrap().to_f64()).sum() };
        assert!((rep.lhs().re - (mertens(190) - mertens(100))).abs() < 1e-12);
        assert!(rep.holds());
        assert!(vaughan_mobius_sides(50, 97, 1, &p).unwrap().holds());
    }

    #[test]
    fn log_weighted_mobius_split_is_not_an_identity() {
        let p = PhaseFunction::PowerReciprocal { z: 9999.0, r: 2 };
        for (r, r1, u) in [(50, 97, 7), (200, 390, 10), (30, 60, 2)] {
            assert!(vaughan_mobius_sides(r, r1, u, &p).unwrap().holds());
            let bad = vaughan_mobius_sides_log_weighted(r, r1, u, &p).unwrap();
            assert!(bad.relative > 1e-3, "R={r}: {bad:?}");
        }
    }

    #[test]
    fn vaughan_window() {
        let p = PhaseFunction::zero();
        assert!(matches!(vaughan_lambda_sides(50, 101, 2, &p), Err(Error::Window(_))));
        assert!(matches!(vaughan_lambda_sides(50, 97, 8, &p), Err(Error::Window(_))));
        assert!(matches!(vaughan_mobius_sides(1, 2, 1, &p), Err(Error::Window(_))));
    }

    #[test]
    fn hyperbola_examples() {
        let one = table(FunctionKind::One, 100);
        let mu = table(FunctionKind::Mobius, 100);
        let unit_h = |_: u64| Complex64::new(1.0, 0.0);
        let rep = hyperbola_sides(&one, &one, &unit_h, 10, 3).unwrap();
        assert_eq!(rep.lhs().re, 27.0);
        assert_eq!(rep.rhs().re, 27.0);
        let rep = hyperbola_sides(&mu, &one, &unit_h, 100, 10).unwrap();
        assert_eq!(rep.lhs().re, 1.0);
        assert_eq!(rep.rhs().re, 1.0);
        let tau = table(FunctionKind::TAU, 100);
        let rep = hyperbola_sides(&tau, &mu, &|n| unit(n as f64 * 0.1234), 100, 100).unwrap();
        assert!(rep.holds());
        assert!(hyperbola_sides(&one, &one, &unit_h, 101, 3).is_err());
        assert!(hyperbola_sides(&one, &one, &unit_h, 10, 11).is_err());
    }

    #[test]
    fn hyperbola_exp_examples() {
        let chi = table(FunctionKind::ChiTwo, 800);
        let tau = table(FunctionKind::TAU, 800);
        let one = table(FunctionKind::One, 800);
        let p = PhaseFunction::Reciprocal { z: 54_321.0 };
        let rep = hyperbola_exp_sides(&chi, &tau, &p, 400, 800, 400).unwrap();
        assert!(rep.holds(), "{rep:?}");
        let rep = hyperbola_exp_sides(&one, &one, &PhaseFunction::zero(), 100, 180, 7).unwrap();
        let pairs: usize = (101..=180u64).map(|n| (1..=n).filter(|d| n % d == 0).count()).sum();
        assert_eq!(rep.sides.lhs().re, pairs as f64);
        assert_eq!(rep.sides.rhs().re, pairs as f64);
        assert_eq!(rep.four_sum.rhs().re, pairs as f64);
        let u = (400f64).powf(2.0 / 3.0) as u64;
        let rep = hyperbola_exp_sides(&chi, &one, &p, 400, 800, u).unwrap();
        assert!(rep.holds());
        assert!(hyperbola_exp_sides(&chi, &one, &p, 400, 800, 401).is_err());
    }

    #[test]
    fn squarefree_split() {
        let p = PhaseFunction::Reciprocal { z: 98_765.4 };
        for u in [1, 2, 3, 17, 54, 100, 300] {
            let rep = squarefree_split_sides(300, 599, u, &p).unwrap();
            assert!(rep.holds(), "U={u}: {rep:?}");
        }
    }

    #[test]
    fn squarefree_is_chi_two_convolved_with_one() {
        let n = 1_000_000;
        let chi = table(FunctionKind::ChiTwo, n);
        let one = table(FunctionKind::One, n);
        let mu2 = table(FunctionKind::MobiusSquared, n);
        let conv = arith::dirichlet_convolve(&chi, &one, n).unwrap();
        for k in 1..=n {
            assert_eq!(conv.exact_at(k), mu2.exact_at(k), "n={k}");
        }
    }

    #[test]
    fn phase_reduction_is_exact() {
        let p = PhaseFunction::Reciprocal { z: 1e15 + 0.25 };
        // 10^15 ≡ 0 (mod 8)
        assert!((p.frac_at(8) - 0.25 / 8.0).abs() < 1e-15);
        let p = PhaseFunction::ShiftedReciprocal { h: 3.0, x: 7.0, a: 1 };
        assert!((p.frac_at(4) - 0.2).abs() < 1e-15);
        let p = PhaseFunction::PowerReciprocal { z: 100.5, r: 2 };
        assert!((p.frac_at(3) - (100.5f64 / 9.0).fract()).abs() < 1e-14);
        assert!(PhaseFunction::PowerReciprocal { z: 1.0, r: 0 }.validate().is_err());
        assert!(PhaseFunction::ShiftedReciprocal { h: 1.0, x: 1.0, a: 2 }.validate().is_err());
        assert!(PhaseFunction::Reciprocal { z: -1.0 }.validate().is_err());
    }

    #[test]
    fn suites_are_reproducible() {
        let a = random_suite(IdentityKind::VaughanLambda, 8, 11).unwrap();
        let b = random_suite(IdentityKind::VaughanLambda, 8, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.holds());
        assert_eq!("hyperbola-exp".parse::<IdentityKind>().unwrap(), IdentityKind::HyperbolaExp);
    }
}
