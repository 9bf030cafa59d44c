//! Exact evaluation of `S_f(x) = Σ_{n≤x} f(⌊x/n⌋)` and its error term
//! `E(x) = S_f(x) − x·C_f`, where `C_f = Σ_{n≥1} f(n)/(n(n+1))`.
//!
//! The block evaluator splits at `N` and groups the tail `n > N` by quotient
//! value `d = ⌊x/n⌋`:
//!
//! ```text
//! S_f(x) = Σ_{n≤N} f(⌊x/n⌋) + Σ_{d ≤ ⌊x/(N+1)⌋} f(d) · (⌊x/d⌋ − max(⌊x/(d+1)⌋, N))
//! ```
//!
//! The multiplicity is clipped at `N` because `⌊x/N⌋` and `⌊x/(N+1)⌋` can
//! coincide, in which case part of that quotient class lies in the head.

use crate::arith::{self, Budget, FunctionKind, SieveTable};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, Numeric};
use rayon::prelude::*;
use serde::Serialize;

pub const MAX_NAIVE_X: u64 = 10_000_000;
pub const MAX_FAST_X: u64 = 1_000_000_000_000;
pub const MIN_CUTOFF: u64 = 1_000;
/// Cutoff used by [`error_scan`] for the main-term constant.
pub const SCAN_CUTOFF: u64 = 100_000_000;
/// `|E|` is floored here before taking logarithms.
pub const RESIDUAL_FLOOR: f64 = 1e-9;
/// Exponent of the `|f(n)| ≤ B·n^ε` envelope for divisor-type kinds.
pub const ENVELOPE_EPS: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Fast,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "fast" => Ok(Method::Fast),
            _ => Err(Error::Parse(format!("unknown method '{s}' (naive|fast)"))),
        }
    }
}

enum Acc {
    Int(i128),
    Real(CompensatedSum),
}

impl Acc {
    fn for_kind(kind: FunctionKind) -> Self {
        if kind.is_integer_valued() {
            Acc::Int(0)
        } else {
            Acc::Real(CompensatedSum::new())
        }
    }

    #[inline]
    fn add_scaled(&mut self, v: Numeric, times: u64) {
        match (self, v) {
            (Acc::Int(s), Numeric::Int(v)) => *s += v * i128::from(times),
            (Acc::Real(s), v) => s.add(v.to_f64() * times as f64),
            (Acc::Int(_), Numeric::Real(_)) => unreachable!("real value for an integer kind"),
        }
    }

    fn finish(self) -> Numeric {
        match self {
            Acc::Int(s) => Numeric::Int(s),
            Acc::Real(s) => Numeric::Real(s.value()),
        }
    }
}

fn check_x(x: u64, limit: u64) -> Result<()> {
    if x == 0 {
        return Err(Error::InvalidArgument("x must be >= 1".into()));
    }
    if x > limit {
        return Err(Error::Budget {
            what: "x",
            requested: x,
            limit,
        });
    }
    Ok(())
}

/// `Σ_{n≤x} f(⌊x/n⌋)` term by term from a sieve of `[1, x]`.
pub fn floor_sum_naive(kind: FunctionKind, x: u64) -> Result<Numeric> {
    check_x(x, MAX_NAIVE_X)?;
    let table = arith::build_sieve(kind, 1, x)?;
    let mut acc = Acc::for_kind(kind);
    for n in 1..=x {
        acc.add_scaled(table.values().numeric_at((x / n - 1) as usize), 1);
    }
    Ok(acc.finish())
}

/// Block evaluation with the default split `N = ⌊√x⌋`.
pub fn floor_sum_fast(kind: FunctionKind, x: u64) -> Result<Numeric> {
    check_x(x, MAX_FAST_X)?;
    floor_sum_split(kind, x, x.isqrt())
}

/// Block evaluation with an explicit split `1 ≤ N ≤ x`. Exact for every `N`;
/// the split only moves work between the head and the quotient classes.
pub fn floor_sum_split(kind: FunctionKind, x: u64, split: u64) -> Result<Numeric> {
    check_x(x, MAX_FAST_X)?;
    if split == 0 || split > x {
        return Err(Error::InvalidArgument(format!("split N = {split} outside [1, {x}]")));
    }
    let small_hi = x / (split + 1);
    let small = if small_hi >= 1 {
        Some(arith::build_sieve(kind, 1, small_hi)?)
    } else {
        None
    };
    let head = head_values(kind, x, split, small.as_ref())?;
    let mut acc = Acc::for_kind(kind);
    for v in head {
        acc.add_scaled(v, 1);
    }
    if let Some(table) = &small {
        for d in 1..=small_hi {
            let count = x / d - (x / (d + 1)).max(split);
            if count > 0 {
                acc.add_scaled(table.values().numeric_at((d - 1) as usize), count);
            }
        }
    }
    Ok(acc.finish())
}

/// `f(⌊x/n⌋)` for `n ≤ N`, in order. Quotients inside the small table are
/// looked up; the rest are factored individually.
fn head_values(kind: FunctionKind, x: u64, split: u64, small: Option<&SieveTable>) -> Result<Vec<Numeric>> {
    let budget = Budget {
        max_point: MAX_FAST_X,
        ..Budget::default()
    };
    (1..=split)
        .into_par_iter()
        .map(|n| {
            let q = x / n;
            match small.and_then(|t| t.get(q)) {
                Some(v) => Ok(v),
                None => arith::eval_point_with(kind, q, &budget),
            }
        })
        .collect()
}

/// Partial sum of the main-term constant and a rigorous bound for its tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainTermConstant {
    pub cutoff: u64,
    pub value: f64,
    pub tail_bound: f64,
    /// Set when the tail is known in closed form rather than only bounded.
    pub tail_exact: bool,
}

impl MainTermConstant {
    /// The partial sum, plus the tail when that is known exactly (`f = 1`,
    /// where the tail telescopes to `1/(cutoff+1)`).
    pub fn completed(&self) -> f64 {
        if self.tail_exact {
            self.value + self.tail_bound
        } else {
            self.value
        }
    }
}

/// `(Σ_{n≤cutoff} f(n)/(n(n+1)), bound on Σ_{n>cutoff} |f(n)|/(n(n+1)))`.
pub fn main_term_constant(kind: FunctionKind, cutoff: u64) -> Result<MainTermConstant> {
    if cutoff < MIN_CUTOFF {
        return Err(Error::InvalidArgument(format!(
            "cutoff {cutoff} below the minimum {MIN_CUTOFF}"
        )));
    }
    let parts = arith::map_segments(kind, 1, cutoff, |lo, vals| {
        let mut acc = CompensatedSum::new();
        for i in 0..vals.len() {
            let v = vals.f64_at(i);
            if v != 0.0 {
                let n = (lo + i as u64) as f64;
                acc.add(v / (n * (n + 1.0)));
            }
        }
        acc.value()
    })?;
    let value = parts.into_iter().collect::<CompensatedSum>().value();
    Ok(MainTermConstant {
        cutoff,
        value,
        tail_bound: tail_bound(kind, cutoff),
        tail_exact: matches!(kind, FunctionKind::One | FunctionKind::TauR(1)),
    })
}

/// `sup_n f(n)/n^ε` for the nonnegative multiplicative kinds with `f(p^e)`
/// growing polynomially in `e`. Only primes with `p^ε` below the largest local
/// factor can contribute a factor above 1.
pub fn envelope_constant(kind: FunctionKind, eps: f64) -> f64 {
    let local: Box<dyn Fn(u32) -> f64> = match kind {
        FunctionKind::TauR(r) => Box::new(move |e| {
            // C(e + r − 1, r − 1)
            (1..r).fold(1.0, |acc, i| acc * f64::from(e + i) / f64::from(i))
        }),
        FunctionKind::TwoPowOmega => Box::new(|e| if e == 0 { 1.0 } else { 2.0 }),
        _ => Box::new(|_| 1.0),
    };
    let base = match kind {
        FunctionKind::TauR(r) => f64::from(r),
        FunctionKind::TwoPowOmega => 2.0,
        _ => return 1.0,
    };
    let pmax = base.powf(1.0 / eps).ceil() as u64;
    arith::primes_up_to(pmax)
        .into_iter()
        .map(|p| {
            let pe = (p as f64).powf(eps);
            (0..512u32)
                .map(|e| local(e) / pe.powi(e as i32))
                .fold(1.0f64, f64::max)
        })
        .product()
}

fn tail_bound(kind: FunctionKind, cutoff: u64) -> f64 {
    let c = cutoff as f64;
    match kind {
        FunctionKind::One
        | FunctionKind::TauR(1)
        | FunctionKind::Mobius
        | FunctionKind::MobiusSquared
        | FunctionKind::ChiTwo => 1.0 / (c + 1.0),
        // Σ_{n>c} log n / n² ≤ ∫_c^∞ log t / t² dt
        FunctionKind::Lambda => (1.0 + c.ln()) / c,
        FunctionKind::Omega => (1.0 + c.ln()) / (c * std::f64::consts::LN_2),
        FunctionKind::TauR(_) | FunctionKind::TwoPowOmega => {
            envelope_constant(kind, ENVELOPE_EPS) * c.powf(ENVELOPE_EPS - 1.0) / (1.0 - ENVELOPE_EPS)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloorSumReport {
    pub kind: FunctionKind,
    pub x: u64,
    pub method: Method,
    pub sum: Numeric,
    pub constant: f64,
    pub constant_cutoff: u64,
    pub constant_tail_bound: f64,
    pub residual: f64,
}

pub fn floor_sum_report(kind: FunctionKind, x: u64, method: Method, cutoff: u64) -> Result<FloorSumReport> {
    let sum = match method {
        Method::Naive => floor_sum_naive(kind, x)?,
        Method::Fast => floor_sum_fast(kind, x)?,
    };
    let c = main_term_constant(kind, cutoff)?;
    Ok(FloorSumReport {
        kind,
        x,
        method,
        sum,
        constant: c.completed(),
        constant_cutoff: cutoff,
        constant_tail_bound: c.tail_bound,
        residual: sum.to_f64() - x as f64 * c.completed(),
    })
}

/// The exact bookkeeping behind the ψ-correction, for one split `N`.
///
/// With `q = ⌊x/N⌋`:
///
/// ```text
/// S_f(x) = head + block − boundary                            (exact)
/// head     = Σ_{n≤N} f(⌊x/n⌋)
/// block    = Σ_{d≤q} f(d)(⌊x/d⌋ − ⌊x/(d+1)⌋)
/// boundary = f(q) · (N − ⌊x/(q+1)⌋)
/// block    = smooth + psi_small + psi_large
/// smooth   = x·Σ_{d≤q} f(d)/(d(d+1))
/// psi_*    = Σ f(d)(ψ(x/(d+1)) − ψ(x/d)) over d ≤ N and N < d ≤ q
/// ```
///
/// The boundary term removes the head indices whose quotient equals `q`; it
/// is the edge term that disappears into the `O(x^ε)` of the asymptotic
/// statement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockDecomposition {
    pub x: u64,
    pub split: u64,
    pub head: Numeric,
    pub block: Numeric,
    pub boundary: Numeric,
    pub smooth: f64,
    pub psi_small: f64,
    pub psi_large: f64,
}

impl BlockDecomposition {
    /// `head + block − boundary`.
    pub fn recombined(&self) -> Numeric {
        match (self.head, self.block, self.boundary) {
            (Numeric::Int(h), Numeric::Int(b), Numeric::Int(e)) => Numeric::Int(h + b - e),
            (h, b, e) => Numeric::Real(h.to_f64() + b.to_f64() - e.to_f64()),
        }
    }

    /// `smooth + psi_small + psi_large`, which must reproduce `block`.
    pub fn block_via_psi(&self) -> f64 {
        self.smooth + self.psi_small + self.psi_large
    }
}

#[inline]
fn psi_step(x: u64, d: u64) -> f64 {
    // ψ(x/(d+1)) − ψ(x/d); the −1/2 offsets cancel
    (x % (d + 1)) as f64 / (d + 1) as f64 - (x % d) as f64 / d as f64
}

pub fn block_decomposition(kind: FunctionKind, x: u64, split: u64) -> Result<BlockDecomposition> {
    check_x(x, MAX_NAIVE_X)?;
    if split == 0 || split > x {
        return Err(Error::InvalidArgument(format!("split N = {split} outside [1, {x}]")));
    }
    let q = x / split;
    let table = arith::build_sieve(kind, 1, x)?;
    let vals = table.values();
    let at = |n: u64| vals.numeric_at((n - 1) as usize);

    let mut head = Acc::for_kind(kind);
    for n in 1..=split {
        head.add_scaled(at(x / n), 1);
    }
    let mut block = Acc::for_kind(kind);
    let mut smooth = CompensatedSum::new();
    let mut psi_small = CompensatedSum::new();
    let mut psi_large = CompensatedSum::new();
    for d in 1..=q {
        let f = at(d);
        block.add_scaled(f, x / d - x / (d + 1));
        let fv = f.to_f64();
        if fv == 0.0 {
            continue;
        }
        smooth.add(fv * x as f64 / (d as f64 * (d + 1) as f64));
        let step = fv * psi_step(x, d);
        if d <= split {
            psi_small.add(step);
        } else {
            psi_large.add(step);
        }
    }
    let mut boundary = Acc::for_kind(kind);
    boundary.add_scaled(at(q), split - x / (q + 1));
    Ok(BlockDecomposition {
        x,
        split,
        head: head.finish(),
        block: block.finish(),
        boundary: boundary.finish(),
        smooth: smooth.value(),
        psi_small: psi_small.value(),
        psi_large: psi_large.value(),
    })
}

/// `Σ_{N<d≤x/N} f(d)(ψ(x/(d+1)) − ψ(x/d))` for `x^{1/3} ≤ N < x^{1/2}`.
pub fn psi_correction_sum(kind: FunctionKind, x: u64, split: u64) -> Result<f64> {
    if x == 0 {
        return Err(Error::InvalidArgument("x must be >= 1".into()));
    }
    let n = u128::from(split);
    if n * n * n < u128::from(x) || n * n >= u128::from(x) {
        return Err(Error::Window(format!(
            "need x^(1/3) <= N < x^(1/2), got x = {x}, N = {split}"
        )));
    }
    let hi = x / split;
    if hi <= split {
        return Ok(0.0);
    }
    let table = arith::build_sieve(kind, split + 1, hi)?;
    let mut acc = CompensatedSum::new();
    for d in split + 1..=hi {
        let f = table.f64_at(d);
        if f != 0.0 {
            acc.add(f * psi_step(x, d));
        }
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub kind: FunctionKind,
    pub grid: Vec<u64>,
    pub sums: Vec<Numeric>,
    pub main_terms: Vec<f64>,
    pub residuals: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
}

/// About `points` integers, log-spaced on `[lo, hi]`, deduplicated.
pub fn log_grid(lo: u64, hi: u64, points: usize) -> Result<Vec<u64>> {
    if lo == 0 || hi <= lo || points < 2 {
        return Err(Error::InvalidArgument(format!(
            "log grid needs 1 <= lo < hi and >= 2 points, got {lo}:{hi}:{points}"
        )));
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut grid: Vec<u64> = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            ((a + t * (b - a)).exp().round() as u64).clamp(lo, hi)
        })
        .collect();
    grid.dedup();
    Ok(grid)
}

/// Ordinary least squares `y ≈ intercept + slope·x`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument("regression needs >= 2 points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("regression abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

pub fn error_scan(kind: FunctionKind, grid: &[u64]) -> Result<FitReport> {
    error_scan_with_cutoff(kind, grid, SCAN_CUTOFF)
}

/// Residuals `|E(x)|` over `grid` and the log-log slope of `|E|` against `x`.
pub fn error_scan_with_cutoff(kind: FunctionKind, grid: &[u64], cutoff: u64) -> Result<FitReport> {
    if grid.len() < 2 {
        return Err(Error::InvalidArgument("error scan needs at least two grid points".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
    }
    let constant = main_term_constant(kind, cutoff)?;
    let sums = grid
        .par_iter()
        .map(|&x| floor_sum_fast(kind, x))
        .collect::<Result<Vec<_>>>()?;
    let c = constant.completed();
    let main_terms: Vec<f64> = grid.iter().map(|&x| x as f64 * c).collect();
    let residuals: Vec<f64> = sums
        .iter()
        .zip(&main_terms)
        .map(|(s, m)| (s.to_f64() - m).abs())
        .collect();
    let lx: Vec<f64> = grid.iter().map(|&x| (x as f64).ln()).collect();
    let ly: Vec<f64> = residuals.iter().map(|r| r.max(RESIDUAL_FLOOR).ln()).collect();
    let (slope, intercept) = least_squares(&lx, &ly)?;
    Ok(FitReport {
        kind,
        grid: grid.to_vec(),
        sums,
        main_terms,
        residuals,
        slope,
        intercept,
    })
}

/// Partial sums `Σ_{n≤c} f(n)/(n(n+1))` at each cutoff, from one pass.
pub fn constant_partial_sums(kind: FunctionKind, cutoffs: &[u64]) -> Result<Vec<f64>> {
    let hi = *cutoffs.iter().max().ok_or_else(|| Error::InvalidArgument("no cutoffs".into()))?;
    let table = arith::build_sieve(kind, 1, hi)?;
    let mut acc = CompensatedSum::new();
    let mut out = vec![0.0; cutoffs.len()];
    let mut order: Vec<usize> = (0..cutoffs.len()).collect();
    order.sort_by_key(|&i| cutoffs[i]);
    let mut next = 0;
    for n in 1..=hi {
        let v = table.f64_at(n);
        acc.add(v / (n as f64 * (n + 1) as f64));
        while next < order.len() && cutoffs[order[next]] == n {
            out[order[next]] = acc.value();
            next += 1;
        }
    }
    Ok(out)
}
