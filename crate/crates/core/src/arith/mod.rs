//! Arithmetic functions on integer intervals.
//!
//! Every kind is evaluated either by the segmented factor sieve
//! ([`build_sieve`]) or by factoring a single argument ([`eval_point`]). The
//! two routes share the same per-prime-power rules, so they agree entrywise.

pub mod factor;
mod sieve;

use crate::error::{Error, Result};
use crate::numeric::Numeric;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

pub use sieve::{primes_up_to, SEGMENT_LEN};

/// The arithmetic functions handled by the sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionKind {
    One,
    Mobius,
    MobiusSquared,
    Lambda,
    /// Piltz divisor function `τ_r`; `TauR(1)` coincides with `One`.
    TauR(u32),
    Omega,
    TwoPowOmega,
    /// `χ₂(m²) = μ(m)`, zero off the squares.
    ChiTwo,
}

impl FunctionKind {
    /// The plain divisor function `τ = τ_2`.
    pub const TAU: FunctionKind = FunctionKind::TauR(2);

    /// `true` unless values are irrational (only `Λ`).
    pub fn is_integer_valued(self) -> bool {
        self != FunctionKind::Lambda
    }

    pub fn is_nonnegative(self) -> bool {
        !matches!(self, FunctionKind::Mobius | FunctionKind::ChiTwo)
    }

    /// Canonical CLI name.
    pub fn name(self) -> String {
        match self {
            FunctionKind::One => "one".into(),
            FunctionKind::Mobius => "mu".into(),
            FunctionKind::MobiusSquared => "mu2".into(),
            FunctionKind::Lambda => "lambda".into(),
            FunctionKind::TauR(r) => format!("tau{r}"),
            FunctionKind::Omega => "omega".into(),
            FunctionKind::TwoPowOmega => "2omega".into(),
            FunctionKind::ChiTwo => "chi2".into(),
        }
    }

    fn validate(self, budget: &Budget) -> Result<()> {
        if let FunctionKind::TauR(r) = self {
            if r == 0 {
                return Err(Error::InvalidArgument("tau_r needs r >= 1".into()));
            }
            if r > budget.max_tau_r {
                return Err(Error::Budget {
                    what: "tau order r",
                    requested: u64::from(r),
                    limit: u64::from(budget.max_tau_r),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for FunctionKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl FromStr for FunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let kind = match lower.as_str() {
            "one" | "1" => FunctionKind::One,
            "mu" | "mobius" => FunctionKind::Mobius,
            "mu2" | "mu^2" | "squarefree" => FunctionKind::MobiusSquared,
            "lambda" | "vonmangoldt" => FunctionKind::Lambda,
            "tau" | "divisor" => FunctionKind::TAU,
            "omega" => FunctionKind::Omega,
            "2omega" | "2^omega" | "two_omega" | "twopowomega" => FunctionKind::TwoPowOmega,
            "chi2" | "chi_2" => FunctionKind::ChiTwo,
            other => {
                let r = other
                    .strip_prefix("tau")
                    .map(|t| t.trim_start_matches([':', '_']))
                    .and_then(|t| t.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown function '{s}'")))?;
                FunctionKind::TauR(r)
            }
        };
        Ok(kind)
    }
}

/// Resource caps for table construction and point evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of entries in a materialized table.
    pub max_table_len: u64,
    /// Largest argument accepted by [`eval_point`].
    pub max_point: u64,
    /// Largest `r` for `τ_r`.
    pub max_tau_r: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_table_len: 100_000_000,
            max_point: 1_000_000_000_000,
            max_tau_r: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableValues {
    Exact(Vec<i64>),
    Real(Vec<f64>),
}

impl TableValues {
    pub fn len(&self) -> usize {
        match self {
            TableValues::Exact(v) => v.len(),
            TableValues::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn f64_at(&self, i: usize) -> f64 {
        match self {
            TableValues::Exact(v) => v[i] as f64,
            TableValues::Real(v) => v[i],
        }
    }

    #[inline]
    pub fn numeric_at(&self, i: usize) -> Numeric {
        match self {
            TableValues::Exact(v) => Numeric::Int(i128::from(v[i])),
            TableValues::Real(v) => Numeric::Real(v[i]),
        }
    }
}

/// Values of one arithmetic function on `[lo, hi]`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveTable {
    kind: Option<FunctionKind>,
    lo: u64,
    values: TableValues,
}

impl SieveTable {
    /// A table with arbitrary entries (convolutions, `log`, test fixtures).
    pub fn from_values(lo: u64, values: TableValues) -> Result<Self> {
        if lo == 0 {
            return Err(Error::InvalidArgument("tables start at n >= 1".into()));
        }
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty table".into()));
        }
        Ok(SieveTable {
            kind: None,
            lo,
            values,
        })
    }

    /// `log n` on `[1, hi]`.
    pub fn log(hi: u64) -> Result<Self> {
        SieveTable::from_values(1, TableValues::Real((1..=hi).map(|n| (n as f64).ln()).collect()))
    }

    /// The generating function, or `None` for derived tables.
    pub fn kind(&self) -> Option<FunctionKind> {
        self.kind
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.lo + self.values.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &TableValues {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, TableValues::Exact(_))
    }

    pub fn covers(&self, lo: u64, hi: u64) -> bool {
        self.lo <= lo && hi <= self.hi()
    }

    pub fn require(&self, lo: u64, hi: u64) -> Result<()> {
        if self.covers(lo, hi) {
            Ok(())
        } else {
            Err(Error::Coverage {
                lo: self.lo,
                hi: self.hi(),
                need_lo: lo,
                need_hi: hi,
            })
        }
    }

    /// Entry at `n`, or `None` outside the table.
    pub fn get(&self, n: u64) -> Option<Numeric> {
        (self.lo..=self.hi())
            .contains(&n)
            .then(|| self.values.numeric_at((n - self.lo) as usize))
    }

    /// Entry at `n` as a float. Panics outside `[lo, hi]`.
    #[inline]
    pub fn f64_at(&self, n: u64) -> f64 {
        self.values.f64_at((n - self.lo) as usize)
    }

    /// Exact entry at `n`; `None` for real-valued tables. Panics outside `[lo, hi]`.
    #[inline]
    pub fn exact_at(&self, n: u64) -> Option<i64> {
        match &self.values {
            TableValues::Exact(v) => Some(v[(n - self.lo) as usize]),
            TableValues::Real(_) => None,
        }
    }
}

/// Tabulates `kind` on `[lo, hi]` with the default budget.
pub fn build_sieve(kind: FunctionKind, lo: u64, hi: u64) -> Result<SieveTable> {
    build_sieve_with(kind, lo, hi, &Budget::default())
}

pub fn build_sieve_with(kind: FunctionKind, lo: u64, hi: u64, budget: &Budget) -> Result<SieveTable> {
    if lo == 0 || hi < lo {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= lo <= hi, got lo = {lo}, hi = {hi}"
        )));
    }
    kind.validate(budget)?;
    let len = hi - lo + 1;
    if len > budget.max_table_len {
        return Err(Error::Budget {
            what: "table length",
            requested: len,
            limit: budget.max_table_len,
        });
    }
    let parts = sieve::map_segments(kind, lo, hi, |_, vals| vals.clone());
    let values = if kind.is_integer_valued() {
        TableValues::Exact(
            parts
                .into_iter()
                .flat_map(|p| match p {
                    TableValues::Exact(v) => v,
                    TableValues::Real(_) => unreachable!(),
                })
                .collect(),
        )
    } else {
        TableValues::Real(
            parts
                .into_iter()
                .flat_map(|p| match p {
                    TableValues::Real(v) => v,
                    TableValues::Exact(_) => unreachable!(),
                })
                .collect(),
        )
    };
    Ok(SieveTable {
        kind: Some(kind),
        lo,
        values,
    })
}

/// Streams `kind` over `[lo, hi]` segment by segment without materializing the
/// whole interval. `map` receives each segment's start and values; results are
/// returned in interval order.
pub fn map_segments<T, F>(kind: FunctionKind, lo: u64, hi: u64, map: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &TableValues) -> T + Sync,
{
    if lo == 0 || hi < lo {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= lo <= hi, got lo = {lo}, hi = {hi}"
        )));
    }
    kind.validate(&Budget::default())?;
    Ok(sieve::map_segments(kind, lo, hi, map))
}

/// `f(n)` from the factorization of `n`, with the default budget.
pub fn eval_point(kind: FunctionKind, n: u64) -> Result<Numeric> {
    eval_point_with(kind, n, &Budget::default())
}

pub fn eval_point_with(kind: FunctionKind, n: u64, budget: &Budget) -> Result<Numeric> {
    if n == 0 {
        return Err(Error::InvalidArgument("arithmetic functions start at n = 1".into()));
    }
    kind.validate(budget)?;
    if n > budget.max_point {
        return Err(Error::Budget {
            what: "point argument",
            requested: n,
            limit: budget.max_point,
        });
    }
    if matches!(kind, FunctionKind::One | FunctionKind::TauR(1)) {
        return Ok(Numeric::Int(1));
    }
    let factors = factor::factorize(n)?;
    Ok(match kind {
        FunctionKind::Lambda => match factors.as_slice() {
            [(p, _)] => Numeric::Real((*p as f64).ln()),
            _ => Numeric::Real(0.0),
        },
        FunctionKind::Omega => Numeric::Int(factors.len() as i128),
        k => Numeric::Int(
            factors
                .iter()
                .map(|&(_, e)| i128::from(sieve::multiplicative_local(k, e)))
                .product(),
        ),
    })
}

/// `(f ⋆ g)(n) = Σ_{d | n} f(d) g(n/d)` on `[1, limit]`.
///
/// Exact when both inputs are exact; otherwise real-valued.
pub fn dirichlet_convolve(f: &SieveTable, g: &SieveTable, limit: u64) -> Result<SieveTable> {
    if limit == 0 {
        return Err(Error::InvalidArgument("limit must be >= 1".into()));
    }
    f.require(1, limit)?;
    g.require(1, limit)?;
    let len = limit as usize;
    let values = match (&f.values, &g.values) {
        (TableValues::Exact(fv), TableValues::Exact(gv)) => {
            let mut acc = vec![0i128; len + 1];
            for d in 1..=len {
                let fd = i128::from(fv[d - 1]);
                if fd == 0 {
                    continue;
                }
                for (q, m) in (d..=len).step_by(d).enumerate() {
                    acc[m] += fd * i128::from(gv[q]);
                }
            }
            TableValues::Exact(
                acc[1..]
                    .iter()
                    .map(|&v| i64::try_from(v).map_err(|_| Error::Overflow("dirichlet_convolve")))
                    .collect::<Result<_>>()?,
            )
        }
        (fv, gv) => {
            let mut acc = vec![0f64; len + 1];
            for d in 1..=len {
                let fd = fv.f64_at(d - 1);
                if fd == 0.0 {
                    continue;
                }
                for (q, m) in (d..=len).step_by(d).enumerate() {
                    acc[m] += fd * gv.f64_at(q);
                }
            }
            TableValues::Real(acc[1..].to_vec())
        }
    };
    SieveTable::from_values(1, values)
}
