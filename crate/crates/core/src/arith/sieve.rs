//! Segmented factor sieve. One pass over the primes up to `√hi` strips every
//! prime power from each entry of a segment; the kind-specific state folds the
//! `(p, e)` pairs into function values.

use super::{FunctionKind, TableValues};
use rayon::prelude::*;

pub const SEGMENT_LEN: u64 = 1 << 20;

/// Primes `≤ limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Value of a multiplicative kind at a prime power `p^e`, `e ≥ 1`.
pub(crate) fn multiplicative_local(kind: FunctionKind, e: u32) -> i64 {
    match kind {
        FunctionKind::One => 1,
        FunctionKind::Mobius => {
            if e == 1 {
                -1
            } else {
                0
            }
        }
        FunctionKind::MobiusSquared => i64::from(e == 1),
        FunctionKind::TwoPowOmega => 2,
        // χ₂(p²) = μ(p), χ₂(p^{2j}) = μ(p^j) = 0 for j ≥ 2, odd powers vanish.
        FunctionKind::ChiTwo => {
            if e == 2 {
                -1
            } else {
                0
            }
        }
        FunctionKind::TauR(r) => binomial(u64::from(e) + u64::from(r) - 1, u64::from(r) - 1),
        FunctionKind::Lambda | FunctionKind::Omega => unreachable!("not multiplicative"),
    }
}

fn binomial(n: u64, k: u64) -> i64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as i64
}

enum State {
    Ones(usize),
    Multiplicative(FunctionKind, Vec<i64>),
    Omega(Vec<i64>),
    /// 0: no prime seen, 1: two or more distinct primes, p: exactly the prime p.
    Lambda(Vec<u64>),
}

impl State {
    fn new(kind: FunctionKind, len: usize) -> Self {
        match kind {
            FunctionKind::One | FunctionKind::TauR(1) => State::Ones(len),
            FunctionKind::Omega => State::Omega(vec![0; len]),
            FunctionKind::Lambda => State::Lambda(vec![0; len]),
            k => State::Multiplicative(k, vec![1; len]),
        }
    }

    fn skips_sieving(&self) -> bool {
        matches!(self, State::Ones(_))
    }

    #[inline]
    fn visit(&mut self, i: usize, p: u64, e: u32) {
        match self {
            State::Ones(_) => {}
            State::Multiplicative(kind, vals) => {
                if vals[i] != 0 {
                    vals[i] *= multiplicative_local(*kind, e);
                }
            }
            State::Omega(vals) => vals[i] += 1,
            State::Lambda(tag) => {
                tag[i] = if tag[i] == 0 { p } else { 1 };
            }
        }
    }

    fn finish(self) -> TableValues {
        match self {
            State::Ones(len) => TableValues::Exact(vec![1; len]),
            State::Multiplicative(_, vals) | State::Omega(vals) => TableValues::Exact(vals),
            State::Lambda(tag) => TableValues::Real(
                tag.into_iter()
                    .map(|p| if p > 1 { (p as f64).ln() } else { 0.0 })
                    .collect(),
            ),
        }
    }
}

/// Values of `kind` on `[lo, hi]`; `primes` must contain every prime `≤ √hi`.
pub(crate) fn sieve_segment(kind: FunctionKind, lo: u64, hi: u64, primes: &[u64]) -> TableValues {
    let len = (hi - lo + 1) as usize;
    let mut state = State::new(kind, len);
    if state.skips_sieving() {
        return state.finish();
    }
    let mut rem: Vec<u64> = (lo..=hi).collect();
    for &p in primes {
        if p * p > hi {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m <= hi {
            let i = (m - lo) as usize;
            let mut e = 0;
            while rem[i] % p == 0 {
                rem[i] /= p;
                e += 1;
            }
            state.visit(i, p, e);
            m += p;
        }
    }
    for (i, &r) in rem.iter().enumerate() {
        if r > 1 {
            state.visit(i, r, 1);
        }
    }
    state.finish()
}

/// Segment boundaries covering `[lo, hi]`.
pub(crate) fn segments(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut s = lo;
    while s <= hi {
        let e = hi.min(s.saturating_add(SEGMENT_LEN - 1));
        out.push((s, e));
        if e == u64::MAX {
            break;
        }
        s = e + 1;
    }
    out
}

/// Maps every segment of `[lo, hi]` in parallel; results come back in order.
pub(crate) fn map_segments<T, F>(kind: FunctionKind, lo: u64, hi: u64, map: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &TableValues) -> T + Sync,
{
    let primes = primes_up_to(hi.isqrt());
    segments(lo, hi)
        .into_par_iter()
        .map(|(s, e)| {
            let vals = sieve_segment(kind, s, e, &primes);
            map(s, &vals)
        })
        .collect()
}
