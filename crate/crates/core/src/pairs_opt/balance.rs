use super::rational::{q, Rational};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Symbols that appear as bases of power terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "z")]
    Z,
    R,
    N,
    D,
    H,
    U,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Var::X => "x",
            Var::Z => "z",
            Var::R => "R",
            Var::N => "N",
            Var::D => "D",
            Var::H => "H",
            Var::U => "U",
        };
        f.write_str(s)
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Var::X),
            "z" => Ok(Var::Z),
            "R" => Ok(Var::R),
            "N" => Ok(Var::N),
            "D" => Ok(Var::D),
            "H" => Ok(Var::H),
            "U" => Ok(Var::U),
            _ => Err(Error::Parse(format!("unknown variable '{s}' (x|z|R|N|D|H|U)"))),
        }
    }
}

/// A power product `(Π v^{e_v})^{scale}`.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct TermExponent {
    pub exponents: BTreeMap<Var, Rational>,
    pub scale: Rational,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TermRepr {
    Full {
        exponents: BTreeMap<Var, Rational>,
        #[serde(default = "Rational::one")]
        scale: Rational,
    },
    Plain(BTreeMap<Var, Rational>),
}

impl<'de> Deserialize<'de> for TermExponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match TermRepr::deserialize(d)? {
            TermRepr::Full { exponents, scale } => TermExponent::scaled(exponents, scale),
            TermRepr::Plain(exponents) => TermExponent::scaled(exponents, Rational::one()),
        })
    }
}

impl fmt::Display for TermExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.exponents.iter().map(|(v, e)| format!("{v}^{e}")).collect();
        let body = if body.is_empty() { "1".to_string() } else { body.join(" ") };
        if self.scale == Rational::one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})^{}", self.scale)
        }
    }
}

impl fmt::Debug for TermExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl TermExponent {
    pub fn new<I: IntoIterator<Item = (Var, Rational)>>(exponents: I) -> Self {
        Self::scaled(exponents.into_iter().collect(), Rational::one())
    }

    pub fn scaled(exponents: BTreeMap<Var, Rational>, scale: Rational) -> Self {
        let exponents = exponents.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        TermExponent { exponents, scale }
    }

    /// `v^1`.
    pub fn var(v: Var) -> Self {
        Self::new([(v, Rational::one())])
    }

    /// The exponent of `v` once the scale is folded in.
    pub fn exponent(&self, v: Var) -> Rational {
        self.exponents.get(&v).map(|e| e * &self.scale).unwrap_or_default()
    }

    /// The same term with scale 1.
    pub fn normalized(&self) -> TermExponent {
        Self::scaled(
            self.exponents.iter().map(|(v, e)| (*v, e * &self.scale)).collect(),
            Rational::one(),
        )
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.exponents.keys().copied()
    }

    /// Product of two terms.
    pub fn mul(&self, other: &TermExponent) -> TermExponent {
        let mut e = self.normalized().exponents;
        for (v, x) in other.normalized().exponents {
            let cur = e.remove(&v).unwrap_or_default();
            e.insert(v, cur + x);
        }
        Self::scaled(e, Rational::one())
    }

    pub fn pow(&self, p: &Rational) -> TermExponent {
        Self::scaled(self.normalized().exponents, p.clone())
    }

    /// Drops `v` from the term (evaluates it at `v = 1`).
    pub fn without(&self, v: Var) -> TermExponent {
        let mut e = self.exponents.clone();
        e.remove(&v);
        Self::scaled(e, self.scale.clone())
    }

    /// Replaces `v` by the power product `by`.
    pub fn substitute(&self, v: Var, by: &TermExponent) -> TermExponent {
        let c = self.exponent(v);
        self.without(v).normalized().mul(&by.normalized().pow(&c)).normalized()
    }

    /// The exponent of `fixed` in the term as an affine function `a + bν` of the
    /// `free` exponent `ν`.
    pub fn line(&self, fixed: Option<Var>, free: Var) -> (Rational, Rational) {
        (fixed.map(|v| self.exponent(v)).unwrap_or_default(), self.exponent(free))
    }
}

/// Drops duplicate terms (after normalization), keeping first occurrences.
pub fn dedupe(terms: Vec<TermExponent>) -> Vec<TermExponent> {
    let mut out: Vec<TermExponent> = Vec::new();
    for t in terms {
        if !out.iter().any(|o| o.normalized() == t.normalized()) {
            out.push(t);
        }
    }
    out
}

/// Removes the auxiliary parameter `H`. Requires exactly one term `G·H^{−d}`,
/// `d > 0`; every other term `T·H^c` contributes `T` (its `H = 1` value)
/// and, for `c > 0`, the balanced value `(T^d G^c)^{1/(c+d)}` where the two
/// sides cross.
pub fn eliminate_h(terms: &[TermExponent]) -> Result<Vec<TermExponent>> {
    let decreasing: Vec<usize> = (0..terms.len()).filter(|&i| terms[i].exponent(Var::H).is_negative()).collect();
    let [dec] = decreasing[..] else {
        return Err(Error::InvalidArgument(format!(
            "H elimination needs exactly one term decreasing in H, found {}",
            decreasing.len()
        )));
    };
    let d = -terms[dec].exponent(Var::H);
    let g = terms[dec].without(Var::H).normalized();
    let mut out = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        if i == dec {
            continue;
        }
        let c = t.exponent(Var::H);
        let base = t.without(Var::H).normalized();
        if c.is_positive() {
            let combined = base.pow(&d).mul(&g.pow(&c));
            let scale = (&c + &d).recip()?;
            out.push(TermExponent::scaled(combined.exponents, scale));
        }
        out.push(base);
    }
    Ok(dedupe(out))
}

/// Worst case of each term over `N < D ≤ x/N`: a positive `D` exponent is
/// maximized at `D = x/N`, a negative one at `D = N`.
pub fn maximize_over_d(terms: &[TermExponent]) -> Vec<TermExponent> {
    let upper = TermExponent::new([(Var::X, Rational::one()), (Var::N, -Rational::one())]);
    let lower = TermExponent::var(Var::N);
    dedupe(
        terms
            .iter()
            .map(|t| {
                let b = t.exponent(Var::D);
                if b.is_positive() {
                    t.substitute(Var::D, &upper)
                } else if b.is_negative() {
                    t.substitute(Var::D, &lower)
                } else {
                    t.normalized()
                }
            })
            .collect(),
    )
}

/// Minimize `max_i exponent_i` over the exponent `ν` of `free` in `interval`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceProblem {
    pub terms: Vec<TermExponent>,
    #[serde(rename = "free")]
    pub free_variable: Var,
    #[serde(default)]
    pub interval: Option<(Rational, Rational)>,
}

impl BalanceProblem {
    pub fn new(terms: Vec<TermExponent>, free_variable: Var, interval: Option<(Rational, Rational)>) -> Self {
        BalanceProblem {
            terms,
            free_variable,
            interval,
        }
    }

    /// The explicit interval, or `[1/3, 1/2]` for `N` and `[0, 1]` otherwise.
    pub fn interval(&self) -> (Rational, Rational) {
        self.interval.clone().unwrap_or_else(|| match self.free_variable {
            Var::N => (q(1, 3), q(1, 2)),
            _ => (Rational::zero(), Rational::one()),
        })
    }

    /// The symbols other than the free one.
    pub fn fixed_symbols(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|t| t.normalized().vars().collect::<Vec<_>>())
            .filter(|v| *v != self.free_variable)
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceResult {
    pub free_variable: Var,
    pub fixed_symbol: Option<Var>,
    pub interval: (Rational, Rational),
    pub nu_star: Rational,
    pub value: Rational,
    pub active_terms: Vec<usize>,
}

fn max_at(lines: &[(Rational, Rational)], nu: &Rational) -> Rational {
    lines
        .iter()
        .map(|(a, b)| a + b * nu)
        .max()
        .expect("at least one term")
}

/// Exact one-dimensional minimax. The maximum of affine functions is convex
/// and piecewise affine, so its minimum over the interval is attained at an
/// endpoint or at a crossing of two terms; all of them are tried. Ties go to
/// the smallest `ν`.
pub fn balance_exponents(problem: &BalanceProblem) -> Result<BalanceResult> {
    if problem.terms.is_empty() {
        return Err(Error::InvalidArgument("balance problem has no terms".into()));
    }
    let (lo, hi) = problem.interval();
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
    }
    let fixed = problem.fixed_symbols();
    if fixed.len() > 1 {
        return Err(Error::InvalidArgument(format!(
            "{} fixed symbols; scalar balancing needs at most one (use the symbolic balance)",
            fixed.len()
        )));
    }
    let fixed = fixed.first().copied();
    let free = problem.free_variable;
    let lines: Vec<(Rational, Rational)> = problem.terms.iter().map(|t| t.line(fixed, free)).collect();

    let mut candidates = vec![lo.clone(), hi.clone()];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let db = &lines[i].1 - &lines[j].1;
            if db.is_zero() {
                continue;
            }
            let nu = (&lines[j].0 - &lines[i].0) / db;
            if nu >= lo && nu <= hi {
                candidates.push(nu);
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    let (nu_star, value) = candidates
        .into_iter()
        .map(|nu| {
            let v = max_at(&lines, &nu);
            (nu, v)
        })
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("interval endpoints are candidates");
    let active_terms = (0..lines.len())
        .filter(|&i| &lines[i].0 + &lines[i].1 * &nu_star == value)
        .collect();
    Ok(BalanceResult {
        free_variable: free,
        fixed_symbol: fixed,
        interval: (lo, hi),
        nu_star,
        value,
        active_terms,
    })
}

/// Checks the optimality certificate of a scalar result: no term exceeds
/// the value at `ν*`, some term attains it, and moving `ν*` by `10⁻⁹` inside
/// the interval does not lower the maximum.
pub fn certify(problem: &BalanceProblem, result: &BalanceResult) -> Result<()> {
    let lines: Vec<(Rational, Rational)> = problem
        .terms
        .iter()
        .map(|t| t.line(result.fixed_symbol, result.free_variable))
        .collect();
    let at = |nu: &Rational| max_at(&lines, nu);
    let fail = |m: String| Err(Error::Infeasible(format!("certificate failed: {m}")));
    if at(&result.nu_star) != result.value {
        return fail(format!("max at ν* is {}, reported {}", at(&result.nu_star), result.value));
    }
    if result.active_terms.is_empty() {
        return fail("no tight term".into());
    }
    let h = q(1, 1_000_000_000);
    let (lo, hi) = &result.interval;
    for nu in [&result.nu_star - &h, &result.nu_star + &h] {
        if nu >= *lo && nu <= *hi && at(&nu) < result.value {
            return fail(format!("max drops to {} at ν = {nu}", at(&nu)));
        }
    }
    Ok(())
}

/// Two-term balance with a vector-valued intercept: the free exponent `ν`
/// making both terms equal, as a combination of the fixed symbols.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolicBalance {
    pub free_variable: Var,
    /// `ν` in terms of the fixed symbols' exponents.
    pub nu: BTreeMap<Var, Rational>,
    /// The common exponent vector of the two terms at `ν`.
    pub value: BTreeMap<Var, Rational>,
}

pub fn balance_symbolic(problem: &BalanceProblem) -> Result<SymbolicBalance> {
    let [s, t] = &problem.terms[..] else {
        return Err(Error::InvalidArgument(format!(
            "symbolic balance needs exactly two terms, got {}",
            problem.terms.len()
        )));
    };
    let free = problem.free_variable;
    let db = s.exponent(free) - t.exponent(free);
    if db.is_zero() {
        return Err(Error::Infeasible("terms have equal slope in the free variable".into()));
    }
    let mut nu = BTreeMap::new();
    let mut value = BTreeMap::new();
    for v in problem.fixed_symbols() {
        // s_v + s_free·ν_v = t_v + t_free·ν_v
        let n = (t.exponent(v) - s.exponent(v)) / &db;
        let val = s.exponent(v) + s.exponent(free) * &n;
        nu.insert(v, n);
        value.insert(v, val);
    }
    Ok(SymbolicBalance {
        free_variable: free,
        nu,
        value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BalanceOutcome {
    Scalar(BalanceResult),
    Symbolic(SymbolicBalance),
}

/// Scalar minimax when at most one symbol is fixed, the symbolic two-term
/// balance otherwise.
pub fn balance_auto(problem: &BalanceProblem) -> Result<BalanceOutcome> {
    if problem.fixed_symbols().len() <= 1 {
        let r = balance_exponents(problem)?;
        certify(problem, &r)?;
        Ok(BalanceOutcome::Scalar(r))
    } else {
        Ok(BalanceOutcome::Symbolic(balance_symbolic(problem)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(pairs: &[(Var, Rational)]) -> TermExponent {
        TermExponent::new(pairs.iter().cloned())
    }

    #[test]
    fn symmetric_crossing() {
        let p = BalanceProblem::new(
            vec![t(&[(Var::N, q(1, 1))]), t(&[(Var::X, q(1, 1)), (Var::N, q(-1, 1))])],
            Var::N,
            Some((q(0, 1), q(1, 1))),
        );
        let r = balance_exponents(&p).unwrap();
        assert_eq!((r.nu_star.clone(), r.value.clone()), (q(1, 2), q(1, 2)));
        assert_eq!(r.active_terms, vec![0, 1]);
        certify(&p, &r).unwrap();
    }

    #[test]
    fn endpoint_optimum_and_ties() {
        // max(ν, 1/4) on [0, 1] is 1/4 for every ν ≤ 1/4; smallest ν wins
        let p = BalanceProblem::new(
            vec![t(&[(Var::N, q(1, 1))]), t(&[(Var::X, q(1, 4))])],
            Var::N,
            Some((q(0, 1), q(1, 1))),
        );
        let r = balance_exponents(&p).unwrap();
        assert_eq!((r.nu_star.clone(), r.value.clone()), (q(0, 1), q(1, 4)));
        certify(&p, &r).unwrap();
        assert!(balance_exponents(&BalanceProblem::new(vec![], Var::N, None)).is_err());
    }

    #[test]
    fn certificate_rejects_wrong_results() {
        let p = BalanceProblem::new(
            vec![t(&[(Var::N, q(1, 1))]), t(&[(Var::X, q(1, 1)), (Var::N, q(-1, 1))])],
            Var::N,
            Some((q(0, 1), q(1, 1))),
        );
        let mut r = balance_exponents(&p).unwrap();
        r.nu_star = q(1, 3);
        r.value = q(2, 3);
        assert!(certify(&p, &r).is_err());
    }

    #[test]
    fn h_elimination_shapes() {
        let a = q(1, 6);
        let b = q(7, 12);
        let dh = t(&[(Var::D, q(1, 1)), (Var::H, q(-1, 1))]);
        let inc = t(&[(Var::H, a.clone()), (Var::X, a.clone()), (Var::D, b.clone())]);
        let out = eliminate_h(&[dh.clone(), inc]).unwrap();
        let bal = TermExponent::scaled(
            [(Var::X, a.clone()), (Var::D, &a + &b)].into_iter().collect(),
            (&a + Rational::one()).recip().unwrap(),
        );
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].normalized(), bal.normalized());
        assert_eq!(out[1], t(&[(Var::X, a), (Var::D, b)]));
        assert!(eliminate_h(std::slice::from_ref(&dh)).unwrap().is_empty());
        assert!(eliminate_h(&[t(&[(Var::X, q(1, 1))])]).is_err());
        assert!(eliminate_h(&[dh.clone(), dh]).is_err());
    }

    #[test]
    fn d_maximization() {
        let pos = t(&[(Var::X, q(1, 6)), (Var::D, q(2, 3))]);
        let neg = t(&[(Var::X, q(1, 1)), (Var::D, q(-2, 1))]);
        let out = maximize_over_d(&[pos, neg]);
        assert_eq!(out[0], t(&[(Var::X, q(5, 6)), (Var::N, q(-2, 3))]));
        assert_eq!(out[1], t(&[(Var::X, q(1, 1)), (Var::N, q(-2, 1))]));
    }

    #[test]
    fn json_problem() {
        let s = r#"{"terms": [{"N": "1/1"}, {"exponents": {"x": "1", "N": "-1"}, "scale": "1/2"}], "free": "N"}"#;
        let p: BalanceProblem = serde_json::from_str(s).unwrap();
        assert_eq!(p.interval(), (q(1, 3), q(1, 2)));
        let r = balance_exponents(&p).unwrap();
        // ν = (1 − ν)/2
        assert_eq!(r.nu_star, q(1, 3));
        let out = serde_json::to_string(&r).unwrap();
        assert!(out.contains("\"1/3\""));
    }

    #[test]
    fn too_many_fixed_symbols_for_scalar() {
        let p = BalanceProblem::new(
            vec![t(&[(Var::Z, q(1, 1)), (Var::U, q(1, 1))]), t(&[(Var::R, q(1, 1)), (Var::U, q(-1, 1))])],
            Var::U,
            None,
        );
        assert!(balance_exponents(&p).is_err());
        let s = balance_symbolic(&p).unwrap();
        assert_eq!(s.nu[&Var::Z], q(-1, 2));
        assert_eq!(s.nu[&Var::R], q(1, 2));
    }
}
