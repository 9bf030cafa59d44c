use super::balance::{
    balance_exponents, dedupe, eliminate_h, maximize_over_d, BalanceProblem, BalanceResult, TermExponent, Var,
};
use super::pair::{enumerate_pairs, ExponentPair};
use super::rational::{q, Rational};
use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Functions whose floor-sum error exponent is given in closed form by an
/// exponent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub enum Target {
    Lambda,
    TauR(u32),
    TwoOmega,
}

impl From<Target> for String {
    fn from(t: Target) -> String {
        t.to_string()
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Lambda => write!(f, "lambda"),
            Target::TauR(r) => write!(f, "tau:{r}"),
            Target::TwoOmega => write!(f, "2omega"),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "lambda" => Ok(Target::Lambda),
            "tau" => Ok(Target::TauR(2)),
            "2omega" | "two-omega" | "twoomega" => Ok(Target::TwoOmega),
            t => match t.strip_prefix("tau:").or_else(|| t.strip_prefix("tau")).map(str::parse::<u32>) {
                Some(Ok(r)) => Ok(Target::TauR(r)),
                _ => Err(Error::Parse(format!("unknown target '{s}' (lambda|tau:<r>|2omega)"))),
            },
        }
    }
}

/// A named side condition evaluated on the base rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub name: &'static str,
    pub holds: bool,
}

fn strict(name: &'static str, lhs: &Rational, rhs: &Rational) -> Constraint {
    Constraint { name, holds: lhs > rhs }
}

fn weak(name: &'static str, lhs: &Rational, rhs: &Rational) -> Constraint {
    Constraint { name, holds: lhs >= rhs }
}

/// `k ≤ 1/6`, `3k + 4ℓ ≥ 1`, `ℓ² + ℓ + 3 − k(5 − ℓ) − 9k² > 0`.
pub fn lambda_constraints(k: &Rational, l: &Rational) -> Vec<Constraint> {
    let zero = Rational::zero();
    vec![
        weak("k <= 1/6", &q(1, 6), k),
        weak("3k + 4l >= 1", &(k * q(3, 1) + l * q(4, 1)), &Rational::one()),
        strict(
            "l^2 + l + 3 - k(5 - l) - 9k^2 > 0",
            &(l * l + l + q(3, 1) - k * (q(5, 1) - l) - k * k * q(9, 1)),
            &zero,
        ),
    ]
}

/// `20k² + k(23 − 8ℓ) + 2 − 7ℓ > 0`, the condition under which the type I
/// contribution is dominated in the `Λ(n) e(z/n)` estimate.
pub fn lambda_type_one_condition(k: &Rational, l: &Rational) -> Constraint {
    strict(
        "20k^2 + k(23 - 8l) + 2 - 7l > 0",
        &(k * k * q(20, 1) + k * (q(23, 1) - l * q(8, 1)) + q(2, 1) - l * q(7, 1)),
        &Rational::zero(),
    )
}

/// `1 − ℓ > k(r − 1)`.
pub fn tau_constraints(r: u32, k: &Rational, l: &Rational) -> Vec<Constraint> {
    let r1 = Rational::int(i64::from(r) - 1);
    vec![
        Constraint {
            name: "r >= 2",
            holds: r >= 2,
        },
        strict("1 - l > k(r - 1)", &(Rational::one() - l), &(k * &r1)),
    ]
}

/// `k + ℓ < 1`.
pub fn two_omega_constraints(k: &Rational, l: &Rational) -> Vec<Constraint> {
    vec![strict("k + l < 1", &Rational::one(), &(k + l))]
}

pub fn constraints(target: Target, p: &ExponentPair) -> Vec<Constraint> {
    match target {
        Target::Lambda => lambda_constraints(&p.k, &p.l),
        Target::TauR(r) => tau_constraints(r, &p.k, &p.l),
        Target::TwoOmega => two_omega_constraints(&p.k, &p.l),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ExponentOutcome {
    Feasible { exponent: Rational },
    Infeasible { violated: Vec<&'static str> },
}

impl ExponentOutcome {
    pub fn exponent(&self) -> Option<&Rational> {
        match self {
            ExponentOutcome::Feasible { exponent } => Some(exponent),
            ExponentOutcome::Infeasible { .. } => None,
        }
    }
}

/// Closed-form error exponent for `target` from the pair `(k, ℓ)`:
///
/// * `Λ`: `14(k+1)/(29k − ℓ + 30)`
/// * `τ_r`: `(k(r−1) + ℓ + r − 1)/(k(r−1) + ℓ + 2r − 1)`
/// * `2^ω`: `2(k+1)/(3k − ℓ + 5)`
///
/// Strict conditions are tested on the base point of an `ε`-pair, so
/// equality counts as a violation.
pub fn theorem_exponent(target: Target, p: &ExponentPair) -> ExponentOutcome {
    let violated: Vec<&'static str> = constraints(target, p).into_iter().filter(|c| !c.holds).map(|c| c.name).collect();
    if !violated.is_empty() {
        return ExponentOutcome::Infeasible { violated };
    }
    let (k, l) = (&p.k, &p.l);
    let one = Rational::one();
    let exponent = match target {
        Target::Lambda => (k + &one) * q(14, 1) / (k * q(29, 1) - l + q(30, 1)),
        Target::TauR(r) => {
            let r = Rational::int(i64::from(r));
            let base = k * (&r - &one) + l;
            (&base + &r - &one) / (&base + &r * q(2, 1) - &one)
        }
        Target::TwoOmega => (k + &one) * q(2, 1) / (k * q(3, 1) - l + q(5, 1)),
    };
    ExponentOutcome::Feasible { exponent }
}

/// `(α, β, γ)` in an exponential-sum bound `z^α R^β + R^γ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundProfile {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProfileTarget {
    /// `Σ Λ(n) e(z/n) ≪ z^α R^β + R^γ` gives the exponent `(1+α)/(3−β)`.
    Lambda,
    /// `Σ τ_r(n) e(z/(n+a)) ≪ z^α R^β + R² z⁻¹` gives `(2α+β)/(2α+β+1)`.
    TauR,
}

impl BoundProfile {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        BoundProfile { alpha, beta, gamma }
    }

    pub fn constraints(&self, target: ProfileTarget) -> Vec<Constraint> {
        let (a, b, g) = (&self.alpha, &self.beta, &self.gamma);
        let zero = Rational::zero();
        let one = Rational::one();
        let two = q(2, 1);
        let mut out = vec![strict("alpha > 0", a, &zero), strict("beta > 0", b, &zero)];
        let two_a_b = a * &two + b;
        out.push(strict("2alpha + beta < 1", &one, &two_a_b));
        match target {
            ProfileTarget::Lambda => {
                out.push(weak("gamma >= 0", g, &zero));
                out.push(strict("gamma < 1", &one, g));
                out.push(weak("alpha(gamma - 3) <= beta - gamma", &(b - g), &(a * (g - q(3, 1)))));
                out.push(weak(
                    "alpha(gamma + 1) + gamma(beta - 2) + 1 >= 0",
                    &(a * (g + &one) + g * (b - &two) + &one),
                    &zero,
                ));
            }
            ProfileTarget::TauR => out.push(strict("4alpha + 2beta > 1", &(&two_a_b * &two), &one)),
        }
        out
    }
}

pub fn profile_to_exponent(profile: &BoundProfile, target: ProfileTarget) -> Result<Rational> {
    let violated: Vec<&str> = profile.constraints(target).into_iter().filter(|c| !c.holds).map(|c| c.name).collect();
    if !violated.is_empty() {
        return Err(Error::Infeasible(format!("profile violates {}", violated.join(", "))));
    }
    let (a, b) = (&profile.alpha, &profile.beta);
    Ok(match target {
        ProfileTarget::Lambda => (a + Rational::one()) / (q(3, 1) - b),
        ProfileTarget::TauR => {
            let s = a * q(2, 1) + b;
            &s / (&s + Rational::one())
        }
    })
}

/// The `Λ` profile produced by a pair: `(1/6, (7k+ℓ+6)/(12(k+1)), 7/8)`.
pub fn lambda_profile(p: &ExponentPair) -> BoundProfile {
    let beta = (&p.k * q(7, 1) + &p.l + q(6, 1)) / ((&p.k + Rational::one()) * q(12, 1));
    BoundProfile::new(q(1, 6), beta, q(7, 8))
}

/// The `τ_r` profile produced by a pair: `α = k`, `β = (ℓ−k)/r + 1 − 1/r − k`.
pub fn tau_profile(r: u32, p: &ExponentPair) -> BoundProfile {
    let r = Rational::int(i64::from(r));
    let beta = (&p.l - &p.k) / &r + Rational::one() - r.recip().expect("r >= 1") - &p.k;
    BoundProfile::new(p.k.clone(), beta, Rational::zero())
}

fn zr(z: Rational, r: Rational) -> TermExponent {
    TermExponent::new([(Var::Z, z), (Var::R, r)])
}

/// The terms `D/H + Σ_{h≤H} h⁻¹ |Σ_{D<d≤2D} f(d) e(hx/(d+a))|` become once each
/// `z^a R^b` of the exponential-sum bound is applied with `z = hx`, `R = D`.
/// With `abel`, the shift `a = 1` costs a factor `1 + hx/D²`, adding
/// `(hx)^{a+1} D^{b−2}`. Summing `h⁻¹ h^a` over `h ≤ H` gives `H^a` for
/// `a > 0` and no power of `H` otherwise.
pub fn preliminary_terms(bound: &[TermExponent], abel: bool) -> Vec<TermExponent> {
    let mut out = vec![TermExponent::new([(Var::D, Rational::one()), (Var::H, -Rational::one())])];
    let mut push = |a: Rational, b: Rational| {
        let h = if a.is_positive() { a.clone() } else { Rational::zero() };
        out.push(TermExponent::new([(Var::X, a), (Var::D, b), (Var::H, h)]));
    };
    for t in bound {
        let (a, b) = (t.exponent(Var::Z), t.exponent(Var::R));
        push(a.clone(), b.clone());
        if abel {
            push(a + Rational::one(), b - q(2, 1));
        }
    }
    dedupe(out)
}

/// The full chain from an exponential-sum bound to the minimax problem in
/// `N = x^ν`: preliminary terms, H elimination, worst case over `D`, and the
/// term `N` itself.
pub fn error_term_problem(
    bound: &[TermExponent],
    abel: bool,
    interval: Option<(Rational, Rational)>,
) -> Result<BalanceProblem> {
    let h_free = eliminate_h(&preliminary_terms(bound, abel))?;
    let mut terms = vec![TermExponent::var(Var::N)];
    terms.extend(maximize_over_d(&h_free));
    Ok(BalanceProblem::new(dedupe(terms), Var::N, interval))
}

pub fn lambda_profile_problem(profile: &BoundProfile) -> Result<BalanceProblem> {
    let bound = [
        zr(profile.alpha.clone(), profile.beta.clone()),
        zr(Rational::zero(), profile.gamma.clone()),
    ];
    error_term_problem(&bound, true, None)
}

pub fn tau_profile_problem(profile: &BoundProfile) -> Result<BalanceProblem> {
    let bound = [zr(profile.alpha.clone(), profile.beta.clone()), zr(-Rational::one(), q(2, 1))];
    error_term_problem(&bound, false, None)
}

/// `z^{3497/13774} R^{15/71}` for squarefree `n`.
pub fn squarefree_problem() -> Result<BalanceProblem> {
    error_term_problem(&[zr(q(3497, 13774), q(15, 71))], true, None)
}

/// `z^k R^{(1+ℓ−3k)/2}` for `2^ω`.
pub fn two_omega_problem(p: &ExponentPair) -> Result<BalanceProblem> {
    let b = (Rational::one() + &p.l - &p.k * q(3, 1)) / q(2, 1);
    error_term_problem(&[zr(p.k.clone(), b)], true, None)
}

/// `z^{1/6} R^{128/195}` for `ω`, with `N ≥ x^{15/41}`.
pub fn omega_problem() -> Result<BalanceProblem> {
    error_term_problem(&[zr(q(1, 6), q(128, 195))], true, Some((q(15, 41), q(1, 2))))
}

fn xn(x: Rational, n: Rational, scale: Rational) -> TermExponent {
    TermExponent::scaled([(Var::X, x), (Var::N, n)].into_iter().filter(|(_, e)| !e.is_zero()).collect(), scale)
}

/// The five `N`-terms of the squarefree estimate as they are usually displayed.
pub fn squarefree_terms() -> Vec<TermExponent> {
    let one = Rational::one();
    vec![
        TermExponent::var(Var::N),
        xn(q(17271, 1), q(-7367, 1), q(1, 31045)),
        xn(q(17271, 13774), q(-127, 71), one.clone()),
        xn(q(9904, 1), q(-6407, 1), q(1, 17271)),
        xn(q(6407, 13774), q(-15, 71), one),
    ]
}

/// The five `N`-terms of the `ω` estimate as they are usually displayed.
pub fn omega_terms() -> Vec<TermExponent> {
    let one = Rational::one();
    vec![
        TermExponent::var(Var::N),
        xn(q(386, 1), q(-321, 1), q(1, 455)),
        xn(q(7, 13), q(-69, 845), one.clone()),
        xn(q(107, 130), q(-128, 195), one.clone()),
        xn(q(7, 6), q(-262, 195), one),
    ]
}

/// `z^{55/194} U^{21/97}` against `z^{1/6} R^{5/6} U^{−371/582}`.
pub fn squarefree_u_problem() -> BalanceProblem {
    BalanceProblem::new(
        vec![
            TermExponent::new([(Var::Z, q(55, 194)), (Var::U, q(21, 97))]),
            TermExponent::new([(Var::Z, q(1, 6)), (Var::R, q(5, 6)), (Var::U, q(-371, 582))]),
        ],
        Var::U,
        None,
    )
}

/// The minimax problem behind `theorem_exponent(target, p)`.
pub fn target_problem(target: Target, p: &ExponentPair) -> Result<BalanceProblem> {
    match target {
        Target::Lambda => lambda_profile_problem(&lambda_profile(p)),
        Target::TauR(r) => tau_profile_problem(&tau_profile(r, p)),
        Target::TwoOmega => two_omega_problem(p),
    }
}

/// Solves [`target_problem`]; a second route to the closed-form exponent.
pub fn pipeline_exponent(target: Target, p: &ExponentPair) -> Result<BalanceResult> {
    balance_exponents(&target_problem(target, p)?)
}

/// The feasible pair with the smallest exponent among those reachable from
/// `seeds` in at most `depth` steps; ties go to the lexicographically
/// smallest `(k, ℓ)`.
pub fn minimize_over_pairs(target: Target, seeds: &[ExponentPair], depth: u32) -> Result<(ExponentPair, Rational)> {
    let all = enumerate_pairs(seeds, depth)?;
    all.into_iter()
        .filter_map(|p| theorem_exponent(target, &p).exponent().cloned().map(|e| (p, e)))
        .min_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.key().cmp(&b.0.key())))
        .ok_or_else(|| Error::Infeasible(format!("no feasible pair for {target} within depth {depth}")))
}

#[cfg(test)]
mod tests {
    use super::super::balance::{balance_symbolic, certify};
    use super::super::pair::{apply_a, apply_b, heath_brown_pair, Seed};
    use super::*;
    use proptest::prelude::*;

    fn pair(k: Rational, l: Rational) -> ExponentPair {
        ExponentPair::new(k, l, false).unwrap()
    }

    fn bourgain() -> ExponentPair {
        Seed::Bourgain.pair().unwrap()
    }

    fn exponent(t: Target, p: &ExponentPair) -> Rational {
        theorem_exponent(t, p).exponent().cloned().unwrap()
    }

    #[test]
    fn golden_exponents() {
        assert_eq!(exponent(Target::Lambda, &bourgain()), q(97, 203));
        assert_eq!(exponent(Target::TauR(2), &bourgain()), q(19, 40));
        assert_eq!(exponent(Target::TauR(3), &apply_a(&bourgain())), q(283, 574));
        assert_eq!(exponent(Target::TauR(4), &heath_brown_pair(7).unwrap()), q(125, 251));
        assert_eq!(exponent(Target::TauR(5), &heath_brown_pair(9).unwrap()), q(493, 988));
        assert_eq!(exponent(Target::TauR(6), &heath_brown_pair(11).unwrap()), q(428, 857));
        assert_eq!(exponent(Target::TwoOmega, &bourgain()), q(97, 202));
    }

    #[test]
    fn tau_closed_form() {
        for r in 4..=12u32 {
            let e = exponent(Target::TauR(r), &heath_brown_pair(2 * r - 1).unwrap());
            let r = i64::from(r);
            assert_eq!(e, q(1, 2) - q(1, 2 * (4 * r * r * r - r - 1)), "r={r}");
        }
    }

    #[test]
    fn infeasible_is_a_value() {
        // k = 1/2 > 1/6, and 3/4 + 3 − 9/4 − 9/4 < 0
        let p = pair(q(1, 2), q(1, 2));
        match theorem_exponent(Target::Lambda, &p) {
            ExponentOutcome::Infeasible { violated } => {
                assert_eq!(violated, vec!["k <= 1/6", "l^2 + l + 3 - k(5 - l) - 9k^2 > 0"])
            }
            o => panic!("{o:?}"),
        }
        // equality in a strict condition: 1 − ℓ = k(r − 1)
        let p = pair(q(1, 6), q(2, 3));
        assert!(matches!(theorem_exponent(Target::TauR(3), &p), ExponentOutcome::Infeasible { .. }));
        assert!(theorem_exponent(Target::TauR(2), &p).exponent().is_some());
        assert!(theorem_exponent(Target::TauR(1), &p).exponent().is_none());
        // k + ℓ = 1
        let p = pair(q(0, 1), q(1, 1));
        assert!(theorem_exponent(Target::TwoOmega, &p).exponent().is_none());
    }

    #[test]
    fn prop_condition_is_separate() {
        let c = lambda_type_one_condition(&q(1, 6), &q(2, 3));
        assert!(c.holds);
        let c = lambda_type_one_condition(&q(0, 1), &q(1, 2));
        // 2 − 7/2 < 0
        assert!(!c.holds);
        assert!(lambda_constraints(&q(0, 1), &q(1, 2)).iter().all(|c| c.holds));
    }

    #[test]
    fn profile_values() {
        let p = BoundProfile::new(q(1, 12), q(19, 24), q(0, 1));
        assert_eq!(profile_to_exponent(&p, ProfileTarget::Lambda).unwrap(), q(26, 53));
        let r = balance_exponents(&lambda_profile_problem(&p).unwrap()).unwrap();
        assert_eq!(r.value, q(26, 53));
        assert_eq!(r.nu_star, q(26, 53));
        let bad = BoundProfile::new(q(1, 2), q(1, 2), q(0, 1));
        assert!(profile_to_exponent(&bad, ProfileTarget::Lambda).is_err());
        assert!(profile_to_exponent(&bad, ProfileTarget::TauR).is_err());
        let p = BoundProfile::new(q(1, 6), q(7, 12), q(0, 1));
        let direct = (q(1, 6) + q(1, 1)) / (q(3, 1) - q(7, 12));
        assert_eq!(profile_to_exponent(&p, ProfileTarget::Lambda).unwrap(), direct);
        assert_eq!(direct, q(14, 29));
    }

    #[test]
    fn h_elimination_reproduces_displays() {
        let (a, b) = (q(1, 6), q(7, 12));
        let one = Rational::one();
        let terms = preliminary_terms(&[zr(a.clone(), b.clone())], true);
        let out = eliminate_h(&terms).unwrap();
        let want = [
            TermExponent::scaled(
                [(Var::X, &one + &a), (Var::D, &a + &b - &one)].into_iter().collect(),
                (&a + q(2, 1)).recip().unwrap(),
            ),
            TermExponent::new([(Var::X, &one + &a), (Var::D, &b - q(2, 1))]),
            TermExponent::scaled(
                [(Var::X, a.clone()), (Var::D, &a + &b)].into_iter().collect(),
                (&a + &one).recip().unwrap(),
            ),
            TermExponent::new([(Var::X, a.clone()), (Var::D, b.clone())]),
        ];
        assert_eq!(out.len(), 4);
        for w in &want {
            assert!(out.iter().any(|o| o.normalized() == w.normalized()), "missing {w}");
        }
        // the τ flavor has no Abel term
        let out = eliminate_h(&preliminary_terms(&[zr(a.clone(), b.clone())], false)).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].normalized(), want[2].normalized());
        assert_eq!(out[1], want[3]);
    }

    #[test]
    fn squarefree_system() {
        let direct = BalanceProblem::new(squarefree_terms(), Var::N, None);
        let r = balance_exponents(&direct).unwrap();
        assert_eq!(r.nu_star, q(1919, 4268));
        assert_eq!(r.value, q(1919, 4268));
        certify(&direct, &r).unwrap();
        let derived = squarefree_problem().unwrap();
        for t in &squarefree_terms() {
            assert!(derived.terms.iter().any(|d| d.normalized() == t.normalized()), "missing {t}");
        }
        assert_eq!(balance_exponents(&derived).unwrap().value, q(1919, 4268));
    }

    #[test]
    fn omega_system() {
        let direct = BalanceProblem::new(omega_terms(), Var::N, Some((q(15, 41), q(1, 2))));
        let r = balance_exponents(&direct).unwrap();
        assert_eq!(r.value, q(455, 914));
        certify(&direct, &r).unwrap();
        let derived = omega_problem().unwrap();
        for t in &omega_terms() {
            assert!(derived.terms.iter().any(|d| d.normalized() == t.normalized()), "missing {t}");
        }
        assert_eq!(balance_exponents(&derived).unwrap().value, q(455, 914));
    }

    #[test]
    fn squarefree_u_choice() {
        let s = balance_symbolic(&squarefree_u_problem()).unwrap();
        assert_eq!(s.nu[&Var::Z], q(-68, 497));
        assert_eq!(s.nu[&Var::R], q(485, 497));
    }

    #[test]
    fn pipelines_match_closed_forms() {
        let cases = [
            (Target::Lambda, bourgain()),
            (Target::TauR(2), bourgain()),
            (Target::TauR(3), apply_a(&bourgain())),
            (Target::TauR(4), heath_brown_pair(7).unwrap()),
            (Target::TauR(5), heath_brown_pair(9).unwrap()),
            (Target::TwoOmega, bourgain()),
            (Target::Lambda, pair(q(1, 6), q(2, 3))),
            (Target::TwoOmega, pair(q(1, 6), q(2, 3))),
        ];
        for (t, p) in cases {
            let r = pipeline_exponent(t, &p).unwrap();
            assert_eq!(r.value, exponent(t, &p), "{t} {p}");
            certify(&target_problem(t, &p).unwrap(), &r).unwrap();
        }
    }

    #[test]
    fn search() {
        let seeds = vec![Seed::Trivial.pair().unwrap(), pair(q(1, 6), q(2, 3)), bourgain()];
        let (_, e) = minimize_over_pairs(Target::TauR(2), &seeds, 6).unwrap();
        assert!(e <= q(19, 40));
        let (_, e) = minimize_over_pairs(Target::Lambda, &seeds, 6).unwrap();
        assert!(e <= q(97, 203));
        let bad = vec![pair(q(1, 2), q(1, 2))];
        assert!(minimize_over_pairs(Target::Lambda, &bad, 0).is_err());
        assert_eq!("tau:3".parse::<Target>().unwrap(), Target::TauR(3));
        assert_eq!("2omega".parse::<Target>().unwrap(), Target::TwoOmega);
    }

    fn rational_in(lo: i64, hi: i64, den: i64) -> impl Strategy<Value = Rational> {
        (lo..=hi).prop_map(move |n| q(n, den))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn b_is_an_involution(k in rational_in(0, 1000, 2000), l in rational_in(1000, 2000, 2000)) {
            let p = pair(k, l);
            prop_assert!(apply_b(&apply_b(&p)).same_point(&p));
        }

        #[test]
        fn lambda_profile_reduces(k in rational_in(0, 1000, 6000), l in rational_in(3000, 6000, 6000)) {
            let p = pair(k, l);
            if let Some(e) = theorem_exponent(Target::Lambda, &p).exponent() {
                let prof = lambda_profile(&p);
                let via = (&prof.alpha + Rational::one()) / (q(3, 1) - &prof.beta);
                prop_assert_eq!(&via, e);
            }
        }

        #[test]
        fn tau_profile_reduces(k in rational_in(0, 100, 1000), l in rational_in(500, 1000, 1000), r in 2u32..7) {
            let p = pair(k, l);
            if let Some(e) = theorem_exponent(Target::TauR(r), &p).exponent() {
                let prof = tau_profile(r, &p);
                let s = &prof.alpha * q(2, 1) + &prof.beta;
                prop_assert_eq!(&(&s / (&s + Rational::one())), e);
            }
        }
    }
}
