//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use floorsum_core::arith::{build_sieve, dirichlet_convolve};
use floorsum_core::expsum::{check_bound_with, BoundCase, EPSILON};
use floorsum_core::floorsum::{error_scan, floor_sum_fast, floor_sum_naive, log_grid, main_term_constant};
use floorsum_core::identities::{random_suite, IdentityKind, IDENTITY_TOLERANCE};
use floorsum_core::pairs_opt::{
    apply_a, apply_b, balance_exponents, balance_symbolic, heath_brown_pair, lambda_profile_problem, omega_terms,
    q, squarefree_terms, squarefree_u_problem, theorem_exponent, BalanceProblem, BoundProfile, ExponentPair,
    Rational, Seed, Target, Var,
};
use floorsum_core::psi::verify_pointwise_bound;
use floorsum_core::{FunctionKind, SieveTable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exponent(t: Target, p: &ExponentPair) -> Result<Rational, String> {
    theorem_exponent(t, p).exponent().cloned().ok_or_else(|| format!("{t} infeasible at {p}"))
}

fn golden_exponents() -> Outcome {
    let bourgain = Seed::Bourgain.pair().map_err(|e| e.to_string())?;
    let hb = |m| heath_brown_pair(m).map_err(|e| e.to_string());
    let cases = [
        (Target::Lambda, bourgain.clone(), q(97, 203)),
        (Target::TauR(2), bourgain.clone(), q(19, 40)),
        (Target::TauR(3), apply_a(&bourgain), q(283, 574)),
        (Target::TauR(4), hb(7)?, q(125, 251)),
        (Target::TauR(5), hb(9)?, q(493, 988)),
        (Target::TauR(6), hb(11)?, q(428, 857)),
        (Target::TwoOmega, bourgain, q(97, 202)),
    ];
    for (t, p, want) in &cases {
        let got = exponent(*t, p)?;
        ensure(&got == want, || format!("{t}: got {got}, want {want}"))?;
    }
    Ok(format!("{} exponents exact", cases.len()))
}

fn closed_form() -> Outcome {
    for r in 4..=12u32 {
        let got = exponent(Target::TauR(r), &heath_brown_pair(2 * r - 1).map_err(|e| e.to_string())?)?;
        let r64 = i64::from(r);
        let want = q(1, 2) - q(1, 2 * (4 * r64 * r64 * r64 - r64 - 1));
        ensure(got == want, || format!("r = {r}: got {got}, want {want}"))?;
    }
    Ok("r = 4..12 exact".into())
}

fn balancer_values() -> Outcome {
    let err = |e: floorsum_core::Error| e.to_string();
    let sq = balance_exponents(&BalanceProblem::new(squarefree_terms(), Var::N, None)).map_err(err)?;
    ensure(sq.nu_star == q(1919, 4268), || format!("squarefree system: nu* = {}", sq.nu_star))?;
    let om = balance_exponents(&BalanceProblem::new(omega_terms(), Var::N, Some((q(15, 41), q(1, 2))))).map_err(err)?;
    ensure(om.nu_star == q(455, 914), || format!("omega system: nu* = {}", om.nu_star))?;
    let prof = BoundProfile::new(q(1, 12), q(19, 24), q(0, 1));
    let lp = balance_exponents(&lambda_profile_problem(&prof).map_err(err)?).map_err(err)?;
    ensure(lp.nu_star == q(26, 53), || format!("lambda profile: nu* = {}", lp.nu_star))?;
    let u = balance_symbolic(&squarefree_u_problem()).map_err(err)?;
    let (uz, ur) = (u.nu[&Var::Z].clone(), u.nu[&Var::R].clone());
    ensure(uz == q(-68, 497) && ur == q(485, 497), || format!("U-vector ({uz}, {ur})"))?;
    Ok("1919/4268, 455/914, 26/53, (-68/497, 485/497)".into())
}

fn pair_calculus() -> Outcome {
    let b = Seed::Bourgain.pair().map_err(|e| e.to_string())?;
    let a = apply_a(&b);
    ensure(a.key() == (q(13, 194), q(76, 97)), || format!("A = {a}"))?;
    let ba = apply_b(&a);
    ensure(ba.key() == (q(55, 194), q(55, 97)), || format!("BA = {ba}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..1000 {
        let den: i64 = rng.gen_range(2..=10_000);
        let k = q(rng.gen_range(0..=den / 2), den);
        let l = q(rng.gen_range((den + 1) / 2..=den), den);
        let p = ExponentPair::new(k, l, false).map_err(|e| e.to_string())?;
        let back = apply_b(&apply_b(&p));
        ensure(back.same_point(&p), || format!("trial {i}: BB{p} = {back}"))?;
    }
    Ok("A, BA exact; B involution on 1000 pairs".into())
}

const SIX_KINDS: [FunctionKind; 6] = [
    FunctionKind::Mobius,
    FunctionKind::MobiusSquared,
    FunctionKind::Lambda,
    FunctionKind::TAU,
    FunctionKind::Omega,
    FunctionKind::TwoPowOmega,
];

fn oracle_equivalence() -> Outcome {
    let compare = |kind: FunctionKind, x: u64| -> Result<(), String> {
        let naive = floor_sum_naive(kind, x).map_err(|e| e.to_string())?;
        let fast = floor_sum_fast(kind, x).map_err(|e| e.to_string())?;
        let ok = if kind.is_integer_valued() {
            naive == fast
        } else {
            naive.relative_gap(fast) <= 1e-9
        };
        ensure(ok, || format!("{kind} at x = {x}: naive {naive}, fast {fast}"))
    };
    for kind in SIX_KINDS {
        for x in 1..=10_000u64 {
            compare(kind, x)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let picked: Vec<FunctionKind> = SIX_KINDS.choose_multiple(&mut rng, 3).copied().collect();
    for &kind in &picked {
        for x in [100_000u64, 1_000_000] {
            compare(kind, x)?;
        }
    }
    let names: Vec<String> = picked.iter().map(|k| k.to_string()).collect();
    Ok(format!("six kinds on x <= 10^4; {} at 10^5, 10^6", names.join(", ")))
}

fn identity_residuals() -> Outcome {
    let mut worst = 0f64;
    for (i, id) in [
        IdentityKind::VaughanLambda,
        IdentityKind::VaughanMu,
        IdentityKind::Hyperbola,
        IdentityKind::HyperbolaExp,
    ]
    .into_iter()
    .enumerate()
    {
        let rep = random_suite(id, 100, 2024 + i as u64).map_err(|e| e.to_string())?;
        ensure(rep.trials.len() == 100, || format!("{id:?}: {} trials", rep.trials.len()))?;
        ensure(rep.max_relative <= IDENTITY_TOLERANCE, || {
            format!("{id:?}: max relative residual {:e}", rep.max_relative)
        })?;
        worst = worst.max(rep.max_relative);
    }
    Ok(format!("4 x 100 instances, worst relative residual {worst:.2e}"))
}

fn convolutions() -> Outcome {
    const N: u64 = 1_000_000;
    let err = |e: floorsum_core::Error| e.to_string();
    let table = |k| build_sieve(k, 1, N).map_err(err);
    let same = |name: &str, a: &SieveTable, b: &SieveTable| -> Result<(), String> {
        for n in 1..=N {
            let (x, y) = (a.exact_at(n), b.exact_at(n));
            ensure(x.is_some() && x == y, || format!("{name} differs at n = {n}: {x:?} vs {y:?}"))?;
        }
        Ok(())
    };
    let one = table(FunctionKind::One)?;
    let unit = dirichlet_convolve(&table(FunctionKind::Mobius)?, &one, N).map_err(err)?;
    for n in 1..=N {
        let want = i64::from(n == 1);
        ensure(unit.exact_at(n) == Some(want), || format!("mu*1 at n = {n}: {:?}", unit.exact_at(n)))?;
    }
    let mut prev = one.clone();
    for r in 2..=6u32 {
        let conv = dirichlet_convolve(&prev, &one, N).map_err(err)?;
        let direct = table(FunctionKind::TauR(r))?;
        same(&format!("tau_{r}"), &conv, &direct)?;
        prev = direct;
    }
    let two_omega = table(FunctionKind::TwoPowOmega)?;
    let chi_tau = dirichlet_convolve(&table(FunctionKind::ChiTwo)?, &table(FunctionKind::TAU)?, N).map_err(err)?;
    same("chi2*tau", &chi_tau, &two_omega)?;
    let mu2_one = dirichlet_convolve(&table(FunctionKind::MobiusSquared)?, &one, N).map_err(err)?;
    same("mu2*1", &mu2_one, &two_omega)?;
    Ok("mu*1, tau_r (r <= 6), 2^omega = chi2*tau = mu2*1 on [1, 10^6]".into())
}

fn vaaler() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for h in [1u64, 2, 5, 10, 100] {
        let v = verify_pointwise_bound(h, 10_000).map_err(|e| e.to_string())?;
        ensure(v <= 1e-9, || format!("H = {h}: violation {v:e}"))?;
        worst = worst.max(v);
    }
    let c = main_term_constant(FunctionKind::TauR(1), 1_000_000).map_err(|e| e.to_string())?;
    let gap = (c.completed() - 1.0).abs();
    ensure(gap <= 1e-12, || format!("C_tau1 = {} (gap {gap:e})", c.completed()))?;
    Ok(format!("max violation {worst:.2e}; |C_tau1 - 1| = {gap:.1e}"))
}

fn desk_scale_error() -> Outcome {
    let grid = log_grid(1_000, 10_000_000, 20).map_err(|e| e.to_string())?;
    ensure(grid.len() == 20, || format!("grid has {} points", grid.len()))?;
    let mut parts = Vec::new();
    for kind in [FunctionKind::TAU, FunctionKind::MobiusSquared, FunctionKind::TwoPowOmega] {
        let rep = error_scan(kind, &grid).map_err(|e| e.to_string())?;
        ensure(rep.slope <= 0.60, || format!("{kind}: slope {:.4}", rep.slope))?;
        for (x, e) in rep.grid.iter().zip(&rep.residuals) {
            let cap = 5.0 * (*x as f64).powf(0.55);
            ensure(*e <= cap, || format!("{kind}: |E({x})| = {e:.1} > {cap:.1}"))?;
        }
        parts.push(format!("{kind} slope {:.3}", rep.slope));
    }
    Ok(format!("{} (sanity only)", parts.join(", ")))
}

fn bound_ratios() -> Outcome {
    let pair = ExponentPair::new(q(1, 6), q(2, 3), false).map_err(|e| e.to_string())?;
    let z: f64 = 1e6;
    let mut parts = Vec::new();
    let mut failed = Vec::new();
    for (case, theta) in [(BoundCase::Lambda, 0.6), (BoundCase::Unitary, 0.55), (BoundCase::Omega, 0.6)] {
        let r = z.powf(theta).floor() as u64;
        let rep = check_bound_with(case, z, r, 2 * r, &pair, EPSILON).map_err(|e| e.to_string())?;
        let line = format!("{case} ratio {:.4}", rep.ratio);
        if rep.ratio > 10.0 {
            failed.push(line.clone());
        }
        parts.push(line);
    }
    ensure(failed.is_empty(), || format!("ratio above 10: {}", failed.join(", ")))?;
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("golden exponents", golden_exponents, Duration::from_secs(1)),
        ("closed-form tau_r exponent", closed_form, Duration::from_secs(1)),
        ("balancer golden values", balancer_values, Duration::from_secs(1)),
        ("pair calculus", pair_calculus, Duration::from_secs(1)),
        ("fast = naive oracle", oracle_equivalence, Duration::from_secs(120)),
        ("identity residuals", identity_residuals, Duration::from_secs(120)),
        ("convolution identities", convolutions, Duration::from_secs(60)),
        ("Vaaler bound and C_tau1", vaaler, Duration::from_secs(60)),
        ("desk-scale error behavior", desk_scale_error, Duration::from_secs(600)),
        ("bound sanity ratios", bound_ratios, Duration::from_secs(300)),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > *limit => Err(format!("{detail}; took {took:.2?} > {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL [{:>2}] {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
