//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use detarr_core::blockrep::{exceptional_equation, Representation, Verdict};
use detarr_core::factor::factor;
use detarr_core::family::{
    group_loop, lift_family, liftable, sample_adaptively, winding_vector, MatrixLoop,
};
use detarr_core::invariants::{
    basic_invariants, fiber_relation_check, integral_grid, lambda_matrix,
};
use detarr_core::matcore::{norm_inf, Kind, Mat};
use detarr_core::poly::Polynomial;
use detarr_core::random;
use num_complex::Complex64;
use rand::Rng;

const SEED: u64 = 20240611;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn parse(kind: Kind, m: usize, src: &str) -> Polynomial {
    let names = kind.space(m).unwrap().var_names();
    Polynomial::parse(src, &names).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn reference_equations() -> Outcome {
    let start = Instant::now();
    let rows = [
        (Kind::CholeskySym, 2, "x*(x*z - y^2)", Verdict::Free),
        (Kind::Lu, 2, "x*(x*w - y*z)", Verdict::FreeStar),
        (
            Kind::CholeskySkew,
            4,
            "x*(x*w - y*v + z*u)",
            Verdict::FreeStar,
        ),
        (Kind::ModifiedLu, 2, "x*y*(x*w - y*z)", Verdict::Free),
        (
            Kind::ModifiedRect,
            3,
            "x*y*(x*v - y*u)*(y*w - z*v)",
            Verdict::Free,
        ),
    ];
    for (kind, m, eq, verdict) in rows {
        let rep = Representation::new(kind, m).map_err(|e| e.to_string())?;
        let e = exceptional_equation(&rep).map_err(|e| e.to_string())?;
        let label = rep.space().label();
        ensure(e.reduced().is_associate(&parse(kind, m, eq)), || {
            format!("{label}: reduced equation differs from {eq}")
        })?;
        ensure(e.verdict == verdict, || {
            format!("{label}: verdict {}", e.verdict)
        })?;
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("5 rows in {:.2?}", start.elapsed()))
}

fn example_sym3() -> Outcome {
    let rep = Representation::new(Kind::CholeskySym, 3).map_err(|e| e.to_string())?;
    let e = exceptional_equation(&rep).map_err(|e| e.to_string())?;
    let det = "x*(w*v - u^2) - y*(y*v - u*z) + z*(y*u - w*z)";
    let want = parse(Kind::CholeskySym, 3, &format!("x*(x*w - y^2)*({det})"));
    ensure(e.reduced().is_associate(&want), || {
        "equation mismatch".into()
    })?;
    ensure(e.factors.iter().all(|(_, k)| *k == 1), || {
        "multiplicity above 1".into()
    })?;
    ensure(e.verdict == Verdict::Free, || {
        format!("verdict {}", e.verdict)
    })?;
    Ok("x*(x*w - y^2)*det(A), Free".into())
}

fn nonreduced_witness() -> Outcome {
    let rep = Representation::new(Kind::Lu, 2).map_err(|e| e.to_string())?;
    let e = exceptional_equation(&rep).map_err(|e| e.to_string())?;
    let want = parse(Kind::Lu, 2, "x^2*(x*w - y*z)");
    let c = e
        .determinant
        .constant_ratio(&want)
        .ok_or("determinant is not a multiple of x^2*(x*w - y*z)")?;
    Ok(format!("det = {c} * x^2*(x*w - y*z)"))
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let mut count = 0usize;
    let mut worst: f64 = 0.0;
    for (s, kind) in Kind::ALL.into_iter().enumerate() {
        for m in kind.min_size()..=6 {
            let mut rng = random::rng(SEED, (s * 16 + m) as u64);
            for _ in 0..1000 {
                let a = random::orbit_point(kind, m, &mut rng).matrix();
                let f = factor(kind, &a).map_err(|e| format!("{kind} m={m}: {e}"))?;
                let rel = f.residual / (1.0 + norm_inf(&a));
                ensure(rel <= 1e-10, || format!("{kind} m={m}: residual {rel:e}"))?;
                worst = worst.max(rel);
                count += 1;
            }
        }
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!(
        "{count} factorizations, worst relative residual {worst:.1e}, {:.2?}",
        start.elapsed()
    ))
}

fn rank_identity() -> Outcome {
    let mut checked = 0;
    for kind in Kind::ALL {
        for m in kind.min_size()..=5 {
            let rep = Representation::new(kind, m).map_err(|e| e.to_string())?;
            let k = basic_invariants(&rep).map_err(|e| e.to_string())?.len();
            ensure(k == kind.rank(m) && rep.torus().len() == k, || {
                format!("{kind} m={m}: {k} invariants, rank {}", kind.rank(m))
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} representations"))
}

fn lambda() -> Outcome {
    let mut checked = 0;
    for kind in Kind::ALL {
        for m in kind.min_size()..=4 {
            let rep = Representation::new(kind, m).map_err(|e| e.to_string())?;
            let lm = lambda_matrix(&rep, SEED).map_err(|e| format!("{kind} m={m}: {e}"))?;
            let (ints, dev) = lm.rounded();
            let k = ints.len();
            ensure(ints.iter().all(|r| r.len() == k), || {
                format!("{kind} m={m}: not square")
            })?;
            ensure(dev <= 1e-6, || format!("{kind} m={m}: deviation {dev:e}"))?;
            let grid = integral_grid(&rep, 256).map_err(|e| e.to_string())?;
            for (row, irow) in grid.iter().zip(&ints) {
                for (z, &n) in row.iter().zip(irow) {
                    let d = (z - Complex64::new(n as f64, 0.0)).norm();
                    ensure(d <= 1e-6, || {
                        format!("{kind} m={m}: loop integral off by {d:e}")
                    })?;
                }
            }
            if kind == Kind::CholeskySym && m <= 3 {
                let want: Vec<Vec<i64>> = (0..m)
                    .map(|i| (0..m).map(|j| if j <= i { 2 } else { 0 }).collect())
                    .collect();
                ensure(ints == want, || format!("Sym_{m}: {ints:?}"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} representations, Sym_2 = [[2,0],[2,2]]"))
}

fn fiber() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for kind in Kind::ALL {
        for m in kind.min_size()..=3 {
            let rep = Representation::new(kind, m).map_err(|e| e.to_string())?;
            let r =
                fiber_relation_check(&rep, 50, SEED).map_err(|e| format!("{kind} m={m}: {e}"))?;
            ensure(r.trials == 50 && r.tangents_per_trial == 10, || {
                "sample counts".into()
            })?;
            ensure(r.max_residual <= 1e-8, || {
                format!("{kind} m={m}: residual {:e}", r.max_residual)
            })?;
            worst = worst.max(r.max_residual);
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} representations, max residual {worst:.1e}"
    ))
}

fn diag_loop(turns: f64) -> MatrixLoop {
    MatrixLoop::from_fn(Kind::CholeskySym, 2, 64, |t| {
        let mut a = Mat::identity(2, 2);
        a[(0, 0)] = Complex64::from_polar(1.0, std::f64::consts::TAU * turns * t);
        a
    })
    .unwrap()
}

fn obstruction() -> Outcome {
    let (ok, o) = liftable(&diag_loop(1.0)).map_err(|e| e.to_string())?;
    ensure(o.winding == [1, 1] && !ok, || {
        format!("single loop: {:?} liftable={ok}", o.winding)
    })?;
    let (ok, o) = liftable(&diag_loop(2.0)).map_err(|e| e.to_string())?;
    ensure(o.winding == [2, 2] && ok, || {
        format!("squared loop: {:?} liftable={ok}", o.winding)
    })?;
    let lift = lift_family(&diag_loop(2.0)).map_err(|e| e.to_string())?;
    ensure(lift.closure_gap <= 1e-6, || {
        format!("gap {:e}", lift.closure_gap)
    })?;

    let mut rng = random::rng(SEED, 8);
    let mut loops = 0;
    for kind in [Kind::Lu, Kind::ModifiedLu, Kind::ModifiedRect] {
        for m in 2..=3 {
            let base = kind.structure_matrix(m).map_err(|e| e.to_string())?;
            for _ in 0..4 {
                let n: Vec<i64> = (0..kind.rank(m))
                    .map(|_| rng.random_range(-2..=2))
                    .collect();
                let g = group_loop(kind, m, &n, &mut rng).map_err(|e| e.to_string())?;
                let (lp, _) = sample_adaptively(kind, m, 64, |t| g(t).act_matrix(&base).unwrap())
                    .map_err(|e| e.to_string())?;
                let lift = lift_family(&lp).map_err(|e| format!("{kind} m={m} n={n:?}: {e}"))?;
                ensure(lift.closure_gap <= 1e-6, || {
                    format!("{kind} m={m}: gap {:e}", lift.closure_gap)
                })?;
                loops += 1;
            }
        }
    }
    Ok(format!(
        "(1,1) blocked, (2,2) lifts, {loops} general/modified loops lift"
    ))
}

fn refinement() -> Outcome {
    let mut rng = random::rng(SEED, 9);
    let cases: Vec<(Kind, usize)> = Kind::ALL
        .into_iter()
        .flat_map(|k| (k.min_size().max(2)..=3).map(move |m| (k, m)))
        .collect();
    for trial in 0..100 {
        let (kind, m) = cases[trial % cases.len()];
        let rep = Representation::new(kind, m).map_err(|e| e.to_string())?;
        let lm = lambda_matrix(&rep, SEED)
            .map_err(|e| e.to_string())?
            .rounded()
            .0;
        let n: Vec<i64> = (0..kind.rank(m))
            .map(|_| rng.random_range(-2..=2))
            .collect();
        let base = kind.structure_matrix(m).map_err(|e| e.to_string())?;
        let g = group_loop(kind, m, &n, &mut rng).map_err(|e| e.to_string())?;
        let f = |t: f64| g(t).act_matrix(&base).unwrap();
        let (lp, o) = sample_adaptively(kind, m, 32, f).map_err(|e| e.to_string())?;
        let fine = MatrixLoop::from_fn(kind, m, 2 * lp.steps(), f).map_err(|e| e.to_string())?;
        let o2 = winding_vector(&fine).map_err(|e| e.to_string())?;
        ensure(o.winding == o2.winding, || {
            format!("trial {trial}: {:?} vs {:?}", o.winding, o2.winding)
        })?;
        let expected: Vec<i64> = lm
            .iter()
            .map(|row| row.iter().zip(&n).map(|(a, b)| a * b).sum())
            .collect();
        ensure(o.winding == expected, || {
            format!("trial {trial}: {:?}, Λ·n = {expected:?}", o.winding)
        })?;
    }
    Ok("100 loops, windings stable under doubling and equal to Λ·n".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("exceptional orbit equations and verdicts", reference_equations),
        ("Sym_3 equation", example_sym3),
        ("nonreduced determinant on M_{2,2}", nonreduced_witness),
        ("factorization round trip", round_trip),
        ("invariant count equals rank", rank_identity),
        ("Λ matrix and torus loop integrals", lambda),
        ("fiber relation", fiber),
        ("lifting obstruction", obstruction),
        ("winding refinement invariance", refinement),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}  ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}  ({why})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
