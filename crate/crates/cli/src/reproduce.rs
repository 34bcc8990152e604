use std::path::Path;

use detarr_core::blockrep::{exceptional_equation, Representation, Verdict};
use detarr_core::invariants::{integral_grid, lambda_matrix};
use detarr_core::matcore::Kind;
use detarr_core::poly::Polynomial;
use num_complex::Complex64;

use crate::commands::Globals;
use crate::error::CliError;
use crate::io::write_json;
use crate::report::{factored, Check, ReproduceReport};

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum Target {
    #[value(name = "2")]
    Equations,
    #[value(name = "example-4.4")]
    Sym3,
    #[value(name = "lambda")]
    Lambda,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::Equations => "2",
            Target::Sym3 => "example-4.4",
            Target::Lambda => "lambda",
        }
    }
}

const REFERENCE_EQUATIONS: [(Kind, usize, &str, Verdict); 5] = [
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

const SYM3_DET: &str = "x*(w*v - u^2) - y*(y*v - u*z) + z*(y*u - w*z)";

fn equation_check(
    kind: Kind,
    m: usize,
    shown: &str,
    want: &str,
    verdict: Verdict,
) -> Result<Check, CliError> {
    let rep = Representation::new(kind, m)?;
    let names = rep.space().var_names();
    let e = exceptional_equation(&rep)?;
    let want_poly = Polynomial::parse(want, &names)?;
    let ok = e.reduced().is_associate(&want_poly) && e.verdict == verdict;
    Ok(Check::new(
        format!("{} under {}", rep.space().label(), kind.group_label(m)),
        format!("{shown} {verdict}"),
        format!("{} {}", factored(&e, &names, false), e.verdict),
        ok,
    ))
}

fn format_matrix(rows: &[Vec<i64>]) -> String {
    let inner: Vec<String> = rows
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(i64::to_string).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", inner.join(","))
}

fn lambda_oracle(kind: Kind, m: usize) -> Option<Vec<Vec<i64>>> {
    match (kind, m) {
        (Kind::CholeskySym, _) => Some(
            (0..m)
                .map(|i| (0..m).map(|j| if j <= i { 2 } else { 0 }).collect())
                .collect(),
        ),
        (Kind::Lu, 2) => Some(vec![vec![1, 0], vec![1, 1]]),
        (Kind::ModifiedLu, 2) => Some(vec![vec![1, 0, 0], vec![1, 1, -1], vec![1, 0, -1]]),
        _ => None,
    }
}

fn lambda_check(g: &Globals, kind: Kind, m: usize) -> Result<Check, CliError> {
    let rep = Representation::new(kind, m)?;
    let name = format!("Λ for {} on {}", kind.group_label(m), rep.space().label());
    let lm = match lambda_matrix(&rep, g.seed) {
        Ok(lm) => lm,
        Err(e) => return Ok(Check::new(name, "nonsingular".into(), e.to_string(), false)),
    };
    let (ints, dev) = lm.rounded();
    let grid = integral_grid(&rep, 256)?;
    let loop_dev = grid
        .iter()
        .zip(&ints)
        .flat_map(|(row, irow)| row.iter().zip(irow))
        .map(|(z, &n)| (z - Complex64::new(n as f64, 0.0)).norm())
        .fold(0.0, f64::max);
    let mut ok = dev <= 1e-6 && loop_dev <= 1e-6;
    let expected = match lambda_oracle(kind, m) {
        Some(want) => {
            ok &= want == ints;
            format_matrix(&want)
        }
        None => "integer, nonsingular, equal to the torus loop integrals".into(),
    };
    Ok(Check::new(name, expected, format_matrix(&ints), ok))
}

pub fn reproduce(g: &Globals, target: Target, out: Option<&Path>) -> Result<(), CliError> {
    let checks = match target {
        Target::Equations => REFERENCE_EQUATIONS
            .iter()
            .map(|&(kind, m, eq, v)| equation_check(kind, m, eq, eq, v))
            .collect::<Result<Vec<_>, _>>()?,
        Target::Sym3 => vec![equation_check(
            Kind::CholeskySym,
            3,
            "x*(x*w - y^2)*det(A)",
            &format!("x*(x*w - y^2)*({SYM3_DET})"),
            Verdict::Free,
        )?],
        Target::Lambda => Kind::ALL
            .into_iter()
            .flat_map(|k| (k.min_size().max(2)..=3).map(move |m| (k, m)))
            .map(|(k, m)| lambda_check(g, k, m))
            .collect::<Result<Vec<_>, _>>()?,
    };
    for c in &checks {
        eprintln!("{}: {} {}", c.name, c.found, c.status);
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let report = ReproduceReport {
        seed: g.seed,
        target: target.name().into(),
        passed: checks.len() - failed,
        failed,
        checks,
    };
    write_json(&report, out)?;
    if failed > 0 {
        return Err(CliError::Internal(format!(
            "{failed} reproduction checks failed"
        )));
    }
    Ok(())
}
