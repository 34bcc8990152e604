use std::path::Path;

use detarr_core::blockrep::{
    default_filtration, exceptional_equation, verify_block_structure, Filtration, Representation,
};
use detarr_core::factor::factor_with_tol;
use detarr_core::family::{lift_family_with_tol, liftable, MatrixLoop};
use detarr_core::invariants::{
    basic_invariants, fiber_relation_check, integral_grid, lambda_matrix,
};
use detarr_core::matcore::{Kind, Mat, MatError, MatrixJson};
use detarr_core::poly::MAX_DET_SIZE;

use crate::error::CliError;
use crate::io::{read_json, write_json};
use crate::report::{
    complex, factored, AnalyzeReport, BlockJson, CohomologyReport, FactorEntry, FactorReport,
    FiberJson, FiltrationInput, FiltrationReport, InvariantEntry, LambdaJson, LiftReport,
    LiftedSample, LoopInput, MinorJson, PolyJson,
};

/// Largest size accepted by `cohomology`; the invariants are expanded
/// symbolically.
const MAX_COHOMOLOGY_SIZE: usize = 6;
const FIBER_TRIALS: usize = 50;
const LOOP_SAMPLES: usize = 256;

pub struct Globals {
    pub seed: u64,
    pub tol: f64,
}

fn input_matrix(kind: Kind, json: &MatrixJson) -> Result<(usize, Mat), CliError> {
    let space = json.space()?;
    let m = kind
        .size_for(&space)
        .ok_or_else(|| MatError::Incompatible {
            group: kind,
            space: space.label(),
        })?;
    Ok((m, json.to_point()?.matrix()))
}

pub fn factor(g: &Globals, kind: Kind, input: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let json: MatrixJson = read_json(input)?;
    let (m, a) = input_matrix(kind, &json)?;
    let f = factor_with_tol(kind, &a, g.tol)?;
    let minor_profile = kind
        .required_minors(m)
        .into_iter()
        .zip(&f.minors)
        .map(|(spec, &v)| MinorJson {
            family: spec.family,
            size: spec.size,
            value: complex(v),
        })
        .collect();
    let report = FactorReport {
        seed: g.seed,
        kind,
        m,
        residual: f.residual,
        condition: f.condition,
        minor_profile,
        b: MatrixJson::from_dense(&f.b),
        c: f.c.as_ref().map(MatrixJson::from_dense),
        k: MatrixJson::from_dense(&f.k),
    };
    write_json(&report, out)
}

pub fn analyze(
    g: &Globals,
    kind: Kind,
    m: usize,
    filtration: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let dim = kind.space(m)?.dim();
    if dim > MAX_DET_SIZE {
        return Err(CliError::Usage(format!(
            "{kind} with m = {m} has dimension {dim}; symbolic analysis supports at most {MAX_DET_SIZE}"
        )));
    }
    let rep = Representation::new(kind, m)?;
    let names = rep.space().var_names();
    let (filt, source) = match filtration {
        Some(path) => {
            let input: FiltrationInput = read_json(path)?;
            (Filtration::from_names(&input.levels, &names)?, "file")
        }
        None => (default_filtration(kind, m)?, "default"),
    };
    let e = exceptional_equation(&rep)?;
    let blocks = verify_block_structure(&rep, &filt, g.seed)?;
    if !blocks.product_matches() {
        return Err(CliError::Internal(
            "product of diagonal blocks differs from the coefficient determinant".into(),
        ));
    }
    let labels: Vec<String> = rep.generators().iter().map(|x| x.label()).collect();
    let report = AnalyzeReport {
        seed: g.seed,
        rep: kind,
        m,
        space: rep.space().label(),
        group: kind.group_label(m),
        dimension: rep.dim(),
        coordinates: names.clone(),
        generators: labels.clone(),
        determinant: PolyJson::new(&e.determinant, &names),
        constant: e.constant.to_string(),
        factored: if e.constant.is_one() {
            factored(&e, &names, true)
        } else {
            format!("{}*{}", e.constant, factored(&e, &names, true))
        },
        factors: e
            .factors
            .iter()
            .map(|(f, k)| FactorEntry {
                label: f.label(),
                polynomial: f.poly.to_string_with(&names),
                multiplicity: *k,
            })
            .collect(),
        equation: factored(&e, &names, false),
        verdict: e.verdict,
        filtration: FiltrationReport {
            source,
            levels: (0..filt.len())
                .map(|j| filt.level(j).iter().map(|&c| names[c].clone()).collect())
                .collect(),
            blocks: blocks
                .blocks
                .iter()
                .map(|b| BlockJson {
                    level: b.level,
                    rows: b.rows.iter().map(|&r| names[r].clone()).collect(),
                    cols: b.cols.iter().map(|&c| labels[c].clone()).collect(),
                    p: b.p.to_string_with(&names),
                })
                .collect(),
        },
    };
    write_json(&report, out)
}

pub fn cohomology(g: &Globals, kind: Kind, m: usize, out: Option<&Path>) -> Result<(), CliError> {
    kind.check_size(m)?;
    if m > MAX_COHOMOLOGY_SIZE {
        return Err(CliError::Usage(format!(
            "cohomology supports m <= {MAX_COHOMOLOGY_SIZE}, got {m}"
        )));
    }
    let rep = Representation::new(kind, m)?;
    let names = rep.space().var_names();
    let invs = basic_invariants(&rep)?;
    let lm = lambda_matrix(&rep, g.seed)?;
    let (entries, max_rounding_error) = lm.rounded();
    let grid = integral_grid(&rep, LOOP_SAMPLES)?;
    let fiber = fiber_relation_check(&rep, FIBER_TRIALS, g.seed)?;
    let equation = invs
        .iter()
        .map(|f| {
            let s = f.poly().to_string_with(&names);
            if f.poly().num_terms() > 1 {
                format!("({s})")
            } else {
                s
            }
        })
        .collect::<Vec<_>>()
        .join("*");
    let report = CohomologyReport {
        seed: g.seed,
        rep: kind,
        m,
        space: rep.space().label(),
        equation,
        invariants: invs
            .iter()
            .map(|f| InvariantEntry {
                label: f.factor.label(),
                polynomial: f.poly().to_string_with(&names),
                degree: f.degree(),
            })
            .collect(),
        lambda: LambdaJson {
            torus: lm.torus_labels.clone(),
            entries,
            max_rounding_error,
            min_singular_value: lm.min_singular_value,
        },
        integral_grid: grid
            .iter()
            .map(|row| row.iter().map(|&z| complex(z)).collect())
            .collect(),
        fiber: FiberJson {
            trials: fiber.trials,
            tangents_per_trial: fiber.tangents_per_trial,
            max_residual: fiber.max_residual,
            min_control: fiber.min_control,
        },
    };
    write_json(&report, out)
}

pub fn lift(g: &Globals, input: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let json: LoopInput = read_json(input)?;
    let kind = json.kind;
    let first = json
        .samples
        .first()
        .ok_or_else(|| CliError::Input("loop has no samples".into()))?;
    let (m, _) = input_matrix(kind, first)?;
    let samples = json
        .samples
        .iter()
        .enumerate()
        .map(|(s, x)| match input_matrix(kind, x) {
            Ok((ms, a)) if ms == m => Ok(a),
            Ok(_) => Err(CliError::Input(format!("sample {s} has a different size"))),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let lp = MatrixLoop::new(kind, m, samples)?;
    let (ok, obstruction) = liftable(&lp)?;
    let mut report = LiftReport {
        seed: g.seed,
        kind,
        m,
        steps: lp.steps(),
        obstruction,
        liftable: ok,
        lipschitz: None,
        closure_gap: None,
        factors: None,
    };
    if !ok {
        write_json(&report, out)?;
        return Err(CliError::Negative(format!(
            "loop is not liftable: windings {:?} are not all even",
            report.obstruction.winding
        )));
    }
    let lift = lift_family_with_tol(&lp, g.tol)?;
    report.lipschitz = Some(lift.lipschitz);
    report.closure_gap = Some(lift.closure_gap);
    report.factors = Some(
        lift.factors
            .iter()
            .map(|f| LiftedSample {
                b: MatrixJson::from_dense(&f.b),
                c: f.c.as_ref().map(MatrixJson::from_dense),
                residual: f.residual,
            })
            .collect(),
    );
    write_json(&report, out)
}
