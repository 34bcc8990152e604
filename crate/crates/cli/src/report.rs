//! Serializable report types. Field order is the output order.

use detarr_core::blockrep::{ExceptionalFactored, Verdict};
use detarr_core::family::Obstruction;
use detarr_core::matcore::{Kind, MatrixJson, MinorFamily};
use detarr_core::poly::Polynomial;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub fn complex(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
pub struct Term {
    pub coefficient: String,
    pub exponents: Vec<u32>,
}

#[derive(Serialize)]
pub struct PolyJson {
    pub text: String,
    pub terms: Vec<Term>,
}

impl PolyJson {
    pub fn new(p: &Polynomial, names: &[String]) -> Self {
        Self {
            text: p.to_string_with(names),
            terms: p
                .terms()
                .map(|(m, c)| Term {
                    coefficient: c.to_string(),
                    exponents: m.exponents().to_vec(),
                })
                .collect(),
        }
    }
}

/// `p_1*(p_2)*(p_3)^2`: the factors that occur by ascending degree,
/// parenthesized when they have more than one term.
pub fn factored(e: &ExceptionalFactored, names: &[String], with_exponents: bool) -> String {
    let mut present: Vec<_> = e.factors.iter().filter(|(_, k)| *k > 0).collect();
    present.sort_by_key(|(f, _)| f.poly.degree());
    present
        .into_iter()
        .map(|(f, k)| {
            let s = f.poly.to_string_with(names);
            let base = if f.poly.num_terms() > 1 {
                format!("({s})")
            } else {
                s
            };
            if with_exponents && *k > 1 {
                format!("{base}^{k}")
            } else {
                base
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

#[derive(Serialize)]
pub struct MinorJson {
    pub family: MinorFamily,
    pub size: usize,
    pub value: [f64; 2],
}

#[derive(Serialize)]
pub struct FactorReport {
    pub seed: u64,
    pub kind: Kind,
    pub m: usize,
    pub residual: f64,
    pub condition: f64,
    pub minor_profile: Vec<MinorJson>,
    pub b: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<MatrixJson>,
    pub k: MatrixJson,
}

#[derive(Serialize)]
pub struct FactorEntry {
    pub label: String,
    pub polynomial: String,
    pub multiplicity: u32,
}

#[derive(Serialize)]
pub struct BlockJson {
    pub level: usize,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub p: String,
}

#[derive(Serialize)]
pub struct FiltrationReport {
    pub source: &'static str,
    pub levels: Vec<Vec<String>>,
    pub blocks: Vec<BlockJson>,
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub seed: u64,
    pub rep: Kind,
    pub m: usize,
    pub space: String,
    pub group: String,
    pub dimension: usize,
    pub coordinates: Vec<String>,
    pub generators: Vec<String>,
    pub determinant: PolyJson,
    pub constant: String,
    pub factored: String,
    pub factors: Vec<FactorEntry>,
    pub equation: String,
    pub verdict: Verdict,
    pub filtration: FiltrationReport,
}

#[derive(Serialize)]
pub struct InvariantEntry {
    pub label: String,
    pub polynomial: String,
    pub degree: u32,
}

#[derive(Serialize)]
pub struct LambdaJson {
    pub torus: Vec<String>,
    pub entries: Vec<Vec<i64>>,
    pub max_rounding_error: f64,
    pub min_singular_value: f64,
}

#[derive(Serialize)]
pub struct FiberJson {
    pub trials: usize,
    pub tangents_per_trial: usize,
    pub max_residual: f64,
    pub min_control: f64,
}

#[derive(Serialize)]
pub struct CohomologyReport {
    pub seed: u64,
    pub rep: Kind,
    pub m: usize,
    pub space: String,
    pub equation: String,
    pub invariants: Vec<InvariantEntry>,
    pub lambda: LambdaJson,
    pub integral_grid: Vec<Vec<[f64; 2]>>,
    pub fiber: FiberJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopInput {
    pub kind: Kind,
    pub samples: Vec<MatrixJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationInput {
    pub levels: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct LiftedSample {
    pub b: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<MatrixJson>,
    pub residual: f64,
}

#[derive(Serialize)]
pub struct LiftReport {
    pub seed: u64,
    pub kind: Kind,
    pub m: usize,
    pub steps: usize,
    pub obstruction: Obstruction,
    pub liftable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<LiftedSample>>,
}

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub found: String,
    pub status: &'static str,
}

impl Check {
    pub fn new(name: String, expected: String, found: String, ok: bool) -> Self {
        Self {
            name,
            expected,
            found,
            status: if ok { "PASS" } else { "FAIL" },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "PASS"
    }
}

#[derive(Serialize)]
pub struct ReproduceReport {
    pub seed: u64,
    pub target: String,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}
