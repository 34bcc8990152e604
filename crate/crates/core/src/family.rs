//! Closed loops of matrices in the open orbit: winding vectors of the basic
//! invariants, the mod 2 obstruction, and continuous lifts of the
//! factorization by sign continuation.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::blockrep::{BlockError, Representation};
use crate::factor::{
    factor_with_tol, sign_pattern, FactorError, Factorization, DEFAULT_RESIDUAL_TOL,
};
use crate::matcore::{
    first_vanishing_minor, invariant_values, norm_inf, GroupElement, Kind, Mat, MatError,
    MinorFamily,
};
use crate::random;

/// Allowed distance of a winding number from the nearest integer.
pub const INTEGRALITY_TOL: f64 = 1e-6;
/// Upper bound on the sample count reached by adaptive refinement.
pub const MAX_SAMPLES: usize = 1 << 16;
/// Relative bound on `‖B_T − B_0‖∞` for a lift to count as closed.
pub const CLOSURE_TOL: f64 = 1e-6;
const CLOSED_LOOP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("a loop needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("last sample differs from the first by {gap:e}")]
    NotClosed { gap: f64 },
    #[error("sample {sample} has shape {rows}x{cols}, expected {exp_rows}x{exp_cols}")]
    Shape {
        sample: usize,
        rows: usize,
        cols: usize,
        exp_rows: usize,
        exp_cols: usize,
    },
    #[error("sample {sample} is outside the open orbit: {family} leading minor of order {index} vanishes")]
    PathHitsVariety {
        sample: usize,
        family: MinorFamily,
        index: usize,
    },
    #[error("invariant {invariant} turns by {delta:.3} rad between samples {step} and {}", step + 1)]
    SamplingTooCoarse {
        invariant: usize,
        step: usize,
        delta: f64,
    },
    #[error("winding of invariant {invariant} is {value}, not an integer")]
    NotIntegral { invariant: usize, value: f64 },
    #[error("loop is not liftable: windings {winding:?} are not all even")]
    NotLiftable { winding: Vec<i64> },
    #[error("lift does not close: ‖B_T − B_0‖ = {gap:e} exceeds {bound:e}")]
    ClosureFailed { gap: f64, bound: f64 },
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Block(#[from] BlockError),
}

/// Samples `A_0, …, A_T` of a closed loop, `A_T = A_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixLoop {
    kind: Kind,
    m: usize,
    samples: Vec<Mat>,
}

impl MatrixLoop {
    pub fn new(kind: Kind, m: usize, samples: Vec<Mat>) -> Result<Self, FamilyError> {
        let space = kind.space(m)?;
        if samples.len() < 2 {
            return Err(FamilyError::TooFewSamples(samples.len()));
        }
        for (s, a) in samples.iter().enumerate() {
            if a.shape() != (space.rows(), space.cols()) {
                return Err(FamilyError::Shape {
                    sample: s,
                    rows: a.nrows(),
                    cols: a.ncols(),
                    exp_rows: space.rows(),
                    exp_cols: space.cols(),
                });
            }
            if let Some(spec) = first_vanishing_minor(kind, a)? {
                return Err(FamilyError::PathHitsVariety {
                    sample: s,
                    family: spec.family,
                    index: spec.size,
                });
            }
        }
        let first = &samples[0];
        let gap = norm_inf(&(samples.last().unwrap() - first));
        if gap > CLOSED_LOOP_TOL * (1.0 + norm_inf(first)) {
            return Err(FamilyError::NotClosed { gap });
        }
        Ok(Self { kind, m, samples })
    }

    /// Samples `f(s/T)` for `s = 0..T` and closes the loop with `f(0)`.
    pub fn from_fn<F: Fn(f64) -> Mat>(
        kind: Kind,
        m: usize,
        steps: usize,
        f: F,
    ) -> Result<Self, FamilyError> {
        let mut samples: Vec<Mat> = (0..steps).map(|s| f(s as f64 / steps as f64)).collect();
        if let Some(a) = samples.first().cloned() {
            samples.push(a);
        }
        Self::new(kind, m, samples)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn samples(&self) -> &[Mat] {
        &self.samples
    }

    /// Number of steps `T`.
    pub fn steps(&self) -> usize {
        self.samples.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub winding: Vec<i64>,
    pub mod2: Vec<u8>,
}

impl Obstruction {
    pub fn from_winding(winding: Vec<i64>) -> Self {
        let mod2 = winding.iter().map(|n| n.rem_euclid(2) as u8).collect();
        Self { winding, mod2 }
    }

    pub fn is_trivial_mod2(&self) -> bool {
        self.mod2.iter().all(|&b| b == 0)
    }
}

/// Winding numbers of the basic invariants along the loop, from the sum of
/// principal argument increments.
pub fn winding_vector(lp: &MatrixLoop) -> Result<Obstruction, FamilyError> {
    let values: Vec<Vec<Complex64>> = lp
        .samples
        .iter()
        .map(|a| invariant_values(lp.kind, a))
        .collect::<Result<_, _>>()?;
    let k = values[0].len();
    let mut winding = Vec::with_capacity(k);
    for i in 0..k {
        let mut total = 0.0;
        for (step, pair) in values.windows(2).enumerate() {
            let delta = (pair[1][i] / pair[0][i]).arg();
            if delta.abs() >= PI / 2.0 {
                return Err(FamilyError::SamplingTooCoarse {
                    invariant: i + 1,
                    step,
                    delta,
                });
            }
            total += delta;
        }
        let turns = total / TAU;
        let n = turns.round();
        if (turns - n).abs() > INTEGRALITY_TOL {
            return Err(FamilyError::NotIntegral {
                invariant: i + 1,
                value: turns,
            });
        }
        winding.push(n as i64);
    }
    Ok(Obstruction::from_winding(winding))
}

/// Samples `f` on `initial` steps and doubles until the sampling resolves
/// every winding, up to [`MAX_SAMPLES`] steps.
pub fn sample_adaptively<F: Fn(f64) -> Mat>(
    kind: Kind,
    m: usize,
    initial: usize,
    f: F,
) -> Result<(MatrixLoop, Obstruction), FamilyError> {
    let mut steps = initial.max(2);
    loop {
        let lp = MatrixLoop::from_fn(kind, m, steps, &f)?;
        match winding_vector(&lp) {
            Ok(o) => return Ok((lp, o)),
            Err(FamilyError::SamplingTooCoarse { .. }) if steps < MAX_SAMPLES => steps *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Whether a continuous factorization exists along the loop. Only the
/// congruence cases have a finite isotropy group, and there the mod 2
/// winding class is the obstruction.
pub fn liftable(lp: &MatrixLoop) -> Result<(bool, Obstruction), FamilyError> {
    let o = winding_vector(lp)?;
    let ok = !lp.kind.has_finite_isotropy() || o.is_trivial_mod2();
    Ok((ok, o))
}

/// Factors every sample and, for the congruence cases, picks the sign
/// pattern closest to the previous factor. No closure check.
pub fn continue_factorizations(lp: &MatrixLoop) -> Result<Vec<Factorization>, FamilyError> {
    continue_factorizations_with_tol(lp, DEFAULT_RESIDUAL_TOL)
}

pub fn continue_factorizations_with_tol(
    lp: &MatrixLoop,
    tol: f64,
) -> Result<Vec<Factorization>, FamilyError> {
    let mut out: Vec<Factorization> = Vec::with_capacity(lp.samples.len());
    let blocks = match lp.kind {
        Kind::CholeskySym => lp.m,
        Kind::CholeskySkew => lp.m / 2,
        _ => 0,
    };
    for a in &lp.samples {
        let mut f = factor_with_tol(lp.kind, a, tol)?;
        if let Some(prev) = out.last() {
            if blocks > 0 {
                let best = (0..1u64 << blocks)
                    .map(|mask| {
                        let b = &f.b * sign_pattern(lp.kind, lp.m, mask);
                        let d = norm_inf(&(&b - &prev.b));
                        (d, b)
                    })
                    .min_by(|x, y| x.0.total_cmp(&y.0))
                    .expect("at least one sign pattern");
                f.b = best.1;
            }
        }
        out.push(f);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    pub factors: Vec<Factorization>,
    pub obstruction: Obstruction,
    /// `max ‖B_{s+1} − B_s‖∞ / Δt`.
    pub lipschitz: f64,
    pub closure_gap: f64,
}

/// A continuous closed family of factorizations, or the reason none exists.
pub fn lift_family(lp: &MatrixLoop) -> Result<Lift, FamilyError> {
    lift_family_with_tol(lp, DEFAULT_RESIDUAL_TOL)
}

pub fn lift_family_with_tol(lp: &MatrixLoop, tol: f64) -> Result<Lift, FamilyError> {
    let (ok, obstruction) = liftable(lp)?;
    if !ok {
        return Err(FamilyError::NotLiftable {
            winding: obstruction.winding,
        });
    }
    let factors = continue_factorizations_with_tol(lp, tol)?;
    let dt = 1.0 / lp.steps() as f64;
    let lipschitz = factors
        .windows(2)
        .map(|w| {
            let db = norm_inf(&(&w[1].b - &w[0].b));
            let dc = match (&w[0].c, &w[1].c) {
                (Some(c0), Some(c1)) => norm_inf(&(c1 - c0)),
                _ => 0.0,
            };
            db.max(dc) / dt
        })
        .fold(0.0, f64::max);
    let b0 = &factors[0].b;
    let closure_gap = norm_inf(&(&factors.last().unwrap().b - b0));
    let bound = CLOSURE_TOL * (1.0 + norm_inf(b0));
    if closure_gap.is_nan() || closure_gap > bound {
        return Err(FamilyError::ClosureFailed {
            gap: closure_gap,
            bound,
        });
    }
    Ok(Lift {
        factors,
        obstruction,
        lipschitz,
        closure_gap,
    })
}

/// Group-valued loop `t ↦ D(t)·U(t)`: a torus part winding `windings[j]`
/// times around torus generator `j`, times a unipotent part whose
/// coordinates are random trigonometric polynomials in `t`.
pub fn group_loop<R: Rng + ?Sized>(
    kind: Kind,
    m: usize,
    windings: &[i64],
    rng: &mut R,
) -> Result<impl Fn(f64) -> GroupElement, FamilyError> {
    let rep = Representation::new(kind, m)?;
    let torus = rep.torus();
    if windings.len() != torus.len() {
        return Err(FamilyError::Matrix(MatError::InvalidSize { kind, m }));
    }
    let others: Vec<(usize, Complex64, Complex64)> = (0..rep.dim())
        .filter(|j| !torus.contains(j))
        .map(|j| (j, random::complex(rng) * 0.5, random::complex(rng) * 0.5))
        .collect();
    let windings = windings.to_vec();
    Ok(move |t: f64| {
        let (s, c) = (TAU * t).sin_cos();
        let mut g = GroupElement::identity(kind, m).expect("size validated");
        for &(j, a, b) in &others {
            let coef = a * s + b * (c - 1.0);
            g = rep
                .exp(j, coef)
                .expect("unipotent generator")
                .compose(&g)
                .expect("same group");
        }
        for (slot, &j) in torus.iter().enumerate() {
            let z = Complex64::new(0.0, TAU * t * windings[slot] as f64);
            g = rep
                .exp(j, z)
                .expect("torus generator")
                .compose(&g)
                .expect("same group");
        }
        g
    })
}
