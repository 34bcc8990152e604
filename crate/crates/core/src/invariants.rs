//! Basic relative invariants, their characters, the infinitesimal character
//! matrix `Λ`, torus loop integrals and the Milnor fiber relation.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::blockrep::{expected_factors, BlockError, Factor, Representation};
use crate::matcore::{act, minor_is_nonzero, norm_inf, MatError, Point};
use crate::poly::{PolyError, Polynomial};
use crate::random;

/// Relative spread allowed for quantities that should be constant.
pub const CONSTANCY_TOL: f64 = 1e-8;
/// Minimum number of samples on a torus loop.
pub const MIN_LOOP_SAMPLES: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("f(g·v)/f(v) varies with v for group sample {trial}: relative spread {spread:e}")]
    InvarianceViolated { trial: usize, spread: f64 },
    #[error("infinitesimal character of invariant {invariant} is not constant: relative spread {spread:e}")]
    NotConstant { invariant: usize, spread: f64 },
    #[error("Λ is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("Λ is singular: smallest singular value {sigma:e}")]
    SingularLambda { sigma: f64 },
    #[error("torus loop {loop_index} meets the zero set of invariant {invariant} at t = {t}")]
    PathHitsVariety {
        loop_index: usize,
        invariant: usize,
        t: f64,
    },
    #[error("fiber relation violated at trial {trial}: normalized residual {residual:e}")]
    RelationViolated { trial: usize, residual: f64 },
    #[error("normal direction passed the fiber relation at trial {trial}")]
    ControlNotDetected { trial: usize },
    #[error("invariant index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// A basic relative invariant with its cached gradient.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeInvariant {
    pub factor: Factor,
    pub grad: Vec<Polynomial>,
}

impl RelativeInvariant {
    pub fn new(factor: Factor) -> Self {
        let grad = factor.poly.grad();
        Self { factor, grad }
    }

    pub fn poly(&self) -> &Polynomial {
        &self.factor.poly
    }

    pub fn degree(&self) -> u32 {
        self.factor.poly.degree().unwrap_or(0)
    }

    pub fn eval(&self, v: &[Complex64]) -> Result<Complex64, PolyError> {
        self.factor.poly.eval(v)
    }

    pub fn eval_grad(&self, v: &[Complex64]) -> Result<Vec<Complex64>, PolyError> {
        self.grad.iter().map(|g| g.eval(v)).collect()
    }

    /// `(df/f)(u)` at `v`.
    pub fn log_derivative(&self, v: &[Complex64], u: &[Complex64]) -> Result<Complex64, PolyError> {
        let g = self.eval_grad(v)?;
        let d: Complex64 = g.iter().zip(u).map(|(a, b)| a * b).sum();
        Ok(d / self.eval(v)?)
    }
}

/// The basic relative invariants: plain minors then hat minors (leading
/// Pfaffians for skew), one per rank of the group.
pub fn basic_invariants(rep: &Representation) -> Result<Vec<RelativeInvariant>, InvariantError> {
    Ok(expected_factors(rep.kind(), rep.size())?
        .into_iter()
        .map(RelativeInvariant::new)
        .collect())
}

fn relative_spread(values: &[Complex64]) -> f64 {
    let mean: Complex64 = values.iter().sum::<Complex64>() / values.len() as f64;
    let dev = values.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
    dev / mean.norm().max(f64::MIN_POSITIVE)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    /// The character value `χ(g)` for each sampled group element.
    pub ratios: Vec<Complex64>,
    pub max_spread: f64,
}

const POINTS_PER_GROUP: usize = 20;

/// Checks `f(g·v) = χ(g) f(v)`: for each of `trials` random `g`, the ratio
/// over 20 random orbit points must be constant.
pub fn verify_relative_invariance(
    rep: &Representation,
    f: &Polynomial,
    trials: usize,
    seed: u64,
) -> Result<InvarianceReport, InvariantError> {
    let mut rng = random::rng(seed, 0x696e_7661);
    let mut ratios = Vec::with_capacity(trials);
    let mut max_spread: f64 = 0.0;
    for trial in 0..trials {
        let g = random::group_element(rep.kind(), rep.size(), &mut rng);
        let mut r = Vec::with_capacity(POINTS_PER_GROUP);
        for _ in 0..POINTS_PER_GROUP {
            let v = random::orbit_point(rep.kind(), rep.size(), &mut rng);
            let fv = f.eval(v.coords())?;
            let gv = act(&g, &v)?;
            r.push(f.eval(gv.coords())? / fv);
        }
        let spread = relative_spread(&r);
        if spread.is_nan() || spread > CONSTANCY_TOL {
            return Err(InvariantError::InvarianceViolated { trial, spread });
        }
        max_spread = max_spread.max(spread);
        ratios.push(r.iter().sum::<Complex64>() / r.len() as f64);
    }
    Ok(InvarianceReport { ratios, max_spread })
}

fn field_coords(rep: &Representation, j: usize, v: &Point) -> Result<Vec<Complex64>, MatError> {
    rep.space()
        .coords_unchecked(&rep.vector_field(j, &v.matrix()))
}

/// `λ_j = df(ξ_{w_j}) / f` for each torus generator `w_j`, checked to be
/// constant over 20 random orbit points.
pub fn infinitesimal_character(
    rep: &Representation,
    f: &RelativeInvariant,
    index: usize,
    seed: u64,
) -> Result<Vec<Complex64>, InvariantError> {
    let mut rng = random::rng(seed, 0x6c61_6d62 + index as u64);
    let torus = rep.torus();
    let mut samples: Vec<Vec<Complex64>> = vec![Vec::new(); torus.len()];
    for _ in 0..POINTS_PER_GROUP {
        let v = random::orbit_point(rep.kind(), rep.size(), &mut rng);
        for (slot, &j) in torus.iter().enumerate() {
            let u = field_coords(rep, j, &v)?;
            samples[slot].push(f.log_derivative(v.coords(), &u)?);
        }
    }
    let mut out = Vec::with_capacity(torus.len());
    for s in samples {
        let mean = s.iter().sum::<Complex64>() / s.len() as f64;
        let dev = s.iter().map(|z| (z - mean).norm()).fold(0.0, f64::max);
        let spread = dev / (1.0 + mean.norm());
        if spread.is_nan() || spread > CONSTANCY_TOL {
            return Err(InvariantError::NotConstant {
                invariant: index + 1,
                spread,
            });
        }
        out.push(mean);
    }
    Ok(out)
}

/// `Λ = (λ_j^(i))`, rows indexed by invariants, columns by torus generators.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaMatrix {
    pub entries: Vec<Vec<Complex64>>,
    pub torus_labels: Vec<String>,
    pub min_singular_value: f64,
}

impl LambdaMatrix {
    /// Entries rounded to the nearest integer, with the largest rounding
    /// distance.
    pub fn rounded(&self) -> (Vec<Vec<i64>>, f64) {
        let mut err: f64 = 0.0;
        let r = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|z| {
                        let n = z.re.round();
                        err = err.max((z - Complex64::new(n, 0.0)).norm());
                        n as i64
                    })
                    .collect()
            })
            .collect();
        (r, err)
    }

    pub fn to_matrix(&self) -> crate::matcore::Mat {
        let k = self.entries.len();
        let c = self.entries.first().map_or(0, Vec::len);
        crate::matcore::Mat::from_fn(k, c, |i, j| self.entries[i][j])
    }
}

pub fn lambda_matrix(rep: &Representation, seed: u64) -> Result<LambdaMatrix, InvariantError> {
    let invs = basic_invariants(rep)?;
    let entries = invs
        .iter()
        .enumerate()
        .map(|(i, f)| infinitesimal_character(rep, f, i, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let torus = rep.torus();
    if entries.len() != torus.len() {
        return Err(InvariantError::NotSquare {
            rows: entries.len(),
            cols: torus.len(),
        });
    }
    let mut lm = LambdaMatrix {
        entries,
        torus_labels: torus.iter().map(|&j| rep.generators()[j].label()).collect(),
        min_singular_value: 0.0,
    };
    let sv = lm.to_matrix().singular_values();
    let max = sv.max();
    let min = sv.min();
    lm.min_singular_value = min;
    if min.is_nan() || min <= CONSTANCY_TOL * max.max(1.0) {
        return Err(InvariantError::SingularLambda { sigma: min });
    }
    Ok(lm)
}

/// `(1/2πi) ∮ df_i/f_i` over `δ_j(t) = exp(2πi t w_j)·K`, by the trapezoid
/// rule on `samples` points. Indices are 1-based.
pub fn torus_loop_integral(
    rep: &Representation,
    i: usize,
    j: usize,
    samples: usize,
) -> Result<Complex64, InvariantError> {
    let invs = basic_invariants(rep)?;
    let torus = rep.torus();
    let f = invs
        .get(i.wrapping_sub(1))
        .ok_or(InvariantError::IndexOutOfRange {
            index: i,
            max: invs.len(),
        })?;
    let &gen = torus
        .get(j.wrapping_sub(1))
        .ok_or(InvariantError::IndexOutOfRange {
            index: j,
            max: torus.len(),
        })?;
    loop_integral(rep, f, i, gen, j, samples)
}

fn loop_integral(
    rep: &Representation,
    f: &RelativeInvariant,
    i: usize,
    gen: usize,
    j: usize,
    samples: usize,
) -> Result<Complex64, InvariantError> {
    let samples = samples.max(MIN_LOOP_SAMPLES);
    let k = rep.kind().structure_matrix(rep.size())?;
    let v0 = Point::new(rep.space().clone(), rep.space().coords_unchecked(&k)?)?;
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let mut sum = Complex64::new(0.0, 0.0);
    for s in 0..samples {
        let t = s as f64 / samples as f64;
        let g = rep.exp(gen, two_pi_i * t)?;
        let v = act(&g, &v0)?;
        let fv = f.eval(v.coords())?;
        let scale = norm_inf(&v.matrix());
        if !minor_is_nonzero(fv, scale, f.degree() as usize) {
            return Err(InvariantError::PathHitsVariety {
                loop_index: j,
                invariant: i,
                t,
            });
        }
        let dv: Vec<Complex64> = field_coords(rep, gen, &v)?
            .into_iter()
            .map(|z| z * two_pi_i)
            .collect();
        sum += f.log_derivative(v.coords(), &dv)?;
    }
    // periodic integrand: the trapezoid rule is the plain mean
    Ok(sum / samples as f64 / two_pi_i)
}

/// All loop integrals, rows indexed by invariants and columns by loops.
pub fn integral_grid(
    rep: &Representation,
    samples: usize,
) -> Result<Vec<Vec<Complex64>>, InvariantError> {
    let invs = basic_invariants(rep)?;
    let torus = rep.torus();
    invs.iter()
        .enumerate()
        .map(|(i, f)| {
            torus
                .iter()
                .enumerate()
                .map(|(j, &gen)| loop_integral(rep, f, i + 1, gen, j + 1, samples))
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberReport {
    pub trials: usize,
    pub tangents_per_trial: usize,
    /// Largest `|Σ ω_i(u)| / (‖u‖ · max_i ‖∇f_i/f_i‖)` over tangent `u`.
    pub max_residual: f64,
    /// Smallest normalized value along the normal control direction.
    pub min_control: f64,
}

const TANGENTS_PER_TRIAL: usize = 10;

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// On the fiber `h = ∏ f_i = 1`, checks `Σ df_i/f_i = 0` along random
/// tangent vectors and that the normal direction `conj(∇h)` violates it.
pub fn fiber_relation_check(
    rep: &Representation,
    trials: usize,
    seed: u64,
) -> Result<FiberReport, InvariantError> {
    let invs = basic_invariants(rep)?;
    let n = rep.dim();
    let h = invs
        .iter()
        .fold(Polynomial::one(n), |acc, f| &acc * f.poly());
    let deg = h.degree().unwrap_or(0) as f64;
    let h_grad = h.grad();
    let mut rng = random::rng(seed, 0x6669_6272);
    let mut max_residual: f64 = 0.0;
    let mut min_control = f64::INFINITY;
    for trial in 0..trials {
        let p = random::orbit_point(rep.kind(), rep.size(), &mut rng);
        let hv = h.eval(p.coords())?;
        let c = (Complex64::new(1.0, 0.0) / hv).powf(1.0 / deg);
        let v: Vec<Complex64> = p.coords().iter().map(|z| z * c).collect();
        let g: Vec<Complex64> = h_grad
            .iter()
            .map(|d| d.eval(&v))
            .collect::<Result<_, _>>()?;
        let g2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        let scale = invs
            .iter()
            .map(|f| {
                let fv = f.eval(&v)?;
                Ok(norm(&f.eval_grad(&v)?) / fv.norm())
            })
            .collect::<Result<Vec<f64>, PolyError>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let relation = |u: &[Complex64]| -> Result<f64, PolyError> {
            let mut s = Complex64::new(0.0, 0.0);
            for f in &invs {
                s += f.log_derivative(&v, u)?;
            }
            Ok(s.norm() / (norm(u) * scale))
        };
        for _ in 0..TANGENTS_PER_TRIAL {
            let r: Vec<Complex64> = (0..n).map(|_| random::complex(&mut rng)).collect();
            let gr: Complex64 = g.iter().zip(&r).map(|(a, b)| a * b).sum();
            let u: Vec<Complex64> = r
                .iter()
                .zip(&g)
                .map(|(ri, gi)| ri - gr * gi.conj() / g2)
                .collect();
            // on a one-dimensional space the fiber is a point
            if norm(&u) <= 1e-12 * norm(&r) {
                continue;
            }
            let res = relation(&u)?;
            if res.is_nan() || res > CONSTANCY_TOL {
                return Err(InvariantError::RelationViolated {
                    trial,
                    residual: res,
                });
            }
            max_residual = max_residual.max(res);
        }
        let normal: Vec<Complex64> = g.iter().map(|z| z.conj()).collect();
        let ctl = relation(&normal)?;
        if ctl <= CONSTANCY_TOL {
            return Err(InvariantError::ControlNotDetected { trial });
        }
        min_control = min_control.min(ctl);
    }
    Ok(FiberReport {
        trials,
        tangents_per_trial: TANGENTS_PER_TRIAL,
        max_residual,
        min_control,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::Kind;

    fn rep(kind: Kind, m: usize) -> Representation {
        Representation::new(kind, m).unwrap()
    }

    fn assert_int_matrix(l: &LambdaMatrix, expect: &[&[i64]]) {
        let (r, err) = l.rounded();
        assert!(err < 1e-8, "rounding error {err}");
        let e: Vec<Vec<i64>> = expect.iter().map(|r| r.to_vec()).collect();
        assert_eq!(r, e);
    }

    #[test]
    fn sym2_lambda() {
        let l = lambda_matrix(&rep(Kind::CholeskySym, 2), 1).unwrap();
        assert_int_matrix(&l, &[&[2, 0], &[2, 2]]);
    }

    #[test]
    fn sym3_lambda_is_lower_triangular_twos() {
        let l = lambda_matrix(&rep(Kind::CholeskySym, 3), 1).unwrap();
        assert_int_matrix(&l, &[&[2, 0, 0], &[2, 2, 0], &[2, 2, 2]]);
    }

    #[test]
    fn lu2_lambda() {
        let l = lambda_matrix(&rep(Kind::Lu, 2), 1).unwrap();
        assert_int_matrix(&l, &[&[1, 0], &[1, 1]]);
    }

    #[test]
    fn modified_right_torus_gives_negative_entries() {
        let l = lambda_matrix(&rep(Kind::ModifiedLu, 2), 1).unwrap();
        // invariants x, xw - yz, y; torus E11, E22, E22 (right)
        assert_int_matrix(&l, &[&[1, 0, 0], &[1, 1, -1], &[1, 0, -1]]);
    }

    #[test]
    fn sym3_invariants() {
        let r = rep(Kind::CholeskySym, 3);
        let names = r.space().var_names();
        let inv = basic_invariants(&r).unwrap();
        assert_eq!(inv.len(), 3);
        assert_eq!(inv[0].poly().to_string_with(&names), "x");
        assert_eq!(inv[1].poly().to_string_with(&names), "x*w - y^2");
    }

    #[test]
    fn character_examples() {
        let r = rep(Kind::CholeskySym, 2);
        let names = r.space().var_names();
        let x = Polynomial::parse("x", &names).unwrap();
        verify_relative_invariance(&r, &x, 3, 1).unwrap();
        let bad = Polynomial::parse("x + z", &names).unwrap();
        assert!(matches!(
            verify_relative_invariance(&r, &bad, 3, 1),
            Err(InvariantError::InvarianceViolated { .. })
        ));
    }

    #[test]
    fn diagonal_character_is_square() {
        use crate::matcore::{GroupElement, Mat};
        let r = rep(Kind::CholeskySym, 2);
        let names = r.space().var_names();
        let x = Polynomial::parse("x", &names).unwrap();
        let (b1, b2) = (Complex64::new(1.5, 0.5), Complex64::new(-0.3, 2.0));
        let mut d = Mat::zeros(2, 2);
        d[(0, 0)] = b1;
        d[(1, 1)] = b2;
        let g = GroupElement::new(Kind::CholeskySym, 2, d, None).unwrap();
        let mut rng = random::rng(9, 0);
        for _ in 0..5 {
            let v = random::orbit_point(Kind::CholeskySym, 2, &mut rng);
            let ratio =
                x.eval(act(&g, &v).unwrap().coords()).unwrap() / x.eval(v.coords()).unwrap();
            assert!((ratio - b1 * b1).norm() < 1e-12);
        }
    }

    #[test]
    fn loops_reproduce_lambda() {
        for (kind, m) in [
            (Kind::CholeskySym, 2),
            (Kind::CholeskySkew, 4),
            (Kind::ModifiedRect, 3),
        ] {
            let r = rep(kind, m);
            let l = lambda_matrix(&r, 4).unwrap();
            let grid = integral_grid(&r, 256).unwrap();
            for (i, row) in grid.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    assert!((v - l.entries[i][j]).norm() < 1e-6, "{kind} ({i},{j})");
                }
            }
        }
        let r = rep(Kind::CholeskySym, 2);
        assert!(torus_loop_integral(&r, 1, 2, 256).unwrap().norm() < 1e-6);
        assert!(torus_loop_integral(&r, 3, 1, 256).is_err());
    }

    #[test]
    fn fiber_relation_holds_and_discriminates() {
        for kind in Kind::ALL {
            let m = kind.min_size().max(3);
            let f = fiber_relation_check(&rep(kind, m), 10, 5).unwrap();
            assert!(f.max_residual <= CONSTANCY_TOL);
            assert!(f.min_control > CONSTANCY_TOL);
        }
    }
}
