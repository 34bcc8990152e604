//! The five Cholesky-type factorizations `A = B·K·C`.
//!
//! Nothing pivots: the factors are exactly the group element carrying the
//! structure matrix `K` to `A`, and the defining minors are the pivots.

use num_complex::Complex64;
use thiserror::Error;

use crate::matcore::{
    first_vanishing_minor, minor_profile, norm_inf, principal_sqrt, GroupElement, Kind, Mat,
    MatError, MinorFamily,
};

/// Default relative residual bound: `‖A − BKC‖∞ ≤ tol · (1 + ‖A‖∞)`.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorError {
    #[error("matrix is outside the open orbit: {family} leading minor of order {index} vanishes")]
    NotInOpenOrbit { family: MinorFamily, index: usize },
    #[error("reconstruction residual {residual:e} exceeds {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },
    #[error(transparent)]
    Matrix(#[from] MatError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub kind: Kind,
    pub m: usize,
    pub b: Mat,
    pub c: Option<Mat>,
    pub k: Mat,
    pub residual: f64,
    /// The defining minors of `A` in checking order.
    pub minors: Vec<Complex64>,
    /// `min_k |minor_k| / (1 + ‖A‖∞^k)`.
    pub condition: f64,
}

impl Factorization {
    pub fn reconstruct(&self) -> Mat {
        match &self.c {
            Some(c) => &self.b * &self.k * c,
            None => &self.b * &self.k * self.b.transpose(),
        }
    }

    /// The group element `g` with `g · K = A`: `B`, or `(B, C⁻¹)`.
    pub fn orbit_element(&self) -> Result<GroupElement, MatError> {
        let right = match &self.c {
            Some(c) => Some(
                c.clone()
                    .try_inverse()
                    .ok_or_else(|| MatError::NotInGroup {
                        kind: self.kind,
                        reason: "right factor is singular".into(),
                    })?,
            ),
            None => None,
        };
        GroupElement::new(self.kind, self.m, self.b.clone(), right)
    }
}

pub fn structure_matrix(kind: Kind, m: usize) -> Result<Mat, MatError> {
    kind.structure_matrix(m)
}

/// Isotropy element of `K` for the congruence cases: `diag(±1)` for
/// symmetric, `±I` per 2×2 block (trailing 1 for odd `m`) for skew. Bit `j`
/// of `mask` flips the sign of block `j`.
pub fn sign_pattern(kind: Kind, m: usize, mask: u64) -> Mat {
    let mut d = Mat::identity(m, m);
    let flip = |j: usize| mask >> j & 1 == 1;
    match kind {
        Kind::CholeskySym => {
            for j in 0..m {
                if flip(j) {
                    d[(j, j)] = -d[(j, j)];
                }
            }
        }
        Kind::CholeskySkew => {
            for j in 0..m / 2 {
                if flip(j) {
                    d[(2 * j, 2 * j)] = -d[(2 * j, 2 * j)];
                    d[(2 * j + 1, 2 * j + 1)] = -d[(2 * j + 1, 2 * j + 1)];
                }
            }
        }
        _ => {}
    }
    d
}

pub fn factor(kind: Kind, a: &Mat) -> Result<Factorization, FactorError> {
    factor_with_tol(kind, a, DEFAULT_RESIDUAL_TOL)
}

pub fn factor_with_tol(kind: Kind, a: &Mat, tol: f64) -> Result<Factorization, FactorError> {
    if let Some(spec) = first_vanishing_minor(kind, a)? {
        return Err(FactorError::NotInOpenOrbit {
            family: spec.family,
            index: spec.size,
        });
    }
    let m = match kind {
        Kind::ModifiedRect => a.ncols(),
        _ => a.nrows(),
    };
    let (b, c) = match kind {
        Kind::CholeskySym => (sym(a), None),
        Kind::Lu => {
            let (b, c) = crout(a);
            (b, Some(c))
        }
        Kind::CholeskySkew => (skew(a), None),
        Kind::ModifiedLu | Kind::ModifiedRect => {
            let (b, c) = modified(a)?;
            (b, Some(c))
        }
    };
    let minors = minor_profile(kind, a)?;
    let norm = norm_inf(a);
    let condition = kind
        .required_minors(m)
        .iter()
        .zip(&minors)
        .map(|(s, v)| v.norm() / (1.0 + norm.powi(s.size as i32)))
        .fold(f64::INFINITY, f64::min);
    let mut f = Factorization {
        kind,
        m,
        b,
        c,
        k: kind.structure_matrix(m)?,
        residual: 0.0,
        minors,
        condition,
    };
    f.residual = norm_inf(&(a - f.reconstruct()));
    let bound = tol * (1.0 + norm);
    if f.residual.is_nan() || f.residual > bound {
        return Err(FactorError::ResidualTooLarge {
            residual: f.residual,
            bound,
        });
    }
    Ok(f)
}

pub fn cholesky_sym(a: &Mat) -> Result<Factorization, FactorError> {
    factor(Kind::CholeskySym, a)
}

pub fn lu(a: &Mat) -> Result<Factorization, FactorError> {
    factor(Kind::Lu, a)
}

pub fn cholesky_skew(a: &Mat) -> Result<Factorization, FactorError> {
    factor(Kind::CholeskySkew, a)
}

pub fn modified_lu(a: &Mat) -> Result<Factorization, FactorError> {
    factor(Kind::ModifiedLu, a)
}

pub fn modified_rect(a: &Mat) -> Result<Factorization, FactorError> {
    factor(Kind::ModifiedRect, a)
}

fn sym(a: &Mat) -> Mat {
    let m = a.nrows();
    let mut b = Mat::zeros(m, m);
    for j in 0..m {
        let mut s = a[(j, j)];
        for k in 0..j {
            s -= b[(j, k)] * b[(j, k)];
        }
        let d = principal_sqrt(s);
        b[(j, j)] = d;
        for i in j + 1..m {
            let mut t = a[(i, j)];
            for k in 0..j {
                t -= b[(i, k)] * b[(j, k)];
            }
            b[(i, j)] = t / d;
        }
    }
    b
}

/// `A = B C` with `B` lower and `C` unit upper.
fn crout(a: &Mat) -> (Mat, Mat) {
    let m = a.nrows();
    let mut b = Mat::zeros(m, m);
    let mut c = Mat::identity(m, m);
    for j in 0..m {
        for i in j..m {
            let mut t = a[(i, j)];
            for k in 0..j {
                t -= b[(i, k)] * c[(k, j)];
            }
            b[(i, j)] = t;
        }
        for l in j + 1..m {
            let mut t = a[(j, l)];
            for k in 0..j {
                t -= b[(j, k)] * c[(k, l)];
            }
            c[(j, l)] = t / b[(j, j)];
        }
    }
    (b, c)
}

fn skew(a: &Mat) -> Mat {
    let m = a.nrows();
    let mut s = a.clone();
    let mut b = Mat::zeros(m, m);
    for p in (0..m / 2).map(|k| 2 * k) {
        let q = p + 1;
        let r = principal_sqrt(s[(q, p)]);
        b[(p, p)] = r;
        b[(q, q)] = r;
        for i in q + 1..m {
            let (x, y) = (s[(i, p)], s[(i, q)]);
            b[(i, p)] = -y / r;
            b[(i, q)] = x / r;
        }
        // S22 -= B21 J2 B21ᵀ, where row i of B21 J2 is (b_iq, -b_ip)
        for i in q + 1..m {
            for j in q + 1..m {
                let t = b[(i, q)] * b[(j, p)] - b[(i, p)] * b[(j, q)];
                s[(i, j)] -= t;
            }
        }
    }
    if m % 2 == 1 {
        b[(m - 1, m - 1)] = Complex64::new(1.0, 0.0);
    }
    b
}

/// Doolittle `A = L U`, then rescale the rows of `U` so that
/// `diag(s) U = K C` with `C` in the `C_m` shape. Rows of `K C` are
/// `C_i + C_{i+1}`, which gives the recurrence `C_{i+1} = M_i − C_i`.
fn modified(a: &Mat) -> Result<(Mat, Mat), FactorError> {
    let (n, m) = a.shape();
    let mut l = Mat::identity(n, n);
    let mut u = Mat::zeros(n, m);
    for k in 0..n {
        for j in k..m {
            let mut t = a[(k, j)];
            for p in 0..k {
                t -= l[(k, p)] * u[(p, j)];
            }
            u[(k, j)] = t;
        }
        for i in k + 1..n {
            let mut t = a[(i, k)];
            for p in 0..k {
                t -= l[(i, p)] * u[(p, k)];
            }
            l[(i, k)] = t / u[(k, k)];
        }
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut c = Mat::zeros(m, m);
    c[(0, 0)] = Complex64::new(1.0, 0.0);
    let mut scale = vec![zero; n];
    for i in 0..n {
        let ci = c[(i, i)];
        if ci == zero {
            return Err(FactorError::NotInOpenOrbit {
                family: MinorFamily::Hat,
                index: i,
            });
        }
        let s = ci / u[(i, i)];
        scale[i] = s;
        if i + 1 < m {
            for j in i..m {
                c[(i + 1, j)] = s * u[(i, j)] - c[(i, j)];
            }
            c[(i + 1, i)] = zero;
        }
    }
    if c[(m - 1, m - 1)] == zero {
        return Err(FactorError::NotInOpenOrbit {
            family: MinorFamily::Hat,
            index: m - 1,
        });
    }
    let mut b = l;
    for (j, s) in scale.iter().enumerate() {
        let d = Complex64::new(1.0, 0.0) / s;
        for i in 0..n {
            b[(i, j)] *= d;
        }
    }
    Ok((b, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::MatrixSpace;
    use crate::random;

    fn real(rows: &[&[f64]]) -> Mat {
        Mat::from_fn(rows.len(), rows[0].len(), |i, j| {
            Complex64::new(rows[i][j], 0.0)
        })
    }

    fn close(a: &Mat, b: &Mat) -> bool {
        norm_inf(&(a - b)) < 1e-12
    }

    #[test]
    fn sym_examples() {
        let f = cholesky_sym(&Mat::identity(3, 3)).unwrap();
        assert!(close(&f.b, &Mat::identity(3, 3)));
        let f = cholesky_sym(&real(&[&[4., 2.], &[2., 2.]])).unwrap();
        assert!(close(&f.b, &real(&[&[2., 0.], &[1., 1.]])));
        assert_eq!(
            cholesky_sym(&real(&[&[0., 1.], &[1., 0.]])),
            Err(FactorError::NotInOpenOrbit {
                family: MinorFamily::Plain,
                index: 1
            })
        );
    }

    #[test]
    fn sym_normalization_picks_principal_root() {
        let f = cholesky_sym(&real(&[&[-4.]])).unwrap();
        assert!((f.b[(0, 0)] - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn lu_examples() {
        let f = lu(&real(&[&[2., 1.], &[4., 3.]])).unwrap();
        assert!(close(&f.b, &real(&[&[2., 0.], &[4., 1.]])));
        assert!(close(
            f.c.as_ref().unwrap(),
            &real(&[&[1., 0.5], &[0., 1.]])
        ));
        assert!(matches!(
            lu(&real(&[&[0., 1.], &[1., 0.]])),
            Err(FactorError::NotInOpenOrbit { index: 1, .. })
        ));
    }

    #[test]
    fn skew_examples() {
        let f = cholesky_skew(&real(&[&[0., -1.], &[1., 0.]])).unwrap();
        assert!(close(&f.b, &Mat::identity(2, 2)));
        let f = cholesky_skew(&real(&[&[0., -4.], &[4., 0.]])).unwrap();
        assert!(close(
            &f.b,
            &(Mat::identity(2, 2) * Complex64::new(2.0, 0.0))
        ));
        assert_eq!(
            cholesky_skew(&Mat::zeros(2, 2)),
            Err(FactorError::NotInOpenOrbit {
                family: MinorFamily::Plain,
                index: 2
            })
        );
    }

    #[test]
    fn skew_odd_has_trailing_one() {
        let a = real(&[&[0., -1., 2.], &[1., 0., 3.], &[-2., -3., 0.]]);
        let f = cholesky_skew(&a).unwrap();
        assert_eq!(f.b[(2, 2)], Complex64::new(1.0, 0.0));
        assert!(f.orbit_element().is_ok());
    }

    #[test]
    fn modified_examples() {
        let k = structure_matrix(Kind::ModifiedLu, 3).unwrap();
        let f = modified_lu(&k).unwrap();
        assert!(close(&f.b, &Mat::identity(3, 3)));
        assert!(close(f.c.as_ref().unwrap(), &Mat::identity(3, 3)));

        let f = modified_lu(&real(&[&[1., 2.], &[3., 10.]])).unwrap();
        assert!(close(&f.b, &real(&[&[1., 0.], &[3., 2.]])));
        assert!(close(f.c.as_ref().unwrap(), &real(&[&[1., 0.], &[0., 2.]])));

        assert_eq!(
            modified_lu(&Mat::identity(2, 2)),
            Err(FactorError::NotInOpenOrbit {
                family: MinorFamily::Hat,
                index: 1
            })
        );
    }

    #[test]
    fn modified_rect_examples() {
        let f = modified_rect(&real(&[&[1., 1.]])).unwrap();
        assert!(close(&f.b, &real(&[&[1.]])));
        assert!(close(f.c.as_ref().unwrap(), &Mat::identity(2, 2)));

        let f = modified_rect(&real(&[&[2., 6.]])).unwrap();
        assert!(close(&f.b, &real(&[&[2.]])));
        assert!(close(f.c.as_ref().unwrap(), &real(&[&[1., 0.], &[0., 3.]])));

        assert_eq!(
            modified_rect(&real(&[&[0., 1.]])),
            Err(FactorError::NotInOpenOrbit {
                family: MinorFamily::Plain,
                index: 1
            })
        );
    }

    #[test]
    fn structure_matrix_examples() {
        assert_eq!(
            structure_matrix(Kind::CholeskySkew, 2).unwrap(),
            real(&[&[0., -1.], &[1., 0.]])
        );
        assert_eq!(
            structure_matrix(Kind::ModifiedLu, 2).unwrap(),
            real(&[&[1., 1.], &[0., 1.]])
        );
    }

    #[test]
    fn factors_lie_in_the_group() {
        let mut r = random::rng(3, 0);
        for kind in Kind::ALL {
            for m in kind.min_size()..=5 {
                let p = random::orbit_point(kind, m, &mut r);
                let f = factor(kind, &p.matrix()).unwrap();
                let g = f.orbit_element().unwrap();
                let back = g.act_matrix(&f.k).unwrap();
                assert!(norm_inf(&(back - p.matrix())) < 1e-9, "{kind} m={m}");
            }
        }
    }

    #[test]
    fn sign_flips_still_reconstruct() {
        let mut r = random::rng(4, 0);
        for (kind, m) in [
            (Kind::CholeskySym, 4),
            (Kind::CholeskySkew, 4),
            (Kind::CholeskySkew, 5),
        ] {
            let p = random::orbit_point(kind, m, &mut r);
            let a = p.matrix();
            let f = factor(kind, &a).unwrap();
            let blocks = if kind == Kind::CholeskySym { m } else { m / 2 };
            for mask in 0..1u64 << blocks {
                let b = &f.b * sign_pattern(kind, m, mask);
                let back = &b * &f.k * b.transpose();
                assert!(norm_inf(&(back - &a)) < 1e-9);
            }
        }
    }

    #[test]
    fn deterministic() {
        let mut r = random::rng(5, 0);
        let space = MatrixSpace::gen(3, 4).unwrap();
        let mut p = random::point(&space, &mut r);
        while first_vanishing_minor(Kind::ModifiedRect, &p.matrix())
            .unwrap()
            .is_some()
        {
            p = random::point(&space, &mut r);
        }
        let a = factor(Kind::ModifiedRect, &p.matrix()).unwrap();
        let b = factor(Kind::ModifiedRect, &p.matrix()).unwrap();
        assert_eq!(a, b);
    }
}
