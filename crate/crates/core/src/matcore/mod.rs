//! Matrix spaces with fixed coordinate charts, dense complex minors, and the
//! five solvable group actions behind the (modified) Cholesky-type
//! factorizations.

mod dense;
mod group;
mod json;
mod space;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dense::{
    det, det_cofactor, hat, leading_minor, minor_is_nonzero, norm_inf, pfaffian, principal_sqrt,
    Mat, MINOR_REL_TOL,
};
pub use group::{act, GroupElement};
pub use json::MatrixJson;
pub use space::{MatrixSpace, Point, SpaceKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatError {
    #[error("minor order {k} out of range 1..={max}")]
    MinorOutOfRange { k: usize, max: usize },
    #[error("hat needs at least 2 columns, got {cols}")]
    TooFewColumns { cols: usize },
    #[error("unsupported matrix space {rows}x{cols} of kind {kind}")]
    UnsupportedSpace {
        kind: SpaceKind,
        rows: usize,
        cols: usize,
    },
    #[error("size m = {m} is invalid for {kind}")]
    InvalidSize { kind: Kind, m: usize },
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("matrix is {rows}x{cols}, expected {exp_rows}x{exp_cols}")]
    Shape {
        rows: usize,
        cols: usize,
        exp_rows: usize,
        exp_cols: usize,
    },
    #[error("matrix does not lie in {space}: entry ({row}, {col}) breaks the symmetry class")]
    NotInSpace {
        space: String,
        row: usize,
        col: usize,
    },
    #[error("matrix is not an element of the group for {kind}: {reason}")]
    NotInGroup { kind: Kind, reason: String },
    #[error("group of {group} cannot act on {space}")]
    Incompatible { group: Kind, space: String },
    #[error("unknown matrix kind '{0}'")]
    UnknownKind(String),
}

/// The five rows of the factorization table: a matrix space, a solvable
/// group acting on it, and the factorization that the action encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// `A = B Bᵀ` on symmetric matrices, group `B_m`.
    #[serde(rename = "sym")]
    CholeskySym,
    /// `A = B C` on general square matrices, group `B_m × N_m`.
    #[serde(rename = "lu")]
    Lu,
    /// `A = B J Bᵀ` on skew-symmetric matrices, group `D_m`.
    #[serde(rename = "skew")]
    CholeskySkew,
    /// `A = B K C` on general square matrices, group `B_m × C_m`.
    #[serde(rename = "mlu")]
    ModifiedLu,
    /// `A = B K′ C` on `(m-1) × m` matrices, group `B_{m-1} × C_m`.
    #[serde(rename = "mrect")]
    ModifiedRect,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::CholeskySym,
        Kind::Lu,
        Kind::CholeskySkew,
        Kind::ModifiedLu,
        Kind::ModifiedRect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::CholeskySym => "sym",
            Kind::Lu => "lu",
            Kind::CholeskySkew => "skew",
            Kind::ModifiedLu => "mlu",
            Kind::ModifiedRect => "mrect",
        }
    }

    pub fn min_size(self) -> usize {
        match self {
            Kind::CholeskySym | Kind::Lu => 1,
            Kind::CholeskySkew | Kind::ModifiedLu | Kind::ModifiedRect => 2,
        }
    }

    pub fn check_size(self, m: usize) -> Result<(), MatError> {
        if m < self.min_size() {
            Err(MatError::InvalidSize { kind: self, m })
        } else {
            Ok(())
        }
    }

    /// The matrix space acted on. For [`Kind::ModifiedRect`], `m` is the
    /// column count and the matrices are `(m-1) × m`.
    pub fn space(self, m: usize) -> Result<MatrixSpace, MatError> {
        self.check_size(m)?;
        Ok(match self {
            Kind::CholeskySym => MatrixSpace::sym(m),
            Kind::Lu | Kind::ModifiedLu => MatrixSpace::gen(m, m)?,
            Kind::CholeskySkew => MatrixSpace::skew(m),
            Kind::ModifiedRect => MatrixSpace::gen(m - 1, m)?,
        })
    }

    /// Recovers `m` from a space, or `None` if the space does not fit.
    pub fn size_for(self, space: &MatrixSpace) -> Option<usize> {
        let m = match (self, space.kind()) {
            (Kind::CholeskySym, SpaceKind::Sym) | (Kind::CholeskySkew, SpaceKind::Skew) => {
                space.rows()
            }
            (Kind::Lu | Kind::ModifiedLu, SpaceKind::Gen) if space.rows() == space.cols() => {
                space.rows()
            }
            (Kind::ModifiedRect, SpaceKind::Gen) if space.rows() + 1 == space.cols() => {
                space.cols()
            }
            _ => return None,
        };
        (m >= self.min_size()).then_some(m)
    }

    /// Rank of the solvable group, i.e. the dimension of a maximal torus.
    pub fn rank(self, m: usize) -> usize {
        match self {
            Kind::CholeskySym | Kind::Lu => m,
            Kind::CholeskySkew => m / 2,
            Kind::ModifiedLu => 2 * m - 1,
            Kind::ModifiedRect => 2 * m - 2,
        }
    }

    pub fn is_pair(self) -> bool {
        matches!(self, Kind::Lu | Kind::ModifiedLu | Kind::ModifiedRect)
    }

    /// Sign/block ambiguity of the factorization: `true` for the two
    /// congruence cases, where the isotropy group is `(Z/2)^k`.
    pub fn has_finite_isotropy(self) -> bool {
        matches!(self, Kind::CholeskySym | Kind::CholeskySkew)
    }

    pub fn group_label(self, m: usize) -> String {
        match self {
            Kind::CholeskySym => format!("B_{m}"),
            Kind::Lu => format!("B_{m} x N_{m}"),
            Kind::CholeskySkew => format!("D_{m}"),
            Kind::ModifiedLu => format!("B_{m} x C_{m}"),
            Kind::ModifiedRect => format!("B_{} x C_{m}", m - 1),
        }
    }

    /// The constant middle factor: `I`, block-diagonal `J` (bordered by a
    /// zero row and column for odd `m`), or the unit bidiagonal `K`/`K′`.
    /// It is also the base point of the open orbit.
    pub fn structure_matrix(self, m: usize) -> Result<Mat, MatError> {
        let space = self.space(m)?;
        let one = Complex64::new(1.0, 0.0);
        let mut a = Mat::zeros(space.rows(), space.cols());
        match self {
            Kind::CholeskySym | Kind::Lu => a.fill_diagonal(one),
            Kind::CholeskySkew => {
                for k in (0..m / 2).map(|k| 2 * k) {
                    a[(k, k + 1)] = -one;
                    a[(k + 1, k)] = one;
                }
            }
            Kind::ModifiedLu | Kind::ModifiedRect => {
                for i in 0..space.rows() {
                    a[(i, i)] = one;
                    if i + 1 < space.cols() {
                        a[(i, i + 1)] = one;
                    }
                }
            }
        }
        Ok(a)
    }

    /// Which minors define the open orbit, in the order they are checked.
    pub fn required_minors(self, m: usize) -> Vec<MinorSpec> {
        let plain = |k| MinorSpec {
            family: MinorFamily::Plain,
            size: k,
        };
        let hatted = |k| MinorSpec {
            family: MinorFamily::Hat,
            size: k,
        };
        match self {
            Kind::CholeskySym | Kind::Lu => (1..=m).map(plain).collect(),
            Kind::CholeskySkew => (1..=m / 2).map(|k| plain(2 * k)).collect(),
            Kind::ModifiedLu => (1..=m).map(plain).chain((1..m).map(hatted)).collect(),
            Kind::ModifiedRect => (1..m).map(plain).chain((1..m).map(hatted)).collect(),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = MatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| MatError::UnknownKind(s.to_string()))
    }
}

/// Leading minors of `A` itself, or of `Â` (first column deleted).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MinorFamily {
    Plain,
    Hat,
}

impl fmt::Display for MinorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MinorFamily::Plain => "plain",
            MinorFamily::Hat => "hat",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinorSpec {
    pub family: MinorFamily,
    pub size: usize,
}

impl MinorSpec {
    pub fn eval(&self, a: &Mat) -> Result<Complex64, MatError> {
        match self.family {
            MinorFamily::Plain => leading_minor(a, self.size),
            MinorFamily::Hat => leading_minor(&hat(a)?, self.size),
        }
    }
}

fn check_shape(kind: Kind, a: &Mat) -> Result<usize, MatError> {
    let (r, c) = a.shape();
    let m = match kind {
        Kind::ModifiedRect => c,
        _ => r,
    };
    let space = kind.space(m)?;
    if space.rows() != r || space.cols() != c {
        return Err(MatError::Shape {
            rows: r,
            cols: c,
            exp_rows: space.rows(),
            exp_cols: space.cols(),
        });
    }
    Ok(m)
}

/// The defining minors of the open orbit for `kind`, in checking order:
/// `det A^(k)` (even `k` only for skew), then `det Â^(k)` for the modified
/// factorizations.
pub fn minor_profile(kind: Kind, a: &Mat) -> Result<Vec<Complex64>, MatError> {
    let m = check_shape(kind, a)?;
    kind.required_minors(m).iter().map(|s| s.eval(a)).collect()
}

/// Numeric values of the basic relative invariants: the same list as
/// [`minor_profile`] except that the skew case uses the leading Pfaffians,
/// whose squares are the even leading minors.
pub fn invariant_values(kind: Kind, a: &Mat) -> Result<Vec<Complex64>, MatError> {
    let m = check_shape(kind, a)?;
    if kind == Kind::CholeskySkew {
        return Ok((1..=m / 2)
            .map(|k| pfaffian(&a.view((0, 0), (2 * k, 2 * k)).into_owned()))
            .collect());
    }
    minor_profile(kind, a)
}

/// First required minor failing the scale-aware nonvanishing test.
pub fn first_vanishing_minor(kind: Kind, a: &Mat) -> Result<Option<MinorSpec>, MatError> {
    let m = check_shape(kind, a)?;
    let norm = norm_inf(a);
    for spec in kind.required_minors(m) {
        let v = spec.eval(a)?;
        if !minor_is_nonzero(v, norm, spec.size) {
            return Ok(Some(spec));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> Mat {
        let r = rows.len();
        let c = rows[0].len();
        Mat::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    #[test]
    fn kinds_round_trip_names() {
        for k in Kind::ALL {
            assert_eq!(k.name().parse::<Kind>().unwrap(), k);
        }
        assert!("chol".parse::<Kind>().is_err());
    }

    #[test]
    fn rank_matches_required_invariant_count() {
        for k in Kind::ALL {
            for m in k.min_size()..=6 {
                assert_eq!(k.required_minors(m).len(), k.rank(m), "{k} m={m}");
            }
        }
    }

    #[test]
    fn profile_examples() {
        let id = Mat::identity(2, 2);
        let p = minor_profile(Kind::CholeskySym, &id).unwrap();
        assert_eq!(p, vec![Complex64::new(1.0, 0.0); 2]);

        let j = real(&[
            &[0., -1., 0., 0.],
            &[1., 0., 0., 0.],
            &[0., 0., 0., -1.],
            &[0., 0., 1., 0.],
        ]);
        let p = minor_profile(Kind::CholeskySkew, &j).unwrap();
        assert_eq!(p.len(), 2);
        for v in p {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }

        let a = real(&[&[1., 2.], &[3., 10.]]);
        let p = minor_profile(Kind::ModifiedLu, &a).unwrap();
        let expect = [1.0, 4.0, 2.0];
        for (v, e) in p.iter().zip(expect) {
            assert!((v - Complex64::new(e, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn skew_invariants_are_pfaffians() {
        let j = real(&[
            &[0., -1., 0., 0.],
            &[1., 0., 0., 0.],
            &[0., 0., 0., -1.],
            &[0., 0., 1., 0.],
        ]);
        let v = invariant_values(Kind::CholeskySkew, &j).unwrap();
        assert!((v[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((v[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn structure_matrices() {
        let j = Kind::CholeskySkew.structure_matrix(2).unwrap();
        assert_eq!(j, real(&[&[0., -1.], &[1., 0.]]));
        let k = Kind::ModifiedLu.structure_matrix(2).unwrap();
        assert_eq!(k, real(&[&[1., 1.], &[0., 1.]]));
        let kp = Kind::ModifiedRect.structure_matrix(3).unwrap();
        assert_eq!(kp, real(&[&[1., 1., 0.], &[0., 1., 1.]]));
        assert_eq!(
            Kind::CholeskySym.structure_matrix(3).unwrap(),
            Mat::identity(3, 3)
        );
        let jp = Kind::CholeskySkew.structure_matrix(3).unwrap();
        assert_eq!(jp[(2, 2)], Complex64::new(0.0, 0.0));
        assert!(Kind::CholeskySkew.structure_matrix(1).is_err());
    }

    #[test]
    fn structure_matrix_lies_in_open_orbit() {
        for kind in Kind::ALL {
            for m in kind.min_size()..=6 {
                let k = kind.structure_matrix(m).unwrap();
                for v in minor_profile(kind, &k).unwrap() {
                    assert!((v.norm() - 1.0).abs() < 1e-14, "{kind} m={m}");
                }
            }
        }
    }

    #[test]
    fn vanishing_minor_reported_in_order() {
        let a = real(&[&[1., 0.], &[0., 1.]]);
        assert_eq!(
            first_vanishing_minor(Kind::ModifiedLu, &a).unwrap(),
            Some(MinorSpec {
                family: MinorFamily::Hat,
                size: 1
            })
        );
        assert_eq!(first_vanishing_minor(Kind::Lu, &a).unwrap(), None);
    }
}
