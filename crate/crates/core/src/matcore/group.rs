use num_complex::Complex64;

use super::{norm_inf, Kind, Mat, MatError, MatrixSpace, Point};

const SHAPE_TOL: f64 = 1e-12;

/// An element of one of the five solvable groups: a single matrix for the
/// congruence actions, a pair `(B, C)` for the left-right actions.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    kind: Kind,
    m: usize,
    left: Mat,
    right: Option<Mat>,
}

fn is_small(z: Complex64, scale: f64) -> bool {
    z.norm() <= SHAPE_TOL * (1.0 + scale)
}

fn is_one(z: Complex64) -> bool {
    (z - Complex64::new(1.0, 0.0)).norm() <= SHAPE_TOL
}

fn expect_square(kind: Kind, g: &Mat, n: usize) -> Result<(), MatError> {
    if g.shape() != (n, n) {
        return Err(MatError::NotInGroup {
            kind,
            reason: format!("factor is {}x{}, expected {n}x{n}", g.nrows(), g.ncols()),
        });
    }
    Ok(())
}

fn fail(kind: Kind, reason: String) -> MatError {
    MatError::NotInGroup { kind, reason }
}

fn check_borel(kind: Kind, b: &Mat) -> Result<(), MatError> {
    let s = norm_inf(b);
    for i in 0..b.nrows() {
        for j in i + 1..b.ncols() {
            if !is_small(b[(i, j)], s) {
                return Err(fail(
                    kind,
                    format!("entry ({i}, {j}) above the diagonal is nonzero"),
                ));
            }
        }
        if is_small(b[(i, i)], s) {
            return Err(fail(kind, format!("diagonal entry {i} vanishes")));
        }
    }
    Ok(())
}

fn check_upper(kind: Kind, c: &Mat, unit: bool) -> Result<(), MatError> {
    let s = norm_inf(c);
    for i in 0..c.nrows() {
        for j in 0..i {
            if !is_small(c[(i, j)], s) {
                return Err(fail(
                    kind,
                    format!("entry ({i}, {j}) below the diagonal is nonzero"),
                ));
            }
        }
        let d = c[(i, i)];
        if unit && !is_one(d) {
            return Err(fail(kind, format!("diagonal entry {i} is not 1")));
        }
        if is_small(d, s) {
            return Err(fail(kind, format!("diagonal entry {i} vanishes")));
        }
    }
    Ok(())
}

fn check_c_shape(kind: Kind, c: &Mat) -> Result<(), MatError> {
    check_upper(kind, c, false)?;
    if !is_one(c[(0, 0)]) {
        return Err(fail(kind, "entry (0, 0) is not 1".into()));
    }
    let s = norm_inf(c);
    for j in 1..c.ncols() {
        if !is_small(c[(0, j)], s) {
            return Err(fail(kind, format!("first-row entry (0, {j}) is nonzero")));
        }
    }
    Ok(())
}

fn check_block(kind: Kind, b: &Mat) -> Result<(), MatError> {
    let m = b.nrows();
    let s = norm_inf(b);
    for k in (0..m / 2).map(|k| 2 * k) {
        if !is_small(b[(k, k)] - b[(k + 1, k + 1)], s)
            || !is_small(b[(k + 1, k)], s)
            || !is_small(b[(k, k + 1)], s)
        {
            return Err(fail(kind, format!("diagonal block at {k} is not scalar")));
        }
        if is_small(b[(k, k)], s) {
            return Err(fail(kind, format!("diagonal block at {k} vanishes")));
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            if !is_small(b[(i, j)], s) {
                return Err(fail(
                    kind,
                    format!("entry ({i}, {j}) above the block diagonal is nonzero"),
                ));
            }
        }
    }
    if m % 2 == 1 && !is_one(b[(m - 1, m - 1)]) {
        return Err(fail(kind, "last diagonal entry is not 1".into()));
    }
    Ok(())
}

impl GroupElement {
    /// Validates the shape constraints of the group for `(kind, m)`.
    pub fn new(kind: Kind, m: usize, left: Mat, right: Option<Mat>) -> Result<Self, MatError> {
        kind.check_size(m)?;
        let left_n = if kind == Kind::ModifiedRect { m - 1 } else { m };
        expect_square(kind, &left, left_n)?;
        match (kind.is_pair(), &right) {
            (true, None) => return Err(fail(kind, "missing right factor".into())),
            (false, Some(_)) => return Err(fail(kind, "unexpected right factor".into())),
            (true, Some(c)) => expect_square(kind, c, m)?,
            (false, None) => {}
        }
        match kind {
            Kind::CholeskySym => check_borel(kind, &left)?,
            Kind::CholeskySkew => check_block(kind, &left)?,
            Kind::Lu => {
                check_borel(kind, &left)?;
                check_upper(kind, right.as_ref().unwrap(), true)?;
            }
            Kind::ModifiedLu | Kind::ModifiedRect => {
                check_borel(kind, &left)?;
                check_c_shape(kind, right.as_ref().unwrap())?;
            }
        }
        Ok(Self {
            kind,
            m,
            left,
            right,
        })
    }

    pub fn identity(kind: Kind, m: usize) -> Result<Self, MatError> {
        kind.check_size(m)?;
        let left_n = if kind == Kind::ModifiedRect { m - 1 } else { m };
        Ok(Self {
            kind,
            m,
            left: Mat::identity(left_n, left_n),
            right: kind.is_pair().then(|| Mat::identity(m, m)),
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn left(&self) -> &Mat {
        &self.left
    }

    pub fn right(&self) -> Option<&Mat> {
        self.right.as_ref()
    }

    /// Group product `self · other`, so that acting by it equals acting by
    /// `other` first.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement, MatError> {
        if self.kind != other.kind || self.m != other.m {
            return Err(MatError::Incompatible {
                group: other.kind,
                space: self.kind.group_label(self.m),
            });
        }
        Ok(GroupElement {
            kind: self.kind,
            m: self.m,
            left: &self.left * &other.left,
            right: match (&self.right, &other.right) {
                (Some(a), Some(b)) => Some(a * b),
                _ => None,
            },
        })
    }

    /// `g A gᵀ` or `B A C⁻¹` on a dense matrix of the right shape.
    pub fn act_matrix(&self, a: &Mat) -> Result<Mat, MatError> {
        let space = self.kind.space(self.m)?;
        if a.shape() != (space.rows(), space.cols()) {
            return Err(MatError::Shape {
                rows: a.nrows(),
                cols: a.ncols(),
                exp_rows: space.rows(),
                exp_cols: space.cols(),
            });
        }
        Ok(match &self.right {
            None => &self.left * a * self.left.transpose(),
            Some(c) => {
                // A C⁻¹ = X  <=>  Cᵀ Xᵀ = Aᵀ, with Cᵀ lower triangular
                let xt = c
                    .transpose()
                    .solve_lower_triangular(&a.transpose())
                    .ok_or_else(|| fail(self.kind, "right factor is singular".into()))?;
                &self.left * xt.transpose()
            }
        })
    }

    fn space(&self) -> MatrixSpace {
        self.kind
            .space(self.m)
            .expect("size validated on construction")
    }
}

/// The group action on points, re-encoded in the chart of the same space.
pub fn act(g: &GroupElement, p: &Point) -> Result<Point, MatError> {
    let space = g.space();
    if *p.space() != space {
        return Err(MatError::Incompatible {
            group: g.kind,
            space: p.space().label(),
        });
    }
    let out = g.act_matrix(&p.matrix())?;
    let coords = space.coords_unchecked(&out)?;
    Point::new(space, coords)
}
