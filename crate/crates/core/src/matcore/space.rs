use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Mat, MatError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Sym,
    Gen,
    Skew,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Sym => "sym",
            SpaceKind::Gen => "gen",
            SpaceKind::Skew => "skew",
        })
    }
}

/// `Sym_m`, `Sk_m`, `M_{m,m}` or `M_{m-1,m}` with a fixed row-major chart
/// over the free entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixSpace {
    kind: SpaceKind,
    rows: usize,
    cols: usize,
}

impl MatrixSpace {
    pub fn sym(m: usize) -> Self {
        Self {
            kind: SpaceKind::Sym,
            rows: m,
            cols: m,
        }
    }

    pub fn skew(m: usize) -> Self {
        Self {
            kind: SpaceKind::Skew,
            rows: m,
            cols: m,
        }
    }

    /// General matrices; only square and `(m-1) × m` shapes are supported.
    pub fn gen(rows: usize, cols: usize) -> Result<Self, MatError> {
        if rows == 0 || !(rows == cols || rows + 1 == cols) {
            return Err(MatError::UnsupportedSpace {
                kind: SpaceKind::Gen,
                rows,
                cols,
            });
        }
        Ok(Self {
            kind: SpaceKind::Gen,
            rows,
            cols,
        })
    }

    pub fn new(kind: SpaceKind, rows: usize, cols: usize) -> Result<Self, MatError> {
        match kind {
            SpaceKind::Gen => Self::gen(rows, cols),
            _ if rows == cols && rows > 0 => Ok(Self { kind, rows, cols }),
            _ => Err(MatError::UnsupportedSpace { kind, rows, cols }),
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        let m = self.rows;
        match self.kind {
            SpaceKind::Sym => m * (m + 1) / 2,
            SpaceKind::Skew => m * (m - 1) / 2,
            SpaceKind::Gen => self.rows * self.cols,
        }
    }

    /// Matrix positions of the chart coordinates, in chart order.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.dim());
        for i in 0..self.rows {
            let start = match self.kind {
                SpaceKind::Sym => i,
                SpaceKind::Skew => i + 1,
                SpaceKind::Gen => 0,
            };
            out.extend((start..self.cols).map(|j| (i, j)));
        }
        out
    }

    /// Coordinate names: the conventional letters for the small spaces,
    /// `a{i}{j}` (1-based) otherwise.
    pub fn var_names(&self) -> Vec<String> {
        let letters: Option<&[&str]> = match (self.kind, self.dim()) {
            (SpaceKind::Sym, 6) => Some(&["x", "y", "z", "w", "u", "v"]),
            (_, 6) => Some(&["x", "y", "z", "u", "v", "w"]),
            (_, 1) => Some(&["x"]),
            (_, 2) => Some(&["x", "y"]),
            (_, 3) => Some(&["x", "y", "z"]),
            (_, 4) => Some(&["x", "y", "z", "w"]),
            _ => None,
        };
        if let Some(l) = letters {
            return l.iter().map(|s| s.to_string()).collect();
        }
        let wide = self.cols > 9;
        self.positions()
            .into_iter()
            .map(|(i, j)| {
                if wide {
                    format!("a{}_{}", i + 1, j + 1)
                } else {
                    format!("a{}{}", i + 1, j + 1)
                }
            })
            .collect()
    }

    pub fn label(&self) -> String {
        match self.kind {
            SpaceKind::Sym => format!("Sym_{}", self.rows),
            SpaceKind::Skew => format!("Sk_{}", self.rows),
            SpaceKind::Gen => format!("M_{{{},{}}}", self.rows, self.cols),
        }
    }

    /// Builds the full matrix from chart coordinates.
    pub fn materialize(&self, coords: &[Complex64]) -> Result<Mat, MatError> {
        if coords.len() != self.dim() {
            return Err(MatError::CoordinateCount {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        let mut a = Mat::zeros(self.rows, self.cols);
        for (&(i, j), &v) in self.positions().iter().zip(coords) {
            a[(i, j)] = v;
            match self.kind {
                SpaceKind::Sym => a[(j, i)] = v,
                SpaceKind::Skew => a[(j, i)] = -v,
                SpaceKind::Gen => {}
            }
        }
        Ok(a)
    }

    /// Reads chart coordinates off a matrix without checking symmetry.
    pub fn coords_unchecked(&self, a: &Mat) -> Result<Vec<Complex64>, MatError> {
        self.check_shape(a)?;
        Ok(self.positions().into_iter().map(|p| a[p]).collect())
    }

    /// Reads chart coordinates, rejecting matrices that break the symmetry
    /// class by more than `tol · (1 + ‖A‖∞)`.
    pub fn coords(&self, a: &Mat, tol: f64) -> Result<Vec<Complex64>, MatError> {
        self.check_shape(a)?;
        let bound = tol * (1.0 + super::norm_inf(a));
        for i in 0..self.rows {
            for j in 0..=i.min(self.cols - 1) {
                let bad = match self.kind {
                    SpaceKind::Sym => (a[(i, j)] - a[(j, i)]).norm() > bound,
                    SpaceKind::Skew => (a[(i, j)] + a[(j, i)]).norm() > bound,
                    SpaceKind::Gen => false,
                };
                if bad {
                    return Err(MatError::NotInSpace {
                        space: self.label(),
                        row: i,
                        col: j,
                    });
                }
            }
        }
        self.coords_unchecked(a)
    }

    fn check_shape(&self, a: &Mat) -> Result<(), MatError> {
        if a.shape() != (self.rows, self.cols) {
            return Err(MatError::Shape {
                rows: a.nrows(),
                cols: a.ncols(),
                exp_rows: self.rows,
                exp_cols: self.cols,
            });
        }
        Ok(())
    }
}

impl fmt::Display for MatrixSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A point of a matrix space in chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    space: MatrixSpace,
    coords: Vec<Complex64>,
}

impl Point {
    pub fn new(space: MatrixSpace, coords: Vec<Complex64>) -> Result<Self, MatError> {
        if coords.len() != space.dim() {
            return Err(MatError::CoordinateCount {
                expected: space.dim(),
                got: coords.len(),
            });
        }
        Ok(Self { space, coords })
    }

    pub fn from_matrix(space: MatrixSpace, a: &Mat, tol: f64) -> Result<Self, MatError> {
        let coords = space.coords(a, tol)?;
        Ok(Self { space, coords })
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn matrix(&self) -> Mat {
        self.space
            .materialize(&self.coords)
            .expect("coordinate count checked on construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_names() {
        assert_eq!(MatrixSpace::sym(2).var_names(), ["x", "y", "z"]);
        assert_eq!(
            MatrixSpace::sym(3).var_names(),
            ["x", "y", "z", "w", "u", "v"]
        );
        assert_eq!(
            MatrixSpace::skew(4).var_names(),
            ["x", "y", "z", "u", "v", "w"]
        );
        assert_eq!(
            MatrixSpace::gen(2, 3).unwrap().var_names(),
            ["x", "y", "z", "u", "v", "w"]
        );
        assert_eq!(
            MatrixSpace::gen(2, 2).unwrap().var_names(),
            ["x", "y", "z", "w"]
        );
        let n = MatrixSpace::sym(4).var_names();
        assert_eq!(n.len(), 10);
        assert_eq!(n[0], "a11");
        assert_eq!(n[4], "a22");
        assert_eq!(MatrixSpace::gen(10, 10).unwrap().var_names()[1], "a1_2");
    }

    #[test]
    fn dims() {
        assert_eq!(MatrixSpace::sym(5).dim(), 15);
        assert_eq!(MatrixSpace::skew(5).dim(), 10);
        assert_eq!(MatrixSpace::gen(4, 5).unwrap().dim(), 20);
        assert!(MatrixSpace::gen(2, 4).is_err());
        assert!(MatrixSpace::gen(3, 2).is_err());
    }

    #[test]
    fn materialize_round_trip() {
        for space in [
            MatrixSpace::sym(3),
            MatrixSpace::skew(4),
            MatrixSpace::gen(2, 3).unwrap(),
        ] {
            let coords: Vec<Complex64> = (0..space.dim())
                .map(|k| Complex64::new(k as f64 + 1.0, -(k as f64)))
                .collect();
            let a = space.materialize(&coords).unwrap();
            assert_eq!(space.coords(&a, 1e-12).unwrap(), coords);
        }
    }

    #[test]
    fn rejects_broken_symmetry() {
        let s = MatrixSpace::sym(2);
        let mut a = Mat::identity(2, 2);
        a[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            s.coords(&a, 1e-12),
            Err(MatError::NotInSpace { row: 1, col: 0, .. })
        ));
        assert!(MatrixSpace::skew(2)
            .coords(&Mat::identity(2, 2), 1e-12)
            .is_err());
    }
}
