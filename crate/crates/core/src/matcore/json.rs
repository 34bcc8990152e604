use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Mat, MatError, MatrixSpace, Point, SpaceKind};

/// Wire form of a matrix: `entries` lists `[re, im]` pairs row-major over
/// the free coordinates of the space (all entries for `gen`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub kind: SpaceKind,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_point(p: &Point) -> Self {
        let s = p.space();
        Self {
            kind: s.kind(),
            rows: s.rows(),
            cols: s.cols(),
            entries: p.coords().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    /// Any dense matrix, written as `gen` with every entry.
    pub fn from_dense(a: &Mat) -> Self {
        Self {
            kind: SpaceKind::Gen,
            rows: a.nrows(),
            cols: a.ncols(),
            entries: a.transpose().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn space(&self) -> Result<MatrixSpace, MatError> {
        MatrixSpace::new(self.kind, self.rows, self.cols)
    }

    pub fn to_point(&self) -> Result<Point, MatError> {
        let coords = self
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Point::new(self.space()?, coords)
    }

    /// Dense matrix without any shape restriction beyond the entry count.
    pub fn to_dense(&self) -> Result<Mat, MatError> {
        if self.kind != SpaceKind::Gen {
            return Ok(self.to_point()?.matrix());
        }
        let n = self.rows * self.cols;
        if self.entries.len() != n {
            return Err(MatError::CoordinateCount {
                expected: n,
                got: self.entries.len(),
            });
        }
        Ok(Mat::from_row_iterator(
            self.rows,
            self.cols,
            self.entries.iter().map(|&[re, im]| Complex64::new(re, im)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_is_row_major() {
        let a = Mat::from_fn(2, 3, |i, j| Complex64::new((3 * i + j) as f64, 0.0));
        let j = MatrixJson::from_dense(&a);
        assert_eq!(j.entries[1], [1.0, 0.0]);
        assert_eq!(j.entries[3], [3.0, 0.0]);
        assert_eq!(j.to_dense().unwrap(), a);
    }

    #[test]
    fn point_round_trip() {
        let p = Point::new(
            MatrixSpace::sym(2),
            vec![
                Complex64::new(4., 0.),
                Complex64::new(2., 1.),
                Complex64::new(2., 0.),
            ],
        )
        .unwrap();
        let j = MatrixJson::from_point(&p);
        assert_eq!(j.kind, SpaceKind::Sym);
        assert_eq!(j.to_point().unwrap(), p);
    }

    #[test]
    fn wrong_entry_count() {
        let j = MatrixJson {
            kind: SpaceKind::Sym,
            rows: 2,
            cols: 2,
            entries: vec![[1.0, 0.0]; 4],
        };
        assert!(matches!(
            j.to_point(),
            Err(MatError::CoordinateCount {
                expected: 3,
                got: 4
            })
        ));
    }
}
