//! Lie algebra generators, representation vector fields, the coefficient
//! matrix and its determinant, and block triangular structure.

mod equation;
mod filtration;

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::matcore::{GroupElement, Kind, Mat, MatError, MatrixSpace};
use crate::poly::{PolyError, Polynomial};

pub use equation::{
    exceptional_equation, expected_factors, symbolic_matrix, ExceptionalFactored, Factor, Verdict,
};
pub use filtration::{
    default_filtration, verify_block_structure, BlockReport, DiagonalBlock, Filtration,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlockError {
    #[error("{generators} generators for a space of dimension {dim}")]
    DimensionMismatch { generators: usize, dim: usize },
    #[error("coefficient determinant has a factor outside the expected minors: {residual}")]
    ResidualNotConstant { residual: String },
    #[error("expected factors {first} and {second} are associates")]
    DuplicateFactor { first: usize, second: usize },
    #[error("subspace W_{0} of the filtration is not invariant")]
    NotInvariant(usize),
    #[error("nonzero block above the diagonal at row block {0}, column block {1}")]
    NotBlockTriangular(usize, usize),
    #[error("diagonal block {0} has zero determinant")]
    SingularBlock(usize),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// How a generator acts: `ξ_X(A) = XA + AXᵀ`, `XA`, or `−AY`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Congruence,
    Left,
    Right,
}

/// A Lie algebra basis element with 0/1 entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub action: Action,
    pub size: usize,
    /// Nonzero entries, all equal to 1.
    pub support: Vec<(usize, usize)>,
    /// Whether the generator belongs to the chosen maximal torus basis.
    pub torus: bool,
}

impl Generator {
    fn unit(action: Action, size: usize, i: usize, j: usize) -> Self {
        Self {
            action,
            size,
            support: vec![(i, j)],
            torus: false,
        }
    }

    pub fn matrix(&self) -> Mat {
        let mut x = Mat::zeros(self.size, self.size);
        for &p in &self.support {
            x[p] = Complex64::new(1.0, 0.0);
        }
        x
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .support
            .iter()
            .map(|(i, j)| format!("E{}{}", i + 1, j + 1))
            .collect();
        let side = match self.action {
            Action::Right => " (right)",
            _ => "",
        };
        format!("{}{side}", parts.join("+"))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// An equidimensional representation from the factorization table.
#[derive(Clone, Debug)]
pub struct Representation {
    kind: Kind,
    m: usize,
    space: MatrixSpace,
    generators: Vec<Generator>,
}

fn borel(action: Action, n: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..=a {
            let mut g = Generator::unit(action, n, a, b);
            g.torus = a == b;
            out.push(g);
        }
    }
    out
}

fn nilpotent(n: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.push(Generator::unit(Action::Right, n, a, b));
        }
    }
    out
}

/// Upper triangular with a zero first row.
fn c_algebra(n: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for a in 1..n {
        for b in a..n {
            let mut g = Generator::unit(Action::Right, n, a, b);
            g.torus = a == b;
            out.push(g);
        }
    }
    out
}

/// Lower block entries plus one scalar `E_aa + E_{a+1,a+1}` per 2×2 block.
fn d_algebra(n: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for i in 0..n {
        let block_start = i - i % 2;
        for j in 0..block_start {
            out.push(Generator::unit(Action::Congruence, n, i, j));
        }
        if i % 2 == 0 && i + 1 < n {
            out.push(Generator {
                action: Action::Congruence,
                size: n,
                support: vec![(i, i), (i + 1, i + 1)],
                torus: true,
            });
        }
    }
    out
}

impl Representation {
    pub fn new(kind: Kind, m: usize) -> Result<Self, BlockError> {
        let space = kind.space(m)?;
        let generators = match kind {
            Kind::CholeskySym => borel(Action::Congruence, m),
            Kind::Lu => {
                let mut g = borel(Action::Left, m);
                g.extend(nilpotent(m));
                g
            }
            Kind::CholeskySkew => d_algebra(m),
            Kind::ModifiedLu => {
                let mut g = borel(Action::Left, m);
                g.extend(c_algebra(m));
                g
            }
            Kind::ModifiedRect => {
                let mut g = borel(Action::Left, m - 1);
                g.extend(c_algebra(m));
                g
            }
        };
        if generators.len() != space.dim() {
            return Err(BlockError::DimensionMismatch {
                generators: generators.len(),
                dim: space.dim(),
            });
        }
        Ok(Self {
            kind,
            m,
            space,
            generators,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Indices of the maximal torus basis, in generator order.
    pub fn torus(&self) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&i| self.generators[i].torus)
            .collect()
    }

    /// `ξ_j(A)` as a dense matrix.
    pub fn vector_field(&self, j: usize, a: &Mat) -> Mat {
        let g = &self.generators[j];
        let x = g.matrix();
        match g.action {
            Action::Congruence => &x * a + a * x.transpose(),
            Action::Left => &x * a,
            Action::Right => -(a * &x),
        }
    }

    /// `exp(t·X_j)` as a group element.
    pub fn exp(&self, j: usize, t: Complex64) -> Result<GroupElement, MatError> {
        let g = &self.generators[j];
        let e = (g.matrix() * t).exp();
        let left_n = if self.kind == Kind::ModifiedRect {
            self.m - 1
        } else {
            self.m
        };
        match g.action {
            Action::Congruence => GroupElement::new(self.kind, self.m, e, None),
            Action::Left => {
                GroupElement::new(self.kind, self.m, e, Some(Mat::identity(self.m, self.m)))
            }
            Action::Right => {
                GroupElement::new(self.kind, self.m, Mat::identity(left_n, left_n), Some(e))
            }
        }
    }

    /// The coefficient matrix: column `j` holds the chart coordinates of
    /// `ξ_j`, each a linear form in the coordinates.
    pub fn coefficient_matrix(&self) -> CoefficientMatrix {
        let a = symbolic_matrix(&self.space);
        let n = self.dim();
        let positions = self.space.positions();
        let mut grid = vec![vec![Polynomial::zero(n); n]; n];
        for (j, g) in self.generators.iter().enumerate() {
            let field = symbolic_field(g, &a, n);
            for (row, &(p, q)) in positions.iter().enumerate() {
                grid[row][j] = field[p][q].clone();
            }
        }
        CoefficientMatrix {
            entries: grid,
            row_names: self.space.var_names(),
            col_labels: self.generators.iter().map(Generator::label).collect(),
        }
    }
}

fn symbolic_field(g: &Generator, a: &[Vec<Polynomial>], n: usize) -> Vec<Vec<Polynomial>> {
    let rows = a.len();
    let cols = a[0].len();
    let mut out = vec![vec![Polynomial::zero(n); cols]; rows];
    for &(s, t) in &g.support {
        match g.action {
            // X A: row s gains row t of A; A Xᵀ: column s gains column t
            Action::Congruence => {
                for c in 0..cols {
                    out[s][c] = &out[s][c] + &a[t][c];
                }
                for r in 0..rows {
                    out[r][s] = &out[r][s] + &a[r][t];
                }
            }
            Action::Left => {
                for c in 0..cols {
                    out[s][c] = &out[s][c] + &a[t][c];
                }
            }
            // −A Y: column t loses column s of A
            Action::Right => {
                for r in 0..rows {
                    out[r][t] = &out[r][t] - &a[r][s];
                }
            }
        }
    }
    out
}

/// Square grid of linear forms: rows are chart coordinates, columns are
/// generators.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMatrix {
    pub entries: Vec<Vec<Polynomial>>,
    pub row_names: Vec<String>,
    pub col_labels: Vec<String>,
}

impl CoefficientMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn determinant(&self) -> Result<Polynomial, PolyError> {
        crate::poly::det_poly(&self.entries, self.size())
    }

    pub fn eval(&self, coords: &[Complex64]) -> Result<Mat, PolyError> {
        let n = self.size();
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.entries[i][j].eval(coords)?;
            }
        }
        Ok(out)
    }

    pub fn max_degree(&self) -> u32 {
        self.entries
            .iter()
            .flatten()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }
}
