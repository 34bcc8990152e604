use std::fmt;

use serde::Serialize;

use super::{BlockError, Representation};
use crate::matcore::{Kind, MatrixSpace, MinorFamily, SpaceKind};
use crate::poly::{det_poly, pfaffian_poly, Coeff, Polynomial};

/// The matrix of chart variables, e.g. `[[x, y], [y, z]]` on `Sym_2`.
pub fn symbolic_matrix(space: &MatrixSpace) -> Vec<Vec<Polynomial>> {
    let n = space.dim();
    let mut a = vec![vec![Polynomial::zero(n); space.cols()]; space.rows()];
    for (k, (i, j)) in space.positions().into_iter().enumerate() {
        let v = Polynomial::var(n, k);
        match space.kind() {
            SpaceKind::Sym => a[j][i] = v.clone(),
            SpaceKind::Skew => a[j][i] = -&v,
            SpaceKind::Gen => {}
        }
        a[i][j] = v;
    }
    a
}

/// One basic relative invariant as a polynomial in the chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub family: MinorFamily,
    /// Order of the minor (`2k` for a skew Pfaffian of a `2k` corner).
    pub size: usize,
    pub pfaffian: bool,
    pub poly: Polynomial,
}

impl Factor {
    pub fn label(&self) -> String {
        let base = match self.family {
            MinorFamily::Plain => "A",
            MinorFamily::Hat => "Â",
        };
        let op = if self.pfaffian { "Pf" } else { "det" };
        format!("{op} {base}^({})", self.size)
    }
}

/// The basic relative invariants in peeling order: plain leading minors,
/// then hat minors, smallest first; leading Pfaffians for skew.
pub fn expected_factors(kind: Kind, m: usize) -> Result<Vec<Factor>, BlockError> {
    let space = kind.space(m)?;
    let n = space.dim();
    let a = symbolic_matrix(&space);
    let corner = |rows: usize, col0: usize| -> Vec<Vec<Polynomial>> {
        a[..rows]
            .iter()
            .map(|r| r[col0..col0 + rows].to_vec())
            .collect()
    };
    let mut out = Vec::new();
    for spec in kind.required_minors(m) {
        let grid = match spec.family {
            MinorFamily::Plain => corner(spec.size, 0),
            MinorFamily::Hat => corner(spec.size, 1),
        };
        let pfaffian = kind == Kind::CholeskySkew;
        let poly = if pfaffian {
            pfaffian_poly(&grid, n)?
        } else {
            det_poly(&grid, n)?
        };
        out.push(Factor {
            family: spec.family,
            size: spec.size,
            pfaffian,
            poly,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Free,
    #[serde(rename = "Free*")]
    FreeStar,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Free => "Free",
            Verdict::FreeStar => "Free*",
        })
    }
}

/// `det = constant · ∏ p_j^{e_j}` over the expected factors.
#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalFactored {
    pub determinant: Polynomial,
    pub constant: Coeff,
    pub factors: Vec<(Factor, u32)>,
    pub verdict: Verdict,
}

impl ExceptionalFactored {
    /// `∏ p_j` over the factors that occur, i.e. the reduced equation.
    pub fn reduced(&self) -> Polynomial {
        let n = self.determinant.nvars();
        self.factors
            .iter()
            .filter(|(_, e)| *e > 0)
            .fold(Polynomial::one(n), |acc, (f, _)| &acc * &f.poly)
    }

    /// `constant · ∏ p_j^{e_j}`.
    pub fn expand(&self) -> Polynomial {
        let n = self.determinant.nvars();
        self.factors.iter().fold(
            Polynomial::constant(n, self.constant.clone()),
            |acc, (f, e)| &acc * &f.poly.pow(*e),
        )
    }
}

/// Computes the coefficient determinant and peels the expected factors off
/// by repeated exact division.
pub fn exceptional_equation(rep: &Representation) -> Result<ExceptionalFactored, BlockError> {
    let det = rep.coefficient_matrix().determinant()?;
    let expected = expected_factors(rep.kind(), rep.size())?;
    for (i, f) in expected.iter().enumerate() {
        for (j, g) in expected.iter().enumerate().skip(i + 1) {
            if f.poly.is_associate(&g.poly) {
                return Err(BlockError::DuplicateFactor {
                    first: i + 1,
                    second: j + 1,
                });
            }
        }
    }
    let mut rest = det.clone();
    let mut factors = Vec::with_capacity(expected.len());
    for f in expected {
        let mut e = 0u32;
        if !f.poly.is_constant() {
            while let Some(q) = rest.try_divide(&f.poly)? {
                rest = q;
                e += 1;
            }
        }
        factors.push((f, e));
    }
    let constant = match rest.as_constant() {
        Some(c) if !c.is_zero() => c,
        _ => {
            let names = rep.space().var_names();
            return Err(BlockError::ResidualNotConstant {
                residual: rest.to_string_with(&names),
            });
        }
    };
    let verdict = if factors.iter().all(|(_, e)| *e == 1) {
        Verdict::Free
    } else {
        Verdict::FreeStar
    };
    Ok(ExceptionalFactored {
        determinant: det,
        constant,
        factors,
        verdict,
    })
}
