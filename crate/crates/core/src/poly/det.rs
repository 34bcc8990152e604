use super::{PolyError, Polynomial};

/// Largest grid accepted by [`det_poly`].
pub const MAX_DET_SIZE: usize = 12;

fn validate(grid: &[Vec<Polynomial>], nvars: usize) -> Result<(), PolyError> {
    let n = grid.len();
    for (row, r) in grid.iter().enumerate() {
        if r.len() != n {
            return Err(PolyError::NotSquare {
                row,
                len: r.len(),
                expected: n,
            });
        }
        for p in r {
            if p.nvars() != nvars {
                return Err(PolyError::VariableMismatch {
                    left: nvars,
                    right: p.nvars(),
                });
            }
        }
    }
    Ok(())
}

/// Exact determinant of a square grid of polynomials in `nvars` variables.
///
/// Grids up to 4x4 use cofactor expansion; larger ones use Bareiss
/// fraction-free elimination, choosing the sparsest nonzero pivot in each
/// column. Every Bareiss division is exact by Sylvester's identity, so an
/// inexact one is reported as an internal error.
pub fn det_poly(grid: &[Vec<Polynomial>], nvars: usize) -> Result<Polynomial, PolyError> {
    validate(grid, nvars)?;
    let n = grid.len();
    if n > MAX_DET_SIZE {
        return Err(PolyError::CapacityExceeded {
            size: n,
            max: MAX_DET_SIZE,
        });
    }
    if n <= 4 {
        Ok(cofactor(grid, nvars))
    } else {
        bareiss(grid.to_vec(), nvars)
    }
}

pub(crate) fn cofactor(grid: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    let n = grid.len();
    let cols: Vec<usize> = (0..n).collect();
    cofactor_rec(grid, 0, &cols, nvars)
}

fn cofactor_rec(grid: &[Vec<Polynomial>], row: usize, cols: &[usize], nvars: usize) -> Polynomial {
    if cols.is_empty() {
        return Polynomial::one(nvars);
    }
    let mut acc = Polynomial::zero(nvars);
    for (k, &c) in cols.iter().enumerate() {
        let entry = &grid[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = cofactor_rec(grid, row + 1, &rest, nvars);
        let term = entry * &minor;
        acc = if k % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

pub(crate) fn bareiss(mut m: Vec<Vec<Polynomial>>, nvars: usize) -> Result<Polynomial, PolyError> {
    let n = m.len();
    if n == 0 {
        return Ok(Polynomial::one(nvars));
    }
    let mut negate = false;
    let mut prev = Polynomial::one(nvars);
    for k in 0..n.saturating_sub(1) {
        let pivot = (k..n)
            .filter(|&r| !m[r][k].is_zero())
            .min_by_key(|&r| m[r][k].num_terms());
        let Some(p) = pivot else {
            return Ok(Polynomial::zero(nvars));
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = if k == 0 {
                    num
                } else {
                    num.try_divide(&prev)?
                        .ok_or(PolyError::InexactElimination)?
                };
            }
            m[i][k] = Polynomial::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Pfaffian of a skew-symmetric grid (only the strict upper triangle is
/// read), by expansion along the first row.
pub fn pfaffian_poly(grid: &[Vec<Polynomial>], nvars: usize) -> Result<Polynomial, PolyError> {
    validate(grid, nvars)?;
    let idx: Vec<usize> = (0..grid.len()).collect();
    Ok(pfaffian_rec(grid, &idx, nvars))
}

fn pfaffian_rec(grid: &[Vec<Polynomial>], idx: &[usize], nvars: usize) -> Polynomial {
    if idx.is_empty() {
        return Polynomial::one(nvars);
    }
    if idx.len() % 2 == 1 {
        return Polynomial::zero(nvars);
    }
    let first = idx[0];
    let mut acc = Polynomial::zero(nvars);
    for (k, &j) in idx.iter().enumerate().skip(1) {
        let entry = &grid[first][j];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != j).collect();
        let sub = pfaffian_rec(grid, &rest, nvars);
        let term = entry * &sub;
        // sign (-1)^(k+1) with k counted from 1 over the remaining indices
        acc = if k % 2 == 1 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}
