use nalgebra::DMatrix;
use num_complex::Complex64;

use super::MatError;

pub type Mat = DMatrix<Complex64>;

/// Relative threshold for deciding that a minor of order `k` is nonzero.
pub const MINOR_REL_TOL: f64 = 1e-10;

/// Max absolute row sum.
pub fn norm_inf(a: &Mat) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `|v| > 1e-10 (1 + ‖A‖∞^k)`.
pub fn minor_is_nonzero(v: Complex64, norm: f64, k: usize) -> bool {
    v.norm() > MINOR_REL_TOL * (1.0 + norm.powi(k as i32))
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(a: &Mat) -> Complex64 {
    assert!(a.is_square(), "det of a non-square matrix");
    let n = a.nrows();
    let mut m = a.clone();
    let mut acc = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|r| (r, m[(r, k)].norm()))
            .fold((k, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            m.swap_rows(p, k);
            acc = -acc;
        }
        let piv = m[(k, k)];
        acc *= piv;
        for i in k + 1..n {
            let f = m[(i, k)] / piv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let t = m[(k, j)];
                m[(i, j)] -= f * t;
            }
        }
    }
    let out = acc;
    #[cfg(debug_assertions)]
    if n <= 4 {
        let c = det_cofactor(a);
        let scale = 1.0 + norm_inf(a).powi(n as i32);
        debug_assert!(
            (c - out).norm() <= 1e-9 * scale,
            "pivoted det {out} disagrees with cofactor det {c}"
        );
    }
    out
}

/// Cofactor expansion along the first row; exponential cost, used as a
/// cross-check for small matrices.
pub fn det_cofactor(a: &Mat) -> Complex64 {
    assert!(a.is_square(), "det of a non-square matrix");
    let cols: Vec<usize> = (0..a.ncols()).collect();
    cofactor_rec(a, 0, &cols)
}

fn cofactor_rec(a: &Mat, row: usize, cols: &[usize]) -> Complex64 {
    if cols.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = a[(row, c)] * cofactor_rec(a, row + 1, &rest);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `det A^(k)`, the upper-left `k × k` minor.
pub fn leading_minor(a: &Mat, k: usize) -> Result<Complex64, MatError> {
    let max = a.nrows().min(a.ncols());
    if k == 0 || k > max {
        return Err(MatError::MinorOutOfRange { k, max });
    }
    Ok(det(&a.view((0, 0), (k, k)).into_owned()))
}

/// `Â`: the matrix with its first column deleted.
pub fn hat(a: &Mat) -> Result<Mat, MatError> {
    if a.ncols() < 2 {
        return Err(MatError::TooFewColumns { cols: a.ncols() });
    }
    Ok(a.columns(1, a.ncols() - 1).into_owned())
}

/// Pfaffian of a skew-symmetric matrix by pivoted 2×2 block elimination.
/// Only the strict upper triangle is trusted; odd orders give zero.
pub fn pfaffian(a: &Mat) -> Complex64 {
    assert!(a.is_square(), "pfaffian of a non-square matrix");
    let n = a.nrows();
    let zero = Complex64::new(0.0, 0.0);
    if n % 2 == 1 {
        return zero;
    }
    let mut s = Mat::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => a[(i, j)],
        std::cmp::Ordering::Greater => -a[(j, i)],
        std::cmp::Ordering::Equal => zero,
    });
    let mut pf = Complex64::new(1.0, 0.0);
    let mut k = 0;
    while k < n {
        let (p, best) = (k + 1..n)
            .map(|j| (j, s[(k, j)].norm()))
            .fold((k + 1, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        if best == 0.0 {
            return zero;
        }
        if p != k + 1 {
            s.swap_rows(p, k + 1);
            s.swap_columns(p, k + 1);
            pf = -pf;
        }
        let piv = s[(k, k + 1)];
        pf *= piv;
        // Schur complement S22 + (c1 c0ᵀ - c0 c1ᵀ) / piv
        for i in k + 2..n {
            let c0i = s[(i, k)];
            let c1i = s[(i, k + 1)];
            for j in k + 2..n {
                let c0j = s[(j, k)];
                let c1j = s[(j, k + 1)];
                s[(i, j)] += (c1i * c0j - c0i * c1j) / piv;
            }
        }
        k += 2;
    }
    pf
}

/// Principal square root with argument in `(-π/2, π/2]`.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re == 0.0 && r.im < 0.0 {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_matches_cofactor_on_complex_input() {
        let a = Mat::from_fn(4, 4, |i, j| {
            c((i * 3 + j) as f64 % 5.0 - 2.0, (i + 2 * j) as f64 % 3.0)
        });
        assert!((det(&a) - det_cofactor(&a)).norm() < 1e-10);
    }

    #[test]
    fn det_needs_pivoting() {
        let a = Mat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        assert!((det(&a) - c(-1., 0.)).norm() < 1e-15);
    }

    #[test]
    fn leading_minor_bounds() {
        let a = Mat::identity(2, 3);
        assert!(leading_minor(&a, 2).is_ok());
        assert_eq!(
            leading_minor(&a, 3),
            Err(MatError::MinorOutOfRange { k: 3, max: 2 })
        );
        assert_eq!(
            leading_minor(&a, 0),
            Err(MatError::MinorOutOfRange { k: 0, max: 2 })
        );
    }

    #[test]
    fn hat_drops_first_column() {
        let a = Mat::from_fn(2, 3, |i, j| c((3 * i + j) as f64, 0.));
        let h = hat(&a).unwrap();
        assert_eq!(h.shape(), (2, 2));
        assert_eq!(h[(0, 0)], c(1., 0.));
        assert_eq!(h[(1, 1)], c(5., 0.));
        assert_eq!(
            hat(&Mat::identity(2, 1)),
            Err(MatError::TooFewColumns { cols: 1 })
        );
    }

    #[test]
    fn pfaffian_squared_is_det() {
        let n = 6;
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = c(
                    ((i * 7 + j * 3) % 5) as f64 - 2.0,
                    ((i + j) % 4) as f64 * 0.5,
                );
                a[(i, j)] = v;
                a[(j, i)] = -v;
            }
        }
        let pf = pfaffian(&a);
        assert!((pf * pf - det(&a)).norm() < 1e-9 * (1.0 + det(&a).norm()));
        assert_eq!(pfaffian(&Mat::zeros(3, 3)), c(0., 0.));
    }

    #[test]
    fn pfaffian_four_by_four_formula() {
        // Pf = x w - y v + z u with x=a12, y=a13, z=a14, u=a23, v=a24, w=a34
        let (x, y, z, u, v, w) = (
            c(1., 1.),
            c(2., 0.),
            c(0., -1.),
            c(3., 0.),
            c(-1., 2.),
            c(0.5, 0.),
        );
        let mut a = Mat::zeros(4, 4);
        for (i, j, val) in [
            (0, 1, x),
            (0, 2, y),
            (0, 3, z),
            (1, 2, u),
            (1, 3, v),
            (2, 3, w),
        ] {
            a[(i, j)] = val;
            a[(j, i)] = -val;
        }
        assert!((pfaffian(&a) - (x * w - y * v + z * u)).norm() < 1e-13);
    }

    #[test]
    fn sqrt_branch() {
        assert_eq!(principal_sqrt(c(-4., 0.)), c(0., 2.));
        let r = principal_sqrt(c(-4., -0.0));
        assert!(r.im > 0.0);
        assert!((principal_sqrt(c(0., 2.)) - c(1., 1.)).norm() < 1e-15);
    }
}
