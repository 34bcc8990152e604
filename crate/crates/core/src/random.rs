//! Seeded sampling of points, orbit points and group elements.
//!
//! Every check draws from its own ChaCha8 stream of the user seed, so adding
//! a check never shifts the numbers seen by another one.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matcore::{first_vanishing_minor, GroupElement, Kind, Mat, MatrixSpace, Point};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Real and imaginary parts uniform in `[-1, 1]`.
pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

/// Modulus uniform in `[1/2, 2]`, argument uniform; never near zero.
pub fn unit_scale<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let r: f64 = rng.random_range(0.5..=2.0);
    let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, t)
}

pub fn point<R: Rng + ?Sized>(space: &MatrixSpace, rng: &mut R) -> Point {
    let coords = (0..space.dim()).map(|_| complex(rng)).collect();
    Point::new(space.clone(), coords).expect("coordinate count matches the space")
}

/// A random point of the open orbit, by rejection on the defining minors.
pub fn orbit_point<R: Rng + ?Sized>(kind: Kind, m: usize, rng: &mut R) -> Point {
    let space = kind.space(m).expect("valid size");
    loop {
        let p = point(&space, rng);
        if first_vanishing_minor(kind, &p.matrix())
            .expect("shape matches")
            .is_none()
        {
            return p;
        }
    }
}

fn borel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    Mat::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => complex(rng),
        std::cmp::Ordering::Equal => unit_scale(rng),
        std::cmp::Ordering::Less => Complex64::new(0.0, 0.0),
    })
}

fn c_shape<R: Rng + ?Sized>(m: usize, rng: &mut R, unit_diag: bool) -> Mat {
    let mut c = Mat::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            c[(i, j)] = if i == j {
                if unit_diag || i == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    unit_scale(rng)
                }
            } else if i == 0 && !unit_diag {
                Complex64::new(0.0, 0.0)
            } else {
                complex(rng)
            };
        }
    }
    c
}

fn block<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Mat {
    let mut b = Mat::zeros(m, m);
    for k in (0..m / 2).map(|k| 2 * k) {
        let r = unit_scale(rng);
        b[(k, k)] = r;
        b[(k + 1, k + 1)] = r;
    }
    if m % 2 == 1 {
        b[(m - 1, m - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..m {
        for j in 0..i - i % 2 {
            b[(i, j)] = complex(rng);
        }
    }
    b
}

pub fn group_element<R: Rng + ?Sized>(kind: Kind, m: usize, rng: &mut R) -> GroupElement {
    let (left, right) = match kind {
        Kind::CholeskySym => (borel(m, rng), None),
        Kind::Lu => (borel(m, rng), Some(c_shape(m, rng, true))),
        Kind::CholeskySkew => (block(m, rng), None),
        Kind::ModifiedLu => (borel(m, rng), Some(c_shape(m, rng, false))),
        Kind::ModifiedRect => (borel(m - 1, rng), Some(c_shape(m, rng, false))),
    };
    GroupElement::new(kind, m, left, right).expect("sampled inside the group")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::act;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: f64 = rng(7, 0).random();
        let b: f64 = rng(7, 0).random();
        let c: f64 = rng(7, 1).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sampled_elements_validate() {
        let mut r = rng(1, 0);
        for kind in Kind::ALL {
            for m in kind.min_size()..=5 {
                let g = group_element(kind, m, &mut r);
                let p = orbit_point(kind, m, &mut r);
                act(&g, &p).unwrap();
            }
        }
    }
}
