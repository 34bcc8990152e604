use std::collections::BTreeSet;

use super::{BlockError, CoefficientMatrix, Representation};
use crate::matcore::{act, Kind, Point};
use crate::poly::{det_poly, Polynomial};
use crate::random;

const INVARIANCE_TOL: f64 = 1e-10;
const INVARIANCE_GROUPS: usize = 5;
const INVARIANCE_POINTS: usize = 4;

/// Nested coordinate subsets `W_1 ⊂ W_2 ⊂ … ⊂ W_k = V`, each given by the
/// chart coordinates it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    levels: Vec<BTreeSet<usize>>,
}

impl Filtration {
    pub fn new(levels: Vec<Vec<usize>>, dim: usize) -> Result<Self, BlockError> {
        let levels: Vec<BTreeSet<usize>> = levels
            .into_iter()
            .map(|l| l.into_iter().collect())
            .collect();
        let Some(last) = levels.last() else {
            return Err(BlockError::InvalidFiltration("no subspaces given".into()));
        };
        if let Some(&bad) = levels.iter().flatten().find(|&&c| c >= dim) {
            return Err(BlockError::InvalidFiltration(format!(
                "coordinate {bad} out of range for dimension {dim}"
            )));
        }
        if last.len() != dim {
            return Err(BlockError::InvalidFiltration(
                "the last subspace must be the whole space".into(),
            ));
        }
        for (j, pair) in levels.windows(2).enumerate() {
            if pair[0].is_empty() || !pair[0].is_subset(&pair[1]) || pair[0].len() == pair[1].len()
            {
                return Err(BlockError::InvalidFiltration(format!(
                    "W_{} is not a nonempty proper subset of W_{}",
                    j + 1,
                    j + 2
                )));
            }
        }
        Ok(Self { levels })
    }

    /// Builds a filtration from coordinate names.
    pub fn from_names(levels: &[Vec<String>], names: &[String]) -> Result<Self, BlockError> {
        let idx = levels
            .iter()
            .map(|l| {
                l.iter()
                    .map(|s| {
                        names.iter().position(|n| n == s).ok_or_else(|| {
                            BlockError::InvalidFiltration(format!("unknown coordinate '{s}'"))
                        })
                    })
                    .collect::<Result<Vec<usize>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(idx, names.len())
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, j: usize) -> &BTreeSet<usize> {
        &self.levels[j]
    }

    /// Smallest 0-based level containing every coordinate of `support`.
    fn level_of(&self, support: &BTreeSet<usize>) -> usize {
        self.levels
            .iter()
            .position(|w| support.is_subset(w))
            .expect("last level is the whole space")
    }

    /// Coordinates of `W_j \ W_{j-1}`.
    fn layer(&self, j: usize) -> Vec<usize> {
        match j {
            0 => self.levels[0].iter().copied().collect(),
            _ => self.levels[j]
                .difference(&self.levels[j - 1])
                .copied()
                .collect(),
        }
    }
}

/// The built-in filtration: each `W_j` is the set of matrices vanishing on a
/// leading corner, the corners shrinking as `j` grows.
pub fn default_filtration(kind: Kind, m: usize) -> Result<Filtration, BlockError> {
    let space = kind.space(m)?;
    let (rows, cols) = (space.rows(), space.cols());
    let corners: Vec<(usize, usize)> = match kind {
        Kind::CholeskySym | Kind::Lu => (1..m).rev().map(|k| (k, k)).collect(),
        Kind::CholeskySkew => (1..=(m - 1) / 2).rev().map(|k| (2 * k, 2 * k)).collect(),
        Kind::ModifiedLu | Kind::ModifiedRect => {
            let mut c = Vec::new();
            let (mut r, mut s) = (1, 1);
            while (r, s) != (rows, cols) {
                c.push((r, s));
                if s == r {
                    s += 1;
                } else {
                    r += 1;
                }
            }
            c.reverse();
            c
        }
    };
    let positions = space.positions();
    let mut levels: Vec<Vec<usize>> = corners
        .into_iter()
        .map(|(r, c)| {
            (0..positions.len())
                .filter(|&k| {
                    let (i, j) = positions[k];
                    !(i < r && j < c)
                })
                .collect()
        })
        .collect();
    levels.push((0..space.dim()).collect());
    Filtration::new(levels, space.dim())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalBlock {
    /// 1-based index `j` of the layer `W_j \ W_{j-1}` the block covers.
    pub level: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub p: Polynomial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockReport {
    /// Diagonal blocks from the top-left corner down.
    pub blocks: Vec<DiagonalBlock>,
    /// `∏ p_j`, equal to the coefficient determinant up to the sign of the
    /// row and column reordering.
    pub product: Polynomial,
    pub determinant: Polynomial,
    pub sign: i32,
}

impl BlockReport {
    pub fn product_matches(&self) -> bool {
        let signed = if self.sign < 0 {
            -&self.product
        } else {
            self.product.clone()
        };
        signed == self.determinant
    }
}

fn parity(order: &[usize]) -> i32 {
    let mut seen = vec![false; order.len()];
    let mut sign = 1;
    for start in 0..order.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = order[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn check_invariance(rep: &Representation, f: &Filtration, seed: u64) -> Result<(), BlockError> {
    let space = rep.space();
    let mut rng = random::rng(seed, 0x626c_6f63);
    for j in 0..f.len() {
        let w = f.level(j);
        for _ in 0..INVARIANCE_GROUPS {
            let g = random::group_element(rep.kind(), rep.size(), &mut rng);
            for _ in 0..INVARIANCE_POINTS {
                let coords = (0..space.dim())
                    .map(|k| {
                        let z = random::complex(&mut rng);
                        if w.contains(&k) {
                            z
                        } else {
                            Default::default()
                        }
                    })
                    .collect();
                let v = Point::new(space.clone(), coords)?;
                let out = act(&g, &v)?;
                let scale = out.coords().iter().map(|z| z.norm()).fold(0.0, f64::max);
                let leaks = out
                    .coords()
                    .iter()
                    .enumerate()
                    .any(|(k, z)| !w.contains(&k) && z.norm() > INVARIANCE_TOL * (1.0 + scale));
                if leaks {
                    return Err(BlockError::NotInvariant(j + 1));
                }
            }
        }
    }
    Ok(())
}

/// Checks invariance of every `W_j`, reorders the coefficient matrix into
/// block lower triangular form and extracts the diagonal block determinants.
pub fn verify_block_structure(
    rep: &Representation,
    filtration: &Filtration,
    seed: u64,
) -> Result<BlockReport, BlockError> {
    if filtration.level(filtration.len() - 1).len() != rep.dim() {
        return Err(BlockError::InvalidFiltration(
            "filtration does not match the representation".into(),
        ));
    }
    check_invariance(rep, filtration, seed)?;
    let cm: CoefficientMatrix = rep.coefficient_matrix();
    let n = rep.dim();
    let k = filtration.len();

    let col_level: Vec<usize> = (0..n)
        .map(|c| {
            let support: BTreeSet<usize> =
                (0..n).filter(|&r| !cm.entries[r][c].is_zero()).collect();
            filtration.level_of(&support)
        })
        .collect();
    let mut cols: Vec<usize> = (0..n).collect();
    cols.sort_by_key(|&c| std::cmp::Reverse(col_level[c]));

    let mut blocks = Vec::with_capacity(k);
    let mut col_start = 0;
    for level in (0..k).rev() {
        let rows = filtration.layer(level);
        let width = rows.len();
        let bcols = cols[col_start..col_start + width].to_vec();
        col_start += width;
        blocks.push((level, rows, bcols));
    }

    for (bi, (row_level, rows, _)) in blocks.iter().enumerate() {
        for (col_level, _, bcols) in blocks.iter().skip(bi + 1) {
            let nonzero = rows
                .iter()
                .any(|&r| bcols.iter().any(|&c| !cm.entries[r][c].is_zero()));
            if nonzero {
                return Err(BlockError::NotBlockTriangular(row_level + 1, col_level + 1));
            }
        }
    }

    let mut out = Vec::with_capacity(k);
    let mut product = Polynomial::one(n);
    for (level, rows, bcols) in blocks {
        let grid: Vec<Vec<Polynomial>> = rows
            .iter()
            .map(|&r| bcols.iter().map(|&c| cm.entries[r][c].clone()).collect())
            .collect();
        let p = det_poly(&grid, n)?;
        if p.is_zero() {
            return Err(BlockError::SingularBlock(level + 1));
        }
        product = &product * &p;
        out.push(DiagonalBlock {
            level: level + 1,
            rows,
            cols: bcols,
            p,
        });
    }
    let row_order: Vec<usize> = out.iter().flat_map(|b| b.rows.iter().copied()).collect();
    let sign = parity(&row_order) * parity(&cols);
    Ok(BlockReport {
        blocks: out,
        product,
        determinant: cm.determinant()?,
        sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym2() -> Representation {
        Representation::new(Kind::CholeskySym, 2).unwrap()
    }

    fn names(r: &Representation) -> Vec<String> {
        r.space().var_names()
    }

    fn by_name(r: &Representation, levels: &[&[&str]]) -> Filtration {
        let l: Vec<Vec<String>> = levels
            .iter()
            .map(|l| l.iter().map(|s| s.to_string()).collect())
            .collect();
        Filtration::from_names(&l, &names(r)).unwrap()
    }

    #[test]
    fn sym2_default() {
        let r = sym2();
        let f = default_filtration(Kind::CholeskySym, 2).unwrap();
        assert_eq!(f, by_name(&r, &[&["y", "z"], &["x", "y", "z"]]));
        let rep = verify_block_structure(&r, &f, 1).unwrap();
        let n = names(&r);
        let ps: Vec<Polynomial> = rep.blocks.iter().map(|b| b.p.clone()).collect();
        assert_eq!(
            ps,
            vec![
                Polynomial::parse("2*x", &n).unwrap(),
                Polynomial::parse("2*x*z - 2*y^2", &n).unwrap()
            ]
        );
        assert!(rep.product_matches());
    }

    #[test]
    fn three_step_chain_is_not_triangular() {
        let r = sym2();
        let f = by_name(&r, &[&["z"], &["y", "z"], &["x", "y", "z"]]);
        assert_eq!(
            verify_block_structure(&r, &f, 1),
            Err(BlockError::NotBlockTriangular(2, 1))
        );
    }

    #[test]
    fn wrong_subspace_is_not_invariant() {
        let r = sym2();
        let f = by_name(&r, &[&["x"], &["x", "y", "z"]]);
        assert_eq!(
            verify_block_structure(&r, &f, 1),
            Err(BlockError::NotInvariant(1))
        );
    }

    #[test]
    fn trivial_filtration_gives_full_determinant() {
        for kind in Kind::ALL {
            let m = kind.min_size().max(2);
            let r = Representation::new(kind, m).unwrap();
            let f = Filtration::new(vec![(0..r.dim()).collect()], r.dim()).unwrap();
            let rep = verify_block_structure(&r, &f, 2).unwrap();
            assert_eq!(rep.blocks.len(), 1);
            assert!(rep.product_matches());
        }
    }

    #[test]
    fn defaults_validate() {
        for kind in Kind::ALL {
            for m in kind.min_size()..=3 {
                let r = Representation::new(kind, m).unwrap();
                let f = default_filtration(kind, m).unwrap();
                let rep = verify_block_structure(&r, &f, 3).unwrap();
                assert!(rep.product_matches(), "{kind} m={m}");
            }
        }
    }

    #[test]
    fn malformed_filtrations() {
        assert!(Filtration::new(vec![], 3).is_err());
        assert!(Filtration::new(vec![vec![0, 1]], 3).is_err());
        assert!(Filtration::new(vec![vec![0], vec![1, 2], vec![0, 1, 2]], 3).is_err());
        assert!(Filtration::new(vec![vec![0, 5], vec![0, 1, 2]], 3).is_err());
    }

    #[test]
    fn parity_of_permutations() {
        assert_eq!(parity(&[0, 1, 2]), 1);
        assert_eq!(parity(&[1, 0, 2]), -1);
        assert_eq!(parity(&[1, 2, 0]), 1);
    }
}
