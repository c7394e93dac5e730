//! Rational matrices, the Gram form and its radical.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{Rational, RationalVector};

/// Reduced row echelon form. Pivots are chosen as the first nonzero column,
/// so the result depends only on the row space.
pub fn rref(rows: &[RationalVector]) -> (Vec<RationalVector>, Vec<usize>) {
    let mut m: Vec<RationalVector> = rows.to_vec();
    let ncols = m.first().map_or(0, RationalVector::dim);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        m[r] = m[r].scale(inv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                let row = m[r].scale(f);
                m[i] = &m[i] - &row;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(vs: &[RationalVector]) -> usize {
    rref(vs).1.len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[RationalVector], ncols: usize) -> Vec<RationalVector> {
    let (r, pivots) = rref(rows);
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = RationalVector::zeros(ncols);
        v[f] = Rational::ONE;
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[f];
        }
        basis.push(v);
    }
    basis
}

/// Coefficients `c` with `Σ c_i basis_i = v`, if any.
pub fn solve(basis: &[RationalVector], v: &RationalVector) -> Option<Vec<Rational>> {
    let m = basis.len();
    let dim = v.dim();
    // Rows of the augmented system [B^T | v].
    let rows: Vec<RationalVector> = (0..dim)
        .map(|j| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[j]).collect();
            row.push(v[j]);
            RationalVector(row)
        })
        .collect();
    let (r, pivots) = rref(&rows);
    if pivots.contains(&m) {
        return None;
    }
    let mut coeffs = vec![Rational::ZERO; m];
    for (row, &p) in r.iter().zip(&pivots) {
        coeffs[p] = row[m];
    }
    Some(coeffs)
}

/// Greedy choice of linearly independent vectors, in the given order.
pub fn independent_subset(vs: &[RationalVector]) -> Vec<usize> {
    let mut chosen: Vec<RationalVector> = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in vs.iter().enumerate() {
        chosen.push(v.clone());
        if rank(&chosen) == chosen.len() {
            idx.push(i);
        } else {
            chosen.pop();
        }
    }
    idx
}

pub fn combine(coeffs: &[Rational], basis: &[RationalVector], dim: usize) -> RationalVector {
    let mut out = RationalVector::zeros(dim);
    for (c, b) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            out = &out + &b.scale(*c);
        }
    }
    out
}

/// A finite-dimensional rational space with a symmetric bilinear form,
/// given by its Gram matrix in the standard basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<RationalVector>", into = "Vec<RationalVector>")]
pub struct BilinearSpace {
    gram: Vec<RationalVector>,
}

impl TryFrom<Vec<RationalVector>> for BilinearSpace {
    type Error = Error;
    fn try_from(gram: Vec<RationalVector>) -> Result<Self> {
        BilinearSpace::new(gram)
    }
}

impl From<BilinearSpace> for Vec<RationalVector> {
    fn from(s: BilinearSpace) -> Self {
        s.gram
    }
}

impl BilinearSpace {
    pub fn new(gram: Vec<RationalVector>) -> Result<Self> {
        let n = gram.len();
        for row in &gram {
            if row.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.dim() });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Invalid(format!("Gram matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(BilinearSpace { gram })
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| {
                let mut row = RationalVector::zeros(n);
                row[i] = entries[i];
                row
            })
            .collect();
        BilinearSpace { gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[RationalVector] {
        &self.gram
    }

    pub fn check_dim(&self, v: &RationalVector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.dim() });
        }
        Ok(())
    }

    pub fn form_eval(&self, u: &RationalVector, v: &RationalVector) -> Result<Rational> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(self.form(u, v))
    }

    /// `uᵀ G v`, without the dimension check.
    pub fn form(&self, u: &RationalVector, v: &RationalVector) -> Rational {
        let mut acc = Rational::ZERO;
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            acc += *ui * self.gram[i].dot(v);
        }
        acc
    }

    pub fn norm(&self, v: &RationalVector) -> Rational {
        self.form(v, v)
    }

    /// `G v`; zero exactly when `v` lies in the radical.
    pub fn pairing(&self, v: &RationalVector) -> RationalVector {
        RationalVector(self.gram.iter().map(|row| row.dot(v)).collect())
    }

    pub fn in_kernel(&self, v: &RationalVector) -> bool {
        self.pairing(v).is_zero()
    }

    /// Basis of the radical `Ker(−,−)`; empty iff the form is nondegenerate.
    pub fn kernel_basis(&self) -> Vec<RationalVector> {
        nullspace(&self.gram, self.dim())
    }

    pub fn is_nondegenerate(&self) -> bool {
        rank(&self.gram) == self.dim()
    }

    /// The form restricted to the span of `basis`, in that basis.
    pub fn restrict(&self, basis: &[RationalVector]) -> BilinearSpace {
        let gram = basis
            .iter()
            .map(|u| RationalVector(basis.iter().map(|v| self.form(u, v)).collect()))
            .collect();
        BilinearSpace { gram }
    }

    /// Orthogonal direct sum with `k` extra isotropic directions in the radical.
    pub fn extend_by_kernel(&self, k: usize) -> BilinearSpace {
        let n = self.dim();
        let gram = (0..n + k)
            .map(|i| {
                let mut row = RationalVector::zeros(n + k);
                if i < n {
                    for j in 0..n {
                        row[j] = self.gram[i][j];
                    }
                }
                row
            })
            .collect();
        BilinearSpace { gram }
    }

    /// Gram matrix scaled by a constant.
    pub fn scaled(&self, c: Rational) -> BilinearSpace {
        BilinearSpace { gram: self.gram.iter().map(|r| r.scale(c)).collect() }
    }
}

/// Free-standing form evaluation.
pub fn form_eval(space: &BilinearSpace, u: &RationalVector, v: &RationalVector) -> Result<Rational> {
    space.form_eval(u, v)
}

pub fn kernel_basis(space: &BilinearSpace) -> Vec<RationalVector> {
    space.kernel_basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v(xs: &[i64]) -> RationalVector {
        RationalVector::from_ints(xs)
    }

    #[test]
    fn orthonormal_eval() {
        let s = BilinearSpace::diagonal(&[q(1, 1), q(1, 1)]);
        assert_eq!(s.form_eval(&v(&[1, 0]), &v(&[1, 0])).unwrap(), q(1, 1));
        assert!(matches!(
            s.form_eval(&v(&[1]), &v(&[1, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn super_plane_isotropic_vectors() {
        // (e,e) = 1/2, (d,d) = -1/2
        let s = BilinearSpace::diagonal(&[q(1, 2), q(-1, 2)]);
        assert_eq!(s.form(&v(&[1, 1]), &v(&[1, 1])), q(0, 1));
        assert_eq!(s.form(&v(&[1, 1]), &v(&[1, -1])), q(1, 1));
    }

    #[test]
    fn kernel_of_nondegenerate_is_empty() {
        let s = BilinearSpace::diagonal(&[q(1, 1), q(2, 1), q(-1, 1)]);
        assert!(s.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_affinized_space_is_delta_axis() {
        let s = BilinearSpace::diagonal(&[q(1, 1), q(1, 1)]).extend_by_kernel(1);
        assert_eq!(s.kernel_basis(), vec![v(&[0, 0, 1])]);
    }

    #[test]
    fn solve_and_rank() {
        let b = vec![v(&[1, 1, 0]), v(&[0, 1, 1])];
        assert_eq!(solve(&b, &v(&[1, 2, 1])), Some(vec![q(1, 1), q(1, 1)]));
        assert_eq!(solve(&b, &v(&[1, 0, 0])), None);
        assert_eq!(rank(&[v(&[1, 2]), v(&[2, 4])]), 1);
        assert_eq!(independent_subset(&[v(&[1, 2]), v(&[2, 4]), v(&[0, 1])]), vec![0, 2]);
    }
}
