use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::finite::FiniteRootSystem;
use crate::linalg::BilinearSpace;
use crate::rational::{Rational, RationalVector};

/// Roots of `R(C)` (or `R(C)_J`) up to a height bound.
#[derive(Clone, Debug)]
pub struct RealRoots {
    pub system: FiniteRootSystem,
    /// True when some reflection left the height bound, so the closure did
    /// not stabilize inside it.
    pub truncated: bool,
    pub height_bound: u64,
}

/// Sum of absolute simple-root coordinates.
pub fn height(v: &RationalVector) -> Rational {
    v.iter().fold(Rational::ZERO, |acc, x| acc + x.abs())
}

fn validate(c: &[Vec<Rational>], j: &[usize]) -> Result<()> {
    let n = c.len();
    if n == 0 {
        return Err(Error::BadMatrix("empty matrix".into()));
    }
    for (i, row) in c.iter().enumerate() {
        if row.len() != n {
            return Err(Error::BadMatrix(format!("row {i} has length {}", row.len())));
        }
        if row[i].is_zero() {
            return Err(Error::BadMatrix(format!("zero diagonal entry at {i}")));
        }
        for (k, x) in row.iter().enumerate() {
            if *x != c[k][i] {
                return Err(Error::BadMatrix(format!("not symmetric at ({i},{k})")));
            }
            if !(Rational::int(2) * *x / row[i]).is_integer() {
                return Err(Error::BadMatrix(format!("2c_{i}{k}/c_{i}{i} is not an integer")));
            }
        }
    }
    for &jj in j {
        if jj >= n {
            return Err(Error::BadMatrix(format!("index {jj} out of range")));
        }
        if (0..n).any(|i| !(c[i][jj] / c[jj][jj]).is_integer()) {
            return Err(Error::BadMatrix(format!("c_i{jj}/c_{jj}{jj} is not an integer for some i")));
        }
    }
    Ok(())
}

/// Closure of the simple roots (and `2α_j`, `j ∈ J`) under the simple
/// reflections, keeping roots of height at most `height_bound`.
pub fn real_roots_from_matrix(c: &[Vec<Rational>], j: &[usize], height_bound: u64) -> Result<RealRoots> {
    validate(c, j)?;
    if height_bound == 0 {
        return Err(Error::BadMatrix("height bound must be positive".into()));
    }
    let n = c.len();
    let space = BilinearSpace::new(c.iter().map(|r| RationalVector(r.clone())).collect())
        .map_err(|e| Error::BadMatrix(e.to_string()))?;
    let bound = Rational::int(height_bound as i128);
    let mut seen: BTreeSet<RationalVector> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        queue.push_back(RationalVector::unit(n, i));
    }
    for &jj in j {
        queue.push_back(RationalVector::unit(n, jj).scale(Rational::int(2)));
    }
    let mut truncated = false;
    while let Some(v) = queue.pop_front() {
        if height(&v) > bound {
            truncated = true;
            continue;
        }
        if !seen.insert(v.clone()) {
            continue;
        }
        for i in 0..n {
            let a = RationalVector::unit(n, i);
            let k = Rational::int(2) * space.form(&a, &v) / c[i][i];
            if !k.is_zero() {
                queue.push_back(&v - &a.scale(k));
            }
        }
    }
    let system = FiniteRootSystem::new(space, seen.into_iter().collect())?;
    Ok(RealRoots { system, truncated, height_bound })
}

impl RealRoots {
    /// Pairs `(α, β)` of roots with `r_α(β)` inside the height bound but not
    /// in the set. Empty when the set is closed as far as the bound allows.
    pub fn closure_violations(&self) -> Vec<(RationalVector, RationalVector)> {
        let bound = Rational::int(self.height_bound as i128);
        let mut out = Vec::new();
        for a in self.system.roots() {
            for b in self.system.roots() {
                let img = self.system.reflect_root(a, &b.vector).expect("non-isotropic");
                if height(&img) <= bound && !self.system.contains(&img) {
                    out.push((a.vector.clone(), b.vector.clone()));
                }
            }
        }
        out
    }
}
