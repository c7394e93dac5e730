//! Finitely generated subgroups of Qⁿ kept in Hermite normal form.
//!
//! A lattice is stored by the rows of the Hermite normal form of its
//! generators after clearing denominators, divided back by the common
//! denominator. The row form is unique for the group, so lattice equality is
//! structural equality.

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::rational::{Rational, RationalVector};

fn mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow in lattice arithmetic")
}

fn sub(a: i128, b: i128) -> i128 {
    a.checked_sub(b).expect("integer overflow in lattice arithmetic")
}

/// Row-style Hermite normal form of an integer matrix: echelon, positive
/// pivots, entries above each pivot reduced into `[0, pivot)`. Zero rows are
/// dropped.
pub fn hermite_normal_form(mut m: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            // Smallest nonzero |entry| at or below r becomes the pivot candidate.
            let Some(p) = (r..m.len())
                .filter(|&i| m[i][c] != 0)
                .min_by_key(|&i| m[i][c].abs())
            else {
                break;
            };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let f = Integer::div_floor(&m[i][c], &m[r][c]);
                    for j in 0..ncols {
                        m[i][j] = sub(m[i][j], mul(f, m[r][j]));
                    }
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            for x in m[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let f = Integer::div_floor(&m[i][c], &m[r][c]);
            if f != 0 {
                for j in 0..ncols {
                    m[i][j] = sub(m[i][j], mul(f, m[r][j]));
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|&x| x != 0));
    m
}

fn to_integer_rows(vs: &[RationalVector]) -> (Vec<Vec<i128>>, i128) {
    let d = vs.iter().fold(1i128, |acc, v| acc.lcm(&v.denom_lcm()));
    let rows = vs
        .iter()
        .map(|v| v.iter().map(|x| mul(x.numer(), d / x.denom())).collect())
        .collect();
    (rows, d)
}

/// A subgroup `Σ Z·vᵢ` of Qⁿ in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Lattice {
    dim: usize,
    basis: Vec<RationalVector>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: vec![] }
    }

    /// The standard lattice Zⁿ.
    pub fn standard(dim: usize) -> Self {
        Lattice { dim, basis: (0..dim).map(|i| RationalVector::unit(dim, i)).collect() }
    }

    pub fn from_vectors(dim: usize, vs: &[RationalVector]) -> Self {
        let vs: Vec<RationalVector> = vs.iter().filter(|v| !v.is_zero()).cloned().collect();
        if vs.is_empty() {
            return Lattice::zero(dim);
        }
        let (rows, d) = to_integer_rows(&vs);
        let dr = Rational::int(d);
        let basis = hermite_normal_form(rows)
            .into_iter()
            .map(|row| RationalVector(row.into_iter().map(|x| Rational::int(x) / dr).collect()))
            .collect();
        Lattice { dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[RationalVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn pivot(row: &RationalVector) -> usize {
        row.iter().position(|x| !x.is_zero()).expect("zero row in lattice basis")
    }

    /// Integer coordinates of `v` in the stored basis, if `v` is a member.
    pub fn coordinates(&self, v: &RationalVector) -> Option<Vec<i128>> {
        let mut w = v.clone();
        let mut coeffs = Vec::with_capacity(self.rank());
        for row in &self.basis {
            let c = Self::pivot(row);
            // Columns before this pivot and after the previous one must vanish.
            let f = w[c] / row[c];
            let f = f.to_integer()?;
            coeffs.push(f);
            if f != 0 {
                w = &w - &row.scale(Rational::int(f));
            }
        }
        w.is_zero().then_some(coeffs)
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Canonical representative of `v + self`: each pivot coordinate reduced
    /// into `[0, pivot)`.
    pub fn reduce(&self, v: &RationalVector) -> RationalVector {
        let mut w = v.clone();
        for row in &self.basis {
            let c = Self::pivot(row);
            let f = (w[c] / row[c]).floor();
            if f != 0 {
                w = &w - &row.scale(Rational::int(f));
            }
        }
        w
    }

    pub fn same_coset(&self, u: &RationalVector, v: &RationalVector) -> bool {
        self.contains(&(u - v))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Lattice::from_vectors(self.dim, &vs)
    }

    pub fn scale(&self, c: Rational) -> Lattice {
        Lattice::from_vectors(self.dim, &self.basis.iter().map(|b| b.scale(c)).collect::<Vec<_>>())
    }

    /// Image under a linear map given as a function on vectors.
    pub fn map<F: Fn(&RationalVector) -> RationalVector>(&self, dim: usize, f: F) -> Lattice {
        Lattice::from_vectors(dim, &self.basis.iter().map(f).collect::<Vec<_>>())
    }

    pub fn intersection(&self, other: &Lattice) -> Lattice {
        if self.is_zero() || other.is_zero() {
            return Lattice::zero(self.dim);
        }
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        let relations = integer_left_kernel(&vs);
        let gens: Vec<RationalVector> = relations
            .iter()
            .map(|rel| {
                let coeffs: Vec<Rational> =
                    rel[..self.rank()].iter().map(|&x| Rational::int(x)).collect();
                linalg::combine(&coeffs, &self.basis, self.dim)
            })
            .collect();
        Lattice::from_vectors(self.dim, &gens)
    }

    /// Index `[self : sub]` when `sub ⊆ self` has the same rank.
    pub fn index_of(&self, sub: &Lattice) -> Option<u128> {
        if sub.rank() != self.rank() || !self.contains_lattice(sub) {
            return None;
        }
        let m: Vec<RationalVector> = sub
            .basis
            .iter()
            .map(|b| {
                RationalVector(
                    self.coordinates(b).unwrap().into_iter().map(Rational::int).collect(),
                )
            })
            .collect();
        Some(determinant(&m).abs().to_integer().unwrap() as u128)
    }

    /// Canonical residues of `self / sub` for a finite-index sublattice, or
    /// `None` when the quotient is infinite.
    pub fn quotient_reps(&self, sub: &Lattice) -> Option<Vec<RationalVector>> {
        if sub.rank() != self.rank() {
            return None;
        }
        let start = sub.reduce(&RationalVector::zeros(self.dim));
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for b in &self.basis {
                let y = sub.reduce(&(&x + b));
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Some(seen.into_iter().collect())
    }
}

/// Generators of the integer relations `{c ∈ Zᵐ : Σ cᵢ vᵢ = 0}`.
pub fn integer_left_kernel(vs: &[RationalVector]) -> Vec<Vec<i128>> {
    let m = vs.len();
    if m == 0 {
        return vec![];
    }
    let (rows, _) = to_integer_rows(vs);
    let n = rows[0].len();
    let aug: Vec<Vec<i128>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..m).map(|j| i128::from(i == j)));
            row
        })
        .collect();
    hermite_normal_form(aug)
        .into_iter()
        .filter(|row| row[..n].iter().all(|&x| x == 0))
        .map(|row| row[n..].to_vec())
        .collect()
}

pub fn determinant(m: &[RationalVector]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::ONE;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rational::ZERO };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = det * a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = a[i][c] / a[c][c];
                let row = a[c].scale(f);
                a[i] = &a[i] - &row;
            }
        }
    }
    det
}

pub fn lattice_from_vectors(dim: usize, vs: &[RationalVector]) -> Lattice {
    Lattice::from_vectors(dim, vs)
}

pub fn lattice_member(l: &Lattice, v: &RationalVector) -> bool {
    l.contains(v)
}
