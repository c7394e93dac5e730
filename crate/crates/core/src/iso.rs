//! Homothety search between finite root systems.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::finite::FiniteRootSystem;
use crate::linalg;
use crate::rational::{Rational, RationalVector};

/// A linear bijection `ι` with `(ιu, ιv) = scalar·(u, v)`, stored by the
/// images of the standard basis vectors.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Homothety {
    pub scalar: Rational,
    pub columns: Vec<RationalVector>,
}

impl Homothety {
    pub fn apply(&self, v: &RationalVector) -> RationalVector {
        let dim = self.columns.first().map_or(0, RationalVector::dim);
        linalg::combine(&v.0, &self.columns, dim)
    }
}

fn norm_histogram(r: &FiniteRootSystem, x: Rational) -> BTreeMap<Rational, usize> {
    let mut h = BTreeMap::new();
    for root in r.roots() {
        *h.entry(root.norm * x).or_default() += 1;
    }
    h
}

/// Sorted pairings of each root with all roots.
fn signatures(r: &FiniteRootSystem) -> Vec<Vec<Rational>> {
    let vs = r.vectors();
    vs.iter()
        .map(|a| {
            let mut s: Vec<Rational> = vs.iter().map(|b| r.form(a, b)).collect();
            s.sort();
            s
        })
        .collect()
}

fn scaled(sig: &[Rational], x: Rational) -> Vec<Rational> {
    let mut s: Vec<Rational> = sig.iter().map(|&v| v * x).collect();
    s.sort();
    s
}

/// Roots forming a basis, each after the first non-orthogonal to an earlier
/// one where possible, starting from a non-isotropic root.
fn connected_basis(r: &FiniteRootSystem) -> Vec<usize> {
    let vs = r.vectors();
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_vs: Vec<RationalVector> = Vec::new();
    let target = linalg::rank(&vs);
    let first = r.roots().iter().position(|x| !x.is_isotropic()).unwrap_or(0);
    if vs.is_empty() {
        return chosen;
    }
    chosen.push(first);
    chosen_vs.push(vs[first].clone());
    while chosen.len() < target {
        let independent = |i: usize, chosen_vs: &Vec<RationalVector>| {
            let mut t = chosen_vs.clone();
            t.push(vs[i].clone());
            linalg::rank(&t) == t.len()
        };
        let linked = (0..vs.len()).find(|&i| {
            chosen_vs.iter().any(|c| !r.form(c, &vs[i]).is_zero()) && independent(i, &chosen_vs)
        });
        let i = linked
            .or_else(|| (0..vs.len()).find(|&i| independent(i, &chosen_vs)))
            .expect("rank not reached");
        chosen.push(i);
        chosen_vs.push(vs[i].clone());
    }
    chosen
}

fn candidate_scalars(a: &FiniteRootSystem, b: &FiniteRootSystem) -> Vec<Rational> {
    let va = a.vectors();
    let vb = b.vectors();
    let first = |vs: &[RationalVector], r: &FiniteRootSystem| {
        vs.iter()
            .flat_map(|u| vs.iter().map(move |v| (u, v)))
            .map(|(u, v)| r.form(u, v))
            .find(|x| !x.is_zero())
    };
    let Some(p) = first(&va, a) else { return vec![] };
    let mut xs: Vec<Rational> = vb
        .iter()
        .flat_map(|u| vb.iter().map(move |v| (u, v)))
        .map(|(u, v)| b.form(u, v))
        .filter(|x| !x.is_zero())
        .map(|x| x / p)
        .collect();
    xs.sort();
    xs.dedup();
    xs
}

/// A homothety mapping `a` onto `b`, if one exists. Both systems must span
/// their spaces; otherwise they are compared over their spans.
pub fn isomorphic_finite(a: &FiniteRootSystem, b: &FiniteRootSystem) -> Option<Homothety> {
    homothety_where(a, b, |_| true)
}

/// Like [`isomorphic_finite`], restricted to scalars accepted by `accept`.
pub fn homothety_where<F: Fn(Rational) -> bool>(
    a: &FiniteRootSystem,
    b: &FiniteRootSystem,
    accept: F,
) -> Option<Homothety> {
    if a.len() != b.len() {
        return None;
    }
    let (a, b) = if !a.spans() || !b.spans() {
        (a.over_span(), b.over_span())
    } else {
        (a.clone(), b.clone())
    };
    if a.dim() != b.dim() || a.isotropic_roots().len() != b.isotropic_roots().len() {
        return None;
    }
    if a.is_empty() {
        return Some(Homothety { scalar: Rational::ONE, columns: vec![] });
    }
    let sig_a = signatures(&a);
    let sig_b = signatures(&b);
    let basis = connected_basis(&a);
    let va = a.vectors();
    let vb = b.vectors();
    let bvecs: Vec<RationalVector> = basis.iter().map(|&i| va[i].clone()).collect();
    let coords: Vec<Vec<Rational>> =
        va.iter().map(|v| linalg::solve(&bvecs, v).expect("basis spans")).collect();
    let hist_b = norm_histogram(&b, Rational::ONE);
    for x in candidate_scalars(&a, &b) {
        if !accept(x) || norm_histogram(&a, x) != hist_b {
            continue;
        }
        let mut sig_b_sorted: Vec<Vec<Rational>> = sig_b.clone();
        sig_b_sorted.sort();
        let mut sig_a_scaled: Vec<Vec<Rational>> = sig_a.iter().map(|s| scaled(s, x)).collect();
        sig_a_scaled.sort();
        if sig_a_scaled != sig_b_sorted {
            continue;
        }
        let options: Vec<Vec<usize>> = basis
            .iter()
            .map(|&i| {
                let want = scaled(&sig_a[i], x);
                (0..vb.len()).filter(|&j| sig_b[j] == want).collect()
            })
            .collect();
        let mut images = Vec::new();
        if let Some(h) = search(&a, &b, x, &bvecs, &coords, &options, &mut images) {
            return Some(h);
        }
    }
    None
}

fn search(
    a: &FiniteRootSystem,
    b: &FiniteRootSystem,
    x: Rational,
    bvecs: &[RationalVector],
    coords: &[Vec<Rational>],
    options: &[Vec<usize>],
    images: &mut Vec<RationalVector>,
) -> Option<Homothety> {
    let n = images.len();
    let vb = b.roots();
    if n == bvecs.len() {
        return verify(a, b, x, bvecs, coords, images);
    }
    for &j in &options[n] {
        let c = &vb[j].vector;
        if b.form(c, c) != x * a.form(&bvecs[n], &bvecs[n])
            || (0..n).any(|i| b.form(&images[i], c) != x * a.form(&bvecs[i], &bvecs[n]))
        {
            continue;
        }
        images.push(c.clone());
        if linalg::rank(images) == images.len() {
            if let Some(h) = search(a, b, x, bvecs, coords, options, images) {
                return Some(h);
            }
        }
        images.pop();
    }
    None
}

fn verify(
    a: &FiniteRootSystem,
    b: &FiniteRootSystem,
    x: Rational,
    bvecs: &[RationalVector],
    coords: &[Vec<Rational>],
    images: &[RationalVector],
) -> Option<Homothety> {
    let dim = b.dim();
    for c in coords {
        if !b.contains(&linalg::combine(c, images, dim)) {
            return None;
        }
    }
    let columns = (0..a.dim())
        .map(|i| {
            let e = RationalVector::unit(a.dim(), i);
            let c = linalg::solve(bvecs, &e).expect("basis spans");
            linalg::combine(&c, images, dim)
        })
        .collect();
    Some(Homothety { scalar: x, columns })
}
