use crate::error::{Error, Result};
use crate::finite::FiniteRootSystem;
use crate::linalg::BilinearSpace;
use crate::rational::{q, Rational, RationalVector};

use super::names::CatalogName;

fn int_vec(v: &[i64]) -> RationalVector {
    RationalVector::from_ints(v)
}

/// Roots `±e_i ± e_j` (`i < j`) among the given coordinates.
fn pm_pairs(dim: usize, idx: &[usize], out: &mut Vec<Vec<i64>>) {
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0; dim];
                v[i] = si;
                v[j] = sj;
                out.push(v);
            }
        }
    }
}

/// Roots `±c·e_i`.
fn pm_singles(dim: usize, idx: &[usize], c: i64, out: &mut Vec<Vec<i64>>) {
    for &i in idx {
        for s in [c, -c] {
            let mut v = vec![0; dim];
            v[i] = s;
            out.push(v);
        }
    }
}

/// Roots `±e_i ± e_j` with `i` in `a` and `j` in `b`.
fn pm_cross(dim: usize, a: &[usize], b: &[usize], out: &mut Vec<Vec<i64>>) {
    for &i in a {
        for &j in b {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0; dim];
                v[i] = si;
                v[j] = sj;
                out.push(v);
            }
        }
    }
}

fn diag_system(norms: &[Rational], roots: Vec<Vec<i64>>) -> FiniteRootSystem {
    let vs = roots.iter().map(|r| int_vec(r)).collect();
    FiniteRootSystem::new(BilinearSpace::diagonal(norms), vs).expect("consistent dimensions")
}

/// Roots `e_i − e_j` of `Q^N`, written in the basis `b_i = e_i − e_N` of the
/// sum-zero hyperplane.
fn difference_system(norms: &[Rational], roots: Vec<Vec<i64>>) -> FiniteRootSystem {
    let n = norms.len() - 1;
    let last = norms[n];
    let gram = (0..n)
        .map(|i| {
            RationalVector((0..n).map(|j| if i == j { norms[i] + last } else { last }).collect())
        })
        .collect();
    let space = BilinearSpace::new(gram).expect("symmetric");
    let vs = roots
        .iter()
        .map(|r| {
            debug_assert_eq!(r.iter().sum::<i64>(), 0);
            int_vec(&r[..n])
        })
        .collect();
    FiniteRootSystem::new(space, vs).expect("consistent dimensions")
}

/// `e_i − e_j` for `i ≠ j`.
fn type_a_roots(n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut v = vec![0; n];
                v[i] = 1;
                v[j] = -1;
                out.push(v);
            }
        }
    }
    out
}

fn signs(dim: usize) -> Vec<Rational> {
    vec![Rational::ONE; dim]
}

fn e8_roots() -> Vec<RationalVector> {
    let mut ints = Vec::new();
    pm_pairs(8, &(0..8).collect::<Vec<_>>(), &mut ints);
    let mut out: Vec<RationalVector> = ints.iter().map(|v| int_vec(v)).collect();
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            out.push(RationalVector(
                (0..8).map(|i| if mask >> i & 1 == 1 { q(-1, 2) } else { q(1, 2) }).collect(),
            ));
        }
    }
    out
}

fn e_series(n: usize) -> FiniteRootSystem {
    let space = BilinearSpace::diagonal(&signs(8));
    let mut roots = e8_roots();
    let a = int_vec(&[0, 0, 0, 0, 0, 0, 1, 1]);
    let b = int_vec(&[0, 0, 0, 0, 0, 1, -1, 0]);
    if n <= 7 {
        roots.retain(|r| space.form(r, &a).is_zero());
    }
    if n == 6 {
        roots.retain(|r| space.form(r, &b).is_zero());
    }
    FiniteRootSystem::new(space, roots).expect("consistent dimensions").over_span()
}

fn f4() -> FiniteRootSystem {
    let mut ints = Vec::new();
    let idx: Vec<usize> = (0..4).collect();
    pm_pairs(4, &idx, &mut ints);
    pm_singles(4, &idx, 1, &mut ints);
    let mut vs: Vec<RationalVector> = ints.iter().map(|v| int_vec(v)).collect();
    for mask in 0u32..16 {
        vs.push(RationalVector(
            (0..4).map(|i| if mask >> i & 1 == 1 { q(-1, 2) } else { q(1, 2) }).collect(),
        ));
    }
    FiniteRootSystem::new(BilinearSpace::diagonal(&signs(4)), vs).expect("consistent dimensions")
}

fn g2() -> FiniteRootSystem {
    let mut roots = type_a_roots(3);
    for i in 0..3 {
        let mut v = vec![-1; 3];
        v[i] = 2;
        roots.push(v.clone());
        roots.push(v.iter().map(|x| -x).collect());
    }
    difference_system(&signs(3), roots)
}

fn super_a(m: usize, n: usize) -> FiniteRootSystem {
    let mut norms = vec![Rational::ONE; m + 1];
    norms.extend(vec![Rational::int(-1); n + 1]);
    difference_system(&norms, type_a_roots(m + n + 2))
}

fn eps_delta(m: usize, n: usize) -> (Vec<Rational>, Vec<usize>, Vec<usize>) {
    let mut norms = vec![Rational::ONE; m];
    norms.extend(vec![Rational::int(-1); n]);
    (norms, (0..m).collect(), (m..m + n).collect())
}

fn super_b(m: usize, n: usize) -> FiniteRootSystem {
    let (norms, e, d) = eps_delta(m, n);
    let dim = m + n;
    let mut r = Vec::new();
    pm_pairs(dim, &e, &mut r);
    pm_singles(dim, &e, 1, &mut r);
    pm_pairs(dim, &d, &mut r);
    pm_singles(dim, &d, 2, &mut r);
    pm_singles(dim, &d, 1, &mut r);
    pm_cross(dim, &e, &d, &mut r);
    diag_system(&norms, r)
}

fn super_d(m: usize, n: usize) -> FiniteRootSystem {
    let (norms, e, d) = eps_delta(m, n);
    let dim = m + n;
    let mut r = Vec::new();
    pm_pairs(dim, &e, &mut r);
    pm_pairs(dim, &d, &mut r);
    pm_singles(dim, &d, 2, &mut r);
    pm_cross(dim, &e, &d, &mut r);
    diag_system(&norms, r)
}

fn c_mn(m: usize, n: usize, bc: bool) -> FiniteRootSystem {
    let (norms, e, d) = eps_delta(m, n);
    let dim = m + n;
    let mut r = Vec::new();
    pm_pairs(dim, &e, &mut r);
    pm_singles(dim, &e, 2, &mut r);
    pm_pairs(dim, &d, &mut r);
    pm_singles(dim, &d, 2, &mut r);
    pm_cross(dim, &e, &d, &mut r);
    if bc {
        pm_singles(dim, &e, 1, &mut r);
        pm_singles(dim, &d, 1, &mut r);
    }
    diag_system(&norms, r)
}

fn d21(a: Rational) -> FiniteRootSystem {
    let two = Rational::int(2);
    let norms = [-(Rational::ONE + a) / two, Rational::ONE / two, a / two];
    let mut r = Vec::new();
    pm_singles(3, &[0, 1, 2], 2, &mut r);
    for mask in 0..8 {
        r.push((0..3).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect());
    }
    diag_system(&norms, r)
}

fn super_f4() -> FiniteRootSystem {
    let norms = [Rational::ONE, Rational::ONE, Rational::ONE, Rational::int(-3)];
    let mut ints = Vec::new();
    pm_pairs(4, &[0, 1, 2], &mut ints);
    pm_singles(4, &[0, 1, 2], 1, &mut ints);
    pm_singles(4, &[3], 1, &mut ints);
    let mut vs: Vec<RationalVector> = ints.iter().map(|v| int_vec(v)).collect();
    for mask in 0u32..16 {
        vs.push(RationalVector(
            (0..4).map(|i| if mask >> i & 1 == 1 { q(-1, 2) } else { q(1, 2) }).collect(),
        ));
    }
    FiniteRootSystem::new(BilinearSpace::diagonal(&norms), vs).expect("consistent dimensions")
}

fn super_g3() -> FiniteRootSystem {
    // Basis ε₁, ε₂, δ with ε₃ = −ε₁ − ε₂.
    let gram = vec![int_vec(&[-2, 1, 0]), int_vec(&[1, -2, 0]), int_vec(&[0, 0, 2])];
    let space = BilinearSpace::new(gram).expect("symmetric");
    let eps = [[1i64, 0], [0, 1], [-1, -1]];
    let mut r: Vec<Vec<i64>> = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                r.push(vec![eps[i][0] - eps[j][0], eps[i][1] - eps[j][1], 0]);
            }
        }
        for s in [1, -1] {
            r.push(vec![s * eps[i][0], s * eps[i][1], 0]);
            for t in [1, -1] {
                r.push(vec![s * eps[i][0], s * eps[i][1], t]);
            }
        }
    }
    for c in [1, -1, 2, -2] {
        r.push(vec![0, 0, c]);
    }
    FiniteRootSystem::new(space, r.iter().map(|v| int_vec(v)).collect()).expect("consistent dimensions")
}

/// The finite root system with the given name, in `ε/δ` coordinates with
/// `(ε_i, ε_i) = 1` and `(δ_j, δ_j) = −1` wherever the family has them.
pub fn build(name: &CatalogName) -> Result<FiniteRootSystem> {
    use CatalogName::*;
    name.validate().map_err(Error::BadParameters)?;
    let sys = match *name {
        A(n) => difference_system(&signs(n + 1), type_a_roots(n + 1)),
        B(n) | C(n) | D(n) | BC(n) => {
            let idx: Vec<usize> = (0..n).collect();
            let mut r = Vec::new();
            pm_pairs(n, &idx, &mut r);
            if matches!(name, B(_) | BC(_)) {
                pm_singles(n, &idx, 1, &mut r);
            }
            if matches!(name, C(_) | BC(_)) {
                pm_singles(n, &idx, 2, &mut r);
            }
            diag_system(&signs(n), r)
        }
        E(n) => e_series(n),
        F4 => f4(),
        G2 => g2(),
        SuperA(m, n) => super_a(m, n),
        SuperB(m, n) => super_b(m, n),
        SuperC(n) => {
            let (norms, e, d) = eps_delta(1, n - 1);
            let mut r = Vec::new();
            pm_pairs(n, &d, &mut r);
            pm_singles(n, &d, 2, &mut r);
            pm_cross(n, &e, &d, &mut r);
            diag_system(&norms, r)
        }
        SuperD(m, n) => super_d(m, n),
        D21(a) => d21(a),
        SuperF4 => super_f4(),
        SuperG3 => super_g3(),
        Cmn(m, n) => c_mn(m, n, false),
        BCmn(m, n) => c_mn(m, n, true),
        AnnF(n) => super_a(n, n).minimal_quotient(),
    };
    Ok(sys)
}

/// The vector `I = Σ (ε_i − ε_{n+1+i})` spanning the kernel of `A(n,n)`, in
/// the coordinates used by [`build`].
pub fn ann_kernel_vector(n: usize) -> RationalVector {
    let mut v = vec![1; n + 1];
    v.extend(vec![-1; n]);
    int_vec(&v)
}
