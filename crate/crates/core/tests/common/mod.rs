//! Independent oracles and fixtures shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grrs::catalog::{self, CatalogName, FamilyParams};
use grrs::classify;
use grrs::io::{self, Payload};
use grrs::{AxiomReport, F2Subset, FiniteRootSystem, Rational, RationalVector};

fn form(g: &[RationalVector], u: &RationalVector, v: &RationalVector) -> Rational {
    let mut s = Rational::ZERO;
    for i in 0..u.dim() {
        for j in 0..v.dim() {
            s += u[i] * g[i][j] * v[j];
        }
    }
    s
}

fn rank(rows: &[RationalVector]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.clone()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c] / m[r][c];
                for j in 0..cols {
                    let x = m[r][j];
                    m[i][j] -= f * x;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn axiom_flags(r: &AxiomReport) -> [bool; 5] {
    [r.gr0.pass, r.gr1.pass, r.gr2.pass, r.gr3.pass, r.wgr3.pass]
}

/// Axioms evaluated straight from the definitions on the Gram matrix.
pub fn brute_force_axioms(r: &FiniteRootSystem) -> [bool; 5] {
    let g = r.space().gram().to_vec();
    let roots: BTreeSet<RationalVector> = r.vectors().into_iter().collect();
    let dim = r.dim();
    let in_kernel = |v: &RationalVector| (0..dim).all(|i| form(&g, v, &RationalVector::unit(dim, i)).is_zero());
    let gr0 = !roots.is_empty() && roots.iter().all(|a| !in_kernel(a));
    let all: Vec<RationalVector> = roots.iter().cloned().collect();
    let gr1 = rank(&all) == dim;
    let mut gr2 = true;
    let mut gr3 = true;
    let mut wgr3 = roots.iter().all(|a| roots.contains(&-a));
    for a in &roots {
        let na = form(&g, a, a);
        for b in &roots {
            let ab = form(&g, a, b);
            if !na.is_zero() {
                let k = Rational::int(2) * ab / na;
                gr2 &= k.is_integer() && roots.contains(&(b - &a.scale(k)));
            } else if b != a && *b != -a && !ab.is_zero() {
                let n = [b + a, b - a].iter().filter(|v| roots.contains(v)).count();
                gr3 &= n == 1;
                wgr3 &= n >= 1;
            }
        }
    }
    gr3 &= wgr3;
    [gr0, gr1, gr2, gr3, wgr3]
}

/// `B⁻¹P` for a square invertible `B`.
pub fn solve_rows(b: &[RationalVector], p: &[RationalVector]) -> Vec<RationalVector> {
    let n = b.len();
    let w = p.first().map_or(0, RationalVector::dim);
    let mut m: Vec<Vec<Rational>> = (0..n).map(|i| b[i].0.iter().chain(p[i].0.iter()).copied().collect()).collect();
    for c in 0..n {
        let r = (c..n).find(|&i| !m[i][c].is_zero()).expect("invertible");
        m.swap(c, r);
        let d = m[c][c];
        for x in m[c].iter_mut() {
            *x = *x / d;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..n + w {
                    let x = m[c][j];
                    m[i][j] -= f * x;
                }
            }
        }
    }
    m.into_iter().map(|row| RationalVector(row[n..].to_vec())).collect()
}

/// Indecomposable roots for a generic positive functional.
pub fn simple_roots(r: &FiniteRootSystem) -> Vec<RationalVector> {
    let f = RationalVector((0..r.dim()).map(|i| Rational::new(1, 1 + 7 * i as i128 + (i * i) as i128)).collect());
    let positive: BTreeSet<RationalVector> = r.vectors().into_iter().filter(|v| v.dot(&f) > Rational::ZERO).collect();
    assert!(r.vectors().iter().all(|v| !v.dot(&f).is_zero()), "functional is not generic");
    positive
        .iter()
        .filter(|v| !positive.iter().any(|a| positive.contains(&(*v - a))))
        .cloned()
        .collect()
}

/// Closure of `seeds` under all reflections at its own members, with isotropic
/// images read off the ambient root set.
pub fn reflection_closure(r: &FiniteRootSystem, seeds: &[RationalVector]) -> BTreeSet<RationalVector> {
    let g = r.space().gram().to_vec();
    let ambient: BTreeSet<RationalVector> = r.vectors().into_iter().collect();
    let mut set: BTreeSet<RationalVector> = seeds.iter().cloned().collect();
    loop {
        let mut next = set.clone();
        for a in &set {
            let na = form(&g, a, a);
            for b in &set {
                let ab = form(&g, a, b);
                let image = if b == a || *b == -a {
                    -b
                } else if !na.is_zero() {
                    b - &a.scale(Rational::int(2) * ab / na)
                } else if ab.is_zero() {
                    b.clone()
                } else if ambient.contains(&(b + a)) {
                    b + a
                } else {
                    b - a
                };
                next.insert(image);
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

fn point(k: usize, p: u32) -> Vec<u8> {
    (0..k).map(|i| ((p >> i) & 1) as u8).collect()
}

fn index(v: &[u8]) -> u32 {
    v.iter().enumerate().map(|(i, &b)| (b as u32) << i).sum()
}

/// True when the affine span of the points of `mask` is all of `F₂ᵏ`.
pub fn contains_affine_basis_oracle(k: usize, mask: u128) -> bool {
    let pts: Vec<u32> = (0..1u32 << k).filter(|&p| mask >> p & 1 == 1).collect();
    let Some(&p0) = pts.first() else { return false };
    let mut span: BTreeSet<u32> = BTreeSet::from([0]);
    for &p in &pts {
        let d = p ^ p0;
        let new: Vec<u32> = span.iter().map(|s| s ^ d).collect();
        span.extend(new);
    }
    span.len() == 1 << k
}

/// Number of orbits of `AGL(k, 2)` on the subsets satisfying `keep`.
pub fn agl_orbit_count(k: usize, keep: impl Fn(u128) -> bool) -> usize {
    let n = 1u32 << k;
    let mut maps: Vec<Vec<u32>> = Vec::new();
    for m in 0u32..1 << (k * k) {
        let image = |p: u32| -> u32 {
            let v = point(k, p);
            let w: Vec<u8> = (0..k).map(|i| (0..k).map(|j| ((m >> (i * k + j)) & 1) as u8 & v[j]).fold(0, |a, b| a ^ b)).collect();
            index(&w)
        };
        let imgs: BTreeSet<u32> = (0..n).map(image).collect();
        if imgs.len() != n as usize {
            continue;
        }
        for t in 0..n {
            maps.push((0..n).map(|p| image(p) ^ t).collect());
        }
    }
    let mut seen = BTreeSet::new();
    let mut orbits = 0;
    for mask in 0u128..1 << n {
        if !keep(mask) || seen.contains(&mask) {
            continue;
        }
        orbits += 1;
        for f in &maps {
            let img = (0..n).filter(|&p| mask >> p & 1 == 1).fold(0u128, |acc, p| acc | 1 << f[p as usize]);
            seen.insert(img);
        }
    }
    orbits
}

const FINITE_NAMES: &[&str] = &[
    "A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "BC1", "BC2", "A(1,0)", "A(2,1)", "A(1,1)", "B(1,1)", "B(0,2)",
    "C(3)", "D(2,1)", "D(2,1;a=1/2)", "D(2,1;a=-1/3)", "G(3)", "F(4)", "C(1,1)", "C(2,1)", "BC(1,1)", "A(2,2)_f",
];

fn random_subset(rng: &mut ChaCha8Rng, k: usize, keep: impl Fn(&F2Subset) -> bool) -> F2Subset {
    loop {
        let s = F2Subset::new(k, rng.gen_range(0..1u128 << (1 << k))).unwrap();
        if keep(&s) {
            return s;
        }
    }
}

fn random_symbolic(rng: &mut ChaCha8Rng) -> grrs::SymbolicRootSystem {
    match rng.gen_range(0..5) {
        0 => {
            let (p, q) = *[(1, 2), (1, 3), (2, 5), (3, 4), (0, 1), (1, 1)].choose(rng).unwrap();
            let n = if q == 1 { 2 } else { rng.gen_range(1..=2) };
            catalog::a_nn_x(n, p, q, rng.gen_range(0..=1)).unwrap()
        }
        1 => {
            let cl: CatalogName = ["A1", "B3", "C3", "B(1,1)", "C(2,1)"].choose(rng).unwrap().parse().unwrap();
            let k = rng.gen_range(1..=3);
            let s = match cl {
                CatalogName::A(1) => random_subset(rng, k, grrs::f2::contains_affine_basis),
                CatalogName::Cmn(..) => random_subset(rng, k, |s| !s.is_empty() && s.len() < 1 << k),
                _ => random_subset(rng, k, |s| !s.is_empty()),
            };
            catalog::family(&cl, k, &FamilyParams::Subset(s)).unwrap()
        }
        2 => {
            let cl: CatalogName = ["G2", "F4"].choose(rng).unwrap().parse().unwrap();
            let k = rng.gen_range(1..=2);
            catalog::family(&cl, k, &FamilyParams::Rank(rng.gen_range(0..=k))).unwrap()
        }
        3 => {
            let cl: CatalogName = ["C2", "BC(1,1)", "BC(2,1)"].choose(rng).unwrap().parse().unwrap();
            let k = rng.gen_range(1..=2);
            let classes = classify::enumerate_classes(&cl, k).unwrap().classes;
            classify::materialize(classes.choose(rng).unwrap()).unwrap()
        }
        _ => {
            let cl: CatalogName = FINITE_NAMES[..22].choose(rng).unwrap().parse().unwrap();
            let s = grrs::symbolic::affinize_finite(&catalog::build(&cl).unwrap(), rng.gen_range(1..=2)).unwrap();
            let shear: Vec<RationalVector> = (0..s.cl_dim())
                .map(|_| RationalVector((0..s.kernel_dim()).map(|_| Rational::new(rng.gen_range(-3..=3), rng.gen_range(1..=4))).collect()))
                .collect();
            s.shear(&shear).unwrap()
        }
    }
}

/// Deterministic mix of all document kinds.
pub fn random_documents(n: usize, seed: u64) -> Vec<Payload> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| match i % 4 {
            0 => {
                let cl: CatalogName = FINITE_NAMES.choose(&mut rng).unwrap().parse().unwrap();
                Payload::Finite(catalog::build(&cl).unwrap())
            }
            1 => Payload::Symbolic(random_symbolic(&mut rng)),
            2 => {
                let r = if rng.gen_bool(0.5) {
                    random_symbolic(&mut rng).check_axioms()
                } else {
                    let cl: CatalogName = FINITE_NAMES.choose(&mut rng).unwrap().parse().unwrap();
                    catalog::build(&cl).unwrap().check_axioms()
                };
                Payload::Report(r)
            }
            _ => {
                let cl: CatalogName = ["A1", "B3", "C2", "G2", "C(2,1)", "BC(1,1)", "A2", "C(1,1)"].choose(&mut rng).unwrap().parse().unwrap();
                Payload::Classes(classify::enumerate_classes(&cl, rng.gen_range(1..=2)).unwrap().classes)
            }
        })
        .collect()
}

pub fn grrs_bin() -> &'static str {
    env!("CARGO_BIN_EXE_grrs")
}

pub fn run(args: &[&str], dir: &Path) -> (i32, String) {
    let out = Command::new(grrs_bin()).args(args).current_dir(dir).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

/// Runs the CLI on the fixture set and reports every broken exit-code
/// contract.
pub fn exit_code_failures() -> Vec<String> {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let zero_root = r#"{"schemaVersion":1,"kind":"finite","payload":{"dim":1,"gram":[["1"]],"roots":[["0"],["1"],["-1"]]}}"#;
    std::fs::write(dir.join("zero.json"), zero_root).unwrap();
    std::fs::write(dir.join("garbage.json"), "{ not json").unwrap();
    let cases: &[(&[&str], i32)] = &[
        (&["catalog", "B2", "-o", "b2.json"], 0),
        (&["catalog", "G2", "-o", "g2.json"], 0),
        (&["catalog", "C(1,1)", "-o", "c11.json"], 0),
        (&["catalog", "Ann_x(n=1,p=1,q=3)", "-o", "annx13.json"], 0),
        (&["catalog", "Ann_x(n=1,p=2,q=3)", "-o", "annx23.json"], 0),
        (&["catalog", "Ann_x(n=1,p=1,q=2)", "-o", "annx12.json"], 0),
        (&["catalog", "family(B3,k=1,S=0b01)", "-o", "b3s.json"], 0),
        (&["catalog", "family(G2,k=2,s=3)"], 2),
        (&["catalog", "family(A1,k=1,S=0b01)"], 2),
        (&["catalog", "Ann_x(n=1,p=1,q=1)"], 2),
        (&["catalog", "Q7"], 2),
        (&["check", "b2.json"], 0),
        (&["check", "c11.json"], 3),
        (&["check", "zero.json"], 4),
        (&["check", "garbage.json"], 2),
        (&["check", "missing.json"], 2),
        (&["check", "annx13.json"], 0),
        (&["iso", "annx13.json", "annx23.json"], 0),
        (&["iso", "annx13.json", "annx12.json"], 1),
        (&["iso", "b2.json", "g2.json"], 1),
        (&["iso", "b2.json", "b2.json"], 0),
        (&["classify", "--cl", "B3", "--k", "1"], 0),
        (&["classify", "--cl", "BC2", "--k", "1"], 2),
        (&["classify", "--cl", "A1", "--k", "9"], 2),
        (&["gaps", "annx13.json"], 0),
        (&["gaps", "b2.json"], 2),
        (&["orbits", "b2.json"], 0),
        (&["orbits", "b2.json", "--group", "gw"], 0),
        (&["affinize", "b2.json", "-n", "2", "-o", "b2aff.json"], 0),
        (&["check", "b2aff.json"], 0),
        (&["quotient", "b2aff.json", "--vector", "0,0,1,-1", "--allow-collisions", "-o", "b2q.json"], 0),
        (&["check", "b2q.json"], 0),
        (&["quotient", "b2aff.json", "--vector", "0,0,1,-1"], 2),
        (&["quotient", "b2aff.json", "--vector", "1,0,0,0"], 2),
        (&["subsystem", "b2.json", "--seed", "1,0"], 0),
        (&["realroots", "--matrix", "2,-1;-1,2", "--height", "4"], 0),
        (&["realroots", "--matrix", "2,-1;-2,2"], 2),
        (&["frobnicate"], 2),
    ];
    let mut failures = Vec::new();
    for (args, want) in cases {
        let (code, _) = run(args, dir);
        if code != *want {
            failures.push(format!("grrs {}: exit {code}, expected {want}", args.join(" ")));
        }
    }
    let (_, table) = run(&["classify", "--cl", "B3", "--k", "1"], dir);
    for name in ["B_3^(1)", "D_4^(2)"] {
        if !table.contains(name) {
            failures.push(format!("classify table lacks {name}"));
        }
    }
    let (_, gaps) = run(&["gaps", "annx13.json"], dir);
    if gaps.lines().filter(|l| l.ends_with(": 3")).count() != 4 {
        failures.push(format!("gap table: {gaps}"));
    }
    let (_, a) = run(&["catalog", "family(B3,k=2,S=0b0111)"], dir);
    let (_, b) = run(&["catalog", "family(B3,k=2,S=0b0111)"], dir);
    if a != b || io::from_str(&a).is_err() {
        failures.push("catalog output is not deterministic".into());
    }
    failures
}
