//! One test per acceptance criterion. Each prints a PASS/FAIL line before
//! asserting.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use grrs::catalog::{self, CatalogName, FamilyParams};
use grrs::classify::{self, ClassDescriptor};
use grrs::io;
use grrs::iso::isomorphic_finite;
use grrs::symbolic::affinize_finite;
use grrs::{CosetSet, Rational, RationalVector, SymbolicRootSystem, Verdict};

use common::*;

fn verdict(n: u32, title: &str, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n:>2} [{title}]: {status}");
    for f in failures {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed");
}

fn name(s: &str) -> CatalogName {
    s.parse().unwrap()
}

#[test]
fn criterion_01_axiom_regression() {
    let mut grrs: Vec<String> = Vec::new();
    grrs.extend((1..=6).map(|n| format!("A{n}")));
    grrs.extend((2..=4).map(|n| format!("B{n}")));
    grrs.extend((3..=4).map(|n| format!("C{n}")));
    grrs.extend(["D4", "G2", "F4"].map(String::from));
    for m in 0..=5 {
        for n in 0..=5 - m {
            if m != n && m + n >= 1 {
                grrs.push(format!("A({m},{n})"));
            }
        }
    }
    for m in 0..=2 {
        for n in 1..=2 {
            grrs.push(format!("B({m},{n})"));
        }
    }
    grrs.extend(["C(2)", "C(3)", "D(2,1;a=1/2)", "D(2,2)"].map(String::from));
    grrs.extend((1..=3).map(|n| format!("A({n},{n})")));
    grrs.extend((1..=3).map(|n| format!("BC{n}")));
    let mut failures = Vec::new();
    for s in &grrs {
        let r = catalog::build(&name(s)).unwrap();
        let rep = r.check_axioms();
        if rep.verdict() != Verdict::Grrs {
            failures.push(format!("{s}: {:?}", rep));
        }
        if axiom_flags(&rep) != brute_force_axioms(&r) {
            failures.push(format!("{s}: checker disagrees with the brute-force oracle"));
        }
    }
    for s in ["BC(1,1)", "C(1,1)", "C(2,1)"] {
        let rep = catalog::build(&name(s)).unwrap().check_axioms();
        if rep.verdict() != Verdict::Wgrs || rep.gr3.witness.is_empty() {
            failures.push(format!("{s}: expected WGRS-only with a GR3 witness, got {:?}", rep.verdict()));
        }
    }
    verdict(1, "axiom regression", &failures);
}

#[test]
fn criterion_02_ann_x_verdicts() {
    let mut failures = Vec::new();
    for (p, q) in [(1, 2), (1, 3), (2, 5)] {
        let s = catalog::a_nn_x(1, p, q, 0).unwrap();
        if s.check_axioms().verdict() != Verdict::Grrs {
            failures.push(format!("x = {p}/{q} is not a GRRS"));
        }
    }
    for x in [0, 1, 2] {
        assert!(catalog::a_nn_x(1, x, 1, 0).is_err());
        let s = catalog::a_nn_quotient(1, Rational::int(x as i128), 0).unwrap();
        if s.check_axioms().gr3.pass {
            failures.push(format!("x = {x} passes GR3"));
        }
    }
    for (q, g) in [(2, 2), (3, 3)] {
        let s = catalog::a_nn_x(1, 1, q, 0).unwrap();
        let table = s.gaps().unwrap();
        for e in table.entries.iter().filter(|e| !e.isotropic) {
            if e.gap != Some(g) {
                failures.push(format!("x = 1/{q}: gap of {} is {:?}", e.root, e.gap));
            }
        }
    }
    verdict(2, "A(1,1)_x verdicts and gaps", &failures);
}

fn count(cl: &str, k: usize) -> usize {
    classify::enumerate_classes(&name(cl), k).unwrap().classes.len()
}

fn names(cl: &str) -> BTreeSet<String> {
    let e = classify::enumerate_classes(&name(cl), 1).unwrap();
    e.classes.iter().map(|d| classify::kac_moody_name(d).unwrap()).collect()
}

#[test]
fn criterion_03_counts_k1() {
    let mut failures = Vec::new();
    let mut expect = |cl: &str, n: usize| {
        let got = count(cl, 1);
        if got != n {
            failures.push(format!("{cl}: {got} classes, expected {n}"));
        }
    };
    expect("A1", 1);
    for cl in [
        "A2", "A3", "A5", "D4", "D5", "E6", "E7", "A(1,0)", "A(2,1)", "A(3,1)", "C(3)", "C(4)", "D(2,1)",
        "D(3,1)", "D(2,2)", "D(2,1;a=1/2)", "D(2,1;a=2/3)", "G(3)", "F(4)",
    ] {
        expect(cl, 1);
    }
    for cl in ["B3", "C3", "B(1,1)", "G2", "F4"] {
        expect(cl, 2);
    }
    expect("BC(1,1)", 3);
    expect("C(2,1)", 1);
    let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    for (cl, want) in [
        ("B3", set(&["B_3^(1)", "D_4^(2)"])),
        ("C3", set(&["C_3^(1)", "A_5^(2)"])),
        ("G2", set(&["G_2^(1)", "D_4^(3)"])),
        ("F4", set(&["F_4^(1)", "E_6^(2)"])),
        ("B(1,1)", set(&["B(1,1)^(1)", "D(2,1)^(2)"])),
        ("BC(1,1)", set(&["A(2,1)^(2)", "A(2,2)^(4)"])),
        ("BC(2,1)", set(&["A(4,1)^(2)", "A(2,3)^(2)", "A(4,2)^(4)"])),
        ("C(2,1)", set(&["A(3,1)^(2)"])),
        ("A1", set(&["A_1^(1)"])),
        ("A(2,1)", set(&["A(2,1)^(1)"])),
    ] {
        let got = names(cl);
        if got != want {
            failures.push(format!("{cl}: names {got:?}, expected {want:?}"));
        }
    }
    verdict(3, "classification counts, k = 1", &failures);
}

#[test]
fn criterion_04_counts_k2() {
    let mut failures = Vec::new();
    let g2 = classify::enumerate_classes(&name("G2"), 2).unwrap();
    let s: Vec<i64> = g2.classes.iter().map(|d| d.data["s"].as_i64().unwrap()).collect();
    if s != vec![0, 1, 2] {
        failures.push(format!("G2: s values {s:?}"));
    }
    let oracle = agl_orbit_count(2, |s| contains_affine_basis_oracle(2, s));
    let got = count("A1", 2);
    if got != oracle {
        failures.push(format!("A1: {got} classes, oracle {oracle}"));
    }
    for k in [1, 3] {
        let o = agl_orbit_count(k, |s| contains_affine_basis_oracle(k, s));
        if count("A1", k) != o {
            failures.push(format!("A1, k = {k}: oracle {o}"));
        }
    }
    verdict(4, "classification counts, k = 2", &failures);
}

#[test]
fn criterion_05_ann_x_identification() {
    let id = |p, q, k| classify::identify(&catalog::a_nn_x(2, p, q, k).unwrap()).unwrap();
    let mut failures = Vec::new();
    let xs = [(1, 3), (2, 3), (1, 2), (1, 4), (3, 4)];
    let ds: Vec<ClassDescriptor> = xs.iter().map(|&(p, q)| id(p, q, 0)).collect();
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            let same = xs[i].1 == xs[j].1;
            if (ds[i] == ds[j]) != same {
                failures.push(format!("{:?} vs {:?}: identified = {}", xs[i], xs[j], ds[i] == ds[j]));
            }
        }
    }
    if id(1, 3, 1) != id(2, 3, 1) {
        failures.push("A(2,2)_{1/3}^(1) and A(2,2)_{2/3}^(1) differ".into());
    }
    if id(1, 3, 1) == id(1, 2, 1) {
        failures.push("q = 2 and q = 3 agree with an extra affinization".into());
    }
    verdict(5, "A(n,n)_x identification", &failures);
}

/// Systems for the `F`-invariance checks.
fn mixed_systems() -> Vec<(String, SymbolicRootSystem)> {
    let mut out: Vec<(String, SymbolicRootSystem)> = Vec::new();
    for (cl, k, s) in [
        ("B3", 1, "0b01"),
        ("B3", 2, "0b0111"),
        ("C3", 2, "0b0011"),
        ("A1", 2, "0b0111"),
        ("B(1,1)", 1, "0b11"),
        ("B(1,2)", 2, "0b0001"),
        ("B4", 1, "0b11"),
    ] {
        let sub = grrs::F2Subset::parse(k, s).unwrap();
        out.push((format!("{cl} k={k} S={s}"), catalog::family(&name(cl), k, &FamilyParams::Subset(sub)).unwrap()));
    }
    for (cl, k, s) in [("G2", 2, 1), ("F4", 1, 0), ("G2", 3, 2)] {
        out.push((format!("{cl} k={k} s={s}"), catalog::family(&name(cl), k, &FamilyParams::Rank(s)).unwrap()));
    }
    for d in classify::enumerate_classes(&name("C2"), 2).unwrap().classes {
        out.push((format!("C2 {:?}", d.data), classify::materialize(&d).unwrap()));
    }
    for (p, q) in [(1, 2), (1, 3), (2, 5)] {
        out.push((format!("A(1,1)_{p}/{q}"), catalog::a_nn_x(1, p, q, 0).unwrap()));
    }
    for cl in ["A2", "A(2,1)", "D(2,1;a=1/2)"] {
        out.push((format!("{cl}^(2)"), affinize_finite(&catalog::build(&name(cl)).unwrap(), 2).unwrap()));
    }
    let b3 = &out[0].1;
    let shear: Vec<RationalVector> = (0..3).map(|i| RationalVector(vec![Rational::new(i as i128 + 1, 2)])).collect();
    out.push(("B3 sheared".into(), b3.shear(&shear).unwrap()));
    out
}

/// Orbit of `a` under the reflections at the non-isotropic roots of `rp`.
fn weyl_orbit(cl: &grrs::FiniteRootSystem, rp: &BTreeSet<RationalVector>, a: &RationalVector) -> BTreeSet<RationalVector> {
    let gens: Vec<&grrs::Root> = cl.roots().iter().filter(|b| rp.contains(&b.vector) && !b.is_isotropic()).collect();
    let mut orbit = BTreeSet::from([a.clone()]);
    let mut frontier = vec![a.clone()];
    while let Some(x) = frontier.pop() {
        for b in &gens {
            let y = cl.reflect_root(b, &x).unwrap();
            if orbit.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    orbit
}

fn f_invariance_failures(label: &str, s: &SymbolicRootSystem) -> Vec<String> {
    let mut bad = Vec::new();
    let cl = s.cl();
    let f = |a: &RationalVector| s.f_of(a).unwrap().clone();
    let rp: BTreeSet<RationalVector> = cl.vectors().into_iter().filter(|a| s.f_of(a).unwrap().contains_zero()).collect();
    let cl_grrs = cl.check_axioms().is_grrs();
    for root in cl.roots() {
        let a = &root.vector;
        if !f(&-a).set_eq(&f(a).neg()) {
            bad.push(format!("{label}: F(-a) != -F(a) at {a}"));
        }
        let orbit = weyl_orbit(cl, &rp, a);
        if orbit.iter().any(|w| !f(w).set_eq(&f(a))) {
            bad.push(format!("{label}: F is not constant on the W(R')-orbit of {a}"));
        }
        if !root.is_isotropic() && orbit.contains(&-a) && !f(a).set_eq(&f(a).neg()) {
            bad.push(format!("{label}: F(a) != -F(a) at non-isotropic {a}"));
        }
        if cl_grrs && rp.contains(a) {
            if !f(a).set_eq(&f(a).neg()) {
                bad.push(format!("{label}: F(a) != -F(a) at {a} in R'"));
            }
            for b in cl.roots().iter().filter(|b| rp.contains(&b.vector)) {
                let w = cl.reflect_root(b, a).unwrap();
                if !f(&w).set_eq(&f(a)) {
                    bad.push(format!("{label}: GW-invariance fails for b = {}, a = {a}", b.vector));
                }
            }
        }
        for b in cl.roots() {
            let image = if b.is_isotropic() { cl.isotropic_reflect(&b.vector, a).ok() } else { cl.reflect_root(b, a).ok() };
            let sum = &b.vector + a;
            if image.as_ref() == Some(&sum) {
                let rhs = f(&b.vector).add(&f(a)).unwrap();
                if !f(&sum).set_eq(&rhs) {
                    bad.push(format!("{label}: F(a+b) != F(a)+F(b) for a = {}, b = {a}", b.vector));
                }
            }
        }
    }
    bad
}

/// Shear putting `0` into `F` of each simple root, so that `R'` contains a
/// basis of `ZR'`.
fn simple_root_splitting(s: &SymbolicRootSystem) -> SymbolicRootSystem {
    let simple = simple_roots(s.cl());
    assert_eq!(simple.len(), s.cl_dim());
    let points: Vec<RationalVector> = simple.iter().map(|b| s.f_of(b).unwrap().points()[0].clone()).collect();
    s.shear(&solve_rows(&simple, &points)).unwrap()
}

#[test]
fn criterion_06_f_invariance() {
    let systems = mixed_systems();
    let mut failures = Vec::new();
    if systems.len() < 20 {
        failures.push(format!("only {} systems", systems.len()));
    }
    for (label, s) in &systems {
        if s.check_axioms().verdict() != Verdict::Grrs {
            failures.push(format!("{label}: not a GRRS"));
            continue;
        }
        failures.extend(f_invariance_failures(label, s));
    }
    for cl in ["A2", "A3", "D4", "A(2,1)", "C(3)", "D(2,1;a=1/2)", "G(3)", "B(1,1)"] {
        let r = catalog::build(&name(cl)).unwrap();
        for k in 1..=2 {
            let base = affinize_finite(&r, k).unwrap();
            let e = classify::enumerate_classes(&name(cl), k).unwrap();
            let case_i = e.classes.len() == 1 && e.classes[0].data.get("form").and_then(|v| v.as_str()) == Some("affinization");
            if !case_i {
                continue;
            }
            let shear: Vec<RationalVector> =
                (0..r.dim()).map(|i| RationalVector((0..k).map(|j| Rational::new((i + j) as i128, 3)).collect())).collect();
            for s in [base.clone(), base.shear(&shear).unwrap()] {
                let l = s.lattice().clone();
                for fam in s.families() {
                    if !fam.offsets.is_coset() || fam.offsets.modulus() != &l {
                        failures.push(format!("{cl}^({k}): F({}) is not a coset of L", fam.root));
                    }
                }
                for fam in simple_root_splitting(&s).families() {
                    if !fam.offsets.set_eq(&CosetSet::full(l.clone())) {
                        failures.push(format!("{cl}^({k}): R != R' + L at {}", fam.root));
                    }
                }
            }
        }
    }
    verdict(6, "F-invariance", &failures);
}

#[test]
fn criterion_07_subsystem_oracle() {
    let mut failures = Vec::new();
    for cl in ["A2", "B2", "G2", "A(1,0)", "B(1,1)", "D(2,1;a=1/2)"] {
        let r = catalog::build(&name(cl)).unwrap();
        let simple = simple_roots(&r);
        if simple.len() != r.dim() {
            failures.push(format!("{cl}: {} simple roots", simple.len()));
            continue;
        }
        let g = r.generate_subsystem(&simple).unwrap();
        if g.vectors() != r.vectors() {
            failures.push(format!("{cl}: generated {} of {} roots", g.len(), r.len()));
        }
        let closure = reflection_closure(&r, &simple);
        let ambient: Vec<RationalVector> = g.vectors();
        if closure != ambient.into_iter().collect::<BTreeSet<_>>() {
            failures.push(format!("{cl}: closure oracle disagrees"));
        }
        let pair = &simple[..2.min(simple.len())];
        let sub = r.generate_subsystem(pair).unwrap();
        if sub.vectors().into_iter().collect::<BTreeSet<_>>() != reflection_closure(&r, pair) {
            failures.push(format!("{cl}: rank-2 subsystem disagrees with the closure oracle"));
        }
    }
    verdict(7, "subsystem oracle", &failures);
}

#[test]
fn criterion_08_k_value_bounds() {
    let mut failures = Vec::new();
    let mut tested = 0;
    for cl in [
        "A(1,0)", "A(2,0)", "A(2,1)", "A(3,1)", "A(1,1)", "A(2,2)", "B(1,1)", "B(1,2)", "B(2,1)", "B(2,2)",
        "C(2)", "C(3)", "C(4)", "D(2,1)", "D(2,2)", "D(3,1)", "D(2,1;a=1/2)", "D(2,1;a=3)", "F(4)", "G(3)",
    ] {
        let r = catalog::build(&name(cl)).unwrap();
        if !r.check_axioms().is_grrs() || !r.has_isotropic() || !r.is_irreducible().0 {
            continue;
        }
        tested += 1;
        for a in r.roots().iter().filter(|a| !a.is_isotropic()) {
            for g in r.roots() {
                let k = Rational::int(2) * r.form(&a.vector, &g.vector) / a.norm;
                let bound = if g.is_isotropic() { 2 } else { 4 };
                if !k.is_integer() || k.abs() > Rational::int(bound) {
                    failures.push(format!("{cl}: k({}, {}) = {k}", a.vector, g.vector));
                }
            }
        }
    }
    if tested < 15 {
        failures.push(format!("only {tested} systems scanned"));
    }
    verdict(8, "k-value bounds", &failures);
}

fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&x| Rational::int(x as i128)).collect()).collect()
}

#[test]
fn criterion_09_real_roots() {
    let mut failures = Vec::new();
    for (cl, c) in [
        ("A2", m(&[&[2, -1], &[-1, 2]])),
        ("C2", m(&[&[2, -2], &[-2, 4]])),
        ("G2", m(&[&[2, -3], &[-3, 6]])),
    ] {
        let rr = catalog::real_roots_from_matrix(&c, &[], 12).unwrap();
        let target = catalog::build(&name(cl)).unwrap();
        if rr.truncated || isomorphic_finite(&rr.system, &target).is_none() {
            failures.push(format!("{cl}: truncated = {}, {} roots", rr.truncated, rr.system.len()));
        }
        if rr.system.check_axioms().verdict() != Verdict::Grrs {
            failures.push(format!("{cl}: not a GRRS"));
        }
    }
    let rr = catalog::real_roots_from_matrix(&m(&[&[2, -3], &[-3, 2]]), &[], 10).unwrap();
    if !rr.truncated {
        failures.push("hyperbolic matrix did not truncate".into());
    }
    if !rr.closure_violations().is_empty() {
        failures.push(format!("{} closure violations inside the bound", rr.closure_violations().len()));
    }
    let r = &rr.system;
    for a in r.roots() {
        if !r.contains(&-&a.vector) || a.vector.is_zero() || a.is_isotropic() {
            failures.push(format!("truncated set: bad root {}", a.vector));
        }
        for b in r.roots() {
            if !(Rational::int(2) * r.form(&a.vector, &b.vector) / a.norm).is_integer() {
                failures.push(format!("truncated set: k({}, {}) not integral", a.vector, b.vector));
            }
        }
    }
    verdict(9, "real roots from Cartan matrices", &failures);
}

#[test]
fn criterion_10_cli_round_trip() {
    let mut failures = Vec::new();
    let docs = random_documents(200, 0x5eed);
    let mut kinds = BTreeMap::new();
    for (i, p) in docs.iter().enumerate() {
        *kinds.entry(p.kind()).or_insert(0) += 1;
        let text = io::to_string(p);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(format!("doc{i}.json"));
        std::fs::write(&path, &text).unwrap();
        let back = io::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        if io::to_string(&back) != text || &back != p {
            failures.push(format!("document {i} ({}) does not round-trip", p.kind()));
        }
    }
    if kinds.len() != 4 {
        failures.push(format!("document kinds covered: {kinds:?}"));
    }
    failures.extend(exit_code_failures());
    verdict(10, "CLI round trip and exit codes", &failures);
}
