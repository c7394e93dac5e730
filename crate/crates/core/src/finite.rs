//! Finite root systems: reflections, axioms, orbits and subsystems.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, BilinearSpace};
use crate::rational::{Rational, RationalVector};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Root {
    pub vector: RationalVector,
    pub norm: Rational,
}

impl Root {
    pub fn new(space: &BilinearSpace, vector: RationalVector) -> Self {
        let norm = space.norm(&vector);
        Root { vector, norm }
    }

    pub fn is_isotropic(&self) -> bool {
        self.norm.is_zero()
    }
}

/// `2(α,β)/(α,α)`.
pub fn k_value(space: &BilinearSpace, alpha: &RationalVector, beta: &RationalVector) -> Result<Rational> {
    let n = space.form_eval(alpha, alpha)?;
    if n.is_zero() {
        return Err(Error::IsotropicBase(alpha.clone()));
    }
    Ok(Rational::int(2) * space.form_eval(alpha, beta)? / n)
}

/// `r_α(v) = v − k_{α,v}·α`.
pub fn reflect(space: &BilinearSpace, alpha: &RationalVector, v: &RationalVector) -> Result<RationalVector> {
    let k = k_value(space, alpha, v)?;
    Ok(v - &alpha.scale(k))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<RationalVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl AxiomCheck {
    pub fn ok() -> Self {
        AxiomCheck { pass: true, witness: vec![], detail: None }
    }

    pub fn fail(witness: Vec<RationalVector>, detail: impl Into<String>) -> Self {
        AxiomCheck { pass: false, witness, detail: Some(detail.into()) }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Grrs,
    Wgrs,
    Neither,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AxiomReport {
    pub gr0: AxiomCheck,
    pub gr1: AxiomCheck,
    pub gr2: AxiomCheck,
    pub gr3: AxiomCheck,
    pub wgr3: AxiomCheck,
}

impl AxiomReport {
    pub fn is_grrs(&self) -> bool {
        self.gr0.pass && self.gr1.pass && self.gr2.pass && self.gr3.pass
    }

    pub fn is_wgrs(&self) -> bool {
        self.gr0.pass && self.gr1.pass && self.gr2.pass && self.wgr3.pass
    }

    pub fn verdict(&self) -> Verdict {
        if self.is_grrs() {
            Verdict::Grrs
        } else if self.is_wgrs() {
            Verdict::Wgrs
        } else {
            Verdict::Neither
        }
    }
}

/// Disjoint-set forest over indices.
pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }

    /// Classes as sorted index lists, ordered by their least element.
    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.0.len() {
            let r = self.find(i);
            m.entry(r).or_default().push(i);
        }
        m.into_values().collect()
    }
}

/// A finite set of roots in a space with a symmetric form. Roots are kept
/// sorted and deduplicated; axioms are not enforced on construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteRootSystem {
    space: BilinearSpace,
    roots: Vec<Root>,
}

#[derive(Serialize, Deserialize)]
struct FiniteRepr {
    dim: usize,
    gram: Vec<RationalVector>,
    roots: Vec<RationalVector>,
}

impl Serialize for FiniteRootSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FiniteRepr { dim: self.dim(), gram: self.space.gram().to_vec(), roots: self.vectors() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteRootSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FiniteRepr::deserialize(d)?;
        if r.gram.len() != r.dim {
            return Err(serde::de::Error::custom("gram size does not match dim"));
        }
        let space = BilinearSpace::new(r.gram).map_err(serde::de::Error::custom)?;
        FiniteRootSystem::new(space, r.roots).map_err(serde::de::Error::custom)
    }
}

impl FiniteRootSystem {
    pub fn new(space: BilinearSpace, vectors: Vec<RationalVector>) -> Result<Self> {
        for v in &vectors {
            space.check_dim(v)?;
        }
        let set: BTreeSet<RationalVector> = vectors.into_iter().collect();
        let roots = set.into_iter().map(|v| Root::new(&space, v)).collect();
        Ok(FiniteRootSystem { space, roots })
    }

    pub fn space(&self) -> &BilinearSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn vectors(&self) -> Vec<RationalVector> {
        self.roots.iter().map(|r| r.vector.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn index_of(&self, v: &RationalVector) -> Option<usize> {
        self.roots.binary_search_by(|r| r.vector.cmp(v)).ok()
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        self.index_of(v).is_some()
    }

    pub fn form(&self, u: &RationalVector, v: &RationalVector) -> Rational {
        self.space.form(u, v)
    }

    pub fn isotropic_roots(&self) -> Vec<RationalVector> {
        self.roots.iter().filter(|r| r.is_isotropic()).map(|r| r.vector.clone()).collect()
    }

    pub fn has_isotropic(&self) -> bool {
        self.roots.iter().any(Root::is_isotropic)
    }

    /// `r_α(β)` for isotropic `α`, the unique admissible image in `R`.
    pub fn isotropic_reflect(&self, alpha: &RationalVector, beta: &RationalVector) -> Result<RationalVector> {
        if beta == alpha || *beta == -alpha {
            return Ok(-beta);
        }
        if self.form(alpha, beta).is_zero() {
            return Ok(beta.clone());
        }
        let plus = beta + alpha;
        let minus = beta - alpha;
        match (self.contains(&plus), self.contains(&minus)) {
            (true, false) => Ok(plus),
            (false, true) => Ok(minus),
            (true, true) => Err(Error::AmbiguousReflection(plus, minus)),
            (false, false) => Err(Error::MissingImage(plus, minus)),
        }
    }

    /// Image of `β` under the reflection (ordinary or isotropic) at `α`.
    pub fn reflect_root(&self, alpha: &Root, beta: &RationalVector) -> Result<RationalVector> {
        if alpha.is_isotropic() {
            self.isotropic_reflect(&alpha.vector, beta)
        } else {
            reflect(&self.space, &alpha.vector, beta)
        }
    }

    pub fn spans(&self) -> bool {
        linalg::rank(&self.vectors()) == self.dim()
    }

    pub fn check_axioms(&self) -> AxiomReport {
        let gr0 = match self.roots.iter().find(|r| self.space.in_kernel(&r.vector)) {
            Some(r) => AxiomCheck::fail(vec![r.vector.clone()], "root lies in the kernel of the form"),
            None if self.roots.is_empty() => AxiomCheck::fail(vec![], "root set is empty"),
            None => AxiomCheck::ok(),
        };
        // Over Q the Z-rank of ZR equals the rank of its span.
        let gr1 = if self.spans() {
            AxiomCheck::ok()
        } else {
            AxiomCheck::fail(vec![], "roots do not span the space")
        };
        let gr2 = self.check_gr2();
        let (gr3, wgr3) = self.check_gr3();
        AxiomReport { gr0, gr1, gr2, gr3, wgr3 }
    }

    fn check_gr2(&self) -> AxiomCheck {
        for a in self.roots.iter().filter(|r| !r.is_isotropic()) {
            for b in &self.roots {
                let k = Rational::int(2) * self.form(&a.vector, &b.vector) / a.norm;
                if !k.is_integer() {
                    return AxiomCheck::fail(
                        vec![a.vector.clone(), b.vector.clone()],
                        format!("k-value {k} is not an integer"),
                    );
                }
                let image = &b.vector - &a.vector.scale(k);
                if !self.contains(&image) {
                    return AxiomCheck::fail(
                        vec![a.vector.clone(), b.vector.clone()],
                        "reflection image is not a root",
                    );
                }
            }
        }
        AxiomCheck::ok()
    }

    fn check_gr3(&self) -> (AxiomCheck, AxiomCheck) {
        if let Some(r) = self.roots.iter().find(|r| !self.contains(&-&r.vector)) {
            let f = AxiomCheck::fail(vec![r.vector.clone()], "R is not symmetric under negation");
            return (f.clone(), f);
        }
        let mut gr3 = AxiomCheck::ok();
        for a in self.roots.iter().filter(|r| r.is_isotropic()) {
            for b in &self.roots {
                match self.isotropic_reflect(&a.vector, &b.vector) {
                    Ok(_) => {}
                    Err(Error::AmbiguousReflection(..)) => {
                        if gr3.pass {
                            gr3 = AxiomCheck::fail(
                                vec![a.vector.clone(), b.vector.clone()],
                                "both β+α and β−α are roots",
                            );
                        }
                    }
                    Err(_) => {
                        let f = AxiomCheck::fail(
                            vec![a.vector.clone(), b.vector.clone()],
                            "neither β+α nor β−α is a root",
                        );
                        return (f.clone(), f);
                    }
                }
            }
        }
        (gr3, AxiomCheck::ok())
    }

    fn partition(&self, classes: Vec<Vec<usize>>) -> Vec<Vec<RationalVector>> {
        classes
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.roots[i].vector.clone()).collect())
            .collect()
    }

    fn orbits(&self, with_isotropic: bool) -> Result<Vec<Vec<RationalVector>>> {
        let mut uf = UnionFind::new(self.len());
        for a in &self.roots {
            if a.is_isotropic() && !with_isotropic {
                continue;
            }
            for (j, b) in self.roots.iter().enumerate() {
                let image = self.reflect_root(a, &b.vector)?;
                if let Some(i) = self.index_of(&image) {
                    uf.union(i, j);
                }
            }
        }
        Ok(self.partition(uf.classes()))
    }

    /// Orbits of the group generated by reflections at non-isotropic roots.
    pub fn weyl_orbits(&self) -> Vec<Vec<RationalVector>> {
        self.orbits(false).expect("ordinary reflections never fail")
    }

    /// Orbits of the group generated by all `r_α`.
    pub fn gw_orbits(&self) -> Result<Vec<Vec<RationalVector>>> {
        self.orbits(true)
    }

    /// Connected components of the non-orthogonality graph.
    pub fn components(&self) -> Vec<Vec<RationalVector>> {
        let mut uf = UnionFind::new(self.len());
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if !self.form(&self.roots[i].vector, &self.roots[j].vector).is_zero() {
                    uf.union(i, j);
                }
            }
        }
        self.partition(uf.classes())
    }

    pub fn is_irreducible(&self) -> (bool, Vec<Vec<RationalVector>>) {
        let c = self.components();
        (c.len() == 1, c)
    }

    pub fn is_reduced(&self) -> bool {
        // Group roots by the line they span.
        let mut lines: BTreeMap<RationalVector, usize> = BTreeMap::new();
        for r in &self.roots {
            let lead = *r.vector.iter().find(|x| !x.is_zero()).unwrap_or(&Rational::ONE);
            *lines.entry(r.vector.scale(lead.recip())).or_default() += 1;
        }
        lines.values().all(|&n| n <= 2)
    }

    /// The smallest subset closed under `±r_α` for `α` in the set.
    pub fn generate_subsystem(&self, seeds: &[RationalVector]) -> Result<FiniteRootSystem> {
        for x in seeds {
            if !self.contains(x) {
                return Err(Error::Invalid(format!("{x} is not a root")));
            }
            if seeds.iter().all(|y| self.form(x, y).is_zero()) {
                return Err(Error::OrthogonalSeed(x.clone()));
            }
        }
        if seeds.is_empty() {
            return Err(Error::Invalid("empty seed set".into()));
        }
        let mut current: BTreeSet<RationalVector> = seeds.iter().cloned().collect();
        loop {
            let roots: Vec<Root> = current.iter().map(|v| Root::new(&self.space, v.clone())).collect();
            let mut next = current.clone();
            for a in &roots {
                for b in &current {
                    let image = self.reflect_root(a, b)?;
                    next.insert(-&image);
                    next.insert(image);
                }
            }
            if next.len() == current.len() {
                break;
            }
            current = next;
        }
        FiniteRootSystem::new(self.space.clone(), current.into_iter().collect())
    }

    /// `{α : 2(λ,α)/(α,α) ∈ Z}`, over its own span.
    pub fn integral_subsystem(&self, lambda: &RationalVector) -> Result<FiniteRootSystem> {
        self.space.check_dim(lambda)?;
        if let Some(r) = self.roots.iter().find(|r| r.is_isotropic()) {
            return Err(Error::IsotropicPresent(r.vector.clone()));
        }
        let kept: Vec<RationalVector> = self
            .roots
            .iter()
            .filter(|r| (Rational::int(2) * self.form(lambda, &r.vector) / r.norm).is_integer())
            .map(|r| r.vector.clone())
            .collect();
        Ok(FiniteRootSystem::new(self.space.clone(), kept)?.over_span())
    }

    /// The same roots expressed in a basis of their span, chosen greedily
    /// among the roots themselves.
    pub fn over_span(&self) -> FiniteRootSystem {
        let vs = self.vectors();
        let basis: Vec<RationalVector> =
            linalg::independent_subset(&vs).into_iter().map(|i| vs[i].clone()).collect();
        let space = self.space.restrict(&basis);
        let coords = vs
            .iter()
            .map(|v| RationalVector(linalg::solve(&basis, v).expect("root outside its span")))
            .collect();
        FiniteRootSystem::new(space, coords).expect("consistent dimensions")
    }

    /// Image in `V/Ker(−,−)`, realized on a complement spanned by standard
    /// basis vectors.
    pub fn minimal_quotient(&self) -> FiniteRootSystem {
        let kernel = self.space.kernel_basis();
        if kernel.is_empty() {
            return self.clone();
        }
        let n = self.dim();
        let mut full = kernel.clone();
        let mut extra = Vec::new();
        for i in 0..n {
            full.push(RationalVector::unit(n, i));
            if linalg::rank(&full) == full.len() {
                extra.push(i);
            } else {
                full.pop();
            }
        }
        let k = kernel.len();
        let proj = |v: &RationalVector| {
            let c = linalg::solve(&full, v).expect("complete basis");
            RationalVector(c[k..].to_vec())
        };
        let basis: Vec<RationalVector> = extra.iter().map(|&i| RationalVector::unit(n, i)).collect();
        let space = self.space.restrict(&basis);
        FiniteRootSystem::new(space, self.roots.iter().map(|r| proj(&r.vector)).collect())
            .expect("consistent dimensions")
    }

    /// All `k_{α,γ}` with `α` non-isotropic.
    pub fn k_values(&self) -> Vec<(RationalVector, RationalVector, Rational)> {
        let mut out = Vec::new();
        for a in self.roots.iter().filter(|r| !r.is_isotropic()) {
            for g in &self.roots {
                out.push((
                    a.vector.clone(),
                    g.vector.clone(),
                    Rational::int(2) * self.form(&a.vector, &g.vector) / a.norm,
                ));
            }
        }
        out
    }
}

pub fn check_axioms(r: &FiniteRootSystem) -> AxiomReport {
    r.check_axioms()
}

pub fn isotropic_reflect(r: &FiniteRootSystem, alpha: &RationalVector, beta: &RationalVector) -> Result<RationalVector> {
    r.isotropic_reflect(alpha, beta)
}

pub fn generate_subsystem(r: &FiniteRootSystem, seeds: &[RationalVector]) -> Result<FiniteRootSystem> {
    r.generate_subsystem(seeds)
}

pub fn integral_subsystem(r: &FiniteRootSystem, lambda: &RationalVector) -> Result<FiniteRootSystem> {
    r.integral_subsystem(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v(xs: &[i64]) -> RationalVector {
        RationalVector::from_ints(xs)
    }

    fn std_space(n: usize) -> BilinearSpace {
        BilinearSpace::diagonal(&vec![Rational::ONE; n])
    }

    fn b2() -> FiniteRootSystem {
        let roots = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [1, -1], [-1, 1], [-1, -1]];
        FiniteRootSystem::new(std_space(2), roots.iter().map(|r| v(r)).collect()).unwrap()
    }

    fn a2() -> FiniteRootSystem {
        let mut roots = vec![];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let mut r = vec![0; 3];
                    r[i] = 1;
                    r[j] = -1;
                    roots.push(v(&r));
                }
            }
        }
        FiniteRootSystem::new(std_space(3), roots).unwrap()
    }

    /// C(1,1) with (e,e) = -(d,d) = 1/2.
    fn c11() -> FiniteRootSystem {
        let space = BilinearSpace::diagonal(&[q(1, 2), q(-1, 2)]);
        let roots = [[2, 0], [-2, 0], [0, 2], [0, -2], [1, 1], [1, -1], [-1, 1], [-1, -1]];
        FiniteRootSystem::new(space, roots.iter().map(|r| v(r)).collect()).unwrap()
    }

    #[test]
    fn k_values_and_reflections() {
        let s = std_space(2);
        assert_eq!(k_value(&s, &v(&[1, 0]), &v(&[1, 1])).unwrap(), q(2, 1));
        assert_eq!(reflect(&s, &v(&[1, -1]), &v(&[1, 0])).unwrap(), v(&[0, 1]));
        assert_eq!(reflect(&s, &v(&[1, 0]), &v(&[0, 1])).unwrap(), v(&[0, 1]));
        assert_eq!(reflect(&s, &v(&[1, 1]), &v(&[1, 1])).unwrap(), v(&[-1, -1]));
        let iso = BilinearSpace::diagonal(&[q(1, 1), q(-1, 1)]);
        assert!(matches!(k_value(&iso, &v(&[1, 1]), &v(&[1, 0])), Err(Error::IsotropicBase(_))));
    }

    #[test]
    fn b2_is_grrs_with_two_weyl_orbits() {
        let r = b2();
        assert!(r.check_axioms().is_grrs());
        assert_eq!(r.weyl_orbits().len(), 2);
        assert!(r.is_irreducible().0);
        assert!(r.is_reduced());
    }

    #[test]
    fn c11_is_only_weak() {
        let r = c11();
        let rep = r.check_axioms();
        assert!(!rep.gr3.pass && rep.wgr3.pass);
        assert_eq!(rep.verdict(), Verdict::Wgrs);
        assert!(matches!(
            r.isotropic_reflect(&v(&[1, 1]), &v(&[1, -1])),
            Err(Error::AmbiguousReflection(..))
        ));
    }

    #[test]
    fn zero_root_fails_gr0() {
        let r = FiniteRootSystem::new(std_space(1), vec![v(&[0]), v(&[1]), v(&[-1])]).unwrap();
        let rep = r.check_axioms();
        assert!(!rep.gr0.pass);
        assert_eq!(rep.gr0.witness, vec![v(&[0])]);
    }

    #[test]
    fn subsystem_from_simple_roots() {
        let r = a2();
        let s = r.generate_subsystem(&[v(&[1, -1, 0]), v(&[0, 1, -1])]).unwrap();
        assert_eq!(s.len(), 6);
        let s = r.generate_subsystem(&[v(&[1, -1, 0]), v(&[-1, 1, 0])]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.over_span().check_axioms().is_grrs());
    }

    #[test]
    fn integral_subsystems() {
        let r = b2();
        let s = r.integral_subsystem(&RationalVector(vec![q(1, 2), q(0, 1)])).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(r.integral_subsystem(&v(&[0, 0])).unwrap().len(), 8);
        let w1 = RationalVector(vec![q(2, 3), q(-1, 3), q(-1, 3)]);
        assert_eq!(a2().integral_subsystem(&w1).unwrap().len(), 6);
        assert!(matches!(c11().integral_subsystem(&v(&[0, 0])), Err(Error::IsotropicPresent(_))));
    }

    #[test]
    fn bc1_is_not_reduced() {
        let r = FiniteRootSystem::new(std_space(1), vec![v(&[1]), v(&[-1]), v(&[2]), v(&[-2])]).unwrap();
        assert!(!r.is_reduced());
        assert!(r.check_axioms().is_grrs());
    }

    #[test]
    fn minimal_quotient_of_a11() {
        // A(1,1): ε_i − ε_j in a space with form diag(1,1,-1,-1).
        let space = BilinearSpace::diagonal(&[q(1, 1), q(1, 1), q(-1, 1), q(-1, 1)]);
        let mut roots = vec![];
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let mut r = vec![0; 4];
                    r[i] = 1;
                    r[j] = -1;
                    roots.push(v(&r));
                }
            }
        }
        let r = FiniteRootSystem::new(space, roots).unwrap().over_span();
        assert_eq!(r.dim(), 3);
        assert!(r.check_axioms().is_grrs());
        let cl = r.minimal_quotient();
        assert_eq!(cl.dim(), 2);
        assert_eq!(cl.len(), 8);
        assert_eq!(cl.check_axioms().verdict(), Verdict::Wgrs);
    }

    #[test]
    fn json_round_trip() {
        let r = c11();
        let s = serde_json::to_string(&r).unwrap();
        let back: FiniteRootSystem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
