//! Finite unions of cosets of a lattice, in canonical form.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::rational::RationalVector;

/// The set `⋃ᵢ (translate + repᵢ + M)` inside a single coset `translate + L`.
///
/// In canonical form `M` is the full stabilizer `{d ∈ L : S + d = S}`, each
/// rep is a canonical residue mod `M`, reps are sorted, and `translate` is the
/// canonical residue of the coset mod `L`. Equal sets over the same `L` have
/// equal representations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CosetSet {
    lattice: Lattice,
    modulus: Lattice,
    translate: RationalVector,
    reps: Vec<RationalVector>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CosetRepr {
    translate: RationalVector,
    modulus_basis: Vec<RationalVector>,
    reps: Vec<RationalVector>,
    lattice_basis: Vec<RationalVector>,
}

impl Serialize for CosetSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CosetRepr {
            translate: self.translate.clone(),
            modulus_basis: self.modulus.basis().to_vec(),
            reps: self.reps.clone(),
            lattice_basis: self.lattice.basis().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CosetSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CosetRepr::deserialize(d)?;
        let dim = r.translate.dim();
        let bad = |what: &str| serde::de::Error::custom(format!("coset set: {what}"));
        let all = r.modulus_basis.iter().chain(&r.lattice_basis).chain(&r.reps);
        if all.into_iter().any(|v| v.dim() != dim) {
            return Err(bad("dimension mismatch"));
        }
        let lattice = Lattice::from_vectors(dim, &r.lattice_basis);
        let modulus = Lattice::from_vectors(dim, &r.modulus_basis);
        let points: Vec<RationalVector> = r.reps.iter().map(|x| &r.translate + x).collect();
        CosetSet::new(lattice, modulus, &points).map_err(|e| bad(&e.to_string()))
    }
}

impl CosetSet {
    /// `⋃ (p + M)` over the given points, which must lie in one coset of `L`.
    pub fn new(lattice: Lattice, modulus: Lattice, points: &[RationalVector]) -> Result<Self> {
        let dim = lattice.dim();
        if !lattice.contains_lattice(&modulus) {
            return Err(Error::Invalid("modulus is not contained in the lattice".into()));
        }
        let Some(p0) = points.first() else {
            return Ok(CosetSet::empty(lattice));
        };
        let translate = lattice.reduce(p0);
        let mut rel = Vec::with_capacity(points.len());
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
            let r = p - &translate;
            if !lattice.contains(&r) {
                return Err(Error::Invalid(format!("{p} lies outside the coset {translate} + L")));
            }
            rel.push(r);
        }
        Ok(Self::canonical(lattice, modulus, translate, rel))
    }

    fn canonical(
        lattice: Lattice,
        modulus: Lattice,
        translate: RationalVector,
        rel: Vec<RationalVector>,
    ) -> Self {
        let reps: BTreeSet<RationalVector> = rel.iter().map(|r| modulus.reduce(r)).collect();
        let reps: Vec<RationalVector> = reps.into_iter().collect();
        // Enlarge the modulus to the stabilizer of the set.
        let mut stab = modulus.clone();
        for r in &reps[1..] {
            let d = r - &reps[0];
            if stab.contains(&d) {
                continue;
            }
            if reps.iter().all(|x| reps.binary_search(&modulus.reduce(&(x + &d))).is_ok()) {
                stab = stab.sum(&Lattice::from_vectors(lattice.dim(), std::slice::from_ref(&d)));
            }
        }
        let reps: BTreeSet<RationalVector> = reps.iter().map(|r| stab.reduce(r)).collect();
        CosetSet { lattice, modulus: stab, translate, reps: reps.into_iter().collect() }
    }

    pub fn empty(lattice: Lattice) -> Self {
        let dim = lattice.dim();
        CosetSet { lattice, modulus: Lattice::zero(dim), translate: RationalVector::zeros(dim), reps: vec![] }
    }

    /// The single coset `p + M`.
    pub fn coset(lattice: Lattice, modulus: Lattice, p: &RationalVector) -> Result<Self> {
        Self::new(lattice, modulus, std::slice::from_ref(p))
    }

    /// All of `L`.
    pub fn full(lattice: Lattice) -> Self {
        let zero = RationalVector::zeros(lattice.dim());
        Self::coset(lattice.clone(), lattice, &zero).expect("zero lies in L")
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn modulus(&self) -> &Lattice {
        &self.modulus
    }

    pub fn translate(&self) -> &RationalVector {
        &self.translate
    }

    pub fn reps(&self) -> &[RationalVector] {
        &self.reps
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Absolute coset representatives `translate + rep`.
    pub fn points(&self) -> Vec<RationalVector> {
        self.reps.iter().map(|r| &self.translate + r).collect()
    }

    /// True when the set is a single coset of its modulus.
    pub fn is_coset(&self) -> bool {
        self.reps.len() == 1
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        if self.is_empty() {
            return false;
        }
        let r = v - &self.translate;
        self.lattice.contains(&r) && self.reps.binary_search(&self.modulus.reduce(&r)).is_ok()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&RationalVector::zeros(self.dim()))
    }

    /// The same set viewed inside a larger lattice.
    pub fn with_lattice(&self, lattice: Lattice) -> Result<Self> {
        Self::new(lattice, self.modulus.clone(), &self.points())
    }

    pub fn neg(&self) -> Self {
        let points: Vec<RationalVector> = self.points().iter().map(|p| -p).collect();
        Self::new(self.lattice.clone(), self.modulus.clone(), &points).expect("negation stays in L")
    }

    pub fn shift(&self, v: &RationalVector) -> Result<Self> {
        let points: Vec<RationalVector> = self.points().iter().map(|p| p + v).collect();
        Self::new(self.lattice.clone(), self.modulus.clone(), &points)
    }

    /// Minkowski sum.
    pub fn add(&self, other: &CosetSet) -> Result<Self> {
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty(self.lattice.clone()));
        }
        let mut points = Vec::new();
        for a in self.points() {
            for b in other.points() {
                points.push(&a + &b);
            }
        }
        Self::new(self.lattice.clone(), self.modulus.sum(&other.modulus), &points)
    }

    /// `{c·x : x ∈ S}` for an integer `c`.
    pub fn scale(&self, c: i128) -> Result<Self> {
        let cr = crate::rational::Rational::int(c);
        let points: Vec<RationalVector> = self.points().iter().map(|p| p.scale(cr)).collect();
        Self::new(self.lattice.clone(), self.modulus.scale(cr), &points)
    }

    /// Image under a linear map into a space with lattice `target`.
    pub fn map<F: Fn(&RationalVector) -> RationalVector>(&self, target: Lattice, f: F) -> Result<Self> {
        let dim = target.dim();
        let modulus = self.modulus.map(dim, &f);
        let points: Vec<RationalVector> = self.points().iter().map(&f).collect();
        if points.is_empty() {
            return Ok(Self::empty(target));
        }
        Self::new(target, modulus, &points)
    }

    /// Representatives of the finitely many `sub`-cosets making up the set,
    /// when `sub ⊆ M` has finite index.
    pub fn refine(&self, sub: &Lattice) -> Option<Vec<RationalVector>> {
        let reps = self.modulus.quotient_reps(sub)?;
        let mut out = Vec::new();
        for p in self.points() {
            for r in &reps {
                out.push(&p + r);
            }
        }
        Some(out)
    }

    pub fn union(&self, other: &CosetSet) -> Result<Self> {
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let m = self.modulus.intersection(&other.modulus);
        let (Some(a), Some(b)) = (self.refine(&m), other.refine(&m)) else {
            return Err(Error::Invalid("union of cosets of incommensurable lattices".into()));
        };
        Self::new(self.lattice.clone(), m, &[a, b].concat())
    }

    pub fn is_subset(&self, other: &CosetSet) -> bool {
        if self.is_empty() {
            return true;
        }
        if other.is_empty() {
            return false;
        }
        let joint = self.modulus.sum(&other.modulus);
        let Some(shifts) = joint.quotient_reps(&other.modulus) else { return false };
        self.points().iter().all(|p| shifts.iter().all(|s| other.contains(&(p + s))))
    }

    pub fn set_eq(&self, other: &CosetSet) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    pub fn is_disjoint(&self, other: &CosetSet) -> bool {
        if self.is_empty() || other.is_empty() {
            return true;
        }
        // x + m = y + m' has a solution iff y − x ∈ M + M'.
        let joint = self.modulus.sum(&other.modulus);
        self.points().iter().all(|x| other.points().iter().all(|y| !joint.contains(&(y - x))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v(xs: &[i64]) -> RationalVector {
        RationalVector::from_ints(xs)
    }

    fn z1() -> Lattice {
        Lattice::standard(1)
    }

    fn mz(m: i64) -> Lattice {
        Lattice::from_vectors(1, &[v(&[m])])
    }

    #[test]
    fn stabilizer_absorbs_periodic_reps() {
        // {0, 2} + 4Z = 2Z
        let s = CosetSet::new(z1(), mz(4), &[v(&[0]), v(&[2])]).unwrap();
        assert_eq!(s.modulus(), &mz(2));
        assert_eq!(s.reps(), &[v(&[0])]);
        assert_eq!(s, CosetSet::coset(z1(), mz(2), &v(&[6])).unwrap());
    }

    #[test]
    fn translate_is_canonical() {
        let l = z1();
        let half = RationalVector(vec![q(1, 2)]);
        let s = CosetSet::coset(l.clone(), mz(3), &RationalVector(vec![q(7, 2)])).unwrap();
        assert_eq!(s.translate(), &half);
        assert!(s.contains(&RationalVector(vec![q(1, 2)])));
        assert!(s.contains(&RationalVector(vec![q(-5, 2)])));
        assert!(!s.contains(&RationalVector(vec![q(3, 2)])));
        assert!(!s.contains(&v(&[0])));
    }

    #[test]
    fn inclusion_and_sums() {
        let two = CosetSet::coset(z1(), mz(2), &v(&[0])).unwrap();
        let four = CosetSet::coset(z1(), mz(4), &v(&[0])).unwrap();
        let all = CosetSet::full(z1());
        assert!(four.is_subset(&two));
        assert!(!two.is_subset(&four));
        assert!(two.is_subset(&all));
        let odd = CosetSet::coset(z1(), mz(2), &v(&[1])).unwrap();
        assert_eq!(two.add(&odd).unwrap(), odd);
        assert_eq!(two.union(&odd).unwrap(), all);
        assert!(two.is_disjoint(&odd));
        assert_eq!(odd.neg(), odd);
        assert_eq!(all.scale(2).unwrap(), two);
    }

    #[test]
    fn rank_deficient_modulus_is_not_inside_finite_union() {
        let l = Lattice::standard(2);
        let line = CosetSet::coset(l.clone(), Lattice::from_vectors(2, &[v(&[1, 0])]), &v(&[0, 0])).unwrap();
        let full = CosetSet::full(l.clone());
        let point = CosetSet::coset(l.clone(), Lattice::zero(2), &v(&[0, 0])).unwrap();
        assert!(line.is_subset(&full));
        assert!(!line.is_subset(&point));
        assert!(point.is_subset(&line));
    }

    #[test]
    fn json_round_trip() {
        let s = CosetSet::new(z1(), mz(3), &[v(&[1]), v(&[2])]).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<CosetSet>(&j).unwrap(), s);
    }
}
