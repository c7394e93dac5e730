//! Affine root systems stored as finite `cl`-parts with lattice-coset offset
//! families over the kernel of the form.
//!
//! Coordinates are split: the first `l` coordinates span a complement `V'` on
//! which the form is nondegenerate, the last `k` span `Ker(−,−)`. A root is
//! `α ⊕ f` with `α ∈ cl(R)` and `f ∈ F(α)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coset::CosetSet;
use crate::error::{Error, Result};
use crate::finite::{AxiomCheck, AxiomReport, FiniteRootSystem};
use crate::lattice::{integer_left_kernel, Lattice};
use crate::linalg::{self, BilinearSpace};
use crate::rational::{Rational, RationalVector};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Family {
    pub root: RationalVector,
    #[serde(flatten)]
    pub offsets: CosetSet,
}

/// Raw input for one family: offsets `⋃ (p + M)` above `root`.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub root: RationalVector,
    pub points: Vec<RationalVector>,
    pub modulus: Lattice,
}

impl FamilySpec {
    pub fn new(root: RationalVector, points: Vec<RationalVector>, modulus: Lattice) -> Self {
        FamilySpec { root, points, modulus }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolicRootSystem {
    space: BilinearSpace,
    cl: FiniteRootSystem,
    lattice: Lattice,
    families: Vec<Family>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SymbolicRepr {
    dim: usize,
    gram: Vec<RationalVector>,
    kernel_dim: usize,
    cl: FiniteRootSystem,
    families: Vec<Family>,
}

impl Serialize for SymbolicRootSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolicRepr {
            dim: self.dim(),
            gram: self.space.gram().to_vec(),
            kernel_dim: self.kernel_dim(),
            cl: self.cl.clone(),
            families: self.families.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolicRootSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SymbolicRepr::deserialize(d)?;
        let l = r.cl.dim();
        if r.dim != l + r.kernel_dim || r.gram.len() != r.dim {
            return Err(D::Error::custom("dimensions of gram, cl and kernel disagree"));
        }
        let space = BilinearSpace::new(r.gram).map_err(D::Error::custom)?;
        if space != r.cl.space().extend_by_kernel(r.kernel_dim) {
            return Err(D::Error::custom("gram is not the cl form extended by the kernel"));
        }
        let specs = r
            .families
            .iter()
            .map(|f| FamilySpec::new(f.root.clone(), f.offsets.points(), f.offsets.modulus().clone()))
            .collect();
        let s = SymbolicRootSystem::from_families(r.cl.space().clone(), r.kernel_dim, specs)
            .map_err(D::Error::custom)?;
        if s.cl.vectors() != r.cl.vectors() {
            return Err(D::Error::custom("cl roots do not match the families"));
        }
        Ok(s)
    }
}

/// Rows of `gens` reduced to the lattice `ZR ∩ Ker`, in kernel coordinates.
fn kernel_lattice(l: usize, k: usize, gens: &[RationalVector]) -> Lattice {
    let full = Lattice::from_vectors(l + k, gens);
    let rows: Vec<RationalVector> = full
        .basis()
        .iter()
        .filter(|row| row.iter().take(l).all(Rational::is_zero))
        .map(|row| row.slice(l..l + k))
        .collect();
    Lattice::from_vectors(k, &rows)
}

/// Greedy lexicographically first subset with independent vectors.
fn greedy_basis(vs: &[RationalVector]) -> Vec<RationalVector> {
    linalg::independent_subset(vs).into_iter().map(|i| vs[i].clone()).collect()
}

impl SymbolicRootSystem {
    /// Builds a system over `cl_space ⊕ Q^k`. Families above the same
    /// `cl`-root are merged; `L` is recomputed from the roots.
    pub fn from_families(cl_space: BilinearSpace, k: usize, specs: Vec<FamilySpec>) -> Result<Self> {
        let l = cl_space.dim();
        if !cl_space.is_nondegenerate() {
            return Err(Error::Invalid("form on the cl part is degenerate".into()));
        }
        let mut gens = Vec::new();
        for s in &specs {
            cl_space.check_dim(&s.root)?;
            if s.modulus.dim() != k {
                return Err(Error::DimensionMismatch { expected: k, got: s.modulus.dim() });
            }
            for p in &s.points {
                if p.dim() != k {
                    return Err(Error::DimensionMismatch { expected: k, got: p.dim() });
                }
                gens.push(s.root.concat(p));
            }
            for m in s.modulus.basis() {
                gens.push(RationalVector::zeros(l).concat(m));
            }
        }
        let lattice = kernel_lattice(l, k, &gens);
        let mut merged: BTreeMap<RationalVector, CosetSet> = BTreeMap::new();
        for s in specs {
            if s.points.is_empty() {
                continue;
            }
            let set = CosetSet::new(lattice.clone(), s.modulus, &s.points)?;
            let set = match merged.remove(&s.root) {
                Some(prev) => prev.union(&set)?,
                None => set,
            };
            merged.insert(s.root, set);
        }
        let cl = FiniteRootSystem::new(cl_space.clone(), merged.keys().cloned().collect())?;
        let families = merged.into_iter().map(|(root, offsets)| Family { root, offsets }).collect();
        Ok(SymbolicRootSystem { space: cl_space.extend_by_kernel(k), cl, lattice, families })
    }

    /// A finite system viewed symbolically; its kernel directions become
    /// the trailing coordinates.
    pub fn from_finite(r: &FiniteRootSystem) -> Result<Self> {
        let space = r.space();
        let kernel = space.kernel_basis();
        let n = r.dim();
        let mut full: Vec<RationalVector> = Vec::new();
        for i in 0..n {
            full.push(RationalVector::unit(n, i));
            let mut test = full.clone();
            test.extend(kernel.iter().cloned());
            if linalg::rank(&test) < test.len() {
                full.pop();
            }
        }
        let l = full.len();
        let cl_space = space.restrict(&full);
        full.extend(kernel.iter().cloned());
        let specs = r
            .vectors()
            .iter()
            .map(|v| {
                let c = linalg::solve(&full, v).expect("complete basis");
                let root = RationalVector(c[..l].to_vec());
                let off = RationalVector(c[l..].to_vec());
                FamilySpec::new(root, vec![off], Lattice::zero(kernel.len()))
            })
            .collect();
        Ok(Self::from_families(cl_space, kernel.len(), specs)?.normalized())
    }

    pub fn space(&self) -> &BilinearSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn cl_dim(&self) -> usize {
        self.cl.dim()
    }

    pub fn kernel_dim(&self) -> usize {
        self.dim() - self.cl_dim()
    }

    pub fn cl(&self) -> &FiniteRootSystem {
        &self.cl
    }

    /// `L = ZR ∩ Ker(−,−)` in kernel coordinates.
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn family(&self, alpha: &RationalVector) -> Option<&CosetSet> {
        self.families
            .binary_search_by(|f| f.root.cmp(alpha))
            .ok()
            .map(|i| &self.families[i].offsets)
    }

    pub fn f_of(&self, alpha: &RationalVector) -> Result<&CosetSet> {
        self.family(alpha).ok_or_else(|| Error::UnknownRoot(alpha.clone()))
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        if v.dim() != self.dim() {
            return false;
        }
        let l = self.cl_dim();
        self.family(&v.slice(0..l)).is_some_and(|f| f.contains(&v.slice(l..self.dim())))
    }

    /// Greedy lexicographically first `cl`-roots forming a basis of `V'`.
    pub fn splitting(&self) -> Vec<RationalVector> {
        greedy_basis(&self.cl.vectors())
    }

    /// Applies the coordinate change `α ↦ α + φ(α)` on `V'`, where `φ` sends
    /// the i-th unit vector of `V'` to `images[i] ∈ Ker`. Each `F(α)` becomes
    /// `F(α) − φ(α)`.
    pub fn shear(&self, images: &[RationalVector]) -> Result<Self> {
        let k = self.kernel_dim();
        if images.len() != self.cl_dim() {
            return Err(Error::DimensionMismatch { expected: self.cl_dim(), got: images.len() });
        }
        let specs = self
            .families
            .iter()
            .map(|f| {
                let phi = linalg::combine(&f.root.0, images, k);
                let points = f.offsets.points().iter().map(|p| p - &phi).collect();
                FamilySpec::new(f.root.clone(), points, f.offsets.modulus().clone())
            })
            .collect();
        Self::from_families(self.cl.space().clone(), k, specs)
    }

    /// Shears so that `0 ∈ F(x)` for every root `x` of the splitting.
    pub fn normalized(&self) -> Self {
        let x = self.splitting();
        let k = self.kernel_dim();
        let l = self.cl_dim();
        if x.len() < l {
            return self.clone();
        }
        let offsets: Vec<RationalVector> =
            x.iter().map(|r| self.family(r).expect("splitting root").points()[0].clone()).collect();
        let images: Vec<RationalVector> = (0..l)
            .map(|i| {
                let c = linalg::solve(&x, &RationalVector::unit(l, i)).expect("basis");
                linalg::combine(&c, &offsets, k)
            })
            .collect();
        self.shear(&images).expect("shear preserves consistency")
    }

    /// `R^(n)`: every family gains `Zδ₁ + … + Zδₙ` in new kernel directions.
    pub fn affinize(&self, n: usize) -> Self {
        let k = self.kernel_dim();
        let pad = RationalVector::zeros(n);
        let specs = self
            .families
            .iter()
            .map(|f| {
                let points = f.offsets.points().iter().map(|p| p.concat(&pad)).collect();
                let mut gens: Vec<RationalVector> =
                    f.offsets.modulus().basis().iter().map(|m| m.concat(&pad)).collect();
                gens.extend((0..n).map(|i| RationalVector::unit(k + n, k + i)));
                FamilySpec::new(f.root.clone(), points, Lattice::from_vectors(k + n, &gens))
            })
            .collect();
        Self::from_families(self.cl.space().clone(), k + n, specs)
            .expect("affinization is consistent")
            .normalized()
    }

    /// Pushes the families forward along `V → V/span(vectors)`. Vectors are
    /// full coordinates and must lie in the kernel.
    pub fn quotient(&self, vectors: &[RationalVector], require_bijective: bool) -> Result<Self> {
        let l = self.cl_dim();
        let k = self.kernel_dim();
        let mut us = Vec::new();
        for v in vectors {
            self.space.check_dim(v)?;
            if !v.slice(0..l).is_zero() {
                return Err(Error::NotInKernel(v.clone()));
            }
            let u = v.slice(l..l + k);
            if !u.is_zero() {
                us.push(u);
            }
        }
        let u_basis = greedy_basis(&us);
        if u_basis.is_empty() {
            return Ok(self.clone());
        }
        let mut full = u_basis.clone();
        for i in 0..k {
            full.push(RationalVector::unit(k, i));
            if linalg::rank(&full) < full.len() {
                full.pop();
            }
        }
        let d = u_basis.len();
        let proj = |v: &RationalVector| {
            let c = linalg::solve(&full, v).expect("complete basis");
            RationalVector(c[d..].to_vec())
        };
        if require_bijective {
            self.check_injective(&u_basis, &proj)?;
        }
        let specs = self
            .families
            .iter()
            .map(|f| {
                let points = f.offsets.points().iter().map(&proj).collect();
                let modulus = f.offsets.modulus().map(k - d, proj);
                FamilySpec::new(f.root.clone(), points, modulus)
            })
            .collect();
        Ok(Self::from_families(self.cl.space().clone(), k - d, specs)?.normalized())
    }

    fn check_injective<F: Fn(&RationalVector) -> RationalVector>(
        &self,
        u_basis: &[RationalVector],
        proj: &F,
    ) -> Result<()> {
        let l_basis = self.lattice.basis();
        let images: Vec<RationalVector> = l_basis.iter().map(proj).collect();
        let lu_gens: Vec<RationalVector> = integer_left_kernel(&images)
            .iter()
            .map(|c| {
                let c: Vec<Rational> = c.iter().map(|&x| Rational::int(x)).collect();
                linalg::combine(&c, l_basis, self.kernel_dim())
            })
            .collect();
        let lu = Lattice::from_vectors(self.kernel_dim(), &lu_gens);
        debug_assert!(lu.basis().iter().all(|v| linalg::solve(u_basis, v).is_some()));
        if lu.is_zero() {
            return Ok(());
        }
        for f in &self.families {
            let m = f.offsets.modulus();
            if !m.intersection(&lu).is_zero() {
                return Err(Error::NotBijective(format!("F({}) is periodic along the quotient", f.root)));
            }
            let diffs = f.offsets.add(&f.offsets.neg())?;
            let mut basis: Vec<RationalVector> = m.basis().to_vec();
            basis.extend(lu.basis().iter().cloned());
            for d in diffs.points() {
                let Some(c) = linalg::solve(&basis, &d) else { continue };
                if c.iter().all(Rational::is_integer) {
                    let u = linalg::combine(&c[m.rank()..], lu.basis(), self.kernel_dim());
                    if !u.is_zero() {
                        return Err(Error::NotBijective(format!(
                            "two roots above {} differ by {u}",
                            f.root
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn lift(&self, alpha: &RationalVector, f: &RationalVector) -> RationalVector {
        alpha.concat(f)
    }

    pub fn check_axioms(&self) -> AxiomReport {
        let gr0 = match self.cl.roots().iter().find(|r| r.vector.is_zero()) {
            Some(_) => {
                let z = RationalVector::zeros(self.cl_dim());
                let f = &self.family(&z).expect("zero root").points()[0];
                AxiomCheck::fail(vec![self.lift(&z, f)], "root lies in the kernel of the form")
            }
            None if self.families.is_empty() => AxiomCheck::fail(vec![], "root set is empty"),
            None => AxiomCheck::ok(),
        };
        let gr1 = if !self.cl.spans() {
            AxiomCheck::fail(vec![], "cl(R) does not span V'")
        } else if self.lattice.rank() != self.kernel_dim() {
            AxiomCheck::fail(
                vec![],
                format!("rank of ZR ∩ Ker is {}, expected {}", self.lattice.rank(), self.kernel_dim()),
            )
        } else {
            AxiomCheck::ok()
        };
        let gr2 = self.check_gr2();
        let (gr3, wgr3) = self.check_gr3();
        AxiomReport { gr0, gr1, gr2, gr3, wgr3 }
    }

    fn check_gr2(&self) -> AxiomCheck {
        for fa in self.families.iter().filter(|f| !self.cl.form(&f.root, &f.root).is_zero()) {
            let alpha = &fa.root;
            let norm = self.cl.form(alpha, alpha);
            for fb in &self.families {
                let beta = &fb.root;
                let k = Rational::int(2) * self.cl.form(alpha, beta) / norm;
                let witness = || {
                    vec![
                        self.lift(alpha, &fa.offsets.points()[0]),
                        self.lift(beta, &fb.offsets.points()[0]),
                    ]
                };
                let Some(k) = k.to_integer() else {
                    return AxiomCheck::fail(witness(), format!("k-value {k} is not an integer"));
                };
                let image = beta - &alpha.scale(Rational::int(k));
                let Some(target) = self.family(&image) else {
                    return AxiomCheck::fail(witness(), "reflection image is not a root");
                };
                let moved = fb.offsets.add(&fa.offsets.scale(-k).expect("scaling stays in L"));
                match moved {
                    Ok(m) if m.is_subset(target) => {}
                    _ => return AxiomCheck::fail(witness(), "reflection image is not a root"),
                }
            }
        }
        AxiomCheck::ok()
    }

    fn check_gr3(&self) -> (AxiomCheck, AxiomCheck) {
        for f in &self.families {
            let neg = -&f.root;
            let ok = self.family(&neg).is_some_and(|g| *g == f.offsets.neg());
            if !ok {
                let w = vec![self.lift(&f.root, &f.offsets.points()[0])];
                let fail = AxiomCheck::fail(w, "R is not symmetric under negation");
                return (fail.clone(), fail);
            }
        }
        let mut gr3 = AxiomCheck::ok();
        for fa in self.families.iter().filter(|f| self.cl.form(&f.root, &f.root).is_zero()) {
            for fb in &self.families {
                if self.cl.form(&fa.root, &fb.root).is_zero() {
                    continue;
                }
                match self.isotropic_pair(fa, fb) {
                    PairOutcome::Unique => {}
                    PairOutcome::Ambiguous(a, b) => {
                        if gr3.pass {
                            gr3 = AxiomCheck::fail(
                                vec![self.lift(&fa.root, &a), self.lift(&fb.root, &b)],
                                "both β+α and β−α are roots",
                            );
                        }
                    }
                    PairOutcome::Missing(a, b) => {
                        let fail = AxiomCheck::fail(
                            vec![self.lift(&fa.root, &a), self.lift(&fb.root, &b)],
                            "neither β+α nor β−α is a root",
                        );
                        return (fail.clone(), fail);
                    }
                }
            }
        }
        (gr3, AxiomCheck::ok())
    }

    /// Decides, for all lifts `α+a`, `β+b` of an isotropic `α` and a
    /// non-orthogonal `β`, how many of `β+b ± (α+a)` are roots.
    fn isotropic_pair(&self, fa: &Family, fb: &Family) -> PairOutcome {
        let k = self.kernel_dim();
        let plus = self.family(&(&fb.root + &fa.root));
        let minus = self.family(&(&fb.root - &fa.root));
        let am = fa.offsets.modulus().basis();
        let bm = fb.offsets.modulus().basis();
        let r = am.len() + bm.len();
        let zr = Lattice::standard(r);
        // Coefficients (u, w) with u·A ± w·B in the target modulus.
        let relations = |target: Option<&CosetSet>, sign: i128| -> Lattice {
            let Some(t) = target else { return zr.clone() };
            let mut rows: Vec<RationalVector> =
                am.iter().map(|a| a.scale(Rational::int(sign))).collect();
            rows.extend(bm.iter().cloned());
            rows.extend(t.modulus().basis().iter().cloned());
            let gens: Vec<RationalVector> = integer_left_kernel(&rows)
                .iter()
                .map(|c| RationalVector(c[..r].iter().map(|&x| Rational::int(x)).collect()))
                .collect();
            Lattice::from_vectors(r, &gens)
        };
        let k1 = relations(plus, 1);
        let k2 = relations(minus, -1);
        let point = |pa: &RationalVector, pb: &RationalVector, uw: &RationalVector| {
            let a = pa + &linalg::combine(&uw.0[..am.len()], am, k);
            let b = pb + &linalg::combine(&uw.0[am.len()..], bm, k);
            (a, b)
        };
        let pred = |a: &RationalVector, b: &RationalVector| {
            (
                plus.is_some_and(|p| p.contains(&(b + a))),
                minus.is_some_and(|n| n.contains(&(b - a))),
            )
        };
        let mut ambiguous = None;
        for pa in fa.offsets.points() {
            for pb in fb.offsets.points() {
                let full1 = k1.rank() == r;
                let full2 = k2.rank() == r;
                if !full1 && !full2 {
                    return PairOutcome::Missing(pa, pb);
                }
                let modulus = match (full1, full2) {
                    (true, true) => k1.intersection(&k2),
                    (true, false) => k1.clone(),
                    _ => k2.clone(),
                };
                for uw in zr.quotient_reps(&modulus).expect("full rank") {
                    let (a, b) = point(&pa, &pb, &uw);
                    let (p1, p2) = pred(&a, &b);
                    let needed = match (full1, full2) {
                        (true, true) => p1 || p2,
                        (true, false) => p1,
                        _ => p2,
                    };
                    if !needed {
                        return PairOutcome::Missing(a, b);
                    }
                    if p1 && p2 && ambiguous.is_none() {
                        ambiguous = Some((a, b));
                    }
                }
                if ambiguous.is_none() && full1 != full2 {
                    // The other predicate holds somewhere iff its target meets
                    // the translated span of both moduli.
                    let (other, sign) = if full1 { (minus, -1) } else { (plus, 1) };
                    if let Some(t) = other {
                        let mut gens: Vec<RationalVector> = am.to_vec();
                        gens.extend(bm.iter().cloned());
                        gens.extend(t.modulus().basis().iter().cloned());
                        let span = Lattice::from_vectors(k, &gens);
                        let base = &pb + &pa.scale(Rational::int(sign));
                        if t.points().iter().any(|p| span.contains(&(p - &base))) {
                            ambiguous = Some((pa.clone(), pb.clone()));
                        }
                    }
                }
            }
        }
        match ambiguous {
            Some((a, b)) => PairOutcome::Ambiguous(a, b),
            None => PairOutcome::Unique,
        }
    }

    /// Gap of each `cl`-root when `dim Ker = 1`: the index of `F(α)`'s period
    /// in `L`. Isotropic roots get a value only when `F(α)` is a single coset.
    pub fn gaps(&self) -> Result<GapTable> {
        if self.kernel_dim() != 1 {
            return Err(Error::KernelTooLarge(self.kernel_dim()));
        }
        let entries = self
            .families
            .iter()
            .map(|f| {
                let isotropic = self.cl.form(&f.root, &f.root).is_zero();
                let gap = if isotropic && !f.offsets.is_coset() {
                    None
                } else if f.offsets.modulus().is_zero() {
                    Some(0)
                } else {
                    self.lattice.index_of(f.offsets.modulus()).map(|g| g as i128)
                };
                GapEntry { root: f.root.clone(), isotropic, gap }
            })
            .collect();
        Ok(GapTable { entries })
    }
}

enum PairOutcome {
    Unique,
    Ambiguous(RationalVector, RationalVector),
    Missing(RationalVector, RationalVector),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GapEntry {
    pub root: RationalVector,
    pub isotropic: bool,
    pub gap: Option<i128>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GapTable {
    pub entries: Vec<GapEntry>,
}

impl GapTable {
    pub fn get(&self, root: &RationalVector) -> Option<i128> {
        self.entries.iter().find(|e| &e.root == root).and_then(|e| e.gap)
    }
}

pub fn affinize_finite(r: &FiniteRootSystem, n: usize) -> Result<SymbolicRootSystem> {
    Ok(SymbolicRootSystem::from_finite(r)?.affinize(n))
}
