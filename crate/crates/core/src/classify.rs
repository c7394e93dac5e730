//! Isomorphism classes of affine systems with a given finite part.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::catalog::{self, CatalogName, FamilyParams};
use crate::coset::CosetSet;
use crate::error::{Error, Result};
use crate::f2::{self, F2Subset};
use crate::finite::FiniteRootSystem;
use crate::iso::{homothety_where, Homothety};
use crate::lattice::{determinant, Lattice};
use crate::rational::{Rational, RationalVector};
use crate::symbolic::{affinize_finite, SymbolicRootSystem};

/// Largest `q` listed for the infinite `A(n,n)_x` series.
pub const MAX_LISTED_Q: i64 = 6;

/// Classes are cut off at this `k` when they are parametrized by pairs of
/// subsets.
pub const PAIR_MAX_K: usize = 3;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ClassDescriptor {
    pub cl: String,
    pub k: usize,
    pub data: Map<String, Value>,
}

/// Result of [`enumerate_classes`]; `partial` marks lists the theory does not
/// close off.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Enumeration {
    pub classes: Vec<ClassDescriptor>,
    pub partial: bool,
}

impl ClassDescriptor {
    fn new(cl: &CatalogName, k: usize, entries: Vec<(&str, Value)>) -> Self {
        let data = entries.into_iter().map(|(a, b)| (a.to_string(), b)).collect();
        ClassDescriptor { cl: cl.to_string(), k, data }
    }

    fn form(cl: &CatalogName, k: usize, form: &str) -> Self {
        Self::new(cl, k, vec![("form", Value::from(form))])
    }

    pub fn cl_name(&self) -> Result<CatalogName> {
        Ok(self.cl.parse()?)
    }

    fn subset(&self, key: &str) -> Result<Option<F2Subset>> {
        match self.data.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(F2Subset::parse(self.k, s)?)),
            Some(v) => Err(Error::Invalid(format!("{key} must be a subset string, got {v}"))),
        }
    }

    fn int(&self, key: &str) -> Option<i64> {
        self.data.get(key).and_then(Value::as_i64)
    }

    fn form_str(&self) -> Option<&str> {
        self.data.get("form").and_then(Value::as_str)
    }
}

fn subset_value(s: &F2Subset) -> Value {
    Value::from(s.to_string())
}

fn not_classified(msg: impl Into<String>) -> Error {
    Error::NotClassified(msg.into())
}

enum Kind {
    Affinization,
    A1,
    BType,
    CType,
    C2,
    Exceptional(i128),
    SuperB,
    Cmn(usize, usize),
    BCmn(usize),
    BCn(usize),
    Ann(usize),
}

fn kind(name: &CatalogName) -> Kind {
    use CatalogName::*;
    match *name {
        A(1) => Kind::A1,
        B(n) if n >= 3 => Kind::BType,
        C(2) | B(2) => Kind::C2,
        C(_) => Kind::CType,
        G2 => Kind::Exceptional(3),
        F4 => Kind::Exceptional(2),
        SuperB(m, _) if m >= 1 => Kind::SuperB,
        SuperB(0, n) | BC(n) => Kind::BCn(n),
        Cmn(m, n) => Kind::Cmn(m, n),
        BCmn(m, _) => Kind::BCmn(m),
        AnnF(n) => Kind::Ann(n),
        SuperA(m, n) if m == n => Kind::Ann(n),
        _ => Kind::Affinization,
    }
}

/// Names tried when recognizing a finite part of the given rank, in order of
/// preference.
fn candidates(rank: usize, cl: &FiniteRootSystem) -> Vec<CatalogName> {
    use CatalogName::*;
    let mut out = vec![A(rank), C(rank), B(rank), D(rank), E(rank), BC(rank)];
    if rank == 4 {
        out.extend([F4, SuperF4]);
    }
    if rank == 2 {
        out.push(G2);
    }
    for m in 0..rank {
        let n = rank - 1 - m;
        if m > n {
            out.push(SuperA(m, n));
        }
    }
    for m in 1..rank {
        out.push(SuperB(m, rank - m));
    }
    out.push(SuperC(rank));
    for m in 2..rank {
        out.push(SuperD(m, rank - m));
    }
    if rank == 3 {
        out.push(SuperG3);
        out.extend(d21_parameters(cl).into_iter().map(D21));
    }
    for m in 1..rank {
        let n = rank - m;
        if m >= n {
            out.push(Cmn(m, n));
            out.push(BCmn(m, n));
        }
    }
    if rank.is_multiple_of(2) && rank >= 4 {
        out.push(AnnF(rank / 2));
    }
    out.retain(|c| c.validate().is_ok() && !matches!(c, D(3) | B(2)));
    out
}

/// Representative of the orbit of `a` under `a ↦ 1/a` and `a ↦ −1−a`, all
/// of which give isomorphic `D(2,1;a)`.
pub fn d21_representative(a: Rational) -> Rational {
    let mut orbit = vec![a];
    while let Some(x) = orbit.iter().flat_map(|&x| [x.recip(), -Rational::ONE - x]).find(|y| !orbit.contains(y)) {
        orbit.push(x);
    }
    orbit.into_iter().min().expect("nonempty")
}

/// The value of `a` for which `cl` could be `D(2,1;a)`, read off the norms
/// of the three pairs of non-isotropic roots.
fn d21_parameters(cl: &FiniteRootSystem) -> Vec<Rational> {
    let norms: Vec<Rational> = cl
        .roots()
        .iter()
        .filter(|r| !r.is_isotropic() && r.vector > -&r.vector)
        .map(|r| r.norm)
        .collect();
    if norms.len() != 3 || norms.iter().any(|n| n.is_zero()) {
        return vec![];
    }
    let a = norms[1] / norms[0];
    if a.is_zero() || a == -Rational::ONE {
        return vec![];
    }
    vec![d21_representative(a)]
}

/// The catalog type of `cl` with a homothety onto the catalog coordinates.
/// Scalars preserving the sign of the form are preferred.
pub fn recognize(cl: &FiniteRootSystem) -> Result<(CatalogName, Homothety)> {
    let iso_count = cl.isotropic_roots().len();
    for name in candidates(cl.dim(), cl) {
        let target = catalog::build(&name)?;
        if target.len() != cl.len() || target.isotropic_roots().len() != iso_count || target.dim() != cl.dim() {
            continue;
        }
        let h = homothety_where(cl, &target, |x| x > Rational::ZERO)
            .or_else(|| homothety_where(cl, &target, |x| x < Rational::ZERO));
        if let Some(h) = h {
            return Ok((name, h));
        }
    }
    Err(Error::UnrecognizedCl(format!("{} roots in dimension {}", cl.len(), cl.dim())))
}

struct Ctx<'a> {
    sys: &'a SymbolicRootSystem,
    images: HashMap<RationalVector, RationalVector>,
}

impl Ctx<'_> {
    /// `F` of the root whose image in catalog coordinates is `beta`.
    fn f(&self, beta: &[i64]) -> Result<&CosetSet> {
        let b = RationalVector::from_ints(beta);
        let a = self.images.get(&b).ok_or_else(|| not_classified(format!("no preimage of {b}")))?;
        self.sys.f_of(a)
    }

    fn f_vec(&self, beta: &RationalVector) -> Result<&CosetSet> {
        let a = self.images.get(beta).ok_or_else(|| not_classified(format!("no preimage of {beta}")))?;
        self.sys.f_of(a)
    }
}

fn unit(dim: usize, entries: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; dim];
    for &(i, c) in entries {
        v[i] = c;
    }
    v
}

/// Residues of `set − base` in `m/2m ≅ F₂ᵏ`.
fn residues(set: &CosetSet, base: &RationalVector, m: &Lattice) -> Result<F2Subset> {
    let k = m.dim();
    if m.rank() != k {
        return Err(not_classified("reference lattice is not of full rank"));
    }
    let x = set.shift(&-base)?;
    let two_m = m.scale(Rational::int(2));
    if !m.contains_lattice(x.modulus()) || !x.modulus().contains_lattice(&two_m) {
        return Err(not_classified("offsets are not unions of 2L-cosets inside L"));
    }
    let pts = x.refine(&two_m).ok_or_else(|| not_classified("offsets are not 2L-periodic"))?;
    let mut idx = Vec::new();
    for p in pts {
        let c = m.coordinates(&p).ok_or_else(|| not_classified("offset outside the reference lattice"))?;
        idx.push(c.iter().enumerate().fold(0u32, |acc, (i, &x)| acc | ((x.rem_euclid(2) as u32) << i)));
    }
    F2Subset::from_points(k, &idx)
}

fn first_point(set: &CosetSet) -> Result<RationalVector> {
    set.points().into_iter().next().ok_or_else(|| not_classified("empty offset set"))
}

fn single_coset<'a>(set: &'a CosetSet, what: &str) -> Result<&'a CosetSet> {
    if set.is_coset() {
        Ok(set)
    } else {
        Err(not_classified(format!("offsets of {what} are not a single coset")))
    }
}

/// `c ∈ F(ε₁+δ₁) + F(ε₁−δ₁)` together with the modulus `L'` of `F(ε₁−δ₁)`.
fn isotropic_base(cx: &Ctx, a: &[i64], b: &[i64]) -> Result<(RationalVector, Lattice)> {
    let plus = cx.f(a)?;
    let minus = single_coset(cx.f(b)?, "the isotropic roots")?;
    let m = minus.modulus().clone();
    Ok((first_point(&plus.add(minus)?)?, m))
}

/// Canonical form of one subset; with `complement` also identified with its
/// complement.
fn canonical_single(s: &F2Subset, complement: bool) -> Result<F2Subset> {
    let a = f2::affine_canonical(s)?;
    if complement {
        Ok(a.min(f2::affine_canonical(&s.complement())?))
    } else {
        Ok(a)
    }
}

/// Index of `sub` in `l` when the quotient is cyclic.
fn cyclic_index(l: &Lattice, sub: &Lattice) -> Result<Option<u128>> {
    let Some(q) = l.index_of(sub) else { return Ok(None) };
    let exponent = (1..=q).find(|&e| q % e == 0 && sub.contains_lattice(&l.scale(Rational::int(e as i128))));
    Ok((exponent == Some(q)).then_some(q))
}

/// True when `l/sub` is torsion-free of rank one.
fn infinite_cyclic(l: &Lattice, sub: &Lattice) -> bool {
    let k = l.rank();
    if sub.rank() + 1 != k || !l.contains_lattice(sub) {
        return false;
    }
    let rows: Vec<Vec<i128>> = sub.basis().iter().map(|v| l.coordinates(v).expect("sub ⊆ L")).collect();
    let mut g: i128 = 0;
    for skip in 0..k {
        let m: Vec<RationalVector> = rows
            .iter()
            .map(|r| {
                RationalVector(
                    (0..k).filter(|&c| c != skip).map(|c| Rational::int(r[c])).collect(),
                )
            })
            .collect();
        let d = if m.is_empty() { Rational::ONE } else { determinant(&m) };
        g = num_integer::Integer::gcd(&g, &d.numer());
    }
    g == 1
}

/// `min(r, q − r)` for the nonzero residues `r` of `Σ_{α∈J} F(α)` modulo
/// `L'`, over sets `J` of distinct `cl`-roots summing to zero.
fn p_class(sys: &SymbolicRootSystem, lp: &Lattice, q: u128, max_size: usize) -> Result<i64> {
    let g = sys.lattice().basis()[0][0];
    let roots = sys.cl().vectors();
    let index: HashMap<RationalVector, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let q = q as i128;
    let mut found: Option<i64> = None;
    let mut stack: Vec<usize> = Vec::new();
    fn dfs(
        sys: &SymbolicRootSystem,
        roots: &[RationalVector],
        index: &HashMap<RationalVector, usize>,
        stack: &mut Vec<usize>,
        sum: RationalVector,
        lp: &Lattice,
        max_size: usize,
        g: Rational,
        q: i128,
        found: &mut Option<i64>,
    ) -> Result<()> {
        if found.is_some() {
            return Ok(());
        }
        let start = stack.last().map_or(0, |&i| i + 1);
        if stack.len() + 1 >= 2 {
            if let Some(&last) = index.get(&-&sum) {
                if last >= start {
                    let mut set = sys.f_of(&roots[stack[0]])?.clone();
                    for &i in stack[1..].iter().chain(std::iter::once(&last)) {
                        set = set.add(sys.f_of(&roots[i])?)?;
                    }
                    let pts = set.refine(lp).ok_or_else(|| not_classified("sum is not L'-periodic"))?;
                    for p in pts {
                        let r = (p[0] / g).floor().rem_euclid(q);
                        if r != 0 {
                            *found = Some(r.min(q - r) as i64);
                            return Ok(());
                        }
                    }
                }
            }
        }
        if stack.len() + 2 > max_size {
            return Ok(());
        }
        for i in start..roots.len() {
            stack.push(i);
            dfs(sys, roots, index, stack, &sum + &roots[i], lp, max_size, g, q, found)?;
            stack.pop();
            if found.is_some() {
                break;
            }
        }
        Ok(())
    }
    let zero = RationalVector::zeros(sys.cl_dim());
    dfs(sys, &roots, &index, &mut stack, zero, lp, max_size, g, q, &mut found)?;
    found.ok_or_else(|| not_classified("no zero-sum set of roots separates the residues"))
}

/// Descriptor of an `A(n,n)`-like system whose offsets have modulus `lp`.
fn ann_descriptor(cl: &CatalogName, sys: &SymbolicRootSystem, lp: &Lattice, n: usize) -> Result<ClassDescriptor> {
    let k = sys.kernel_dim();
    let l = sys.lattice();
    if infinite_cyclic(l, lp) {
        return Ok(ClassDescriptor::form(cl, k, "A(n,n)"));
    }
    if lp.rank() != k {
        return Err(not_classified("offset modulus has the wrong rank"));
    }
    let q = cyclic_index(l, lp)?.ok_or_else(|| not_classified("L/L' is not cyclic"))?;
    if q == 1 {
        if matches!(cl, CatalogName::Cmn(..)) {
            return Err(not_classified("integral x"));
        }
        return Ok(ClassDescriptor::form(cl, k, "affinization"));
    }
    if k > 1 {
        return Ok(ClassDescriptor::new(cl, k, vec![("q", Value::from(q as i64))]));
    }
    let p = p_class(sys, lp, q, (n + 1).max(3))?;
    Ok(ClassDescriptor::new(cl, k, vec![("p", Value::from(p)), ("q", Value::from(q as i64))]))
}

/// The isomorphism class of `sys`.
pub fn identify(sys: &SymbolicRootSystem) -> Result<ClassDescriptor> {
    let k = sys.kernel_dim();
    let (name, h) = recognize(sys.cl())?;
    if k == 0 {
        return Ok(ClassDescriptor::form(&name, 0, "finite"));
    }
    f2::check_k(k)?;
    let images = sys.cl().vectors().into_iter().map(|a| (h.apply(&a), a)).collect();
    let cx = Ctx { sys, images };
    let dim = name.rank();
    let e = |entries: &[(usize, i64)]| unit(dim, entries);
    let lat = sys.lattice();
    let d = match kind(&name) {
        Kind::Affinization => {
            for f in sys.families() {
                if !f.offsets.is_coset() || f.offsets.modulus() != lat {
                    return Err(not_classified("offsets are not cosets of ZR ∩ Ker"));
                }
            }
            ClassDescriptor::form(&name, k, "affinization")
        }
        Kind::A1 => {
            let f = cx.f(&[1])?;
            let t = residues(f, &first_point(f)?, lat)?;
            if !f2::contains_affine_basis(&t) {
                return Err(not_classified("S lacks an affine basis"));
            }
            ClassDescriptor::new(&name, k, vec![("S", subset_value(&f2::affine_canonical(&t)?))])
        }
        Kind::BType | Kind::SuperB => {
            let long = if matches!(name, CatalogName::B(_)) { e(&[(0, 1), (1, 1)]) } else {
                let CatalogName::SuperB(m, _) = name else { unreachable!() };
                e(&[(0, 1), (m, 1)])
            };
            let fl = single_coset(cx.f(&long)?, "the long roots")?;
            let m = fl.modulus().scale(Rational::new(1, 2));
            let fs = cx.f(&e(&[(0, 1)]))?;
            let t = residues(fs, &first_point(fs)?, &m)?;
            ClassDescriptor::new(&name, k, vec![("S", subset_value(&f2::affine_canonical(&t)?))])
        }
        Kind::CType => {
            let fs = single_coset(cx.f(&e(&[(0, 1), (1, 1)]))?, "the short roots")?;
            let fl = cx.f(&e(&[(0, 2)]))?;
            let t = residues(fl, &first_point(fl)?, fs.modulus())?;
            ClassDescriptor::new(&name, k, vec![("S", subset_value(&f2::affine_canonical(&t)?))])
        }
        Kind::C2 => {
            let fs = cx.f(&[1, 1])?;
            let fl = cx.f(&[2, 0])?;
            let t1 = residues(fs, &first_point(fs)?, lat)?;
            let t2 = residues(fl, &first_point(fl)?, lat)?;
            let c = f2::canonical_tuple(&[t1, t2], false)?;
            ClassDescriptor::new(&name, k, vec![("S1", subset_value(&c[0])), ("S2", subset_value(&c[1]))])
        }
        Kind::Exceptional(r) => {
            let (short, long) = if name == CatalogName::G2 {
                (vec![1, -1], vec![2, -1])
            } else {
                (vec![1, 0, 0, 0], vec![1, 1, 0, 0])
            };
            let fs = single_coset(cx.f(&short)?, "the short roots")?;
            let fl = single_coset(cx.f(&long)?, "the long roots")?;
            let m = fs.modulus();
            let m2 = fl.modulus();
            let rm = m.scale(Rational::int(r));
            if !m.contains_lattice(m2) || !m2.contains_lattice(&rm) {
                return Err(not_classified("long offsets are not between rL and L"));
            }
            let mut idx = m.index_of(m2).expect("finite index");
            let mut t = 0usize;
            while idx > 1 {
                idx /= r as u128;
                t += 1;
            }
            ClassDescriptor::new(&name, k, vec![("s", Value::from((k - t) as u64))])
        }
        Kind::Cmn(m, n) => {
            let iso = cx.f(&e(&[(0, 1), (m, -1)]))?;
            if !iso.is_coset() && (m, n) == (1, 1) {
                let lp = single_coset(cx.f(&e(&[(0, 2)]))?, "the roots ±2ε")?.modulus().clone();
                return ann_descriptor(&name, sys, &lp, 1);
            }
            let plus = first_point(cx.f(&e(&[(0, 1), (m, 1)]))?)?;
            let minus = single_coset(cx.f(&e(&[(0, 1), (m, -1)]))?, "the isotropic roots")?;
            let lp = minus.modulus().clone();
            let p = first_point(minus)?;
            let t = residues(cx.f(&e(&[(0, 2)]))?, &(&plus + &p), &lp)?;
            let t2 = residues(cx.f(&e(&[(m, 2)]))?, &(&plus - &p), &lp)?;
            if t2 != t.complement() || t.is_empty() || t2.is_empty() {
                return Err(not_classified("offsets of ±2ε and ±2δ are not complementary"));
            }
            ClassDescriptor::new(&name, k, vec![("S", subset_value(&canonical_single(&t, m == n)?))])
        }
        Kind::BCmn(m) => {
            let (c, lp) = isotropic_base(&cx, &e(&[(0, 1), (m, 1)]), &e(&[(0, 1), (m, -1)]))?;
            let t = residues(cx.f(&e(&[(0, 2)]))?, &c, &lp)?;
            let tp = residues(&cx.f(&e(&[(0, 1)]))?.scale(2)?, &c, &lp)?;
            if t.is_empty() || t.len() == 1 << k || tp.is_empty() {
                return Err(not_classified("degenerate subset data"));
            }
            let cs = f2::canonical_tuple(&[t, tp], true)?;
            ClassDescriptor::new(&name, k, vec![("S", subset_value(&cs[0])), ("S'", subset_value(&cs[1]))])
        }
        Kind::BCn(n) => {
            if n < 3 {
                return Err(not_classified(format!("{name} data beyond (S1, S2)")));
            }
            let (c, lp) = isotropic_base(&cx, &e(&[(0, 1), (1, 1)]), &e(&[(0, 1), (1, -1)]))?;
            let t1 = residues(&cx.f(&e(&[(0, 1)]))?.scale(2)?, &c, &lp)?;
            let t2 = residues(cx.f(&e(&[(0, 2)]))?, &c, &lp)?;
            let cs = f2::canonical_tuple(&[t1, t2], true)?;
            ClassDescriptor::new(&name, k, vec![("S1", subset_value(&cs[0])), ("S2", subset_value(&cs[1]))])
        }
        Kind::Ann(n) => {
            let any = cx.images.keys().next().cloned().expect("nonempty");
            let lp = cx.f_vec(&any)?.modulus().clone();
            ann_descriptor(&name, sys, &lp, n)?
        }
    };
    Ok(d)
}

fn cap(k: usize, limit: usize) -> Result<()> {
    if k > limit {
        return Err(Error::KTooLarge { k, cap: limit });
    }
    Ok(())
}

fn all_subsets(k: usize) -> impl Iterator<Item = F2Subset> {
    (0u128..1 << (1u32 << k)).map(move |m| F2Subset::new(k, m).expect("mask fits"))
}

fn ann_series(cl: &CatalogName, k: usize, q_min: i64) -> Vec<ClassDescriptor> {
    let mut out = vec![ClassDescriptor::form(cl, k, "A(n,n)")];
    for q in q_min..=MAX_LISTED_Q {
        if k > 1 {
            out.push(ClassDescriptor::new(cl, k, vec![("q", Value::from(q))]));
            continue;
        }
        for p in 1..=q / 2 {
            if num_integer::Integer::gcd(&p, &q) == 1 {
                out.push(ClassDescriptor::new(cl, k, vec![("p", Value::from(p)), ("q", Value::from(q))]));
            }
        }
    }
    out
}

/// The name [`identify`] reports for systems whose finite part is
/// isomorphic to the minimal quotient of `name`.
pub fn canonical_cl(name: &CatalogName) -> Result<CatalogName> {
    name.validate().map_err(Error::BadParameters)?;
    Ok(recognize(&catalog::build(name)?.minimal_quotient())?.0)
}

/// All isomorphism classes with finite part `cl` and kernel rank `k`.
pub fn enumerate_classes(cl: &CatalogName, k: usize) -> Result<Enumeration> {
    let cl = &canonical_cl(cl)?;
    if k == 0 {
        return Ok(Enumeration { classes: vec![ClassDescriptor::form(cl, 0, "finite")], partial: false });
    }
    f2::check_k(k)?;
    let one = |s: F2Subset| ClassDescriptor::new(cl, k, vec![("S", subset_value(&s))]);
    let mut partial = false;
    let classes = match kind(cl) {
        Kind::Affinization => vec![ClassDescriptor::form(cl, k, "affinization")],
        Kind::A1 => f2::canonical_subsets(k, f2::contains_affine_basis)?.into_iter().map(one).collect(),
        Kind::BType | Kind::CType | Kind::SuperB => {
            f2::canonical_subsets(k, |s| !s.is_empty())?.into_iter().map(one).collect()
        }
        Kind::C2 => {
            cap(k, PAIR_MAX_K)?;
            let mut seen = BTreeSet::new();
            for s1 in all_subsets(k).filter(|s| s.contains(0) && f2::contains_affine_basis(s)) {
                for s2 in all_subsets(k).filter(|s| s.contains(0)) {
                    if s1.sum(&s2).is_subset(&s1) {
                        seen.insert(f2::canonical_tuple(&[s1, s2], false)?);
                    }
                }
            }
            seen.into_iter()
                .map(|c| ClassDescriptor::new(cl, k, vec![("S1", subset_value(&c[0])), ("S2", subset_value(&c[1]))]))
                .collect()
        }
        Kind::Exceptional(_) => {
            (0..=k).map(|s| ClassDescriptor::new(cl, k, vec![("s", Value::from(s as u64))])).collect()
        }
        Kind::Cmn(m, n) => {
            let full = F2Subset::full(k);
            let mut seen = BTreeSet::new();
            for s in f2::canonical_subsets(k, |s| !s.is_empty() && *s != full)? {
                seen.insert(canonical_single(&s, m == n)?);
            }
            let mut out: Vec<ClassDescriptor> = seen.into_iter().map(one).collect();
            if (m, n) == (1, 1) {
                partial = true;
                out.extend(ann_series(cl, k, 3));
            }
            out
        }
        Kind::BCmn(_) => {
            cap(k, PAIR_MAX_K)?;
            let full = F2Subset::full(k);
            let mut seen = BTreeSet::new();
            for t in all_subsets(k).filter(|s| !s.is_empty() && *s != full) {
                for tp in all_subsets(k).filter(|s| !s.is_empty()) {
                    seen.insert(f2::canonical_tuple(&[t, tp], true)?);
                }
            }
            seen.into_iter()
                .map(|c| ClassDescriptor::new(cl, k, vec![("S", subset_value(&c[0])), ("S'", subset_value(&c[1]))]))
                .collect()
        }
        Kind::BCn(n) => {
            if n < 3 {
                return Err(not_classified(format!("{cl}: the classification is only partial")));
            }
            cap(k, PAIR_MAX_K)?;
            partial = true;
            let mut seen = BTreeSet::new();
            for s1 in all_subsets(k).filter(|s| !s.is_empty()) {
                for s2 in all_subsets(k).filter(|s| !s.is_empty()) {
                    seen.insert(f2::canonical_tuple(&[s1, s2], true)?);
                }
            }
            let mut out = Vec::new();
            for c in seen {
                let d = ClassDescriptor::new(cl, k, vec![("S1", subset_value(&c[0])), ("S2", subset_value(&c[1]))]);
                if materialize(&d).is_ok() {
                    out.push(d);
                }
            }
            out
        }
        Kind::Ann(_) => {
            partial = true;
            let mut out = vec![ClassDescriptor::form(cl, k, "affinization")];
            out.extend(ann_series(cl, k, 2));
            out
        }
    };
    Ok(Enumeration { classes, partial })
}

/// Translates a tuple so that its first subset contains `0`.
fn shared_to_origin(a: &F2Subset, b: &F2Subset) -> Result<(F2Subset, F2Subset)> {
    let p = *a.points().first().ok_or_else(|| Error::Invalid("empty subset".into()))?;
    Ok((a.translate(p), b.translate(p)))
}

fn ann_n(cl: &CatalogName) -> usize {
    match *cl {
        CatalogName::AnnF(n) | CatalogName::SuperA(n, _) => n,
        _ => 1,
    }
}

/// A system in the class `d`.
pub fn materialize(d: &ClassDescriptor) -> Result<SymbolicRootSystem> {
    let cl = d.cl_name()?;
    let k = d.k;
    let get = |key: &str| d.subset(key)?.ok_or_else(|| Error::Invalid(format!("descriptor lacks {key}")));
    match d.form_str() {
        Some("finite") => return SymbolicRootSystem::from_finite(&catalog::build(&cl)?),
        Some("affinization") => return affinize_finite(&catalog::build(&cl)?, k),
        Some("A(n,n)") => {
            let n = ann_n(&cl);
            let base = SymbolicRootSystem::from_finite(&catalog::build(&CatalogName::SuperA(n, n))?)?;
            return Ok(base.affinize(k - 1));
        }
        Some(f) => return Err(Error::Invalid(format!("unknown form {f}"))),
        None => {}
    }
    if let Some(q) = d.int("q") {
        let p = d.int("p").unwrap_or(1);
        return catalog::a_nn_x(ann_n(&cl), p, q, k - 1);
    }
    if let Some(s) = d.int("s") {
        return catalog::family(&cl, k, &FamilyParams::Rank(s as usize));
    }
    let params = match kind(&cl) {
        Kind::C2 => FamilyParams::Pair(get("S1")?, get("S2")?),
        Kind::BCmn(_) => {
            let (a, b) = shared_to_origin(&get("S")?, &get("S'")?)?;
            FamilyParams::Pair(a, b)
        }
        Kind::BCn(_) => FamilyParams::Pair(get("S1")?, get("S2")?),
        _ => FamilyParams::Subset(get("S")?),
    };
    catalog::family(&cl, k, &params)
}

/// The affine Kac-Moody superalgebra whose real roots form the class `d`
/// (`k = 1`). For `C(m,n)` the name follows the summary list of twisted
/// algebras, `A(2m−1,2n−1)^(2)`.
pub fn kac_moody_name(d: &ClassDescriptor) -> Result<String> {
    let no = || Error::NoName(format!("{} with k = {} and data {}", d.cl, d.k, Value::Object(d.data.clone())));
    if d.k != 1 {
        return Err(no());
    }
    let cl = d.cl_name()?;
    let full = |key: &str| -> Result<bool> { Ok(d.subset(key)?.is_some_and(|s| s.len() == 2)) };
    let classical = |letter: &str, n: usize| format!("{letter}_{n}^(1)");
    use CatalogName::*;
    let name = match (cl, kind(&cl)) {
        (_, Kind::Affinization) => match cl {
            A(n) => classical("A", n),
            D(n) => classical("D", n),
            E(n) => classical("E", n),
            _ => format!("{cl}^(1)"),
        },
        (A(1), _) => classical("A", 1),
        (B(n), _) => if full("S")? { format!("D_{}^(2)", n + 1) } else { classical("B", n) },
        (C(2), _) => if full("S2")? { classical("C", 2) } else { "A_3^(2)".into() },
        (C(n), _) => if full("S")? { classical("C", n) } else { format!("A_{}^(2)", 2 * n - 1) },
        (G2, _) => if d.int("s") == Some(1) { classical("G", 2) } else { "D_4^(3)".into() },
        (F4, _) => if d.int("s") == Some(1) { classical("F", 4) } else { "E_6^(2)".into() },
        (SuperB(m, n), Kind::SuperB) => {
            if full("S")? { format!("D({},{n})^(2)", m + 1) } else { format!("B({m},{n})^(1)") }
        }
        (Cmn(m, n), _) if m * n > 1 => format!("A({},{})^(2)", 2 * m - 1, 2 * n - 1),
        (BCmn(m, n), _) => {
            let s = d.subset("S")?.ok_or_else(no)?;
            let sp = d.subset("S'")?.ok_or_else(no)?;
            if sp.len() == 2 {
                format!("A({},{})^(4)", 2 * m, 2 * n)
            } else if sp == s {
                format!("A({},{})^(2)", 2 * n, 2 * m - 1)
            } else {
                format!("A({},{})^(2)", 2 * m, 2 * n - 1)
            }
        }
        _ => return Err(no()),
    };
    Ok(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(k: usize, pts: &[u32]) -> F2Subset {
        F2Subset::from_points(k, pts).unwrap()
    }

    #[test]
    fn recognizes_isomorphic_copies() {
        let b2 = catalog::build(&CatalogName::B(2)).unwrap();
        assert_eq!(recognize(&b2).unwrap().0, CatalogName::C(2));
        let c12 = catalog::build(&CatalogName::Cmn(1, 2)).unwrap();
        assert_eq!(recognize(&c12).unwrap().0, CatalogName::Cmn(2, 1));
        let d = catalog::build(&CatalogName::D21(Rational::new(1, 2))).unwrap();
        assert!(matches!(recognize(&d).unwrap().0, CatalogName::D21(_)));
    }

    #[test]
    fn b3_classes_and_names() {
        let e = enumerate_classes(&CatalogName::B(3), 1).unwrap();
        assert_eq!(e.classes.len(), 2);
        let names: Vec<String> = e.classes.iter().map(|d| kac_moody_name(d).unwrap()).collect();
        assert_eq!(names, vec!["B_3^(1)", "D_4^(2)"]);
        for d in &e.classes {
            assert_eq!(&identify(&materialize(d).unwrap()).unwrap(), d);
        }
    }

    #[test]
    fn affinization_of_b2() {
        let r = affinize_finite(&catalog::build(&CatalogName::B(2)).unwrap(), 1).unwrap();
        let d = identify(&r).unwrap();
        assert_eq!(d.cl, "C2");
        assert_eq!(kac_moody_name(&d).unwrap(), "C_2^(1)");
    }

    #[test]
    fn ann_x_identification() {
        let a = identify(&catalog::a_nn_x(2, 1, 3, 0).unwrap()).unwrap();
        let b = identify(&catalog::a_nn_x(2, 2, 3, 0).unwrap()).unwrap();
        let c = identify(&catalog::a_nn_x(2, 1, 2, 0).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let f = identify(&catalog::a_nn_x(2, 1, 5, 0).unwrap()).unwrap();
        let g = identify(&catalog::a_nn_x(2, 2, 5, 0).unwrap()).unwrap();
        assert_ne!(f, g);
    }

    #[test]
    fn c11_half_is_r0() {
        let a = identify(&catalog::a_nn_x(1, 1, 2, 0).unwrap()).unwrap();
        let r0 = catalog::family(&CatalogName::Cmn(1, 1), 1, &FamilyParams::Subset(sub(1, &[0]))).unwrap();
        assert_eq!(a, identify(&r0).unwrap());
        let t = identify(&catalog::a_nn_x(1, 1, 3, 0).unwrap()).unwrap();
        assert_eq!(t.int("q"), Some(3));
    }

    #[test]
    fn bc11_three_classes() {
        let e = enumerate_classes(&CatalogName::BCmn(1, 1), 1).unwrap();
        assert_eq!(e.classes.len(), 3);
        for d in &e.classes {
            let r = materialize(d).unwrap();
            assert_eq!(&identify(&r).unwrap(), d);
        }
    }
}
