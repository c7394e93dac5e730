use num_integer::Integer;

use crate::error::{Error, Result};
use crate::f2::{contains_affine_basis, F2Subset};
use crate::lattice::Lattice;
use crate::rational::{Rational, RationalVector};
use crate::symbolic::{FamilySpec, SymbolicRootSystem};

use super::build::{ann_kernel_vector, build};
use super::names::{CatalogName, FamilyParams};

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParameters(msg.into())
}

/// `A(n,n)_x` with `x = p/q`, affinized `k` more times: the image of
/// `A(n,n)^(1+k)` modulo `I + xδ`.
pub fn a_nn_x(n: usize, p: i64, q: i64, k: usize) -> Result<SymbolicRootSystem> {
    if q <= 0 {
        return Err(bad("q must be positive"));
    }
    if p.gcd(&q) != 1 {
        return Err(bad(format!("gcd({p},{q}) must be 1")));
    }
    if n == 1 && q == 1 {
        return Err(bad("x must not be an integer for n = 1"));
    }
    a_nn_quotient(n, Rational::new(p as i128, q as i128), k)
}

/// The same quotient for any rational `x`, without the integrality check.
/// For `n = 1` and integral `x` the result is only a WGRS.
pub fn a_nn_quotient(n: usize, x: Rational, k: usize) -> Result<SymbolicRootSystem> {
    if n == 0 {
        return Err(bad("n must be at least 1"));
    }
    let a = build(&CatalogName::SuperA(n, n))?;
    let i_vec = ann_kernel_vector(n);
    let l = 2 * n;
    let basis: Vec<RationalVector> = (0..l).map(|i| RationalVector::unit(l + 1, i)).collect();
    let cl_space = a.space().restrict(&basis);
    let specs = a
        .vectors()
        .iter()
        .map(|v| {
            let t = v[l] / i_vec[l];
            let cl = &v.slice(0..l) - &i_vec.slice(0..l).scale(t);
            let mut off = RationalVector::zeros(1 + k);
            off[0] = -(x * t);
            FamilySpec::new(cl, vec![off], Lattice::standard(1 + k))
        })
        .collect();
    Ok(SymbolicRootSystem::from_families(cl_space, 1 + k, specs)?.normalized())
}

fn bits(k: usize, p: u32) -> RationalVector {
    RationalVector((0..k).map(|i| Rational::int(((p >> i) & 1) as i128)).collect())
}

/// Offsets `scale·ι₂⁻¹(S)`.
fn preimage(s: &F2Subset, scale: Rational) -> (Vec<RationalVector>, Lattice) {
    let k = s.k();
    let points = s.points().into_iter().map(|p| bits(k, p).scale(scale)).collect();
    (points, Lattice::standard(k).scale(scale * Rational::int(2)))
}

/// Offsets `scale·L`.
fn whole(k: usize, scale: Rational) -> (Vec<RationalVector>, Lattice) {
    (vec![RationalVector::zeros(k)], Lattice::standard(k).scale(scale))
}

fn translated_to_origin(s: &F2Subset) -> Result<(F2Subset, u32)> {
    let first = *s.points().first().ok_or_else(|| bad("subset must be nonempty"))?;
    Ok((s.translate(first), first))
}

/// Single nonzero coordinate `(index, value)`.
fn single(v: &RationalVector) -> Option<(usize, Rational)> {
    let nz: Vec<usize> = (0..v.dim()).filter(|&i| !v[i].is_zero()).collect();
    (nz.len() == 1).then(|| (nz[0], v[nz[0]]))
}

fn assemble<F>(cl: &CatalogName, k: usize, offsets: F) -> Result<SymbolicRootSystem>
where
    F: Fn(&RationalVector, Rational) -> (Vec<RationalVector>, Lattice),
{
    let base = build(cl)?;
    let specs = base
        .roots()
        .iter()
        .map(|r| {
            let (points, modulus) = offsets(&r.vector, r.norm);
            FamilySpec::new(r.vector.clone(), points, modulus)
        })
        .collect();
    SymbolicRootSystem::from_families(base.space().clone(), k, specs)
}

fn expect_k(s: &F2Subset, k: usize) -> Result<()> {
    if s.k() != k {
        return Err(bad(format!("subset lives in F_2^{} but k = {k}", s.k())));
    }
    Ok(())
}

fn validated(r: SymbolicRootSystem) -> Result<SymbolicRootSystem> {
    let rep = r.check_axioms();
    if rep.is_grrs() {
        return Ok(r);
    }
    let (name, c) = [("GR0", &rep.gr0), ("GR1", &rep.gr1), ("GR2", &rep.gr2), ("GR3", &rep.gr3)]
        .into_iter()
        .find(|(_, c)| !c.pass)
        .expect("some axiom fails");
    Err(bad(format!("data violates {name}: {}", c.detail.clone().unwrap_or_default())))
}

/// The classified affine system with finite part `cl`, kernel rank `k` and
/// the given discriminating data. Subsets not containing `0` are translated
/// first.
pub fn family(cl: &CatalogName, k: usize, params: &FamilyParams) -> Result<SymbolicRootSystem> {
    use CatalogName::*;
    use FamilyParams::*;
    if k == 0 {
        return Err(bad("k must be at least 1"));
    }
    cl.validate().map_err(Error::BadParameters)?;
    let one = Rational::ONE;
    let half = Rational::new(1, 2);
    match (*cl, params) {
        (A(1), Subset(s)) => {
            expect_k(s, k)?;
            let (s, _) = translated_to_origin(s)?;
            if !contains_affine_basis(&s) {
                return Err(bad("S must contain an affine basis of F_2^k"));
            }
            assemble(cl, k, |_, _| preimage(&s, one))
        }
        (B(n), Subset(s)) if n >= 3 => {
            expect_k(s, k)?;
            let (s, _) = translated_to_origin(s)?;
            let two = Rational::int(2);
            assemble(cl, k, |_, norm| if norm == one { preimage(&s, one) } else { whole(k, two) })
        }
        (SuperB(m, _), Subset(s)) if m >= 1 => {
            expect_k(s, k)?;
            let (s, _) = translated_to_origin(s)?;
            let two = Rational::int(2);
            assemble(cl, k, |v, _| match single(v) {
                Some((_, c)) if c.abs() == one => preimage(&s, one),
                _ => whole(k, two),
            })
        }
        (C(n), Subset(s)) if n >= 3 => {
            expect_k(s, k)?;
            let (s, _) = translated_to_origin(s)?;
            assemble(cl, k, |_, norm| if norm == Rational::int(4) { preimage(&s, one) } else { whole(k, one) })
        }
        (C(2), Pair(s1, s2)) => {
            expect_k(s1, k)?;
            expect_k(s2, k)?;
            let (s1, _) = translated_to_origin(s1)?;
            let (s2, _) = translated_to_origin(s2)?;
            if !contains_affine_basis(&s1) {
                return Err(bad("S1 must contain an affine basis of F_2^k"));
            }
            if !s1.sum(&s2).is_subset(&s1) {
                return Err(bad("S1 + S2 must be contained in S1"));
            }
            assemble(cl, k, |_, norm| if norm == Rational::int(4) { preimage(&s2, one) } else { preimage(&s1, one) })
        }
        (G2, Rank(s)) | (F4, Rank(s)) => {
            if *s > k {
                return Err(bad(format!("s = {s} must satisfy s <= k = {k}")));
            }
            let (r, long) = if *cl == G2 { (3, Rational::int(6)) } else { (2, Rational::int(2)) };
            let gens: Vec<RationalVector> = (0..k)
                .map(|i| RationalVector::unit(k, i).scale(Rational::int(if i < *s { 1 } else { r })))
                .collect();
            let long_mod = Lattice::from_vectors(k, &gens);
            assemble(cl, k, |_, norm| {
                if norm == long {
                    (vec![RationalVector::zeros(k)], long_mod.clone())
                } else {
                    whole(k, one)
                }
            })
        }
        (Cmn(m, _), Subset(s)) => {
            expect_k(s, k)?;
            let (s, _) = translated_to_origin(s)?;
            if s.len() == 1 << k {
                return Err(bad("S must be a proper subset"));
            }
            let comp = s.complement();
            assemble(cl, k, |v, _| match single(v) {
                Some((i, _)) if i < m => preimage(&s, one),
                Some(_) => preimage(&comp, one),
                None => whole(k, one),
            })
        }
        (BCmn(m, _), Pair(s, sp)) => {
            expect_k(s, k)?;
            expect_k(sp, k)?;
            let (s, _) = translated_to_origin(s)?;
            if s.len() == 1 << k {
                return Err(bad("S must be a proper subset"));
            }
            if sp.is_empty() {
                return Err(bad("S' must be nonempty"));
            }
            let comp = s.complement();
            assemble(cl, k, |v, _| match single(v) {
                Some((_, c)) if c.abs() == one => preimage(sp, half),
                Some((i, _)) if i < m => preimage(&s, one),
                Some(_) => preimage(&comp, one),
                None => whole(k, one),
            })
        }
        (BC(n), Pair(s1, s2)) if n >= 3 => {
            expect_k(s1, k)?;
            expect_k(s2, k)?;
            if s2.is_empty() {
                return Err(bad("S2 must be nonempty"));
            }
            let (s1, a) = translated_to_origin(s1)?;
            let s2 = s2.translate(a);
            validated(assemble(cl, k, |_, norm| match norm {
                x if x == one => preimage(&s1, half),
                x if x == Rational::int(4) => preimage(&s2, one),
                _ => whole(k, one),
            })?)
        }
        (BC(2), Triple(s1, s2, s3)) => {
            for s in [s1, s2, s3] {
                expect_k(s, k)?;
            }
            if s2.is_empty() {
                return Err(bad("S2 must be nonempty"));
            }
            let (s1, a) = translated_to_origin(s1)?;
            let s2 = s2.translate(a);
            if !s3.contains(0) || !contains_affine_basis(s3) {
                return Err(bad("S3 must contain 0 and an affine basis of F_2^k"));
            }
            validated(assemble(cl, k, |_, norm| match norm {
                x if x == one => preimage(&s1, half),
                x if x == Rational::int(4) => preimage(&s2, one),
                _ => preimage(s3, one),
            })?)
        }
        (BC(1), BcOne(s, h2)) => {
            expect_k(s, k)?;
            let (s, a) = translated_to_origin(s)?;
            if h2.is_empty() {
                return Err(bad("H2 must be nonempty"));
            }
            let shift = bits(k, a).scale(Rational::int(2));
            let mut points = Vec::new();
            for h in h2 {
                if h.len() != k {
                    return Err(bad(format!("H2 residue {h:?} must have {k} entries")));
                }
                points.push(&RationalVector::from_ints(h) - &shift);
            }
            let four = Lattice::standard(k).scale(Rational::int(4));
            validated(assemble(cl, k, |_, norm| {
                if norm == one {
                    preimage(&s, one)
                } else {
                    (points.clone(), four.clone())
                }
            })?)
        }
        _ => Err(bad(format!("no family with these parameters for {cl}"))),
    }
}
