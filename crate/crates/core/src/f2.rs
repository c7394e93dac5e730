//! Subsets of F₂ᵏ and their canonical forms under the affine group.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseError, Result};

/// Largest `k` whose subsets fit the bitmask representation.
pub const HARD_MAX_K: usize = 7;

/// Cap on `k` for orbit enumeration; `GRRS_MAX_K` overrides it.
pub fn max_k() -> usize {
    std::env::var("GRRS_MAX_K")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(4)
        .min(HARD_MAX_K)
}

pub fn check_k(k: usize) -> Result<()> {
    let cap = max_k();
    if k > cap {
        return Err(Error::KTooLarge { k, cap });
    }
    Ok(())
}

/// A subset of F₂ᵏ. Bit `i` of the mask marks the point whose coordinates are
/// the binary digits of `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct F2Subset {
    k: usize,
    mask: u128,
}

fn full_mask(k: usize) -> u128 {
    let n = 1u32 << k;
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

impl F2Subset {
    pub fn new(k: usize, mask: u128) -> Result<Self> {
        if k > HARD_MAX_K {
            return Err(Error::KTooLarge { k, cap: HARD_MAX_K });
        }
        if mask & !full_mask(k) != 0 {
            return Err(Error::BadParameters(format!("mask {mask:#b} has points outside F2^{k}")));
        }
        Ok(F2Subset { k, mask })
    }

    pub fn from_points(k: usize, points: &[u32]) -> Result<Self> {
        let mut mask = 0u128;
        for &p in points {
            if p >= 1 << k {
                return Err(Error::BadParameters(format!("point {p} outside F2^{k}")));
            }
            mask |= 1 << p;
        }
        Self::new(k, mask)
    }

    pub fn full(k: usize) -> Self {
        F2Subset { k, mask: full_mask(k) }
    }

    pub fn origin(k: usize) -> Self {
        F2Subset { k, mask: 1 }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, p: u32) -> bool {
        p < 1 << self.k && self.mask >> p & 1 == 1
    }

    pub fn points(&self) -> Vec<u32> {
        (0..1u32 << self.k).filter(|&p| self.contains(p)).collect()
    }

    pub fn complement(&self) -> Self {
        F2Subset { k: self.k, mask: !self.mask & full_mask(self.k) }
    }

    pub fn translate(&self, a: u32) -> Self {
        self.permute(|p| p ^ a)
    }

    pub fn is_subset(&self, other: &F2Subset) -> bool {
        self.mask & !other.mask == 0
    }

    /// `{x + y : x ∈ self, y ∈ other}`.
    pub fn sum(&self, other: &F2Subset) -> Self {
        let mut mask = 0u128;
        for x in self.points() {
            for y in other.points() {
                mask |= 1 << (x ^ y);
            }
        }
        F2Subset { k: self.k, mask }
    }

    fn permute<F: Fn(u32) -> u32>(&self, f: F) -> Self {
        let mut mask = 0u128;
        for p in self.points() {
            mask |= 1 << f(p);
        }
        F2Subset { k: self.k, mask }
    }

    fn apply_table(&self, table: &[u8]) -> u128 {
        let mut mask = 0u128;
        let mut m = self.mask;
        while m != 0 {
            let p = m.trailing_zeros();
            mask |= 1 << table[p as usize];
            m &= m - 1;
        }
        mask
    }
}

impl fmt::Display for F2Subset {
    /// `0b` followed by all `2ᵏ` bits, most significant first.
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "0b{:0width$b}", self.mask, width = 1 << self.k)
    }
}

impl F2Subset {
    /// Parses `0b…` masks or `{p, q, …}` point lists. Points are decimal
    /// indices, or binary strings of length `k`.
    pub fn parse(k: usize, s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::Subset(s.to_string());
        let s = s.trim();
        if let Some(bits) = s.strip_prefix("0b") {
            let mask = u128::from_str_radix(bits, 2).map_err(|_| bad())?;
            return F2Subset::new(k, mask).map_err(|_| bad());
        }
        let inner = s.strip_prefix('{').and_then(|x| x.strip_suffix('}')).ok_or_else(bad)?;
        let mut points = Vec::new();
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let binary = k >= 2 && tok.len() == k && tok.chars().all(|c| c == '0' || c == '1');
            let p = if binary { u32::from_str_radix(tok, 2) } else { tok.parse() };
            points.push(p.map_err(|_| bad())?);
        }
        F2Subset::from_points(k, &points).map_err(|_| bad())
    }
}

impl Serialize for F2Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for F2Subset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for F2Subset {
    type Err = ParseError;

    /// The `0b` form, with `k` read off the number of digits.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bits = s.trim().strip_prefix("0b").ok_or_else(|| ParseError::Subset(s.to_string()))?;
        let n = bits.len();
        if !n.is_power_of_two() {
            return Err(ParseError::Subset(s.to_string()));
        }
        F2Subset::parse(n.trailing_zeros() as usize, s)
    }
}

/// Invertible k×k matrices over F₂, each given by its column images.
pub fn general_linear(k: usize) -> Vec<Vec<u32>> {
    fn rec(k: usize, cols: &mut Vec<u32>, span: &mut Vec<bool>, out: &mut Vec<Vec<u32>>) {
        if cols.len() == k {
            out.push(cols.clone());
            return;
        }
        for c in 1..1u32 << k {
            if span[c as usize] {
                continue;
            }
            let old: Vec<u32> = (0..1u32 << k).filter(|&x| span[x as usize]).collect();
            for &x in &old {
                span[(x ^ c) as usize] = true;
            }
            cols.push(c);
            rec(k, cols, span, out);
            cols.pop();
            for &x in &old {
                span[(x ^ c) as usize] = false;
            }
        }
    }
    let mut span = vec![false; 1 << k];
    span[0] = true;
    let mut out = Vec::new();
    rec(k, &mut Vec::new(), &mut span, &mut out);
    out
}

pub fn apply_linear(cols: &[u32], p: u32) -> u32 {
    cols.iter().enumerate().filter(|(i, _)| p >> i & 1 == 1).fold(0, |acc, (_, c)| acc ^ c)
}

/// Point tables of all linear automorphisms, cached per `k`.
fn linear_tables(k: usize) -> &'static [Vec<u8>] {
    static CACHE: [OnceLock<Vec<Vec<u8>>>; HARD_MAX_K + 1] = [const { OnceLock::new() }; HARD_MAX_K + 1];
    CACHE[k].get_or_init(|| {
        general_linear(k)
            .iter()
            .map(|cols| (0..1u32 << k).map(|p| apply_linear(cols, p) as u8).collect())
            .collect()
    })
}

fn min_translate(s: &F2Subset) -> u128 {
    (0..1u32 << s.k).map(|a| s.translate(a).mask).min().unwrap_or(0)
}

/// Lexicographically least `φ(S) + a` over the affine group.
pub fn affine_canonical(s: &F2Subset) -> Result<F2Subset> {
    check_k(s.k)?;
    let mut best = u128::MAX;
    for t in linear_tables(s.k) {
        let img = F2Subset { k: s.k, mask: s.apply_table(t) };
        best = best.min(min_translate(&img));
    }
    Ok(F2Subset { k: s.k, mask: if s.is_empty() { 0 } else { best } })
}

/// Canonical form of a tuple under a shared linear part, with independent or
/// shared translations, minimized in tuple order.
pub fn canonical_tuple(sets: &[F2Subset], shared_translation: bool) -> Result<Vec<F2Subset>> {
    let Some(first) = sets.first() else { return Ok(vec![]) };
    let k = first.k;
    if sets.iter().any(|s| s.k != k) {
        return Err(Error::BadParameters("subsets of different F2^k".into()));
    }
    check_k(k)?;
    let mut best: Option<Vec<u128>> = None;
    for t in linear_tables(k) {
        let imgs: Vec<F2Subset> = sets.iter().map(|s| F2Subset { k, mask: s.apply_table(t) }).collect();
        let cand: Vec<u128> = if shared_translation {
            (0..1u32 << k)
                .map(|a| imgs.iter().map(|s| s.translate(a).mask).collect::<Vec<_>>())
                .min()
                .unwrap()
        } else {
            imgs.iter().map(min_translate).collect()
        };
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    Ok(best.unwrap().into_iter().map(|mask| F2Subset { k, mask }).collect())
}

/// True when some `k+1` points of `S` affinely span F₂ᵏ.
pub fn contains_affine_basis(s: &F2Subset) -> bool {
    let pts = s.points();
    let Some(&p0) = pts.first() else { return false };
    let mut basis: Vec<u32> = Vec::new();
    for &p in &pts[1..] {
        let mut v = p ^ p0;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len() == s.k
}

/// Canonical representatives of all affine orbits of subsets accepted by
/// `keep`, in increasing order.
pub fn canonical_subsets<F: Fn(&F2Subset) -> bool>(k: usize, keep: F) -> Result<Vec<F2Subset>> {
    check_k(k)?;
    let total = full_mask(k);
    let mut seen: HashSet<u128> = HashSet::new();
    let mut out = Vec::new();
    let mut mask = 0u128;
    loop {
        if !seen.contains(&mask) {
            let s = F2Subset { k, mask };
            for t in linear_tables(k) {
                let img = F2Subset { k, mask: s.apply_table(t) };
                for a in 0..1u32 << k {
                    seen.insert(img.translate(a).mask);
                }
            }
            if keep(&s) {
                out.push(s);
            }
        }
        if mask == total {
            break;
        }
        mask += 1;
    }
    Ok(out)
}
