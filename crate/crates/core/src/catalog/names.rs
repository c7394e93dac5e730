use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;
use crate::f2::F2Subset;
use crate::rational::Rational;

/// A named finite root system.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CatalogName {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    BC(usize),
    /// `A(m,n)`; `m = n` gives the degenerate `A(n,n)`.
    SuperA(usize, usize),
    SuperB(usize, usize),
    SuperC(usize),
    SuperD(usize, usize),
    D21(Rational),
    SuperF4,
    SuperG3,
    Cmn(usize, usize),
    BCmn(usize, usize),
    /// `A(n,n)_f`, the minimal quotient of `A(n,n)`.
    AnnF(usize),
}

impl CatalogName {
    pub fn rank(&self) -> usize {
        use CatalogName::*;
        match *self {
            A(n) | B(n) | C(n) | D(n) | E(n) | BC(n) | SuperC(n) => n,
            F4 | SuperF4 => 4,
            G2 => 2,
            SuperA(m, n) if m == n => 2 * n + 1,
            SuperA(m, n) => m + n + 1,
            SuperB(m, n) | SuperD(m, n) | Cmn(m, n) | BCmn(m, n) => m + n,
            D21(_) | SuperG3 => 3,
            AnnF(n) => 2 * n,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        use CatalogName::*;
        let ok = match *self {
            A(n) => n >= 1,
            B(n) | C(n) => n >= 2,
            D(n) => n >= 3,
            E(n) => (6..=8).contains(&n),
            BC(n) => n >= 1,
            SuperA(m, n) => m + n >= 1,
            SuperB(_, n) => n >= 1,
            SuperC(n) => n >= 2,
            SuperD(m, n) => m >= 2 && n >= 1,
            D21(a) => !a.is_zero() && a != Rational::int(-1),
            Cmn(m, n) | BCmn(m, n) => m >= 1 && n >= 1,
            AnnF(n) => n >= 1,
            F4 | G2 | SuperF4 | SuperG3 => true,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("{self} is outside the parameter range"))
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CatalogName::*;
        match self {
            A(n) => write!(f, "A{n}"),
            B(n) => write!(f, "B{n}"),
            C(n) => write!(f, "C{n}"),
            D(n) => write!(f, "D{n}"),
            E(n) => write!(f, "E{n}"),
            F4 => write!(f, "F4"),
            G2 => write!(f, "G2"),
            BC(n) => write!(f, "BC{n}"),
            SuperA(m, n) => write!(f, "A({m},{n})"),
            SuperB(m, n) => write!(f, "B({m},{n})"),
            SuperC(n) => write!(f, "C({n})"),
            SuperD(m, n) => write!(f, "D({m},{n})"),
            D21(a) => write!(f, "D(2,1;a={a})"),
            SuperF4 => write!(f, "F(4)"),
            SuperG3 => write!(f, "G(3)"),
            Cmn(m, n) => write!(f, "C({m},{n})"),
            BCmn(m, n) => write!(f, "BC({m},{n})"),
            AnnF(n) => write!(f, "A({n},{n})_f"),
        }
    }
}

fn uint(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn pair(s: &str) -> Option<(usize, usize)> {
    let (a, b) = s.split_once(',')?;
    Some((uint(a.trim())?, uint(b.trim())?))
}

impl FromStr for CatalogName {
    type Err = ParseError;

    fn from_str(raw: &str) -> Result<Self, ParseError> {
        use CatalogName::*;
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || ParseError::Name(raw.to_string());
        let name = if let Some(inner) = s.strip_suffix(")_f").and_then(|x| x.strip_prefix("A(")) {
            let (m, n) = pair(inner).ok_or_else(bad)?;
            if m != n {
                return Err(bad());
            }
            AnnF(n)
        } else if let Some(inner) = s.strip_prefix("D(2,1;").and_then(|x| x.strip_suffix(')')) {
            let a = inner.strip_prefix("a=").unwrap_or(inner);
            D21(a.parse().map_err(|_| bad())?)
        } else if let Some((head, rest)) = s.split_once('(') {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            match head {
                "A" => pair(inner).map(|(m, n)| SuperA(m, n)),
                "B" => pair(inner).map(|(m, n)| SuperB(m, n)),
                "D" => pair(inner).map(|(m, n)| SuperD(m, n)),
                "BC" => pair(inner).map(|(m, n)| BCmn(m, n)),
                "C" => pair(inner).map(|(m, n)| Cmn(m, n)).or_else(|| uint(inner).map(SuperC)),
                "F" if inner == "4" => Some(SuperF4),
                "G" if inner == "3" => Some(SuperG3),
                _ => None,
            }
            .ok_or_else(bad)?
        } else if let Some(n) = s.strip_prefix("BC").and_then(uint) {
            BC(n)
        } else {
            let (head, tail) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
            let n = uint(tail).ok_or_else(bad)?;
            match head {
                "A" => A(n),
                "B" => B(n),
                "C" => C(n),
                "D" => D(n),
                "E" => E(n),
                "F" if n == 4 => F4,
                "G" if n == 2 => G2,
                _ => return Err(bad()),
            }
        };
        name.validate().map_err(|_| bad())?;
        Ok(name)
    }
}

/// Data selecting one member of a classified affine family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FamilyParams {
    /// `R(S)` for `A₁`, `B_n`, `C_n`, `B(m,n)`, `C(m,n)`.
    Subset(F2Subset),
    /// `R(S₁,S₂)` for `C₂` and `BC_n`, `R(S,S')` for `BC(m,n)`.
    Pair(F2Subset, F2Subset),
    /// `R(S₁,S₂,H₃)` for `BC₂`, with `H₃ = ι₂⁻¹(S₃)`.
    Triple(F2Subset, F2Subset, F2Subset),
    /// `BC₁`: `H₁ = ι₂⁻¹(S)` and `H₂` given by residues modulo `4L`.
    BcOne(F2Subset, Vec<Vec<i64>>),
    /// `R(s)` for `G₂` and `F₄`.
    Rank(usize),
}

/// Anything the catalog can construct from a textual name.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CatalogEntry {
    Finite(CatalogName),
    AnnX { n: usize, p: i64, q: i64, k: usize },
    Family { cl: CatalogName, k: usize, params: FamilyParams },
}

/// Splits on commas outside brackets.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn keyed(args: &[&str]) -> Result<Vec<(String, String)>, String> {
    args.iter()
        .map(|a| {
            a.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| format!("expected key=value, got {a:?}"))
        })
        .collect()
}

impl FromStr for CatalogEntry {
    type Err = ParseError;

    fn from_str(raw: &str) -> Result<Self, ParseError> {
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: String| ParseError::Name(format!("{raw}: {why}"));
        if let Some(inner) = s.strip_prefix("Ann_x(").and_then(|x| x.strip_suffix(')')) {
            let kv = keyed(&split_top(inner)).map_err(bad)?;
            let (mut n, mut p, mut q, mut k) = (None, None, None, 0usize);
            for (key, v) in kv {
                let num = v.parse::<i64>().map_err(|_| bad(format!("{key} is not an integer")))?;
                match key.as_str() {
                    "n" => n = usize::try_from(num).ok(),
                    "p" => p = Some(num),
                    "q" => q = Some(num),
                    "k" => k = usize::try_from(num).map_err(|_| bad("k < 0".into()))?,
                    _ => return Err(bad(format!("unknown key {key}"))),
                }
            }
            let (Some(n), Some(p), Some(q)) = (n, p, q) else {
                return Err(bad("n, p and q are required".into()));
            };
            return Ok(CatalogEntry::AnnX { n, p, q, k });
        }
        if let Some(inner) = s.strip_prefix("family(").and_then(|x| x.strip_suffix(')')) {
            let args = split_top(inner);
            let cl: CatalogName = args[0].parse()?;
            let kv = keyed(&args[1..]).map_err(bad)?;
            let k = kv
                .iter()
                .find(|(key, _)| key == "k")
                .ok_or_else(|| bad("k is required".into()))?
                .1
                .parse::<usize>()
                .map_err(|_| bad("k is not a nonnegative integer".into()))?;
            let get = |key: &str| kv.iter().find(|(x, _)| x == key).map(|(_, v)| v.as_str());
            let subset = |key: &str| -> Result<Option<F2Subset>, ParseError> {
                get(key).map(|v| F2Subset::parse(k, v)).transpose()
            };
            for (key, _) in &kv {
                if !["k", "S", "S1", "S2", "S3", "S'", "s", "H2"].contains(&key.as_str()) {
                    return Err(bad(format!("unknown key {key}")));
                }
            }
            let params = if let Some(v) = get("s") {
                FamilyParams::Rank(v.parse().map_err(|_| bad("s is not a nonnegative integer".into()))?)
            } else if let Some(h2) = get("H2") {
                let s = subset("S")?.ok_or_else(|| bad("S is required".into()))?;
                let res: Vec<Vec<i64>> =
                    serde_json::from_str(h2).map_err(|e| bad(format!("H2: {e}")))?;
                FamilyParams::BcOne(s, res)
            } else if let Some(s3) = subset("S3")? {
                let s1 = subset("S1")?.ok_or_else(|| bad("S1 is required".into()))?;
                let s2 = subset("S2")?.ok_or_else(|| bad("S2 is required".into()))?;
                FamilyParams::Triple(s1, s2, s3)
            } else if let (Some(s1), Some(s2)) = (subset("S1")?, subset("S2")?) {
                FamilyParams::Pair(s1, s2)
            } else if let (Some(s), Some(sp)) = (subset("S")?, subset("S'")?) {
                FamilyParams::Pair(s, sp)
            } else if let Some(s) = subset("S")? {
                FamilyParams::Subset(s)
            } else {
                return Err(bad("missing family parameters".into()));
            };
            return Ok(CatalogEntry::Family { cl, k, params });
        }
        Ok(CatalogEntry::Finite(s.parse()?))
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogEntry::Finite(n) => write!(f, "{n}"),
            CatalogEntry::AnnX { n, p, q, k } => write!(f, "Ann_x(n={n},p={p},q={q},k={k})"),
            CatalogEntry::Family { cl, k, params } => {
                write!(f, "family({cl},k={k},")?;
                match params {
                    FamilyParams::Subset(s) => write!(f, "S={s}")?,
                    FamilyParams::Pair(a, b) if matches!(cl, CatalogName::BCmn(..)) => {
                        write!(f, "S={a},S'={b}")?
                    }
                    FamilyParams::Pair(a, b) => write!(f, "S1={a},S2={b}")?,
                    FamilyParams::Triple(a, b, c) => write!(f, "S1={a},S2={b},S3={c}")?,
                    FamilyParams::BcOne(s, h) => {
                        write!(f, "S={s},H2={}", serde_json::to_string(h).expect("integers"))?
                    }
                    FamilyParams::Rank(s) => write!(f, "s={s}")?,
                }
                write!(f, ")")
            }
        }
    }
}
