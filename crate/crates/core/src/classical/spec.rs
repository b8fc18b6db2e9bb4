//! Constructor strings: `sl(3,R)`, `su(2,1)`, `so*(6)`, `R^2+su(2)`, `0`, ...

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    SlR,
    SlC,
    Su,
    SuPq,
    SuStar,
    U,
    So,
    SoPq,
    SoC,
    SoStar,
    SpR,
    SpCompact,
    SpC,
    SpPq,
    Abelian,
}

/// A simple or abelian family with its parameters. For one-parameter
/// families the parameter is `p`; `su*(2n)` and `so*(2n)` store `2n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub p: usize,
    pub q: usize,
}

impl FamilySpec {
    pub fn new(family: Family, p: usize, q: usize) -> Self {
        FamilySpec { family, p, q }
    }

    pub fn matrix_dim(&self) -> usize {
        use Family::*;
        match self.family {
            SuPq | SoPq => self.p + self.q,
            SpR | SpCompact | SpC => 2 * self.p,
            SpPq => 2 * (self.p + self.q),
            _ => self.p,
        }
    }

    pub fn validate(&self) -> Result<()> {
        use Family::*;
        let (p, q) = (self.p, self.q);
        let ok = match self.family {
            SlR | SlC => p >= 2,
            Su | U | So | SpCompact | SpR | SpC => p >= 1,
            SoC => p >= 2,
            SuPq | SpPq => p >= 1 && q >= 1,
            SoPq => p >= 1 && q >= 1 && p + q >= 3,
            SuStar | SoStar => p >= 4 && p % 2 == 0,
            Abelian => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{self}: parameters outside the supported range")))
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Family::*;
        let (p, q) = (self.p, self.q);
        match self.family {
            SlR => write!(f, "sl({p},R)"),
            SlC => write!(f, "sl({p},C)"),
            Su => write!(f, "su({p})"),
            SuPq => write!(f, "su({p},{q})"),
            SuStar => write!(f, "su*({p})"),
            U => write!(f, "u({p})"),
            So => write!(f, "so({p})"),
            SoPq => write!(f, "so({p},{q})"),
            SoC => write!(f, "so({p},C)"),
            SoStar => write!(f, "so*({p})"),
            SpR => write!(f, "sp({p},R)"),
            SpCompact => write!(f, "sp({p})"),
            SpC => write!(f, "sp({p},C)"),
            SpPq => write!(f, "sp({p},{q})"),
            Abelian => match p {
                0 => write!(f, "0"),
                1 => write!(f, "R"),
                _ => write!(f, "R^{p}"),
            },
        }
    }
}

pub(crate) fn display_specs(specs: &[FamilySpec]) -> String {
    let parts: Vec<String> = specs
        .iter()
        .filter(|s| !(s.family == Family::Abelian && s.p == 0))
        .map(|s| format!("{s}"))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn parse_uint(s: &str, whole: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("expected an integer in '{whole}', found '{s}'")))
}

fn parse_term(t: &str) -> Result<FamilySpec> {
    use Family::*;
    let t = t.trim();
    match t {
        "0" => return Ok(FamilySpec::new(Abelian, 0, 0)),
        "R" => return Ok(FamilySpec::new(Abelian, 1, 0)),
        _ => {}
    }
    if let Some(n) = t.strip_prefix("R^") {
        return Ok(FamilySpec::new(Abelian, parse_uint(n, t)?, 0));
    }
    let open = t.find('(').ok_or_else(|| Error::Parse(format!("unrecognised algebra '{t}'")))?;
    if !t.ends_with(')') {
        return Err(Error::Parse(format!("missing ')' in '{t}'")));
    }
    let head = &t[..open];
    let args: Vec<&str> = t[open + 1..t.len() - 1].split(',').map(str::trim).collect();
    let spec = match (head, args.as_slice()) {
        ("sl", [n, "R"]) => FamilySpec::new(SlR, parse_uint(n, t)?, 0),
        ("sl", [n, "C"]) => FamilySpec::new(SlC, parse_uint(n, t)?, 0),
        ("su", [n]) => FamilySpec::new(Su, parse_uint(n, t)?, 0),
        ("su", [p, q]) => FamilySpec::new(SuPq, parse_uint(p, t)?, parse_uint(q, t)?),
        ("su*", [n]) => FamilySpec::new(SuStar, parse_uint(n, t)?, 0),
        ("u", [n]) => FamilySpec::new(U, parse_uint(n, t)?, 0),
        ("so", [n]) => FamilySpec::new(So, parse_uint(n, t)?, 0),
        ("so", [n, "C"]) => FamilySpec::new(SoC, parse_uint(n, t)?, 0),
        ("so", [p, q]) => FamilySpec::new(SoPq, parse_uint(p, t)?, parse_uint(q, t)?),
        ("so*", [n]) => FamilySpec::new(SoStar, parse_uint(n, t)?, 0),
        ("sp", [n]) => FamilySpec::new(SpCompact, parse_uint(n, t)?, 0),
        ("sp", [n, "R"]) => FamilySpec::new(SpR, parse_uint(n, t)?, 0),
        ("sp", [n, "C"]) => FamilySpec::new(SpC, parse_uint(n, t)?, 0),
        ("sp", [p, q]) => FamilySpec::new(SpPq, parse_uint(p, t)?, parse_uint(q, t)?),
        _ => {
            if matches!(head, "e6" | "e7" | "e8" | "f4" | "g2" | "E6" | "E7" | "E8" | "F4" | "G2") {
                return Err(Error::Unsupported(format!("exceptional algebra '{t}'")));
            }
            return Err(Error::Parse(format!("unrecognised algebra '{t}'")));
        }
    };
    Ok(spec)
}

/// Parse a `+`-separated list of constructor strings.
pub fn parse_spec(s: &str) -> Result<Vec<FamilySpec>> {
    if s.trim().is_empty() {
        return Err(Error::Parse("empty algebra specification".into()));
    }
    split_top(s).into_iter().map(parse_term).collect()
}

/// Split on `+` outside parentheses and brackets.
pub(crate) fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '+' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}
