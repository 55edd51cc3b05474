//! Textual group specifications such as `sym:4` or `product:[cyclic:2],[dihedral:8]`.
//!
//! Grammar:
//!
//! ```text
//! spec    := cyclic:N | dihedral:N | sym:N | alt:N | quaternion:8 | elab:P:K
//!          | product:factor,factor[,factor...] | perm:gen[;gen...]
//! factor  := [spec] | spec            (unbracketed factors may not contain top-level commas)
//! gen     := (a b ...)(c d ...)...    (1-based points, separated by spaces or commas)
//! ```
//!
//! `dihedral:N` takes the group order, so `dihedral:8` has 8 elements.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::{self, GroupTable, Permutation, DEFAULT_ORDER_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion(usize),
    ElementaryAbelian {
        p: usize,
        k: usize,
    },
    DirectProduct(Vec<GroupSpec>),
    /// Generators in 1-based cycle notation.
    Permutations(Vec<Vec<Vec<usize>>>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupTable> {
        self.build_with_cap(DEFAULT_ORDER_CAP)
    }

    pub fn build_with_cap(&self, cap: usize) -> Result<GroupTable> {
        let g = match self {
            GroupSpec::Cyclic(n) => group::cyclic(*n, cap)?,
            GroupSpec::Dihedral(n) => group::dihedral(*n, cap)?,
            GroupSpec::Symmetric(n) => group::symmetric(*n, cap)?,
            GroupSpec::Alternating(n) => group::alternating(*n, cap)?,
            GroupSpec::Quaternion(n) => group::quaternion(*n, cap)?,
            GroupSpec::ElementaryAbelian { p, k } => group::elementary_abelian(*p, *k, cap)?,
            GroupSpec::DirectProduct(factors) => {
                let mut it = factors.iter();
                let first = it.next().ok_or_else(|| Error::Validation("product needs at least one factor".into()))?;
                let mut acc = first.build_with_cap(cap)?;
                for f in it {
                    acc = group::direct_product(&acc, &f.build_with_cap(cap)?, cap)?;
                }
                acc
            }
            GroupSpec::Permutations(gens) => {
                let degree = gens.iter().flatten().flatten().copied().max().unwrap_or(0);
                let perms =
                    gens.iter().map(|cycles| Permutation::from_cycles(degree, cycles)).collect::<Result<Vec<_>>>()?;
                group::build_from_generators("", &perms, cap)?
            }
        };
        Ok(g.with_name(self.to_string()))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "sym:{n}"),
            GroupSpec::Alternating(n) => write!(f, "alt:{n}"),
            GroupSpec::Quaternion(n) => write!(f, "quaternion:{n}"),
            GroupSpec::ElementaryAbelian { p, k } => write!(f, "elab:{p}:{k}"),
            GroupSpec::DirectProduct(factors) => {
                write!(f, "product:")?;
                for (i, s) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "[{s}]")?;
                }
                Ok(())
            }
            GroupSpec::Permutations(gens) => {
                write!(f, "perm:")?;
                for (i, cycles) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    if cycles.is_empty() {
                        write!(f, "()")?;
                    }
                    for c in cycles {
                        let pts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_at(s, 0)
    }
}

fn perr<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

fn parse_number(s: &str, pos: usize, what: &str) -> Result<usize> {
    let t = s.trim();
    if t.is_empty() {
        return perr(pos, format!("missing {what}"));
    }
    t.parse::<usize>().or_else(|_| perr(pos, format!("expected a non-negative integer for {what}, found `{t}`")))
}

/// Parses `s`, which starts at byte offset `base` of the original input.
fn parse_at(s: &str, base: usize) -> Result<GroupSpec> {
    let lead = s.len() - s.trim_start().len();
    let s_trim = s.trim();
    let base = base + lead;
    let Some(colon) = s_trim.find(':') else {
        return perr(base, format!("expected `kind:parameters`, found `{s_trim}`"));
    };
    let (kind, rest) = (&s_trim[..colon], &s_trim[colon + 1..]);
    let at = base + colon + 1;
    let spec = match kind {
        "cyclic" => GroupSpec::Cyclic(parse_number(rest, at, "cyclic order")?),
        "dihedral" => GroupSpec::Dihedral(parse_number(rest, at, "dihedral order")?),
        "sym" => GroupSpec::Symmetric(parse_number(rest, at, "symmetric degree")?),
        "alt" => GroupSpec::Alternating(parse_number(rest, at, "alternating degree")?),
        "quaternion" => GroupSpec::Quaternion(parse_number(rest, at, "quaternion order")?),
        "elab" => {
            let Some(c2) = rest.find(':') else {
                return perr(at, "expected `elab:P:K`");
            };
            let p = parse_number(&rest[..c2], at, "prime")?;
            let k = parse_number(&rest[c2 + 1..], at + c2 + 1, "rank")?;
            GroupSpec::ElementaryAbelian { p, k }
        }
        "product" => GroupSpec::DirectProduct(parse_factors(rest, at)?),
        "perm" => GroupSpec::Permutations(parse_generators(rest, at)?),
        other => return perr(base, format!("unknown group kind `{other}`")),
    };
    Ok(spec)
}

fn parse_factors(s: &str, base: usize) -> Result<Vec<GroupSpec>> {
    let mut pieces = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => {
                depth -= 1;
                if depth < 0 {
                    return perr(base + i, format!("unbalanced `{ch}`"));
                }
            }
            ',' if depth == 0 => {
                pieces.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return perr(base + s.len(), "unclosed bracket");
    }
    pieces.push((start, &s[start..]));
    if pieces.len() < 2 {
        return perr(base, "product needs at least two comma-separated factors");
    }
    pieces
        .into_iter()
        .map(|(off, piece)| {
            let lead = piece.len() - piece.trim_start().len();
            let t = piece.trim();
            if let Some(inner) = t.strip_prefix('[') {
                match inner.strip_suffix(']') {
                    Some(inner) => parse_at(inner, base + off + lead + 1),
                    None => perr(base + off + lead, "bracketed factor must end with `]`"),
                }
            } else {
                parse_at(piece, base + off)
            }
        })
        .collect()
}

fn parse_generators(s: &str, base: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut gens = Vec::new();
    let mut off = 0;
    for piece in s.split(';') {
        gens.push(parse_cycles(piece, base + off)?);
        off += piece.len() + 1;
    }
    Ok(gens)
}

fn parse_cycles(s: &str, base: usize) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some((i, ch)) = chars.next() {
        match ch {
            c if c.is_whitespace() => {}
            '(' => {
                let mut cycle = Vec::new();
                let mut num: Option<(usize, usize)> = None;
                let mut closed = false;
                for (j, c) in chars.by_ref() {
                    if let Some(d) = c.to_digit(10) {
                        let (start, v) = num.unwrap_or((j, 0));
                        let v = v
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(d as usize))
                            .ok_or(Error::Parse { pos: base + start, msg: "point too large".into() })?;
                        num = Some((start, v));
                        continue;
                    }
                    if let Some((start, v)) = num.take() {
                        if v == 0 {
                            return perr(base + start, "points are numbered from 1");
                        }
                        cycle.push(v);
                    }
                    match c {
                        ')' => {
                            closed = true;
                            break;
                        }
                        ',' => {}
                        c if c.is_whitespace() => {}
                        other => return perr(base + j, format!("unexpected `{other}` in cycle")),
                    }
                }
                if !closed {
                    return perr(base + i, "unclosed cycle");
                }
                if cycle.len() > 1 {
                    cycles.push(cycle);
                }
            }
            other => return perr(base + i, format!("expected `(`, found `{other}`")),
        }
    }
    Ok(cycles)
}
