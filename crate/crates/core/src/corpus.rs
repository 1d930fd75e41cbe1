//! Group files, built-in families and corpus loading.
//!
//! A group file is line oriented:
//!
//! ```text
//! name: C4
//! degree: 4
//! # comments and blank lines are allowed after the header
//! gen: (0 1 2 3)
//! img: 1 0 3 2
//! expect-order: 8
//! ```
//!
//! `expect-order`, `expect-transitive`, `expect-stabilizer-order` and
//! `expect-elusive` declare facts that [`load_corpus`] recomputes before the
//! entry is accepted.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::arith::{is_prime, smallest_primitive_root};
use crate::error::{Error, Result};
use crate::fixity::ElementCensus;
use crate::group::PermGroup;
use crate::perm::{Permutation, MAX_DEGREE};
use crate::Caps;

/// Facts a file claims about its group.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expectations {
    pub order: Option<u64>,
    pub transitive: Option<bool>,
    pub stabilizer_order: Option<u64>,
    pub elusive: Option<bool>,
}

impl Expectations {
    pub fn is_empty(&self) -> bool {
        *self == Expectations::default()
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    /// File path, `builtin:<family>`, or `inline`.
    pub source: String,
    pub group: PermGroup,
    pub declared_degree: usize,
    pub expectations: Expectations,
}

impl CorpusEntry {
    pub fn new(name: impl Into<String>, source: impl Into<String>, group: PermGroup) -> Self {
        CorpusEntry {
            name: name.into(),
            source: source.into(),
            declared_degree: group.degree(),
            group,
            expectations: Expectations::default(),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn at_line(line: usize) -> impl FnOnce(Error) -> Error {
    move |e| Error::AtLine { line, source: Box::new(e) }
}

fn parse_bool(line: usize, v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(parse_err(line, format!("expected true or false, found `{v}`"))),
    }
}

fn parse_u64(line: usize, v: &str) -> Result<u64> {
    v.parse().map_err(|_| parse_err(line, format!("expected a nonnegative integer, found `{v}`")))
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<()> {
    if slot.is_some() {
        return Err(Error::DuplicateKey { line, key: key.to_string() });
    }
    *slot = Some(value);
    Ok(())
}

/// Parses the text of a `.grp` file. The entry's source is `inline`.
pub fn parse_group_file(text: &str) -> Result<CorpusEntry> {
    let mut name: Option<String> = None;
    let mut degree: Option<usize> = None;
    let mut gens: Vec<Permutation> = Vec::new();
    let mut expect = Expectations::default();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        let header_done = name.is_some() && degree.is_some();
        if header_done && (content.is_empty() || content.starts_with('#')) {
            continue;
        }
        let Some((key, value)) = content.split_once(':') else {
            return Err(parse_err(line, format!("expected `key: value`, found `{content}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        match (name.is_some(), degree.is_some()) {
            (false, _) if key != "name" => return Err(parse_err(line, "first line must be `name:`")),
            (true, false) if key != "degree" => return Err(parse_err(line, "second line must be `degree:`")),
            _ => {}
        }
        match key {
            "name" => {
                if value.is_empty() || value.contains(char::is_whitespace) {
                    return Err(parse_err(line, "name must be a single nonempty token"));
                }
                set_once(&mut name, value.to_string(), line, key)?;
            }
            "degree" => {
                let d = value
                    .parse::<usize>()
                    .map_err(|_| parse_err(line, format!("expected a positive integer degree, found `{value}`")))?;
                if d == 0 || d > MAX_DEGREE {
                    return Err(at_line(line)(Error::InvalidDegree(d)));
                }
                set_once(&mut degree, d, line, key)?;
            }
            "gen" => {
                let d = degree.expect("header checked");
                gens.push(Permutation::parse_cycles(value, d).map_err(at_line(line))?);
            }
            "img" => {
                let d = degree.expect("header checked");
                let images = value
                    .split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| parse_err(line, format!("bad image `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                if images.len() != d {
                    return Err(at_line(line)(Error::DegreeMismatch { expected: d, found: images.len() }));
                }
                if let Some(&p) = images.iter().find(|&&p| p >= d) {
                    return Err(at_line(line)(Error::PointOutOfRange { point: p, degree: d }));
                }
                gens.push(Permutation::from_images(&images).map_err(at_line(line))?);
            }
            "expect-order" => set_once(&mut expect.order, parse_u64(line, value)?, line, key)?,
            "expect-transitive" => set_once(&mut expect.transitive, parse_bool(line, value)?, line, key)?,
            "expect-stabilizer-order" => set_once(&mut expect.stabilizer_order, parse_u64(line, value)?, line, key)?,
            "expect-elusive" => set_once(&mut expect.elusive, parse_bool(line, value)?, line, key)?,
            other => return Err(parse_err(line, format!("unknown key `{other}`"))),
        }
    }

    let name = name.ok_or_else(|| parse_err(1, "missing `name:` line"))?;
    let degree = degree.ok_or_else(|| parse_err(2, "missing `degree:` line"))?;
    let group = PermGroup::from_generators(degree, gens)?;
    Ok(CorpusEntry { name, source: "inline".into(), group, declared_degree: degree, expectations: expect })
}

/// Canonical file text: header, expectations, then one `gen:` line per generator.
pub fn serialize(entry: &CorpusEntry) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name: {}", entry.name);
    let _ = writeln!(out, "degree: {}", entry.declared_degree);
    let e = &entry.expectations;
    if let Some(v) = e.order {
        let _ = writeln!(out, "expect-order: {v}");
    }
    if let Some(v) = e.transitive {
        let _ = writeln!(out, "expect-transitive: {v}");
    }
    if let Some(v) = e.stabilizer_order {
        let _ = writeln!(out, "expect-stabilizer-order: {v}");
    }
    if let Some(v) = e.elusive {
        let _ = writeln!(out, "expect-elusive: {v}");
    }
    for g in entry.group.generators() {
        let _ = writeln!(out, "gen: {}", g.format_cycles());
    }
    out
}

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParams(msg()))
    }
}

fn need_degree(n: u64) -> Result<usize> {
    need(n >= 1 && n <= MAX_DEGREE as u64, || format!("degree {n} must lie in 1..={MAX_DEGREE}"))?;
    Ok(n as usize)
}

fn cycle(points: impl IntoIterator<Item = usize>) -> Vec<usize> {
    points.into_iter().collect()
}

fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Permutation {
    let cycles: Vec<Vec<usize>> = cycles.iter().filter(|c| c.len() > 1).cloned().collect();
    Permutation::from_cycles(n, &cycles).expect("family generators are valid")
}

fn map_images(n: usize, f: impl Fn(usize) -> usize) -> Permutation {
    Permutation::from_images(&(0..n).map(f).collect::<Vec<_>>()).expect("family map is a bijection")
}

/// A member of a built-in family.
///
/// | family | params | degree | order |
/// |---|---|---|---|
/// | `cyclic` | n | n | n |
/// | `dihedral` | n ≥ 3 | n | 2n |
/// | `symmetric` | n | n | n! |
/// | `alternating` | n ≥ 3 | n | n!/2 |
/// | `elem_abelian` | p k | p^k | p^k (regular) |
/// | `frobenius` | p q, q ∣ p−1 | p | pq |
pub fn builtin_family(family: &str, params: &[u64]) -> Result<CorpusEntry> {
    let arity = match family {
        "cyclic" | "dihedral" | "symmetric" | "alternating" => 1,
        "elem_abelian" | "frobenius" => 2,
        other => return Err(Error::InvalidParams(format!("unknown family `{other}`"))),
    };
    need(params.len() == arity, || format!("{family} takes {arity} parameter(s), got {}", params.len()))?;

    let (degree, gens, order): (usize, Vec<Permutation>, u64) = match family {
        "cyclic" => {
            let n = need_degree(params[0])?;
            (n, vec![from_cycles(n, &[cycle(0..n)])], n as u64)
        }
        "dihedral" => {
            let n = need_degree(params[0])?;
            need(n >= 3, || "dihedral needs n >= 3".into())?;
            let rotation = from_cycles(n, &[cycle(0..n)]);
            let reflection = map_images(n, |x| (n - x) % n);
            (n, vec![rotation, reflection], 2 * n as u64)
        }
        "symmetric" => {
            let n = need_degree(params[0])?;
            let order = (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k));
            let order = order.ok_or(Error::OrderOverflow)?;
            let gens =
                if n >= 2 { vec![from_cycles(n, &[vec![0, 1]]), from_cycles(n, &[cycle(0..n)])] } else { vec![] };
            (n, gens, order)
        }
        "alternating" => {
            let n = need_degree(params[0])?;
            need(n >= 3, || "alternating needs n >= 3".into())?;
            let order = (3..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k)).ok_or(Error::OrderOverflow)?;
            let long = if n % 2 == 1 { cycle(0..n) } else { cycle(1..n) };
            (n, vec![from_cycles(n, &[vec![0, 1, 2]]), from_cycles(n, &[long])], order)
        }
        "elem_abelian" => {
            let (p, k) = (params[0], params[1]);
            need(is_prime(p), || format!("{p} is not prime"))?;
            need(k >= 1, || "k must be positive".into())?;
            let size = u32::try_from(k).ok().and_then(|k| p.checked_pow(k));
            let n = need_degree(size.unwrap_or(u64::MAX))?;
            let p = p as usize;
            let gens = (0..k as u32)
                .map(|i| {
                    let place = p.pow(i);
                    map_images(n, |x| {
                        let digit = (x / place) % p;
                        x - digit * place + ((digit + 1) % p) * place
                    })
                })
                .collect();
            (n, gens, n as u64)
        }
        "frobenius" => {
            let (p, q) = (params[0], params[1]);
            need(is_prime(p), || format!("{p} is not prime"))?;
            need(q >= 1 && (p - 1) % q == 0, || format!("{q} does not divide {}", p - 1))?;
            let n = need_degree(p)?;
            let g = smallest_primitive_root(p)?;
            let mult = crate::arith::pow_mod(g, (p - 1) / q, p) as usize;
            let translation = from_cycles(n, &[cycle(0..n)]);
            let scaling = map_images(n, |x| (x * mult) % n);
            (n, vec![translation, scaling], p * q)
        }
        _ => unreachable!(),
    };

    let name = std::iter::once(family.to_string()).chain(params.iter().map(u64::to_string)).collect::<Vec<_>>();
    let mut entry =
        CorpusEntry::new(name.join("_"), format!("builtin:{family}"), PermGroup::from_generators(degree, gens)?);
    entry.expectations.order = Some(order);
    entry.expectations.transitive = Some(true);
    Ok(entry)
}

/// Recomputes every declared expectation.
pub fn validate(entry: &CorpusEntry, caps: &Caps) -> Result<()> {
    let fail = |msg: String| Error::Validation { name: entry.name.clone(), msg };
    let g = &entry.group;
    let e = &entry.expectations;
    if let Some(want) = e.order {
        let got = g.order()?;
        if got != want {
            return Err(fail(format!("order is {got}, file declares {want}")));
        }
    }
    if let Some(want) = e.transitive {
        if g.is_transitive() != want {
            return Err(fail(format!("transitivity is {}, file declares {want}", !want)));
        }
    }
    if let Some(want) = e.stabilizer_order {
        let got = g.point_stabilizer(0)?.order()?;
        if got != want {
            return Err(fail(format!("stabilizer of 0 has order {got}, file declares {want}")));
        }
    }
    if let Some(want) = e.elusive {
        if !g.is_transitive() {
            return Err(fail("elusiveness declared for an intransitive group".into()));
        }
        let got = ElementCensus::scan(g, caps.enumeration_cap)?.is_elusive();
        if got != want {
            return Err(fail(format!("elusiveness is {got}, file declares {want}")));
        }
    }
    Ok(())
}

/// Loads and validates every `.grp` file in `dir`, sorted by group name.
pub fn load_corpus(dir: &Path, caps: &Caps) -> Result<Vec<CorpusEntry>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|x| x == "grp") && p.is_file())
        .collect();
    paths.sort();

    let mut entries = Vec::with_capacity(paths.len());
    let mut names = BTreeSet::new();
    for path in paths {
        let in_file = |e: Error| Error::InFile { path: path.clone(), source: Box::new(e) };
        let text = std::fs::read_to_string(&path).map_err(|e| in_file(e.into()))?;
        let mut entry = parse_group_file(&text).map_err(in_file)?;
        entry.source = path.display().to_string();
        if !names.insert(entry.name.clone()) {
            return Err(in_file(Error::DuplicateName(entry.name)));
        }
        validate(&entry, caps).map_err(in_file)?;
        entries.push(entry);
    }
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(entries)
}

/// SHA-256 over the canonical serialization of the entries in name order.
pub fn corpus_digest(entries: &[CorpusEntry]) -> String {
    let mut sorted: Vec<&CorpusEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    let mut hasher = Sha256::new();
    for e in sorted {
        hasher.update(serialize(e).as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}
