//! Problem files: a header of `key=value` pairs followed by `[task]` blocks.
//!
//! ```text
//! prime=5; precision=20
//! degree=4; seed=7
//!
//! [unit-cert]
//! sigma = [6]
//! g = [0]:1 + [1]:1
//!
//! [grade-check]
//! sigma = [5, 5]
//! n = 3
//! generators =
//!   [1,0]:1 + [0,2]:3
//!   [0,1]:1
//! ```
//!
//! Indented lines continue the value of the preceding key.  `#` starts a
//! comment line.

use std::sync::Arc;

use ellkit::padic::{ExtensionKind, RingParams};

use crate::CliError;

pub const TASKS: &[&str] = &[
    "unit-cert",
    "grade-check",
    "weil-check",
    "explog",
    "group-law-check",
    "torsion",
    "divisibility",
    "mellin",
    "jump",
    "verify-qlin",
    "twist",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Header {
    pub prime: Option<u64>,
    pub kind: Option<ExtensionKind>,
    pub poly: Option<Vec<i64>>,
    pub precision: Option<u32>,
    pub degree: Option<u32>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub name: String,
    pub line: usize,
    pub fields: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemFile {
    pub header: Header,
    pub blocks: Vec<Block>,
}

/// Command-line values that take precedence over the header.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub prime: Option<u64>,
    pub kind: Option<ExtensionKind>,
    pub ext_poly: Option<Vec<i64>>,
    pub precision: Option<u32>,
    pub degree: Option<u32>,
    pub level: Option<u32>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub params: Arc<RingParams>,
    pub degree: u32,
    pub seed: u64,
    pub level: Option<u32>,
}

fn malformed(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Malformed(format!("line {line}: {msg}"))
}

pub fn parse_int_list(s: &str) -> Result<Vec<i64>, CliError> {
    let s = s.trim();
    let s = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(s);
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::Malformed(format!("bad integer `{}`", x.trim()))))
        .collect()
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| malformed(line, format!("bad value `{}` for `{key}`", v.trim())))
}

impl Header {
    fn set(&mut self, line: usize, key: &str, v: &str) -> Result<(), CliError> {
        match key {
            "prime" => self.prime = Some(num(line, key, v)?),
            "kind" => self.kind = Some(v.parse().map_err(|e| malformed(line, e))?),
            "poly" => self.poly = Some(parse_int_list(v).map_err(|e| malformed(line, e))?),
            "precision" => self.precision = Some(num(line, key, v)?),
            "degree" => self.degree = Some(num(line, key, v)?),
            "seed" => self.seed = Some(num(line, key, v)?),
            other => return Err(malformed(line, format!("unknown header key `{other}`"))),
        }
        Ok(())
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut out = ProblemFile::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let t = raw.trim();
            if let Some(name) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                if !TASKS.contains(&name) {
                    return Err(malformed(line, format!("unknown task `{name}`")));
                }
                out.blocks.push(Block { name: name.to_string(), line, fields: Vec::new() });
                continue;
            }
            let Some(block) = out.blocks.last_mut() else {
                for part in t.split(';').map(str::trim).filter(|p| !p.is_empty()) {
                    let (k, v) = part
                        .split_once('=')
                        .ok_or_else(|| malformed(line, format!("expected key=value, got `{part}`")))?;
                    out.header.set(line, k.trim(), v)?;
                }
                continue;
            };
            if raw.starts_with(char::is_whitespace) {
                let (_, v) = block
                    .fields
                    .last_mut()
                    .ok_or_else(|| malformed(line, "continuation line without a key"))?;
                if !v.is_empty() {
                    v.push('\n');
                }
                v.push_str(t);
                continue;
            }
            let (k, v) = t.split_once('=').ok_or_else(|| malformed(line, format!("expected key = value, got `{t}`")))?;
            let k = k.trim().to_string();
            if block.fields.iter().any(|(x, _)| *x == k) {
                return Err(malformed(line, format!("duplicate key `{k}`")));
            }
            block.fields.push((k, v.trim().to_string()));
        }
        Ok(out)
    }

    pub fn config(&self, o: &Overrides) -> Result<Config, CliError> {
        let h = &self.header;
        let prime = o.prime.or(h.prime).ok_or_else(|| CliError::Malformed("no prime given".into()))?;
        let kind = o.kind.or(h.kind).unwrap_or(ExtensionKind::Trivial);
        let poly = o.ext_poly.clone().or_else(|| h.poly.clone()).unwrap_or_else(|| vec![0, 1]);
        let precision = o.precision.or(h.precision).unwrap_or(20);
        let degree = o.degree.or(h.degree).unwrap_or(4);
        if precision == 0 {
            return Err(CliError::Malformed("precision must be at least 1".into()));
        }
        if degree == 0 {
            return Err(CliError::Malformed("degree must be at least 1".into()));
        }
        let params = RingParams::new(prime, kind, poly, precision).map_err(|e| CliError::Malformed(e.to_string()))?;
        Ok(Config { params, degree, seed: o.seed.or(h.seed).unwrap_or(0), level: o.level })
    }
}

/// Fields of one block, consumed by key; leftovers are rejected.
pub struct Fields {
    name: String,
    line: usize,
    items: Vec<(String, String)>,
}

impl Fields {
    pub fn new(block: &Block) -> Self {
        Fields { name: block.name.clone(), line: block.line, items: block.fields.clone() }
    }

    pub fn take(&mut self, key: &str) -> Option<String> {
        let pos = self.items.iter().position(|(k, _)| k == key)?;
        Some(self.items.remove(pos).1)
    }

    pub fn require(&mut self, key: &str) -> Result<String, CliError> {
        self.take(key)
            .ok_or_else(|| malformed(self.line, format!("[{}] needs `{key}`", self.name)))
    }

    pub fn parsed<T: std::str::FromStr>(&mut self, key: &str, default: T) -> Result<T, CliError> {
        match self.take(key) {
            Some(v) => num(self.line, key, &v),
            None => Ok(default),
        }
    }

    pub fn finish(self) -> Result<(), CliError> {
        match self.items.first() {
            Some((k, _)) => Err(malformed(self.line, format!("unknown key `{k}` in [{}]", self.name))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_blocks() {
        let p = ProblemFile::parse(
            "# comment\nprime=5; precision=12\ndegree=3\n\n[grade-check]\nsigma = [5]\ngenerators =\n  [1]:1\n  [2]:3\n",
        )
        .unwrap();
        assert_eq!(p.header.prime, Some(5));
        assert_eq!(p.header.degree, Some(3));
        assert_eq!(p.blocks.len(), 1);
        assert_eq!(p.blocks[0].fields[1], ("generators".to_string(), "[1]:1\n[2]:3".to_string()));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ProblemFile::parse("prime=5; colour=red").is_err());
        assert!(ProblemFile::parse("prime=5\n[nope]").is_err());
        let p = ProblemFile::parse("prime=5\n[twist]\nshade = 1").unwrap();
        let mut f = Fields::new(&p.blocks[0]);
        assert!(f.take("g").is_none());
        assert!(f.finish().is_err());
    }

    #[test]
    fn overrides_win() {
        let p = ProblemFile::parse("prime=5; precision=12").unwrap();
        let c = p.config(&Overrides { precision: Some(7), ..Default::default() }).unwrap();
        assert_eq!(c.params.precision(), 7);
        assert_eq!(c.params.prime(), 5);
        assert!(p.config(&Overrides { degree: Some(0), ..Default::default() }).is_err());
    }
}
