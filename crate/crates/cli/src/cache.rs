//! Append-only text cache of computed counts.
//!
//! One record per line, counts in decimal:
//!
//! ```text
//! PLR  r s n m count
//! ISOT r s n m count
//! MC   r s n m count
//! ISOM n m count
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. When a key appears
//! twice the later line wins, and a differing value is reported as a
//! [`Conflict`].

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use plr_core::{BigCount, Shape, WeightDistribution};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table {
    Plr,
    Isot,
    Isom,
    Mc,
}

impl Table {
    pub fn tag(self) -> &'static str {
        match self {
            Table::Plr => "PLR",
            Table::Isot => "ISOT",
            Table::Isom => "ISOM",
            Table::Mc => "MC",
        }
    }

    fn from_tag(tag: &str) -> Option<Table> {
        Some(match tag {
            "PLR" => Table::Plr,
            "ISOT" => Table::Isot,
            "ISOM" => Table::Isom,
            "MC" => Table::Mc,
            _ => return None,
        })
    }
}

/// `ISOM` keys use `dims = [n, n, n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CacheKey {
    pub table: Table,
    pub dims: [usize; 3],
    pub m: usize,
}

impl CacheKey {
    pub fn new(table: Table, shape: Shape, m: usize) -> Self {
        CacheKey { table, dims: shape.dims(), m }
    }
}

impl fmt::Display for CacheKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [r, s, n] = self.dims;
        match self.table {
            Table::Isom => write!(f, "ISOM {n} {}", self.m),
            t => write!(f, "{} {r} {s} {n} {}", t.tag(), self.m),
        }
    }
}

/// Two different values seen for one key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub key: CacheKey,
    pub old: BigCount,
    pub new: BigCount,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cache conflict for {}: {} replaced by {}", self.key, self.old, self.new)
    }
}

pub fn format_line(key: &CacheKey, value: &BigCount) -> String {
    format!("{key} {value}")
}

pub fn parse_line(line: &str) -> Result<(CacheKey, BigCount), String> {
    let f: Vec<&str> = line.split_whitespace().collect();
    let table = f.first().and_then(|t| Table::from_tag(t)).ok_or_else(|| format!("unknown record {line:?}"))?;
    let want = if table == Table::Isom { 4 } else { 6 };
    if f.len() != want {
        return Err(format!("expected {want} fields in {line:?}"));
    }
    let num = |i: usize| f[i].parse::<usize>().map_err(|_| format!("bad integer {:?} in {line:?}", f[i]));
    let (dims, m) = if table == Table::Isom {
        let n = num(1)?;
        ([n, n, n], num(2)?)
    } else {
        ([num(1)?, num(2)?, num(3)?], num(4)?)
    };
    if dims.contains(&0) {
        return Err(format!("zero dimension in {line:?}"));
    }
    let value = f[want - 1].parse::<BigCount>().map_err(|_| format!("bad count {:?} in {line:?}", f[want - 1]))?;
    Ok((CacheKey { table, dims, m }, value))
}

/// In-memory view of a cache file plus its single append handle.
#[derive(Debug, Default)]
pub struct ResultCache {
    path: Option<PathBuf>,
    entries: BTreeMap<CacheKey, BigCount>,
    writer: Option<BufWriter<File>>,
}

impl ResultCache {
    pub fn in_memory() -> Self {
        ResultCache::default()
    }

    /// Loads `path` if it exists. Conflicting lines inside the file are
    /// returned, not treated as errors.
    pub fn open(path: impl AsRef<Path>) -> CliResult<(Self, Vec<Conflict>)> {
        let path = path.as_ref().to_path_buf();
        let mut cache = ResultCache { path: Some(path.clone()), ..Default::default() };
        let mut conflicts = Vec::new();
        if path.exists() {
            let file = File::open(&path).map_err(|e| CliError::io(&path, e))?;
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| CliError::io(&path, e))?;
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                let (key, value) =
                    parse_line(t).map_err(|e| CliError::Format(format!("{}:{}: {e}", path.display(), i + 1)))?;
                if let Some(old) = cache.entries.insert(key, value.clone()) {
                    if old != value {
                        conflicts.push(Conflict { key, old, new: value });
                    }
                }
            }
        }
        Ok((cache, conflicts))
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &CacheKey) -> Option<&BigCount> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&CacheKey, &BigCount)> {
        self.entries.iter()
    }

    /// Stores `value`, appending a line unless the same value is already
    /// known.
    pub fn record(&mut self, key: CacheKey, value: BigCount) -> CliResult<Option<Conflict>> {
        let conflict = match self.entries.get(&key) {
            Some(old) if *old == value => return Ok(None),
            Some(old) => Some(Conflict { key, old: old.clone(), new: value.clone() }),
            None => None,
        };
        self.append(&key, &value)?;
        self.entries.insert(key, value);
        Ok(conflict)
    }

    pub fn record_distribution(&mut self, table: Table, dist: &WeightDistribution) -> CliResult<Vec<Conflict>> {
        let shape = dist.shape();
        let mut out = Vec::new();
        for (m, c) in dist.counts().iter().enumerate() {
            if let Some(x) = self.record(CacheKey::new(table, shape, m), c.clone())? {
                out.push(x);
            }
        }
        self.flush()?;
        Ok(out)
    }

    /// The full distribution of `shape`, if every weight is cached.
    pub fn distribution(&self, table: Table, shape: Shape) -> Option<WeightDistribution> {
        let counts: Option<Vec<BigCount>> =
            (0..=shape.cells()).map(|m| self.get(&CacheKey::new(table, shape, m)).cloned()).collect();
        WeightDistribution::from_counts(shape, counts?).ok()
    }

    fn append(&mut self, key: &CacheKey, value: &BigCount) -> CliResult<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if self.writer.is_none() {
            let file = OpenOptions::new().create(true).append(true).open(path).map_err(|e| CliError::io(path, e))?;
            self.writer = Some(BufWriter::new(file));
        }
        let w = self.writer.as_mut().expect("writer just opened");
        writeln!(w, "{}", format_line(key, value)).map_err(|e| CliError::io(path, e))
    }

    pub fn flush(&mut self) -> CliResult<()> {
        if let (Some(w), Some(path)) = (self.writer.as_mut(), self.path.as_ref()) {
            w.flush().map_err(|e| CliError::io(path, e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_round_trip() {
        let key = CacheKey { table: Table::Plr, dims: [3, 3, 7], m: 9 };
        let v: BigCount = "2212980".parse().unwrap();
        let line = format_line(&key, &v);
        assert_eq!(line, "PLR 3 3 7 9 2212980");
        assert_eq!(parse_line(&line).unwrap(), (key, v));
        let isom = CacheKey { table: Table::Isom, dims: [4, 4, 4], m: 2 };
        assert_eq!(format_line(&isom, &84u32.into()), "ISOM 4 2 84");
        assert_eq!(parse_line("ISOM 4 2 84").unwrap().0, isom);
    }

    #[test]
    fn rejects_malformed_lines() {
        for bad in ["PLR 1 1 1", "FOO 1 1 1 1 1", "PLR 0 1 1 0 1", "ISOM 2 x 3", "PLR 1 1 1 0 -1"] {
            assert!(parse_line(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn record_reports_conflicts() {
        let mut c = ResultCache::in_memory();
        let key = CacheKey { table: Table::Mc, dims: [2, 2, 2], m: 0 };
        assert!(c.record(key, 1u32.into()).unwrap().is_none());
        assert!(c.record(key, 1u32.into()).unwrap().is_none());
        let x = c.record(key, 2u32.into()).unwrap().unwrap();
        assert_eq!((x.old, x.new), (1u32.into(), 2u32.into()));
        assert_eq!(c.get(&key), Some(&2u32.into()));
    }
}
