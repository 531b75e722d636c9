//! The class cache: a human-auditable plain-text file of Betti tables.
//!
//! ```text
//! MBARCACHE v1
//! 3: 1
//! 4: 1,1
//! 5: 1,5,1
//! ```
//!
//! One record per line, `n: c0,c1,...,c_{n-3}` with exact decimal
//! coefficients in ascending degree. Records are kept sorted by `n` with no
//! duplicates, every record is revalidated against the Betti-table
//! invariants on load, and writes go through a temp file plus rename so a
//! crashed run never leaves a half-written cache.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::path::Path;

use mbar_core::{BettiTable, BigInt};

pub const MAGIC: &str = "MBARCACHE v1";

#[derive(Debug)]
pub enum CacheError {
    Io(io::Error),
    Corrupt(String),
}

impl fmt::Display for CacheError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheError::Io(e) => write!(f, "cache io error: {e}"),
            CacheError::Corrupt(what) => write!(f, "cache corrupt: {what}"),
        }
    }
}

impl std::error::Error for CacheError {}

impl From<io::Error> for CacheError {
    fn from(e: io::Error) -> Self {
        CacheError::Io(e)
    }
}

#[derive(Debug, Default)]
pub struct CacheFile {
    records: BTreeMap<u32, BettiTable>,
}

impl CacheFile {
    pub fn new() -> Self {
        CacheFile::default()
    }

    /// Load a cache; a missing file is an empty cache, anything malformed is
    /// `Corrupt`.
    pub fn load(path: &Path) -> Result<Self, CacheError> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(CacheFile::new()),
            Err(e) => return Err(CacheError::Io(e)),
        };
        CacheFile::parse(&text).map_err(CacheError::Corrupt)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        match lines.next() {
            Some(line) if line == MAGIC => {}
            Some(line) => return Err(format!("bad header '{line}', expected '{MAGIC}'")),
            None => return Err("empty file".to_string()),
        }
        let mut records = BTreeMap::new();
        let mut last_n = 0u32;
        for (idx, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 2;
            let (n_part, ranks_part) = line
                .split_once(':')
                .ok_or_else(|| format!("line {lineno}: missing ':'"))?;
            let n: u32 = n_part
                .trim()
                .parse()
                .map_err(|_| format!("line {lineno}: bad n '{}'", n_part.trim()))?;
            if n <= last_n {
                return Err(format!(
                    "line {lineno}: records not strictly increasing in n"
                ));
            }
            last_n = n;
            let ranks: Result<Vec<BigInt>, _> = ranks_part
                .split(',')
                .map(|c| c.trim().parse::<BigInt>())
                .collect();
            let ranks = ranks.map_err(|_| format!("line {lineno}: bad coefficient list"))?;
            let table = BettiTable::new(n, ranks)
                .map_err(|e| format!("line {lineno}: invalid table: {e}"))?;
            records.insert(n, table);
        }
        Ok(CacheFile { records })
    }

    pub fn get(&self, n: u32) -> Option<&BettiTable> {
        self.records.get(&n)
    }

    pub fn insert(&mut self, table: BettiTable) {
        self.records.insert(table.n(), table);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn tables(&self) -> impl Iterator<Item = &BettiTable> {
        self.records.values()
    }

    /// Atomic replace: write a sibling temp file, then rename over the
    /// target.
    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(self.to_string().as_bytes())?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

impl fmt::Display for CacheFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{MAGIC}")?;
        for (n, table) in &self.records {
            writeln!(f, "{n}: {}", table.ranks_csv())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let mut cache = CacheFile::new();
        cache.insert(BettiTable::new(3, vec![BigInt::from(1)]).unwrap());
        cache.insert(
            BettiTable::new(5, vec![BigInt::from(1), BigInt::from(5), BigInt::from(1)]).unwrap(),
        );
        let text = cache.to_string();
        assert_eq!(text, "MBARCACHE v1\n3: 1\n5: 1,5,1\n");
        let back = CacheFile::parse(&text).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back.get(5).unwrap().ranks_csv(), "1,5,1");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CacheFile::parse("NOPE v1\n3: 1\n").is_err());
        assert!(CacheFile::parse("MBARCACHE v1\n3: 1\n3: 1\n").is_err());
        assert!(CacheFile::parse("MBARCACHE v1\n5: 1,5,2\n").is_err());
        assert!(CacheFile::parse("MBARCACHE v1\nx: 1\n").is_err());
        assert!(CacheFile::parse("MBARCACHE v1\n4: 1,one\n").is_err());
        assert!(CacheFile::parse("").is_err());
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("classes.txt");
        let mut cache = CacheFile::new();
        cache.insert(BettiTable::new(4, vec![BigInt::from(1), BigInt::from(1)]).unwrap());
        cache.save(&path).unwrap();
        let back = CacheFile::load(&path).unwrap();
        assert_eq!(back.len(), 1);
        // missing file is an empty cache
        assert!(CacheFile::load(&dir.path().join("absent.txt"))
            .unwrap()
            .is_empty());
    }
}
