//! Line-oriented text cache of evaluated series.
//!
//! ```text
//! QSC1
//! expr=<canonical expression>
//! terms=<N>
//! mod=<M>
//! <N+1 decimal coefficients, one per line>
//! ```

use std::fmt::Write as _;
use std::fs;
use std::io::{ErrorKind, Write as _};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::series::{CoeffRing, TruncatedSeries};

pub const CACHE_TAG: &str = "QSC1";

/// Decoded cache file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub expr: String,
    pub order: usize,
    pub modulus: u64,
    pub coeffs: Vec<BigInt>,
}

impl CacheEntry {
    pub fn from_series(expr: &str, series: &TruncatedSeries) -> Self {
        CacheEntry {
            expr: expr.to_string(),
            order: series.order(),
            modulus: series.ring().modulus(),
            coeffs: series.to_bigints(),
        }
    }

    pub fn encode(&self) -> String {
        let mut out =
            format!("{CACHE_TAG}\nexpr={}\nterms={}\nmod={}\n", self.expr, self.order, self.modulus);
        for c in &self.coeffs {
            writeln!(out, "{c}").expect("writing to a String");
        }
        out
    }

    pub fn decode(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Cache(msg.to_string());
        let mut lines = text.lines();
        if lines.next() != Some(CACHE_TAG) {
            return Err(bad("missing QSC1 tag"));
        }
        let mut field = |name: &str| -> Result<String> {
            lines
                .next()
                .and_then(|l| l.strip_prefix(name))
                .and_then(|l| l.strip_prefix('='))
                .map(str::to_string)
                .ok_or_else(|| Error::Cache(format!("missing {name}= line")))
        };
        let expr = field("expr")?;
        let order: usize = field("terms")?.parse().map_err(|_| bad("bad terms value"))?;
        let modulus: u64 = field("mod")?.parse().map_err(|_| bad("bad mod value"))?;
        let ring = CoeffRing::new(modulus)?;
        let coeffs = lines
            .map(|l| l.parse::<BigInt>().map_err(|_| bad("bad coefficient line")))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != order + 1 {
            return Err(bad("coefficient count does not match terms"));
        }
        if !ring.is_exact()
            && coeffs.iter().any(|c| c.sign() == num_bigint::Sign::Minus || *c >= BigInt::from(modulus))
        {
            return Err(bad("residue outside canonical range"));
        }
        Ok(CacheEntry { expr, order, modulus, coeffs })
    }

    pub fn to_series(&self) -> Result<TruncatedSeries> {
        Ok(TruncatedSeries::from_bigints(CoeffRing::new(self.modulus)?, self.coeffs.clone()))
    }
}

/// Directory of cache files keyed by (expression, order, modulus).
#[derive(Clone, Debug)]
pub struct SeriesCache {
    dir: PathBuf,
}

impl SeriesCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        Ok(SeriesCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, expr: &str, order: usize, ring: CoeffRing) -> PathBuf {
        let mut h = Sha256::new();
        h.update(format!("{expr}\n{order}\n{}", ring.modulus()));
        let digest = h.finalize();
        self.dir.join(format!("{}.qsc", hex::encode(&digest[..16])))
    }

    /// Loads a matching entry. Missing files and header mismatches yield `None`.
    pub fn load(&self, expr: &str, order: usize, ring: CoeffRing) -> Result<Option<TruncatedSeries>> {
        let path = self.path_for(expr, order, ring);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
        };
        match CacheEntry::decode(&text) {
            Ok(entry) if entry.expr == expr && entry.order == order && entry.modulus == ring.modulus() => {
                entry.to_series().map(Some)
            }
            _ => Ok(None),
        }
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    pub fn store(&self, expr: &str, series: &TruncatedSeries) -> Result<PathBuf> {
        let path = self.path_for(expr, series.order(), series.ring());
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(CacheEntry::from_series(expr, series).encode().as_bytes()).map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(path)
    }
}
