use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bimod::soergel_m;
use crate::error::{Error, Result};

pub const ENGINE_VERSION: &str = concat!("colored-homology-", env!("CARGO_PKG_VERSION"));

/// Standard-monomial basis and dimension of one degree piece of `M_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub m: usize,
    pub n: usize,
    pub i: usize,
    pub degree: i64,
    pub engine_version: String,
    pub dimension: usize,
    pub basis: Vec<Vec<u16>>,
}

pub fn cache_key(m: usize, n: usize, i: usize, degree: i64) -> String {
    let mut h = Sha256::new();
    h.update(format!("{m},{n},{i},{degree},{ENGINE_VERSION}"));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Directory of cached bimodule bases, one JSON file per piece.
#[derive(Clone, Debug)]
pub struct BasisCache {
    dir: PathBuf,
}

impl BasisCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(BasisCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, m: usize, n: usize, i: usize, degree: i64) -> PathBuf {
        self.dir.join(format!("{}.json", cache_key(m, n, i, degree)))
    }

    pub fn load(&self, m: usize, n: usize, i: usize, degree: i64) -> Result<Option<BasisEntry>> {
        let p = self.path(m, n, i, degree);
        if !p.exists() {
            return Ok(None);
        }
        let entry: BasisEntry = serde_json::from_slice(&fs::read(p)?)?;
        Ok(Some(entry))
    }

    /// Writes through a temporary file and a rename.
    pub fn store(&self, e: &BasisEntry) -> Result<()> {
        let p = self.path(e.m, e.n, e.i, e.degree);
        let tmp = p.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&serde_json::to_vec_pretty(e)?)?;
            f.sync_all()?;
        }
        fs::rename(tmp, p)?;
        Ok(())
    }

    /// Bases of `M_i` for degrees `0..=bound`, computed on a miss and
    /// checked against the engine on a hit.
    pub fn warm(&self, m: usize, n: usize, i: usize, bound: i64) -> Result<Vec<BasisEntry>> {
        let module = soergel_m(m, n, i)?;
        let mut out = Vec::new();
        for degree in (0..=bound).step_by(2) {
            let piece = module.algebra.piece(degree);
            let fresh = BasisEntry {
                m,
                n,
                i,
                degree,
                engine_version: ENGINE_VERSION.to_string(),
                dimension: piece.dim(),
                basis: piece.basis_monomials().cloned().collect(),
            };
            match self.load(m, n, i, degree)? {
                Some(e) if e == fresh => out.push(e),
                Some(_) => {
                    return Err(Error::Parse(format!("cache entry for M_{i}({m},{n}) degree {degree} disagrees with the engine")))
                }
                None => {
                    self.store(&fresh)?;
                    out.push(fresh);
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_and_reload() {
        let dir = std::env::temp_dir().join(format!("basis-cache-{}", std::process::id()));
        let c = BasisCache::new(&dir).unwrap();
        let a = c.warm(1, 1, 1, 4).unwrap();
        assert_eq!(a.iter().map(|e| e.dimension).collect::<Vec<_>>(), vec![1, 2, 3]);
        let b = c.warm(1, 1, 1, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(cache_key(1, 1, 1, 2), cache_key(1, 1, 0, 2));
        fs::remove_dir_all(dir).unwrap();
    }
}
