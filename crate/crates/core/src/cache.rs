//! On-disk cache of a ball together with its computed KL columns.
//!
//! A cache file starts with one header line
//! `COXCELL-CACHE <version> <config sha256> <radius> <payload sha256>`
//! followed by the JSON payload. Any mismatch makes the file unusable and
//! the caller recomputes.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hecke::HeckeElement;
use crate::kl::KlTable;
use crate::laurent::LaurentPoly;
use crate::word::{CoxeterSystem, ElemId, GroupBall, GroupConfig};

pub const MAGIC: &str = "COXCELL-CACHE";
pub const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Payload {
    ball: GroupBall,
    columns: Vec<(ElemId, Vec<(ElemId, LaurentPoly)>)>,
}

/// How [`Cache::load_or_build`] obtained its table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
    /// The file existed but could not be used; the message says why.
    Rebuilt(String),
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, config: &GroupConfig, radius: usize) -> PathBuf {
        self.dir.join(format!("{}-r{radius}.cache", &config.hash_hex()[..16]))
    }

    /// Write the ball and every computed column of `kl`.
    pub fn save(&self, kl: &KlTable) -> Result<PathBuf> {
        let ball = kl.ball();
        let payload = Payload {
            ball: ball.clone(),
            columns: kl
                .computed_columns()
                .into_iter()
                .map(|(w, c)| (w, c.terms().map(|(x, p)| (x, p.clone())).collect()))
                .collect(),
        };
        let body = serde_json::to_vec(&payload)?;
        let header = format!(
            "{MAGIC} {VERSION} {} {} {}\n",
            ball.config().hash_hex(),
            ball.radius(),
            hex(&Sha256::digest(&body))
        );
        fs::create_dir_all(&self.dir)?;
        let path = self.path(ball.config(), ball.radius());
        let tmp = path.with_extension("tmp");
        let mut bytes = header.into_bytes();
        bytes.extend_from_slice(&body);
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// `Ok(None)` if there is no file; a cache error if it does not match.
    pub fn load(&self, config: &GroupConfig, radius: usize) -> Result<Option<KlTable>> {
        let path = self.path(config, radius);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let split = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::Cache(format!("{}: missing header", path.display())))?;
        let header = std::str::from_utf8(&bytes[..split]).map_err(|_| Error::Cache("header is not text".into()))?;
        let body = &bytes[split + 1..];
        let fields: Vec<&str> = header.split(' ').collect();
        let expected = [
            MAGIC.to_string(),
            VERSION.to_string(),
            config.hash_hex(),
            radius.to_string(),
            hex(&Sha256::digest(body)),
        ];
        let names = ["magic", "version", "config hash", "radius", "payload hash"];
        if fields.len() != expected.len() {
            return Err(Error::Cache(format!("{}: malformed header", path.display())));
        }
        for ((got, want), name) in fields.iter().zip(&expected).zip(names) {
            if got != want {
                return Err(Error::Cache(format!("{}: {name} mismatch", path.display())));
            }
        }
        let payload: Payload = serde_json::from_slice(body)?;
        let mut ball = payload.ball;
        if ball.config() != config || ball.radius() != radius {
            return Err(Error::Cache(format!(
                "{}: payload describes another ball",
                path.display()
            )));
        }
        ball.rebuild_index();
        let kl = KlTable::new(Arc::new(ball));
        for (w, terms) in payload.columns {
            if w.index() >= kl.ball().len() {
                return Err(Error::Cache(format!("{}: column outside the ball", path.display())));
            }
            kl.insert_column(w, HeckeElement::from_pairs(terms));
        }
        Ok(Some(kl))
    }

    /// Load the table for `(config, radius)`, or enumerate the ball, build
    /// columns up to `build_len` and save. Unusable files are replaced.
    pub fn load_or_build(
        &self,
        config: &GroupConfig,
        radius: usize,
        build_len: usize,
    ) -> Result<(KlTable, CacheOutcome)> {
        let outcome = match self.load(config, radius) {
            Ok(Some(kl)) => {
                kl.build(build_len)?;
                return Ok((kl, CacheOutcome::Hit));
            }
            Ok(None) => CacheOutcome::Miss,
            Err(e @ (Error::Cache(_) | Error::Json(_))) => CacheOutcome::Rebuilt(e.to_string()),
            Err(e) => return Err(e),
        };
        let ball = GroupBall::enumerate(&CoxeterSystem::new(*config), radius)?;
        let kl = KlTable::new(Arc::new(ball));
        kl.build(build_len)?;
        self.save(&kl)?;
        Ok((kl, outcome))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> GroupConfig {
        GroupConfig::from_orders(3, 3, 3, [1, 1, 1]).unwrap()
    }

    #[test]
    fn round_trip_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (kl, first) = cache.load_or_build(&config(), 4, 4).unwrap();
        assert_eq!(first, CacheOutcome::Miss);
        let loaded = cache.load(&config(), 4).unwrap().unwrap();
        assert_eq!(loaded.ball(), kl.ball());
        assert_eq!(loaded.computed_columns(), kl.computed_columns());
        assert_eq!(loaded.ball().locate(&[]).unwrap(), ElemId::IDENTITY);
        let (_, again) = cache.load_or_build(&config(), 4, 4).unwrap();
        assert_eq!(again, CacheOutcome::Hit);
    }

    #[test]
    fn tampered_files_are_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (kl, _) = cache.load_or_build(&config(), 3, 3).unwrap();
        let path = cache.path(&config(), 3);
        let text = fs::read_to_string(&path).unwrap();
        let hash = config().hash_hex();
        fs::write(&path, text.replacen(&hash, &"0".repeat(hash.len()), 1)).unwrap();
        assert!(matches!(cache.load(&config(), 3), Err(Error::Cache(_))));
        let (rebuilt, outcome) = cache.load_or_build(&config(), 3, 3).unwrap();
        assert!(
            matches!(outcome, CacheOutcome::Rebuilt(ref m) if m.contains("config hash")),
            "{outcome:?}"
        );
        assert_eq!(rebuilt.computed_columns(), kl.computed_columns());
        assert_eq!(cache.load_or_build(&config(), 3, 3).unwrap().1, CacheOutcome::Hit);
    }
}
