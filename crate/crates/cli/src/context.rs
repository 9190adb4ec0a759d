//! Config-file merging, seed resolution, and atomic output writing.

use crate::CliError;
use serde_json::Value;
use std::path::Path;

pub const SEED_ENV: &str = "SMSGAUNTLET_SEED";

/// Flat JSON config whose keys mirror the flags; explicit flags always win.
pub struct Config {
    map: serde_json::Map<String, Value>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let map = match path {
            None => serde_json::Map::new(),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Data(format!("cannot read config {}: {e}", path.display()))
                })?;
                match serde_json::from_str::<Value>(&text) {
                    Ok(Value::Object(map)) => map,
                    Ok(_) => {
                        return Err(CliError::Data(format!(
                            "{}: config must be a flat JSON object",
                            path.display()
                        )))
                    }
                    Err(e) => {
                        return Err(CliError::Data(format!(
                            "{}: invalid JSON at line {}: {e}",
                            path.display(),
                            e.line()
                        )))
                    }
                }
            }
        };
        Ok(Self { map })
    }

    fn key(&self, key: &str) -> Option<&Value> {
        self.map.get(key)
    }

    pub fn usize_or(&self, flag: Option<usize>, key: &str, default: usize) -> Result<usize, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.key(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|v| v as usize)
                .ok_or_else(|| CliError::Usage(format!("config key {key:?} must be an integer"))),
        }
    }

    pub fn f64_or(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.key(key) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| CliError::Usage(format!("config key {key:?} must be a number"))),
        }
    }

    pub fn string(&self, flag: Option<String>, key: &str) -> Result<Option<String>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.key(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(CliError::Usage(format!("config key {key:?} must be a string"))),
        }
    }

    /// Seed priority: flag, config `seed`, `SMSGAUNTLET_SEED`, then 0. The
    /// effective seed is logged so every run is replayable.
    pub fn resolve_seed(&self, flag: Option<u64>) -> Result<u64, CliError> {
        let seed = if let Some(seed) = flag {
            seed
        } else if let Some(v) = self.key("seed") {
            v.as_u64()
                .ok_or_else(|| CliError::Usage("config key \"seed\" must be an integer".into()))?
        } else if let Ok(env) = std::env::var(SEED_ENV) {
            env.parse().map_err(|_| {
                CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got {env:?}"))
            })?
        } else {
            0
        };
        eprintln!("effective seed: {seed}");
        Ok(seed)
    }

    pub fn jobs(&self, flag: Option<usize>) -> Result<Option<usize>, CliError> {
        match flag {
            Some(n) => Ok(Some(n)),
            None => match self.key("jobs") {
                None => Ok(None),
                Some(v) => v
                    .as_u64()
                    .map(|v| Some(v as usize))
                    .ok_or_else(|| CliError::Usage("config key \"jobs\" must be an integer".into())),
            },
        }
    }
}

/// Write via a temp file in the destination directory plus rename, so a
/// failed run never leaves a partial output behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let dir = dir.unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Data(format!("cannot create temp file in {}: {e}", dir.display())))?;
    std::io::Write::write_all(&mut tmp, contents)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::Data(format!("cannot persist {}: {e}", path.display())))?;
    Ok(())
}
