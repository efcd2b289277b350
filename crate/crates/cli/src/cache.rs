//! Content-addressed store for expensive derived data (subgroup lattices,
//! tables of marks, canonical tables). Entries are addressed by the sha256
//! of a namespace and the canonical input text, and carry the sha256 of
//! their body so corrupt entries can be detected and recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const CACHE_ENV: &str = "BISETKIT_CACHE";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    sha256: String,
    body: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Cache {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: Some(dir.into()) }
    }

    /// $BISETKIT_CACHE, else $XDG_CACHE_HOME/bisetkit, else ~/.cache/bisetkit.
    pub fn default_dir() -> PathBuf {
        if let Some(d) = std::env::var_os(CACHE_ENV) {
            return d.into();
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Path::new(&d).join("bisetkit");
        }
        match std::env::var_os("HOME") {
            Some(h) => Path::new(&h).join(".cache").join("bisetkit"),
            None => PathBuf::from(".bisetkit-cache"),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn key(namespace: &str, input: &str) -> String {
        sha256_hex(format!("{namespace}\0{input}").as_bytes())
    }

    fn path(&self, namespace: &str, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(namespace).join(format!("{key}.json")))
    }

    fn read(path: &Path) -> Option<String> {
        let text = fs::read_to_string(path).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        (sha256_hex(e.body.as_bytes()) == e.sha256).then_some(e.body)
    }

    fn write(path: &Path, body: &str) -> Result<(), CliError> {
        let parent = path.parent().expect("entries live in a namespace directory");
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        let entry = Entry { sha256: sha256_hex(body.as_bytes()), body: body.to_owned() };
        let text = serde_json::to_string(&entry).expect("plain data serializes");
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, text).map_err(|e| CliError::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
    }

    /// The cached body for (namespace, input), computing and storing it on a
    /// miss. Unreadable or corrupt entries are removed and recomputed.
    pub fn get_or_compute(
        &self,
        namespace: &str,
        input: &str,
        compute: impl FnOnce() -> Result<String, CliError>,
    ) -> Result<String, CliError> {
        let Some(path) = self.path(namespace, &Self::key(namespace, input)) else {
            return compute();
        };
        if let Some(body) = Self::read(&path) {
            return Ok(body);
        }
        if path.exists() {
            let _ = fs::remove_file(&path);
        }
        let body = compute()?;
        Self::write(&path, &body)?;
        Ok(body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::Cell;

    #[test]
    fn hit_miss_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let calls = Cell::new(0);
        let compute = || {
            calls.set(calls.get() + 1);
            Ok("value\n".to_owned())
        };
        assert_eq!(cache.get_or_compute("ns", "in", compute).unwrap(), "value\n");
        assert_eq!(cache.get_or_compute("ns", "in", compute).unwrap(), "value\n");
        assert_eq!(calls.get(), 1);
        let path = cache.path("ns", &Cache::key("ns", "in")).unwrap();
        fs::write(&path, r#"{"sha256": "00", "body": "tampered"}"#).unwrap();
        assert_eq!(cache.get_or_compute("ns", "in", compute).unwrap(), "value\n");
        assert_eq!(calls.get(), 2);
        fs::write(&path, "not json").unwrap();
        assert_eq!(cache.get_or_compute("ns", "in", compute).unwrap(), "value\n");
        assert_eq!(calls.get(), 3);
        assert_eq!(Cache::read(&path).as_deref(), Some("value\n"));
    }

    #[test]
    fn disabled_always_computes() {
        let cache = Cache::disabled();
        let calls = Cell::new(0);
        for _ in 0..2 {
            cache
                .get_or_compute("ns", "in", || {
                    calls.set(calls.get() + 1);
                    Ok(String::new())
                })
                .unwrap();
        }
        assert_eq!(calls.get(), 2);
    }

    #[test]
    fn keys_separate_namespaces() {
        assert_ne!(Cache::key("a", "x"), Cache::key("b", "x"));
        assert_eq!(Cache::key("a", "x"), Cache::key("a", "x"));
    }
}
