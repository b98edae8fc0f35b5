//! On-disk cache of enumeration levels.
//!
//! Layout: `<dir>/manifest.json` plus one file per alphabet and length,
//! `<dir>/<a>,<b>/<length>.txt`, holding one canonical word per line. The
//! cache is advisory: missing, stale or damaged files are recomputed.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use smoothwords::census::LevelCache;
use smoothwords::{Alphabet, Word};

const TOOL: &str = "smoothwords";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
struct Manifest {
    tool: String,
    version: String,
}

impl Manifest {
    fn current() -> Self {
        Manifest {
            tool: TOOL.into(),
            version: VERSION.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    /// Opens (creating if needed) a cache rooted at `dir`. Level files left
    /// by another tool version are discarded.
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let manifest_path = dir.join("manifest.json");
        let current = Manifest::current();
        let existing = fs::read_to_string(&manifest_path)
            .ok()
            .and_then(|s| serde_json::from_str::<Manifest>(&s).ok());
        if existing.as_ref() != Some(&current) {
            if existing.is_some() {
                clear_levels(&dir)?;
            }
            let text = serde_json::to_string_pretty(&current).map_err(io::Error::other)?;
            write_atomic(&manifest_path, text.as_bytes())?;
        }
        Ok(DiskCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn level_path(&self, ab: Alphabet, length: usize) -> PathBuf {
        self.dir.join(ab.to_string()).join(format!("{length}.txt"))
    }
}

/// Removes alphabet directories (named `a,b`) and nothing else.
fn clear_levels(dir: &Path) -> io::Result<()> {
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name();
        let is_alphabet = name.to_str().is_some_and(|n| n.parse::<Alphabet>().is_ok());
        if is_alphabet && entry.file_type()?.is_dir() {
            fs::remove_dir_all(entry.path())?;
        }
    }
    Ok(())
}

fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension(format!("tmp-{}", std::process::id()));
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)
}

impl LevelCache for DiskCache {
    fn load(&self, ab: Alphabet, length: usize) -> Option<Vec<Word>> {
        let text = fs::read_to_string(self.level_path(ab, length)).ok()?;
        let words: Vec<Word> = text
            .lines()
            .map(|line| line.parse::<Word>().ok())
            .collect::<Option<_>>()?;
        let valid = words
            .iter()
            .all(|w| w.len() == length && ab.check(w).is_ok())
            && words.windows(2).all(|p| p[0] < p[1]);
        valid.then_some(words)
    }

    fn store(&self, ab: Alphabet, length: usize, words: &[Word]) {
        let path = self.level_path(ab, length);
        let mut text = String::with_capacity(words.len() * (2 * length + 1));
        for w in words {
            text.push_str(&w.to_canonical_string());
            text.push('\n');
        }
        // Failing to write the cache only costs a recomputation later.
        let _ = path
            .parent()
            .map_or(Ok(()), fs::create_dir_all)
            .and_then(|()| write_atomic(&path, text.as_bytes()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use smoothwords::census::SmoothEnumerator;

    fn scratch(name: &str) -> PathBuf {
        let dir =
            std::env::temp_dir().join(format!("smoothwords-cache-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        dir
    }

    #[test]
    fn levels_round_trip_through_disk() {
        let dir = scratch("roundtrip");
        let ab = Alphabet::new(1, 3).unwrap();
        let cold = SmoothEnumerator::with_cache(ab, Box::new(DiskCache::open(&dir).unwrap()))
            .words_up_to(9);
        assert!(dir.join("1,3").join("9.txt").exists());
        let warm = SmoothEnumerator::with_cache(ab, Box::new(DiskCache::open(&dir).unwrap()))
            .words_up_to(9);
        assert_eq!(cold, warm);
        assert_eq!(cold, SmoothEnumerator::new(ab).words_up_to(9));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn damaged_files_are_ignored() {
        let dir = scratch("damaged");
        let ab = Alphabet::new(1, 2).unwrap();
        let cache = DiskCache::open(&dir).unwrap();
        cache.store(ab, 3, &["111".parse().unwrap()]);
        // sorted and well-formed but the wrong length
        fs::write(cache.level_path(ab, 2), "1,2,1\n").unwrap();
        assert!(cache.load(ab, 2).is_none());
        fs::write(cache.level_path(ab, 2), "2,2\n1,1\n").unwrap();
        assert!(cache.load(ab, 2).is_none());
        fs::write(cache.level_path(ab, 2), "garbage\n").unwrap();
        assert!(cache.load(ab, 2).is_none());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn stale_manifest_clears_levels() {
        let dir = scratch("stale");
        let ab = Alphabet::new(1, 2).unwrap();
        let cache = DiskCache::open(&dir).unwrap();
        cache.store(ab, 1, &["1".parse().unwrap(), "2".parse().unwrap()]);
        fs::write(dir.join("notes.txt"), "keep me").unwrap();
        fs::write(
            dir.join("manifest.json"),
            r#"{"tool":"smoothwords","version":"0.0.0"}"#,
        )
        .unwrap();
        let cache = DiskCache::open(&dir).unwrap();
        assert!(cache.load(ab, 1).is_none());
        assert!(dir.join("notes.txt").exists());
        fs::remove_dir_all(&dir).unwrap();
    }
}
