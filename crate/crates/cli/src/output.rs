//! Deterministic CSV and JSON writers plus index-ordered parallel mapping.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root)?;
        Ok(OutDir { root: root.to_path_buf() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    /// One header row from `header`, then one row per record.
    pub fn csv<R: Serialize>(&self, name: &str, header: &[&str], rows: &[R]) -> CliResult<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_path(self.path(name))?;
        w.write_record(header)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<()> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}

/// Applies `f` to `0..count` on `jobs` threads; results come back in index order.
pub fn map_indexed<T, F>(count: usize, jobs: usize, f: F) -> CliResult<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> CliResult<T> + Sync,
{
    if jobs <= 1 {
        return (0..count).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    pool.install(|| (0..count).into_par_iter().map(&f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_map_keeps_order() {
        let serial = map_indexed(50, 1, |i| Ok(i * i)).unwrap();
        let parallel = map_indexed(50, 4, |i| Ok(i * i)).unwrap();
        assert_eq!(serial, parallel);
        assert!(map_indexed(5, 3, |i| if i == 2 { Err(CliError::Runtime("x".into())) } else { Ok(i) }).is_err());
    }
}
