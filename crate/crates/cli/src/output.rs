use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

/// Where command results go: files in an output directory, or stdout.
pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
        }
        Ok(Sink { dir })
    }

    pub fn has_dir(&self) -> bool {
        self.dir.is_some()
    }

    /// The command's main artifact: a file in the output directory, or stdout.
    pub fn primary(&self, name: &str, bytes: &[u8]) -> Result<()> {
        match &self.dir {
            Some(d) => write_atomic(&d.join(name), bytes),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
                Ok(())
            }
        }
    }

    /// Written only when an output directory is set.
    pub fn secondary(&self, name: &str, bytes: &[u8]) -> Result<()> {
        match &self.dir {
            Some(d) => write_atomic(&d.join(name), bytes),
            None => Ok(()),
        }
    }
}

/// Writes to a temporary file beside `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("writing {}", path.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn json_bytes<T: serde::Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}
