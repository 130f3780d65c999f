use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Fixed real formatting for CSV cells: 17 significant digits, enough to
/// round-trip any f64.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Collects fully rendered files and writes them at the end, each through a
/// temporary name, so a failing run never leaves partial outputs behind.
pub struct OutputSet {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl OutputSet {
    pub fn new(dir: &Path) -> Self {
        Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    pub fn add(&mut self, name: &str, content: String) {
        self.files.push((name.to_string(), content));
    }

    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn write_all(&self) -> Result<()> {
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating output directory {}", self.dir.display()))?;
        for (name, content) in &self.files {
            let target = self.dir.join(name);
            let tmp = self.dir.join(format!("{name}.tmp"));
            fs::write(&tmp, content).with_context(|| format!("writing {}", tmp.display()))?;
            fs::rename(&tmp, &target)
                .with_context(|| format!("renaming into {}", target.display()))?;
        }
        Ok(())
    }
}
