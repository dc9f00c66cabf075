//! CSV and JSON writers with a fixed, platform-independent number format.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use pswedge::Result;
use serde::Serialize;

/// Seventeen significant digits in scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn cplx(z: Complex64) -> [String; 2] {
    [num(z.re), num(z.im)]
}

/// Directory receiving the files of one run.
pub struct Output {
    dir: PathBuf,
}

impl Output {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    pub fn sub(&self, name: &str) -> Result<Self> {
        Self::new(&self.dir.join(name))
    }

    pub fn csv(&self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let path = self.dir.join(name);
        let mut text = header.join(",");
        text.push('\n');
        for row in rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
        fs::File::create(&path)?.write_all(text.as_bytes())?;
        Ok(())
    }

    pub fn json(&self, name: &str, value: &impl Serialize) -> Result<()> {
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
        text.push('\n');
        fs::File::create(&path)?.write_all(text.as_bytes())?;
        Ok(())
    }
}
