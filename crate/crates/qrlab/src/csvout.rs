use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;

/// Formats a float with 17 significant digits, enough to round-trip f64
/// bit-exactly, with '.' as the decimal separator.
pub fn fmt_f64(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        // keep integers readable
        format!("{x:.1}")
    } else {
        format!("{x:.16e}")
    }
}

/// A CSV table with a provenance comment line; newline endings are '\n' and
/// the content carries no timestamps, so identical runs are byte-identical.
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.header.len(), "ragged CSV row");
        self.rows.push(cells);
    }

    pub fn render(&self, config_hash: &str, seed: u64) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# config_hash={config_hash} seed={seed}");
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn write(
        &self,
        path: &Path,
        config_hash: &str,
        seed: u64,
    ) -> anyhow::Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)
                .with_context(|| format!("creating {}", dir.display()))?;
        }
        fs::write(path, self.render(config_hash, seed))
            .with_context(|| format!("writing {}", path.display()))
    }
}

/// Short hex digest of the canonical config serialization.
pub fn config_hash(canonical_json: &str) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(canonical_json.as_bytes());
    let digest = h.finalize();
    let mut out = String::new();
    for b in digest.iter().take(8) {
        let _ = write!(out, "{b:02x}");
    }
    out
}
