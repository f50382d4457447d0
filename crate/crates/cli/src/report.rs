//! Run records and atomic result files.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use varmax::sharp::ConstantCertificate;

use crate::CliError;

/// Provenance header embedded in every result file.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    pub started: String,
    pub finished: Option<String>,
    pub outputs: Vec<PathBuf>,
}

pub fn version_string() -> String {
    format!("varmax-v{}", env!("CARGO_PKG_VERSION"))
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl RunRecord {
    pub fn start(command: &str, argv: &[String], seed: Option<u64>) -> Self {
        Self {
            command: command.into(),
            argv: argv.to_vec(),
            seed,
            version: version_string(),
            started: now(),
            finished: None,
            outputs: Vec::new(),
        }
    }

    fn stamped(&self, path: &Path) -> Self {
        let mut r = self.clone();
        r.finished = Some(now());
        r.outputs.push(path.to_path_buf());
        r
    }

    /// `# key: value` lines for the top of a CSV file.
    fn comment_header(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# command: {}\n", self.command));
        s.push_str(&format!("# argv: {}\n", self.argv.join(" ")));
        if let Some(seed) = self.seed {
            s.push_str(&format!("# seed: {seed}\n"));
        }
        s.push_str(&format!("# version: {}\n", self.version));
        s.push_str(&format!("# started: {}\n", self.started));
        if let Some(f) = &self.finished {
            s.push_str(&format!("# finished: {f}\n"));
        }
        s
    }

    /// Writes `{"run": record, "result": value}`.
    pub fn write_json(&mut self, path: &Path, result: &impl Serialize) -> Result<(), CliError> {
        let rec = self.stamped(path);
        let doc = serde_json::json!({ "run": rec, "result": result });
        let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Compute(e.to_string()))?;
        text.push('\n');
        write_atomic(path, text.as_bytes())?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    /// Writes the record as comment lines followed by the table.
    pub fn write_csv(&mut self, path: &Path, table: &[u8]) -> Result<(), CliError> {
        let rec = self.stamped(path);
        let mut buf = rec.comment_header().into_bytes();
        buf.extend_from_slice(table);
        write_atomic(path, &buf)?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    pub fn write_plain(&mut self, path: &Path, body: &[u8]) -> Result<(), CliError> {
        write_atomic(path, body)?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }
}

/// Temp file in the target directory, then rename: readers never see a
/// partial file, and a failure leaves any previous file intact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub const CSV_COLUMNS: [&str; 9] =
    ["graph6", "n", "edges", "p", "value", "value_as_fraction", "mode", "extremizer", "regions_feasible"];

/// One row per certificate; failed rows carry the error in `mode`.
pub fn certificate_table<'a>(
    rows: impl IntoIterator<Item = (String, Result<&'a ConstantCertificate, &'a str>)>,
) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Compute(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(err)?;
    for (g6, row) in rows {
        match row {
            Ok(c) => w
                .write_record([
                    g6,
                    c.graph.order().to_string(),
                    c.graph.size().to_string(),
                    varmax::number::format_float(c.p),
                    c.value_string(),
                    c.value_as_fraction().unwrap_or_default(),
                    c.mode.as_str().to_string(),
                    c.extremizer.to_strings().join(" "),
                    c.stats.regions_feasible.to_string(),
                ])
                .map_err(err)?,
            Err(e) => w
                .write_record([g6, String::new(), String::new(), String::new(), String::new(), String::new(), format!("error: {e}"), String::new(), String::new()])
                .map_err(err)?,
        }
    }
    w.into_inner().map_err(|e| CliError::Compute(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use varmax::graph::named_graph;
    use varmax::sharp::{exact_constant_p1, ExactOptions};

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn failed_write_leaves_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("missing").join("a.txt");
        assert!(write_atomic(&p, b"x").is_err());
        assert!(!p.exists());
    }

    #[test]
    fn table_formats_exact_values() {
        let c = exact_constant_p1(&named_graph("K", &[3]).unwrap(), &ExactOptions::default()).unwrap();
        let t = String::from_utf8(certificate_table([("Bw".to_string(), Ok(&c))]).unwrap()).unwrap();
        let mut lines = t.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let row = lines.next().unwrap();
        assert!(row.starts_with("Bw,3,3,1,2/3,2/3,exact,"), "{row}");
    }
}
