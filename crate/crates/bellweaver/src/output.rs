use std::fs;
use std::io::Write;
use std::path::Path;

use bellweaver_core::hom::ScanRecord;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::config::Meta;
use crate::error::{CliError, CliResult};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
}

pub fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

/// Writes `text` to `path`, or to `stdout` when no path is given.
pub fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.into(), source }),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

/// `x,rate` table with 17 significant digits, preceded by the provenance line.
pub fn scan_csv(meta: &Meta, records: &[ScanRecord]) -> String {
    let mut s = meta.comment_line();
    s.push_str("\nx,rate\n");
    for r in records {
        s.push_str(&format!("{:.16e},{:.16e}\n", r.x, r.rate));
    }
    s
}
