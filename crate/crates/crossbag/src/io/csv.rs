//! Semicolon-separated input files.

use std::path::Path;

use crate::attributes::AttributeSpec;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::io::{frames_from_rows, looks_like_header, split_fields};

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Read a semicolon CSV with the given column roles. A single leading header
/// row is skipped automatically when its time or numeric fields do not parse
/// as numbers.
pub fn read_csv(path: &Path, spec: &AttributeSpec) -> Result<Dataset> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let source = file_name(path);
    let mut rows = Vec::new();
    for (idx, raw) in content.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            continue;
        }
        let fields = split_fields(line, ';')
            .map_err(|e| Error::data(format!("{source} line {}: {e}", idx + 1)))?;
        rows.push((idx + 1, fields));
    }
    if let Some((_, first)) = rows.first() {
        if looks_like_header(first, spec) {
            rows.remove(0);
        }
    }
    let frames = frames_from_rows(rows.into_iter(), spec, &source)?;
    Dataset::from_frames(frames)
}

/// Read a semicolon CSV, deriving the default column layout from the first
/// row when no explicit spec is given.
pub fn read_csv_auto(path: &Path, spec: Option<&AttributeSpec>) -> Result<Dataset> {
    match spec {
        Some(spec) => read_csv(path, spec),
        None => {
            let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let first = content
                .lines()
                .map(|l| l.strip_suffix('\r').unwrap_or(l))
                .find(|l| !l.is_empty())
                .ok_or_else(|| Error::data(format!("{}: empty input file", file_name(path))))?;
            let columns = split_fields(first, ';')?.len();
            let spec = AttributeSpec::default_for_columns(columns)?;
            read_csv(path, &spec)
        }
    }
}
