//! Labels files: semicolon CSV `name;time;label`, or `name;label` for
//! non-windowed data. A header row is optional.

use std::path::Path;

use crate::dataset::LabelTable;
use crate::error::{Error, Result};
use crate::io::split_fields;

/// Read a labels file into a table keyed by (name, time). All rows must have
/// the same arity: 3 columns keyed by name and millisecond-quantized time,
/// or 2 columns keyed by name alone.
pub fn read_labels(path: &Path) -> Result<LabelTable> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let source = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());

    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for (idx, raw) in content.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            continue;
        }
        let fields = split_fields(line, ';')
            .map_err(|e| Error::data(format!("{source} line {}: {e}", idx + 1)))?;
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::data(format!(
                "{source} line {}: expected name;time;label or name;label, \
                 found {} fields",
                idx + 1,
                fields.len()
            )));
        }
        rows.push((idx + 1, fields));
    }

    let mut table = LabelTable::new();
    let Some((_, first)) = rows.first() else {
        return Ok(table);
    };
    let arity = first.len();
    // Header detection: a 3-column first row whose time field is not a
    // number, or a 2-column first row whose first field reads "name".
    let skip_header = match arity {
        3 => first[1].trim().parse::<f64>().is_err(),
        _ => first[0].trim().eq_ignore_ascii_case("name"),
    };
    for (line_no, fields) in rows.into_iter().skip(skip_header as usize) {
        if fields.len() != arity {
            return Err(Error::data(format!(
                "{source} line {line_no}: expected {arity} fields, found {}",
                fields.len()
            )));
        }
        let (name, time, label) = match arity {
            3 => {
                let t: f64 = fields[1].trim().parse().map_err(|_| {
                    Error::data(format!(
                        "{source} line {line_no}: invalid time \"{}\"",
                        fields[1]
                    ))
                })?;
                (&fields[0], Some(t), fields[2].clone())
            }
            _ => (&fields[0], None, fields[1].clone()),
        };
        table
            .insert(name, time, label)
            .map_err(|e| e.in_stage(&format!("{source} line {line_no}")))?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn timed_rows() {
        let f = write_tmp("A;0.0;0.1\nA;0.8;0.2\n");
        let table = read_labels(f.path()).unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table.get("A", Some(0.8)), Some("0.2"));
    }

    #[test]
    fn duplicate_key_errors() {
        let f = write_tmp("A;0.0;0.1\nA;0.0;0.2\n");
        let err = read_labels(f.path()).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn empty_file_is_empty_table() {
        let f = write_tmp("");
        assert!(read_labels(f.path()).unwrap().is_empty());
    }

    #[test]
    fn malformed_time_errors() {
        let f = write_tmp("A;zero;0.1\nA;0.8;0.2\n");
        // First row is taken as a header; a later malformed time must error.
        let f2 = write_tmp("A;0.0;0.1\nA;bad;0.2\n");
        assert_eq!(read_labels(f.path()).unwrap().len(), 1);
        let err = read_labels(f2.path()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn name_only_rows() {
        let f = write_tmp("name;label\nA;pos\nB;neg\n");
        let table = read_labels(f.path()).unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table.get("A", None), Some("pos"));
        assert_eq!(table.get("B", None), Some("neg"));
    }

    #[test]
    fn wrong_arity_errors() {
        let f = write_tmp("A;0.0;x;extra\n");
        assert!(read_labels(f.path()).is_err());
        let mixed = write_tmp("A;0.0;x\nB;pos\n");
        assert!(read_labels(mixed.path()).is_err());
    }
}
