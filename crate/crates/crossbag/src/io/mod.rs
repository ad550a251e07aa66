//! Parsers and writers for every external file format: delimited input,
//! ARFF, labels files, bag output (ARFF/CSV/LIBSVM), and the codebook file.

pub mod arff;
pub mod codebook_file;
pub mod csv;
pub mod labels;
pub mod output;

pub use arff::{read_arff, read_arff_with_spec};
pub use codebook_file::{load_codebook, save_codebook};
pub use csv::read_csv;
pub use labels::read_labels;
pub use output::{write_bags, OutputFormat};

use crate::attributes::{AttributeSpec, ColumnRole};
use crate::dataset::Frame;
use crate::error::{Error, Result};

/// Split one line on `sep`, honoring double-quoted fields with doubled-quote
/// escapes (`"a;b""c"` is the field `a;b"c`).
pub fn split_fields(line: &str, sep: char) -> Result<Vec<String>> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        if in_quotes {
            if c == '"' {
                if chars.peek() == Some(&'"') {
                    cur.push('"');
                    chars.next();
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push(c);
            }
        } else if c == '"' {
            in_quotes = true;
        } else if c == sep {
            fields.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    if in_quotes {
        return Err(Error::data("unterminated quote"));
    }
    fields.push(cur);
    Ok(fields)
}

/// Render a field, quoting it when it contains the separator, a quote, or a
/// line break.
pub fn render_field(field: &str, sep: char) -> String {
    if field.contains(sep) || field.contains('"') || field.contains('\n') || field.contains('\r') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn render_row(fields: &[String], sep: char) -> String {
    fields
        .iter()
        .map(|f| render_field(f, sep))
        .collect::<Vec<_>>()
        .join(&sep.to_string())
}

/// Turn raw rows into frames according to the column roles. Rows without a
/// name column become one instance each, named by their 1-based row number.
pub(crate) fn frames_from_rows(
    rows: impl Iterator<Item = (usize, Vec<String>)>,
    spec: &AttributeSpec,
    source: &str,
) -> Result<Vec<Frame>> {
    let mut frames = Vec::new();
    let mut row_counter = 0usize;
    for (line_no, fields) in rows {
        row_counter += 1;
        if fields.len() != spec.column_count() {
            return Err(Error::data(format!(
                "{source} line {line_no}: expected {} fields, found {}",
                spec.column_count(),
                fields.len()
            )));
        }
        let mut frame = Frame {
            name: String::new(),
            time: None,
            label: None,
            numeric: Default::default(),
            text: None,
        };
        let mut has_name = false;
        for (col, (role, field)) in spec.roles().iter().zip(&fields).enumerate() {
            match role {
                ColumnRole::Name => {
                    frame.name = field.clone();
                    has_name = true;
                }
                ColumnRole::Time => {
                    let t: f64 = field.trim().parse().map_err(|_| {
                        Error::data(format!(
                            "{source} line {line_no} column {}: invalid time \"{field}\"",
                            col + 1
                        ))
                    })?;
                    frame.time = Some(t);
                }
                ColumnRole::Label => frame.label = Some(field.clone()),
                ColumnRole::Remove => {}
                ColumnRole::Text => frame.text = Some(field.clone()),
                ColumnRole::Numeric(class) => {
                    let x: f64 = field.trim().parse().map_err(|_| {
                        Error::data(format!(
                            "{source} line {line_no} column {}: invalid numeric \
                             value \"{field}\"",
                            col + 1
                        ))
                    })?;
                    frame.numeric.entry(*class).or_default().push(x);
                }
            }
        }
        if !has_name {
            frame.name = row_counter.to_string();
        }
        frames.push(frame);
    }
    Ok(frames)
}

/// True when `fields` cannot be a data row for `spec` because a time or
/// numeric column fails to parse; used to auto-detect a header row.
pub(crate) fn looks_like_header(fields: &[String], spec: &AttributeSpec) -> bool {
    if fields.len() != spec.column_count() {
        return false;
    }
    spec.roles()
        .iter()
        .zip(fields)
        .any(|(role, field)| match role {
            ColumnRole::Time | ColumnRole::Numeric(_) => field.trim().parse::<f64>().is_err(),
            _ => false,
        })
}
