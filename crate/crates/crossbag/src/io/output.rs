//! Bag serialization: ARFF, semicolon CSV, and sparse LIBSVM.
//!
//! Numbers are rendered with the shortest decimal representation that parses
//! back to the same value, so written files reload bit-exactly.

use std::path::Path;

use crate::dataset::Bag;
use crate::error::{Error, Result};
use crate::io::render_row;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Arff,
    Csv,
    Libsvm,
}

impl OutputFormat {
    /// Pick the format from the output file extension.
    pub fn from_path(path: &Path) -> Result<OutputFormat> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref()
        {
            Some("arff") => Ok(OutputFormat::Arff),
            Some("csv") => Ok(OutputFormat::Csv),
            Some("libsvm") => Ok(OutputFormat::Libsvm),
            other => Err(Error::usage(format!(
                "output format is chosen by extension (.arff, .csv, or .libsvm); \
                 got \"{}\"",
                other.unwrap_or("")
            ))),
        }
    }
}

fn check_bags(bags: &[Bag]) -> Result<usize> {
    let first = bags
        .first()
        .ok_or_else(|| Error::data("nothing to write: no bags were produced"))?;
    let len = first.tf.len();
    for bag in bags {
        if bag.tf.len() != len {
            return Err(Error::data(format!(
                "inconsistent bag lengths: \"{}\" has {} entries, expected {len}",
                bag.name,
                bag.tf.len()
            )));
        }
    }
    Ok(len)
}

fn quote_arff(value: &str) -> String {
    format!("'{}'", value.replace('\\', "\\\\").replace('\'', "\\'"))
}

fn all_labels_numeric(bags: &[Bag]) -> bool {
    bags.iter()
        .filter_map(|b| b.label.as_deref())
        .all(|l| l.trim().parse::<f64>().is_ok())
}

/// Distinct labels in first-appearance order.
fn label_values(bags: &[Bag]) -> Vec<String> {
    let mut values: Vec<String> = Vec::new();
    for bag in bags {
        if let Some(label) = &bag.label {
            if !values.contains(label) {
                values.push(label.clone());
            }
        }
    }
    values
}

/// Serialize bags to the chosen format. Column order is the name (when any
/// bag carries one), the tf entries, and the label last.
pub fn render_bags(bags: &[Bag], format: OutputFormat) -> Result<String> {
    let tf_len = check_bags(bags)?;
    let with_name = bags.iter().any(|b| !b.name.is_empty());
    let with_label = bags.iter().any(|b| b.label.is_some());
    let mut out = String::new();
    match format {
        OutputFormat::Arff => {
            out.push_str("@relation bags\n");
            if with_name {
                out.push_str("@attribute name string\n");
            }
            for i in 0..tf_len {
                out.push_str(&format!("@attribute tf_{i} numeric\n"));
            }
            if with_label {
                if all_labels_numeric(bags) {
                    out.push_str("@attribute label numeric\n");
                } else {
                    let values: Vec<String> = label_values(bags)
                        .iter()
                        .map(|v| quote_arff(v))
                        .collect();
                    out.push_str(&format!("@attribute label {{{}}}\n", values.join(",")));
                }
            }
            out.push_str("@data\n");
            let numeric_labels = all_labels_numeric(bags);
            for bag in bags {
                let mut fields = Vec::with_capacity(tf_len + 2);
                if with_name {
                    fields.push(quote_arff(&bag.name));
                }
                fields.extend(bag.tf.iter().map(|v| v.to_string()));
                if with_label {
                    fields.push(match &bag.label {
                        Some(l) if numeric_labels => l.clone(),
                        Some(l) => quote_arff(l),
                        None => "?".to_string(),
                    });
                }
                out.push_str(&fields.join(","));
                out.push('\n');
            }
        }
        OutputFormat::Csv => {
            for bag in bags {
                let mut fields = Vec::with_capacity(tf_len + 2);
                if with_name {
                    fields.push(bag.name.clone());
                }
                fields.extend(bag.tf.iter().map(|v| v.to_string()));
                if with_label {
                    fields.push(bag.label.clone().unwrap_or_default());
                }
                out.push_str(&render_row(&fields, ';'));
                out.push('\n');
            }
        }
        OutputFormat::Libsvm => {
            // LIBSVM wants numeric targets: numeric labels pass through
            // verbatim, nominal labels map to 0,1,2.. by first appearance.
            let numeric_labels = all_labels_numeric(bags);
            let values = label_values(bags);
            for bag in bags {
                let label = match &bag.label {
                    Some(l) if numeric_labels => l.clone(),
                    Some(l) => values.iter().position(|v| v == l).unwrap().to_string(),
                    None => "0".to_string(),
                };
                out.push_str(&label);
                for (i, &v) in bag.tf.iter().enumerate() {
                    if v != 0.0 {
                        out.push_str(&format!(" {}:{}", i + 1, v));
                    }
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

/// Serialize and write bags in one step. The file is only created once the
/// whole serialization has succeeded.
pub fn write_bags(bags: &[Bag], format: OutputFormat, path: &Path) -> Result<()> {
    let content = render_bags(bags, format)?;
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}
