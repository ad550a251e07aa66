//! ARFF reading: the @relation/@attribute/@data subset with numeric, string,
//! and nominal attribute types.

use std::path::Path;

use crate::attributes::{AttributeSpec, ColumnRole};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::io::frames_from_rows;

#[derive(Debug, Clone, PartialEq)]
pub enum ArffType {
    Numeric,
    Str,
    Nominal(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArffAttribute {
    pub name: String,
    pub ty: ArffType,
}

struct ParsedArff {
    attributes: Vec<ArffAttribute>,
    rows: Vec<(usize, Vec<String>)>,
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Strip surrounding single or double quotes and resolve backslash escapes.
fn unquote(token: &str) -> String {
    let token = token.trim();
    let bytes = token.as_bytes();
    if bytes.len() >= 2 && (bytes[0] == b'\'' || bytes[0] == b'"') && bytes[bytes.len() - 1] == bytes[0]
    {
        let inner = &token[1..token.len() - 1];
        let mut out = String::with_capacity(inner.len());
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            if c == '\\' {
                if let Some(next) = chars.next() {
                    out.push(next);
                }
            } else {
                out.push(c);
            }
        }
        out
    } else {
        token.to_string()
    }
}

/// Split a data row on commas, honoring single/double quotes with backslash
/// escapes inside them.
fn split_data_row(line: &str) -> Result<Vec<String>> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quote: Option<char> = None;
    let mut chars = line.chars();
    while let Some(c) = chars.next() {
        match quote {
            Some(q) => {
                if c == '\\' {
                    if let Some(next) = chars.next() {
                        cur.push(next);
                    }
                } else if c == q {
                    quote = None;
                } else {
                    cur.push(c);
                }
            }
            None => {
                if c == '\'' || c == '"' {
                    quote = Some(c);
                } else if c == ',' {
                    fields.push(std::mem::take(&mut cur).trim().to_string());
                } else {
                    cur.push(c);
                }
            }
        }
    }
    if quote.is_some() {
        return Err(Error::data("unterminated quote"));
    }
    fields.push(std::mem::take(&mut cur).trim().to_string());
    Ok(fields)
}

fn parse_arff(path: &Path) -> Result<ParsedArff> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let source = file_name(path);
    let mut attributes = Vec::new();
    let mut rows = Vec::new();
    let mut in_data = false;
    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !in_data {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                continue;
            } else if lower.starts_with("@attribute") {
                let rest = line["@attribute".len()..].trim();
                // Attribute name may be quoted and contain spaces.
                let (name_token, type_token) = if rest.starts_with('\'') || rest.starts_with('"') {
                    let q = rest.chars().next().unwrap();
                    let close = rest[1..].find(q).ok_or_else(|| {
                        Error::data(format!("{source} line {line_no}: unterminated quote"))
                    })? + 1;
                    (&rest[..=close], rest[close + 1..].trim())
                } else {
                    let split = rest.find(char::is_whitespace).ok_or_else(|| {
                        Error::data(format!(
                            "{source} line {line_no}: attribute declaration without a type"
                        ))
                    })?;
                    (&rest[..split], rest[split..].trim())
                };
                let name = unquote(name_token);
                let ty_lower = type_token.to_ascii_lowercase();
                let ty = if type_token.starts_with('{') {
                    let inner = type_token
                        .strip_prefix('{')
                        .and_then(|s| s.strip_suffix('}'))
                        .ok_or_else(|| {
                            Error::data(format!(
                                "{source} line {line_no}: malformed nominal specification"
                            ))
                        })?;
                    let values = split_data_row(inner)?
                        .into_iter()
                        .map(|v| unquote(&v))
                        .collect();
                    ArffType::Nominal(values)
                } else if ty_lower == "numeric" || ty_lower == "real" || ty_lower == "integer" {
                    ArffType::Numeric
                } else if ty_lower == "string" {
                    ArffType::Str
                } else {
                    return Err(Error::data(format!(
                        "{source} line {line_no}: unsupported attribute type \"{type_token}\""
                    )));
                };
                attributes.push(ArffAttribute { name, ty });
            } else if lower.starts_with("@data") {
                in_data = true;
            } else {
                return Err(Error::data(format!(
                    "{source} line {line_no}: unexpected directive \"{line}\""
                )));
            }
        } else {
            let fields = split_data_row(line)
                .map_err(|e| Error::data(format!("{source} line {line_no}: {e}")))?;
            if fields.len() != attributes.len() {
                return Err(Error::data(format!(
                    "{source} line {line_no}: expected {} fields, found {}",
                    attributes.len(),
                    fields.len()
                )));
            }
            rows.push((line_no, fields.into_iter().map(|f| unquote(&f)).collect()));
        }
    }
    if !in_data {
        return Err(Error::data(format!("{source}: missing @data section")));
    }
    if attributes.is_empty() {
        return Err(Error::data(format!("{source}: no @attribute declarations")));
    }
    Ok(ParsedArff { attributes, rows })
}

/// Infer column roles from attribute names and types: string/nominal "name"
/// becomes the name, numeric "time"/"frameTime" the time, attributes called
/// "class"/"label" and nominal attributes the label, other string attributes
/// text, and numeric attributes feature class 1.
fn infer_roles(attributes: &[ArffAttribute]) -> Result<AttributeSpec> {
    let mut roles = Vec::with_capacity(attributes.len());
    let mut have_label = false;
    for attr in attributes {
        let lower = attr.name.to_ascii_lowercase();
        let role = match &attr.ty {
            ArffType::Numeric => {
                if lower == "time" || lower == "frametime" {
                    ColumnRole::Time
                } else if (lower == "class" || lower == "label") && !have_label {
                    ColumnRole::Label
                } else {
                    ColumnRole::Numeric(1)
                }
            }
            ArffType::Str => {
                if lower == "name" {
                    ColumnRole::Name
                } else if (lower == "class" || lower == "label") && !have_label {
                    ColumnRole::Label
                } else {
                    ColumnRole::Text
                }
            }
            ArffType::Nominal(_) => {
                if lower == "name" {
                    ColumnRole::Name
                } else {
                    ColumnRole::Label
                }
            }
        };
        if role == ColumnRole::Label {
            have_label = true;
        }
        roles.push(role);
    }
    AttributeSpec::new(roles)
}

/// Read an ARFF file, inferring the column roles from the declarations.
pub fn read_arff(path: &Path) -> Result<(Dataset, AttributeSpec)> {
    let parsed = parse_arff(path)?;
    let spec = infer_roles(&parsed.attributes)?;
    let frames = frames_from_rows(parsed.rows.into_iter(), &spec, &file_name(path))?;
    Ok((Dataset::from_frames(frames)?, spec))
}

/// Read an ARFF file applying an explicit role spec positionally to the
/// declared attributes.
pub fn read_arff_with_spec(path: &Path, spec: &AttributeSpec) -> Result<Dataset> {
    let parsed = parse_arff(path)?;
    if parsed.attributes.len() != spec.column_count() {
        return Err(Error::data(format!(
            "{}: attribute spec covers {} columns but the file declares {}",
            file_name(path),
            spec.column_count(),
            parsed.attributes.len()
        )));
    }
    let frames = frames_from_rows(parsed.rows.into_iter(), spec, &file_name(path))?;
    Dataset::from_frames(frames)
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
    fn reads_basic_file() {
        let f = write_tmp(
            "@relation test\n\
             @attribute name string\n\
             @attribute f1 numeric\n\
             @attribute f2 numeric\n\
             @data\n\
             'A',0.5,1.5\n",
        );
        let (ds, spec) = read_arff(f.path()).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.frames()[0].name, "A");
        assert_eq!(ds.frames()[0].numeric[&1], vec![0.5, 1.5]);
        assert!(spec.has_name());
        assert_eq!(spec.numeric_classes(), vec![1]);
    }

    #[test]
    fn zero_rows_is_empty_dataset() {
        let f = write_tmp(
            "@relation empty\n\
             @attribute name string\n\
             @attribute f1 numeric\n\
             @data\n",
        );
        let (ds, spec) = read_arff(f.path()).unwrap();
        assert!(ds.is_empty());
        assert_eq!(spec.column_count(), 2);
    }

    #[test]
    fn missing_data_section_errors() {
        let f = write_tmp("@relation x\n@attribute f1 numeric\n");
        let err = read_arff(f.path()).unwrap_err();
        assert!(err.to_string().contains("@data"), "{err}");
    }

    #[test]
    fn arity_mismatch_errors() {
        let f = write_tmp(
            "@relation x\n\
             @attribute f1 numeric\n\
             @attribute f2 numeric\n\
             @data\n\
             1.0\n",
        );
        let err = read_arff(f.path()).unwrap_err();
        assert!(err.to_string().contains("line 5"), "{err}");
    }

    #[test]
    fn infers_time_label_and_text() {
        let f = write_tmp(
            "@relation x\n\
             @attribute name string\n\
             @attribute frameTime numeric\n\
             @attribute f1 numeric\n\
             @attribute utterance string\n\
             @attribute class {pos,neg}\n\
             @data\n\
             'A',0.25,3.5,'hello there',pos\n",
        );
        let (ds, spec) = read_arff(f.path()).unwrap();
        assert!(spec.has_time() && spec.has_label() && spec.has_text());
        let frame = &ds.frames()[0];
        assert_eq!(frame.time, Some(0.25));
        assert_eq!(frame.label.as_deref(), Some("pos"));
        assert_eq!(frame.text.as_deref(), Some("hello there"));
    }

    #[test]
    fn explicit_spec_overrides_inference() {
        let f = write_tmp(
            "@relation x\n\
             @attribute name string\n\
             @attribute a numeric\n\
             @attribute b numeric\n\
             @data\n\
             'A',1.0,2.0\n",
        );
        let spec = AttributeSpec::parse("n12").unwrap();
        let ds = read_arff_with_spec(f.path(), &spec).unwrap();
        assert_eq!(ds.frames()[0].numeric[&1], vec![1.0]);
        assert_eq!(ds.frames()[0].numeric[&2], vec![2.0]);

        let narrow = AttributeSpec::parse("n1").unwrap();
        assert!(read_arff_with_spec(f.path(), &narrow).is_err());
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let f = write_tmp(
            "% header comment\n\
             @relation x\n\n\
             @attribute f1 numeric\n\
             @data\n\
             % data comment\n\
             1.5\n\n\
             2.5\n",
        );
        let (ds, _) = read_arff(f.path()).unwrap();
        assert_eq!(ds.len(), 2);
    }

    #[test]
    fn escaped_quotes_in_values() {
        let f = write_tmp(
            "@relation x\n\
             @attribute name string\n\
             @attribute f1 numeric\n\
             @data\n\
             'it\\'s A',1.0\n",
        );
        let (ds, _) = read_arff(f.path()).unwrap();
        assert_eq!(ds.frames()[0].name, "it's A");
    }
}
