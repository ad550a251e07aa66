//! Codebook file: a versioned, line-oriented UTF-8 format holding everything
//! an apply-mode run needs — scaling parameters, weighting flags with the
//! document-frequency table, the per-feature-class codebook matrices (flat or
//! SVQ), and the text dictionary. Numbers use shortest round-trip decimals,
//! so a saved codebook reloads bit-exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::bagging::text::{Dictionary, TextConfig};
use crate::codebook::{
    ClassBoundary, Codebook, GenerationMethod, NumericCodebook, SubCodebook, SvqStructure,
};
use crate::error::{Error, Result};
use crate::postprocess::WeightingState;
use crate::preprocess::{ClassScaling, ScalingMode, ScalingParams};

const VERSION_LINE: &str = "crossbag codebook v1";

fn join_f64(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_matrix(out: &mut String, cb: &SubCodebook) {
    let _ = writeln!(out, "method {}", cb.method.as_str());
    let _ = writeln!(out, "size {}", cb.size());
    let _ = writeln!(out, "dim {}", cb.dim());
    if let Some(bounds) = &cb.class_boundaries {
        for b in bounds {
            let _ = writeln!(out, "boundary {} {} {}", b.start, b.count, b.label);
        }
    }
    for row in &cb.centroids {
        out.push_str(&join_f64(row));
        out.push('\n');
    }
}

/// Serialize a trained codebook bundle.
pub fn render_codebook(cb: &Codebook) -> String {
    let mut out = String::new();
    out.push_str(VERSION_LINE);
    out.push('\n');

    out.push_str("[scaling]\n");
    let _ = writeln!(out, "mode {}", cb.scaling.mode.as_str());
    if cb.scaling.mode != ScalingMode::None {
        for (class, cs) in &cb.scaling.per_class {
            let _ = writeln!(out, "class {class}");
            let _ = writeln!(out, "offset {}", join_f64(&cs.offset));
            let _ = writeln!(out, "scale {}", join_f64(&cs.scale));
        }
    }

    out.push_str("[weighting]\n");
    let _ = writeln!(out, "log {}", cb.weighting.log_flag);
    let _ = writeln!(out, "idf {}", cb.weighting.idf_flag);
    if cb.weighting.idf_flag {
        let _ = writeln!(out, "n {}", cb.weighting.n);
        let df: Vec<String> = cb.weighting.df.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "df {}", df.join(" "));
    }

    for (class, numeric) in &cb.numeric {
        match numeric {
            NumericCodebook::Flat(sub) => {
                let _ = writeln!(out, "[numeric {class}]");
                write_matrix(&mut out, sub);
            }
            NumericCodebook::Svq(svq) => {
                let _ = writeln!(out, "[svq {class}]");
                let _ = writeln!(out, "blocks {}", svq.block_count());
                let dims: Vec<String> = svq.block_dims.iter().map(|d| d.to_string()).collect();
                let _ = writeln!(out, "dims {}", dims.join(" "));
                for (i, block) in svq.block_codebooks.iter().enumerate() {
                    let _ = writeln!(out, "block {i}");
                    write_matrix(&mut out, block);
                }
                out.push_str("top\n");
                write_matrix(&mut out, &svq.top_codebook);
            }
        }
    }

    if let Some(dict) = &cb.dictionary {
        out.push_str("[dictionary]\n");
        let _ = writeln!(out, "ngram {}", cb.text_settings.n_gram);
        let _ = writeln!(out, "nchargram {}", cb.text_settings.n_char_gram);
        let _ = writeln!(out, "minterm {}", cb.text_settings.min_term_freq);
        let _ = writeln!(out, "maxterm {}", cb.text_settings.max_term_freq);
        let _ = writeln!(out, "size {}", dict.len());
        for term in dict.terms() {
            let _ = writeln!(out, "term {term}");
        }
    }

    out.push_str("[end]\n");
    out
}

pub fn save_codebook(cb: &Codebook, path: &Path) -> Result<()> {
    std::fs::write(path, render_codebook(cb)).map_err(|e| Error::io(path, e))
}

struct Cursor<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(content: &'a str) -> Cursor<'a> {
        Cursor {
            lines: content
                .lines()
                .map(|l| l.strip_suffix('\r').unwrap_or(l))
                .collect(),
            pos: 0,
        }
    }

    fn next(&mut self) -> Result<&'a str> {
        let line = self
            .lines
            .get(self.pos)
            .ok_or_else(|| Error::data("codebook file: unexpected end of file"))?;
        self.pos += 1;
        Ok(line)
    }

    fn line_no(&self) -> usize {
        self.pos
    }

    /// Consume a `key value` line and return the value.
    fn key(&mut self, key: &str) -> Result<&'a str> {
        let line = self.next()?;
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' ').or(Some(rest).filter(|r| r.is_empty())))
            .ok_or_else(|| {
                Error::data(format!(
                    "codebook file line {}: expected \"{key} ...\", found \"{line}\"",
                    self.pos
                ))
            })
    }

    /// Consume a `key value` line and parse the value.
    fn key_parse<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Result<T> {
        let value = self.key(key)?;
        parse_at(self.pos, value, what)
    }

    /// Consume a `key v v v ...` line and parse the values.
    fn key_parse_vec<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Result<Vec<T>> {
        let value = self.key(key)?;
        parse_vec_at(self.pos, value, what)
    }
}

fn parse_at<T: std::str::FromStr>(line_no: usize, token: &str, what: &str) -> Result<T> {
    token.trim().parse().map_err(|_| {
        Error::data(format!(
            "codebook file line {line_no}: invalid {what} \"{token}\""
        ))
    })
}

fn parse_vec_at<T: std::str::FromStr>(line_no: usize, line: &str, what: &str) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|tok| parse_at(line_no, tok, what))
        .collect()
}

fn read_matrix(cursor: &mut Cursor, feature_class: u8) -> Result<SubCodebook> {
    let method_str = cursor.key("method")?;
    let method: GenerationMethod = method_str.parse().map_err(|_| {
        Error::data(format!(
            "codebook file line {}: unknown method \"{method_str}\"",
            cursor.line_no()
        ))
    })?;
    let size: usize = cursor.key_parse("size", "size")?;
    let dim: usize = cursor.key_parse("dim", "dim")?;
    let mut boundaries: Vec<ClassBoundary> = Vec::new();
    let mut centroids = Vec::with_capacity(size);
    while centroids.len() < size {
        let line = cursor.next()?;
        let line_no = cursor.line_no();
        if let Some(rest) = line.strip_prefix("boundary ") {
            let mut parts = rest.splitn(3, ' ');
            let start: usize = parse_at(line_no, parts.next().unwrap_or(""), "boundary start")?;
            let count: usize = parse_at(line_no, parts.next().unwrap_or(""), "boundary count")?;
            let label = parts.next().unwrap_or("").to_string();
            boundaries.push(ClassBoundary { label, start, count });
        } else {
            let row: Vec<f64> = parse_vec_at(line_no, line, "centroid value")?;
            if row.len() != dim {
                return Err(Error::data(format!(
                    "codebook file line {line_no}: centroid has {} values, expected {dim}",
                    row.len()
                )));
            }
            centroids.push(row);
        }
    }
    let mut cb = SubCodebook::new(feature_class, centroids, method)?;
    if !boundaries.is_empty() {
        cb.class_boundaries = Some(boundaries);
    }
    Ok(cb)
}

/// Parse a codebook file previously produced by [`save_codebook`].
pub fn parse_codebook(content: &str) -> Result<Codebook> {
    let mut cursor = Cursor::new(content);
    let version = cursor.next()?;
    if version != VERSION_LINE {
        return Err(Error::data(format!(
            "unsupported codebook format version: \"{version}\" \
             (expected \"{VERSION_LINE}\")"
        )));
    }

    if cursor.next()? != "[scaling]" {
        return Err(Error::data(format!(
            "codebook file line {}: expected [scaling]",
            cursor.line_no()
        )));
    }
    let mode_str = cursor.key("mode")?;
    let mode: ScalingMode = mode_str.parse().map_err(|_| {
        Error::data(format!(
            "codebook file line {}: unknown scaling mode \"{mode_str}\"",
            cursor.line_no()
        ))
    })?;
    let mut per_class = BTreeMap::new();
    if mode != ScalingMode::None {
        while cursor.lines.get(cursor.pos).is_some_and(|l| l.starts_with("class ")) {
            let class: u8 = cursor.key_parse("class", "feature class")?;
            let offset: Vec<f64> = cursor.key_parse_vec("offset", "offset")?;
            let scale: Vec<f64> = cursor.key_parse_vec("scale", "scale")?;
            if offset.len() != scale.len() {
                return Err(Error::data(format!(
                    "codebook file line {}: offset and scale lengths differ",
                    cursor.line_no()
                )));
            }
            per_class.insert(class, ClassScaling { offset, scale });
        }
    }
    let scaling = ScalingParams { mode, per_class };

    if cursor.next()? != "[weighting]" {
        return Err(Error::data(format!(
            "codebook file line {}: expected [weighting]",
            cursor.line_no()
        )));
    }
    let log_flag: bool = cursor.key_parse("log", "flag")?;
    let idf_flag: bool = cursor.key_parse("idf", "flag")?;
    let (n, df) = if idf_flag {
        let n: u64 = cursor.key_parse("n", "bag count")?;
        let df: Vec<u64> = cursor.key_parse_vec("df", "document frequency")?;
        (n, df)
    } else {
        (0, Vec::new())
    };
    let weighting = WeightingState {
        log_flag,
        idf_flag,
        df,
        n,
    };

    let mut numeric: BTreeMap<u8, NumericCodebook> = BTreeMap::new();
    let mut dictionary = None;
    let mut text_settings = TextConfig::default();
    loop {
        let header = cursor.next()?;
        if header == "[end]" {
            break;
        } else if let Some(class_str) = header
            .strip_prefix("[numeric ")
            .and_then(|s| s.strip_suffix(']'))
        {
            let class: u8 = parse_at(cursor.line_no(), class_str, "feature class")?;
            let sub = read_matrix(&mut cursor, class)?;
            numeric.insert(class, NumericCodebook::Flat(sub));
        } else if let Some(class_str) = header
            .strip_prefix("[svq ")
            .and_then(|s| s.strip_suffix(']'))
        {
            let class: u8 = parse_at(cursor.line_no(), class_str, "feature class")?;
            let blocks: usize = cursor.key_parse("blocks", "block count")?;
            let block_dims: Vec<usize> = cursor.key_parse_vec("dims", "block dims")?;
            if block_dims.len() != blocks {
                return Err(Error::data(format!(
                    "codebook file line {}: {} block dims for {blocks} blocks",
                    cursor.line_no(),
                    block_dims.len()
                )));
            }
            let mut block_codebooks = Vec::with_capacity(blocks);
            for i in 0..blocks {
                let got: usize = cursor.key_parse("block", "block index")?;
                if got != i {
                    return Err(Error::data(format!(
                        "codebook file line {}: expected block {i}, found {got}",
                        cursor.line_no()
                    )));
                }
                block_codebooks.push(read_matrix(&mut cursor, class)?);
            }
            if cursor.next()? != "top" {
                return Err(Error::data(format!(
                    "codebook file line {}: expected \"top\"",
                    cursor.line_no()
                )));
            }
            let top_codebook = read_matrix(&mut cursor, class)?;
            numeric.insert(
                class,
                NumericCodebook::Svq(SvqStructure {
                    feature_class: class,
                    block_dims,
                    block_codebooks,
                    top_codebook,
                }),
            );
        } else if header == "[dictionary]" {
            text_settings = TextConfig {
                n_gram: cursor.key_parse("ngram", "n-gram order")?,
                n_char_gram: cursor.key_parse("nchargram", "character gram size")?,
                min_term_freq: cursor.key_parse("minterm", "minimum term frequency")?,
                max_term_freq: cursor.key_parse("maxterm", "maximum term frequency")?,
            };
            let size: usize = cursor.key_parse("size", "dictionary size")?;
            let mut terms = Vec::with_capacity(size);
            for _ in 0..size {
                terms.push(cursor.key("term")?.to_string());
            }
            dictionary = Some(Dictionary::from_terms(terms)?);
        } else {
            return Err(Error::data(format!(
                "codebook file line {}: unexpected section \"{header}\"",
                cursor.line_no()
            )));
        }
    }

    Ok(Codebook {
        scaling,
        numeric,
        dictionary,
        weighting,
        text_settings,
    })
}

pub fn load_codebook(path: &Path) -> Result<Codebook> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_codebook(&content)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_codebook() -> Codebook {
        let flat = SubCodebook::new(
            1,
            vec![
                vec![0.25, -1.5000000000000002],
                vec![1.0 / 3.0, 9.869604401089358],
            ],
            GenerationMethod::KMeansPp,
        )
        .unwrap();
        let mut supervised = SubCodebook::new(
            2,
            vec![vec![1.0], vec![2.0], vec![3.0], vec![4.0]],
            GenerationMethod::Random,
        )
        .unwrap();
        supervised.class_boundaries = Some(vec![
            ClassBoundary {
                label: "calm voice".into(),
                start: 0,
                count: 2,
            },
            ClassBoundary {
                label: "excited".into(),
                start: 2,
                count: 2,
            },
        ]);
        let svq = SvqStructure {
            feature_class: 3,
            block_dims: vec![2, 3],
            block_codebooks: vec![
                SubCodebook::new(3, vec![vec![0.1, 0.2], vec![0.3, 0.4]], GenerationMethod::KMeans)
                    .unwrap(),
                SubCodebook::new(
                    3,
                    vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]],
                    GenerationMethod::KMeans,
                )
                .unwrap(),
            ],
            top_codebook: SubCodebook::new(
                3,
                vec![vec![0.0, 1.0], vec![1.0, 0.0]],
                GenerationMethod::KMeans,
            )
            .unwrap(),
        };
        Codebook {
            scaling: ScalingParams {
                mode: ScalingMode::Standardize,
                per_class: BTreeMap::from([
                    (
                        1u8,
                        ClassScaling {
                            offset: vec![0.1, -0.9],
                            scale: vec![1.25, 0.033],
                        },
                    ),
                    (
                        2u8,
                        ClassScaling {
                            offset: vec![5.0],
                            scale: vec![1.0],
                        },
                    ),
                    (
                        3u8,
                        ClassScaling {
                            offset: vec![0.0; 5],
                            scale: vec![1.0; 5],
                        },
                    ),
                ]),
            },
            numeric: BTreeMap::from([
                (1u8, NumericCodebook::Flat(flat)),
                (2u8, NumericCodebook::Flat(supervised)),
                (3u8, NumericCodebook::Svq(svq)),
            ]),
            dictionary: Some(
                Dictionary::from_terms(vec![
                    "good".into(),
                    "good day".into(),
                    "xy".into(),
                ])
                .unwrap(),
            ),
            weighting: WeightingState {
                log_flag: true,
                idf_flag: true,
                df: vec![2, 0, 1, 2, 1, 1, 0, 0],
                n: 7,
            },
            text_settings: TextConfig {
                n_gram: 2,
                n_char_gram: 0,
                min_term_freq: 2,
                max_term_freq: 50,
            },
        }
    }

    #[test]
    fn round_trip_is_lossless() {
        let cb = sample_codebook();
        let rendered = render_codebook(&cb);
        let reloaded = parse_codebook(&rendered).unwrap();
        assert_eq!(cb, reloaded);
        // And stable across a second render.
        assert_eq!(rendered, render_codebook(&reloaded));
    }

    #[test]
    fn unsupported_version_errors() {
        let err = parse_codebook("crossbag codebook v99\n[end]\n").unwrap_err();
        assert!(err.to_string().contains("unsupported"), "{err}");
    }

    #[test]
    fn truncated_file_errors() {
        let rendered = render_codebook(&sample_codebook());
        let cut = &rendered[..rendered.len() / 2];
        let err = parse_codebook(cut).unwrap_err();
        assert!(err.to_string().contains("end of file") || err.to_string().contains("line"));
    }

    #[test]
    fn minimal_codebook_without_text() {
        let cb = Codebook {
            scaling: ScalingParams::identity(),
            numeric: BTreeMap::from([(
                1u8,
                NumericCodebook::Flat(
                    SubCodebook::new(1, vec![vec![1.5]], GenerationMethod::Random).unwrap(),
                ),
            )]),
            dictionary: None,
            weighting: WeightingState::none(),
            text_settings: TextConfig::default(),
        };
        let reloaded = parse_codebook(&render_codebook(&cb)).unwrap();
        assert_eq!(cb, reloaded);
    }

    #[test]
    fn save_and_load_via_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("codebook.txt");
        let cb = sample_codebook();
        save_codebook(&cb, &path).unwrap();
        assert_eq!(load_codebook(&path).unwrap(), cb);
    }
}
