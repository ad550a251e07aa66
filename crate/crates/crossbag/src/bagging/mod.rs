//! Windowing, quantization, text counting, and bag assembly.

pub mod quantize;
pub mod text;
pub mod windows;

use std::collections::BTreeMap;

use crate::codebook::NumericCodebook;
use crate::dataset::{Bag, Dataset};
use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
pub use quantize::quantize_dataset_parallel;
pub use quantize::{
    assign_frame, assign_vector, bag_numeric_window, quantize_dataset,
    quantize_dataset_sequential, QuantizationConfig,
};
pub use text::{bag_text, build_dictionary, tokenize, Dictionary, TextConfig};
pub use windows::{segment_windows, Window, WindowingConfig};

/// Concatenate per-sub-codebook tf vectors into one bag: numeric feature
/// classes ascending, then text. Every declared feature class must be
/// present.
pub fn assemble_bag(
    name: &str,
    time: Option<f64>,
    label: Option<String>,
    declared_classes: &[u8],
    numeric_tf: &BTreeMap<u8, Vec<f64>>,
    text_tf: Option<Vec<f64>>,
) -> Result<Bag> {
    let mut tf = Vec::new();
    for class in declared_classes {
        let sub = numeric_tf.get(class).ok_or_else(|| {
            Error::data(format!(
                "bagging: no sub-bag for declared feature class {class}"
            ))
        })?;
        tf.extend_from_slice(sub);
    }
    if let Some(text) = text_tf {
        tf.extend(text);
    }
    Ok(Bag {
        name: name.to_string(),
        time,
        label,
        tf,
    })
}

/// Build one bag per window. Frames are quantized once (in parallel when
/// enabled) and windows accumulate the cached assignments, so the result is
/// identical regardless of window overlap or thread count.
pub fn bag_windows(
    ds: &Dataset,
    windows: &[Window],
    codebooks: &BTreeMap<u8, NumericCodebook>,
    q: &QuantizationConfig,
    dictionary: Option<&Dictionary>,
    text_cfg: &TextConfig,
) -> Result<Vec<Bag>> {
    let classes: Vec<u8> = codebooks.keys().copied().collect();
    for class in &classes {
        if !ds.dims().contains_key(class) {
            return Err(Error::data(format!(
                "bagging: codebook covers feature class {class} but the input \
                 does not declare it"
            )));
        }
    }

    let frame_assignments = if classes.is_empty() {
        Vec::new()
    } else {
        quantize_dataset(ds, codebooks, q)?
    };

    // Token-to-dictionary-index lists per frame, computed once.
    let frame_tokens: Option<Vec<Vec<usize>>> = dictionary.map(|dict| {
        ds.frames()
            .iter()
            .map(|f| {
                f.text
                    .as_deref()
                    .map(|t| {
                        tokenize(t, text_cfg)
                            .iter()
                            .filter_map(|term| dict.index_of(term))
                            .collect()
                    })
                    .unwrap_or_default()
            })
            .collect()
    });

    let mut bags = Vec::with_capacity(windows.len());
    for window in windows {
        let mut numeric_tf: BTreeMap<u8, Vec<f64>> = BTreeMap::new();
        for (slot, class) in classes.iter().enumerate() {
            let size = codebooks[class].bag_size();
            let mut tf = vec![0.0; size];
            for fi in window.frame_range.clone() {
                for &(i, w) in &frame_assignments[fi][slot] {
                    tf[i] += w;
                }
            }
            numeric_tf.insert(*class, tf);
        }
        let text_tf = frame_tokens.as_ref().map(|tokens| {
            let dict = dictionary.expect("tokens imply dictionary");
            let mut tf = vec![0.0; dict.len()];
            for fi in window.frame_range.clone() {
                for &i in &tokens[fi] {
                    tf[i] += 1.0;
                }
            }
            tf
        });
        bags.push(assemble_bag(
            &window.name,
            window.center,
            window.label.clone(),
            &classes,
            &numeric_tf,
            text_tf,
        )?);
    }
    Ok(bags)
}
