//! Vector quantization of frames against learned codebooks.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use std::collections::BTreeMap;

use crate::codebook::{sq_distance, NumericCodebook, SubCodebook};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// How frames are credited to codebook words: each frame goes to its
/// `num_assignments` closest words; with Gaussian encoding each assignment
/// is weighted by exp(-d^2 / (2 sigma^2)) instead of 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationConfig {
    pub num_assignments: usize,
    pub gaussian_sigma: Option<f64>,
}

impl Default for QuantizationConfig {
    fn default() -> QuantizationConfig {
        QuantizationConfig {
            num_assignments: 1,
            gaussian_sigma: None,
        }
    }
}

impl QuantizationConfig {
    pub fn validate(&self, codebook_size: usize) -> Result<()> {
        if self.num_assignments == 0 {
            return Err(Error::data("quantization: -a must be at least 1"));
        }
        if self.num_assignments > codebook_size {
            return Err(Error::data(format!(
                "quantization: {} assignments exceed the codebook size {}",
                self.num_assignments, codebook_size
            )));
        }
        if let Some(sigma) = self.gaussian_sigma {
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(Error::data(format!(
                    "quantization: Gaussian sigma must be positive (got {sigma})"
                )));
            }
        }
        Ok(())
    }

    fn weight(&self, sq_dist: f64) -> f64 {
        match self.gaussian_sigma {
            Some(sigma) => (-sq_dist / (2.0 * sigma * sigma)).exp(),
            None => 1.0,
        }
    }
}

/// The `num_assignments` nearest codebook words for one vector, ordered by
/// ascending distance with ties broken toward the lower index.
pub fn assign_vector(
    x: &[f64],
    cb: &SubCodebook,
    q: &QuantizationConfig,
) -> Result<Vec<(usize, f64)>> {
    if x.len() != cb.dim() {
        return Err(Error::data(format!(
            "quantization: vector has {} dims but the codebook expects {}",
            x.len(),
            cb.dim()
        )));
    }
    q.validate(cb.size())?;
    let dists: Vec<f64> = cb.centroids.iter().map(|c| sq_distance(x, c)).collect();
    let cmp = |&a: &usize, &b: &usize| {
        dists[a]
            .total_cmp(&dists[b])
            .then_with(|| a.cmp(&b))
    };
    let mut order: Vec<usize> = (0..dists.len()).collect();
    if q.num_assignments < order.len() {
        order.select_nth_unstable_by(q.num_assignments - 1, cmp);
        order.truncate(q.num_assignments);
    }
    order.sort_unstable_by(cmp);
    Ok(order
        .into_iter()
        .map(|i| (i, q.weight(dists[i])))
        .collect())
}

/// Quantize one vector against a numeric codebook. The SVQ path first maps
/// the vector to its block-word index vector, then assigns that against the
/// top codebook.
pub fn assign_frame(
    x: &[f64],
    cb: &NumericCodebook,
    q: &QuantizationConfig,
) -> Result<Vec<(usize, f64)>> {
    match cb {
        NumericCodebook::Flat(sub) => assign_vector(x, sub, q),
        NumericCodebook::Svq(svq) => {
            if x.len() != svq.input_dim() {
                return Err(Error::data(format!(
                    "quantization: vector has {} dims but the SVQ codebook \
                     expects {}",
                    x.len(),
                    svq.input_dim()
                )));
            }
            let indices = svq.encode_indices(x);
            assign_vector(&indices, &svq.top_codebook, q)
        }
    }
}

/// Term-frequency histogram of one window: the summed assignment weights of
/// its frames over the codebook words.
pub fn bag_numeric_window(
    vectors: &[Vec<f64>],
    cb: &NumericCodebook,
    q: &QuantizationConfig,
) -> Result<Vec<f64>> {
    let mut tf = vec![0.0; cb.bag_size()];
    for v in vectors {
        for (i, w) in assign_frame(v, cb, q)? {
            tf[i] += w;
        }
    }
    Ok(tf)
}

/// Per-frame assignments for every feature class, aligned with the
/// codebook map's ascending class order.
pub type FrameAssignments = Vec<Vec<(usize, f64)>>;

fn quantize_one(
    frame: &crate::dataset::Frame,
    codebooks: &BTreeMap<u8, NumericCodebook>,
    q: &QuantizationConfig,
) -> Result<FrameAssignments> {
    codebooks
        .iter()
        .map(|(class, cb)| assign_frame(&frame.numeric[class], cb, q))
        .collect()
}

/// Quantize every frame of the dataset once. Windows then accumulate these
/// cached assignments, so overlapping windows never re-quantize a frame.
pub fn quantize_dataset_sequential(
    ds: &Dataset,
    codebooks: &BTreeMap<u8, NumericCodebook>,
    q: &QuantizationConfig,
) -> Result<Vec<FrameAssignments>> {
    ds.frames()
        .iter()
        .map(|f| quantize_one(f, codebooks, q))
        .collect()
}

/// Parallel variant; output is identical to the sequential path.
#[cfg(feature = "parallel")]
pub fn quantize_dataset_parallel(
    ds: &Dataset,
    codebooks: &BTreeMap<u8, NumericCodebook>,
    q: &QuantizationConfig,
) -> Result<Vec<FrameAssignments>> {
    ds.frames()
        .par_iter()
        .map(|f| quantize_one(f, codebooks, q))
        .collect()
}

pub fn quantize_dataset(
    ds: &Dataset,
    codebooks: &BTreeMap<u8, NumericCodebook>,
    q: &QuantizationConfig,
) -> Result<Vec<FrameAssignments>> {
    #[cfg(feature = "parallel")]
    {
        let per_frame: usize = codebooks
            .values()
            .map(|cb| cb.input_dim() * cb.bag_size().max(1))
            .sum();
        if ds.len() * per_frame.max(1) >= crate::codebook::PAR_MIN_WORK {
            return quantize_dataset_parallel(ds, codebooks, q);
        }
    }
    quantize_dataset_sequential(ds, codebooks, q)
}
