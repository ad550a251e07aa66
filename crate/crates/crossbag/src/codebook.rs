//! Codebook learning: random sampling, random sampling++, k-means and
//! k-means++, supervised super-codebooks, and split vector quantization.
//!
//! All distances are Euclidean. Every generator is deterministic given the
//! input vectors and the seed; the parallel assignment path produces output
//! identical to the sequential one, so thread count never changes a result.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::bagging::text::{Dictionary, TextConfig};
use crate::dataset::{BagLayout, BagSegment, Dataset, SegmentSource};
use crate::error::{Error, Result};
use crate::postprocess::WeightingState;
use crate::preprocess::ScalingParams;
use crate::rng;
use crate::rng::RngStream;

/// Batches below roughly this many multiply-adds are assigned sequentially
/// even when the parallel feature is enabled; below it the fork overhead
/// dominates.
#[cfg(feature = "parallel")]
pub(crate) const PAR_MIN_WORK: usize = 1 << 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenerationMethod {
    Random,
    RandomPp,
    KMeans,
    KMeansPp,
}

impl GenerationMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            GenerationMethod::Random => "random",
            GenerationMethod::RandomPp => "random++",
            GenerationMethod::KMeans => "kmeans",
            GenerationMethod::KMeansPp => "kmeans++",
        }
    }
}

impl std::str::FromStr for GenerationMethod {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<GenerationMethod, ()> {
        match s {
            "random" => Ok(GenerationMethod::Random),
            "random++" => Ok(GenerationMethod::RandomPp),
            "kmeans" => Ok(GenerationMethod::KMeans),
            "kmeans++" => Ok(GenerationMethod::KMeansPp),
            _ => Err(()),
        }
    }
}

/// Layout record for one label's slice of a supervised super-codebook.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassBoundary {
    pub label: String,
    pub start: usize,
    pub count: usize,
}

/// Learned prototype vectors for one numeric feature class.
#[derive(Debug, Clone, PartialEq)]
pub struct SubCodebook {
    pub feature_class: u8,
    pub centroids: Vec<Vec<f64>>,
    pub method: GenerationMethod,
    pub class_boundaries: Option<Vec<ClassBoundary>>,
}

impl SubCodebook {
    pub fn new(
        feature_class: u8,
        centroids: Vec<Vec<f64>>,
        method: GenerationMethod,
    ) -> Result<SubCodebook> {
        if centroids.is_empty() {
            return Err(Error::data("codebook must contain at least one word"));
        }
        let dim = centroids[0].len();
        if centroids.iter().any(|c| c.len() != dim) {
            return Err(Error::data("codebook centroids have unequal lengths"));
        }
        Ok(SubCodebook {
            feature_class,
            centroids,
            method,
            class_boundaries: None,
        })
    }

    pub fn size(&self) -> usize {
        self.centroids.len()
    }

    pub fn dim(&self) -> usize {
        self.centroids[0].len()
    }
}

pub fn sq_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Index of the closest centroid plus its squared distance. Ties break
/// toward the lower index.
pub fn nearest_centroid(x: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centroids.iter().enumerate() {
        let d = sq_distance(x, c);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    (best, best_d)
}

/// Sequential nearest-centroid assignment of a point batch.
pub fn assign_nearest_sequential(
    points: &[Vec<f64>],
    centroids: &[Vec<f64>],
) -> Vec<(usize, f64)> {
    points
        .iter()
        .map(|p| nearest_centroid(p, centroids))
        .collect()
}

/// Parallel nearest-centroid assignment; output order matches the input, so
/// the result is identical to the sequential path.
#[cfg(feature = "parallel")]
pub fn assign_nearest_parallel(points: &[Vec<f64>], centroids: &[Vec<f64>]) -> Vec<(usize, f64)> {
    points
        .par_iter()
        .map(|p| nearest_centroid(p, centroids))
        .collect()
}

pub fn assign_nearest(points: &[Vec<f64>], centroids: &[Vec<f64>]) -> Vec<(usize, f64)> {
    #[cfg(feature = "parallel")]
    {
        let dim = centroids.first().map_or(1, |c| c.len().max(1));
        if points.len() * centroids.len() * dim >= PAR_MIN_WORK {
            return assign_nearest_parallel(points, centroids);
        }
    }
    assign_nearest_sequential(points, centroids)
}

/// `size` distinct row indices drawn uniformly without replacement
/// (partial Fisher-Yates).
fn sample_indices(n: usize, size: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.gen_range(i..n);
        indices.swap(i, j);
    }
    indices.truncate(size);
    indices
}

fn check_size(available: usize, size: usize) -> Result<()> {
    if size == 0 {
        return Err(Error::data("codebook size must be at least 1"));
    }
    if size > available {
        return Err(Error::data(format!(
            "codebook size {size} exceeds the {available} available vectors"
        )));
    }
    Ok(())
}

/// Pick codebook vectors uniformly from the input rows, without replacement.
pub fn generate_random(
    feature_class: u8,
    vectors: &[Vec<f64>],
    size: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SubCodebook> {
    check_size(vectors.len(), size)?;
    let centroids = sample_indices(vectors.len(), size, rng)
        .into_iter()
        .map(|i| vectors[i].clone())
        .collect();
    SubCodebook::new(feature_class, centroids, GenerationMethod::Random)
}

/// Incremental distance-squared-weighted seeding. The first pick is uniform;
/// every later pick favours vectors far from all picks so far, with
/// probability proportional to the squared distance to the nearest pick.
/// When every remaining vector coincides with a pick (all weights zero) the
/// next pick falls back to uniform among the unchosen rows.
pub struct PlusPlusSeeder<'a> {
    vectors: &'a [Vec<f64>],
    chosen: Vec<usize>,
    is_chosen: Vec<bool>,
    min_sq: Vec<f64>,
}

impl<'a> PlusPlusSeeder<'a> {
    pub fn new(vectors: &'a [Vec<f64>]) -> PlusPlusSeeder<'a> {
        PlusPlusSeeder {
            vectors,
            chosen: Vec::new(),
            is_chosen: vec![false; vectors.len()],
            min_sq: vec![f64::INFINITY; vectors.len()],
        }
    }

    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }

    /// Record `idx` as a pick and refresh the distance table.
    pub fn choose(&mut self, idx: usize) {
        self.chosen.push(idx);
        self.is_chosen[idx] = true;
        let picked = &self.vectors[idx];
        for (i, v) in self.vectors.iter().enumerate() {
            let d = sq_distance(v, picked);
            if d < self.min_sq[i] {
                self.min_sq[i] = d;
            }
        }
    }

    pub fn pick_first(&mut self, rng: &mut ChaCha8Rng) -> usize {
        let idx = rng.gen_range(0..self.vectors.len());
        self.choose(idx);
        idx
    }

    pub fn pick_next(&mut self, rng: &mut ChaCha8Rng) -> usize {
        let total: f64 = self.min_sq.iter().sum();
        let idx = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut picked = None;
            for (i, &w) in self.min_sq.iter().enumerate() {
                acc += w;
                if acc > target {
                    picked = Some(i);
                    break;
                }
            }
            // Floating-point slack: fall back to the last positive weight.
            picked.unwrap_or_else(|| {
                self.min_sq
                    .iter()
                    .rposition(|&w| w > 0.0)
                    .expect("total > 0 implies a positive weight")
            })
        } else {
            // Degenerate: all remaining vectors coincide with picks.
            let remaining: Vec<usize> = (0..self.vectors.len())
                .filter(|&i| !self.is_chosen[i])
                .collect();
            remaining[rng.gen_range(0..remaining.len())]
        };
        self.choose(idx);
        idx
    }
}

/// Distance-squared-weighted sampling of codebook vectors from the input rows.
pub fn generate_random_pp(
    feature_class: u8,
    vectors: &[Vec<f64>],
    size: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SubCodebook> {
    check_size(vectors.len(), size)?;
    let mut seeder = PlusPlusSeeder::new(vectors);
    seeder.pick_first(rng);
    for _ in 1..size {
        seeder.pick_next(rng);
    }
    let centroids = seeder
        .chosen()
        .iter()
        .map(|&i| vectors[i].clone())
        .collect();
    SubCodebook::new(feature_class, centroids, GenerationMethod::RandomPp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMethod {
    Random,
    RandomPp,
}

/// Outcome of a k-means run. `inertia_trace` holds the within-cluster sum of
/// squares measured at every assignment step, starting right after
/// initialization; it is non-increasing.
#[derive(Debug, Clone)]
pub struct KmeansResult {
    pub centroids: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    pub inertia_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

pub const KMEANS_DEFAULT_MAX_ITERS: usize = 500;

/// Lloyd iterations until cluster assignments stop changing or `max_iters`
/// update rounds have run. Empty clusters are reseeded from the point
/// farthest from its assigned centroid, which keeps the codebook size exact.
pub fn run_kmeans(
    vectors: &[Vec<f64>],
    size: usize,
    init: InitMethod,
    max_iters: usize,
    rng: &mut ChaCha8Rng,
) -> Result<KmeansResult> {
    check_size(vectors.len(), size)?;
    let dim = vectors[0].len();
    let mut centroids: Vec<Vec<f64>> = match init {
        InitMethod::Random => sample_indices(vectors.len(), size, rng)
            .into_iter()
            .map(|i| vectors[i].clone())
            .collect(),
        InitMethod::RandomPp => {
            let mut seeder = PlusPlusSeeder::new(vectors);
            seeder.pick_first(rng);
            for _ in 1..size {
                seeder.pick_next(rng);
            }
            seeder.chosen().iter().map(|&i| vectors[i].clone()).collect()
        }
    };

    let mut prev: Option<Vec<usize>> = None;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    let (assignments, final_trace) = loop {
        let assigned = assign_nearest(vectors, &centroids);
        trace.push(assigned.iter().map(|a| a.1).sum::<f64>());
        let assignments: Vec<usize> = assigned.iter().map(|a| a.0).collect();
        if prev.as_ref() == Some(&assignments) {
            converged = true;
            break (assignments, trace);
        }
        if iterations == max_iters {
            break (assignments, trace);
        }
        iterations += 1;

        // Means per cluster.
        let mut sums = vec![vec![0.0; dim]; size];
        let mut counts = vec![0usize; size];
        for (point, &(cluster, _)) in vectors.iter().zip(&assigned) {
            counts[cluster] += 1;
            for (s, &x) in sums[cluster].iter_mut().zip(point) {
                *s += x;
            }
        }
        let mut used_for_reseed = vec![false; vectors.len()];
        for cluster in 0..size {
            if counts[cluster] > 0 {
                let n = counts[cluster] as f64;
                for (c, s) in centroids[cluster].iter_mut().zip(&sums[cluster]) {
                    *c = s / n;
                }
            } else {
                // Reseed from the point farthest from its assigned centroid,
                // skipping points already used for another empty cluster.
                let far = assigned
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !used_for_reseed[*i])
                    .max_by(|(i, a), (j, b)| {
                        a.1.partial_cmp(&b.1)
                            .unwrap_or(std::cmp::Ordering::Equal)
                            .then(j.cmp(i))
                    })
                    .map(|(i, _)| i)
                    .ok_or_else(|| Error::Internal("kmeans: no reseed candidate".into()))?;
                used_for_reseed[far] = true;
                centroids[cluster] = vectors[far].clone();
            }
        }
        prev = Some(assignments);
    };

    Ok(KmeansResult {
        centroids,
        assignments,
        inertia_trace: final_trace,
        iterations,
        converged,
    })
}

/// Learn one sub-codebook with the requested method.
pub fn generate(
    feature_class: u8,
    vectors: &[Vec<f64>],
    size: usize,
    method: GenerationMethod,
    max_iters: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SubCodebook> {
    match method {
        GenerationMethod::Random => generate_random(feature_class, vectors, size, rng),
        GenerationMethod::RandomPp => generate_random_pp(feature_class, vectors, size, rng),
        GenerationMethod::KMeans => {
            let result = run_kmeans(vectors, size, InitMethod::Random, max_iters, rng)?;
            SubCodebook::new(feature_class, result.centroids, GenerationMethod::KMeans)
        }
        GenerationMethod::KMeansPp => {
            let result = run_kmeans(vectors, size, InitMethod::RandomPp, max_iters, rng)?;
            SubCodebook::new(feature_class, result.centroids, GenerationMethod::KMeansPp)
        }
    }
}

/// Learn one codebook per label (first-appearance order) and concatenate
/// them into a super-codebook of `per_class_size * label_count` words.
/// Each label draws from its own RNG stream, so the result equals the
/// concatenation of independently learned per-label codebooks.
pub fn generate_supervised(
    ds: &Dataset,
    feature_class: u8,
    per_class_size: usize,
    method: GenerationMethod,
    max_iters: usize,
    streams: &RngStream,
) -> Result<SubCodebook> {
    let mut label_order: Vec<&str> = Vec::new();
    let mut by_label: BTreeMap<&str, Vec<Vec<f64>>> = BTreeMap::new();
    for frame in ds.frames() {
        let label = frame.label.as_deref().ok_or_else(|| {
            Error::data(format!(
                "supervised codebook: unlabeled frame in instance \"{}\"",
                frame.name
            ))
        })?;
        if !by_label.contains_key(label) {
            label_order.push(label);
        }
        by_label
            .entry(label)
            .or_default()
            .push(frame.numeric[&feature_class].clone());
    }
    if label_order.is_empty() {
        return Err(Error::data("supervised codebook: no frames"));
    }

    let mut centroids = Vec::with_capacity(per_class_size * label_order.len());
    let mut boundaries = Vec::with_capacity(label_order.len());
    for (label_idx, label) in label_order.iter().enumerate() {
        let vectors = &by_label[label];
        if vectors.len() < per_class_size {
            return Err(Error::data(format!(
                "supervised codebook: label \"{label}\" has only {} frames, \
                 need at least {per_class_size}",
                vectors.len()
            )));
        }
        let mut rng = streams.stream(rng::supervised_stream(feature_class, label_idx));
        let sub = generate(feature_class, vectors, per_class_size, method, max_iters, &mut rng)?;
        boundaries.push(ClassBoundary {
            label: label.to_string(),
            start: centroids.len(),
            count: sub.size(),
        });
        centroids.extend(sub.centroids);
    }

    let mut cb = SubCodebook::new(feature_class, centroids, method)?;
    cb.class_boundaries = Some(boundaries);
    Ok(cb)
}

/// Near-equal contiguous partition of `dims` into `blocks` parts; the
/// remainder goes to the last block.
pub fn split_block_dims(dims: usize, blocks: usize) -> Result<Vec<usize>> {
    if blocks == 0 {
        return Err(Error::data("SVQ: block count must be at least 1"));
    }
    if blocks > dims {
        return Err(Error::data(format!(
            "SVQ: {blocks} blocks exceed the {dims} feature dimensions"
        )));
    }
    let base = dims / blocks;
    let mut sizes = vec![base; blocks];
    *sizes.last_mut().unwrap() += dims % blocks;
    Ok(sizes)
}

/// Two-stage split vector quantization: per-block codebooks over contiguous
/// subvectors, then a top codebook over the vectors of nearest block-word
/// indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SvqStructure {
    pub feature_class: u8,
    pub block_dims: Vec<usize>,
    pub block_codebooks: Vec<SubCodebook>,
    pub top_codebook: SubCodebook,
}

impl SvqStructure {
    pub fn block_count(&self) -> usize {
        self.block_codebooks.len()
    }

    pub fn input_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    /// Map a full vector to its vector of nearest block-word indices.
    pub fn encode_indices(&self, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.block_count());
        let mut start = 0;
        for (dims, cb) in self.block_dims.iter().zip(&self.block_codebooks) {
            let (idx, _) = nearest_centroid(&x[start..start + dims], &cb.centroids);
            out.push(idx as f64);
            start += dims;
        }
        out
    }
}

/// Learn an SVQ structure: one codebook of `block_size` words per block,
/// then a `top_size`-word codebook over the encoded index vectors.
#[allow(clippy::too_many_arguments)]
pub fn build_svq(
    feature_class: u8,
    vectors: &[Vec<f64>],
    block_count: usize,
    block_size: usize,
    top_size: usize,
    method: GenerationMethod,
    max_iters: usize,
    streams: &RngStream,
) -> Result<SvqStructure> {
    if vectors.is_empty() {
        return Err(Error::data("SVQ: no input vectors"));
    }
    let dims = vectors[0].len();
    let block_dims = split_block_dims(dims, block_count)?;

    let mut block_codebooks = Vec::with_capacity(block_count);
    let mut start = 0;
    for (block_idx, &bd) in block_dims.iter().enumerate() {
        let sub_vectors: Vec<Vec<f64>> = vectors
            .iter()
            .map(|v| v[start..start + bd].to_vec())
            .collect();
        let mut rng = streams.stream(rng::svq_block_stream(feature_class, block_idx));
        block_codebooks.push(generate(
            feature_class,
            &sub_vectors,
            block_size,
            method,
            max_iters,
            &mut rng,
        )?);
        start += bd;
    }

    let partial = SvqStructure {
        feature_class,
        block_dims: block_dims.clone(),
        block_codebooks,
        top_codebook: SubCodebook::new(feature_class, vec![vec![0.0]], method)?,
    };
    let index_vectors: Vec<Vec<f64>> = vectors.iter().map(|v| partial.encode_indices(v)).collect();
    let mut rng = streams.stream(rng::svq_top_stream(feature_class));
    let top_codebook = generate(feature_class, &index_vectors, top_size, method, max_iters, &mut rng)?;

    Ok(SvqStructure {
        feature_class,
        block_dims,
        block_codebooks: partial.block_codebooks,
        top_codebook,
    })
}

/// A numeric feature class is quantized either against a flat codebook or
/// through the two-stage SVQ path.
#[derive(Debug, Clone, PartialEq)]
pub enum NumericCodebook {
    Flat(SubCodebook),
    Svq(SvqStructure),
}

impl NumericCodebook {
    pub fn feature_class(&self) -> u8 {
        match self {
            NumericCodebook::Flat(cb) => cb.feature_class,
            NumericCodebook::Svq(svq) => svq.feature_class,
        }
    }

    /// Dimensionality this codebook expects from input frames.
    pub fn input_dim(&self) -> usize {
        match self {
            NumericCodebook::Flat(cb) => cb.dim(),
            NumericCodebook::Svq(svq) => svq.input_dim(),
        }
    }

    /// Length of the tf sub-vector this codebook produces.
    pub fn bag_size(&self) -> usize {
        match self {
            NumericCodebook::Flat(cb) => cb.size(),
            NumericCodebook::Svq(svq) => svq.top_codebook.size(),
        }
    }
}

/// The persistent model bundle: everything a later run needs to reproduce
/// training-time bags on new input, as stored in the codebook file.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub scaling: ScalingParams,
    pub numeric: BTreeMap<u8, NumericCodebook>,
    pub dictionary: Option<Dictionary>,
    pub weighting: WeightingState,
    /// Text settings active at training time, recorded informationally;
    /// tokenization settings must be restated when applying.
    pub text_settings: TextConfig,
}

impl Codebook {
    /// Sub-bag layout: numeric feature classes ascending, then the text
    /// dictionary.
    pub fn layout(&self) -> BagLayout {
        let mut segments: Vec<BagSegment> = self
            .numeric
            .values()
            .map(|cb| BagSegment {
                source: SegmentSource::Numeric(cb.feature_class()),
                len: cb.bag_size(),
            })
            .collect();
        if let Some(dict) = &self.dictionary {
            segments.push(BagSegment {
                source: SegmentSource::Text,
                len: dict.len(),
            });
        }
        BagLayout { segments }
    }

    pub fn bag_len(&self) -> usize {
        self.layout().total_len()
    }
}
