//! Crossmodal bag-of-words feature extraction.
//!
//! crossbag turns streams of frame-level numeric descriptors and/or raw text
//! into fixed-length histogram feature vectors: numeric frames are vector-
//! quantized against learned codebooks, text is tokenized against a learned
//! dictionary, and the per-modality term-frequency histograms are fused into
//! one bag per instance or per time window. Weighting (log TF, IDF),
//! normalization, and scaling parameters learned at training time travel in
//! the codebook file, so a stored model reproduces its training-time
//! processing on new data.

pub mod attributes;
pub mod bagging;
pub mod cli;
pub mod codebook;
pub mod dataset;
pub mod error;
pub mod io;
pub mod metrics;
pub mod postprocess;
pub mod preprocess;
pub mod rng;

pub use attributes::{AttributeSpec, ColumnRole};
pub use dataset::{Bag, BagLayout, Dataset, Frame, LabelTable};
pub use error::{Error, Result};
