//! Activity-based frame removal and feature scaling.
//!
//! Scaling parameters are learned once on training data and frozen in the
//! codebook file, so test-time runs scale their input exactly as training
//! did. The activity filter runs on raw values before scaling is fitted,
//! which keeps inactive frames out of the scaling statistics.

use std::collections::BTreeMap;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingMode {
    None,
    /// Per-dimension mean 0, population standard deviation 1.
    Standardize,
    /// Per-dimension min 0, max 1.
    Normalize,
}

impl ScalingMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScalingMode::None => "none",
            ScalingMode::Standardize => "standardize",
            ScalingMode::Normalize => "normalize",
        }
    }
}

impl std::str::FromStr for ScalingMode {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<ScalingMode, ()> {
        match s {
            "none" => Ok(ScalingMode::None),
            "standardize" => Ok(ScalingMode::Standardize),
            "normalize" => Ok(ScalingMode::Normalize),
            _ => Err(()),
        }
    }
}

/// Per-feature-class offset and scale vectors. Application is
/// `(x - offset) / scale`; zero scales are replaced by 1 at fit time so
/// constant dimensions pass through as zeros instead of dividing by zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingParams {
    pub mode: ScalingMode,
    pub per_class: BTreeMap<u8, ClassScaling>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassScaling {
    pub offset: Vec<f64>,
    pub scale: Vec<f64>,
}

impl ScalingParams {
    pub fn identity() -> ScalingParams {
        ScalingParams {
            mode: ScalingMode::None,
            per_class: BTreeMap::new(),
        }
    }
}

/// Keep exactly the frames whose raw value at `(feature_class, dim)` is at
/// least `threshold`. Frame order is preserved.
pub fn filter_activity(
    ds: &Dataset,
    feature_class: u8,
    dim: usize,
    threshold: f64,
) -> Result<Dataset> {
    let dims = *ds.dims().get(&feature_class).ok_or_else(|| {
        Error::data(format!(
            "activity filter: feature class {feature_class} not present in the input"
        ))
    })?;
    if dim >= dims {
        return Err(Error::data(format!(
            "activity filter: dimension {dim} out of range for feature class \
             {feature_class} ({dims} dims)"
        )));
    }
    let keep: Vec<bool> = ds
        .frames()
        .iter()
        .map(|f| f.numeric[&feature_class][dim] >= threshold)
        .collect();
    ds.retain_frames(&keep)
}

/// Learn scaling parameters from a dataset. With `Standardize` the offset is
/// the per-dimension mean and the scale the population standard deviation;
/// with `Normalize` the offset is the minimum and the scale the range.
pub fn fit_scaling(ds: &Dataset, mode: ScalingMode) -> Result<ScalingParams> {
    if mode == ScalingMode::None {
        return Ok(ScalingParams::identity());
    }
    if ds.is_empty() {
        return Err(Error::data(
            "scaling: cannot fit parameters on an empty dataset",
        ));
    }
    let n = ds.len() as f64;
    let mut per_class = BTreeMap::new();
    for (&class, &dims) in ds.dims() {
        let mut offset = vec![0.0; dims];
        let mut scale = vec![0.0; dims];
        match mode {
            ScalingMode::Standardize => {
                let mut sum = vec![0.0; dims];
                for frame in ds.frames() {
                    for (s, &x) in sum.iter_mut().zip(&frame.numeric[&class]) {
                        *s += x;
                    }
                }
                for (o, s) in offset.iter_mut().zip(&sum) {
                    *o = s / n;
                }
                let mut sq = vec![0.0; dims];
                for frame in ds.frames() {
                    for ((q, &x), o) in sq.iter_mut().zip(&frame.numeric[&class]).zip(&offset) {
                        let d = x - o;
                        *q += d * d;
                    }
                }
                for (sc, q) in scale.iter_mut().zip(&sq) {
                    *sc = (q / n).sqrt();
                }
            }
            ScalingMode::Normalize => {
                let mut min = vec![f64::INFINITY; dims];
                let mut max = vec![f64::NEG_INFINITY; dims];
                for frame in ds.frames() {
                    for ((lo, hi), &x) in min.iter_mut().zip(max.iter_mut()).zip(&frame.numeric[&class]) {
                        *lo = lo.min(x);
                        *hi = hi.max(x);
                    }
                }
                offset = min.clone();
                for (sc, (lo, hi)) in scale.iter_mut().zip(min.iter().zip(&max)) {
                    *sc = hi - lo;
                }
            }
            ScalingMode::None => unreachable!(),
        }
        // Constant feature guard.
        for sc in scale.iter_mut() {
            if *sc == 0.0 {
                *sc = 1.0;
            }
        }
        per_class.insert(class, ClassScaling { offset, scale });
    }
    Ok(ScalingParams { mode, per_class })
}

/// Apply `(x - offset) / scale` to every numeric value. `ScalingMode::None`
/// is the identity.
pub fn apply_scaling(ds: &Dataset, params: &ScalingParams) -> Result<Dataset> {
    if params.mode == ScalingMode::None {
        return Ok(ds.clone());
    }
    for (&class, &dims) in ds.dims() {
        let cs = params.per_class.get(&class).ok_or_else(|| {
            Error::data(format!(
                "scaling: no parameters for feature class {class}"
            ))
        })?;
        if cs.offset.len() != dims || cs.scale.len() != dims {
            return Err(Error::data(format!(
                "scaling: feature class {class} has {dims} dims but parameters \
                 cover {}",
                cs.offset.len()
            )));
        }
    }
    Ok(ds.map_numeric(|class, dim, x| {
        let cs = &params.per_class[&class];
        (x - cs.offset[dim]) / cs.scale[dim]
    }))
}
