//! Term-frequency weighting and histogram normalization.
//!
//! Order is fixed: raw TF, then logarithmic weighting, then IDF, then
//! normalization; each stage runs only when its flag is set. The weighting
//! flags and the document-frequency table learned on training bags travel in
//! the codebook file, so applying a stored codebook reproduces the training
//! weighting without restating flags.

use crate::dataset::{Bag, BagLayout};
use crate::error::{Error, Result};

/// Weighting flags plus the IDF statistics learned at training time.
/// `df[i]` counts the training bags where word `i` is present; `n` is the
/// training bag count.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightingState {
    pub log_flag: bool,
    pub idf_flag: bool,
    pub df: Vec<u64>,
    pub n: u64,
}

impl WeightingState {
    pub fn none() -> WeightingState {
        WeightingState {
            log_flag: false,
            idf_flag: false,
            df: Vec::new(),
            n: 0,
        }
    }
}

/// Logarithmic TF compression: each entry x becomes log10(x + 1).
pub fn apply_log_tf(tf: &mut [f64]) -> Result<()> {
    for x in tf.iter_mut() {
        if *x < 0.0 {
            return Err(Error::data(format!(
                "log-TF weighting: negative term frequency {x}"
            )));
        }
        *x = (*x + 1.0).log10();
    }
    Ok(())
}

/// Count document frequencies over the training bags.
pub fn fit_idf(bags: &[Bag]) -> Result<WeightingState> {
    let first = bags
        .first()
        .ok_or_else(|| Error::data("IDF weighting: no bags to fit on"))?;
    let mut df = vec![0u64; first.tf.len()];
    for bag in bags {
        if bag.tf.len() != df.len() {
            return Err(Error::data(format!(
                "IDF weighting: bag \"{}\" has {} entries, expected {}",
                bag.name,
                bag.tf.len(),
                df.len()
            )));
        }
        for (d, &x) in df.iter_mut().zip(&bag.tf) {
            if x > 0.0 {
                *d += 1;
            }
        }
    }
    Ok(WeightingState {
        log_flag: false,
        idf_flag: true,
        df,
        n: bags.len() as u64,
    })
}

/// Inverse document-frequency weighting: each entry x becomes
/// x * log10(n / df). Dimensions never seen at fit time (df = 0) map to 0.
pub fn apply_idf(tf: &mut [f64], w: &WeightingState) -> Result<()> {
    if tf.len() != w.df.len() {
        return Err(Error::data(format!(
            "IDF weighting: bag has {} entries but the document-frequency \
             table covers {}",
            tf.len(),
            w.df.len()
        )));
    }
    for (x, &df) in tf.iter_mut().zip(&w.df) {
        if df == 0 {
            *x = 0.0;
        } else {
            *x *= (w.n as f64 / df as f64).log10();
        }
    }
    Ok(())
}

/// Divide each sub-bag independently by its L1 mass. Zero-mass sub-bags are
/// left unchanged (an empty window legitimately produces an all-zero bag).
pub fn normalize_bag(tf: &mut [f64], layout: &BagLayout) -> Result<()> {
    if tf.len() != layout.total_len() {
        return Err(Error::data(format!(
            "normalization: bag has {} entries but the layout covers {}",
            tf.len(),
            layout.total_len()
        )));
    }
    if tf.iter().any(|x| !x.is_finite()) {
        return Err(Error::data("normalization: non-finite term frequency"));
    }
    for range in layout.ranges() {
        let mass: f64 = tf[range.clone()].iter().map(|x| x.abs()).sum();
        if mass > 0.0 {
            for x in &mut tf[range] {
                *x /= mass;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{BagSegment, SegmentSource};

    fn bag(name: &str, tf: Vec<f64>) -> Bag {
        Bag {
            name: name.into(),
            time: None,
            label: None,
            tf,
        }
    }

    fn layout(sizes: &[usize]) -> BagLayout {
        BagLayout {
            segments: sizes
                .iter()
                .map(|&len| BagSegment {
                    source: SegmentSource::Numeric(1),
                    len,
                })
                .collect(),
        }
    }

    #[test]
    fn log_tf_forced_values() {
        let mut tf = vec![0.0, 9.0, 99.0];
        apply_log_tf(&mut tf).unwrap();
        assert_eq!(tf, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn log_tf_rejects_negative() {
        let mut tf = vec![-0.5];
        assert!(apply_log_tf(&mut tf).is_err());
    }

    #[test]
    fn log_tf_monotone_and_zero_fixed() {
        let values = [0.0, 0.25, 1.0, 4.0, 17.5, 1e6];
        let mut tf = values.to_vec();
        apply_log_tf(&mut tf).unwrap();
        assert_eq!(tf[0], 0.0);
        for pair in tf.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn idf_formula() {
        // tf=2, n=100, df=1 -> 2 * log10(100) = 4.
        let w = WeightingState {
            log_flag: false,
            idf_flag: true,
            df: vec![1, 100, 10],
            n: 100,
        };
        let mut tf = vec![2.0, 7.0, 5.0];
        apply_idf(&mut tf, &w).unwrap();
        assert!((tf[0] - 4.0).abs() < 1e-12);
        // A word in all n bags gets factor log10(1) = 0.
        assert_eq!(tf[1], 0.0);
        assert!((tf[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn idf_unseen_dimension_degrades_to_zero() {
        let w = WeightingState {
            log_flag: false,
            idf_flag: true,
            df: vec![0],
            n: 10,
        };
        let mut tf = vec![3.0];
        apply_idf(&mut tf, &w).unwrap();
        assert_eq!(tf, vec![0.0]);
    }

    #[test]
    fn idf_fit_counts_presence() {
        let bags = vec![
            bag("a", vec![1.0, 0.0, 2.0]),
            bag("b", vec![0.5, 0.0, 0.0]),
            bag("c", vec![0.0, 0.0, 1.0]),
        ];
        let w = fit_idf(&bags).unwrap();
        assert_eq!(w.df, vec![2, 0, 2]);
        assert_eq!(w.n, 3);
    }

    #[test]
    fn idf_full_presence_zeroes_everywhere() {
        let mut bags = vec![bag("a", vec![1.0, 3.0]), bag("b", vec![2.0, 0.5])];
        let w = fit_idf(&bags).unwrap();
        for b in &mut bags {
            apply_idf(&mut b.tf, &w).unwrap();
            assert_eq!(b.tf, vec![0.0, 0.0]);
        }
    }

    #[test]
    fn idf_dimension_mismatch() {
        let w = fit_idf(&[bag("a", vec![1.0, 2.0])]).unwrap();
        let mut tf = vec![1.0];
        assert!(apply_idf(&mut tf, &w).is_err());
        assert!(fit_idf(&[]).is_err());
    }

    #[test]
    fn normalize_per_sub_bag() {
        let mut tf = vec![2.0, 2.0, 0.0, 0.0, 1.0, 3.0];
        normalize_bag(&mut tf, &layout(&[2, 2, 2])).unwrap();
        assert_eq!(tf, vec![0.5, 0.5, 0.0, 0.0, 0.25, 0.75]);
    }

    #[test]
    fn normalize_zero_sub_bag_unchanged() {
        let mut tf = vec![0.0, 0.0];
        normalize_bag(&mut tf, &layout(&[2])).unwrap();
        assert_eq!(tf, vec![0.0, 0.0]);
    }

    #[test]
    fn normalize_rejects_non_finite() {
        let mut tf = vec![f64::NAN, 1.0];
        assert!(normalize_bag(&mut tf, &layout(&[2])).is_err());
    }

    #[test]
    fn normalize_masses_reach_one() {
        // Windows of very different sizes end up with unit-mass sub-bags.
        for frames in [3usize, 30] {
            let mut tf = vec![0.0; 4];
            for i in 0..frames {
                tf[i % 4] += 1.0;
            }
            normalize_bag(&mut tf, &layout(&[4])).unwrap();
            let mass: f64 = tf.iter().sum();
            assert!((mass - 1.0).abs() < 1e-12);
        }
    }
}
