//! Core data model: frames, datasets, label tables, and output bags.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use crate::error::{Error, Result};

/// Milliseconds since stream start. Times are quantized to 1 ms wherever they
/// act as keys (label lookup, window membership) so that float noise cannot
/// split an instant into two.
pub type TimeMs = i64;

pub fn quantize_ms(seconds: f64) -> TimeMs {
    (seconds * 1000.0).round() as TimeMs
}

/// One input row: an instance name plus its per-feature-class numeric
/// subvectors and/or text at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub name: String,
    pub time: Option<f64>,
    pub label: Option<String>,
    /// Feature class (1..=9) to subvector. Constant key set and vector
    /// lengths across all frames of a dataset.
    pub numeric: BTreeMap<u8, Vec<f64>>,
    pub text: Option<String>,
}

/// Frames grouped by instance name (first-appearance order) and time-sorted
/// within each instance. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    frames: Vec<Frame>,
    /// Feature class to dimensionality.
    dims: BTreeMap<u8, usize>,
    /// (name, frame index range) per instance, in first-appearance order.
    instances: Vec<(String, Range<usize>)>,
    has_time: bool,
    has_text: bool,
}

impl Dataset {
    /// Group frames by name, sort each instance by time when present, and
    /// validate that every frame carries the same feature classes with
    /// constant dimensionality.
    pub fn from_frames(frames: Vec<Frame>) -> Result<Dataset> {
        let mut dims: BTreeMap<u8, usize> = BTreeMap::new();
        let mut has_time = false;
        let mut has_text = false;
        if let Some(first) = frames.first() {
            for (&class, vec) in &first.numeric {
                dims.insert(class, vec.len());
            }
            has_time = first.time.is_some();
            has_text = first.text.is_some();
        }
        for (i, frame) in frames.iter().enumerate() {
            if frame.time.is_some() != has_time {
                return Err(Error::data(format!(
                    "frame {}: time present in some frames but not all",
                    i + 1
                )));
            }
            if frame.text.is_some() != has_text {
                return Err(Error::data(format!(
                    "frame {}: text present in some frames but not all",
                    i + 1
                )));
            }
            if frame.numeric.len() != dims.len()
                || frame
                    .numeric
                    .iter()
                    .any(|(class, vec)| dims.get(class) != Some(&vec.len()))
            {
                return Err(Error::data(format!(
                    "frame {}: numeric feature layout differs from the first frame",
                    i + 1
                )));
            }
        }

        // Group by name preserving first-appearance order of names.
        let mut order: Vec<String> = Vec::new();
        let mut by_name: HashMap<String, Vec<Frame>> = HashMap::new();
        for frame in frames {
            if !by_name.contains_key(&frame.name) {
                order.push(frame.name.clone());
            }
            by_name.entry(frame.name.clone()).or_default().push(frame);
        }

        let mut grouped = Vec::new();
        let mut instances = Vec::new();
        for name in order {
            let mut group = by_name.remove(&name).unwrap();
            if has_time {
                group.sort_by(|a, b| {
                    a.time
                        .partial_cmp(&b.time)
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            }
            let start = grouped.len();
            grouped.extend(group);
            instances.push((name, start..grouped.len()));
        }

        Ok(Dataset {
            frames: grouped,
            dims,
            instances,
            has_time,
            has_text,
        })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    /// Feature class to dimensionality, ascending by class.
    pub fn dims(&self) -> &BTreeMap<u8, usize> {
        &self.dims
    }

    pub fn numeric_classes(&self) -> Vec<u8> {
        self.dims.keys().copied().collect()
    }

    pub fn has_time(&self) -> bool {
        self.has_time
    }

    pub fn has_text(&self) -> bool {
        self.has_text
    }

    /// Instances in first-appearance order with their frame ranges.
    pub fn instances(&self) -> &[(String, Range<usize>)] {
        &self.instances
    }

    /// Subvectors of one feature class across all frames, in frame order.
    pub fn class_vectors(&self, class: u8) -> Vec<Vec<f64>> {
        self.frames
            .iter()
            .map(|f| f.numeric[&class].clone())
            .collect()
    }

    /// Keep exactly the frames where `keep` is true, preserving order.
    pub fn retain_frames(&self, keep: &[bool]) -> Result<Dataset> {
        debug_assert_eq!(keep.len(), self.frames.len());
        let kept: Vec<Frame> = self
            .frames
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(f, _)| f.clone())
            .collect();
        let mut ds = Dataset::from_frames(kept)?;
        // An empty filtered dataset still describes the same feature layout.
        if ds.frames.is_empty() {
            ds.dims = self.dims.clone();
            ds.has_time = self.has_time;
            ds.has_text = self.has_text;
        }
        Ok(ds)
    }

    /// Apply a function to every numeric value, preserving structure.
    pub fn map_numeric(&self, mut f: impl FnMut(u8, usize, f64) -> f64) -> Dataset {
        let mut out = self.clone();
        for frame in &mut out.frames {
            for (&class, vec) in frame.numeric.iter_mut() {
                for (dim, value) in vec.iter_mut().enumerate() {
                    *value = f(class, dim, *value);
                }
            }
        }
        out
    }
}

/// Target values keyed by instance name and, for windowed data, the window
/// center instant (quantized to 1 ms).
#[derive(Debug, Clone, Default)]
pub struct LabelTable {
    entries: HashMap<(String, Option<TimeMs>), String>,
}

impl LabelTable {
    pub fn new() -> LabelTable {
        LabelTable::default()
    }

    pub fn insert(&mut self, name: &str, time: Option<f64>, label: String) -> Result<()> {
        let key = (name.to_string(), time.map(quantize_ms));
        if self.entries.contains_key(&key) {
            return Err(Error::data(match key.1 {
                Some(ms) => format!(
                    "duplicate label for instance \"{name}\" at t={:.3}",
                    ms as f64 / 1000.0
                ),
                None => format!("duplicate label for instance \"{name}\""),
            }));
        }
        self.entries.insert(key, label);
        Ok(())
    }

    pub fn get(&self, name: &str, time: Option<f64>) -> Option<&str> {
        self.get_quantized(name, time.map(quantize_ms))
    }

    pub fn get_quantized(&self, name: &str, time_ms: Option<TimeMs>) -> Option<&str> {
        self.entries
            .get(&(name.to_string(), time_ms))
            .map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One output instance: the concatenated term-frequency histogram over all
/// sub-codebooks, plus identifying name, window center, and label.
#[derive(Debug, Clone, PartialEq)]
pub struct Bag {
    pub name: String,
    pub time: Option<f64>,
    pub label: Option<String>,
    pub tf: Vec<f64>,
}

/// Where each slice of a bag's tf vector comes from. Sub-bags are laid out
/// in a fixed order: numeric feature classes ascending, then the text
/// dictionary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BagLayout {
    pub segments: Vec<BagSegment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BagSegment {
    pub source: SegmentSource,
    pub len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentSource {
    Numeric(u8),
    Text,
}

impl BagLayout {
    pub fn total_len(&self) -> usize {
        self.segments.iter().map(|s| s.len).sum()
    }

    /// Index ranges of the sub-bags, in layout order.
    pub fn ranges(&self) -> Vec<Range<usize>> {
        let mut out = Vec::with_capacity(self.segments.len());
        let mut start = 0;
        for seg in &self.segments {
            out.push(start..start + seg.len);
            start += seg.len;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(name: &str, time: f64, value: f64) -> Frame {
        Frame {
            name: name.to_string(),
            time: Some(time),
            label: None,
            numeric: BTreeMap::from([(1u8, vec![value])]),
            text: None,
        }
    }

    #[test]
    fn groups_by_name_and_sorts_by_time() {
        let ds = Dataset::from_frames(vec![
            frame("B", 1.0, 10.0),
            frame("A", 2.0, 1.0),
            frame("B", 0.5, 20.0),
            frame("A", 1.0, 2.0),
        ])
        .unwrap();
        let names: Vec<&str> = ds.instances().iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["B", "A"]);
        let times: Vec<f64> = ds.frames().iter().map(|f| f.time.unwrap()).collect();
        assert_eq!(times, [0.5, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn inconsistent_dims_rejected() {
        let mut bad = frame("A", 1.0, 0.0);
        bad.numeric.insert(1, vec![1.0, 2.0]);
        let err = Dataset::from_frames(vec![frame("A", 0.0, 0.0), bad]).unwrap_err();
        assert!(err.to_string().contains("frame 2"));
    }

    #[test]
    fn mixed_time_presence_rejected() {
        let mut no_time = frame("A", 0.0, 1.0);
        no_time.time = None;
        assert!(Dataset::from_frames(vec![frame("A", 0.0, 1.0), no_time]).is_err());
    }

    #[test]
    fn empty_dataset_is_valid() {
        let ds = Dataset::from_frames(vec![]).unwrap();
        assert!(ds.is_empty());
        assert!(ds.instances().is_empty());
    }

    #[test]
    fn retain_keeps_layout_when_emptied() {
        let ds = Dataset::from_frames(vec![frame("A", 0.0, 1.0)]).unwrap();
        let empty = ds.retain_frames(&[false]).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.dims(), ds.dims());
        assert!(empty.has_time());
    }

    #[test]
    fn label_table_rejects_duplicates() {
        let mut t = LabelTable::new();
        t.insert("A", Some(0.0), "0.1".into()).unwrap();
        t.insert("A", Some(0.8), "0.2".into()).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.insert("A", Some(0.0), "0.3".into()).is_err());
    }

    #[test]
    fn label_lookup_quantizes_to_ms() {
        let mut t = LabelTable::new();
        t.insert("A", Some(0.8), "x".into()).unwrap();
        // 0.8000004 and 0.8 quantize to the same millisecond.
        assert_eq!(t.get("A", Some(0.8000004)), Some("x"));
        assert_eq!(t.get("A", Some(0.801)), None);
    }

    #[test]
    fn name_only_labels() {
        let mut t = LabelTable::new();
        t.insert("A", None, "pos".into()).unwrap();
        assert_eq!(t.get("A", None), Some("pos"));
        assert!(t.insert("A", None, "neg".into()).is_err());
    }
}
