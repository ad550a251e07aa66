//! Segmentation of frame streams into labeled windows.
//!
//! Window centers sit on the hop grid t_k = k * hop, starting at 0 and
//! running while t_k does not pass the instance's last frame time. A window
//! covers the half-open interval [t_k - width/2, t_k + width/2). All grid
//! and membership arithmetic runs on millisecond-quantized times, matching
//! the label table keys, so float noise cannot shift a boundary.

use std::ops::Range;

use crate::dataset::{quantize_ms, Dataset, LabelTable, TimeMs};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowingConfig {
    pub width: f64,
    pub hop: f64,
}

impl WindowingConfig {
    pub fn new(width: f64, hop: f64) -> Result<WindowingConfig> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(width) || !positive(hop) {
            return Err(Error::data(format!(
                "windowing: width and hop must be positive (got {width} and {hop})"
            )));
        }
        if quantize_ms(width) < 1 || quantize_ms(hop) < 1 {
            return Err(Error::data(
                "windowing: width and hop must be at least 1 ms",
            ));
        }
        Ok(WindowingConfig { width, hop })
    }
}

/// One output segment: the frames (a contiguous range into the dataset's
/// time-sorted frame list) plus the identifying name, center, and label.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub name: String,
    /// Window center in seconds; `None` in whole-instance mode.
    pub center: Option<f64>,
    pub label: Option<String>,
    pub frame_range: Range<usize>,
}

/// Cut every instance into hop-grid windows. With `cfg == None` each
/// instance becomes a single whole-instance window, labeled by name alone
/// from the label table, or failing that from the instance's label column.
/// In windowed mode every window center must have a label table entry.
pub fn segment_windows(
    ds: &Dataset,
    cfg: Option<&WindowingConfig>,
    labels: &LabelTable,
) -> Result<Vec<Window>> {
    match cfg {
        None => Ok(ds
            .instances()
            .iter()
            .map(|(name, range)| {
                let label = labels
                    .get_quantized(name, None)
                    .map(str::to_string)
                    .or_else(|| {
                        ds.frames()[range.clone()]
                            .first()
                            .and_then(|f| f.label.clone())
                    });
                Window {
                    name: name.clone(),
                    center: None,
                    label,
                    frame_range: range.clone(),
                }
            })
            .collect()),
        Some(cfg) => {
            if !ds.has_time() {
                return Err(Error::data(
                    "windowing: input has no time column",
                ));
            }
            let width_ms = quantize_ms(cfg.width);
            let hop_ms = quantize_ms(cfg.hop);
            let mut windows = Vec::new();
            for (name, range) in ds.instances() {
                if range.is_empty() {
                    continue;
                }
                let times: Vec<TimeMs> = ds.frames()[range.clone()]
                    .iter()
                    .map(|f| quantize_ms(f.time.expect("has_time checked")))
                    .collect();
                let last = *times.last().unwrap();
                let n = times.len();
                let mut lo = 0usize;
                let mut hi = 0usize;
                let mut k: TimeMs = 0;
                loop {
                    let center = k * hop_ms;
                    if center > last {
                        break;
                    }
                    // Frame t is inside iff -width <= 2 * (t - center) < width.
                    while lo < n && 2 * (times[lo] - center) < -width_ms {
                        lo += 1;
                    }
                    if hi < lo {
                        hi = lo;
                    }
                    while hi < n && 2 * (times[hi] - center) < width_ms {
                        hi += 1;
                    }
                    let center_secs = center as f64 / 1000.0;
                    let label = labels
                        .get_quantized(name, Some(center))
                        .ok_or_else(|| {
                            Error::data(format!(
                                "windowing: missing label for instance \"{name}\" \
                                 at t={center_secs:.3}"
                            ))
                        })?
                        .to_string();
                    windows.push(Window {
                        name: name.clone(),
                        center: Some(center_secs),
                        label: Some(label),
                        frame_range: range.start + lo..range.start + hi,
                    });
                    k += 1;
                }
            }
            Ok(windows)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Frame;
    use std::collections::BTreeMap as Map;

    fn timed_ds(name: &str, times: &[f64]) -> Dataset {
        let frames = times
            .iter()
            .map(|&t| Frame {
                name: name.to_string(),
                time: Some(t),
                label: None,
                numeric: Map::from([(1u8, vec![t])]),
                text: None,
            })
            .collect();
        Dataset::from_frames(frames).unwrap()
    }

    fn labels_for_centers(name: &str, centers: &[f64]) -> LabelTable {
        let mut t = LabelTable::new();
        for &c in centers {
            t.insert(name, Some(c), format!("{c}")).unwrap();
        }
        t
    }

    #[test]
    fn half_open_centered_windows() {
        // Frames every 0.5 s over [0, 3.5]; width 2, hop 1 -> centers 0..=3.
        let times: Vec<f64> = (0..8).map(|i| i as f64 * 0.5).collect();
        let ds = timed_ds("A", &times);
        let labels = labels_for_centers("A", &[0.0, 1.0, 2.0, 3.0]);
        let cfg = WindowingConfig::new(2.0, 1.0).unwrap();
        let windows = segment_windows(&ds, Some(&cfg), &labels).unwrap();
        assert_eq!(windows.len(), 4);

        let member_times = |w: &Window| -> Vec<f64> {
            ds.frames()[w.frame_range.clone()]
                .iter()
                .map(|f| f.time.unwrap())
                .collect()
        };
        assert_eq!(member_times(&windows[0]), vec![0.0, 0.5]);
        assert_eq!(member_times(&windows[1]), vec![0.0, 0.5, 1.0, 1.5]);
        assert_eq!(member_times(&windows[2]), vec![1.0, 1.5, 2.0, 2.5]);
        assert_eq!(member_times(&windows[3]), vec![2.0, 2.5, 3.0, 3.5]);
        assert_eq!(windows[1].label.as_deref(), Some("1"));
    }

    #[test]
    fn center_count_follows_hop_grid() {
        // 300 s stream, hop 0.8 -> floor(300 / 0.8) + 1 = 376 centers.
        let times: Vec<f64> = (0..=3000).map(|i| i as f64 * 0.1).collect();
        let ds = timed_ds("A", &times);
        let centers: Vec<f64> = (0..=375).map(|k| k as f64 * 0.8).collect();
        let labels = labels_for_centers("A", &centers);
        let cfg = WindowingConfig::new(8.0, 0.8).unwrap();
        let windows = segment_windows(&ds, Some(&cfg), &labels).unwrap();
        assert_eq!(windows.len(), 376);
    }

    #[test]
    fn missing_label_names_instant() {
        let ds = timed_ds("A", &[0.0, 1.0, 2.0]);
        let labels = labels_for_centers("A", &[0.0]);
        let cfg = WindowingConfig::new(2.0, 1.0).unwrap();
        let err = segment_windows(&ds, Some(&cfg), &labels).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("\"A\""), "{msg}");
        assert!(msg.contains("t=1.000"), "{msg}");
    }

    #[test]
    fn whole_instance_mode() {
        let frames = vec![
            Frame {
                name: "A".into(),
                time: None,
                label: None,
                numeric: Map::from([(1u8, vec![1.0])]),
                text: None,
            },
            Frame {
                name: "B".into(),
                time: None,
                label: None,
                numeric: Map::from([(1u8, vec![2.0])]),
                text: None,
            },
        ];
        let ds = Dataset::from_frames(frames).unwrap();
        let mut labels = LabelTable::new();
        labels.insert("A", None, "pos".into()).unwrap();
        let windows = segment_windows(&ds, None, &labels).unwrap();
        assert_eq!(windows.len(), 2);
        assert_eq!(windows[0].label.as_deref(), Some("pos"));
        assert_eq!(windows[1].label, None);
        assert_eq!(windows[0].center, None);
    }

    #[test]
    fn whole_instance_label_falls_back_to_label_column() {
        let frames = vec![Frame {
            name: "A".into(),
            time: None,
            label: Some("neg".into()),
            numeric: Map::from([(1u8, vec![1.0])]),
            text: None,
        }];
        let ds = Dataset::from_frames(frames).unwrap();
        // No table entry: the instance's label column wins.
        let windows = segment_windows(&ds, None, &LabelTable::new()).unwrap();
        assert_eq!(windows[0].label.as_deref(), Some("neg"));
        // A table entry overrides the column.
        let mut labels = LabelTable::new();
        labels.insert("A", None, "pos".into()).unwrap();
        let windows = segment_windows(&ds, None, &labels).unwrap();
        assert_eq!(windows[0].label.as_deref(), Some("pos"));
    }

    #[test]
    fn windowed_mode_needs_time() {
        let frames = vec![Frame {
            name: "A".into(),
            time: None,
            label: None,
            numeric: Map::from([(1u8, vec![1.0])]),
            text: None,
        }];
        let ds = Dataset::from_frames(frames).unwrap();
        let cfg = WindowingConfig::new(1.0, 1.0).unwrap();
        assert!(segment_windows(&ds, Some(&cfg), &LabelTable::new()).is_err());
    }

    #[test]
    fn frame_window_membership_is_bounded() {
        // No frame lands in more than ceil(width / hop) windows.
        let times: Vec<f64> = (0..50).map(|i| i as f64 * 0.13).collect();
        let ds = timed_ds("A", &times);
        let cfg = WindowingConfig::new(1.5, 0.4).unwrap();
        let centers: Vec<f64> = (0..200)
            .map(|k| k as f64 * 0.4)
            .take_while(|&c| quantize_ms(c) <= quantize_ms(*times.last().unwrap()))
            .collect();
        let labels = labels_for_centers("A", &centers);
        let windows = segment_windows(&ds, Some(&cfg), &labels).unwrap();
        let bound = (1.5f64 / 0.4).ceil() as usize;
        let mut membership = vec![0usize; ds.len()];
        for w in &windows {
            for i in w.frame_range.clone() {
                membership[i] += 1;
            }
        }
        assert!(membership.iter().all(|&m| m <= bound));
        // And every member is inside the half-open interval.
        for w in &windows {
            let c = quantize_ms(w.center.unwrap());
            for f in &ds.frames()[w.frame_range.clone()] {
                let d = 2 * (quantize_ms(f.time.unwrap()) - c);
                assert!((-1500..1500).contains(&d));
            }
        }
    }

    #[test]
    fn invalid_config_rejected() {
        assert!(WindowingConfig::new(0.0, 1.0).is_err());
        assert!(WindowingConfig::new(1.0, -1.0).is_err());
        assert!(WindowingConfig::new(1.0, 0.0001).is_err());
    }
}
