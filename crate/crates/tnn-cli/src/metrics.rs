//! Metrics plumbing: the JSON-lines sample stream, convergence and
//! winner-purity tracking, and similarity measures against class means.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use tnn_core::dataio::DataError;
use tnn_core::{Reward, SpikeTime, Volley};

use crate::CliError;

/// One line of metrics.jsonl; exactly one record per consumed sample.
#[derive(Debug, Clone, Serialize)]
pub struct SampleRecord {
    pub sample: usize,
    pub winner: Option<usize>,
    pub label: Option<usize>,
    /// +1 / -1 / 0; absent outside supervised updates.
    pub reward: Option<i8>,
    pub mean_abs_dw: f64,
}

pub fn reward_code(reward: Option<Reward>) -> Option<i8> {
    match reward {
        Some(Reward::Plus) => Some(1),
        Some(Reward::Minus) => Some(-1),
        Some(Reward::Zero) => Some(0),
        Some(Reward::Unsupervised) | None => None,
    }
}

pub struct MetricsWriter {
    out: BufWriter<File>,
}

impl MetricsWriter {
    pub fn create(path: &Path) -> Result<MetricsWriter, CliError> {
        let file = File::create(path)
            .map_err(|source| DataError::Io { path: path.to_path_buf(), source })?;
        Ok(MetricsWriter { out: BufWriter::new(file) })
    }

    pub fn write(&mut self, record: &SampleRecord) -> Result<(), CliError> {
        serde_json::to_writer(&mut self.out, record)
            .map_err(|e| CliError::Config(format!("metrics serialization failed: {e}")))?;
        self.out.write_all(b"\n").map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.out.flush().map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Windowed mean |dw| with a latched first-crossing sample index.
pub struct ConvergenceTracker {
    window: usize,
    epsilon: f64,
    buf: VecDeque<f64>,
    sum: f64,
    converged_at: Option<usize>,
}

impl ConvergenceTracker {
    pub fn new(window: usize, epsilon: f64) -> ConvergenceTracker {
        assert!(window >= 1, "window must hold at least one sample");
        ConvergenceTracker { window, epsilon, buf: VecDeque::new(), sum: 0.0, converged_at: None }
    }

    pub fn push(&mut self, sample: usize, mean_abs_dw: f64) {
        self.buf.push_back(mean_abs_dw);
        self.sum += mean_abs_dw;
        if self.buf.len() > self.window {
            self.sum -= self.buf.pop_front().expect("nonempty");
        }
        if self.converged_at.is_none() && self.buf.len() == self.window && self.mean() < self.epsilon
        {
            self.converged_at = Some(sample);
        }
    }

    fn mean(&self) -> f64 {
        self.sum / self.buf.len() as f64
    }

    pub fn window_mean(&self) -> Option<f64> {
        (self.buf.len() == self.window).then(|| self.mean())
    }

    pub fn converged_at(&self) -> Option<usize> {
        self.converged_at
    }
}

/// Trailing (label, winner) window for purity measurement.
pub struct WinnerWindow {
    cap: usize,
    buf: VecDeque<(usize, Option<usize>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassStat {
    pub label: usize,
    pub samples: usize,
    pub dominant_neuron: Option<usize>,
    /// Fraction of the class's window samples won by the dominant neuron.
    pub purity: f64,
}

impl WinnerWindow {
    pub fn new(cap: usize) -> WinnerWindow {
        assert!(cap >= 1, "window must hold at least one sample");
        WinnerWindow { cap, buf: VecDeque::new() }
    }

    pub fn push(&mut self, label: usize, winner: Option<usize>) {
        self.buf.push_back((label, winner));
        if self.buf.len() > self.cap {
            self.buf.pop_front();
        }
    }

    pub fn class_stats(&self, q: usize) -> Vec<ClassStat> {
        let mut counts = vec![vec![0usize; q]; q];
        let mut totals = vec![0usize; q];
        for &(label, winner) in &self.buf {
            totals[label] += 1;
            if let Some(n) = winner {
                counts[label][n] += 1;
            }
        }
        (0..q)
            .map(|label| {
                let dominant = (0..q).max_by_key(|&n| (counts[label][n], q - n));
                let wins = dominant.map_or(0, |n| counts[label][n]);
                let (dominant, purity) = if totals[label] == 0 || wins == 0 {
                    (None, 0.0)
                } else {
                    (dominant, wins as f64 / totals[label] as f64)
                };
                ClassStat { label, samples: totals[label], dominant_neuron: dominant, purity }
            })
            .collect()
    }
}

/// A spike volley as a plain intensity vector: earlier spikes weigh more
/// (time t maps to 8 - t, silence to 0). Comparable to a weight row.
pub fn encoded_intensity(volley: &Volley) -> Vec<f64> {
    volley
        .iter()
        .map(|t: &SpikeTime| t.cycle().map_or(0.0, |c| 8.0 - f64::from(c)))
        .collect()
}

/// Per-class mean of encoded images; classes absent from the data get a
/// zero vector.
pub fn class_means(volleys: &[Volley], labels: &[usize], q: usize, p: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0f64; p]; q];
    let mut counts = vec![0usize; q];
    for (volley, &label) in volleys.iter().zip(labels) {
        counts[label] += 1;
        for (acc, v) in sums[label].iter_mut().zip(encoded_intensity(volley)) {
            *acc += v;
        }
    }
    for (sum, &count) in sums.iter_mut().zip(&counts) {
        if count > 0 {
            for v in sum.iter_mut() {
                *v /= count as f64;
            }
        }
    }
    sums
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "cosine over mismatched lengths");
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    pub label: usize,
    pub samples_in_window: usize,
    pub dominant_neuron: Option<usize>,
    pub purity: f64,
    pub cosine_to_class_mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrainSummary {
    pub samples: usize,
    pub converged: bool,
    pub converged_at: Option<usize>,
    pub final_window_mean_abs_dw: Option<f64>,
    pub classes: Vec<ClassSummary>,
    /// Classes whose dominant winner has purity and cosine above the
    /// configured thresholds.
    pub classes_meeting_criteria: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IncrementalSummary {
    pub phase1_samples: usize,
    pub phase2_samples_consumed: usize,
    pub acquired: bool,
    /// Phase-2 sample count at which some neuron first matched the
    /// digit-9 mean; 0 means the checkpoint already matched.
    pub acquisition_sample: Option<usize>,
    pub acquiring_neuron: Option<usize>,
    pub best_cosine: f64,
    pub status: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergence_latches_first_crossing() {
        let mut t = ConvergenceTracker::new(3, 0.5);
        t.push(0, 1.0);
        t.push(1, 0.4);
        assert_eq!(t.converged_at(), None, "window not yet full");
        t.push(2, 0.4);
        assert_eq!(t.converged_at(), None, "mean 0.6 still above");
        t.push(3, 0.4);
        assert_eq!(t.converged_at(), Some(3));
        t.push(4, 9.0);
        assert_eq!(t.converged_at(), Some(3), "latched");
        assert!(t.window_mean().unwrap() > 0.5);
    }

    #[test]
    fn purity_counts_dominant_winner() {
        let mut w = WinnerWindow::new(10);
        for _ in 0..3 {
            w.push(0, Some(2));
        }
        w.push(0, Some(1));
        w.push(1, None);
        let stats = w.class_stats(3);
        assert_eq!(stats[0].dominant_neuron, Some(2));
        assert_eq!(stats[0].purity, 0.75);
        assert_eq!(stats[1].dominant_neuron, None);
        assert_eq!(stats[1].purity, 0.0);
        assert_eq!(stats[2].samples, 0);
    }

    #[test]
    fn purity_window_slides() {
        let mut w = WinnerWindow::new(2);
        w.push(0, Some(0));
        w.push(0, Some(1));
        w.push(0, Some(1));
        let stats = w.class_stats(2);
        assert_eq!(stats[0].samples, 2);
        assert_eq!(stats[0].dominant_neuron, Some(1));
        assert_eq!(stats[0].purity, 1.0);
    }

    #[test]
    fn intensity_maps_early_spikes_high() {
        let v = Volley::new(vec![SpikeTime::at(0), SpikeTime::at(7), SpikeTime::ABSENT]);
        assert_eq!(encoded_intensity(&v), vec![8.0, 1.0, 0.0]);
    }

    #[test]
    fn cosine_basics() {
        assert!((cosine(&[1.0, 0.0], &[2.0, 0.0]) - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 3.0]), 0.0);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 1.0]), 0.0, "zero norm guarded");
    }

    #[test]
    fn class_means_average_encodings() {
        let volleys = vec![
            Volley::new(vec![SpikeTime::at(0), SpikeTime::ABSENT]),
            Volley::new(vec![SpikeTime::at(2), SpikeTime::at(4)]),
        ];
        let means = class_means(&volleys, &[1, 1], 2, 2);
        assert_eq!(means[0], vec![0.0, 0.0]);
        assert_eq!(means[1], vec![7.0, 2.0]);
    }
}
