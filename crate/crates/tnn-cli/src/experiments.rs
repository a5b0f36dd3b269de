//! The experiment entry points: online training, incremental class
//! acquisition, analytical cost estimation, and the cycle-vs-functional
//! engine equivalence check.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use tnn_core::costmodel::{
    calibrate, column_cost, estimate_physical, GateCostReport, PhysicalEstimate, TechCalibration,
    REFERENCE_RSTDP_45NM, REFERENCE_STDP_45NM,
};
use tnn_core::dataio::{
    encode_image, export_weights, import_weights, read_idx, resize_16, DataError, EncoderConfig,
};
use tnn_core::rng::derive_seed;
use tnn_core::{
    Column, ColumnConfig, Engine, GammaOutcome, LearningMode, PlasticityParams, RandomSource,
    SpikeTime, Volley,
};

use crate::config::{ExperimentConfig, ModeChoice, PlasticitySection};
use crate::metrics::{
    class_means, cosine, reward_code, ClassSummary, ConvergenceTracker, IncrementalSummary,
    MetricsWriter, SampleRecord, TrainSummary, WinnerWindow,
};
use crate::CliError;

/// Encoded samples ready to stream through a column.
pub struct Dataset {
    pub volleys: Vec<Volley>,
    pub labels: Vec<usize>,
    /// Per-class mean encoded image, indexed by label.
    pub class_means: Vec<Vec<f64>>,
}

pub fn load_dataset(cfg: &ExperimentConfig) -> Result<Dataset, CliError> {
    let (images, raw_labels) = read_idx(&cfg.data.images, &cfg.data.labels)?;
    if images.is_empty() {
        return Err(CliError::EmptyDataset { path: cfg.data.images.clone() });
    }
    let enc = EncoderConfig { cutoff: cfg.data.cutoff };
    let volleys: Vec<Volley> = images
        .iter()
        .map(|img| resize_16(img).map(|small| encode_image(&small, &enc)))
        .collect::<Result<_, DataError>>()?;
    if cfg.column.p != volleys[0].len() {
        return Err(CliError::Config(format!(
            "column has {} input lines but encoded images have {}",
            cfg.column.p,
            volleys[0].len()
        )));
    }
    let labels: Vec<usize> = raw_labels.iter().map(|&l| l as usize).collect();
    if let Some((sample, &label)) = labels.iter().enumerate().find(|&(_, &l)| l >= cfg.column.q) {
        return Err(CliError::LabelRange { sample, label, q: cfg.column.q });
    }
    let class_means = class_means(&volleys, &labels, cfg.column.q, cfg.column.p);
    Ok(Dataset { volleys, labels, class_means })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Data(DataError::Io { path: path.to_path_buf(), source })
}

/// Writes PGMs under `out/weights/` and the lossless CSV at `out/weights.csv`.
fn export_run_weights(column: &Column, out: &Path) -> Result<(), CliError> {
    let wdir = out.join("weights");
    export_weights(column, &wdir)?;
    let csv = out.join("weights.csv");
    fs::rename(wdir.join("weights.csv"), &csv).map_err(io_err(&csv))?;
    Ok(())
}

fn write_summary<T: Serialize>(out: &Path, summary: &T) -> Result<(), CliError> {
    let path = out.join("summary.json");
    let mut text = serde_json::to_string_pretty(summary)
        .map_err(|e| CliError::Config(format!("summary serialization failed: {e}")))?;
    text.push('\n');
    fs::write(&path, text).map_err(io_err(&path))
}

fn prepare_run_dir(cfg: &ExperimentConfig) -> Result<MetricsWriter, CliError> {
    let out = &cfg.run.out_dir;
    let wdir = out.join("weights");
    fs::create_dir_all(&wdir).map_err(io_err(&wdir))?;
    let snapshot = out.join("config.toml");
    fs::write(&snapshot, cfg.to_toml()).map_err(io_err(&snapshot))?;
    MetricsWriter::create(&out.join("metrics.jsonl"))
}

fn build_column(cfg: &ExperimentConfig) -> Result<Column, CliError> {
    Column::new(&cfg.column_config()).map_err(|e| CliError::Config(e.to_string()))
}

fn weight_row(column: &Column, neuron: usize) -> Vec<f64> {
    (0..column.p()).map(|i| f64::from(column.weight(neuron, i))).collect()
}

/// Streams the dataset through the column, emitting one metrics record
/// per sample, periodic weight exports, and a convergence/purity summary.
pub fn run_train(cfg: &ExperimentConfig) -> Result<TrainSummary, CliError> {
    cfg.validate()?;
    let dataset = load_dataset(cfg)?;
    let mut column = build_column(cfg)?;
    let mut metrics = prepare_run_dir(cfg)?;
    let mut conv = ConvergenceTracker::new(cfg.run.convergence_window, cfg.run.convergence_epsilon);
    let mut winners = WinnerWindow::new(cfg.run.eval_window);
    let engine = cfg.column.engine.engine();
    let mode = cfg.column.mode.mode();
    let out = &cfg.run.out_dir;

    for sample in 0..cfg.run.samples {
        let idx = sample % dataset.volleys.len();
        let label = dataset.labels[idx];
        let supervised = (mode == LearningMode::Rstdp).then_some(label);
        let outcome = column.run(engine, &dataset.volleys[idx], supervised, mode);
        metrics.write(&SampleRecord {
            sample,
            winner: outcome.winner,
            label: Some(label),
            reward: reward_code(outcome.reward),
            mean_abs_dw: outcome.mean_abs_dw,
        })?;
        conv.push(sample, outcome.mean_abs_dw);
        winners.push(label, outcome.winner);
        if cfg.run.snapshot_every > 0 && (sample + 1) % cfg.run.snapshot_every == 0 {
            export_run_weights(&column, out)?;
        }
    }
    export_run_weights(&column, out)?;
    metrics.finish()?;

    let classes: Vec<ClassSummary> = winners
        .class_stats(cfg.column.q)
        .into_iter()
        .map(|s| {
            let cos = s
                .dominant_neuron
                .map_or(0.0, |n| cosine(&weight_row(&column, n), &dataset.class_means[s.label]));
            ClassSummary {
                label: s.label,
                samples_in_window: s.samples,
                dominant_neuron: s.dominant_neuron,
                purity: s.purity,
                cosine_to_class_mean: cos,
            }
        })
        .collect();
    let meeting = classes
        .iter()
        .filter(|c| {
            c.purity >= cfg.run.purity_threshold
                && c.cosine_to_class_mean >= cfg.run.similarity_threshold
        })
        .count();
    let summary = TrainSummary {
        samples: cfg.run.samples,
        converged: conv.converged_at().is_some(),
        converged_at: conv.converged_at(),
        final_window_mean_abs_dw: conv.window_mean(),
        classes,
        classes_meeting_criteria: meeting,
    };
    write_summary(out, &summary)?;
    Ok(summary)
}

/// Supervised training on every class but the last, then an unlabeled
/// phase that must rediscover the held-out class on its own.
pub fn run_incremental(cfg: &ExperimentConfig) -> Result<IncrementalSummary, CliError> {
    run_incremental_filtered(cfg, &|_| true)
}

/// `phase2_admit` receives each candidate sample's label and decides
/// whether it enters the unlabeled stream (tests use it to withhold the
/// new class entirely).
pub fn run_incremental_filtered(
    cfg: &ExperimentConfig,
    phase2_admit: &dyn Fn(usize) -> bool,
) -> Result<IncrementalSummary, CliError> {
    cfg.validate()?;
    if cfg.column.q < 2 {
        return Err(CliError::Config("incremental run needs at least two classes".into()));
    }
    let dataset = load_dataset(cfg)?;
    let holdout = cfg.column.q - 1;
    let mut column = build_column(cfg)?;
    let mut metrics = prepare_run_dir(cfg)?;
    let engine = cfg.column.engine.engine();
    let out = &cfg.run.out_dir;
    let len = dataset.volleys.len();

    let mut sample = 0usize;
    let mut phase1_done = 0usize;
    match &cfg.run.checkpoint {
        Some(path) => {
            if !path.exists() {
                return Err(CliError::MissingCheckpoint {
                    path: path.clone(),
                    reason: "file not found".into(),
                });
            }
            let flat: Vec<u8> = import_weights(path)?.into_iter().flatten().collect();
            column.load_weights(&flat).map_err(|e| CliError::Config(e.to_string()))?;
        }
        None => {
            let mut idx = 0usize;
            while phase1_done < cfg.run.phase1_samples {
                let mut scanned = 0usize;
                let k = loop {
                    let k = idx % len;
                    idx += 1;
                    scanned += 1;
                    if dataset.labels[k] != holdout {
                        break k;
                    }
                    if scanned > len {
                        return Err(CliError::Config(
                            "no supervised samples outside the held-out class".into(),
                        ));
                    }
                };
                let outcome = column.run(
                    engine,
                    &dataset.volleys[k],
                    Some(dataset.labels[k]),
                    LearningMode::Rstdp,
                );
                metrics.write(&SampleRecord {
                    sample,
                    winner: outcome.winner,
                    label: Some(dataset.labels[k]),
                    reward: reward_code(outcome.reward),
                    mean_abs_dw: outcome.mean_abs_dw,
                })?;
                sample += 1;
                phase1_done += 1;
            }
        }
    }

    let target_mean = &dataset.class_means[holdout];
    let best_match = |column: &Column| -> (usize, f64) {
        (0..cfg.column.q)
            .map(|n| (n, cosine(&weight_row(column, n), target_mean)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one neuron")
    };

    let (n0, c0) = best_match(&column);
    let mut best_cosine = c0;
    let mut acquisition = None;
    let mut acquiring = None;
    if c0 >= cfg.run.similarity_threshold {
        acquisition = Some(0);
        acquiring = Some(n0);
    }

    let mut consumed = 0usize;
    let mut idx = 0usize;
    'phase2: while acquisition.is_none() && consumed < cfg.run.phase2_samples {
        let mut scanned = 0usize;
        let k = loop {
            let k = idx % len;
            idx += 1;
            scanned += 1;
            if phase2_admit(dataset.labels[k]) {
                break k;
            }
            if scanned > len {
                break 'phase2;
            }
        };
        let outcome = column.run(engine, &dataset.volleys[k], None, LearningMode::Stdp);
        consumed += 1;
        metrics.write(&SampleRecord {
            sample,
            winner: outcome.winner,
            label: None,
            reward: None,
            mean_abs_dw: outcome.mean_abs_dw,
        })?;
        sample += 1;
        let (n, c) = best_match(&column);
        best_cosine = best_cosine.max(c);
        if c >= cfg.run.similarity_threshold {
            acquisition = Some(consumed);
            acquiring = Some(n);
        }
    }

    export_run_weights(&column, out)?;
    metrics.finish()?;
    let summary = IncrementalSummary {
        phase1_samples: phase1_done,
        phase2_samples_consumed: consumed,
        acquired: acquisition.is_some(),
        acquisition_sample: acquisition,
        acquiring_neuron: acquiring,
        best_cosine,
        status: if acquisition.is_some() { "ACQUIRED".into() } else { "NOT_ACQUIRED".into() },
    };
    write_summary(out, &summary)?;
    Ok(summary)
}

/// Test-fixture fault injection for the equivalence harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perturbation {
    None,
    /// Corrupts the functional engine's reported output times by one
    /// cycle, guaranteeing a detectable mismatch.
    ShiftOutputs,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivReport {
    pub p: usize,
    pub q: usize,
    pub trials: usize,
}

fn random_volley(rng: &mut RandomSource, p: usize) -> Volley {
    Volley::new(
        (0..p)
            .map(|_| match rng.next_word() % 9 {
                8 => SpikeTime::ABSENT,
                t => SpikeTime::at(t as u8),
            })
            .collect(),
    )
}

fn shift_outputs(output: &Volley) -> Volley {
    Volley::new(
        output
            .iter()
            .map(|t| match t.cycle() {
                Some(c) if c < 14 => SpikeTime::at(c + 1),
                Some(_) => SpikeTime::ABSENT,
                None => SpikeTime::ABSENT,
            })
            .collect(),
    )
}

fn first_difference(a: &GammaOutcome, b_winner: Option<usize>, b_output: &Volley, ca: &Column, cb: &Column) -> Option<String> {
    if a.winner != b_winner {
        return Some(format!("winner: cycle={:?}, functional={b_winner:?}", a.winner));
    }
    for i in 0..a.output.len() {
        if a.output[i] != b_output[i] {
            return Some(format!(
                "output line {i}: cycle={}, functional={}",
                a.output[i], b_output[i]
            ));
        }
    }
    let (wa, wb) = (ca.weights(), cb.weights());
    if let Some(k) = (0..wa.len()).find(|&k| wa[k] != wb[k]) {
        let (n, i) = (k / ca.p(), k % ca.p());
        return Some(format!(
            "weight[neuron {n}, input {i}]: cycle={}, functional={}",
            wa[k], wb[k]
        ));
    }
    None
}

/// Drives two identically seeded columns, one per engine, over a shared
/// random volley stream with unsupervised learning on, and demands
/// bit-identical winners, outputs, and weights at every gamma cycle.
pub fn check_equivalence(
    p: usize,
    q: usize,
    trials: usize,
    seed: u64,
    perturb: Perturbation,
) -> Result<EquivReport, CliError> {
    if trials < 1 {
        return Err(CliError::Config("trials must be at least 1".into()));
    }
    let mus = PlasticitySection::default();
    let config = ColumnConfig {
        p,
        q,
        theta: p as u32,
        params: PlasticityParams::new(mus.mu_capture, mus.mu_backoff, mus.mu_search, mus.mu_min),
        mode: LearningMode::Stdp,
        seed,
        shared_rng: false,
    };
    config.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let mut cycle_col = Column::new(&config).map_err(|e| CliError::Config(e.to_string()))?;
    let mut func_col = Column::new(&config).map_err(|e| CliError::Config(e.to_string()))?;
    let mut volley_rng = RandomSource::new(derive_seed(seed, 1 << 60));

    for gamma in 0..trials {
        let input = random_volley(&mut volley_rng, p);
        let a = cycle_col.run(Engine::Cycle, &input, None, LearningMode::Stdp);
        let b = func_col.run(Engine::Functional, &input, None, LearningMode::Stdp);
        let b_output = match perturb {
            Perturbation::None => b.output.clone(),
            Perturbation::ShiftOutputs => shift_outputs(&b.output),
        };
        if let Some(diff) = first_difference(&a, b.winner, &b_output, &cycle_col, &func_col) {
            return Err(CliError::Divergence { gamma, diff });
        }
    }
    Ok(EquivReport { p, q, trials })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReferenceComparison {
    pub p: usize,
    pub q: usize,
    pub model_gates: u64,
    pub synthesized_gates: u64,
    pub gate_rel_err: f64,
    pub model_time_ns: f64,
    pub reference_time_ns: f64,
    pub model_area_mm2: f64,
    pub reference_area_mm2: f64,
    pub model_power_mw: f64,
    pub reference_power_mw: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CostSummary {
    pub p: usize,
    pub q: usize,
    pub mode: String,
    pub rstdp_overhead_applied: bool,
    pub report: GateCostReport,
    pub calibration: TechCalibration,
    pub estimate: PhysicalEstimate,
    pub references: Vec<ReferenceComparison>,
}

/// Evaluates the scaling equations for one geometry and calibrates them
/// against the embedded 45 nm synthesis reference rows.
pub fn estimate_cost(p: usize, q: usize, mode: ModeChoice) -> Result<CostSummary, CliError> {
    let base = column_cost(p, q).map_err(|e| CliError::Config(e.to_string()))?;
    let (report, rows) = match mode {
        ModeChoice::Stdp => (base, &REFERENCE_STDP_45NM),
        ModeChoice::Rstdp => (base.with_rstdp_overhead(), &REFERENCE_RSTDP_45NM),
    };
    let fit = calibrate(rows).map_err(|e| CliError::Config(e.to_string()))?;
    let estimate = estimate_physical(&report, &fit.calibration);
    let references = rows
        .iter()
        .map(|r| {
            let mut m = column_cost(r.p, r.q).expect("reference geometry is valid");
            if mode == ModeChoice::Rstdp {
                m = m.with_rstdp_overhead();
            }
            let est = estimate_physical(&m, &fit.calibration);
            ReferenceComparison {
                p: r.p,
                q: r.q,
                model_gates: m.gates,
                synthesized_gates: r.synthesized_gates,
                gate_rel_err: (m.gates as f64 - r.synthesized_gates as f64).abs()
                    / r.synthesized_gates as f64,
                model_time_ns: est.gamma_time_ns,
                reference_time_ns: r.time_ns,
                model_area_mm2: est.area_mm2,
                reference_area_mm2: r.area_mm2,
                model_power_mw: est.power_mw,
                reference_power_mw: r.power_mw,
            }
        })
        .collect();
    Ok(CostSummary {
        p,
        q,
        mode: match mode {
            ModeChoice::Stdp => "stdp".into(),
            ModeChoice::Rstdp => "rstdp".into(),
        },
        rstdp_overhead_applied: mode == ModeChoice::Rstdp,
        report,
        calibration: fit.calibration,
        estimate,
        references,
    })
}

impl CostSummary {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "column {} x {} ({})", self.p, self.q, self.mode);
        let _ = writeln!(s, "  gates          {:>12}", self.report.gates);
        let _ = writeln!(s, "  critical path  {:>12} gate delays per clock", self.report.delay_gates);
        let _ = writeln!(
            s,
            "  gamma frame    {:>12} gate delays = {:.2} ns",
            self.report.time_gate_delays, self.estimate.gamma_time_ns
        );
        let _ = writeln!(s, "  area           {:>12.3} mm^2", self.estimate.area_mm2);
        let _ = writeln!(s, "  power          {:>12.3} mW", self.estimate.power_mw);
        if self.rstdp_overhead_applied {
            let _ = writeln!(s, "  (gate and power figures include the 5% reward-logic overhead)");
        }
        let _ = writeln!(s, "45 nm synthesis reference points:");
        let _ = writeln!(
            s,
            "  {:>5} {:>3} {:>12} {:>12} {:>6} {:>8} {:>8} {:>7} {:>7}",
            "p", "q", "model", "synth", "err%", "t[ns]", "ref[ns]", "P[mW]", "ref[mW]"
        );
        for r in &self.references {
            let _ = writeln!(
                s,
                "  {:>5} {:>3} {:>12} {:>12} {:>5.1}% {:>8.2} {:>8.2} {:>7.2} {:>7.2}",
                r.p,
                r.q,
                r.model_gates,
                r.synthesized_gates,
                100.0 * r.gate_rel_err,
                r.model_time_ns,
                r.reference_time_ns,
                r.model_power_mw,
                r.reference_power_mw
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn write_idx(dir: &Path, images: &[Vec<u8>], labels: &[u8]) -> (PathBuf, PathBuf) {
        let ipath = dir.join("images.idx");
        let lpath = dir.join("labels.idx");
        let mut ibytes = Vec::new();
        ibytes.extend_from_slice(&2051u32.to_be_bytes());
        ibytes.extend_from_slice(&(images.len() as u32).to_be_bytes());
        ibytes.extend_from_slice(&28u32.to_be_bytes());
        ibytes.extend_from_slice(&28u32.to_be_bytes());
        for img in images {
            assert_eq!(img.len(), 784);
            ibytes.extend_from_slice(img);
        }
        fs::write(&ipath, ibytes).unwrap();
        let mut lbytes = Vec::new();
        lbytes.extend_from_slice(&2049u32.to_be_bytes());
        lbytes.extend_from_slice(&(labels.len() as u32).to_be_bytes());
        lbytes.extend_from_slice(labels);
        fs::write(&lpath, lbytes).unwrap();
        (ipath, lpath)
    }

    fn blob_image(cx: usize, cy: usize) -> Vec<u8> {
        let mut img = vec![0u8; 784];
        for y in 0..28usize {
            for x in 0..28usize {
                let d2 = x.abs_diff(cx).pow(2) + y.abs_diff(cy).pow(2);
                if d2 < 64 {
                    img[y * 28 + x] = 255 - (d2 as u8 * 2);
                }
            }
        }
        img
    }

    fn tiny_config(dir: &Path, samples: usize) -> ExperimentConfig {
        let images = vec![blob_image(8, 8), blob_image(19, 19)];
        let (ipath, lpath) = write_idx(dir, &images, &[0, 1]);
        let mut cfg = ExperimentConfig::default();
        cfg.column.q = 2;
        cfg.column.theta = 20;
        cfg.data.images = ipath;
        cfg.data.labels = lpath;
        cfg.run.samples = samples;
        cfg.run.out_dir = dir.join("run");
        cfg.run.snapshot_every = 0;
        cfg
    }

    #[test]
    fn zero_budget_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(dir.path(), 0);
        cfg.run.samples = 0;
        let err = run_train(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn zero_rates_keep_weights_frozen() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(dir.path(), 40);
        cfg.plasticity =
            PlasticitySection { mu_capture: 0.0, mu_backoff: 0.0, mu_search: 0.0, mu_min: 0.0 };
        let summary = run_train(&cfg).unwrap();
        assert!(!summary.converged, "window larger than budget");
        let text = fs::read_to_string(cfg.run.out_dir.join("metrics.jsonl")).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 40, "one record per sample");
        for line in lines {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["mean_abs_dw"].as_f64().unwrap(), 0.0);
        }
    }

    #[test]
    fn run_dir_holds_the_documented_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny_config(dir.path(), 5);
        run_train(&cfg).unwrap();
        for name in ["config.toml", "metrics.jsonl", "weights.csv", "summary.json"] {
            assert!(cfg.run.out_dir.join(name).exists(), "{name} missing");
        }
        assert!(cfg.run.out_dir.join("weights/neuron_00.pgm").exists());
        assert!(cfg.run.out_dir.join("weights/neuron_01.pgm").exists());
    }

    #[test]
    fn missing_data_is_a_data_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(dir.path(), 5);
        cfg.data.images = dir.path().join("nope.idx");
        let err = run_train(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn wrong_width_column_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(dir.path(), 5);
        cfg.column.p = 64;
        cfg.column.theta = 20;
        let err = run_train(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_checkpoint_reported() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_config(dir.path(), 5);
        cfg.run.checkpoint = Some(dir.path().join("absent.csv"));
        let err = run_incremental(&cfg).unwrap_err();
        assert!(matches!(err, CliError::MissingCheckpoint { .. }));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn small_geometries_stay_equivalent() {
        check_equivalence(8, 3, 300, 11, Perturbation::None).unwrap();
        check_equivalence(4, 2, 100, 99, Perturbation::None).unwrap();
    }

    #[test]
    fn perturbed_engine_flagged_immediately() {
        let err = check_equivalence(8, 3, 300, 11, Perturbation::ShiftOutputs).unwrap_err();
        match err {
            CliError::Divergence { gamma, .. } => assert_eq!(gamma, 0),
            other => panic!("expected divergence, got {other}"),
        }
    }

    #[test]
    fn cost_report_matches_scaling_equations() {
        let s = estimate_cost(64, 8, ModeChoice::Stdp).unwrap();
        assert_eq!(s.report.gates, 53_024);
        assert_eq!(s.report.time_gate_delays, 600);
        assert_eq!(s.references.len(), 3);
        let rendered = s.render();
        assert!(rendered.contains("53024"));

        let r = estimate_cost(64, 8, ModeChoice::Rstdp).unwrap();
        assert_eq!(r.report.gates, 55_675, "5% overhead, rounded");
        assert!(r.rstdp_overhead_applied);
    }

    #[test]
    fn bad_geometry_is_a_config_error() {
        let err = estimate_cost(1, 8, ModeChoice::Stdp).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
