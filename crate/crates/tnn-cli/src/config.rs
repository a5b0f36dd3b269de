//! Experiment configuration: sectioned key-value config files with every
//! field overridable from the command line. Defaults live here, not in
//! the simulator.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use tnn_core::{ColumnConfig, Engine, LearningMode, PlasticityParams};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Cycle,
    Functional,
}

impl EngineChoice {
    pub fn engine(self) -> Engine {
        match self {
            EngineChoice::Cycle => Engine::Cycle,
            EngineChoice::Functional => Engine::Functional,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    Stdp,
    Rstdp,
}

impl ModeChoice {
    pub fn mode(self) -> LearningMode {
        match self {
            ModeChoice::Stdp => LearningMode::Stdp,
            ModeChoice::Rstdp => LearningMode::Rstdp,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnSection {
    pub p: usize,
    pub q: usize,
    pub theta: u32,
    pub seed: u64,
    pub engine: EngineChoice,
    pub mode: ModeChoice,
    pub shared_rng: bool,
}

impl Default for ColumnSection {
    fn default() -> Self {
        ColumnSection {
            p: 256,
            q: 10,
            theta: 64,
            seed: 7,
            engine: EngineChoice::Functional,
            mode: ModeChoice::Rstdp,
            shared_rng: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlasticitySection {
    pub mu_capture: f64,
    pub mu_backoff: f64,
    pub mu_search: f64,
    pub mu_min: f64,
}

impl Default for PlasticitySection {
    fn default() -> Self {
        PlasticitySection { mu_capture: 0.6, mu_backoff: 0.5, mu_search: 0.02, mu_min: 0.12 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub images: PathBuf,
    pub labels: PathBuf,
    /// Pixels below this intensity stay silent.
    pub cutoff: u8,
}

impl Default for DataSection {
    fn default() -> Self {
        DataSection {
            images: PathBuf::from("data/train-images-idx3-ubyte.gz"),
            labels: PathBuf::from("data/train-labels-idx1-ubyte.gz"),
            cutoff: 128,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub samples: usize,
    pub out_dir: PathBuf,
    /// Converged when the windowed mean |dw| per synapse per gamma drops
    /// below this.
    pub convergence_epsilon: f64,
    pub convergence_window: usize,
    /// Cosine similarity bound for "weights resemble the class mean".
    pub similarity_threshold: f64,
    /// Winner purity a class must reach to count as learned.
    pub purity_threshold: f64,
    /// Trailing window over which winner purity is measured.
    pub eval_window: usize,
    /// Re-export weight images every this many samples (0 = only at end).
    pub snapshot_every: usize,
    /// Incremental run: supervised samples before the unlabeled phase.
    pub phase1_samples: usize,
    /// Incremental run: unlabeled sample budget.
    pub phase2_samples: usize,
    /// Optional weights.csv to start the incremental run from, skipping
    /// phase 1.
    pub checkpoint: Option<PathBuf>,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            samples: 10_000,
            out_dir: PathBuf::from("runs/latest"),
            convergence_epsilon: 0.01,
            convergence_window: 1000,
            similarity_threshold: 0.6,
            purity_threshold: 0.5,
            eval_window: 2000,
            snapshot_every: 2000,
            phase1_samples: 10_000,
            phase2_samples: 2000,
            checkpoint: None,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub column: ColumnSection,
    pub plasticity: PlasticitySection,
    pub data: DataSection,
    pub run: RunSection,
}

/// Command-line overrides; every config field has a flag.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub theta: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub engine: Option<EngineChoice>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeChoice>,
    #[arg(long)]
    pub shared_rng: Option<bool>,
    #[arg(long)]
    pub mu_capture: Option<f64>,
    #[arg(long)]
    pub mu_backoff: Option<f64>,
    #[arg(long)]
    pub mu_search: Option<f64>,
    #[arg(long)]
    pub mu_min: Option<f64>,
    #[arg(long)]
    pub images: Option<PathBuf>,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub cutoff: Option<u8>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub convergence_epsilon: Option<f64>,
    #[arg(long)]
    pub convergence_window: Option<usize>,
    #[arg(long)]
    pub similarity_threshold: Option<f64>,
    #[arg(long)]
    pub purity_threshold: Option<f64>,
    #[arg(long)]
    pub eval_window: Option<usize>,
    #[arg(long)]
    pub snapshot_every: Option<usize>,
    #[arg(long)]
    pub phase1_samples: Option<usize>,
    #[arg(long)]
    pub phase2_samples: Option<usize>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Defaults, optionally overlaid with a config file, then validated
    /// only on use (see `validate`).
    pub fn load(path: Option<&Path>) -> Result<ExperimentConfig, CliError> {
        match path {
            None => Ok(ExperimentConfig::default()),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Config(format!("bad config {}: {e}", p.display())))
            }
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($field:expr, $value:expr) => {
                if let Some(v) = &$value {
                    $field = v.clone();
                }
            };
        }
        set!(self.column.p, o.p);
        set!(self.column.q, o.q);
        set!(self.column.theta, o.theta);
        set!(self.column.seed, o.seed);
        set!(self.column.engine, o.engine);
        set!(self.column.mode, o.mode);
        set!(self.column.shared_rng, o.shared_rng);
        set!(self.plasticity.mu_capture, o.mu_capture);
        set!(self.plasticity.mu_backoff, o.mu_backoff);
        set!(self.plasticity.mu_search, o.mu_search);
        set!(self.plasticity.mu_min, o.mu_min);
        set!(self.data.images, o.images);
        set!(self.data.labels, o.labels);
        set!(self.data.cutoff, o.cutoff);
        set!(self.run.samples, o.samples);
        set!(self.run.out_dir, o.out_dir);
        set!(self.run.convergence_epsilon, o.convergence_epsilon);
        set!(self.run.convergence_window, o.convergence_window);
        set!(self.run.similarity_threshold, o.similarity_threshold);
        set!(self.run.purity_threshold, o.purity_threshold);
        set!(self.run.eval_window, o.eval_window);
        set!(self.run.snapshot_every, o.snapshot_every);
        set!(self.run.phase1_samples, o.phase1_samples);
        set!(self.run.phase2_samples, o.phase2_samples);
        if o.checkpoint.is_some() {
            self.run.checkpoint = o.checkpoint.clone();
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (name, mu) in [
            ("mu_capture", self.plasticity.mu_capture),
            ("mu_backoff", self.plasticity.mu_backoff),
            ("mu_search", self.plasticity.mu_search),
            ("mu_min", self.plasticity.mu_min),
        ] {
            if !(0.0..=1.0).contains(&mu) {
                return Err(CliError::Config(format!("{name} = {mu} outside [0, 1]")));
            }
        }
        if self.run.samples < 1 {
            return Err(CliError::Config("sample budget must be at least 1".into()));
        }
        if self.run.convergence_window < 1 {
            return Err(CliError::Config("convergence window must be at least 1".into()));
        }
        if !(self.run.convergence_epsilon > 0.0) {
            return Err(CliError::Config("convergence epsilon must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.run.similarity_threshold) {
            return Err(CliError::Config("similarity threshold outside [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.run.purity_threshold) {
            return Err(CliError::Config("purity threshold outside [0, 1]".into()));
        }
        if self.run.eval_window < 1 {
            return Err(CliError::Config("eval window must be at least 1".into()));
        }
        self.column_config().validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn params(&self) -> PlasticityParams {
        PlasticityParams::new(
            self.plasticity.mu_capture,
            self.plasticity.mu_backoff,
            self.plasticity.mu_search,
            self.plasticity.mu_min,
        )
    }

    pub fn column_config(&self) -> ColumnConfig {
        ColumnConfig {
            p: self.column.p,
            q: self.column.q,
            theta: self.column.theta,
            params: self.params(),
            mode: self.column.mode.mode(),
            seed: self.column.seed,
            shared_rng: self.column.shared_rng,
        }
    }

    /// Serialized snapshot written into every run directory.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ExperimentConfig::default().validate().unwrap();
    }

    #[test]
    fn toml_round_trip() {
        let cfg = ExperimentConfig::default();
        let text = cfg.to_toml();
        let back: ExperimentConfig = toml::from_str(&text).unwrap();
        assert_eq!(back.column.p, cfg.column.p);
        assert_eq!(back.plasticity.mu_capture, cfg.plasticity.mu_capture);
        assert_eq!(back.run.out_dir, cfg.run.out_dir);
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg: ExperimentConfig =
            toml::from_str("[column]\ntheta = 48\n\n[run]\nsamples = 5\n").unwrap();
        assert_eq!(cfg.column.theta, 48);
        assert_eq!(cfg.column.p, 256);
        assert_eq!(cfg.run.samples, 5);
        assert_eq!(cfg.run.convergence_window, 1000);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = toml::from_str::<ExperimentConfig>("[column]\nthetta = 48\n").unwrap_err();
        assert!(err.to_string().contains("thetta"));
    }

    #[test]
    fn overrides_win() {
        let mut cfg = ExperimentConfig::default();
        let o = Overrides {
            theta: Some(99),
            mu_search: Some(0.5),
            samples: Some(123),
            ..Overrides::default()
        };
        cfg.apply(&o);
        assert_eq!(cfg.column.theta, 99);
        assert_eq!(cfg.plasticity.mu_search, 0.5);
        assert_eq!(cfg.run.samples, 123);
        assert_eq!(cfg.column.q, 10);
    }

    #[test]
    fn zero_budget_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.run.samples = 0;
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
    }

    #[test]
    fn bad_rate_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.plasticity.mu_backoff = 1.5;
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
    }
}
