//! The TNN column: a p x q synapse crossbar, q neuron bodies, 1-WTA
//! lateral inhibition, and per-gamma plasticity, plus layer composition.
//!
//! Two engines produce identical observable behavior: `run_gamma` steps
//! every unit clock through the synapse and neuron FSMs, while
//! `run_functional_gamma` jumps straight to fire times via the closed-form
//! response oracle. Both consume randomness on the same fixed schedule, so
//! weight trajectories match bit for bit.

use thiserror::Error;

use crate::neuron::{response_oracle, spike_pulse, NeuronBody};
use crate::plasticity::{
    classify_case, compute_reward, rstdp_delta, stdp_delta, GateStreams, PlasticityParams, Reward,
};
use crate::rng::{derive_seed, RandomSource};
use crate::synapse::SynapseState;
use crate::temporal::{SpikeTime, Volley, GAMMA_PERIOD, W_MAX};

/// Which update rule family drives learning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearningMode {
    Stdp,
    Rstdp,
}

/// Which simulation engine to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Cycle,
    Functional,
}

/// Construction-time parameters of a column.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnConfig {
    pub p: usize,
    pub q: usize,
    pub theta: u32,
    pub params: PlasticityParams,
    pub mode: LearningMode,
    pub seed: u64,
    /// One LFSR shared by the whole column instead of one per synapse.
    pub shared_rng: bool,
}

impl ColumnConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.p < 1 {
            return Err(ConfigError::NoInputs);
        }
        if self.q < 1 {
            return Err(ConfigError::NoNeurons);
        }
        let max = (self.p as u32) * (W_MAX as u32);
        if self.theta < 1 || self.theta > max {
            return Err(ConfigError::ThresholdOutOfRange { theta: self.theta, p: self.p, max });
        }
        Ok(())
    }
}

/// Configuration and wiring problems surfaced to the caller.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("column needs at least one input line")]
    NoInputs,
    #[error("column needs at least one neuron")]
    NoNeurons,
    #[error("threshold {theta} outside 1..={max} for p = {p}")]
    ThresholdOutOfRange { theta: u32, p: usize, max: u32 },
    #[error("expected {expected} initial weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("initial weight {weight} at index {index} exceeds w_max")]
    WeightRange { weight: u8, index: usize },
    #[error("layer wiring covers {got} columns, spec has {expected}")]
    WiringCount { got: usize, expected: usize },
    #[error("wiring for column {column} has {got} lines, needs {expected}")]
    WiringArity { column: usize, got: usize, expected: usize },
    #[error("wiring for column {column} references line {line}, layer has {width}")]
    WiringRange { column: usize, line: usize, width: usize },
}

/// Everything observable from one gamma cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaOutcome {
    /// Post-inhibition output volley: at most one present spike.
    pub output: Volley,
    /// Index of the surviving neuron, if any fired.
    pub winner: Option<usize>,
    /// Reward applied this cycle (R-STDP mode only).
    pub reward: Option<Reward>,
    /// Sum of |delta w| over all synapses this cycle.
    pub abs_delta_sum: u32,
    /// abs_delta_sum averaged over the p*q synapses.
    pub mean_abs_dw: f64,
}

impl GammaOutcome {
    pub fn winner_time(&self) -> SpikeTime {
        self.winner.map_or(SpikeTime::ABSENT, |n| self.output[n])
    }
}

/// 1-winner-take-all lateral inhibition: the earliest fire time passes
/// (lowest index on ties), every other line is nullified.
pub fn wta_inhibit(fire_times: &[SpikeTime]) -> Volley {
    let winner = fire_times
        .iter()
        .enumerate()
        .filter(|(_, t)| t.is_present())
        .min_by_key(|&(i, &t)| (t, i))
        .map(|(i, _)| i);
    Volley::new(
        fire_times
            .iter()
            .enumerate()
            .map(|(i, &t)| if Some(i) == winner { t } else { SpikeTime::ABSENT })
            .collect(),
    )
}

enum RngBank {
    /// One gate bank per synapse, statistically independent draws.
    Independent(Vec<GateStreams>),
    /// One column-wide gate bank, mimicking a single shared LFSR network.
    Shared(GateStreams),
}

impl RngBank {
    fn bank(&mut self, synapse_index: usize) -> &mut GateStreams {
        match self {
            RngBank::Independent(banks) => &mut banks[synapse_index],
            RngBank::Shared(bank) => bank,
        }
    }
}

/// A fully assembled column with learning state.
pub struct Column {
    p: usize,
    q: usize,
    theta: u32,
    params: PlasticityParams,
    synapses: Vec<SynapseState>,
    bodies: Vec<NeuronBody>,
    rng: RngBank,
}

impl Column {
    /// Builds a column with weights drawn uniformly from 0..=w_max off the
    /// configured seed.
    pub fn new(config: &ColumnConfig) -> Result<Column, ConfigError> {
        config.validate()?;
        let n = config.p * config.q;
        // stream ids 0..=n belong to the per-synapse and shared gate banks
        let mut init = RandomSource::new(derive_seed(config.seed, 5 * n as u64 + 5));
        let weights: Vec<u8> = (0..n).map(|_| (init.next_word() & W_MAX as u32) as u8).collect();
        Column::with_weights(config, &weights)
    }

    /// Builds a column with explicit initial weights (row-major, one row
    /// of p weights per neuron).
    pub fn with_weights(config: &ColumnConfig, weights: &[u8]) -> Result<Column, ConfigError> {
        config.validate()?;
        let n = config.p * config.q;
        if weights.len() != n {
            return Err(ConfigError::WeightCount { expected: n, got: weights.len() });
        }
        if let Some((index, &weight)) = weights.iter().enumerate().find(|&(_, &w)| w > W_MAX) {
            return Err(ConfigError::WeightRange { weight, index });
        }
        let rng = if config.shared_rng {
            RngBank::Shared(GateStreams::new(config.seed, n as u64))
        } else {
            RngBank::Independent((0..n).map(|k| GateStreams::new(config.seed, k as u64)).collect())
        };
        Ok(Column {
            p: config.p,
            q: config.q,
            theta: config.theta,
            params: config.params,
            synapses: weights.iter().map(|&w| SynapseState::new(w)).collect(),
            bodies: (0..config.q).map(|_| NeuronBody::new(config.p, config.theta)).collect(),
            rng,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn theta(&self) -> u32 {
        self.theta
    }

    pub fn weight(&self, neuron: usize, input: usize) -> u8 {
        self.synapses[neuron * self.p + input].weight()
    }

    /// All weights, row-major (neuron-major) order.
    pub fn weights(&self) -> Vec<u8> {
        self.synapses.iter().map(|s| s.weight()).collect()
    }

    /// Replaces all weights, preserving RNG and geometry.
    pub fn load_weights(&mut self, weights: &[u8]) -> Result<(), ConfigError> {
        let n = self.p * self.q;
        if weights.len() != n {
            return Err(ConfigError::WeightCount { expected: n, got: weights.len() });
        }
        if let Some((index, &weight)) = weights.iter().enumerate().find(|&(_, &w)| w > W_MAX) {
            return Err(ConfigError::WeightRange { weight, index });
        }
        self.synapses = weights.iter().map(|&w| SynapseState::new(w)).collect();
        Ok(())
    }

    fn check_call(&self, input: &Volley, label: Option<usize>, mode: LearningMode) {
        assert_eq!(input.len(), self.p, "volley has {} lines, column has {}", input.len(), self.p);
        assert!(input.fits_input_window(), "input spike outside the 0..7 encode window");
        match mode {
            LearningMode::Rstdp => {
                assert!(label.is_some(), "R-STDP training requires a label")
            }
            LearningMode::Stdp => {
                assert!(label.is_none(), "labels are meaningless outside R-STDP mode")
            }
        }
    }

    /// One gamma cycle through the chosen engine.
    pub fn run(
        &mut self,
        engine: Engine,
        input: &Volley,
        label: Option<usize>,
        mode: LearningMode,
    ) -> GammaOutcome {
        match engine {
            Engine::Cycle => self.run_gamma(input, label, mode),
            Engine::Functional => self.run_functional_gamma(input, label, mode),
        }
    }

    /// One gamma cycle, stepped unit clock by unit clock through the
    /// synapse FSMs and neuron bodies. The WTA latch captures the first
    /// firing cycle as it happens; lowest index wins within a cycle.
    pub fn run_gamma(
        &mut self,
        input: &Volley,
        label: Option<usize>,
        mode: LearningMode,
    ) -> GammaOutcome {
        self.check_call(input, label, mode);
        let pulses: Vec<_> = input.iter().map(|&x| spike_pulse(x)).collect();
        for body in &mut self.bodies {
            body.begin_gamma();
        }
        let mut latched: Option<usize> = None;
        let mut bits = vec![false; self.p];
        for cycle in 0..GAMMA_PERIOD as usize {
            for n in 0..self.q {
                for (i, bit) in bits.iter_mut().enumerate() {
                    *bit = self.synapses[n * self.p + i].step(pulses[i][cycle]);
                }
                let fired = self.bodies[n].step(&bits);
                if fired && latched.is_none() {
                    latched = Some(n);
                }
            }
        }
        let pre_times: Vec<SpikeTime> = self.bodies.iter().map(|b| b.fire_time()).collect();
        let output = wta_inhibit(&pre_times);
        let winner = output.iter().position(|t| t.is_present());
        debug_assert_eq!(winner, latched, "WTA latch disagrees with volley-level inhibition");
        self.finish_gamma(input, output, winner, label, mode)
    }

    /// One gamma cycle via the closed-form fire-time oracle. Identical
    /// observables to `run_gamma` for the same RNG state.
    pub fn run_functional_gamma(
        &mut self,
        input: &Volley,
        label: Option<usize>,
        mode: LearningMode,
    ) -> GammaOutcome {
        self.check_call(input, label, mode);
        let mut weights = vec![0u8; self.p];
        let pre_times: Vec<SpikeTime> = (0..self.q)
            .map(|n| {
                for (i, w) in weights.iter_mut().enumerate() {
                    *w = self.synapses[n * self.p + i].weight();
                }
                response_oracle(&weights, input, self.theta)
            })
            .collect();
        let output = wta_inhibit(&pre_times);
        let winner = output.iter().position(|t| t.is_present());
        self.finish_gamma(input, output, winner, label, mode)
    }

    /// The update phase shared by both engines: classify every synapse's
    /// (x, z) pair against the post-WTA output, draw the gate bits in
    /// fixed neuron-major order, and apply the deltas.
    fn finish_gamma(
        &mut self,
        input: &Volley,
        output: Volley,
        winner: Option<usize>,
        label: Option<usize>,
        mode: LearningMode,
    ) -> GammaOutcome {
        let reward = match mode {
            LearningMode::Rstdp => {
                Some(compute_reward(winner, label.expect("checked in check_call"), self.q))
            }
            LearningMode::Stdp => None,
        };
        let mut abs_delta_sum = 0u32;
        for n in 0..self.q {
            let z = output[n];
            for i in 0..self.p {
                let k = n * self.p + i;
                let case = classify_case(input[i], z);
                let w = self.synapses[k].weight();
                let delta = match reward {
                    Some(r) => rstdp_delta(case, w, r, &self.params, self.rng.bank(k)),
                    None => stdp_delta(case, w, &self.params, self.rng.bank(k)),
                };
                self.synapses[k].apply_update(delta > 0, delta < 0);
                abs_delta_sum += delta.unsigned_abs() as u32;
            }
        }
        let mean_abs_dw = f64::from(abs_delta_sum) / (self.p * self.q) as f64;
        GammaOutcome { output, winner, reward, abs_delta_sum, mean_abs_dw }
    }
}

/// Geometry of a multi-column layer: per-column configs plus the mapping
/// from layer input lines to each column's receptive field.
#[derive(Debug, Clone)]
pub struct LayerSpec {
    pub columns: Vec<ColumnConfig>,
    /// wiring[c][i] is the layer input line feeding column c's input i.
    pub wiring: Vec<Vec<usize>>,
}

/// Output of one layer-wide gamma cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerOutput {
    pub outcomes: Vec<GammaOutcome>,
    /// Concatenated column outputs, clamped into the 0..7 encode window
    /// for consumption by a downstream layer.
    pub next_input: Volley,
}

/// A row of columns sharing one input volley.
pub struct Layer {
    columns: Vec<Column>,
    wiring: Vec<Vec<usize>>,
    input_width: usize,
}

impl Layer {
    pub fn new(spec: &LayerSpec, input_width: usize) -> Result<Layer, ConfigError> {
        if spec.wiring.len() != spec.columns.len() {
            return Err(ConfigError::WiringCount {
                got: spec.wiring.len(),
                expected: spec.columns.len(),
            });
        }
        for (c, (config, lines)) in spec.columns.iter().zip(&spec.wiring).enumerate() {
            if lines.len() != config.p {
                return Err(ConfigError::WiringArity {
                    column: c,
                    got: lines.len(),
                    expected: config.p,
                });
            }
            if let Some(&line) = lines.iter().find(|&&l| l >= input_width) {
                return Err(ConfigError::WiringRange { column: c, line, width: input_width });
            }
        }
        let columns: Result<Vec<Column>, ConfigError> = spec.columns.iter().map(Column::new).collect();
        Ok(Layer { columns: columns?, wiring: spec.wiring.clone(), input_width })
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn columns_mut(&mut self) -> &mut [Column] {
        &mut self.columns
    }

    /// Runs every column on its receptive field for one gamma cycle.
    /// `labels` carries one label per column in R-STDP mode.
    pub fn step(
        &mut self,
        engine: Engine,
        input: &Volley,
        labels: Option<&[usize]>,
        mode: LearningMode,
    ) -> LayerOutput {
        assert_eq!(input.len(), self.input_width, "layer input width mismatch");
        if mode == LearningMode::Rstdp {
            let labels = labels.expect("R-STDP training requires labels");
            assert_eq!(labels.len(), self.columns.len(), "one label per column required");
        }
        let outcomes: Vec<GammaOutcome> = self
            .columns
            .iter_mut()
            .zip(&self.wiring)
            .enumerate()
            .map(|(c, (column, lines))| {
                let field = Volley::new(lines.iter().map(|&l| input[l]).collect());
                let label = labels.map(|ls| ls[c]);
                column.run(engine, &field, label, mode)
            })
            .collect();
        let next_input = Volley::new(
            outcomes.iter().flat_map(|o| o.output.iter().copied()).collect(),
        )
        .clamp_to_input_window();
        LayerOutput { outcomes, next_input }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet_params() -> PlasticityParams {
        PlasticityParams::new(0.0, 0.0, 0.0, 0.0)
    }

    fn config(p: usize, q: usize, theta: u32, params: PlasticityParams) -> ColumnConfig {
        ColumnConfig { p, q, theta, params, mode: LearningMode::Stdp, seed: 7, shared_rng: false }
    }

    fn random_volley(rng: &mut RandomSource, p: usize) -> Volley {
        Volley::new(
            (0..p)
                .map(|_| {
                    let v = rng.next_word() & 15;
                    if v < 8 { SpikeTime::at(v as u8) } else { SpikeTime::ABSENT }
                })
                .collect(),
        )
    }

    #[test]
    fn wta_examples() {
        let t = |v: &[i8]| -> Vec<SpikeTime> {
            v.iter().map(|&x| if x < 0 { SpikeTime::ABSENT } else { SpikeTime::at(x as u8) }).collect()
        };
        assert_eq!(wta_inhibit(&t(&[5, 3, -1, 3])), Volley::new(t(&[-1, 3, -1, -1])));
        assert_eq!(wta_inhibit(&t(&[-1, -1, -1, -1])), Volley::new(t(&[-1, -1, -1, -1])));
        assert_eq!(wta_inhibit(&t(&[0, 7, 7, 7])), Volley::new(t(&[0, -1, -1, -1])));
    }

    #[test]
    fn wta_exhaustive_single_survivor() {
        let times: Vec<SpikeTime> =
            (0..=7).map(SpikeTime::at).chain([SpikeTime::ABSENT]).collect();
        for a in &times {
            for b in &times {
                for c in &times {
                    for d in &times {
                        let tuple = [*a, *b, *c, *d];
                        let out = wta_inhibit(&tuple);
                        let survivors: Vec<usize> =
                            (0..4).filter(|&i| out[i].is_present()).collect();
                        let min = *tuple.iter().min().unwrap();
                        if min.is_absent() {
                            assert!(survivors.is_empty());
                        } else {
                            let expect = tuple.iter().position(|&t| t == min).unwrap();
                            assert_eq!(survivors, [expect]);
                            assert_eq!(out[expect], min);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zero_weights_never_win() {
        let cfg = config(4, 3, 1, quiet_params());
        let mut col = Column::with_weights(&cfg, &[0; 12]).unwrap();
        let input = Volley::new(vec![
            SpikeTime::at(0),
            SpikeTime::at(1),
            SpikeTime::at(2),
            SpikeTime::at(3),
        ]);
        for engine in [Engine::Cycle, Engine::Functional] {
            let out = col.run(engine, &input, None, LearningMode::Stdp);
            assert_eq!(out.winner, None);
            assert!(out.output.iter().all(|t| t.is_absent()));
        }
    }

    #[test]
    fn zero_rates_freeze_weights() {
        let cfg = config(6, 4, 3, quiet_params());
        let mut col = Column::new(&cfg).unwrap();
        let before = col.weights();
        let mut rng = RandomSource::new(0xAB1E);
        for i in 0..50 {
            let input = random_volley(&mut rng, 6);
            let engine = if i % 2 == 0 { Engine::Cycle } else { Engine::Functional };
            let out = col.run(engine, &input, None, LearningMode::Stdp);
            assert_eq!(out.abs_delta_sum, 0);
        }
        assert_eq!(col.weights(), before);
    }

    #[test]
    fn row_identical_weights_tie_break_to_lowest_index() {
        let row = [3u8, 0, 7, 2];
        let weights: Vec<u8> = row.iter().chain(row.iter()).copied().collect();
        let cfg = config(4, 2, 5, quiet_params());
        let mut col = Column::with_weights(&cfg, &weights).unwrap();
        let input = Volley::new(vec![
            SpikeTime::at(0),
            SpikeTime::at(2),
            SpikeTime::at(1),
            SpikeTime::ABSENT,
        ]);
        let out = col.run_gamma(&input, None, LearningMode::Stdp);
        assert_eq!(out.winner, Some(0));
        assert_eq!(out.output[0], SpikeTime::at(2));
        assert!(out.output[1].is_absent());
    }

    #[test]
    fn engines_match_on_random_streams() {
        let params = PlasticityParams::new(0.6, 0.5, 0.02, 0.006);
        for shared in [false, true] {
            let cfg = ColumnConfig {
                p: 16,
                q: 4,
                theta: 12,
                params,
                mode: LearningMode::Rstdp,
                seed: 99,
                shared_rng: shared,
            };
            let mut cycle = Column::new(&cfg).unwrap();
            let mut functional = Column::new(&cfg).unwrap();
            let mut rng = RandomSource::new(0xE0E0);
            for step in 0..1000 {
                let input = random_volley(&mut rng, 16);
                let label = (rng.next_word() % 4) as usize;
                let a = cycle.run_gamma(&input, Some(label), LearningMode::Rstdp);
                let b = functional.run_functional_gamma(&input, Some(label), LearningMode::Rstdp);
                assert_eq!(a, b, "divergence at step {step} (shared = {shared})");
                assert_eq!(cycle.weights(), functional.weights(), "weights at step {step}");
            }
        }
    }

    #[test]
    fn seeded_runs_replay_identically() {
        let params = PlasticityParams::new(0.6, 0.5, 0.02, 0.006);
        let cfg = ColumnConfig {
            p: 8,
            q: 3,
            theta: 6,
            params,
            mode: LearningMode::Stdp,
            seed: 1234,
            shared_rng: false,
        };
        let run = || {
            let mut col = Column::new(&cfg).unwrap();
            let mut rng = RandomSource::new(0xD1CE);
            for _ in 0..200 {
                let input = random_volley(&mut rng, 8);
                col.run_gamma(&input, None, LearningMode::Stdp);
            }
            col.weights()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn winner_time_equals_min_pre_inhibition_time() {
        let params = PlasticityParams::new(0.3, 0.3, 0.05, 0.01);
        let cfg = ColumnConfig {
            p: 12,
            q: 5,
            theta: 9,
            params,
            mode: LearningMode::Stdp,
            seed: 5,
            shared_rng: false,
        };
        let mut col = Column::new(&cfg).unwrap();
        let mut rng = RandomSource::new(0x1111);
        for _ in 0..300 {
            let input = random_volley(&mut rng, 12);
            let weights = col.weights();
            let oracle_min = (0..5)
                .map(|n| response_oracle(&weights[n * 12..(n + 1) * 12], &input, 9))
                .min()
                .unwrap();
            let out = col.run_gamma(&input, None, LearningMode::Stdp);
            assert_eq!(out.winner_time(), oracle_min);
            let survivors = out.output.iter().filter(|t| t.is_present()).count();
            assert!(survivors <= 1);
        }
    }

    #[test]
    fn config_validation() {
        let params = quiet_params();
        assert_eq!(config(0, 1, 1, params).validate(), Err(ConfigError::NoInputs));
        assert_eq!(config(4, 0, 1, params).validate(), Err(ConfigError::NoNeurons));
        assert!(matches!(
            config(4, 1, 0, params).validate(),
            Err(ConfigError::ThresholdOutOfRange { .. })
        ));
        assert!(matches!(
            config(4, 1, 29, params).validate(),
            Err(ConfigError::ThresholdOutOfRange { .. })
        ));
        assert!(config(4, 1, 28, params).validate().is_ok());
        assert!(matches!(
            Column::with_weights(&config(2, 2, 1, params), &[1, 2, 3]),
            Err(ConfigError::WeightCount { expected: 4, got: 3 })
        ));
        assert!(matches!(
            Column::with_weights(&config(2, 2, 1, params), &[1, 2, 3, 8]),
            Err(ConfigError::WeightRange { weight: 8, index: 3 })
        ));
    }

    #[test]
    #[should_panic(expected = "requires a label")]
    fn rstdp_without_label_rejected() {
        let mut col = Column::new(&config(2, 2, 1, quiet_params())).unwrap();
        col.run_gamma(&Volley::silent(2), None, LearningMode::Rstdp);
    }

    #[test]
    #[should_panic(expected = "meaningless outside")]
    fn stdp_with_label_rejected() {
        let mut col = Column::new(&config(2, 2, 1, quiet_params())).unwrap();
        col.run_gamma(&Volley::silent(2), Some(0), LearningMode::Stdp);
    }

    #[test]
    #[should_panic(expected = "lines, column has")]
    fn volley_width_mismatch_rejected() {
        let mut col = Column::new(&config(4, 2, 1, quiet_params())).unwrap();
        col.run_gamma(&Volley::silent(3), None, LearningMode::Stdp);
    }

    #[test]
    fn one_column_layer_matches_standalone() {
        let params = PlasticityParams::new(0.6, 0.5, 0.02, 0.006);
        let cfg = ColumnConfig {
            p: 6,
            q: 2,
            theta: 4,
            params,
            mode: LearningMode::Stdp,
            seed: 21,
            shared_rng: false,
        };
        let spec = LayerSpec { columns: vec![cfg.clone()], wiring: vec![(0..6).collect()] };
        let mut layer = Layer::new(&spec, 6).unwrap();
        let mut standalone = Column::new(&cfg).unwrap();
        let mut rng = RandomSource::new(0x4242);
        for _ in 0..100 {
            let input = random_volley(&mut rng, 6);
            let from_layer = layer.step(Engine::Cycle, &input, None, LearningMode::Stdp);
            let direct = standalone.run_gamma(&input, None, LearningMode::Stdp);
            assert_eq!(from_layer.outcomes[0], direct);
        }
        assert_eq!(layer.columns()[0].weights(), standalone.weights());
    }

    #[test]
    fn disjoint_columns_do_not_interact() {
        let params = PlasticityParams::new(0.6, 0.5, 0.02, 0.006);
        let mk = |seed| ColumnConfig {
            p: 4,
            q: 2,
            theta: 3,
            params,
            mode: LearningMode::Stdp,
            seed,
            shared_rng: false,
        };
        let spec = LayerSpec {
            columns: vec![mk(1), mk(2)],
            wiring: vec![(0..4).collect(), (4..8).collect()],
        };
        let mut layer = Layer::new(&spec, 8).unwrap();
        let mut solo = Column::new(&mk(1)).unwrap();
        let mut rng = RandomSource::new(0x8888);
        let mut noise = RandomSource::new(0x9999);
        for _ in 0..100 {
            let left = random_volley(&mut rng, 4);
            let right = random_volley(&mut noise, 4);
            let joint =
                Volley::new(left.iter().chain(right.iter()).copied().collect());
            let out = layer.step(Engine::Functional, &joint, None, LearningMode::Stdp);
            let direct = solo.run_functional_gamma(&left, None, LearningMode::Stdp);
            assert_eq!(out.outcomes[0], direct, "column 0 must ignore column 1's field");
        }
    }

    #[test]
    fn identity_second_layer_passes_winners_through() {
        let params = quiet_params();
        let q = 4;
        // diagonal w_max weights, theta 1: neuron j fires exactly at input
        // line j's spike time
        let mut diag = vec![0u8; q * q];
        for j in 0..q {
            diag[j * q + j] = W_MAX;
        }
        let cfg = config(q, q, 1, params);
        let mut second = Column::with_weights(&cfg, &diag).unwrap();
        for t in 0..=7u8 {
            for j in 0..q {
                let mut first_out = vec![SpikeTime::ABSENT; q];
                first_out[j] = SpikeTime::at(t);
                let input = Volley::new(first_out).clamp_to_input_window();
                let out = second.run_gamma(&input, None, LearningMode::Stdp);
                assert_eq!(out.winner, Some(j));
                assert_eq!(out.output[j], SpikeTime::at(t));
            }
        }
    }

    #[test]
    fn layer_wiring_validation() {
        let cfg = config(4, 2, 3, quiet_params());
        let bad_arity =
            LayerSpec { columns: vec![cfg.clone()], wiring: vec![vec![0, 1]] };
        assert!(matches!(Layer::new(&bad_arity, 8), Err(ConfigError::WiringArity { .. })));
        let bad_range =
            LayerSpec { columns: vec![cfg.clone()], wiring: vec![vec![0, 1, 2, 9]] };
        assert!(matches!(Layer::new(&bad_range, 8), Err(ConfigError::WiringRange { .. })));
        let bad_count = LayerSpec { columns: vec![cfg], wiring: vec![] };
        assert!(matches!(Layer::new(&bad_count, 8), Err(ConfigError::WiringCount { .. })));
    }
}
