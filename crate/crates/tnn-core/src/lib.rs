//! Cycle-accurate simulator for temporal neural network (TNN) columns.
//!
//! Every hardware block is modeled at unit-clock granularity: synapses are
//! weight-counter FSMs with wrap-around thermometer readout, neuron bodies
//! are accumulating parallel counters initialized to the negated threshold,
//! and columns compose a synaptic crossbar with winner-take-all lateral
//! inhibition and online STDP/R-STDP weight updates. A volley-level
//! functional engine reproduces the same observable behavior for fast
//! experiments, and an analytical cost model turns column geometry into
//! gate-count, delay, and power estimates calibrated against post-synthesis
//! reference points.

pub mod column;
pub mod costmodel;
pub mod dataio;
pub mod neuron;
pub mod plasticity;
pub mod rng;
pub mod synapse;
pub mod temporal;

pub use column::{
    wta_inhibit, Column, ColumnConfig, Engine, GammaOutcome, Layer, LayerOutput, LayerSpec,
    LearningMode,
};
pub use plasticity::{GateStreams, PlasticityParams, Reward, StdpCase};
pub use rng::RandomSource;
pub use temporal::{gamma_phase, Phase, SpikeTime, Volley, GAMMA_PERIOD, PULSE_WIDTH, W_MAX};
