//! STDP update rules and their reward-modulated variants.
//!
//! Each synapse update classifies the (input, output) spike-time pair into
//! one of five cases, then applies a Bernoulli-gated increment or
//! decrement. The stabilization function F(w) makes saturated weights
//! sticky; a floor probability keeps fully saturated weights from freezing
//! outright. All stochastic gates are realized as threshold compares on
//! LFSR words, and every update consumes the same five draws no matter
//! which case holds, so different engine modes stay bit-identical.

use crate::rng::{derive_seed, RandomSource};
use crate::temporal::{SpikeTime, W_MAX};

/// Tap masks for the five gate generators, all maximal (period 65535).
/// Distinct characteristic polynomials keep the gate bits independent:
/// words of a single LFSR are linear images of each other, and compares
/// against linearly related words bias the ANDed/ORed gate rates.
const GATE_TAPS: [u32; 5] = [0x002D, 0x0039, 0x003F, 0x0053, 0x00BD];

/// The bank of five gate generators backing one update stream: one
/// Bernoulli gate per case rate plus the stabilization draw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateStreams {
    capture: RandomSource,
    backoff: RandomSource,
    search: RandomSource,
    min: RandomSource,
    stabilize: RandomSource,
}

impl GateStreams {
    /// A bank seeded from a master seed and a stream index; each gate
    /// occupies its own derived sub-stream.
    pub fn new(master: u64, stream: u64) -> GateStreams {
        let mut gate = (0u64..).map(|g| {
            let seed = derive_seed(master, stream * 5 + g);
            RandomSource::with_params(seed.into(), 16, GATE_TAPS[g as usize])
        });
        GateStreams {
            capture: gate.next().unwrap(),
            backoff: gate.next().unwrap(),
            search: gate.next().unwrap(),
            min: gate.next().unwrap(),
            stabilize: gate.next().unwrap(),
        }
    }
}

/// Bernoulli rates for the stochastic update gates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasticityParams {
    mu_capture: f64,
    mu_backoff: f64,
    mu_search: f64,
    mu_min: f64,
}

impl PlasticityParams {
    pub fn new(mu_capture: f64, mu_backoff: f64, mu_search: f64, mu_min: f64) -> Self {
        for (name, mu) in [
            ("mu_capture", mu_capture),
            ("mu_backoff", mu_backoff),
            ("mu_search", mu_search),
            ("mu_min", mu_min),
        ] {
            assert!((0.0..=1.0).contains(&mu), "{name} = {mu} outside [0, 1]");
        }
        PlasticityParams { mu_capture, mu_backoff, mu_search, mu_min }
    }

    pub fn mu_capture(&self) -> f64 {
        self.mu_capture
    }

    pub fn mu_backoff(&self) -> f64 {
        self.mu_backoff
    }

    pub fn mu_search(&self) -> f64 {
        self.mu_search
    }

    pub fn mu_min(&self) -> f64 {
        self.mu_min
    }
}

/// The five update cases over an (input x, output z) spike-time pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum StdpCase {
    Capture = 1,
    Backoff = 2,
    Search = 3,
    AbsentInput = 4,
    Idle = 5,
}

impl StdpCase {
    pub fn number(self) -> u8 {
        self as u8
    }
}

/// Reward signal selecting the update regime, as a 2-bit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reward {
    Plus,
    Minus,
    Zero,
    Unsupervised,
}

impl Reward {
    /// The wire encoding: +1 = 01, -1 = 11, 0 = 00, and 10 selects
    /// unsupervised operation.
    pub fn bits(self) -> u8 {
        match self {
            Reward::Plus => 0b01,
            Reward::Minus => 0b11,
            Reward::Zero => 0b00,
            Reward::Unsupervised => 0b10,
        }
    }

    pub fn from_bits(bits: u8) -> Reward {
        match bits {
            0b01 => Reward::Plus,
            0b11 => Reward::Minus,
            0b00 => Reward::Zero,
            0b10 => Reward::Unsupervised,
            other => panic!("reward code {other:#04b} exceeds two bits"),
        }
    }
}

/// Classifies an (input, output) spike-time pair into its update case.
pub fn classify_case(x: SpikeTime, z: SpikeTime) -> StdpCase {
    match (x.cycle(), z.cycle()) {
        (Some(x), Some(z)) if x <= z => StdpCase::Capture,
        (Some(_), Some(_)) => StdpCase::Backoff,
        (Some(_), None) => StdpCase::Search,
        (None, Some(_)) => StdpCase::AbsentInput,
        (None, None) => StdpCase::Idle,
    }
}

/// Success probability of the stabilization gate, (w/w_max)(1 - w/w_max).
pub fn f_probability(w: u8) -> f64 {
    assert!(w <= W_MAX, "weight {w} exceeds w_max {W_MAX}");
    (w * (W_MAX - w)) as f64 / (W_MAX as f64 * W_MAX as f64)
}

/// One draw of the stabilization gate: Bernoulli with rate w(7-w)/49.
/// Models the weight-indexed 8-way stream select with a single compare.
pub fn stabilization_bit(w: u8, rng: &mut RandomSource) -> bool {
    rng.bernoulli(f_probability(w))
}

/// The five gate bits consumed by one synapse update. Drawn in a fixed
/// order (capture, backoff, search, min, stabilize) on every update cycle
/// regardless of case or reward, so all engine modes advance the stream
/// identically.
struct UpdateDraws {
    capture: bool,
    backoff: bool,
    search: bool,
    min: bool,
    stabilize: bool,
}

impl UpdateDraws {
    fn draw(w: u8, params: &PlasticityParams, streams: &mut GateStreams) -> UpdateDraws {
        UpdateDraws {
            capture: streams.capture.bernoulli(params.mu_capture),
            backoff: streams.backoff.bernoulli(params.mu_backoff),
            search: streams.search.bernoulli(params.mu_search),
            min: streams.min.bernoulli(params.mu_min),
            stabilize: stabilization_bit(w, &mut streams.stabilize),
        }
    }

    /// max(F(w), B(mu_min)) as an OR of the two gate bits.
    fn stabilized(&self) -> bool {
        self.stabilize || self.min
    }
}

fn table_delta(case: StdpCase, draws: &UpdateDraws) -> i8 {
    match case {
        StdpCase::Capture => (draws.capture && draws.stabilized()) as i8,
        StdpCase::Backoff | StdpCase::AbsentInput => -((draws.backoff && draws.stabilized()) as i8),
        StdpCase::Search => draws.search as i8,
        StdpCase::Idle => 0,
    }
}

/// One unsupervised STDP update: the weight delta in {-1, 0, +1}.
pub fn stdp_delta(
    case: StdpCase,
    w: u8,
    params: &PlasticityParams,
    streams: &mut GateStreams,
) -> i8 {
    let draws = UpdateDraws::draw(w, params, streams);
    table_delta(case, &draws)
}

/// One reward-modulated update.
///
/// PLUS reinforces the supervised table but suppresses SEARCH; MINUS
/// represses by flipping CAPTURE's sign while leaving SEARCH active; ZERO
/// lets only SEARCH act; UNSUPERVISED reproduces `stdp_delta` bit for bit.
pub fn rstdp_delta(
    case: StdpCase,
    w: u8,
    reward: Reward,
    params: &PlasticityParams,
    streams: &mut GateStreams,
) -> i8 {
    let draws = UpdateDraws::draw(w, params, streams);
    match reward {
        Reward::Unsupervised => table_delta(case, &draws),
        Reward::Plus => match case {
            StdpCase::Search => 0,
            other => table_delta(other, &draws),
        },
        Reward::Minus => match case {
            StdpCase::Capture => -((draws.capture && draws.stabilized()) as i8),
            StdpCase::Search => draws.search as i8,
            _ => 0,
        },
        Reward::Zero => match case {
            StdpCase::Search => draws.search as i8,
            _ => 0,
        },
    }
}

/// Maps a gamma outcome to the reward signal under the identity
/// label-to-neuron mapping (label k is neuron k of q).
///
/// Labels must already be validated against the mapping; an out-of-range
/// label is a caller bug.
pub fn compute_reward(winner: Option<usize>, label: usize, q: usize) -> Reward {
    assert!(label < q, "label {label} has no mapped neuron (q = {q})");
    match winner {
        None => Reward::Zero,
        Some(n) if n == label => Reward::Plus,
        Some(_) => Reward::Minus,
    }
}
