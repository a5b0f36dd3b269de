//! SRM0 neuron body: an accumulating parallel counter with sign-bit
//! threshold detection.
//!
//! The accumulator starts each gamma cycle at -theta; synapse output bits
//! are summed in every unit clock, and the neuron fires on the first cycle
//! the sign bit clears. Firing launches an 8-cycle output pulse. The
//! closed-form `response_oracle` gives the same fire time from ramp-no-leak
//! response functions without stepping the pipeline.

use crate::temporal::{SpikeTime, Volley, GAMMA_PERIOD, PULSE_WIDTH};

/// One neuron body: membrane accumulator plus fire/pulse bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeuronBody {
    p: usize,
    theta: i32,
    accumulator: i32,
    fired_cycle: SpikeTime,
    pulse_remaining: u8,
    pulse_bit: bool,
    cycle: u8,
}

impl NeuronBody {
    /// A body over `p` input lines with threshold `theta`.
    ///
    /// `theta` must be at least 1; reachability (theta <= p * w_max) is a
    /// column-level configuration concern, so an unreachable threshold
    /// here simply never fires.
    pub fn new(p: usize, theta: u32) -> NeuronBody {
        assert!(p >= 1, "neuron needs at least one input line");
        assert!(theta >= 1, "threshold must be positive");
        NeuronBody {
            p,
            theta: theta as i32,
            accumulator: -(theta as i32),
            fired_cycle: SpikeTime::ABSENT,
            pulse_remaining: 0,
            pulse_bit: false,
            cycle: 0,
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn theta(&self) -> u32 {
        self.theta as u32
    }

    pub fn accumulator(&self) -> i32 {
        self.accumulator
    }

    /// First cycle at which the accumulator crossed zero, if any.
    pub fn fire_time(&self) -> SpikeTime {
        self.fired_cycle
    }

    /// Whether the output pulse is high this cycle (set by the last `step`).
    pub fn output_active(&self) -> bool {
        self.pulse_bit
    }

    /// Resets the accumulator to -theta and clears fire state.
    pub fn begin_gamma(&mut self) {
        self.accumulator = -self.theta;
        self.fired_cycle = SpikeTime::ABSENT;
        self.pulse_remaining = 0;
        self.pulse_bit = false;
        self.cycle = 0;
    }

    /// One unit clock: add the incoming synapse bits, fire on sign-bit
    /// clear (once per gamma cycle). Returns whether the neuron fired on
    /// this very cycle.
    pub fn step(&mut self, bits: &[bool]) -> bool {
        assert!(self.cycle < GAMMA_PERIOD, "stepped past the gamma frame");
        assert_eq!(bits.len(), self.p, "expected {} synapse bits, got {}", self.p, bits.len());
        self.accumulator += bits.iter().filter(|&&b| b).count() as i32;
        let mut fired_now = false;
        if self.fired_cycle.is_absent() && !self.accumulator.is_negative() {
            self.fired_cycle = SpikeTime::at(self.cycle);
            self.pulse_remaining = PULSE_WIDTH;
            fired_now = true;
        }
        self.pulse_bit = self.pulse_remaining > 0;
        if self.pulse_remaining > 0 {
            self.pulse_remaining -= 1;
        }
        self.cycle += 1;
        fired_now
    }
}

/// Closed-form fire time under ramp-no-leak response functions:
/// the earliest cycle t with sum_i min(max(t - x_i + 1, 0), w_i) >= theta,
/// or ABSENT when the potential never reaches the threshold in the frame.
pub fn response_oracle(weights: &[u8], volley: &Volley, theta: u32) -> SpikeTime {
    assert_eq!(weights.len(), volley.len(), "weights and volley length mismatch");
    assert!(theta >= 1, "threshold must be positive");
    for t in 0..GAMMA_PERIOD {
        let potential: u32 = weights
            .iter()
            .zip(volley.iter())
            .filter_map(|(&w, x)| {
                x.cycle().map(|x| {
                    let ramp = (t as u32 + 1).saturating_sub(x as u32);
                    ramp.min(w as u32)
                })
            })
            .sum();
        if potential >= theta {
            return SpikeTime::at(t);
        }
    }
    SpikeTime::ABSENT
}

/// The 8-cycle output pulse for a fire time, truncated at the gamma
/// boundary; all zeros for ABSENT.
pub fn spike_pulse(fired_cycle: SpikeTime) -> [bool; GAMMA_PERIOD as usize] {
    let mut bits = [false; GAMMA_PERIOD as usize];
    if let Some(t) = fired_cycle.cycle() {
        for c in t..(t + PULSE_WIDTH).min(GAMMA_PERIOD) {
            bits[c as usize] = true;
        }
    }
    bits
}
