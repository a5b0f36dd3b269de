//! Synapse weight-counter FSM.
//!
//! A synapse stores a 3-bit weight and reads it out as a serial thermometer
//! code. While the 8-cycle input pulse is high, the counter decrements once
//! per unit clock, emitting 1s until it reaches zero; it then wraps past
//! w_max and keeps decrementing, so the full pulse width restores the
//! original weight in place.

use crate::temporal::{SpikeTime, GAMMA_PERIOD, W_MAX};

/// State of one synapse: learned weight plus the live readout machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynapseState {
    weight: u8,
    counter: u8,
    in_readout: bool,
    prev_input: bool,
}

impl SynapseState {
    pub fn new(weight: u8) -> SynapseState {
        assert!(weight <= W_MAX, "weight {weight} exceeds w_max {W_MAX}");
        SynapseState { weight, counter: weight, in_readout: false, prev_input: false }
    }

    /// The stored weight (stable across readout).
    pub fn weight(&self) -> u8 {
        self.weight
    }

    /// The live counter value; equals the weight outside of readout.
    pub fn counter(&self) -> u8 {
        self.counter
    }

    pub fn in_readout(&self) -> bool {
        self.in_readout
    }

    /// One unit clock of the readout FSM.
    ///
    /// A 0-to-1 edge on `input_bit` arms the readout. Each cycle the input
    /// is high, the counter decrements modulo w_max+1; the output is 1
    /// while the readout is armed and the counter has not yet hit zero.
    /// Reaching zero disarms the readout, and the remaining in-pulse
    /// decrements walk the counter back around to the original weight.
    pub fn step(&mut self, input_bit: bool) -> bool {
        if input_bit && !self.prev_input {
            self.in_readout = true;
        }
        self.prev_input = input_bit;
        if self.counter == 0 {
            self.in_readout = false;
        }
        let out = self.in_readout && input_bit;
        if input_bit {
            self.counter = if self.counter == 0 { W_MAX } else { self.counter - 1 };
        }
        out
    }

    /// Saturating weight update, applied at the update cycle.
    ///
    /// Also re-arms the edge detector and reloads the counter so the next
    /// gamma cycle starts from a clean state.
    pub fn apply_update(&mut self, inc: bool, dec: bool) {
        assert!(!(inc && dec), "conflicting increment and decrement");
        assert!(!self.in_readout, "weight update during readout");
        if inc {
            self.weight = (self.weight + 1).min(W_MAX);
        } else if dec {
            self.weight = self.weight.saturating_sub(1);
        }
        self.counter = self.weight;
        self.prev_input = false;
    }
}

/// Closed-form readout reference: the bit sequence a synapse of the given
/// weight must emit for a pulse edge at `arrival`.
pub fn readout_oracle(weight: u8, arrival: SpikeTime) -> [bool; GAMMA_PERIOD as usize] {
    assert!(weight <= W_MAX, "weight {weight} exceeds w_max {W_MAX}");
    assert!(
        arrival.is_absent() || arrival.in_input_window(),
        "arrival {arrival} outside the encode window"
    );
    let mut bits = [false; GAMMA_PERIOD as usize];
    if let Some(x) = arrival.cycle() {
        for t in x..x + weight {
            bits[t as usize] = true;
        }
    }
    bits
}
