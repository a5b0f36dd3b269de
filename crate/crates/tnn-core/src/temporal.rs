//! Spike-time and volley types plus the gamma-cycle phase schedule.
//!
//! All temporal processing runs against a 15-unit-clock gamma frame:
//! 7 cycles of input encoding, 7 cycles of readout tail, and one final
//! weight-update cycle. Spike times are unit-clock arrival offsets within
//! that frame, with an absent spike ordered after every present one.

use std::cmp::Ordering;
use std::fmt;

/// Maximum synaptic weight; also the latest legal input arrival cycle.
pub const W_MAX: u8 = 7;

/// Bits needed to store a weight in `0..=W_MAX`.
pub const WEIGHT_BITS: u32 = 3;

/// Width of every input and output spike pulse, in unit clocks.
pub const PULSE_WIDTH: u8 = W_MAX + 1;

/// Unit clocks per gamma cycle: 7 encode + 7 readout tail + 1 update.
pub const GAMMA_PERIOD: u8 = 15;

/// Phase of a unit-clock cycle within the gamma frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Cycles 0..=6: new input spikes may arrive.
    InputWindow,
    /// Cycles 7..=13: readout of in-flight pulses completes.
    Tail,
    /// Cycle 14: STDP increments/decrements are applied.
    Update,
}

/// Maps a unit-clock cycle to its gamma phase.
///
/// Panics if `cycle` is outside `0..GAMMA_PERIOD`.
pub fn gamma_phase(cycle: u8) -> Phase {
    assert!(cycle < GAMMA_PERIOD, "cycle {cycle} outside gamma frame");
    match cycle {
        0..=6 => Phase::InputWindow,
        7..=13 => Phase::Tail,
        _ => Phase::Update,
    }
}

/// Unit-clock arrival time of a spike within one gamma cycle, or absent.
///
/// Absent compares greater than every present time, so the minimum over a
/// set of spike times is the earliest actual spike.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpikeTime(Option<u8>);

impl SpikeTime {
    /// The no-spike value.
    pub const ABSENT: SpikeTime = SpikeTime(None);

    /// A spike at unit-clock `t`. Panics if `t` lies outside the gamma frame.
    pub fn at(t: u8) -> SpikeTime {
        assert!(t < GAMMA_PERIOD, "spike time {t} outside gamma frame");
        SpikeTime(Some(t))
    }

    pub fn is_absent(self) -> bool {
        self.0.is_none()
    }

    pub fn is_present(self) -> bool {
        self.0.is_some()
    }

    /// The arrival cycle, if present.
    pub fn cycle(self) -> Option<u8> {
        self.0
    }

    /// True for present times within the input encode window `0..=W_MAX`.
    pub fn in_input_window(self) -> bool {
        matches!(self.0, Some(t) if t <= W_MAX)
    }
}

impl Ord for SpikeTime {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
    }
}

impl PartialOrd for SpikeTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SpikeTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(t) => write!(f, "{t}"),
            None => write!(f, "-"),
        }
    }
}

/// One wave of spikes: at most one spike time per input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Volley(Vec<SpikeTime>);

impl Volley {
    pub fn new(times: Vec<SpikeTime>) -> Volley {
        Volley(times)
    }

    /// A volley with every line silent.
    pub fn silent(len: usize) -> Volley {
        Volley(vec![SpikeTime::ABSENT; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn times(&self) -> &[SpikeTime] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SpikeTime> {
        self.0.iter()
    }

    /// True when every present time fits the input encode window, i.e. all
    /// pulses spawned by this volley are full width within the gamma frame.
    pub fn fits_input_window(&self) -> bool {
        self.0.iter().all(|t| t.is_absent() || t.in_input_window())
    }

    /// Maps times past the encode window to absent; used when a column
    /// output feeds the next layer, whose encoding admits only `0..=W_MAX`.
    pub fn clamp_to_input_window(&self) -> Volley {
        Volley(
            self.0
                .iter()
                .map(|&t| if t.in_input_window() { t } else { SpikeTime::ABSENT })
                .collect(),
        )
    }
}

impl std::ops::Index<usize> for Volley {
    type Output = SpikeTime;
    fn index(&self, i: usize) -> &SpikeTime {
        &self.0[i]
    }
}

/// Architectural timing/precision parameters tied together by the
/// three-bit weight encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArchParams {
    pub w_max: u8,
    pub weight_bits: u32,
    pub pulse_width: u8,
    pub gamma_period: u8,
}

impl ArchParams {
    /// Derives the parameter set for a given maximum weight.
    pub fn new(w_max: u8) -> ArchParams {
        assert!(w_max >= 1, "w_max must be at least 1");
        let weight_bits = (w_max as u32 + 1).next_power_of_two().trailing_zeros().max(1);
        let pulse_width = w_max + 1;
        ArchParams {
            w_max,
            weight_bits,
            pulse_width,
            // encode window + readout tail + update cycle
            gamma_period: w_max + w_max + 1,
        }
    }
}

impl Default for ArchParams {
    fn default() -> ArchParams {
        ArchParams::new(W_MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absent_is_maximal() {
        let mut times = vec![SpikeTime::ABSENT, SpikeTime::at(5), SpikeTime::at(0)];
        times.sort();
        assert_eq!(times, vec![SpikeTime::at(0), SpikeTime::at(5), SpikeTime::ABSENT]);
        assert!(SpikeTime::at(14) < SpikeTime::ABSENT);
        assert_eq!(SpikeTime::ABSENT.cmp(&SpikeTime::ABSENT), Ordering::Equal);
    }

    #[test]
    fn min_over_volley_is_well_defined() {
        let v = Volley::new(vec![SpikeTime::at(3), SpikeTime::ABSENT, SpikeTime::at(1)]);
        assert_eq!(v.iter().min().copied(), Some(SpikeTime::at(1)));
        let empty = Volley::silent(4);
        assert_eq!(empty.iter().min().copied(), Some(SpikeTime::ABSENT));
    }

    #[test]
    fn phase_partition() {
        assert_eq!(gamma_phase(0), Phase::InputWindow);
        assert_eq!(gamma_phase(6), Phase::InputWindow);
        assert_eq!(gamma_phase(7), Phase::Tail);
        assert_eq!(gamma_phase(13), Phase::Tail);
        assert_eq!(gamma_phase(14), Phase::Update);
        // exactly one phase per cycle over the whole frame
        let mut counts = [0usize; 3];
        for c in 0..GAMMA_PERIOD {
            match gamma_phase(c) {
                Phase::InputWindow => counts[0] += 1,
                Phase::Tail => counts[1] += 1,
                Phase::Update => counts[2] += 1,
            }
        }
        assert_eq!(counts, [7, 7, 1]);
    }

    #[test]
    #[should_panic(expected = "outside gamma frame")]
    fn phase_rejects_out_of_range() {
        gamma_phase(15);
    }

    #[test]
    #[should_panic(expected = "outside gamma frame")]
    fn spike_time_rejects_out_of_frame() {
        SpikeTime::at(15);
    }

    #[test]
    fn input_window_clamp() {
        let v = Volley::new(vec![SpikeTime::at(7), SpikeTime::at(9), SpikeTime::ABSENT]);
        assert!(!v.fits_input_window());
        let c = v.clamp_to_input_window();
        assert_eq!(
            c.times(),
            &[SpikeTime::at(7), SpikeTime::ABSENT, SpikeTime::ABSENT]
        );
        assert!(c.fits_input_window());
    }

    #[test]
    fn arch_params_weight_bits() {
        let p = ArchParams::default();
        assert_eq!(p.w_max, 7);
        assert_eq!(p.weight_bits, 3);
        assert_eq!(p.pulse_width, 8);
        assert_eq!(p.gamma_period, 15);
        assert_eq!(ArchParams::new(15).weight_bits, 4);
        assert_eq!(ArchParams::new(3).weight_bits, 2);
        assert_eq!(ArchParams::new(1).weight_bits, 1);
    }
}
