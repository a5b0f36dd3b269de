//! Analytical hardware cost model.
//!
//! Closed-form scaling equations give gate count, critical-path depth,
//! gamma-frame time, and power surrogates for neurons and columns. A small
//! set of 45 nm post-synthesis reference points calibrates the abstract
//! units into mm2, ns, and mW. Gate count doubles as the static-power
//! surrogate; signal-transition count models dynamic power.

use serde::Serialize;
use thiserror::Error;

/// Abstract per-design cost figures in technology-free units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GateCostReport {
    /// Total gate count ('AND' equivalents).
    pub gates: u64,
    /// Gates on the critical path (one unit clock).
    pub delay_gates: u64,
    /// Gate delays per gamma frame: 15 unit clocks.
    pub time_gate_delays: u64,
    /// Static power surrogate (equals the gate count).
    pub p_static_units: u64,
    /// Dynamic power surrogate (signal transitions per gamma frame).
    pub p_dynamic_units: u64,
}

/// Fitted per-gate technology coefficients; all strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TechCalibration {
    pub area_per_gate_mm2: f64,
    pub delay_per_gate_ns: f64,
    pub static_power_per_gate_mw: f64,
    pub dynamic_power_per_transition_mw: f64,
}

/// Physical estimate for one design point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalEstimate {
    pub area_mm2: f64,
    pub gamma_time_ns: f64,
    pub power_mw: f64,
}

/// One post-synthesis reference design point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub p: usize,
    pub q: usize,
    pub synthesized_gates: u64,
    pub area_mm2: f64,
    pub time_ns: f64,
    pub power_mw: f64,
}

/// 45 nm post-synthesis results for three STDP column sizes.
pub const REFERENCE_STDP_45NM: [ReferenceRow; 3] = [
    ReferenceRow { p: 64, q: 8, synthesized_gates: 51_824, area_mm2: 0.05, time_ns: 28.95, power_mw: 0.25 },
    ReferenceRow { p: 128, q: 10, synthesized_gates: 128_658, area_mm2: 0.13, time_ns: 32.40, power_mw: 0.62 },
    ReferenceRow { p: 1024, q: 16, synthesized_gates: 1_639_020, area_mm2: 1.65, time_ns: 42.30, power_mw: 7.96 },
];

/// 45 nm post-synthesis results for the same columns with R-STDP.
pub const REFERENCE_RSTDP_45NM: [ReferenceRow; 3] = [
    ReferenceRow { p: 64, q: 8, synthesized_gates: 54_384, area_mm2: 0.05, time_ns: 28.95, power_mw: 0.26 },
    ReferenceRow { p: 128, q: 10, synthesized_gates: 135_058, area_mm2: 0.14, time_ns: 32.40, power_mw: 0.65 },
    ReferenceRow { p: 1024, q: 16, synthesized_gates: 1_720_940, area_mm2: 1.75, time_ns: 42.30, power_mw: 8.36 },
];

/// Reward-modulated learning adds roughly 5% logic on top of the STDP
/// baseline; applied to gates and power, not to timing.
pub const RSTDP_OVERHEAD: f64 = 1.05;

/// Unit-clocks per gamma frame, fixing T = 15 D.
const CLOCKS_PER_GAMMA: u64 = 15;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CostModelError {
    #[error("synapse count p = {0} below the minimum of 2")]
    TooFewInputs(usize),
    #[error("neuron count q = {0} below the minimum of 1")]
    TooFewNeurons(usize),
    #[error("calibration needs at least one reference row")]
    EmptyCalibration,
}

/// ceiling(log2 p) for p >= 2; hardware counter and adder widths round up.
fn ceil_log2(p: usize) -> u64 {
    debug_assert!(p >= 2);
    (usize::BITS - (p - 1).leading_zeros()) as u64
}

/// Cost of one p-input neuron with its synapses and update logic.
pub fn neuron_cost(p: usize) -> Result<GateCostReport, CostModelError> {
    if p < 2 {
        return Err(CostModelError::TooFewInputs(p));
    }
    let pl = p as u64;
    let l = ceil_log2(p);
    let gates = 102 * pl + 8 * l + 36;
    let delay_gates = 6 * l + 4;
    Ok(GateCostReport {
        gates,
        delay_gates,
        time_gate_delays: CLOCKS_PER_GAMMA * delay_gates,
        p_static_units: gates,
        p_dynamic_units: 204 * pl + 185 * l + 241,
    })
}

/// Cost of a p x q column including WTA.
pub fn column_cost(p: usize, q: usize) -> Result<GateCostReport, CostModelError> {
    if p < 2 {
        return Err(CostModelError::TooFewInputs(p));
    }
    if q < 1 {
        return Err(CostModelError::TooFewNeurons(q));
    }
    let (pl, ql) = (p as u64, q as u64);
    let l = ceil_log2(p);
    let gates = 102 * pl * ql + 8 * ql * l + 44 * ql + ql * ql;
    let delay_gates = 6 * l + 4;
    Ok(GateCostReport {
        gates,
        delay_gates,
        time_gate_delays: CLOCKS_PER_GAMMA * delay_gates,
        p_static_units: gates,
        p_dynamic_units: 204 * pl * ql + 185 * ql * l + 257 * ql + 2 * ql * ql,
    })
}

impl GateCostReport {
    /// The same design with reward-modulated learning: gates and power
    /// scale by the overhead factor, timing is unchanged.
    pub fn with_rstdp_overhead(&self) -> GateCostReport {
        let scale = |v: u64| (v as f64 * RSTDP_OVERHEAD).round() as u64;
        GateCostReport {
            gates: scale(self.gates),
            delay_gates: self.delay_gates,
            time_gate_delays: self.time_gate_delays,
            p_static_units: scale(self.p_static_units),
            p_dynamic_units: scale(self.p_dynamic_units),
        }
    }
}

/// Per-row relative errors of a calibration fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationResidual {
    pub p: usize,
    pub q: usize,
    pub area_rel_err: f64,
    pub time_rel_err: f64,
    pub power_rel_err: f64,
}

/// A fitted calibration together with its per-row residuals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationFit {
    pub calibration: TechCalibration,
    pub residuals: Vec<CalibrationResidual>,
}

/// Smallest admissible coefficient: keeps the calibration strictly
/// positive when a bounded fit pins a coefficient at its floor.
const COEFF_FLOOR: f64 = 1e-12;

/// Least-squares calibration of per-gate coefficients against reference
/// rows. Area and time are one-parameter fits. Power is a two-parameter
/// fit over (static units, dynamic units); those regressors are nearly
/// proportional for realistic geometries, so when the unconstrained
/// solution leaves the positive quadrant (or the system is effectively
/// singular, e.g. a single row) the offending coefficient is pinned at a
/// positive floor and the other refitted.
pub fn calibrate(rows: &[ReferenceRow]) -> Result<CalibrationFit, CostModelError> {
    if rows.is_empty() {
        return Err(CostModelError::EmptyCalibration);
    }
    let models: Vec<GateCostReport> =
        rows.iter().map(|r| column_cost(r.p, r.q)).collect::<Result<_, _>>()?;

    let dot = |f: &dyn Fn(&GateCostReport, &ReferenceRow) -> f64| -> f64 {
        models.iter().zip(rows).map(|(m, r)| f(m, r)).sum()
    };

    let s_gg = dot(&|m, _| (m.gates as f64).powi(2));
    let s_ga = dot(&|m, r| m.gates as f64 * r.area_mm2);
    let area_per_gate = s_ga / s_gg;

    let s_tt = dot(&|m, _| (m.time_gate_delays as f64).powi(2));
    let s_tt_ns = dot(&|m, r| m.time_gate_delays as f64 * r.time_ns);
    let delay_per_gate = s_tt_ns / s_tt;

    let s_ss = dot(&|m, _| (m.p_static_units as f64).powi(2));
    let s_dd = dot(&|m, _| (m.p_dynamic_units as f64).powi(2));
    let s_sd = dot(&|m, _| m.p_static_units as f64 * m.p_dynamic_units as f64);
    let s_sp = dot(&|m, r| m.p_static_units as f64 * r.power_mw);
    let s_dp = dot(&|m, r| m.p_dynamic_units as f64 * r.power_mw);

    let det = s_ss * s_dd - s_sd * s_sd;
    let (mut c_static, mut c_dynamic) = if det.abs() > 1e-9 * s_ss * s_dd {
        ((s_dd * s_sp - s_sd * s_dp) / det, (s_ss * s_dp - s_sd * s_sp) / det)
    } else {
        (f64::NEG_INFINITY, f64::NEG_INFINITY)
    };
    if c_static < COEFF_FLOOR || c_dynamic < COEFF_FLOOR {
        // bounded refit: pin the dynamic coefficient first (static units
        // carry nearly all the signal), fall back to the other pin
        c_dynamic = COEFF_FLOOR;
        c_static = (s_sp - c_dynamic * s_sd) / s_ss;
        if c_static < COEFF_FLOOR {
            c_static = COEFF_FLOOR;
            c_dynamic = ((s_dp - c_static * s_sd) / s_dd).max(COEFF_FLOOR);
        }
    }

    let calibration = TechCalibration {
        area_per_gate_mm2: area_per_gate,
        delay_per_gate_ns: delay_per_gate,
        static_power_per_gate_mw: c_static,
        dynamic_power_per_transition_mw: c_dynamic,
    };
    let residuals = models
        .iter()
        .zip(rows)
        .map(|(m, r)| {
            let est = estimate_physical(m, &calibration);
            CalibrationResidual {
                p: r.p,
                q: r.q,
                area_rel_err: (est.area_mm2 - r.area_mm2) / r.area_mm2,
                time_rel_err: (est.gamma_time_ns - r.time_ns) / r.time_ns,
                power_rel_err: (est.power_mw - r.power_mw) / r.power_mw,
            }
        })
        .collect();
    Ok(CalibrationFit { calibration, residuals })
}

/// Scales an abstract report into physical units.
pub fn estimate_physical(report: &GateCostReport, calib: &TechCalibration) -> PhysicalEstimate {
    assert!(
        calib.area_per_gate_mm2 > 0.0
            && calib.delay_per_gate_ns > 0.0
            && calib.static_power_per_gate_mw > 0.0
            && calib.dynamic_power_per_transition_mw > 0.0,
        "calibration coefficients must be strictly positive"
    );
    PhysicalEstimate {
        area_mm2: report.gates as f64 * calib.area_per_gate_mm2,
        gamma_time_ns: report.time_gate_delays as f64 * calib.delay_per_gate_ns,
        power_mw: report.p_static_units as f64 * calib.static_power_per_gate_mw
            + report.p_dynamic_units as f64 * calib.dynamic_power_per_transition_mw,
    }
}
