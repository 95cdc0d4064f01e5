//! Sense path: reference ladder, current/voltage comparators, and operand
//! recovery.
//!
//! A dual-row activation leaves one of four current levels on each sense
//! line. Three references placed between adjacent levels classify the line
//! into an (or, and, b) triple; the first operand bit is then recovered
//! combinationally from that triple.

use crate::array::{ActivationMode, BiasPlan};
use crate::device::{BitState, DeviceParams};
use crate::error::{Error, Result, VectorPair};

/// The four operand vectors (a, b) in ascending current order under a
/// valid asymmetric bias.
pub const VECTORS: [VectorPair; 4] =
    [(false, false), (true, false), (false, true), (true, true)];

/// Sense-line currents for the four operand vectors, in `VECTORS` order (A).
pub fn adra_levels(device: &DeviceParams, bias: &BiasPlan) -> Result<[f64; 4]> {
    device.validate()?;
    bias.validate()?;
    let level = |a: bool, b: bool| {
        device.cell_current(BitState::from_bit(a), bias.v_gread1)
            + device.cell_current(BitState::from_bit(b), bias.v_gread2)
    };
    Ok([level(false, false), level(true, false), level(false, true), level(true, true)])
}

/// Three current references separating the four activation levels (A).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceLadder {
    /// Between (0,0) and (1,0): crossing it means at least one stored 1.
    pub i_ref_or: f64,
    /// Between (1,0) and (0,1): crossing it means the full-drive row holds 1.
    pub i_ref_b: f64,
    /// Between (0,1) and (1,1): crossing it means both rows hold 1.
    pub i_ref_and: f64,
}

/// Places each reference at the midpoint of its adjacent level pair.
///
/// Every adjacent gap must exceed twice `margin` so each level keeps at
/// least `margin` of clearance from its references.
pub fn build_ladder(device: &DeviceParams, bias: &BiasPlan, margin: f64) -> Result<ReferenceLadder> {
    if !(margin > 0.0) {
        return Err(Error::InvalidParams {
            what: format!("sense margin ({margin}) must be positive"),
        });
    }
    let levels = adra_levels(device, bias)?;
    for k in 0..3 {
        let gap = levels[k + 1] - levels[k];
        if !(gap > 2.0 * margin) {
            return Err(Error::InsufficientMargin {
                lower: VECTORS[k],
                upper: VECTORS[k + 1],
                gap,
                required: 2.0 * margin,
            });
        }
    }
    Ok(ReferenceLadder {
        i_ref_or: 0.5 * (levels[0] + levels[1]),
        i_ref_b: 0.5 * (levels[1] + levels[2]),
        i_ref_and: 0.5 * (levels[2] + levels[3]),
    })
}

/// Comparator outputs for one sense line.
///
/// Reachable triples satisfy `and_bit => b_bit => or_bit`; `a_bit` stays
/// unset until operand recovery runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SenseOutcome {
    pub or_bit: bool,
    pub and_bit: bool,
    pub b_bit: bool,
    pub a_bit: Option<bool>,
}

impl SenseOutcome {
    pub fn new(or_bit: bool, and_bit: bool, b_bit: bool) -> Self {
        SenseOutcome { or_bit, and_bit, b_bit, a_bit: None }
    }

    /// Recovers the first operand and returns the (a, b) pair.
    pub fn resolve(&self) -> Result<(bool, bool)> {
        Ok((recover_a(self.or_bit, self.and_bit, self.b_bit)?, self.b_bit))
    }
}

/// Classifies a sense-line current against the three references.
pub fn sense_current(i_sl: f64, ladder: &ReferenceLadder) -> SenseOutcome {
    SenseOutcome::new(i_sl > ladder.i_ref_or, i_sl > ladder.i_ref_and, i_sl > ladder.i_ref_b)
}

/// First-operand recovery: `a = !( !and & (b | !or) )`.
///
/// Errors on triples no activation can produce (`and` without `b`, or any
/// set bit while `or` is clear).
pub fn recover_a(or_bit: bool, and_bit: bool, b_bit: bool) -> Result<bool> {
    let reachable = matches!(
        (or_bit, and_bit, b_bit),
        (false, false, false) | (true, false, false) | (true, false, true) | (true, true, true)
    );
    if !reachable {
        return Err(Error::UnreachableTriple { or_bit, and_bit, b_bit });
    }
    Ok(!(!and_bit & (b_bit | !or_bit)))
}

/// Voltage-domain sensing scheme: where the bitline rests between accesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoltageScheme {
    /// Bitline held charged; an access only recharges what was drained.
    Precharged,
    /// Bitline left discharged; every access charges it from zero.
    Discharged,
}

/// Parameters of the discharge-based sense path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoltageSenseParams {
    /// Threshold pitch (V). Comparators sit at 1, 3, and 5 times this
    /// discharge depth; a standard read resolves within 2 and a dual-row
    /// compute within 6.
    pub delta: f64,
    /// Bitline capacitance (F).
    pub cbl: f64,
    pub scheme: VoltageScheme,
}

impl VoltageSenseParams {
    /// The deepest threshold (5 delta) plus one more pitch must fit inside
    /// the read voltage, so a full 6-delta discharge stays observable.
    pub fn validate(&self, v_read: f64) -> Result<()> {
        if !(self.delta > 0.0) {
            return Err(Error::InvalidParams {
                what: format!("delta ({}) must be positive", self.delta),
            });
        }
        if !(self.cbl > 0.0) {
            return Err(Error::InvalidParams { what: format!("cbl ({}) must be positive", self.cbl) });
        }
        if !(6.0 * self.delta < v_read) {
            return Err(Error::InvalidParams {
                what: format!(
                    "6*delta ({}) must stay below v_read ({v_read})",
                    6.0 * self.delta
                ),
            });
        }
        Ok(())
    }
}

/// Bitline discharge after `t_sense` seconds, clamped to the full swing (V).
pub fn discharge_depth(i_sl: f64, params: &VoltageSenseParams, t_sense: f64, v_read: f64) -> f64 {
    (i_sl * t_sense / params.cbl).min(v_read)
}

/// Voltage-domain equivalent of [`sense_current`]: thresholds at 1, 3, and
/// 5 delta of discharge.
pub fn sense_voltage(
    i_sl: f64,
    params: &VoltageSenseParams,
    t_sense: f64,
    v_read: f64,
) -> SenseOutcome {
    let dv = discharge_depth(i_sl, params, t_sense, v_read);
    SenseOutcome::new(dv > params.delta, dv > 5.0 * params.delta, dv > 3.0 * params.delta)
}

/// Discharge depth (in delta multiples) an access must tolerate before its
/// deepest threshold settles.
pub fn required_discharge(mode: ActivationMode) -> Result<u32> {
    match mode {
        ActivationMode::StandardRead => Ok(2),
        ActivationMode::AdraCim => Ok(6),
        ActivationMode::SymmetricCim => Err(Error::ModeMismatch {
            what: "symmetric dual-row activation has no three-reference window".into(),
        }),
    }
}

/// Sense window that lets the strongest level, both cells conducting,
/// discharge exactly 6 delta (s).
pub fn default_sense_time(
    device: &DeviceParams,
    bias: &BiasPlan,
    params: &VoltageSenseParams,
) -> Result<f64> {
    params.validate(bias.v_read)?;
    let levels = adra_levels(device, bias)?;
    let top = levels[3];
    if !(top > 0.0) {
        return Err(Error::InvalidParams {
            what: "strongest activation level must carry positive current".into(),
        });
    }
    Ok(6.0 * params.delta * params.cbl / top)
}

/// Checks that the four discharge depths straddle the three thresholds on
/// the correct sides and that each adjacent level pair stays at least one
/// delta apart.
pub fn validate_voltage_window(
    device: &DeviceParams,
    bias: &BiasPlan,
    params: &VoltageSenseParams,
    t_sense: f64,
) -> Result<()> {
    params.validate(bias.v_read)?;
    if !(t_sense > 0.0) {
        return Err(Error::InvalidParams {
            what: format!("t_sense ({t_sense}) must be positive"),
        });
    }
    let levels = adra_levels(device, bias)?;
    let depths: Vec<f64> =
        levels.iter().map(|i| discharge_depth(*i, params, t_sense, bias.v_read)).collect();
    for k in 0..3 {
        let threshold = (2 * k + 1) as f64 * params.delta;
        let gap = depths[k + 1] - depths[k];
        let straddles = depths[k] < threshold && depths[k + 1] > threshold;
        if !straddles || !(gap >= params.delta) {
            return Err(Error::InsufficientMargin {
                lower: VECTORS[k],
                upper: VECTORS[k + 1],
                gap,
                required: params.delta,
            });
        }
    }
    Ok(())
}

/// Smallest separation between adjacent levels, in amperes and in delta
/// multiples of discharge depth under the given window.
pub fn margin_stats(
    device: &DeviceParams,
    bias: &BiasPlan,
    params: &VoltageSenseParams,
    t_sense: f64,
) -> Result<(f64, f64)> {
    let levels = adra_levels(device, bias)?;
    let min_gap_amps = levels.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let depths: Vec<f64> =
        levels.iter().map(|i| discharge_depth(*i, params, t_sense, bias.v_read)).collect();
    let min_gap_delta =
        depths.windows(2).map(|w| (w[1] - w[0]) / params.delta).fold(f64::INFINITY, f64::min);
    Ok((min_gap_amps, min_gap_delta))
}
