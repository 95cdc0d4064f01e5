//! Ferroelectric transistor cell model.
//!
//! A cell stores one bit as a remanent polarization state that shifts the
//! transistor threshold voltage. Read current follows a square-law
//! characteristic above threshold plus a leakage floor, which is all the
//! array-level arithmetic needs: distinct, strictly ordered current levels
//! for the gate voltages used during reads and dual-row activation.

use crate::error::{Error, Result};

/// Stored polarization state of one cell.
///
/// `Lrs` (low threshold) encodes logic 1, `Hrs` (high threshold) logic 0:
/// a stored 1 conducts strongly when its row is driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitState {
    Lrs,
    Hrs,
}

impl BitState {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            BitState::Lrs
        } else {
            BitState::Hrs
        }
    }

    pub fn to_bit(self) -> bool {
        matches!(self, BitState::Lrs)
    }
}

/// Square-law device parameters for the two polarization states.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeviceParams {
    /// Threshold voltage in the low-Vt (erased, logic 1) state (V).
    pub vt_lrs: f64,
    /// Threshold voltage in the high-Vt (programmed, logic 0) state (V).
    pub vt_hrs: f64,
    /// Saturation transconductance coefficient (A/V^2).
    pub transconductance_k: f64,
    /// Subthreshold leakage floor (A).
    pub leakage_floor: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        DeviceParams {
            vt_lrs: 0.0,
            vt_hrs: 1.2,
            transconductance_k: 10.0e-6,
            leakage_floor: 0.05e-6,
        }
    }
}

impl DeviceParams {
    /// Checks the state separation and sign invariants.
    pub fn validate(&self) -> Result<()> {
        if !(self.vt_hrs > self.vt_lrs) {
            return Err(Error::InvalidParams {
                what: format!(
                    "vt_hrs ({}) must exceed vt_lrs ({})",
                    self.vt_hrs, self.vt_lrs
                ),
            });
        }
        if !(self.transconductance_k > 0.0) {
            return Err(Error::InvalidParams {
                what: format!("transconductance_k ({}) must be positive", self.transconductance_k),
            });
        }
        if !(self.leakage_floor >= 0.0) {
            return Err(Error::InvalidParams {
                what: format!("leakage_floor ({}) must be nonnegative", self.leakage_floor),
            });
        }
        Ok(())
    }

    /// Drain current of one cell at gate voltage `vg` (A).
    ///
    /// Below threshold only the leakage floor flows; above threshold the
    /// square law applies. `vg` is expected to be nonnegative.
    pub fn cell_current(&self, state: BitState, vg: f64) -> f64 {
        let vt = match state {
            BitState::Lrs => self.vt_lrs,
            BitState::Hrs => self.vt_hrs,
        };
        let overdrive = (vg - vt).max(0.0);
        self.leakage_floor + self.transconductance_k * overdrive * overdrive
    }

    /// Bitline discharge slope `I / C_BL` for one conducting cell (V/s).
    pub fn discharge_rate(&self, state: BitState, vg: f64, cbl: f64) -> Result<f64> {
        if !(cbl > 0.0) {
            return Err(Error::InvalidParams {
                what: format!("cbl ({cbl}) must be positive"),
            });
        }
        Ok(self.cell_current(state, vg) / cbl)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const UA: f64 = 1.0e-6;

    #[test]
    fn default_read_currents_follow_square_law() {
        let d = DeviceParams::default();
        // Hand-evaluated: floor + k * (vg - vt)^2.
        let lrs_full = d.cell_current(BitState::Lrs, 1.0);
        assert!((lrs_full - 10.05 * UA).abs() < 1e-12, "got {lrs_full}");
        let lrs_partial = d.cell_current(BitState::Lrs, 0.83);
        assert!((lrs_partial - 6.939 * UA).abs() < 1e-12, "got {lrs_partial}");
        // High-Vt cell stays at the leakage floor for sub-threshold gate drive.
        let hrs = d.cell_current(BitState::Hrs, 1.0);
        assert!((hrs - 0.05 * UA).abs() < 1e-15, "got {hrs}");
        assert_eq!(d.cell_current(BitState::Hrs, 0.83), d.leakage_floor);
    }

    #[test]
    fn current_monotone_in_gate_voltage_and_state() {
        let d = DeviceParams::default();
        let mut prev_lrs = -1.0;
        let mut prev_hrs = -1.0;
        for step in 0..=40 {
            let vg = step as f64 * 0.05;
            let i_lrs = d.cell_current(BitState::Lrs, vg);
            let i_hrs = d.cell_current(BitState::Hrs, vg);
            assert!(i_lrs >= prev_lrs && i_hrs >= prev_hrs, "nonmonotone at vg={vg}");
            assert!(i_lrs >= i_hrs, "state ordering violated at vg={vg}");
            prev_lrs = i_lrs;
            prev_hrs = i_hrs;
        }
    }

    #[test]
    fn zero_overdrive_gives_floor_exactly() {
        let d = DeviceParams::default();
        assert_eq!(d.cell_current(BitState::Lrs, 0.0), d.leakage_floor);
        assert_eq!(d.cell_current(BitState::Hrs, 1.2), d.leakage_floor);
    }

    #[test]
    #[allow(clippy::field_reassign_with_default)]
    fn validate_rejects_inverted_thresholds_and_bad_signs() {
        let mut d = DeviceParams::default();
        d.vt_hrs = d.vt_lrs;
        assert!(matches!(d.validate(), Err(Error::InvalidParams { .. })));

        let mut d = DeviceParams::default();
        d.transconductance_k = 0.0;
        assert!(d.validate().is_err());

        let mut d = DeviceParams::default();
        d.leakage_floor = -1e-9;
        assert!(d.validate().is_err());

        assert!(DeviceParams::default().validate().is_ok());
    }

    #[test]
    fn discharge_rate_scales_inverse_with_bitline_capacitance() {
        let d = DeviceParams::default();
        // 10.05 uA into 1 pF discharges at 10.05 V/us.
        let rate = d.discharge_rate(BitState::Lrs, 1.0, 1.0e-12).unwrap();
        assert!((rate - 10.05e6).abs() < 1e-3, "got {rate}");
        let doubled = d.discharge_rate(BitState::Lrs, 1.0, 2.0e-12).unwrap();
        assert!((rate / doubled - 2.0).abs() < 1e-12);
        assert!(d.discharge_rate(BitState::Lrs, 1.0, 0.0).is_err());
        assert!(d.discharge_rate(BitState::Lrs, 1.0, -1e-12).is_err());
    }
}
