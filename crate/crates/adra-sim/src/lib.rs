//! Bit-accurate simulator of asymmetric dual-row in-memory arithmetic on a
//! ferroelectric-transistor array, with a calibrated energy/latency model.
//!
//! Driving one operand row at a reduced gate voltage and the other at the
//! full read voltage makes the four operand-bit combinations land on four
//! distinct sense-line current levels, so a single activation yields the
//! (or, and, b) triple each column's adder/subtractor module needs. The
//! crate models that pipeline end to end — device currents, array
//! activation, reference-ladder and discharge-time sensing, per-column
//! compute, and word-level arithmetic — plus analytical energy/latency
//! accounting for the three sensing schemes and the conventional
//! two-read baseline.

// Validations are written as negated comparisons (`!(x > 0.0)`) on
// purpose: the negation also rejects NaN, which the flipped operator
// would silently let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod array;
pub mod cli;
pub mod compute;
pub mod config;
pub mod device;
pub mod energy;
pub mod error;
pub mod report;
pub mod sensing;
pub mod verify;

pub use array::{ActivationMode, ArrayGeometry, BiasPlan, MemoryArray};
pub use compute::{compare, word_op, Comparison, WordOpResult};
pub use device::{BitState, DeviceParams};
pub use error::{Error, Result};
pub use sensing::{build_ladder, sense_current, ReferenceLadder, SenseOutcome};
