//! In-column compute modules: per-bit add/subtract fed by sense triples,
//! word-level ripple with sign extension, and comparison.
//!
//! Each column's module receives the sensed (or, and, b) triple, recovers
//! the first operand, and contributes one result bit. A word operation
//! ripples the carry through the word's modules plus one sign-extension
//! stage, so an n-bit operation always yields an exact (n+1)-bit
//! two's-complement result.

use crate::error::{Error, Result};
use crate::sensing::{recover_a, SenseOutcome};

/// Inputs of one column's compute module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModuleInputs {
    pub or_bit: bool,
    pub and_bit: bool,
    pub b_bit: bool,
    pub c_in: bool,
    /// false adds, true subtracts (second operand complemented).
    pub select: bool,
}

impl ModuleInputs {
    pub fn from_triple(triple: SenseOutcome, c_in: bool, select: bool) -> Self {
        ModuleInputs {
            or_bit: triple.or_bit,
            and_bit: triple.and_bit,
            b_bit: triple.b_bit,
            c_in,
            select,
        }
    }
}

/// One result bit and its carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModuleOutput {
    pub sum: bool,
    pub carry: bool,
}

/// Both operation results from the shared-hardware module variant that
/// computes add and subtract simultaneously.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualOutput {
    pub add: ModuleOutput,
    pub sub: ModuleOutput,
}

/// Extra hardware of the dual-operand module over the plain adder: the
/// select multiplexers fold away and four transistors produce the second
/// result instead.
pub const DUAL_VARIANT_EXTRA_TRANSISTORS: u32 = 4;

/// Gates added to the prior single-operand adder module so it can serve
/// both operations behind one select line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateOverhead {
    pub muxes: u32,
    pub inverters: u32,
    pub nor_gates: u32,
}

/// Select-line steering of the recovered operand and carry seed.
pub const MODULE_GATE_OVERHEAD: GateOverhead =
    GateOverhead { muxes: 2, inverters: 1, nor_gates: 1 };

/// Full-adder stage on the recovered first operand and the (possibly
/// complemented) second operand.
pub fn compute_module(inputs: &ModuleInputs) -> Result<ModuleOutput> {
    let a = recover_a(inputs.or_bit, inputs.and_bit, inputs.b_bit)?;
    let b_eff = inputs.b_bit ^ inputs.select;
    let sum = a ^ b_eff ^ inputs.c_in;
    let carry = (a & b_eff) | (inputs.c_in & (a ^ b_eff));
    Ok(ModuleOutput { sum, carry })
}

/// Propagate/generate form of [`compute_module`], wired directly from the
/// sense triple without recovering the first operand. Kept as the
/// gate-level reference the functional form must match.
pub fn compute_module_gates(inputs: &ModuleInputs) -> Result<ModuleOutput> {
    // Reachability is still enforced; the gate network assumes it.
    recover_a(inputs.or_bit, inputs.and_bit, inputs.b_bit)?;
    let (propagate, generate) = if inputs.select {
        (inputs.and_bit | !inputs.or_bit, inputs.or_bit & !inputs.b_bit)
    } else {
        (inputs.or_bit & !inputs.and_bit, inputs.and_bit)
    };
    let sum = propagate ^ inputs.c_in;
    let carry = generate | (propagate & inputs.c_in);
    Ok(ModuleOutput { sum, carry })
}

/// Runs both operations on one triple, as the shared-hardware variant does.
pub fn compute_module_dual(triple: SenseOutcome, c_in_add: bool, c_in_sub: bool) -> Result<DualOutput> {
    let add = compute_module(&ModuleInputs::from_triple(triple, c_in_add, false))?;
    let sub = compute_module(&ModuleInputs::from_triple(triple, c_in_sub, true))?;
    Ok(DualOutput { add, sub })
}

/// Result of a word-level operation: `width + 1` sum bits, LSB first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordOpResult {
    pub sum_bits: Vec<bool>,
    pub carry_out: bool,
    /// All result bits clear.
    pub zero_flag: bool,
    /// Most significant (sign) bit of the result.
    pub sign_bit: bool,
}

impl WordOpResult {
    /// Two's-complement value of the result bits.
    pub fn value(&self) -> i64 {
        signed_value(&self.sum_bits)
    }
}

/// Ripple word operation over per-column triples (LSB first).
///
/// The carry seed equals the select line, and a final stage reuses the
/// top column's triple as a sign extension, so n-bit operands yield an
/// (n+1)-bit result that can never overflow.
pub fn word_op(triples: &[SenseOutcome], select: bool) -> Result<WordOpResult> {
    if triples.is_empty() {
        return Err(Error::InvalidParams { what: "word operation needs at least one column".into() });
    }
    let mut sum_bits = Vec::with_capacity(triples.len() + 1);
    let mut carry = select;
    for triple in triples {
        let out = compute_module(&ModuleInputs::from_triple(*triple, carry, select))?;
        sum_bits.push(out.sum);
        carry = out.carry;
    }
    let sign_stage =
        compute_module(&ModuleInputs::from_triple(*triples.last().unwrap(), carry, select))?;
    sum_bits.push(sign_stage.sum);
    let zero_flag = sum_bits.iter().all(|bit| !bit);
    let sign_bit = *sum_bits.last().unwrap();
    Ok(WordOpResult { sum_bits, carry_out: sign_stage.carry, zero_flag, sign_bit })
}

/// Three-way comparison outcome of the first operand against the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
}

impl std::fmt::Display for Comparison {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            Comparison::Less => "less",
            Comparison::Equal => "equal",
            Comparison::Greater => "greater",
        };
        f.write_str(label)
    }
}

/// Compares via subtraction: zero means equal, otherwise the sign decides.
pub fn compare(triples: &[SenseOutcome]) -> Result<Comparison> {
    let diff = word_op(triples, true)?;
    if diff.zero_flag {
        Ok(Comparison::Equal)
    } else if diff.sign_bit {
        Ok(Comparison::Less)
    } else {
        Ok(Comparison::Greater)
    }
}

/// Two-input AND gates in the zero detector of an n-column comparison: the
/// n complemented low result bits reduce through n - 1 gates.
pub fn equality_tree_gates(width: usize) -> usize {
    width.saturating_sub(1)
}

/// Interprets bits (LSB first) as a two's-complement value.
pub fn signed_value(bits: &[bool]) -> i64 {
    assert!(!bits.is_empty() && bits.len() <= 63, "unsupported width {}", bits.len());
    let mut value: i64 = 0;
    for (k, bit) in bits.iter().enumerate() {
        if *bit {
            value |= 1_i64 << k;
        }
    }
    let sign = 1_i64 << (bits.len() - 1);
    if value & sign != 0 {
        value -= 1_i64 << bits.len();
    }
    value
}

/// Low `width` bits of a value, LSB first (two's-complement wrap).
pub fn to_bits(value: i64, width: usize) -> Vec<bool> {
    assert!((1..=63).contains(&width), "unsupported width {width}");
    (0..width).map(|k| (value >> k) & 1 == 1).collect()
}
