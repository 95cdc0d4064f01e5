//! End-to-end functional pipeline and exhaustive verification.
//!
//! A word pipeline stores the two operands on two rows, performs one
//! dual-row activation, senses every column under the configured scheme,
//! and ripples the column modules. Verification runs that pipeline over
//! every signed operand pair of each word width and checks add, subtract
//! and compare against plain integer arithmetic.

use crate::array::{ActivationMode, ArrayGeometry, BiasPlan, MemoryArray};
use crate::compute::{compare, signed_value, to_bits, word_op, Comparison, WordOpResult};
use crate::config::SimConfig;
use crate::device::DeviceParams;
use crate::energy::{
    calibrate, calibrate_timing, latency, scenario, Operation, ScenarioReport, Scheme,
    JOULES_PER_UNIT, SECONDS_PER_UNIT,
};
use crate::error::{Error, Result};
use crate::sensing::{
    build_ladder, default_sense_time, margin_stats, sense_current, sense_voltage,
    validate_voltage_window, ReferenceLadder, SenseOutcome, VoltageScheme, VoltageSenseParams,
};

/// Verification never exceeds this width; the pair count grows by four per
/// extra bit.
pub const MAX_VERIFY_WIDTH: usize = 12;

/// How the per-column sense line is resolved into a triple.
enum SenseBackend {
    Ladder(ReferenceLadder),
    Voltage { params: VoltageSenseParams, t_sense: f64 },
}

/// Two-operand arithmetic pipeline over a compact two-row array.
pub struct WordPipeline {
    device: DeviceParams,
    bias: BiasPlan,
    backend: SenseBackend,
    array: MemoryArray,
    width: usize,
}

impl WordPipeline {
    /// Builds a pipeline for `width`-bit words under the configured
    /// sensing scheme, validating the sense path up front.
    pub fn new(config: &SimConfig, width: usize) -> Result<Self> {
        if width == 0 || width > 62 {
            return Err(Error::OutOfRange {
                what: format!("word width {width} outside the supported 1..=62"),
            });
        }
        config.device.validate()?;
        config.bias.validate()?;
        let geometry = ArrayGeometry {
            rows: 2,
            cols: width,
            word_width: width,
            words_per_row: 1,
            mux_factor: 1,
        };
        let backend = match config.run.scheme {
            Scheme::Current => {
                SenseBackend::Ladder(build_ladder(&config.device, &config.bias, config.sensing.margin_amps)?)
            }
            Scheme::Precharged | Scheme::Discharged => {
                let resting = match config.run.scheme {
                    Scheme::Precharged => VoltageScheme::Precharged,
                    _ => VoltageScheme::Discharged,
                };
                let params = config.voltage_sense_params(resting);
                let t_sense = match config.sensing.sense_time {
                    Some(t) => t,
                    None => default_sense_time(&config.device, &config.bias, &params)?,
                };
                validate_voltage_window(&config.device, &config.bias, &params, t_sense)?;
                SenseBackend::Voltage { params, t_sense }
            }
        };
        Ok(WordPipeline {
            device: config.device,
            bias: config.bias,
            backend,
            array: MemoryArray::new(geometry)?,
            width,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Dual-row activations performed so far.
    pub fn activations(&self) -> u64 {
        self.array.activation_count()
    }

    fn check_range(&self, name: &str, value: i64) -> Result<()> {
        let half = 1_i64 << (self.width - 1);
        if value < -half || value >= half {
            return Err(Error::OutOfRange {
                what: format!(
                    "operand {name} = {value} outside the signed {}-bit range [{}, {}]",
                    self.width,
                    -half,
                    half - 1
                ),
            });
        }
        Ok(())
    }

    fn sense(&self, current: f64) -> SenseOutcome {
        match &self.backend {
            SenseBackend::Ladder(ladder) => sense_current(current, ladder),
            SenseBackend::Voltage { params, t_sense } => {
                sense_voltage(current, params, *t_sense, self.bias.v_read)
            }
        }
    }

    /// Senses the triples of one stored operand pair with a single
    /// dual-row activation.
    pub fn sense_triples(&mut self, a: i64, b: i64) -> Result<Vec<SenseOutcome>> {
        self.check_range("a", a)?;
        self.check_range("b", b)?;
        self.array.write_word(0, 0, &to_bits(a, self.width))?;
        self.array.write_word(1, 0, &to_bits(b, self.width))?;
        let currents =
            self.array.activate(&self.device, &self.bias, ActivationMode::AdraCim, 0, Some(1))?;
        Ok(currents.into_iter().map(|i| self.sense(i)).collect())
    }

    /// Adds or subtracts the operands through the full pipeline.
    pub fn run(&mut self, a: i64, b: i64, subtract: bool) -> Result<WordOpResult> {
        let triples = self.sense_triples(a, b)?;
        word_op(&triples, subtract)
    }

    /// Compares the operands through the full pipeline.
    pub fn compare(&mut self, a: i64, b: i64) -> Result<Comparison> {
        let triples = self.sense_triples(a, b)?;
        compare(&triples)
    }
}

// ── Exhaustive verification ─────────────────────────────────────────────

/// One functional discrepancy between the pipeline and integer arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub width: usize,
    pub a: i64,
    pub b: i64,
    pub op: &'static str,
    pub expected: String,
    pub got: String,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "width {}: {} {} {} expected {}, got {}",
            self.width, self.a, self.op, self.b, self.expected, self.got
        )
    }
}

/// Outcome of verifying one word width exhaustively.
#[derive(Debug, Clone)]
pub struct WidthReport {
    pub width: usize,
    /// Operand pairs times the three checked operations.
    pub checks: u64,
    pub failures: u64,
    /// Dual-row activations spent (one per checked operation).
    pub activations: u64,
    pub sample_mismatches: Vec<Mismatch>,
}

/// Outcome of verifying widths 1 through the requested maximum.
#[derive(Debug, Clone)]
pub struct VerificationSummary {
    pub widths: Vec<WidthReport>,
    /// Smallest current gap between adjacent activation levels (A).
    pub min_gap_amps: f64,
    /// The same gap as a multiple of the discharge threshold pitch.
    pub min_gap_delta: f64,
}

impl VerificationSummary {
    pub fn total_checks(&self) -> u64 {
        self.widths.iter().map(|w| w.checks).sum()
    }

    pub fn total_failures(&self) -> u64 {
        self.widths.iter().map(|w| w.failures).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }
}

const SAMPLE_MISMATCH_LIMIT: usize = 8;

fn record(report: &mut WidthReport, mismatch: Mismatch) {
    report.failures += 1;
    if report.sample_mismatches.len() < SAMPLE_MISMATCH_LIMIT {
        report.sample_mismatches.push(mismatch);
    }
}

fn bits_string(bits: &[bool]) -> String {
    // Most significant bit first, as humans read numbers.
    bits.iter().rev().map(|b| if *b { '1' } else { '0' }).collect()
}

/// Runs the three checks for one operand pair. Pipeline errors past
/// construction (for example an unreachable sense triple) are functional
/// failures and are recorded, not propagated.
fn check_pair(pipeline: &mut WordPipeline, report: &mut WidthReport, a: i64, b: i64) {
    let width = pipeline.width();
    for (op, subtract) in [("+", false), ("-", true)] {
        report.checks += 1;
        let expected = if subtract { a - b } else { a + b };
        let expected_bits = to_bits(expected, width + 1);
        let expected_text = format!("{expected} ({})", bits_string(&expected_bits));
        match pipeline.run(a, b, subtract) {
            Ok(result) => {
                let flags_ok =
                    result.zero_flag == (expected == 0) && result.sign_bit == (expected < 0);
                if result.sum_bits != expected_bits || result.value() != expected || !flags_ok {
                    record(
                        report,
                        Mismatch {
                            width,
                            a,
                            b,
                            op,
                            expected: expected_text,
                            got: format!(
                                "{} ({}) zero={} sign={}",
                                result.value(),
                                bits_string(&result.sum_bits),
                                result.zero_flag,
                                result.sign_bit
                            ),
                        },
                    );
                }
            }
            Err(e) => record(
                report,
                Mismatch { width, a, b, op, expected: expected_text, got: format!("error: {e}") },
            ),
        }
    }
    report.checks += 1;
    let expected = match a.cmp(&b) {
        std::cmp::Ordering::Less => Comparison::Less,
        std::cmp::Ordering::Equal => Comparison::Equal,
        std::cmp::Ordering::Greater => Comparison::Greater,
    };
    match pipeline.compare(a, b) {
        Ok(ordering) if ordering == expected => {}
        Ok(ordering) => record(
            report,
            Mismatch {
                width,
                a,
                b,
                op: "cmp",
                expected: expected.to_string(),
                got: ordering.to_string(),
            },
        ),
        Err(e) => record(
            report,
            Mismatch {
                width,
                a,
                b,
                op: "cmp",
                expected: expected.to_string(),
                got: format!("error: {e}"),
            },
        ),
    }
}

/// Verifies every signed operand pair at widths 1..=`max_width` (three
/// checks per pair: add, subtract, compare), each through one dual-row
/// activation.
pub fn verify_widths(config: &SimConfig, max_width: usize) -> Result<VerificationSummary> {
    if max_width == 0 || max_width > MAX_VERIFY_WIDTH {
        return Err(Error::OutOfRange {
            what: format!("max width {max_width} outside the supported 1..={MAX_VERIFY_WIDTH}"),
        });
    }
    let voltage = config.voltage_sense_params(VoltageScheme::Precharged);
    let t_sense = match config.sensing.sense_time {
        Some(t) => t,
        None => default_sense_time(&config.device, &config.bias, &voltage)?,
    };
    let (min_gap_amps, min_gap_delta) =
        margin_stats(&config.device, &config.bias, &voltage, t_sense)?;

    let mut widths = Vec::with_capacity(max_width);
    for width in 1..=max_width {
        let mut pipeline = WordPipeline::new(config, width)?;
        let mut report = WidthReport {
            width,
            checks: 0,
            failures: 0,
            activations: 0,
            sample_mismatches: Vec::new(),
        };
        let half = 1_i64 << (width - 1);
        for a in -half..half {
            for b in -half..half {
                check_pair(&mut pipeline, &mut report, a, b);
            }
        }
        report.activations = pipeline.activations();
        widths.push(report);
    }
    Ok(VerificationSummary { widths, min_gap_amps, min_gap_delta })
}

// ── Single-shot simulation ──────────────────────────────────────────────

/// Arithmetic operation a simulation run performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimOp {
    Add,
    Sub,
    Cmp,
}

impl SimOp {
    pub fn parse(text: &str) -> Result<SimOp> {
        match text {
            "add" => Ok(SimOp::Add),
            "sub" => Ok(SimOp::Sub),
            "cmp" => Ok(SimOp::Cmp),
            other => Err(Error::InvalidParams {
                what: format!("unknown operation '{other}' (expected add, sub or cmp)"),
            }),
        }
    }
}

/// Everything a single simulated operation reports.
#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub op: SimOp,
    pub a: i64,
    pub b: i64,
    pub width: usize,
    pub scheme: Scheme,
    /// Per-column sense triples in storage order (least significant
    /// column first).
    pub triples: Vec<SenseOutcome>,
    /// Operand rows read back from the triples before any arithmetic,
    /// most significant bit first.
    pub recovered_a_bits: String,
    pub recovered_b_bits: String,
    /// The same rows as signed values.
    pub recovered_a: i64,
    pub recovered_b: i64,
    /// Result bits, most significant first (width + 1 of them).
    pub result_bits: String,
    pub result_value: i64,
    pub zero_flag: bool,
    pub sign_bit: bool,
    pub comparison: Option<Comparison>,
    pub activations: u64,
    pub min_gap_amps: f64,
    pub min_gap_delta: f64,
    /// Energy/latency comparison against the read-twice baseline at the
    /// configured array geometry and scheme.
    pub scenario: ScenarioReport,
    /// One in-array operation's energy (J).
    pub op_energy_joules: f64,
    /// One in-array operation's latency (s).
    pub op_latency_seconds: f64,
}

/// Runs one operation at the configured word width and reports the
/// result together with the sense margins it enjoyed and the modeled
/// cost of the op at the configured array size.
pub fn simulate(config: &SimConfig, op: SimOp, a: i64, b: i64) -> Result<SimulationOutcome> {
    let width = config.geometry.word_width;
    let mut pipeline = WordPipeline::new(config, width)?;
    let subtract = !matches!(op, SimOp::Add);
    let triples = pipeline.sense_triples(a, b)?;
    let result = word_op(&triples, subtract)?;
    let comparison = match op {
        SimOp::Cmp => Some(if result.zero_flag {
            Comparison::Equal
        } else if result.sign_bit {
            Comparison::Less
        } else {
            Comparison::Greater
        }),
        _ => None,
    };
    let mut recovered_a = Vec::with_capacity(triples.len());
    let mut recovered_b = Vec::with_capacity(triples.len());
    for triple in &triples {
        let (a_bit, b_bit) = triple.resolve()?;
        recovered_a.push(a_bit);
        recovered_b.push(b_bit);
    }
    let voltage = config.voltage_sense_params(VoltageScheme::Precharged);
    let t_sense = match config.sensing.sense_time {
        Some(t) => t,
        None => default_sense_time(&config.device, &config.bias, &voltage)?,
    };
    let (min_gap_amps, min_gap_delta) =
        margin_stats(&config.device, &config.bias, &voltage, t_sense)?;
    let (energy_params, _) = calibrate(&config.energy)?;
    let timing = calibrate_timing(&config.timing)?;
    let report = scenario(
        &config.geometry,
        config.run.scheme,
        &energy_params,
        &timing,
        config.run.parallelism,
    )?;
    let op_energy_joules = report.op_energy.total() * JOULES_PER_UNIT;
    let op_latency_seconds = latency(
        Operation::InArrayOp,
        config.geometry.rows,
        config.geometry.cols,
        config.run.scheme,
        &timing,
    ) * SECONDS_PER_UNIT;
    Ok(SimulationOutcome {
        op,
        a,
        b,
        width,
        scheme: config.run.scheme,
        recovered_a_bits: bits_string(&recovered_a),
        recovered_b_bits: bits_string(&recovered_b),
        recovered_a: signed_value(&recovered_a),
        recovered_b: signed_value(&recovered_b),
        triples,
        result_bits: bits_string(&result.sum_bits),
        result_value: signed_value(&result.sum_bits),
        zero_flag: result.zero_flag,
        sign_bit: result.sign_bit,
        comparison,
        activations: pipeline.activations(),
        min_gap_amps,
        min_gap_delta,
        scenario: report,
        op_energy_joules,
        op_latency_seconds,
    })
}
