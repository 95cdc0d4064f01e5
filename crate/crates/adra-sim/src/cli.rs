//! Command-line interface: argument parsing, dispatch, output formatting,
//! and exit-code mapping.
//!
//! Exit codes: 0 success, 2 usage error (from the parser), 3 configuration
//! error, 4 verification mismatch, 5 model invariant violation, 1 other
//! I/O failure.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::SimConfig;
use crate::energy::{
    calibrate, calibrate_timing, crossover_frequency, crossover_parallelism, frequency_curve,
    parallelism_curve, sweep, Scheme,
};
use crate::error::{Error, Result};
use crate::report::{format_sci, frequency_curve_csv, parallelism_curve_csv, sweep_csv};
use crate::sensing::SenseOutcome;
use crate::verify::{simulate, verify_widths, SimOp, SimulationOutcome, VerificationSummary};

/// Crossover curves are sampled this densely on each side of the
/// break-even point.
const CURVE_POINTS_EACH_SIDE: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "adra-sim",
    about = "Bit-accurate simulator of dual-row in-memory arithmetic with a calibrated energy/latency model"
)]
pub struct Cli {
    /// TOML configuration file; omitted means built-in defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OpArg {
    Add,
    Sub,
    Cmp,
}

impl From<OpArg> for SimOp {
    fn from(op: OpArg) -> SimOp {
        match op {
            OpArg::Add => SimOp::Add,
            OpArg::Sub => SimOp::Sub,
            OpArg::Cmp => SimOp::Cmp,
        }
    }
}

fn parse_scheme(text: &str) -> std::result::Result<Scheme, String> {
    Scheme::parse(text).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exhaustively check add, subtract and compare at every word width.
    Verify {
        /// Largest word width to verify (each extra bit quadruples the
        /// operand pairs).
        #[arg(long, default_value_t = 8)]
        max_width: usize,
    },
    /// Run one operation through the full array pipeline.
    Simulate {
        #[arg(value_enum)]
        op: OpArg,
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
    },
    /// Compare energy and latency across array sizes and sensing schemes
    /// (CSV on stdout).
    Sweep {
        /// Comma-separated square array sizes; defaults from the config.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Comma-separated schemes (current, scheme1, scheme2); defaults
        /// from the config.
        #[arg(long, value_delimiter = ',', value_parser = parse_scheme)]
        schemes: Vec<Scheme>,
    },
    /// Report the break-even points between sensing schemes.
    Crossover,
}

/// Maps an error to its process exit code.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::ConfigParse { .. } | Error::ConfigInvariant { .. } => 3,
        Error::Io { .. } => 1,
        _ => 5,
    }
}

/// Parses arguments, runs the command, prints, and returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            exit_code(&error)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<SimConfig> {
    match path {
        Some(path) => SimConfig::load(path),
        None => Ok(SimConfig::default()),
    }
}

fn microamps(amps: f64) -> f64 {
    amps * 1.0e6
}

/// Writes a command's whole output to stdout at once. When the reader
/// has gone away (output piped into `head` or similar) the command's
/// work is done; finish quietly instead of failing.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).is_err() || out.flush().is_err() {
        std::process::exit(0);
    }
}

fn verification_text(summary: &VerificationSummary, max_width: usize) -> String {
    let mut out = String::new();
    for width in &summary.widths {
        let _ = writeln!(
            out,
            "width {:2}: {:>8} checks, {} failures ({} activations)",
            width.width, width.checks, width.failures, width.activations
        );
    }
    let _ = writeln!(
        out,
        "min level gap: {:.3} uA ({:.3} delta)",
        microamps(summary.min_gap_amps),
        summary.min_gap_delta
    );
    if summary.passed() {
        let _ = writeln!(
            out,
            "verified {} checks across widths 1..={max_width}: PASS",
            summary.total_checks()
        );
    } else {
        let _ = writeln!(
            out,
            "verified {} checks across widths 1..={max_width}: FAIL ({} mismatches)",
            summary.total_checks(),
            summary.total_failures()
        );
        for width in &summary.widths {
            for mismatch in &width.sample_mismatches {
                let _ = writeln!(out, "  mismatch: {mismatch}");
            }
        }
    }
    out
}

/// One bit per sensed column, most significant first.
fn triple_bits(triples: &[SenseOutcome], bit: impl Fn(&SenseOutcome) -> bool) -> String {
    triples.iter().rev().map(|t| if bit(t) { '1' } else { '0' }).collect()
}

fn simulation_text(outcome: &SimulationOutcome) -> String {
    let mut out = String::new();
    match outcome.op {
        SimOp::Add => {
            let _ = writeln!(out, "{} + {} = {}", outcome.a, outcome.b, outcome.result_value);
        }
        SimOp::Sub => {
            let _ = writeln!(out, "{} - {} = {}", outcome.a, outcome.b, outcome.result_value);
        }
        SimOp::Cmp => {
            let _ = writeln!(
                out,
                "{} cmp {}: {}",
                outcome.a,
                outcome.b,
                outcome.comparison.expect("compare simulation reports an ordering")
            );
        }
    }
    let _ = writeln!(
        out,
        "bits: {} ({}+1 wide, zero={}, sign={})",
        outcome.result_bits, outcome.width, outcome.zero_flag, outcome.sign_bit
    );
    let _ = writeln!(out, "sense or:    {}", triple_bits(&outcome.triples, |t| t.or_bit));
    let _ = writeln!(out, "sense and:   {}", triple_bits(&outcome.triples, |t| t.and_bit));
    let _ = writeln!(out, "sense b:     {}", triple_bits(&outcome.triples, |t| t.b_bit));
    let _ = writeln!(out, "recovered a: {} ({})", outcome.recovered_a_bits, outcome.recovered_a);
    let _ = writeln!(out, "recovered b: {} ({})", outcome.recovered_b_bits, outcome.recovered_b);
    let _ = writeln!(out, "scheme: {}, activations: {}", outcome.scheme, outcome.activations);
    let _ = writeln!(
        out,
        "min level gap: {:.3} uA ({:.3} delta)",
        microamps(outcome.min_gap_amps),
        outcome.min_gap_delta
    );
    let _ = writeln!(
        out,
        "energy: {} J per op, decrease vs baseline: {:.2}%",
        format_sci(outcome.op_energy_joules),
        outcome.scenario.energy_decrease * 100.0
    );
    let _ = writeln!(
        out,
        "latency: {} s per op, speedup: {:.3}, EDP decrease: {:.2}%",
        format_sci(outcome.op_latency_seconds),
        outcome.scenario.speedup,
        outcome.scenario.edp_decrease * 100.0
    );
    out
}

fn crossover_text(config: &SimConfig) -> Result<String> {
    let (energy_params, _) = calibrate(&config.energy)?;
    let cols = config.geometry.cols;
    let mut out = String::new();
    match crossover_frequency(&energy_params, config.run.parallelism)? {
        Some(hz) => {
            let _ = writeln!(
                out,
                "leakage break-even frequency: {} Hz (discharged resting wins below)",
                format_sci(hz)
            );
            let points = frequency_curve(
                &energy_params,
                cols,
                config.run.parallelism,
                CURVE_POINTS_EACH_SIDE,
            )?
            .expect("the curve exists whenever the break-even does");
            out.push_str(&frequency_curve_csv(&points));
        }
        None => {
            let _ =
                writeln!(out, "leakage break-even frequency: none (discharged resting always wins)");
        }
    }
    out.push('\n');
    match crossover_parallelism(&energy_params) {
        Some(p_star) => {
            let _ = writeln!(
                out,
                "parallelism break-even: {} (current sensing wins below)",
                format_sci(p_star)
            );
            let points = parallelism_curve(&energy_params, cols, CURVE_POINTS_EACH_SIDE)?
                .expect("the curve exists whenever the break-even does");
            out.push_str(&parallelism_curve_csv(&points));
        }
        None => {
            let _ = writeln!(out, "parallelism break-even: none (idle columns cost nothing)");
        }
    }
    Ok(out)
}

fn execute(cli: Cli) -> Result<i32> {
    let config = load_config(&cli.config)?;
    match cli.command {
        Command::Verify { max_width } => {
            let summary = verify_widths(&config, max_width)?;
            emit(&verification_text(&summary, max_width));
            Ok(if summary.passed() { 0 } else { 4 })
        }
        Command::Simulate { op, a, b } => {
            let outcome = simulate(&config, op.into(), a, b)?;
            emit(&simulation_text(&outcome));
            Ok(0)
        }
        Command::Sweep { sizes, schemes } => {
            let sizes = if sizes.is_empty() { config.run.sweep_sizes.clone() } else { sizes };
            let schemes =
                if schemes.is_empty() { config.run.sweep_schemes.clone() } else { schemes };
            let (energy_params, _) = calibrate(&config.energy)?;
            let timing = calibrate_timing(&config.timing)?;
            let reports = sweep(
                &sizes,
                &schemes,
                &energy_params,
                &timing,
                config.geometry.word_width,
                config.run.parallelism,
            )?;
            emit(&sweep_csv(&reports));
            Ok(0)
        }
        Command::Crossover => {
            emit(&crossover_text(&config)?);
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_their_documented_exit_codes() {
        assert_eq!(exit_code(&Error::ConfigParse { message: "x".into() }), 3);
        assert_eq!(
            exit_code(&Error::ConfigInvariant { field: "run".into(), message: "x".into() }),
            3
        );
        assert_eq!(exit_code(&Error::Io { message: "x".into() }), 1);
        assert_eq!(exit_code(&Error::OutOfRange { what: "x".into() }), 5);
        assert_eq!(
            exit_code(&Error::UnreachableTriple { or_bit: false, and_bit: true, b_bit: false }),
            5
        );
    }

    #[test]
    fn scheme_arguments_parse_like_config_values() {
        assert_eq!(parse_scheme("scheme2").unwrap(), Scheme::Discharged);
        assert!(parse_scheme("fast").is_err());
    }

    #[test]
    fn cli_grammar_accepts_the_documented_forms() {
        let cli = Cli::try_parse_from(["adra-sim", "simulate", "sub", "-2", "3"]).unwrap();
        match cli.command {
            Command::Simulate { op: OpArg::Sub, a: -2, b: 3 } => {}
            other => panic!("unexpected parse: {other:?}"),
        }
        let cli = Cli::try_parse_from([
            "adra-sim",
            "sweep",
            "--sizes",
            "256,1024",
            "--schemes",
            "current,scheme2",
        ])
        .unwrap();
        match cli.command {
            Command::Sweep { ref sizes, ref schemes } => {
                assert_eq!(sizes, &[256, 1024]);
                assert_eq!(schemes, &[Scheme::Current, Scheme::Discharged]);
            }
            other => panic!("unexpected parse: {other:?}"),
        }
        assert!(Cli::try_parse_from(["adra-sim", "simulate", "mul", "1", "2"]).is_err());
        assert!(Cli::try_parse_from(["adra-sim", "explode"]).is_err());
    }
}
