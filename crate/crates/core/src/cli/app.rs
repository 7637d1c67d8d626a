use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::{emit_curves_csv, exit_code, load_state, reproduce_example_figures, run_suite, save_state};
use super::{StateFormat, Suite, EXIT_OK, EXIT_SUITE_FAILED, EXIT_USAGE};
use crate::bounds::{bounds_report, caf_lower_bound, concurrence_bounds, BoundsReport, CafBreakdown, ConcurrenceMethod, Units};
use crate::envelopes::{build_envelopes, Mode, DEFAULT_GRID};
use crate::oracles::{convex_roof_upper, RoofOptions};
use crate::shotsim::{estimated_bounds, EstimatedBounds};
use crate::{Result, Seed};

#[derive(Debug, Parser)]
#[command(name = "eof-bounds", version, about = "Measurable bounds on the entanglement of formation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Oracle,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Paper => Mode::Paper,
            ModeArg::Oracle => Mode::Oracle,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UnitsArg {
    Nats,
    Bits,
}

impl From<UnitsArg> for Units {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Nats => Units::Nats,
            UnitsArg::Bits => Units::Bits,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum, default_value = "oracle")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "nats")]
    units: UnitsArg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// EOF, concurrence and CAF bounds for a state file.
    Bounds {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        json: bool,
    },
    /// Bound curves, extremal curves and branches as CSV.
    Envelope {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        common: Common,
        /// Number of rows over (0, (m-1)/m].
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bounds along the mixed 3x3 example family as CSV.
    Example {
        #[arg(long)]
        x: f64,
        /// MIN:MAX:STEPS
        #[arg(long, value_parser = parse_range)]
        a_range: (f64, f64, usize),
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bound intervals from simulated swap-test shots.
    Shots {
        file: PathBuf,
        #[arg(long)]
        shots: u64,
        /// Allowed failure probability (1 - confidence).
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Reference computations.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Run a verification suite: twocopy, sandwich, paperconst or coverage.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-write a state file in the given format.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: FormatArg,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Upper estimate of the EOF from an ensemble search.
    ConvexRoof {
        file: PathBuf,
        #[arg(long)]
        ensemble: Option<usize>,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "nats")]
        units: UnitsArg,
    },
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected MIN:MAX:STEPS".into());
    }
    let f = |p: &str| p.parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
    let steps = parts[2].parse::<usize>().map_err(|e| format!("`{}`: {e}", parts[2]))?;
    let (lo, hi) = (f(parts[0])?, f(parts[1])?);
    if !(lo.is_finite() && hi.is_finite() && lo <= hi && steps >= 1) {
        return Err("need finite MIN <= MAX and STEPS >= 1".into());
    }
    Ok((lo, hi, steps))
}

#[derive(Serialize)]
struct FullReport {
    #[serde(flatten)]
    report: BoundsReport,
    conc_sq_lower_raw: f64,
    caf: CafBreakdown,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimated: Option<EstimatedSection>,
}

#[derive(Serialize)]
struct EstimatedSection {
    #[serde(flatten)]
    bounds: EstimatedBounds,
}

fn envelopes_for(path: &Path, mode: Mode) -> Result<(crate::matops::BipartiteState, crate::envelopes::EnvelopeSet)> {
    let state = load_state(path)?;
    let env = build_envelopes(state.dims().envelope_dim(), mode, DEFAULT_GRID)?;
    Ok((state, env))
}

fn full_report(path: &Path, common: &Common) -> Result<(FullReport, crate::matops::BipartiteState, crate::envelopes::EnvelopeSet)> {
    let (state, env) = envelopes_for(path, common.mode.into())?;
    let report = bounds_report(&state, &env, common.units.into())?;
    let conc = concurrence_bounds(&state, ConcurrenceMethod::Purity)?;
    let (_, caf) = caf_lower_bound(&state)?;
    Ok((
        FullReport {
            report,
            conc_sq_lower_raw: conc.raw_lower_sq,
            caf,
            estimated: None,
        },
        state,
        env,
    ))
}

fn print_json(v: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("report serialises"));
}

fn print_text(r: &FullReport) {
    let b = &r.report;
    let l = &b.lambdas;
    println!("mode      {}", b.mode);
    println!("units     {}", b.units);
    println!("lamA      {:.12}", l.lam_a);
    println!("lamB      {:.12}", l.lam_b);
    println!("lamPrimeA {:.12}", l.lam_prime_a);
    println!("lamPrimeB {:.12}", l.lam_prime_b);
    println!("eof       [{:.12}, {:.12}]", b.eof_lower, b.eof_upper);
    println!("conc^2    [{:.12}, {:.12}] (raw lower {:.12})", b.conc_sq_lower, b.conc_sq_upper, r.conc_sq_lower_raw);
    println!("caf lower {:.12} (omega {:.12}, {:?} branch)", b.caf_lower, r.caf.omega, r.caf.active_branch);
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Bounds { file, common, json } => {
            let (r, _, _) = full_report(&file, &common)?;
            if json {
                print_json(&r);
            } else {
                print_text(&r);
            }
        }
        Command::Envelope { m, common, grid, out } => {
            let (mode, units) = (common.mode.into(), common.units.into());
            write_file(&out, |w| emit_curves_csv(m, mode, grid, units, w))?;
            println!("wrote {grid} rows to {} (m={m}, mode={mode}, units={units})", out.display());
        }
        Command::Example { x, a_range, common, out } => {
            let (mode, units) = (common.mode.into(), common.units.into());
            let (lo, hi, steps) = a_range;
            write_file(&out, |w| reproduce_example_figures(x, lo, hi, steps, mode, units, w))?;
            println!("wrote {steps} rows to {} (x={x}, mode={mode}, units={units})", out.display());
        }
        Command::Shots {
            file,
            shots,
            delta,
            seed,
            common,
        } => {
            let (mut r, state, env) = full_report(&file, &common)?;
            let mut est = estimated_bounds(&state, shots, 1.0 - delta, &env, Seed(seed))?;
            let units: Units = common.units.into();
            let conv = |(a, b): (f64, f64)| (units.from_nats(a), units.from_nats(b));
            est.lower_interval = conv(est.lower_interval);
            est.upper_interval = conv(est.upper_interval);
            r.estimated = Some(EstimatedSection { bounds: est });
            print_json(&r);
        }
        Command::Oracle {
            which:
                OracleCommand::ConvexRoof {
                    file,
                    ensemble,
                    restarts,
                    iters,
                    seed,
                    units,
                },
        } => {
            let state = load_state(&file)?;
            let opts = RoofOptions {
                ensemble_size: ensemble,
                restarts,
                iters,
            };
            let v = convex_roof_upper(&state, opts, Seed(seed))?;
            let units: Units = units.into();
            print_json(&serde_json::json!({
                "convex_roof_upper": units.from_nats(v),
                "units": units,
                "ensemble": ensemble.unwrap_or(state.dims().total()),
                "restarts": restarts,
                "iters": iters,
                "seed": seed,
            }));
        }
        Command::Verify { suite, seed } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, Seed(seed))?;
            print_json(&report);
            return Ok(if report.passed { EXIT_OK } else { EXIT_SUITE_FAILED });
        }
        Command::Convert { file, to, out } => {
            let state = load_state(&file)?;
            let format = match to {
                FormatArg::Json => StateFormat::Json,
                FormatArg::Text => StateFormat::Text,
            };
            save_state(&state, &out, format)?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
