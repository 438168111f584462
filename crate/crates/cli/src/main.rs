use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use dirac2d::perturb::energy_breakdown;
use dirac2d::qnum::{enumerate_channels, ALPHA_CODATA};
use dirac2d::report_io::{fmt_sci, scan_to_csv, write_golden, GoldenTable, ScanRow};
use dirac2d::units::b0_tesla;
use dirac2d::validate::{run_suite, Suite};
use dirac2d::variational::{perturbation_cross_check, DEFAULT_BASIS_SIZE};
use dirac2d::{Channel, Error, PhysicsConfig};

mod records;

use records::*;

#[derive(Parser)]
#[command(name = "dirac2d", version, about = "Planar Dirac-Coulomb levels and weak-field Zeeman coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Field-free levels for every channel up to n_max.
    Levels {
        #[command(flatten)]
        physics: PhysicsArgs,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Zeeman coefficients, magnetizability and E(B) for both m of one channel.
    Zeeman {
        #[command(flatten)]
        physics: PhysicsArgs,
        /// `2p3/2`, `2p_{3/2}` or an `n,2kappa` pair such as `2,-3`.
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 0.0)]
        b_over_b0: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The nine tabulated states: general formulas vs literal expressions.
    Tables {
        #[command(flatten)]
        physics: PhysicsArgs,
        /// Evaluate at this alpha Z instead of Z * alpha * alpha_scale.
        #[arg(long)]
        alpha_z: Option<f64>,
        /// Also write a golden snapshot of the general formulas here.
        #[arg(long)]
        golden_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Perturbative (and optionally variational) energies over a range of B.
    Scan {
        #[command(flatten)]
        physics: PhysicsArgs,
        #[arg(long)]
        state: String,
        /// Use m = -|kappa| instead of +|kappa|.
        #[arg(long)]
        negative_m: bool,
        #[arg(long, default_value_t = 1e-4)]
        b_min: f64,
        #[arg(long, default_value_t = 3e-3)]
        b_max: f64,
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long)]
        with_variational: bool,
        #[arg(long, default_value_t = DEFAULT_BASIS_SIZE)]
        basis_size: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run invariant suites; exit status 1 on any failure.
    Validate {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct PhysicsArgs {
    /// Nuclear charge number.
    #[arg(long = "Z", default_value_t = 1.0)]
    z: f64,
    /// Multiplier applied to the CODATA fine-structure constant.
    #[arg(long, default_value_t = 1.0)]
    alpha_scale: f64,
}

impl PhysicsArgs {
    fn config(&self) -> Result<PhysicsConfig, Error> {
        PhysicsConfig::new(self.z, ALPHA_CODATA, self.alpha_scale)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(Error),
    Validation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(Error::Io { path: path.display().to_string(), message: e.to_string() })),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_channel(text: &str) -> Result<Channel, Error> {
    Channel::parse(text)
}

fn field_grid(b_min: f64, b_max: f64, points: usize) -> Result<Vec<f64>, Error> {
    if !(b_min >= 0.0 && b_max >= b_min && b_max.is_finite()) {
        return Err(Error::Domain(format!("need 0 <= b_min <= b_max, got [{b_min}, {b_max}]")));
    }
    if points == 0 {
        return Err(Error::Domain("points must be positive".into()));
    }
    if points == 1 {
        return Ok(vec![b_min]);
    }
    let step = |i: usize| i as f64 / (points - 1) as f64;
    Ok(if b_min > 0.0 {
        let (lo, hi) = (b_min.ln(), b_max.ln());
        (0..points).map(|i| (lo + (hi - lo) * step(i)).exp()).collect()
    } else {
        (0..points).map(|i| b_min + (b_max - b_min) * step(i)).collect()
    })
}

#[derive(Serialize)]
struct ScanReport {
    config: ConfigRecord,
    state: StateRecord,
    b_units: &'static str,
    energy_units: &'static str,
    fitted_power: Option<f64>,
    rows: Vec<ScanRow>,
}

#[derive(Serialize)]
struct ValidateReport {
    suites: Vec<dirac2d::validate::SuiteReport>,
    passed: usize,
    failed: usize,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Levels { physics, n_max, output } => {
            let cfg = physics.config()?;
            if n_max == 0 {
                return Err(Error::Domain("n_max must be at least 1".into()).into());
            }
            let levels = enumerate_channels(n_max)
                .into_iter()
                .map(|c| level_record(c, &cfg))
                .collect::<Result<Vec<_>, _>>()?;
            let report = LevelsReport { config: (&cfg).into(), levels };
            let text = match output.format {
                Format::Json => json(&report),
                Format::Csv => levels_csv(&report),
            };
            emit(&output, &text)
        }
        Command::Zeeman { physics, state, b_over_b0, output } => {
            let cfg = physics.config()?;
            if !(b_over_b0 >= 0.0 && b_over_b0.is_finite()) {
                return Err(Error::Domain(format!("B/B0 must be nonnegative, got {b_over_b0}")).into());
            }
            let ch = parse_channel(&state)?;
            let records = [true, false]
                .iter()
                .map(|&pos| energy_breakdown(&ch.state(pos), &cfg).map(|b| zeeman_record(&b, b_over_b0)))
                .collect::<Result<Vec<_>, _>>()?;
            let b0 = b0_tesla();
            let report = ZeemanReport {
                config: (&cfg).into(),
                b_over_b0: Quantity::new(b_over_b0, B0),
                b: Quantity::new(b_over_b0 * b0, TESLA),
                b0: Quantity::new(b0, TESLA),
                records,
            };
            let text = match output.format {
                Format::Json => json(&report),
                Format::Csv => zeeman_csv(&report),
            };
            emit(&output, &text)
        }
        Command::Tables { physics, alpha_z, golden_out, output } => {
            let cfg = match alpha_z {
                Some(az) => PhysicsConfig::new(1.0, ALPHA_CODATA, az / ALPHA_CODATA)?,
                None => physics.config()?,
            };
            let report = table_rows(&cfg)?;
            if let Some(path) = golden_out {
                write_golden(&GoldenTable::compute(&cfg)?, &path)?;
            }
            let text = match output.format {
                Format::Json => json(&report),
                Format::Csv => tables_csv(&report),
            };
            emit(&output, &text)
        }
        Command::Scan { physics, state, negative_m, b_min, b_max, points, with_variational, basis_size, output } => {
            let cfg = physics.config()?;
            let st = parse_channel(&state)?.state(!negative_m);
            let grid = field_grid(b_min, b_max, points)?;
            let breakdown = energy_breakdown(&st, &cfg)?;
            let mut rows: Vec<ScanRow> = grid
                .par_iter()
                .map(|&b| ScanRow {
                    b_over_b0: r15(b),
                    e_pert_hartree: r15(breakdown.binding_hartree(b)),
                    e_var_hartree: None,
                    residual_hartree: None,
                })
                .collect();
            let mut fitted_power = None;
            if with_variational {
                let report = perturbation_cross_check(&st, &cfg, &grid, basis_size)?;
                for (row, v) in rows.iter_mut().zip(&report.rows) {
                    row.e_var_hartree = Some(r15(v.e_var));
                    row.residual_hartree = Some(r15(v.residual));
                }
                fitted_power = report.fitted_power.map(r15);
            }
            let text = match output.format {
                Format::Json => json(&ScanReport {
                    config: (&cfg).into(),
                    state: StateRecord::state(&st),
                    b_units: B0,
                    energy_units: HARTREE,
                    fitted_power,
                    rows,
                }),
                Format::Csv => scan_to_csv(&rows, with_variational),
            };
            emit(&output, &text)
        }
        Command::Validate { suite, output } => {
            let suites = run_suite(suite);
            let passed = suites.iter().map(|s| s.passed()).sum();
            let failed = suites.iter().map(|s| s.failed()).sum();
            let text = match output.format {
                Format::Json => json(&ValidateReport { suites, passed, failed }),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = suites
                        .iter()
                        .flat_map(|s| {
                            s.checks.iter().map(move |c| {
                                vec![
                                    s.suite.to_string(),
                                    c.name.clone(),
                                    if c.passed { "PASS" } else { "FAIL" }.to_string(),
                                    fmt_sci(c.worst),
                                    fmt_sci(c.tolerance),
                                ]
                            })
                        })
                        .collect();
                    csv_text(&["suite", "check", "result", "worst", "tolerance"], &rows)
                }
            };
            emit(&output, &text)?;
            eprintln!("validate {suite}: {passed} passed, {failed} failed");
            if failed > 0 {
                Err(Failure::Validation)
            } else {
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
