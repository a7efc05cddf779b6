use clap::{Parser, Subcommand};
use steerlab_cli::{default_tol, parse_p, report, schema, sweep, verify_cmd, CliError};
use steerlab_core::scenarios;

/// SDI steering analysis: steering-equivalent observables, the
/// noncommutativity monotone and certified local randomness.
#[derive(Parser)]
#[command(name = "steerlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a scenario file: SEO verdict, steerability, randomness bound.
    Analyze {
        /// JSON input (state + measurements, or a raw assemblage).
        input: String,
        /// Schatten order: a real >= 1 or 'inf'.
        #[arg(long, default_value = "1")]
        p: String,
        /// Tolerance (default: STEERLAB_TOL or 1e-8).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output format: text | json.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Write a canonical scenario (state, measurements, derived assemblage).
    Scenario {
        /// Family: isotropic | pure.
        family: String,
        #[arg(long)]
        out: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Noise parameter for the isotropic family.
        #[arg(long)]
        alpha: Option<f64>,
        /// Comma-separated Schmidt coefficients for the pure family.
        #[arg(long)]
        schmidt: Option<String>,
        /// Measurement family (only 'mub' is built in).
        #[arg(long, default_value = "mub")]
        meas: String,
        /// Optional detection efficiency folded into the measurements.
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Sweep a parameter and emit CSV (alpha | eta family).
    Sweep {
        /// Family: alpha | eta.
        family: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Grid: 'start:stop:count' or a comma-separated list.
        #[arg(long)]
        grid: Option<String>,
        /// Fixed alpha for the eta family.
        #[arg(long)]
        alpha: Option<f64>,
        /// Fixed eta for the alpha family.
        #[arg(long)]
        eta: Option<f64>,
        /// Schatten order: a real >= 1 or 'inf'.
        #[arg(long, default_value = "1")]
        p: String,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
    },
    /// Run invariant suites, or verify one scenario file.
    Verify {
        /// Optional scenario file to verify instead of the suites.
        input: Option<String>,
        /// Suite: core | discrepancies | all.
        #[arg(long, default_value = "core")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze {
            input,
            p,
            tol,
            seed: _,
            format,
        } => {
            let p = parse_p(&p)?;
            let tol = tol.unwrap_or_else(default_tol);
            let bytes = std::fs::read(&input).map_err(|source| CliError::Io {
                path: input.clone(),
                source,
            })?;
            let file: schema::ScenarioFile =
                serde_json::from_slice(&bytes).map_err(|e| CliError::Parse {
                    field: input.clone(),
                    message: e.to_string(),
                })?;
            let report = report::analyze(&file, &bytes, p, tol)?;
            match format.as_str() {
                "json" => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                ),
                _ => print!("{}", report::render_text(&report)),
            }
            Ok(0)
        }
        Command::Scenario {
            family,
            out,
            d,
            alpha,
            schmidt,
            meas,
            eta,
        } => {
            let file = build_scenario(&family, d, alpha, schmidt.as_deref(), &meas, eta)?;
            schema::save(&out, &file)?;
            eprintln!("wrote {out}");
            Ok(0)
        }
        Command::Sweep {
            family,
            d,
            grid,
            alpha,
            eta,
            p,
            out,
        } => {
            let p = parse_p(&p)?;
            let output = match family.as_str() {
                "alpha" => {
                    let grid = sweep::parse_grid(grid.as_deref().unwrap_or("0:1:101"))?;
                    sweep::sweep_alpha(d, &grid, eta, p)?
                }
                "eta" => {
                    let grid = sweep::parse_grid(grid.as_deref().unwrap_or("0:1:11"))?;
                    sweep::sweep_eta(d, alpha.unwrap_or(0.8), &grid, p)?
                }
                other => {
                    return Err(CliError::Parse {
                        field: "family".into(),
                        message: format!("unknown sweep family '{other}' (alpha | eta)"),
                    })
                }
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, &output.csv).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    print!("{}", output.summary);
                }
                None => {
                    print!("{}", output.csv);
                    eprint!("{}", output.summary);
                }
            }
            Ok(0)
        }
        Command::Verify {
            input,
            suite,
            seed,
            tol,
        } => {
            if let Some(path) = input {
                let tol = tol.unwrap_or_else(default_tol);
                let bytes = std::fs::read(&path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                let file: schema::ScenarioFile =
                    serde_json::from_slice(&bytes).map_err(|e| CliError::Parse {
                        field: path.clone(),
                        message: e.to_string(),
                    })?;
                let report = report::analyze(&file, &bytes, 1.0, tol)?;
                print!("{}", report::render_text(&report));
                if let Some(res) = report.lhs_residual {
                    println!(
                        "LHS reconstruction residual {:.3e}: {}",
                        res,
                        if res < 1e-9 { "PASS" } else { "FAIL" }
                    );
                }
                return Ok(0);
            }
            if !["core", "discrepancies", "all"].contains(&suite.as_str()) {
                return Err(CliError::Parse {
                    field: "--suite".into(),
                    message: format!("unknown suite '{suite}' (core | discrepancies | all)"),
                });
            }
            let mut failed = 0usize;
            if suite == "core" || suite == "all" {
                let outcome = verify_cmd::run_core_suite(seed);
                for line in &outcome.lines {
                    println!("{line}");
                }
                failed += outcome.failed;
            }
            if suite == "discrepancies" || suite == "all" {
                let outcome = verify_cmd::run_discrepancy_suite(seed);
                for line in &outcome.lines {
                    println!("{line}");
                }
            }
            println!(
                "{}",
                if failed == 0 {
                    "verify: all asserted invariants pass".to_string()
                } else {
                    format!("verify: {failed} asserted invariants FAILED")
                }
            );
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn build_scenario(
    family: &str,
    d: usize,
    alpha: Option<f64>,
    schmidt: Option<&str>,
    meas: &str,
    eta: Option<f64>,
) -> Result<schema::ScenarioFile, CliError> {
    if meas != "mub" {
        return Err(CliError::Parse {
            field: "--meas".into(),
            message: format!("unknown measurement family '{meas}' (only 'mub' is built in)"),
        });
    }
    let (state, dim) = match family {
        "isotropic" => {
            let alpha = alpha.ok_or_else(|| CliError::Parse {
                field: "--alpha".into(),
                message: "the isotropic family needs --alpha".into(),
            })?;
            (scenarios::isotropic(d, alpha)?, d)
        }
        "pure" => {
            let raw = schmidt.ok_or_else(|| CliError::Parse {
                field: "--schmidt".into(),
                message: "the pure family needs --schmidt (comma-separated coefficients)".into(),
            })?;
            let coeffs: Result<Vec<f64>, _> =
                raw.split(',').map(|v| v.trim().parse::<f64>()).collect();
            let coeffs = coeffs.map_err(|_| CliError::Parse {
                field: "--schmidt".into(),
                message: format!("bad coefficient list '{raw}'"),
            })?;
            let dim = coeffs.len();
            (scenarios::pure_entangled(&coeffs)?, dim)
        }
        other => {
            return Err(CliError::Parse {
                field: "family".into(),
                message: format!("unknown scenario family '{other}' (isotropic | pure)"),
            })
        }
    };
    let mut measurements = scenarios::mub_pair(dim);
    if let Some(eta) = eta {
        measurements = steerlab_core::apply_inefficiency(&measurements, eta)?;
    }
    let assemblage = steerlab_core::steer(&state, &measurements)?;
    Ok(schema::ScenarioFile {
        dims: schema::Dims { d_a: dim, d_b: dim },
        state: Some(schema::matrix_to_json(state.rho())),
        measurements: Some(schema::family_to_json(
            measurements.n_settings(),
            measurements.n_outcomes(),
            measurements.elements(),
        )),
        assemblage: Some(schema::family_to_json(
            assemblage.n_settings(),
            assemblage.n_outcomes(),
            assemblage.elements(),
        )),
    })
}
