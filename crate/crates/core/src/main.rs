use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use discord_lab::covariance::{covariance_from_json, covariance_to_json};
use discord_lab::estimator::{measures_with_errors, DEFAULT_RESAMPLES};
use discord_lab::sampler::{sample, sidecar_path, QuadratureSamples, SampleMetadata, GENERATOR};
use discord_lab::scenarios::output::{plot_script, write_atomic, write_figure};
use discord_lab::scenarios::{run_config, Figure, FigureOptions, ModeConfig, ScenarioConfig, VerdictStatus, TOOL_VERSION};
use discord_lab::states::{tmsv_r_for_photons, ModulationSpec, SqueezerSpec};
use discord_lab::{split_thermal, tmsv, two_mode_from_squeezers, ChannelSpec, Error, MeasureReport, TwoModeCovariance, Units};

const EXIT_INPUT: u8 = 2;
const EXIT_VALIDATOR: u8 = 3;
const THREADS_ENV: &str = "DISCORD_LAB_THREADS";

#[derive(Parser)]
#[command(name = "discord-lab", version, about = "Gaussian discord of two-mode states under noise and loss")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitsArg {
    Bits,
    Nats,
}

impl From<UnitsArg> for Units {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Bits => Units::Bits,
            UnitsArg::Nats => Units::Nats,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StateKind {
    Tmsv,
    SplitThermal,
    Squeezers,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all measures for a covariance file.
    Measure {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_enum, default_value = "bits")]
        units: UnitsArg,
        /// Standard-form tolerance for cross terms in the file.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Write the covariance of a constructed state, optionally after a channel on mode B.
    State {
        #[arg(value_enum)]
        kind: StateKind,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        mean_photons: Option<f64>,
        #[arg(long)]
        modulation: Option<f64>,
        #[arg(long, default_value_t = 3.2)]
        squeezing_db: f64,
        #[arg(long, default_value_t = 6.7)]
        antisqueezing_db: f64,
        #[arg(long, default_value_t = 1.0)]
        transmittance: f64,
        #[arg(long, default_value_t = 0.0)]
        added_noise: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw quadrature samples from a covariance file.
    Sample {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Estimate all measures with bootstrap error bars from a sample CSV.
    Estimate {
        file: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
        resamples: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_enum, default_value = "bits")]
        units: UnitsArg,
    },
    /// Run a built-in scenario (fig2..fig5) or a JSON config.
    Scenario {
        /// fig2, fig3, fig4, fig5, or a path to a config file.
        name: String,
        #[arg(long)]
        out: PathBuf,
        /// Seed for sampled mode; required whenever sampling happens.
        #[arg(long)]
        seed: Option<u64>,
        /// Samples per point; switches built-in scenarios to sampled mode.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
        resamples: usize,
        #[arg(long, value_enum)]
        units: Option<UnitsArg>,
        /// Also write a matplotlib script next to the data.
        #[arg(long)]
        plot_script: bool,
        /// Summary format; plain verdict lines when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Debug)]
enum Failure {
    Input(Error),
    Validator(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn read_covariance(path: &Path, tol: f64) -> Result<TwoModeCovariance, Error> {
    let text = std::fs::read_to_string(path)?;
    let sigma = covariance_from_json(&text, tol)?;
    discord_lab::validate_physicality(&sigma).into_result()?;
    Ok(sigma)
}

fn report_csv_row(r: &MeasureReport) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        r.mutual_info, r.classical_info, r.discord, r.log_negativity, r.separable, r.e_min, r.branch
    )
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Measure {
            file,
            format,
            units,
            tol,
        } => {
            let sigma = read_covariance(&file, tol)?;
            let report = MeasureReport::compute(&sigma, units.into())?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).map_err(Error::from)?),
                Format::Csv => println!("{}", report_csv_row(&report)),
            }
        }
        Command::State {
            kind,
            r,
            mean_photons,
            modulation,
            squeezing_db,
            antisqueezing_db,
            transmittance,
            added_noise,
            out,
        } => {
            let state = match kind {
                StateKind::Tmsv => match (r, mean_photons) {
                    (Some(r), None) => tmsv(r)?,
                    (None, Some(n)) => tmsv(tmsv_r_for_photons(n)?)?,
                    _ => return Err(Error::config("state", "tmsv needs exactly one of --r, --mean-photons").into()),
                },
                StateKind::SplitThermal => match (modulation, mean_photons) {
                    (Some(m), None) => split_thermal(&ModulationSpec::new(m))?,
                    (None, Some(n)) => split_thermal(&ModulationSpec::new(2.0 * n))?,
                    _ => {
                        return Err(Error::config(
                            "state",
                            "split-thermal needs exactly one of --modulation, --mean-photons",
                        )
                        .into())
                    }
                },
                StateKind::Squeezers => two_mode_from_squeezers(&SqueezerSpec::new(squeezing_db, antisqueezing_db))?,
            };
            let channel = ChannelSpec {
                transmittance,
                added_noise,
            };
            let sigma = channel.apply(&state)?;
            emit(out.as_deref(), &covariance_to_json(&sigma))?;
        }
        Command::Sample {
            file,
            n,
            seed,
            out,
            tol,
        } => {
            let sigma = read_covariance(&file, tol)?;
            let draws = sample(&sigma, n, seed)?;
            let mut buf = Vec::new();
            draws.write_csv(&mut buf)?;
            write_atomic(&out, &buf)?;
            let meta = SampleMetadata {
                n,
                seed,
                generator: GENERATOR.to_string(),
                state: sigma,
                version: TOOL_VERSION.to_string(),
            };
            write_atomic(&sidecar_path(&out), &serde_json::to_vec_pretty(&meta).map_err(Error::from)?)?;
        }
        Command::Estimate {
            file,
            seed,
            resamples,
            format,
            units,
        } => {
            let samples = QuadratureSamples::from_csv_path(&file)?;
            let est = measures_with_errors(&samples, resamples, seed, units.into())?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&est).map_err(Error::from)?),
                Format::Csv => println!(
                    "{},{},{},{},{}",
                    report_csv_row(&est.point()),
                    est.mutual_info.sigma,
                    est.classical_info.sigma,
                    est.discord.sigma,
                    est.log_negativity.sigma
                ),
            }
        }
        Command::Scenario {
            name,
            out,
            seed,
            n,
            resamples,
            units,
            plot_script: emit_plot,
            format,
        } => {
            let run = if Figure::NAMES.contains(&name.as_str()) {
                let mode = match (n, seed) {
                    (None, _) => ModeConfig::Analytic,
                    (Some(n), Some(seed)) => ModeConfig::Sampled { n, seed, resamples },
                    (Some(_), None) => {
                        return Err(Error::config("--seed", "sampled scenarios need an explicit --seed").into())
                    }
                };
                let opts = FigureOptions {
                    mode,
                    units: units.map(Units::from).unwrap_or_default(),
                };
                Figure::from_name(&name)?.run(&opts)?
            } else {
                let text = std::fs::read_to_string(&name).map_err(Error::from)?;
                let mut config = ScenarioConfig::from_json(&text)?;
                if let Some(u) = units {
                    config.units = u.into();
                }
                if let Some(n) = n {
                    let seed = seed.ok_or_else(|| Error::config("--seed", "sampled scenarios need an explicit --seed"))?;
                    config.mode = ModeConfig::Sampled { n, seed, resamples };
                } else if let (Some(s), ModeConfig::Sampled { n, resamples, .. }) = (seed, config.mode) {
                    config.mode = ModeConfig::Sampled { n, seed: s, resamples };
                }
                run_config(&config)?
            };
            let paths = write_figure(&run, &out)?;
            if emit_plot {
                write_atomic(&out.join(format!("plot_{}.py", run.name)), plot_script(&run).as_bytes())?;
            }
            match format {
                None => {
                    println!("{}: {} curve(s) written to {}", run.name, paths.len(), out.display());
                    for verdict in &run.verdicts {
                        println!("{verdict}");
                    }
                }
                Some(Format::Json) => {
                    let summary = serde_json::json!({
                        "scenario": run.name,
                        "files": paths,
                        "verdicts": run.verdicts,
                        "passed": run.passed(),
                    });
                    println!("{}", serde_json::to_string_pretty(&summary).map_err(Error::from)?);
                }
                Some(Format::Csv) => {
                    let mut w = csv::Writer::from_writer(std::io::stdout());
                    let rows = std::iter::once(["verdict", "status", "detail"].map(String::from)).chain(
                        run.verdicts
                            .iter()
                            .map(|v| [v.name.clone(), v.status.to_string(), v.detail.clone()]),
                    );
                    for row in rows {
                        w.write_record(&row).map_err(Error::from)?;
                    }
                    w.flush().map_err(Error::from)?;
                }
            }
            let failed: Vec<_> = run
                .verdicts
                .iter()
                .filter(|v| v.status == VerdictStatus::Fail)
                .map(|v| v.name.clone())
                .collect();
            if !failed.is_empty() {
                return Err(Failure::Validator(failed.join(", ")));
            }
        }
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // only fails if a pool already exists, which cannot happen this early
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Validator(names)) => {
            eprintln!("validator failed: {names}");
            ExitCode::from(EXIT_VALIDATOR)
        }
    }
}
