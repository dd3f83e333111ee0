use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use pls_core::analytics::RobustnessReport;
use pls_core::eavesdropper::SearchKind;
use pls_core::experiment::{self, ExperimentConfig};
use pls_core::Result;

#[derive(Parser, Debug)]
#[command(
    name = "plsim",
    version,
    about = "Brute-force demodulation robustness of OTFS and AFDM"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum, PartialEq, Eq)]
enum WaveformArg {
    Afdm,
    Otfs,
}

impl From<WaveformArg> for SearchKind {
    fn from(w: WaveformArg) -> Self {
        match w {
            WaveformArg::Afdm => SearchKind::Afdm,
            WaveformArg::Otfs => SearchKind::Otfs,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form attempt counts and tolerances.
    Analyze {
        #[arg(long, value_enum)]
        waveform: WaveformArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        theta_max: f64,
        /// Upper end of the c1 search range.
        #[arg(long = "d", default_value_t = 0.3)]
        d_upper: f64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// Print JSON instead of aligned text.
        #[arg(long)]
        json: bool,
    },
    /// Run a BER sweep and write CSVs plus a gnuplot script.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Overrides master_seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Attack a single frame and print every attempt as JSON.
    Attack {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        waveform: Option<WaveformArg>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write `parameter,score` CSVs here.
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = seed {
        cfg.master_seed = seed;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze {
            waveform,
            n,
            theta_max,
            d_upper,
            epsilon,
            json,
        } => {
            let report = match waveform {
                WaveformArg::Otfs => RobustnessReport::otfs(n)?,
                WaveformArg::Afdm => RobustnessReport::afdm(n, theta_max, d_upper, epsilon)?,
            };
            if json {
                println!("{}", report.to_json()?);
            } else {
                print!("{report}");
            }
        }
        Command::Simulate { config, out, seed } => {
            let cfg = load_config(&config, seed)?;
            let curves = experiment::run(&cfg)?;
            for path in experiment::write_outputs(&cfg, &curves, &out)? {
                println!("{}", path.display());
            }
        }
        Command::Attack {
            config,
            waveform,
            seed,
            csv_dir,
        } => {
            let cfg = load_config(&config, seed)?;
            let results = experiment::run_attack_demo(&cfg, waveform.map(SearchKind::from))?;
            if let Some(dir) = &csv_dir {
                fs::create_dir_all(dir)?;
            }
            let mut by_waveform = Map::new();
            for result in &results {
                let name = match result.waveform {
                    SearchKind::Otfs => "otfs",
                    SearchKind::Afdm => "afdm",
                };
                if let Some(dir) = &csv_dir {
                    let path = dir.join(format!("attack-{name}-{}.csv", cfg.hash()?));
                    result.write_csv(fs::File::create(&path)?)?;
                    eprintln!("{}", path.display());
                }
                by_waveform.insert(name.into(), serde_json::to_value(result)?);
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&Value::Object(by_waveform))?
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
