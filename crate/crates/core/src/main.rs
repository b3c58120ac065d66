use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use thermoflow::cli::commands::{self, AuditMode, GlobalOpts};

#[derive(Parser)]
#[command(name = "thermoflow", version, about = "Relaxation asymmetry toolkit")]
struct Cli {
    /// Unit preset recorded in reports: reduced (kB = 1) or si.
    #[arg(long, global = true, value_parser = ["reduced", "si"])]
    units: Option<String>,

    /// Override the number of grid points.
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Override the time horizon.
    #[arg(long, global = true)]
    horizon: Option<f64>,

    /// Output directory (THERMOFLOW_OUT takes precedence).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a relaxation scenario from a config file.
    Simulate { config: PathBuf },
    /// Emit the data behind one of the bundled figures.
    Reproduce { figure: String },
    /// Check the speed/cost bounds along a configured trajectory.
    Audit {
        config: PathBuf,
        #[arg(long, value_parser = ["tur", "horse-carrot"])]
        mode: String,
    },
    /// Print metric and cubic tensor components at a chart point.
    Tensor {
        config: PathBuf,
        /// Evaluation point as T,ETA2.
        #[arg(long)]
        at: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = GlobalOpts {
        out: cli.out,
        units: cli.units,
        grid: cli.grid,
        horizon: cli.horizon,
    };

    let code = match cli.command {
        Command::Simulate { config } => match commands::load_config(&config) {
            Err(msg) => {
                eprintln!("config error: {msg}");
                2
            }
            Ok((cfg, text)) => match commands::cmd_simulate(cfg, &text, &opts) {
                Ok(dir) => {
                    println!("wrote report.json and series to {}", dir.display());
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    commands::exit_code(&e)
                }
            },
        },
        Command::Reproduce { figure } => {
            match commands::cmd_reproduce(&figure, &opts) {
                Ok(dir) => {
                    println!("wrote {figure} data to {}", dir.display());
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    if figure != "fig1" && figure != "fig2" && figure != "fig3" {
                        2
                    } else {
                        commands::exit_code(&e)
                    }
                }
            }
        }
        Command::Audit { config, mode } => {
            let mode = if mode == "tur" {
                AuditMode::Tur
            } else {
                AuditMode::HorseCarrot
            };
            match commands::load_config(&config) {
                Err(msg) => {
                    eprintln!("config error: {msg}");
                    2
                }
                Ok((cfg, text)) => match commands::cmd_audit(cfg, &text, mode, &opts) {
                    Ok(0) => {
                        println!("all bound ratios within tolerance");
                        0
                    }
                    Ok(code) => {
                        eprintln!("bound violation detected (this is a bug)");
                        code
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        commands::exit_code(&e)
                    }
                },
            }
        }
        Command::Tensor { config, at } => match commands::load_config(&config) {
            Err(msg) => {
                eprintln!("config error: {msg}");
                2
            }
            Ok((cfg, text)) => match commands::parse_at(&at) {
                Err(msg) => {
                    eprintln!("argument error: {msg}");
                    2
                }
                Ok(state) => match commands::cmd_tensor(cfg, &text, state, &opts) {
                    Ok(s) => {
                        print!("{s}");
                        0
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        commands::exit_code(&e)
                    }
                },
            },
        },
    };
    ExitCode::from(code as u8)
}
