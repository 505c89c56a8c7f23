use std::process::ExitCode;

use clap::Parser;
use log::error;
use qtrans::Error;
use qtrans_cli::{run, Cli, RunConfig, THREADS_ENV};

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| format!("{THREADS_ENV}={raw:?} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let cfg = match RunConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(report) => {
            print!("{}", report.render());
            if report.pass() {
                ExitCode::SUCCESS
            } else {
                for name in report.failed() {
                    error!("{}: check {name} failed", cfg.command);
                }
                ExitCode::from(1)
            }
        }
        Err(e @ (Error::InvalidConfig(_) | Error::InvalidArgument(_) | Error::Parse(_) | Error::DimensionMismatch { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
