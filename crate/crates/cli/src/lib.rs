//! Library side of the `aapt` command-line tool.

pub mod args;
pub mod commands;
pub mod error;
pub mod sweep;

use std::fs;
use std::io::Write;
use std::path::Path;

use args::{Cli, Command};
use commands::{ConstructParams, Outcome};
pub use error::{CliError, CliResult};

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Analyze { state, tol } => commands::analyze(state, *tol),
        Command::Tomography {
            state,
            channel,
            sigma,
            seed,
            runs,
            tol,
        } => commands::tomography(state, channel, *sigma, *seed, *runs, *tol),
        Command::Sweep {
            config,
            seed,
            sigma,
            tol,
        } => {
            let mut cfg = commands::load_sweep_config(config)?;
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.sigma = sigma.unwrap_or(cfg.sigma);
            cfg.tol = tol.unwrap_or(cfg.tol);
            commands::sweep(&cfg)
        }
        Command::Scaling { max_n } => commands::scaling(*max_n),
        Command::Construct {
            kind,
            p,
            s,
            which,
            same_orientation,
        } => commands::construct(&ConstructParams {
            kind: *kind,
            p: *p,
            s: s.clone(),
            which: *which,
            same_orientation: *same_orientation,
        }),
    }
}

/// Output path: `--output`, else a sweep config's `output`, else stdout.
fn destination(cli: &Cli) -> CliResult<Option<std::path::PathBuf>> {
    if let Some(p) = &cli.output {
        return Ok(Some(p.clone()));
    }
    if let Command::Sweep { config, .. } = &cli.command {
        let cfg = commands::load_sweep_config(config)?;
        return Ok(cfg.output.map(|o| resolve(config, &o)));
    }
    Ok(None)
}

/// Relative paths in a config file are taken relative to the config.
fn resolve(config: &Path, output: &str) -> std::path::PathBuf {
    let out = Path::new(output);
    if out.is_absolute() {
        out.to_path_buf()
    } else {
        config.parent().unwrap_or(Path::new("")).join(out)
    }
}

/// Runs the command and writes its output; returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = run(cli).and_then(|outcome| {
        match destination(cli)? {
            Some(path) => {
                fs::write(&path, &outcome.output).map_err(|source| CliError::Io { path, source })?
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(outcome.output.as_bytes());
            }
        }
        Ok(outcome.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
