//! Command-line surface: configuration, experiment dispatch and reports.

mod commands;
mod config;
mod presets;
mod report;

use std::path::PathBuf;

use clap::Parser;

pub use commands::run;
pub use config::{load_config, parse_config, Command, ExperimentConfig, ManifestRef};
pub use presets::{recovery_manifest, PRESETS};
pub use report::{config_hash, emit_report, prepare_dir, RunReport, Status, Table};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "PROFDECOMP_OUT";

#[derive(Debug, Parser)]
#[command(name = "profdecomp", version, about = "Profile decomposition experiments for H^N(R^2N)")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Preset name for `verify`.
    pub preset: Option<String>,
    /// JSON experiment config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory; defaults to `$PROFDECOMP_OUT/<command>-<config hash>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overwrite a non-empty output directory.
    #[arg(long)]
    pub force: bool,
    #[arg(long, env = OUT_ENV, default_value = "runs", hide_env_values = true)]
    pub out_root: PathBuf,
}

/// Merge the command line into the config file.
pub fn resolve(args: &Args) -> crate::Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(p) => load_config(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(c) = cfg.command {
        if c != args.command {
            return Err(crate::Error::Config {
                path: "command".into(),
                msg: format!("config says {:?} but {:?} was requested", c.name(), args.command.name()),
            });
        }
    }
    cfg.command = Some(args.command);
    if args.preset.is_some() {
        cfg.preset = args.preset.clone();
    }
    if args.command == Command::Verify && cfg.preset.is_none() {
        return Err(crate::Error::Config { path: "preset".into(), msg: format!("verify needs one of {PRESETS:?}") });
    }
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Full CLI flow; returns the process exit code.
pub fn main_with(args: Args) -> i32 {
    let cfg = match resolve(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::of(&e).exit_code();
        }
    };
    let dir = cfg.out.clone().unwrap_or_else(|| {
        let tag = match (&cfg.command, &cfg.preset) {
            (Some(Command::Verify), Some(p)) => format!("verify-{p}"),
            (c, _) => c.unwrap_or(Command::Constants).name().to_string(),
        };
        args.out_root.join(format!("{tag}-{}", &config_hash(&cfg)[..12]))
    });
    if let Err(e) = prepare_dir(&dir, args.force) {
        eprintln!("error: {e}");
        return 1;
    }
    let report = run(&cfg);
    match emit_report(&report, &dir) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    }
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    println!("run_hash {}", report.run_hash);
    report.status.exit_code()
}
