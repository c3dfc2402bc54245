// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use laminar_cli::{
    cmd_build_language, cmd_cayley, cmd_classify, cmd_replay_certificate, cmd_winf, parse_radii,
    summarize_verdicts, write_document, RunConfig, CACHE_ENV, DEFAULT_CACHE_DIR,
};

const EXIT_REPLAY_FAILED: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_ERROR: u8 = 3;

/// Leaf languages of train-track maps and bounded-depth classification of
/// boundary rays.
///
/// Exit codes: 0 success, 1 failed replay or inconsistent verdicts,
/// 2 some verdict is Unknown, 3 error.
#[derive(Parser)]
#[command(name = "laminar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build (or load from cache) the leaf language of a map.
    BuildLanguage(Common),
    /// Classify a ray as conical, injective and recurrent at bounded depth.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Ray script: `periodic: a b`, `fixed: MAP seed a`, `winf: MAP target 2000`, `explicit: a b`.
        #[arg(long, default_value = "periodic: a")]
        ray: String,
        #[arg(long, default_value_t = 2000)]
        depth: usize,
        #[arg(long, default_value_t = 5)]
        min_occurrences: usize,
        /// Window length of the recurrence test.
        #[arg(long, default_value_t = 200)]
        window: usize,
        /// Factor length of the recurrence test.
        #[arg(long)]
        factor_length: Option<usize>,
    },
    /// Build a certified prefix of the injective non-conical ray.
    Winf {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2000)]
        target: usize,
    },
    /// Build Cayley balls and estimate the thin-triangle constant per radius.
    Cayley {
        /// Presentation file, or `free2`, `z2`, `genus2`.
        #[arg(long, default_value = "z2")]
        presentation: String,
        /// Radii as `1,2,3` or `1..6`.
        #[arg(long, default_value = "1..4")]
        radii: String,
        /// Seed for triangle sampling on large balls.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        budget_cosets: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a stored verdict or w∞ certificate document.
    ReplayCertificate {
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long, env = CACHE_ENV, default_value = DEFAULT_CACHE_DIR)]
        cache_dir: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Map file or builtin name (`tribonacci`, `fibonacci`); repeat for several sources.
    #[arg(long = "map", default_value = "tribonacci")]
    maps: Vec<String>,
    #[arg(long, default_value_t = 400)]
    horizon: usize,
    #[arg(long, default_value_t = 1)]
    delta: usize,
    /// Local-geodesic scale; defaults to 8·delta + 1.
    #[arg(long)]
    r: Option<usize>,
    /// Fellow-travel constant; defaults to 2·delta.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, env = CACHE_ENV, default_value = DEFAULT_CACHE_DIR)]
    cache_dir: PathBuf,
    /// Write the JSON document here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Recorded in the document; the classifiers themselves are deterministic.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 20_000)]
    search_budget: usize,
    #[arg(long)]
    budget_members: Option<u64>,
    #[arg(long)]
    budget_letters: Option<u64>,
    #[arg(long)]
    budget_generations: Option<usize>,
}

impl Common {
    fn config(&self) -> RunConfig {
        let defaults = RunConfig::default();
        RunConfig {
            maps: self.maps.clone(),
            horizon: self.horizon,
            delta: self.delta,
            r: self.r,
            d: self.d,
            seed: self.seed,
            search_budget: self.search_budget,
            budget_members: self.budget_members.unwrap_or(defaults.budget_members),
            budget_letters: self.budget_letters.unwrap_or(defaults.budget_letters),
            budget_generations: self.budget_generations.unwrap_or(defaults.budget_generations),
            cache_dir: self.cache_dir.clone(),
            ..defaults
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::BuildLanguage(common) => {
            let report = cmd_build_language(&common.config())?;
            println!(
                "language {} horizon {} saturated at generation {} ({:?})",
                report.language.hash, report.language.horizon, report.language.generation_depth, report.cache_status
            );
            if let Some(out) = &common.out {
                write_document(&report, out)?;
            }
            Ok(0)
        }
        Command::Classify {
            common,
            ray,
            depth,
            min_occurrences,
            window,
            factor_length,
        } => {
            let config = RunConfig {
                ray,
                depth,
                min_occurrences,
                window,
                factor_length,
                ..common.config()
            };
            let doc = cmd_classify(&config)?;
            println!("{}", summarize_verdicts(&doc));
            if let Some(out) = &common.out {
                write_document(&doc, out)?;
            }
            Ok(if !doc.consistency.consistent {
                EXIT_REPLAY_FAILED
            } else if doc.has_unknown() {
                EXIT_UNKNOWN
            } else {
                0
            })
        }
        Command::Winf { common, target } => {
            let doc = cmd_winf(&common.config(), target)?;
            print!("{}", doc.scheme.render_summary(&laminar_core::Alphabet::new(doc.alphabet.clone())?));
            println!("prefix of {} letters, local geodesic checked: {}", doc.target, doc.scheme.local_geodesic_checked);
            if let Some(out) = &common.out {
                write_document(&doc, out)?;
            }
            Ok(0)
        }
        Command::Cayley {
            presentation,
            radii,
            seed,
            budget_cosets,
            out,
        } => {
            let report = cmd_cayley(&presentation, &parse_radii(&radii)?, seed, budget_cosets)?;
            for r in &report.radii {
                println!(
                    "radius {}: {} vertices{}, delta ≥ {} ({}, {} triangles)",
                    r.radius,
                    r.vertices,
                    if r.confirmed { "" } else { " (unconfirmed)" },
                    r.delta.delta,
                    r.delta.mode,
                    r.delta.triangles
                );
            }
            if let Some(out) = &out {
                write_document(&report, out)?;
            }
            Ok(0)
        }
        Command::ReplayCertificate { certificate, cache_dir } => {
            let report = cmd_replay_certificate(&certificate, &cache_dir)?;
            for check in &report.checks {
                println!("ok: {check}");
            }
            match &report.failure {
                None => {
                    println!("replay succeeded");
                    Ok(0)
                }
                Some(failure) => {
                    println!("replay FAILED: {failure}");
                    Ok(EXIT_REPLAY_FAILED)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
