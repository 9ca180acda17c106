use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use ltsearch::commands::{cmd_census, cmd_orbits, cmd_params, cmd_pg, cmd_search, cmd_verify, Options};
use ltsearch::spec::RunSpec;

/// Starter-block search for line-transitive, point-imprimitive 2-(v,k,1) designs.
#[derive(Parser)]
#[command(name = "ltsearch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run description (key = value file).
    #[arg(long)]
    spec: PathBuf,
    /// Output directory; overrides `out_dir` in the spec.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Only this group G_i (1..4).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=4))]
    group_index: Option<u64>,
    /// Only this column vector (1-based, in the order `params` lists them).
    #[arg(long)]
    vector: Option<usize>,
    /// Worker threads; 1 runs the search single-threaded.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Delandtsheer–Doyen solutions, intercept vectors, masks, groups and targets.
    Params(Common),
    /// Write the pair-orbit table of each group.
    Orbits(Common),
    /// Full starter-block search over every (group, column vector) combination.
    Search(Common),
    /// Count (or stream) the partial blocks of a given size.
    Census {
        #[command(flatten)]
        common: Common,
        /// Partial block size; overrides `census_depth`.
        #[arg(long)]
        depth: Option<usize>,
        /// Apply the pair-orbit bound while counting.
        #[arg(long)]
        with_orbit_condition: bool,
    },
    /// Develop and verify every block of a block-list file.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Block list, one block per line, 1-based point ids.
        blocks: PathBuf,
    },
    /// Build and verify the Desarguesian plane of prime order p.
    Pg {
        #[arg(default_value_t = 7)]
        p: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn options(c: &Common) -> Options {
    Options {
        out_dir: c.out.clone(),
        group_index: c.group_index,
        vector: c.vector,
        jobs: c.jobs,
        ..Options::default()
    }
}

fn setup(c: &Common) -> Result<RunSpec> {
    if let Some(n) = c.jobs.filter(|&n| n > 1) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    RunSpec::load(&c.spec)
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Params(c) => cmd_params(&setup(&c)?, &options(&c), &mut out)?,
        Command::Orbits(c) => {
            cmd_orbits(&setup(&c)?, &options(&c), &mut out)?;
        }
        Command::Search(c) => {
            cmd_search(&setup(&c)?, &options(&c), &mut out)?;
        }
        Command::Census {
            common,
            depth,
            with_orbit_condition,
        } => {
            let opts = Options {
                depth,
                with_orbit_condition,
                ..options(&common)
            };
            cmd_census(&setup(&common)?, &opts, &mut out)?;
        }
        Command::Verify { common, blocks } => {
            let reports = cmd_verify(&setup(&common)?, &blocks, &options(&common), &mut out)?;
            if !reports.iter().all(|r| r.all_ok()) {
                out.flush()?;
                anyhow::bail!("verification failed");
            }
        }
        Command::Pg { p, out: dir } => {
            cmd_pg(p, &dir, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
