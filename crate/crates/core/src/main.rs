use std::path::PathBuf;
use std::process::ExitCode;

use c7opt::harness::{study_runner, RunConfig, Task};
use c7opt::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "c7opt", about = "C7 double-quantum recoupling: simulation, scans and GA optimization")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides optimizer.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the crystallite loop.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// DQF efficiency against the number of C7 blocks.
    Buildup(Common),
    /// Efficiency along one parameter axis.
    Scan1d(Common),
    /// Efficiency over two parameter axes.
    Scan2d(Common),
    /// Repeated GA / random / simplex / quasi-Newton runs.
    Optimize(Common),
    /// Efficiency against transmitter offset.
    Offset(Common),
    /// Buildup maximum against spinning frequency.
    Speedstudy(Common),
}

fn run(task: Task, c: Common) -> Result<(), Error> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.task.tasks = vec![task];
    if let Some(s) = c.seed {
        cfg.optimizer.seed = s;
    }
    if c.threads == 0 {
        return Err(Error::Config("--threads must be at least 1".into()));
    }
    let summary = study_runner(&cfg, &c.out, c.threads, &mut |m| eprintln!("{m}"))?;
    for f in summary.files {
        println!("{}", c.out.join(f).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (task, common) = match cli.cmd {
        Cmd::Buildup(c) => (Task::Buildup, c),
        Cmd::Scan1d(c) => (Task::Scan1d, c),
        Cmd::Scan2d(c) => (Task::Scan2d, c),
        Cmd::Optimize(c) => (Task::Optimize, c),
        Cmd::Offset(c) => (Task::Offset, c),
        Cmd::Speedstudy(c) => (Task::Speedstudy, c),
    };
    match run(task, common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Numerical(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
