//! Runs a small TOML-described study through the same driver as the CLI.
//!
//! cargo run --release --example config_study -- [out_dir]

use c7opt::harness::{study_runner, RunConfig};

const CONFIG: &str = r#"
[task]
tasks = ["buildup", "scan1d", "optimize"]

[simulation.powder]
scheme = "zcw"
count = 13
gamma = 1

[buildup]
n_max = 40

[scan1d.axis]
param = "kappa1"
start = -3000.0
stop = 3000.0
points = 13

[optimizer]
method = "ga"
params = ["tau1", "tau2"]
runs = 2

[optimizer.ga]
generations = 8
eval_budget = 300
"#;

fn main() -> Result<(), c7opt::Error> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "config_study_out".into());
    let cfg = RunConfig::from_toml(CONFIG)?;
    let summary = study_runner(&cfg, out.as_ref(), 1, &mut |m| eprintln!("{m}"))?;
    for f in summary.files {
        println!("{out}/{}", f.display());
    }
    Ok(())
}
