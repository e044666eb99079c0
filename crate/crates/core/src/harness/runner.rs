//! Dispatches the configured tasks and writes their artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::config::{RunConfig, Task};
use super::optimize::optimize_runs;
use super::scan::{scan_1d, scan_2d};
use super::speed::spinning_speed_study;
use super::summary_csv;
use crate::experiment::{buildup_curve, fwhm, offset_profile, Experiment, SimConfig};
use crate::optim::success_rate;
use crate::Error;

/// Files written by [`study_runner`], relative to the output directory.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
}

struct Writer<'a> {
    dir: &'a Path,
    summary: RunSummary,
}

impl Writer<'_> {
    fn write(&mut self, name: &str, content: &str) -> Result<(), Error> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, content)?;
        self.summary.files.push(PathBuf::from(name));
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Error> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Numerical(format!("JSON encoding: {e}")))?;
        self.write(name, &text)
    }
}

/// Writes `manifest.toml` (the resolved configuration) and then runs every
/// task in `cfg.task.tasks` in order. An empty task list writes only the
/// manifest. Progress goes to `log`.
pub fn study_runner(cfg: &RunConfig, out: &Path, threads: usize, log: &mut dyn FnMut(&str)) -> Result<RunSummary, Error> {
    cfg.validate()?;
    fs::create_dir_all(out)?;
    let mut w = Writer { dir: out, summary: RunSummary::default() };
    w.write("manifest.toml", &cfg.to_toml()?)?;

    let sys = cfg.system()?;
    let sim = cfg.sim_config()?;
    let base = cfg.base_params()?;
    for &task in &cfg.task.tasks {
        log(&format!("task {}", task.name()));
        match task {
            Task::Buildup => {
                let b = &cfg.buildup;
                let modes: Vec<bool> = if b.both_csa_modes { vec![false, true] } else { vec![sim.include_csa] };
                let mut cols = Vec::new();
                for &csa in &modes {
                    let c = SimConfig { include_csa: csa, ..sim.clone() };
                    cols.push(buildup_curve(&base, &sys, &c, b.n_min..=b.n_max)?);
                }
                let mut s = String::from("n_blocks,tau_exc_ms");
                for &csa in &modes {
                    s.push_str(if csa { ",efficiency_csa" } else { ",efficiency_no_csa" });
                }
                s.push('\n');
                for i in 0..cols[0].len() {
                    s.push_str(&format!("{},{}", cols[0][i].n_blocks, cols[0][i].tau_exc * 1e3));
                    for c in &cols {
                        s.push_str(&format!(",{}", c[i].efficiency));
                    }
                    s.push('\n');
                }
                w.write("buildup.csv", &s)?;
            }
            Task::Scan1d => {
                let g = scan_1d(&cfg.scan1d.axis, &base, &sys, &sim, threads)?;
                w.write("scan1d.csv", &g.to_csv())?;
            }
            Task::Scan2d => {
                let g = scan_2d(&cfg.scan2d.x, &cfg.scan2d.y, &base, &sys, &sim, threads)?;
                w.write("scan2d.csv", &g.to_csv())?;
            }
            Task::Offset => {
                let o = &cfg.offset;
                let offsets: Vec<f64> = super::scan::Axis::new("offset", o.start_hz, o.stop_hz, o.points).coords();
                let prof = offset_profile(&base, &sys, &sim, &offsets)?;
                let mut s = String::from("offset_hz,efficiency\n");
                for (x, v) in &prof {
                    s.push_str(&format!("{x},{v}\n"));
                }
                w.write("offset.csv", &s)?;
                let f = fwhm(&prof);
                w.json(
                    "offset_summary.json",
                    &json!({
                        "fwhm_hz": f.map(|f| f.width),
                        "left_hz": f.map(|f| f.left),
                        "right_hz": f.map(|f| f.right),
                        "center_hz": f.map(|f| f.center),
                        "peak": f.map(|f| f.peak),
                    }),
                )?;
            }
            Task::Speedstudy => {
                let st = spinning_speed_study(&cfg.speedstudy, &sys, &sim, threads)?;
                w.write("speedstudy.csv", &st.to_csv())?;
                for (r, g) in st.rows.iter().zip(&st.grids) {
                    let tag = if r.include_csa { "csa" } else { "no_csa" };
                    w.write(&format!("speedstudy/grid_{}_{tag}.csv", r.rotor_freq), &g.to_csv())?;
                }
            }
            Task::Optimize => {
                let problem = cfg.problem()?;
                let exp = Experiment::new(&sys, &sim)?.with_threads(threads);
                let records = optimize_runs(&problem, &exp, &cfg.optimizer, |k, r| {
                    log(&format!("run {k}: seed {} efficiency {:.4} ({} evaluations)", r.seed, r.best_efficiency(), r.evaluations))
                })?;
                for (k, r) in records.iter().enumerate() {
                    w.json(&format!("runs/run_{k:02}.json"), r)?;
                    w.write(&format!("runs/run_{k:02}_history.csv"), &r.history_csv())?;
                }
                w.write("optimize_summary.csv", &summary_csv(&problem, &records)?)?;
                let best = records.iter().min_by(|a, b| a.best_fitness.total_cmp(&b.best_fitness)).expect("at least one run");
                w.json(
                    "optimize_summary.json",
                    &json!({
                        "method": cfg.optimizer.method.name(),
                        "runs": records.len(),
                        "success_threshold": cfg.optimizer.success_threshold,
                        "success_rate": success_rate(&records, cfg.optimizer.success_threshold)?,
                        "best_efficiency": best.best_efficiency(),
                        "best_seed": best.seed,
                        "best_values": best.best_values,
                        "params": problem.params.iter().map(|p| p.name()).collect::<Vec<_>>(),
                    }),
                )?;
            }
        }
    }
    Ok(w.summary)
}
