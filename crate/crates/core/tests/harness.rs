use c7opt::experiment::*;
use c7opt::harness::*;
use c7opt::sequence::SequenceParams;
use proptest::prelude::*;

const ROTOR: f64 = reference::ROTOR_FREQ;

fn tiny() -> SimConfig {
    SimConfig { powder: PowderSpec { scheme: PowderKind::Zcw, count: 8, gamma: 1 }, ..SimConfig::default() }
}

fn scratch(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("c7opt-harness-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn scans_match_direct_evaluation() {
    let sys = reference::maleate();
    let cfg = tiny();
    let base = SequenceParams::c7(ROTOR, 6).unwrap();
    let x = Axis::new("tau1", -2.0, 2.0, 3);
    let y = Axis::new("kappa2", -1000.0, 1000.0, 2);
    let g = scan_2d(&x, &y, &base, &sys, &cfg, 1).unwrap();
    for (iy, dk) in y.coords().into_iter().enumerate() {
        for (ix, dt) in x.coords().into_iter().enumerate() {
            let mut p = base;
            p.tau1 += dt * 1e-6;
            p.kappa2 += dk;
            let e = dqf_efficiency(&p, &sys, &cfg).unwrap().efficiency;
            assert!((g.values[iy][ix] - e).abs() < 1e-12);
        }
    }

    // Block-count axis goes through the buildup path.
    let n = Axis::new("n_blocks", 2.0, 8.0, 4);
    let g = scan_2d(&n, &x, &base, &sys, &cfg, 1).unwrap();
    for (iy, dt) in x.coords().into_iter().enumerate() {
        for (ix, nb) in n.coords().into_iter().enumerate() {
            let mut p = base.with_blocks(nb as u32);
            p.tau1 += dt * 1e-6;
            let e = dqf_efficiency(&p, &sys, &cfg).unwrap().efficiency;
            assert!((g.values[iy][ix] - e).abs() < 1e-12);
        }
    }

    let off = Axis::new("offset", -3000.0, 3000.0, 3);
    let g = scan_1d(&off, &base, &sys, &cfg, 1).unwrap();
    for (ix, o) in off.coords().into_iter().enumerate() {
        let e = dqf_efficiency(&base, &sys.with_offset(o), &cfg).unwrap().efficiency;
        assert!((g.values[0][ix] - e).abs() < 1e-12);
    }
}

#[test]
fn single_point_scans() {
    let sys = reference::maleate();
    let cfg = tiny();
    let base = SequenceParams::c7(ROTOR, 5).unwrap();
    let direct = dqf_efficiency(&base, &sys, &cfg).unwrap().efficiency;
    let g = scan_1d(&Axis::new("phi1", 0.0, 0.0, 1), &base, &sys, &cfg, 1).unwrap();
    assert_eq!(g.values, vec![vec![direct]]);
    let g = scan_2d(&Axis::new("tau1", 0.0, 3.0, 1), &Axis::new("tau2", 0.0, 3.0, 1), &base, &sys, &cfg, 1).unwrap();
    assert_eq!(g.values, vec![vec![direct]]);
}

#[test]
fn unknown_scan_parameter_is_rejected() {
    let sys = reference::maleate();
    let base = SequenceParams::c7(ROTOR, 5).unwrap();
    let r = scan_1d(&Axis::new("tau7", 0.0, 1.0, 2), &base, &sys, &tiny(), 1);
    assert!(matches!(r, Err(c7opt::Error::InvalidInput(_))));
}

#[test]
fn empty_task_list_writes_only_the_manifest() {
    let dir = scratch("empty");
    let cfg = RunConfig::default();
    let s = study_runner(&cfg, &dir, 1, &mut |_| {}).unwrap();
    assert_eq!(s.files, vec![std::path::PathBuf::from("manifest.toml")]);
    let back = RunConfig::load(&dir.join("manifest.toml")).unwrap();
    assert_eq!(back, cfg);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn runner_writes_every_artifact() {
    let dir = scratch("all");
    let text = r#"
[task]
tasks = ["buildup", "scan1d", "scan2d", "offset", "optimize", "speedstudy"]
[simulation.powder]
scheme = "zcw"
count = 5
gamma = 1
[buildup]
n_max = 4
[scan1d.axis]
param = "tau1"
start = -1.0
stop = 1.0
points = 3
[scan2d.x]
param = "tau1"
start = -1.0
stop = 1.0
points = 2
[scan2d.y]
param = "n_blocks"
start = 1.0
stop = 3.0
points = 3
[offset]
start_hz = -20000.0
stop_hz = 20000.0
points = 5
[optimizer]
params = ["tau1", "n_blocks"]
runs = 2
[optimizer.ga]
population_size = 6
generations = 2
eval_budget = 12
[speedstudy]
speeds_hz = [10204.0]
ratio_points = 3
tau_exc_max_ms = 0.8
"#;
    let cfg = RunConfig::from_toml(text).unwrap();
    let s = study_runner(&cfg, &dir, 1, &mut |_| {}).unwrap();
    for f in ["manifest.toml", "buildup.csv", "scan1d.csv", "scan2d.csv", "offset.csv", "offset_summary.json",
        "optimize_summary.csv", "optimize_summary.json", "runs/run_01.json", "speedstudy.csv"]
    {
        assert!(s.files.contains(&f.into()), "missing {f}");
        assert!(dir.join(f).is_file());
    }
    let g = ScanGrid::from_csv(&std::fs::read_to_string(dir.join("scan2d.csv")).unwrap()).unwrap();
    assert_eq!((g.values.len(), g.values[0].len()), (3, 2));
    assert_eq!(RunConfig::load(&dir.join("manifest.toml")).unwrap(), cfg);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_errors_name_the_field() {
    let e = RunConfig::from_toml("[optimizer]\nparams = [\"tau9\"]\n").unwrap_err().to_string();
    assert!(e.contains("optimizer.params"), "{e}");
    let e = RunConfig::from_toml("[simulation]\nrotor_freq = 1.0\n").unwrap_err().to_string();
    assert!(e.contains("line 2") && e.contains("rotor_freq"), "{e}");
    let e = RunConfig::from_toml("[optimizer]\nseed = -1\n").unwrap_err().to_string();
    assert!(e.contains("seed"), "{e}");
    let e = RunConfig::from_toml("[simulation.powder]\nscheme = \"zcw\"\ncount = 100\ngamma = 1\n").unwrap_err().to_string();
    assert!(e.contains("simulation.powder"), "{e}");
}

#[test]
fn speed_study_reports_certified_maximum() {
    let sys = reference::maleate();
    let study = SpeedStudyBlock { speeds_hz: vec![10204.0], ratio_min: 1.0, ratio_max: 1.04, ratio_points: 5, tau_exc_max_ms: 9.0 };
    let st = spinning_speed_study(&study, &sys, &tiny(), 1).unwrap();
    assert_eq!(st.rows.len(), 2);
    for (r, g) in st.rows.iter().zip(&st.grids) {
        let (ix, iy, v) = g.argmax();
        assert_eq!(v, r.efficiency_max);
        if r.clear_maximum {
            assert!(ix > 0 && iy > 0);
            for (dx, dy) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                assert!(g.values[(iy as i64 + dy) as usize][(ix as i64 + dx) as usize] < v);
            }
        } else {
            assert!(!r.note.is_empty());
        }
    }
}

fn config_strategy() -> impl Strategy<Value = RunConfig> {
    (
        (5000.0f64..20000.0, -500.0f64..500.0, 1u32..60, -4.0f64..4.0, -9.0f64..9.0),
        (0u64..=i64::MAX as u64, 0.0f64..1.0, 0.0f64..0.1, 1usize..40, prop::bool::ANY),
        prop::sample::subsequence(vec!["tau1", "tau2", "kappa1", "kappa2", "phi1", "phi2", "n_blocks"], 1..=7),
    )
        .prop_map(|((rotor, b, n, dt, dphi), (seed, pc, pm, runs, csa), params)| {
            let mut c = RunConfig::default();
            c.simulation.rotor_freq_hz = rotor;
            c.simulation.include_csa = csa;
            c.spin.dipolar_b_hz = b;
            c.sequence.n_blocks = n + 20;
            c.sequence.dtau1_us = dt;
            c.sequence.dphi2_deg = dphi;
            c.optimizer.seed = seed;
            c.optimizer.runs = runs;
            c.optimizer.ga.crossover_prob = pc;
            c.optimizer.ga.mutation_prob = pm;
            c.optimizer.params = params.into_iter().map(String::from).collect();
            c.task.tasks = vec![Task::Scan2d, Task::Buildup];
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn manifest_round_trips(cfg in config_strategy()) {
        let text = cfg.to_toml().unwrap();
        prop_assert_eq!(RunConfig::from_toml(&text).unwrap(), cfg);
    }

    #[test]
    fn scan_csv_reimport_is_bit_exact(
        nx in 1usize..7, ny in 1usize..7, two_d in prop::bool::ANY,
        vals in prop::collection::vec(-1.0f64..1.0, 49), start in -10.0f64..0.0, stop in 0.0f64..10.0,
    ) {
        let x = Axis::new("tau1", start, stop, nx);
        let (y, rows) = if two_d { (Some(Axis::new("n_blocks", 1.0, ny as f64, ny)), ny) } else { (None, 1) };
        let values: Vec<Vec<f64>> = (0..rows).map(|r| vals[r * 7..r * 7 + nx].to_vec()).collect();
        let g = ScanGrid { x, y, values };
        let back = ScanGrid::from_csv(&g.to_csv()).unwrap();
        prop_assert_eq!(back.values.len(), g.values.len());
        for (a, b) in back.values.iter().flatten().zip(g.values.iter().flatten()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
        // A single-point axis keeps only its start.
        prop_assert_eq!(back.x.coords(), g.x.coords());
        prop_assert_eq!(back.y.map(|a| a.coords()), g.y.map(|a| a.coords()));
    }
}
