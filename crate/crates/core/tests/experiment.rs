use c7opt::experiment::*;
use c7opt::sequence::{build_c7opt, PulseSequence, SequenceParams};
use c7opt::spin::operators::f_z;
use c7opt::spin::*;
use proptest::prelude::*;

const ROTOR: f64 = reference::ROTOR_FREQ;

fn small(count: usize, gamma: usize) -> SimConfig {
    SimConfig { powder: PowderSpec { scheme: PowderKind::Zcw, count, gamma }, ..SimConfig::default() }
}

fn perturbed(n: u32, d: [f64; 3]) -> SequenceParams {
    let mut p = SequenceParams::c7(ROTOR, n).unwrap();
    p.tau1 += d[0];
    p.kappa2 += d[1];
    p.phi2 += d[2];
    p
}

/// Straight-line evaluation: whole-sequence propagators, explicit filter and trace.
fn naive_efficiency(p: &SequenceParams, sys: &SpinSystem, cfg: &SimConfig) -> f64 {
    let exc = build_c7opt(p).unwrap();
    let rec = exc.phase_shifted(std::f64::consts::FRAC_PI_2);
    let rho0 = DensityMatrix(f_z());
    let norm = expectation(&rho0, &f_z()).re;
    let mut acc = 0.0;
    for (o, w) in cfg.powder.build().unwrap().crystallites {
        let ue = propagate_sequence(sys, &o, cfg.rotor_freq, &exc, 0.0, cfg.max_step()).unwrap();
        let ur = propagate_sequence(sys, &o, cfg.rotor_freq, &rec, exc.total_duration(), cfg.max_step()).unwrap();
        let dq = coherence_filter(&rho0.evolve(&ue), &[2, -2]);
        acc += w * expectation(&dq.evolve(&ur), &f_z()).re / norm;
    }
    acc
}

#[test]
fn uncoupled_pair_gives_zero_efficiency() {
    let mut sys = reference::maleate();
    sys.dipolar_b = 0.0;
    for n in [1, 7, 31] {
        let r = dqf_efficiency(&perturbed(n, [1e-6, 2000.0, 0.1]), &sys, &small(21, 2)).unwrap();
        assert!(r.efficiency.abs() < 1e-10, "n = {n}: {}", r.efficiency);
    }
}

#[test]
fn fast_path_matches_naive_evaluation() {
    let sys = reference::maleate();
    let cfg = small(13, 2);
    for (n, d) in [(1, [0.0; 3]), (4, [1.3e-6, -3000.0, 0.05]), (9, [-2e-6, 5000.0, -0.15])] {
        let p = perturbed(n, d);
        let fast = dqf_efficiency(&p, &sys, &cfg).unwrap().efficiency;
        let slow = naive_efficiency(&p, &sys, &cfg);
        assert!((fast - slow).abs() < 1e-9, "n = {n}: {fast} vs {slow}");
    }
}

#[test]
fn buildup_matches_single_point_evaluations() {
    let sys = reference::maleate();
    let cfg = small(13, 2);
    let p = perturbed(1, [0.7e-6, 1000.0, -0.05]);
    let curve = buildup_curve(&p, &sys, &cfg, 1..=12).unwrap();
    for pt in &curve {
        let e = dqf_efficiency(&p.with_blocks(pt.n_blocks), &sys, &cfg).unwrap().efficiency;
        assert!((pt.efficiency - e).abs() < 1e-9, "n = {}: {} vs {e}", pt.n_blocks, pt.efficiency);
    }
    let one = buildup_curve(&p, &sys, &cfg, 1..=1).unwrap();
    assert_eq!(one.len(), 1);
    assert!((one[0].efficiency - curve[0].efficiency).abs() < 1e-12);
    assert!((one[0].tau_exc - p.block_duration()).abs() < 1e-15);
}

#[test]
fn zero_offset_profile_is_the_plain_efficiency() {
    let sys = reference::maleate();
    let cfg = small(13, 2);
    let p = perturbed(6, [0.0; 3]);
    let prof = offset_profile(&p, &sys, &cfg, &[0.0]).unwrap();
    assert_eq!(prof[0].1, dqf_efficiency(&p, &sys, &cfg).unwrap().efficiency);
}

#[test]
fn csa_toggle_removes_shielding_anisotropy() {
    let sys = reference::maleate();
    let p = perturbed(8, [0.0; 3]);
    let off = SimConfig { include_csa: false, ..small(21, 2) };
    let a = dqf_efficiency(&p, &sys, &off).unwrap().efficiency;
    let b = dqf_efficiency(&p, &sys.without_csa(), &small(21, 2)).unwrap().efficiency;
    assert_eq!(a, b);
    let with = dqf_efficiency(&p, &sys, &small(21, 2)).unwrap().efficiency;
    assert!((a - with).abs() > 1e-3, "the tensors should matter: {a} vs {with}");
}

#[test]
fn splitting_at_a_pulse_boundary_changes_nothing() {
    let sys = reference::maleate();
    let p = perturbed(2, [0.9e-6, -2000.0, 0.0]);
    let seq = build_c7opt(&p).unwrap();
    let step = 1.0 / (200.0 * ROTOR);
    let o = Orientation::new(1.0, 0.8, 2.5);
    let whole = propagate_sequence(&sys, &o, ROTOR, &seq, 0.0, step).unwrap();
    for cut in [1, 5, 14, seq.len() - 1] {
        let (a, b) = seq.events().split_at(cut);
        let (a, b) = (PulseSequence::new(a.to_vec()), PulseSequence::new(b.to_vec()));
        let ua = propagate_sequence(&sys, &o, ROTOR, &a, 0.0, step).unwrap();
        let ub = propagate_sequence(&sys, &o, ROTOR, &b, a.total_duration(), step).unwrap();
        let d = ua.then(&ub).matrix().max_abs_diff(whole.matrix());
        assert!(d < 1e-10, "cut {cut}: {d}");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let sys = reference::maleate();
    let cfg = small(21, 2);
    let p = perturbed(5, [0.3e-6, 700.0, 0.02]);
    let base = Experiment::new(&sys, &cfg).unwrap();
    let e1 = base.efficiency(&p).unwrap();
    let b1 = base.buildup(&p, 6).unwrap();
    for t in [2, 3, 8] {
        let exp = Experiment::new(&sys, &cfg).unwrap().with_threads(t);
        assert_eq!(exp.efficiency(&p).unwrap(), e1);
        assert_eq!(exp.buildup(&p, 6).unwrap(), b1);
    }
}

#[test]
fn powder_refinement_converges() {
    // Reference set 233×4 against its refinement 377×8 at 31 blocks, with CSA.
    let sys = reference::maleate();
    let cfg = small(233, 4);
    let fine = SimConfig { powder: cfg.powder.refined(), ..cfg.clone() };
    assert_eq!(fine.powder, PowderSpec { scheme: PowderKind::Zcw, count: 377, gamma: 8 });
    let p = SequenceParams::c7(ROTOR, 31).unwrap();
    let a = dqf_efficiency(&p, &sys, &cfg).unwrap().efficiency;
    let b = dqf_efficiency(&p, &sys, &fine).unwrap().efficiency;
    assert!((a - b).abs() < 2e-3, "{a} vs {b}");
}

#[test]
fn fwhm_of_a_triangle() {
    let prof: Vec<(f64, f64)> = (-10..=10).map(|i| (i as f64, 1.0 - (i as f64).abs() / 10.0)).collect();
    let w = fwhm(&prof).unwrap();
    assert!((w.width - 10.0).abs() < 1e-12);
    assert!(w.center.abs() < 1e-12);
    assert!(fwhm(&[(0.0, 1.0), (1.0, 0.9)]).is_none());
}

#[test]
fn invalid_inputs_are_rejected() {
    let sys = reference::maleate();
    let mut p = SequenceParams::c7(ROTOR, 3).unwrap();
    p.n_blocks = 0;
    assert!(matches!(dqf_efficiency(&p, &sys, &small(13, 1)), Err(c7opt::Error::InvalidInput(_))));
    let bad = SimConfig { rotor_freq: -1.0, ..small(13, 1) };
    assert!(dqf_efficiency(&SequenceParams::c7(ROTOR, 3).unwrap(), &sys, &bad).is_err());
    let bad = small(100, 1);
    assert!(Experiment::new(&sys, &bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn efficiency_is_bounded_and_fitness_complements_it(
        n in 1u32..12, dt1 in -5e-6f64..5e-6, dk in -7000.0f64..7000.0, dp in -0.17f64..0.17,
    ) {
        let sys = reference::maleate();
        let r = dqf_efficiency(&perturbed(n, [dt1, dk, dp]), &sys, &small(5, 1)).unwrap();
        prop_assert!(r.efficiency.abs() <= 1.0 + 1e-12);
        prop_assert_eq!(r.fitness, 1.0 - r.efficiency);
    }
}
