use c7opt::optim::*;
use c7opt::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bit_specs(n: usize) -> Vec<GeneSpec> {
    (0..n).map(|i| GeneSpec { name: format!("b{i}"), lower: 0.0, upper: 1.0, bits: 1, integer: true }).collect()
}

/// Hamming weight scaled so the roulette weight 2 − f is proportional to it.
fn onemax(x: &[f64]) -> Result<f64, Error> {
    let ones: f64 = x.iter().sum();
    Ok(2.0 * (1.0 - ones / x.len() as f64))
}

#[test]
fn onemax_ga_finds_all_ones() {
    // Fitness-proportional selection is weak near the optimum, so the genome
    // is kept short enough for 30 generations; random search at this length
    // succeeds in about a quarter of the runs.
    let specs = bit_specs(12);
    let mut hits = 0;
    for seed in 0..100 {
        let cfg = GaConfig { seed, ..GaConfig::default() };
        let r = ga_run(&cfg, &specs, onemax).unwrap();
        if r.best_fitness == 0.0 {
            hits += 1;
        }
    }
    assert!(hits >= 95, "all-ones found in {hits}/100 runs");
}

#[test]
fn onemax_ga_beats_random_search() {
    let specs = bit_specs(64);
    let mut wins = 0;
    for meta in 0..10u64 {
        let mut ga_best = f64::INFINITY;
        let mut rs_best = f64::INFINITY;
        for run in 0..10u64 {
            let seed = 1000 * meta + run;
            let cfg = GaConfig { seed, ..GaConfig::default() };
            ga_best = ga_best.min(ga_run(&cfg, &specs, onemax).unwrap().best_fitness);
            rs_best = rs_best.min(random_search(cfg.eval_budget, &specs, onemax, seed).unwrap().best_fitness);
        }
        if ga_best < rs_best {
            wins += 1;
        }
    }
    assert!(wins >= 9, "GA better in {wins}/10 meta-trials");
}

#[test]
fn roulette_frequencies_match_weights() {
    let f = [0.5, 1.0, 1.5];
    let expected = [1.5 / 3.0, 1.0 / 3.0, 0.5 / 3.0];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 1_000_000;
    let mut counts = [0usize; 3];
    for _ in 0..n {
        counts[roulette_select(&f, &mut rng)] += 1;
    }
    for (c, p) in counts.iter().zip(expected) {
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((*c as f64 - n as f64 * p).abs() < 3.0 * sigma, "count {c} vs expected {}", n as f64 * p);
    }
}

#[test]
fn mutation_count_is_binomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = random_genome(112, &mut rng);
    let trials = 100_000;
    let mut flips = 0usize;
    for _ in 0..trials {
        let m = flip_mutate(&g, 0.01, &mut rng);
        flips += g.bits.iter().zip(&m.bits).filter(|(a, b)| a != b).count();
    }
    let mean = flips as f64 / trials as f64;
    let sigma = (112.0 * 0.01 * 0.99 / trials as f64).sqrt();
    assert!((mean - 1.12).abs() < 3.0 * sigma, "mean flips {mean}");
}

#[test]
fn crossover_preserves_bit_multiset_per_locus() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let a = random_genome(37, &mut rng);
        let b = random_genome(37, &mut rng);
        let (x, y) = one_point_crossover(&a, &b, &mut rng);
        for i in 0..37 {
            let before = u8::from(a.bits[i]) + u8::from(b.bits[i]);
            let after = u8::from(x.bits[i]) + u8::from(y.bits[i]);
            assert_eq!(before, after);
        }
        let (p, q) = one_point_crossover(&a, &a, &mut rng);
        assert_eq!((p, q), (a.clone(), a.clone()));
    }
}

#[test]
fn nelder_mead_quadratic_bowl() {
    let c = [0.3, -1.7];
    let r = nelder_mead(|x: &[f64]| Ok((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2)), &[2.0, 2.0], &[1.0, 1.0], 200)
        .unwrap();
    assert!(r.evaluations < 200, "{} evaluations", r.evaluations);
    for (x, c) in r.best_values.iter().zip(c) {
        assert!((x - c).abs() < 1e-6, "{x} vs {c}");
    }
}

#[test]
fn nelder_mead_rosenbrock() {
    let rosen = |x: &[f64]| Ok(100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2));
    let r = nelder_mead(rosen, &[-1.2, 1.0], &[0.5, 0.5], 1500).unwrap();
    assert!(r.best_fitness < 1e-4, "f = {}", r.best_fitness);
}

#[test]
fn quasi_newton_recovers_quadratic_and_its_hessian() {
    // f = (x − c)ᵀ A (x − c) with A symmetric positive definite; Hessian 2A.
    let a = [[3.0, 0.5, 0.0], [0.5, 1.0, 0.2], [0.0, 0.2, 2.0]];
    let c = [1.0, -2.0, 0.5];
    let f = |x: &[f64]| {
        let d: Vec<f64> = x.iter().zip(c).map(|(x, c)| x - c).collect();
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += d[i] * a[i][j] * d[j];
            }
        }
        Ok(s)
    };
    let run = quasi_newton_fd(f, &[0.0, 0.0, 0.0], &[1e-4; 3], 500).unwrap();
    for (x, c) in run.record.best_values.iter().zip(c) {
        assert!((x - c).abs() < 1e-6, "{x} vs {c}");
    }
    for i in 0..3 {
        for j in 0..3 {
            assert!((run.hessian[i][j] - 2.0 * a[i][j]).abs() < 1e-3 * 6.0, "H[{i}][{j}] = {}", run.hessian[i][j]);
        }
    }
}

#[test]
fn finite_difference_gradient_matches_analytic() {
    let scale = 10.0;
    let h = [1e-4 * scale];
    for &x in &[-3.0, 0.0, 0.7, 4.2] {
        let mut f = |v: &[f64]| Ok(2.5 * v[0] * v[0] - 1.5 * v[0] + 0.25);
        let g = fd_gradient(&mut f, &[x], &h).unwrap();
        assert!((g[0] - (5.0 * x - 1.5)).abs() < 1e-6);
    }
}

#[test]
fn budget_is_never_exceeded() {
    let specs = bit_specs(30);
    for budget in [50, 77, 400] {
        let cfg = GaConfig { eval_budget: budget, seed: 4, ..GaConfig::default() };
        let r = ga_run(&cfg, &specs, onemax).unwrap();
        assert!(r.evaluations <= budget);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decode_is_a_retraction(lower in -1e3f64..1e3, width in 1e-6f64..1e4, code in 0u64..65536, bits in 1u32..=16) {
        let s = GeneSpec { name: "x".into(), lower, upper: lower + width, bits, integer: false };
        let code = code % (s.max_code() + 1);
        let d = s.decode_code(code);
        let k = s.encode_code(d).unwrap();
        prop_assert_eq!(s.decode_code(k), d);
        prop_assert!((s.decode_code(s.encode_code(d).unwrap()) - d).abs() <= s.resolution() / 2.0 + 1e-12 * width.max(lower.abs()));
    }

    #[test]
    fn integer_decode_is_a_retraction(lo in -100i64..100, span in 1i64..300, code in 0u64..1024) {
        let s = GeneSpec::integer("n", lo, lo + span);
        let d = s.decode_code(code % (s.max_code() + 1));
        prop_assert_eq!(s.decode(&s.encode(d).unwrap()), d);
    }

    #[test]
    fn operators_preserve_length(len in 2usize..200, seed in any::<u64>(), pm in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_genome(len, &mut rng);
        let b = random_genome(len, &mut rng);
        let (x, y) = one_point_crossover(&a, &b, &mut rng);
        prop_assert_eq!(x.len(), len);
        prop_assert_eq!(y.len(), len);
        prop_assert_eq!(flip_mutate(&x, pm, &mut rng).len(), len);
    }

    #[test]
    fn elitism_keeps_best_fitness_monotone(seed in any::<u64>()) {
        let specs = vec![GeneSpec::float("x", -2.0, 2.0), GeneSpec::float("y", -2.0, 2.0)];
        let cfg = GaConfig { seed, generations: 12, eval_budget: 600, ..GaConfig::default() };
        let r = ga_run(&cfg, &specs, |v| Ok(((v[0] - 0.3).powi(2) + (v[1] + 0.8).powi(2)).min(2.0) / 4.0)).unwrap();
        for w in r.history.windows(2) {
            prop_assert!(w[1].best_fitness <= w[0].best_fitness);
        }
    }

    #[test]
    fn seeded_runs_are_bit_identical(seed in any::<u64>()) {
        let specs = vec![GeneSpec::float("x", -2.0, 2.0), GeneSpec::integer("n", 11, 51)];
        let f = |v: &[f64]| Ok(((v[0] - 0.3).powi(2) + (v[1] - 30.0).powi(2) / 400.0).min(2.0));
        let cfg = GaConfig { seed, generations: 8, eval_budget: 400, ..GaConfig::default() };
        prop_assert_eq!(ga_run(&cfg, &specs, f).unwrap(), ga_run(&cfg, &specs, f).unwrap());
        prop_assert_eq!(random_search(100, &specs, f, seed).unwrap(), random_search(100, &specs, f, seed).unwrap());
    }
}
