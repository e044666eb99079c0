//! Comparison searches: uniform random sampling, Nelder–Mead simplex and a
//! finite-difference BFGS.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::encoding::GeneSpec;
use super::record::{GenerationStats, RunFailure, RunRecord};
use crate::Error;

/// Random-search history is summarized in batches of this many samples.
pub const RANDOM_BATCH: usize = 50;

fn call<F>(objective: &mut F, x: &[f64], record: &RunRecord) -> Result<f64, RunFailure>
where
    F: FnMut(&[f64]) -> Result<f64, Error>,
{
    match objective(x) {
        Ok(f) if f.is_finite() => Ok(f),
        Ok(f) => Err(RunFailure { error: Error::Numerical(format!("non-finite objective {f}")), partial: record.clone() }),
        Err(e) => Err(RunFailure { error: e, partial: record.clone() }),
    }
}

/// A uniform point in the gene box; integer genes get uniform integers.
pub fn sample_uniform<R: Rng + ?Sized>(specs: &[GeneSpec], rng: &mut R) -> Vec<f64> {
    specs
        .iter()
        .map(|s| {
            if s.integer {
                rng.gen_range(s.lower as i64..=s.upper as i64) as f64
            } else {
                rng.gen_range(s.lower..=s.upper)
            }
        })
        .collect()
}

pub fn random_search<F>(budget: usize, specs: &[GeneSpec], mut objective: F, seed: u64) -> Result<RunRecord, RunFailure>
where
    F: FnMut(&[f64]) -> Result<f64, Error>,
{
    let mut record = RunRecord::new("random", seed);
    if let Err(e) = specs.iter().try_for_each(GeneSpec::validate) {
        return Err(RunFailure { error: e, partial: record });
    }
    if budget == 0 {
        return Err(RunFailure { error: Error::InvalidInput("budget must be at least 1".into()), partial: record });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut batch = Vec::with_capacity(RANDOM_BATCH);
    for i in 0..budget {
        let x = sample_uniform(specs, &mut rng);
        let f = call(&mut objective, &x, &record)?;
        record.evaluations += 1;
        record.offer(f, || x, || None);
        batch.push(f);
        if batch.len() == RANDOM_BATCH || i + 1 == budget {
            record.history.push(GenerationStats {
                generation: record.history.len(),
                best_fitness: batch.iter().copied().fold(f64::INFINITY, f64::min),
                mean_fitness: batch.iter().sum::<f64>() / batch.len() as f64,
                evaluations: record.evaluations,
            });
            batch.clear();
        }
    }
    Ok(record)
}

/// Nelder–Mead simplex (reflection 1, expansion 2, contraction ½, shrink ½).
///
/// The initial simplex is `x0` plus `steps[i]` along each axis. Stops when the
/// budget is spent or the simplex has collapsed in both f and x.
pub fn nelder_mead<F>(mut objective: F, x0: &[f64], steps: &[f64], budget: usize) -> Result<RunRecord, RunFailure>
where
    F: FnMut(&[f64]) -> Result<f64, Error>,
{
    let mut record = RunRecord::new("nelder_mead", 0);
    let n = x0.len();
    if n == 0 || steps.len() != n || budget < n + 1 {
        let e = Error::InvalidInput(format!("nelder_mead needs {n} steps and a budget of at least {}", n + 1));
        return Err(RunFailure { error: e, partial: record });
    }
    let xtol = 1e-9 * steps.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let ftol = 1e-15;

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut x = x0.to_vec();
        if i > 0 {
            x[i - 1] += steps[i - 1];
        }
        let f = call(&mut objective, &x, &record)?;
        record.evaluations += 1;
        record.offer(f, || x.clone(), || None);
        simplex.push((x, f));
    }

    let mut iter = 0;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        record.history.push(GenerationStats {
            generation: iter,
            best_fitness: simplex[0].1,
            mean_fitness: simplex.iter().map(|s| s.1).sum::<f64>() / (n + 1) as f64,
            evaluations: record.evaluations,
        });
        iter += 1;
        let fspread = simplex[n].1 - simplex[0].1;
        let xspread = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0f64, f64::max);
        if fspread <= ftol * (1.0 + simplex[0].1.abs()) && xspread <= xtol {
            break;
        }
        if record.evaluations >= budget {
            break;
        }

        let centroid: Vec<f64> =
            (0..n).map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (c - w)).collect() };

        let mut eval = |x: &Vec<f64>, record: &mut RunRecord| -> Result<f64, RunFailure> {
            let f = call(&mut objective, x, record)?;
            record.evaluations += 1;
            record.offer(f, || x.clone(), || None);
            Ok(f)
        };

        let xr = along(1.0);
        let fr = eval(&xr, &mut record)?;
        if fr < simplex[0].1 {
            if record.evaluations < budget {
                let xe = along(2.0);
                let fe = eval(&xe, &mut record)?;
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else {
                simplex[n] = (xr, fr);
            }
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        if record.evaluations >= budget {
            break;
        }
        let (xc, fc) = if fr < simplex[n].1 {
            let xc = along(0.5);
            let fc = eval(&xc, &mut record)?;
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = eval(&xc, &mut record)?;
            (xc, fc)
        };
        if fc < fr.min(simplex[n].1) {
            simplex[n] = (xc, fc);
            continue;
        }
        // Shrink towards the best vertex.
        let best = simplex[0].0.clone();
        for k in 1..=n {
            if record.evaluations >= budget {
                break;
            }
            let x: Vec<f64> = best.iter().zip(&simplex[k].0).map(|(b, v)| b + 0.5 * (v - b)).collect();
            let f = eval(&x, &mut record)?;
            simplex[k] = (x, f);
        }
    }
    Ok(record)
}

/// Central-difference gradient with per-coordinate step `h`.
pub fn fd_gradient<F>(objective: &mut F, x: &[f64], h: &[f64]) -> Result<Vec<f64>, Error>
where
    F: FnMut(&[f64]) -> Result<f64, Error>,
{
    let mut g = vec![0.0; x.len()];
    let mut y = x.to_vec();
    for i in 0..x.len() {
        y[i] = x[i] + h[i];
        let fp = objective(&y)?;
        y[i] = x[i] - h[i];
        let fm = objective(&y)?;
        y[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h[i]);
    }
    Ok(g)
}

/// Outcome of [`quasi_newton_fd`]: the run and the final curvature model.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiNewtonRun {
    pub record: RunRecord,
    /// BFGS approximation of the Hessian at the last iterate.
    pub hessian: Vec<Vec<f64>>,
}

fn cholesky_solve(b: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = b[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        y[i] = (rhs[i] - (0..i).map(|k| l[i][k] * y[k]).sum::<f64>()) / l[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        x[i] = (y[i] - ((i + 1)..n).map(|k| l[k][i] * x[k]).sum::<f64>()) / l[i][i];
    }
    Some(x)
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

/// BFGS on central-difference gradients with a line search that is exact on
/// quadratics (one interpolation step after the trial step). A curvature
/// model that is not positive definite is reset to the identity.
pub fn quasi_newton_fd<F>(mut objective: F, x0: &[f64], h: &[f64], budget: usize) -> Result<QuasiNewtonRun, RunFailure>
where
    F: FnMut(&[f64]) -> Result<f64, Error>,
{
    let n = x0.len();
    let mut record = RunRecord::new("quasi_newton", 0);
    if n == 0 || h.len() != n || h.iter().any(|&v| !(v > 0.0)) {
        let e = Error::InvalidInput("quasi_newton_fd needs one positive step per coordinate".into());
        return Err(RunFailure { error: e, partial: record });
    }
    let mut counted = |x: &[f64], record: &mut RunRecord| -> Result<f64, RunFailure> {
        let f = call(&mut objective, x, record)?;
        record.evaluations += 1;
        record.offer(f, || x.to_vec(), || None);
        Ok(f)
    };
    let grad = |x: &[f64], record: &mut RunRecord, counted: &mut dyn FnMut(&[f64], &mut RunRecord) -> Result<f64, RunFailure>| {
        let mut g = vec![0.0; n];
        let mut y = x.to_vec();
        for i in 0..n {
            y[i] = x[i] + h[i];
            let fp = counted(&y, record)?;
            y[i] = x[i] - h[i];
            let fm = counted(&y, record)?;
            y[i] = x[i];
            g[i] = (fp - fm) / (2.0 * h[i]);
        }
        Ok::<_, RunFailure>(g)
    };

    let mut b = identity(n);
    let mut x = x0.to_vec();
    let mut f = counted(&x, &mut record)?;
    if record.evaluations + 2 * n > budget {
        return Ok(QuasiNewtonRun { record, hessian: b });
    }
    let mut g = grad(&x, &mut record, &mut counted)?;
    let gtol = 1e-12;
    let mut iter = 0;
    loop {
        record.history.push(GenerationStats {
            generation: iter,
            best_fitness: f,
            mean_fitness: f,
            evaluations: record.evaluations,
        });
        iter += 1;
        if g.iter().all(|v| v.abs() <= gtol) || record.evaluations + 2 >= budget {
            break;
        }
        let neg: Vec<f64> = g.iter().map(|v| -v).collect();
        let p = match cholesky_solve(&b, &neg) {
            Some(p) => p,
            None => {
                b = identity(n);
                neg.clone()
            }
        };
        let slope: f64 = g.iter().zip(&p).map(|(a, b)| a * b).sum();
        if !(slope < 0.0) {
            b = identity(n);
            continue;
        }
        let at = |t: f64| -> Vec<f64> { x.iter().zip(&p).map(|(xi, pi)| xi + t * pi).collect() };

        // Trial step, then the minimizer of the interpolating parabola.
        let mut t = 1.0;
        let mut ft = counted(&at(t), &mut record)?;
        let curv = ft - f - slope * t;
        if curv > 0.0 && record.evaluations < budget {
            let ts = -slope * t * t / (2.0 * curv);
            if (ts - t).abs() > 1e-3 * t {
                let fs = counted(&at(ts), &mut record)?;
                if fs < ft {
                    t = ts;
                    ft = fs;
                }
            }
        }
        while ft > f + 1e-4 * t * slope && record.evaluations < budget {
            t *= 0.25;
            ft = counted(&at(t), &mut record)?;
            if t < 1e-12 {
                break;
            }
        }
        if !(ft < f) {
            break;
        }
        let x_new = at(t);
        if record.evaluations + 2 * n > budget {
            break;
        }
        let g_new = grad(&x_new, &mut record, &mut counted)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-300 {
            let bs: Vec<f64> = (0..n).map(|i| (0..n).map(|j| b[i][j] * s[j]).sum()).collect();
            let sbs: f64 = s.iter().zip(&bs).map(|(a, b)| a * b).sum();
            for i in 0..n {
                for j in 0..n {
                    b[i][j] += y[i] * y[j] / sy - bs[i] * bs[j] / sbs;
                }
            }
        } else {
            b = identity(n);
        }
        x = x_new;
        f = ft;
        g = g_new;
    }
    Ok(QuasiNewtonRun { record, hessian: b })
}
