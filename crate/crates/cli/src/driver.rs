//! Parallel Monte Carlo over the path index.
//!
//! Every path is a pure function of `(plan, index)` and results are collected
//! in index order, so the worker count never changes an output.

use levysup::montecarlo::{simulate_path, simulate_path_levels};
use levysup::{Result, SimulationPlan, TripleSample};
use rayon::prelude::*;

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("thread pool")
}

/// All paths of the plan, in index order.
pub fn simulate(plan: &SimulationPlan) -> Result<Vec<TripleSample>> {
    pool(plan.workers).install(|| (0..plan.paths as u64).into_par_iter().map(|i| simulate_path(plan, i)).collect())
}

/// All paths of the plan observed on the nested grids `levels` (step counts
/// dividing `plan.steps`). Returns one sample vector per level.
pub fn simulate_levels(plan: &SimulationPlan, levels: &[usize]) -> Result<Vec<Vec<TripleSample>>> {
    let per_path: Vec<Vec<TripleSample>> = pool(plan.workers).install(|| {
        (0..plan.paths as u64).into_par_iter().map(|i| simulate_path_levels(plan, i, levels)).collect::<Result<_>>()
    })?;
    let mut out = vec![Vec::with_capacity(plan.paths); levels.len()];
    for path in per_path {
        for (l, s) in path.into_iter().enumerate() {
            out[l].push(s);
        }
    }
    Ok(out)
}

/// Limit of a sequence observed on geometrically refined grids.
///
/// With three or more levels the last three values are accelerated by
/// Aitken's Δ² rule when they converge monotonically; otherwise, and with
/// fewer levels, the finest value is returned. With exactly two levels and a
/// known error rate `ratio` per refinement, Richardson's rule is used.
pub fn extrapolate(values: &[f64], ratio: Option<f64>) -> f64 {
    let n = values.len();
    match (n, ratio) {
        (0, _) => f64::NAN,
        (1, _) => values[0],
        (_, Some(r)) if r > 1.0 => (r * values[n - 1] - values[n - 2]) / (r - 1.0),
        (2, _) => values[1],
        _ => {
            let (a, b, c) = (values[n - 3], values[n - 2], values[n - 1]);
            let (d1, d2) = (b - a, c - b);
            if d1 != 0.0 && d1.signum() == d2.signum() && d2.abs() < d1.abs() {
                let q = d2 / d1;
                c + d2 * q / (1.0 - q)
            } else {
                c
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use levysup::ProcessModel;

    #[test]
    fn worker_count_does_not_change_samples() {
        let plan = SimulationPlan::new(ProcessModel::cauchy(), 1.0, 64, 100, 9).unwrap();
        let a = simulate(&plan.clone().with_workers(1)).unwrap();
        let b = simulate(&plan.with_workers(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn levels_are_nested() {
        let plan = SimulationPlan::new(ProcessModel::stable(1.5, 0.5).unwrap(), 1.0, 32, 1000, 4).unwrap();
        let lv = simulate_levels(&plan, &[10, 100, 1000]).unwrap();
        for i in 0..32 {
            assert!(lv[0][i].sup_hat <= lv[1][i].sup_hat && lv[1][i].sup_hat <= lv[2][i].sup_hat);
            assert_eq!(lv[2][i], simulate_path(&plan, i as u64).unwrap());
        }
    }

    #[test]
    fn extrapolation_recovers_geometric_limits() {
        let seq: Vec<f64> = (0..3).map(|k| 2.0 + 0.5f64.powi(k)).collect();
        assert!((extrapolate(&seq, None) - 2.0).abs() < 1e-14);
        assert!((extrapolate(&seq[1..], Some(2.0)) - 2.0).abs() < 1e-14);
        assert_eq!(extrapolate(&[1.0, 2.0, 1.5], None), 1.5);
    }
}
