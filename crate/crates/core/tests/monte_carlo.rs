//! Monte Carlo contracts: determinism, nested-grid monotonicity, exactness of compound Poisson paths.

use levysup::montecarlo::{simulate_path, simulate_path_levels, simulate_range, simulate_sup_triple};
use levysup::{JumpSign, ProcessModel, SimulationPlan};
use proptest::prelude::*;

#[test]
fn bridge_corrected_supremum_is_unbiased() {
    let plan = SimulationPlan::new(ProcessModel::brownian(0.0).unwrap(), 1.0, 200_000, 8, 3).unwrap();
    let xs: Vec<f64> = simulate_sup_triple(&plan).unwrap().iter().map(|s| s.sup_hat).collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    // E sup_{s≤1} B_s = E|N(0,1)| = √(2/π).
    let want = (2.0 / std::f64::consts::PI).sqrt();
    assert!((mean - want).abs() < 4.0 * (var / n).sqrt(), "{mean} vs {want}");
}

#[test]
fn samples_respect_the_pathwise_order() {
    for m in [ProcessModel::cauchy(), ProcessModel::brownian(-0.3).unwrap(), ProcessModel::compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0).unwrap()] {
        let plan = SimulationPlan::new(m, 2.0, 500, 200, 1).unwrap();
        for s in simulate_sup_triple(&plan).unwrap() {
            assert!(s.sup_hat >= s.terminal.max(0.0));
            assert!((0.0..=2.0).contains(&s.g_hat));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn results_do_not_depend_on_partitioning(seed in any::<u64>(), split in 1u64..40) {
        let plan = SimulationPlan::new(ProcessModel::stable(1.3, 0.5).unwrap(), 1.0, 40, 64, seed).unwrap();
        let whole = simulate_sup_triple(&plan).unwrap();
        let mut parts = simulate_range(&plan, 0, split).unwrap();
        parts.extend(simulate_range(&plan, split, 40).unwrap());
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn refining_the_grid_never_lowers_the_maximum(seed in any::<u64>(), path in 0u64..1000) {
        let plan = SimulationPlan::new(ProcessModel::cauchy(), 1.0, 1, 512, seed).unwrap();
        let lv = simulate_path_levels(&plan, path, &[1, 2, 4, 8, 16, 32, 64, 128, 256, 512]).unwrap();
        for w in lv.windows(2) {
            prop_assert!(w[0].sup_hat <= w[1].sup_hat);
            prop_assert_eq!(w[0].terminal, w[1].terminal);
        }
    }

    #[test]
    fn compound_poisson_paths_ignore_the_grid(seed in any::<u64>(), path in 0u64..1000, steps in 1usize..5000) {
        let m = ProcessModel::compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0).unwrap();
        let a = simulate_path(&SimulationPlan::new(m.clone(), 1.0, 1, 1, seed).unwrap(), path).unwrap();
        let b = simulate_path(&SimulationPlan::new(m, 1.0, 1, steps, seed).unwrap(), path).unwrap();
        prop_assert_eq!((a.g_hat, a.sup_hat, a.terminal), (b.g_hat, b.sup_hat, b.terminal));
    }
}
