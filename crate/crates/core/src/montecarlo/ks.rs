//! Kolmogorov–Smirnov distances between an empirical and a reference law.

/// `sup_x |F_n(x) − F(x)|` for sorted `samples`.
///
/// Both one-sided limits are compared at every jump of `F_n`, so step
/// reference functions (including `F_n` itself) are handled exactly.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    ks_statistic_restricted(samples, cdf, f64::NEG_INFINITY, f64::INFINITY)
}

/// As [`ks_statistic`] with the supremum restricted to `[lo, hi]`.
pub fn ks_statistic_restricted<F: Fn(f64) -> f64>(samples: &[f64], cdf: F, lo: f64, hi: f64) -> f64 {
    let n = samples.len();
    if n == 0 {
        return 0.0;
    }
    debug_assert!(samples.windows(2).all(|w| w[0] <= w[1]), "samples must be sorted");
    let nf = n as f64;
    let mut d: f64 = 0.0;
    // Endpoint values of the restricted range.
    for x in [lo, hi] {
        if x.is_finite() {
            let k = samples.partition_point(|&v| v <= x);
            d = d.max((k as f64 / nf - cdf(x)).abs());
        }
    }
    let mut i = 0;
    while i < n {
        let x = samples[i];
        let mut j = i;
        while j < n && samples[j] == x {
            j += 1;
        }
        if x >= lo && x <= hi {
            let before = i as f64 / nf;
            let after = j as f64 / nf;
            d = d.max((after - cdf(x)).abs());
            if x > lo {
                d = d.max((before - cdf(x.next_down())).abs());
            }
        }
        i = j;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::rng::path_rng;
    use crate::montecarlo::sampler::open01;
    use alloc::vec::Vec;

    #[test]
    fn trivial_cases() {
        // A single sample at the median of U(0, 1).
        let d = ks_statistic(&[0.5], |x| x.clamp(0.0, 1.0));
        assert!((d - 0.5).abs() < 1e-15);
        let xs = [0.1, 0.2, 0.2, 0.7];
        let own = |x: f64| xs.iter().filter(|&&v| v <= x).count() as f64 / xs.len() as f64;
        assert_eq!(ks_statistic(&xs, own), 0.0);
    }

    #[test]
    fn calibration_over_seeds() {
        // Kolmogorov: P(√n·D > 1.95) ≈ 0.001; demand ≥ 99% of seeds below.
        let n = 100_000;
        let mut pass = 0;
        let seeds = 200;
        for seed in 0..seeds {
            let mut rng = path_rng(seed, 0);
            let mut xs: Vec<f64> = (0..n).map(|_| open01(&mut rng)).collect();
            xs.sort_by(f64::total_cmp);
            if ks_statistic(&xs, |x| x.clamp(0.0, 1.0)) < 1.95 / libm::sqrt(n as f64) {
                pass += 1;
            }
        }
        assert!(pass as f64 >= 0.99 * seeds as f64, "{pass}/{seeds}");
    }
}
