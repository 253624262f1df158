//! Analytic laws against simulated samples.
//!
//! Every comparison takes samples grouped by grid level (coarse to fine, as
//! returned by [`crate::driver::simulate_levels`]) so that discretization
//! bias can be extrapolated away where no exact correction exists.

use levysup::jointlaw::arcsine_cdf;
use levysup::montecarlo::{atom_mass_estimate, cpp, independence_statistic, ks_statistic_restricted};
use levysup::montecarlo::{AtomEstimate, IndependenceReport, Proportion};
use levysup::{Error, JointLaw, ModelParams, Result, SimulationPlan, TripleSample};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// `P(X̄_t ≤ x)` interpolated linearly in `√x` on `[0, hi]`, exact beyond.
pub struct CdfTable<'a> {
    law: &'a JointLaw,
    hi: f64,
    values: Vec<f64>,
}

impl<'a> CdfTable<'a> {
    pub fn build(law: &'a JointLaw, hi: f64, nodes: usize) -> Result<Self> {
        if !(hi > 0.0 && hi.is_finite()) || nodes < 2 {
            return Err(Error::Domain(format!("table range must be positive with at least 2 nodes, got ({hi}, {nodes})")));
        }
        let last = (nodes - 1) as f64;
        let values = (0..nodes)
            .map(|k| {
                let u = k as f64 / last;
                law.sup_marginal_cdf(hi * u * u)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self { law, hi, values })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x > self.hi {
            return self.law.sup_marginal_cdf(x).unwrap_or(f64::NAN);
        }
        let pos = (x / self.hi).sqrt() * (self.values.len() - 1) as f64;
        let k = (pos.floor() as usize).min(self.values.len() - 2);
        let w = pos - k as f64;
        self.values[k] + w * (self.values[k + 1] - self.values[k])
    }
}

/// Nodes of the interpolated reference CDF in KS comparisons.
pub const CDF_TABLE_NODES: usize = 4001;

/// KS distances of the simulated supremum per grid level and their extrapolated limit.
#[derive(Debug, Clone, PartialEq)]
pub struct KsStudy {
    pub steps: Vec<u64>,
    pub distances: Vec<f64>,
    pub extrapolated: f64,
    /// Range the supremum of the distance is taken over.
    pub window: (f64, f64),
    pub paths: usize,
}

/// Empirical `q`-quantile of sorted data (lower order statistic).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let k = ((q * n as f64).ceil() as usize).clamp(1, n);
    sorted[k - 1]
}

fn sorted_by<F: Fn(&TripleSample) -> f64>(samples: &[TripleSample], f: F) -> Vec<f64> {
    let mut xs: Vec<f64> = samples.iter().map(f).collect();
    xs.sort_by(f64::total_cmp);
    xs
}

/// KS distance between the simulated `X̄_t` and the analytic law, per level.
///
/// With `restrict_quantile = Some(q)` the distance is taken over
/// `[0, empirical q-quantile]` of the finest level.
pub fn sup_ks(law: &JointLaw, levels: &[Vec<TripleSample>], restrict_quantile: Option<f64>) -> Result<KsStudy> {
    let finest = levels.last().filter(|l| !l.is_empty()).ok_or_else(|| Error::Domain("no samples to compare".into()))?;
    let sorted: Vec<Vec<f64>> = levels.iter().map(|l| sorted_by(l, |s| s.sup_hat)).collect();
    let top = sorted.last().unwrap();
    let window = match restrict_quantile {
        Some(q) if q > 0.0 && q < 1.0 => (0.0, quantile(top, q)),
        Some(q) => return Err(Error::Domain(format!("restriction quantile must lie in (0, 1), got {q}"))),
        None => (f64::NEG_INFINITY, f64::INFINITY),
    };
    let hi = if window.1.is_finite() { window.1 } else { quantile(top, 0.999) };
    let table = CdfTable::build(law, hi.max(1e-6), CDF_TABLE_NODES)?;
    let distances: Vec<f64> = sorted.iter().map(|xs| ks_statistic_restricted(xs, |x| table.eval(x), window.0, window.1)).collect();
    Ok(KsStudy {
        steps: levels.iter().map(|l| l.first().map_or(0, |s| s.n_steps)).collect(),
        extrapolated: crate::driver::extrapolate(&distances, None).max(0.0),
        distances,
        window,
        paths: finest.len(),
    })
}

/// KS distance between the simulated `g_t` and the generalized arcsine law with parameter `rho`.
pub fn arcsine_ks(samples: &[TripleSample], rho: f64, t: f64) -> f64 {
    let xs = sorted_by(samples, |s| s.g_hat);
    ks_statistic_restricted(&xs, |s| arcsine_cdf(rho, t, s.clamp(0.0, t)), f64::NEG_INFINITY, f64::INFINITY)
}

/// Atom of the supremum at 0 for a Type 3 model, checked two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomCheck {
    pub estimate: AtomEstimate,
    /// Frequency of `X̄_t > 0` on the simulated paths.
    pub continuous: Proportion,
    /// `continuous + atom − 1` in joint standard errors, the atom taken from
    /// the independent first-passage estimator.
    pub total_z: f64,
    /// Exact `P(τ₀⁺ > t)` when the model has upward exponential jumps.
    pub exact: Option<f64>,
}

pub fn atom_check(plan: &SimulationPlan) -> Result<AtomCheck> {
    let estimate = atom_mass_estimate(plan)?;
    let at_zero = estimate.sup_at_zero;
    let continuous = Proportion { value: 1.0 - at_zero.value, std_err: at_zero.std_err, samples: at_zero.samples };
    let se = estimate.joint_std_err();
    let gap = continuous.value + estimate.no_passage.value - 1.0;
    let total_z = if se > 0.0 { gap / se } else if gap == 0.0 { 0.0 } else { f64::INFINITY };
    let exact = match plan.model.params() {
        ModelParams::CompoundPoisson { rate, jump_mean, jump_sign, drift } if jump_sign.value() > 0.0 && drift < 0.0 => {
            Some(cpp::no_passage_probability(rate, jump_mean, -drift, plan.horizon))
        }
        _ => None,
    };
    Ok(AtomCheck { estimate, continuous, total_z, exact })
}

/// Pearson chi-square of the simulated `(g_t, X̄_t)` histogram against the joint law.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Expected cell probabilities, row-major in `(s, x)`.
    pub expected: Vec<f64>,
    /// Observed cell frequencies after grid extrapolation.
    pub observed: Vec<f64>,
    pub paths: usize,
}

fn cell_frequencies(samples: &[TripleSample], s_edges: &[f64], x_edges: &[f64]) -> Vec<f64> {
    let (ns, nx) = (s_edges.len() - 1, x_edges.len() - 1);
    let mut counts = vec![0u64; ns * nx];
    let bin = |edges: &[f64], v: f64| -> Option<usize> {
        let k = edges.partition_point(|&e| e <= v);
        if k == 0 {
            None
        } else if k < edges.len() {
            Some(k - 1)
        } else if v == edges[edges.len() - 1] {
            // Closed last bin.
            Some(edges.len() - 2)
        } else {
            None
        }
    };
    for s in samples {
        if let (Some(i), Some(j)) = (bin(s_edges, s.g_hat), bin(x_edges, s.sup_hat)) {
            counts[i * nx + j] += 1;
        }
    }
    counts.into_iter().map(|c| c as f64 / samples.len() as f64).collect()
}

/// Cells are `[s_i, s_{i+1}) × [x_j, x_{j+1})`. The time edges must span
/// `[0, t]`; a last level edge of `+∞` takes the time marginal of a
/// self-similar model minus the finite cells.
///
/// Frequencies from the two finest levels are combined by Richardson's rule
/// with the self-similar error rate `(n_fine/n_coarse)^{1/α}`.
pub fn joint_chi2(law: &JointLaw, levels: &[Vec<TripleSample>], s_edges: &[f64], x_edges: &[f64]) -> Result<ChiSquare> {
    let t = law.horizon();
    if s_edges.len() < 2 || x_edges.len() < 2 || s_edges[0] != 0.0 || s_edges[s_edges.len() - 1] != t || x_edges[0] < 0.0 {
        return Err(Error::Domain(format!("time edges must span [0, {t}] and level edges must be nonnegative")));
    }
    let finest = levels.last().filter(|l| !l.is_empty()).ok_or_else(|| Error::Domain("no samples to compare".into()))?;
    let (ns, nx) = (s_edges.len() - 1, x_edges.len() - 1);
    let open_end = x_edges[nx].is_infinite();
    let rho = law.model().scaling_rho();
    if open_end && rho.is_none() {
        return Err(Error::Unsupported("an infinite level edge needs a self-similar model".into()));
    }
    let mut expected = vec![0.0; ns * nx];
    for i in 0..ns {
        let (s0, s1) = (s_edges[i], s_edges[i + 1]);
        let finite = if open_end { nx - 1 } else { nx };
        for j in 0..finite {
            expected[i * nx + j] = law.cell_probability(s0, s1, x_edges[j], x_edges[j + 1])?;
        }
        if let (true, Some(r)) = (open_end, rho) {
            let row: f64 = expected[i * nx..i * nx + finite].iter().sum();
            expected[i * nx + nx - 1] = (arcsine_cdf(r, t, s1) - arcsine_cdf(r, t, s0) - row).max(0.0);
        }
    }
    let freqs: Vec<Vec<f64>> = levels.iter().map(|l| cell_frequencies(l, s_edges, x_edges)).collect();
    let observed: Vec<f64> = match (levels.len(), law.model().scaling_alpha()) {
        (n, Some(alpha)) if n >= 2 => {
            let ratio = (finest[0].n_steps as f64 / levels[n - 2][0].n_steps as f64).powf(1.0 / alpha);
            (0..ns * nx).map(|c| crate::driver::extrapolate(&[freqs[n - 2][c], freqs[n - 1][c]], Some(ratio))).collect()
        }
        _ => freqs[freqs.len() - 1].clone(),
    };
    let n = finest.len() as f64;
    let statistic: f64 = observed.iter().zip(&expected).map(|(o, e)| n * (o - e).powi(2) / e.max(f64::MIN_POSITIVE)).sum();
    let dof = ns * nx - 1;
    let p_value = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?.sf(statistic);
    Ok(ChiSquare { statistic, dof, p_value, expected, observed, paths: finest.len() })
}

/// `(g_t, X̄_t/g_t^{1/α}, (X̄_t − X_t)/(t − g_t)^{1/α})` for each sample with `0 < g_t < t`.
pub fn stable_factor_triples(samples: &[TripleSample], alpha: f64, t: f64) -> Vec<[f64; 3]> {
    let k = 1.0 / alpha;
    samples
        .iter()
        .filter(|s| s.g_hat > 0.0 && s.g_hat < t)
        .map(|s| [s.g_hat, s.sup_hat / s.g_hat.powf(k), (s.sup_hat - s.terminal) / (t - s.g_hat).powf(k)])
        .collect()
}

/// Permutation test of mutual independence of the stable triple factors.
pub fn factor_independence(samples: &[TripleSample], alpha: f64, t: f64, permutations: usize, seed: u64) -> Result<IndependenceReport> {
    independence_statistic(&stable_factor_triples(samples, alpha, t), permutations, seed)
}
