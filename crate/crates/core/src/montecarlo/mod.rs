//! Brute-force path simulation: the independent oracle for the analytic laws.
//!
//! Each path is a pure function of `(plan, path index)`, so any partition of
//! the paths over workers reproduces the same samples.

pub mod atom;
pub mod cpp;
pub mod histogram;
pub mod independence;
pub mod ks;
pub mod rng;
pub mod sampler;

use alloc::vec::Vec;

pub use atom::{atom_mass_estimate, AtomEstimate, Proportion};
pub use histogram::{empirical_distribution, Coordinate, Histogram, Histogram2d};
pub use independence::{independence_statistic, IndependenceReport};
pub use ks::{ks_statistic, ks_statistic_restricted};

use crate::error::{domain, Result};
use crate::model::{ModelParams, ProcessModel};
use rng::path_rng;

/// One simulated realization of `(g_t, sup_{s≤t} X_s, X_t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleSample {
    /// Time of the (grid) maximum, first occurrence on ties.
    pub g_hat: f64,
    pub sup_hat: f64,
    pub terminal: f64,
    /// Grid steps used; compound Poisson paths are exact and report the plan's value.
    pub n_steps: u64,
    /// Whether the supremum includes the exact Brownian-bridge correction.
    pub bridge_corrected: bool,
}

impl TripleSample {
    /// `sup − terminal`.
    pub fn reflected(&self) -> f64 {
        self.sup_hat - self.terminal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    pub model: ProcessModel,
    pub horizon: f64,
    pub paths: usize,
    pub steps: usize,
    pub seed: u64,
    /// Parallelism hint for drivers; never affects results.
    pub workers: usize,
    /// Use the exact bridge maximum per cell for Gaussian models.
    pub bridge_correction: bool,
}

impl SimulationPlan {
    pub fn new(model: ProcessModel, horizon: f64, paths: usize, steps: usize, seed: u64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(domain!("horizon must be positive, got {horizon}"));
        }
        if paths == 0 || steps == 0 {
            return Err(domain!("paths and steps must be at least 1"));
        }
        Ok(Self { model, horizon, paths, steps, seed, workers: 1, bridge_correction: true })
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn without_bridge_correction(mut self) -> Self {
        self.bridge_correction = false;
        self
    }
}

enum Kernel {
    Gaussian { drift: f64, var: f64 },
    Cauchy,
    Stable { alpha: f64, rho: f64 },
    Cpp,
}

fn kernel(model: &ProcessModel) -> Kernel {
    match model.params() {
        ModelParams::Brownian { drift } => Kernel::Gaussian { drift, var: 1.0 },
        ModelParams::Cauchy => Kernel::Cauchy,
        ModelParams::Stable { alpha, .. } if alpha == 2.0 => Kernel::Gaussian { drift: 0.0, var: 2.0 },
        ModelParams::Stable { alpha, rho } => Kernel::Stable { alpha, rho },
        ModelParams::SpectrallyNegative { alpha } => Kernel::Stable { alpha, rho: 1.0 / alpha },
        ModelParams::CompoundPoisson { .. } => Kernel::Cpp,
    }
}

/// Simulates path `index` of the plan.
pub fn simulate_path(plan: &SimulationPlan, index: u64) -> Result<TripleSample> {
    let mut rng = path_rng(plan.seed, index);
    let n = plan.steps;
    let h = plan.horizon / n as f64;
    let k = kernel(&plan.model);
    if let Kernel::Cpp = k {
        let (g, s, x) = cpp::sup_triple(&plan.model.params(), plan.horizon, &mut rng)?;
        return Ok(TripleSample { g_hat: g, sup_hat: s, terminal: x, n_steps: n as u64, bridge_corrected: false });
    }
    if let (Kernel::Gaussian { drift, var }, true) = (&k, plan.bridge_correction) {
        let (mean, sd) = (drift * h, libm::sqrt(var * h));
        let (mut x, mut sup, mut g) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let next = x + mean + sd * sampler::normal(&mut rng);
            let m = sampler::bridge_max(x, next, h, *var, &mut rng);
            if m > sup {
                sup = m;
                // The bridge maximum's position is not sampled; report the cell midpoint.
                g = (i as f64 + 0.5) * h;
            }
            x = next;
        }
        return Ok(TripleSample { g_hat: g, sup_hat: sup, terminal: x, n_steps: n as u64, bridge_corrected: true });
    }
    let out = simulate_levels(plan, &k, &mut rng, &[n])?;
    Ok(out[0])
}

/// Simulates path `index` once on the plan's grid and reports the grid
/// maxima for each coarser level; every entry of `levels` must divide `plan.steps`.
///
/// The grids are nested, so the reported suprema are nondecreasing in the level's step count.
pub fn simulate_path_levels(plan: &SimulationPlan, index: u64, levels: &[usize]) -> Result<Vec<TripleSample>> {
    if levels.iter().any(|&l| l == 0 || plan.steps % l != 0) {
        return Err(domain!("refinement levels must divide the fine step count {}", plan.steps));
    }
    let k = kernel(&plan.model);
    if let Kernel::Cpp = k {
        return Err(domain!("compound Poisson paths are exact; grid levels do not apply"));
    }
    let mut rng = path_rng(plan.seed, index);
    simulate_levels(plan, &k, &mut rng, levels)
}

fn simulate_levels(plan: &SimulationPlan, k: &Kernel, rng: &mut rng::PathRng, levels: &[usize]) -> Result<Vec<TripleSample>> {
    let n = plan.steps;
    let h = plan.horizon / n as f64;
    let strides: Vec<usize> = levels.iter().map(|&l| n / l).collect();
    let mut sup = alloc::vec![0.0f64; levels.len()];
    let mut arg = alloc::vec![0usize; levels.len()];
    let mut countdown = strides.clone();
    let mut x = 0.0;
    // Increment = shift + scale·(unit draw).
    let (shift, scale) = match *k {
        Kernel::Gaussian { drift, var } => (drift * h, libm::sqrt(var * h)),
        Kernel::Stable { alpha, .. } => (0.0, libm::pow(h, 1.0 / alpha)),
        _ => (0.0, h),
    };
    for i in 1..=n {
        let unit = match *k {
            Kernel::Gaussian { .. } => sampler::normal(rng),
            Kernel::Cauchy => sampler::cauchy_unit(rng),
            Kernel::Stable { alpha, rho } => sampler::stable_unit(alpha, rho, rng),
            Kernel::Cpp => unreachable!("handled by the event-driven simulator"),
        };
        x += shift + scale * unit;
        for l in 0..strides.len() {
            countdown[l] -= 1;
            if countdown[l] == 0 {
                countdown[l] = strides[l];
                if x > sup[l] {
                    sup[l] = x;
                    arg[l] = i;
                }
            }
        }
    }
    Ok(levels
        .iter()
        .enumerate()
        .map(|(l, &steps)| TripleSample {
            g_hat: arg[l] as f64 * h,
            sup_hat: sup[l],
            terminal: x,
            n_steps: steps as u64,
            bridge_corrected: false,
        })
        .collect())
}

/// All paths of the plan, in path-index order.
pub fn simulate_sup_triple(plan: &SimulationPlan) -> Result<Vec<TripleSample>> {
    simulate_range(plan, 0, plan.paths as u64)
}

/// Paths `start..end` of the plan, in order.
pub fn simulate_range(plan: &SimulationPlan, start: u64, end: u64) -> Result<Vec<TripleSample>> {
    (start..end).map(|i| simulate_path(plan, i)).collect()
}
