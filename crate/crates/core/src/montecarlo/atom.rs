//! Two independent Monte Carlo estimators of the atom of the supremum at 0.

use super::rng::path_rng;
use super::{cpp, simulate_path, SimulationPlan};
use crate::error::{Error, Result};
use crate::model::Regularity;

/// Stream key separating the first-passage estimator from the path estimator.
const PASSAGE_STREAM: u64 = 1 << 63;

/// A binomial proportion with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proportion {
    pub value: f64,
    pub std_err: f64,
    pub samples: usize,
}

impl Proportion {
    pub fn from_counts(hits: usize, n: usize) -> Self {
        let p = hits as f64 / n as f64;
        Self { value: p, std_err: libm::sqrt(p * (1.0 - p) / n as f64), samples: n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomEstimate {
    /// Frequency of `sup_{s≤t} X_s = 0` on exactly simulated paths.
    pub sup_at_zero: Proportion,
    /// Frequency of `τ₀⁺ > t` from an independent first-passage simulation.
    pub no_passage: Proportion,
}

impl AtomEstimate {
    pub fn joint_std_err(&self) -> f64 {
        libm::sqrt(self.sup_at_zero.std_err.powi(2) + self.no_passage.std_err.powi(2))
    }

    /// Difference of the two estimators in joint standard errors.
    pub fn z_score(&self) -> f64 {
        let se = self.joint_std_err();
        if se == 0.0 {
            return if self.sup_at_zero.value == self.no_passage.value { 0.0 } else { f64::INFINITY };
        }
        (self.sup_at_zero.value - self.no_passage.value) / se
    }
}

/// Estimates `P(sup_{s≤t} X_s = 0) = d*·n(t<ζ)` for a Type 3 model in two independent ways.
pub fn atom_mass_estimate(plan: &SimulationPlan) -> Result<AtomEstimate> {
    if plan.model.regularity() != Regularity::Type3 {
        return Err(Error::Precondition("the supremum has an atom at 0 only for Type 3 models".into()));
    }
    let mut zero = 0usize;
    let mut none = 0usize;
    let params = plan.model.params();
    for i in 0..plan.paths {
        if simulate_path(plan, i as u64)?.sup_hat == 0.0 {
            zero += 1;
        }
        let mut rng = path_rng(plan.seed, PASSAGE_STREAM | i as u64);
        if cpp::first_passage_time(&params, plan.horizon, &mut rng)?.is_none() {
            none += 1;
        }
    }
    Ok(AtomEstimate {
        sup_at_zero: Proportion::from_counts(zero, plan.paths),
        no_passage: Proportion::from_counts(none, plan.paths),
    })
}
