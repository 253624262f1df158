//! Law of the triple `(g_t, X̄_t, X̄_t − X_t)` built from the entrance laws.
//!
//! The absolutely continuous part has density `q*_s(x)·q_{t−s}(y)` on
//! `(0,t)×(0,∞)²`. Atoms are kept apart: `d·δ_t(ds) q*_t(dx) δ_0(dy)` for
//! type 2 models and `d*·δ_0(ds) δ_0(dx) q_t(dy)` for type 3 models.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use once_cell::race::OnceBox;

use crate::entrance::{CumulativeTable, EntranceLaw, Side};
use crate::error::{domain, unsupported, Result};
use crate::model::{Family, ProcessModel, Regularity};
use crate::quad::{integrate, integrate_to_infinity, QuadratureConfig};
use crate::special::{gamma, sin_pi};
use crate::stable;

/// One atom of the joint law, carried by the entrance law on `side`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    /// `d` for the atom at `s = t`, `d*` for the atom at `s = 0`.
    pub weight: f64,
    /// Side whose entrance law spreads the atom: `Infimum` (`q*_t`, over `x`)
    /// for the end atom, `Supremum` (`q_t`, over `y`) for the start atom.
    pub side: Side,
    /// `weight` times the mass of the entrance law at time `t`.
    pub mass: f64,
}

/// The two atom descriptors; at most one is present.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Atoms {
    /// `d·δ_t(ds) q*_t(dx) δ_0(dy)`, type 2 only.
    pub end: Option<Atom>,
    /// `d*·δ_0(ds) δ_0(dx) q_t(dy)`, type 3 only.
    pub start: Option<Atom>,
}

impl Atoms {
    pub fn total_mass(&self) -> f64 {
        self.end.map_or(0.0, |a| a.mass) + self.start.map_or(0.0, |a| a.mass)
    }
}

/// Joint law of `(g_t, X̄_t, X̄_t − X_t)` at a fixed horizon.
#[derive(Debug, Clone)]
pub struct JointLaw {
    model: ProcessModel,
    t: f64,
    /// `q`, the supremum-side entrance law.
    up: EntranceLaw,
    /// `q*`, the infimum-side entrance law.
    down: EntranceLaw,
    quad: QuadratureConfig,
    down_table: Arc<OnceBox<Arc<CumulativeTable>>>,
}

impl JointLaw {
    pub fn new(model: ProcessModel, t: f64, quad: QuadratureConfig) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(domain!("horizon must be positive and finite, got {t}"));
        }
        let (up, down) = EntranceLaw::pair(&model, quad)?;
        Ok(Self { model, t, up, down, quad, down_table: Arc::new(OnceBox::new()) })
    }

    pub fn model(&self) -> &ProcessModel {
        &self.model
    }
    pub fn horizon(&self) -> f64 {
        self.t
    }
    pub fn supremum_law(&self) -> &EntranceLaw {
        &self.up
    }
    pub fn infimum_law(&self) -> &EntranceLaw {
        &self.down
    }

    /// Density of the absolutely continuous part at `(s, x, y)`, `0 < s < t`.
    pub fn density(&self, s: f64, x: f64, y: f64) -> Result<f64> {
        joint_density(self, s, x, y)
    }

    /// Density in the coordinates `(g_t, X̄_t, X_t)`; the map `y = x − z` has
    /// unit Jacobian.
    pub fn density_terminal(&self, s: f64, x: f64, z: f64) -> Result<f64> {
        if z > x {
            return Ok(0.0);
        }
        self.density(s, x, x - z)
    }

    pub fn atoms(&self) -> Result<Atoms> {
        let mut atoms = Atoms::default();
        match self.model.regularity() {
            Regularity::Type1 => {}
            Regularity::Type2 => {
                let d = self.model.ladder_drift();
                atoms.end = Some(Atom { weight: d, side: Side::Infimum, mass: d * self.down.lifetime_tail(self.t)? });
            }
            Regularity::Type3 => {
                let d = self.model.ladder_drift_star();
                atoms.start = Some(Atom { weight: d, side: Side::Supremum, mass: d * self.up.lifetime_tail(self.t)? });
            }
        }
        Ok(atoms)
    }

    /// Mass of the absolutely continuous part, integrating the density over
    /// `x` and `y` numerically for each `s` (the lifetime tail stands in on a
    /// side without a density).
    pub fn density_mass(&self) -> Result<f64> {
        let inner = |law: &EntranceLaw, u: f64| -> Result<f64> {
            if !law.has_density() {
                return law.lifetime_tail(u);
            }
            let scale = self.space_scale(u);
            let cfg = self.quad;
            let f = |x: f64| law.density(u, x).unwrap_or(f64::NAN);
            Ok(integrate(f, 0.0, scale, &cfg).value + integrate_to_infinity(f, scale, scale, &cfg).value)
        };
        if !self.down.has_density() && !self.up.has_density() {
            return Err(unsupported!("no entrance density for {}", self.model.to_text()));
        }
        let mut failure = None;
        let value = self.integrate_time(&[], |s, r| match (inner(&self.down, s), inner(&self.up, r)) {
            (Ok(a), Ok(b)) => a * b,
            (Err(e), _) | (_, Err(e)) => {
                failure.get_or_insert(e);
                0.0
            }
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(value),
        }
    }

    /// Density mass plus atoms; 1 for a correct law.
    pub fn total_mass(&self) -> Result<f64> {
        Ok(self.density_mass()? + self.atoms()?.total_mass())
    }

    /// Density of `X̄_t` at `x > 0`: `∫_0^t n(t−s<ζ) q*_s(x) ds + d·q*_t(x)`.
    pub fn sup_marginal(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(domain!("supremum density is defined for x > 0, got {x}"));
        }
        if !self.down.has_density() {
            return Err(unsupported!("no infimum-side entrance density for {}", self.model.to_text()));
        }
        let breaks = self.peak_breaks(x);
        let value = self.integrate_time(&breaks, |s, r| {
            let n = self.up.lifetime_tail(r).unwrap_or(0.0);
            n * self.down.density(s, x).unwrap_or(0.0)
        });
        let end = self.model.ladder_drift() * self.down.density(self.t, x)?;
        Ok((value + end).max(0.0))
    }

    /// `P(X̄_t = 0) = d*·n(t<ζ)`.
    pub fn sup_atom(&self) -> Result<f64> {
        Ok(self.atoms()?.start.map_or(0.0, |a| a.mass))
    }

    /// `P(X̄_t ≤ x)`, including the atom at 0.
    pub fn sup_marginal_cdf(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Ok(0.0);
        }
        let atom = self.sup_atom()?;
        if x == 0.0 {
            return Ok(atom);
        }
        if x == f64::INFINITY {
            return Ok(1.0);
        }
        let cum = self.down_cumulative()?;
        let breaks = self.peak_breaks(x);
        let value = self.integrate_time(&breaks, |s, r| self.up.lifetime_tail(r).unwrap_or(0.0) * cum(s, x));
        let end = self.model.ladder_drift() * cum(self.t, x);
        Ok((atom + value + end).clamp(0.0, 1.0))
    }

    /// `P(g_t ∈ [s0, s1], X̄_t ∈ [x0, x1])` over the density part, `0 < x0 < x1`.
    pub fn cell_probability(&self, s0: f64, s1: f64, x0: f64, x1: f64) -> Result<f64> {
        if !(0.0 <= s0 && s0 < s1 && s1 <= self.t && 0.0 <= x0 && x0 < x1) {
            return Err(domain!("invalid cell [{s0}, {s1}] x [{x0}, {x1}]"));
        }
        let cum = self.down_cumulative()?;
        let f = |s: f64, r: f64| self.up.lifetime_tail(r).unwrap_or(0.0) * (cum(s, x1) - cum(s, x0));
        // Reuse the endpoint-aware time integrator on the sub-interval.
        let sub = SubInterval { lo: s0, hi: s1, t: self.t, rho: self.local_rho() };
        let mut breaks = self.peak_breaks(x0.max(1e-300));
        breaks.extend(self.peak_breaks(x1));
        Ok(sub.integrate(&breaks, f, &self.quad).max(0.0))
    }

    /// Density of `g_t`, type 1 models only: `n*(s<ζ)·n(t−s<ζ)`.
    pub fn gt_density(&self, s: f64) -> Result<f64> {
        gt_density(&self.model, self.t, s)
    }

    /// `Q*_s(x) = ∫_0^x q*_s`, tabulated for self-similar models.
    fn down_cumulative(&self) -> Result<impl Fn(f64, f64) -> f64 + '_> {
        if !self.down.has_density() {
            return Err(unsupported!("no infimum-side entrance density for {}", self.model.to_text()));
        }
        // Brownian motion has a closed-form cumulative.
        let scaling = self.scaling().filter(|_| self.model.family() != Family::BrownianWithDrift);
        let table = match scaling {
            Some(_) => Some(match self.down_table.get() {
                Some(t) => t,
                None => {
                    let built = CumulativeTable::for_law(&self.down)?;
                    self.down_table.get_or_init(|| alloc::boxed::Box::new(built))
                }
            }),
            None => None,
        };
        Ok(move |s: f64, x: f64| match (scaling, table) {
            // Q*_s(x) = s^{ρ−1} C*(x s^{−1/α}).
            (Some((alpha, rho)), Some(table)) => libm::pow(s, rho - 1.0) * table.eval(x * libm::pow(s, -1.0 / alpha)),
            _ => self.down.cumulative(s, x).unwrap_or(0.0),
        })
    }

    /// `(α, ρ)` of the scaling relations, when the model is self-similar.
    fn scaling(&self) -> Option<(f64, f64)> {
        Some((self.model.scaling_alpha()?, self.model.scaling_rho()?))
    }

    /// Exponent of the `s^{ρ−1}`, `(t−s)^{−ρ}` endpoint behaviour.
    fn local_rho(&self) -> f64 {
        self.model.scaling_rho().unwrap_or(0.5)
    }

    fn space_scale(&self, u: f64) -> f64 {
        let alpha = self.model.scaling_alpha().unwrap_or(2.0);
        libm::pow(u, 1.0 / alpha)
    }

    /// Times around which `s ↦ q*_s(x)` changes scale.
    fn peak_breaks(&self, x: f64) -> Vec<f64> {
        let alpha = self.model.scaling_alpha().unwrap_or(2.0);
        let centre = libm::pow(x, alpha);
        let mut breaks: Vec<f64> = [1e-2, 1e-1, 1.0, 1e1].iter().map(|k| k * centre).collect();
        // Decades up to t keep the algebraic tail of a small-x peak resolvable.
        let mut s = 1e2 * centre;
        while s > 0.0 && s < self.t {
            breaks.push(s);
            s *= 10.0;
        }
        breaks.retain(|&s| s > 0.0 && s < self.t);
        breaks
    }

    fn integrate_time<F: FnMut(f64, f64) -> f64>(&self, breaks: &[f64], f: F) -> f64 {
        let sub = SubInterval { lo: 0.0, hi: self.t, t: self.t, rho: self.local_rho() };
        sub.integrate(breaks, f, &self.quad)
    }
}

/// `[lo, hi] ⊆ [0, t]` with `s^{ρ−1}` behaviour at 0 and `(t−s)^{−ρ}` at `t`.
pub(crate) struct SubInterval {
    pub(crate) lo: f64,
    pub(crate) hi: f64,
    pub(crate) t: f64,
    pub(crate) rho: f64,
}

impl SubInterval {
    /// Integrates `f(s, t − s)`. Splits at `breaks` and flattens the endpoint power laws by `s = p·w^{1/ρ}`
    /// on a first panel touching 0 and `t − s = (t − p)·w^{1/(1−ρ)}` on a last
    /// panel touching `t`.
    pub(crate) fn integrate<F: FnMut(f64, f64) -> f64>(&self, breaks: &[f64], mut f: F, cfg: &QuadratureConfig) -> f64 {
        let mut pts: Vec<f64> = Vec::with_capacity(breaks.len() + 3);
        pts.push(self.lo);
        pts.extend(breaks.iter().copied().filter(|&b| b > self.lo && b < self.hi));
        pts.push(0.5 * (self.lo + self.hi));
        pts.push(self.hi);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let k0 = 1.0 / self.rho;
        let k1 = 1.0 / (1.0 - self.rho);
        let mut total = 0.0;
        let last = pts.len() - 2;
        for (i, w) in pts.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            let v = if i == 0 && a == 0.0 {
                integrate(
                    |u: f64| {
                        let s = b * libm::pow(u, k0);
                        finite(f(s, self.t - s) * b * k0 * libm::pow(u, k0 - 1.0))
                    },
                    0.0,
                    1.0,
                    cfg,
                )
                .value
            } else if i == last && b == self.t {
                let span = self.t - a;
                integrate(
                    |u: f64| {
                        let r = span * libm::pow(u, k1);
                        finite(f(self.t - r, r) * span * k1 * libm::pow(u, k1 - 1.0))
                    },
                    0.0,
                    1.0,
                    cfg,
                )
                .value
            } else {
                integrate(|s| finite(f(s, self.t - s)), a, b, cfg).value
            };
            total += v;
        }
        total
    }
}

fn finite(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// `q*_s(x)·q_{t−s}(y)`.
pub fn joint_density(law: &JointLaw, s: f64, x: f64, y: f64) -> Result<f64> {
    if !(s > 0.0 && s < law.t) {
        return Err(domain!("time of the supremum must lie in (0, {}), got {s}; atoms are separate", law.t));
    }
    if !(x >= 0.0 && y >= 0.0) {
        return Err(domain!("levels must be nonnegative, got ({x}, {y})"));
    }
    Ok(law.down.density(s, x)? * law.up.density(law.t - s, y)?)
}

/// Density of `g_t` for a type 1 model.
pub fn gt_density(model: &ProcessModel, t: f64, s: f64) -> Result<f64> {
    if model.regularity() != Regularity::Type1 {
        return Err(unsupported!("g_t has an atom at 0 or t for {:?} models", model.regularity()));
    }
    if !(s > 0.0 && s < t) {
        return Err(domain!("time must lie in (0, {t}), got {s}"));
    }
    if let Some(rho) = model.scaling_rho() {
        return Ok(arcsine_density(rho, t, s));
    }
    let (up, down) = EntranceLaw::pair(model, QuadratureConfig::default())?;
    Ok(down.lifetime_tail(s)? * up.lifetime_tail(t - s)?)
}

/// Generalized arcsine density `sin(πρ)/π · s^{ρ−1}(t−s)^{−ρ}`.
pub fn arcsine_density(rho: f64, t: f64, s: f64) -> f64 {
    if !(s > 0.0 && s < t) {
        return 0.0;
    }
    sin_pi(rho) / PI * libm::pow(s, rho - 1.0) * libm::pow(t - s, -rho)
}

/// Generalized arcsine distribution function, by quadrature in `w = (s/t)^ρ`.
pub fn arcsine_cdf(rho: f64, t: f64, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= t {
        return 1.0;
    }
    // With u = s/t = w^{1/ρ}: density becomes sin(πρ)/(πρ)·(1 − w^{1/ρ})^{−ρ}.
    let cfg = QuadratureConfig::with_tolerances(1e-15, 1e-13);
    let c = sin_pi(rho) / (PI * rho);
    if 2.0 * s <= t {
        let w1 = libm::pow(s / t, rho);
        c * integrate(|w| libm::pow(1.0 - libm::pow(w, 1.0 / rho), -rho), 0.0, w1, &cfg).value
    } else {
        1.0 - arcsine_cdf(1.0 - rho, t, t - s)
    }
}

/// The three independent factors of a self-similar law:
/// `g_t`, `X̄_t/g_t^{1/α}` and `(X̄_t − X_t)/(t − g_t)^{1/α}`.
#[derive(Debug, Clone)]
pub struct StableTripleFactors {
    alpha: f64,
    rho: f64,
    up: EntranceLaw,
    down: EntranceLaw,
}

impl StableTripleFactors {
    pub fn for_model(model: &ProcessModel) -> Result<Self> {
        let (Some(alpha), Some(rho)) = (model.scaling_alpha(), model.scaling_rho()) else {
            return Err(unsupported!("{} is not self-similar", model.to_text()));
        };
        let (up, down) = EntranceLaw::pair(model, QuadratureConfig::default())?;
        if !up.has_density() && !down.has_density() {
            return Err(unsupported!("no unit-time entrance law for {}", model.to_text()));
        }
        Ok(Self { alpha, rho, up, down })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Density of `g_t` on `[0, t]`.
    pub fn time_density(&self, t: f64, s: f64) -> f64 {
        arcsine_density(self.rho, t, s)
    }

    /// Density `Γ(ρ)·q*_1(x)` of `X̄_t/g_t^{1/α}`.
    pub fn sup_density(&self, x: f64) -> Result<f64> {
        Ok(gamma(self.rho) * self.down.density(1.0, x)?)
    }

    /// Density `Γ(1−ρ)·q_1(y)` of `(X̄_t − X_t)/(t − g_t)^{1/α}`.
    pub fn drawdown_density(&self, y: f64) -> Result<f64> {
        Ok(gamma(1.0 - self.rho) * self.up.density(1.0, y)?)
    }

    /// Product of the factors transported back to `(s, x, y)`.
    pub fn joint_density(&self, t: f64, s: f64, x: f64, y: f64) -> Result<f64> {
        let a = libm::pow(s, 1.0 / self.alpha);
        let b = libm::pow(t - s, 1.0 / self.alpha);
        Ok(self.time_density(t, s) * self.sup_density(x / a)? / a * self.drawdown_density(y / b)? / b)
    }
}

/// Factors for `(α, ρ)`: `(1, 1/2)` is the Cauchy process, `(2, 1/2)` the
/// Gaussian law with variance `2t`, `(α, 1/α)` with `α ∈ (1, 2)` the
/// spectrally negative law.
pub fn stable_triple_factors(alpha: f64, rho: f64) -> Result<StableTripleFactors> {
    let model = if alpha == 1.0 && rho == 0.5 {
        ProcessModel::cauchy()
    } else if alpha == 2.0 && rho == 0.5 {
        ProcessModel::stable(2.0, 0.5)?
    } else if alpha > 1.0 && alpha < 2.0 && (rho * alpha - 1.0).abs() <= 1e-15 {
        ProcessModel::spectrally_negative(alpha)?
    } else {
        stable::check_params(alpha, rho)?;
        return Err(unsupported!("no entrance laws implemented for stable ({alpha}, {rho})"));
    };
    StableTripleFactors::for_model(&model)
}

/// Evaluation path of the spectrally negative `(g_t, X̄_t)` density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnPath {
    /// `x·p_s(x)·n(t−s<ζ)/s` with the stable density evaluator.
    #[default]
    Semigroup,
    /// Power series in `x·s^{−1/α}`, summed in extended precision.
    Series,
}

/// Largest number of series terms before reporting non-convergence.
pub const SN_SERIES_CAP: usize = 512;

/// Joint density of `(g_t, X̄_t)` for the spectrally negative stable law of
/// index `α ∈ (1, 2)`; `+∞` at `s = t`.
pub fn sn_gt_sup_density(alpha: f64, t: f64, s: f64, x: f64, path: SnPath) -> Result<f64> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(domain!("spectrally negative index must lie in (1, 2), got {alpha}"));
    }
    if !(t > 0.0 && s > 0.0 && s <= t) {
        return Err(domain!("time must lie in (0, {t}], got {s}"));
    }
    if !(x >= 0.0) {
        return Err(domain!("level must be nonnegative, got {x}"));
    }
    if s == t {
        return Ok(f64::INFINITY);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let rho = 1.0 / alpha;
    let tail = libm::pow(t - s, -rho) / gamma(1.0 - rho);
    match path {
        SnPath::Semigroup => Ok(x * stable::density(alpha, rho, s, x) * tail / s),
        SnPath::Series => {
            let y = x * libm::pow(s, -rho);
            let (sum, _) = stable::sn_series_sum(alpha, y, 1e-14, SN_SERIES_CAP)?;
            Ok((sum / (PI * s) * tail).max(0.0))
        }
    }
}

/// Law of `(g_∞, X̄_∞)` for a model drifting to `−∞`.
#[derive(Debug, Clone)]
pub struct AllTimeLaw {
    killing: f64,
    atom: f64,
    down: EntranceLaw,
}

impl AllTimeLaw {
    pub fn new(model: &ProcessModel) -> Result<Self> {
        let a = model.killing_rate();
        if !(a > 0.0) {
            return Err(unsupported!("{} does not drift to -infinity", model.to_text()));
        }
        let down = EntranceLaw::new(model.clone(), Side::Infimum, QuadratureConfig::default())?;
        Ok(Self { killing: a, atom: model.ladder_drift_star() * a, down })
    }

    /// `a`, the killing rate of the ladder time process.
    pub fn killing_rate(&self) -> f64 {
        self.killing
    }

    /// Density `a·q*_s(x)` at `s, x > 0`.
    pub fn density(&self, s: f64, x: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(domain!("time must be positive, got {s}"));
        }
        Ok(self.killing * self.down.density(s, x)?)
    }

    /// Mass `d*·a` at `(0, 0)`.
    pub fn atom(&self) -> f64 {
        self.atom
    }
}

/// `(a·q*_s(x), d*·a)` for a model with killing rate `a > 0`.
pub fn sup_all_time_law(model: &ProcessModel, s: f64, x: f64) -> Result<(f64, f64)> {
    let law = AllTimeLaw::new(model)?;
    Ok((law.density(s, x)?, law.atom()))
}

impl From<SnPath> for &'static str {
    fn from(p: SnPath) -> Self {
        match p {
            SnPath::Semigroup => "semigroup",
            SnPath::Series => "series",
        }
    }
}

/// Helper for callers that only need to know whether a model has the
/// densities required by [`joint_density`].
pub fn has_joint_density(model: &ProcessModel) -> bool {
    let Ok((up, down)) = EntranceLaw::pair(model, QuadratureConfig::default()) else {
        return false;
    };
    up.has_density() && down.has_density()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::JumpSign;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn law(model: ProcessModel, t: f64) -> JointLaw {
        JointLaw::new(model, t, QuadratureConfig::default()).unwrap()
    }

    #[test]
    fn brownian_joint_density_closed_form() {
        let j = law(ProcessModel::brownian(0.0).unwrap(), 1.0);
        for (s, x, y) in [(0.3, 0.5, 1.0), (0.8, 2.0, 0.1)] {
            let a = x * libm::pow(s, -1.5) * libm::exp(-x * x / (2.0 * s)) / libm::sqrt(PI);
            let b = y * libm::pow(1.0 - s, -1.5) * libm::exp(-y * y / (2.0 * (1.0 - s))) / libm::sqrt(PI);
            assert!(rel(j.density(s, x, y).unwrap(), a * b) < 1e-14);
            assert!(rel(j.density_terminal(s, x, x - y).unwrap(), j.density(s, x, y).unwrap()) < 1e-12);
        }
        assert!(j.density(0.0, 1.0, 1.0).is_err());
        assert!(j.density(1.0, 1.0, 1.0).is_err());
        assert_eq!(j.atoms().unwrap(), Atoms::default());
    }

    #[test]
    fn half_normal_supremum() {
        let j = law(ProcessModel::brownian(0.0).unwrap(), 1.0);
        for x in [0.01, 0.1, 0.5, 1.0, 2.0, 4.0] {
            let want = libm::sqrt(2.0 / PI) * libm::exp(-0.5 * x * x);
            let got = j.sup_marginal(x).unwrap();
            assert!(rel(got, want) < 1e-8, "x={x}: {got} vs {want}");
            let cdf = libm::erf(x / core::f64::consts::SQRT_2);
            let got = j.sup_marginal_cdf(x).unwrap();
            assert!((got - cdf).abs() < 1e-9, "x={x}: {got} vs {cdf}");
        }
        assert_eq!(j.sup_atom().unwrap(), 0.0);
    }

    #[test]
    fn drifted_brownian_supremum_matches_reflection_formula() {
        // P(X̄_t ≤ x) = Φ((x−ct)/√t) − e^{2cx}Φ((−x−ct)/√t).
        use crate::special::std_normal_cdf as phi;
        for c in [-0.7, 0.5] {
            let t = 1.3;
            let j = law(ProcessModel::brownian(c).unwrap(), t);
            for x in [0.05, 0.6, 2.0] {
                let st = libm::sqrt(t);
                let cdf = phi((x - c * t) / st) - libm::exp(2.0 * c * x) * phi((-x - c * t) / st);
                assert!((j.sup_marginal_cdf(x).unwrap() - cdf).abs() < 1e-9, "c={c} x={x}");
                let h = 1e-5;
                let pdf = (phi((x + h - c * t) / st) - libm::exp(2.0 * c * (x + h)) * phi((-x - h - c * t) / st)
                    - phi((x - h - c * t) / st)
                    + libm::exp(2.0 * c * (x - h)) * phi((-x + h - c * t) / st))
                    / (2.0 * h);
                assert!(rel(j.sup_marginal(x).unwrap(), pdf) < 1e-6, "c={c} x={x}");
            }
        }
    }

    #[test]
    fn masses_are_one() {
        for m in [ProcessModel::brownian(0.0).unwrap(), ProcessModel::brownian(0.5).unwrap(), ProcessModel::brownian(-1.0).unwrap()] {
            for t in [0.5, 1.0, 2.0] {
                let total = law(m.clone(), t).total_mass().unwrap();
                assert!((total - 1.0).abs() < 1e-8, "{} t={t}: {total}", m.to_text());
            }
        }
        let sn = law(ProcessModel::spectrally_negative(1.5).unwrap(), 1.0).total_mass().unwrap();
        assert!((sn - 1.0).abs() < 1e-6, "{sn}");
    }

    #[test]
    fn arcsine_law() {
        for s in [0.01, 0.3, 0.5, 0.99] {
            let want = 1.0 / (PI * libm::sqrt(s * (1.0 - s)));
            assert!(rel(gt_density(&ProcessModel::brownian(0.0).unwrap(), 1.0, s).unwrap(), want) < 1e-14);
            assert!(rel(gt_density(&ProcessModel::cauchy(), 1.0, s).unwrap(), want) < 1e-14);
            let cdf = 2.0 / PI * libm::asin(libm::sqrt(s));
            assert!((arcsine_cdf(0.5, 1.0, s) - cdf).abs() < 1e-13);
        }
        let cfg = QuadratureConfig::with_tolerances(1e-14, 1e-12);
        for rho in [0.2, 0.5, 2.0 / 3.0] {
            // Flatten s^{ρ−1} and (t−s)^{−ρ} by power substitutions on each half.
            let (a, b) = (1.0 / rho, 1.0 / (1.0 - rho));
            let left = integrate(|u| arcsine_density(rho, 2.0, libm::pow(u, a)) * a * libm::pow(u, a - 1.0), 0.0, 1.0, &cfg);
            let c = sin_pi(rho) / PI;
            let right = integrate(
                |u| {
                    let r = libm::pow(u, b);
                    c * libm::pow(2.0 - r, rho - 1.0) * libm::pow(r, -rho) * b * libm::pow(u, b - 1.0)
                },
                0.0,
                1.0,
                &cfg,
            );
            let mass = left.value + right.value;
            assert!((mass - 1.0).abs() < 1e-8, "rho={rho}: {mass}");
            assert!((arcsine_cdf(rho, 2.0, 0.7) + arcsine_cdf(1.0 - rho, 2.0, 1.3) - 1.0).abs() < 1e-13);
        }
        // Drifted Brownian motion: product of lifetime tails, still a density.
        let m = ProcessModel::brownian(0.8).unwrap();
        let mass = crate::quad::integrate_endpoint_singular(|s| gt_density(&m, 1.5, s).unwrap(), 1.5, &cfg).value;
        assert!((mass - 1.0).abs() < 1e-8, "{mass}");
        let cpp = ProcessModel::compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0).unwrap();
        assert!(gt_density(&cpp, 1.0, 0.5).is_err());
    }

    #[test]
    fn cauchy_factors() {
        let f = stable_triple_factors(1.0, 0.5).unwrap();
        let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-9);
        let sup = integrate(|x| f.sup_density(x).unwrap(), 0.0, 1.0, &cfg).value
            + integrate_to_infinity(|x| f.sup_density(x).unwrap(), 1.0, 1.0, &cfg).value;
        assert!((sup - 1.0).abs() < 1e-8, "{sup}");
        let j = law(ProcessModel::cauchy(), 1.0);
        for (s, x, y) in [(0.2, 0.3, 0.4), (0.5, 1.0, 2.0), (0.9, 3.0, 0.1)] {
            assert!(rel(f.joint_density(1.0, s, x, y).unwrap(), j.density(s, x, y).unwrap()) < 1e-12);
        }
        assert!(stable_triple_factors(0.7, 0.3).is_err());
        assert!(stable_triple_factors(3.0, 0.5).is_err());
    }

    #[test]
    fn spectrally_negative_paths_agree() {
        for s in [0.2, 0.5, 0.8] {
            for x in [0.5, 1.0, 2.0] {
                let a = sn_gt_sup_density(1.5, 1.0, s, x, SnPath::Semigroup).unwrap();
                let b = sn_gt_sup_density(1.5, 1.0, s, x, SnPath::Series).unwrap();
                assert!(rel(a, b) < 1e-9, "s={s} x={x}: {a} vs {b}");
            }
        }
        assert_eq!(sn_gt_sup_density(1.5, 1.0, 1.0, 1.0, SnPath::Semigroup).unwrap(), f64::INFINITY);
        assert!(sn_gt_sup_density(1.5, 1.0, 1.2, 1.0, SnPath::Semigroup).is_err());
        assert!(sn_gt_sup_density(2.5, 1.0, 0.5, 1.0, SnPath::Semigroup).is_err());
    }

    #[test]
    fn spectrally_negative_time_marginal_is_arcsine() {
        let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-10);
        for s in [0.1, 0.5, 0.9] {
            let f = |x: f64| sn_gt_sup_density(1.5, 1.0, s, x, SnPath::Semigroup).unwrap();
            let scale = libm::pow(s, 1.0 / 1.5);
            let m = integrate(f, 0.0, scale, &cfg).value + integrate_to_infinity(f, scale, scale, &cfg).value;
            assert!(rel(m, arcsine_density(1.0 / 1.5, 1.0, s)) < 1e-7, "s={s}");
        }
    }

    #[test]
    fn all_time_supremum_of_drifted_brownian_motion() {
        let c = -0.8;
        let m = ProcessModel::brownian(c).unwrap();
        let a = AllTimeLaw::new(&m).unwrap();
        let want_a = -2.0 * c / (libm::sqrt(c * c + 2.0) - c);
        assert!(rel(a.killing_rate(), want_a) < 1e-15);
        assert_eq!(a.atom(), 0.0);
        let cfg = QuadratureConfig::with_tolerances(1e-14, 1e-11);
        for x in [0.1, 1.0, 3.0] {
            let f = |u: f64| 2.0 * u * a.density(u * u, x).unwrap();
            let v = integrate_to_infinity(f, 0.0, libm::sqrt(x), &cfg).value;
            let want = 2.0 * c.abs() * libm::exp(-2.0 * c.abs() * x);
            assert!(rel(v, want) < 1e-8, "x={x}: {v} vs {want}");
        }
        assert!(AllTimeLaw::new(&ProcessModel::brownian(0.3).unwrap()).is_err());
    }

    #[test]
    fn type3_atom_is_the_no_passage_probability() {
        let m = ProcessModel::compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0).unwrap();
        let j = law(m, 1.0);
        let atoms = j.atoms().unwrap();
        assert!(atoms.end.is_none());
        let want = crate::montecarlo::cpp::no_passage_probability(1.0, 1.0, 1.0, 1.0);
        assert!(rel(atoms.start.unwrap().mass, want) < 1e-13);
        assert!(rel(j.sup_atom().unwrap(), want) < 1e-13);
        assert!(j.sup_marginal(1.0).is_err());
    }

    #[test]
    fn marginals_factorize() {
        // ∫ joint density dy = n(t−s<ζ)·q*_s(x).
        let cfg = QuadratureConfig::with_tolerances(1e-13, 1e-11);
        let m = ProcessModel::brownian(0.4).unwrap();
        let j = law(m, 1.0);
        for (s, x) in [(0.3, 0.7), (0.6, 1.5)] {
            let f = |y: f64| j.density(s, x, y).unwrap();
            let v = integrate_to_infinity(f, 0.0, 1.0, &cfg).value;
            let want = j.supremum_law().lifetime_tail(1.0 - s).unwrap() * j.infimum_law().density(s, x).unwrap();
            assert!(rel(v, want) < 1e-9);
        }
    }

    #[test]
    fn time_reversal_duality() {
        // (s, y)-marginal of m equals the (t−s, x)-marginal of the dual at x = y.
        let cfg = QuadratureConfig::with_tolerances(1e-13, 1e-11);
        let m = ProcessModel::brownian(0.6).unwrap();
        let j = law(m.clone(), 1.0);
        let jd = law(m.dual(), 1.0);
        for (s, y) in [(0.25, 0.4), (0.7, 1.2)] {
            let f = |x: f64| j.density(s, x, y).unwrap();
            let v = integrate_to_infinity(f, 0.0, 1.0, &cfg).value;
            let g = |x: f64| jd.density(1.0 - s, y, x).unwrap();
            let w = integrate_to_infinity(g, 0.0, 1.0, &cfg).value;
            assert!(rel(v, w) < 1e-10);
        }
    }

    #[test]
    fn cell_probabilities_add_up() {
        let j = law(ProcessModel::spectrally_negative(1.5).unwrap(), 1.0);
        let whole = j.cell_probability(0.0, 1.0, 0.0, 1.0).unwrap();
        let parts = j.cell_probability(0.0, 0.4, 0.0, 1.0).unwrap() + j.cell_probability(0.4, 1.0, 0.0, 1.0).unwrap();
        assert!(rel(whole, parts) < 1e-8, "{whole} vs {parts}");
        assert!(rel(whole, j.sup_marginal_cdf(1.0).unwrap()) < 1e-7);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn joint_density_is_nonnegative(c in -2.0f64..2.0, s in 0.01f64..0.99, x in 0.0f64..5.0, y in 0.0f64..5.0) {
            let j = law(ProcessModel::brownian(c).unwrap(), 1.0);
            prop_assert!(j.density(s, x, y).unwrap() >= 0.0);
        }

        #[test]
        fn type1_models_have_no_atoms(c in -2.0f64..2.0) {
            let j = law(ProcessModel::brownian(c).unwrap(), 1.0);
            prop_assert_eq!(j.atoms().unwrap().total_mass(), 0.0);
        }

        #[test]
        fn sup_cdf_is_monotone(x in 0.01f64..3.0, dx in 0.0f64..1.0) {
            let j = law(ProcessModel::brownian(0.3).unwrap(), 1.0);
            prop_assert!(j.sup_marginal_cdf(x).unwrap() <= j.sup_marginal_cdf(x + dx).unwrap() + 1e-12);
        }
    }
}
