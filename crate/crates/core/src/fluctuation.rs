//! Fluctuation identities evaluated numerically: Fristedt's formula for the
//! ladder exponent `κ`, the Wiener–Hopf product in time, reconstruction of the
//! semigroup from the two entrance laws, and the subordinator identities
//! behind the law of an inverse subordinator.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::entrance::{CumulativeTable, EntranceLaw, Side};
use crate::error::{domain, unsupported, Error, Result};
use crate::jointlaw::SubInterval;
use crate::model::{Family, ModelParams, ProcessModel};
use crate::quad::{integrate, integrate_to_infinity, kronrod_nodes, QuadratureConfig};
use crate::special::gamma;
use crate::stable;

/// Length of the first time panel, integrated through `t = εu²`.
pub const FRISTEDT_EPS: f64 = 1e-3;

/// How [`LadderExponent::kappa`] is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KappaMethod {
    #[default]
    FristedtQuadrature,
    ClosedForm,
}

/// The bivariate ladder exponent `κ(α, β)`, normalized by `κ(1, 0) = 1`.
#[derive(Debug, Clone)]
pub struct LadderExponent {
    model: ProcessModel,
    method: KappaMethod,
    quad: QuadratureConfig,
}

impl LadderExponent {
    pub fn new(model: ProcessModel, method: KappaMethod, quad: QuadratureConfig) -> Result<Self> {
        if !quad.is_valid() {
            return Err(domain!("invalid quadrature configuration {quad:?}"));
        }
        Ok(Self { model, method, quad })
    }

    pub fn model(&self) -> &ProcessModel {
        &self.model
    }
    pub fn method(&self) -> KappaMethod {
        self.method
    }

    pub fn kappa(&self, alpha: f64, beta: f64) -> Result<f64> {
        match self.method {
            KappaMethod::FristedtQuadrature => fristedt_kappa_with(&self.model, alpha, beta, &self.quad),
            KappaMethod::ClosedForm => closed_form_kappa(&self.model, alpha, beta),
        }
    }

    /// `κ*(α, β)`, always evaluated as `κ` of the dual model.
    pub fn kappa_star(&self, alpha: f64, beta: f64) -> Result<f64> {
        Self { model: self.model.dual(), ..self.clone() }.kappa(alpha, beta)
    }
}

/// `κ(α, β)` by Fristedt's formula with the default quadrature settings.
pub fn fristedt_kappa(model: &ProcessModel, alpha: f64, beta: f64) -> Result<f64> {
    fristedt_kappa_with(model, alpha, beta, &QuadratureConfig::default())
}

/// `exp ∫_0^∞ dt/t ∫_{[0,∞)} (e^{−t} − e^{−αt−βx}) P(X_t ∈ dx)`.
///
/// The `x`-integral is taken first; divided by `t` it stays bounded or
/// mildly singular at 0, and the first panel `[0, ε]` is flattened by
/// `t = εu²`.
pub fn fristedt_kappa_with(model: &ProcessModel, alpha: f64, beta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(alpha >= 0.0 && beta >= 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(domain!("Laplace arguments must be finite and nonnegative, got ({alpha}, {beta})"));
    }
    if alpha == 0.0 && beta == 0.0 {
        return Err(domain!("the time integral diverges at (0, 0); one argument must be positive"));
    }
    let inner = SpaceIntegral::new(model, alpha, beta)?;
    let (end, tail) = inner.horizon();
    Ok(libm::exp(fristedt_time_integral(|t| inner.eval(t), end, tail, cfg)))
}

/// `∫_0^∞ g(t)/t dt` over geometric panels up to `end`, with the `t = εu²`
/// patch at 0; past `end` either the given tail value or a mapped quadrature.
fn fristedt_time_integral<G: Fn(f64) -> f64>(g: G, end: f64, tail: Option<f64>, cfg: &QuadratureConfig) -> f64 {
    let eps = FRISTEDT_EPS;
    let head = integrate(|u| if u <= 0.0 { 0.0 } else { 2.0 * g(eps * u * u) / u }, 0.0, 1.0, cfg).value;
    let mut total = head;
    let mut a = eps;
    while a < end {
        let b = (4.0 * a).min(end);
        total += integrate(|t| g(t) / t, a, b, cfg).value;
        a = b;
    }
    total + tail.unwrap_or_else(|| integrate_to_infinity(|t| g(t) / t, end, end, cfg).value)
}

/// `t ↦ ∫_{[0,∞)} (e^{−t} − e^{−αt−βx}) p_t(x) dx`.
enum SpaceIntegral {
    /// Self-similar law with `β = 0`: only `P(X_t ≥ 0) = ρ` enters.
    Positivity { alpha: f64, rho: f64 },
    /// Self-similar law: `p_1` weighted on fixed nodes, `X_t = t^{1/index} X_1`.
    Scaling { alpha: f64, beta: f64, index: f64, nodes: Vec<(f64, f64)>, rest: f64, at_zero: f64 },
    /// Brownian motion with drift, integrated adaptively in `x`.
    Gaussian { alpha: f64, beta: f64, drift: f64 },
}

/// Half-decade panels carrying the fixed `p_1` nodes.
const NODE_DECADES: (i32, i32) = (-12, 12);

impl SpaceIntegral {
    fn new(model: &ProcessModel, alpha: f64, beta: f64) -> Result<Self> {
        match model.params() {
            ModelParams::Brownian { drift } if drift != 0.0 => Ok(Self::Gaussian { alpha, beta, drift }),
            ModelParams::CompoundPoisson { .. } => {
                Err(unsupported!("Fristedt's formula needs a marginal density; {} has an atom", model.to_text()))
            }
            _ => {
                let index = model.scaling_alpha().expect("self-similar model");
                let rho = model.positivity_param()?;
                if beta == 0.0 {
                    return Ok(Self::Positivity { alpha, rho });
                }
                let mut nodes = Vec::new();
                let (k0, k1) = NODE_DECADES;
                let mut edges = vec![0.0];
                edges.extend((2 * k0..=2 * k1).map(|k| libm::pow(10.0, 0.5 * k as f64)));
                for w in edges.windows(2) {
                    for (y, wt) in kronrod_nodes(w[0], w[1]) {
                        nodes.push((y, wt * model.marginal_density(1.0, y)?));
                    }
                }
                let rest = (rho - nodes.iter().map(|n| n.1).sum::<f64>()).max(0.0);
                let at_zero = model.marginal_density(1.0, 0.0)?;
                Ok(Self::Scaling { alpha, beta, index, nodes, rest, at_zero })
            }
        }
    }

    /// Where the panelled time integral stops, and the value of the rest when
    /// it is known in closed form.
    fn horizon(&self) -> (f64, Option<f64>) {
        match *self {
            Self::Positivity { alpha, .. } | Self::Gaussian { alpha, .. } if alpha > 0.0 => {
                ((60.0 / alpha.min(1.0)).min(1e13), None)
            }
            Self::Scaling { alpha, .. } if alpha > 0.0 => ((60.0 / alpha.min(1.0)).min(1e13), None),
            // α = 0: the integrand decays like e^{−c²t/2} or e^{−βct}.
            Self::Positivity { .. } | Self::Gaussian { .. } => (1e8, None),
            // α = 0: for t^{1/index} ≫ 1/β the x-integral is −p_1(0)/(β t^{1/index}) to
            // leading order, which the nodes no longer resolve; integrate that in closed form.
            Self::Scaling { beta, index, at_zero, .. } => {
                let reach = 1e10;
                (libm::pow(reach, index), Some(-at_zero * index / (beta * reach)))
            }
        }
    }

    fn eval(&self, t: f64) -> f64 {
        // e^{−t} − e^{−αt−βx} with z = (α−1)t + βx, written through expm1 on
        // the side where the exponential cannot overflow.
        let kernel = |alpha: f64, beta: f64, x: f64| -> f64 {
            let z = (alpha - 1.0) * t + beta * x;
            if z >= 0.0 {
                -libm::exp(-t) * libm::expm1(-z)
            } else {
                libm::exp(-alpha * t - beta * x) * libm::expm1(z)
            }
        };
        match *self {
            Self::Positivity { alpha, rho } => rho * kernel(alpha, 0.0, 0.0),
            Self::Scaling { alpha, beta, index, ref nodes, rest, .. } => {
                let s = libm::pow(t, 1.0 / index);
                let body: f64 = nodes.iter().map(|&(y, w)| w * kernel(alpha, beta, s * y)).sum();
                body + rest * libm::exp(-t)
            }
            Self::Gaussian { alpha, beta, drift } => {
                let sd = libm::sqrt(t);
                let m = drift * t;
                let f = |x: f64| kernel(alpha, beta, x) * crate::special::normal_pdf(x, m, t);
                let mut pts = vec![0.0];
                pts.extend([-6.0, -2.0, 0.0, 2.0, 6.0].iter().map(|k| m + k * sd).filter(|&x| x > 0.0));
                if beta > 0.0 {
                    pts.extend([1.0, 10.0, 40.0].iter().map(|k| k / beta));
                }
                pts.sort_by(f64::total_cmp);
                pts.dedup();
                // The kernel is O(t) near t = 0, so the tolerance scales with it.
                let cfg = QuadratureConfig::with_tolerances((1e-15 * t).max(1e-300), 1e-12);
                let mut v: f64 = pts.windows(2).map(|w| integrate(f, w[0], w[1], &cfg).value).sum();
                v += integrate_to_infinity(f, *pts.last().unwrap(), sd, &cfg).value;
                v
            }
        }
    }
}

/// `κ` from its known closed forms: drifted Brownian motion for all
/// `(α, β)`, self-similar laws at `β = 0`.
pub fn closed_form_kappa(model: &ProcessModel, alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha >= 0.0 && beta >= 0.0) {
        return Err(domain!("Laplace arguments must be nonnegative, got ({alpha}, {beta})"));
    }
    match model.params() {
        ModelParams::Brownian { drift: c } => {
            // (β + √(c²+2α) − c)/(√(c²+2) − c), with both differences rewritten for c > 0.
            let root = |a: f64| libm::sqrt(c * c + 2.0 * a);
            let diff = |a: f64| if c > 0.0 { 2.0 * a / (root(a) + c) } else { root(a) - c };
            Ok((beta + diff(alpha)) / diff(1.0))
        }
        ModelParams::CompoundPoisson { .. } => Err(unsupported!("no closed-form ladder exponent for {}", model.to_text())),
        _ if beta == 0.0 => Ok(libm::pow(alpha, model.positivity_param()?)),
        _ => Err(unsupported!("no closed form for κ(α, β) with β > 0 for {}", model.to_text())),
    }
}

/// `κ(α,0)·κ*(α,0)/α − 1`.
pub fn wiener_hopf_residual(model: &ProcessModel, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(domain!("Wiener-Hopf product needs alpha > 0, got {alpha}"));
    }
    let k = fristedt_kappa(model, alpha, 0.0)?;
    let ks = fristedt_kappa(&model.dual(), alpha, 0.0)?;
    Ok(k * ks / alpha - 1.0)
}

/// `ε∫_0^∞ e^{−εt} n(t<ζ) dt + ε·d`, which equals `κ(ε, 0)`.
pub fn ladder_laplace_transform(model: &ProcessModel, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(domain!("Laplace argument must be positive, got {eps}"));
    }
    let law = EntranceLaw::new(model.clone(), Side::Supremum, QuadratureConfig::default())?;
    law.lifetime_tail(1.0)?;
    let cfg = QuadratureConfig::with_tolerances(1e-14, 1e-11);
    let rho = model.scaling_rho().unwrap_or(0.5);
    // n(t<ζ) ~ t^{−ρ} at 0, flattened by t = u^{1/(1−ρ)}.
    let k = 1.0 / (1.0 - rho);
    let f = |t: f64| libm::exp(-eps * t) * law.lifetime_tail(t).unwrap_or(0.0);
    let head = integrate(|u| if u <= 0.0 { 0.0 } else { f(libm::pow(u, k)) * k * libm::pow(u, k - 1.0) }, 0.0, 1.0, &cfg);
    let tail = integrate_to_infinity(f, 1.0, 1.0 / eps, &cfg);
    Ok(eps * (head.value + tail.value) + eps * model.ladder_drift())
}

/// Entrance density on one side, evaluated either directly or through the
/// self-similar rescaling of a unit-time table.
enum SideDensity {
    Direct(EntranceLaw),
    Scaled { table: Arc<CumulativeTable>, index: f64, mass_exp: f64 },
}

impl SideDensity {
    fn new(model: &ProcessModel, side: Side) -> Result<Self> {
        let law = EntranceLaw::new(model.clone(), side, QuadratureConfig::default())?;
        if !law.has_density() {
            return Err(unsupported!("no {side:?}-side entrance density for {}", model.to_text()));
        }
        if model.family() == Family::BrownianWithDrift {
            return Ok(Self::Direct(law));
        }
        let (index, rho) = match (model.scaling_alpha(), model.scaling_rho()) {
            (Some(a), Some(r)) => (a, r),
            _ => return Ok(Self::Direct(law)),
        };
        let mass_exp = match side {
            Side::Supremum => rho,
            Side::Infimum => 1.0 - rho,
        };
        Ok(Self::Scaled { table: CumulativeTable::for_law(&law)?, index, mass_exp })
    }

    fn eval(&self, t: f64, x: f64) -> f64 {
        match self {
            Self::Direct(law) => law.density(t, x).unwrap_or(0.0),
            // q_t(x) = t^{−m−1/α} q_1(x t^{−1/α}) with m the lifetime exponent.
            Self::Scaled { table, index, mass_exp } => {
                let sc = libm::pow(t, 1.0 / index);
                libm::pow(t, -mass_exp) / sc * table.density(x / sc)
            }
        }
    }
}

/// `p_t` rebuilt from the entrance laws:
/// `∫_0^t (q̄_{t−s} ∗ q*_s) ds + d·q*_t + d*·q̄_t` with `q̄(x) = q(−x)`.
pub struct SemigroupReconstruction {
    model: ProcessModel,
    t: f64,
    up: SideDensity,
    down: SideDensity,
    index: f64,
    rho: f64,
}

impl SemigroupReconstruction {
    pub fn new(model: &ProcessModel, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(domain!("time must be positive and finite, got {t}"));
        }
        let up = SideDensity::new(model, Side::Supremum)?;
        let down = SideDensity::new(model, Side::Infimum)?;
        Ok(Self {
            model: model.clone(),
            t,
            up,
            down,
            index: model.scaling_alpha().unwrap_or(2.0),
            rho: model.scaling_rho().unwrap_or(0.5),
        })
    }

    pub fn density(&self, z: f64) -> f64 {
        let t = self.t;
        let cfg = QuadratureConfig::with_tolerances(1e-14, 1e-10);
        // ∫ q*_s(x) q_r(x − z) dx over x ≥ max(0, z), r = t − s.
        let inner = |s: f64, r: f64| -> f64 {
            let lo = z.max(0.0);
            let (a, b) = (libm::pow(s, 1.0 / self.index), libm::pow(r, 1.0 / self.index));
            let f = |x: f64| self.down.eval(s, x) * self.up.eval(r, x - z);
            let mut pts = vec![lo, lo + a, lo + b, z + b, lo + 4.0 * a.max(b)];
            pts.retain(|&p| p >= lo);
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let body: f64 = pts.windows(2).map(|w| integrate(f, w[0], w[1], &cfg).value).sum();
            body + integrate_to_infinity(f, *pts.last().unwrap(), a.max(b), &cfg).value
        };
        // Times at which the spatial scale s^{1/α} meets |z|.
        let c = libm::pow(z.abs(), self.index);
        let mut breaks = Vec::new();
        for k in [0.1, 1.0, 10.0] {
            if k * c > 1e-9 * t {
                breaks.push(k * c);
                breaks.push(t - k * c);
            }
        }
        let sub = SubInterval { lo: 0.0, hi: t, t, rho: self.rho };
        let mut v = sub.integrate(&breaks, inner, &cfg);
        if z > 0.0 {
            v += self.model.ladder_drift() * self.down.eval(t, z);
        } else if z < 0.0 {
            v += self.model.ladder_drift_star() * self.up.eval(t, -z);
        }
        v.max(0.0)
    }
}

/// [`SemigroupReconstruction::density`] on every grid point.
pub fn semigroup_reconstruct(model: &ProcessModel, t: f64, grid: &[f64]) -> Result<Vec<f64>> {
    let r = SemigroupReconstruction::new(model, t)?;
    Ok(grid.iter().map(|&z| r.density(z)).collect())
}

/// Outcome of one numerical identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub model: String,
    pub parameters: Vec<(&'static str, f64)>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(identity: &'static str, model: String, parameters: Vec<(&'static str, f64)>, residual: f64, tolerance: f64) -> Self {
        let pass = residual.abs() <= tolerance;
        Self { identity, model, parameters, residual, tolerance, pass }
    }
}

/// `|κ(1, 0) − 1|` from Fristedt's formula.
pub fn normalization_report(model: &ProcessModel) -> Result<IdentityReport> {
    let k = fristedt_kappa(model, 1.0, 0.0)?;
    Ok(IdentityReport::new("normalization", model.to_text(), vec![("alpha", 1.0), ("beta", 0.0)], k - 1.0, 1e-4))
}

pub fn wiener_hopf_report(model: &ProcessModel, alpha: f64) -> Result<IdentityReport> {
    let r = wiener_hopf_residual(model, alpha)?;
    Ok(IdentityReport::new("wiener-hopf", model.to_text(), vec![("alpha", alpha)], r, 1e-4))
}

/// Fristedt against the closed form at `(α, β)`, as a relative error.
pub fn fristedt_closed_form_report(model: &ProcessModel, alpha: f64, beta: f64) -> Result<IdentityReport> {
    let q = fristedt_kappa(model, alpha, beta)?;
    let c = closed_form_kappa(model, alpha, beta)?;
    Ok(IdentityReport::new("fristedt-closed-form", model.to_text(), vec![("alpha", alpha), ("beta", beta)], q / c - 1.0, 1e-4))
}

/// `ε∫e^{−εt}n(t<ζ)dt + εd` against Fristedt's `κ(ε, 0)`.
pub fn ladder_laplace_report(model: &ProcessModel, eps: f64) -> Result<IdentityReport> {
    let lhs = ladder_laplace_transform(model, eps)?;
    let rhs = fristedt_kappa(model, eps, 0.0)?;
    Ok(IdentityReport::new("ladder-laplace", model.to_text(), vec![("eps", eps)], lhs / rhs - 1.0, 1e-4))
}

/// L1 distance between the reconstruction and `p_t` on `count` points of
/// `[centre − half_width, centre + half_width]`, by the trapezoid rule.
pub fn reconstruction_report(model: &ProcessModel, t: f64, half_width: f64, count: usize) -> Result<IdentityReport> {
    if count < 2 {
        return Err(domain!("reconstruction grid needs at least 2 points, got {count}"));
    }
    let centre = match model.params() {
        ModelParams::Brownian { drift } => drift * t,
        _ => 0.0,
    };
    let h = 2.0 * half_width / (count - 1) as f64;
    let grid: Vec<f64> = (0..count).map(|k| centre - half_width + h * k as f64).collect();
    let rebuilt = semigroup_reconstruct(model, t, &grid)?;
    let mut l1 = 0.0;
    for (k, (&z, &r)) in grid.iter().zip(&rebuilt).enumerate() {
        let w = if k == 0 || k + 1 == count { 0.5 * h } else { h };
        l1 += w * (r - model.marginal_density(t, z)?).abs();
    }
    Ok(IdentityReport::new("semigroup", model.to_text(), vec![("t", t), ("half_width", half_width)], l1, 1e-3))
}

/// Family of a [`SubordinatorModel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubordinatorFamily {
    /// Lévy tail `ν(t, ∞) = scale·t^{−index}`, `index ∈ (0, 1)`.
    Stable { index: f64, scale: f64 },
    /// No jumps.
    PureDrift,
}

/// Subordinator with drift `b`, killing rate `k` and the jump part of its family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubordinatorModel {
    drift: f64,
    killing: f64,
    family: SubordinatorFamily,
}

impl SubordinatorModel {
    pub fn stable(index: f64, scale: f64, drift: f64, killing: f64) -> Result<Self> {
        if !(index > 0.0 && index < 1.0) {
            return Err(domain!("stable subordinator index must lie in (0, 1), got {index}"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(domain!("jump scale must be positive, got {scale}"));
        }
        Self::checked(drift, killing, SubordinatorFamily::Stable { index, scale })
    }

    pub fn pure_drift(drift: f64, killing: f64) -> Result<Self> {
        Self::checked(drift, killing, SubordinatorFamily::PureDrift)
    }

    fn checked(drift: f64, killing: f64, family: SubordinatorFamily) -> Result<Self> {
        if !(drift >= 0.0 && drift.is_finite() && killing >= 0.0 && killing.is_finite()) {
            return Err(domain!("drift and killing rate must be finite and nonnegative, got ({drift}, {killing})"));
        }
        Ok(Self { drift, killing, family })
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }
    pub fn killing(&self) -> f64 {
        self.killing
    }
    pub fn family(&self) -> SubordinatorFamily {
        self.family
    }

    pub fn to_text(&self) -> String {
        match self.family {
            SubordinatorFamily::Stable { index, scale } => {
                format!("stable-subordinator index={index} scale={scale} drift={} killing={}", self.drift, self.killing)
            }
            SubordinatorFamily::PureDrift => format!("pure-drift drift={} killing={}", self.drift, self.killing),
        }
    }

    /// `ν̄(t) = ν(t, ∞) + k`.
    pub fn tail(&self, t: f64) -> f64 {
        let jumps = match self.family {
            SubordinatorFamily::Stable { index, scale } if t > 0.0 => scale * libm::pow(t, -index),
            SubordinatorFamily::Stable { .. } => f64::INFINITY,
            SubordinatorFamily::PureDrift => 0.0,
        };
        jumps + self.killing
    }

    /// `Φ(α) = αb + α∫_0^∞ e^{−αt} ν̄(t) dt` in closed form.
    pub fn phi(&self, alpha: f64) -> f64 {
        if alpha == 0.0 {
            return self.killing;
        }
        let jumps = match self.family {
            SubordinatorFamily::Stable { index, scale } => scale * gamma(1.0 - index) * libm::pow(alpha, index),
            SubordinatorFamily::PureDrift => 0.0,
        };
        alpha * self.drift + jumps + self.killing
    }

    /// Same exponent with the Laplace transform of `ν̄` done by quadrature.
    pub fn phi_quadrature(&self, alpha: f64, cfg: &QuadratureConfig) -> f64 {
        if alpha == 0.0 {
            return self.killing;
        }
        let f = |t: f64| alpha * libm::exp(-alpha * t) * self.tail(t);
        // ν̄(t) ~ t^{−index} at 0, flattened by t = u^{1/(1−index)}.
        let k = match self.family {
            SubordinatorFamily::Stable { index, .. } => 1.0 / (1.0 - index),
            SubordinatorFamily::PureDrift => 1.0,
        };
        let head = integrate(|u| if u <= 0.0 { 0.0 } else { f(libm::pow(u, k)) * k * libm::pow(u, k - 1.0) }, 0.0, 1.0, cfg);
        let tail = integrate_to_infinity(f, 1.0, 1.0 / alpha, cfg);
        alpha * self.drift + head.value + tail.value
    }

    /// Scale `σ_x` with `S_x − bx = σ_x·Y` on survival, `E e^{−λY} = e^{−λ^index}`.
    fn jump_scale(&self, x: f64) -> Option<(f64, f64)> {
        match self.family {
            SubordinatorFamily::Stable { index, scale } => {
                Some((index, libm::pow(x * scale * gamma(1.0 - index), 1.0 / index)))
            }
            SubordinatorFamily::PureDrift => None,
        }
    }

    /// Density of `S_x` at `s` on the event that `S` is not killed by time `x`.
    pub fn position_density(&self, x: f64, s: f64) -> f64 {
        let Some((index, sigma)) = self.jump_scale(x) else {
            return 0.0;
        };
        let y = (s - self.drift * x) / sigma;
        if !(y > 0.0) {
            return 0.0;
        }
        libm::exp(-self.killing * x) * positive_stable_density(index, y) / sigma
    }

    /// `P(S_x ≤ s)`, counting killing as `S_x = ∞`.
    pub fn position_cdf(&self, x: f64, s: f64) -> f64 {
        let survive = libm::exp(-self.killing * x);
        match self.jump_scale(x) {
            None => {
                if self.drift * x <= s {
                    survive
                } else {
                    0.0
                }
            }
            Some((index, sigma)) => {
                let y = (s - self.drift * x) / sigma;
                if !(y > 0.0) {
                    return 0.0;
                }
                survive * positive_stable_cdf(index, y)
            }
        }
    }
}

/// Density of `Y > 0` with `E e^{−λY} = e^{−λ^a}`, `a ∈ (0, 1)`.
pub fn positive_stable_density(index: f64, y: f64) -> f64 {
    if !(y > 0.0) {
        return 0.0;
    }
    if index == 0.5 {
        return libm::exp(-0.25 / y) / (2.0 * libm::sqrt(PI) * libm::pow(y, 1.5));
    }
    stable::unit_density_integral(index, 1.0, y)
}

/// Distribution function of [`positive_stable_density`].
pub fn positive_stable_cdf(index: f64, y: f64) -> f64 {
    if !(y > 0.0) {
        return 0.0;
    }
    if index == 0.5 {
        return libm::erfc(0.5 / libm::sqrt(y));
    }
    let cfg = QuadratureConfig::with_tolerances(1e-14, 1e-11);
    // The density vanishes faster than any power at 0, so split at the mode scale.
    let knee = y.min(1.0);
    let mut v = integrate(|u| positive_stable_density(index, u), 0.0, knee, &cfg).value;
    let mut a = knee;
    while a < y {
        let b = (4.0 * a).min(y);
        v += integrate(|u| positive_stable_density(index, u), a, b, &cfg).value;
        a = b;
    }
    v.min(1.0)
}

/// `Φ(α)` of a subordinator, closed form.
pub fn subordinator_phi(sub: &SubordinatorModel, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) {
        return Err(domain!("Laplace argument must be nonnegative, got {alpha}"));
    }
    Ok(sub.phi(alpha))
}

/// Density at `x` of `L_t = inf{x : S_x > t}` for a driftless subordinator:
/// `∫_{[0,t]} ν̄(t−s) P(S_x ∈ ds)`.
pub fn inverse_subordinator_density(sub: &SubordinatorModel, t: f64, x: f64) -> Result<f64> {
    if sub.drift > 0.0 {
        return Err(Error::Precondition(format!(
            "drift {} > 0: the law of the inverse has no density of this form; use the drifted identity check",
            sub.drift
        )));
    }
    if !(t > 0.0 && x > 0.0) {
        return Err(domain!("time and level must be positive, got ({t}, {x})"));
    }
    let Some((index, sigma)) = sub.jump_scale(x) else {
        // S stays at 0 until it is killed, so L_t is exponential.
        return Ok(sub.killing * libm::exp(-sub.killing * x));
    };
    Ok(tail_convolution(sub, index, sigma, t, x))
}

/// `∫_0^t ν̄(t−s) f_{S_x}(s) ds` with `f_{S_x}` the density on survival.
fn tail_convolution(sub: &SubordinatorModel, index: f64, sigma: f64, t: f64, x: f64) -> f64 {
    let cfg = QuadratureConfig::with_tolerances(1e-15, 1e-11);
    let f = |s: f64, r: f64| sub.tail(r) * sub.position_density(x, s);
    let shift = sub.drift * x;
    if shift >= t {
        return 0.0;
    }
    let half = 0.5 * (t + shift);
    let mut pts = vec![shift];
    pts.extend([0.1, 1.0, 10.0].iter().map(|k| shift + k * sigma).filter(|&p| p < half));
    pts.push(half);
    let head: f64 = pts.windows(2).map(|w| integrate(|s| f(s, t - s), w[0], w[1], &cfg).value).sum();
    // ν̄(r) ~ r^{−index} as r = t − s → 0, flattened by r = (t − half)·w^{1/(1−index)}.
    let span = t - half;
    let k = 1.0 / (1.0 - index);
    let last = integrate(
        |w| {
            if w <= 0.0 {
                return 0.0;
            }
            let r = span * libm::pow(w, k);
            let v = f(t - r, r) * span * k * libm::pow(w, k - 1.0);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        &cfg,
    );
    head + last.value
}

/// `E(1 − e^{−αS_x})` from the inverse density,
/// `∫_0^∞ α e^{−αt} P(L_t < x) dt`, against `1 − e^{−xΦ(α)}`.
pub fn subordinator_laplace_report(sub: &SubordinatorModel, alpha: f64, x: f64) -> Result<IdentityReport> {
    if !(alpha > 0.0 && x > 0.0) {
        return Err(domain!("Laplace argument and level must be positive, got ({alpha}, {x})"));
    }
    let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-9);
    // Surfaces the drift precondition before the nested quadrature.
    inverse_subordinator_density(sub, 1.0, x)?;
    let below = |t: f64| integrate(|y| inverse_subordinator_density(sub, t, y).unwrap_or(0.0), 0.0, x, &cfg).value;
    let g = |t: f64| alpha * libm::exp(-alpha * t) * below(t);
    let lhs = integrate(g, 0.0, 1.0 / alpha, &cfg).value + integrate_to_infinity(g, 1.0 / alpha, 1.0 / alpha, &cfg).value;
    let rhs = 1.0 - libm::exp(-x * sub.phi(alpha));
    Ok(IdentityReport::new("subordinator-laplace", sub.to_text(), vec![("alpha", alpha), ("x", x)], lhs - rhs, 1e-6))
}

/// Checks `P(S_x > t)dt = ∫_0^x ∫_{[0,t]} ν̄(t−s) P(S_y ∈ ds) dy dt + b∫_0^x P(S_y ∈ dt) dy`
/// as measures in `t`: the residual is the total-variation distance of the
/// two sides on `grid` (trapezoid rule), which must be ordered.
pub fn drifted_identity_report(sub: &SubordinatorModel, x: f64, grid: &[f64], tolerance: f64) -> Result<IdentityReport> {
    if !(x > 0.0) {
        return Err(domain!("level must be positive, got {x}"));
    }
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[0] < w[1])) || !(grid[0] > 0.0) {
        return Err(domain!("grid must be strictly increasing, positive and have at least 2 points"));
    }
    let cfg = QuadratureConfig::with_tolerances(1e-13, 1e-10);
    let lhs = |t: f64| 1.0 - sub.position_cdf(x, t);
    let rhs = |t: f64| -> f64 {
        match sub.jump_scale(1.0) {
            None => {
                // S_y = by on survival: the jump term is k∫_{by ≤ t} e^{−ky} dy and the
                // drift term carries the point y = t/b.
                let b = sub.drift;
                let k = sub.killing;
                let reach = if b > 0.0 { (t / b).min(x) } else { x };
                let killed = if k > 0.0 { -libm::expm1(-k * reach) } else { 0.0 };
                let hit = if b > 0.0 && t / b < x { libm::exp(-k * t / b) } else { 0.0 };
                killed + hit
            }
            Some((index, _)) => {
                let inner = |y: f64| -> f64 {
                    if y <= 0.0 {
                        return 0.0;
                    }
                    let (_, sigma) = sub.jump_scale(y).expect("stable family");
                    tail_convolution(sub, index, sigma, t, y) + sub.drift * sub.position_density(y, t)
                };
                let mut pts = vec![0.0];
                if sub.drift > 0.0 && t / sub.drift < x {
                    pts.push(t / sub.drift);
                }
                pts.push(x);
                pts.windows(2).map(|w| integrate(inner, w[0], w[1], &cfg).value).sum()
            }
        }
    };
    let diffs: Vec<f64> = grid.iter().map(|&t| (lhs(t) - rhs(t)).abs()).collect();
    let tv = 0.5 * grid.windows(2).zip(diffs.windows(2)).map(|(g, d)| 0.5 * (g[1] - g[0]) * (d[0] + d[1])).sum::<f64>();
    Ok(IdentityReport::new("drifted-subordinator", sub.to_text(), vec![("x", x)], tv, tolerance))
}
