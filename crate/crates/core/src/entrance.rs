//! Entrance laws `q_t`, `q*_t` of the excursion measures of the reflected
//! processes, and their lifetime tails `n(t<ζ)`, `n*(t<ζ)`.
//!
//! The local time at the supremum is normalized by `κ(1,0) = 1`. Implemented
//! densities:
//!
//! | model                          | `q_t` (supremum side) | `q*_t` (infimum side) |
//! |--------------------------------|-----------------------|-----------------------|
//! | Brownian motion with drift `c` | closed form           | closed form           |
//! | symmetric Cauchy               | single integral       | same as `q_t`         |
//! | Gaussian stable (`α = 2`)      | scaled Brownian       | scaled Brownian       |
//! | spectrally negative stable     | n/a                   | `x·p_t(x)/t`          |
//! | spectrally positive stable     | `y·p_t(−y)/t`         | n/a                   |
//!
//! Lifetime tails are closed forms for every stable-type model, for Brownian
//! motion with drift, and for compound Poisson models of type 3 (and, by
//! duality, on the infimum side for type 2).

use core::f64::consts::{PI, SQRT_2};

use alloc::boxed::Box;
use alloc::sync::Arc;
use once_cell::race::OnceBox;

use crate::error::{domain, unsupported, Result};
use crate::model::{Family, JumpSign, ModelParams, ProcessModel, Regularity};
use crate::montecarlo::cpp::no_passage_probability;
use crate::quad::{integrate, integrate_to_infinity, QuadratureConfig};
use crate::special::{gamma, std_normal_cdf, CATALAN};
use crate::stable;

/// Which reflected process the excursion measure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Excursions of `X̄ − X`: measure `n`, entrance law `q_t`.
    Supremum,
    /// Excursions of `X − X̲`: measure `n*`, entrance law `q*_t`.
    Infimum,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Supremum => Side::Infimum,
            Side::Infimum => Side::Supremum,
        }
    }
}

/// Evaluator of one entrance law of a model.
#[derive(Debug, Clone)]
pub struct EntranceLaw {
    model: ProcessModel,
    side: Side,
    quad: QuadratureConfig,
}

impl EntranceLaw {
    pub fn new(model: ProcessModel, side: Side, quad: QuadratureConfig) -> Result<Self> {
        if !quad.is_valid() {
            return Err(domain!("invalid quadrature configuration"));
        }
        Ok(Self { model, side, quad })
    }

    /// `q_t` and `q*_t` of the same model.
    pub fn pair(model: &ProcessModel, quad: QuadratureConfig) -> Result<(Self, Self)> {
        Ok((Self::new(model.clone(), Side::Supremum, quad)?, Self::new(model.clone(), Side::Infimum, quad)?))
    }

    pub fn model(&self) -> &ProcessModel {
        &self.model
    }
    pub fn side(&self) -> Side {
        self.side
    }
    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quad
    }

    /// Whether [`density`](Self::density) is implemented for this model and side.
    pub fn has_density(&self) -> bool {
        density_route(&self.model, self.side).is_some()
    }

    /// Density of the entrance law at `x ≥ 0`; `0` at `x = 0`.
    pub fn density(&self, t: f64, x: f64) -> Result<f64> {
        entrance_density(self, t, x)
    }

    /// Mass `n(t<ζ)` (or `n*(t<ζ)`).
    pub fn lifetime_tail(&self, t: f64) -> Result<f64> {
        lifetime_tail(self, t)
    }

    /// `∫_0^x q_t(u) du`.
    pub fn cumulative(&self, t: f64, x: f64) -> Result<f64> {
        check_time(t)?;
        if !(x >= 0.0) {
            return Err(domain!("level must be nonnegative, got {x}"));
        }
        let route = density_route(&self.model, self.side).ok_or_else(|| self.unsupported())?;
        if x == 0.0 {
            return Ok(0.0);
        }
        if x == f64::INFINITY {
            return self.lifetime_tail(t);
        }
        Ok(match route {
            Route::Brownian { mu, scale } => brownian_cumulative(mu, t, x / scale),
            Route::Cauchy => cauchy_unit_cumulative(x / t) / libm::sqrt(t),
            _ => {
                // Geometric panels around the natural scale t^{1/α}, so the
                // mass near 0 is resolved even for very large x.
                let cfg = self.quad;
                let alpha = self.model.scaling_alpha().unwrap_or(2.0);
                let mut edge = libm::pow(t, 1.0 / alpha) * 1e-4;
                let mut lo = 0.0;
                let mut total = 0.0;
                while lo < x {
                    let hi = if edge < x { edge } else { x };
                    total += integrate(|u| route.eval(t, u), lo, hi, &cfg).value;
                    lo = hi;
                    edge *= 4.0;
                }
                total.max(0.0)
            }
        })
    }

    fn unsupported(&self) -> crate::Error {
        unsupported!("no {:?}-side entrance density for {}", self.side, self.model.to_text())
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain!("time must be positive and finite, got {t}"))
    }
}

/// Evaluation route of a density, resolved once per call.
#[derive(Debug, Clone, Copy)]
enum Route {
    /// `K(μ)·x/√(πt³)·e^{−(x−μt)²/2t}` after the space change `x ↦ x/scale`.
    Brownian { mu: f64, scale: f64 },
    Cauchy,
    /// `x·p_t(sign·x)/t` for a stable law without jumps towards `sign·∞`.
    OneSided { alpha: f64, rho: f64, sign: f64 },
}

impl Route {
    fn eval(self, t: f64, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let v = match self {
            Route::Brownian { mu, scale } => brownian_density(mu, t, x / scale) / scale,
            Route::Cauchy => libm::pow(t, -1.5) * cauchy_unit_entrance(x / t),
            Route::OneSided { alpha, rho, sign } => x / t * stable::density(alpha, rho, t, sign * x),
        };
        v.max(0.0)
    }
}

fn density_route(model: &ProcessModel, side: Side) -> Option<Route> {
    match model.params() {
        ModelParams::Brownian { drift } => {
            let mu = if side == Side::Supremum { -drift } else { drift };
            Some(Route::Brownian { mu, scale: 1.0 })
        }
        ModelParams::Cauchy => Some(Route::Cauchy),
        ModelParams::Stable { alpha, rho } if alpha == 2.0 => {
            let _ = rho;
            Some(Route::Brownian { mu: 0.0, scale: SQRT_2 })
        }
        ModelParams::SpectrallyNegative { alpha } if side == Side::Infimum => {
            Some(Route::OneSided { alpha, rho: 1.0 / alpha, sign: 1.0 })
        }
        ModelParams::Stable { alpha, rho } if side == Side::Supremum && is_spectrally_positive(alpha, rho) => {
            Some(Route::OneSided { alpha, rho, sign: -1.0 })
        }
        _ => None,
    }
}

fn is_spectrally_positive(alpha: f64, rho: f64) -> bool {
    alpha > 1.0 && alpha < 2.0 && (rho - (1.0 - 1.0 / alpha)).abs() <= 1e-15
}

/// Density of `q_t` (side `Supremum`) or `q*_t` (side `Infimum`) at `x`.
pub fn entrance_density(law: &EntranceLaw, t: f64, x: f64) -> Result<f64> {
    check_time(t)?;
    if !(x >= 0.0) {
        return Err(domain!("level must be nonnegative, got {x}"));
    }
    let route = density_route(&law.model, law.side).ok_or_else(|| law.unsupported())?;
    Ok(route.eval(t, x))
}

/// `n(t<ζ)` (side `Supremum`) or `n*(t<ζ)` (side `Infimum`).
pub fn lifetime_tail(law: &EntranceLaw, t: f64) -> Result<f64> {
    check_time(t)?;
    let model = &law.model;
    if let Some((_, rho)) = model.stable_params() {
        let r = if law.side == Side::Supremum { rho } else { 1.0 - rho };
        return Ok(libm::pow(t, -r) / gamma(1.0 - r));
    }
    match model.params() {
        ModelParams::Brownian { drift } => {
            let mu = if law.side == Side::Supremum { -drift } else { drift };
            Ok(brownian_lifetime(mu, t))
        }
        ModelParams::CompoundPoisson { .. } => {
            // d*·n(t<ζ) = P(τ₀⁺ > t) on the creeping-down orientation.
            let oriented = if law.side == Side::Supremum { model.clone() } else { model.dual() };
            if oriented.regularity() != Regularity::Type3 {
                return Err(law.unsupported());
            }
            let ModelParams::CompoundPoisson { rate, jump_mean, jump_sign, drift } = oriented.params() else {
                unreachable!("dual of a compound Poisson model")
            };
            let stay = match jump_sign {
                JumpSign::Positive => no_passage_probability(rate, jump_mean, -drift, t),
                JumpSign::Negative => 1.0,
            };
            Ok(oriented.gamma().expect("type 3 models carry gamma") * stay)
        }
        _ => unreachable!("stable-type models handled above"),
    }
}

/// Unit-time marginal density `p_1(x)` of a stable-type model.
pub fn stable_unit_density(model: &ProcessModel, x: f64) -> Result<f64> {
    match model.params() {
        ModelParams::Cauchy => Ok(1.0 / (PI * (1.0 + x * x))),
        ModelParams::Stable { alpha, rho } => Ok(stable::unit_density(alpha, rho, x)),
        ModelParams::SpectrallyNegative { alpha } => Ok(stable::unit_density(alpha, 1.0 / alpha, x)),
        _ => Err(unsupported!("{} is not a stable-type model", model.to_text())),
    }
}

const TABLE_NODES: usize = 2400;
const TABLE_LO: f64 = 1e-6;
const TABLE_HI: f64 = 1e6;

/// `C(u) = ∫_0^u q_1(v) dv` of a self-similar model on a geometric grid, with
/// cubic Hermite interpolation (the density supplies the slopes) and
/// power-law extrapolation beyond both ends.
#[derive(Debug, Clone)]
pub struct CumulativeTable {
    log_lo: f64,
    step: f64,
    nodes: Box<[f64]>,
    values: Box<[f64]>,
    slopes: Box<[f64]>,
    mass: f64,
    head_exp: f64,
    tail_exp: f64,
}

impl CumulativeTable {
    /// Tabulates the unit-time entrance law of `law`.
    pub fn build(law: &EntranceLaw) -> Result<Self> {
        let route = density_route(&law.model, law.side).ok_or_else(|| law.unsupported())?;
        let q = |u: f64| route.eval(1.0, u);
        let cfg = QuadratureConfig::with_tolerances(1e-15, 1e-12);
        let log_lo = libm::log(TABLE_LO);
        let step = (libm::log(TABLE_HI) - log_lo) / (TABLE_NODES - 1) as f64;
        let nodes: alloc::vec::Vec<f64> = (0..TABLE_NODES).map(|k| libm::exp(log_lo + step * k as f64)).collect();
        let mut values = alloc::vec![0.0; TABLE_NODES];
        let mut slopes = alloc::vec![0.0; TABLE_NODES];
        slopes[0] = q(nodes[0]);
        values[0] = integrate(q, 0.0, nodes[0], &cfg).value;
        if let Route::Cauchy = route {
            for k in 1..TABLE_NODES {
                slopes[k] = q(nodes[k]);
                values[k] = cauchy_unit_cumulative(nodes[k]);
            }
        }
        for k in (1..TABLE_NODES).filter(|_| !matches!(route, Route::Cauchy)) {
            if slopes[k - 1] == 0.0 {
                values[k] = values[k - 1];
                continue;
            }
            slopes[k] = q(nodes[k]);
            // Past this point a light tail no longer moves the cumulative.
            values[k] = if slopes[k - 1] * nodes[k - 1] < 1e-20 * values[k - 1] {
                values[k - 1]
            } else {
                values[k - 1] + integrate(q, nodes[k - 1], nodes[k], &cfg).value
            };
        }
        let mass = law.lifetime_tail(1.0)?;
        let head_exp = if values[0] > 0.0 { nodes[0] * slopes[0] / values[0] } else { 1.0 };
        let rest = mass - values[TABLE_NODES - 1];
        let tail_exp = if rest > 0.0 { (TABLE_HI * slopes[TABLE_NODES - 1] / rest).max(1e-3) } else { f64::INFINITY };
        Ok(Self {
            log_lo,
            step,
            nodes: nodes.into_boxed_slice(),
            values: values.into_boxed_slice(),
            slopes: slopes.into_boxed_slice(),
            mass,
            head_exp,
            tail_exp,
        })
    }

    /// Table for `law`; the symmetric Cauchy law shares one table per process.
    pub fn for_law(law: &EntranceLaw) -> Result<Arc<Self>> {
        if law.model.family() == Family::SymmetricCauchy {
            static CAUCHY: OnceBox<Arc<CumulativeTable>> = OnceBox::new();
            if let Some(t) = CAUCHY.get() {
                return Ok(t.clone());
            }
            let built = Arc::new(Self::build(law)?);
            return Ok(CAUCHY.get_or_init(|| Box::new(built)).clone());
        }
        Ok(Arc::new(Self::build(law)?))
    }

    /// Total mass `n(1<ζ)`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Interpolated density `q_1(u)`: cubic in log-log coordinates with
    /// five-point slopes, linear where a neighbour vanishes.
    pub fn density(&self, u: f64) -> f64 {
        if !(u > 0.0) {
            return 0.0;
        }
        let last = TABLE_NODES - 1;
        if u < TABLE_LO {
            return self.values[0] * self.head_exp / u * libm::pow(u / TABLE_LO, self.head_exp);
        }
        if u >= TABLE_HI {
            let rest = (self.mass - self.values[last]).max(0.0);
            return rest * self.tail_exp / u * libm::pow(TABLE_HI / u, self.tail_exp);
        }
        let z = (libm::log(u) - self.log_lo) / self.step;
        let k = (z as usize).min(last - 1);
        let f = z - k as f64;
        let q = &self.slopes;
        let lo = k.saturating_sub(2);
        let hi = (k + 3).min(last);
        if q[lo..=hi].iter().any(|&v| !(v > 0.0)) {
            return (1.0 - f) * q[k] + f * q[k + 1];
        }
        let l = |j: usize| libm::log(q[j]);
        let d = |j: usize| {
            if j >= 2 && j + 2 <= last {
                (l(j - 2) - 8.0 * l(j - 1) + 8.0 * l(j + 1) - l(j + 2)) / 12.0
            } else {
                let (a, b) = (j.saturating_sub(1), (j + 1).min(last));
                (l(b) - l(a)) / (b - a) as f64
            }
        };
        let (h00, h10, h01, h11) = hermite_basis(f);
        libm::exp(h00 * l(k) + h10 * d(k) + h01 * l(k + 1) + h11 * d(k + 1))
    }

    pub fn eval(&self, u: f64) -> f64 {
        if !(u > 0.0) {
            return 0.0;
        }
        let last = TABLE_NODES - 1;
        if u < TABLE_LO {
            return self.values[0] * libm::pow(u / TABLE_LO, self.head_exp);
        }
        if u >= TABLE_HI {
            let rest = (self.mass - self.values[last]).max(0.0);
            return self.mass - rest * libm::pow(TABLE_HI / u, self.tail_exp);
        }
        let z = (libm::log(u) - self.log_lo) / self.step;
        let k = (z as usize).min(last - 1);
        let (a, b) = (self.nodes[k], self.nodes[k + 1]);
        let h = b - a;
        let (h00, h10, h01, h11) = hermite_basis((u - a) / h);
        let v = h00 * self.values[k] + h10 * h * self.slopes[k] + h01 * self.values[k + 1] + h11 * h * self.slopes[k + 1];
        v.clamp(self.values[k], self.values[k + 1])
    }
}

/// `K(μ) = √2/(√(μ²+2)+μ)`, the constant making `κ(1,0) = 1`.
fn brownian_norm(mu: f64) -> f64 {
    let root = libm::sqrt(mu * mu + 2.0);
    if mu >= 0.0 {
        SQRT_2 / (root + mu)
    } else {
        (root - mu) / SQRT_2
    }
}

fn brownian_density(mu: f64, t: f64, x: f64) -> f64 {
    let z = x - mu * t;
    brownian_norm(mu) * x / libm::sqrt(PI * t * t * t) * libm::exp(-0.5 * z * z / t)
}

fn brownian_lifetime(mu: f64, t: f64) -> f64 {
    let st = libm::sqrt(t);
    brownian_norm(mu) * (libm::exp(-0.5 * mu * mu * t) / libm::sqrt(PI * t) + mu * SQRT_2 * std_normal_cdf(mu * st))
}

/// `∫_0^x` of the Brownian entrance density with drift `mu`.
fn brownian_cumulative(mu: f64, t: f64, x: f64) -> f64 {
    let st = libm::sqrt(t);
    let m = mu * t;
    let gauss = libm::exp(-0.5 * mu * m) - libm::exp(-0.5 * (x - m) * (x - m) / t);
    let normal = std_normal_cdf((x - m) / st) - std_normal_cdf(-mu * st);
    (brownian_norm(mu) * (gauss / libm::sqrt(PI * t) + mu * SQRT_2 * normal)).max(0.0)
}

/// `∫_0^∞ log(y+s)/(1+s²) ds`, folded onto `[0, 1]` by `s ↦ 1/s`.
fn cauchy_log_integral(y: f64) -> f64 {
    let cfg = QuadratureConfig::with_tolerances(1e-16, 1e-14);
    // s = u² softens the logarithm at s = 0 when y = 0.
    let f = |u: f64| {
        let s = u * u;
        2.0 * u * (libm::log(y + s) + libm::log1p(y * s)) / (1.0 + s * s)
    };
    integrate(f, 0.0, 1.0, &cfg).value + CATALAN
}

/// `g(y) = exp(−(1/π)∫_0^∞ log(y+s)/(1+s²) ds)` by direct quadrature.
pub fn cauchy_inner_factor_direct(y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(domain!("inner factor needs y >= 0, got {y}"));
    }
    if y == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(libm::exp(-cauchy_log_integral(y) / PI))
}

/// `d log g / d log y = −y(πy/2 − log y)/(π(1+y²))`.
fn cauchy_log_slope(y: f64) -> f64 {
    -y * (0.5 * PI * y - libm::log(y)) / (PI * (1.0 + y * y))
}

const MEMO_NODES: usize = 512;
const MEMO_LO: f64 = 1e-6;
const MEMO_HI: f64 = 1e6;

/// Table of `log g` on a geometric grid, interpolated by monotone cubic
/// Hermite splines in `(log y, log g)`.
#[derive(Debug)]
pub struct CauchyInnerFactor {
    log_lo: f64,
    step: f64,
    values: Box<[f64]>,
    slopes: Box<[f64]>,
}

impl CauchyInnerFactor {
    pub fn build() -> Self {
        let log_lo = libm::log(MEMO_LO);
        let step = (libm::log(MEMO_HI) - log_lo) / (MEMO_NODES - 1) as f64;
        let mut values = alloc::vec![0.0; MEMO_NODES];
        let mut slopes = alloc::vec![0.0; MEMO_NODES];
        for k in 0..MEMO_NODES {
            let y = libm::exp(log_lo + step * k as f64);
            values[k] = -cauchy_log_integral(y) / PI;
            slopes[k] = cauchy_log_slope(y);
        }
        // Fritsch–Carlson limiter keeps each cell monotone.
        for k in 0..MEMO_NODES - 1 {
            let secant = (values[k + 1] - values[k]) / step;
            if secant == 0.0 {
                slopes[k] = 0.0;
                slopes[k + 1] = 0.0;
                continue;
            }
            let (a, b) = (slopes[k] / secant, slopes[k + 1] / secant);
            let r = a * a + b * b;
            if r > 9.0 {
                let tau = 3.0 / libm::sqrt(r);
                slopes[k] = tau * a * secant;
                slopes[k + 1] = tau * b * secant;
            }
        }
        Self { log_lo, step, values: values.into_boxed_slice(), slopes: slopes.into_boxed_slice() }
    }

    /// The process-wide table, built on first use.
    pub fn shared() -> &'static Self {
        static TABLE: OnceBox<CauchyInnerFactor> = OnceBox::new();
        TABLE.get_or_init(|| Box::new(Self::build()))
    }

    /// `g(y)`; values outside `[1e-6, 1e6]` fall back to direct quadrature.
    pub fn eval(&self, y: f64) -> f64 {
        if !(y >= MEMO_LO && y <= MEMO_HI) {
            return cauchy_inner_factor_direct(y).unwrap_or(f64::NAN);
        }
        let z = (libm::log(y) - self.log_lo) / self.step;
        let k = (z as usize).min(MEMO_NODES - 2);
        let u = z - k as f64;
        let (h00, h10, h01, h11) = hermite_basis(u);
        let v = h00 * self.values[k]
            + h10 * self.step * self.slopes[k]
            + h01 * self.values[k + 1]
            + h11 * self.step * self.slopes[k + 1];
        libm::exp(v)
    }
}

fn hermite_basis(u: f64) -> (f64, f64, f64, f64) {
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0, u3 - 2.0 * u2 + u, -2.0 * u3 + 3.0 * u2, u3 - u2)
}

/// `g(y)` through the shared table.
pub fn cauchy_inner_factor(y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(domain!("inner factor needs y >= 0, got {y}"));
    }
    if y == 0.0 {
        return Ok(1.0);
    }
    Ok(CauchyInnerFactor::shared().eval(y))
}

/// Normalizing constant of the symmetric Cauchy entrance law. The bracketed
/// expression below integrates to 2 over `(0, ∞)` at `t = 1`, while
/// `κ(1,0) = 1` requires total mass `1/Γ(1/2)`.
const CAUCHY_NORM: f64 = 0.282_094_791_773_878_143_474_039_725_780_386_292_922_025_314_664_5;

/// `q_1(x)` for the symmetric Cauchy process.
pub fn cauchy_unit_entrance(x: f64) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    let table = CauchyInnerFactor::shared();
    let lead = SQRT_2 * libm::sin(PI / 8.0 + 1.5 * libm::atan(x)) / libm::pow(1.0 + x * x, 0.75);
    let cfg = QuadratureConfig::with_tolerances(1e-15, 1e-12);
    // y ∈ (0, 1] directly, y ∈ [1, ∞) through y = 1/v².
    let near = integrate(|y| y * table.eval(y) / ((1.0 + y * y) * libm::pow(x * y + 1.0, 1.5)), 0.0, 1.0, &cfg).value;
    let far = integrate(
        |v| {
            if v <= 0.0 {
                return 0.0;
            }
            let v2 = v * v;
            2.0 * v2 * table.eval(1.0 / v2) / ((v2 * v2 + 1.0) * libm::pow(x + v2, 1.5))
        },
        0.0,
        1.0,
        &cfg,
    )
    .value;
    (CAUCHY_NORM * (lead - (near + far) / PI)).max(0.0)
}

/// `∫_0^u q_1(x) dx` for the symmetric Cauchy law, integrating over `x` in
/// closed form inside the correction term.
pub fn cauchy_unit_cumulative(u: f64) -> f64 {
    if !(u > 0.0) {
        return 0.0;
    }
    let cfg = QuadratureConfig::with_tolerances(1e-16, 1e-13);
    let lead_at = |th: f64| SQRT_2 * libm::sin(PI / 8.0 + 1.5 * th);
    // The leading term in θ = atan x; past π/4 in w² = π/2 − θ, which removes
    // the (π/2 − θ)^{−1/2} endpoint behaviour.
    let quarter = PI / 4.0;
    let th1 = libm::atan(u);
    let mut lead = integrate(|th| lead_at(th) / libm::sqrt(libm::cos(th)), 0.0, th1.min(quarter), &cfg).value;
    if th1 > quarter {
        let w_lo = libm::sqrt(libm::atan(1.0 / u));
        lead += integrate(
            |w| {
                if w <= 0.0 {
                    return 2.0 * lead_at(PI / 2.0);
                }
                let w2 = w * w;
                2.0 * w * lead_at(PI / 2.0 - w2) / libm::sqrt(libm::sin(w2))
            },
            w_lo,
            libm::sqrt(quarter),
            &cfg,
        )
        .value;
    }
    // 1 − (1+z)^{−1/2} without cancellation.
    let gap = |z: f64| {
        let r = libm::sqrt(1.0 + z);
        z / (r * (1.0 + r))
    };
    let table = CauchyInnerFactor::shared();
    let near_f = |y: f64| table.eval(y) / (1.0 + y * y) * gap(u * y);
    let far_f = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let v2 = v * v;
        2.0 * v * table.eval(1.0 / v2) / (v2 * v2 + 1.0) * gap(u / v2)
    };
    // The factor (1+uy)^{−1/2} turns over at y = 1/u.
    let knee = 1.0 / u;
    let near = if knee < 1.0 {
        integrate(near_f, 0.0, knee, &cfg).value + integrate(near_f, knee, 1.0, &cfg).value
    } else {
        integrate(near_f, 0.0, 1.0, &cfg).value
    };
    let far = if knee > 1.0 {
        let vk = libm::sqrt(u);
        integrate(far_f, 0.0, vk, &cfg).value + integrate(far_f, vk, 1.0, &cfg).value
    } else {
        integrate(far_f, 0.0, 1.0, &cfg).value
    };
    (CAUCHY_NORM * (lead - 2.0 / PI * (near + far))).max(0.0)
}

/// `∫_0^∞ q_1(x) dx` for the symmetric Cauchy law by quadrature; equals
/// `1/Γ(1/2)` under the normalization in use.
pub fn cauchy_unit_mass(cfg: &QuadratureConfig) -> f64 {
    integrate(cauchy_unit_entrance, 0.0, 1.0, cfg).value + integrate_to_infinity(cauchy_unit_entrance, 1.0, 1.0, cfg).value
}
