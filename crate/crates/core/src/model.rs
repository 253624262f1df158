//! Catalog of parametric Lévy processes.
//!
//! Regularity types and ladder drifts are declared per family from classical
//! criteria rather than detected numerically:
//!
//! * Type 1: 0 regular for both half-lines, `d = d* = 0`;
//! * Type 2: 0 regular only for `(0, ∞)`, `d > 0 = d*`;
//! * Type 3: 0 regular only for `(−∞, 0)`, `d* = 1/γ > 0 = d` with
//!   `γ = (1 − E e^{−τ₀⁺})⁻¹`.
//!
//! Characteristic exponents follow `E e^{iλX_t} = e^{−tψ(λ)}`.
//!
//! # Text form
//!
//! Models round-trip through a flat `key=value` list separated by spaces:
//!
//! | family                   | keys                                             |
//! |--------------------------|--------------------------------------------------|
//! | `brownian`               | `drift`                                          |
//! | `cauchy`                 |                                                  |
//! | `stable`                 | `alpha`, `rho`                                   |
//! | `sn-stable`              | `alpha`                                          |
//! | `cpp`                    | `rate`, `jump_mean`, `jump_sign` (`+1`/`-1`), `drift` |
//!
//! e.g. `family=cpp rate=1 jump_mean=1 jump_sign=+1 drift=-1`.

use alloc::format;
use alloc::string::{String, ToString};
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, unsupported, Error, Result};
use crate::montecarlo::cpp;
use crate::montecarlo::rng::path_rng;
use crate::special::std_normal_cdf;
use crate::stable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    BrownianWithDrift,
    SymmetricCauchy,
    Stable,
    SpectrallyNegativeStable,
    CompoundPoissonWithDrift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regularity {
    Type1,
    Type2,
    Type3,
}

/// Sign of the exponentially distributed jumps of a compound Poisson model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JumpSign {
    Positive,
    Negative,
}

impl JumpSign {
    pub fn value(self) -> f64 {
        match self {
            JumpSign::Positive => 1.0,
            JumpSign::Negative => -1.0,
        }
    }
    fn flip(self) -> Self {
        match self {
            JumpSign::Positive => JumpSign::Negative,
            JumpSign::Negative => JumpSign::Positive,
        }
    }
}

/// Raw family parameters, before classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    /// `X_t = B_t + drift·t`.
    Brownian { drift: f64 },
    /// `ψ(λ) = |λ|`.
    Cauchy,
    /// Strictly stable with index `alpha` and positivity `rho = P(X_1 ≥ 0)`.
    Stable { alpha: f64, rho: f64 },
    /// Stable without positive jumps, `alpha ∈ (1, 2)`, `E e^{uX_1} = e^{u^α}`.
    SpectrallyNegative { alpha: f64 },
    /// `X_t = drift·t + Σ_{i ≤ N_t} sign·J_i`, `N` Poisson(rate), `J_i ~ Exp(mean jump_mean)`.
    CompoundPoisson { rate: f64, jump_mean: f64, jump_sign: JumpSign, drift: f64 },
}

/// Monte Carlo estimate of `E e^{−τ₀⁺}` for the side of a compound Poisson
/// model that creeps downward (its Type 3 orientation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstPassageEstimate {
    /// Estimate of `E e^{−τ₀⁺}`.
    pub laplace: f64,
    pub std_err: f64,
    pub seed: u64,
    pub samples: usize,
    /// Simulation horizon; `e^{−τ}` is treated as 0 beyond it.
    pub horizon: f64,
}

impl FirstPassageEstimate {
    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.laplace)
    }
}

/// Settings for the Monte Carlo estimate of `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEstimation {
    pub seed: u64,
    pub samples: usize,
    pub horizon: f64,
}

impl Default for GammaEstimation {
    fn default() -> Self {
        Self { seed: 0x6a09_e667_f3bc_c908, samples: 200_000, horizon: 40.0 }
    }
}

/// Fully classified process model. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessModel {
    params: ModelParams,
    family: Family,
    regularity: Regularity,
    ladder_drift: f64,
    ladder_drift_star: f64,
    killing_rate: f64,
    scaling_rho: Option<f64>,
    first_passage: Option<FirstPassageEstimate>,
}

/// Builds a classified model with the default `γ` estimation settings.
pub fn classify_model(params: ModelParams) -> Result<ProcessModel> {
    ProcessModel::new(params)
}

impl ProcessModel {
    pub fn new(params: ModelParams) -> Result<Self> {
        Self::with_gamma_estimation(params, GammaEstimation::default())
    }

    pub fn brownian(drift: f64) -> Result<Self> {
        Self::new(ModelParams::Brownian { drift })
    }

    pub fn cauchy() -> Self {
        Self::new(ModelParams::Cauchy).expect("the Cauchy model has no parameters")
    }

    pub fn stable(alpha: f64, rho: f64) -> Result<Self> {
        Self::new(ModelParams::Stable { alpha, rho })
    }

    pub fn spectrally_negative(alpha: f64) -> Result<Self> {
        Self::new(ModelParams::SpectrallyNegative { alpha })
    }

    pub fn compound_poisson(rate: f64, jump_mean: f64, jump_sign: JumpSign, drift: f64) -> Result<Self> {
        Self::new(ModelParams::CompoundPoisson { rate, jump_mean, jump_sign, drift })
    }

    pub fn with_gamma_estimation(params: ModelParams, est: GammaEstimation) -> Result<Self> {
        let params = canonical(params)?;
        match params {
            ModelParams::Brownian { drift } => {
                let root = libm::sqrt(drift * drift + 2.0);
                let killing = if drift < 0.0 { -2.0 * drift / (root - drift) } else { 0.0 };
                Ok(Self::type1(params, Family::BrownianWithDrift, killing, (drift == 0.0).then_some(0.5)))
            }
            ModelParams::Cauchy => Ok(Self::type1(params, Family::SymmetricCauchy, 0.0, Some(0.5))),
            ModelParams::Stable { rho, .. } => Ok(Self::type1(params, Family::Stable, 0.0, Some(rho))),
            ModelParams::SpectrallyNegative { alpha } => {
                Ok(Self::type1(params, Family::SpectrallyNegativeStable, 0.0, Some(1.0 / alpha)))
            }
            ModelParams::CompoundPoisson { rate, jump_mean, jump_sign, drift } => {
                // γ belongs to whichever of X, −X creeps downward.
                let down_params = ModelParams::CompoundPoisson {
                    rate,
                    jump_mean,
                    jump_sign: if drift < 0.0 { jump_sign } else { jump_sign.flip() },
                    drift: -drift.abs(),
                };
                let fp = estimate_first_passage(down_params, est)?;
                Ok(Self::cpp_from_estimate(params, fp, rate, jump_mean))
            }
        }
    }

    fn type1(params: ModelParams, family: Family, killing_rate: f64, scaling_rho: Option<f64>) -> Self {
        Self {
            params,
            family,
            regularity: Regularity::Type1,
            ladder_drift: 0.0,
            ladder_drift_star: 0.0,
            killing_rate,
            scaling_rho,
            first_passage: None,
        }
    }

    fn cpp_from_estimate(params: ModelParams, fp: FirstPassageEstimate, r: f64, m: f64) -> Self {
        let ModelParams::CompoundPoisson { drift, jump_sign, .. } = params else {
            unreachable!("compound Poisson parameters expected")
        };
        let gamma = fp.gamma();
        let delta = drift.abs();
        if drift < 0.0 {
            // Pollaczek–Khinchine: P(τ₀⁺ = ∞) = (1 − load)⁺, load = E(upward jump flux)/δ.
            let load = if jump_sign == JumpSign::Positive { r * m / delta } else { 0.0 };
            let killing = gamma * (1.0 - load).max(0.0);
            Self {
                params,
                family: Family::CompoundPoissonWithDrift,
                regularity: Regularity::Type3,
                ladder_drift: 0.0,
                ladder_drift_star: 1.0 / gamma,
                killing_rate: killing,
                scaling_rho: None,
                first_passage: Some(fp),
            }
        } else {
            // κ(q,0) = Φ(q)/Φ(1) with Φ the right inverse of the Laplace exponent.
            let killing = if jump_sign == JumpSign::Negative {
                sn_cpp_right_inverse(r, m, delta, 0.0) / sn_cpp_right_inverse(r, m, delta, 1.0)
            } else {
                0.0
            };
            Self {
                params,
                family: Family::CompoundPoissonWithDrift,
                regularity: Regularity::Type2,
                ladder_drift: 1.0 / gamma,
                ladder_drift_star: 0.0,
                killing_rate: killing,
                scaling_rho: None,
                first_passage: Some(fp),
            }
        }
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }
    pub fn family(&self) -> Family {
        self.family
    }
    pub fn regularity(&self) -> Regularity {
        self.regularity
    }
    /// Drift `d` of the ladder time process `τ`.
    pub fn ladder_drift(&self) -> f64 {
        self.ladder_drift
    }
    /// Drift `d*` of the dual ladder time process.
    pub fn ladder_drift_star(&self) -> f64 {
        self.ladder_drift_star
    }
    /// Killing rate `a` of `τ`; positive iff the process drifts to `−∞`.
    pub fn killing_rate(&self) -> f64 {
        self.killing_rate
    }
    /// `γ = (1 − E e^{−τ₀⁺})⁻¹`, present for Type 3 models.
    pub fn gamma(&self) -> Option<f64> {
        match self.regularity {
            Regularity::Type3 => self.first_passage.map(|f| f.gamma()),
            _ => None,
        }
    }
    /// The Monte Carlo record behind `γ` (or behind `d` for a Type 2 model).
    pub fn first_passage_estimate(&self) -> Option<FirstPassageEstimate> {
        self.first_passage
    }
    /// Index `ρ` of the scaling relations, present for self-similar models.
    pub fn scaling_rho(&self) -> Option<f64> {
        self.scaling_rho
    }
    /// Stability index for self-similar models (2 for driftless Brownian motion).
    pub fn scaling_alpha(&self) -> Option<f64> {
        match self.params {
            ModelParams::Brownian { drift } if drift == 0.0 => Some(2.0),
            ModelParams::Cauchy => Some(1.0),
            ModelParams::Stable { alpha, .. } | ModelParams::SpectrallyNegative { alpha } => Some(alpha),
            _ => None,
        }
    }
    /// `(α, ρ)` for the stable-type families (Cauchy, stable, spectrally negative).
    pub fn stable_params(&self) -> Option<(f64, f64)> {
        match self.params {
            ModelParams::Cauchy => Some((1.0, 0.5)),
            ModelParams::Stable { alpha, rho } => Some((alpha, rho)),
            ModelParams::SpectrallyNegative { alpha } => Some((alpha, 1.0 / alpha)),
            _ => None,
        }
    }

    /// `ψ(λ)` with `E e^{iλX_t} = e^{−tψ(λ)}`.
    pub fn char_exponent(&self, lambda: f64) -> Complex64 {
        char_exponent(self, lambda)
    }

    /// `P(X_1 ≥ 0)`.
    pub fn positivity_param(&self) -> Result<f64> {
        positivity_param(self)
    }

    /// The model of `−X`.
    pub fn dual(&self) -> ProcessModel {
        dual_model(self)
    }

    /// Density of `X_t` where a closed form or the stable evaluator is available.
    pub fn marginal_density(&self, t: f64, x: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(domain!("time must be positive, got {t}"));
        }
        match self.params {
            ModelParams::Brownian { drift } => Ok(crate::special::normal_pdf(x, drift * t, t)),
            ModelParams::CompoundPoisson { .. } => Err(unsupported!("compound Poisson marginals have an atom")),
            _ => {
                let (a, r) = self.stable_params().expect("stable-type model");
                Ok(stable::density(a, r, t, x))
            }
        }
    }

    /// Flat `key=value` description (see the module docs).
    pub fn to_text(&self) -> String {
        params_to_text(&self.params)
    }

    pub fn from_text(s: &str) -> Result<Self> {
        Self::new(params_from_text(s)?)
    }
}

fn canonical(p: ModelParams) -> Result<ModelParams> {
    let finite = |v: f64, name: &str| {
        if v.is_finite() {
            Ok(())
        } else {
            Err(domain!("{name} must be finite, got {v}"))
        }
    };
    match p {
        ModelParams::Brownian { drift } => {
            finite(drift, "drift")?;
            // −0.0 and 0.0 must classify identically.
            Ok(ModelParams::Brownian { drift: drift + 0.0 })
        }
        ModelParams::Cauchy => Ok(p),
        ModelParams::Stable { alpha, rho } => {
            stable::check_params(alpha, rho)?;
            // 1 − (1 − ρ) is exact after one pass, so duality is an exact involution.
            let rho = 1.0 - (1.0 - rho);
            if alpha == 1.0 && rho == 0.5 {
                Ok(ModelParams::Cauchy)
            } else if alpha > 1.0 && alpha < 2.0 && rho == 1.0 / alpha {
                Ok(ModelParams::SpectrallyNegative { alpha })
            } else {
                Ok(ModelParams::Stable { alpha, rho })
            }
        }
        ModelParams::SpectrallyNegative { alpha } => {
            if !(alpha > 1.0 && alpha < 2.0) {
                return Err(domain!("spectrally negative stable index must lie in (1, 2), got {alpha}"));
            }
            Ok(p)
        }
        ModelParams::CompoundPoisson { rate, jump_mean, drift, .. } => {
            if !(rate > 0.0 && rate.is_finite()) {
                return Err(domain!("jump rate must be positive, got {rate}"));
            }
            if !(jump_mean > 0.0 && jump_mean.is_finite()) {
                return Err(domain!("jump mean must be positive, got {jump_mean}"));
            }
            finite(drift, "drift")?;
            if drift == 0.0 {
                return Err(domain!("a compound Poisson model needs a nonzero drift"));
            }
            Ok(p)
        }
    }
}

/// `Φ(q)`: largest root of `ψ(θ) = q` for `X_t = δt − Σ Exp(mean m)` jumps at rate `r`,
/// `ψ(θ) = δθ − rθm/(1+θm)`.
fn sn_cpp_right_inverse(r: f64, m: f64, delta: f64, q: f64) -> f64 {
    let a = delta * m;
    let b = delta - r * m - q * m;
    let disc = libm::sqrt(b * b + 4.0 * a * q);
    ((-b + disc) / (2.0 * a)).max(0.0)
}

/// Closed form of `E e^{−τ₀⁺}` for positive `Exp(mean m)` jumps at rate `r` and drift `−δ`.
pub fn cpp_first_passage_laplace(rate: f64, jump_mean: f64, delta: f64) -> f64 {
    1.0 - 1.0 / (delta * sn_cpp_right_inverse(rate, jump_mean, delta, 1.0))
}

fn estimate_first_passage(down: ModelParams, est: GammaEstimation) -> Result<FirstPassageEstimate> {
    if est.samples < 2 || !(est.horizon > 0.0) {
        return Err(domain!("gamma estimation needs at least 2 samples and a positive horizon"));
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for i in 0..est.samples {
        let mut rng = path_rng(est.seed, i as u64);
        let v = match cpp::first_passage_time(&down, est.horizon, &mut rng)? {
            Some(tau) => libm::exp(-tau),
            None => 0.0,
        };
        sum += v;
        sum_sq += v * v;
    }
    let n = est.samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(FirstPassageEstimate { laplace: mean, std_err: libm::sqrt(var / n), seed: est.seed, samples: est.samples, horizon: est.horizon })
}

/// `ψ(λ)` under the crate's fixed parameterization.
pub fn char_exponent(model: &ProcessModel, lambda: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    match model.params {
        ModelParams::Brownian { drift } => Complex64::new(0.5 * lambda * lambda, -drift * lambda),
        ModelParams::CompoundPoisson { rate, jump_mean, jump_sign, drift } => {
            let cf = Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - i * (lambda * jump_mean * jump_sign.value()));
            (Complex64::new(1.0, 0.0) - cf) * rate - i * (drift * lambda)
        }
        ModelParams::Cauchy => Complex64::new(lambda.abs(), 0.0),
        _ => {
            if lambda == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let (alpha, rho) = model.stable_params().expect("stable-type model");
            let angle = -PI * alpha * (rho - 0.5) * lambda.signum();
            Complex64::from_polar(libm::pow(lambda.abs(), alpha), angle)
        }
    }
}

/// `ρ = P(X_1 ≥ 0)`.
pub fn positivity_param(model: &ProcessModel) -> Result<f64> {
    match model.params {
        ModelParams::Brownian { drift } => Ok(std_normal_cdf(drift)),
        ModelParams::CompoundPoisson { .. } => Err(unsupported!("positivity parameter of a non-scaling family")),
        _ => Ok(model.stable_params().expect("stable-type model").1),
    }
}

/// The model of `−X`: types 2 and 3 swap, `d ↔ d*`, `ρ ↦ 1 − ρ`.
pub fn dual_model(model: &ProcessModel) -> ProcessModel {
    match model.params {
        ModelParams::Brownian { drift } => ProcessModel::brownian(-drift).expect("negated drift is valid"),
        ModelParams::Cauchy => model.clone(),
        ModelParams::Stable { alpha, rho } => {
            let dual_rho = 1.0 - rho;
            if alpha > 1.0 && alpha < 2.0 && dual_rho == 1.0 / alpha {
                ProcessModel::spectrally_negative(alpha).expect("valid index")
            } else {
                ProcessModel::stable(alpha, dual_rho).expect("reflected positivity is admissible")
            }
        }
        ModelParams::SpectrallyNegative { alpha } => {
            ProcessModel::stable(alpha, 1.0 - 1.0 / alpha).expect("spectrally positive law is admissible")
        }
        ModelParams::CompoundPoisson { rate, jump_mean, jump_sign, drift } => {
            let params = ModelParams::CompoundPoisson { rate, jump_mean, jump_sign: jump_sign.flip(), drift: -drift };
            let fp = model.first_passage.expect("compound Poisson models carry their estimate");
            ProcessModel::cpp_from_estimate(params, fp, rate, jump_mean)
        }
    }
}

fn params_to_text(p: &ModelParams) -> String {
    match *p {
        ModelParams::Brownian { drift } => format!("family=brownian drift={drift}"),
        ModelParams::Cauchy => "family=cauchy".to_string(),
        ModelParams::Stable { alpha, rho } => format!("family=stable alpha={alpha} rho={rho}"),
        ModelParams::SpectrallyNegative { alpha } => format!("family=sn-stable alpha={alpha}"),
        ModelParams::CompoundPoisson { rate, jump_mean, jump_sign, drift } => {
            let s = if jump_sign == JumpSign::Positive { "+1" } else { "-1" };
            format!("family=cpp rate={rate} jump_mean={jump_mean} jump_sign={s} drift={drift}")
        }
    }
}

/// Parses the flat `key=value` form.
pub fn params_from_text(s: &str) -> Result<ModelParams> {
    let mut family = None;
    let mut kv: alloc::vec::Vec<(&str, &str)> = alloc::vec::Vec::new();
    for tok in s.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got `{tok}`")))?;
        if k == "family" {
            family = Some(v);
        } else {
            kv.push((k, v));
        }
    }
    let get = |key: &str| -> Result<f64> {
        let v = kv
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Parse(format!("missing key `{key}`")))?;
        v.parse::<f64>().map_err(|_| Error::Parse(format!("`{key}` is not a number: `{v}`")))
    };
    let allowed: &[&str] = match family {
        Some("brownian") => &["drift"],
        Some("cauchy") => &[],
        Some("stable") => &["alpha", "rho"],
        Some("sn-stable") => &["alpha"],
        Some("cpp") => &["rate", "jump_mean", "jump_sign", "drift"],
        Some(f) => return Err(Error::Parse(format!("unknown family `{f}`"))),
        None => return Err(Error::Parse("missing key `family`".to_string())),
    };
    if let Some((k, _)) = kv.iter().find(|(k, _)| !allowed.contains(k)) {
        return Err(Error::Parse(format!("unexpected key `{k}`")));
    }
    Ok(match family.unwrap_or_default() {
        "brownian" => ModelParams::Brownian { drift: get("drift")? },
        "cauchy" => ModelParams::Cauchy,
        "stable" => ModelParams::Stable { alpha: get("alpha")?, rho: get("rho")? },
        "sn-stable" => ModelParams::SpectrallyNegative { alpha: get("alpha")? },
        _ => {
            let sign = get("jump_sign")?;
            let jump_sign = if sign == 1.0 {
                JumpSign::Positive
            } else if sign == -1.0 {
                JumpSign::Negative
            } else {
                return Err(Error::Parse(format!("jump_sign must be +1 or -1, got {sign}")));
            };
            ModelParams::CompoundPoisson { rate: get("rate")?, jump_mean: get("jump_mean")?, jump_sign, drift: get("drift")? }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> GammaEstimation {
        GammaEstimation { samples: 20_000, ..GammaEstimation::default() }
    }

    #[test]
    fn catalog_classification() {
        let bm = ProcessModel::brownian(0.0).unwrap();
        assert_eq!(bm.regularity(), Regularity::Type1);
        assert_eq!((bm.ladder_drift(), bm.ladder_drift_star()), (0.0, 0.0));
        let sn = ProcessModel::spectrally_negative(1.5).unwrap();
        assert_eq!(sn.regularity(), Regularity::Type1);
        assert_eq!(sn.positivity_param().unwrap(), 1.0 / 1.5);
        assert_eq!(ProcessModel::cauchy().positivity_param().unwrap(), 0.5);
        assert_eq!(bm.positivity_param().unwrap(), 0.5);
        assert!(ProcessModel::stable(2.5, 0.5).is_err());
        assert!(ProcessModel::compound_poisson(1.0, 1.0, JumpSign::Positive, 0.0).is_err());
    }

    #[test]
    fn cpp_gamma_matches_closed_form() {
        let p = ModelParams::CompoundPoisson { rate: 1.0, jump_mean: 1.0, jump_sign: JumpSign::Positive, drift: -1.0 };
        let m = ProcessModel::with_gamma_estimation(p, quick()).unwrap();
        assert_eq!(m.regularity(), Regularity::Type3);
        let fp = m.first_passage_estimate().unwrap();
        let exact = cpp_first_passage_laplace(1.0, 1.0, 1.0);
        // Golden-ratio closed form: E e^{−τ₀⁺} = 1 − 1/φ.
        assert!((exact - (1.0 - 2.0 / (1.0 + libm::sqrt(5.0)))).abs() < 1e-15);
        assert!((fp.laplace - exact).abs() < 4.0 * fp.std_err, "{fp:?} vs {exact}");
        assert_eq!(m.ladder_drift_star(), 1.0 / m.gamma().unwrap());
    }

    #[test]
    fn dual_swaps_types_and_drifts() {
        let p = ModelParams::CompoundPoisson { rate: 0.5, jump_mean: 1.0, jump_sign: JumpSign::Positive, drift: -1.0 };
        let m = ProcessModel::with_gamma_estimation(p, quick()).unwrap();
        let d = m.dual();
        assert_eq!(d.regularity(), Regularity::Type2);
        assert_eq!(d.ladder_drift(), m.ladder_drift_star());
        assert_eq!(d.ladder_drift_star(), m.ladder_drift());
        assert_eq!(d.dual(), m);
        assert!(m.killing_rate() > 0.0);
        assert_eq!(ProcessModel::brownian(0.3).unwrap().dual(), ProcessModel::brownian(-0.3).unwrap());
        let sn = ProcessModel::spectrally_negative(1.5).unwrap();
        assert_eq!(sn.dual().family(), Family::Stable);
        assert_eq!(sn.dual().dual(), sn);
    }

    #[test]
    fn exponents() {
        let bm = ProcessModel::brownian(0.7).unwrap();
        assert_eq!(bm.char_exponent(2.0), Complex64::new(2.0, -1.4));
        assert_eq!(ProcessModel::cauchy().char_exponent(-3.0), Complex64::new(3.0, 0.0));
        let sym = ProcessModel::stable(1.3, 0.5).unwrap();
        assert!((sym.char_exponent(2.0) - Complex64::new(libm::pow(2.0, 1.3), 0.0)).norm() < 1e-15);
        for m in [bm, sym, ProcessModel::spectrally_negative(1.5).unwrap()] {
            assert_eq!(m.char_exponent(0.0), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn sn_exponent_matches_laplace_exponent() {
        // E e^{uX} = e^{u^α} continued to u = iλ gives ψ(λ) = −(iλ)^α.
        let m = ProcessModel::spectrally_negative(1.5).unwrap();
        for lam in [0.3, 1.0, 2.5, -1.7] {
            let want = -Complex64::new(0.0, lam).powf(1.5);
            assert!((m.char_exponent(lam) - want).norm() < 1e-13, "{lam}");
        }
    }

    #[test]
    fn text_round_trip() {
        for s in ["family=brownian drift=0.5", "family=cauchy", "family=stable alpha=0.7 rho=0.4", "family=sn-stable alpha=1.5"] {
            let m = ProcessModel::from_text(s).unwrap();
            assert_eq!(m.to_text(), s);
        }
        assert!(params_from_text("family=brownian").is_err());
        assert!(params_from_text("family=brownian drift=1 alpha=2").is_err());
        assert!(params_from_text("family=levy").is_err());
        let p = params_from_text("family=cpp rate=1 jump_mean=1 jump_sign=+1 drift=-1").unwrap();
        assert_eq!(params_to_text(&p), "family=cpp rate=1 jump_mean=1 jump_sign=+1 drift=-1");
    }
}
