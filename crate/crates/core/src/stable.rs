//! Strictly stable laws in the `(α, ρ)` parameterization.
//!
//! `E exp(iλX_1) = exp(−|λ|^α exp(−iπα(ρ−1/2) sgn λ))` for `α ≠ 1`; at `α = 1`
//! the same formula gives a Cauchy law with scale `sin πρ` and location
//! `−cos πρ`. `ρ = P(X_1 ≥ 0)` throughout. `α = 2` is the Gaussian with
//! variance 2.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{domain, Result};
use crate::precise;
use crate::quad::{integrate, QuadratureConfig};
use crate::special::{gamma, ln_gamma, normal_pdf, sin_pi};

/// Largest tolerated ratio between the biggest series term and the sum before
/// the double-precision series is abandoned for the integral representation.
const SERIES_CANCELLATION_LIMIT: f64 = 1e4;

/// Checks that `(α, ρ)` describes a strictly stable law.
pub fn check_params(alpha: f64, rho: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(domain!("stability index must lie in (0, 2], got {alpha}"));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(domain!("positivity parameter must lie in (0, 1), got {rho}"));
    }
    if alpha == 2.0 && rho != 0.5 {
        return Err(domain!("the Gaussian case requires rho = 1/2, got {rho}"));
    }
    if alpha > 1.0 && (rho < 1.0 - 1.0 / alpha - 1e-15 || rho > 1.0 / alpha + 1e-15) {
        return Err(domain!("for alpha = {alpha} rho must lie in [1 - 1/alpha, 1/alpha], got {rho}"));
    }
    Ok(())
}

/// Density of `X_1` at `x`, choosing the evaluation route automatically.
pub fn unit_density(alpha: f64, rho: f64, x: f64) -> f64 {
    if alpha == 2.0 {
        return normal_pdf(x, 0.0, 2.0);
    }
    if alpha == 1.0 {
        let (scale, loc) = (sin_pi(rho), -sin_pi(rho + 0.5));
        let z = (x - loc) / scale;
        return 1.0 / (PI * scale * (1.0 + z * z));
    }
    if x == 0.0 {
        return gamma(1.0 + 1.0 / alpha) * sin_pi(rho) / PI;
    }
    if alpha > 1.0 {
        if let Some(s) = unit_density_series(alpha, rho, x, 512) {
            if s.max_term <= SERIES_CANCELLATION_LIMIT * s.value.abs() {
                return s.value.max(0.0);
            }
        }
    }
    unit_density_integral(alpha, rho, x)
}

/// Density of `X_t = t^{1/α} X_1`.
pub fn density(alpha: f64, rho: f64, t: f64, x: f64) -> f64 {
    let sc = libm::pow(t, 1.0 / alpha);
    unit_density(alpha, rho, x / sc) / sc
}

/// Result of the double-precision power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Largest absolute term; its ratio to `value` measures cancellation.
    pub max_term: f64,
    pub terms: usize,
}

/// Convergent power series of the unit density for `α ∈ (1, 2)`:
/// `p(x) = (1/π) Σ_{n≥1} Γ(1+n/α)/n! · sin(πn(1−ρ)) · x^{n−1}`.
///
/// Returns `None` when the series has not converged within `cap` terms.
pub fn unit_density_series(alpha: f64, rho: f64, x: f64, cap: usize) -> Option<SeriesValue> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return None;
    }
    let lx = libm::log(x.abs());
    let neg = x < 0.0;
    let mut sum = 0.0;
    let mut max_term: f64 = 0.0;
    let mut prev_mag = f64::INFINITY;
    for n in 1..=cap {
        let nf = n as f64;
        let lmag = ln_gamma(1.0 + nf / alpha) - ln_gamma(nf + 1.0) + (nf - 1.0) * lx;
        let mag = if x == 0.0 && n > 1 { 0.0 } else { libm::exp(lmag) };
        let sign = if neg && n % 2 == 0 { -1.0 } else { 1.0 };
        let term = sign * mag * sin_pi(nf * (1.0 - rho));
        sum += term;
        max_term = max_term.max(term.abs());
        if n >= 8 && mag < prev_mag && mag <= 1e-17 * sum.abs().max(1e-300) {
            return Some(SeriesValue { value: sum / PI, max_term: max_term / PI, terms: n });
        }
        prev_mag = mag;
    }
    None
}

/// Unit density from the single-integral representation of Zolotarev, valid for `α ≠ 1`.
pub fn unit_density_integral(alpha: f64, rho: f64, x: f64) -> f64 {
    if x < 0.0 {
        return unit_density_integral(alpha, 1.0 - rho, -x);
    }
    if x == 0.0 {
        return gamma(1.0 + 1.0 / alpha) * sin_pi(rho) / PI;
    }
    let skew = PI * alpha * (rho - 0.5);
    let sigma = libm::pow(libm::cos(skew), 1.0 / alpha);
    let y = x / sigma;
    let e1 = 1.0 / (alpha - 1.0);
    let e2 = alpha / (alpha - 1.0);
    let c0 = libm::pow(libm::cos(skew), e1);
    let ly = e2 * libm::log(y);
    let span = PI * rho;
    let gap = if alpha > 1.0 { (1.0 - alpha * rho).max(0.0) } else { 1.0 - alpha * rho };
    // The angle is measured by its distances `u` and `v = πρ − u` to the two
    // ends of the range, so no factor cancels near either end.
    let log_h = |u: f64, v: f64| -> f64 {
        let su = libm::sin(u);
        // sin(αv) = sin(π(1−αρ) + αu), the form without cancellation for small u.
        let sv = if v < u { libm::sin(alpha * v) } else { libm::sin(PI * gap + alpha * u) };
        let w = c0 * libm::pow(su / sv, e2) * libm::sin(PI * gap + (alpha - 1.0) * u) / su;
        if w > 0.0 {
            ly + libm::log(w)
        } else if (alpha > 1.0) == (v < u) {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    };
    let weight = |lh: f64| -> f64 {
        if !lh.is_finite() || lh > 7.0 || lh < -745.0 {
            return 0.0;
        }
        let h = libm::exp(lh);
        h * libm::exp(-h)
    };
    // Lower half in `u`, upper half in `v`.
    let half = 0.5 * span;
    let lower = |u: f64| weight(log_h(u, span - u));
    let upper = |v: f64| weight(log_h(span - v, v));
    // log h is monotone in the angle away from the ends. The mass of h·e^{−h}
    // sits where log h is O(1), which can be a very thin layer; break each
    // half where log h crosses a ladder of levels.
    let ladder = |f: &dyn Fn(f64) -> f64| -> Vec<f64> {
        let (a0, b0) = (1e-300, half);
        let (la, lb) = (f(a0), f(b0));
        let mut breaks: Vec<f64> = alloc::vec![0.0, half];
        if la.is_nan() || lb.is_nan() {
            return breaks;
        }
        let up = lb > la;
        for level in [-40.0, -20.0, -10.0, -5.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.5, 5.0] {
            if (la > level) == (lb > level) {
                continue;
            }
            // Bisection on the log scale resolves crossings very close to 0.
            let (mut a, mut b) = (libm::log(a0), libm::log(b0));
            for _ in 0..64 {
                let m = 0.5 * (a + b);
                if (f(libm::exp(m)) > level) == up {
                    b = m;
                } else {
                    a = m;
                }
            }
            breaks.push(libm::exp(0.5 * (a + b)));
        }
        breaks.sort_by(f64::total_cmp);
        breaks
    };
    let lower_breaks = ladder(&|u| log_h(u, span - u));
    let upper_breaks = ladder(&|v| log_h(span - v, v));
    let sum_panels = |cfg: &QuadratureConfig| -> f64 {
        let a: f64 = lower_breaks.windows(2).map(|w| integrate(lower, w[0], w[1], cfg).value).sum();
        let b: f64 = upper_breaks.windows(2).map(|w| integrate(upper, w[0], w[1], cfg).value).sum();
        a + b
    };
    // A coarse pass fixes the absolute scale, so panels carrying a negligible
    // share of the mass are not refined to their own relative accuracy.
    let rough = sum_panels(&QuadratureConfig { abs_tol: 1e-300, rel_tol: 1e-4, max_depth: 6, series_cap: 0 });
    let panels = (lower_breaks.len() + upper_breaks.len() - 2) as f64;
    let total = sum_panels(&QuadratureConfig {
        abs_tol: (1e-14 * rough / panels).max(1e-300),
        rel_tol: 1e-13,
        max_depth: 50,
        series_cap: 0,
    });
    (alpha / (PI * (alpha - 1.0).abs() * y) * total / sigma).max(0.0)
}

/// `Σ_{n≥1} Γ(1+n/α)/n! · sin(πn(α−1)/α) · yⁿ` for `y > 0`, summed in extended
/// precision. Equals `π·y·p(y)` for the spectrally negative law `ρ = 1/α`.
///
/// Returns the sum and the number of terms used.
pub fn sn_series_sum(alpha: f64, y: f64, rel_tol: f64, cap: usize) -> Result<(f64, usize)> {
    if !(alpha > 1.0 && alpha < 2.0) || !(y > 0.0) {
        return Err(domain!("extended series needs alpha in (1, 2) and y > 0"));
    }
    precise::sn_series(alpha, y, rel_tol, cap)
}
