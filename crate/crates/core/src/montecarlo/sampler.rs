//! Exact samplers for increments and Brownian-bridge maxima.

use core::f64::consts::PI;

use rand::distr::Open01;
use rand::{Rng, RngExt};
use rand_distr::{Exp1, StandardNormal};

use crate::special::sin_pi;

/// Draws `X_1` for the strictly stable law `(α, ρ)` (Chambers–Mallows–Stuck).
pub fn stable_unit<R: Rng + ?Sized>(alpha: f64, rho: f64, rng: &mut R) -> f64 {
    if alpha == 2.0 {
        let z: f64 = rng.sample(StandardNormal);
        return core::f64::consts::SQRT_2 * z;
    }
    let u: f64 = rng.sample(Open01);
    let v = PI * (u - 0.5);
    if alpha == 1.0 {
        let (scale, loc) = (sin_pi(rho), -sin_pi(rho + 0.5));
        return scale * libm::tan(v) + loc;
    }
    let w: f64 = rng.sample(Exp1);
    let b = PI * (rho - 0.5);
    let ab = alpha * (v + b);
    libm::sin(ab) / libm::pow(libm::cos(v), 1.0 / alpha)
        * libm::pow(libm::cos(v - ab) / w, (1.0 - alpha) / alpha)
}

/// Standard Cauchy draw as the ratio of two independent standard normals.
pub fn cauchy_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    a / b
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Exp1)
}

/// Maximum of a Brownian bridge from `a` to `b` over a cell of length `h`
/// with variance `var` per unit time.
pub fn bridge_max<R: Rng + ?Sized>(a: f64, b: f64, h: f64, var: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    let d = b - a;
    0.5 * (a + b + libm::sqrt(d * d - 2.0 * var * h * libm::log(u)))
}

/// Uniform draw on `(0, 1)`.
pub fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}
