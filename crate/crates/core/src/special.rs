//! Scalar special functions used across the crate.

use core::f64::consts::{PI, SQRT_2};

/// Catalan's constant `Σ (−1)^k/(2k+1)²`.
pub const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_677_939_946_059_934_381_868_475_858_631_164_9;

/// Density of `N(mean, var)`.
pub fn normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    let z = x - mean;
    INV_SQRT_2PI / libm::sqrt(var) * libm::exp(-0.5 * z * z / var)
}

/// Standard normal distribution function, accurate in both tails.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `sin(πx)`, exact at integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * libm::round(x / 2.0);
    if r == 0.0 || r.abs() == 1.0 {
        0.0
    } else {
        libm::sin(PI * r)
    }
}
