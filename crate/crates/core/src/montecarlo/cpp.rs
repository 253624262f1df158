//! Event-driven simulation of compound Poisson processes with drift.
//!
//! Paths are piecewise linear between exponential jump times, so suprema and
//! first-passage times are computed exactly; no time grid is involved.

use rand::Rng;

use super::sampler::exp1;
use crate::error::{unsupported, Result};
use crate::model::{JumpSign, ModelParams};

struct Cpp {
    rate: f64,
    mean: f64,
    sign: f64,
    drift: f64,
}

fn unpack(p: &ModelParams) -> Result<Cpp> {
    match *p {
        ModelParams::CompoundPoisson { rate, jump_mean, jump_sign, drift } => {
            Ok(Cpp { rate, mean: jump_mean, sign: jump_sign.value(), drift })
        }
        _ => Err(unsupported!("event-driven simulation needs a compound Poisson model")),
    }
}

/// Exact `(g_t, sup_{s≤t} X_s, X_t)` for one path; `g_t` is the last time the supremum is approached.
pub fn sup_triple<R: Rng + ?Sized>(p: &ModelParams, t: f64, rng: &mut R) -> Result<(f64, f64, f64)> {
    let c = unpack(p)?;
    let (mut time, mut x, mut sup, mut g) = (0.0, 0.0, 0.0, 0.0);
    loop {
        let next = time + exp1(rng) / c.rate;
        if next >= t {
            let end = x + c.drift * (t - time);
            if end > sup || (c.drift > 0.0 && end >= sup) {
                sup = end;
                g = t;
            }
            return Ok((g, sup, end));
        }
        let pre = x + c.drift * (next - time);
        if c.drift > 0.0 && pre >= sup {
            sup = pre;
            g = next;
        }
        let post = pre + c.sign * c.mean * exp1(rng);
        if post > sup {
            sup = post;
            g = next;
        }
        time = next;
        x = post;
    }
}

/// `τ₀⁺ = inf{s > 0 : X_s > 0}` if it occurs before `horizon`.
pub fn first_passage_time<R: Rng + ?Sized>(p: &ModelParams, horizon: f64, rng: &mut R) -> Result<Option<f64>> {
    let c = unpack(p)?;
    if c.drift > 0.0 {
        return Ok(Some(0.0));
    }
    if c.sign < 0.0 {
        return Ok(None);
    }
    // X_s = drift·s + (sum of jumps so far); with drift < 0 only jumps can cross.
    let (mut time, mut jumps) = (0.0, 0.0);
    loop {
        time += exp1(rng) / c.rate;
        if time > horizon {
            return Ok(None);
        }
        jumps += c.mean * exp1(rng);
        if c.drift * time + jumps > 0.0 {
            return Ok(Some(time));
        }
    }
}

/// `P(τ₀⁺ > t)` for upward `Exp(mean m)` jumps at rate `r` and drift `−δ`, by the
/// ballot theorem `P(S_s ≤ δs ∀ s ≤ t) = E[(1 − S_t/(δt))⁺]` for the jump part `S`.
pub fn no_passage_probability(rate: f64, jump_mean: f64, delta: f64, t: f64) -> f64 {
    let c = delta * t;
    let mu = rate * t;
    let lam = c / jump_mean;
    // Gamma(k, m) distribution function at c = P(Poisson(c/m) ≥ k).
    let gamma_cdf = |k: usize| -> f64 {
        if k == 0 {
            return 1.0;
        }
        let mut term = libm::exp(-lam);
        let mut below = 0.0;
        for j in 0..k {
            if j > 0 {
                term *= lam / j as f64;
            }
            below += term;
        }
        (1.0 - below).max(0.0)
    };
    let mut total = libm::exp(-mu);
    let mut weight = libm::exp(-mu);
    let mut k = 1usize;
    loop {
        weight *= mu / k as f64;
        let part = gamma_cdf(k) - (k as f64 * jump_mean / c) * gamma_cdf(k + 1);
        total += weight * part.max(0.0);
        if k as f64 > mu && weight < 1e-18 {
            break;
        }
        k += 1;
    }
    total
}

/// Convenience for the upward-jump orientation.
pub fn upward(rate: f64, jump_mean: f64, drift: f64) -> ModelParams {
    ModelParams::CompoundPoisson { rate, jump_mean, jump_sign: JumpSign::Positive, drift }
}
