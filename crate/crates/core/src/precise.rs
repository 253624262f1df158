//! Extended-precision summation of the small-argument stable series.
//!
//! The power series of a stable density at large arguments suffers from
//! catastrophic cancellation (the largest term can exceed the sum by twenty
//! orders of magnitude), so it is summed in binary floating point of growing
//! precision until two consecutive precisions agree.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, WORD_BIT_SIZE};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Even-index Bernoulli numbers `B_2 .. B_30` as exact rationals.
const BERNOULLI: [(i64, i64); 15] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
];

pub(crate) fn to_f64(v: &BigFloat) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exp, _)) = v.as_raw_parts() else {
        return f64::NAN;
    };
    let top = words.last().copied().unwrap_or(0) as u64;
    // Bring the top word to a full 64-bit window so the f64 rounding sees 64 bits.
    let (mant, shift) = if WORD_BIT_SIZE == 64 || words.len() < 2 {
        (top, WORD_BIT_SIZE as i32)
    } else {
        ((top << 32) | words[words.len() - 2] as u64, 64)
    };
    let m = libm::ldexp(mant as f64, exp - shift);
    if sign == Sign::Neg {
        -m
    } else {
        m
    }
}

struct Ctx {
    p: usize,
    cc: Consts,
}

impl Ctx {
    fn f(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.p)
    }
    fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.p)
    }

    /// `ln Γ(z)` for `z > 0` by Stirling's series after an upward shift.
    fn ln_gamma(&mut self, z: &BigFloat) -> BigFloat {
        let p = self.p;
        // The first omitted Stirling term scales like z^{-31}.
        let z0 = libm::exp2((p as f64 + 30.0) / 31.0).max(50.0);
        let zf = to_f64(z);
        let mut prod = self.int(1);
        let mut w = z.clone();
        if zf < z0 {
            let m = libm::ceil(z0 - zf) as usize;
            let one = self.int(1);
            for _ in 0..m {
                prod = prod.mul(&w, p, RM);
                w = w.add(&one, p, RM);
            }
        }
        let half = self.f(0.5);
        let two_pi = self.cc.pi(p, RM).mul(&self.int(2), p, RM);
        let lnw = w.ln(p, RM, &mut self.cc);
        let mut s = w.sub(&half, p, RM).mul(&lnw, p, RM).sub(&w, p, RM);
        s = s.add(&two_pi.ln(p, RM, &mut self.cc).mul(&half, p, RM), p, RM);
        let w2 = w.mul(&w, p, RM);
        let mut wpow = w.clone();
        for (k, (num, den)) in BERNOULLI.iter().enumerate() {
            let k2 = 2 * (k as i64 + 1);
            let denom = self.int(*den).mul(&self.int(k2 * (k2 - 1)), p, RM).mul(&wpow, p, RM);
            s = s.add(&self.int(*num).div(&denom, p, RM), p, RM);
            wpow = wpow.mul(&w2, p, RM);
        }
        if zf < z0 {
            s = s.sub(&prod.ln(p, RM, &mut self.cc), p, RM);
        }
        s
    }
}

/// `Σ_{n≥1} Γ(1+n/α)/n! · sin(πn(α−1)/α) · yⁿ` for `α ∈ (1, 2)`, `y > 0`.
///
/// This is the spectrally negative case `ρ = 1/α`, with `ρ` formed in extended
/// precision: the admissible range of `ρ` ends at `1/α`, and a rounded value
/// just outside it makes the partial sums blow up.
///
/// Truncation stops once at least eight terms are summed and a geometric
/// majorant of the remainder is below `rel_tol` times the partial sum.
/// Returns the sum and the number of terms used.
pub(crate) fn sn_series(alpha: f64, y: f64, rel_tol: f64, cap: usize) -> Result<(f64, usize)> {
    let mut prev: Option<f64> = None;
    let mut p = 128usize;
    loop {
        let (v, n) = sn_series_at(alpha, y, rel_tol, cap, p)?;
        if let Some(u) = prev {
            if (u - v).abs() <= 1e-14 * v.abs().max(f64::MIN_POSITIVE) {
                return Ok((v, n));
            }
        }
        if p >= 1024 {
            return Err(Error::SeriesNonConvergence { terms: n, bound: (prev.unwrap_or(v) - v).abs() });
        }
        prev = Some(v);
        p += 64;
    }
}

fn sn_series_at(alpha: f64, y: f64, rel_tol: f64, cap: usize, p: usize) -> Result<(f64, usize)> {
    let Ok(cc) = Consts::new() else {
        return Err(Error::SeriesNonConvergence { terms: 0, bound: f64::INFINITY });
    };
    let mut ctx = Ctx { p, cc };
    let a = ctx.f(alpha);
    let one = ctx.int(1);
    let yb = ctx.f(y);
    let pi = ctx.cc.pi(p, RM);
    let omr = a.sub(&one, p, RM).div(&a, p, RM);
    let mut pow_fact = one.clone(); // yⁿ / n!
    let mut sum = ctx.int(0);
    let lny = libm::log(y);
    let mag = |n: usize| libm::exp(libm::lgamma(1.0 + n as f64 / alpha) - libm::lgamma(n as f64 + 1.0) + n as f64 * lny);
    for n in 1..=cap {
        let nb = ctx.int(n as i64);
        pow_fact = pow_fact.mul(&yb, p, RM).div(&nb, p, RM);
        let z = one.add(&nb.div(&a, p, RM), p, RM);
        let lg = ctx.ln_gamma(&z);
        let g = lg.exp(p, RM, &mut ctx.cc);
        let ang = pi.mul(&nb, p, RM).mul(&omr, p, RM);
        let sn = ang.sin(p, RM, &mut ctx.cc);
        sum = sum.add(&g.mul(&pow_fact, p, RM).mul(&sn, p, RM), p, RM);
        if n >= 8 {
            let m1 = mag(n + 1);
            let m2 = mag(n + 2);
            let r = m2 / m1;
            if r < 1.0 && m1 < mag(n) {
                let bound = m1 / (1.0 - r);
                let s = to_f64(&sum).abs();
                if bound <= rel_tol * s || bound < f64::MIN_POSITIVE {
                    return Ok((to_f64(&sum), n));
                }
            }
        }
    }
    Err(Error::SeriesNonConvergence { terms: cap, bound: mag(cap + 1) })
}
