//! Permutation test of mutual independence for triples, based on distance
//! covariance between each pair of coordinates.
//!
//! Coordinates are replaced by their ranks first. Independence is invariant
//! under monotone maps, and ranks keep the statistic meaningful for
//! heavy-tailed coordinates without finite first moments.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::rng::path_rng;
use crate::error::{domain, Result};

/// Smallest sample size accepted by [`independence_statistic`].
pub const MIN_TRIPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport {
    /// Distance correlation of the coordinate pairs (0,1), (0,2), (1,2).
    pub dcor: [f64; 3],
    /// Permutation p-value of each pair.
    pub pair_p_values: [f64; 3],
    /// Bonferroni-adjusted p-value of the most dependent pair: `min(1, 3·min p)`.
    pub p_value: f64,
    pub permutations: usize,
}

/// Tests mutual independence of the three coordinates with `permutations` random relabelings.
pub fn independence_statistic(triples: &[[f64; 3]], permutations: usize, seed: u64) -> Result<IndependenceReport> {
    let n = triples.len();
    if n < MIN_TRIPLES {
        return Err(domain!("independence test needs at least {MIN_TRIPLES} triples, got {n}"));
    }
    if permutations == 0 {
        return Err(domain!("at least one permutation is required"));
    }
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(3);
    for k in 0..3 {
        let c: Vec<f64> = triples.iter().map(|t| t[k]).collect();
        if c.iter().any(|v| !v.is_finite()) {
            return Err(domain!("coordinate {k} has non-finite entries"));
        }
        if c.iter().all(|&v| v == c[0]) {
            return Err(domain!("coordinate {k} is constant"));
        }
        cols.push(ranks(&c));
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut dcor = [0.0; 3];
    let mut pv = [0.0; 3];
    let mut rng = path_rng(seed, 0);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let pair = PairDcov::new(&cols[i], &cols[j]);
        let obs = pair.dcov_sq(&pair.identity());
        let vx = PairDcov::new(&cols[i], &cols[i]);
        let vy = PairDcov::new(&cols[j], &cols[j]);
        let denom = libm::sqrt(vx.dcov_sq(&vx.identity()) * vy.dcov_sq(&vy.identity()));
        dcor[k] = if denom > 0.0 { libm::sqrt((obs / denom).max(0.0)) } else { 0.0 };
        let mut perm = pair.identity();
        let mut exceed = 0usize;
        // Relative slack so that statistics equal to the observed one up to rounding count as ties.
        let thresh = obs - 1e-12 * obs.abs();
        for _ in 0..permutations {
            perm.shuffle(&mut rng);
            if pair.dcov_sq(&perm) >= thresh {
                exceed += 1;
            }
        }
        pv[k] = (1 + exceed) as f64 / (permutations + 1) as f64;
    }
    let min_p = pv.iter().copied().fold(1.0, f64::min);
    Ok(IndependenceReport { dcor, pair_p_values: pv, p_value: (3.0 * min_p).min(1.0), permutations })
}

/// Mid-ranks (ties share their average rank), centered at 0.
fn ranks(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let mid = 0.5 * (i + j) as f64 - 0.5 * (n - 1) as f64;
        for &k in &idx[i..=j] {
            r[k] = mid;
        }
        i = j + 1;
    }
    r
}

/// Row sums `Σ_j |v_i − v_j|`, returned in the original order.
fn row_sums(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let total: f64 = v.iter().sum();
    let mut out = vec![0.0; n];
    let mut prefix = 0.0;
    for (i, &k) in idx.iter().enumerate() {
        let x = v[k];
        let left = i as f64 * x - prefix;
        let right = (total - prefix - x) - (n - 1 - i) as f64 * x;
        out[k] = left + right;
        prefix += x;
    }
    out
}

/// Precomputed pieces of the O(n log n) distance covariance for one pair.
struct PairDcov {
    /// x sorted ascending.
    x: Vec<f64>,
    /// Row sums of |x_i − x_j| in sorted order.
    a: Vec<f64>,
    /// y values, row sums and Fenwick slots, indexed by original y position.
    y: Vec<f64>,
    b: Vec<f64>,
    slot: Vec<usize>,
    /// Original y index attached to each sorted x position when unpermuted.
    base: Vec<usize>,
    a_tot: f64,
    b_tot: f64,
}

impl PairDcov {
    fn new(x: &[f64], y: &[f64]) -> Self {
        let n = x.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&p, &q| x[p].total_cmp(&x[q]));
        let a_orig = row_sums(x);
        let b = row_sums(y);
        let mut yorder: Vec<usize> = (0..n).collect();
        yorder.sort_by(|&p, &q| y[p].total_cmp(&y[q]));
        let mut slot = vec![0; n];
        for (r, &k) in yorder.iter().enumerate() {
            slot[k] = r;
        }
        Self {
            x: order.iter().map(|&k| x[k]).collect(),
            a: order.iter().map(|&k| a_orig[k]).collect(),
            y: y.to_vec(),
            a_tot: a_orig.iter().sum(),
            b_tot: b.iter().sum(),
            b,
            slot,
            base: order,
        }
    }

    fn identity(&self) -> Vec<usize> {
        self.base.clone()
    }

    /// V-statistic `dCov²` when sorted position `k` is paired with y index `perm[k]`.
    fn dcov_sq(&self, perm: &[usize]) -> f64 {
        let n = self.x.len();
        let nf = n as f64;
        let mut fw = Fenwick::new(n);
        let (mut tot_c, mut tot_x, mut tot_y, mut tot_xy) = (0.0, 0.0, 0.0, 0.0);
        let mut cross = 0.0;
        let mut s3 = 0.0;
        for k in 0..n {
            let yi_idx = perm[k];
            let (xi, yi) = (self.x[k], self.y[yi_idx]);
            let r = self.slot[yi_idx];
            let [c, sx, sy, sxy] = fw.prefix(r);
            let (cc, cx, cy, cxy) = (tot_c - c, tot_x - sx, tot_y - sy, tot_xy - sxy);
            let below = c * xi * yi - xi * sy - yi * sx + sxy;
            let above = cc * xi * yi - xi * cy - yi * cx + cxy;
            cross += below - above;
            fw.add(r, [1.0, xi, yi, xi * yi]);
            tot_c += 1.0;
            tot_x += xi;
            tot_y += yi;
            tot_xy += xi * yi;
            s3 += self.a[k] * self.b[yi_idx];
        }
        2.0 * cross / (nf * nf) + self.a_tot * self.b_tot / (nf * nf * nf * nf) - 2.0 * s3 / (nf * nf * nf)
    }
}

/// Fenwick tree of 4-component sums; `prefix(r)` sums slots `< r`.
struct Fenwick {
    t: Vec<[f64; 4]>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Self { t: vec![[0.0; 4]; n + 1] }
    }
    fn add(&mut self, r: usize, v: [f64; 4]) {
        let mut i = r + 1;
        while i < self.t.len() {
            for c in 0..4 {
                self.t[i][c] += v[c];
            }
            i += i & i.wrapping_neg();
        }
    }
    fn prefix(&self, r: usize) -> [f64; 4] {
        let mut s = [0.0; 4];
        let mut i = r;
        while i > 0 {
            for c in 0..4 {
                s[c] += self.t[i][c];
            }
            i -= i & i.wrapping_neg();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::sampler::open01;

    fn naive_dcov_sq(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let nf = n as f64;
        let a = |i: usize, j: usize| (x[i] - x[j]).abs();
        let b = |i: usize, j: usize| (y[i] - y[j]).abs();
        let ar: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a(i, j)).sum::<f64>() / nf).collect();
        let br: Vec<f64> = (0..n).map(|i| (0..n).map(|j| b(i, j)).sum::<f64>() / nf).collect();
        let am = ar.iter().sum::<f64>() / nf;
        let bm = br.iter().sum::<f64>() / nf;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (a(i, j) - ar[i] - ar[j] + am) * (b(i, j) - br[i] - br[j] + bm);
            }
        }
        s / (nf * nf)
    }

    #[test]
    fn fast_dcov_matches_double_centering() {
        let mut rng = path_rng(1, 0);
        let x: Vec<f64> = (0..200).map(|_| open01(&mut rng)).collect();
        let y: Vec<f64> = x.iter().map(|v| v * v + 0.3 * open01(&mut rng)).collect();
        let p = PairDcov::new(&x, &y);
        let fast = p.dcov_sq(&p.identity());
        let slow = naive_dcov_sq(&x, &y);
        assert!((fast - slow).abs() < 1e-12 * slow.abs().max(1.0), "{fast} vs {slow}");
        // Ties in both coordinates.
        let xt: Vec<f64> = x.iter().map(|v| libm::floor(v * 5.0)).collect();
        let yt: Vec<f64> = y.iter().map(|v| libm::floor(v * 3.0)).collect();
        let p = PairDcov::new(&xt, &yt);
        let fast = p.dcov_sq(&p.identity());
        assert!((fast - naive_dcov_sq(&xt, &yt)).abs() < 1e-10);
    }

    #[test]
    fn perfect_dependence_is_rejected() {
        let mut rng = path_rng(2, 0);
        let t: Vec<[f64; 3]> = (0..1000).map(|_| {
            let v = open01(&mut rng);
            [v, v, v]
        }).collect();
        let r = independence_statistic(&t, 499, 3).unwrap();
        assert!(r.p_value < 0.01, "{r:?}");
        assert!(r.dcor.iter().all(|&d| (d - 1.0).abs() < 1e-9));
    }

    #[test]
    fn degenerate_inputs() {
        let t: Vec<[f64; 3]> = (0..1000).map(|i| [i as f64, 1.0, (i * 7 % 13) as f64]).collect();
        assert!(independence_statistic(&t, 10, 0).is_err());
        assert!(independence_statistic(&t[..10], 10, 0).is_err());
    }
}
