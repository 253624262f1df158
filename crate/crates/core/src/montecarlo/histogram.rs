//! Binned empirical distributions with a separate counter for exact zeros.

use alloc::vec;
use alloc::vec::Vec;

use super::TripleSample;
use crate::error::{domain, Result};

/// Coordinate of a [`TripleSample`] to project on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    Time,
    Supremum,
    Terminal,
    /// `sup − terminal`.
    Reflected,
}

impl Coordinate {
    pub fn of(self, s: &TripleSample) -> f64 {
        match self {
            Coordinate::Time => s.g_hat,
            Coordinate::Supremum => s.sup_hat,
            Coordinate::Terminal => s.terminal,
            Coordinate::Reflected => s.sup_hat - s.terminal,
        }
    }
}

/// Counts over the half-open bins `[e_i, e_{i+1})` (last bin closed).
///
/// Values exactly equal to 0 go to `atom_at_zero`, never into a bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub atom_at_zero: u64,
    pub below: u64,
    pub above: u64,
    pub total: u64,
}

impl Histogram {
    pub fn new(edges: &[f64]) -> Result<Self> {
        if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(domain!("bin edges must be strictly increasing with at least two entries"));
        }
        Ok(Self { edges: edges.to_vec(), counts: vec![0; edges.len() - 1], atom_at_zero: 0, below: 0, above: 0, total: 0 })
    }

    pub fn add(&mut self, x: f64) {
        self.total += 1;
        if x == 0.0 {
            self.atom_at_zero += 1;
            return;
        }
        match bin_index(&self.edges, x) {
            Placement::Below => self.below += 1,
            Placement::Above => self.above += 1,
            Placement::Bin(i) => self.counts[i] += 1,
        }
    }

    /// Counts divided by the total number of observations.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.total.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    pub fn atom_frequency(&self) -> f64 {
        self.atom_at_zero as f64 / self.total.max(1) as f64
    }

    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.edges != other.edges {
            return Err(domain!("cannot merge histograms with different edges"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.atom_at_zero += other.atom_at_zero;
        self.below += other.below;
        self.above += other.above;
        self.total += other.total;
        Ok(())
    }
}

enum Placement {
    Below,
    Above,
    Bin(usize),
}

fn bin_index(edges: &[f64], x: f64) -> Placement {
    let last = edges.len() - 1;
    if x < edges[0] {
        return Placement::Below;
    }
    if x > edges[last] {
        return Placement::Above;
    }
    if x == edges[last] {
        return Placement::Bin(last - 1);
    }
    // First edge strictly greater than x.
    let j = edges.partition_point(|&e| e <= x);
    Placement::Bin(j - 1)
}

/// Histogram of one coordinate of the samples.
pub fn empirical_distribution(samples: &[TripleSample], coord: Coordinate, edges: &[f64]) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(domain!("empirical distribution of an empty sample"));
    }
    let mut h = Histogram::new(edges)?;
    for s in samples {
        h.add(coord.of(s));
    }
    Ok(h)
}

/// Two-dimensional counts over a product of bins; points outside are tallied in `outside`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram2d {
    pub x_edges: Vec<f64>,
    pub y_edges: Vec<f64>,
    /// Row-major, `counts[i * (ny) + j]` for x-bin `i`, y-bin `j`.
    pub counts: Vec<u64>,
    pub outside: u64,
    pub total: u64,
}

impl Histogram2d {
    pub fn new(x_edges: &[f64], y_edges: &[f64]) -> Result<Self> {
        Histogram::new(x_edges)?;
        Histogram::new(y_edges)?;
        Ok(Self {
            x_edges: x_edges.to_vec(),
            y_edges: y_edges.to_vec(),
            counts: vec![0; (x_edges.len() - 1) * (y_edges.len() - 1)],
            outside: 0,
            total: 0,
        })
    }

    pub fn add(&mut self, x: f64, y: f64) {
        self.total += 1;
        match (bin_index(&self.x_edges, x), bin_index(&self.y_edges, y)) {
            (Placement::Bin(i), Placement::Bin(j)) => self.counts[i * (self.y_edges.len() - 1) + j] += 1,
            _ => self.outside += 1,
        }
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * (self.y_edges.len() - 1) + j]
    }
}
