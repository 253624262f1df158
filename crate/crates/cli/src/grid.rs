//! `start:stop:count` grids and comma-separated lists.

use std::fmt;
use std::str::FromStr;

/// Inclusive uniform grid; `count` is the number of points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self, String> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err(format!("grid endpoints must be finite, got {start}:{stop}"));
        }
        if !(start < stop) {
            return Err(format!("grid start must be below stop, got {start}:{stop}"));
        }
        if count < 2 {
            return Err(format!("grid count must be at least 2, got {count}"));
        }
        Ok(Self { start, stop, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let last = self.count - 1;
        let step = (self.stop - self.start) / last as f64;
        (0..self.count).map(|k| if k == last { self.stop } else { self.start + step * k as f64 }).collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got `{s}`"));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("`{v}` is not a number"));
        let count = n.trim().parse::<usize>().map_err(|_| format!("`{n}` is not a point count"))?;
        Grid::new(num(a)?, num(b)?, count)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{:?}:{}", self.start, self.stop, self.count)
    }
}

/// Parses `a,b,c` into numbers.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|v| v.trim().parse::<T>().map_err(|_| format!("`{v}` is not a valid list entry")))
        .collect()
}

/// Parses a strictly increasing list of bin edges; `inf` is accepted as the last edge.
pub fn parse_edges(s: &str) -> Result<Vec<f64>, String> {
    let edges: Vec<f64> = parse_list(s)?;
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) || edges.iter().any(|v| v.is_nan()) {
        return Err(format!("edges must be a strictly increasing list of at least 2 numbers, got `{s}`"));
    }
    Ok(edges)
}
