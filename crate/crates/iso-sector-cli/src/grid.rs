//! Grids written as `lo:hi:lin|log:count`, or a single value.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub spacing: Spacing,
    pub count: usize,
}

impl Grid {
    pub fn single(x: f64) -> Self {
        Self { lo: x, hi: x, spacing: Spacing::Lin, count: 1 }
    }

    /// Points in increasing order; both ends are hit exactly.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let last = (self.count - 1) as f64;
        let mut out: Vec<f64> = (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Lin => self.lo + (self.hi - self.lo) * t,
                    Spacing::Log => (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * t).exp(),
                }
            })
            .collect();
        out[0] = self.lo;
        out[self.count - 1] = self.hi;
        out
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("'{t}' is not a number"));
        let parts: Vec<&str> = s.split(':').collect();
        let grid = match parts.as_slice() {
            [x] => Grid::single(num(x)?),
            [lo, hi, spacing, count] => {
                let spacing = match *spacing {
                    "lin" => Spacing::Lin,
                    "log" => Spacing::Log,
                    other => return Err(format!("spacing must be lin or log, got '{other}'")),
                };
                let count: usize = count.parse().map_err(|_| format!("'{count}' is not a point count"))?;
                Grid { lo: num(lo)?, hi: num(hi)?, spacing, count }
            }
            _ => return Err("expected lo:hi:lin|log:count or a single value".into()),
        };
        if grid.count == 0 {
            return Err("a grid needs at least one point".into());
        }
        if !(grid.lo > 0.0) || !grid.hi.is_finite() {
            return Err("grid values must be positive and finite".into());
        }
        if grid.hi < grid.lo || (grid.count > 1 && grid.hi == grid.lo) {
            return Err("grid must increase from lo to hi".into());
        }
        if grid.count == 1 && grid.hi != grid.lo {
            return Err("a one-point grid needs lo = hi".into());
        }
        Ok(grid)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = match self.spacing {
            Spacing::Lin => "lin",
            Spacing::Log => "log",
        };
        write!(f, "{}:{}:{}:{}", self.lo, self.hi, sp, self.count)
    }
}
