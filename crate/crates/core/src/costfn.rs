//! Jump costs `f : [0, 2] → [0, +∞]` and the necessary condition
//! `limsup_{t→0} f(t)/t ≤ 2 limsup_{t→2} f(t)` for lower semicontinuity.
//!
//! Energies are extended reals: `f64::INFINITY` is a legal cost value and
//! propagates through sums and comparisons.
//!
//! `f(0)` can be evaluated but never enters an energy: a zero jump carries no
//! jump curve.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest admissible jump `|m₊ − m₋|` between two unit vectors.
pub const MAX_JUMP: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub enum JumpCost {
    /// `f(t) = t^p`, `p > 0`.
    Power { p: f64 },
    /// Piecewise-linear interpolation of `(t, value)` knots covering `[0, 2]`.
    Table { knots: Vec<(f64, f64)> },
}

impl JumpCost {
    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::Domain {
                what: "exponent p",
                value: p,
                range: "(0, +inf)",
            });
        }
        Ok(JumpCost::Power { p })
    }

    pub fn table(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Parse("a cost table needs at least two knots".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Parse(format!(
                    "cost table knots must be strictly increasing in t (got {} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        let (first, last) = (knots[0].0, knots[knots.len() - 1].0);
        if first > 0.0 || last < MAX_JUMP {
            return Err(Error::Parse(format!(
                "cost table covers [{first}, {last}], which does not contain [0, 2]"
            )));
        }
        if let Some(&(t, v)) = knots.iter().find(|(_, v)| v.is_nan() || *v < 0.0) {
            return Err(Error::Parse(format!(
                "cost table value at t = {t} is {v}; values must lie in [0, +inf]"
            )));
        }
        Ok(JumpCost::Table { knots })
    }

    /// Tabulate `g` at `count` uniformly spaced knots on `[0, 2]`.
    pub fn tabulate(count: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        let count = count.max(2);
        let knots = (0..count)
            .map(|k| {
                let t = MAX_JUMP * k as f64 / (count - 1) as f64;
                (t, g(t))
            })
            .collect();
        JumpCost::table(knots)
    }

    /// Read a `t,value` CSV file (header row required).
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let headers = reader.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "value" {
            return Err(Error::Parse(format!(
                "{}: expected header `t,value`, found `{}`",
                path.display(),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut knots = Vec::new();
        for record in reader.records() {
            let record = record?;
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("{}: bad number `{s}`", path.display())))
            };
            knots.push((parse(&record[0])?, parse(&record[1])?));
        }
        JumpCost::table(knots)
    }

    /// Parse `power:<p>` or `table:<path>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        match spec.trim().split_once(':') {
            Some(("power", p)) => {
                let p = p
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad exponent in cost `{spec}`")))?;
                JumpCost::power(p)
            }
            Some(("table", path)) => JumpCost::from_csv_path(path.trim()),
            _ => Err(Error::Parse(format!(
                "cost `{spec}` is neither `power:<p>` nor `table:<path>`"
            ))),
        }
    }

    pub fn exponent(&self) -> Option<f64> {
        match *self {
            JumpCost::Power { p } => Some(p),
            JumpCost::Table { .. } => None,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=MAX_JUMP).contains(&t) {
            return Err(Error::Domain {
                what: "jump size t",
                value: t,
                range: "[0, 2]",
            });
        }
        Ok(match self {
            JumpCost::Power { p } => t.powf(*p),
            JumpCost::Table { knots } => interpolate(knots, t),
        })
    }

    /// Like [`JumpCost::eval`] but clamps jump sizes a few ulps past 2 (rounding in
    /// `|m₊ − m₋|` for antipodal traces).
    pub(crate) fn eval_jump(&self, t: f64) -> Result<f64> {
        if t > MAX_JUMP && t <= MAX_JUMP + 1e-12 {
            self.eval(MAX_JUMP)
        } else {
            self.eval(t)
        }
    }
}

fn interpolate(knots: &[(f64, f64)], t: f64) -> f64 {
    let k = knots.partition_point(|&(tk, _)| tk <= t);
    // knots[k-1].0 <= t < knots[k].0, with k >= 1 because knots[0].0 <= 0 <= t
    if k == knots.len() {
        return knots[k - 1].1;
    }
    let (t0, v0) = knots[k - 1];
    let (t1, v1) = knots[k];
    if t == t0 {
        return v0;
    }
    if v0.is_infinite() || v1.is_infinite() {
        return f64::INFINITY;
    }
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

impl fmt::Display for JumpCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JumpCost::Power { p } => write!(f, "power:{p}"),
            JumpCost::Table { knots } => write!(f, "table[{} knots]", knots.len()),
        }
    }
}

impl FromStr for JumpCost {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        JumpCost::from_spec(s)
    }
}

/// Outcome of the (CNF) test `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnfMargin {
    /// Estimate of `limsup_{t→0} f(t)/t`, possibly `+∞`.
    pub lhs: f64,
    /// Estimate of `2 limsup_{t→2} f(t)`.
    pub rhs: f64,
    pub holds: bool,
    pub samples_used: usize,
}

pub const MIN_CNF_SAMPLES: usize = 16;

/// Decide the necessary condition `limsup_{t→0} f(t)/t ≤ 2 limsup_{t→2} f(t)`.
///
/// Power costs are decided analytically. Tables are probed on the geometric
/// meshes `t = 2·2^{-k}` and `t = 2 − 2^{-k}`, `k = 1..log₂(sample_count)`,
/// keeping the maximum on each mesh.
pub fn cnf_check(f: &JumpCost, sample_count: usize) -> Result<CnfMargin> {
    if sample_count < MIN_CNF_SAMPLES {
        return Err(Error::Domain {
            what: "sample_count",
            value: sample_count as f64,
            range: "[16, +inf)",
        });
    }
    let (lhs, rhs, samples_used) = match *f {
        JumpCost::Power { p } => {
            let lhs = if p > 1.0 {
                0.0
            } else if p == 1.0 {
                1.0
            } else {
                f64::INFINITY
            };
            (lhs, 2.0 * f.eval(MAX_JUMP)?, 1)
        }
        JumpCost::Table { .. } => {
            let levels = sample_count.ilog2() as i32;
            let mut near_zero = f64::NEG_INFINITY;
            let mut near_two = f64::NEG_INFINITY;
            for k in 1..=levels {
                let h = 2f64.powi(-k);
                let t = MAX_JUMP * h;
                near_zero = near_zero.max(f.eval(t)? / t);
                near_two = near_two.max(f.eval(MAX_JUMP - h)?);
            }
            (near_zero, 2.0 * near_two, 2 * levels as usize)
        }
    };
    Ok(CnfMargin {
        lhs,
        rhs,
        holds: lhs <= rhs,
        samples_used,
    })
}
