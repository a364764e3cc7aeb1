//! Key-value text form of a field, e.g.
//!
//! ```text
//! kind = tiling
//! theta0 = 1.0471975511965976
//! n = 8
//! ```
//!
//! Blank lines and `#` comments are ignored. `n` is required for tilings only.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Viscosity,
    Competitor,
    OneDTransition,
    Tiling { n: usize },
}

impl FieldKind {
    pub fn name(&self) -> &'static str {
        match self {
            FieldKind::Viscosity => "viscosity",
            FieldKind::Competitor => "competitor",
            FieldKind::OneDTransition => "one-d-transition",
            FieldKind::Tiling { .. } => "tiling",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub theta0: f64,
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind = {}", self.kind.name())?;
        writeln!(f, "theta0 = {:?}", self.theta0)?;
        if let FieldKind::Tiling { n } = self.kind {
            writeln!(f, "n = {n}")?;
        }
        Ok(())
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut kind, mut theta0, mut n) = (None, None, None);
        for (lineno, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
            let value = value.trim();
            match key.trim() {
                "kind" => kind = Some(value.to_string()),
                "theta0" => {
                    theta0 = Some(value.parse::<f64>().map_err(|_| {
                        Error::Parse(format!("line {}: bad theta0 `{value}`", lineno + 1))
                    })?)
                }
                "n" => {
                    n = Some(value.parse::<usize>().map_err(|_| {
                        Error::Parse(format!("line {}: bad n `{value}`", lineno + 1))
                    })?)
                }
                other => return Err(Error::Parse(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        let theta0 = theta0.ok_or_else(|| Error::Parse("missing key `theta0`".into()))?;
        let kind = match kind.as_deref() {
            Some("viscosity") => FieldKind::Viscosity,
            Some("competitor") => FieldKind::Competitor,
            Some("one-d-transition") => FieldKind::OneDTransition,
            Some("tiling") => FieldKind::Tiling {
                n: n.ok_or_else(|| Error::Parse("tiling needs key `n`".into()))?,
            },
            Some(other) => return Err(Error::Parse(format!("unknown field kind `{other}`"))),
            None => return Err(Error::Parse("missing key `kind`".into())),
        };
        Ok(FieldDescriptor { kind, theta0 })
    }
}
