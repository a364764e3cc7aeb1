//! Line energies `I_f(m) = ∫_{J(m)} f(|m₊ − m₋|) dH¹` over the declared jump
//! curves, the closed forms for the viscosity solution and the competitor, and
//! their difference.

mod quadrature;

pub use quadrature::{gauss_legendre, integrate, Quadrature};

use crate::costfn::JumpCost;
use crate::error::{Error, Result};
use crate::fields::{FieldKind, JumpCurve, PiecewiseField};
use crate::geometry::build_domain;

/// Default absolute quadrature tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Competitor components: `γ`, `C_{θ₀}`, `[IB]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Components {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
}

impl Components {
    pub fn total(&self) -> f64 {
        self.i1 + self.i2 + self.i3
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBreakdown {
    pub per_curve: Vec<(String, f64)>,
    pub total: f64,
    pub components: Option<Components>,
    pub quadrature_error_estimate: f64,
}

impl EnergyBreakdown {
    fn from_curves(per_curve: Vec<(String, f64)>, components: Option<Components>, err: f64) -> Self {
        let total = per_curve.iter().map(|(_, e)| e).sum();
        EnergyBreakdown {
            per_curve,
            total,
            components,
            quadrature_error_estimate: err,
        }
    }
}

/// `∫ g` where `g` may take the value `+∞`: any infinite sample makes the
/// integral infinite (the pieces integrated here have positive length).
fn integrate_extended(mut g: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    let mut infinite = false;
    let mut failure = None;
    let q = integrate(
        |s| match g(s) {
            Ok(v) if v == f64::INFINITY => {
                infinite = true;
                0.0
            }
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        tol,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    if infinite && b > a {
        return Ok(Quadrature {
            value: f64::INFINITY,
            ..q
        });
    }
    Ok(q)
}

/// Energy of one curve and its quadrature error estimate.
pub fn curve_energy(curve: &JumpCurve, f: &JumpCost, tol: f64) -> Result<(f64, f64)> {
    if let Some((t, length)) = curve.uniform_jump() {
        let ft = f.eval_jump(t)?;
        return Ok((if length > 0.0 { ft * length } else { 0.0 }, 0.0));
    }
    let (a, b) = curve.parameter_range();
    let mut cuts = vec![a];
    cuts.extend(curve.breakpoints().into_iter().filter(|&s| s > a && s < b));
    cuts.push(b);
    let (mut value, mut err) = (0.0, 0.0);
    for w in cuts.windows(2) {
        let q = integrate_extended(
            |s| Ok(f.eval_jump(curve.jump_size(s))? * curve.line_element(s)),
            w[0],
            w[1],
            tol,
        )?;
        value += q.value;
        err += q.error_estimate;
    }
    Ok((value, err))
}

/// Generic line energy: quadrature of `f(jump) · line element` along each declared
/// curve, exact for curves with constant jump and straight geometry.
pub fn line_energy(field: &PiecewiseField, f: &JumpCost, tol: f64) -> Result<EnergyBreakdown> {
    let mut per_curve = Vec::with_capacity(field.jump_curves().len());
    let mut err = 0.0;
    for c in field.jump_curves() {
        let (e, de) = curve_energy(c, f, tol)?;
        per_curve.push((c.id.clone(), e));
        err += de;
    }
    let components = match field.kind() {
        FieldKind::Competitor | FieldKind::Tiling { .. } => {
            let sum = |suffix: &str| {
                per_curve
                    .iter()
                    .filter(|(id, _)| id.rsplit('/').next() == Some(suffix))
                    .map(|(_, e)| e)
                    .sum()
            };
            Some(Components {
                i1: sum("gamma"),
                i2: sum("arc"),
                i3: sum("IB"),
            })
        }
        _ => None,
    };
    Ok(EnergyBreakdown::from_curves(per_curve, components, err))
}

/// `I_f(m₀) = f(2 sin θ₀) / cos θ₀`.
pub fn energy_viscosity_closed(f: &JumpCost, theta0: f64) -> Result<f64> {
    let d = build_domain(theta0)?;
    Ok(f.eval_jump(2.0 * theta0.sin())? * d.len_ob)
}

/// `2 ∫₀^{θ₀} f(2cos(α/2)) / cos³(α/2) dα`.
fn gamma_integral(f: &JumpCost, theta0: f64, tol: f64) -> Result<Quadrature> {
    let q = integrate_extended(
        |alpha| {
            let c = (0.5 * alpha).cos();
            Ok(f.eval_jump(2.0 * c)? / (c * c * c))
        },
        0.0,
        theta0,
        0.5 * tol,
    )?;
    Ok(Quadrature {
        value: 2.0 * q.value,
        error_estimate: 2.0 * q.error_estimate,
        ..q
    })
}

/// Competitor energy by components, `I¹` by quadrature and `I²`, `I³` exact.
pub fn energy_competitor_closed(f: &JumpCost, theta0: f64, tol: f64) -> Result<EnergyBreakdown> {
    let d = build_domain(theta0)?;
    let q = gamma_integral(f, theta0, tol)?;
    let c = Components {
        i1: q.value,
        i2: 2.0 * theta0 * f.eval(2.0)?,
        i3: f.eval_jump(2.0 * theta0.sin())? * d.len_ib,
    };
    Ok(EnergyBreakdown::from_curves(
        vec![("gamma".into(), c.i1), ("arc".into(), c.i2), ("IB".into(), c.i3)],
        Some(c),
        q.error_estimate,
    ))
}

/// Everything reported for one `(f, θ₀)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub theta0: f64,
    pub cost: String,
    pub components: Components,
    pub e_viscosity: f64,
    pub e_competitor: f64,
    pub gap: f64,
    pub quad_err: f64,
}

impl GapReport {
    pub const CSV_HEADER: [&'static str; 9] =
        ["theta0", "cost", "I1", "I2", "I3", "E_viscosity", "E_competitor", "gap", "quad_err"];

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.theta0.to_string(),
            self.cost.clone(),
            self.components.i1.to_string(),
            self.components.i2.to_string(),
            self.components.i3.to_string(),
            self.e_viscosity.to_string(),
            self.e_competitor.to_string(),
            self.gap.to_string(),
            self.quad_err.to_string(),
        ]
    }

    /// Negative gap: the competitor has strictly less energy than the viscosity solution.
    pub fn competitor_wins(&self) -> bool {
        self.gap < 0.0
    }
}

/// `I_f(m) − I_f(m₀) = I¹ + 2θ₀ f(2) − f(2 sin θ₀)/cos²(θ₀/2)`, together with the
/// individual energies.
pub fn gap_report(f: &JumpCost, theta0: f64, tol: f64) -> Result<GapReport> {
    let competitor = energy_competitor_closed(f, theta0, tol)?;
    let components = competitor.components.expect("competitor breakdown has components");
    let e_viscosity = energy_viscosity_closed(f, theta0)?;
    let half = (0.5 * theta0).cos();
    let wall = f.eval_jump(2.0 * theta0.sin())? / (half * half);
    let gains = components.i1 + components.i2;
    if gains == f64::INFINITY && wall == f64::INFINITY {
        return Err(Error::Indeterminate);
    }
    Ok(GapReport {
        theta0,
        cost: f.to_string(),
        components,
        e_viscosity,
        e_competitor: competitor.total,
        gap: gains - wall,
        quad_err: competitor.quadrature_error_estimate,
    })
}

pub fn energy_gap(f: &JumpCost, theta0: f64, tol: f64) -> Result<f64> {
    Ok(gap_report(f, theta0, tol)?.gap)
}
