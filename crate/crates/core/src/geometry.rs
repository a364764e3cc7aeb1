//! The convex domain `Ω(θ₀)`: the unit disk with the cap `|θ| < θ₀` replaced by
//! the two tangents from `B = (1/cos θ₀, 0)`.
//!
//! ```text
//!              A = e^{iθ₀}
//!            .'  \
//!   large   /  Ω₀  \  Γ
//!   arc    O - - - I---B
//!           \      /
//!            '.   /
//!              A' = e^{-iθ₀}
//! ```
//!
//! `Γ = [AB] ∪ [A'B]`, `Ω₀` is the kite `OABA'`, and `γ_{θ₀}` is the set of
//! points of `Ω₀` equidistant from the unit circle and from `Γ`. It meets the
//! axis at `I` with `|OI| = 1/cos²(θ₀/2)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Membership tolerance for the unit-scale closed forms of this module.
pub const BOUNDARY_TOL: f64 = 1e-12;

pub(crate) fn check_theta0(theta0: f64) -> Result<()> {
    if theta0 > 0.0 && theta0 < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "theta0",
            value: theta0,
            range: "(0, pi/2)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    pub theta0: f64,
    pub a: Vec2,
    pub a_prime: Vec2,
    pub b: Vec2,
    /// Meeting point of `γ_{θ₀}` with the axis `(OB)`.
    pub i_point: Vec2,
    pub len_ob: f64,
    pub len_oi: f64,
    pub len_ib: f64,
}

pub fn build_domain(theta0: f64) -> Result<DomainSpec> {
    check_theta0(theta0)?;
    let (s, c) = theta0.sin_cos();
    let len_ob = 1.0 / c;
    let half = (0.5 * theta0).cos();
    let len_oi = 1.0 / (half * half);
    Ok(DomainSpec {
        theta0,
        a: Vec2::new(c, s),
        a_prime: Vec2::new(c, -s),
        b: Vec2::new(len_ob, 0.0),
        i_point: Vec2::new(len_oi, 0.0),
        len_ob,
        len_oi,
        len_ib: len_ob - len_oi,
    })
}

impl DomainSpec {
    /// Whether `x` lies in the closure of `Ω`, up to [`BOUNDARY_TOL`].
    pub fn contains(&self, x: Vec2) -> bool {
        let r = x.norm();
        if r <= 1.0 + BOUNDARY_TOL {
            return true;
        }
        x.angle().abs() <= self.theta0
            && x.dot(self.a) <= 1.0 + BOUNDARY_TOL
            && x.dot(self.a_prime) <= 1.0 + BOUNDARY_TOL
    }

    /// Whether `x` lies in the open kite `Ω₀ = Ω ∩ {|θ| < θ₀, r > 0}`.
    pub fn in_kite(&self, x: Vec2) -> bool {
        x != Vec2::ZERO
            && x.angle().abs() < self.theta0
            && x.dot(self.a) < 1.0
            && x.dot(self.a_prime) < 1.0
    }

    pub fn dist_to_large_arc(&self, x: Vec2) -> f64 {
        if x == Vec2::ZERO {
            return 1.0;
        }
        if x.angle().abs() >= self.theta0 {
            (x.norm() - 1.0).abs()
        } else {
            x.dist(self.a).min(x.dist(self.a_prime))
        }
    }

    /// Distance to `Γ = [AB] ∪ [A'B]`.
    pub fn dist_to_tangents(&self, x: Vec2) -> f64 {
        dist_to_segment(x, self.a, self.b).min(dist_to_segment(x, self.a_prime, self.b))
    }

    /// `φ₀(x) = dist(x, ∂Ω)`.
    pub fn dist_to_boundary(&self, x: Vec2) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::OutsideDomain(x));
        }
        Ok(self.dist_to_large_arc(x).min(self.dist_to_tangents(x)))
    }

    /// `φ(x) = dist(x, ∂Ω ∪ C)` with `C` the full unit circle.
    pub fn dist_to_boundary_union_circle(&self, x: Vec2) -> Result<f64> {
        let d = self.dist_to_boundary(x)?;
        Ok(d.min((x.norm() - 1.0).abs()))
    }

    /// Outward unit normal of `∂Ω` at a boundary point (closest piece wins).
    pub fn outward_normal(&self, x: Vec2) -> Vec2 {
        let arc = self.dist_to_large_arc(x);
        let upper = dist_to_segment(x, self.a, self.b);
        let lower = dist_to_segment(x, self.a_prime, self.b);
        if arc <= upper && arc <= lower {
            x.normalized()
        } else if upper <= lower {
            self.a
        } else {
            self.a_prime
        }
    }

    /// `n` points spread over `∂Ω` by arclength, with their outward normals.
    /// Corners `A`, `A'`, `B` are skipped since the normal is undefined there.
    pub fn boundary_samples(&self, n: usize) -> Vec<(Vec2, Vec2)> {
        let arc_len = 2.0 * (std::f64::consts::PI - self.theta0);
        let seg_len = self.a.dist(self.b);
        let total = arc_len + 2.0 * seg_len;
        (0..n)
            .map(|k| {
                let s = total * (k as f64 + 0.5) / n as f64;
                if s < arc_len {
                    let th = self.theta0 + s;
                    let p = Vec2::from_angle(th);
                    (p, p)
                } else if s < arc_len + seg_len {
                    let u = (s - arc_len) / seg_len;
                    (self.a_prime + u * (self.b - self.a_prime), self.a_prime)
                } else {
                    let u = (s - arc_len - seg_len) / seg_len;
                    (self.b + u * (self.a - self.b), self.a)
                }
            })
            .collect()
    }
}

pub fn dist_to_segment(x: Vec2, p: Vec2, q: Vec2) -> f64 {
    let d = q - p;
    let len2 = d.dot(d);
    let u = if len2 > 0.0 {
        ((x - p).dot(d) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    x.dist(p + u * d)
}

/// Distance from `x` to the arc of the circle `center + radius·e^{iθ}`,
/// `θ ∈ [from, to]`, with `to − from < 2π`.
pub fn dist_to_arc(x: Vec2, center: Vec2, radius: f64, from: f64, to: f64) -> f64 {
    let rel = x - center;
    let mid = 0.5 * (from + to);
    let half = 0.5 * (to - from);
    let mut phi = rel.angle() - mid;
    // wrap into (-π, π]
    phi -= (2.0 * std::f64::consts::PI) * ((phi + std::f64::consts::PI) / (2.0 * std::f64::consts::PI)).floor();
    if phi.abs() <= half && rel != Vec2::ZERO {
        (rel.norm() - radius).abs()
    } else {
        let e0 = center + radius * Vec2::from_angle(from);
        let e1 = center + radius * Vec2::from_angle(to);
        x.dist(e0).min(x.dist(e1))
    }
}

/// The curve `γ_{θ₀}` in polar form, `r(θ) = 2/(1 + cos(θ₀ − |θ|))`, `|θ| ≤ θ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarCurve {
    pub theta0: f64,
}

impl PolarCurve {
    pub fn new(theta0: f64) -> Result<Self> {
        check_theta0(theta0)?;
        Ok(PolarCurve { theta0 })
    }

    fn check(&self, theta: f64) -> Result<()> {
        if theta.abs() <= self.theta0 {
            Ok(())
        } else {
            Err(Error::Domain {
                what: "polar angle theta",
                value: theta,
                range: "[-theta0, theta0]",
            })
        }
    }

    pub fn radius(&self, theta: f64) -> Result<f64> {
        self.check(theta)?;
        Ok(2.0 / (1.0 + (self.theta0 - theta.abs()).cos()))
    }

    /// `r'(θ)`; for `θ ≥ 0` this is `−2 sin(θ₀ − θ)/(1 + cos(θ₀ − θ))²`.
    /// The curve has a corner at `θ = 0`, where the right derivative is returned.
    pub fn radius_derivative(&self, theta: f64) -> Result<f64> {
        self.check(theta)?;
        let alpha = self.theta0 - theta.abs();
        let den = 1.0 + alpha.cos();
        let d = -2.0 * alpha.sin() / (den * den);
        Ok(if theta < 0.0 { -d } else { d })
    }

    /// Arclength density `dγ/dθ = cos⁻³(α/2)`, `α = θ₀ − |θ|`.
    pub fn line_element(&self, theta: f64) -> Result<f64> {
        self.check(theta)?;
        let c = (0.5 * (self.theta0 - theta.abs())).cos();
        Ok(1.0 / (c * c * c))
    }

    pub fn point(&self, theta: f64) -> Result<Vec2> {
        Ok(self.radius(theta)? * Vec2::from_angle(theta))
    }
}

pub fn gamma_radius(theta0: f64, theta: f64) -> Result<f64> {
    PolarCurve::new(theta0)?.radius(theta)
}

pub fn gamma_line_element(theta0: f64, theta: f64) -> Result<f64> {
    PolarCurve::new(theta0)?.line_element(theta)
}

/// Points of `γ_{θ₀}` on a uniform `θ`-mesh of `[−θ₀, θ₀]`, from `A'` to `A`.
pub fn gamma_polyline(theta0: f64, n_segments: usize) -> Result<Vec<Vec2>> {
    let curve = PolarCurve::new(theta0)?;
    if n_segments < 2 {
        return Err(Error::Domain {
            what: "n_segments",
            value: n_segments as f64,
            range: "[2, +inf)",
        });
    }
    (0..=n_segments)
        .map(|k| {
            let theta = if k == n_segments {
                theta0
            } else {
                -theta0 + 2.0 * theta0 * k as f64 / n_segments as f64
            };
            curve.point(theta)
        })
        .collect()
}

pub fn polyline_length(points: &[Vec2]) -> f64 {
    points.windows(2).map(|w| w[0].dist(w[1])).sum()
}
