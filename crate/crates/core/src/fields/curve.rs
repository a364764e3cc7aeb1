//! Jump curves with closed-form geometry and one-sided traces.
//!
//! Orientation: `normal(s)` points into the `+` side, so `trace_plus(s)` is the
//! limit of the field approached from `point(s) + ε·normal(s)`.

use crate::geometry::{dist_to_arc, dist_to_segment};
use crate::vec2::Vec2;

/// Base shape of a jump curve, in the coordinates of `Ω(θ₀)` (or of the unit
/// rectangle for [`CurveShape::Flat`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveShape {
    /// A piece `[from, to]` of the axis `(OB)` separating the upper and lower
    /// wedges `−i·e^{±iθ₀}`; parameter is the abscissa.
    Axis { theta0: f64, from: f64, to: f64 },
    /// `C_{θ₀} = {e^{iθ} : |θ| < θ₀}`; parameter is `θ`.
    Arc { theta0: f64 },
    /// `γ_{θ₀}`; parameter is the polar angle `θ`.
    Gamma { theta0: f64 },
    /// The wall `{x₂ = 0}` of the one-dimensional transition; parameter is `x₁ ∈ [0, 1]`.
    Flat { theta0: f64 },
}

/// Similarity `x ↦ offset + scale·x`, optionally negating the field values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub scale: f64,
    pub offset: Vec2,
    pub negate: bool,
}

impl Placement {
    pub const IDENTITY: Placement = Placement {
        scale: 1.0,
        offset: Vec2::ZERO,
        negate: false,
    };

    pub fn apply(&self, x: Vec2) -> Vec2 {
        self.offset + self.scale * x
    }

    pub fn inverse(&self, x: Vec2) -> Vec2 {
        (1.0 / self.scale) * (x - self.offset)
    }

    fn sign(&self, v: Vec2) -> Vec2 {
        if self.negate {
            -v
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpCurve {
    pub id: String,
    pub shape: CurveShape,
    pub placement: Placement,
}

impl JumpCurve {
    pub fn new(id: impl Into<String>, shape: CurveShape) -> Self {
        JumpCurve {
            id: id.into(),
            shape,
            placement: Placement::IDENTITY,
        }
    }

    pub fn placed(mut self, placement: Placement) -> Self {
        self.placement = placement;
        self
    }

    pub fn parameter_range(&self) -> (f64, f64) {
        match self.shape {
            CurveShape::Axis { from, to, .. } => (from, to),
            CurveShape::Arc { theta0 } | CurveShape::Gamma { theta0 } => (-theta0, theta0),
            CurveShape::Flat { .. } => (0.0, 1.0),
        }
    }

    /// Interior parameters where the curve has a corner.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.shape {
            CurveShape::Gamma { .. } => vec![0.0],
            _ => Vec::new(),
        }
    }

    fn base_point(&self, s: f64) -> Vec2 {
        match self.shape {
            CurveShape::Axis { .. } | CurveShape::Flat { .. } => Vec2::new(s, 0.0),
            CurveShape::Arc { .. } => Vec2::from_angle(s),
            CurveShape::Gamma { theta0 } => {
                let alpha = (theta0 - s.abs()).max(0.0);
                (2.0 / (1.0 + alpha.cos())) * Vec2::from_angle(s)
            }
        }
    }

    pub fn point(&self, s: f64) -> Vec2 {
        self.placement.apply(self.base_point(s))
    }

    /// `|dpoint/ds|`.
    pub fn line_element(&self, s: f64) -> f64 {
        let base = match self.shape {
            CurveShape::Axis { .. } | CurveShape::Flat { .. } | CurveShape::Arc { .. } => 1.0,
            CurveShape::Gamma { theta0 } => {
                let c = (0.5 * (theta0 - s.abs()).max(0.0)).cos();
                1.0 / (c * c * c)
            }
        };
        self.placement.scale * base
    }

    pub fn normal(&self, s: f64) -> Vec2 {
        match self.shape {
            CurveShape::Axis { .. } | CurveShape::Flat { .. } => Vec2::new(0.0, 1.0),
            CurveShape::Arc { .. } => Vec2::from_angle(s),
            CurveShape::Gamma { theta0 } => {
                (Vec2::from_angle(s) + Vec2::from_angle(theta0.copysign(s))).normalized()
            }
        }
    }

    fn base_traces(&self, s: f64) -> (Vec2, Vec2) {
        match self.shape {
            CurveShape::Axis { theta0, .. } => (
                Vec2::from_angle(theta0).perp_cw(),
                Vec2::from_angle(-theta0).perp_cw(),
            ),
            CurveShape::Arc { .. } => {
                let e = Vec2::from_angle(s);
                (e.perp(), e.perp_cw())
            }
            CurveShape::Gamma { theta0 } => (
                Vec2::from_angle(theta0.copysign(s)).perp_cw(),
                Vec2::from_angle(s).perp(),
            ),
            CurveShape::Flat { theta0 } => {
                let (sn, cs) = theta0.sin_cos();
                (Vec2::new(-sn, cs), Vec2::new(sn, cs))
            }
        }
    }

    pub fn trace_plus(&self, s: f64) -> Vec2 {
        self.placement.sign(self.base_traces(s).0)
    }

    pub fn trace_minus(&self, s: f64) -> Vec2 {
        self.placement.sign(self.base_traces(s).1)
    }

    /// Closed-form jump size `|m₊ − m₋|`.
    pub fn jump_size(&self, s: f64) -> f64 {
        match self.shape {
            CurveShape::Axis { theta0, .. } | CurveShape::Flat { theta0 } => 2.0 * theta0.sin(),
            CurveShape::Arc { .. } => 2.0,
            CurveShape::Gamma { theta0 } => 2.0 * (0.5 * (theta0 - s.abs()).max(0.0)).cos(),
        }
    }

    /// `Some((t, length))` when the jump size and line element are constant,
    /// so the energy is exactly `f(t)·length`.
    pub fn uniform_jump(&self) -> Option<(f64, f64)> {
        let (a, b) = self.parameter_range();
        match self.shape {
            CurveShape::Gamma { .. } => None,
            _ => Some((self.jump_size(a), self.placement.scale * (b - a))),
        }
    }

    /// Euclidean distance from `x` to the curve.
    pub fn distance(&self, x: Vec2) -> f64 {
        let y = self.placement.inverse(x);
        let base = match self.shape {
            CurveShape::Axis { from, to, .. } => {
                dist_to_segment(y, Vec2::new(from, 0.0), Vec2::new(to, 0.0))
            }
            CurveShape::Flat { .. } => dist_to_segment(y, Vec2::ZERO, Vec2::new(1.0, 0.0)),
            CurveShape::Arc { theta0 } => dist_to_arc(y, Vec2::ZERO, 1.0, -theta0, theta0),
            CurveShape::Gamma { theta0 } => gamma_distance(theta0, y),
        };
        self.placement.scale * base
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        let (lo, hi) = match self.shape {
            CurveShape::Axis { from, to, .. } => (Vec2::new(from, 0.0), Vec2::new(to, 0.0)),
            CurveShape::Flat { .. } => (Vec2::ZERO, Vec2::new(1.0, 0.0)),
            CurveShape::Arc { theta0 } => (Vec2::new(theta0.cos(), -theta0.sin()), Vec2::new(1.0, theta0.sin())),
            CurveShape::Gamma { theta0 } => {
                let r0 = 2.0 / (1.0 + theta0.cos());
                (Vec2::new(theta0.cos(), -theta0.sin()), Vec2::new(r0, theta0.sin()))
            }
        };
        (self.placement.apply(lo), self.placement.apply(hi))
    }
}

/// Distance to `γ_{θ₀}`: coarse scan over the parameter, then golden-section
/// refinement around the best sample.
fn gamma_distance(theta0: f64, y: Vec2) -> f64 {
    let at = |th: f64| {
        let alpha = (theta0 - th.abs()).max(0.0);
        (2.0 / (1.0 + alpha.cos())) * Vec2::from_angle(th)
    };
    const COARSE: usize = 64;
    let h = 2.0 * theta0 / COARSE as f64;
    let (mut best_k, mut best) = (0usize, f64::INFINITY);
    for k in 0..=COARSE {
        let d = y.dist(at(-theta0 + h * k as f64));
        if d < best {
            best = d;
            best_k = k;
        }
    }
    let center = -theta0 + h * best_k as f64;
    let (mut lo, mut hi) = ((center - h).max(-theta0), (center + h).min(theta0));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (y.dist(at(c)), y.dist(at(d)));
    for _ in 0..60 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = y.dist(at(c));
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = y.dist(at(d));
        }
    }
    best.min(fc).min(fd)
}
