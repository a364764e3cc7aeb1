//! Divergence-free unit vector fields given by closed-form region formulas and
//! an explicit list of jump curves.
//!
//! All fields are `m = (∇φ)⊥` with `⊥` the counterclockwise rotation by `π/2`:
//!
//! * viscosity solution `m₀`, `φ₀ = dist(·, ∂Ω)`: the vortex `−i·e^{iθ}` where
//!   `|θ| ≥ θ₀`, the wedges `−i·e^{±iθ₀}` in the kite, one wall on `[OB]`;
//! * competitor `m`, `φ = dist(·, ∂Ω ∪ C)`: the vortex in the whole disk, the
//!   anti-vortex `+i·e^{iθ}` between `C_{θ₀}` and `γ_{θ₀}`, the wedges beyond
//!   `γ_{θ₀}`; walls on `C_{θ₀}`, `γ_{θ₀}` and `[IB]`;
//! * one-dimensional transition `(∓sin θ₀, cos θ₀)` for `±x₂ > 0` on
//!   `(0,1)×(−1,1)`;
//! * tiling `m_n(x) = m̃(n x₁ − i, n x₂)` where `m̃ = −m(·/cos θ₀)` on the
//!   rescaled kite and the one-dimensional transition elsewhere.

mod curve;
mod descriptor;

pub use curve::{CurveShape, JumpCurve, Placement};
pub use descriptor::{FieldDescriptor, FieldKind};

use crate::error::{Error, Result};
use crate::geometry::{build_domain, dist_to_arc, dist_to_segment, DomainSpec};
use crate::vec2::Vec2;

/// Half-width of the band around jump curves and singular points where
/// [`PiecewiseField::eval`] refuses to pick a side.
pub const EVAL_BAND: f64 = 1e-9;

const RECT_TOL: f64 = 1e-12;

/// Closed-form pieces shared by all constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Piece {
    /// `−i·e^{iθ}`, tangent to circles centred at `O`.
    Vortex,
    /// `+i·e^{iθ}`.
    AntiVortex,
    /// `−i·e^{iθ₀}`.
    UpperWedge,
    /// `−i·e^{−iθ₀}`.
    LowerWedge,
    /// `m₊ = (−sin θ₀, cos θ₀)`.
    UpperTransition,
    /// `m₋ = (sin θ₀, cos θ₀)`.
    LowerTransition,
}

/// A region of a field: a piece, possibly inside tile `cell` of a tiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegionId {
    pub cell: Option<usize>,
    pub piece: Piece,
}

impl RegionId {
    fn global(piece: Piece) -> Self {
        RegionId { cell: None, piece }
    }
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        p.x >= self.x0 - tol && p.x <= self.x1 + tol && p.y >= self.y0 - tol && p.y <= self.y1 + tol
    }

    /// Corners in counterclockwise order starting at `(x0, y0)`.
    pub fn corners(&self) -> [Vec2; 4] {
        [
            Vec2::new(self.x0, self.y0),
            Vec2::new(self.x1, self.y0),
            Vec2::new(self.x1, self.y1),
            Vec2::new(self.x0, self.y1),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldDomain {
    Omega(DomainSpec),
    Rectangle(Rect),
}

impl FieldDomain {
    pub fn contains(&self, x: Vec2) -> bool {
        match self {
            FieldDomain::Omega(d) => d.contains(x),
            FieldDomain::Rectangle(r) => r.contains(x, RECT_TOL),
        }
    }

    pub fn bounds(&self) -> Rect {
        match self {
            FieldDomain::Omega(d) => Rect::new(-1.0, d.len_ob, -1.0, 1.0),
            FieldDomain::Rectangle(r) => *r,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseField {
    kind: FieldKind,
    theta0: f64,
    omega: DomainSpec,
    domain: FieldDomain,
    curves: Vec<JumpCurve>,
    singular_points: Vec<Vec2>,
}

/// Upper/lower wedge traces of the viscosity solution on `[OB]` are
/// `−i·e^{±iθ₀}`, jump `2 sin θ₀`.
pub fn viscosity_field(theta0: f64) -> Result<PiecewiseField> {
    let omega = build_domain(theta0)?;
    Ok(PiecewiseField {
        kind: FieldKind::Viscosity,
        theta0,
        omega,
        domain: FieldDomain::Omega(omega),
        curves: vec![JumpCurve::new(
            "OB",
            CurveShape::Axis {
                theta0,
                from: 0.0,
                to: omega.len_ob,
            },
        )],
        singular_points: vec![Vec2::ZERO],
    })
}

fn competitor_curves(omega: &DomainSpec) -> Vec<JumpCurve> {
    let theta0 = omega.theta0;
    vec![
        JumpCurve::new("gamma", CurveShape::Gamma { theta0 }),
        JumpCurve::new("arc", CurveShape::Arc { theta0 }),
        JumpCurve::new(
            "IB",
            CurveShape::Axis {
                theta0,
                from: omega.len_oi,
                to: omega.len_ob,
            },
        ),
    ]
}

/// The competitor `(∇ dist(·, ∂Ω ∪ C))⊥`; curves are listed as `γ`, `C_{θ₀}`,
/// `[IB]`, matching the energy components `I¹`, `I²`, `I³`.
pub fn competitor_field(theta0: f64) -> Result<PiecewiseField> {
    let omega = build_domain(theta0)?;
    Ok(PiecewiseField {
        kind: FieldKind::Competitor,
        theta0,
        omega,
        domain: FieldDomain::Omega(omega),
        curves: competitor_curves(&omega),
        singular_points: vec![Vec2::ZERO],
    })
}

pub fn unit_rectangle() -> Rect {
    Rect::new(0.0, 1.0, -1.0, 1.0)
}

pub fn one_d_transition(theta0: f64) -> Result<PiecewiseField> {
    let omega = build_domain(theta0)?;
    Ok(PiecewiseField {
        kind: FieldKind::OneDTransition,
        theta0,
        omega,
        domain: FieldDomain::Rectangle(unit_rectangle()),
        curves: vec![JumpCurve::new("flat", CurveShape::Flat { theta0 })],
        singular_points: Vec::new(),
    })
}

/// `n` side-by-side copies of `m̃` scaled by `1/n`. Only the placements of the
/// competitor's curves are stored per tile; evaluation maps back to one tile.
pub fn tiling_field(theta0: f64, n: usize) -> Result<PiecewiseField> {
    let omega = build_domain(theta0)?;
    if n == 0 {
        return Err(Error::Domain {
            what: "tiling count n",
            value: 0.0,
            range: "[1, +inf)",
        });
    }
    let base = competitor_curves(&omega);
    let scale = theta0.cos() / n as f64;
    let mut curves = Vec::with_capacity(3 * n);
    for i in 0..n {
        let placement = Placement {
            scale,
            offset: Vec2::new(i as f64 / n as f64, 0.0),
            negate: true,
        };
        for c in &base {
            curves.push(c.clone().placed(placement).with_id(format!("tile{i}/{}", c.id)));
        }
    }
    let singular_points = (0..=n).map(|i| Vec2::new(i as f64 / n as f64, 0.0)).collect();
    Ok(PiecewiseField {
        kind: FieldKind::Tiling { n },
        theta0,
        omega,
        domain: FieldDomain::Rectangle(unit_rectangle()),
        curves,
        singular_points,
    })
}

impl JumpCurve {
    fn with_id(mut self, id: String) -> Self {
        self.id = id;
        self
    }
}

/// One field of each kind: viscosity, competitor, transition and the `n`-tiling.
pub fn default_fields(theta0: f64, n: usize) -> Result<Vec<PiecewiseField>> {
    Ok(vec![
        viscosity_field(theta0)?,
        competitor_field(theta0)?,
        one_d_transition(theta0)?,
        tiling_field(theta0, n)?,
    ])
}

pub fn eval_field(field: &PiecewiseField, x: Vec2) -> Result<Vec2> {
    field.eval(x)
}

pub fn jump_curves(field: &PiecewiseField) -> &[JumpCurve] {
    field.jump_curves()
}

impl PiecewiseField {
    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Self> {
        match d.kind {
            FieldKind::Viscosity => viscosity_field(d.theta0),
            FieldKind::Competitor => competitor_field(d.theta0),
            FieldKind::OneDTransition => one_d_transition(d.theta0),
            FieldKind::Tiling { n } => tiling_field(d.theta0, n),
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            kind: self.kind,
            theta0: self.theta0,
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn domain(&self) -> &FieldDomain {
        &self.domain
    }

    /// Landmarks of `Ω(θ₀)` (also used for the kite of the tilings).
    pub fn omega(&self) -> &DomainSpec {
        &self.omega
    }

    pub fn jump_curves(&self) -> &[JumpCurve] {
        &self.curves
    }

    pub fn singular_points(&self) -> &[Vec2] {
        &self.singular_points
    }

    /// Whether the field is tangent to the domain boundary (`m·n = 0` on `∂Ω`).
    pub fn is_boundary_tangent(&self) -> bool {
        matches!(self.kind, FieldKind::Viscosity | FieldKind::Competitor)
    }

    fn check_point(&self, x: Vec2) -> Result<()> {
        if !x.is_finite() || !self.domain.contains(x) {
            return Err(Error::OutsideDomain(x));
        }
        if self.singular_points.iter().any(|s| s.dist(x) <= EVAL_BAND) {
            return Err(Error::SingularPoint(x));
        }
        Ok(())
    }

    /// The region containing `x`, by the membership predicates alone. Points on
    /// a jump curve are assigned to one side; only points outside the domain or
    /// at singular points fail.
    pub fn locate(&self, x: Vec2) -> Result<RegionId> {
        self.check_point(x)?;
        self.classify(x, None)
    }

    /// Value of the field at `x`, or an error naming the jump curve when `x` is
    /// within [`EVAL_BAND`] of one.
    pub fn eval(&self, x: Vec2) -> Result<Vec2> {
        self.check_point(x)?;
        let region = self.classify(x, Some(EVAL_BAND))?;
        Ok(self.region_value(region, x))
    }

    /// The closed-form value of `region` at `x`. The formulas extend smoothly past
    /// the region (away from `O`), which quadrature up to a region boundary relies on.
    pub fn region_value(&self, region: RegionId, x: Vec2) -> Vec2 {
        let theta0 = self.theta0;
        match region.cell {
            None => piece_value(region.piece, theta0, x),
            Some(i) => {
                let y = self.tile_local(i, x);
                -piece_value(region.piece, theta0, y)
            }
        }
    }

    fn tile_local(&self, i: usize, x: Vec2) -> Vec2 {
        let n = match self.kind {
            FieldKind::Tiling { n } => n as f64,
            _ => 1.0,
        };
        (n / self.theta0.cos()) * Vec2::new(x.x - i as f64 / n, x.y)
    }

    /// Region of `x` and, when `band` is given, an error if `x` lies within
    /// `band` of a jump curve.
    fn classify(&self, x: Vec2, band: Option<f64>) -> Result<RegionId> {
        let theta0 = self.theta0;
        let region = match self.kind {
            FieldKind::Viscosity => {
                if let Some(b) = band {
                    if dist_to_segment(x, Vec2::ZERO, self.omega.b) <= b {
                        return Err(on_curve("OB", x));
                    }
                }
                RegionId::global(viscosity_piece(theta0, x))
            }
            FieldKind::Competitor => {
                RegionId::global(competitor_piece(&self.omega, x, band, "").map_err(|c| on_curve(&c, x))?)
            }
            FieldKind::OneDTransition => {
                if let Some(b) = band {
                    if x.y.abs() <= b {
                        return Err(on_curve("flat", x));
                    }
                }
                RegionId::global(transition_piece(x))
            }
            FieldKind::Tiling { n } => {
                let i = ((x.x * n as f64).floor().max(0.0) as usize).min(n - 1);
                let y = self.tile_local(i, x);
                if self.omega.in_kite(y) {
                    let local_band = band.map(|b| b * n as f64 / theta0.cos());
                    let prefix = format!("tile{i}/");
                    let piece = competitor_piece(&self.omega, y, local_band, &prefix)
                        .map_err(|c| on_curve(&c, x))?;
                    RegionId {
                        cell: Some(i),
                        piece,
                    }
                } else {
                    RegionId::global(transition_piece(x))
                }
            }
        };
        Ok(region)
    }
}

fn on_curve(curve: &str, point: Vec2) -> Error {
    Error::OnJumpCurve {
        curve: curve.to_string(),
        point,
    }
}

fn piece_value(piece: Piece, theta0: f64, x: Vec2) -> Vec2 {
    match piece {
        Piece::Vortex => x.normalized().perp_cw(),
        Piece::AntiVortex => x.normalized().perp(),
        Piece::UpperWedge => Vec2::from_angle(theta0).perp_cw(),
        Piece::LowerWedge => Vec2::from_angle(-theta0).perp_cw(),
        Piece::UpperTransition => {
            let (s, c) = theta0.sin_cos();
            Vec2::new(-s, c)
        }
        Piece::LowerTransition => {
            let (s, c) = theta0.sin_cos();
            Vec2::new(s, c)
        }
    }
}

fn transition_piece(x: Vec2) -> Piece {
    if x.y >= 0.0 {
        Piece::UpperTransition
    } else {
        Piece::LowerTransition
    }
}

fn wedge(x: Vec2) -> Piece {
    if x.y >= 0.0 {
        Piece::UpperWedge
    } else {
        Piece::LowerWedge
    }
}

fn viscosity_piece(theta0: f64, x: Vec2) -> Piece {
    if x.angle().abs() >= theta0 {
        Piece::Vortex
    } else {
        wedge(x)
    }
}

/// Region of the competitor at `y ∈ Ω(θ₀)`. With a band, an `Err` carries the
/// id of the jump curve that `y` is too close to.
fn competitor_piece(
    omega: &DomainSpec,
    y: Vec2,
    band: Option<f64>,
    prefix: &str,
) -> std::result::Result<Piece, String> {
    let theta0 = omega.theta0;
    let r = y.norm();
    if let Some(b) = band {
        if dist_to_arc(y, Vec2::ZERO, 1.0, -theta0, theta0) <= b {
            return Err(format!("{prefix}arc"));
        }
        if dist_to_segment(y, omega.i_point, omega.b) <= b {
            return Err(format!("{prefix}IB"));
        }
    }
    if r <= 1.0 {
        return Ok(Piece::Vortex);
    }
    // r > 1 inside Ω forces |θ| < θ₀
    let tangent = if y.y >= 0.0 { omega.a } else { omega.a_prime };
    let level = (r - 1.0) - (1.0 - y.dot(tangent));
    if let Some(b) = band {
        let grad = (y.normalized() + tangent).norm();
        if level.abs() <= b * grad {
            return Err(format!("{prefix}gamma"));
        }
    }
    Ok(if level < 0.0 { Piece::AntiVortex } else { wedge(y) })
}
