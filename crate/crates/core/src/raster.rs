//! Sampling-based checks that do not rely on the closed-form jump data: raster
//! grids, flux through rectangles, `L¹` distances and a polygonal estimate of
//! the line energy.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::costfn::JumpCost;
use crate::energy::{integrate, EnergyBreakdown};
use crate::error::{Error, Result};
use crate::fields::{JumpCurve, PiecewiseField, Rect, RegionId, EVAL_BAND};
use crate::vec2::Vec2;

/// Default offset of the trace probes in [`numeric_line_energy`].
pub const DEFAULT_SIDE_OFFSET: f64 = 1e-6;

/// Midpoint samples of a field on a uniform grid; `None` marks excluded cells.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid {
    pub bounds: Rect,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `samples[j * nx + i]` for column `i`, row `j`.
    pub samples: Vec<Option<Vec2>>,
}

impl RasterGrid {
    pub fn cell_center(&self, i: usize, j: usize) -> Vec2 {
        cell_center(&self.bounds, self.nx, self.ny, i, j)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Vec2> {
        self.samples[j * self.nx + i]
    }

    pub fn mask_fraction(&self) -> f64 {
        self.samples.iter().filter(|s| s.is_none()).count() as f64 / self.samples.len() as f64
    }

    /// `max | |m| − 1 |` over unmasked cells.
    pub fn max_norm_deviation(&self) -> f64 {
        self.samples
            .iter()
            .flatten()
            .map(|v| (v.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// CSV dump with header `x,y,mx,my,mask`; masked cells have `NaN` components.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "mx", "my", "mask"])?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let c = self.cell_center(i, j);
                let (mx, my, mask) = match self.get(i, j) {
                    Some(v) => (v.x, v.y, 0),
                    None => (f64::NAN, f64::NAN, 1),
                };
                w.write_record([c.x.to_string(), c.y.to_string(), mx.to_string(), my.to_string(), mask.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn cell_center(bounds: &Rect, nx: usize, ny: usize, i: usize, j: usize) -> Vec2 {
    Vec2::new(
        bounds.x0 + bounds.width() * (i as f64 + 0.5) / nx as f64,
        bounds.y0 + bounds.height() * (j as f64 + 0.5) / ny as f64,
    )
}

fn check_resolution(nx: usize, ny: usize) -> Result<()> {
    for (what, v) in [("grid width nx", nx), ("grid height ny", ny)] {
        if v < 2 {
            return Err(Error::Domain {
                what,
                value: v as f64,
                range: "[2, +inf)",
            });
        }
    }
    Ok(())
}

fn dist_to_box(x: Vec2, (lo, hi): (Vec2, Vec2)) -> f64 {
    let dx = (lo.x - x.x).max(x.x - hi.x).max(0.0);
    let dy = (lo.y - x.y).max(x.y - hi.y).max(0.0);
    dx.hypot(dy)
}

/// Whether `x` lies within `band` of a jump curve or singular point of `field`.
fn in_band(field: &PiecewiseField, x: Vec2, band: f64) -> bool {
    field.singular_points().iter().any(|s| s.dist(x) <= band)
        || field
            .jump_curves()
            .iter()
            .any(|c| dist_to_box(x, c.bounding_box()) <= band && c.distance(x) <= band)
}

/// Midpoint samples of `field` on an `nx × ny` grid over `bounds`. Cells whose
/// centre is outside the domain, within `band` of a jump curve or singular
/// point, or otherwise not evaluable are masked.
pub fn sample_field(field: &PiecewiseField, bounds: Rect, nx: usize, ny: usize, band: f64) -> Result<RasterGrid> {
    check_resolution(nx, ny)?;
    let samples = (0..ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            (0..nx).map(move |i| {
                let x = cell_center(&bounds, nx, ny, i, j);
                if band > 0.0 && in_band(field, x, band) {
                    None
                } else {
                    field.eval(x).ok()
                }
            })
        })
        .collect();
    Ok(RasterGrid {
        bounds,
        nx,
        ny,
        samples,
    })
}

/// Pairwise sum, so reductions do not depend on the thread schedule.
fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Midpoint Riemann sum of `|a − b|` over `bounds`. Returns `(value, upper_error)`
/// where `upper_error = 2 · (area of cells where either field is not evaluable)`.
pub fn l1_distance(
    a: &PiecewiseField,
    b: &PiecewiseField,
    bounds: Rect,
    nx: usize,
    ny: usize,
) -> Result<(f64, f64)> {
    check_resolution(nx, ny)?;
    let area = bounds.width() * bounds.height() / (nx * ny) as f64;
    let rows: Vec<(f64, f64)> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let (mut sum, mut masked) = (Vec::with_capacity(nx), 0usize);
            for i in 0..nx {
                let x = cell_center(&bounds, nx, ny, i, j);
                match (a.eval(x), b.eval(x)) {
                    (Ok(u), Ok(v)) => sum.push((u - v).norm()),
                    _ => masked += 1,
                }
            }
            (pairwise_sum(&sum), masked as f64)
        })
        .collect();
    let value: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let masked: f64 = rows.iter().map(|r| r.1).sum();
    Ok((pairwise_sum(&value) * area, 2.0 * masked * area))
}

/// Rectangles inside the domain of `field`, with edges at least `1e-3` away
/// from every singular point. Deterministic for a given seed.
pub fn random_rectangles(field: &PiecewiseField, count: usize, seed: u64) -> Vec<Rect> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = field.domain().bounds();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (x0, x1) = sorted(rng.gen_range(b.x0..b.x1), rng.gen_range(b.x0..b.x1));
        let (y0, y1) = sorted(rng.gen_range(b.y0..b.y1), rng.gen_range(b.y0..b.y1));
        let r = Rect::new(x0, x1, y0, y1);
        if r.width() < 1e-3 || r.height() < 1e-3 {
            continue;
        }
        if !r.corners().iter().all(|&c| field.domain().contains(c)) {
            continue;
        }
        let clear = field.singular_points().iter().all(|&s| {
            edges(&r).iter().all(|&(p, q)| crate::geometry::dist_to_segment(s, p, q) > 1e-3)
        });
        if clear {
            out.push(r);
        }
    }
    out
}

fn sorted(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Edges in counterclockwise order.
fn edges(r: &Rect) -> [(Vec2, Vec2); 4] {
    let c = r.corners();
    [(c[0], c[1]), (c[1], c[2]), (c[2], c[3]), (c[3], c[0])]
}

/// Parameters `t ∈ (0, 1)` where the segment `p → q` crosses `curve`.
fn crossings(curve: &JumpCurve, p: Vec2, q: Vec2) -> Vec<f64> {
    const SAMPLES: usize = 2048;
    let d = q - p;
    let len2 = d.dot(d);
    let side = |s: f64| d.cross(curve.point(s) - p);
    let (a, b) = curve.parameter_range();
    let mut out = Vec::new();
    let mut s0 = a;
    let mut f0 = side(s0);
    for k in 1..=SAMPLES {
        let s1 = a + (b - a) * k as f64 / SAMPLES as f64;
        let f1 = side(s1);
        if f0 == 0.0 || f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (s0, s1, f0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = side(mid);
                if flo == 0.0 || (fm != 0.0 && (fm < 0.0) != (flo < 0.0)) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            let t = (curve.point(0.5 * (lo + hi)) - p).dot(d) / len2;
            if t > 0.0 && t < 1.0 {
                out.push(t);
            }
        }
        s0 = s1;
        f0 = f1;
    }
    out
}

struct EdgeFlux<'a> {
    field: &'a PiecewiseField,
    p: Vec2,
    d: Vec2,
    normal: Vec2,
    probes: usize,
}

impl EdgeFlux<'_> {
    fn at(&self, t: f64) -> Vec2 {
        self.p + t * self.d
    }

    fn region(&self, t: f64) -> Result<RegionId> {
        self.field.locate(self.at(t))
    }

    /// Boundary between the regions at `lo` and `hi`, by bisection on `locate`.
    fn split_point(&self, mut lo: f64, mut hi: f64, r_lo: RegionId) -> Result<f64> {
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.region(mid)? == r_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `∫ m·n` over `[t0, t1]`: probes the region at interior points and
    /// splits where it changes, then integrates the region formula.
    fn piece(&self, t0: f64, t1: f64, depth: u32) -> Result<f64> {
        let len = t1 - t0;
        // interior probes plus two just inside the ends, whose own side may be ambiguous
        let mut probes = Vec::with_capacity(self.probes + 2);
        probes.push(t0 + 1e-9 * len);
        probes.extend((0..self.probes).map(|k| t0 + len * (k as f64 + 0.5) / self.probes as f64));
        probes.push(t1 - 1e-9 * len);
        let r0 = self.region(probes[0])?;
        for w in probes.windows(2) {
            if depth < 32 && self.region(w[1])? != r0 {
                let s = self.split_point(w[0], w[1], r0)?;
                return Ok(self.piece(t0, s, depth + 1)? + self.piece(s, t1, depth + 1)?);
            }
        }
        let scale = self.d.norm();
        let q = integrate(
            |t| self.field.region_value(r0, self.at(t)).dot(self.normal) * scale,
            t0,
            t1,
            1e-14,
        )
        .or_else(|e| match e {
            Error::Accuracy { best, .. } => Ok(crate::energy::Quadrature {
                value: best,
                error_estimate: 0.0,
                evaluations: 0,
            }),
            e => Err(e),
        })?;
        Ok(q.value)
    }
}

fn edge_along_curve(field: &PiecewiseField, p: Vec2, q: Vec2) -> Option<String> {
    field
        .jump_curves()
        .iter()
        .find(|c| [0.25, 0.5, 0.75].iter().all(|&u| c.distance(p + u * (q - p)) <= 1e-12))
        .map(|c| c.id.clone())
}

/// Net flux `∮ m·n ds` through the boundary of `rect`.
pub fn rectangle_flux(field: &PiecewiseField, rect: &Rect, probes_per_edge: usize) -> Result<f64> {
    let mut total = 0.0;
    for (p, q) in edges(rect) {
        if let Some(curve) = edge_along_curve(field, p, q) {
            return Err(Error::EdgeOnCurve { curve });
        }
        let d = q - p;
        let mut cuts = vec![0.0, 1.0];
        let (lo, hi) = (Vec2::new(p.x.min(q.x), p.y.min(q.y)), Vec2::new(p.x.max(q.x), p.y.max(q.y)));
        for c in field.jump_curves() {
            let (clo, chi) = c.bounding_box();
            if clo.x <= hi.x && chi.x >= lo.x && clo.y <= hi.y && chi.y >= lo.y {
                cuts.extend(crossings(c, p, q));
            }
        }
        cuts.sort_by(f64::total_cmp);
        let edge = EdgeFlux {
            field,
            p,
            d,
            normal: d.normalized().perp_cw(),
            probes: probes_per_edge.max(2),
        };
        for w in cuts.windows(2) {
            if w[1] > w[0] {
                total += edge.piece(w[0], w[1], 0)?;
            }
        }
    }
    Ok(total)
}

/// `max |∮ m·n ds|` over `rects`; edges are split where they cross a jump curve
/// or where the region of the field changes, and each piece is integrated with
/// the adaptive rule.
pub fn flux_check(field: &PiecewiseField, rects: &[Rect], probes_per_edge: usize) -> Result<f64> {
    let fluxes: Vec<f64> = rects
        .par_iter()
        .map(|r| rectangle_flux(field, r, probes_per_edge).map(f64::abs))
        .collect::<Result<_>>()?;
    Ok(fluxes.into_iter().fold(0.0, f64::max))
}

/// Polygonal line energy with traces probed by field evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericEnergy {
    pub breakdown: EnergyBreakdown,
    /// Segments where no probe pair could be evaluated; they contribute nothing.
    pub unreliable_segments: usize,
}

/// Jump across the chord `p0 → p1` at the curve point `mid`, probed at
/// `mid ± δ·normal` for `δ = offset, offset/2, …`; the smallest `δ` whose probes
/// both evaluate wins.
fn probe_jump(field: &PiecewiseField, mid: Vec2, normal: Vec2, offset: f64) -> Option<f64> {
    let mut best = None;
    let mut delta = offset;
    while delta > EVAL_BAND {
        if let (Ok(a), Ok(b)) = (field.eval(mid + delta * normal), field.eval(mid - delta * normal)) {
            best = Some((a - b).norm());
        }
        delta *= 0.5;
    }
    best
}

/// Line energy from a polygonal discretisation of each jump curve into
/// `n_segments` chords, probing the traces by evaluating the field on both
/// sides of each chord. Only the curve parametrisations are used.
pub fn numeric_line_energy(
    field: &PiecewiseField,
    f: &JumpCost,
    n_segments: usize,
    side_offset: f64,
) -> Result<NumericEnergy> {
    if n_segments < 8 {
        return Err(Error::Domain {
            what: "n_segments",
            value: n_segments as f64,
            range: "[8, +inf)",
        });
    }
    if !(side_offset > EVAL_BAND) {
        return Err(Error::Domain {
            what: "side_offset",
            value: side_offset,
            range: "(1e-9, +inf)",
        });
    }
    let mut per_curve = Vec::new();
    let mut unreliable = 0;
    for c in field.jump_curves() {
        let (a, b) = c.parameter_range();
        let terms: Vec<Result<Option<f64>>> = (0..n_segments)
            .into_par_iter()
            .map(|k| {
                let s0 = a + (b - a) * k as f64 / n_segments as f64;
                let s1 = a + (b - a) * (k + 1) as f64 / n_segments as f64;
                let (p0, p1) = (c.point(s0), c.point(s1));
                let chord = p1 - p0;
                let normal = chord.normalized().perp();
                match probe_jump(field, c.point(0.5 * (s0 + s1)), normal, side_offset) {
                    Some(t) => Ok(Some(f.eval_jump(t)? * chord.norm())),
                    None => Ok(None),
                }
            })
            .collect();
        let mut values = Vec::with_capacity(n_segments);
        for t in terms {
            match t? {
                Some(v) => values.push(v),
                None => unreliable += 1,
            }
        }
        per_curve.push((c.id.clone(), pairwise_sum(&values)));
    }
    let total = per_curve.iter().map(|(_, e)| e).sum();
    Ok(NumericEnergy {
        breakdown: EnergyBreakdown {
            per_curve,
            total,
            components: None,
            quadrature_error_estimate: 0.0,
        },
        unreliable_segments: unreliable,
    })
}

/// Default raster bounds for a field: the bounding box of its domain.
pub fn default_bounds(field: &PiecewiseField) -> Rect {
    field.domain().bounds()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{line_energy, DEFAULT_TOL};
    use crate::fields::{competitor_field, one_d_transition, tiling_field, unit_rectangle, viscosity_field};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn transition_raster_takes_two_values() {
        let m = one_d_transition(FRAC_PI_3).unwrap();
        let h = 2.0 / 64.0;
        let g = sample_field(&m, unit_rectangle(), 64, 64, h).unwrap();
        let s3 = 3f64.sqrt() / 2.0;
        for v in g.samples.iter().flatten() {
            assert_abs_diff_eq!(v.x.abs(), s3, epsilon = 1e-15);
            assert_abs_diff_eq!(v.y, 0.5, epsilon = 1e-15);
        }
        // rows j = 31, 32 straddle the wall
        assert!((0..64).all(|i| g.get(i, 31).is_none() && g.get(i, 32).is_none()));
        assert!((0..64).all(|i| g.get(i, 30).is_some()));
    }

    #[test]
    fn viscosity_raster_is_unit() {
        let m0 = viscosity_field(FRAC_PI_3).unwrap();
        let g = sample_field(&m0, default_bounds(&m0), 256, 256, 0.0).unwrap();
        assert!(g.max_norm_deviation() <= 1e-12);
        // outside cells are masked
        assert!(g.mask_fraction() > 0.0);
    }

    #[test]
    fn mask_shrinks_with_band() {
        let m = competitor_field(1.0).unwrap();
        let b = default_bounds(&m);
        let fractions: Vec<f64> = [0.1, 0.01, 0.001, 0.0]
            .iter()
            .map(|&band| sample_field(&m, b, 128, 128, band).unwrap().mask_fraction())
            .collect();
        assert!(fractions.windows(2).all(|w| w[0] >= w[1]));
        assert!(fractions[0] > fractions[3]);
    }

    #[test]
    fn resolution_is_validated() {
        let m = competitor_field(1.0).unwrap();
        assert!(sample_field(&m, unit_rectangle(), 1, 5, 0.0).is_err());
        assert!(l1_distance(&m, &m, unit_rectangle(), 5, 1).is_err());
    }

    #[test]
    fn flux_examples() {
        let m = one_d_transition(FRAC_PI_3).unwrap();
        let inside = Rect::new(0.1, 0.4, 0.2, 0.7);
        assert!(flux_check(&m, &[inside], 16).unwrap() <= 1e-12);
        let straddle = Rect::new(0.1, 0.4, -0.2, 0.7);
        assert!(flux_check(&m, &[straddle], 16).unwrap() <= 1e-12);

        let m0 = viscosity_field(FRAC_PI_3).unwrap();
        let across = Rect::new(0.4, 1.3, -0.3, 0.25);
        assert!(flux_check(&m0, &[across], 16).unwrap() <= 1e-8);

        let m = competitor_field(FRAC_PI_3).unwrap();
        let around = Rect::new(-0.5, 0.5, -0.5, 0.5);
        assert!(flux_check(&m, &[around], 16).unwrap() <= 1e-8);
        let wide = Rect::new(0.3, 1.7, -0.1, 0.15);
        assert!(flux_check(&m, &[wide], 16).unwrap() <= 1e-8);
    }

    #[test]
    fn edge_on_a_wall_is_rejected() {
        let m = one_d_transition(FRAC_PI_3).unwrap();
        let r = Rect::new(0.1, 0.4, 0.0, 0.7);
        assert!(matches!(flux_check(&m, &[r], 16), Err(Error::EdgeOnCurve { .. })));
    }

    #[test]
    fn random_rectangles_are_seeded_and_admissible() {
        let m = competitor_field(FRAC_PI_3).unwrap();
        let a = random_rectangles(&m, 20, 7);
        assert_eq!(a, random_rectangles(&m, 20, 7));
        assert_ne!(a, random_rectangles(&m, 20, 8));
        assert!(a.iter().all(|r| r.corners().iter().all(|&c| m.domain().contains(c))));
    }

    #[test]
    fn l1_examples() {
        let m = tiling_field(FRAC_PI_3, 4).unwrap();
        let (d, err) = l1_distance(&m, &m, unit_rectangle(), 64, 64).unwrap();
        assert_eq!(d, 0.0);
        assert!(err >= 0.0);
        let flat = one_d_transition(FRAC_PI_3).unwrap();
        let (d, _) = l1_distance(&flat, &flat, unit_rectangle(), 64, 64).unwrap();
        assert_eq!(d, 0.0);
        // support of the difference has area n·(cos θ₀/n)²·|kite|, integrand ≤ 2
        let kite_area = FRAC_PI_3.sin() * (1.0 / FRAC_PI_3.cos());
        for n in [4, 8, 16] {
            let m = tiling_field(FRAC_PI_3, n).unwrap();
            let (d, _) = l1_distance(&m, &flat, unit_rectangle(), 512, 512).unwrap();
            let bound = 2.0 * n as f64 * (FRAC_PI_3.cos() / n as f64).powi(2) * kite_area;
            assert!(d > 0.0 && d <= bound * 1.05, "{n}: {d} vs {bound}");
        }
    }

    #[test]
    fn numeric_energy_matches_closed_forms() {
        let f = JumpCost::power(3.0).unwrap();
        let m0 = viscosity_field(FRAC_PI_3).unwrap();
        let e = numeric_line_energy(&m0, &f, 1000, DEFAULT_SIDE_OFFSET).unwrap();
        assert_eq!(e.unreliable_segments, 0);
        assert_abs_diff_eq!(e.breakdown.total, 6.0 * 3f64.sqrt(), epsilon = 1e-9);

        let m = competitor_field(FRAC_PI_3).unwrap();
        let e = numeric_line_energy(&m, &f, 10, DEFAULT_SIDE_OFFSET).unwrap();
        // [IB] is straight with a constant jump
        assert_abs_diff_eq!(e.breakdown.per_curve[2].1, 2.0 * 3f64.sqrt(), epsilon = 1e-9);
        assert!(numeric_line_energy(&m, &f, 4, DEFAULT_SIDE_OFFSET).is_err());
    }

    #[test]
    fn numeric_energy_converges_at_first_order_or_better() {
        let f = JumpCost::power(1.0).unwrap();
        let m = competitor_field(FRAC_PI_3).unwrap();
        let exact = line_energy(&m, &f, DEFAULT_TOL).unwrap().total;
        let e: Vec<f64> = [64, 128, 256]
            .iter()
            .map(|&n| numeric_line_energy(&m, &f, n, DEFAULT_SIDE_OFFSET).unwrap().breakdown.total)
            .collect();
        let order = ((e[0] - e[1]) / (e[1] - e[2])).abs().log2();
        assert!(order >= 1.0, "observed order {order}");
        assert!((e[2] - exact).abs() < (e[0] - exact).abs());
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let m = one_d_transition(0.5).unwrap();
        let g = sample_field(&m, unit_rectangle(), 4, 4, 0.0).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,y,mx,my,mask"));
        assert_eq!(lines.count(), 16);
    }
}
