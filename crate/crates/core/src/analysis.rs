//! Decision procedures on top of the energies: the critical angle below which
//! the competitor beats the viscosity solution for `t^p`, batch sweeps over
//! `θ₀`, and the tiling sequence report.

use rayon::prelude::*;

use crate::costfn::JumpCost;
use crate::energy::{energy_gap, gap_report, line_energy, GapReport};
use crate::error::{Error, Result};
use crate::fields::{one_d_transition, tiling_field, Rect};
use crate::geometry::check_theta0;
use crate::raster::l1_distance;

/// Absolute quadrature tolerance for gap evaluations inside the root search.
const SEARCH_QUAD_TOL: f64 = 1e-13;
/// Exponents `k` of the scan `θ = (π/4)·2^{−k}`.
const SCAN_LEVELS: i32 = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalAngleResult {
    pub p: f64,
    pub theta_star: f64,
    pub bracket: (f64, f64),
    pub gap_at_lo: f64,
    pub gap_at_hi: f64,
    pub iterations: usize,
    /// Number of sign changes seen on the scan (informational).
    pub crossings: usize,
}

/// The scan mesh, in decreasing order.
pub fn scan_mesh() -> Vec<f64> {
    (0..=SCAN_LEVELS)
        .map(|k| std::f64::consts::FRAC_PI_4 * 2f64.powi(-k))
        .collect()
}

/// Angle where the gap for `t^p` changes from negative (below) to positive
/// (above), to within `tol`. Scans `θ = (π/4)·2^{−k}` and bisects the largest
/// bracketed crossing.
pub fn critical_angle(p: f64, tol: f64) -> Result<CriticalAngleResult> {
    let f = JumpCost::power(p)?;
    if !(tol >= 1e-12) {
        return Err(Error::Domain {
            what: "tol",
            value: tol,
            range: "[1e-12, +inf)",
        });
    }
    let gap = |theta: f64| energy_gap(&f, theta, SEARCH_QUAD_TOL);
    let mesh = scan_mesh();
    let gaps = mesh.iter().map(|&t| gap(t)).collect::<Result<Vec<_>>>()?;
    let mut crossings = 0;
    let mut bracket = None;
    // mesh[k + 1] < mesh[k]
    for k in 0..mesh.len() - 1 {
        let (g_hi, g_lo) = (gaps[k], gaps[k + 1]);
        if (g_hi > 0.0 && g_lo < 0.0) || (g_hi < 0.0 && g_lo > 0.0) {
            crossings += 1;
            if bracket.is_none() && g_lo < 0.0 {
                bracket = Some((mesh[k + 1], mesh[k], g_lo, g_hi));
            }
        }
    }
    let Some((mut lo, mut hi, mut g_lo, mut g_hi)) = bracket else {
        return Err(Error::NoSignChange { mesh });
    };
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g = gap(mid)?;
        if g < 0.0 {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
            g_hi = g;
        }
        iterations += 1;
    }
    Ok(CriticalAngleResult {
        p,
        theta_star: 0.5 * (lo + hi),
        bracket: (lo, hi),
        gap_at_lo: g_lo,
        gap_at_hi: g_hi,
        iterations,
        crossings,
    })
}

/// One [`GapReport`] per angle, in input order.
pub fn sweep_gap(f: &JumpCost, thetas: &[f64], tol: f64) -> Result<Vec<GapReport>> {
    for &t in thetas {
        check_theta0(t)?;
    }
    thetas.par_iter().map(|&t| gap_report(f, t, tol)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LscRow {
    pub n: usize,
    pub energy: f64,
    pub l1_distance: f64,
    /// Upper bound on the contribution of cells that could not be evaluated.
    pub l1_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LscReport {
    pub theta0: f64,
    pub cost: String,
    pub rows: Vec<LscRow>,
    /// Energy of the single straight wall the tilings converge to.
    pub energy_of_1d: f64,
}

impl LscReport {
    pub const CSV_HEADER: [&'static str; 3] = ["n", "energy", "l1_distance"];

    /// `energy_of_1d − max_n E(m_n)`; positive when every tiling beats the wall.
    pub fn margin(&self) -> f64 {
        let worst = self.rows.iter().map(|r| r.energy).fold(f64::NEG_INFINITY, f64::max);
        self.energy_of_1d - worst
    }

    /// Largest spread of the tiling energies.
    pub fn energy_spread(&self) -> f64 {
        let (lo, hi) = self
            .rows
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.energy), hi.max(r.energy)));
        hi - lo
    }

    pub fn l1_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].l1_distance < w[0].l1_distance)
    }

    /// The energy of the tilings is constant in `n`, their `L¹` distance to the
    /// wall decreases, and their common energy is below the wall's.
    pub fn violation_certified(&self, energy_tol: f64) -> bool {
        self.margin() > 0.0 && self.energy_spread() <= energy_tol && self.l1_strictly_decreasing()
    }
}

/// Strip `[0, 1] × [−h, h]` outside of which every tiling `m_n`, `n ≥ n_min`,
/// coincides with the straight wall.
pub fn tiling_support(theta0: f64, n_min: usize) -> Rect {
    let h = theta0.sin() * theta0.cos() / n_min as f64;
    Rect::new(0.0, 1.0, -h, h)
}

/// Energies of the tilings `m_n` for `n ∈ ns`, their `L¹` distances to the
/// straight wall on an `nx × ny` raster of the tiling support, and the wall's energy.
pub fn lsc_report(theta0: f64, f: &JumpCost, ns: &[usize], (nx, ny): (usize, usize), tol: f64) -> Result<LscReport> {
    let wall = one_d_transition(theta0)?;
    let n_min = match ns.iter().min() {
        Some(&n) if n > 0 => n,
        _ => {
            return Err(Error::Domain {
                what: "smallest tiling count",
                value: ns.iter().min().map_or(0.0, |&n| n as f64),
                range: "[1, +inf) with at least one entry",
            })
        }
    };
    let support = tiling_support(theta0, n_min);
    let rows = ns
        .iter()
        .map(|&n| {
            let m = tiling_field(theta0, n)?;
            let energy = line_energy(&m, f, tol)?.total;
            let (l1, err) = l1_distance(&m, &wall, support, nx, ny)?;
            Ok(LscRow {
                n,
                energy,
                l1_distance: l1,
                l1_error: err,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LscReport {
        theta0,
        cost: f.to_string(),
        rows,
        energy_of_1d: line_energy(&wall, f, tol)?.total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::DEFAULT_TOL;
    use approx::assert_abs_diff_eq;

    #[test]
    fn half_power_critical_angle() {
        let r = critical_angle(0.5, 1e-10).unwrap();
        assert!(r.theta_star > 0.01 && r.theta_star < 1.0);
        // mpmath bisection reference; small-angle estimate is 1/16
        assert_abs_diff_eq!(r.theta_star, 0.06255607986637331, epsilon = 1e-9);
        assert!(r.gap_at_lo < 0.0 && r.gap_at_hi > 0.0);
        assert!(r.bracket.1 - r.bracket.0 <= 1e-10);
        assert_eq!(r.crossings, 1);
        let f = JumpCost::power(0.5).unwrap();
        assert!(energy_gap(&f, 0.01, DEFAULT_TOL).unwrap() < 0.0);
    }

    #[test]
    fn brackets_nest_as_tol_shrinks() {
        let coarse = critical_angle(0.5, 1e-6).unwrap();
        let fine = critical_angle(0.5, 1e-10).unwrap();
        assert!(coarse.bracket.0 <= fine.bracket.0 && fine.bracket.1 <= coarse.bracket.1);
    }

    #[test]
    fn near_linear_exponent_still_crosses() {
        let r = critical_angle(0.9, 1e-12).unwrap();
        assert!(r.theta_star > 0.0 && r.theta_star < std::f64::consts::FRAC_PI_2);
        assert!(r.gap_at_lo < 0.0 && r.gap_at_hi > 0.0);
    }

    #[test]
    fn superlinear_exponents_do_not_cross() {
        for p in [1.0, 1.5, 2.0, 3.0] {
            match critical_angle(p, 1e-8) {
                Err(Error::NoSignChange { mesh }) => assert_eq!(mesh.len(), 41),
                other => panic!("p = {p}: {other:?}"),
            }
        }
        assert!(critical_angle(0.5, 1e-13).is_err());
        assert!(critical_angle(-1.0, 1e-8).is_err());
    }

    #[test]
    fn sweeps() {
        let grid: Vec<f64> = (1..=15).map(|k| 0.1 * k as f64).collect();
        for p in [1.0, 2.0, 3.0] {
            let rows = sweep_gap(&JumpCost::power(p).unwrap(), &grid, DEFAULT_TOL).unwrap();
            assert!(rows.iter().all(|r| r.gap > 0.0));
            assert!(rows.iter().zip(&grid).all(|(r, &t)| r.theta0 == t));
        }
        let fine: Vec<f64> = (1..=300).map(|k| 0.005 * k as f64).collect();
        let rows = sweep_gap(&JumpCost::power(0.5).unwrap(), &fine, DEFAULT_TOL).unwrap();
        let changes = rows.windows(2).filter(|w| (w[0].gap < 0.0) != (w[1].gap < 0.0)).count();
        assert_eq!(changes, 1);
        assert!(sweep_gap(&JumpCost::power(0.5).unwrap(), &[], DEFAULT_TOL).unwrap().is_empty());
        assert!(sweep_gap(&JumpCost::power(0.5).unwrap(), &[2.0], DEFAULT_TOL).is_err());
    }

    #[test]
    fn single_tile_report() {
        let f = JumpCost::power(0.5).unwrap();
        let theta0 = 0.03;
        let r = lsc_report(theta0, &f, &[1], (64, 64), DEFAULT_TOL).unwrap();
        let tile = line_energy(&tiling_field(theta0, 1).unwrap(), &f, DEFAULT_TOL).unwrap().total;
        assert_eq!(r.rows[0].energy, tile);
        assert_eq!(r.energy_of_1d, (2.0 * theta0.sin()).sqrt());
        assert!(lsc_report(theta0, &f, &[], (64, 64), DEFAULT_TOL).is_err());
        assert!(lsc_report(theta0, &f, &[0, 2], (64, 64), DEFAULT_TOL).is_err());
    }

    #[test]
    fn l1_halves_with_each_doubling() {
        let f = JumpCost::power(0.5).unwrap();
        let r = lsc_report(0.03, &f, &[4, 8], (1024, 1024), DEFAULT_TOL).unwrap();
        let ratio = r.rows[0].l1_distance / r.rows[1].l1_distance;
        assert!((ratio - 2.0).abs() <= 0.1, "{ratio}");
        assert!(r.violation_certified(1e-9));
    }
}
