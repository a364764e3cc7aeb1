//! Acceptance gate: runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};
use std::time::{Duration, Instant};

use eikonal_lines::analysis::{critical_angle, lsc_report};
use eikonal_lines::costfn::{cnf_check, JumpCost};
use eikonal_lines::energy::{energy_competitor_closed, energy_gap, line_energy, DEFAULT_TOL};
use eikonal_lines::fields::{
    competitor_field, default_fields, one_d_transition, tiling_field, viscosity_field, PiecewiseField,
};
use eikonal_lines::raster::{default_bounds, flux_check, numeric_line_energy, random_rectangles, sample_field};

/// Regression pin for the half-power critical angle (independent mpmath bisection).
const THETA_STAR_HALF: f64 = 0.0625560798663733;

const ANGLES: [f64; 5] = [0.1, 0.5, FRAC_PI_4, FRAC_PI_3, 1.4];

struct Outcome {
    pass: bool,
    detail: String,
}

fn power(p: f64) -> JumpCost {
    JumpCost::power(p).unwrap()
}

fn closed_forms() -> Outcome {
    let start = Instant::now();
    let mut worst_cubic: f64 = 0.0;
    let mut worst_linear: f64 = 0.0;
    for theta0 in ANGLES {
        let m = competitor_field(theta0).unwrap();
        for (f, exact, worst) in [
            (power(3.0), 16.0 * theta0, &mut worst_cubic),
            (power(1.0), 8.0 * (0.5 * theta0).tan(), &mut worst_linear),
        ] {
            let generic = line_energy(&m, &f, DEFAULT_TOL).unwrap().components.unwrap().i1;
            let closed = energy_competitor_closed(&f, theta0, DEFAULT_TOL).unwrap().components.unwrap().i1;
            *worst = worst.max((generic - exact).abs()).max((closed - exact).abs());
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: worst_cubic <= 1e-10 && worst_linear <= 1e-10 && elapsed < Duration::from_secs(1),
        detail: format!("max |I1 - 16θ0| = {worst_cubic:.2e}, max |I1 - 8tan(θ0/2)| = {worst_linear:.2e}, {elapsed:.2?}"),
    }
}

fn gap_consistency() -> Outcome {
    let mut worst: f64 = 0.0;
    for theta0 in ANGLES {
        for p in [0.5, 1.0, 2.0, 3.0] {
            let f = power(p);
            let gap = energy_gap(&f, theta0, DEFAULT_TOL).unwrap();
            let m = line_energy(&competitor_field(theta0).unwrap(), &f, DEFAULT_TOL).unwrap().total;
            let m0 = line_energy(&viscosity_field(theta0).unwrap(), &f, DEFAULT_TOL).unwrap().total;
            worst = worst.max((gap - (m - m0)).abs());
        }
    }
    Outcome {
        pass: worst <= 1e-9,
        detail: format!("max deviation over 20 (θ0, p) pairs = {worst:.2e}"),
    }
}

fn counterexample() -> Outcome {
    let f = power(0.5);
    let mut pass = true;
    let mut parts = Vec::new();
    for tol in [1e-6, 1e-8, 1e-10] {
        let r = critical_angle(0.5, tol).unwrap();
        let below = energy_gap(&f, 0.5 * r.theta_star, DEFAULT_TOL).unwrap();
        let above = energy_gap(&f, 1.0, DEFAULT_TOL).unwrap();
        let pinned = (r.theta_star - THETA_STAR_HALF).abs() <= tol + 1e-12;
        pass &= below < 0.0 && above > 0.0 && pinned;
        parts.push(format!("tol {tol:.0e}: θ* = {:.13}, gap(θ*/2) = {below:.4e}", r.theta_star));
    }
    parts.push(format!("gap(1.0) = {:.4}", energy_gap(&f, 1.0, DEFAULT_TOL).unwrap()));
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn cnf_verdicts() -> Outcome {
    let mut wrong = Vec::new();
    for k in 1..=30 {
        let p = k as f64 / 10.0;
        let verdict = cnf_check(&power(p), 1024).unwrap().holds;
        if verdict != (p >= 1.0) {
            wrong.push(p);
        }
    }
    Outcome {
        pass: wrong.is_empty(),
        detail: format!("30 exponents, wrong verdicts: {wrong:?}"),
    }
}

fn tiling_identity() -> Outcome {
    let theta0 = FRAC_PI_3;
    let f = power(0.5);
    let ns = [1, 2, 4, 8, 16];
    let report = lsc_report(theta0, &f, &ns, (2048, 2048), DEFAULT_TOL).unwrap();
    let e1 = report.rows[0].energy;
    let spread = report.rows.iter().map(|r| ((r.energy - e1) / e1).abs()).fold(0.0, f64::max);
    let ratios: Vec<f64> = report.rows.windows(2).map(|w| w[0].l1_distance / w[1].l1_distance).collect();
    let ratios_ok = ratios.iter().all(|r| (r - 2.0).abs() <= 0.1);
    Outcome {
        pass: spread <= 1e-8 && ratios_ok,
        detail: format!("max relative energy spread = {spread:.2e}, L1 ratios = {ratios:.4?}"),
    }
}

fn lsc_violation() -> Outcome {
    let f = power(0.5);
    let theta_star = critical_angle(0.5, 1e-10).unwrap().theta_star;
    let theta0 = 0.5 * theta_star;
    let report = lsc_report(theta0, &f, &[1, 2, 4, 8], (512, 512), DEFAULT_TOL).unwrap();
    let margin = report.margin();
    Outcome {
        pass: margin > 1e-3 && report.energy_spread() <= 1e-10,
        detail: format!(
            "θ0 = {theta0:.6}, E(m_n) = {:.10}, E(m_0) = {:.10}, margin = {margin:.6}",
            report.rows[0].energy, report.energy_of_1d
        ),
    }
}

fn divergence_free() -> Outcome {
    let theta0 = FRAC_PI_3;
    let fields: [(&str, PiecewiseField); 4] = [
        ("viscosity", viscosity_field(theta0).unwrap()),
        ("competitor", competitor_field(theta0).unwrap()),
        ("transition", one_d_transition(theta0).unwrap()),
        ("tiling(4)", tiling_field(theta0, 4).unwrap()),
    ];
    let mut worst_flux: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    for (_, field) in &fields {
        let rects = random_rectangles(field, 1000, 0);
        worst_flux = worst_flux.max(flux_check(field, &rects, 16).unwrap());
        let grid = sample_field(field, default_bounds(field), 512, 512, 0.0).unwrap();
        worst_norm = worst_norm.max(grid.max_norm_deviation());
    }
    Outcome {
        pass: worst_flux <= 1e-7 && worst_norm <= 1e-12,
        detail: format!("max |flux| = {worst_flux:.2e} over 4x1000 rectangles, max norm deviation = {worst_norm:.2e}"),
    }
}

fn independent_energy() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut unreliable = 0;
    for field in [viscosity_field(FRAC_PI_3).unwrap(), competitor_field(FRAC_PI_3).unwrap()] {
        for p in [1.0, 3.0] {
            let f = power(p);
            let reference = line_energy(&field, &f, DEFAULT_TOL).unwrap().total;
            let numeric = numeric_line_energy(&field, &f, 10_000, 1e-6).unwrap();
            unreliable += numeric.unreliable_segments;
            worst = worst.max(((numeric.breakdown.total - reference) / reference).abs());
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: worst <= 1e-3 && elapsed < Duration::from_secs(10),
        detail: format!("max relative deviation = {worst:.2e}, unreliable segments = {unreliable}, {elapsed:.2?}"),
    }
}

fn trace_compatibility() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut curves = 0;
    for theta0 in ANGLES {
        for field in default_fields(theta0, 8).unwrap() {
            for c in field.jump_curves() {
                curves += 1;
                let (a, b) = c.parameter_range();
                for k in 0..1000 {
                    let s = a + (b - a) * k as f64 / 999.0;
                    let nu = c.normal(s);
                    worst = worst.max((c.trace_plus(s).dot(nu) - c.trace_minus(s).dot(nu)).abs());
                }
            }
        }
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("max |m+·ν - m-·ν| = {worst:.2e} over {curves} curves x 1000 samples"),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("closed-form agreement", closed_forms),
        ("gap formula consistency", gap_consistency),
        ("counterexample certificate", counterexample),
        ("CNF verdicts", cnf_verdicts),
        ("tiling identity", tiling_identity),
        ("l.s.c. violation", lsc_violation),
        ("divergence-free certificates", divergence_free),
        ("independent-oracle energy", independent_energy),
        ("trace compatibility", trace_compatibility),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        if !outcome.pass {
            failures += 1;
        }
        println!("criterion {} [{status}] {name}: {}", k + 1, outcome.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
