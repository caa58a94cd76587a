use std::f64::consts::PI;

use rayon::prelude::*;

use super::TransformKind;
use crate::area::{integrate_region, integrate_singular, Region, RegionSpec};
use crate::contour::{integrate_contour, integrate_nodes, sample_contour, ContourSpec};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::Complex;
use crate::quad::CompensatedSum;
use crate::report::CheckReport;

/// Trapezoid nodes on each Morera probe circle.
pub const MORERA_PROBE_NODES: usize = 64;
/// Evaluation points must sit this fraction of the radius inside the circle.
const INTERIOR_MARGIN: f64 = 1e-6;

fn two_pi_i() -> Complex {
    Complex::new(0.0, 2.0 * PI)
}

fn boundary_of(region: &RegionSpec) -> ContourSpec {
    match region.region {
        Region::Disc { center, radius } => ContourSpec::circle(center, radius),
        Region::Rectangle { min, max } => ContourSpec::polygon(vec![
            min,
            Complex::new(max.re, min.im),
            max,
            Complex::new(min.re, max.im),
        ]),
    }
}

/// Compares `∮_{∂ω} f dz` with `2i ∬_ω ∂f/∂z̄ dλ`.
pub fn green_identity_check(
    f: &Expr,
    region: &RegionSpec,
    n_contour: usize,
    tolerance: f64,
) -> Result<CheckReport> {
    let lhs = integrate_contour(&boundary_of(region), n_contour, |z| f.eval(z))?;
    let area = integrate_region(region, |z| f.eval_jet(z).map(|j| j.dzbar))?;
    let rhs = Complex::new(0.0, 2.0) * area.value;
    Ok(
        CheckReport::new("green_identity", "abs_diff", (lhs - rhs).norm(), tolerance)
            .input("f", f)
            .input("region", region)
            .input("n_contour", n_contour)
            .metric("lhs", lhs)
            .metric("rhs", rhs)
            .points(area.n_points, area.n_skipped),
    )
}

/// `∮ w̃ dz` under the chosen transform, with the other transforms reported
/// alongside.
pub fn generalized_cauchy_check(
    w: &Expr,
    k: &Expr,
    contour: &ContourSpec,
    transform: TransformKind,
    n: usize,
    tolerance: f64,
) -> Result<CheckReport> {
    let nodes = sample_contour(contour, n)?;
    let values = nodes
        .par_iter()
        .enumerate()
        .map(|(index, node)| {
            let wz = w.eval(node.point);
            let kz = k.eval(node.point);
            match (wz, kz) {
                (Ok(wv), Ok(kv)) => Ok((wv, kv)),
                (Err(source), _) | (_, Err(source)) => Err(Error::NodeEvaluation {
                    index,
                    point: node.point,
                    source,
                }),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let integral = |t: TransformKind| {
        nodes
            .iter()
            .zip(&values)
            .map(|(node, &(wv, kv))| t.apply(wv, kv) * node.dz)
            .collect::<CompensatedSum>()
            .total()
    };
    let selected = integral(transform);
    let mut report = CheckReport::new(
        "generalized_cauchy",
        "integral_abs",
        selected.norm(),
        tolerance,
    )
    .input("w", w)
    .input("K", k)
    .input("contour", contour)
    .input("transform", transform)
    .input("n", n)
    .metric("integral_value", selected);
    for t in TransformKind::ALL {
        let v = if t == transform {
            selected
        } else {
            integral(t)
        };
        report = report.metric(t.metric_key(), v);
    }
    Ok(report.points(nodes.len(), 0))
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// k-th derivative of a holomorphic `w` at `z` from the circle `|ζ − center| = radius`.
pub fn cauchy_eval(
    w: &Expr,
    center: Complex,
    radius: f64,
    z: Complex,
    k: u32,
    n: usize,
) -> Result<Complex> {
    let circle = ContourSpec::circle(center, radius);
    circle.validate()?;
    if (z - center).norm() >= radius * (1.0 - INTERIOR_MARGIN) {
        return Err(Error::Placement {
            point: z,
            reason: format!("too close to or outside the circle {circle}"),
        });
    }
    let power = k as i32 + 1;
    let integral = integrate_contour(
        &circle,
        n,
        |zeta| Ok(w.eval(zeta)? / (zeta - z).powi(power)),
    )?;
    Ok(integral * factorial(k) / two_pi_i())
}

/// Taylor coefficients `a_0 … a_{k_max}` about the origin from the circle of the
/// given radius.
pub fn taylor_coefficients(w: &Expr, radius: f64, k_max: u32, n: usize) -> Result<Vec<Complex>> {
    let circle = ContourSpec::circle(Complex::new(0.0, 0.0), radius);
    let nodes = sample_contour(&circle, n)?;
    let weighted = nodes
        .par_iter()
        .enumerate()
        .map(|(index, node)| {
            w.eval(node.point)
                .map(|v| v * node.dz / node.point)
                .map_err(|source| Error::NodeEvaluation {
                    index,
                    point: node.point,
                    source,
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=k_max as i32)
        .map(|k| {
            nodes
                .iter()
                .zip(&weighted)
                .map(|(node, v)| v * node.point.powi(-k))
                .collect::<CompensatedSum>()
                .total()
                / two_pi_i()
        })
        .collect())
}

/// Checks `|w⁽ⁿ⁾(a)| ≤ n!·M/Rⁿ` for `n = 0 … n_max`, with `M` the maximum of
/// `|w|` over a dense sampling of the circle `|z − a| = R`.
pub fn cauchy_estimate_check(
    w: &Expr,
    a: Complex,
    radius: f64,
    n_max: u32,
    n: usize,
    slack: f64,
) -> Result<CheckReport> {
    let dense = ContourSpec::circle(a, radius);
    let samples = sample_contour(&dense, (16 * n).max(4096))?;
    let moduli = samples
        .par_iter()
        .enumerate()
        .map(|(index, node)| {
            w.eval(node.point)
                .map(|v| v.norm())
                .map_err(|source| Error::NodeEvaluation {
                    index,
                    point: node.point,
                    source,
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let m = moduli.iter().copied().fold(0.0, f64::max);
    let mut worst = f64::NEG_INFINITY;
    let mut min_relative = f64::INFINITY;
    let mut rows = Vec::new();
    for order in 0..=n_max {
        let d = cauchy_eval(w, a, radius, a, order, n)?.norm();
        let bound = factorial(order) * m / radius.powi(order as i32);
        worst = worst.max(d - bound);
        if bound > 0.0 {
            min_relative = min_relative.min((bound - d) / bound);
        }
        rows.push((order, d, bound));
    }
    let mut report = CheckReport::new("cauchy_estimate", "max_violation", worst, slack)
        .input("w", w)
        .input("a", a)
        .input("R", radius)
        .input("n_max", n_max)
        .metric("M", m)
        .metric("min_relative_slack", min_relative);
    for (order, d, bound) in rows {
        report = report
            .metric(&format!("deriv_abs_{order}"), d)
            .metric(&format!("bound_{order}"), bound);
    }
    Ok(report.points(samples.len(), 0))
}

/// Boundary and area parts of the Cauchy–Pompeiu representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PompeiuReconstruction {
    pub value: Complex,
    pub boundary_term: Complex,
    pub area_term: Complex,
    pub n_points: usize,
    pub n_skipped: usize,
}

/// `w(ζ) = (1/2πi)∮ w dz/(z−ζ) − (1/π)∬ (∂w/∂z̄) dλ/(z−ζ)` over a disc.
pub fn pompeiu_reconstruct(
    w: &Expr,
    disc: &RegionSpec,
    zeta: Complex,
    n_contour: usize,
) -> Result<PompeiuReconstruction> {
    // the singular integral validates the placement of ζ
    let area = integrate_singular(disc, zeta, |z| w.eval_jet(z).map(|j| j.dzbar))?;
    let boundary = sample_contour(&boundary_of(disc), n_contour)?;
    let boundary_term = integrate_nodes(&boundary, |z| Ok(w.eval(z)? / (z - zeta)))? / two_pi_i();
    let area_term = -area.value / PI;
    Ok(PompeiuReconstruction {
        value: boundary_term + area_term,
        boundary_term,
        area_term,
        n_points: area.n_points,
        n_skipped: area.n_skipped,
    })
}

/// Reconstruction compared against direct evaluation of `w(ζ)`.
pub fn pompeiu_check(
    w: &Expr,
    disc: &RegionSpec,
    zeta: Complex,
    n_contour: usize,
    tolerance: f64,
) -> Result<CheckReport> {
    let rec = pompeiu_reconstruct(w, disc, zeta, n_contour)?;
    let direct = w.eval(zeta)?;
    Ok(CheckReport::new(
        "pompeiu",
        "abs_error",
        (rec.value - direct).norm(),
        tolerance,
    )
    .input("w", w)
    .input("region", disc)
    .input("zeta", zeta)
    .input("n_contour", n_contour)
    .metric("reconstructed", rec.value)
    .metric("direct", direct)
    .metric("boundary_term", rec.boundary_term)
    .metric("area_term", rec.area_term)
    .points(rec.n_points, rec.n_skipped))
}

/// Centres of `count` probe circles of radius `probe_radius` spread evenly
/// over the part of the region where the whole probe fits.
pub fn probe_centers(region: &RegionSpec, count: usize, probe_radius: f64) -> Result<Vec<Complex>> {
    region.validate()?;
    if count == 0 || !(probe_radius > 0.0 && probe_radius.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "need a positive probe count and radius, got {count} and {probe_radius}"
        )));
    }
    let (lo, hi, inside): (Complex, Complex, Box<dyn Fn(Complex) -> bool>) = match region.region {
        Region::Disc { center, radius } => {
            let inner = radius - probe_radius;
            if inner < 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "probe radius {probe_radius} exceeds the disc radius {radius}"
                )));
            }
            let d = Complex::new(inner, inner);
            let tol = inner * 1e-12;
            (
                center - d,
                center + d,
                Box::new(move |p| (p - center).norm() <= inner + tol),
            )
        }
        Region::Rectangle { min, max } => {
            let d = Complex::new(probe_radius, probe_radius);
            let (lo, hi) = (min + d, max - d);
            if lo.re > hi.re || lo.im > hi.im {
                return Err(Error::InvalidSpec(format!(
                    "probe radius {probe_radius} does not fit in the rectangle"
                )));
            }
            (lo, hi, Box::new(|_| true))
        }
    };
    let axis = |m: usize, i: usize, a: f64, b: f64| {
        if m == 1 {
            0.5 * (a + b)
        } else {
            a + (b - a) * i as f64 / (m - 1) as f64
        }
    };
    let mut m = (count as f64).sqrt().ceil() as usize;
    loop {
        let candidates: Vec<Complex> = (0..m)
            .flat_map(|j| (0..m).map(move |i| (i, j)))
            .map(|(i, j)| Complex::new(axis(m, i, lo.re, hi.re), axis(m, j, lo.im, hi.im)))
            .filter(|p| inside(*p))
            .collect();
        if candidates.len() >= count || m > 4 * count + 2 {
            let total = candidates.len();
            return Ok((0..count.min(total))
                .map(|j| candidates[j * total / count.min(total)])
                .collect());
        }
        m += 1;
    }
}

/// Numerical holomorphy test: `∮ w dz` over small probe circles.
pub fn morera_classify(
    w: &Expr,
    region: &RegionSpec,
    probe_count: usize,
    probe_radius: f64,
    tolerance: f64,
) -> Result<CheckReport> {
    let centers = probe_centers(region, probe_count, probe_radius)?;
    let outcomes: Vec<Result<Complex>> = centers
        .par_iter()
        .map(|&c| {
            integrate_contour(
                &ContourSpec::circle(c, probe_radius),
                MORERA_PROBE_NODES,
                |z| w.eval(z),
            )
        })
        .collect();
    let circumference = 2.0 * PI * probe_radius;
    let mut max_abs = 0.0f64;
    let mut failed = Vec::new();
    for (c, outcome) in centers.iter().zip(&outcomes) {
        match outcome {
            Ok(v) => max_abs = max_abs.max(v.norm()),
            Err(_) => failed.push(*c),
        }
    }
    let mut report = CheckReport::new(
        "morera",
        "max_scaled_integral",
        max_abs / circumference,
        tolerance,
    )
    .input("w", w)
    .input("region", region)
    .input("probe_count", probe_count)
    .input("probe_radius", probe_radius)
    .metric("max_abs_integral", max_abs)
    .metric("probes", centers.len())
    .metric("failed_probes", failed.len())
    .require(failed.is_empty());
    if let Some(first) = failed.first() {
        report = report.metric("first_failed_probe", *first);
    }
    Ok(report.points(centers.len(), failed.len()))
}
