use std::fmt;

use super::{max_mean, scan, SamplePoints, CONSTANT_SPREAD};
use crate::area::{Region, RegionSpec};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::Complex;
use crate::quad::CompensatedSum;
use crate::report::CheckReport;

/// Constant recovered from `e^K·w`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiRecovery {
    pub phi_hat: Complex,
    pub deviation: f64,
    pub report: CheckReport,
}

/// Mean of `e^K·w` over the sample set and its largest departure from that
/// mean.
pub fn recover_phi(
    w: &Expr,
    k: &Expr,
    points: &SamplePoints,
    tolerance: f64,
) -> Result<PhiRecovery> {
    let s = scan(points.points()?, |z| Ok(k.eval(z)?.exp() * w.eval(z)?))?;
    let (sum, count) =
        s.evaluated()
            .fold((CompensatedSum::new(), 0usize), |(mut acc, n), (_, v)| {
                acc.add(*v);
                (acc, n + 1)
            });
    let phi_hat = sum.total() / count as f64;
    let deviations: Vec<f64> = s.evaluated().map(|(_, v)| (v - phi_hat).norm()).collect();
    let (deviation, mean_deviation) = max_mean(&deviations);
    let report = CheckReport::new("recover_phi", "deviation", deviation, tolerance)
        .input("w", w)
        .input("K", k)
        .input("points", points.describe())
        .metric("phi_hat", phi_hat)
        .metric("mean_deviation", mean_deviation)
        .points(s.points.len(), s.n_skipped);
    Ok(PhiRecovery {
        phi_hat,
        deviation,
        report,
    })
}

/// Checks `|w| = |Φ̂|·e^(−Re K)` pointwise, with a census of where the bound
/// `|w| ≤ |Φ̂|` holds.
pub fn modulus_law_check(
    w: &Expr,
    k: &Expr,
    points: &SamplePoints,
    tolerance: f64,
) -> Result<CheckReport> {
    let phi = recover_phi(w, k, points, tolerance)?;
    let phi_abs = phi.phi_hat.norm();
    let s = scan(points.points()?, |z| {
        let k1 = k.eval(z)?.re;
        let modulus = w.eval(z)?.norm();
        Ok((k1, modulus, (modulus - phi_abs * (-k1).exp()).abs()))
    })?;
    let mut census = [0usize; 4];
    for (_, &(k1, modulus, _)) in s.evaluated() {
        // the bound may hold by round-off when k1 is at or near zero
        let bounded = modulus <= phi_abs * (1.0 + CONSTANT_SPREAD) + CONSTANT_SPREAD;
        let slot = match (k1 >= 0.0, bounded) {
            (true, true) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (false, false) => 3,
        };
        census[slot] += 1;
    }
    let deviations: Vec<f64> = s.evaluated().map(|(_, v)| v.2).collect();
    let (max_deviation, mean_deviation) = max_mean(&deviations);
    Ok(
        CheckReport::new("modulus_law", "max_deviation", max_deviation, tolerance)
            .input("w", w)
            .input("K", k)
            .input("points", points.describe())
            .metric("mean_deviation", mean_deviation)
            .metric("phi_hat", phi.phi_hat)
            .metric("phi_deviation", phi.deviation)
            .metric("k1_nonnegative_bound_holds", census[0])
            .metric("k1_nonnegative_bound_violated", census[1])
            .metric("k1_negative_bound_holds", census[2])
            .metric("k1_negative_bound_violated", census[3])
            .points(s.points.len(), s.n_skipped),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxLocation {
    Boundary,
    Interior,
    /// `|w|` is numerically constant, so every sample attains the maximum.
    Tie,
}

impl fmt::Display for MaxLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaxLocation::Boundary => "boundary",
            MaxLocation::Interior => "interior",
            MaxLocation::Tie => "tie",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxModulus {
    pub argmax: Complex,
    pub max_value: f64,
    pub location: MaxLocation,
    /// Largest `|w|` at samples more than one ring spacing inside the boundary,
    /// minus the largest in the boundary band.
    pub interior_excess: f64,
    pub n_points: usize,
    pub n_skipped: usize,
}

impl MaxModulus {
    pub fn on_boundary(&self) -> bool {
        self.location != MaxLocation::Interior
    }

    /// Passes when no interior sample beats the boundary band.
    pub fn report(&self, w: &Expr, region: &RegionSpec, tolerance: f64) -> CheckReport {
        CheckReport::new(
            "max_modulus",
            "interior_excess",
            self.interior_excess,
            tolerance,
        )
        .input("w", w)
        .input("region", region)
        .input(
            "resolution",
            format!("{}x{}", region.resolution.0, region.resolution.1),
        )
        .metric("max_value", self.max_value)
        .metric("argmax", self.argmax)
        .metric("on_boundary", self.on_boundary())
        .metric("constant", self.location == MaxLocation::Tie)
        .points(self.n_points, self.n_skipped)
    }
}

/// Maximum of `|w|` over the polar lattice of a disc.
pub fn max_modulus_scan(w: &Expr, region: &RegionSpec) -> Result<MaxModulus> {
    let Region::Disc { center, radius } = region.region else {
        return Err(Error::InvalidSpec(format!(
            "the maximum-modulus scan needs a disc, got {region}"
        )));
    };
    let s = scan(region.lattice()?, |z| Ok(w.eval(z)?.norm()))?;
    let spacing = radius / (region.resolution.0 - 1) as f64;
    let band = radius - spacing * (1.0 + 1e-9);
    let mut best: Option<(Complex, f64)> = None;
    let mut min = f64::INFINITY;
    let (mut interior_max, mut band_max) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (z, &m) in s.evaluated() {
        if best.is_none_or(|(_, b)| m > b) {
            best = Some((z, m));
        }
        min = min.min(m);
        if (z - center).norm() >= band {
            band_max = band_max.max(m);
        } else {
            interior_max = interior_max.max(m);
        }
    }
    let (argmax, max_value) = best.expect("scan keeps at least one point");
    let location = if max_value - min <= CONSTANT_SPREAD * max_value.max(1.0) {
        MaxLocation::Tie
    } else if (argmax - center).norm() >= band {
        MaxLocation::Boundary
    } else {
        MaxLocation::Interior
    };
    let interior_excess = match (interior_max.is_finite(), band_max.is_finite()) {
        (true, true) => interior_max - band_max,
        (false, _) => 0.0,
        (true, false) => f64::INFINITY,
    };
    Ok(MaxModulus {
        argmax,
        max_value,
        location,
        interior_excess,
        n_points: s.points.len(),
        n_skipped: s.n_skipped,
    })
}
