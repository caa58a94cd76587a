//! Area integrals `∬ f dλ` over discs and rectangles.
//!
//! Discs are integrated in polar form (Gauss–Legendre in radius, periodic
//! trapezoid in angle), rectangles with a tensor Gauss–Legendre rule. The
//! Cauchy kernel `1/(z − ζ)` is handled in polar coordinates centred at `ζ`,
//! where the Jacobian `ρ` cancels the singularity and the integrand becomes
//! `f(z)·e^(−iθ)`.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::contour::parse_reals;
use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr};
use crate::jet::{is_finite, Complex};
use crate::quad::{gauss_legendre, CompensatedSum};

pub const DEFAULT_DISC_RESOLUTION: (usize, usize) = (256, 256);
pub const DEFAULT_RECT_RESOLUTION: (usize, usize) = (64, 64);
pub const MIN_RESOLUTION: usize = 8;
/// Largest tolerated fraction of non-evaluable sample points.
pub const MAX_SKIP_FRACTION: f64 = 1e-3;
/// ζ must sit at least this fraction of the radius inside the disc boundary.
pub const SINGULAR_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Disc { center: Complex, radius: f64 },
    Rectangle { min: Complex, max: Complex },
}

/// A region with its sampling resolution: `(radial, angular)` for discs,
/// `(nx, ny)` for rectangles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSpec {
    pub region: Region,
    pub resolution: (usize, usize),
}

impl RegionSpec {
    pub fn disc(center: Complex, radius: f64) -> Self {
        RegionSpec {
            region: Region::Disc { center, radius },
            resolution: DEFAULT_DISC_RESOLUTION,
        }
    }

    pub fn rect(min: Complex, max: Complex) -> Self {
        RegionSpec {
            region: Region::Rectangle { min, max },
            resolution: DEFAULT_RECT_RESOLUTION,
        }
    }

    pub fn with_resolution(mut self, n1: usize, n2: usize) -> Self {
        self.resolution = (n1, n2);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (n1, n2) = self.resolution;
        if n1 < MIN_RESOLUTION || n2 < MIN_RESOLUTION {
            return Err(Error::InvalidSpec(format!(
                "resolution {n1}x{n2} is below the minimum of {MIN_RESOLUTION}"
            )));
        }
        match self.region {
            Region::Disc { center, radius } => {
                if !(radius.is_finite() && radius > 0.0) || !is_finite(center) {
                    return Err(Error::InvalidSpec(format!(
                        "disc needs a finite center and positive radius, got r = {radius}"
                    )));
                }
            }
            Region::Rectangle { min, max } => {
                if !is_finite(min) || !is_finite(max) || !(min.re < max.re && min.im < max.im) {
                    return Err(Error::InvalidSpec(format!(
                        "rectangle corners {min} and {max} are not strictly ordered"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parses `disc:cx,cy,r` or `rect:x0,y0,x1,y1`, with the shape's default
    /// resolution unless one is given.
    pub fn parse(text: &str, resolution: Option<(usize, usize)>) -> Result<Self> {
        let (kind, body) = text
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("region `{text}`: missing `kind:`")))?;
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        let mut spec = match (kind.trim(), parts.len()) {
            ("disc", 3) => {
                let n = parse_reals(&parts, text)?;
                RegionSpec::disc(Complex::new(n[0], n[1]), n[2])
            }
            ("rect", 4) => {
                let n = parse_reals(&parts, text)?;
                RegionSpec::rect(Complex::new(n[0], n[1]), Complex::new(n[2], n[3]))
            }
            ("disc", _) | ("rect", _) => {
                return Err(Error::InvalidSpec(format!(
                    "region `{text}`: expected disc:cx,cy,r or rect:x0,y0,x1,y1"
                )))
            }
            (other, _) => {
                return Err(Error::InvalidSpec(format!(
                    "unknown region kind `{other}` (expected disc or rect)"
                )))
            }
        };
        if let Some((n1, n2)) = resolution {
            spec.resolution = (n1, n2);
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Quadrature points with their area weights.
    pub fn quadrature_nodes(&self) -> Result<Vec<(Complex, f64)>> {
        self.validate()?;
        let (n1, n2) = self.resolution;
        Ok(match self.region {
            Region::Disc { center, radius } => {
                let (x, w) = gauss_legendre(n1);
                let dtheta = 2.0 * PI / n2 as f64;
                let mut nodes = Vec::with_capacity(n1 * n2);
                for (t, wt) in x.iter().zip(&w) {
                    let r = radius * (t + 1.0) * 0.5;
                    let wr = wt * radius * 0.5 * r * dtheta;
                    for k in 0..n2 {
                        let e = Complex::from_polar(1.0, dtheta * k as f64);
                        nodes.push((center + e * r, wr));
                    }
                }
                nodes
            }
            Region::Rectangle { min, max } => {
                let (x, wx) = gauss_legendre(n1);
                let (y, wy) = gauss_legendre(n2);
                let (hx, hy) = ((max.re - min.re) * 0.5, (max.im - min.im) * 0.5);
                let mut nodes = Vec::with_capacity(n1 * n2);
                for (tx, wtx) in x.iter().zip(&wx) {
                    for (ty, wty) in y.iter().zip(&wy) {
                        let p = Complex::new(min.re + hx * (tx + 1.0), min.im + hy * (ty + 1.0));
                        nodes.push((p, wtx * wty * hx * hy));
                    }
                }
                nodes
            }
        })
    }

    /// Evaluation lattice for pointwise checks. Rectangles: an inclusive
    /// `nx × ny` grid. Discs: the centre plus `n1 − 1` rings out to the
    /// boundary, `n2` points each.
    pub fn lattice(&self) -> Result<Vec<Complex>> {
        self.validate()?;
        let (n1, n2) = self.resolution;
        Ok(match self.region {
            Region::Rectangle { min, max } => {
                let mut pts = Vec::with_capacity(n1 * n2);
                for j in 0..n2 {
                    let y = min.im + (max.im - min.im) * j as f64 / (n2 - 1) as f64;
                    for i in 0..n1 {
                        let x = min.re + (max.re - min.re) * i as f64 / (n1 - 1) as f64;
                        pts.push(Complex::new(x, y));
                    }
                }
                pts
            }
            Region::Disc { center, radius } => {
                let mut pts = Vec::with_capacity(1 + (n1 - 1) * n2);
                pts.push(center);
                for j in 1..n1 {
                    let r = radius * j as f64 / (n1 - 1) as f64;
                    for k in 0..n2 {
                        pts.push(center + Complex::from_polar(r, 2.0 * PI * k as f64 / n2 as f64));
                    }
                }
                pts
            }
        })
    }
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.region {
            Region::Disc { center, radius } => {
                write!(f, "disc:{},{},{}", center.re, center.im, radius)
            }
            Region::Rectangle { min, max } => {
                write!(f, "rect:{},{},{},{}", min.re, min.im, max.re, max.im)
            }
        }
    }
}

/// Result of an area quadrature with its skip census.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaIntegral {
    pub value: Complex,
    pub n_points: usize,
    pub n_skipped: usize,
}

pub(crate) fn skip_limit(total: usize) -> usize {
    (total as f64 * MAX_SKIP_FRACTION).floor() as usize
}

pub(crate) fn check_skips(skipped: usize, total: usize) -> Result<()> {
    let limit = skip_limit(total);
    if skipped > limit {
        Err(Error::ExcessiveSkips {
            skipped,
            total,
            limit,
        })
    } else {
        Ok(())
    }
}

fn weighted_sum<F>(nodes: &[(Complex, f64)], f: F) -> Result<AreaIntegral>
where
    F: Fn(Complex) -> Result<Complex, EvalError> + Sync,
{
    let terms: Vec<Option<Complex>> = nodes
        .par_iter()
        .map(|&(p, w)| f(p).ok().map(|v| v * w))
        .collect();
    let n_skipped = terms.iter().filter(|t| t.is_none()).count();
    check_skips(n_skipped, terms.len())?;
    Ok(AreaIntegral {
        value: terms
            .into_iter()
            .flatten()
            .collect::<CompensatedSum>()
            .total(),
        n_points: nodes.len(),
        n_skipped,
    })
}

/// `∬ f dλ` for a pointwise function; failing points are skipped and counted.
pub fn integrate_region<F>(region: &RegionSpec, f: F) -> Result<AreaIntegral>
where
    F: Fn(Complex) -> Result<Complex, EvalError> + Sync,
{
    weighted_sum(&region.quadrature_nodes()?, f)
}

pub fn area_integral(f: &Expr, region: &RegionSpec) -> Result<AreaIntegral> {
    integrate_region(region, |z| f.eval(z))
}

/// `∬_disc f(z)/(z − ζ) dλ(z)` for `ζ` strictly inside the disc.
pub fn integrate_singular<F>(disc: &RegionSpec, zeta: Complex, f: F) -> Result<AreaIntegral>
where
    F: Fn(Complex) -> Result<Complex, EvalError> + Sync,
{
    disc.validate()?;
    let (center, radius) = match disc.region {
        Region::Disc { center, radius } => (center, radius),
        Region::Rectangle { .. } => {
            return Err(Error::InvalidSpec(
                "the Cauchy kernel is only integrated over discs".into(),
            ))
        }
    };
    let d = zeta - center;
    if !is_finite(zeta) || d.norm() > radius * (1.0 - SINGULAR_MARGIN) {
        return Err(Error::Placement {
            point: zeta,
            reason: format!("needs |ζ − c| ≤ r(1 − {SINGULAR_MARGIN:e}) for the disc {disc}"),
        });
    }
    let (n_radial, n_angular) = disc.resolution;
    let (x, w) = gauss_legendre(n_radial);
    let dtheta = 2.0 * PI / n_angular as f64;
    let slack = radius * radius - d.norm_sqr();
    let mut nodes = Vec::with_capacity(n_radial * n_angular);
    let mut kernel = Vec::with_capacity(n_radial * n_angular);
    for k in 0..n_angular {
        let e = Complex::from_polar(1.0, dtheta * k as f64);
        // |d + ρe| = R  ⇒  ρ = −b + sqrt(b² + R² − |d|²),  b = Re(d̄e)
        let b = (d.conj() * e).re;
        let rho_max = -b + (b * b + slack).sqrt();
        for (t, wt) in x.iter().zip(&w) {
            let rho = rho_max * (t + 1.0) * 0.5;
            nodes.push((zeta + e * rho, wt * rho_max * 0.5 * dtheta));
            kernel.push(e.conj());
        }
    }
    weighted_sum_with_kernel(&nodes, &kernel, f)
}

fn weighted_sum_with_kernel<F>(
    nodes: &[(Complex, f64)],
    kernel: &[Complex],
    f: F,
) -> Result<AreaIntegral>
where
    F: Fn(Complex) -> Result<Complex, EvalError> + Sync,
{
    let terms: Vec<Option<Complex>> = nodes
        .par_iter()
        .zip(kernel.par_iter())
        .map(|(&(p, w), &k)| f(p).ok().map(|v| v * k * w))
        .collect();
    let n_skipped = terms.iter().filter(|t| t.is_none()).count();
    check_skips(n_skipped, terms.len())?;
    Ok(AreaIntegral {
        value: terms
            .into_iter()
            .flatten()
            .collect::<CompensatedSum>()
            .total(),
        n_points: nodes.len(),
        n_skipped,
    })
}

pub fn singular_area_integral(f: &Expr, disc: &RegionSpec, zeta: Complex) -> Result<AreaIntegral> {
    integrate_singular(disc, zeta, |z| f.eval(z))
}
