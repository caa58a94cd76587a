//! Executable checks for the structural holomorphic condition and the
//! classical and generalised integral theorems.
//!
//! Every check returns a [`CheckReport`]; constructors and pure computations
//! return plain values.

mod cauchy;
mod liouville;
mod residual;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::area::{check_skips, RegionSpec};
use crate::error::{Error, Result};
use crate::expr::EvalError;
use crate::jet::Complex;

pub use cauchy::{
    cauchy_estimate_check, cauchy_eval, generalized_cauchy_check, green_identity_check,
    morera_classify, pompeiu_check, pompeiu_reconstruct, probe_centers, taylor_coefficients,
    PompeiuReconstruction, MORERA_PROBE_NODES,
};
pub use liouville::{
    max_modulus_scan, modulus_law_check, recover_phi, MaxLocation, MaxModulus, PhiRecovery,
};
pub use residual::{build_structural_solution, cbv_residual, structural_residual};

/// Jet-based pointwise residuals.
pub const JET_TOLERANCE: f64 = 1e-10;
/// A single contour quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;
/// Line integral against area integral.
pub const GREEN_TOLERANCE: f64 = 1e-7;
/// Cauchy–Pompeiu reconstruction at the default resolution.
pub const POMPEIU_TOLERANCE: f64 = 1e-3;
/// Allowed negative slack in Cauchy's estimate (quadrature noise).
pub const ESTIMATE_SLACK: f64 = 1e-9;
/// Spread below which a sampled function counts as constant.
pub const CONSTANT_SPREAD: f64 = 1e-10;

/// Which operator the structural residual applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructuralVariant {
    /// `∂w/∂z̄ + w·∂K/∂z̄`
    ReducedForm,
    /// `∂(Kw)/∂z̄ = K·∂w/∂z̄ + w·∂K/∂z̄`
    StrongForm,
}

/// Integrand transform for the generalised Cauchy theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// `w̃ = w`
    None,
    /// `w̃ = K·w`
    MulK,
    /// `w̃ = e^K·w`
    MulExpK,
}

impl TransformKind {
    pub const ALL: [TransformKind; 3] = [
        TransformKind::None,
        TransformKind::MulK,
        TransformKind::MulExpK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::None => "none",
            TransformKind::MulK => "K",
            TransformKind::MulExpK => "expK",
        }
    }

    fn metric_key(self) -> &'static str {
        match self {
            TransformKind::None => "integral_none",
            TransformKind::MulK => "integral_mul_k",
            TransformKind::MulExpK => "integral_mul_exp_k",
        }
    }

    fn apply(self, w: Complex, k: Complex) -> Complex {
        match self {
            TransformKind::None => w,
            TransformKind::MulK => k * w,
            TransformKind::MulExpK => k.exp() * w,
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(TransformKind::None),
            "K" | "k" | "mulK" => Ok(TransformKind::MulK),
            "expK" | "expk" | "mulExpK" => Ok(TransformKind::MulExpK),
            other => Err(Error::InvalidSpec(format!(
                "unknown transform `{other}` (expected none, K or expK)"
            ))),
        }
    }
}

impl fmt::Display for StructuralVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructuralVariant::ReducedForm => "reduced",
            StructuralVariant::StrongForm => "strong",
        })
    }
}

impl FromStr for StructuralVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduced" => Ok(StructuralVariant::ReducedForm),
            "strong" => Ok(StructuralVariant::StrongForm),
            other => Err(Error::InvalidSpec(format!(
                "unknown variant `{other}` (expected reduced or strong)"
            ))),
        }
    }
}

/// Where pointwise checks are evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum SamplePoints {
    Region(RegionSpec),
    Points(Vec<Complex>),
}

impl SamplePoints {
    pub fn points(&self) -> Result<Vec<Complex>> {
        let pts = match self {
            SamplePoints::Region(r) => r.lattice()?,
            SamplePoints::Points(p) => p.clone(),
        };
        if pts.is_empty() {
            return Err(Error::InvalidSpec("no sample points".into()));
        }
        Ok(pts)
    }

    pub fn describe(&self) -> String {
        match self {
            SamplePoints::Region(r) => format!("{r} @ {}x{}", r.resolution.0, r.resolution.1),
            SamplePoints::Points(p) => format!("{} points", p.len()),
        }
    }
}

impl From<RegionSpec> for SamplePoints {
    fn from(r: RegionSpec) -> Self {
        SamplePoints::Region(r)
    }
}

impl From<Vec<Complex>> for SamplePoints {
    fn from(p: Vec<Complex>) -> Self {
        SamplePoints::Points(p)
    }
}

/// Pointwise evaluation over a sample set with a skip census.
pub(crate) struct Scan<T> {
    pub points: Vec<Complex>,
    pub values: Vec<Option<T>>,
    pub n_skipped: usize,
}

impl<T> Scan<T> {
    pub fn evaluated(&self) -> impl Iterator<Item = (Complex, &T)> {
        self.points
            .iter()
            .zip(&self.values)
            .filter_map(|(p, v)| v.as_ref().map(|v| (*p, v)))
    }
}

pub(crate) fn scan<T, F>(points: Vec<Complex>, f: F) -> Result<Scan<T>>
where
    T: Send,
    F: Fn(Complex) -> Result<T, EvalError> + Sync,
{
    let values: Vec<Option<T>> = points.par_iter().map(|&z| f(z).ok()).collect();
    let n_skipped = values.iter().filter(|v| v.is_none()).count();
    check_skips(n_skipped, values.len())?;
    if n_skipped == values.len() {
        return Err(Error::ExcessiveSkips {
            skipped: n_skipped,
            total: values.len(),
            limit: 0,
        });
    }
    Ok(Scan {
        points,
        values,
        n_skipped,
    })
}

/// Max and mean of non-negative values, in index order.
pub(crate) fn max_mean<'a, I: IntoIterator<Item = &'a f64>>(values: I) -> (f64, f64) {
    let mut max = 0.0f64;
    let mut sum = 0.0;
    let mut n = 0usize;
    for &v in values {
        if v > max || v.is_nan() {
            max = v;
        }
        sum += v;
        n += 1;
    }
    (max, if n > 0 { sum / n as f64 } else { 0.0 })
}
