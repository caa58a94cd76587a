use super::{max_mean, scan, SamplePoints, StructuralVariant};
use crate::error::Result;
use crate::expr::Expr;
use crate::jet::Elementary;
use crate::report::CheckReport;

/// Residual of the structural condition over a sample set.
pub fn structural_residual(
    w: &Expr,
    k: &Expr,
    points: &SamplePoints,
    variant: StructuralVariant,
    tolerance: f64,
) -> Result<CheckReport> {
    let s = scan(points.points()?, |z| {
        let wj = w.eval_jet(z)?;
        let kj = k.eval_jet(z)?;
        let r = match variant {
            StructuralVariant::ReducedForm => wj.dzbar + wj.value * kj.dzbar,
            StructuralVariant::StrongForm => kj.value * wj.dzbar + wj.value * kj.dzbar,
        };
        Ok(r.norm())
    })?;
    let (max_abs, mean_abs) = max_mean(s.evaluated().map(|(_, v)| v));
    Ok(
        CheckReport::new("structural_residual", "max_abs", max_abs, tolerance)
            .input("w", w)
            .input("K", k)
            .input("points", points.describe())
            .input("variant", variant)
            .metric("mean_abs", mean_abs)
            .points(s.points.len(), s.n_skipped),
    )
}

/// Residual of `∂w/∂z̄ + A·w + B·conj(w) − φ`.
pub fn cbv_residual(
    w: &Expr,
    a: &Expr,
    b: &Expr,
    phi: &Expr,
    points: &SamplePoints,
    tolerance: f64,
) -> Result<CheckReport> {
    let s = scan(points.points()?, |z| {
        let wj = w.eval_jet(z)?;
        let r = wj.dzbar + a.eval(z)? * wj.value + b.eval(z)? * wj.value.conj() - phi.eval(z)?;
        Ok(r.norm())
    })?;
    let (max_abs, mean_abs) = max_mean(s.evaluated().map(|(_, v)| v));
    Ok(
        CheckReport::new("cbv_residual", "max_abs", max_abs, tolerance)
            .input("w", w)
            .input("A", a)
            .input("B", b)
            .input("phi", phi)
            .input("points", points.describe())
            .metric("mean_abs", mean_abs)
            .points(s.points.len(), s.n_skipped),
    )
}

/// `phi · exp(−K)`, which solves the structural condition whenever `phi` is
/// holomorphic.
pub fn build_structural_solution(phi: &Expr, k: &Expr) -> Expr {
    Expr::mul(
        phi.clone(),
        Expr::call(Elementary::Exp, Expr::neg(k.clone())),
    )
}
