//! Central-difference estimates of the Wirtinger derivatives.
//!
//! Independent of the jet algebra; used as an oracle for it.

use crate::expr::EvalError;
use crate::jet::{is_finite, Complex};

/// `ε^(1/3) · max(1, |z|)`, the usual balance point for central differences.
pub fn default_step(z: Complex) -> f64 {
    f64::EPSILON.cbrt() * z.norm().max(1.0)
}

/// Returns `(∂f/∂z, ∂f/∂z̄)` at `z` from the stencil `z ± h`, `z ± ih`.
pub fn fd_wirtinger<F>(f: F, z: Complex, h: f64) -> Result<(Complex, Complex), EvalError>
where
    F: Fn(Complex) -> Result<Complex, EvalError>,
{
    let i = Complex::new(0.0, 1.0);
    let eval = |p: Complex| -> Result<Complex, EvalError> {
        let v = f(p)?;
        if is_finite(v) {
            Ok(v)
        } else {
            Err(EvalError::NonFinite {
                subexpr: "finite-difference stencil".into(),
                at: p,
            })
        }
    };
    let fx = (eval(z + h)? - eval(z - h)?) / (2.0 * h);
    let fy = (eval(z + i * h)? - eval(z - i * h)?) / (2.0 * h);
    Ok(((fx - i * fy) * 0.5, (fx + i * fy) * 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_has_unit_antiholomorphic_derivative() {
        let (dz, dzbar) = fd_wirtinger(|z| Ok(z.conj()), Complex::new(1.0, 1.0), 1e-5).unwrap();
        assert!(dz.norm() < 1e-8);
        assert!((dzbar - Complex::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn square_is_holomorphic() {
        let (dz, dzbar) = fd_wirtinger(|z| Ok(z * z), Complex::new(1.0, 1.0), 1e-5).unwrap();
        assert!((dz - Complex::new(2.0, 2.0)).norm() < 1e-8);
        assert!(dzbar.norm() < 1e-8);
    }

    #[test]
    fn modulus_squared() {
        let (_, dzbar) = fd_wirtinger(|z| Ok(z * z.conj()), Complex::new(0.5, 0.0), 1e-5).unwrap();
        assert!((dzbar - Complex::new(0.5, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn non_finite_stencil_value_names_the_point() {
        let z = Complex::new(1.0, 0.0);
        let err = fd_wirtinger(
            |p| {
                Ok(if p.re > 1.0 {
                    Complex::new(f64::NAN, 0.0)
                } else {
                    p
                })
            },
            z,
            0.5,
        )
        .unwrap_err();
        match err {
            EvalError::NonFinite { at, .. } => assert_eq!(at, Complex::new(1.5, 0.0)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
