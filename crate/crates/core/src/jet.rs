//! Wirtinger jets.
//!
//! A [`Jet`] carries a value together with both Wirtinger derivatives
//! `∂/∂z = ½(∂x − i∂y)` and `∂/∂z̄ = ½(∂x + i∂y)`. Holomorphic operations
//! act on both channels through the ordinary chain rule; conjugation swaps
//! the channels and conjugates them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

pub type Complex = num_complex::Complex64;

/// Relative size of the exclusion disc around poles and branch points.
pub const GUARD_RELATIVE: f64 = 1e-9;

/// Guard radius used around a pole or branch point when evaluating near `z`.
pub fn guard_radius(z: Complex) -> f64 {
    GUARD_RELATIVE * z.norm().max(1.0)
}

pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Elementary functions understood by the jet algebra and the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elementary {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
    Neg,
    Conj,
    Recip,
}

impl Elementary {
    pub const ALL: [Elementary; 8] = [
        Elementary::Exp,
        Elementary::Ln,
        Elementary::Sin,
        Elementary::Cos,
        Elementary::Sqrt,
        Elementary::Neg,
        Elementary::Conj,
        Elementary::Recip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Ln => "ln",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Sqrt => "sqrt",
            Elementary::Neg => "neg",
            Elementary::Conj => "conj",
            Elementary::Recip => "recip",
        }
    }

    /// Functions reachable by name in expression text.
    pub fn from_call_name(name: &str) -> Option<Self> {
        match name {
            "exp" => Some(Elementary::Exp),
            "ln" => Some(Elementary::Ln),
            "sin" => Some(Elementary::Sin),
            "cos" => Some(Elementary::Cos),
            "sqrt" => Some(Elementary::Sqrt),
            "conj" => Some(Elementary::Conj),
            _ => None,
        }
    }

    pub fn is_analytic(self) -> bool {
        self != Elementary::Conj
    }

    /// Plain value of the function, without derivatives.
    pub fn eval(self, z: Complex) -> Result<Complex, DomainError> {
        match self {
            Elementary::Exp => Ok(z.exp()),
            Elementary::Sin => Ok(z.sin()),
            Elementary::Cos => Ok(z.cos()),
            Elementary::Neg => Ok(-z),
            Elementary::Conj => Ok(z.conj()),
            Elementary::Ln => guarded(self, z).map(|z| z.ln()),
            Elementary::Sqrt => guarded(self, z).map(|z| z.sqrt()),
            Elementary::Recip => guarded(self, z).map(|z| z.inv()),
        }
    }
}

impl fmt::Display for Elementary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluation requested inside the guard disc of a pole or branch point.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("{function} is not evaluable at {at} (within guard radius of its singular point)")]
pub struct DomainError {
    pub function: Elementary,
    pub at: Complex,
}

fn guarded(function: Elementary, z: Complex) -> Result<Complex, DomainError> {
    if z.norm() <= guard_radius(z) {
        Err(DomainError { function, at: z })
    } else {
        Ok(z)
    }
}

/// Value with both Wirtinger derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex,
    pub dz: Complex,
    pub dzbar: Complex,
}

impl Jet {
    pub const fn new(value: Complex, dz: Complex, dzbar: Complex) -> Self {
        Jet { value, dz, dzbar }
    }

    pub fn constant(value: Complex) -> Self {
        Jet::new(value, Complex::new(0.0, 0.0), Complex::new(0.0, 0.0))
    }

    /// The independent variable: `(z, 1, 0)`.
    pub fn variable(z: Complex) -> Self {
        Jet::new(z, Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        is_finite(self.value) && is_finite(self.dz) && is_finite(self.dzbar)
    }

    /// Swap rule: `jet(conj f) = (conj f, conj ∂z̄f, conj ∂zf)`.
    pub fn conj(self) -> Self {
        Jet::new(self.value.conj(), self.dzbar.conj(), self.dz.conj())
    }

    pub fn scale(self, c: Complex) -> Self {
        Jet::new(c * self.value, c * self.dz, c * self.dzbar)
    }

    /// Chain rule for a holomorphic outer function with derivative `outer`.
    fn compose(self, value: Complex, outer: Complex) -> Self {
        Jet::new(value, outer * self.dz, outer * self.dzbar)
    }

    pub fn apply(self, function: Elementary) -> Result<Self, DomainError> {
        let v = self.value;
        Ok(match function {
            Elementary::Exp => {
                let e = v.exp();
                self.compose(e, e)
            }
            Elementary::Ln => {
                let v = guarded(function, v)?;
                self.compose(v.ln(), v.inv())
            }
            Elementary::Sin => self.compose(v.sin(), v.cos()),
            Elementary::Cos => self.compose(v.cos(), -v.sin()),
            Elementary::Sqrt => {
                let v = guarded(function, v)?;
                let s = v.sqrt();
                self.compose(s, (s * 2.0).inv())
            }
            Elementary::Neg => -self,
            Elementary::Conj => self.conj(),
            Elementary::Recip => {
                let v = guarded(function, v)?;
                let r = v.inv();
                self.compose(r, -(r * r))
            }
        })
    }

    /// Quotient with the pole guard applied to the denominator.
    pub fn try_div(self, rhs: Jet) -> Result<Self, DomainError> {
        let den = guarded(Elementary::Recip, rhs.value)?;
        let q = self.value / den;
        Ok(Jet::new(
            q,
            (self.dz - q * rhs.dz) / den,
            (self.dzbar - q * rhs.dzbar) / den,
        ))
    }

    /// Integer power by repeated squaring; negative exponents go through the
    /// guarded reciprocal.
    pub fn powi(self, n: i64) -> Result<Self, DomainError> {
        let mut result = Jet::constant(Complex::new(1.0, 0.0));
        let mut base = self;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        if n < 0 {
            result.apply(Elementary::Recip)
        } else {
            Ok(result)
        }
    }

    /// Principal-branch power `exp(exponent · ln self)`.
    pub fn powc(self, exponent: Jet) -> Result<Self, DomainError> {
        let log = self.apply(Elementary::Ln)?;
        (exponent * log).apply(Elementary::Exp)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet::new(
            self.value + rhs.value,
            self.dz + rhs.dz,
            self.dzbar + rhs.dzbar,
        )
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        Jet::new(
            self.value - rhs.value,
            self.dz - rhs.dz,
            self.dzbar - rhs.dzbar,
        )
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        Jet::new(
            self.value * rhs.value,
            self.value * rhs.dz + rhs.value * self.dz,
            self.value * rhs.dzbar + rhs.value * self.dzbar,
        )
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.value, -self.dz, -self.dzbar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn exp_of_variable_at_origin() {
        let j = Jet::variable(c(0.0, 0.0)).apply(Elementary::Exp).unwrap();
        assert_eq!(j, Jet::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn conj_swaps_channels() {
        let z = c(0.3, -1.2);
        let j = Jet::variable(z).apply(Elementary::Conj).unwrap();
        assert_eq!(j.value, z.conj());
        assert_eq!(j.dz, c(0.0, 0.0));
        assert_eq!(j.dzbar, c(1.0, 0.0));
    }

    #[test]
    fn exp_of_negated_conjugate() {
        let j = Jet::variable(c(1.0, 0.0))
            .conj()
            .apply(Elementary::Neg)
            .unwrap()
            .apply(Elementary::Exp)
            .unwrap();
        let e = (-1.0f64).exp();
        assert!((j.value - c(e, 0.0)).norm() < 1e-15);
        assert_eq!(j.dz, c(0.0, 0.0));
        assert!((j.dzbar - c(-e, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn guarded_functions_reject_singular_points() {
        let zero = Jet::variable(c(0.0, 0.0));
        for f in [Elementary::Ln, Elementary::Sqrt, Elementary::Recip] {
            let err = zero.apply(f).unwrap_err();
            assert_eq!(err.function, f);
        }
        // just outside the guard disc is fine
        assert!(Jet::variable(c(1e-8, 0.0)).apply(Elementary::Recip).is_ok());
        assert!(Jet::variable(c(1.0, 0.0))
            .try_div(Jet::variable(c(5e-10, 0.0)))
            .is_err());
    }

    #[test]
    fn ln_uses_principal_branch() {
        let j = Jet::variable(c(-1.0, 0.0)).apply(Elementary::Ln).unwrap();
        assert!((j.value.im - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn powi_matches_repeated_products() {
        let z = Jet::variable(c(0.7, 0.4)).conj() * Jet::variable(c(0.7, 0.4));
        let p5 = z.powi(5).unwrap();
        let naive = z * z * z * z * z;
        assert!((p5.value - naive.value).norm() < 1e-14);
        assert!((p5.dz - naive.dz).norm() < 1e-13);
        assert!((p5.dzbar - naive.dzbar).norm() < 1e-13);
        let inv = z.powi(-2).unwrap();
        assert!((inv.value * (z * z).value - c(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(z.powi(0).unwrap(), Jet::constant(c(1.0, 0.0)));
    }

    #[test]
    fn double_conjugation_is_identity() {
        let j = Jet::new(c(1.0, 2.0), c(-0.5, 0.25), c(3.0, -4.0));
        assert_eq!(j.conj().conj(), j);
    }
}
