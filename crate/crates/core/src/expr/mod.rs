//! Complex expressions in `z` and `conj(z)`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := unary ('^' factor)?
//! unary  := '-' unary | atom
//! atom   := NUMBER | 'i' | 'pi' | 'e' | 'z' | 'zbar'
//!         | IDENT '(' expr ')' | '(' expr ')'
//! IDENT  := exp | ln | sin | cos | sqrt | conj
//! ```
//!
//! `^` is right-associative and binds tighter than `*`, but the unary minus
//! sits below it: `-z^2` reads as `(-z)^2`. Integer exponents are evaluated
//! by repeated multiplication; any other exponent goes through the principal
//! branch of `exp(b·ln a)`.

mod parser;

use std::fmt;

use thiserror::Error;

use crate::jet::{is_finite, Complex, Elementary, Jet};

pub use parser::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(Complex),
    VarZ,
    Conj(Box<Expr>),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    PowInt(Box<Expr>, i64),
    Pow(Box<Expr>, Box<Expr>),
    Call(Elementary, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{function} is not evaluable in `{subexpr}` at z = {at}: argument {argument} is within the guard radius")]
    Domain {
        function: Elementary,
        subexpr: String,
        argument: Complex,
        at: Complex,
    },
    #[error("non-finite value in `{subexpr}` at z = {at}")]
    NonFinite { subexpr: String, at: Complex },
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn constant(c: Complex) -> Expr {
        Expr::Constant(c)
    }

    pub fn real(x: f64) -> Expr {
        Expr::Constant(Complex::new(x, 0.0))
    }

    pub fn conj(e: Expr) -> Expr {
        Expr::Conj(Box::new(e))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn add(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Add, lhs, rhs)
    }

    pub fn sub(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Sub, lhs, rhs)
    }

    pub fn mul(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Mul, lhs, rhs)
    }

    pub fn div(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Div, lhs, rhs)
    }

    pub fn powi(base: Expr, n: i64) -> Expr {
        Expr::PowInt(Box::new(base), n)
    }

    pub fn call(f: Elementary, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    /// True when no conjugation occurs anywhere in the tree.
    pub fn is_conj_free(&self) -> bool {
        match self {
            Expr::Constant(_) | Expr::VarZ => true,
            Expr::Conj(_) | Expr::Call(Elementary::Conj, _) => false,
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Call(_, a) => a.is_conj_free(),
            Expr::Binary(_, a, b) | Expr::Pow(a, b) => a.is_conj_free() && b.is_conj_free(),
        }
    }

    /// Canonical fully parenthesised text; `parse(format(e))` evaluates like `e`.
    pub fn format(&self) -> String {
        self.to_string()
    }

    /// Value and both Wirtinger derivatives at `z`.
    pub fn eval_jet(&self, z: Complex) -> Result<Jet, EvalError> {
        let jet = match self {
            Expr::Constant(c) => Jet::constant(*c),
            Expr::VarZ => Jet::variable(z),
            Expr::Conj(a) => a.eval_jet(z)?.conj(),
            Expr::Neg(a) => -a.eval_jet(z)?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval_jet(z)?, b.eval_jet(z)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.try_div(b).map_err(|e| self.domain(e, z))?,
                }
            }
            Expr::PowInt(a, n) => a.eval_jet(z)?.powi(*n).map_err(|e| self.domain(e, z))?,
            Expr::Pow(a, b) => {
                let (a, b) = (a.eval_jet(z)?, b.eval_jet(z)?);
                a.powc(b).map_err(|e| self.domain(e, z))?
            }
            Expr::Call(f, a) => a.eval_jet(z)?.apply(*f).map_err(|e| self.domain(e, z))?,
        };
        if jet.is_finite() {
            Ok(jet)
        } else {
            Err(self.non_finite(z))
        }
    }

    /// Value only; agrees with `eval_jet(z).value`.
    pub fn eval(&self, z: Complex) -> Result<Complex, EvalError> {
        let v = match self {
            Expr::Constant(c) => *c,
            Expr::VarZ => z,
            Expr::Conj(a) => a.eval(z)?.conj(),
            Expr::Neg(a) => -a.eval(z)?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval(z)?, b.eval(z)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        Elementary::Recip.eval(b).map_err(|e| self.domain(e, z))?;
                        a / b
                    }
                }
            }
            Expr::PowInt(a, n) => {
                // Same multiplication order as the jet path.
                Jet::constant(a.eval(z)?)
                    .powi(*n)
                    .map_err(|e| self.domain(e, z))?
                    .value
            }
            Expr::Pow(a, b) => {
                let (a, b) = (a.eval(z)?, b.eval(z)?);
                let log = Elementary::Ln.eval(a).map_err(|e| self.domain(e, z))?;
                (b * log).exp()
            }
            Expr::Call(f, a) => f.eval(a.eval(z)?).map_err(|e| self.domain(e, z))?,
        };
        if is_finite(v) {
            Ok(v)
        } else {
            Err(self.non_finite(z))
        }
    }

    fn domain(&self, err: crate::jet::DomainError, z: Complex) -> EvalError {
        EvalError::Domain {
            function: err.function,
            subexpr: self.format(),
            argument: err.at,
            at: z,
        }
    }

    fn non_finite(&self, z: Complex) -> EvalError {
        EvalError::NonFinite {
            subexpr: self.format(),
            at: z,
        }
    }
}

fn fmt_real(x: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x.is_sign_negative() {
        write!(f, "(-{})", -x)
    } else {
        write!(f, "{x}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(c) if c.im == 0.0 => fmt_real(c.re, f),
            Expr::Constant(c) if c.re == 0.0 && c.im == 1.0 => f.write_str("i"),
            Expr::Constant(c) => {
                // `re + im*i` reparses with a positive zero real part
                let re = c.re + 0.0;
                if c.im.is_sign_negative() {
                    write!(f, "({re}-{}*i)", -c.im)
                } else {
                    write!(f, "({re}+{}*i)", c.im)
                }
            }
            Expr::VarZ => f.write_str("z"),
            Expr::Conj(a) => write!(f, "conj({a})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Binary(op, a, b) => write!(f, "({a}{}{b})", op.symbol()),
            Expr::PowInt(a, n) => write!(f, "({a}^{n})"),
            Expr::Pow(a, b) => write!(f, "({a}^{b})"),
            Expr::Call(Elementary::Neg, a) => write!(f, "(-{a})"),
            Expr::Call(Elementary::Recip, a) => write!(f, "(1/{a})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
