use thiserror::Error;

use super::{BinOp, Expr};
use crate::jet::{Complex, Elementary};

const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {}, found {found}", .expected.join(" | "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => {
                *offset
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(x) => format!("number {x}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const ATOM_START: &[&str] = &[
    "number",
    "'i'",
    "'pi'",
    "'e'",
    "'z'",
    "'zbar'",
    "function call",
    "'('",
    "'-'",
];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        let start = pos;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                pos += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                pos = scan_number(bytes, pos);
                let lit = &text[start..pos];
                match lit.parse::<f64>() {
                    Ok(x) if x.is_finite() => {
                        toks.push((Tok::Number(x), start));
                        continue;
                    }
                    _ => {
                        return Err(ParseError::Syntax {
                            offset: start,
                            expected: vec!["finite decimal literal"],
                            found: format!("`{lit}`"),
                        })
                    }
                }
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                toks.push((Tok::Ident(text[start..pos].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    expected: vec!["operator", "operand"],
                    found: format!("character {ch:?}"),
                });
            }
        };
        toks.push((tok, start));
        pos += 1;
    }
    toks.push((Tok::Eof, text.len()));
    Ok(toks)
}

fn scan_number(bytes: &[u8], mut pos: usize) -> usize {
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    if pos < bytes.len() && bytes[pos] == b'.' {
        pos += 1;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
    }
    // exponent only when digits follow, so `2e` stays `2` then `e`
    if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
        let mut p = pos + 1;
        if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
            p += 1;
        }
        if p < bytes.len() && bytes[p].is_ascii_digit() {
            while p < bytes.len() && bytes[p].is_ascii_digit() {
                p += 1;
            }
            pos = p;
        }
    }
    pos
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

/// Parses expression text into an [`Expr`].
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        _ => Err(p.unexpected(vec!["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"])),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected,
            found: self.peek().describe(),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::Syntax {
                offset: self.offset(),
                expected: vec!["shallower nesting"],
                found: format!("nesting deeper than {MAX_DEPTH}"),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = fold_binary(op, lhs, rhs);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = fold_binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let base = self.unary()?;
        let out = if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.factor()?;
            make_power(base, exponent)
        } else {
            base
        };
        self.depth -= 1;
        Ok(out)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.enter()?;
            self.bump();
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(match inner {
                Expr::Constant(c) => Expr::Constant(-c),
                other => Expr::neg(other),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Number(x) => {
                self.bump();
                Ok(Expr::real(x))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "z" => Ok(Expr::VarZ),
                    "zbar" => Ok(Expr::conj(Expr::VarZ)),
                    "i" => Ok(Expr::Constant(Complex::new(0.0, 1.0))),
                    "pi" => Ok(Expr::real(std::f64::consts::PI)),
                    "e" => Ok(Expr::real(std::f64::consts::E)),
                    _ => match Elementary::from_call_name(&name) {
                        Some(f) => {
                            if *self.peek() != Tok::LParen {
                                return Err(self.unexpected(vec!["'('"]));
                            }
                            self.bump();
                            let arg = self.expr()?;
                            self.expect_rparen()?;
                            Ok(match f {
                                Elementary::Conj => Expr::conj(arg),
                                f => Expr::call(f, arg),
                            })
                        }
                        None => Err(ParseError::UnknownIdentifier { name, offset }),
                    },
                }
            }
            _ => Err(self.unexpected(ATOM_START.to_vec())),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(vec!["')'", "'+'", "'-'", "'*'", "'/'", "'^'"]))
        }
    }
}

/// Folds arithmetic between two literal constants; division by a literal
/// zero is left in place so it surfaces as a domain error at evaluation.
fn fold_binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    if let (Expr::Constant(a), Expr::Constant(b)) = (&lhs, &rhs) {
        let folded = match op {
            BinOp::Add => Some(a + b),
            BinOp::Sub => Some(a - b),
            BinOp::Mul => Some(a * b),
            BinOp::Div if *b != Complex::new(0.0, 0.0) => Some(a / b),
            BinOp::Div => None,
        };
        if let Some(v) = folded.filter(|v| v.re.is_finite() && v.im.is_finite()) {
            return Expr::Constant(v);
        }
    }
    Expr::binary(op, lhs, rhs)
}

fn make_power(base: Expr, exponent: Expr) -> Expr {
    if let Expr::Constant(c) = exponent {
        if c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() <= i32::MAX as f64 {
            let n = c.re as i64;
            if let Expr::Constant(b) = base {
                if n >= 0 || b != Complex::new(0.0, 0.0) {
                    let v = b.powi(n as i32);
                    if v.re.is_finite() && v.im.is_finite() {
                        return Expr::Constant(v);
                    }
                }
            }
            return Expr::powi(base, n);
        }
    }
    Expr::Pow(Box::new(base), Box::new(exponent))
}
