//! A small expression language for the scalar components of parametric curves.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" [ "-" ] integer ] ;
//! primary = number | "s" | "pi" | func "(" expr ")" | "(" expr ")" ;
//! func    = "sqrt" | "sin" | "cos" | "sinh" | "cosh" | "tanh" | "abs" ;
//! number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//! ```
//!
//! Whitespace is ignored between tokens. `^` binds tighter than unary minus, so
//! `-s^2` is `-(s^2)`. There is no implicit multiplication.

use std::fmt;

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};
use crate::minkowski::MVec3;
use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

/// Parsed expression in the curve parameter `s`.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveExpr {
    Const(f64),
    Var,
    Pi,
    Neg(Box<CurveExpr>),
    Binary(BinOp, Box<CurveExpr>, Box<CurveExpr>),
    Pow(Box<CurveExpr>, i32),
    Call(Func, Box<CurveExpr>),
}

impl CurveExpr {
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text)?.parse_all()
    }

    fn precedence(&self) -> u8 {
        match self {
            CurveExpr::Binary(op, ..) => op.precedence(),
            CurveExpr::Neg(_) => 3,
            CurveExpr::Pow(..) => 4,
            _ => 5,
        }
    }

    /// Replaces the variable `s` by `inner`, i.e. builds `self ∘ inner`.
    pub fn substitute(&self, inner: &CurveExpr) -> CurveExpr {
        use CurveExpr::*;
        match self {
            Var => inner.clone(),
            Const(_) | Pi => self.clone(),
            Neg(a) => Neg(Box::new(a.substitute(inner))),
            Binary(op, a, b) => Binary(*op, Box::new(a.substitute(inner)), Box::new(b.substitute(inner))),
            Pow(a, n) => Pow(Box::new(a.substitute(inner)), *n),
            Call(f, a) => Call(*f, Box::new(a.substitute(inner))),
        }
    }

    /// IEEE evaluation at `s`.
    pub fn eval_scalar<T: Real>(&self, s: T) -> Result<T> {
        use CurveExpr::*;
        let out = match self {
            Const(c) => lit(*c),
            Var => s,
            Pi => T::PI(),
            Neg(a) => -a.eval_scalar(s)?,
            Binary(op, a, b) => {
                let (x, y) = (a.eval_scalar(s)?, b.eval_scalar(s)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == T::zero() {
                            return Err(domain("div", y));
                        }
                        x / y
                    }
                }
            }
            Pow(a, n) => {
                let x = a.eval_scalar(s)?;
                if *n < 0 && x == T::zero() {
                    return Err(domain("pow", x));
                }
                x.powi(*n)
            }
            Call(f, a) => {
                let x = a.eval_scalar(s)?;
                match f {
                    Func::Sqrt => {
                        if x < T::zero() {
                            return Err(domain("sqrt", x));
                        }
                        x.sqrt()
                    }
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Tanh => x.tanh(),
                    Func::Abs => x.abs(),
                }
            }
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite("expression value"))
        }
    }

    /// Truncated Taylor expansion at `s0`.
    pub fn eval_jet<T: Real>(&self, s0: T, order: usize) -> Result<Jet<T>> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                requested: order,
                max: MAX_ORDER,
            });
        }
        let j = self.jet_rec(s0, order)?;
        if j.is_finite() {
            Ok(j)
        } else {
            Err(Error::NonFinite("jet coefficients"))
        }
    }

    fn jet_rec<T: Real>(&self, s0: T, order: usize) -> Result<Jet<T>> {
        use CurveExpr::*;
        Ok(match self {
            Const(c) => Jet::constant(s0, order, lit(*c)),
            Var => Jet::variable(s0, order),
            Pi => Jet::constant(s0, order, T::PI()),
            Neg(a) => -a.jet_rec(s0, order)?,
            Binary(op, a, b) => {
                let (x, y) = (a.jet_rec(s0, order)?, b.jet_rec(s0, order)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x.div(&y).map_err(|_| domain("div", y.value()))?,
                }
            }
            Pow(a, n) => {
                let x = a.jet_rec(s0, order)?;
                x.powi(*n).map_err(|_| domain("pow", x.value()))?
            }
            Call(f, a) => {
                let x = a.jet_rec(s0, order)?;
                match f {
                    Func::Sqrt => x.sqrt().map_err(|_| domain("sqrt", x.value()))?,
                    Func::Sin => x.sin_cos().0,
                    Func::Cos => x.sin_cos().1,
                    Func::Sinh => x.sinh_cosh().0,
                    Func::Cosh => x.sinh_cosh().1,
                    Func::Tanh => x.tanh(),
                    Func::Abs => return Err(Error::AbsInJet),
                }
            }
        })
    }
}

fn domain<T: Real>(func: &'static str, arg: T) -> Error {
    Error::EvalDomain {
        func,
        arg: arg.to_f64().unwrap_or(f64::NAN),
    }
}

impl fmt::Display for CurveExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CurveExpr::*;
        match self {
            Const(c) => write!(f, "{c}"),
            Var => f.write_str("s"),
            Pi => f.write_str("pi"),
            Neg(a) => {
                if a.precedence() < 3 {
                    write!(f, "-({a})")
                } else {
                    write!(f, "-{a}")
                }
            }
            Binary(op, a, b) => {
                let p = op.precedence();
                if a.precedence() < p {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, " {} ", op.symbol())?;
                if b.precedence() <= p {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Pow(a, n) => {
                if a.precedence() < 5 {
                    write!(f, "({a})^{n}")
                } else {
                    write!(f, "{a}^{n}")
                }
            }
            Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    Sym(char),
    End,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() || c == '.' {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let mut integral = true;
                if i < chars.len() && chars[i] == '.' {
                    integral = false;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut k = i + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        integral = false;
                        i = k;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lexeme: String = chars[start..i].iter().collect();
                let value = lexeme.parse::<f64>().map_err(|_| Error::Syntax {
                    position: start,
                    expected: "number".into(),
                })?;
                toks.push((Tok::Num(value, integral), start));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), start));
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Sym(c), i));
                i += 1;
            } else {
                return Err(Error::Syntax {
                    position: i,
                    expected: format!("operand or operator, found `{c}`"),
                });
            }
        }
        toks.push((Tok::End, chars.len()));
        Ok(Self { toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn position(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        Error::Syntax {
            position: self.position(),
            expected: expected.into(),
        }
    }

    fn parse_all(mut self) -> Result<CurveExpr> {
        let e = self.expr()?;
        match self.peek() {
            Tok::End => Ok(e),
            _ => Err(self.error("expected operator or end of input")),
        }
    }

    fn expr(&mut self) -> Result<CurveExpr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = CurveExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<CurveExpr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = CurveExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<CurveExpr> {
        if let Tok::Sym('-') = self.peek() {
            self.bump();
            return Ok(CurveExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<CurveExpr> {
        let base = self.primary()?;
        if let Tok::Sym('^') = self.peek() {
            self.bump();
            let negative = matches!(self.peek(), Tok::Sym('-'));
            if negative {
                self.bump();
            }
            match self.peek().clone() {
                Tok::Num(v, true) if v <= i32::MAX as f64 => {
                    self.bump();
                    let n = v as i32;
                    return Ok(CurveExpr::Pow(Box::new(base), if negative { -n } else { n }));
                }
                _ => return Err(self.error("expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<CurveExpr> {
        match self.peek().clone() {
            Tok::Num(v, _) => {
                self.bump();
                Ok(CurveExpr::Const(v))
            }
            Tok::Ident(name) => {
                let (_, at) = self.bump();
                match name.as_str() {
                    "s" => Ok(CurveExpr::Var),
                    "pi" => Ok(CurveExpr::Pi),
                    _ => {
                        let func = Func::from_name(&name).ok_or(Error::UnknownIdentifier {
                            name: name.clone(),
                            position: at,
                        })?;
                        if !matches!(self.peek(), Tok::Sym('(')) {
                            return Err(self.error("expected `(` after function name"));
                        }
                        self.bump();
                        let arg = self.expr()?;
                        if !matches!(self.peek(), Tok::Sym(')')) {
                            return Err(self.error("expected `)`"));
                        }
                        self.bump();
                        Ok(CurveExpr::Call(func, Box::new(arg)))
                    }
                }
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                if !matches!(self.peek(), Tok::Sym(')')) {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok(e)
            }
            _ => Err(self.error("expected operand")),
        }
    }
}

/// A closed-form curve on the hyperbolic plane, optionally with its dual.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricCurve {
    pub name: String,
    pub components: [CurveExpr; 3],
    pub dual_components: Option<[CurveExpr; 3]>,
    domain: (f64, f64),
}

impl ParametricCurve {
    pub fn new(
        name: impl Into<String>,
        components: [CurveExpr; 3],
        dual_components: Option<[CurveExpr; 3]>,
        domain: (f64, f64),
    ) -> Result<Self> {
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain(a, b));
        }
        Ok(Self {
            name: name.into(),
            components,
            dual_components,
            domain,
        })
    }

    /// Parses component strings.
    pub fn from_strs(
        name: impl Into<String>,
        r: [&str; 3],
        v: Option<[&str; 3]>,
        domain: (f64, f64),
    ) -> Result<Self> {
        let parse3 = |x: [&str; 3]| -> Result<[CurveExpr; 3]> {
            Ok([
                CurveExpr::parse(x[0])?,
                CurveExpr::parse(x[1])?,
                CurveExpr::parse(x[2])?,
            ])
        };
        let v = match v {
            Some(v) => Some(parse3(v)?),
            None => None,
        };
        Self::new(name, parse3(r)?, v, domain)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn has_dual(&self) -> bool {
        self.dual_components.is_some()
    }

    /// Copy without the explicit dual.
    pub fn without_dual(&self) -> Self {
        Self {
            dual_components: None,
            ..self.clone()
        }
    }

    /// Reparametrizes by `s = phi(ξ)` on the given new domain.
    pub fn reparametrize(&self, phi: &CurveExpr, domain: (f64, f64)) -> Result<Self> {
        let sub = |c: &[CurveExpr; 3]| {
            [c[0].substitute(phi), c[1].substitute(phi), c[2].substitute(phi)]
        };
        Self::new(
            format!("{} (reparametrized)", self.name),
            sub(&self.components),
            self.dual_components.as_ref().map(sub),
            domain,
        )
    }

    pub fn point<T: Real>(&self, s: T) -> Result<MVec3<T>> {
        eval3(&self.components, s)
    }

    pub fn jets<T: Real>(&self, s: T, order: usize) -> Result<MVec3<Jet<T>>> {
        jets3(&self.components, s, order)
    }

    pub fn dual_point<T: Real>(&self, s: T) -> Option<Result<MVec3<T>>> {
        self.dual_components.as_ref().map(|c| eval3(c, s))
    }

    pub fn dual_jets<T: Real>(&self, s: T, order: usize) -> Option<Result<MVec3<Jet<T>>>> {
        self.dual_components.as_ref().map(|c| jets3(c, s, order))
    }
}

fn eval3<T: Real>(c: &[CurveExpr; 3], s: T) -> Result<MVec3<T>> {
    Ok(MVec3::new(
        c[0].eval_scalar(s)?,
        c[1].eval_scalar(s)?,
        c[2].eval_scalar(s)?,
    ))
}

fn jets3<T: Real>(c: &[CurveExpr; 3], s: T, order: usize) -> Result<MVec3<Jet<T>>> {
    Ok(MVec3::new(
        c[0].eval_jet(s, order)?,
        c[1].eval_jet(s, order)?,
        c[2].eval_jet(s, order)?,
    ))
}
