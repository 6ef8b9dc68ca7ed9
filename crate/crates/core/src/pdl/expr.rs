use std::fmt;

use super::{Assignment, PdlError};
use crate::numfmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Abs,
    Floor,
    Ceil,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Floor => "floor",
            Func::Ceil => "ceil",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "abs" => Some(Func::Abs),
            "floor" => Some(Func::Floor),
            "ceil" => Some(Func::Ceil),
            _ => None,
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Abs => v.abs(),
            Func::Floor => v.floor(),
            Func::Ceil => v.ceil(),
        }
    }
}

/// Real-valued expression over named parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Param(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn param(name: impl Into<String>) -> Expr {
        Expr::Param(name.into())
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn call(f: Func, e: Expr) -> Expr {
        Expr::Call(f, Box::new(e))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, r: Expr) -> Expr {
        Expr::bin(BinOp::Add, self, r)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, r: Expr) -> Expr {
        Expr::bin(BinOp::Sub, self, r)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, r: Expr) -> Expr {
        Expr::bin(BinOp::Mul, self, r)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, r: Expr) -> Expr {
        Expr::bin(BinOp::Div, self, r)
    }

    /// Evaluates at `at`. Division by an exact zero is an error.
    pub fn eval(&self, at: &Assignment) -> Result<f64, PdlError> {
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::Param(name) => at.get(name).ok_or_else(|| PdlError::MissingParam(name.clone())),
            Expr::Neg(e) => Ok(-e.eval(at)?),
            Expr::Call(f, e) => Ok(f.apply(e.eval(at)?)),
            Expr::Bin(op, l, r) => {
                let l = l.eval(at)?;
                let r = r.eval(at)?;
                let v = match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        if r == 0.0 {
                            return Err(PdlError::DivisionByZero(self.to_string()));
                        }
                        l / r
                    }
                };
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(PdlError::NonFinite(self.to_string()))
                }
            }
        }
    }

    /// Every parameter name the expression mentions, in first-use order.
    pub fn params(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Num(_) => {}
            Expr::Param(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n)
                }
            }
            Expr::Neg(e) | Expr::Call(_, e) => e.collect_params(out),
            Expr::Bin(_, l, r) => {
                l.collect_params(out);
                r.collect_params(out);
            }
        }
    }

    /// Replaces parameter `name` by the constant `value`.
    pub fn substitute(&self, name: &str, value: f64) -> Expr {
        match self {
            Expr::Param(n) if n == name => Expr::Num(value),
            Expr::Num(_) | Expr::Param(_) => self.clone(),
            Expr::Neg(e) => Expr::Neg(Box::new(e.substitute(name, value))),
            Expr::Call(f, e) => Expr::call(*f, e.substitute(name, value)),
            Expr::Bin(op, l, r) => Expr::bin(*op, l.substitute(name, value), r.substitute(name, value)),
        }
    }

    /// Canonical text. Literals use the shortest form that parses back to
    /// the same double, so re-parsing never moves a floor/ceil boundary.
    pub(crate) fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s, 0);
        s
    }

    // Precedence levels: 1 additive, 2 multiplicative, 3 unary, 4 atom.
    // Right operands of a binary operator demand strictly higher precedence,
    // so the parsed tree is always identical to the rendered one.
    fn render_into(&self, out: &mut String, min_prec: u8) {
        match self {
            Expr::Num(v) => {
                let text = numfmt::shortest(*v);
                let needs = text.starts_with('-') && min_prec > 3;
                wrap(out, needs, |o| o.push_str(&text));
            }
            Expr::Param(n) => out.push_str(n),
            Expr::Neg(e) => wrap(out, min_prec > 3, |o| {
                o.push('-');
                e.render_into(o, 3);
            }),
            Expr::Call(f, e) => {
                out.push_str(f.name());
                out.push('(');
                e.render_into(out, 0);
                out.push(')');
            }
            Expr::Bin(op, l, r) => {
                let p = op.precedence();
                wrap(out, p < min_prec, |o| {
                    l.render_into(o, p);
                    o.push(' ');
                    o.push_str(op.symbol());
                    o.push(' ');
                    r.render_into(o, p + 1);
                });
            }
        }
    }
}

fn wrap(out: &mut String, parens: bool, body: impl FnOnce(&mut String)) {
    if parens {
        out.push('(');
    }
    body(out);
    if parens {
        out.push(')');
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        }
    }

    /// Tests `v op 0`.
    pub fn holds(self, v: f64) -> bool {
        match self {
            CmpOp::Lt => v < 0.0,
            CmpOp::Le => v <= 0.0,
            CmpOp::Gt => v > 0.0,
            CmpOp::Ge => v >= 0.0,
            CmpOp::Eq => v == 0.0,
            CmpOp::Ne => v != 0.0,
        }
    }
}

/// `lhs op rhs`, evaluated as `(lhs − rhs) op 0` with no tolerance band.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
}

impl Comparison {
    pub fn new(lhs: Expr, op: CmpOp, rhs: Expr) -> Self {
        Comparison { lhs, op, rhs }
    }

    pub fn holds(&self, at: &Assignment) -> Result<bool, PdlError> {
        let d = self.lhs.eval(at)? - self.rhs.eval(at)?;
        Ok(self.op.holds(d))
    }

    pub fn substitute(&self, name: &str, value: f64) -> Comparison {
        Comparison::new(self.lhs.substitute(name, value), self.op, self.rhs.substitute(name, value))
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}
