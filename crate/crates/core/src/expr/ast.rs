use std::fmt;
use std::sync::Arc;

use super::chart::ChartSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Shared, immutable expression node.
pub type Node = Arc<Expr>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Expression tree over chart coordinates.
///
/// Variables are coordinate indices into the owning chart. The exponent of
/// `Pow` is a literal, which keeps differentiation closed-form.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(Node),
    Add(Node, Node),
    Sub(Node, Node),
    Mul(Node, Node),
    Div(Node, Node),
    Pow(Node, f64),
    Call(Func, Node),
}

// Simplifying constructors. Only identities that hold wherever both sides are
// defined are applied, plus constant folding of finite results.

pub fn constant(c: f64) -> Node {
    Arc::new(Expr::Const(c))
}

pub fn var(index: usize) -> Node {
    Arc::new(Expr::Var(index))
}

pub fn neg(a: Node) -> Node {
    match &*a {
        Expr::Const(c) => constant(-c),
        Expr::Neg(inner) => inner.clone(),
        _ => Arc::new(Expr::Neg(a)),
    }
}

pub fn add(a: Node, b: Node) -> Node {
    match (&*a, &*b) {
        (Expr::Const(x), Expr::Const(y)) => constant(x + y),
        (Expr::Const(x), _) if *x == 0.0 => b,
        (_, Expr::Const(y)) if *y == 0.0 => a,
        (_, Expr::Neg(inner)) => sub(a, inner.clone()),
        _ => Arc::new(Expr::Add(a, b)),
    }
}

pub fn sub(a: Node, b: Node) -> Node {
    match (&*a, &*b) {
        (Expr::Const(x), Expr::Const(y)) => constant(x - y),
        (Expr::Const(x), _) if *x == 0.0 => neg(b),
        (_, Expr::Const(y)) if *y == 0.0 => a,
        (_, Expr::Neg(inner)) => add(a, inner.clone()),
        _ => Arc::new(Expr::Sub(a, b)),
    }
}

pub fn mul(a: Node, b: Node) -> Node {
    match (&*a, &*b) {
        (Expr::Const(x), Expr::Const(y)) => constant(x * y),
        (Expr::Const(x), _) | (_, Expr::Const(x)) if *x == 0.0 => constant(0.0),
        (Expr::Const(x), _) if *x == 1.0 => b,
        (_, Expr::Const(y)) if *y == 1.0 => a,
        (Expr::Const(x), _) if *x == -1.0 => neg(b),
        (_, Expr::Const(y)) if *y == -1.0 => neg(a),
        (Expr::Const(x), Expr::Mul(l, r)) => match &**l {
            Expr::Const(y) => mul(constant(x * y), r.clone()),
            _ => Arc::new(Expr::Mul(a, b)),
        },
        _ => Arc::new(Expr::Mul(a, b)),
    }
}

pub fn div(a: Node, b: Node) -> Node {
    match (&*a, &*b) {
        (Expr::Const(x), Expr::Const(y)) if *y != 0.0 => constant(x / y),
        (_, Expr::Const(y)) if *y == 1.0 => a,
        (Expr::Mul(l, r), Expr::Const(y)) if *y != 0.0 => match &**l {
            Expr::Const(k) => mul(constant(k / y), r.clone()),
            _ => Arc::new(Expr::Div(a, b)),
        },
        _ => Arc::new(Expr::Div(a, b)),
    }
}

pub fn pow(a: Node, exponent: f64) -> Node {
    if exponent == 1.0 {
        return a;
    }
    if exponent == 0.0 {
        return constant(1.0);
    }
    if let Expr::Const(x) = &*a {
        if let Ok(v) = pow_checked(*x, exponent) {
            return constant(v);
        }
    }
    Arc::new(Expr::Pow(a, exponent))
}

pub fn call(func: Func, a: Node) -> Node {
    if let Expr::Const(x) = &*a {
        if let Ok(v) = apply_func(func, *x) {
            return constant(v);
        }
    }
    Arc::new(Expr::Call(func, a))
}

fn pow_checked<T: Scalar>(base: T, exponent: f64) -> std::result::Result<T, &'static str> {
    let is_integer = exponent.fract() == 0.0 && exponent.abs() < i32::MAX as f64;
    if base < T::zero() && !is_integer {
        return Err("negative base with non-integer exponent");
    }
    if base == T::zero() && exponent < 0.0 {
        return Err("zero base with negative exponent");
    }
    let value = if is_integer { base.powi(exponent as i32) } else { base.powf(T::lit(exponent)) };
    finite(value)
}

fn apply_func<T: Scalar>(func: Func, x: T) -> std::result::Result<T, &'static str> {
    let value = match func {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Exp => x.exp(),
        Func::Ln => {
            if x <= T::zero() {
                return Err("logarithm of a non-positive value");
            }
            x.ln()
        }
        Func::Sqrt => {
            if x < T::zero() {
                return Err("square root of a negative value");
            }
            x.sqrt()
        }
    };
    finite(value)
}

fn finite<T: Scalar>(value: T) -> std::result::Result<T, &'static str> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err("non-finite result")
    }
}

impl Expr {
    /// Evaluates at a chart point. The chart only names sub-expressions in
    /// domain errors.
    pub fn eval<T: Scalar>(&self, point: &[T], chart: &ChartSpec) -> Result<T> {
        let domain = |reason: &str| Error::Domain {
            expr: self.display(chart).to_string(),
            reason: reason.to_string(),
        };
        let value = match self {
            Expr::Const(c) => T::lit(*c),
            Expr::Var(i) => point[*i],
            Expr::Neg(a) => -a.eval(point, chart)?,
            Expr::Add(a, b) => a.eval(point, chart)? + b.eval(point, chart)?,
            Expr::Sub(a, b) => a.eval(point, chart)? - b.eval(point, chart)?,
            Expr::Mul(a, b) => a.eval(point, chart)? * b.eval(point, chart)?,
            Expr::Div(a, b) => {
                let num = a.eval(point, chart)?;
                let den = b.eval(point, chart)?;
                if den == T::zero() {
                    return Err(domain("division by zero"));
                }
                num / den
            }
            Expr::Pow(a, c) => return pow_checked(a.eval(point, chart)?, *c).map_err(domain),
            Expr::Call(f, a) => return apply_func(*f, a.eval(point, chart)?).map_err(domain),
        };
        finite(value).map_err(domain)
    }

    /// Exact partial derivative with respect to coordinate `index`.
    pub fn diff(&self, index: usize) -> Node {
        match self {
            Expr::Const(_) => constant(0.0),
            Expr::Var(i) => constant(if *i == index { 1.0 } else { 0.0 }),
            Expr::Neg(a) => neg(a.diff(index)),
            Expr::Add(a, b) => add(a.diff(index), b.diff(index)),
            Expr::Sub(a, b) => sub(a.diff(index), b.diff(index)),
            Expr::Mul(a, b) => add(mul(a.diff(index), b.clone()), mul(a.clone(), b.diff(index))),
            Expr::Div(a, b) => {
                let da = a.diff(index);
                let db = b.diff(index);
                if is_zero(&db) {
                    return div(da, b.clone());
                }
                div(sub(mul(da, b.clone()), mul(a.clone(), db)), pow(b.clone(), 2.0))
            }
            Expr::Pow(a, c) => mul(a.diff(index), mul(constant(*c), pow(a.clone(), c - 1.0))),
            Expr::Call(f, a) => {
                let da = a.diff(index);
                match f {
                    Func::Sin => mul(da, call(Func::Cos, a.clone())),
                    Func::Cos => neg(mul(da, call(Func::Sin, a.clone()))),
                    Func::Exp => mul(da, call(Func::Exp, a.clone())),
                    Func::Ln => div(da, a.clone()),
                    Func::Sqrt => div(da, mul(constant(2.0), call(Func::Sqrt, a.clone()))),
                }
            }
        }
    }

    pub fn depends_on(&self, index: usize) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(i) => *i == index,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.depends_on(index),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on(index) || b.depends_on(index)
            }
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => 1 + a.node_count(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }

    pub fn display<'a>(&'a self, chart: &'a ChartSpec) -> Printer<'a> {
        Printer { expr: self, chart }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if *c < 0.0 || c.is_sign_negative() => 3,
            Expr::Const(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }
}

pub fn is_zero(node: &Node) -> bool {
    node.as_const() == Some(0.0)
}

/// Formats an expression in the parser's grammar, parenthesising only where
/// precedence or associativity requires it.
pub struct Printer<'a> {
    expr: &'a Expr,
    chart: &'a ChartSpec,
}

impl Printer<'_> {
    fn child<'b>(&'b self, e: &'b Expr, parens: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = Printer { expr: e, chart: self.chart };
        if parens {
            write!(f, "({inner})")
        } else {
            write!(f, "{inner}")
        }
    }
}

fn write_literal(c: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // Display for f64 is the shortest decimal that round-trips.
    if c.is_sign_negative() {
        write!(f, "-{}", -c)
    } else {
        write!(f, "{c}")
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.expr.precedence();
        match self.expr {
            Expr::Const(c) => write_literal(*c, f),
            Expr::Var(i) => write!(f, "{}", self.chart.coordinate_name(*i)),
            Expr::Neg(a) => {
                write!(f, "-")?;
                self.child(a, a.precedence() <= prec, f)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = match self.expr {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    Expr::Mul(..) => "*",
                    _ => "/",
                };
                self.child(a, a.precedence() < prec, f)?;
                write!(f, "{op}")?;
                self.child(b, b.precedence() <= prec, f)
            }
            Expr::Pow(a, c) => {
                self.child(a, a.precedence() <= prec, f)?;
                write!(f, "^")?;
                if c.is_sign_negative() {
                    write!(f, "(")?;
                    write_literal(*c, f)?;
                    write!(f, ")")
                } else {
                    write_literal(*c, f)
                }
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                self.child(a, false, f)?;
                write!(f, ")")
            }
        }
    }
}
