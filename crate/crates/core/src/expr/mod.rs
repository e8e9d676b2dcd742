//! Scalar expressions in one variable `t`.
//!
//! The speed function `l` and the curvature product `m = H·l` are supplied
//! as text, parsed into an [`Expr`] tree and differentiated symbolically so
//! that the cusp criteria can read exact derivative values.
//!
//! Grammar (loosest to tightest binding):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | tan | exp | log | sqrt | abs
//! ```
//!
//! The exponent of `^` must be constant (it may not mention `t`).
//! `abs` is accepted but is not smooth at zero; derivatives through it are
//! meaningless at its kink.

mod diff;
mod parse;

use std::fmt;

pub use parse::{parse, ParseError};

/// One-argument operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Neg => "-",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Neg => -x,
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
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

    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => a / b,
        }
    }
}

/// Expression tree over the single variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Unary(Func, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Power with a constant exponent.
    Pow(Box<Expr>, f64),
}

/// Evaluation produced a non-finite or undefined value.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("evaluation fault at t = {t}: {reason}")]
pub struct EvalError {
    pub t: f64,
    pub reason: &'static str,
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    /// True when the tree mentions `t`.
    pub fn depends_on_t(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.depends_on_t(),
            Expr::Binary(_, a, b) => a.depends_on_t() || b.depends_on_t(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Unary(_, a) | Expr::Pow(a, _) => 1 + a.size(),
            Expr::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Evaluates at `t`, reporting division by zero, logarithms and square
    /// roots outside their domain, and any other non-finite intermediate.
    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        let fault = |reason| EvalError { t, reason };
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Unary(f, a) => {
                let x = a.eval(t)?;
                match f {
                    Func::Log if x <= 0.0 => return Err(fault("log of non-positive value")),
                    Func::Sqrt if x < 0.0 => return Err(fault("sqrt of negative value")),
                    _ => f.apply(x),
                }
            }
            Expr::Binary(op, a, b) => {
                let x = a.eval(t)?;
                let y = b.eval(t)?;
                if *op == BinOp::Div && y == 0.0 {
                    return Err(fault("division by zero"));
                }
                op.apply(x, y)
            }
            Expr::Pow(a, p) => {
                let x = a.eval(t)?;
                if x == 0.0 && *p < 0.0 {
                    return Err(fault("zero raised to a negative power"));
                }
                pow(x, *p)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(fault("non-finite result"))
        }
    }

    /// Plain IEEE evaluation: faults surface as NaN or infinities.
    pub fn eval_raw(&self, t: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Unary(f, a) => f.apply(a.eval_raw(t)),
            Expr::Binary(op, a, b) => op.apply(a.eval_raw(t), b.eval_raw(t)),
            Expr::Pow(a, p) => pow(a.eval_raw(t), *p),
        }
    }

    /// Exact symbolic derivative with respect to `t`.
    pub fn differentiate(&self) -> Expr {
        diff::derivative(self)
    }

    /// The `order`-th derivative.
    pub fn nth_derivative(&self, order: usize) -> Expr {
        (0..order).fold(self.clone(), |e, _| e.differentiate())
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Unary(Func::Neg, _) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn pow(x: f64, p: f64) -> f64 {
    if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
        x.powi(p as i32)
    } else {
        x.powf(p)
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    if c.is_sign_negative() {
        write!(f, "(-{})", -c)
    } else {
        write!(f, "{c}")
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints the tree so that parsing the text reproduces it.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write_number(f, *c),
            Expr::Var => f.write_str("t"),
            Expr::Unary(Func::Neg, a) => {
                f.write_str("-")?;
                write_child(f, a, a.precedence() < 3)
            }
            Expr::Unary(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Binary(op, a, b) => {
                let p = self.precedence();
                write_child(f, a, a.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                write_child(f, b, b.precedence() <= p)
            }
            Expr::Pow(a, p) => {
                write_child(f, a, a.precedence() <= 4)?;
                f.write_str("^")?;
                write_number(f, *p)
            }
        }
    }
}
