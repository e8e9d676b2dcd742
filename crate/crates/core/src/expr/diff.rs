//! Symbolic differentiation.
//!
//! Only constant folding and 0/1 identities are applied while building the
//! result; no further simplification is attempted.

use super::{pow as pow_value, BinOp, Expr, Func};

fn as_const(e: &Expr) -> Option<f64> {
    match e {
        Expr::Const(c) => Some(*c),
        _ => None,
    }
}

fn folded(value: f64, fallback: Expr) -> Expr {
    if value.is_finite() {
        Expr::Const(value)
    } else {
        fallback
    }
}

fn unary(f: Func, a: Expr) -> Expr {
    if let Some(c) = as_const(&a) {
        return folded(f.apply(c), Expr::Unary(f, Box::new(a)));
    }
    Expr::Unary(f, Box::new(a))
}

fn neg(a: Expr) -> Expr {
    unary(Func::Neg, a)
}

fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
    let plain = |a, b| Expr::Binary(op, Box::new(a), Box::new(b));
    match (op, as_const(&a), as_const(&b)) {
        (BinOp::Div, _, Some(y)) if y == 0.0 => plain(a, b),
        (_, Some(x), Some(y)) => folded(op.apply(x, y), plain(a, b)),
        (BinOp::Add, Some(x), _) if x == 0.0 => b,
        (BinOp::Add | BinOp::Sub, _, Some(y)) if y == 0.0 => a,
        (BinOp::Sub, Some(x), _) if x == 0.0 => neg(b),
        (BinOp::Mul, Some(x), _) | (BinOp::Mul, _, Some(x)) if x == 0.0 => Expr::Const(0.0),
        (BinOp::Mul, Some(x), _) if x == 1.0 => b,
        (BinOp::Mul | BinOp::Div, _, Some(y)) if y == 1.0 => a,
        (BinOp::Div, Some(x), _) if x == 0.0 => Expr::Const(0.0),
        _ => plain(a, b),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    binary(BinOp::Add, a, b)
}

fn sub(a: Expr, b: Expr) -> Expr {
    binary(BinOp::Sub, a, b)
}

fn mul(a: Expr, b: Expr) -> Expr {
    binary(BinOp::Mul, a, b)
}

fn div(a: Expr, b: Expr) -> Expr {
    binary(BinOp::Div, a, b)
}

fn pow(a: Expr, p: f64) -> Expr {
    if p == 0.0 {
        return Expr::Const(1.0);
    }
    if p == 1.0 {
        return a;
    }
    if let Some(c) = as_const(&a) {
        return folded(pow_value(c, p), Expr::Pow(Box::new(a), p));
    }
    Expr::Pow(Box::new(a), p)
}

pub(super) fn derivative(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => Expr::Const(0.0),
        Expr::Var => Expr::Const(1.0),
        Expr::Unary(f, a) => {
            let da = derivative(a);
            if as_const(&da) == Some(0.0) {
                return Expr::Const(0.0);
            }
            let inner = (**a).clone();
            let outer = match f {
                Func::Neg => return neg(da),
                Func::Sin => unary(Func::Cos, inner),
                Func::Cos => neg(unary(Func::Sin, inner)),
                Func::Tan => return div(da, pow(unary(Func::Cos, inner), 2.0)),
                Func::Exp => unary(Func::Exp, inner),
                Func::Log => return div(da, inner),
                Func::Sqrt => {
                    return div(da, mul(Expr::Const(2.0), unary(Func::Sqrt, inner)));
                }
                // sign(u) written as u/|u| so the result stays in the node set
                Func::Abs => div(inner.clone(), unary(Func::Abs, inner)),
            };
            mul(outer, da)
        }
        Expr::Binary(op, a, b) => {
            let (da, db) = (derivative(a), derivative(b));
            let (a, b) = ((**a).clone(), (**b).clone());
            match op {
                BinOp::Add => add(da, db),
                BinOp::Sub => sub(da, db),
                BinOp::Mul => add(mul(da, b), mul(a, db)),
                BinOp::Div => div(sub(mul(da, b.clone()), mul(a, db)), pow(b, 2.0)),
            }
        }
        Expr::Pow(a, p) => {
            let da = derivative(a);
            mul(mul(Expr::Const(*p), pow((**a).clone(), p - 1.0)), da)
        }
    }
}
