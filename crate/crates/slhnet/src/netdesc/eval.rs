use std::collections::HashMap;

use super::ast::{BinOp, Expr, Func, MatrixLit};
use crate::error::{Error, Result};
use crate::linalg::{identity, CMat, C64};

/// Evaluate an expression under real-valued parameter bindings.
pub fn eval_expr(e: &Expr, bindings: &HashMap<String, f64>) -> Result<C64> {
    match e {
        Expr::Number { value, .. } => Ok(C64::new(*value, 0.0)),
        Expr::Imag { .. } => Ok(C64::new(0.0, 1.0)),
        Expr::Param { name, loc } => bindings.get(name).map(|v| C64::new(*v, 0.0)).ok_or_else(|| {
            Error::Eval {
                line: loc.line,
                col: loc.col,
                message: format!("unbound parameter '{name}'"),
            }
        }),
        Expr::Neg { inner, .. } => Ok(-eval_expr(inner, bindings)?),
        Expr::Binary { op, lhs, rhs, loc } => {
            let a = eval_expr(lhs, bindings)?;
            let b = eval_expr(rhs, bindings)?;
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div => {
                    if b.norm() == 0.0 {
                        Err(Error::Eval {
                            line: loc.line,
                            col: loc.col,
                            message: "division by zero".into(),
                        })
                    } else {
                        Ok(a / b)
                    }
                }
            }
        }
        Expr::Call { func, arg, .. } => {
            let z = eval_expr(arg, bindings)?;
            match func {
                // Pin the branch for negative reals regardless of the sign
                // of a zero imaginary part.
                Func::Sqrt => {
                    if z.im == 0.0 && z.re < 0.0 {
                        Ok(C64::new(0.0, (-z.re).sqrt()))
                    } else {
                        Ok(z.sqrt())
                    }
                }
                Func::Conj => Ok(z.conj()),
            }
        }
    }
}

/// Evaluate a matrix literal entrywise.
pub fn eval_matrix(m: &MatrixLit, bindings: &HashMap<String, f64>) -> Result<CMat> {
    match m {
        MatrixLit::Identity { size, .. } => Ok(identity(*size)),
        MatrixLit::Rows { rows, .. } => {
            let (r, c) = (rows.len(), rows[0].len());
            let mut out = CMat::zeros((r, c));
            for (ri, row) in rows.iter().enumerate() {
                for (ci, e) in row.iter().enumerate() {
                    out[(ri, ci)] = eval_expr(e, bindings)?;
                }
            }
            Ok(out)
        }
    }
}
