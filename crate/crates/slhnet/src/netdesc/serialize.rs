use std::fmt::Write;

use super::ast::{BinOp, Expr, Func, MatrixLit, ModelDocument};

/// Canonical text form: clauses in grammar order, expressions fully
/// parenthesized, `<|` for the cascade operator, analysis settings explicit.
/// Output of `parse` reparses to a structurally equal document.
pub fn serialize(doc: &ModelDocument) -> String {
    let mut out = String::new();
    for p in doc.params.values() {
        writeln!(
            out,
            "param {} nominal {} in [{}, {}] grid {}",
            p.name, p.nominal, p.lo, p.hi, p.grid_points
        )
        .expect("string write");
    }
    for c in doc.components.values() {
        writeln!(
            out,
            "component {} modes {} channels {} {{",
            c.name, c.n_modes, c.n_channels
        )
        .expect("string write");
        writeln!(out, "  S = {}", matrix_text(&c.s)).expect("string write");
        writeln!(out, "  Cminus = {}", matrix_text(&c.c_minus)).expect("string write");
        for (field, lit) in [
            ("Cplus", &c.c_plus),
            ("Hminus", &c.h_minus),
            ("Hplus", &c.h_plus),
        ] {
            if let Some(lit) = lit {
                writeln!(out, "  {field} = {}", matrix_text(lit)).expect("string write");
            }
        }
        out.push_str("}\n");
    }
    writeln!(out, "cascade {}", doc.cascade.join(" <| ")).expect("string write");
    let mut analysis = format!("analysis {{ tol = {}", doc.analysis.tol);
    if let Some(eta) = doc.analysis.eta {
        write!(analysis, " eta = {eta}").expect("string write");
    }
    write!(analysis, " sweep_points = {} }}", doc.analysis.sweep_points).expect("string write");
    out.push_str(&analysis);
    out.push('\n');
    out
}

fn matrix_text(m: &MatrixLit) -> String {
    match m {
        MatrixLit::Identity { size, .. } => format!("I({size})"),
        MatrixLit::Rows { rows, .. } => {
            let body = rows
                .iter()
                .map(|row| {
                    row.iter().map(expr_text).collect::<Vec<_>>().join(", ")
                })
                .collect::<Vec<_>>()
                .join("; ");
            format!("[{body}]")
        }
    }
}

fn expr_text(e: &Expr) -> String {
    match e {
        Expr::Number { value, .. } => format!("{value}"),
        Expr::Imag { .. } => "i".into(),
        Expr::Param { name, .. } => name.clone(),
        Expr::Neg { inner, .. } => format!("(-{})", expr_text(inner)),
        Expr::Binary { op, lhs, rhs, .. } => {
            let sym = match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "*",
                BinOp::Div => "/",
            };
            format!("({} {sym} {})", expr_text(lhs), expr_text(rhs))
        }
        Expr::Call { func, arg, .. } => {
            let name = match func {
                Func::Sqrt => "sqrt",
                Func::Conj => "conj",
            };
            format!("{name}({})", expr_text(arg))
        }
    }
}
