use std::fmt;

use indexmap::IndexMap;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Loc {
    pub line: u32,
    pub col: u32,
}

impl Loc {
    pub fn new(line: u32, col: u32) -> Self {
        Loc { line, col }
    }
}

/// Positioned parse or validation message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl Diagnostic {
    pub fn new(loc: Loc, message: impl Into<String>) -> Self {
        Diagnostic { line: loc.line, col: loc.col, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Conj,
}

/// Arithmetic expression over parameters. Locations are carried for error
/// reporting; structural equality ignores them.
#[derive(Debug, Clone)]
pub enum Expr {
    Number { value: f64, loc: Loc },
    Imag { loc: Loc },
    Param { name: String, loc: Loc },
    Neg { inner: Box<Expr>, loc: Loc },
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr>, loc: Loc },
    Call { func: Func, arg: Box<Expr>, loc: Loc },
}

impl Expr {
    pub fn loc(&self) -> Loc {
        match self {
            Expr::Number { loc, .. }
            | Expr::Imag { loc }
            | Expr::Param { loc, .. }
            | Expr::Neg { loc, .. }
            | Expr::Binary { loc, .. }
            | Expr::Call { loc, .. } => *loc,
        }
    }

    pub fn structurally_equal(&self, other: &Expr) -> bool {
        match (self, other) {
            (Expr::Number { value: a, .. }, Expr::Number { value: b, .. }) => a == b,
            (Expr::Imag { .. }, Expr::Imag { .. }) => true,
            (Expr::Param { name: a, .. }, Expr::Param { name: b, .. }) => a == b,
            (Expr::Neg { inner: a, .. }, Expr::Neg { inner: b, .. }) => a.structurally_equal(b),
            (
                Expr::Binary { op: oa, lhs: la, rhs: ra, .. },
                Expr::Binary { op: ob, lhs: lb, rhs: rb, .. },
            ) => oa == ob && la.structurally_equal(lb) && ra.structurally_equal(rb),
            (Expr::Call { func: fa, arg: aa, .. }, Expr::Call { func: fb, arg: ab, .. }) => {
                fa == fb && aa.structurally_equal(ab)
            }
            _ => false,
        }
    }

    /// Collect every parameter reference with its position.
    pub fn referenced_params(&self, out: &mut Vec<(String, Loc)>) {
        match self {
            Expr::Number { .. } | Expr::Imag { .. } => {}
            Expr::Param { name, loc } => out.push((name.clone(), *loc)),
            Expr::Neg { inner, .. } => inner.referenced_params(out),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.referenced_params(out);
                rhs.referenced_params(out);
            }
            Expr::Call { arg, .. } => arg.referenced_params(out),
        }
    }
}

/// Matrix-valued field: explicit rows or an identity shorthand.
#[derive(Debug, Clone)]
pub enum MatrixLit {
    Identity { size: usize, loc: Loc },
    Rows { rows: Vec<Vec<Expr>>, loc: Loc },
}

impl MatrixLit {
    pub fn loc(&self) -> Loc {
        match self {
            MatrixLit::Identity { loc, .. } | MatrixLit::Rows { loc, .. } => *loc,
        }
    }

    /// (rows, cols); parse guarantees rows are non-empty and rectangular.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            MatrixLit::Identity { size, .. } => (*size, *size),
            MatrixLit::Rows { rows, .. } => (rows.len(), rows[0].len()),
        }
    }

    pub fn structurally_equal(&self, other: &MatrixLit) -> bool {
        match (self, other) {
            (MatrixLit::Identity { size: a, .. }, MatrixLit::Identity { size: b, .. }) => a == b,
            (MatrixLit::Rows { rows: a, .. }, MatrixLit::Rows { rows: b, .. }) => {
                a.len() == b.len()
                    && a.iter().zip(b).all(|(ra, rb)| {
                        ra.len() == rb.len()
                            && ra.iter().zip(rb).all(|(x, y)| x.structurally_equal(y))
                    })
            }
            _ => false,
        }
    }

    pub fn referenced_params(&self, out: &mut Vec<(String, Loc)>) {
        if let MatrixLit::Rows { rows, .. } = self {
            for row in rows {
                for e in row {
                    e.referenced_params(out);
                }
            }
        }
    }
}

/// Uncertain parameter: nominal value, admissible interval, grid resolution.
#[derive(Debug, Clone)]
pub struct ParamSpec {
    pub name: String,
    pub nominal: f64,
    pub lo: f64,
    pub hi: f64,
    pub grid_points: usize,
    pub loc: Loc,
}

impl ParamSpec {
    pub fn structurally_equal(&self, other: &ParamSpec) -> bool {
        self.name == other.name
            && self.nominal == other.nominal
            && self.lo == other.lo
            && self.hi == other.hi
            && self.grid_points == other.grid_points
    }
}

/// One SLH component: declared sizes plus matrix-valued fields. Optional
/// fields default to zero matrices of the declared shape.
#[derive(Debug, Clone)]
pub struct ComponentDecl {
    pub name: String,
    pub n_modes: usize,
    pub n_channels: usize,
    pub s: MatrixLit,
    pub c_minus: MatrixLit,
    pub c_plus: Option<MatrixLit>,
    pub h_minus: Option<MatrixLit>,
    pub h_plus: Option<MatrixLit>,
    pub loc: Loc,
}

impl ComponentDecl {
    pub fn structurally_equal(&self, other: &ComponentDecl) -> bool {
        fn opt_eq(a: &Option<MatrixLit>, b: &Option<MatrixLit>) -> bool {
            match (a, b) {
                (None, None) => true,
                (Some(x), Some(y)) => x.structurally_equal(y),
                _ => false,
            }
        }
        self.name == other.name
            && self.n_modes == other.n_modes
            && self.n_channels == other.n_channels
            && self.s.structurally_equal(&other.s)
            && self.c_minus.structurally_equal(&other.c_minus)
            && opt_eq(&self.c_plus, &other.c_plus)
            && opt_eq(&self.h_minus, &other.h_minus)
            && opt_eq(&self.h_plus, &other.h_plus)
    }
}

/// Analysis settings; every field has a default so the block is optional.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub tol: f64,
    pub eta: Option<f64>,
    pub sweep_points: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { tol: 1e-8, eta: None, sweep_points: 2048 }
    }
}

/// Parsed network description.
#[derive(Debug, Clone)]
pub struct ModelDocument {
    pub params: IndexMap<String, ParamSpec>,
    pub components: IndexMap<String, ComponentDecl>,
    pub cascade: Vec<String>,
    pub analysis: AnalysisConfig,
}

impl ModelDocument {
    /// Equality up to source locations; used for round-trip checks.
    pub fn structurally_equal(&self, other: &ModelDocument) -> bool {
        self.params.len() == other.params.len()
            && self
                .params
                .values()
                .zip(other.params.values())
                .all(|(a, b)| a.structurally_equal(b))
            && self.components.len() == other.components.len()
            && self
                .components
                .values()
                .zip(other.components.values())
                .all(|(a, b)| a.structurally_equal(b))
            && self.cascade == other.cascade
            && self.analysis == other.analysis
    }
}
