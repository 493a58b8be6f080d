use indexmap::IndexMap;

use super::ast::{
    AnalysisConfig, BinOp, ComponentDecl, Diagnostic, Expr, Func, Loc, MatrixLit, ModelDocument,
    ParamSpec,
};
use super::lexer::{lex, Tok, Token};

/// Largest allowed Cartesian grid over all parameters.
pub const GRID_CAP: u128 = 1_000_000;

const BUILTIN_NAMES: [&str; 4] = ["i", "I", "sqrt", "conj"];

/// Parse a network description. On failure returns positioned diagnostics:
/// a single entry for the first syntax error, or the full list of semantic
/// problems when the text is grammatically well formed.
pub fn parse(text: &str) -> std::result::Result<ModelDocument, Vec<Diagnostic>> {
    let tokens = lex(text).map_err(|d| vec![d])?;
    let mut p = Parser { tokens, pos: 0, semantic: Vec::new() };
    match p.document() {
        Ok(doc) if p.semantic.is_empty() => Ok(doc),
        Ok(_) => Err(p.semantic),
        Err(d) => Err(vec![d]),
    }
}

type Syntax<T> = std::result::Result<T, Diagnostic>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    semantic: Vec<Diagnostic>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_ident(&self) -> Option<&str> {
        match &self.peek().tok {
            Tok::Ident(s) => Some(s.as_str()),
            _ => None,
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Syntax<Token> {
        if &self.peek().tok == want {
            Ok(self.bump())
        } else {
            let t = self.peek();
            Err(Diagnostic::new(t.loc, format!("expected {what}, found {}", t.tok.describe())))
        }
    }

    fn expect_name(&mut self, what: &str) -> Syntax<(String, Loc)> {
        let t = self.peek();
        match &t.tok {
            Tok::Ident(s) => {
                let out = (s.clone(), t.loc);
                self.bump();
                Ok(out)
            }
            other => Err(Diagnostic::new(
                t.loc,
                format!("expected {what}, found {}", other.describe()),
            )),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Syntax<Loc> {
        let t = self.peek();
        match &t.tok {
            Tok::Ident(s) if s == kw => {
                let loc = t.loc;
                self.bump();
                Ok(loc)
            }
            other => Err(Diagnostic::new(
                t.loc,
                format!("expected '{kw}', found {}", other.describe()),
            )),
        }
    }

    fn signed_number(&mut self) -> Syntax<(f64, Loc)> {
        let loc = self.peek().loc;
        let negate = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().tok {
            Tok::Number(v) => {
                self.bump();
                Ok((if negate { -v } else { v }, loc))
            }
            ref other => Err(Diagnostic::new(
                self.peek().loc,
                format!("expected a number, found {}", other.describe()),
            )),
        }
    }

    fn integer(&mut self, what: &str) -> Syntax<(usize, Loc)> {
        let t = self.peek();
        match t.tok {
            Tok::Number(v) if v.fract() == 0.0 && (0.0..=1e15).contains(&v) => {
                let loc = t.loc;
                self.bump();
                Ok((v as usize, loc))
            }
            ref other => Err(Diagnostic::new(
                t.loc,
                format!("expected {what} (nonnegative integer), found {}", other.describe()),
            )),
        }
    }

    fn document(&mut self) -> Syntax<ModelDocument> {
        let mut params: IndexMap<String, ParamSpec> = IndexMap::new();
        let mut components: IndexMap<String, ComponentDecl> = IndexMap::new();
        let mut cascades: Vec<(Vec<String>, Loc)> = Vec::new();
        let mut analyses: Vec<(AnalysisConfig, Loc)> = Vec::new();
        let mut items = 0usize;
        loop {
            match self.peek_ident() {
                Some("param") => self.param(&mut params)?,
                Some("component") => self.component(&mut components)?,
                Some("cascade") => cascades.push(self.cascade()?),
                Some("analysis") => analyses.push(self.analysis()?),
                _ => {
                    if self.peek().tok == Tok::Eof && items > 0 {
                        break;
                    }
                    return Err(Diagnostic::new(
                        self.peek().loc,
                        "expected 'param', 'component', 'cascade', or 'analysis'",
                    ));
                }
            }
            items += 1;
        }
        self.validate(&params, &components, &cascades, &analyses);
        let cascade = cascades.into_iter().next().map(|(names, _)| names).unwrap_or_default();
        let analysis = analyses.into_iter().next().map(|(a, _)| a).unwrap_or_default();
        Ok(ModelDocument { params, components, cascade, analysis })
    }

    /// `param <name>` followed by `nominal`, `in`, `grid` clauses in any order.
    fn param(&mut self, params: &mut IndexMap<String, ParamSpec>) -> Syntax<()> {
        let stmt_loc = self.expect_keyword("param")?;
        let (name, name_loc) = self.expect_name("a parameter name")?;
        let mut nominal: Option<(f64, Loc)> = None;
        let mut interval: Option<(f64, f64, Loc)> = None;
        let mut grid: Option<(usize, Loc)> = None;
        loop {
            match self.peek_ident() {
                Some("nominal") => {
                    let loc = self.bump().loc;
                    let (v, _) = self.signed_number()?;
                    if nominal.replace((v, loc)).is_some() {
                        self.semantic.push(Diagnostic::new(
                            loc,
                            format!("duplicate 'nominal' clause for parameter '{name}'"),
                        ));
                    }
                }
                Some("in") => {
                    let loc = self.bump().loc;
                    self.expect(&Tok::LBracket, "'['")?;
                    let (lo, _) = self.signed_number()?;
                    self.expect(&Tok::Comma, "','")?;
                    let (hi, _) = self.signed_number()?;
                    self.expect(&Tok::RBracket, "']'")?;
                    if interval.replace((lo, hi, loc)).is_some() {
                        self.semantic.push(Diagnostic::new(
                            loc,
                            format!("duplicate 'in' clause for parameter '{name}'"),
                        ));
                    }
                }
                Some("grid") => {
                    let loc = self.bump().loc;
                    let (g, g_loc) = self.integer("a grid size")?;
                    if g < 1 {
                        self.semantic
                            .push(Diagnostic::new(g_loc, "grid must be at least 1".to_string()));
                    }
                    if grid.replace((g, loc)).is_some() {
                        self.semantic.push(Diagnostic::new(
                            loc,
                            format!("duplicate 'grid' clause for parameter '{name}'"),
                        ));
                    }
                }
                _ => break,
            }
        }
        if BUILTIN_NAMES.contains(&name.as_str()) {
            self.semantic.push(Diagnostic::new(
                name_loc,
                format!("parameter '{name}' shadows a builtin name"),
            ));
            return Ok(());
        }
        let (Some((nom, nom_loc)), Some((lo, hi, int_loc))) = (nominal, interval) else {
            if nominal.is_none() {
                self.semantic.push(Diagnostic::new(
                    stmt_loc,
                    format!("parameter '{name}' is missing a 'nominal' clause"),
                ));
            }
            if interval.is_none() {
                self.semantic.push(Diagnostic::new(
                    stmt_loc,
                    format!("parameter '{name}' is missing an 'in' interval clause"),
                ));
            }
            return Ok(());
        };
        if lo > hi {
            self.semantic.push(Diagnostic::new(
                int_loc,
                format!("interval lower bound {lo} exceeds upper bound {hi}"),
            ));
            return Ok(());
        }
        if nom < lo || nom > hi {
            self.semantic.push(Diagnostic::new(
                nom_loc,
                format!("nominal {nom} outside interval [{lo}, {hi}]"),
            ));
            return Ok(());
        }
        let spec = ParamSpec {
            name: name.clone(),
            nominal: nom,
            lo,
            hi,
            grid_points: grid.map(|(g, _)| g.max(1)).unwrap_or(1),
            loc: stmt_loc,
        };
        if params.insert(name.clone(), spec).is_some() {
            self.semantic
                .push(Diagnostic::new(name_loc, format!("duplicate parameter '{name}'")));
        }
        Ok(())
    }

    fn component(&mut self, components: &mut IndexMap<String, ComponentDecl>) -> Syntax<()> {
        let stmt_loc = self.expect_keyword("component")?;
        let (name, name_loc) = self.expect_name("a component name")?;
        self.expect_keyword("modes")?;
        let (n_modes, n_loc) = self.integer("a mode count")?;
        self.expect_keyword("channels")?;
        let (n_channels, m_loc) = self.integer("a channel count")?;
        if n_modes == 0 {
            self.semantic.push(Diagnostic::new(n_loc, "modes must be at least 1".to_string()));
        }
        if n_channels == 0 {
            self.semantic
                .push(Diagnostic::new(m_loc, "channels must be at least 1".to_string()));
        }
        self.expect(&Tok::LBrace, "'{'")?;
        let mut fields: [Option<MatrixLit>; 5] = [None, None, None, None, None];
        const FIELD_NAMES: [&str; 5] = ["S", "Cminus", "Cplus", "Hminus", "Hplus"];
        loop {
            if self.peek().tok == Tok::RBrace {
                self.bump();
                break;
            }
            let Some(word) = self.peek_ident() else {
                return Err(Diagnostic::new(
                    self.peek().loc,
                    format!(
                        "expected 'S', 'Cminus', 'Cplus', 'Hminus', 'Hplus', or '}}', found {}",
                        self.peek().tok.describe()
                    ),
                ));
            };
            let Some(idx) = FIELD_NAMES.iter().position(|f| *f == word) else {
                return Err(Diagnostic::new(
                    self.peek().loc,
                    format!("expected 'S', 'Cminus', 'Cplus', 'Hminus', 'Hplus', or '}}', found '{word}'"),
                ));
            };
            let field_loc = self.bump().loc;
            self.expect(&Tok::Eq, "'='")?;
            let lit = self.matrix_lit(idx == 0)?;
            if fields[idx].replace(lit).is_some() {
                self.semantic.push(Diagnostic::new(
                    field_loc,
                    format!("duplicate field '{}' in component '{name}'", FIELD_NAMES[idx]),
                ));
            }
        }
        let [s, c_minus, c_plus, h_minus, h_plus] = fields;
        let (Some(s), Some(c_minus)) = (s, c_minus) else {
            self.semantic.push(Diagnostic::new(
                stmt_loc,
                format!("component '{name}' must declare both 'S' and 'Cminus'"),
            ));
            return Ok(());
        };
        // Shape checks against the declared sizes.
        let m = n_channels;
        let n = n_modes;
        let mut check = |lit: &MatrixLit, field: &str, want: (usize, usize)| {
            let got = lit.shape();
            if got != want {
                self.semantic.push(Diagnostic::new(
                    lit.loc(),
                    format!(
                        "{field} must be {}x{}, got {}x{}",
                        want.0, want.1, got.0, got.1
                    ),
                ));
            }
        };
        check(&s, "S", (m, m));
        check(&c_minus, "Cminus", (m, n));
        if let Some(ref lit) = c_plus {
            check(lit, "Cplus", (m, n));
        }
        if let Some(ref lit) = h_minus {
            check(lit, "Hminus", (n, n));
        }
        if let Some(ref lit) = h_plus {
            check(lit, "Hplus", (n, n));
        }
        let decl = ComponentDecl {
            name: name.clone(),
            n_modes,
            n_channels,
            s,
            c_minus,
            c_plus,
            h_minus,
            h_plus,
            loc: stmt_loc,
        };
        if components.insert(name.clone(), decl).is_some() {
            self.semantic
                .push(Diagnostic::new(name_loc, format!("duplicate component '{name}'")));
        }
        Ok(())
    }

    fn cascade(&mut self) -> Syntax<(Vec<String>, Loc)> {
        let loc = self.expect_keyword("cascade")?;
        let (first, _) = self.expect_name("a component name")?;
        let mut names = vec![first];
        while self.peek().tok == Tok::Cascade {
            self.bump();
            let (next, _) = self.expect_name("a component name")?;
            names.push(next);
        }
        Ok((names, loc))
    }

    fn analysis(&mut self) -> Syntax<(AnalysisConfig, Loc)> {
        let loc = self.expect_keyword("analysis")?;
        self.expect(&Tok::LBrace, "'{'")?;
        let mut cfg = AnalysisConfig::default();
        let mut seen = [false; 3];
        loop {
            if self.peek().tok == Tok::RBrace {
                self.bump();
                break;
            }
            let Some(word) = self.peek_ident().map(str::to_owned) else {
                return Err(Diagnostic::new(
                    self.peek().loc,
                    format!(
                        "expected 'tol', 'eta', 'sweep_points', or '}}', found {}",
                        self.peek().tok.describe()
                    ),
                ));
            };
            let field_loc = self.peek().loc;
            match word.as_str() {
                "tol" => {
                    self.bump();
                    self.expect(&Tok::Eq, "'='")?;
                    let (v, v_loc) = self.signed_number()?;
                    if v <= 0.0 {
                        self.semantic
                            .push(Diagnostic::new(v_loc, format!("tol must be positive, got {v}")));
                    }
                    if seen[0] {
                        self.semantic
                            .push(Diagnostic::new(field_loc, "duplicate 'tol' setting".to_string()));
                    }
                    seen[0] = true;
                    cfg.tol = v;
                }
                "eta" => {
                    self.bump();
                    self.expect(&Tok::Eq, "'='")?;
                    let (v, v_loc) = self.signed_number()?;
                    if v < 0.0 {
                        self.semantic.push(Diagnostic::new(
                            v_loc,
                            format!("eta must be nonnegative, got {v}"),
                        ));
                    }
                    if seen[1] {
                        self.semantic
                            .push(Diagnostic::new(field_loc, "duplicate 'eta' setting".to_string()));
                    }
                    seen[1] = true;
                    cfg.eta = Some(v);
                }
                "sweep_points" => {
                    self.bump();
                    self.expect(&Tok::Eq, "'='")?;
                    let (v, v_loc) = self.integer("a point count")?;
                    if v < 1 {
                        self.semantic.push(Diagnostic::new(
                            v_loc,
                            "sweep_points must be at least 1".to_string(),
                        ));
                    }
                    if seen[2] {
                        self.semantic.push(Diagnostic::new(
                            field_loc,
                            "duplicate 'sweep_points' setting".to_string(),
                        ));
                    }
                    seen[2] = true;
                    cfg.sweep_points = v;
                }
                other => {
                    return Err(Diagnostic::new(
                        field_loc,
                        format!("expected 'tol', 'eta', 'sweep_points', or '}}', found '{other}'"),
                    ));
                }
            }
        }
        Ok((cfg, loc))
    }

    /// `I(k)` (where permitted) or `[expr, ...; ...]`.
    fn matrix_lit(&mut self, allow_identity: bool) -> Syntax<MatrixLit> {
        if allow_identity && self.peek_ident() == Some("I") {
            let loc = self.bump().loc;
            self.expect(&Tok::LParen, "'('")?;
            let (size, _) = self.integer("an identity size")?;
            self.expect(&Tok::RParen, "')'")?;
            return Ok(MatrixLit::Identity { size, loc });
        }
        let open = self.expect(&Tok::LBracket, "'['")?;
        let loc = open.loc;
        let mut rows: Vec<Vec<Expr>> = Vec::new();
        loop {
            let mut row = vec![self.expr()?];
            while self.peek().tok == Tok::Comma {
                self.bump();
                row.push(self.expr()?);
            }
            rows.push(row);
            match self.peek().tok {
                Tok::Semi => {
                    self.bump();
                }
                Tok::RBracket => {
                    self.bump();
                    break;
                }
                ref other => {
                    return Err(Diagnostic::new(
                        self.peek().loc,
                        format!("expected ',', ';', or ']', found {}", other.describe()),
                    ));
                }
            }
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Diagnostic::new(loc, "matrix rows have inconsistent lengths"));
        }
        Ok(MatrixLit::Rows { rows, loc })
    }

    fn expr(&mut self) -> Syntax<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            let loc = self.bump().loc;
            let rhs = self.term()?;
            lhs = Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs), loc };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Syntax<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            let loc = self.bump().loc;
            let rhs = self.factor()?;
            lhs = Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs), loc };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Syntax<Expr> {
        let loc = self.peek().loc;
        match self.peek().tok.clone() {
            Tok::Number(value) => {
                self.bump();
                Ok(Expr::Number { value, loc })
            }
            Tok::Minus => {
                self.bump();
                let inner = self.factor()?;
                Ok(Expr::Neg { inner: Box::new(inner), loc })
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "i" => Ok(Expr::Imag { loc }),
                    "sqrt" | "conj" => {
                        let func = if name == "sqrt" { Func::Sqrt } else { Func::Conj };
                        self.expect(&Tok::LParen, "'('")?;
                        let arg = self.expr()?;
                        self.expect(&Tok::RParen, "')'")?;
                        Ok(Expr::Call { func, arg: Box::new(arg), loc })
                    }
                    _ => Ok(Expr::Param { name, loc }),
                }
            }
            other => Err(Diagnostic::new(
                loc,
                format!(
                    "expected a number, 'i', a parameter name, '(', or '-', found {}",
                    other.describe()
                ),
            )),
        }
    }

    /// Whole-document checks that need every declaration in scope.
    fn validate(
        &mut self,
        params: &IndexMap<String, ParamSpec>,
        components: &IndexMap<String, ComponentDecl>,
        cascades: &[(Vec<String>, Loc)],
        analyses: &[(AnalysisConfig, Loc)],
    ) {
        let total: u128 = params.values().map(|p| p.grid_points as u128).product();
        if total > GRID_CAP {
            let loc = params.values().next().map(|p| p.loc).unwrap_or(Loc::new(1, 1));
            self.semantic.push(Diagnostic::new(
                loc,
                format!("parameter grid has {total} points, exceeding the cap of {GRID_CAP}"),
            ));
        }
        for comp in components.values() {
            let mut refs = Vec::new();
            comp.s.referenced_params(&mut refs);
            comp.c_minus.referenced_params(&mut refs);
            for lit in [&comp.c_plus, &comp.h_minus, &comp.h_plus].into_iter().flatten() {
                lit.referenced_params(&mut refs);
            }
            for (name, loc) in refs {
                if !params.contains_key(&name) {
                    self.semantic
                        .push(Diagnostic::new(loc, format!("unknown parameter '{name}'")));
                }
            }
        }
        if let Some(first) = components.values().next() {
            for comp in components.values().skip(1) {
                if comp.n_modes != first.n_modes || comp.n_channels != first.n_channels {
                    self.semantic.push(Diagnostic::new(
                        comp.loc,
                        format!(
                            "component '{}' declares modes {} channels {}, but component '{}' \
                             declares modes {} channels {}",
                            comp.name,
                            comp.n_modes,
                            comp.n_channels,
                            first.name,
                            first.n_modes,
                            first.n_channels
                        ),
                    ));
                }
            }
        }
        match cascades.len() {
            0 => self
                .semantic
                .push(Diagnostic::new(Loc::new(1, 1), "document declares no cascade")),
            1 => {}
            _ => self.semantic.push(Diagnostic::new(
                cascades[1].1,
                "duplicate cascade declaration",
            )),
        }
        for (names, loc) in cascades {
            for name in names {
                if !components.contains_key(name) {
                    self.semantic.push(Diagnostic::new(
                        *loc,
                        format!("cascade references undeclared component '{name}'"),
                    ));
                }
            }
        }
        if analyses.len() > 1 {
            self.semantic
                .push(Diagnostic::new(analyses[1].1, "duplicate analysis block"));
        }
    }
}
