//! Function-specification language: a recursive-descent parser, a
//! round-tripping pretty-printer and a tree-walking evaluator.
//!
//! Precedence from tightest: `^` (right associative), unary `−`, `* /`,
//! `+ −`. Positions in errors are 1-based character offsets, with line and
//! column alongside.

use std::fmt;

use radoncomp_core::special::{erf, legendre};
use radoncomp_core::Vec3;

/// Variables of the language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
    R,
    T,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::R => "r",
            Var::T => "t",
        }
    }
}

/// Named examples bound to their closed-form evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CatalogName {
    GaussR2,
    ErfType,
    ExpEll,
    CauchyEll,
    GammaQ,
}

impl CatalogName {
    pub const ALL: [CatalogName; 5] = [
        CatalogName::GaussR2,
        CatalogName::ErfType,
        CatalogName::ExpEll,
        CatalogName::CauchyEll,
        CatalogName::GammaQ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogName::GaussR2 => "gauss-r2",
            CatalogName::ErfType => "erf-type",
            CatalogName::ExpEll => "exp-ell",
            CatalogName::CauchyEll => "cauchy-ell",
            CatalogName::GammaQ => "gamma-q",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Allowed argument counts.
    fn arity(self) -> (usize, usize) {
        match self {
            CatalogName::GaussR2 => (0, 1),
            CatalogName::ErfType => (0, 2),
            CatalogName::ExpEll | CatalogName::CauchyEll => (0, 0),
            CatalogName::GammaQ => (1, 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Erf,
    Abs,
    Sqrt,
    /// `legendre(k, x)`: the Legendre polynomial of integer degree `k`.
    Legendre,
    /// `gauss(w)`: `exp(−(r/w)²)`.
    Gauss,
    /// `bump(a, b)`: smooth bump in `r` supported on `(a, b)`, peak 1.
    Bump,
    /// `ball(R, σ)`: indicator of the radius-`R` ball mollified by a
    /// Gaussian of standard deviation `σ`.
    Ball,
    Min,
    Max,
    Catalog(CatalogName),
}

impl Func {
    fn lookup(s: &str) -> Option<Self> {
        Some(match s {
            "exp" => Func::Exp,
            "erf" => Func::Erf,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "legendre" => Func::Legendre,
            "gauss" => Func::Gauss,
            "bump" => Func::Bump,
            "ball" => Func::Ball,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return CatalogName::from_name(s).map(Func::Catalog),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Erf => "erf",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Legendre => "legendre",
            Func::Gauss => "gauss",
            Func::Bump => "bump",
            Func::Ball => "ball",
            Func::Min => "min",
            Func::Max => "max",
            Func::Catalog(c) => c.name(),
        }
    }

    fn arity(self) -> (usize, usize) {
        match self {
            Func::Exp | Func::Erf | Func::Abs | Func::Sqrt | Func::Gauss => (1, 1),
            Func::Legendre | Func::Bump | Func::Ball => (2, 2),
            Func::Min | Func::Max => (2, usize::MAX),
            Func::Catalog(c) => c.arity(),
        }
    }

    /// Whether the function reads the radial coordinate implicitly.
    fn needs_space(self) -> bool {
        matches!(self, Func::Gauss | Func::Bump | Func::Ball | Func::Catalog(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        position: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown identifier '{name}' at line {line}, column {column}")]
    UnknownIdentifier {
        name: String,
        position: usize,
        line: usize,
        column: usize,
    },
    #[error("'{name}' takes {expected} argument(s), got {got} (line {line}, column {column})")]
    Arity {
        name: String,
        expected: String,
        got: usize,
        position: usize,
        line: usize,
        column: usize,
    },
    #[error("{0}")]
    Domain(String),
}

impl ExprError {
    /// 1-based character offset, when the error has one.
    pub fn position(&self) -> Option<usize> {
        match self {
            ExprError::Syntax { position, .. }
            | ExprError::UnknownIdentifier { position, .. }
            | ExprError::Arity { position, .. } => Some(*position),
            ExprError::Domain(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone, Copy)]
struct Loc {
    position: usize,
    line: usize,
    column: usize,
}

fn syntax(loc: Loc, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        position: loc.position,
        line: loc.line,
        column: loc.column,
        message: message.into(),
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(src: &str) -> Result<Vec<(Tok, Loc)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let loc = Loc {
            position: i + 1,
            line,
            column: col,
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text.parse().map_err(|_| syntax(loc, format!("malformed number '{text}'")))?;
            if !v.is_finite() {
                return Err(syntax(loc, format!("number '{text}' is out of range")));
            }
            out.push((Tok::Num(v), loc));
        } else if c.is_ascii_alphabetic() || c == '_' {
            // catalog names contain hyphens
            let rest: String = chars[i..].iter().collect();
            let catalog = CatalogName::ALL.into_iter().map(|n| n.name()).find(|n| {
                rest.starts_with(n) && !rest[n.len()..].chars().next().is_some_and(is_ident_char)
            });
            if let Some(name) = catalog {
                i += name.chars().count();
            } else {
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), loc));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => return Err(syntax(loc, format!("unexpected character '{c}'"))),
            };
            i += 1;
            out.push((tok, loc));
        }
        col += i - start;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Loc)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    /// Location of the current token, or of the last one at end of input.
    fn loc(&self) -> Loc {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, l)| *l)
            .unwrap_or(Loc {
                position: 1,
                line: 1,
                column: 1,
            })
    }

    fn unexpected(&self, wanted: &str) -> ExprError {
        match self.toks.get(self.pos) {
            Some((t, l)) => syntax(*l, format!("expected {wanted}, found {}", describe(t))),
            None => syntax(self.loc(), format!("expected {wanted}, found end of input")),
        }
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Some(Tok::Op(c)) if ops.contains(c) => {
                let c = *c;
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(c) = self.eat_op(&['+', '-']) {
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.eat_op(&['*', '/']) {
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat_op(&['-']).is_some() {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.eat_op(&['^']).is_some() {
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let Some((tok, loc)) = self.toks.get(self.pos).cloned() else {
            return Err(self.unexpected("an expression"));
        };
        match tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.unexpected("')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                self.identifier(&name, loc)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn identifier(&mut self, name: &str, loc: Loc) -> Result<Expr, ExprError> {
        let var = match name {
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "z" => Some(Var::Z),
            "r" => Some(Var::R),
            "t" => Some(Var::T),
            _ => None,
        };
        if let Some(v) = var {
            return Ok(Expr::Var(v));
        }
        if name == "pi" {
            return Ok(Expr::Pi);
        }
        let Some(func) = Func::lookup(name) else {
            return Err(ExprError::UnknownIdentifier {
                name: name.to_string(),
                position: loc.position,
                line: loc.line,
                column: loc.column,
            });
        };
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            if self.peek() != Some(&Tok::RParen) {
                loop {
                    args.push(self.expr()?);
                    match self.peek() {
                        Some(Tok::Comma) => self.pos += 1,
                        Some(Tok::RParen) => break,
                        _ => return Err(self.unexpected("',' or ')'")),
                    }
                }
            }
            self.pos += 1;
        } else if func.arity().0 > 0 {
            return Err(self.unexpected(&format!("'(' after '{name}'")));
        }
        let (lo, hi) = func.arity();
        if args.len() < lo || args.len() > hi {
            let expected = match (lo, hi) {
                (a, b) if a == b => a.to_string(),
                (a, usize::MAX) => format!("at least {a}"),
                (a, b) => format!("{a} to {b}"),
            };
            return Err(ExprError::Arity {
                name: name.to_string(),
                expected,
                got: args.len(),
                position: loc.position,
                line: loc.line,
                column: loc.column,
            });
        }
        Ok(Expr::Call(func, args))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Op(c) => format!("'{c}'"),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
    }
}

/// Parse an expression.
pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

/// Where an expression is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Angular factor on S²: `x, y, z` with `x² + y² + z² = 1`.
    Sphere,
    /// A function on R³: `x, y, z` and `r = |x|`.
    Space,
    /// Sinogram data: offset `t` and direction `x, y, z`.
    Sinogram,
}

impl Domain {
    fn allows(self, v: Var) -> bool {
        match self {
            Domain::Sphere => matches!(v, Var::X | Var::Y | Var::Z),
            Domain::Space => matches!(v, Var::X | Var::Y | Var::Z | Var::R),
            Domain::Sinogram => matches!(v, Var::X | Var::Y | Var::Z | Var::T),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Domain::Sphere => "an angular",
            Domain::Space => "a spatial",
            Domain::Sinogram => "a sinogram",
        }
    }
}

impl Expr {
    /// Value of a subtree free of variables and catalog entries.
    pub fn constant_value(&self) -> Option<f64> {
        if self.uses_vars() || self.has_catalog() || self.has_implicit_r() {
            return None;
        }
        Some(self.eval(&Env::default(), &|_, _, _| f64::NAN))
    }

    fn any(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Expr::Neg(a) => a.any(pred),
            Expr::Bin(_, a, b) => a.any(pred) || b.any(pred),
            Expr::Call(_, args) => args.iter().any(|a| a.any(pred)),
            _ => false,
        }
    }

    pub fn uses_var(&self, v: Var) -> bool {
        self.any(&|e| matches!(e, Expr::Var(w) if *w == v))
    }

    fn uses_vars(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Var(_)))
    }

    pub fn has_catalog(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Call(Func::Catalog(_), _)))
    }

    fn has_implicit_r(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Call(f, _) if f.needs_space()))
    }

    /// Whether the value depends on the point only through `|x|`.
    pub fn is_radial(&self) -> bool {
        !(self.uses_var(Var::X) || self.uses_var(Var::Y) || self.uses_var(Var::Z) || self.uses_var(Var::T))
    }

    /// Every catalog call with its constant arguments, in tree order.
    pub fn catalog_calls(&self) -> Vec<(CatalogName, Vec<f64>)> {
        let mut out = Vec::new();
        self.collect_catalog(&mut out);
        out
    }

    fn collect_catalog(&self, out: &mut Vec<(CatalogName, Vec<f64>)>) {
        match self {
            Expr::Neg(a) => a.collect_catalog(out),
            Expr::Bin(_, a, b) => {
                a.collect_catalog(out);
                b.collect_catalog(out);
            }
            Expr::Call(f, args) => {
                if let Func::Catalog(c) = f {
                    let vals: Vec<f64> = args.iter().map(|a| a.constant_value().unwrap_or(f64::NAN)).collect();
                    out.push((*c, vals));
                }
                for a in args {
                    a.collect_catalog(out);
                }
            }
            _ => {}
        }
    }

    /// Check variables and constant-argument rules for `domain`.
    pub fn check(&self, domain: Domain) -> Result<(), ExprError> {
        let mut err = None;
        self.check_inner(domain, &mut err);
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    fn check_inner(&self, domain: Domain, err: &mut Option<ExprError>) {
        if err.is_some() {
            return;
        }
        match self {
            Expr::Var(v) if !domain.allows(*v) => {
                *err = Some(ExprError::Domain(format!(
                    "variable '{}' is not available in {} expression",
                    v.name(),
                    domain.name()
                )));
            }
            Expr::Neg(a) => a.check_inner(domain, err),
            Expr::Bin(_, a, b) => {
                a.check_inner(domain, err);
                b.check_inner(domain, err);
            }
            Expr::Call(f, args) => {
                if f.needs_space() && domain != Domain::Space {
                    *err = Some(ExprError::Domain(format!(
                        "'{}' depends on r and is only available in spatial expressions",
                        f.name()
                    )));
                    return;
                }
                let constant_args: &[usize] = match f {
                    Func::Legendre => &[0],
                    Func::Gauss => &[0],
                    Func::Bump | Func::Ball => &[0, 1],
                    Func::Catalog(_) => &[0, 1],
                    _ => &[],
                };
                for &i in constant_args {
                    if let Some(a) = args.get(i) {
                        if a.constant_value().is_none() {
                            *err = Some(ExprError::Domain(format!(
                                "argument {} of '{}' must be a constant",
                                i + 1,
                                f.name()
                            )));
                            return;
                        }
                    }
                }
                if *f == Func::Legendre {
                    let k = args[0].constant_value().unwrap_or(f64::NAN);
                    if !(k >= 0.0 && k.fract() == 0.0 && k <= 1000.0) {
                        *err = Some(ExprError::Domain(format!(
                            "legendre degree must be an integer in [0, 1000], got {k}"
                        )));
                        return;
                    }
                }
                for a in args {
                    a.check_inner(domain, err);
                }
            }
            _ => {}
        }
    }

    /// Evaluate with `catalog(name, args, x)` supplying catalog entries.
    pub fn eval(&self, env: &Env, catalog: &dyn Fn(CatalogName, &[f64], &Vec3) -> f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Pi => std::f64::consts::PI,
            Expr::Var(v) => match v {
                Var::X => env.x,
                Var::Y => env.y,
                Var::Z => env.z,
                Var::R => env.r,
                Var::T => env.t,
            },
            Expr::Neg(a) => -a.eval(env, catalog),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(env, catalog), b.eval(env, catalog));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => pow(a, b),
                }
            }
            Expr::Call(f, args) => {
                let v: Vec<f64> = args.iter().map(|a| a.eval(env, catalog)).collect();
                match f {
                    Func::Exp => v[0].exp(),
                    Func::Erf => erf(v[0]),
                    Func::Abs => v[0].abs(),
                    Func::Sqrt => v[0].sqrt(),
                    Func::Legendre => legendre(v[0] as usize, v[1]),
                    Func::Gauss => (-(env.r / v[0]).powi(2)).exp(),
                    Func::Bump => bump(v[0], v[1], env.r),
                    Func::Ball => radoncomp_core::catalog::mollified_ball_profile(v[0], v[1], env.r),
                    Func::Min => v.iter().copied().fold(f64::INFINITY, f64::min),
                    Func::Max => v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    Func::Catalog(c) => catalog(*c, &v, &[env.x, env.y, env.z]),
                }
            }
        }
    }
}

/// Integer exponents go through `powi` so that `(-2)^3` stays real.
fn pow(a: f64, b: f64) -> f64 {
    if b.fract() == 0.0 && b.abs() <= i32::MAX as f64 {
        a.powi(b as i32)
    } else {
        a.powf(b)
    }
}

fn bump(a: f64, b: f64, r: f64) -> f64 {
    let s = (2.0 * r - a - b) / (b - a);
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

/// Evaluation point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Env {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub r: f64,
    pub t: f64,
}

impl Env {
    pub fn point(p: &Vec3) -> Self {
        Env {
            x: p[0],
            y: p[1],
            z: p[2],
            r: (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt(),
            t: 0.0,
        }
    }

    /// The point `r·e_z`.
    pub fn radius(r: f64) -> Self {
        Env {
            z: r,
            r,
            ..Env::default()
        }
    }
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(op, _, _) => op.prec(),
        Expr::Neg(_) => 3,
        _ => 5,
    }
}

impl Expr {
    fn write(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = prec(self) < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(v) => write!(f, "{v}")?,
            Expr::Pi => f.write_str("pi")?,
            Expr::Var(v) => f.write_str(v.name())?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write(f, 3)?;
            }
            Expr::Bin(op, a, b) => {
                let (l, r) = match op {
                    BinOp::Add | BinOp::Sub => (1, 2),
                    BinOp::Mul | BinOp::Div => (2, 3),
                    BinOp::Pow => (5, 3),
                };
                a.write(f, l)?;
                if *op == BinOp::Pow {
                    f.write_str("^")?;
                } else {
                    write!(f, " {} ", op.symbol())?;
                }
                b.write(f, r)?;
            }
            Expr::Call(func, args) => {
                f.write_str(func.name())?;
                if !args.is_empty() || !matches!(func, Func::Catalog(_)) {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        a.write(f, 0)?;
                    }
                    f.write_str(")")?;
                }
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Pretty-printing with minimal parentheses; the output reparses to an
/// identical tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}
