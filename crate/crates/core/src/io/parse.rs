//! Problem-file parser: `name = value;` statements with polynomial,
//! rational and series expressions over Q(i).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::gaussian::GaussianRational as GR;
use crate::manifold::DefiningSystem;
use crate::poly::{MultiPolynomial, RationalFunction, Table, TruncatedSeries, VariableTable};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn at(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError { line: pos.line, col: pos.col, msg: msg.into() }
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

fn lex(src: &str) -> PResult<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Int(s.parse().expect("digits")), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        if "+-*/^()=;,".contains(c) {
            out.push((Tok::Sym(c), pos));
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError::at(pos, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    I,
    Var(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// `base^(p/q)`, `q > 0`.
    Pow(Box<Expr>, i64, i64),
    Exp(Box<Expr>),
}

impl Expr {
    fn strip(&self) -> Expr {
        match self {
            Expr::Var(n, _) => Expr::Var(n.clone(), Pos::default()),
            Expr::Neg(a) => Expr::Neg(Box::new(a.strip())),
            Expr::Add(a, b) => Expr::Add(Box::new(a.strip()), Box::new(b.strip())),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.strip()), Box::new(b.strip())),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.strip()), Box::new(b.strip())),
            Expr::Div(a, b) => Expr::Div(Box::new(a.strip()), Box::new(b.strip())),
            Expr::Pow(a, p, q) => Expr::Pow(Box::new(a.strip()), *p, *q),
            Expr::Exp(a) => Expr::Exp(Box::new(a.strip())),
            e => e.clone(),
        }
    }

    /// Structural equality ignoring source positions.
    pub fn same_as(&self, o: &Expr) -> bool {
        self.strip() == o.strip()
    }

    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(n, _) => {
                if !out.contains(n) {
                    out.push(n.clone())
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _, _) | Expr::Exp(a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            _ => {}
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::I => write!(f, "i"),
            Expr::Var(n, _) => write!(f, "{n}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Pow(a, p, 1) if *p >= 0 => write!(f, "{a}^{p}"),
            Expr::Pow(a, p, q) => write!(f, "{a}^({p}/{q})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::at(self.pos(), format!("expected `{c}`, found {}", self.describe())))
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Int(n)) => format!("`{n}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let (p, q) = if self.eat('(') {
            let neg = self.eat('-');
            let p = self.small_int()?;
            let q = if self.eat('/') { self.small_int()? } else { 1 };
            self.expect(')')?;
            (if neg { -p } else { p }, q)
        } else {
            (self.small_int()?, 1)
        };
        if q == 0 {
            return Err(ParseError::at(pos, "zero exponent denominator"));
        }
        Ok(Expr::Pow(Box::new(base), p, q))
    }

    fn small_int(&mut self) -> PResult<i64> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                n.to_i64().filter(|v| *v <= 1 << 20).ok_or_else(|| ParseError::at(pos, "exponent too large"))
            }
            _ => Err(ParseError::at(pos, format!("expected an integer exponent, found {}", self.describe()))),
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Sym('(')) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.i += 1;
                if name == "i" {
                    return Ok(Expr::I);
                }
                if self.peek() == Some(&Tok::Sym('(')) {
                    self.i += 1;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return match name.as_str() {
                        "conj" => match arg {
                            Expr::Var(v, vp) => match v.strip_prefix('z').filter(|r| r.chars().all(|c| c.is_ascii_digit()) && !r.is_empty()) {
                                Some(idx) => Ok(Expr::Var(format!("zb{idx}"), vp)),
                                None => Err(ParseError::at(vp, format!("conj() expects a holomorphic coordinate zk, got `{v}`"))),
                            },
                            _ => Err(ParseError::at(pos, "conj() expects a single coordinate zk")),
                        },
                        "exp" => Ok(Expr::Exp(Box::new(arg))),
                        "sqrt" => Ok(Expr::Pow(Box::new(arg), 1, 2)),
                        _ => Err(ParseError::at(pos, format!("unknown function `{name}`"))),
                    };
                }
                Ok(Expr::Var(name, pos))
            }
            _ => Err(ParseError::at(pos, format!("expected an expression, found {}", self.describe()))),
        }
    }
}

fn parser(src: &str) -> PResult<Parser> {
    let toks = lex(src)?;
    let lines: Vec<&str> = src.split('\n').collect();
    let end = Pos { line: lines.len(), col: lines.last().map_or(0, |l| l.chars().count()) + 1 };
    Ok(Parser { toks, i: 0, end })
}

/// Parses a single expression.
pub fn parse_expr(src: &str) -> PResult<Expr> {
    let mut p = parser(src)?;
    let e = p.expr()?;
    if p.i < p.toks.len() {
        return Err(ParseError::at(p.pos(), format!("unexpected {}", p.describe())));
    }
    Ok(e)
}

fn lookup(table: &Table, name: &str, pos: Pos) -> PResult<usize> {
    table.position(name).ok_or_else(|| ParseError::at(pos, format!("undeclared variable `{name}`")))
}

/// Exact evaluation as a rational function. Fractional powers and `exp` are
/// rejected.
pub fn eval_rational(e: &Expr, table: &Table, at: Pos) -> PResult<RationalFunction> {
    let rec = |x: &Expr| eval_rational(x, table, at);
    Ok(match e {
        Expr::Num(n) => RationalFunction::constant(table, GR::from_real(num_rational::BigRational::from_integer(n.clone()))),
        Expr::I => RationalFunction::constant(table, GR::i()),
        Expr::Var(n, pos) => RationalFunction::from_polynomial(MultiPolynomial::var(table, lookup(table, n, *pos)?)),
        Expr::Neg(a) => rec(a)?.neg(),
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?),
        Expr::Div(a, b) => rec(a)?.div(&rec(b)?).map_err(|_| ParseError::at(at, "division by zero"))?,
        Expr::Pow(a, p, 1) => {
            let base = rec(a)?;
            if *p >= 0 {
                base.pow(*p as u32)
            } else {
                RationalFunction::constant(table, GR::one())
                    .div(&base.pow(p.unsigned_abs() as u32))
                    .map_err(|_| ParseError::at(at, "negative power of zero"))?
            }
        }
        Expr::Pow(_, _, _) => return Err(ParseError::at(at, "fractional power in a rational expression")),
        Expr::Exp(_) => return Err(ParseError::at(at, "exp() in a rational expression")),
    })
}

pub fn eval_polynomial(e: &Expr, table: &Table, at: Pos) -> PResult<MultiPolynomial> {
    eval_rational(e, table, at)?.as_polynomial().ok_or_else(|| ParseError::at(at, "expected a polynomial, found a quotient"))
}

/// Evaluation as a series at the origin of `table` to the given order.
pub fn eval_series(e: &Expr, table: &Table, order: u32, at: Pos) -> PResult<TruncatedSeries> {
    let rec = |x: &Expr| eval_series(x, table, order, at);
    let err = |m: String| ParseError::at(at, m);
    Ok(match e {
        Expr::Num(_) | Expr::I | Expr::Var(_, _) => eval_rational(e, table, at)?.to_series(order).map_err(|x| err(x.to_string()))?,
        Expr::Neg(a) => -&rec(a)?,
        Expr::Add(a, b) => &rec(a)? + &rec(b)?,
        Expr::Sub(a, b) => &rec(a)? - &rec(b)?,
        Expr::Mul(a, b) => &rec(a)? * &rec(b)?,
        Expr::Div(a, b) => rec(a)?.div(&rec(b)?).map_err(|x| err(x.to_string()))?,
        Expr::Pow(a, p, q) => {
            let base = rec(a)?;
            if *q == 1 && *p >= 0 {
                base.pow(*p as u32)
            } else if *q == 1 {
                base.inverse().map_err(|x| err(x.to_string()))?.pow(p.unsigned_abs() as u32)
            } else {
                let c = base.constant_term();
                if c.is_zero() || !c.is_real() || c.re().is_negative() {
                    return Err(err(format!("fractional power of a series with constant term {c}")));
                }
                let cinv = c.inv().expect("nonzero");
                let r = base.scale(&cinv).pow_ratio(*p, *q).map_err(|x| err(x.to_string()))?;
                if c.is_one() {
                    r
                } else {
                    let root = rational_root(&c, *p, *q).ok_or_else(|| err(format!("{c}^({p}/{q}) is not rational")))?;
                    r.scale(&root)
                }
            }
        }
        Expr::Exp(a) => rec(a)?.exp().map_err(|x| err(x.to_string()))?,
    })
}

/// `c^(p/q)` for a positive rational `c`, when rational.
fn rational_root(c: &GR, p: i64, q: i64) -> Option<GR> {
    let r = c.re();
    let root = |n: &BigInt| -> Option<BigInt> {
        let k = n.nth_root(q as u32);
        (k.pow(q as u32) == *n).then_some(k)
    };
    let num = root(r.numer())?;
    let den = root(r.denom())?;
    let base = GR::from_real(num_rational::BigRational::new(num, den));
    Some(if p >= 0 { base.pow(p as u32) } else { base.inv()?.pow(p.unsigned_abs() as u32) })
}

#[derive(Clone, Debug)]
pub enum Value {
    Expr(Expr),
    Tuple(Vec<Expr>),
}

#[derive(Clone, Debug)]
pub struct Statement {
    pub name: String,
    pub pos: Pos,
    pub value: Value,
}

pub fn parse_statements(src: &str) -> PResult<Vec<Statement>> {
    let mut p = parser(src)?;
    let mut out = Vec::new();
    while p.i < p.toks.len() {
        let pos = p.pos();
        let name = match p.peek().cloned() {
            Some(Tok::Ident(n)) => {
                p.i += 1;
                n
            }
            _ => return Err(ParseError::at(pos, format!("expected a statement name, found {}", p.describe()))),
        };
        p.expect('=')?;
        let value = if matches!(name.as_str(), "basepoint" | "vars" | "coeffs") {
            p.expect('(')?;
            let mut items = Vec::new();
            if !p.eat(')') {
                loop {
                    items.push(p.expr()?);
                    if p.eat(')') {
                        break;
                    }
                    p.expect(',')?;
                }
            }
            Value::Tuple(items)
        } else {
            Value::Expr(p.expr()?)
        };
        p.expect(';')?;
        out.push(Statement { name, pos, value });
    }
    Ok(out)
}

/// Contents of a `.crm` problem file (or a series file).
#[derive(Clone, Debug, Default)]
pub struct ProblemFile {
    pub n: Option<usize>,
    pub np: Option<usize>,
    pub rho: Vec<MultiPolynomial>,
    pub rhop: Vec<MultiPolynomial>,
    pub map: Vec<RationalFunction>,
    pub basepoint: Option<Vec<GR>>,
    pub order: Option<u32>,
    pub qmax: Option<u32>,
    pub kmax: Option<u32>,
    pub degree: Option<u32>,
    pub samples: Option<u32>,
    /// Function to analyse, with its variables.
    pub f: Option<Expr>,
    pub vars: Option<Vec<String>>,
    /// Explicit Taylor coefficients of a univariate series.
    pub coeffs: Option<Vec<GR>>,
    /// `coordinate` or `segre`.
    pub families: Option<String>,
}

fn indexed(name: &str, prefix: &str) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse::<usize>().ok().filter(|&k| k >= 1)
}

fn constant_of(e: &Expr, pos: Pos) -> PResult<GR> {
    let t = VariableTable::plain::<&str>(&[]);
    let r = eval_rational(e, &t, pos)?;
    r.as_polynomial().map(|p| p.constant_term()).ok_or_else(|| ParseError::at(pos, "expected a constant"))
}

fn small(e: &Expr, pos: Pos, what: &str) -> PResult<u32> {
    let c = constant_of(e, pos)?;
    if !c.is_real() || !c.re().is_integer() || c.re().is_negative() {
        return Err(ParseError::at(pos, format!("{what} must be a nonnegative integer")));
    }
    c.re().to_integer().to_u32().ok_or_else(|| ParseError::at(pos, format!("{what} too large")))
}

fn place<T: Clone>(v: &mut Vec<Option<T>>, k: usize, x: T, pos: Pos, name: &str) -> PResult<()> {
    if v.len() < k {
        v.resize(k, None);
    }
    if v[k - 1].is_some() {
        return Err(ParseError::at(pos, format!("`{name}` defined twice")));
    }
    v[k - 1] = Some(x);
    Ok(())
}

fn dense<T>(v: Vec<Option<T>>, prefix: &str, end: Pos) -> PResult<Vec<T>> {
    v.into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| ParseError::at(end, format!("`{prefix}{}` missing", i + 1))))
        .collect()
}

pub fn parse_input(src: &str) -> PResult<ProblemFile> {
    let stmts = parse_statements(src)?;
    let end = parser(src)?.end;
    let mut pf = ProblemFile::default();
    let as_expr = |s: &Statement| -> PResult<Expr> {
        match &s.value {
            Value::Expr(e) => Ok(e.clone()),
            Value::Tuple(_) => Err(ParseError::at(s.pos, format!("`{}` expects an expression", s.name))),
        }
    };
    // Dimensions first, so the order of statements does not matter.
    for s in &stmts {
        match s.name.as_str() {
            "n" => pf.n = Some(small(&as_expr(s)?, s.pos, "n")? as usize),
            "np" => pf.np = Some(small(&as_expr(s)?, s.pos, "np")? as usize),
            _ => {}
        }
    }
    let need = |d: Option<usize>, what: &str, pos: Pos| d.ok_or_else(|| ParseError::at(pos, format!("`{what}` must be declared")));
    let (mut rho, mut rhop, mut map) = (Vec::new(), Vec::new(), Vec::new());
    for s in &stmts {
        let name = s.name.as_str();
        if let Some(k) = indexed(name, "rhop") {
            let np = need(pf.np, "np", s.pos)?;
            let p = eval_polynomial(&as_expr(s)?, &VariableTable::complex(np), s.pos)?;
            place(&mut rhop, k, p, s.pos, name)?;
        } else if let Some(k) = indexed(name, "rho") {
            let n = need(pf.n, "n", s.pos)?;
            let p = eval_polynomial(&as_expr(s)?, &VariableTable::complex(n), s.pos)?;
            place(&mut rho, k, p, s.pos, name)?;
        } else if let Some(k) = indexed(name, "F") {
            let n = need(pf.n, "n", s.pos)?;
            let e = as_expr(s)?;
            if let Some(v) = e.variables().into_iter().find(|v| v.starts_with("zb")) {
                return Err(ParseError::at(s.pos, format!("map component depends on conjugate variable `{v}`")));
            }
            let r = eval_rational(&e, &VariableTable::complex(n), s.pos)?;
            place(&mut map, k, r, s.pos, name)?;
        } else {
            match name {
                "n" | "np" => {}
                "basepoint" | "vars" | "coeffs" => {
                    let Value::Tuple(items) = &s.value else { unreachable!("tuple statements parse as tuples") };
                    match name {
                        "basepoint" => pf.basepoint = Some(items.iter().map(|e| constant_of(e, s.pos)).collect::<PResult<_>>()?),
                        "coeffs" => pf.coeffs = Some(items.iter().map(|e| constant_of(e, s.pos)).collect::<PResult<_>>()?),
                        _ => {
                            pf.vars = Some(
                                items
                                    .iter()
                                    .map(|e| match e {
                                        Expr::Var(v, _) => Ok(v.clone()),
                                        _ => Err(ParseError::at(s.pos, "vars expects variable names")),
                                    })
                                    .collect::<PResult<_>>()?,
                            )
                        }
                    }
                }
                "order" => pf.order = Some(small(&as_expr(s)?, s.pos, name)?),
                "qmax" => pf.qmax = Some(small(&as_expr(s)?, s.pos, name)?),
                "kmax" => pf.kmax = Some(small(&as_expr(s)?, s.pos, name)?),
                "degree" => pf.degree = Some(small(&as_expr(s)?, s.pos, name)?),
                "samples" => pf.samples = Some(small(&as_expr(s)?, s.pos, name)?),
                "f" => pf.f = Some(as_expr(s)?),
                "families" => match as_expr(s)? {
                    Expr::Var(v, _) if v == "coordinate" || v == "segre" => pf.families = Some(v),
                    _ => return Err(ParseError::at(s.pos, "families must be `coordinate` or `segre`")),
                },
                _ => return Err(ParseError::at(s.pos, format!("unknown statement `{name}`"))),
            }
        }
    }
    pf.rho = dense(rho, "rho", end)?;
    pf.rhop = dense(rhop, "rhop", end)?;
    pf.map = dense(map, "F", end)?;
    for (label, sys) in [("rho", &pf.rho), ("rhop", &pf.rhop)] {
        for (j, r) in sys.iter().enumerate() {
            let c = r.conjugate_swap().expect("complex table");
            if c != *r {
                let pos = stmts.iter().find(|s| s.name == format!("{label}{}", j + 1)).map_or(end, |s| s.pos);
                return Err(ParseError::at(pos, format!("{label}{} is not real: rho - conj(rho) = {}", j + 1, r - &c)));
            }
        }
    }
    if let (Some(n), Some(p)) = (pf.n, &pf.basepoint) {
        if p.len() != n && !pf.rho.is_empty() {
            return Err(ParseError::at(end, format!("basepoint has {} coordinates, n = {n}", p.len())));
        }
    }
    if let Some(np) = pf.np {
        if !pf.map.is_empty() && pf.map.len() != np {
            return Err(ParseError::at(end, format!("{} map components for np = {np}", pf.map.len())));
        }
    }
    Ok(pf)
}

impl ProblemFile {
    pub fn source(&self) -> crate::Result<DefiningSystem> {
        let n = self.n.ok_or_else(|| crate::Error::Invalid("n is not declared".into()))?;
        DefiningSystem::new(n, self.rho.clone())
    }

    pub fn target(&self) -> crate::Result<DefiningSystem> {
        let np = self.np.ok_or_else(|| crate::Error::Invalid("np is not declared".into()))?;
        DefiningSystem::new(np, self.rhop.clone())
    }

    pub fn basepoint_or_origin(&self) -> Vec<GR> {
        self.basepoint.clone().unwrap_or_else(|| vec![GR::zero(); self.n.unwrap_or(0)])
    }
}

impl PartialEq for ProblemFile {
    fn eq(&self, o: &Self) -> bool {
        let f_eq = match (&self.f, &o.f) {
            (Some(a), Some(b)) => a.same_as(b),
            (None, None) => true,
            _ => false,
        };
        self.n == o.n
            && self.np == o.np
            && self.rho == o.rho
            && self.rhop == o.rhop
            && self.map == o.map
            && self.basepoint == o.basepoint
            && self.order == o.order
            && self.qmax == o.qmax
            && self.kmax == o.kmax
            && self.degree == o.degree
            && self.samples == o.samples
            && f_eq
            && self.vars == o.vars
            && self.coeffs == o.coeffs
            && self.families == o.families
    }
}

fn tuple(items: &[GR]) -> String {
    format!("({})", items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in [("n", self.n), ("np", self.np)] {
            if let Some(v) = v {
                writeln!(f, "{k} = {v};")?;
            }
        }
        for (j, r) in self.rho.iter().enumerate() {
            writeln!(f, "rho{} = {};", j + 1, r)?;
        }
        for (j, r) in self.rhop.iter().enumerate() {
            writeln!(f, "rhop{} = {};", j + 1, r)?;
        }
        for (j, r) in self.map.iter().enumerate() {
            writeln!(f, "F{} = ({})/({});", j + 1, r.numerator(), r.denominator())?;
        }
        if let Some(p) = &self.basepoint {
            writeln!(f, "basepoint = {};", tuple(p))?;
        }
        for (k, v) in [("order", self.order), ("qmax", self.qmax), ("kmax", self.kmax), ("degree", self.degree), ("samples", self.samples)] {
            if let Some(v) = v {
                writeln!(f, "{k} = {v};")?;
            }
        }
        if let Some(v) = &self.vars {
            writeln!(f, "vars = ({});", v.join(", "))?;
        }
        if let Some(e) = &self.f {
            writeln!(f, "f = {e};")?;
        }
        if let Some(c) = &self.coeffs {
            writeln!(f, "coeffs = {};", tuple(c))?;
        }
        if let Some(v) = &self.families {
            writeln!(f, "families = {v};")?;
        }
        Ok(())
    }
}

/// Builds a defining system from expression strings over `z1..zn, zb1..zbn`.
pub fn system_from_strs(n: usize, rho: &[&str]) -> PResult<DefiningSystem> {
    let t = VariableTable::complex(n);
    let polys = rho.iter().map(|s| eval_polynomial(&parse_expr(s)?, &t, Pos { line: 1, col: 1 })).collect::<PResult<Vec<_>>>()?;
    DefiningSystem::new(n, polys).map_err(|e| ParseError::at(Pos { line: 1, col: 1 }, e.to_string()))
}

/// Polynomial over `table` from an expression string.
pub fn poly(table: &Table, src: &str) -> PResult<MultiPolynomial> {
    eval_polynomial(&parse_expr(src)?, table, Pos { line: 1, col: 1 })
}

/// Rational function over `table` from an expression string.
pub fn rational(table: &Table, src: &str) -> PResult<RationalFunction> {
    eval_rational(&parse_expr(src)?, table, Pos { line: 1, col: 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadric_statement() {
        let pf = parse_input("n = 2;\nrho1 = z2 + zb2 + z1*zb1; # model quadric\n").unwrap();
        assert_eq!(pf.rho[0].to_string(), "z1*zb1 + z2 + zb2");
    }

    #[test]
    fn rational_map_and_basepoint() {
        let pf = parse_input("n = 2; np = 2; rho1 = z2+zb2+z1*zb1; rhop1 = z2+zb2+z1*zb1;\nF1 = (z1)/(z2); F2 = (1)/(z2); basepoint = (0, i);").unwrap();
        assert_eq!(pf.basepoint, Some(vec![GR::zero(), GR::i()]));
        let v = pf.map[0].eval_all(&[GR::from_int(2), GR::i(), GR::zero(), GR::zero()]).unwrap();
        assert_eq!(v, GR::from_parts(0, 1, -2, 1));
    }

    #[test]
    fn non_real_rho_is_reported() {
        let e = parse_input("n = 2;\nrho1 = z1 + z1*zb1;").unwrap_err();
        assert_eq!((e.line, e.col), (2, 1));
        assert!(e.msg.contains("not real") && e.msg.contains("z1 - zb1"), "{}", e.msg);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_input("n = 2;\nrho1 = z2 + w7;").unwrap_err();
        assert_eq!((e.line, e.col), (2, 13));
        let e = parse_input("n = 2;\nrho1 = z2 + ;").unwrap_err();
        assert_eq!((e.line, e.col), (2, 13));
        assert!(parse_input("n = 2; rho1 = z2 $ zb2;").is_err());
    }

    #[test]
    fn conj_alias() {
        let t = VariableTable::complex(2);
        assert_eq!(poly(&t, "conj(z1)*z1").unwrap(), poly(&t, "zb1*z1").unwrap());
    }

    #[test]
    fn round_trip() {
        let src = "n = 2; np = 2; rho1 = z2 + zb2 + z1*zb1; rhop1 = z2 + zb2 + z1*zb1; F1 = (1/2-3/4*i)*z1 + 1; F2 = z1/(1 - z2);\
                   basepoint = (0, 0); order = 12; qmax = 3; vars = (t); f = (1 + t)^(1/2) - exp(t)/3; families = segre;";
        let pf = parse_input(src).unwrap();
        let again = parse_input(&pf.to_string()).unwrap();
        assert_eq!(pf, again);
    }

    #[test]
    fn series_values() {
        let t = VariableTable::plain(&["t"]);
        let s = eval_series(&parse_expr("(4 + 4*t)^(1/2)").unwrap(), &t, 3, Pos::default()).unwrap();
        assert_eq!(s.coeff(&[0]), GR::from_int(2));
        assert_eq!(s.coeff(&[1]), GR::one());
    }
}
