//! A small expression language for series:
//!
//! ```text
//! expr := term (("+"|"-") term)*
//! term := pow (("*"|"/") pow)*
//! pow  := atom ("^" ["-"] integer)?
//! atom := integer | "q" | "t" | call | "(" expr ")"
//! call := name "(" args? ")"
//! arg  := ["-"] integer | "[" ["-"] integer ("," ["-"] integer)* "]"
//! ```
//!
//! Whitespace is insignificant. Expressions mentioning `t` (directly or
//! through `poincare`) evaluate to bivariate series.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::census::{h0_series_with, poincare_series_with, Cocharacter, DimensionStore, NoCache};
use crate::characters::{andrews_j, corteel_e, fermionic_rho_sum, virasoro_char, MinimalModelLabel};
use crate::error::{param, Result};
use crate::identities::SeriesValue;
use crate::qseries::{
    euler_product, minus_q_infinity, q_binomial, residue_product, BivariateSeries, FactorMode, Polynomial,
    TruncatedSeries,
};

/// A parse failure with its location and the tokens that would have been
/// accepted there.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at line {line}, column {column}: expected {}, found {found}", .expected.join(" or "))]
pub struct SyntaxError {
    /// Character offset from the start of the input.
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Posq,
    Etaq,
    Resprod,
    Virasoro,
    Jfun,
    Efun,
    Rho,
    H0,
    Poincare,
    Qbin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgKind {
    Int,
    List,
}

use ArgKind::{Int as I, List as L};

impl Builtin {
    pub const ALL: [Builtin; 10] = [
        Builtin::Posq,
        Builtin::Etaq,
        Builtin::Resprod,
        Builtin::Virasoro,
        Builtin::Jfun,
        Builtin::Efun,
        Builtin::Rho,
        Builtin::H0,
        Builtin::Poincare,
        Builtin::Qbin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Posq => "posq",
            Builtin::Etaq => "etaq",
            Builtin::Resprod => "resprod",
            Builtin::Virasoro => "virasoro",
            Builtin::Jfun => "jfun",
            Builtin::Efun => "efun",
            Builtin::Rho => "rho",
            Builtin::H0 => "h0",
            Builtin::Poincare => "poincare",
            Builtin::Qbin => "qbin",
        }
    }

    pub fn signature(self) -> &'static [ArgKind] {
        match self {
            Builtin::Posq | Builtin::Etaq => &[I],
            Builtin::Resprod => &[I, L],
            Builtin::Virasoro => &[I, I, I, I],
            Builtin::Jfun | Builtin::Efun => &[I, I, I],
            Builtin::Rho | Builtin::Qbin => &[I, I],
            Builtin::H0 | Builtin::Poincare => &[I, I, I, L],
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Int(BigInt),
    List(Vec<BigInt>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    Int(BigInt),
    Q,
    T,
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
    Call(Builtin, Vec<Arg>),
}

impl Ast {
    /// Whether evaluation produces a bivariate series.
    pub fn mentions_t(&self) -> bool {
        match self {
            Ast::T | Ast::Call(Builtin::Poincare, _) => true,
            Ast::Int(_) | Ast::Q | Ast::Call(..) => false,
            Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b) => a.mentions_t() || b.mentions_t(),
            Ast::Pow(a, _) => a.mentions_t(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Ast::Add(..) | Ast::Sub(..) => 1,
            Ast::Mul(..) | Ast::Div(..) => 2,
            Ast::Pow(..) => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Ast::Int(v) => write!(f, "{v}"),
            Ast::Q => write!(f, "q"),
            Ast::T => write!(f, "t"),
            Ast::Add(a, b) | Ast::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, "{}", if matches!(self, Ast::Add(..)) { "+" } else { "-" })?;
                b.write_at(f, 2)
            }
            Ast::Mul(a, b) | Ast::Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "{}", if matches!(self, Ast::Mul(..)) { "*" } else { "/" })?;
                b.write_at(f, 3)
            }
            Ast::Pow(a, e) => {
                a.write_at(f, 4)?;
                write!(f, "^{e}")
            }
            Ast::Call(b, args) => {
                write!(f, "{}(", b.name())?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    match arg {
                        Arg::Int(v) => write!(f, "{v}")?,
                        Arg::List(vs) => {
                            let parts: Vec<String> = vs.iter().map(BigInt::to_string).collect();
                            write!(f, "[{}]", parts.join(","))?;
                        }
                    }
                }
                write!(f, ")")
            }
        }
    }
}

/// Canonical form: no whitespace, parentheses only where needed.
impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Punct(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(v) => write!(f, "integer {v}"),
            Tok::Ident(s) => write!(f, "identifier {s:?}"),
            Tok::Punct(c) => write!(f, "'{c}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

struct Token {
    tok: Tok,
    offset: usize,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let mut out = Vec::new();
    let advance = |i: &mut usize, line: &mut usize, column: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *column = 1;
        } else {
            *column += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut column);
            continue;
        }
        let (offset, l, col) = (i, line, column);
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut column);
            }
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut column);
            }
            Tok::Ident(s)
        } else {
            advance(&mut i, &mut line, &mut column);
            Tok::Punct(c)
        };
        out.push(Token { tok, offset, line: l, column: col });
    }
    out.push(Token { tok: Tok::End, offset: chars.len(), line, column });
    out
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    after_bare_atom: bool,
}

fn atom_start() -> Vec<String> {
    let mut v: Vec<String> = vec!["integer".into(), "'q'".into(), "'t'".into(), "'('".into()];
    v.extend(Builtin::ALL.iter().map(|b| format!("'{}'", b.name())));
    v
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: Vec<String>) -> std::result::Result<T, SyntaxError> {
        let t = &self.tokens[self.pos];
        Err(SyntaxError { offset: t.offset, line: t.line, column: t.column, expected, found: t.tok.to_string() })
    }

    fn expect(&mut self, c: char) -> std::result::Result<(), SyntaxError> {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            self.error(vec![format!("'{c}'")])
        }
    }

    fn continuation(&self) -> Vec<String> {
        let mut v: Vec<String> = ["'+'", "'-'", "'*'", "'/'"].iter().map(|s| s.to_string()).collect();
        if self.after_bare_atom {
            v.push("'^'".into());
        }
        v.push(if self.depth > 0 { "')'".into() } else { "end of input".into() });
        v
    }

    fn expr(&mut self) -> std::result::Result<Ast, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Punct('+') => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Punct('-') => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Ast, SyntaxError> {
        let mut lhs = self.pow()?;
        loop {
            match self.peek() {
                Tok::Punct('*') => {
                    self.bump();
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.pow()?));
                }
                Tok::Punct('/') => {
                    self.bump();
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.pow()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn signed_integer(&mut self) -> std::result::Result<BigInt, SyntaxError> {
        let negative = *self.peek() == Tok::Punct('-');
        if negative {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(if negative { -v } else { v })
            }
            _ if negative => self.error(vec!["integer".into()]),
            _ => self.error(vec!["integer".into(), "'-'".into()]),
        }
    }

    fn pow(&mut self) -> std::result::Result<Ast, SyntaxError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Punct('^') {
            self.after_bare_atom = true;
            return Ok(base);
        }
        self.bump();
        let at = self.pos;
        let e = self.signed_integer()?;
        let e = match e.to_i64() {
            Some(e) => e,
            None => {
                self.pos = at;
                return self.error(vec!["exponent fitting in 64 bits".into()]);
            }
        };
        self.after_bare_atom = false;
        Ok(Ast::Pow(Box::new(base), e))
    }

    fn atom(&mut self) -> std::result::Result<Ast, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Ast::Int(v))
            }
            Tok::Ident(s) if s == "q" => {
                self.bump();
                Ok(Ast::Q)
            }
            Tok::Ident(s) if s == "t" => {
                self.bump();
                Ok(Ast::T)
            }
            Tok::Ident(s) => match Builtin::from_name(&s) {
                Some(b) => {
                    self.bump();
                    self.call(b)
                }
                None => self.error(atom_start()),
            },
            Tok::Punct('(') => {
                self.bump();
                self.depth += 1;
                let inner = self.expr()?;
                if *self.peek() != Tok::Punct(')') {
                    return self.error(self.continuation());
                }
                self.bump();
                self.depth -= 1;
                Ok(inner)
            }
            _ => self.error(atom_start()),
        }
    }

    fn call(&mut self, b: Builtin) -> std::result::Result<Ast, SyntaxError> {
        self.expect('(')?;
        let sig = b.signature();
        let mut args = Vec::with_capacity(sig.len());
        for (i, kind) in sig.iter().enumerate() {
            if i > 0 && *self.peek() != Tok::Punct(',') {
                return self.error(vec!["','".into()]);
            }
            if i > 0 {
                self.bump();
            }
            args.push(match kind {
                ArgKind::Int => {
                    if !matches!(self.peek(), Tok::Int(_) | Tok::Punct('-')) {
                        return self.error(vec!["integer".into(), "'-'".into()]);
                    }
                    Arg::Int(self.signed_integer()?)
                }
                ArgKind::List => {
                    if *self.peek() != Tok::Punct('[') {
                        return self.error(vec!["'['".into()]);
                    }
                    self.bump();
                    let mut vs = vec![self.signed_integer()?];
                    while *self.peek() == Tok::Punct(',') {
                        self.bump();
                        vs.push(self.signed_integer()?);
                    }
                    if *self.peek() != Tok::Punct(']') {
                        return self.error(vec!["','".into(), "']'".into()]);
                    }
                    self.bump();
                    Arg::List(vs)
                }
            });
        }
        if *self.peek() != Tok::Punct(')') {
            return self.error(vec!["')'".into()]);
        }
        self.bump();
        Ok(Ast::Call(b, args))
    }
}

pub fn parse(text: &str) -> std::result::Result<Ast, SyntaxError> {
    let mut p = Parser { tokens: tokenize(text), pos: 0, depth: 0, after_bare_atom: false };
    let ast = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error(p.continuation());
    }
    Ok(ast)
}

fn small(v: &BigInt) -> Result<i64> {
    v.to_i64().map_or_else(|| param(format!("argument {v} is too large")), Ok)
}

fn nonneg(v: &BigInt, what: &str) -> Result<usize> {
    match v.to_usize() {
        Some(u) => Ok(u),
        None => param(format!("{what} must be a nonnegative integer, got {v}")),
    }
}

fn positive(v: &BigInt, what: &str) -> Result<usize> {
    match nonneg(v, what)? {
        0 => param(format!("{what} must be positive")),
        u => Ok(u),
    }
}

fn int_arg(args: &[Arg], i: usize) -> &BigInt {
    match &args[i] {
        Arg::Int(v) => v,
        Arg::List(_) => unreachable!("checked by the parser"),
    }
}

fn list_arg(args: &[Arg], i: usize) -> Result<Vec<i64>> {
    match &args[i] {
        Arg::List(vs) => vs.iter().map(small).collect(),
        Arg::Int(_) => unreachable!("checked by the parser"),
    }
}

fn cocharacter(args: &[Arg]) -> Result<(usize, Cocharacter)> {
    let r = positive(int_arg(args, 0), "rank")?;
    let w = list_arg(args, 3)?;
    if w.len() != r {
        return param(format!("rank {r} needs {r} weights, got {}", w.len()));
    }
    Ok((r, Cocharacter::new(small(int_arg(args, 1))?, small(int_arg(args, 2))?, w)?))
}

fn call_uni(b: Builtin, args: &[Arg], order: usize, store: &dyn DimensionStore) -> Result<TruncatedSeries> {
    let int = |i| int_arg(args, i);
    Ok(match b {
        Builtin::Posq => minus_q_infinity(order).dilate(positive(int(0), "posq argument")?),
        Builtin::Etaq => euler_product(order).dilate(positive(int(0), "etaq argument")?),
        Builtin::Resprod => {
            let m = positive(int(0), "modulus")? as u64;
            let residues = list_arg(args, 1)?
                .into_iter()
                .map(|v| if v < 0 { param("residues must be nonnegative") } else { Ok(v as u64) })
                .collect::<Result<Vec<_>>>()?;
            residue_product(m, &residues, FactorMode::Reciprocal, 1, order)?
        }
        Builtin::Virasoro => {
            let label = MinimalModelLabel::new(small(int(0))?, small(int(1))?, small(int(2))?, small(int(3))?)?;
            virasoro_char(&label, order)
        }
        Builtin::Jfun => andrews_j(nonneg(int(0), "k")?, nonneg(int(1), "i")?, nonneg(int(2), "e")? as u64, order)?,
        Builtin::Efun => corteel_e(nonneg(int(0), "k")?, nonneg(int(1), "i")?, small(int(2))?, order)?,
        Builtin::Rho => fermionic_rho_sum(nonneg(int(0), "r")?, nonneg(int(1), "m")?, order)?,
        Builtin::H0 => {
            let (r, c) = cocharacter(args)?;
            h0_series_with(r, &c, order, store)?
        }
        Builtin::Qbin => q_binomial(small(int(0))?, small(int(1))?).to_series(order),
        Builtin::Poincare => unreachable!("bivariate builtin"),
    })
}

fn eval_uni(ast: &Ast, order: usize, store: &dyn DimensionStore) -> Result<TruncatedSeries> {
    Ok(match ast {
        Ast::Int(v) => TruncatedSeries::monomial(0, v.clone(), order),
        Ast::Q => TruncatedSeries::monomial(1, 1, order),
        Ast::T | Ast::Call(Builtin::Poincare, _) => unreachable!("bivariate mode"),
        Ast::Add(a, b) => &eval_uni(a, order, store)? + &eval_uni(b, order, store)?,
        Ast::Sub(a, b) => &eval_uni(a, order, store)? - &eval_uni(b, order, store)?,
        Ast::Mul(a, b) => &eval_uni(a, order, store)? * &eval_uni(b, order, store)?,
        Ast::Div(a, b) => &eval_uni(a, order, store)? * &eval_uni(b, order, store)?.invert()?,
        Ast::Pow(a, e) => eval_uni(a, order, store)?.pow(*e)?,
        Ast::Call(b, args) => call_uni(*b, args, order, store)?,
    })
}

fn eval_bi(ast: &Ast, order: usize, t_order: usize, store: &dyn DimensionStore) -> Result<BivariateSeries> {
    let rec = |a: &Ast| eval_bi(a, order, t_order, store);
    Ok(match ast {
        Ast::Int(v) => BivariateSeries::from_polys(vec![Polynomial::monomial(0, v.clone())], t_order),
        Ast::Q => BivariateSeries::monomial(1, 0, t_order),
        Ast::T => BivariateSeries::monomial(0, 1, t_order),
        Ast::Add(a, b) => &rec(a)? + &rec(b)?,
        Ast::Sub(a, b) => &rec(a)? - &rec(b)?,
        Ast::Mul(a, b) => &rec(a)? * &rec(b)?,
        Ast::Div(a, b) => &rec(a)? * &rec(b)?.invert()?,
        Ast::Pow(a, e) => rec(a)?.pow(*e)?,
        Ast::Call(Builtin::Poincare, args) => {
            let (r, c) = cocharacter(args)?;
            poincare_series_with(r, &c, t_order, store)?
        }
        Ast::Call(b, args) => BivariateSeries::from_q_series(&call_uni(*b, args, order, store)?, t_order),
    })
}

/// Evaluates through `q^order`; bivariate expressions also need `t_order`.
pub fn evaluate(ast: &Ast, order: usize, t_order: Option<usize>) -> Result<SeriesValue> {
    evaluate_with(ast, order, t_order, &NoCache)
}

pub fn evaluate_with(
    ast: &Ast,
    order: usize,
    t_order: Option<usize>,
    store: &dyn DimensionStore,
) -> Result<SeriesValue> {
    if ast.mentions_t() {
        match t_order {
            Some(m) => Ok(SeriesValue::Bi(eval_bi(ast, order, m, store)?)),
            None => param("expression involves t; a t-order is required"),
        }
    } else {
        Ok(SeriesValue::Uni(eval_uni(ast, order, store)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn uni(text: &str, order: usize) -> Vec<i64> {
        match evaluate(&parse(text).unwrap(), order, None).unwrap() {
            SeriesValue::Uni(s) => s.to_i64s(),
            SeriesValue::Bi(_) => panic!("expected a q-series"),
        }
    }

    #[test]
    fn parse_examples() {
        match parse("posq(1)*resprod(4,[1,3])").unwrap() {
            Ast::Mul(a, b) => {
                assert!(matches!(*a, Ast::Call(Builtin::Posq, _)));
                assert!(matches!(*b, Ast::Call(Builtin::Resprod, _)));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("h0(2,1,1,[1,0])").unwrap(), Ast::Call(Builtin::H0, _)));
        let err = parse("resprod(4 [1])").unwrap_err();
        assert_eq!((err.offset, err.line, err.column), (10, 1, 11));
        assert_eq!(err.expected, vec!["','"]);
    }

    #[test]
    fn syntax_errors_are_positioned() {
        for (text, line, column) in [
            ("posq(1", 1, 7),
            ("1 +\n  * q", 2, 3),
            ("foo(1)", 1, 1),
            ("qbin(1)", 1, 7),
            ("q^2^3", 1, 4),
            ("(q", 1, 3),
            ("q $", 1, 3),
            ("", 1, 1),
        ] {
            let err = parse(text).unwrap_err();
            assert_eq!((err.line, err.column), (line, column), "{text:?}");
            assert!(!err.expected.is_empty());
        }
        assert!(!parse("q^2^3").unwrap_err().expected.contains(&"'^'".to_string()));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(uni("posq(1)", 3), vec![1, 1, 1, 2]);
        assert_eq!(uni("posq(1)*resprod(4,[1,3])", 3), vec![1, 2, 3, 6]);
        assert_eq!(uni("h0(2,1,1,[1,0])", 3), vec![1, 2, 2, 4]);
        assert_eq!(uni("1/(1-q)", 4), vec![1, 1, 1, 1, 1]);
        assert_eq!(uni("(1-q)^-2", 3), vec![1, 2, 3, 4]);
        assert_eq!(uni("qbin(4,2)", 5), vec![1, 1, 2, 1, 1, 0]);
        assert_eq!(uni("efun(1,1,-1) - efun(1,1,-1)", 3), vec![0, 0, 0, 0]);
        assert!(evaluate(&parse("1/q").unwrap(), 3, None).is_err());
        assert!(evaluate(&parse("h0(1,1,1,[0,0])").unwrap(), 3, None).is_err());
    }

    #[test]
    fn bivariate_evaluation() {
        let ast = parse("poincare(2,1,1,[0,0])").unwrap();
        assert!(evaluate(&ast, 4, None).is_err());
        match evaluate(&ast, 4, Some(2)).unwrap() {
            SeriesValue::Bi(s) => {
                assert_eq!(s.t_coeff(1).to_i64s(), vec![1, 1]);
                assert_eq!(s.t_coeff(2).to_i64s(), vec![2, 2, 1]);
            }
            SeriesValue::Uni(_) => panic!("expected a bivariate series"),
        }
        match evaluate(&parse("1/(1-q*t)").unwrap(), 4, Some(3)).unwrap() {
            SeriesValue::Bi(s) => assert_eq!(s.t_coeff(3).to_i64s(), vec![0, 0, 0, 1]),
            SeriesValue::Uni(_) => panic!("expected a bivariate series"),
        }
    }

    #[test]
    fn printer_is_canonical() {
        for (text, printed) in [
            ("1 - (2 - q)", "1-(2-q)"),
            ("(1 - 2) - q", "1-2-q"),
            ("(q^2)^3", "(q^2)^3"),
            ("q / (q * q)", "q/(q*q)"),
            ("resprod( 4, [ 1 , 3 ] )", "resprod(4,[1,3])"),
            ("efun(1, 1, -1)", "efun(1,1,-1)"),
            ("(1+q)^-1", "(1+q)^-1"),
        ] {
            assert_eq!(parse(text).unwrap().to_string(), printed);
        }
    }

    fn leaf() -> impl Strategy<Value = Ast> {
        prop_oneof![
            (0u32..4).prop_map(|v| Ast::Int(v.into())),
            Just(Ast::Q),
            (1u32..3).prop_map(|c| Ast::Call(Builtin::Posq, vec![Arg::Int(c.into())])),
            (1u32..3).prop_map(|c| Ast::Call(Builtin::Etaq, vec![Arg::Int(c.into())])),
            (0u32..4, 0u32..3).prop_map(|(m, n)| Ast::Call(Builtin::Qbin, vec![Arg::Int(m.into()), Arg::Int(n.into())])),
            Just(Ast::Call(Builtin::Resprod, vec![Arg::Int(5.into()), Arg::List(vec![1.into(), 4.into()])])),
        ]
    }

    fn ast() -> impl Strategy<Value = Ast> {
        leaf().prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Ast::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Ast::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Ast::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), 0i64..3).prop_map(|(a, e)| Ast::Pow(Box::new(a), e)),
                inner.prop_map(|a| Ast::Div(
                    Box::new(a),
                    Box::new(Ast::Call(Builtin::Etaq, vec![Arg::Int(1.into())]))
                )),
            ]
        })
    }

    fn series(a: &Ast) -> TruncatedSeries {
        match evaluate(a, 8, None).unwrap() {
            SeriesValue::Uni(s) => s,
            SeriesValue::Bi(_) => unreachable!(),
        }
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(a in ast()) {
            let printed = a.to_string();
            let reparsed = parse(&printed).unwrap();
            prop_assert_eq!(&reparsed, &a);
            prop_assert_eq!(reparsed.to_string(), printed);
        }

        #[test]
        fn evaluation_is_compositional(a in ast(), b in ast()) {
            let prod = Ast::Mul(Box::new(a.clone()), Box::new(b.clone()));
            prop_assert_eq!(series(&prod), &series(&a) * &series(&b));
            let sum = Ast::Add(Box::new(a.clone()), Box::new(b.clone()));
            prop_assert_eq!(series(&sum), &series(&a) + &series(&b));
        }
    }
}
