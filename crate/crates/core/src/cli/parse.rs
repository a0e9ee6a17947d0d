//! Recursive-descent parser for operator expressions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' ['-'] INT)?
//! atom  := INT | IDENT | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `*` is operator composition. There is no implicit multiplication.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::diffop::DiffOp;
use crate::ring::{is_identifier, Rational, RingElement, SymbolTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at token {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("{0}")]
    Semantic(String),
}

impl ParseError {
    fn syntax(pos: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { pos, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Op(char),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(n) => write!(f, "{n}"),
            Token::Ident(s) => f.write_str(s),
            Token::Op(c) => write!(f, "{c}"),
        }
    }
}

fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token::Int(digits.parse().expect("ascii digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(ParseError::syntax(out.len() + 1, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    Int(BigInt),
    Name(String),
    Exp(Box<ExprAst>),
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, i64),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self, c: char) -> bool {
        self.peek() == Some(&Token::Op(c))
    }

    fn error_here(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::syntax(self.pos + 1, format!("unexpected `{t}`, expected {expected}")),
            None => ParseError::syntax(self.pos + 1, format!("unexpected end of input, expected {expected}")),
        }
    }

    fn expect_op(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek_op(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(&format!("`{c}`")))
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.peek_op('+') {
                self.pos += 1;
                lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.peek_op('-') {
                self.pos += 1;
                lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.peek_op('*') {
                self.pos += 1;
                lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek_op('/') {
                self.pos += 1;
                lhs = ExprAst::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<ExprAst, ParseError> {
        if self.peek_op('-') {
            self.pos += 1;
            return Ok(ExprAst::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if !self.peek_op('^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = self.peek_op('-');
        if negative {
            self.pos += 1;
        }
        let Some(Token::Int(n)) = self.peek().cloned() else {
            return Err(self.error_here("an integer exponent"));
        };
        let n: i64 = n.try_into().map_err(|_| ParseError::syntax(self.pos + 1, "exponent too large"))?;
        self.pos += 1;
        Ok(ExprAst::Pow(Box::new(base), if negative { -n } else { n }))
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(ExprAst::Int(n))
            }
            Some(Token::Ident(name)) if name == "exp" => {
                self.pos += 1;
                self.expect_op('(')?;
                let inner = self.expr()?;
                self.expect_op(')')?;
                Ok(ExprAst::Exp(Box::new(inner)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(ExprAst::Name(name))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_op(')')?;
                Ok(inner)
            }
            _ => Err(self.error_here("a number, name or `(`")),
        }
    }
}

pub fn parse_ast(input: &str) -> Result<ExprAst, ParseError> {
    let tokens = tokenize(input)?;
    let mut p = Parser { tokens, pos: 0 };
    let ast = p.expr()?;
    if p.pos < p.tokens.len() {
        return Err(p.error_here("an operator or end of input"));
    }
    Ok(ast)
}

/// Name resolution for evaluation. Identifiers other than `t`, `x`, `Dt`,
/// `Dx` resolve to definitions first, then to symbols.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    /// When set, only these symbols are accepted.
    pub symbols: Option<SymbolTable>,
    pub definitions: BTreeMap<String, DiffOp>,
}

impl Scope {
    pub fn lenient() -> Self {
        Scope::default()
    }

    pub fn strict(symbols: SymbolTable) -> Self {
        Scope { symbols: Some(symbols), definitions: BTreeMap::new() }
    }

    fn resolve(&self, name: &str) -> Result<DiffOp, ParseError> {
        match name {
            "t" => return Ok(DiffOp::mul_by(RingElement::t())),
            "x" => return Ok(DiffOp::mul_by(RingElement::x())),
            "Dt" => return Ok(DiffOp::dt()),
            "Dx" => return Ok(DiffOp::dx()),
            _ => {}
        }
        if let Some(op) = self.definitions.get(name) {
            return Ok(op.clone());
        }
        if !is_identifier(name) {
            return Err(ParseError::Semantic(format!("`{name}` is not a valid identifier")));
        }
        match &self.symbols {
            Some(table) if table.lookup(name).is_none() => Err(ParseError::Semantic(format!("unknown name `{name}`"))),
            _ => Ok(DiffOp::mul_by(RingElement::symbol(name))),
        }
    }

    pub fn eval(&self, ast: &ExprAst) -> Result<DiffOp, ParseError> {
        Ok(match ast {
            ExprAst::Int(n) => DiffOp::mul_by(RingElement::constant(Rational::from_integer(n.clone()))),
            ExprAst::Name(name) => self.resolve(name)?,
            ExprAst::Exp(inner) => {
                let arg = multiplication(&self.eval(inner)?, "exp argument")?;
                DiffOp::mul_by(RingElement::exp(&arg).map_err(|e| ParseError::Semantic(e.to_string()))?)
            }
            ExprAst::Neg(inner) => -self.eval(inner)?,
            ExprAst::Add(a, b) => &self.eval(a)? + &self.eval(b)?,
            ExprAst::Sub(a, b) => &self.eval(a)? - &self.eval(b)?,
            ExprAst::Mul(a, b) => &self.eval(a)? * &self.eval(b)?,
            ExprAst::Div(a, b) => {
                let d = multiplication(&self.eval(b)?, "divisor")?;
                let ok = d.is_symbolic_constant() && d.as_scaled_monomial().is_some();
                if !ok {
                    return Err(ParseError::Semantic(format!(
                        "can only divide by a number or a product of symbols, not `{d}`"
                    )));
                }
                let inv = d.inverse().map_err(|e| ParseError::Semantic(e.to_string()))?;
                self.eval(a)?.left_mul(&inv)
            }
            ExprAst::Pow(base, n) => {
                let b = self.eval(base)?;
                if *n >= 0 {
                    let n = u32::try_from(*n).map_err(|_| ParseError::Semantic("exponent too large".into()))?;
                    b.pow(n)
                } else {
                    let m = multiplication(&b, "base of a negative power")?;
                    let inv = m.inverse().map_err(|e| ParseError::Semantic(e.to_string()))?;
                    let k = u32::try_from(-*n).map_err(|_| ParseError::Semantic("exponent too large".into()))?;
                    DiffOp::mul_by(inv.pow(k))
                }
            }
        })
    }

    pub fn parse(&self, input: &str) -> Result<DiffOp, ParseError> {
        self.eval(&parse_ast(input)?)
    }
}

fn multiplication(op: &DiffOp, role: &str) -> Result<RingElement, ParseError> {
    op.as_multiplication().ok_or_else(|| ParseError::Semantic(format!("{role} must not contain derivatives")))
}

/// Parses with any identifier accepted as a symbol.
pub fn parse_operator(input: &str) -> Result<DiffOp, ParseError> {
    Scope::lenient().parse(input)
}
