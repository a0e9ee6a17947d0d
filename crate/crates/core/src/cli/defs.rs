//! Line-oriented definition files.
//!
//! ```text
//! # comment
//! symbols: a, nu
//! w_p = exp(2*a*nu*t)*(Dx - nu*x)
//! ```
//!
//! Later definitions may refer to earlier ones by name.

use thiserror::Error;

use crate::basis::{BasisError, NamedBasis};
use crate::cli::parse::{ParseError, Scope};
use crate::diffop::DiffOp;
use crate::parity::Parity;
use crate::ring::{RingError, SymbolTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DefsError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: {source}")]
    Symbol { line: usize, source: RingError },
    #[error("line {line}: {source}")]
    Basis { line: usize, source: BasisError },
    #[error("line {line}: expected `name = expression`")]
    Malformed { line: usize },
    #[error("line {line}: `symbols:` must come before any definition")]
    LateHeader { line: usize },
}

#[derive(Clone, Debug)]
pub struct Definitions {
    pub symbols: Option<SymbolTable>,
    pub operators: NamedBasis<DiffOp>,
}

impl Definitions {
    /// A scope that resolves the defined names and, when a header was
    /// given, only the declared symbols.
    pub fn scope(&self) -> Scope {
        Scope {
            symbols: self.symbols.clone(),
            definitions: self.operators.iter().map(|g| (g.name.clone(), g.op.clone())).collect(),
        }
    }
}

pub fn parse_definitions(text: &str) -> Result<Definitions, DefsError> {
    let mut scope = Scope::lenient();
    let mut operators = NamedBasis::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(list) = body.strip_prefix("symbols:") {
            if !operators.is_empty() {
                return Err(DefsError::LateHeader { line });
            }
            let mut table = scope.symbols.take().unwrap_or_else(SymbolTable::empty);
            for name in list.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
                table.declare_default(name).map_err(|source| DefsError::Symbol { line, source })?;
            }
            scope.symbols = Some(table);
            continue;
        }
        let (name, expr) = body.split_once('=').ok_or(DefsError::Malformed { line })?;
        let name = name.trim();
        if !crate::ring::is_identifier(name) {
            return Err(DefsError::Malformed { line });
        }
        let op = scope.parse(expr).map_err(|source| DefsError::Parse { line, source })?;
        operators.push(name, op.clone(), Parity::Even).map_err(|source| DefsError::Basis { line, source })?;
        scope.definitions.insert(name.to_string(), op);
    }
    Ok(Definitions { symbols: scope.symbols, operators })
}
