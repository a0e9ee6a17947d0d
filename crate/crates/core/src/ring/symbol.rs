use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::{rat, Rational, RingError};

/// Names that the expression grammar reserves for coordinates, derivatives
/// and the exponential.
pub const RESERVED_NAMES: [&str; 5] = ["t", "x", "Dt", "Dx", "exp"];

/// A formal scalar parameter such as `a`, `nu` or `omega`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered set of declared symbols together with their scaling dimensions.
///
/// The default session declares `a`, `nu`, `omega`, `u` and `b` with the
/// dimensions `[a] = 0`, `[nu] = 1`, `[omega] = 3/2`, `[u] = 1` (a constant
/// added to the potential) and `[b] = -1/2` (a shift of `x`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    entries: Vec<(Symbol, Rational)>,
}

impl SymbolTable {
    pub fn empty() -> Self {
        SymbolTable { entries: Vec::new() }
    }

    pub fn declare(&mut self, name: &str, grade: Rational) -> Result<Symbol, RingError> {
        if RESERVED_NAMES.contains(&name) {
            return Err(RingError::ReservedSymbol(name.to_string()));
        }
        if !is_identifier(name) {
            return Err(RingError::InvalidSymbol(name.to_string()));
        }
        if self.lookup(name).is_some() {
            return Err(RingError::DuplicateSymbol(name.to_string()));
        }
        let sym = Symbol::new(name);
        self.entries.push((sym.clone(), grade));
        Ok(sym)
    }

    /// Declares `name` with the default dimension of that name, or zero for
    /// names outside the default session.
    pub fn declare_default(&mut self, name: &str) -> Result<Symbol, RingError> {
        let grade = Self::default().grade_of_name(name).cloned().unwrap_or_else(Rational::zero);
        self.declare(name, grade)
    }

    pub fn lookup(&self, name: &str) -> Option<&Symbol> {
        self.entries.iter().map(|(s, _)| s).find(|s| s.name() == name)
    }

    pub fn contains(&self, sym: &Symbol) -> bool {
        self.entries.iter().any(|(s, _)| s == sym)
    }

    fn grade_of_name(&self, name: &str) -> Option<&Rational> {
        self.entries.iter().find(|(s, _)| s.name() == name).map(|(_, g)| g)
    }

    /// Scaling dimension of a symbol; undeclared symbols count as dimensionless.
    pub fn grade(&self, sym: &Symbol) -> Rational {
        self.entries.iter().find(|(s, _)| s == sym).map(|(_, g)| g.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.entries.iter().map(|(s, _)| s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Default for SymbolTable {
    fn default() -> Self {
        let mut table = SymbolTable::empty();
        for (name, grade) in
            [("a", rat(0, 1)), ("nu", rat(1, 1)), ("omega", rat(3, 2)), ("u", rat(1, 1)), ("b", rat(-1, 2))]
        {
            table.declare(name, grade).expect("default symbols are valid");
        }
        table
    }
}

/// Laurent monomial in the declared symbols: a sorted exponent list with no
/// zero exponents.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Symbol, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(sym: Symbol, exp: i32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(sym, exp)])
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (Symbol, i32)>>(pairs: I) -> Self {
        let mut out = Monomial::one();
        for (s, e) in pairs {
            out = out.mul(&Monomial::var(s, e));
        }
        out
    }

    /// Convenience constructor from `(name, exponent)` pairs.
    pub fn of(pairs: &[(&str, i32)]) -> Self {
        Monomial::from_pairs(pairs.iter().map(|(n, e)| (Symbol::new(n), *e)))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, i32)> {
        self.0.iter().map(|(s, e)| (s, *e))
    }

    pub fn exponent(&self, sym: &Symbol) -> i32 {
        self.0.iter().find(|(s, _)| s == sym).map(|(_, e)| *e).unwrap_or(0)
    }

    /// Splits off the power of `sym`.
    pub fn split(&self, sym: &Symbol) -> (i32, Monomial) {
        let exp = self.exponent(sym);
        let rest = Monomial(self.0.iter().filter(|(s, _)| s != sym).cloned().collect());
        (exp, rest)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.combine(other, |a, b| a + b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.combine(other, |a, b| a - b)
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(s, e)| (s.clone(), e * k)).collect())
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.combine(other, |a, b| a.min(b))
    }

    /// Componentwise maximum of exponents.
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.combine(other, |a, b| a.max(b))
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|(_, e)| *e >= 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_polynomial()
    }

    pub fn total_degree(&self) -> i32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Splits into the part with positive exponents and the inverse of the
    /// part with negative exponents, so that `self = num / den`.
    pub fn numer_denom(&self) -> (Monomial, Monomial) {
        let num = Monomial(self.0.iter().filter(|(_, e)| *e > 0).cloned().collect());
        let den = Monomial(self.0.iter().filter(|(_, e)| *e < 0).map(|(s, e)| (s.clone(), -e)).collect());
        (num, den)
    }

    pub fn grade(&self, table: &SymbolTable) -> Rational {
        self.0
            .iter()
            .map(|(s, e)| table.grade(s) * Rational::from_integer((*e).into()))
            .fold(Rational::zero(), |acc, g| acc + g)
    }

    /// Lexicographic monomial order with earlier symbol names more significant.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some((_, e)), None) => return e.cmp(&0),
                (None, Some((_, e))) => return 0.cmp(e),
                (Some((s1, e1)), Some((s2, e2))) => match s1.cmp(s2) {
                    Ordering::Equal => {
                        if e1 != e2 {
                            return e1.cmp(e2);
                        }
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => return e1.cmp(&0),
                    Ordering::Greater => return 0.cmp(e2),
                },
            }
        }
    }

    fn combine(&self, other: &Monomial, op: impl Fn(i32, i32) -> i32) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let (sym, e) = match (self.0.get(i), other.0.get(j)) {
                (Some((s1, e1)), Some((s2, e2))) => match s1.cmp(s2) {
                    Ordering::Less => {
                        i += 1;
                        (s1, op(*e1, 0))
                    }
                    Ordering::Greater => {
                        j += 1;
                        (s2, op(0, *e2))
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (s1, op(*e1, *e2))
                    }
                },
                (Some((s1, e1)), None) => {
                    i += 1;
                    (s1, op(*e1, 0))
                }
                (None, Some((s2, e2))) => {
                    j += 1;
                    (s2, op(0, *e2))
                }
                (None, None) => unreachable!(),
            };
            if e != 0 {
                out.push((sym.clone(), e));
            }
        }
        Monomial(out)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> =
            self.0.iter().map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") }).collect();
        f.write_str(&parts.join("*"))
    }
}

/// A rational multiple of a Laurent monomial, e.g. `-1/(4*a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScaledMonomial {
    pub coeff: Rational,
    pub mono: Monomial,
}

impl ScaledMonomial {
    pub fn new(coeff: Rational, mono: Monomial) -> Self {
        ScaledMonomial { coeff, mono }
    }

    pub fn constant(coeff: Rational) -> Self {
        ScaledMonomial::new(coeff, Monomial::one())
    }

    /// `-1/(4a)`, the value of `nu` that maps the oscillator structure
    /// constants onto the free and linear ones.
    pub fn nu_specialization() -> Self {
        ScaledMonomial::new(rat(-1, 4), Monomial::of(&[("a", -1)]))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mul(&self, other: &ScaledMonomial) -> ScaledMonomial {
        ScaledMonomial::new(&self.coeff * &other.coeff, self.mono.mul(&other.mono))
    }

    pub fn pow(&self, k: i32) -> Result<ScaledMonomial, RingError> {
        Ok(ScaledMonomial::new(rational_pow(&self.coeff, k)?, self.mono.pow(k)))
    }
}

pub(crate) fn rational_pow(q: &Rational, k: i32) -> Result<Rational, RingError> {
    if k < 0 && q.is_zero() {
        return Err(RingError::DivisionByZero);
    }
    Ok(num_traits::pow::Pow::pow(q, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_arithmetic_cancels_exponents() {
        let m = Monomial::of(&[("a", 1), ("nu", 2)]);
        let inv = Monomial::of(&[("a", -1)]);
        assert_eq!(m.mul(&inv), Monomial::of(&[("nu", 2)]));
        assert!(m.mul(&m.inv()).is_one());
    }

    #[test]
    fn lex_order_prefers_earlier_symbols() {
        let a = Monomial::of(&[("a", 1)]);
        let nu3 = Monomial::of(&[("nu", 3)]);
        assert_eq!(a.lex_cmp(&nu3), Ordering::Greater);
        assert_eq!(Monomial::one().lex_cmp(&nu3), Ordering::Less);
        let a2 = Monomial::of(&[("a", 2)]);
        assert_eq!(a2.lex_cmp(&a.mul(&nu3)), Ordering::Greater);
    }

    #[test]
    fn reserved_names_are_rejected() {
        let mut table = SymbolTable::default();
        assert!(matches!(table.declare("t", rat(0, 1)), Err(RingError::ReservedSymbol(_))));
        assert!(matches!(table.declare("nu", rat(0, 1)), Err(RingError::DuplicateSymbol(_))));
        assert!(table.declare("kappa", rat(0, 1)).is_ok());
    }

    #[test]
    fn default_grades() {
        let table = SymbolTable::default();
        assert_eq!(table.grade(&Symbol::new("omega")), rat(3, 2));
        assert_eq!(Monomial::of(&[("a", 1), ("nu", 1)]).grade(&table), rat(1, 1));
    }
}
