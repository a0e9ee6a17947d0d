use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use super::{rational_pow, ExpArg, ExpBase, Monomial, Rational, RingError, ScaledMonomial, Symbol, SymbolTable};

/// Independent variable of differentiation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    X,
}

/// Everything in a term except its rational coefficient. Terms with equal
/// keys are like terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub mono: Monomial,
    pub tdeg: u32,
    pub xdeg: u32,
    pub exp: ExpArg,
}

impl TermKey {
    pub fn constant(mono: Monomial) -> Self {
        TermKey { mono, tdeg: 0, xdeg: 0, exp: ExpArg::zero() }
    }

    fn mul(&self, other: &TermKey) -> TermKey {
        TermKey {
            mono: self.mono.mul(&other.mono),
            tdeg: self.tdeg + other.tdeg,
            xdeg: self.xdeg + other.xdeg,
            exp: self.exp.add(&other.exp),
        }
    }

    /// True when the term depends on the symbols only.
    pub fn is_symbolic_constant(&self) -> bool {
        self.tdeg == 0 && self.xdeg == 0 && self.exp.is_zero()
    }
}

/// One summand `coeff * mono * t^tdeg * x^xdeg * exp(exp)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingTerm {
    pub coeff: Rational,
    pub mono: Monomial,
    pub tdeg: u32,
    pub xdeg: u32,
    pub exp: ExpArg,
}

impl RingTerm {
    pub fn new(coeff: Rational, mono: Monomial, tdeg: u32, xdeg: u32, exp: ExpArg) -> Self {
        RingTerm { coeff, mono, tdeg, xdeg, exp }
    }

    fn into_parts(self) -> (TermKey, Rational) {
        (TermKey { mono: self.mono, tdeg: self.tdeg, xdeg: self.xdeg, exp: self.exp }, self.coeff)
    }
}

/// Element of the coefficient ring in normalized form: like terms merged,
/// zero terms dropped, keys sorted. Structural equality is ring equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct RingElement {
    terms: BTreeMap<TermKey, Rational>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        RingElement::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        RingElement::scaled(ScaledMonomial::constant(q))
    }

    pub fn int(n: i64) -> Self {
        RingElement::constant(Rational::from_integer(n.into()))
    }

    pub fn scaled(value: ScaledMonomial) -> Self {
        let mut out = RingElement::zero();
        out.accumulate(TermKey::constant(value.mono), value.coeff);
        out
    }

    pub fn symbol(name: &str) -> Self {
        RingElement::symbol_pow(name, 1)
    }

    pub fn symbol_pow(name: &str, exp: i32) -> Self {
        RingElement::scaled(ScaledMonomial::new(Rational::one(), Monomial::var(Symbol::new(name), exp)))
    }

    pub fn t() -> Self {
        RingElement::var_pow(Var::T, 1)
    }

    pub fn x() -> Self {
        RingElement::var_pow(Var::X, 1)
    }

    pub fn var_pow(var: Var, n: u32) -> Self {
        let (tdeg, xdeg) = match var {
            Var::T => (n, 0),
            Var::X => (0, n),
        };
        let mut out = RingElement::zero();
        out.accumulate(TermKey { mono: Monomial::one(), tdeg, xdeg, exp: ExpArg::zero() }, Rational::one());
        out
    }

    pub fn exp_of(arg: ExpArg) -> Self {
        let mut out = RingElement::zero();
        out.accumulate(TermKey { mono: Monomial::one(), tdeg: 0, xdeg: 0, exp: arg }, Rational::one());
        out
    }

    /// `exp(arg)` for an argument of the form `sum r*m*t + sum s*n*x^2`.
    pub fn exp(arg: &RingElement) -> Result<Self, RingError> {
        Ok(RingElement::exp_of(arg.to_exp_arg()?))
    }

    /// Reads `self` as an exponent argument.
    pub fn to_exp_arg(&self) -> Result<ExpArg, RingError> {
        let mut out = ExpArg::zero();
        for (k, c) in &self.terms {
            let base = match (k.tdeg, k.xdeg) {
                (1, 0) => ExpBase::T,
                (0, 2) => ExpBase::X2,
                _ => return Err(RingError::ExponentOutOfSpan(format!("{self:?}"))),
            };
            if !k.exp.is_zero() {
                return Err(RingError::ExponentOutOfSpan(format!("{self:?}")));
            }
            out = out.add(&ExpArg::single(base, c.clone(), k.mono.clone()));
        }
        Ok(out)
    }

    /// Normalizes an arbitrary list of terms.
    pub fn from_terms<I: IntoIterator<Item = RingTerm>>(terms: I) -> Self {
        let mut out = RingElement::zero();
        for term in terms {
            let (k, c) = term.into_parts();
            out.accumulate(k, c);
        }
        out
    }

    /// Re-normalizes the term list. Elements are always kept normalized, so
    /// this is the identity on values built through the public API.
    pub fn normalize(&self) -> Self {
        RingElement::from_terms(self.to_terms())
    }

    pub fn to_terms(&self) -> Vec<RingTerm> {
        self.terms
            .iter()
            .map(|(k, c)| RingTerm::new(c.clone(), k.mono.clone(), k.tdeg, k.xdeg, k.exp.clone()))
            .collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Rational)> {
        self.terms.iter()
    }

    /// Number of terms; emptiness is `is_zero`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == RingElement::one()
    }

    fn accumulate(&mut self, key: TermKey, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(prev) => prev + coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    /// True when no term depends on `t`, `x` or an exponential.
    pub fn is_symbolic_constant(&self) -> bool {
        self.terms.keys().all(TermKey::is_symbolic_constant)
    }

    pub fn depends_on(&self, var: Var) -> bool {
        self.terms.keys().any(|k| match var {
            Var::T => k.tdeg > 0 || k.exp.has_base(ExpBase::T),
            Var::X => k.xdeg > 0 || k.exp.has_base(ExpBase::X2),
        })
    }

    /// The element as a single rational multiple of a symbol monomial.
    pub fn as_scaled_monomial(&self) -> Option<ScaledMonomial> {
        if self.is_zero() {
            return Some(ScaledMonomial::constant(Rational::zero()));
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        k.is_symbolic_constant().then(|| ScaledMonomial::new(c.clone(), k.mono.clone()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return RingElement::zero();
        }
        RingElement { terms: self.terms.iter().map(|(k, c)| (k.clone(), c * q)).collect() }
    }

    pub fn mul_scaled(&self, s: &ScaledMonomial) -> Self {
        self * &RingElement::scaled(s.clone())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = RingElement::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Multiplicative inverse of a single symbolic monomial.
    pub fn inverse(&self) -> Result<Self, RingError> {
        let s = self.as_scaled_monomial().ok_or_else(|| RingError::NotMonomial(format!("{self:?}")))?;
        Ok(RingElement::scaled(s.pow(-1)?))
    }

    pub fn derive(&self, var: Var) -> Self {
        let mut out = RingElement::zero();
        for (k, c) in &self.terms {
            match var {
                Var::T => {
                    if k.tdeg > 0 {
                        let mut nk = k.clone();
                        nk.tdeg -= 1;
                        out.accumulate(nk, c * Rational::from_integer(k.tdeg.into()));
                    }
                    for (m, r) in k.exp.entries_of(ExpBase::T) {
                        let mut nk = k.clone();
                        nk.mono = nk.mono.mul(m);
                        out.accumulate(nk, c * r);
                    }
                }
                Var::X => {
                    if k.xdeg > 0 {
                        let mut nk = k.clone();
                        nk.xdeg -= 1;
                        out.accumulate(nk, c * Rational::from_integer(k.xdeg.into()));
                    }
                    for (m, r) in k.exp.entries_of(ExpBase::X2) {
                        let mut nk = k.clone();
                        nk.mono = nk.mono.mul(m);
                        nk.xdeg += 1;
                        out.accumulate(nk, c * r * Rational::from_integer(2.into()));
                    }
                }
            }
        }
        out
    }

    pub fn derive_n(&self, var: Var, n: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..n {
            if out.is_zero() {
                break;
            }
            out = out.derive(var);
        }
        out
    }

    /// Replaces every occurrence of `sym`, including inside exponents, by a
    /// rational multiple of a monomial.
    pub fn substitute(&self, sym: &Symbol, value: &ScaledMonomial) -> Result<Self, RingError> {
        let mut out = RingElement::zero();
        for (k, c) in &self.terms {
            let (e, rest) = k.mono.split(sym);
            let factor = rational_pow(&value.coeff, e)?;
            let exp = k.exp.substitute(sym, value)?;
            out.accumulate(TermKey { mono: rest.mul(&value.mono.pow(e)), tdeg: k.tdeg, xdeg: k.xdeg, exp }, c * factor);
        }
        Ok(out)
    }

    /// Replaces `x` by `x + b` for an `x`-independent monomial `b`. Gaussian
    /// factors are rejected for nonzero `b` since `(x+b)^2` leaves the span
    /// of the exponent.
    pub fn shift_x(&self, b: &ScaledMonomial) -> Result<Self, RingError> {
        if b.is_zero() {
            return Ok(self.clone());
        }
        let mut out = RingElement::zero();
        for (k, c) in &self.terms {
            if k.exp.has_base(ExpBase::X2) {
                return Err(RingError::ExponentOutOfSpan(
                    "shifted Gaussian factor acquires a linear exponent".to_string(),
                ));
            }
            // (x+b)^n = sum_k C(n,k) x^(n-k) b^k
            let mut binom = Rational::one();
            for j in 0..=k.xdeg {
                let bpow = b.pow(j as i32)?;
                out.accumulate(
                    TermKey { mono: k.mono.mul(&bpow.mono), tdeg: k.tdeg, xdeg: k.xdeg - j, exp: k.exp.clone() },
                    c * &binom * &bpow.coeff,
                );
                binom = binom * Rational::from_integer((k.xdeg - j).into()) / Rational::from_integer((j + 1).into());
            }
        }
        Ok(out)
    }

    /// Scaling dimension of each term, `None` when the element is not
    /// homogeneous (or contains dimensionful exponents).
    pub fn grade(&self, table: &SymbolTable) -> Option<Rational> {
        let mut grade: Option<Rational> = None;
        for k in self.terms.keys() {
            if !k.exp.is_dimensionless(table) {
                return None;
            }
            let g =
                k.mono.grade(table) - Rational::from_integer(k.tdeg.into()) - Rational::new(k.xdeg.into(), 2.into());
            match &grade {
                None => grade = Some(g),
                Some(prev) if *prev == g => {}
                Some(_) => return None,
            }
        }
        grade
    }

    pub fn eval(&self, env: &NumericEnv, t: f64, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| {
                c.to_f64().unwrap_or(f64::NAN)
                    * env.monomial(&k.mono)
                    * t.powi(k.tdeg as i32)
                    * x.powi(k.xdeg as i32)
                    * k.exp.eval(env, t, x).exp()
            })
            .sum()
    }

    /// Symbol-only terms grouped by the remaining key; used by the exact
    /// linear algebra and eigenvalue extraction.
    pub(crate) fn split_symbolic(&self) -> BTreeMap<(u32, u32, ExpArg), BTreeMap<Monomial, Rational>> {
        let mut out: BTreeMap<(u32, u32, ExpArg), BTreeMap<Monomial, Rational>> = BTreeMap::new();
        for (k, c) in &self.terms {
            let slot = out.entry((k.tdeg, k.xdeg, k.exp.clone())).or_default();
            let entry = slot.entry(k.mono.clone()).or_insert_with(Rational::zero);
            *entry += c;
        }
        out
    }
}

/// Numeric values for the symbols, used by floating point oracles.
#[derive(Clone, Debug, Default)]
pub struct NumericEnv {
    values: BTreeMap<Symbol, f64>,
}

impl NumericEnv {
    pub fn new() -> Self {
        NumericEnv::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.values.insert(Symbol::new(name), value);
        self
    }

    pub fn get(&self, sym: &Symbol) -> f64 {
        self.values.get(sym).copied().unwrap_or(f64::NAN)
    }

    pub fn monomial(&self, m: &Monomial) -> f64 {
        m.iter().map(|(s, e)| self.get(s).powi(e)).product()
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.accumulate(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.accumulate(k.clone(), -c);
        }
        out
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.accumulate(k1.mul(k2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: &RingElement) -> RingElement {
                (&self).$m(rhs)
            }
        }
        impl $tr<RingElement> for &RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

impl From<i64> for RingElement {
    fn from(n: i64) -> Self {
        RingElement::int(n)
    }
}

impl From<Rational> for RingElement {
    fn from(q: Rational) -> Self {
        RingElement::constant(q)
    }
}
