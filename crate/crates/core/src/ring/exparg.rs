use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use super::{rational_pow, Monomial, Rational, RingError, ScaledMonomial, Symbol, SymbolTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExpBase {
    /// Exponent linear in `t`.
    T,
    /// Exponent proportional to `x^2` (Gaussian factors).
    X2,
}

/// Argument of an exponential factor: `sum_k r_k * m_k * base_k` with at most
/// one entry per `(base, monomial)` and no zero coefficients.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExpArg(BTreeMap<(ExpBase, Monomial), Rational>);

impl ExpArg {
    pub fn zero() -> Self {
        ExpArg(BTreeMap::new())
    }

    pub fn single(base: ExpBase, coeff: Rational, mono: Monomial) -> Self {
        let mut out = ExpArg::zero();
        out.add_entry(base, mono, coeff);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (ExpBase, &Monomial, &Rational)> {
        self.0.iter().map(|((b, m), r)| (*b, m, r))
    }

    pub fn entries_of(&self, base: ExpBase) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.0.iter().filter(move |((b, _), _)| *b == base).map(|((_, m), r)| (m, r))
    }

    pub fn has_base(&self, base: ExpBase) -> bool {
        self.0.keys().any(|(b, _)| *b == base)
    }

    fn add_entry(&mut self, base: ExpBase, mono: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let key = (base, mono);
        let sum = match self.0.remove(&key) {
            Some(prev) => prev + coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.0.insert(key, sum);
        }
    }

    pub fn add(&self, other: &ExpArg) -> ExpArg {
        let mut out = self.clone();
        for ((b, m), r) in &other.0 {
            out.add_entry(*b, m.clone(), r.clone());
        }
        out
    }

    pub fn neg(&self) -> ExpArg {
        ExpArg(self.0.iter().map(|(k, r)| (k.clone(), -r)).collect())
    }

    pub fn substitute(&self, sym: &Symbol, value: &ScaledMonomial) -> Result<ExpArg, RingError> {
        let mut out = ExpArg::zero();
        for ((b, m), r) in &self.0 {
            let (k, rest) = m.split(sym);
            if k == 0 {
                out.add_entry(*b, m.clone(), r.clone());
                continue;
            }
            let factor = rational_pow(&value.coeff, k)?;
            out.add_entry(*b, rest.mul(&value.mono.pow(k)), r * factor);
        }
        Ok(out)
    }

    /// True when every exponent is dimensionless, so the factor does not
    /// change the scaling dimension of a term.
    pub fn is_dimensionless(&self, table: &SymbolTable) -> bool {
        // [t] = -1 and [x^2] = -1, so the coefficient must carry dimension 1.
        self.0.keys().all(|(_, m)| m.grade(table) == Rational::from_integer(1.into()))
    }

    pub fn eval(&self, env: &super::NumericEnv, t: f64, x: f64) -> f64 {
        self.0
            .iter()
            .map(|((b, m), r)| {
                let c = r.to_f64().unwrap_or(f64::NAN) * env.monomial(m);
                match b {
                    ExpBase::T => c * t,
                    ExpBase::X2 => c * x * x,
                }
            })
            .sum()
    }
}
