//! Multivariate polynomials over the rationals in the declared symbols.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::ring::{Monomial, Rational, Symbol};

/// Polynomial with rational coefficients and non-negative exponents.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MPoly::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        MPoly::term(q, Monomial::one())
    }

    pub fn term(q: Rational, mono: Monomial) -> Self {
        debug_assert!(mono.is_polynomial(), "negative exponent in polynomial term");
        let mut out = MPoly::zero();
        out.accumulate(mono, q);
        out
    }

    pub fn var(sym: &Symbol) -> Self {
        MPoly::term(Rational::one(), Monomial::var(sym.clone(), 1))
    }

    fn accumulate(&mut self, mono: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&mono) {
            Some(prev) => prev + q,
            None => q,
        };
        if !sum.is_zero() {
            self.terms.insert(mono, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == MPoly::one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Number of terms; emptiness is `is_zero`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms sorted by decreasing lex order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.lex_cmp(a.0));
        v
    }

    pub fn as_monomial(&self) -> Option<(Rational, Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, q)| (q.clone(), m.clone()))
        } else {
            None
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, q)| q.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.accumulate(m.clone(), q.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.accumulate(m.clone(), -q);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect() }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, q1) in &self.terms {
            for (m2, q2) in &other.terms {
                out.accumulate(m1.mul(m2), q1 * q2);
            }
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> MPoly {
        if q.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    pub fn mul_monomial(&self, q: &Rational, mono: &Monomial) -> MPoly {
        if q.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c * q)).collect() }
    }

    /// Scales so that the lex-leading coefficient is 1.
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            None => MPoly::zero(),
            Some((_, lc)) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.iter().map(|(s, _)| s.clone())).collect()
    }

    pub fn degree_in(&self, sym: &Symbol) -> i32 {
        self.terms.keys().map(|m| m.exponent(sym)).max().unwrap_or(0)
    }

    /// Coefficients as a univariate polynomial in `sym`.
    pub fn coeffs_in(&self, sym: &Symbol) -> BTreeMap<i32, MPoly> {
        let mut out: BTreeMap<i32, MPoly> = BTreeMap::new();
        for (m, q) in &self.terms {
            let (e, rest) = m.split(sym);
            out.entry(e).or_default().accumulate(rest, q.clone());
        }
        out
    }

    fn coeff_in(&self, sym: &Symbol, deg: i32) -> MPoly {
        let mut out = MPoly::zero();
        for (m, q) in &self.terms {
            let (e, rest) = m.split(sym);
            if e == deg {
                out.accumulate(rest, q.clone());
            }
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (dm, dq) = d.leading_term()?;
        let (dm, dq) = (dm.clone(), dq.clone());
        let mut quotient = MPoly::zero();
        let mut rest = self.clone();
        while let Some((rm, rq)) = rest.leading_term() {
            if !dm.divides(rm) {
                return None;
            }
            let m = rm.div(&dm);
            let q = rq / &dq;
            rest = rest.sub(&d.mul_monomial(&q, &m));
            quotient.accumulate(m, q);
        }
        Some(quotient)
    }

    /// Greatest common divisor, normalized to be monic (zero only when both
    /// inputs are zero).
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return MPoly::one();
        }
        let (ma, mb) = (self.monomial_content(), other.monomial_content());
        let mono = ma.gcd(&mb);
        let a = self.mul_monomial(&Rational::one(), &ma.inv());
        let b = other.mul_monomial(&Rational::one(), &mb.inv());
        let g = gcd_recursive(&a, &b);
        g.mul_monomial(&Rational::one(), &mono).monic()
    }

    /// Largest monomial dividing every term.
    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = it.next().cloned().unwrap_or_default();
        it.fold(first, |acc, m| acc.gcd(m))
    }

    /// Gcd of the coefficients when viewed as a polynomial in `sym`.
    fn content_in(&self, sym: &Symbol) -> MPoly {
        self.coeffs_in(sym).values().fold(MPoly::zero(), |acc, c| acc.gcd(c))
    }

    fn pseudo_rem(&self, divisor: &MPoly, sym: &Symbol) -> MPoly {
        let n = divisor.degree_in(sym);
        let lc = divisor.coeff_in(sym, n);
        let mut rest = self.clone();
        while !rest.is_zero() && rest.degree_in(sym) >= n {
            let dr = rest.degree_in(sym);
            let lr = rest.coeff_in(sym, dr);
            let shift = Monomial::var(sym.clone(), dr - n);
            rest = rest.mul(&lc).sub(&lr.mul(&divisor.mul_monomial(&Rational::one(), &shift)));
        }
        rest
    }

    pub fn substitute_laurent(
        &self,
        sym: &Symbol,
        coeff: &Rational,
        mono: &Monomial,
    ) -> Option<BTreeMap<Monomial, Rational>> {
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, q) in &self.terms {
            let (e, rest) = m.split(sym);
            if e > 0 && coeff.is_zero() {
                continue;
            }
            let factor: Rational = num_traits::pow::Pow::pow(coeff, e);
            let key = rest.mul(&mono.pow(e));
            let entry = out.entry(key).or_insert_with(Rational::zero);
            *entry += q * factor;
        }
        out.retain(|_, q| !q.is_zero());
        Some(out)
    }

    pub fn cmp_lex(&self, other: &MPoly) -> Ordering {
        let a = self.sorted_terms();
        let b = other.sorted_terms();
        for (x, y) in a.iter().zip(b.iter()) {
            match x.0.lex_cmp(y.0).then_with(|| x.1.cmp(y.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }
}

fn gcd_recursive(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let vars: BTreeSet<Symbol> = a.variables().union(&b.variables()).cloned().collect();
    let v = vars.iter().next_back().expect("non-constant polynomial has a variable").clone();
    let ca = a.content_in(&v);
    let cb = b.content_in(&v);
    let content = ca.gcd(&cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(&v) < q.degree_in(&v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        if q.degree_in(&v) == 0 {
            // q is primitive and free of v, hence a unit.
            p = MPoly::one();
            break;
        }
        let r = p.pseudo_rem(&q, &v);
        p = q;
        q = if r.is_zero() {
            r
        } else {
            let c = r.content_in(&v);
            r.div_exact(&c).expect("content divides")
        };
    }
    let pp = if p.degree_in(&v) == 0 {
        MPoly::one()
    } else {
        let c = p.content_in(&v);
        p.div_exact(&c).expect("content divides")
    };
    content.mul(&pp).monic()
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, q)) in self.sorted_terms().into_iter().enumerate() {
            let neg = q.is_negative();
            let abs = q.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            write_scaled(f, &abs, m)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Writes a non-negative rational multiple of a Laurent monomial as
/// `p*m/(q*n)` with the grammar accepted by the expression parser.
pub(crate) fn write_scaled(f: &mut impl fmt::Write, q: &Rational, m: &Monomial) -> fmt::Result {
    let (num_m, den_m) = m.numer_denom();
    let mut num: Vec<String> = Vec::new();
    if !q.numer().is_one() || num_m.is_one() {
        num.push(q.numer().to_string());
    }
    num.extend(factor_strings(&num_m));
    let mut den: Vec<String> = Vec::new();
    if !q.denom().is_one() {
        den.push(q.denom().to_string());
    }
    den.extend(factor_strings(&den_m));
    f.write_str(&num.join("*"))?;
    match den.len() {
        0 => Ok(()),
        1 => write!(f, "/{}", den[0]),
        _ => write!(f, "/({})", den.join("*")),
    }
}

pub(crate) fn factor_strings(m: &Monomial) -> Vec<String> {
    m.iter().map(|(s, e)| if e == 1 { s.to_string() } else { format!("{s}^{e}") }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn v(n: &str) -> MPoly {
        MPoly::var(&Symbol::new(n))
    }

    fn c(n: i64) -> MPoly {
        MPoly::constant(rat(n, 1))
    }

    #[test]
    fn exact_division() {
        let a = v("a");
        let nu = v("nu");
        let p = a.add(&nu).mul(&a.sub(&nu));
        assert_eq!(p.div_exact(&a.add(&nu)).unwrap(), a.sub(&nu));
        assert!(p.div_exact(&a.add(&c(1))).is_none());
    }

    #[test]
    fn gcd_of_products() {
        let a = v("a");
        let nu = v("nu");
        let om = v("omega");
        let common = a.mul(&nu).add(&c(1));
        let p = common.mul(&a.add(&om));
        let q = common.mul(&nu.sub(&om)).mul(&c(3));
        assert_eq!(p.gcd(&q), common.monic());
    }

    #[test]
    fn gcd_with_monomial_factors() {
        let a = v("a");
        let nu = v("nu");
        let p = a.mul(&a).mul(&nu);
        let q = a.mul(&nu).mul(&nu).scale(&rat(-4, 1));
        assert_eq!(p.gcd(&q), a.mul(&nu));
    }

    #[test]
    fn coprime_gives_one() {
        let a = v("a");
        let nu = v("nu");
        assert!(a.add(&c(1)).gcd(&nu.add(&c(2))).is_one());
        assert!(a.gcd(&c(5)).is_one());
    }

    #[test]
    fn display_grammar() {
        let p = v("a").mul(&v("nu")).scale(&rat(-8, 1));
        assert_eq!(p.to_string(), "-8*a*nu");
        let q = v("a").add(&c(1)).scale(&rat(1, 2));
        assert_eq!(q.to_string(), "a/2 + 1/2");
    }
}
