//! Rational functions in the declared symbols: the scalar field over which
//! operators are expanded in a basis.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use super::mpoly::{write_scaled, MPoly};
use crate::ring::{Monomial, Rational, RingElement, ScaledMonomial, Symbol};

/// `num / den` with `gcd(num, den) = 1` and `den` monic; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FracPoly {
    num: MPoly,
    den: MPoly,
}

impl FracPoly {
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return FracPoly::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coefficient();
        let inv = lc.recip();
        FracPoly { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero() -> Self {
        FracPoly { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> Self {
        FracPoly::from_poly(MPoly::one())
    }

    pub fn from_poly(p: MPoly) -> Self {
        FracPoly { num: p, den: MPoly::one() }
    }

    pub fn constant(q: Rational) -> Self {
        FracPoly::from_poly(MPoly::constant(q))
    }

    pub fn int(n: i64) -> Self {
        FracPoly::constant(Rational::from_integer(n.into()))
    }

    pub fn scaled(s: &ScaledMonomial) -> Self {
        let mut map = BTreeMap::new();
        map.insert(s.mono.clone(), s.coeff.clone());
        FracPoly::from_laurent(&map)
    }

    /// Converts a Laurent polynomial by clearing negative exponents.
    pub fn from_laurent(terms: &BTreeMap<Monomial, Rational>) -> Self {
        let shift = terms.keys().fold(Monomial::one(), |acc, m| acc.lcm(&m.numer_denom().1));
        let mut num = MPoly::zero();
        for (m, q) in terms {
            num = num.add(&MPoly::term(q.clone(), m.mul(&shift)));
        }
        FracPoly::new(num, MPoly::term(Rational::one(), shift))
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        Some(self.num.constant_value()? / self.den.constant_value()?)
    }

    pub fn add(&self, other: &FracPoly) -> FracPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return FracPoly::new(self.num.add(&other.num), self.den.clone());
        }
        FracPoly::new(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn neg(&self) -> FracPoly {
        FracPoly { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &FracPoly) -> FracPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FracPoly) -> FracPoly {
        if self.is_zero() || other.is_zero() {
            return FracPoly::zero();
        }
        FracPoly::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Option<FracPoly> {
        if self.is_zero() {
            None
        } else {
            Some(FracPoly::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn div(&self, other: &FracPoly) -> Option<FracPoly> {
        Some(self.mul(&other.inv()?))
    }

    /// Equality by cross multiplication; agrees with `==` on normalized values.
    pub fn eq_cross(&self, other: &FracPoly) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Substitutes `sym -> coeff * mono` (a Laurent monomial).
    pub fn substitute(&self, sym: &Symbol, value: &ScaledMonomial) -> Option<FracPoly> {
        let num = FracPoly::from_laurent(&self.num.substitute_laurent(sym, &value.coeff, &value.mono)?);
        let den = FracPoly::from_laurent(&self.den.substitute_laurent(sym, &value.coeff, &value.mono)?);
        num.div(&den)
    }

    /// The value as a Laurent polynomial, possible when the denominator is a
    /// single monomial.
    pub fn to_laurent(&self) -> Option<BTreeMap<Monomial, Rational>> {
        let (dq, dm) = self.den.as_monomial()?;
        let inv = dq.recip();
        let dm_inv = dm.inv();
        Some(self.num.terms().map(|(m, q)| (m.mul(&dm_inv), q * &inv)).collect())
    }

    /// The value as a symbol-only ring element, when it is Laurent.
    pub fn to_ring(&self) -> Option<RingElement> {
        let map = self.to_laurent()?;
        Some(
            map.into_iter()
                .map(|(m, q)| RingElement::scaled(ScaledMonomial::new(q, m)))
                .fold(RingElement::zero(), |acc, e| &acc + &e),
        )
    }

    pub fn from_ring_constant(e: &RingElement) -> Option<FracPoly> {
        if !e.is_symbolic_constant() {
            return None;
        }
        let map: BTreeMap<Monomial, Rational> = e.terms().map(|(k, q)| (k.mono.clone(), q.clone())).collect();
        Some(FracPoly::from_laurent(&map))
    }

    pub fn eval(&self, values: &dyn Fn(&Symbol) -> f64) -> f64 {
        let ev = |p: &MPoly| -> f64 {
            p.terms()
                .map(|(m, q)| {
                    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
                        * m.iter().map(|(s, e)| values(s).powi(e)).product::<f64>()
                })
                .sum()
        };
        ev(&self.num) / ev(&self.den)
    }
}

impl fmt::Display for FracPoly {
    /// Fixed coefficient grammar: `-8*a*nu`, `-4/a`, `1/(2*a^2)`, or
    /// `(p)/(q)` for general rational functions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if let (Some((nq, nm)), Some((dq, dm))) = (self.num.as_monomial(), self.den.as_monomial()) {
            let q = nq / dq;
            if q.is_negative() {
                f.write_str("-")?;
            }
            return write_scaled(f, &q.abs(), &nm.div(&dm));
        }
        let num = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        let den = if self.den.len() > 1 || self.den.as_monomial().is_some_and(|(_, m)| m.iter().count() > 1) {
            format!("({})", self.den)
        } else {
            self.den.to_string()
        };
        write!(f, "{num}/{den}")
    }
}

impl fmt::Debug for FracPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FracPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl From<i64> for FracPoly {
    fn from(n: i64) -> Self {
        FracPoly::int(n)
    }
}
