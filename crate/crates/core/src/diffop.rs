//! Differential operators `sum c_ij(t, x) Dt^i Dx^j` with coefficients from
//! the exact ring, kept with coefficients to the left of derivatives.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::parity::BracketKind;
use crate::ring::{Rational, RingElement, RingError, ScaledMonomial, Symbol, SymbolTable, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffOpError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("cannot reduce modulo an operator that is not Dt plus Dt-free terms: {0}")]
    UnsupportedModulus(String),
}

/// A wavefunction is just a ring element; Gaussian factors live in its
/// exponentials.
pub type WaveFunction = RingElement;

/// Scaling dimension of an operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradeValue {
    Homogeneous(Rational),
    Inhomogeneous,
}

impl GradeValue {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            GradeValue::Homogeneous(g) => Some(g),
            GradeValue::Inhomogeneous => None,
        }
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct DiffOp {
    terms: BTreeMap<(u32, u32), RingElement>,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp { terms: BTreeMap::new() }
    }

    /// The identity operator.
    pub fn one() -> Self {
        DiffOp::mul_by(RingElement::one())
    }

    pub fn dt() -> Self {
        DiffOp::term(RingElement::one(), 1, 0)
    }

    pub fn dx() -> Self {
        DiffOp::term(RingElement::one(), 0, 1)
    }

    /// Multiplication by a ring element.
    pub fn mul_by(c: RingElement) -> Self {
        DiffOp::term(c, 0, 0)
    }

    pub fn term(c: RingElement, dt: u32, dx: u32) -> Self {
        let mut out = DiffOp::zero();
        out.accumulate(dt, dx, c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (RingElement, u32, u32)>>(terms: I) -> Self {
        let mut out = DiffOp::zero();
        for (c, dt, dx) in terms {
            out.accumulate(dt, dx, c);
        }
        out
    }

    fn accumulate(&mut self, dt: u32, dx: u32, c: RingElement) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&(dt, dx)) {
            Some(prev) => &prev + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert((dt, dx), sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending `(dt, dx)` order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&(u32, u32), &RingElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, dt: u32, dx: u32) -> RingElement {
        self.terms.get(&(dt, dx)).cloned().unwrap_or_default()
    }

    /// Highest total derivative order; zero for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn max_dt(&self) -> Option<u32> {
        self.terms.keys().map(|(i, _)| *i).max()
    }

    /// The operator as a plain multiplication, if it has no derivatives.
    pub fn as_multiplication(&self) -> Option<RingElement> {
        if self.terms.keys().all(|k| *k == (0, 0)) {
            Some(self.coefficient(0, 0))
        } else {
            None
        }
    }

    /// Left multiplication `c * P`.
    pub fn left_mul(&self, c: &RingElement) -> Self {
        DiffOp::from_terms(self.terms.iter().map(|(&(i, j), d)| (c * d, i, j)))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        DiffOp::from_terms(self.terms.iter().map(|(&(i, j), d)| (d.scale(q), i, j)))
    }

    /// Operator product `self ∘ other`, expanded by the Leibniz rule.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero();
        for (&(k, l), d) in &other.terms {
            let max_i = self.terms.keys().map(|(i, _)| *i).max().unwrap_or(0);
            let max_j = self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0);
            // derivs[p][q] = Dt^p Dx^q d
            let mut derivs: Vec<Vec<RingElement>> = Vec::with_capacity(max_i as usize + 1);
            let mut row_start = d.clone();
            for _ in 0..=max_i {
                let mut row = Vec::with_capacity(max_j as usize + 1);
                let mut cur = row_start.clone();
                for _ in 0..=max_j {
                    let next = cur.derive(Var::X);
                    row.push(cur);
                    cur = next;
                }
                derivs.push(row);
                row_start = row_start.derive(Var::T);
            }
            for (&(i, j), c) in &self.terms {
                for p in 0..=i {
                    for q in 0..=j {
                        let dd = &derivs[p as usize][q as usize];
                        if dd.is_zero() {
                            continue;
                        }
                        let weight = binomial(i, p) * binomial(j, q);
                        out.accumulate(i - p + k, j - q + l, (c * dd).scale(&weight));
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, other: &DiffOp, kind: BracketKind) -> DiffOp {
        let pq = self.compose(other);
        let qp = other.compose(self);
        match kind {
            BracketKind::Commutator => &pq - &qp,
            BracketKind::Anticommutator => &pq + &qp,
        }
    }

    pub fn commutator(&self, other: &DiffOp) -> DiffOp {
        self.bracket(other, BracketKind::Commutator)
    }

    pub fn anticommutator(&self, other: &DiffOp) -> DiffOp {
        self.bracket(other, BracketKind::Anticommutator)
    }

    pub fn pow(&self, n: u32) -> DiffOp {
        let mut out = DiffOp::one();
        for _ in 0..n {
            out = out.compose(self);
        }
        out
    }

    /// Applies the operator to a wavefunction.
    pub fn apply(&self, psi: &WaveFunction) -> WaveFunction {
        let mut out = RingElement::zero();
        for (&(i, j), c) in &self.terms {
            let d = psi.derive_n(Var::T, i).derive_n(Var::X, j);
            out = &out + &(c * &d);
        }
        out
    }

    /// Scaling dimension with `[Dt] = 1`, `[Dx] = 1/2`, `[t] = -1`,
    /// `[x] = -1/2` and symbol dimensions from `table`. The zero operator
    /// reports grade 0.
    pub fn grading(&self, table: &SymbolTable) -> GradeValue {
        let mut grade: Option<Rational> = None;
        for (&(i, j), c) in &self.terms {
            let Some(cg) = c.grade(table) else {
                return GradeValue::Inhomogeneous;
            };
            let g = cg + Rational::from_integer(i.into()) + Rational::new(j.into(), 2.into());
            match &grade {
                None => grade = Some(g),
                Some(prev) if *prev == g => {}
                Some(_) => return GradeValue::Inhomogeneous,
            }
        }
        GradeValue::Homogeneous(grade.unwrap_or_else(Rational::zero))
    }

    /// Similarity transform `e^g ∘ P ∘ e^(-g)`, computed by substituting
    /// `Dt -> Dt - g_t` and `Dx -> Dx - g_x`.
    pub fn conjugate_exp(&self, g: &RingElement) -> DiffOp {
        let dt = &DiffOp::dt() - &DiffOp::mul_by(g.derive(Var::T));
        let dx = &DiffOp::dx() - &DiffOp::mul_by(g.derive(Var::X));
        let mut out = DiffOp::zero();
        for (&(i, j), c) in &self.terms {
            let shifted = dt.pow(i).compose(&dx.pow(j)).left_mul(c);
            out = &out + &shifted;
        }
        out
    }

    /// Changes coordinates by `x -> x + b`; derivatives are unaffected.
    pub fn shift_x(&self, b: &ScaledMonomial) -> Result<DiffOp, DiffOpError> {
        let mut out = DiffOp::zero();
        for (&(i, j), c) in &self.terms {
            out.accumulate(i, j, c.shift_x(b)?);
        }
        Ok(out)
    }

    pub fn substitute(&self, sym: &Symbol, value: &ScaledMonomial) -> Result<DiffOp, DiffOpError> {
        let mut out = DiffOp::zero();
        for (&(i, j), c) in &self.terms {
            out.accumulate(i, j, c.substitute(sym, value)?);
        }
        Ok(out)
    }

    /// Left division by `omega = Dt + L` (with `L` free of `Dt`):
    /// returns `(q, r)` with `self = q ∘ omega + r` and `r` free of `Dt`.
    pub fn reduce_mod(&self, omega: &DiffOp) -> Result<(DiffOp, DiffOp), DiffOpError> {
        check_modulus(omega)?;
        let mut quotient = DiffOp::zero();
        let mut rest = self.clone();
        while let Some(top) = rest.max_dt().filter(|&i| i > 0) {
            let leading: Vec<((u32, u32), RingElement)> =
                rest.terms.iter().filter(|((i, _), _)| *i == top).map(|(k, c)| (*k, c.clone())).collect();
            for ((i, j), c) in leading {
                let step = DiffOp::term(c, i - 1, j);
                rest = &rest - &step.compose(omega);
                quotient = &quotient + &step;
            }
        }
        Ok((quotient, rest))
    }

    /// True when no coefficient or derivative involves `x`.
    pub fn is_t_only(&self) -> bool {
        self.terms.iter().all(|(&(_, j), c)| j == 0 && !c.depends_on(Var::X))
    }
}

fn check_modulus(omega: &DiffOp) -> Result<(), DiffOpError> {
    let mut has_unit_dt = false;
    for (&(i, j), c) in &omega.terms {
        match (i, j) {
            (0, _) => {}
            (1, 0) if c.is_one() => has_unit_dt = true,
            (1, 0) => return Err(DiffOpError::UnsupportedModulus("the Dt coefficient must be 1".to_string())),
            _ => return Err(DiffOpError::UnsupportedModulus(format!("unexpected term Dt^{i} Dx^{j}"))),
        }
    }
    if has_unit_dt {
        Ok(())
    } else {
        Err(DiffOpError::UnsupportedModulus("missing Dt term".to_string()))
    }
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut out = Rational::one();
    for m in 0..k {
        out = out * Rational::from_integer((n - m).into()) / Rational::from_integer((m + 1).into());
    }
    out
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.accumulate(i, j, c.clone());
        }
        out
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.accumulate(i, j, -c);
        }
        out
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Neg for DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        -&self
    }
}

/// `*` on operators is composition.
impl Mul for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        self.compose(rhs)
    }
}

impl Mul<&DiffOp> for &RingElement {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        rhs.left_mul(self)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for DiffOp {
            type Output = DiffOp;
            fn $m(self, rhs: DiffOp) -> DiffOp {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&DiffOp> for DiffOp {
            type Output = DiffOp;
            fn $m(self, rhs: &DiffOp) -> DiffOp {
                (&self).$m(rhs)
            }
        }
        impl $tr<DiffOp> for &DiffOp {
            type Output = DiffOp;
            fn $m(self, rhs: DiffOp) -> DiffOp {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Mul<DiffOp> for RingElement {
    type Output = DiffOp;
    fn mul(self, rhs: DiffOp) -> DiffOp {
        rhs.left_mul(&self)
    }
}

impl Mul<&DiffOp> for RingElement {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        rhs.left_mul(&self)
    }
}

impl Mul<DiffOp> for &RingElement {
    type Output = DiffOp;
    fn mul(self, rhs: DiffOp) -> DiffOp {
        rhs.left_mul(self)
    }
}

impl From<RingElement> for DiffOp {
    fn from(c: RingElement) -> Self {
        DiffOp::mul_by(c)
    }
}

impl Zero for DiffOp {
    fn zero() -> Self {
        DiffOp::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
