//! Expansion of an operator in a named basis with coefficients in the
//! symbol fraction field.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::fracpoly::FracPoly;
use super::mpoly::MPoly;
use crate::basis::NamedBasis;
use crate::diffop::DiffOp;
use crate::parity::BracketKind;
use crate::ring::{ExpArg, ExpBase, Monomial, Rational, RingElement};

/// Laurent polynomial in the symbols.
pub type Laurent = BTreeMap<Monomial, Rational>;

/// Position of a component that structure constants cannot mix: matrix slot,
/// derivative orders, powers of t and x, and the exponential factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentKey {
    pub slot: u32,
    pub dt: u32,
    pub dx: u32,
    pub tdeg: u32,
    pub xdeg: u32,
    pub exp: ExpArg,
}

impl fmt::Display for ComponentKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (name, n) in [("t", self.tdeg), ("x", self.xdeg)] {
            match n {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{n}")),
            }
        }
        if !self.exp.is_zero() {
            parts.push(format!("exp({})", exp_arg_string(&self.exp)));
        }
        for (name, n) in [("Dt", self.dt), ("Dx", self.dx)] {
            match n {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{n}")),
            }
        }
        let body = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
        if self.slot == 0 {
            f.write_str(&body)
        } else {
            write!(f, "[{}] {body}", self.slot)
        }
    }
}

fn exp_arg_string(arg: &ExpArg) -> String {
    let mut out = String::new();
    for (i, (base, mono, q)) in arg.entries().enumerate() {
        let mut s = String::new();
        let _ = super::mpoly::write_scaled(&mut s, &num_traits::Signed::abs(q), mono);
        let neg = num_traits::Signed::is_negative(q);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let var = match base {
            ExpBase::T => "t",
            ExpBase::X2 => "x^2",
        };
        if s == "1" {
            out.push_str(var);
        } else {
            out.push_str(&format!("{s}*{var}"));
        }
    }
    out
}

/// Operators that can be bracketed, rescaled by symbol-only ring elements and
/// decomposed into independent components.
pub trait Operand: Clone {
    fn bracket_with(&self, other: &Self, kind: BracketKind) -> Self;
    fn sum(&self, other: &Self) -> Self;
    fn scaled_by(&self, c: &RingElement) -> Self;
    fn is_zero_op(&self) -> bool;
    fn components(&self) -> BTreeMap<ComponentKey, Laurent>;

    fn negated(&self) -> Self {
        self.scaled_by(&RingElement::int(-1))
    }

    fn difference(&self, other: &Self) -> Self {
        self.sum(&other.negated())
    }
}

impl Operand for DiffOp {
    fn bracket_with(&self, other: &Self, kind: BracketKind) -> Self {
        self.bracket(other, kind)
    }

    fn sum(&self, other: &Self) -> Self {
        self + other
    }

    fn scaled_by(&self, c: &RingElement) -> Self {
        self.left_mul(c)
    }

    fn is_zero_op(&self) -> bool {
        self.is_zero()
    }

    fn components(&self) -> BTreeMap<ComponentKey, Laurent> {
        diffop_components(self, 0)
    }
}

pub(crate) fn diffop_components(op: &DiffOp, slot: u32) -> BTreeMap<ComponentKey, Laurent> {
    let mut out = BTreeMap::new();
    for (&(dt, dx), coeff) in op.terms() {
        for ((tdeg, xdeg, exp), laurent) in coeff.split_symbolic() {
            out.insert(ComponentKey { slot, dt, dx, tdeg, xdeg, exp }, laurent);
        }
    }
    out
}

/// Witness that a target is outside the span: a component on which every
/// elimination step leaves a nonzero remainder.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanCertificate {
    pub key: ComponentKey,
    pub remainder: FracPoly,
}

impl fmt::Display for SpanCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "component {} has unmatched coefficient {}", self.key, self.remainder)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expansion {
    /// Nonzero coefficients in basis order.
    InSpan(Vec<(FracPoly, String)>),
    NotInSpan(SpanCertificate),
}

impl Expansion {
    pub fn is_in_span(&self) -> bool {
        matches!(self, Expansion::InSpan(_))
    }

    pub fn coefficients(&self) -> Option<&[(FracPoly, String)]> {
        match self {
            Expansion::InSpan(c) => Some(c),
            Expansion::NotInSpan(_) => None,
        }
    }
}

/// Rebuilds `target * D` and `Σ (cᵢ D) gᵢ` with `D` the common denominator
/// and reports whether they agree.
pub fn verify_expansion<T: Operand>(target: &T, coeffs: &[(FracPoly, String)], basis: &NamedBasis<T>) -> bool {
    let den = coeffs.iter().fold(MPoly::one(), |acc, (c, _)| {
        let g = acc.gcd(c.denom());
        acc.mul(&c.denom().div_exact(&g).expect("gcd divides"))
    });
    let lhs = target.scaled_by(&mpoly_to_ring(&den));
    let mut rhs: Option<T> = None;
    for (c, name) in coeffs {
        let Some(g) = basis.get(name) else { return false };
        let scaled_num = c.numer().mul(&den.div_exact(c.denom()).expect("lcm is a multiple"));
        let term = g.scaled_by(&mpoly_to_ring(&scaled_num));
        rhs = Some(match rhs {
            None => term,
            Some(acc) => acc.sum(&term),
        });
    }
    match rhs {
        None => lhs.is_zero_op(),
        Some(r) => lhs.difference(&r).is_zero_op(),
    }
}

pub fn mpoly_to_ring(p: &MPoly) -> RingElement {
    p.terms().fold(RingElement::zero(), |acc, (m, q)| {
        &acc + &RingElement::scaled(crate::ring::ScaledMonomial::new(q.clone(), m.clone()))
    })
}

/// Expresses `target` as a combination of the basis with coefficients free of
/// t, x and exponentials.
///
/// Columns are eliminated in basis order so a linearly dependent basis keeps
/// the earliest generator; the pivot row is the sparsest candidate.
pub fn express_in_basis<T: Operand>(target: &T, basis: &NamedBasis<T>) -> Expansion {
    let cols: Vec<BTreeMap<ComponentKey, Laurent>> = basis.iter().map(|g| g.op.components()).collect();
    let rhs = target.components();
    let keys: BTreeSet<ComponentKey> = cols.iter().flat_map(|c| c.keys().cloned()).chain(rhs.keys().cloned()).collect();
    let n = cols.len();

    // Each row is cleared of negative exponents by a monomial factor so the
    // elimination runs over polynomials.
    let mut rows: Vec<(ComponentKey, Vec<MPoly>)> = Vec::with_capacity(keys.len());
    for key in keys {
        let entries: Vec<Option<&Laurent>> =
            cols.iter().map(|c| c.get(&key)).chain(std::iter::once(rhs.get(&key))).collect();
        let shift =
            entries.iter().flatten().flat_map(|l| l.keys()).fold(Monomial::one(), |acc, m| acc.lcm(&m.numer_denom().1));
        let row = entries
            .into_iter()
            .map(|e| match e {
                None => MPoly::zero(),
                Some(l) => l.iter().fold(MPoly::zero(), |acc, (m, q)| acc.add(&MPoly::term(q.clone(), m.mul(&shift)))),
            })
            .collect();
        rows.push((key, row));
    }

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = MPoly::one();
    let mut next_row = 0;
    for col in 0..n {
        let candidate =
            (next_row..rows.len()).filter(|&r| !rows[r].1[col].is_zero()).min_by_key(|&r| (rows[r].1[col].len(), r));
        let Some(p) = candidate else { continue };
        rows.swap(next_row, p);
        let pivot_row = rows[next_row].1.clone();
        let pv = pivot_row[col].clone();
        for (_, row) in rows.iter_mut().skip(next_row + 1) {
            let lead = row[col].clone();
            for j in col..=n {
                let updated = pv.mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                row[j] = if prev.is_one() { updated } else { updated.div_exact(&prev).unwrap_or(updated) };
            }
        }
        prev = pv;
        pivots.push((next_row, col));
        next_row += 1;
    }

    if let Some((key, row)) = rows[next_row..].iter().find(|(_, row)| !row[n].is_zero()) {
        return Expansion::NotInSpan(SpanCertificate {
            key: key.clone(),
            remainder: FracPoly::from_poly(row[n].clone()),
        });
    }

    let mut solution: Vec<FracPoly> = vec![FracPoly::zero(); n];
    for &(r, c) in pivots.iter().rev() {
        let row = &rows[r].1;
        let mut acc = FracPoly::from_poly(row[n].clone());
        for &(_, c2) in pivots.iter().filter(|&&(_, c2)| c2 > c) {
            if !row[c2].is_zero() {
                acc = acc.sub(&FracPoly::from_poly(row[c2].clone()).mul(&solution[c2]));
            }
        }
        solution[c] = acc.div(&FracPoly::from_poly(row[c].clone())).expect("pivot is nonzero");
    }

    Expansion::InSpan(solution.into_iter().zip(basis.names()).filter(|(c, _)| !c.is_zero()).collect())
}

/// `Σ cᵢ·gᵢ` for Laurent coefficients; `None` when a coefficient is a general
/// rational function and cannot act as a ring element.
pub fn combine<T: Operand>(coeffs: &[(FracPoly, String)], basis: &NamedBasis<T>, zero: T) -> Option<T> {
    let mut acc = zero;
    for (c, name) in coeffs {
        let g = basis.get(name)?;
        acc = acc.sum(&g.scaled_by(&c.to_ring()?));
    }
    Some(acc)
}
