//! Canonical text form of ring elements and operators. The output is valid
//! input for the expression parser.

use std::fmt;

use num_traits::{One, Signed};

use crate::diffop::DiffOp;
use crate::ring::{ExpArg, ExpBase, Monomial, Rational, RingElement, TermKey};

fn power(name: &str, n: impl Into<i64>) -> String {
    let n = n.into();
    if n == 1 {
        name.to_string()
    } else {
        format!("{name}^{n}")
    }
}

/// `|q| * mono * extras` written as `num/den` with parenthesized compound
/// denominators.
fn product(q: &Rational, mono: &Monomial, extras: &[String]) -> String {
    let (up, down) = mono.numer_denom();
    let mut num: Vec<String> = up.iter().map(|(s, e)| power(s.name(), e)).collect();
    num.extend(extras.iter().cloned());
    if !q.numer().is_one() || num.is_empty() {
        num.insert(0, q.numer().to_string());
    }
    let mut den: Vec<String> = down.iter().map(|(s, e)| power(s.name(), e)).collect();
    if !q.denom().is_one() {
        den.insert(0, q.denom().to_string());
    }
    let mut out = num.join("*");
    match den.len() {
        0 => {}
        1 => out.push_str(&format!("/{}", den[0])),
        _ => out.push_str(&format!("/({})", den.join("*"))),
    }
    out
}

fn join_signed(f: &mut fmt::Formatter<'_>, parts: &[(bool, String)]) -> fmt::Result {
    if parts.is_empty() {
        return f.write_str("0");
    }
    for (i, (neg, body)) in parts.iter().enumerate() {
        match (i, neg) {
            (0, true) => write!(f, "-{body}")?,
            (0, false) => f.write_str(body)?,
            (_, true) => write!(f, " - {body}")?,
            (_, false) => write!(f, " + {body}")?,
        }
    }
    Ok(())
}

pub fn exp_arg_to_string(arg: &ExpArg) -> String {
    let parts: Vec<(bool, String)> = arg
        .entries()
        .map(|(base, mono, q)| {
            let var = match base {
                ExpBase::T => "t".to_string(),
                ExpBase::X2 => "x^2".to_string(),
            };
            (q.is_negative(), product(&q.abs(), mono, &[var]))
        })
        .collect();
    DisplayParts(parts).to_string()
}

struct DisplayParts(Vec<(bool, String)>);

impl fmt::Display for DisplayParts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        join_signed(f, &self.0)
    }
}

fn term_parts(key: &TermKey, q: &Rational, derivative: &[String]) -> (bool, String) {
    let mut extras = Vec::new();
    if key.tdeg > 0 {
        extras.push(power("t", key.tdeg));
    }
    if key.xdeg > 0 {
        extras.push(power("x", key.xdeg));
    }
    if !key.exp.is_zero() {
        extras.push(format!("exp({})", exp_arg_to_string(&key.exp)));
    }
    let body = product(&q.abs(), &key.mono, &extras);
    let body = match (body.as_str(), derivative.is_empty()) {
        (_, true) => body,
        ("1", false) => derivative.join("*"),
        _ => format!("{body}*{}", derivative.join("*")),
    };
    (q.is_negative(), body)
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.terms().map(|(k, q)| term_parts(k, q, &[])).collect();
        join_signed(f, &parts)
    }
}

impl fmt::Display for DiffOp {
    /// Derivative orders descending, each coefficient expanded term by term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (&(dt, dx), coeff) in self.terms().rev() {
            let mut d = Vec::new();
            if dt > 0 {
                d.push(power("Dt", dt));
            }
            if dx > 0 {
                d.push(power("Dx", dx));
            }
            parts.extend(coeff.terms().map(|(k, q)| term_parts(k, q, &d)));
        }
        join_signed(f, &parts)
    }
}
