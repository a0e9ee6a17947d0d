//! Shared strategies and a floating-point operator oracle that does not go
//! through the symbolic kernel.

#![allow(dead_code)]

use std::rc::Rc;

use duality_core::diffop::DiffOp;
use duality_core::ring::{rat, ExpArg, ExpBase, Monomial, RingElement, RingTerm};
use proptest::prelude::*;

pub fn arb_rational() -> impl Strategy<Value = duality_core::ring::Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn arb_monomial() -> impl Strategy<Value = Monomial> {
    (-1i32..=2, 0i32..=2).prop_map(|(i, j)| Monomial::of(&[("a", i), ("nu", j)]))
}

pub fn arb_exp() -> impl Strategy<Value = ExpArg> {
    prop_oneof![
        3 => Just(ExpArg::zero()),
        1 => (prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2)], any::<bool>()).prop_map(|(k, with_sym)| {
            let m = if with_sym { Monomial::of(&[("a", 1), ("nu", 1)]) } else { Monomial::one() };
            ExpArg::single(ExpBase::T, rat(k, 1), m)
        }),
        1 => prop_oneof![Just(-1i64), Just(1)]
            .prop_map(|s| ExpArg::single(ExpBase::X2, rat(s, 2), Monomial::of(&[("nu", 1)]))),
    ]
}

pub fn arb_term() -> impl Strategy<Value = RingTerm> {
    (arb_rational(), arb_monomial(), 0u32..=2, 0u32..=2, arb_exp())
        .prop_map(|(c, m, i, j, e)| RingTerm::new(c, m, i, j, e))
}

pub fn arb_ring(max_terms: usize) -> impl Strategy<Value = RingElement> {
    prop::collection::vec(arb_term(), 0..=max_terms).prop_map(RingElement::from_terms)
}

/// Operators with `Dt`, `Dx` orders up to `max_order` each.
pub fn arb_diffop(max_terms: usize, max_order: u32) -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((arb_ring(2), 0..=max_order, 0..=max_order), 0..=max_terms).prop_map(DiffOp::from_terms)
}

pub type Field = Rc<dyn Fn(f64, f64) -> f64>;

pub fn field(f: impl Fn(f64, f64) -> f64 + 'static) -> Field {
    Rc::new(f)
}

/// Central difference in `t` (`axis = 0`) or `x` (`axis = 1`).
pub fn partial(f: &Field, axis: usize, h: f64) -> Field {
    let f = f.clone();
    field(
        move |t, x| {
            if axis == 0 {
                (f(t + h, x) - f(t - h, x)) / (2.0 * h)
            } else {
                (f(t, x + h) - f(t, x - h)) / (2.0 * h)
            }
        },
    )
}

/// `f_xx` with a single second difference, which is less noisy than
/// nesting two first differences.
pub fn second_x(f: &Field, h: f64) -> Field {
    let f = f.clone();
    field(move |t, x| (f(t, x + h) - 2.0 * f(t, x) + f(t, x - h)) / (h * h))
}

/// First-order operator `c_t Dt + c_x Dx + c_0` with numeric coefficients.
#[derive(Clone)]
pub struct NumOp {
    pub ct: Field,
    pub cx: Field,
    pub c0: Field,
}

impl NumOp {
    pub fn apply(&self, f: &Field, h: f64) -> Field {
        let (ft, fx, f0) = (partial(f, 0, h), partial(f, 1, h), f.clone());
        let (ct, cx, c0) = (self.ct.clone(), self.cx.clone(), self.c0.clone());
        field(move |t, x| ct(t, x) * ft(t, x) + cx(t, x) * fx(t, x) + c0(t, x) * f0(t, x))
    }
}

/// The quadratic-potential generators transcribed as plain closures.
pub fn oscillator_generators(a: f64, nu: f64) -> Vec<(&'static str, NumOp)> {
    let k = a * nu;
    let zero = || field(|_, _| 0.0);
    vec![
        (
            "z_p1",
            NumOp {
                ct: field(move |t, _| (4.0 * k * t).exp()),
                cx: field(move |t, x| (4.0 * k * t).exp() * 2.0 * k * x),
                c0: field(move |t, x| (4.0 * k * t).exp() * (k - 2.0 * a * nu * nu * x * x)),
            },
        ),
        ("z_0", NumOp { ct: field(|_, _| 1.0), cx: zero(), c0: zero() }),
        (
            "z_m1",
            NumOp {
                ct: field(move |t, _| (-4.0 * k * t).exp()),
                cx: field(move |t, x| -(-4.0 * k * t).exp() * 2.0 * k * x),
                c0: field(move |t, x| (-4.0 * k * t).exp() * (-k - 2.0 * a * nu * nu * x * x)),
            },
        ),
        (
            "w_p",
            NumOp {
                ct: zero(),
                cx: field(move |t, _| (2.0 * k * t).exp()),
                c0: field(move |t, x| -(2.0 * k * t).exp() * nu * x),
            },
        ),
        (
            "w_m",
            NumOp {
                ct: zero(),
                cx: field(move |t, _| (-2.0 * k * t).exp()),
                c0: field(move |t, x| (-2.0 * k * t).exp() * nu * x),
            },
        ),
        ("c", NumOp { ct: zero(), cx: zero(), c0: field(|_, _| 1.0) }),
    ]
}

/// Smooth probe function used to compare operator actions pointwise.
pub fn probe() -> Field {
    field(|t, x| (0.3 * t - 0.2 * x * x + 0.5 * x).exp() * (1.0 + 0.1 * t * x))
}

/// `Omega psi` for `Omega = Dt + a Dx^2 - a nu^2 x^2`, by finite differences.
pub fn oscillator_wave_operator(psi: &Field, a: f64, nu: f64, h: f64) -> Field {
    let (pt, pxx, p) = (partial(psi, 0, h), second_x(psi, h), psi.clone());
    field(move |t, x| pt(t, x) + a * pxx(t, x) - a * nu * nu * x * x * p(t, x))
}

/// `|got - want| / max(1, |want|)`.
pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}
