//! Algebraic laws checked on random ring elements and operators.

mod common;

use common::{arb_diffop, arb_rational, arb_ring};
use duality_core::cli::parse::parse_operator;
use duality_core::closure::{express_in_basis, Expansion, FracPoly};
use duality_core::diffop::DiffOp;
use duality_core::parity::Parity;
use duality_core::reps::{build_rep, RepCase};
use duality_core::ring::{RingElement, ScaledMonomial, Symbol, Var};
use proptest::prelude::*;

fn arb_parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

fn graded(p: &DiffOp, pp: Parity, q: &DiffOp, qp: Parity) -> DiffOp {
    p.bracket(q, pp.bracket_kind(qp))
}

fn signed(op: DiffOp, p: Parity, q: Parity) -> DiffOp {
    if p.sign(q) < 0 {
        -op
    } else {
        op
    }
}

proptest! {
    #[test]
    fn ring_is_a_commutative_ring(a in arb_ring(3), b in arb_ring(3), c in arb_ring(3)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &RingElement::one(), a.clone());
    }

    #[test]
    fn derivatives_obey_leibniz(a in arb_ring(3), b in arb_ring(3)) {
        for v in [Var::T, Var::X] {
            let lhs = (&a * &b).derive(v);
            let rhs = &(&a.derive(v) * &b) + &(&a * &b.derive(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn composition_is_associative_and_acts(p in arb_diffop(2, 2), q in arb_diffop(2, 2), r in arb_diffop(2, 1), psi in arb_ring(2)) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!((&p * &q).apply(&psi), p.apply(&q.apply(&psi)));
    }

    #[test]
    fn graded_jacobi_for_any_parity_labels(
        p in arb_diffop(2, 1), q in arb_diffop(2, 1), r in arb_diffop(2, 1),
        pp in arb_parity(), qp in arb_parity(), rp in arb_parity(),
    ) {
        let qr = graded(&q, qp, &r, rp);
        let rp_ = graded(&r, rp, &p, pp);
        let pq = graded(&p, pp, &q, qp);
        let total = &(&signed(graded(&p, pp, &qr, qp + rp), pp, rp)
            + &signed(graded(&q, qp, &rp_, rp + pp), qp, pp))
            + &signed(graded(&r, rp, &pq, pp + qp), rp, qp);
        prop_assert!(total.is_zero(), "{}", total);
    }

    #[test]
    fn graded_antisymmetry(p in arb_diffop(2, 2), q in arb_diffop(2, 2), pp in arb_parity(), qp in arb_parity()) {
        let lhs = graded(&p, pp, &q, qp);
        let rhs = signed(-graded(&q, qp, &p, pp), pp, qp);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn specialization_is_a_homomorphism(p in arb_diffop(2, 1), q in arb_diffop(2, 1)) {
        let (s, v) = (Symbol::new("nu"), ScaledMonomial::nu_specialization());
        let (Ok(ps), Ok(qs), Ok(pqs)) = (p.substitute(&s, &v), q.substitute(&s, &v), (&p * &q).substitute(&s, &v)) else {
            return Err(TestCaseError::reject("leaves the ring"));
        };
        prop_assert_eq!(pqs, &ps * &qs);
    }

    #[test]
    fn expansion_recovers_known_coefficients(coeffs in prop::collection::vec(arb_rational(), 6)) {
        let basis = build_rep(RepCase::Quadratic);
        let target = basis.iter().zip(&coeffs).fold(DiffOp::zero(), |acc, (g, c)| &acc + &g.op.scale(c));
        let Expansion::InSpan(found) = express_in_basis(&target, &basis) else {
            return Err(TestCaseError::fail("combination of the basis left the span"));
        };
        for (g, c) in basis.iter().zip(&coeffs) {
            let got = found.iter().find(|(_, n)| *n == g.name).map(|(q, _)| q.clone()).unwrap_or_else(FracPoly::zero);
            prop_assert_eq!(got.constant_value(), Some(c.clone()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printing_then_parsing_is_identity(p in arb_diffop(3, 2)) {
        let text = p.to_string();
        let back = parse_operator(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, p, "{}", text);
    }
}
