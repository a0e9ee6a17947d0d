//! Differential-operator realizations of the Schrödinger algebra for the
//! free, linear and harmonic potentials, their nine-generator enlargements,
//! and the evolution operators `Omega = Dt + a Dx^2 - a V(x)`.

use std::fmt;
use std::str::FromStr;

use crate::basis::{BasisError, NamedBasis};
use crate::diffop::DiffOp;
use crate::parity::Parity;
use crate::ring::{rat, ExpArg, ExpBase, Monomial, RingElement, Symbol};

/// Generator names, in basis order.
pub const Z_P1: &str = "z_p1";
pub const Z_0: &str = "z_0";
pub const Z_M1: &str = "z_m1";
pub const W_P: &str = "w_p";
pub const W_M: &str = "w_m";
pub const C: &str = "c";
pub const W_P1: &str = "w_p1";
pub const W_0: &str = "w_0s";
pub const W_M1: &str = "w_m1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RepCase {
    /// `V(x) = 0`
    Constant,
    /// `V(x) = omega x`
    Linear,
    /// `V(x) = nu^2 x^2`
    Quadratic,
}

impl RepCase {
    pub const ALL: [RepCase; 3] = [RepCase::Constant, RepCase::Linear, RepCase::Quadratic];

    pub fn short_name(self) -> &'static str {
        match self {
            RepCase::Constant => "const",
            RepCase::Linear => "lin",
            RepCase::Quadratic => "quad",
        }
    }

    /// Symbols used by the case besides `a`.
    pub fn active_symbols(self) -> Vec<Symbol> {
        match self {
            RepCase::Constant => vec![],
            RepCase::Linear => vec![Symbol::new("omega")],
            RepCase::Quadratic => vec![Symbol::new("nu")],
        }
    }

    pub fn potential(self) -> RingElement {
        match self {
            RepCase::Constant => RingElement::zero(),
            RepCase::Linear => s("omega") * RingElement::x(),
            RepCase::Quadratic => s("nu") * s("nu") * RingElement::x() * RingElement::x(),
        }
    }
}

impl fmt::Display for RepCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for RepCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "const" | "constant" => Ok(RepCase::Constant),
            "lin" | "linear" => Ok(RepCase::Linear),
            "quad" | "quadratic" => Ok(RepCase::Quadratic),
            other => Err(format!("unknown case `{other}` (expected const, lin or quad)")),
        }
    }
}

fn s(name: &str) -> RingElement {
    RingElement::symbol(name)
}

fn q(n: i64, d: i64) -> RingElement {
    RingElement::constant(rat(n, d))
}

fn t() -> RingElement {
    RingElement::t()
}

fn x() -> RingElement {
    RingElement::x()
}

fn inv_a() -> RingElement {
    RingElement::symbol_pow("a", -1)
}

/// `exp(k * a * nu * t)`
fn e_ant(k: i64) -> RingElement {
    RingElement::exp_of(ExpArg::single(ExpBase::T, rat(k, 1), Monomial::of(&[("a", 1), ("nu", 1)])))
}

fn dt() -> DiffOp {
    DiffOp::dt()
}

fn dx() -> DiffOp {
    DiffOp::dx()
}

fn mul(c: RingElement) -> DiffOp {
    DiffOp::mul_by(c)
}

/// The six first-order generators `z_p1, z_0, z_m1, w_p, w_m, c` of the
/// given case, with `w_p`, `w_m` odd.
pub fn build_rep(case: RepCase) -> NamedBasis<DiffOp> {
    let (a, nu, om) = (s("a"), s("nu"), s("omega"));
    let gens = match case {
        RepCase::Constant => [
            dt(),
            t() * dt() + q(1, 2) * x() * dx() + mul(q(1, 4)),
            t() * t() * dt() + t() * x() * dx() + mul(-(x() * x() * q(1, 4) * inv_a()) + q(1, 2) * t()),
            dx(),
            t() * dx() - mul(x() * q(1, 2) * inv_a()),
            DiffOp::one(),
        ],
        RepCase::Linear => {
            let a2 = &a * &a;
            let a3 = &a2 * &a;
            let om2 = &om * &om;
            let t2 = t() * t();
            let t3 = &t2 * t();
            let t4 = &t3 * t();
            [
                &t2 * dt()
                    + (&a2 * &om * &t3 + t() * x()) * dx()
                    + mul(q(1, 2) * t()
                        - q(1, 4) * &a3 * &om2 * &t4
                        - q(3, 2) * &a * &om * &t2 * x()
                        - q(1, 4) * x() * x() * inv_a()),
                -(t() * dt()) - (q(3, 2) * &a2 * &om * &t2 + q(1, 2) * x()) * dx()
                    + mul(q(1, 2) * &a3 * &om2 * &t3 + q(3, 2) * &a * &om * t() * x() - q(1, 4)),
                dt() + (q(2, 1) * &a2 * &om * t()) * dx() - mul(&a3 * &om2 * &t2 + &a * &om * x()),
                -(t() * dx()) + mul(q(1, 2) * x() * inv_a() + q(1, 2) * &a * &om * &t2),
                dx() - mul(&a * &om * t()),
                DiffOp::one(),
            ]
        }
        RepCase::Quadratic => {
            let anu = &a * &nu;
            let anu2 = &anu * &nu;
            [
                e_ant(4) * (dt() + (q(2, 1) * &anu * x()) * dx() + mul(&anu - q(2, 1) * &anu2 * x() * x())),
                dt(),
                e_ant(-4) * (dt() - (q(2, 1) * &anu * x()) * dx() - mul(&anu + q(2, 1) * &anu2 * x() * x())),
                e_ant(2) * (dx() - mul(&nu * x())),
                e_ant(-2) * (dx() + mul(&nu * x())),
                DiffOp::one(),
            ]
        }
    };
    let names = [Z_P1, Z_0, Z_M1, W_P, W_M, C];
    let parities = [Parity::Even, Parity::Even, Parity::Even, Parity::Odd, Parity::Odd, Parity::Even];
    let mut basis = NamedBasis::new();
    for ((name, op), parity) in names.into_iter().zip(gens).zip(parities) {
        basis.push(name, op, parity).expect("fixed names are unique");
    }
    basis
}

/// Appends `w_p1 = {w_p, w_p}`, `w_0s = {w_p, w_m}`, `w_m1 = {w_m, w_m}`
/// as even generators.
pub fn extend_rep(basis: &NamedBasis<DiffOp>) -> Result<NamedBasis<DiffOp>, BasisError> {
    let wp = basis.require(W_P)?;
    let wm = basis.require(W_M)?;
    let mut out = basis.clone();
    out.push(W_P1, wp.anticommutator(wp), Parity::Even)?;
    out.push(W_0, wp.anticommutator(wm), Parity::Even)?;
    out.push(W_M1, wm.anticommutator(wm), Parity::Even)?;
    Ok(out)
}

pub fn build_extended_rep(case: RepCase) -> NamedBasis<DiffOp> {
    extend_rep(&build_rep(case)).expect("six-generator basis has w_p and w_m")
}

/// `Omega = Dt + a Dx^2 - a V(x)`.
pub fn build_omega(case: RepCase) -> DiffOp {
    let a = s("a");
    dt() + &a * (dx() * dx()) - mul(&a * &case.potential())
}

/// The combination of generators identified with `Omega` in each case:
/// `z_p1 + a/2 w_p1`, `z_m1 + a/2 w_m1` and `z_0 + a/2 w_0s`.
pub fn omega_combination(case: RepCase) -> [(RingElement, &'static str); 2] {
    let half_a = q(1, 2) * s("a");
    match case {
        RepCase::Constant => [(RingElement::one(), Z_P1), (half_a, W_P1)],
        RepCase::Linear => [(RingElement::one(), Z_M1), (half_a, W_M1)],
        RepCase::Quadratic => [(RingElement::one(), Z_0), (half_a, W_0)],
    }
}

pub fn omega_identity_check(case: RepCase) -> bool {
    let basis = build_extended_rep(case);
    let combo = omega_combination(case)
        .iter()
        .fold(DiffOp::zero(), |acc, (c, name)| acc + basis.get(name).expect("generator").left_mul(c));
    combo == build_omega(case)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::GradeValue;
    use crate::ring::SymbolTable;

    #[test]
    fn constant_case_z_m1() {
        let basis = build_rep(RepCase::Constant);
        let expected = t() * t() * dt() + t() * x() * dx() - mul(x() * x() * q(1, 4) * inv_a()) + mul(q(1, 2) * t());
        assert_eq!(basis.get(Z_M1).unwrap(), &expected);
    }

    #[test]
    fn linear_case_w_m() {
        let basis = build_rep(RepCase::Linear);
        assert_eq!(basis.get(W_M).unwrap(), &(dx() - mul(s("a") * s("omega") * t())));
    }

    #[test]
    fn quadratic_w_p_squared_is_half_w_p1() {
        let basis = build_rep(RepCase::Quadratic);
        let wp = basis.get(W_P).unwrap();
        let nu = s("nu");
        let expected =
            e_ant(4) * (dx() * dx() - (q(2, 1) * &nu * x()) * dx() + mul(-nu.clone() + &nu * &nu * x() * x()));
        assert_eq!(wp.compose(wp), expected);
    }

    #[test]
    fn enlarged_generators_match_printed_forms() {
        let c = build_extended_rep(RepCase::Constant);
        let w0 = q(2, 1) * t() * (dx() * dx()) - (x() * inv_a()) * dx() - mul(q(1, 2) * inv_a());
        assert_eq!(c.get(W_0).unwrap(), &w0);

        let l = build_extended_rep(RepCase::Linear);
        let (a, om) = (s("a"), s("omega"));
        let wm1 = q(2, 1) * (dx() * dx()) - (q(4, 1) * &a * t() * &om) * dx()
            + mul(q(2, 1) * &a * &a * t() * t() * &om * &om);
        assert_eq!(l.get(W_M1).unwrap(), &wm1);

        let qd = build_extended_rep(RepCase::Quadratic);
        let nu = s("nu");
        let wm1 = e_ant(-4)
            * (q(2, 1) * (dx() * dx())
                + (q(4, 1) * &nu * x()) * dx()
                + mul(q(2, 1) * &nu + q(2, 1) * &nu * &nu * x() * x()));
        assert_eq!(qd.get(W_M1).unwrap(), &wm1);
    }

    #[test]
    fn omega_builders() {
        let a = s("a");
        assert_eq!(build_omega(RepCase::Constant), dt() + &a * (dx() * dx()));
        assert_eq!(build_omega(RepCase::Linear), dt() + &a * (dx() * dx()) - mul(&a * s("omega") * x()));
    }

    #[test]
    fn omega_identities_hold() {
        for case in RepCase::ALL {
            assert!(omega_identity_check(case), "{case}");
        }
    }

    #[test]
    fn every_generator_is_homogeneous_in_scaling_dimension() {
        let table = SymbolTable::default();
        for case in RepCase::ALL {
            for g in build_extended_rep(case).iter() {
                assert!(matches!(g.op.grading(&table), GradeValue::Homogeneous(_)), "{case} {}", g.name);
            }
        }
    }

    #[test]
    fn generators_are_onshell_symmetries() {
        for case in RepCase::ALL {
            let omega = build_omega(case);
            for g in build_rep(case).iter() {
                let (_, r) = omega.compose(&g.op).reduce_mod(&omega).unwrap();
                assert!(r.is_zero(), "{case} {} leaves {r:?}", g.name);
            }
        }
    }

    #[test]
    fn printed_linear_z0_with_cubic_omega_is_not_a_symmetry() {
        // The cubic-in-omega term has the wrong scaling dimension; the
        // quadratic one is forced by the on-shell condition.
        let (a, om) = (s("a"), s("omega"));
        let t3 = t() * t() * t();
        let printed = -(t() * dt()) - (q(3, 2) * &a * &a * &om * t() * t() + q(1, 2) * x()) * dx()
            + mul(q(1, 2) * &a * &a * &a * &om * &om * &om * &t3 + q(3, 2) * &a * &om * t() * x() - q(1, 4));
        let omega = build_omega(RepCase::Linear);
        let (_, r) = omega.compose(&printed).reduce_mod(&omega).unwrap();
        assert!(!r.is_zero());
    }
}
