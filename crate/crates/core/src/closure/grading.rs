//! Generator grades read off the adjoint action of the Cartan generator.

use crate::closure::{adjoint_grade, FracPoly};
use crate::reps::{build_extended_rep, RepCase, C, W_0, W_M, W_M1, W_P, W_P1, Z_0, Z_M1, Z_P1};
use crate::ring::{rat, Monomial, Rational, ScaledMonomial};

/// Eigenvalue of `[z_0, ·]` that corresponds to grade 1.
pub fn grade_unit(case: RepCase) -> FracPoly {
    match case {
        RepCase::Quadratic => FracPoly::scaled(&ScaledMonomial::new(rat(4, 1), Monomial::of(&[("a", 1), ("nu", 1)]))),
        RepCase::Constant | RepCase::Linear => FracPoly::int(-1),
    }
}

/// Grade assigned to each named generator.
pub fn expected_grade(name: &str) -> Option<Rational> {
    let g = match name {
        Z_P1 | W_P1 => rat(1, 1),
        Z_M1 | W_M1 => rat(-1, 1),
        W_P => rat(1, 2),
        W_M => rat(-1, 2),
        Z_0 | C | W_0 => rat(0, 1),
        _ => return None,
    };
    Some(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradeRow {
    pub name: String,
    pub grade: Option<FracPoly>,
    pub expected: Option<Rational>,
}

impl GradeRow {
    pub fn matches(&self) -> bool {
        match (&self.grade, &self.expected) {
            (Some(g), Some(e)) => g.constant_value().as_ref() == Some(e),
            _ => false,
        }
    }
}

/// Adjoint grades of the nine generators of `case`.
pub fn generator_grades(case: RepCase) -> Vec<GradeRow> {
    let basis = build_extended_rep(case);
    let cartan = basis.get(Z_0).expect("z_0 present");
    let unit = grade_unit(case);
    basis
        .iter()
        .map(|g| GradeRow {
            name: g.name.clone(),
            grade: adjoint_grade(cartan, &g.op, &unit),
            expected: expected_grade(&g.name),
        })
        .collect()
}
