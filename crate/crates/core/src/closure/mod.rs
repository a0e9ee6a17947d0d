//! Exact structure constants over the symbol fraction field.

mod fracpoly;
mod grading;
mod linear;
mod mpoly;
mod table;

pub use fracpoly::FracPoly;
pub use grading::{expected_grade, generator_grades, grade_unit, GradeRow};
pub(crate) use linear::diffop_components;
pub use linear::{
    combine, express_in_basis, mpoly_to_ring, verify_expansion, ComponentKey, Expansion, Laurent, Operand,
    SpanCertificate,
};
pub use mpoly::MPoly;
pub use table::{
    adjoint_grade, bracket_kind_for, closure_table, describe, duality_check, jacobi_check_operators,
    jacobi_check_table, DualityReport, JacobiReport, OddPairComparison, StructureTable, TableEntry, TableFailure,
    TableKind,
};
