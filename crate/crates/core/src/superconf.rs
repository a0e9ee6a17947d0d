//! 2×2 matrix operators on a boson/fermion column `(φ, ψ)` and the
//! one-dimensional superconformal checks built on them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::basis::NamedBasis;
use crate::closure::{
    closure_table, diffop_components, express_in_basis, jacobi_check_operators, ComponentKey, Expansion, Laurent,
    Operand, StructureTable, TableKind,
};
use crate::diffop::DiffOp;
use crate::parity::{BracketKind, Parity};
use crate::ring::{rat, ExpArg, ExpBase, Monomial, Rational, RingElement};

pub const QP: &str = "Qp";
pub const QM: &str = "Qm";
pub const ZP: &str = "Zp";
pub const ZM: &str = "Zm";
pub const H: &str = "H";

/// `entries[row][col]` maps field `col` into equation/field `row`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixOp {
    pub entries: [[DiffOp; 2]; 2],
    pub parity: Parity,
}

impl MatrixOp {
    pub fn diagonal(phi: DiffOp, psi: DiffOp) -> Self {
        MatrixOp { entries: [[phi, DiffOp::zero()], [DiffOp::zero(), psi]], parity: Parity::Even }
    }

    /// `phi_from_psi` fills the φ-row, `psi_from_phi` the ψ-row.
    pub fn off_diagonal(phi_from_psi: DiffOp, psi_from_phi: DiffOp) -> Self {
        MatrixOp { entries: [[DiffOp::zero(), phi_from_psi], [psi_from_phi, DiffOp::zero()]], parity: Parity::Odd }
    }

    pub fn zero(parity: Parity) -> Self {
        MatrixOp { entries: Default::default(), parity }
    }

    /// Even operators are diagonal, odd ones off-diagonal.
    pub fn shape_matches_parity(&self) -> bool {
        match self.parity {
            Parity::Even => self.entries[0][1].is_zero() && self.entries[1][0].is_zero(),
            Parity::Odd => self.entries[0][0].is_zero() && self.entries[1][1].is_zero(),
        }
    }

    pub fn is_t_only(&self) -> bool {
        self.entries.iter().flatten().all(DiffOp::is_t_only)
    }

    pub fn compose(&self, other: &MatrixOp) -> MatrixOp {
        let e = |r: usize, c: usize| {
            &(&self.entries[r][0] * &other.entries[0][c]) + &(&self.entries[r][1] * &other.entries[1][c])
        };
        let out = MatrixOp { entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]], parity: self.parity + other.parity };
        assert!(out.shape_matches_parity(), "composition broke the parity shape");
        out
    }

    fn zip(&self, other: &MatrixOp, f: impl Fn(&DiffOp, &DiffOp) -> DiffOp) -> MatrixOp {
        let e = |r: usize, c: usize| f(&self.entries[r][c], &other.entries[r][c]);
        MatrixOp { entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]], parity: self.parity }
    }

    pub fn add(&self, other: &MatrixOp) -> MatrixOp {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &MatrixOp) -> MatrixOp {
        self.zip(other, |a, b| a - b)
    }

    pub fn left_mul(&self, c: &RingElement) -> MatrixOp {
        self.zip(self, |a, _| a.left_mul(c))
    }

    pub fn scale(&self, q: &Rational) -> MatrixOp {
        self.zip(self, |a, _| a.scale(q))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(DiffOp::is_zero)
    }

    pub fn apply(&self, column: &[RingElement; 2]) -> [RingElement; 2] {
        let row = |r: usize| &self.entries[r][0].apply(&column[0]) + &self.entries[r][1].apply(&column[1]);
        [row(0), row(1)]
    }
}

impl fmt::Display for MatrixOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]] ({})", self.parity)
    }
}

/// Anticommutator for two odd operators, commutator otherwise.
pub fn graded_matrix_bracket(a: &MatrixOp, b: &MatrixOp) -> MatrixOp {
    a.bracket_with(b, a.parity.bracket_kind(b.parity))
}

impl Operand for MatrixOp {
    fn bracket_with(&self, other: &Self, kind: BracketKind) -> Self {
        let ab = self.compose(other);
        let ba = other.compose(self);
        match kind {
            BracketKind::Commutator => ab.sub(&ba),
            BracketKind::Anticommutator => ab.add(&ba),
        }
    }

    fn sum(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn scaled_by(&self, c: &RingElement) -> Self {
        self.left_mul(c)
    }

    fn is_zero_op(&self) -> bool {
        self.is_zero()
    }

    fn components(&self) -> BTreeMap<ComponentKey, Laurent> {
        let mut out = BTreeMap::new();
        for r in 0..2 {
            for c in 0..2 {
                out.extend(diffop_components(&self.entries[r][c], (2 * r + c) as u32));
            }
        }
        out
    }
}

fn e_t(k: i64) -> RingElement {
    RingElement::exp_of(ExpArg::single(ExpBase::T, rat(k, 1), Monomial::one()))
}

fn shifted_dt(k: i64) -> DiffOp {
    &DiffOp::dt() - &DiffOp::mul_by(RingElement::int(k))
}

/// The hyperbolic generators `Q^±`, `Z^±`, `H`.
pub fn build_n1_hyperbolic() -> NamedBasis<MatrixOp> {
    let q = |s: i64| MatrixOp::off_diagonal(DiffOp::mul_by(e_t(s)), shifted_dt(s).left_mul(&e_t(s)));
    let z = |s: i64| MatrixOp::diagonal(shifted_dt(s).left_mul(&e_t(2 * s)), DiffOp::dt().left_mul(&e_t(2 * s)));
    NamedBasis::new()
        .with(QP, q(1), Parity::Odd)
        .and_then(|b| b.with(QM, q(-1), Parity::Odd))
        .and_then(|b| b.with(ZP, z(1), Parity::Even))
        .and_then(|b| b.with(ZM, z(-1), Parity::Even))
        .and_then(|b| b.with(H, MatrixOp::diagonal(DiffOp::dt(), DiffOp::dt()), Parity::Even))
        .expect("distinct generator names")
}

pub fn sigma_closure_table() -> StructureTable {
    closure_table(&build_n1_hyperbolic(), TableKind::Super)
}

/// Equations of motion `diag(Dt^2 - ε, Dt)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EomOperator {
    pub epsilon: i64,
}

impl EomOperator {
    pub fn new(epsilon: i64) -> Self {
        EomOperator { epsilon }
    }

    pub fn matrix(&self) -> MatrixOp {
        MatrixOp::diagonal(&DiffOp::dt().pow(2) - &DiffOp::mul_by(RingElement::int(self.epsilon)), DiffOp::dt())
    }
}

/// Right remainder of `p` by a t-only operator with leading coefficient 1.
fn right_remainder(p: &DiffOp, e: &DiffOp) -> DiffOp {
    let m = e.max_dt().unwrap_or(0);
    let mut rest = p.clone();
    while let Some(k) = rest.max_dt().filter(|&k| k >= m) {
        let lead = rest.coefficient(k, 0);
        rest = &rest - &(&DiffOp::term(lead, k - m, 0) * e);
    }
    rest
}

/// Per-entry remainders of `E∘G`, each reduced by the equation of the
/// field it acts on.
pub fn eom_residual(g: &MatrixOp, eom: &EomOperator) -> [[DiffOp; 2]; 2] {
    let em = eom.matrix();
    let eg = em.compose(g);
    let cols = [&em.entries[0][0], &em.entries[1][1]];
    let r = |row: usize, col: usize| right_remainder(&eg.entries[row][col], cols[col]);
    [[r(0, 0), r(0, 1)], [r(1, 0), r(1, 1)]]
}

pub fn eom_onshell_check(g: &MatrixOp, eom: &EomOperator) -> bool {
    eom_residual(g, eom).iter().flatten().all(DiffOp::is_zero)
}

/// Result of solving `{X, X} = 2T` for `X = Σ αᵢ Oᵢ` over the odd
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareSearch {
    pub target: String,
    pub unknowns: Vec<String>,
    pub equations: Vec<String>,
    pub solution: Option<Vec<Rational>>,
    pub reason: Option<String>,
}

impl SquareSearch {
    pub fn satisfiable(&self) -> bool {
        self.solution.is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "target": self.target,
            "unknowns": self.unknowns,
            "equations": self.equations,
            "satisfiable": self.satisfiable(),
            "solution": self.solution.as_ref().map(|s| s.iter().map(|q| q.to_string()).collect::<Vec<_>>()),
            "reason": self.reason,
        })
    }
}

impl fmt::Display for SquareSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.solution {
            None => write!(f, "UNSATISFIABLE: {}", self.equations.join(", "))?,
            Some(sol) => {
                let vals: Vec<String> = self.unknowns.iter().zip(sol).map(|(u, q)| format!("{u}={q}")).collect();
                write!(f, "SATISFIABLE: {}", vals.join(", "))?;
            }
        }
        Ok(())
    }
}

fn unknown_names(k: usize) -> Vec<String> {
    match k {
        1 => vec!["alpha".into()],
        2 => vec!["alpha".into(), "beta".into()],
        _ => (1..=k).map(|i| format!("alpha_{i}")).collect(),
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// Scales an equation to coprime integers with a positive leading term.
fn primitive(coeffs: &[Rational], rhs: &Rational) -> (Vec<BigInt>, BigInt) {
    let all: Vec<&Rational> = coeffs.iter().chain(std::iter::once(rhs)).collect();
    let den = all.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = all.iter().map(|q| (*q * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    let sign = if coeffs.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) { -1 } else { 1 };
    let g = if g.is_zero() { BigInt::one() } else { g * sign };
    let mut ints: Vec<BigInt> = ints.into_iter().map(|n| n / &g).collect();
    let rhs = ints.pop().expect("rhs present");
    (ints, rhs)
}

/// Solves `{X, X} = 2·target` with `X` a rational combination of the odd
/// generators of `basis`. The quadratic system is linear in the products
/// `m_ij = αᵢαⱼ`; a solution exists iff that linear system has a solution
/// which is a rational rank-one square.
pub fn square_search(basis: &NamedBasis<MatrixOp>, target_name: &str, target: &MatrixOp) -> SquareSearch {
    let odd: Vec<&MatrixOp> = basis.iter().filter(|g| g.parity.is_odd()).map(|g| &g.op).collect();
    let k = odd.len();
    let unknowns = unknown_names(k);
    let even: NamedBasis<MatrixOp> = basis
        .iter()
        .filter(|g| !g.parity.is_odd())
        .fold(NamedBasis::new(), |b, g| b.with(&g.name, g.op.clone(), g.parity).expect("unique"));
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..k {
        for j in i..k {
            pairs.push((i, j));
        }
    }
    let in_even = |op: &MatrixOp| -> Option<Vec<Rational>> {
        let Expansion::InSpan(c) = express_in_basis(op, &even) else { return None };
        even.names()
            .iter()
            .map(|n| {
                let v = c.iter().find(|(_, m)| m == n).map(|(q, _)| q.clone());
                match v {
                    None => Some(Rational::zero()),
                    Some(q) => q.constant_value(),
                }
            })
            .collect()
    };
    let none = |reason: &str| SquareSearch {
        target: target_name.to_string(),
        unknowns: unknowns.clone(),
        equations: vec![],
        solution: None,
        reason: Some(reason.to_string()),
    };
    // Column for m_ij: contribution of {Oᵢ, Oⱼ} (twice over when i < j).
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for &(i, j) in &pairs {
        let Some(v) = in_even(&odd[i].bracket_with(odd[j], BracketKind::Anticommutator)) else {
            return none("an odd anticommutator leaves the even span");
        };
        let factor = if i == j { Rational::one() } else { rat(2, 1) };
        columns.push(v.into_iter().map(|q| q * &factor).collect());
    }
    let Some(rhs) = in_even(&target.scale(&rat(2, 1))) else {
        return none("target is not in the even span");
    };

    let monomial = |(i, j): (usize, usize)| {
        if i == j {
            format!("{}^2", unknowns[i])
        } else {
            format!("{}*{}", unknowns[i], unknowns[j])
        }
    };
    let mut equations = Vec::new();
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for g in 0..even.len() {
        let coeffs: Vec<Rational> = columns.iter().map(|c| c[g].clone()).collect();
        if coeffs.iter().all(Zero::is_zero) && rhs[g].is_zero() {
            continue;
        }
        let (ints, r) = primitive(&coeffs, &rhs[g]);
        let lhs: Vec<String> = ints
            .iter()
            .zip(&pairs)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, &p)| if c.is_one() { monomial(p) } else { format!("{c}*{}", monomial(p)) })
            .collect();
        let lhs = if lhs.is_empty() { "0".to_string() } else { lhs.join(" + ") };
        equations.push(format!("{lhs}={r}"));
        rows.push((coeffs, rhs[g].clone()));
    }

    let m = match solve_unique(&rows, pairs.len()) {
        Ok(m) => m,
        Err(reason) => {
            return SquareSearch {
                target: target_name.to_string(),
                unknowns,
                equations,
                solution: None,
                reason: Some(reason),
            }
        }
    };
    let mut matrix = vec![vec![Rational::zero(); k]; k];
    for (&(i, j), v) in pairs.iter().zip(&m) {
        matrix[i][j] = v.clone();
        matrix[j][i] = v.clone();
    }
    let solution = rank_one_root(&matrix);
    let reason = solution.is_none().then(|| "products admit no rational factorization".to_string());
    SquareSearch { target: target_name.to_string(), unknowns, equations, solution, reason }
}

/// Solves a square-or-tall rational system, requiring a unique solution.
fn solve_unique(rows: &[(Vec<Rational>, Rational)], n: usize) -> Result<Vec<Rational>, String> {
    let mut a: Vec<Vec<Rational>> =
        rows.iter().map(|(c, r)| c.iter().cloned().chain(std::iter::once(r.clone())).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            *v *= &inv;
        }
        let pivot = a[row].clone();
        for (r, line) in a.iter_mut().enumerate() {
            if r != row && !line[col].is_zero() {
                let f = line[col].clone();
                for (v, p) in line.iter_mut().zip(&pivot) {
                    *v -= p * &f;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[n].is_zero()) {
        return Err("the linear system for the products is inconsistent".into());
    }
    if pivot_cols.len() < n {
        return Err("the products are underdetermined".into());
    }
    Ok((0..n).map(|c| a[c][n].clone()).collect())
}

/// `α` with `m = α αᵀ`, first nonzero entry positive.
fn rank_one_root(m: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let k = m.len();
    let Some(p) = (0..k).find(|&i| !m[i][i].is_zero()) else {
        return m.iter().flatten().all(Zero::is_zero).then(|| vec![Rational::zero(); k]);
    };
    let root = rational_sqrt(&m[p][p])?;
    let alpha: Vec<Rational> = (0..k).map(|i| &m[p][i] / &root).collect();
    let ok = (0..k).all(|i| (0..k).all(|j| &alpha[i] * &alpha[j] == m[i][j]));
    ok.then_some(alpha)
}

/// `{X, X} = 2H` over the odd generators, the supersymmetry test.
pub fn hamiltonian_square_search() -> SquareSearch {
    let basis = build_n1_hyperbolic();
    let h = basis.get(H).expect("H").clone();
    square_search(&basis, H, &h)
}

#[derive(Clone, Debug)]
pub struct SigmaReport {
    pub table: StructureTable,
    pub jacobi_holds: bool,
    pub onshell: Vec<(String, bool)>,
    pub square: SquareSearch,
    pub square_of_zp: SquareSearch,
    /// `{Q^+, Q^-} = 2H`.
    pub hamiltonian_in_span: bool,
}

impl SigmaReport {
    pub fn closure_holds(&self) -> bool {
        self.table.closes() && self.jacobi_holds
    }

    pub fn onshell_holds(&self) -> bool {
        self.onshell.iter().all(|(_, ok)| *ok)
    }

    pub fn square_holds(&self) -> bool {
        !self.square.satisfiable() && self.square_of_zp.satisfiable() && self.hamiltonian_in_span
    }
}

pub fn sigma_report() -> SigmaReport {
    let basis = build_n1_hyperbolic();
    let eom = EomOperator::new(1);
    let table = sigma_closure_table();
    let jacobi_holds = jacobi_check_operators(&basis, TableKind::Super).holds();
    let onshell = basis.iter().map(|g| (g.name.clone(), eom_onshell_check(&g.op, &eom))).collect();
    let zp = basis.get(ZP).expect("Zp").clone();
    let hamiltonian_in_span =
        table.lookup(QP, QM).is_some_and(|c| c.len() == 1 && c[0].1 == H && c[0].0.constant_value() == Some(rat(2, 1)));
    SigmaReport {
        table,
        jacobi_holds,
        onshell,
        square: hamiltonian_square_search(),
        square_of_zp: square_search(&basis, ZP, &zp),
        hamiltonian_in_span,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::describe;

    fn gens() -> NamedBasis<MatrixOp> {
        build_n1_hyperbolic()
    }

    fn g(name: &str) -> MatrixOp {
        gens().get(name).unwrap().clone()
    }

    #[test]
    fn generators_are_t_only_and_well_shaped() {
        for gen in gens().iter() {
            assert!(gen.op.is_t_only());
            assert!(gen.op.shape_matches_parity());
            assert_eq!(gen.op.parity, gen.parity);
        }
    }

    #[test]
    fn action_on_columns() {
        let phi = RingElement::symbol("p");
        let out = g(QP).apply(&[phi.clone(), RingElement::zero()]);
        assert!(out[0].is_zero());
        assert_eq!(out[1], &e_t(1) * &(-phi));
        assert_eq!(g(H), MatrixOp::diagonal(DiffOp::dt(), DiffOp::dt()));
        assert_eq!(g(ZM).entries[1][1], DiffOp::dt().left_mul(&e_t(-2)));
    }

    #[test]
    fn squares_and_brackets() {
        assert_eq!(graded_matrix_bracket(&g(QP), &g(QP)), g(ZP).scale(&rat(2, 1)));
        assert_eq!(g(QP).compose(&g(QP)), g(ZP));
        assert_eq!(g(QM).compose(&g(QM)), g(ZM));
        assert_eq!(graded_matrix_bracket(&g(QP), &g(QM)), g(H).scale(&rat(2, 1)));
        assert_eq!(graded_matrix_bracket(&g(H), &g(QP)), g(QP));
        assert_eq!(graded_matrix_bracket(&g(H), &g(QM)), g(QM).scale(&rat(-1, 1)));
    }

    #[test]
    fn closure_table_entries() {
        let t = sigma_closure_table();
        assert!(t.closes());
        let d = |a: &str, b: &str| describe(t.lookup(a, b).as_deref());
        assert_eq!(d(QP, QP), "2*Zp");
        assert_eq!(d(QM, QM), "2*Zm");
        assert_eq!(d(QP, QM), "2*H");
        assert_eq!(d(ZP, QP), "0");
        assert_eq!(d(ZM, QM), "0");
        assert_eq!(d(H, ZP), "2*Zp");
        assert_eq!(d(H, ZM), "-2*Zm");
        assert_eq!(d(ZP, ZM), "-4*H");
    }

    #[test]
    fn graded_jacobi() {
        assert!(jacobi_check_operators(&gens(), TableKind::Super).holds());
    }

    #[test]
    fn equations_of_motion() {
        let hyperbolic = EomOperator::new(1);
        for gen in gens().iter() {
            assert!(eom_onshell_check(&gen.op, &hyperbolic), "{}", gen.name);
        }
        assert!(!eom_onshell_check(&g(QP), &EomOperator::new(0)));
    }

    #[test]
    fn no_square_root_of_hamiltonian() {
        let s = hamiltonian_square_search();
        assert_eq!(s.to_string(), "UNSATISFIABLE: alpha^2=0, beta^2=0, 2*alpha*beta=1");
    }

    #[test]
    fn square_root_of_zp() {
        let basis = gens();
        let s = square_search(&basis, ZP, &g(ZP));
        assert_eq!(s.solution, Some(vec![rat(1, 1), rat(0, 1)]));
        let zero = square_search(&basis, "0", &MatrixOp::zero(Parity::Even));
        assert_eq!(zero.solution, Some(vec![rat(0, 1), rat(0, 1)]));
    }

    #[test]
    fn report_holds() {
        let r = sigma_report();
        assert!(r.closure_holds() && r.onshell_holds() && r.square_holds());
    }
}
