use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::fracpoly::FracPoly;
use super::linear::{express_in_basis, Expansion, Operand, SpanCertificate};
use crate::basis::NamedBasis;
use crate::parity::{BracketKind, Parity};
use crate::ring::{ScaledMonomial, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Lie,
    Super,
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            TableKind::Lie => "lie",
            TableKind::Super => "super",
        }
    }
}

impl std::str::FromStr for TableKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lie" => Ok(TableKind::Lie),
            "super" => Ok(TableKind::Super),
            other => Err(format!("unknown table kind `{other}` (expected lie or super)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub i: usize,
    pub j: usize,
    pub bracket: BracketKind,
    /// Nonzero coefficients against generator indices.
    pub result: Vec<(FracPoly, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableFailure {
    pub i: usize,
    pub j: usize,
    pub bracket: BracketKind,
    pub certificate: SpanCertificate,
}

/// Brackets of every ordered pair `i <= j` expanded in the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTable {
    pub basis: Vec<String>,
    pub parities: Vec<Parity>,
    pub kind: TableKind,
    pub entries: Vec<TableEntry>,
    pub failures: Vec<TableFailure>,
}

pub fn bracket_kind_for(kind: TableKind, p: Parity, q: Parity) -> BracketKind {
    match kind {
        TableKind::Lie => BracketKind::Commutator,
        TableKind::Super => p.bracket_kind(q),
    }
}

pub fn closure_table<T: Operand>(basis: &NamedBasis<T>, kind: TableKind) -> StructureTable {
    let names = basis.names();
    let parities = match kind {
        TableKind::Lie => vec![Parity::Even; basis.len()],
        TableKind::Super => basis.parities(),
    };
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let bracket = bracket_kind_for(kind, parities[i], parities[j]);
            let value = basis.generator(i).op.bracket_with(&basis.generator(j).op, bracket);
            match express_in_basis(&value, basis) {
                Expansion::InSpan(coeffs) => {
                    let result = coeffs
                        .into_iter()
                        .map(|(c, n)| (c, names.iter().position(|m| *m == n).expect("basis name")))
                        .collect();
                    entries.push(TableEntry { i, j, bracket, result });
                }
                Expansion::NotInSpan(certificate) => failures.push(TableFailure { i, j, bracket, certificate }),
            }
        }
    }
    StructureTable { basis: names, parities, kind, entries, failures }
}

impl StructureTable {
    pub fn closes(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|n| n == name)
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&TableEntry> {
        self.entries.iter().find(|e| e.i == i && e.j == j)
    }

    /// Coefficient of generator `k` in the bracket of `i` with `j`, for either
    /// ordering, using graded antisymmetry.
    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> Option<FracPoly> {
        let (lo, hi, flip) = if i <= j { (i, j, false) } else { (j, i, true) };
        let entry = self.entry(lo, hi)?;
        let c = entry.result.iter().find(|(_, g)| *g == k).map(|(c, _)| c.clone()).unwrap_or_else(FracPoly::zero);
        let symmetric = entry.bracket == BracketKind::Anticommutator;
        Some(if flip && !symmetric { c.neg() } else { c })
    }

    /// Expansion of the bracket of two named generators, by name.
    pub fn lookup(&self, a: &str, b: &str) -> Option<Vec<(FracPoly, String)>> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        let mut out = Vec::new();
        for k in 0..self.basis.len() {
            let c = self.coefficient(i, j, k)?;
            if !c.is_zero() {
                out.push((c, self.basis[k].clone()));
            }
        }
        Some(out)
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = &TableEntry> {
        self.entries.iter().filter(|e| !e.result.is_empty())
    }

    pub fn substitute(&self, sym: &Symbol, value: &ScaledMonomial) -> Option<StructureTable> {
        let mut out = self.clone();
        for e in &mut out.entries {
            let mut result = Vec::with_capacity(e.result.len());
            for (c, k) in &e.result {
                let s = c.substitute(sym, value)?;
                if !s.is_zero() {
                    result.push((s, *k));
                }
            }
            e.result = result;
        }
        Some(out)
    }

    /// Entrywise comparison on the generator names both tables share.
    /// Returns a description of every disagreement.
    pub fn compare(&self, other: &StructureTable) -> Vec<String> {
        let shared: Vec<&String> = self.basis.iter().filter(|n| other.index_of(n).is_some()).collect();
        let mut out = Vec::new();
        for (ai, a) in shared.iter().enumerate() {
            for b in &shared[ai..] {
                let mine = self.lookup(a, b);
                let theirs = other.lookup(a, b);
                let same = match (&mine, &theirs) {
                    (Some(x), Some(y)) => {
                        x.len() == y.len() && x.iter().zip(y.iter()).all(|(p, q)| p.1 == q.1 && p.0.eq_cross(&q.0))
                    }
                    (None, None) => true,
                    _ => false,
                };
                if !same {
                    out.push(format!("[{a}, {b}]: {} vs {}", describe(mine.as_deref()), describe(theirs.as_deref())));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "i": self.basis[e.i],
                    "j": self.basis[e.j],
                    "bracket": e.bracket.short_name(),
                    "result": e.result.iter().map(|(c, k)| json!({
                        "coeff": c.to_string(),
                        "gen": self.basis[*k],
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        let failures: Vec<Value> = self
            .failures
            .iter()
            .map(|f| {
                json!({
                    "i": self.basis[f.i],
                    "j": self.basis[f.j],
                    "bracket": f.bracket.short_name(),
                    "certificate": f.certificate.to_string(),
                })
            })
            .collect();
        let parity: BTreeMap<&str, &str> = self
            .basis
            .iter()
            .zip(&self.parities)
            .map(|(n, p)| (n.as_str(), if p.is_odd() { "odd" } else { "even" }))
            .collect();
        json!({
            "basis": self.basis,
            "kind": self.kind.name(),
            "entries": entries,
            "failures": failures,
            "parity": parity,
        })
    }

    /// One line per nonzero entry, then failures.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in self.nonzero_entries() {
            let (open, close) = (e.bracket.open(), e.bracket.close());
            let rhs: Vec<(FracPoly, String)> =
                e.result.iter().map(|(c, k)| (c.clone(), self.basis[*k].clone())).collect();
            out.push_str(&format!(
                "{open}{}, {}{close} = {}\n",
                self.basis[e.i],
                self.basis[e.j],
                describe(Some(&rhs))
            ));
        }
        for f in &self.failures {
            out.push_str(&format!(
                "FAIL {}{}, {}{}: {}\n",
                f.bracket.open(),
                self.basis[f.i],
                self.basis[f.j],
                f.bracket.close(),
                f.certificate
            ));
        }
        out
    }
}

/// Human-readable linear combination, `0` when empty.
pub fn describe(combo: Option<&[(FracPoly, String)]>) -> String {
    let Some(combo) = combo else { return "not in span".to_string() };
    if combo.is_empty() {
        return "0".to_string();
    }
    combo
        .iter()
        .map(|(c, n)| {
            if c.is_one() {
                n.clone()
            } else if c.neg().is_one() {
                format!("-{n}")
            } else if c.numer().len() > 1 {
                format!("({c})*{n}")
            } else {
                format!("{c}*{n}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub triples_checked: usize,
    pub violation: Option<(String, String, String)>,
}

impl JacobiReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

fn triple_sign(p: Parity, q: Parity) -> i64 {
    if p.is_odd() && q.is_odd() {
        -1
    } else {
        1
    }
}

fn table_parities<T>(basis: &NamedBasis<T>, kind: TableKind) -> Vec<Parity> {
    match kind {
        TableKind::Lie => vec![Parity::Even; basis.len()],
        TableKind::Super => basis.parities(),
    }
}

/// Graded Jacobi identity by direct operator expansion over every triple
/// `i <= j <= k`:
/// `(-1)^{|A||C|}[A,[B,C]] + (-1)^{|B||A|}[B,[C,A]] + (-1)^{|C||B|}[C,[A,B]] = 0`.
pub fn jacobi_check_operators<T: Operand>(basis: &NamedBasis<T>, kind: TableKind) -> JacobiReport {
    let par = table_parities(basis, kind);
    let br = |x: usize, y: usize| -> (T, Parity) {
        let k = bracket_kind_for(kind, par[x], par[y]);
        (basis.generator(x).op.bracket_with(&basis.generator(y).op, k), par[x] + par[y])
    };
    let outer = |a: usize, inner: &(T, Parity)| -> T {
        let k = bracket_kind_for(kind, par[a], inner.1);
        basis.generator(a).op.bracket_with(&inner.0, k)
    };
    let signed = |op: T, s: i64| if s < 0 { op.negated() } else { op };
    let mut checked = 0;
    let n = basis.len();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                checked += 1;
                let t1 = signed(outer(a, &br(b, c)), triple_sign(par[a], par[c]));
                let t2 = signed(outer(b, &br(c, a)), triple_sign(par[b], par[a]));
                let t3 = signed(outer(c, &br(a, b)), triple_sign(par[c], par[b]));
                if !t1.sum(&t2).sum(&t3).is_zero_op() {
                    return JacobiReport { triples_checked: checked, violation: Some(names3(basis, a, b, c)) };
                }
            }
        }
    }
    JacobiReport { triples_checked: checked, violation: None }
}

fn names3<T>(basis: &NamedBasis<T>, a: usize, b: usize, c: usize) -> (String, String, String) {
    (basis.generator(a).name.clone(), basis.generator(b).name.clone(), basis.generator(c).name.clone())
}

/// Graded Jacobi identity on the structure constants alone. Requires a
/// closed table.
pub fn jacobi_check_table(table: &StructureTable) -> JacobiReport {
    let n = table.basis.len();
    let par = &table.parities;
    let nested = |a: usize, b: usize, c: usize| -> Vec<FracPoly> {
        // [a, [b, c]] as a coefficient vector.
        let mut out = vec![FracPoly::zero(); n];
        for k in 0..n {
            let f = table.coefficient(b, c, k).unwrap_or_else(FracPoly::zero);
            if f.is_zero() {
                continue;
            }
            for (l, slot) in out.iter_mut().enumerate() {
                let g = table.coefficient(a, k, l).unwrap_or_else(FracPoly::zero);
                if !g.is_zero() {
                    *slot = slot.add(&f.mul(&g));
                }
            }
        }
        out
    };
    let mut checked = 0;
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                checked += 1;
                let terms = [
                    (nested(a, b, c), triple_sign(par[a], par[c])),
                    (nested(b, c, a), triple_sign(par[b], par[a])),
                    (nested(c, a, b), triple_sign(par[c], par[b])),
                ];
                let ok = (0..n).all(|l| {
                    terms
                        .iter()
                        .fold(FracPoly::zero(), |acc, (v, s)| if *s < 0 { acc.sub(&v[l]) } else { acc.add(&v[l]) })
                        .is_zero()
                });
                if !ok {
                    return JacobiReport {
                        triples_checked: checked,
                        violation: Some((table.basis[a].clone(), table.basis[b].clone(), table.basis[c].clone())),
                    };
                }
            }
        }
    }
    JacobiReport { triples_checked: checked, violation: None }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OddPairComparison {
    pub i: String,
    pub j: String,
    pub commutator: Option<Vec<(FracPoly, String)>>,
    pub anticommutator: Option<Vec<(FracPoly, String)>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport {
    pub lie: StructureTable,
    pub sup: StructureTable,
    /// Pairs with at least one even member whose lie and super entries differ.
    pub even_mismatches: Vec<String>,
    pub odd_pairs: Vec<OddPairComparison>,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.lie.closes() && self.sup.closes() && self.even_mismatches.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lie": self.lie.to_json(),
            "super": self.sup.to_json(),
            "lie_closes": self.lie.closes(),
            "super_closes": self.sup.closes(),
            "even_mismatches": self.even_mismatches,
            "odd_pairs": self.odd_pairs.iter().map(|p| json!({
                "i": p.i,
                "j": p.j,
                "comm": describe(p.commutator.as_deref()),
                "anti": describe(p.anticommutator.as_deref()),
            })).collect::<Vec<_>>(),
            "holds": self.holds(),
        })
    }
}

/// Builds both tables on one operator set and compares them.
pub fn duality_check<T: Operand>(basis: &NamedBasis<T>) -> DualityReport {
    let lie = closure_table(basis, TableKind::Lie);
    let sup = closure_table(basis, TableKind::Super);
    let mut even_mismatches = Vec::new();
    let mut odd_pairs = Vec::new();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let (a, b) = (&lie.basis[i], &lie.basis[j]);
            let lie_entry = lie.lookup(a, b).filter(|_| lie.entry(i, j).is_some());
            let sup_entry = sup.lookup(a, b).filter(|_| sup.entry(i, j).is_some());
            if sup.parities[i].is_odd() && sup.parities[j].is_odd() {
                odd_pairs.push(OddPairComparison {
                    i: a.clone(),
                    j: b.clone(),
                    commutator: lie_entry,
                    anticommutator: sup_entry,
                });
            } else if lie_entry != sup_entry {
                even_mismatches.push(format!("[{a}, {b}]"));
            }
        }
    }
    DualityReport { lie, sup, even_mismatches, odd_pairs }
}

/// Eigenvalue of `op` under the adjoint action of `cartan`, divided by
/// `unit`. `None` when `op` is not an eigenvector. The zero operator has
/// grade zero.
pub fn adjoint_grade<T: Operand>(cartan: &T, op: &T, unit: &FracPoly) -> Option<FracPoly> {
    if op.is_zero_op() {
        return Some(FracPoly::zero());
    }
    let image = cartan.bracket_with(op, BracketKind::Commutator);
    let single = NamedBasis::new().with("op", op.clone(), Parity::Even).ok()?;
    let mu = match express_in_basis(&image, &single) {
        Expansion::InSpan(c) => c.first().map(|(q, _)| q.clone()).unwrap_or_else(FracPoly::zero),
        Expansion::NotInSpan(_) => return None,
    };
    mu.div(unit)
}
