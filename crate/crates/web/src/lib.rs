//! Browser bindings: bracket calculator, closure tables and ladder-state
//! samples. Every export returns a JSON string.

use duality_core::cli::parse::Scope;
use duality_core::closure::{closure_table, describe, express_in_basis, Expansion, TableKind};
use duality_core::parity::BracketKind;
use duality_core::reps::{build_extended_rep, RepCase};
use duality_core::ring::{NumericEnv, ScaledMonomial, Symbol};
use duality_core::spectrum::oscillator_spectrum;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn case_of(name: &str) -> Result<RepCase, String> {
    RepCase::ALL.into_iter().find(|c| c.short_name() == name).ok_or_else(|| format!("unknown case `{name}`"))
}

fn bracket_kind(name: &str) -> Result<BracketKind, String> {
    match name {
        "comm" => Ok(BracketKind::Commutator),
        "anti" => Ok(BracketKind::Anticommutator),
        other => Err(format!("unknown bracket `{other}`")),
    }
}

/// Brackets two expressions in which the nine generator names of `case`
/// are bound.
pub fn bracket_json(case: &str, kind: &str, left: &str, right: &str) -> Result<Value, String> {
    let case = case_of(case)?;
    let kind = bracket_kind(kind)?;
    let basis = build_extended_rep(case);
    let scope = Scope { symbols: None, definitions: basis.iter().map(|g| (g.name.clone(), g.op.clone())).collect() };
    let a = scope.parse(left).map_err(|e| format!("left: {e}"))?;
    let b = scope.parse(right).map_err(|e| format!("right: {e}"))?;
    let op = a.bracket(&b, kind);
    let expansion = match express_in_basis(&op, &basis) {
        Expansion::InSpan(c) => describe(Some(&c)),
        Expansion::NotInSpan(cert) => format!("not in span: {cert}"),
    };
    Ok(json!({
        "left": a.to_string(),
        "right": b.to_string(),
        "operator": op.to_string(),
        "expansion": expansion,
    }))
}

pub fn closure_json(case: &str, kind: &str, extended: bool, subst_nu: bool) -> Result<Value, String> {
    let case = case_of(case)?;
    let kind: TableKind = kind.parse()?;
    let basis = if extended || kind == TableKind::Super {
        build_extended_rep(case)
    } else {
        duality_core::reps::build_rep(case)
    };
    let basis = if subst_nu {
        let (s, v) = (Symbol::new("nu"), ScaledMonomial::nu_specialization());
        basis.try_map(|op| op.substitute(&s, &v)).map_err(|e| e.to_string())?
    } else {
        basis
    };
    let table = closure_table(&basis, kind);
    let n = table.basis.len();
    let cells: Vec<Vec<String>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let combo = table.lookup(&table.basis[i], &table.basis[j]);
                    describe(combo.as_deref())
                })
                .collect()
        })
        .collect();
    let mut out = table.to_json();
    out["cells"] = json!(cells);
    out["closes"] = json!(table.closes());
    Ok(out)
}

/// Samples `psi_n(t, x)` on a grid in `x` for `n = 0..=n_max`.
pub fn ladder_json(
    n_max: usize,
    a: f64,
    nu: f64,
    t: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Result<Value, String> {
    if points < 2 || x_max <= x_min {
        return Err("need at least two points on a nonempty interval".into());
    }
    let report = oscillator_spectrum(n_max, None).map_err(|e| e.to_string())?;
    let env = NumericEnv::new().with("a", a).with("nu", nu);
    let xs: Vec<f64> = (0..points).map(|k| x_min + (x_max - x_min) * k as f64 / (points - 1) as f64).collect();
    let states: Vec<Value> = report
        .states
        .iter()
        .zip(&report.eigenvalues)
        .map(|(s, e)| {
            let ys: Vec<f64> = xs.iter().map(|&x| s.psi.eval(&env, t, x)).collect();
            json!({
                "n": s.n,
                "psi": s.psi.to_string(),
                "eigenvalue": e.as_ref().map(|v| v.to_string()),
                "values": ys,
            })
        })
        .collect();
    Ok(json!({ "x": xs, "states": states, "vacuum_annihilator": report.vacuum.annihilator }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bracket(case: &str, kind: &str, left: &str, right: &str) -> Result<String, JsValue> {
    to_js(bracket_json(case, kind, left, right))
}

#[wasm_bindgen]
pub fn closure(case: &str, kind: &str, extended: bool, subst_nu: bool) -> Result<String, JsValue> {
    to_js(closure_json(case, kind, extended, subst_nu))
}

#[wasm_bindgen]
pub fn ladder(n_max: usize, a: f64, nu: f64, t: f64, x_min: f64, x_max: f64, points: usize) -> Result<String, JsValue> {
    to_js(ladder_json(n_max, a, nu, t, x_min, x_max, points))
}
