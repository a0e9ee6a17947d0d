//! Floating-point cross-checks of exact results against hand-transcribed
//! operators and finite differences.

mod common;

use common::{field, oscillator_generators, oscillator_wave_operator, probe, rel_err, Field};
use duality_core::closure::{closure_table, TableKind};
use duality_core::reps::{build_rep, RepCase};
use duality_core::ring::{NumericEnv, Symbol};
use duality_core::spectrum::oscillator_spectrum;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const A: f64 = 0.7;
const NU: f64 = 0.3;
const H: f64 = 1e-4;

fn sample_points(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n).map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.5..=1.5))).collect()
}

fn symbols(s: &Symbol) -> f64 {
    match s.name() {
        "a" => A,
        "nu" => NU,
        other => panic!("unexpected symbol {other}"),
    }
}

/// Printed oscillator relations hold for the transcribed closures.
#[test]
fn printed_oscillator_relations_hold_numerically() {
    let gens = oscillator_generators(A, NU);
    let op = |n: &str| gens.iter().find(|(m, _)| *m == n).unwrap().1.clone();
    let k = A * NU;
    let relations: [(&str, &str, f64, &str); 9] = [
        ("z_p1", "z_m1", -8.0 * k, "z_0"),
        ("z_0", "z_p1", 4.0 * k, "z_p1"),
        ("z_0", "z_m1", -4.0 * k, "z_m1"),
        ("z_p1", "w_m", -4.0 * k, "w_p"),
        ("z_m1", "w_p", 4.0 * k, "w_m"),
        ("z_0", "w_p", 2.0 * k, "w_p"),
        ("z_0", "w_m", -2.0 * k, "w_m"),
        ("w_p", "w_m", 2.0 * NU, "c"),
        ("z_p1", "w_p", 0.0, "c"),
    ];
    let f = probe();
    for (p, q, coeff, r) in relations {
        let pq = op(p).apply(&op(q).apply(&f, H), H);
        let qp = op(q).apply(&op(p).apply(&f, H), H);
        let rhs = op(r).apply(&f, H);
        for (t, x) in sample_points(8, 11) {
            let got = pq(t, x) - qp(t, x);
            assert!(rel_err(got, coeff * rhs(t, x)) < 1e-5, "[{p}, {q}] at ({t}, {x}): {got}");
        }
    }
}

/// Every exact structure constant of the oscillator table, evaluated at
/// numeric symbols, matches the closures.
#[test]
fn exact_table_matches_closures() {
    let table = closure_table(&build_rep(RepCase::Quadratic), TableKind::Lie);
    assert!(table.closes());
    let gens = oscillator_generators(A, NU);
    let op = |n: &str| gens.iter().find(|(m, _)| *m == n).unwrap().1.clone();
    let f = probe();
    let names = table.basis.clone();
    for (i, p) in names.iter().enumerate() {
        for q in &names[i..] {
            let combo = table.lookup(p, q).unwrap();
            let pq = op(p).apply(&op(q).apply(&f, H), H);
            let qp = op(q).apply(&op(p).apply(&f, H), H);
            let rhs: Vec<(f64, Field)> = combo.iter().map(|(c, n)| (c.eval(&symbols), op(n).apply(&f, H))).collect();
            for (t, x) in sample_points(5, 23) {
                let want: f64 = rhs.iter().map(|(c, g)| c * g(t, x)).sum();
                let got = pq(t, x) - qp(t, x);
                assert!(rel_err(got, want) < 1e-5, "[{p}, {q}]: {got} vs {want}");
            }
        }
    }
}

/// Ladder states solve the wave equation under an independent
/// finite-difference evaluation of the oscillator operator.
#[test]
fn ladder_states_solve_the_wave_equation() {
    let (a, nu, h) = (-1.0, 0.5, 1e-3);
    let report = oscillator_spectrum(5, None).unwrap();
    let env = NumericEnv::new().with("a", a).with("nu", nu);
    for s in &report.states {
        let psi = s.psi.clone();
        let env = env.clone();
        let f = field(move |t, x| psi.eval(&env, t, x));
        let omega_psi = oscillator_wave_operator(&f, a, nu, h);
        let worst = sample_points(20, 0x5eed)
            .into_iter()
            .map(|(t, x)| omega_psi(t, x).abs() / f(t, x).abs().max(1.0))
            .fold(0.0, f64::max);
        assert!(worst <= 1e-4, "n = {}: {worst}", s.n);
    }
}
