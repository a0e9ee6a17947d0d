//! Expression syntax and the command-line driver.

pub mod defs;
pub mod format;
pub mod parse;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::closure::{
    closure_table, describe, duality_check, express_in_basis, generator_grades, jacobi_check_table, Expansion,
    StructureTable, TableKind,
};
use crate::diffop::DiffOp;
use crate::onshell::{onshell_factor, onshell_report};
use crate::parity::BracketKind;
use crate::reps::{build_extended_rep, build_omega, build_rep, RepCase};
use crate::ring::{RingElement, ScaledMonomial, Symbol};
use crate::spectrum::{oscillator_spectrum, NumericSetup, SpectrumReport};
use crate::superconf::{build_n1_hyperbolic, sigma_report, SigmaReport};

/// Samples drawn by the finite-difference oracle.
pub const NUMERIC_SAMPLES: usize = 20;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "duality", version, about = "Exact checks on Schrödinger-type operator algebras")]
struct Cli {
    /// Emit JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for numeric sampling.
    #[arg(long, global = true, default_value_t = NumericSetup::default().seed)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    Const,
    Lin,
    Quad,
}

impl From<CaseArg> for RepCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Const => RepCase::Constant,
            CaseArg::Lin => RepCase::Linear,
            CaseArg::Quad => RepCase::Quadratic,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Lie,
    Super,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BracketArg {
    Comm,
    Anti,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SigmaCheck {
    Closure,
    Onshell,
    Square,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Representation generators.
    Rep {
        #[command(subcommand)]
        action: RepAction,
    },
    /// Bracket of two generators, expanded in the nine-generator basis.
    Bracket {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long = "type", value_enum, default_value = "comm")]
        bracket: BracketArg,
        first: String,
        second: String,
    },
    /// Structure-constant table.
    Closure {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long, value_enum, default_value = "lie")]
        kind: KindArg,
        /// Specialize nu = -1/(4a) before bracketing.
        #[arg(long)]
        subst_nu: bool,
        /// Use all nine generators for the lie table (super always does).
        #[arg(long)]
        extended: bool,
    },
    /// Lie and super tables on the same nine operators.
    Duality {
        #[arg(long, value_enum, default_value = "quad")]
        case: CaseArg,
    },
    /// Brackets with the wave operator.
    Onshell {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long = "gen")]
        generator: Option<String>,
    },
    /// Oscillator ladder states.
    Spectrum {
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Also run the finite-difference check.
        #[arg(long)]
        numeric: bool,
    },
    /// Superconformal sigma-model checks.
    Sigma {
        #[arg(long, value_enum, default_value = "all")]
        check: SigmaCheck,
    },
    /// Canonical form of an operator expression (reads stdin without EXPR).
    Parse {
        expr: Option<String>,
        /// Definition file whose names may be used in EXPR.
        #[arg(long)]
        defs: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum RepAction {
    /// Print the generators and the wave operator.
    Dump {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long)]
        extended: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] parse::ParseError),
    #[error(transparent)]
    Defs(#[from] defs::DefsError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// What a command produced: text, JSON and whether every check passed.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, input: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let json = cli.json;
    match execute(cli, input) {
        Ok(o) => {
            let written = if json {
                serde_json::to_string_pretty(&o.json).map(|s| writeln!(out, "{s}")).is_ok()
            } else {
                write!(out, "{}", o.text).is_ok()
            };
            match (written, o.ok) {
                (false, _) => EXIT_USAGE,
                (true, true) => EXIT_OK,
                (true, false) => EXIT_FAILED,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: Cli, input: &mut dyn Read) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Rep { action: RepAction::Dump { case, extended } } => Ok(rep_dump(case.into(), extended)),
        Command::Bracket { case, bracket, first, second } => bracket_cmd(case.into(), bracket, &first, &second),
        Command::Closure { case, kind, subst_nu, extended } => Ok(closure_cmd(case.into(), kind, subst_nu, extended)),
        Command::Duality { case } => Ok(duality_cmd(case.into())),
        Command::Onshell { case, generator } => onshell_cmd(case.into(), generator.as_deref()),
        Command::Spectrum { n, numeric } => spectrum_cmd(n, numeric, cli.seed),
        Command::Sigma { check } => Ok(sigma_cmd(check)),
        Command::Parse { expr, defs } => parse_cmd(expr, defs, input),
    }
}

fn rep_dump(case: RepCase, extended: bool) -> Outcome {
    let basis = if extended { build_extended_rep(case) } else { build_rep(case) };
    let grades = generator_grades(case);
    let grade_of =
        |name: &str| grades.iter().find(|r| r.name == name).and_then(|r| r.grade.as_ref()).map(|g| g.to_string());
    let omega = build_omega(case);
    let mut text = String::new();
    let mut gens = Vec::new();
    for g in basis.iter() {
        let grade = grade_of(&g.name);
        text.push_str(&format!("{} = {}    [{}, grade {}]\n", g.name, g.op, g.parity, grade.as_deref().unwrap_or("?")));
        gens.push(json!({ "name": g.name, "operator": g.op.to_string(), "parity": g.parity, "grade": grade }));
    }
    text.push_str(&format!("Omega = {omega}\n"));
    Outcome {
        text,
        json: json!({ "case": case.short_name(), "generators": gens, "omega": omega.to_string() }),
        ok: true,
    }
}

fn bracket_cmd(case: RepCase, kind: BracketArg, first: &str, second: &str) -> Result<Outcome, CliError> {
    let basis = build_extended_rep(case);
    let get = |n: &str| {
        basis.get(n).ok_or_else(|| {
            CliError::Usage(format!("unknown generator `{n}`; expected one of {}", basis.names().join(", ")))
        })
    };
    let (a, b) = (get(first)?, get(second)?);
    let bk = match kind {
        BracketArg::Comm => BracketKind::Commutator,
        BracketArg::Anti => BracketKind::Anticommutator,
    };
    let op = a.bracket(b, bk);
    let lhs = format!("{}{first}, {second}{}", bk.open(), bk.close());
    let (combo, ok) = match express_in_basis(&op, &basis) {
        Expansion::InSpan(c) => (describe(Some(&c)), true),
        Expansion::NotInSpan(cert) => (format!("not in span: {cert}"), false),
    };
    Ok(Outcome {
        text: format!("{lhs} = {op}\n{lhs} = {combo}\n"),
        json: json!({
            "case": case.short_name(),
            "bracket": bk.short_name(),
            "i": first,
            "j": second,
            "operator": op.to_string(),
            "expansion": combo,
            "in_span": ok,
        }),
        ok,
    })
}

fn nu_specialization() -> (Symbol, ScaledMonomial) {
    (Symbol::new("nu"), ScaledMonomial::nu_specialization())
}

fn table_for(case: RepCase, kind: TableKind, subst_nu: bool, extended: bool) -> StructureTable {
    let basis = if extended || kind == TableKind::Super { build_extended_rep(case) } else { build_rep(case) };
    let basis = if subst_nu {
        let (s, v) = nu_specialization();
        basis.try_map(|op| op.substitute(&s, &v)).expect("generators stay in the ring")
    } else {
        basis
    };
    closure_table(&basis, kind)
}

fn closure_cmd(case: RepCase, kind: KindArg, subst_nu: bool, extended: bool) -> Outcome {
    let kind = match kind {
        KindArg::Lie => TableKind::Lie,
        KindArg::Super => TableKind::Super,
    };
    let table = table_for(case, kind, subst_nu, extended);
    let jacobi = jacobi_check_table(&table);
    let mut text = table.render();
    text.push_str(&format!(
        "jacobi: {} ({} triples)\n",
        if jacobi.holds() { "ok" } else { "FAIL" },
        jacobi.triples_checked
    ));
    if let Some((a, b, c)) = &jacobi.violation {
        text.push_str(&format!("jacobi violated on ({a}, {b}, {c})\n"));
    }
    let mut json = table.to_json();
    json["case"] = json!(case.short_name());
    json["closes"] = json!(table.closes());
    json["jacobi"] = json!({ "holds": jacobi.holds(), "triples": jacobi.triples_checked });
    Outcome { text, json, ok: table.closes() && jacobi.holds() }
}

fn duality_cmd(case: RepCase) -> Outcome {
    let report = duality_check(&build_extended_rep(case));
    let mut text = String::new();
    for p in &report.odd_pairs {
        text.push_str(&format!("[{}, {}] = {}\n", p.i, p.j, describe(p.commutator.as_deref())));
        text.push_str(&format!("{{{}, {}}} = {}\n", p.i, p.j, describe(p.anticommutator.as_deref())));
    }
    text.push_str(&format!("lie table closes: {}\nsuper table closes: {}\n", report.lie.closes(), report.sup.closes()));
    for m in &report.even_mismatches {
        text.push_str(&format!("mismatch on even pair {m}\n"));
    }
    let mut json = report.to_json();
    json["case"] = json!(case.short_name());
    Outcome { text, json, ok: report.holds() }
}

fn onshell_cmd(case: RepCase, generator: Option<&str>) -> Result<Outcome, CliError> {
    let report = onshell_report(case);
    let Some(name) = generator else {
        let mut text = format!("Omega = {}\n", report.omega);
        for g in &report.generators {
            let status = match (&g.factor, g.commutes) {
                (_, true) => "commutes".to_string(),
                (Some(f), false) => format!("f = {f}"),
                (None, false) => "no factor".to_string(),
            };
            text.push_str(&format!("{}: {status}\n", g.name));
        }
        if let Some(s) = &report.substitution {
            text.push_str(&format!("identities at {s}:\n"));
        }
        for i in &report.identities {
            text.push_str(&format!(
                "[{}, Omega] = {}: {}; expected f = {}: {}\n",
                i.generator,
                i.combination,
                if i.combination_holds { "ok" } else { "FAIL" },
                i.expected_factor,
                if i.factor_holds {
                    "ok".to_string()
                } else {
                    format!("FAIL (engine f = {})", i.factor.as_ref().map_or("none".into(), |f| f.to_string()))
                }
            ));
        }
        return Ok(Outcome { text, json: report.to_json(), ok: report.holds() });
    };
    let basis = build_extended_rep(case);
    let g = basis.get(name).ok_or_else(|| CliError::Usage(format!("unknown generator `{name}`")))?;
    let omega = build_omega(case);
    let factor = onshell_factor(g, &omega);
    let identity = report.identities.iter().find(|i| i.generator == name);
    let mut text = match &factor {
        Some(f) => format!("f = {f}\n"),
        None => "no factor: [g, Omega] is not a multiple of Omega\n".to_string(),
    };
    let mut ok = factor.is_some();
    if let Some(i) = identity {
        if !i.factor_holds {
            ok = false;
            text.push_str(&format!("expected f = {}: mismatch\n", i.expected_factor));
        }
    }
    Ok(Outcome {
        text,
        json: json!({
            "case": case.short_name(),
            "generator": name,
            "factor": factor.map(|f| f.to_string()),
            "expected_factor": identity.map(|i| i.expected_factor.to_string()),
            "holds": ok,
        }),
        ok,
    })
}

fn render_spectrum(r: &SpectrumReport) -> String {
    let mut text = String::new();
    for b in &r.branches {
        let (l, b) = (RingElement::scaled(b.lambda.clone()), RingElement::scaled(b.beta.clone()));
        text.push_str(&format!("branch: lambda = {l}, beta = {b}\n"));
    }
    text.push_str(&format!(
        "vacuum: {} (killed by {}, ladder {})\n",
        r.vacuum.psi, r.vacuum.annihilator, r.vacuum.ladder
    ));
    for (s, e) in r.states.iter().zip(&r.eigenvalues) {
        let e = e.as_ref().map_or("not an eigenstate".into(), |v| v.to_string());
        let res = r.residuals.as_ref().map(|v| format!(", residual {:.3e}", v[s.n])).unwrap_or_default();
        text.push_str(&format!(
            "n = {}: z_0 = {e}, Omega psi = 0: {}{res}\n",
            s.n,
            if s.solves { "yes" } else { "NO" }
        ));
    }
    text.push_str(&format!("spacing {}: {}\n", r.spacing, if r.uniform_spacing { "uniform" } else { "NOT uniform" }));
    let hw = &r.highest_weight;
    text.push_str(&format!(
        "highest weight: w_p psi = 0: {}, w_p1 psi = 0: {}, w_0s = {}\n",
        hw.killed_by_odd,
        hw.killed_by_square,
        hw.diagonal_eigenvalue.as_ref().map_or("none".into(), |v| v.to_string())
    ));
    text
}

fn spectrum_cmd(n: usize, numeric: bool, seed: u64) -> Result<Outcome, CliError> {
    let setup = NumericSetup { seed, ..NumericSetup::default() };
    let report = oscillator_spectrum(n, numeric.then_some((NUMERIC_SAMPLES, &setup)))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Outcome { text: render_spectrum(&report), json: report.to_json(&setup), ok: report.holds() })
}

fn sigma_cmd(check: SigmaCheck) -> Outcome {
    let r: SigmaReport = sigma_report();
    let want = |c: SigmaCheck| check == c || check == SigmaCheck::All;
    let mut text = String::new();
    let mut json = serde_json::Map::new();
    let mut ok = true;
    if want(SigmaCheck::Closure) {
        text.push_str(&r.table.render());
        text.push_str(&format!("graded jacobi: {}\n", if r.jacobi_holds { "ok" } else { "FAIL" }));
        let mut t = r.table.to_json();
        t["jacobi"] = json!(r.jacobi_holds);
        json.insert("closure".into(), t);
        ok &= r.closure_holds();
    }
    if want(SigmaCheck::Onshell) {
        for (name, holds) in &r.onshell {
            text.push_str(&format!("{name}: {}\n", if *holds { "on-shell symmetry (epsilon = 1)" } else { "FAIL" }));
        }
        json.insert(
            "onshell".into(),
            json!(r.onshell.iter().map(|(n, h)| json!({ "name": n, "holds": h })).collect::<Vec<_>>()),
        );
        ok &= r.onshell_holds();
    }
    if want(SigmaCheck::Square) {
        text.push_str(&format!("{}\n", r.square));
        text.push_str(&format!("target Zp: {}\n", r.square_of_zp));
        text.push_str(&format!("{{Qp, Qm}} = 2*H: {}\n", r.hamiltonian_in_span));
        json.insert(
            "square".into(),
            json!({ "hamiltonian": r.square.to_json(), "zp": r.square_of_zp.to_json(), "hamiltonian_in_span": r.hamiltonian_in_span }),
        );
        ok &= r.square_holds();
    }
    let generators: Vec<Value> = build_n1_hyperbolic()
        .iter()
        .map(|g| json!({ "name": g.name, "parity": g.parity, "operator": g.op.to_string() }))
        .collect();
    json.insert("generators".into(), json!(generators));
    json.insert("holds".into(), json!(ok));
    Outcome { text, json: Value::Object(json), ok }
}

fn parse_cmd(expr: Option<String>, defs: Option<PathBuf>, input: &mut dyn Read) -> Result<Outcome, CliError> {
    let scope = match defs {
        Some(path) => defs::parse_definitions(&std::fs::read_to_string(path)?)?.scope(),
        None => parse::Scope::lenient(),
    };
    let src = match expr {
        Some(e) => e,
        None => {
            let mut s = String::new();
            input.read_to_string(&mut s)?;
            s
        }
    };
    let op: DiffOp = scope.parse(src.trim())?;
    Ok(Outcome {
        text: format!("{op}\n"),
        json: json!({ "input": src.trim(), "operator": op.to_string(), "order": op.order() }),
        ok: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("duality").chain(args.iter().copied());
        let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn onshell_single_generator() {
        let (code, out, _) = call(&["onshell", "--case", "const", "--gen", "z_0"], "");
        assert_eq!((code, out.as_str()), (0, "f = -1\n"));
    }

    #[test]
    fn sigma_square_certificate() {
        let (code, out, _) = call(&["sigma", "--check", "square"], "");
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("UNSATISFIABLE: alpha^2=0, beta^2=0, 2*alpha*beta=1"));
    }

    #[test]
    fn closure_json_and_exit_code() {
        let (code, out, _) = call(&["closure", "--case", "quad", "--kind", "lie", "--json"], "");
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["basis"].as_array().unwrap().len(), 6);
        assert_eq!(v["closes"], true);
    }

    #[test]
    fn bracket_outside_span_fails_with_certificate() {
        let (code, out, _) = call(&["bracket", "--case", "quad", "--type", "anti", "z_p1", "z_m1"], "");
        assert_eq!(code, 1);
        assert!(out.contains("not in span: component"), "{out}");
        let (code, out, _) = call(&["bracket", "--case", "quad", "w_p", "w_m"], "");
        assert_eq!(code, 0);
        assert_eq!(out, "[w_p, w_m] = 2*nu\n[w_p, w_m] = 2*nu*c\n");
    }

    #[test]
    fn usage_and_parse_errors_exit_two() {
        assert_eq!(call(&["closure"], "").0, 2);
        assert_eq!(call(&["bracket", "--case", "quad", "z_p1", "nope"], "").0, 2);
        let (code, _, err) = call(&["parse", "Dt Dt +"], "");
        assert_eq!(code, 2);
        assert!(err.contains("token 2"), "{err}");
    }

    #[test]
    fn parse_reads_stdin() {
        let (code, out, _) = call(&["parse"], "Dx*x\n");
        assert_eq!((code, out.as_str()), (0, "x*Dx + 1\n"));
    }

    #[test]
    fn output_is_deterministic() {
        let a = call(&["spectrum", "--n", "3", "--numeric", "--json"], "");
        let b = call(&["spectrum", "--n", "3", "--numeric", "--json"], "");
        assert_eq!(a, b);
        assert_eq!(a.0, 0);
    }
}
