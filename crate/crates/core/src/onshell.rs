//! Symmetries that hold only on solutions: `[g, Ω] = f·Ω`.

use serde_json::{json, Value};

use crate::basis::NamedBasis;
use crate::diffop::{DiffOp, DiffOpError};
use crate::reps::{build_extended_rep, build_omega, RepCase, W_0, W_M1, W_P1, Z_0, Z_M1, Z_P1};
use crate::ring::{rat, ExpArg, ExpBase, Monomial, RingElement, ScaledMonomial, Symbol};

/// Reads `f` off the `Dt` coefficient of `[g, Ω]` and confirms the rest of
/// the bracket matches `f·Ω`.
pub fn onshell_factor(g: &DiffOp, omega: &DiffOp) -> Option<RingElement> {
    let bracket = g.commutator(omega);
    let f = bracket.coefficient(1, 0);
    if (&bracket - &omega.left_mul(&f)).is_zero() {
        Some(f)
    } else {
        None
    }
}

/// True when `Ω∘D` is a left multiple of `Ω`.
pub fn is_onshell_symmetry(d: &DiffOp, omega: &DiffOp) -> Result<bool, DiffOpError> {
    let (_, rem) = (omega * d).reduce_mod(omega)?;
    Ok(rem.is_zero())
}

/// Expected form of `[g, Ω]` twice over: as a combination of generators and
/// as a multiple of `Ω`.
#[derive(Clone, Debug)]
pub struct ExpectedIdentity {
    pub generator: &'static str,
    pub combination: Vec<(RingElement, &'static str)>,
    pub factor: RingElement,
}

fn sym(name: &str) -> RingElement {
    RingElement::symbol(name)
}

fn half_a() -> RingElement {
    sym("a").scale(&rat(1, 2))
}

fn exp_t(q: i64) -> RingElement {
    RingElement::exp_of(ExpArg::single(ExpBase::T, rat(q, 1), Monomial::one()))
}

/// The non-vanishing brackets with `Ω` in each case. Quadratic entries hold
/// at `ν = -1/(4a)`.
pub fn expected_identities(case: RepCase) -> Vec<ExpectedIdentity> {
    let one = RingElement::one();
    let t = RingElement::t();
    match case {
        RepCase::Constant => vec![
            ExpectedIdentity {
                generator: Z_0,
                combination: vec![(-one.clone(), Z_P1), (-half_a(), W_P1)],
                factor: -one,
            },
            ExpectedIdentity {
                generator: Z_M1,
                combination: vec![(RingElement::int(-2), Z_0), (-sym("a"), W_0)],
                factor: t.scale(&rat(-2, 1)),
            },
        ],
        RepCase::Linear => vec![
            ExpectedIdentity {
                generator: Z_P1,
                combination: vec![(RingElement::int(2), Z_0), (sym("a"), W_0)],
                factor: t.scale(&rat(2, 1)),
            },
            ExpectedIdentity { generator: Z_0, combination: vec![(one.clone(), Z_M1), (half_a(), W_M1)], factor: one },
        ],
        RepCase::Quadratic => vec![
            ExpectedIdentity { generator: Z_P1, combination: vec![(one, Z_P1), (half_a(), W_P1)], factor: exp_t(-1) },
            ExpectedIdentity {
                generator: Z_M1,
                combination: vec![(-RingElement::one(), Z_M1), (-half_a(), W_M1)],
                factor: -exp_t(1),
            },
        ],
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorStatus {
    pub name: String,
    pub commutes: bool,
    pub factor: Option<RingElement>,
    pub symmetry: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub generator: String,
    pub combination: String,
    pub combination_holds: bool,
    pub expected_factor: RingElement,
    /// Engine factor at the comparison point (after substitution when the
    /// case requires it).
    pub factor: Option<RingElement>,
    pub factor_holds: bool,
}

#[derive(Clone, Debug)]
pub struct OnShellReport {
    pub case: RepCase,
    pub omega: DiffOp,
    pub generators: Vec<GeneratorStatus>,
    pub identities: Vec<IdentityCheck>,
    /// Generators whose bracket with `Ω` is nonzero.
    pub nonvanishing: Vec<String>,
    pub expected_nonvanishing: Vec<String>,
    /// Substitution applied before the identity comparison, if any.
    pub substitution: Option<String>,
}

impl OnShellReport {
    pub fn holds(&self) -> bool {
        self.generators.iter().all(|g| g.symmetry && (g.commutes || g.factor.is_some()))
            && self.identities.iter().all(|i| i.combination_holds && i.factor_holds)
            && self.nonvanishing == self.expected_nonvanishing
    }

    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case.short_name(),
            "omega": self.omega.to_string(),
            "generators": self.generators.iter().map(|g| json!({
                "name": g.name,
                "commutes": g.commutes,
                "factor": g.factor.as_ref().map(|f| f.to_string()),
                "symmetry": g.symmetry,
            })).collect::<Vec<_>>(),
            "identities": self.identities.iter().map(|i| json!({
                "generator": i.generator,
                "combination": i.combination,
                "combination_holds": i.combination_holds,
                "expected_factor": i.expected_factor.to_string(),
                "factor": i.factor.as_ref().map(|f| f.to_string()),
                "factor_holds": i.factor_holds,
            })).collect::<Vec<_>>(),
            "nonvanishing": self.nonvanishing,
            "substitution": self.substitution,
            "holds": self.holds(),
        })
    }
}

fn nu_substitution() -> (Symbol, ScaledMonomial) {
    (Symbol::new("nu"), ScaledMonomial::nu_specialization())
}

fn substitute_all(basis: &NamedBasis<DiffOp>, omega: &DiffOp) -> (NamedBasis<DiffOp>, DiffOp) {
    let (s, v) = nu_substitution();
    let basis = basis.try_map(|op| op.substitute(&s, &v)).expect("generators stay in the ring under the substitution");
    let omega = omega.substitute(&s, &v).expect("omega stays in the ring");
    (basis, omega)
}

pub fn onshell_report(case: RepCase) -> OnShellReport {
    let basis = build_extended_rep(case);
    let omega = build_omega(case);
    let generators: Vec<GeneratorStatus> = basis
        .iter()
        .map(|g| {
            let bracket = g.op.commutator(&omega);
            GeneratorStatus {
                name: g.name.clone(),
                commutes: bracket.is_zero(),
                factor: onshell_factor(&g.op, &omega),
                symmetry: is_onshell_symmetry(&g.op, &omega).unwrap_or(false),
            }
        })
        .collect();
    let nonvanishing: Vec<String> = generators.iter().filter(|g| !g.commutes).map(|g| g.name.clone()).collect();

    let (cmp_basis, cmp_omega, substitution) = if case == RepCase::Quadratic {
        let (b, o) = substitute_all(&basis, &omega);
        (b, o, Some("nu = -1/(4*a)".to_string()))
    } else {
        (basis.clone(), omega.clone(), None)
    };

    let expected = expected_identities(case);
    let identities = expected
        .iter()
        .map(|e| {
            let g = cmp_basis.get(e.generator).expect("generator in basis");
            let bracket = g.commutator(&cmp_omega);
            let combo = e
                .combination
                .iter()
                .fold(DiffOp::zero(), |acc, (c, n)| &acc + &cmp_basis.get(n).expect("generator in basis").left_mul(c));
            let combination = e.combination.iter().map(|(c, n)| format!("({c})*{n}")).collect::<Vec<_>>().join(" + ");
            let factor = onshell_factor(g, &cmp_omega);
            IdentityCheck {
                generator: e.generator.to_string(),
                combination,
                combination_holds: (&bracket - &combo).is_zero(),
                expected_factor: e.factor.clone(),
                factor_holds: (&bracket - &cmp_omega.left_mul(&e.factor)).is_zero(),
                factor,
            }
        })
        .collect();

    OnShellReport {
        case,
        omega,
        generators,
        identities,
        nonvanishing,
        expected_nonvanishing: expected.iter().map(|e| e.generator.to_string()).collect(),
        substitution,
    }
}
