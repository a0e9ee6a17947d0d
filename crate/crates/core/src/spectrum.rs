//! Oscillator spectrum from the Fock vacuum and the lowering ladder.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use thiserror::Error;

use crate::basis::NamedBasis;
use crate::closure::{express_in_basis, Expansion, FracPoly};
use crate::diffop::{DiffOp, WaveFunction};
use crate::parity::Parity;
use crate::reps::{build_extended_rep, build_omega, RepCase, W_0, W_M, W_P, W_P1, Z_0};
use crate::ring::{rat, ExpArg, ExpBase, Monomial, NumericEnv, Rational, RingElement, ScaledMonomial, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("operator is not of the form Dt + A*Dx^2 + c0 + c2*x^2: {0}")]
    NotQuadraticShape(String),
    #[error("no exact square root of {0}")]
    NonSquare(String),
    #[error("no Gaussian branch is annihilated by the Fock operator")]
    NoFockBranch,
    #[error("both Gaussian branches are annihilated by the Fock operator")]
    AmbiguousFockBranch,
}

/// Exponents of `exp(λ t + β x^2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianBranch {
    pub lambda: ScaledMonomial,
    pub beta: ScaledMonomial,
}

impl GaussianBranch {
    pub fn wave_function(&self) -> WaveFunction {
        let mut arg = ExpArg::zero();
        if !self.lambda.is_zero() {
            arg = arg.add(&ExpArg::single(ExpBase::T, self.lambda.coeff.clone(), self.lambda.mono.clone()));
        }
        if !self.beta.is_zero() {
            arg = arg.add(&ExpArg::single(ExpBase::X2, self.beta.coeff.clone(), self.beta.mono.clone()));
        }
        RingElement::exp_of(arg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VacuumSolution {
    pub branch: GaussianBranch,
    pub psi: WaveFunction,
    pub annihilator: String,
    pub ladder: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderState {
    pub n: usize,
    pub psi: WaveFunction,
    pub solves: bool,
}

fn scaled_of(e: &RingElement, what: &str) -> Result<Option<ScaledMonomial>, SpectrumError> {
    if e.is_zero() {
        return Ok(None);
    }
    match e.as_scaled_monomial() {
        Some(s) if e.is_symbolic_constant() => Ok(Some(s)),
        _ => Err(SpectrumError::NotQuadraticShape(format!("{what} = {e}"))),
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    let ok = &n * &n == *q.numer() && &d * &d == *q.denom();
    ok.then(|| Rational::new(n, d))
}

fn scaled_sqrt(s: &ScaledMonomial) -> Option<ScaledMonomial> {
    let coeff = rational_sqrt(&s.coeff)?;
    let mut pairs = Vec::new();
    for (sym, e) in s.mono.iter() {
        if e % 2 != 0 {
            return None;
        }
        pairs.push((sym.clone(), e / 2));
    }
    Some(ScaledMonomial::new(coeff, Monomial::from_pairs(pairs)))
}

/// Substitutes `Ψ = exp(λt + βx²)` and solves `λ + 2Aβ + c0 = 0`,
/// `4Aβ² + c2 = 0` exactly. The positive square root comes first.
pub fn gaussian_vacuum_ansatz(omega: &DiffOp) -> Result<Vec<GaussianBranch>, SpectrumError> {
    for (&(dt, dx), c) in omega.terms() {
        let allowed = matches!((dt, dx), (1, 0) | (0, 2) | (0, 0));
        if !allowed {
            return Err(SpectrumError::NotQuadraticShape(format!("unexpected Dt^{dt}*Dx^{dx} term")));
        }
        if (dt, dx) == (1, 0) && !c.is_one() {
            return Err(SpectrumError::NotQuadraticShape(format!("Dt coefficient is {c}")));
        }
    }
    let a = scaled_of(&omega.coefficient(0, 2), "Dx^2 coefficient")?
        .ok_or_else(|| SpectrumError::NotQuadraticShape("no Dx^2 term".into()))?;
    let potential = omega.coefficient(0, 0);
    let mut c0 = RingElement::zero();
    let mut c2 = RingElement::zero();
    for (k, q) in potential.terms() {
        let piece = RingElement::scaled(ScaledMonomial::new(q.clone(), k.mono.clone()));
        match (k.tdeg, k.xdeg, k.exp.is_zero()) {
            (0, 0, true) => c0 = &c0 + &piece,
            (0, 2, true) => c2 = &c2 + &piece,
            _ => return Err(SpectrumError::NotQuadraticShape(format!("potential term {potential}"))),
        }
    }
    let c0 = scaled_of(&c0, "constant potential")?;
    let c2 = scaled_of(&c2, "quadratic potential")?;
    let a_inv = a.pow(-1).map_err(|e| SpectrumError::NotQuadraticShape(e.to_string()))?;
    let betas: Vec<ScaledMonomial> = match c2 {
        None => vec![ScaledMonomial::constant(Rational::zero())],
        Some(c2) => {
            // β² = -c2 / (4A)
            let sq = c2.mul(&a_inv).mul(&ScaledMonomial::constant(rat(-1, 4)));
            let root = scaled_sqrt(&sq).ok_or_else(|| SpectrumError::NonSquare(format!("{:?}", sq.mono)))?;
            let neg = ScaledMonomial::new(-root.coeff.clone(), root.mono.clone());
            vec![root, neg]
        }
    };
    let c0 = c0.map(RingElement::scaled).unwrap_or_else(RingElement::zero);
    betas
        .into_iter()
        .map(|beta| {
            // λ = -2Aβ - c0
            let lam = &RingElement::scaled(a.mul(&beta)).scale(&rat(-2, 1)) - &c0;
            let lambda = match scaled_of(&lam, "lambda")? {
                Some(s) => s,
                None => ScaledMonomial::constant(Rational::zero()),
            };
            Ok(GaussianBranch { lambda, beta })
        })
        .collect()
}

/// Keeps the branch annihilated by `w_plus`; `w_minus` becomes the ladder.
pub fn select_fock_branch(
    branches: &[GaussianBranch],
    w_plus: (&str, &DiffOp),
    w_minus: (&str, &DiffOp),
) -> Result<VacuumSolution, SpectrumError> {
    let passing: Vec<&GaussianBranch> =
        branches.iter().filter(|b| w_plus.1.apply(&b.wave_function()).is_zero()).collect();
    match passing.as_slice() {
        [] => Err(SpectrumError::NoFockBranch),
        [b] => Ok(VacuumSolution {
            branch: (*b).clone(),
            psi: b.wave_function(),
            annihilator: w_plus.0.to_string(),
            ladder: w_minus.0.to_string(),
        }),
        _ => Err(SpectrumError::AmbiguousFockBranch),
    }
}

/// `Ψ_n = ladder^n Ψ_vac` for `n = 0..=n_max`, each checked against `Ω`.
pub fn ladder(psi_vac: &WaveFunction, ladder_op: &DiffOp, omega: &DiffOp, n_max: usize) -> Vec<LadderState> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut psi = psi_vac.clone();
    for n in 0..=n_max {
        let solves = omega.apply(&psi).is_zero();
        let next = ladder_op.apply(&psi);
        out.push(LadderState { n, psi, solves });
        psi = next;
    }
    out
}

/// `μ` with `P Ψ = μ Ψ`, free of t and x; `None` if Ψ is not an eigenfunction.
pub fn eigenvalue_of(p: &DiffOp, psi: &WaveFunction) -> Option<FracPoly> {
    if psi.is_zero() {
        return None;
    }
    let image = DiffOp::mul_by(p.apply(psi));
    let basis = NamedBasis::new().with("psi", DiffOp::mul_by(psi.clone()), Parity::Even).ok()?;
    match express_in_basis(&image, &basis) {
        Expansion::InSpan(c) => Some(c.first().map(|(q, _)| q.clone()).unwrap_or_else(FracPoly::zero)),
        Expansion::NotInSpan(_) => None,
    }
}

/// Splits `Ψ = K(x)·exp(...)` when all terms share one exponential.
pub fn polynomial_part(psi: &WaveFunction) -> Option<(RingElement, ExpArg)> {
    let mut exp: Option<&ExpArg> = None;
    let mut poly = RingElement::zero();
    for (k, q) in psi.terms() {
        match exp {
            None => exp = Some(&k.exp),
            Some(e) if *e != k.exp => return None,
            _ => {}
        }
        let term = RingElement::scaled(ScaledMonomial::new(q.clone(), k.mono.clone()))
            * (&RingElement::var_pow(Var::T, k.tdeg) * &RingElement::var_pow(Var::X, k.xdeg));
        poly = &poly + &term;
    }
    Some((poly, exp.cloned().unwrap_or_default()))
}

/// Sample instantiation for the numeric oracle.
#[derive(Clone, Debug)]
pub struct NumericSetup {
    pub env: NumericEnv,
    pub step: f64,
    pub t_range: f64,
    pub x_range: f64,
    pub seed: u64,
}

impl Default for NumericSetup {
    fn default() -> Self {
        NumericSetup {
            env: NumericEnv::new().with("a", -1.0).with("nu", 0.5),
            step: 1e-3,
            t_range: 1.0,
            x_range: 2.0,
            seed: 0x5eed,
        }
    }
}

fn finite_difference(psi: &dyn Fn(f64, f64) -> f64, t: f64, x: f64, dt: u32, dx: u32, h: f64) -> f64 {
    if dt >= 2 {
        return (finite_difference(psi, t + h, x, dt - 2, dx, h) - 2.0 * finite_difference(psi, t, x, dt - 2, dx, h)
            + finite_difference(psi, t - h, x, dt - 2, dx, h))
            / (h * h);
    }
    if dt == 1 {
        return (finite_difference(psi, t + h, x, 0, dx, h) - finite_difference(psi, t - h, x, 0, dx, h)) / (2.0 * h);
    }
    if dx >= 2 {
        return (finite_difference(psi, t, x + h, 0, dx - 2, h) - 2.0 * finite_difference(psi, t, x, 0, dx - 2, h)
            + finite_difference(psi, t, x - h, 0, dx - 2, h))
            / (h * h);
    }
    if dx == 1 {
        return (finite_difference(psi, t, x + h, 0, 0, h) - finite_difference(psi, t, x - h, 0, 0, h)) / (2.0 * h);
    }
    psi(t, x)
}

/// Largest `|ΩΨ| / max(|Ψ|, 1)` over random sample points, with every
/// derivative replaced by a central difference.
pub fn numeric_residual(psi: &WaveFunction, omega: &DiffOp, samples: usize, setup: &NumericSetup) -> f64 {
    let mut rng = StdRng::seed_from_u64(setup.seed);
    let f = |t: f64, x: f64| psi.eval(&setup.env, t, x);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let t = rng.gen_range(-setup.t_range..=setup.t_range);
        let x = rng.gen_range(-setup.x_range..=setup.x_range);
        let value: f64 = omega
            .terms()
            .map(|(&(dt, dx), c)| c.eval(&setup.env, t, x) * finite_difference(&f, t, x, dt, dx, setup.step))
            .sum();
        worst = worst.max(value.abs() / f(t, x).abs().max(1.0));
    }
    worst
}

/// Highest-weight reading of the vacuum: annihilated by the odd generator
/// and its square, and an eigenvector of the even diagonal generator.
#[derive(Clone, Debug, PartialEq)]
pub struct HighestWeight {
    pub killed_by_odd: bool,
    pub killed_by_square: bool,
    pub diagonal_eigenvalue: Option<FracPoly>,
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub branches: Vec<GaussianBranch>,
    pub vacuum: VacuumSolution,
    pub states: Vec<LadderState>,
    pub eigenvalues: Vec<Option<FracPoly>>,
    pub spacing: FracPoly,
    pub uniform_spacing: bool,
    pub highest_weight: HighestWeight,
    pub residuals: Option<Vec<f64>>,
}

impl SpectrumReport {
    pub fn holds(&self) -> bool {
        self.states.iter().all(|s| s.solves)
            && self.eigenvalues.iter().all(Option::is_some)
            && self.uniform_spacing
            && self.highest_weight.killed_by_odd
            && self.highest_weight.diagonal_eigenvalue.is_some()
    }

    pub fn to_json(&self, setup: &NumericSetup) -> Value {
        let frac = |f: &Option<FracPoly>| f.as_ref().map(|v| v.to_string());
        json!({
            "branches": self.branches.iter().map(|b| json!({
                "lambda": RingElement::scaled(b.lambda.clone()).to_string(),
                "beta": RingElement::scaled(b.beta.clone()).to_string(),
            })).collect::<Vec<_>>(),
            "vacuum": {
                "psi": self.vacuum.psi.to_string(),
                "annihilator": self.vacuum.annihilator,
                "ladder": self.vacuum.ladder,
            },
            "states": self.states.iter().zip(&self.eigenvalues).map(|(s, e)| json!({
                "n": s.n,
                "psi": s.psi.to_string(),
                "solves": s.solves,
                "z_0": frac(e),
            })).collect::<Vec<_>>(),
            "spacing": self.spacing.to_string(),
            "uniform_spacing": self.uniform_spacing,
            "highest_weight": {
                "killed_by_odd": self.highest_weight.killed_by_odd,
                "killed_by_square": self.highest_weight.killed_by_square,
                "w_0s": frac(&self.highest_weight.diagonal_eigenvalue),
            },
            "numeric": self.residuals.as_ref().map(|r| json!({
                "a": setup.env.get(&crate::ring::Symbol::new("a")),
                "nu": setup.env.get(&crate::ring::Symbol::new("nu")),
                "step": setup.step,
                "seed": setup.seed,
                "max_relative_residual": r,
            })),
            "holds": self.holds(),
        })
    }
}

/// Full oscillator run on the quadratic representation.
pub fn oscillator_spectrum(
    n_max: usize,
    numeric: Option<(usize, &NumericSetup)>,
) -> Result<SpectrumReport, SpectrumError> {
    let case = RepCase::Quadratic;
    let basis = build_extended_rep(case);
    let omega = build_omega(case);
    let get = |n: &str| basis.get(n).expect("quadratic generator");
    let branches = gaussian_vacuum_ansatz(&omega)?;
    let vacuum = select_fock_branch(&branches, (W_P, get(W_P)), (W_M, get(W_M)))?;
    let states = ladder(&vacuum.psi, get(&vacuum.ladder), &omega, n_max);
    let eigenvalues: Vec<Option<FracPoly>> = states.iter().map(|s| eigenvalue_of(get(Z_0), &s.psi)).collect();
    let spacing = FracPoly::scaled(&ScaledMonomial::new(rat(-2, 1), Monomial::of(&[("a", 1), ("nu", 1)])));
    let uniform_spacing =
        eigenvalues.windows(2).all(|w| matches!((&w[0], &w[1]), (Some(a), Some(b)) if b.sub(a) == spacing));
    let highest_weight = HighestWeight {
        killed_by_odd: get(W_P).apply(&vacuum.psi).is_zero(),
        killed_by_square: get(W_P1).apply(&vacuum.psi).is_zero(),
        diagonal_eigenvalue: eigenvalue_of(get(W_0), &vacuum.psi),
    };
    let residuals = numeric
        .map(|(samples, setup)| states.iter().map(|s| numeric_residual(&s.psi, &omega, samples, setup)).collect());
    Ok(SpectrumReport { branches, vacuum, states, eigenvalues, spacing, uniform_spacing, highest_weight, residuals })
}

/// `(2ν)^n`, the leading coefficient of the n-th polynomial part.
pub fn leading_coefficient_of_level(n: usize) -> ScaledMonomial {
    ScaledMonomial::new(Rational::from_integer(BigInt::from(2).pow(n as u32)), Monomial::of(&[("nu", n as i32)]))
}
