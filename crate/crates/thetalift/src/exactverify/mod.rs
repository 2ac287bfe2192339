//! Exact verification of matrix identities over radical towers.
//!
//! Each scenario builds its matrices over a [`tower::Tower`] and compares both
//! sides of an identity entry by entry. A failing comparison keeps the
//! difference as a residual.

pub mod forms;
pub mod gens;
pub mod keydiag;
pub mod liftna;
pub mod tower;

use tower::{TowerError, TowerMatrix};

#[derive(Debug, Clone, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Theta(#[from] crate::hctheta::ThetaError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("matrix is not an isometry of the form")]
    NotIsometry(TowerMatrix),
    #[error("{scenario}: {check} failed")]
    IdentityFailed { scenario: String, check: String, residual: Option<TowerMatrix> },
    #[error("unknown scenario {0}")]
    UnknownScenario(String),
}

#[derive(Debug, Clone)]
pub struct SubCheck {
    pub name: String,
    pub passed: bool,
    /// lhs − rhs when a matrix comparison fails.
    pub residual: Option<TowerMatrix>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub scenario: String,
    pub checks: Vec<SubCheck>,
}

impl Report {
    pub fn new(scenario: impl Into<String>) -> Self {
        Report { scenario: scenario.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, residual: Option<TowerMatrix>) {
        self.checks.push(SubCheck { name: name.into(), passed, residual });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.push(name, passed, None);
    }

    pub fn check_matrix(&mut self, name: impl Into<String>, lhs: &TowerMatrix, rhs: &TowerMatrix) {
        let ok = lhs.rows() == rhs.rows() && lhs.cols() == rhs.cols() && lhs == rhs;
        let residual = if ok || lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() { None } else { Some(lhs - rhs) };
        self.push(name, ok, residual);
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&SubCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.checks.push(SubCheck { name: format!("{prefix}{}", c.name), ..c });
        }
    }
}

use crate::rootcomb::{CaseSpec, EpsPsi};
use crate::Rational;
use liftna::UnitConvention;

/// The rank-one isometries used by the `rep-matrix-op` scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpSample {
    Identity,
    Torus,
    Unipotent,
    Weyl,
}

impl OpSample {
    fn name(self) -> &'static str {
        match self {
            OpSample::Identity => "identity",
            OpSample::Torus => "torus",
            OpSample::Unipotent => "unipotent",
            OpSample::Weyl => "weyl",
        }
    }
}

/// Everything needed to rebuild a scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioParams {
    BuildP { n: usize, d: Rational },
    Splittings { m: usize, n: usize, d: Rational },
    SpGen { m: usize, c: Rational, eps: EpsPsi, perturb_h0: bool },
    SoGen { n: usize, d: Rational, wrong_parity: bool },
    Fpxi { m: usize, n: usize, eps: EpsPsi, flip_u1: bool },
    KeyDiagram { spec: CaseSpec, flip_eps_only: bool },
    LiftNa { a: Rational, b: Rational, units: UnitConvention },
    RepMatrixOp { sample: OpSample },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: ScenarioParams,
    /// False for negative controls, which must fail.
    pub expect_pass: bool,
}

impl Scenario {
    fn new(name: String, params: ScenarioParams, expect_pass: bool) -> Self {
        Scenario { name, params, expect_pass }
    }

    pub fn run(&self) -> Result<Report, VerifyError> {
        let mut report = match &self.params {
            ScenarioParams::BuildP { n, d } => forms::verify_build_p(*n, d)?,
            ScenarioParams::Splittings { m, n, d } => forms::verify_splittings(*m, *n, d)?,
            ScenarioParams::SpGen { m, c, eps, perturb_h0 } => gens::sp_gen_with(*m, c, *eps, *perturb_h0)?,
            ScenarioParams::SoGen { n, d, wrong_parity } => gens::so_gen_with(*n, d, *wrong_parity)?,
            ScenarioParams::Fpxi { m, n, eps, flip_u1 } => gens::fpxi_with(*m, *n, *eps, *flip_u1)?,
            ScenarioParams::KeyDiagram { spec, flip_eps_only } => keydiag::key_diagram_with(spec, *flip_eps_only)?,
            ScenarioParams::LiftNa { a, b, units } => liftna::lift_na_with(a, b, *units)?,
            ScenarioParams::RepMatrixOp { sample } => rep_matrix_op_report(*sample)?,
        };
        report.scenario = self.name.clone();
        Ok(report)
    }

    /// Whether the outcome matches the expectation: positive scenarios pass,
    /// negative controls fail with a failing sub-check.
    pub fn outcome_ok(&self, report: &Result<Report, VerifyError>) -> bool {
        match report {
            Ok(r) => r.passed() == self.expect_pass,
            Err(_) => false,
        }
    }
}

fn rep_matrix_op_report(sample: OpSample) -> Result<Report, VerifyError> {
    use crate::matrix::Matrix;
    use tower::{GaloisAction, Tower, TowerScalar};
    let tower = Tower::new(vec![Rational::from_integer((-1).into())])?;
    let i = TowerScalar::radical(&tower, 0);
    let star = GaloisAction::flipping(&tower, &[0]);
    let r: TowerMatrix = Matrix::j(2);
    let a: TowerMatrix = match sample {
        OpSample::Identity => Matrix::identity(2),
        OpSample::Torus => {
            let t = forms::ts(2) + i.clone();
            let ts_inv = crate::scalar::Field::inv(&star.apply(&t)).expect("nonzero");
            Matrix::diag(&[t, ts_inv])
        }
        OpSample::Unipotent => {
            let mut u = Matrix::identity(2);
            u.set(0, 1, i.clone() * forms::ts(3));
            u
        }
        OpSample::Weyl => Matrix::j(2),
    };
    let mut report = Report::new(String::new());
    match forms::rep_matrix_op(&r, &a, &star) {
        Ok(_) => report.check("R·A·R⁻¹ = tA*⁻¹", true),
        Err(VerifyError::IdentityFailed { residual, .. }) => report.push("R·A·R⁻¹ = tA*⁻¹", false, residual),
        Err(e) => return Err(e),
    }
    Ok(report)
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Every registered scenario, positive ones first, sorted by name within
/// each group.
pub fn registry() -> Vec<Scenario> {
    use crate::rootcomb::QuatSign;
    let both = [EpsPsi::PlusI, EpsPsi::MinusI];
    let mut pos = Vec::new();
    for n in 1..=6 {
        for d in [2, 3, -1] {
            pos.push(Scenario::new(format!("build-p:n={n},d={d}"), ScenarioParams::BuildP { n, d: q(d) }, true));
        }
    }
    for (m, n, d) in [(1, 2, 1), (2, 2, 2), (3, 3, -1), (2, 4, 3), (4, 5, 5)] {
        pos.push(Scenario::new(format!("splittings:m={m},n={n},d={d}"), ScenarioParams::Splittings { m, n, d: q(d) }, true));
    }
    for m in 1..=6 {
        for c in [1, -3] {
            for eps in both {
                let p = ScenarioParams::SpGen { m, c: q(c), eps, perturb_h0: false };
                pos.push(Scenario::new(format!("sp-gen:m={m},c={c},eps={eps}"), p, true));
            }
        }
    }
    for n in 1..=6 {
        let d = if n % 2 == 0 { 1 } else { -1 };
        pos.push(Scenario::new(format!("so-gen:n={n}"), ScenarioParams::SoGen { n, d: q(d), wrong_parity: false }, true));
    }
    for m in 1..=4 {
        for n in [m, m + 1] {
            for eps in both {
                let p = ScenarioParams::Fpxi { m, n, eps, flip_u1: false };
                pos.push(Scenario::new(format!("fpxi:m={m},n={n},eps={eps}"), p, true));
            }
        }
    }
    for spec in keydiag::default_cases() {
        pos.push(Scenario::new(key_name(&spec), ScenarioParams::KeyDiagram { spec, flip_eps_only: false }, true));
    }
    for (a, b) in [(2, 5), (-1, 3), (3, -1)] {
        let p = ScenarioParams::LiftNa { a: q(a), b: q(b), units: UnitConvention::Split };
        pos.push(Scenario::new(format!("lift-na:a={a},b={b}"), p, true));
    }
    for sample in [OpSample::Identity, OpSample::Torus, OpSample::Unipotent, OpSample::Weyl] {
        pos.push(Scenario::new(format!("rep-matrix-op:{}", sample.name()), ScenarioParams::RepMatrixOp { sample }, true));
    }
    pos.sort_by(|a, b| a.name.cmp(&b.name));

    let mut neg = vec![
        Scenario::new(
            "neg:sp-gen-perturbed-h0:m=4,c=-3,eps=-i".into(),
            ScenarioParams::SpGen { m: 4, c: q(-3), eps: EpsPsi::MinusI, perturb_h0: true },
            false,
        ),
        Scenario::new(
            "neg:sp-gen-perturbed-h0:m=1,c=1,eps=+i".into(),
            ScenarioParams::SpGen { m: 1, c: q(1), eps: EpsPsi::PlusI, perturb_h0: true },
            false,
        ),
        Scenario::new(
            "neg:fpxi-flipped-u:m=2,n=3,eps=+i".into(),
            ScenarioParams::Fpxi { m: 2, n: 3, eps: EpsPsi::PlusI, flip_u1: true },
            false,
        ),
        Scenario::new(
            "neg:fpxi-flipped-u:m=2,n=2,eps=-i".into(),
            ScenarioParams::Fpxi { m: 2, n: 2, eps: EpsPsi::MinusI, flip_u1: true },
            false,
        ),
        Scenario::new(
            "neg:lift-na-wrong-units:a=2,b=5".into(),
            ScenarioParams::LiftNa { a: q(2), b: q(5), units: UnitConvention::KeyDiagram },
            false,
        ),
    ];
    for n in [2, 3] {
        let d = if n % 2 == 0 { 1 } else { -1 };
        neg.push(Scenario::new(
            format!("neg:so-gen-wrong-parity:n={n}"),
            ScenarioParams::SoGen { n, d: q(d), wrong_parity: true },
            false,
        ));
    }
    for (e_h, m, n, p) in [(QuatSign::Hamilton, 1, 1, 1), (QuatSign::Hamilton, 2, 3, 1), (QuatSign::Split, 2, 2, 1)] {
        let q_ = if e_h == QuatSign::Hamilton { m - p } else { n - p };
        let spec = CaseSpec::new(e_h, m, n, p, q_, EpsPsi::PlusI).expect("valid case");
        neg.push(Scenario::new(
            format!("neg:key-diagram-flipped-eps:{}", &key_name(&spec)["key-diagram:".len()..]),
            ScenarioParams::KeyDiagram { spec, flip_eps_only: true },
            false,
        ));
    }
    neg.sort_by(|a, b| a.name.cmp(&b.name));
    pos.extend(neg);
    pos
}

fn key_name(spec: &CaseSpec) -> String {
    let e = if spec.e_h == crate::rootcomb::QuatSign::Split { "1" } else { "-1" };
    format!("key-diagram:e={e},m={},n={},p={},q={},eps={}", spec.m, spec.n, spec.p, spec.q, spec.eps_psi)
}

pub fn find(name: &str) -> Result<Scenario, VerifyError> {
    registry().into_iter().find(|s| s.name == name).ok_or_else(|| VerifyError::UnknownScenario(name.to_string()))
}

/// Runs every scenario in registry order.
pub fn run_all() -> Vec<(Scenario, Result<Report, VerifyError>)> {
    registry().into_iter().map(|s| {
        let r = s.run();
        (s, r)
    }).collect()
}
