//! Scenario files: JSON descriptions of a model, an initial state, a time
//! grid, tolerances and output selections.

use std::path::Path;

use corrdyn::dynamics::{decompose_total, AssignmentContext, TotalModel};
use corrdyn::models::{jc_model, swap_model, JcParams, SwapParams};
use corrdyn::operator::tensor;
use corrdyn::sampling::{random_physical_state, state_from_bloch};
use corrdyn::{Operator, Tolerances, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// A complex scalar written either as a plain number or as `[re, im]`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl Scalar {
    pub fn value(self) -> C64 {
        match self {
            Scalar::Real(x) => C64::new(x, 0.0),
            Scalar::Complex([re, im]) => C64::new(re, im),
        }
    }
}

/// Row-major nested arrays of scalars.
pub type MatrixSpec = Vec<Vec<Scalar>>;

pub fn parse_matrix(name: &str, m: &MatrixSpec) -> CliResult<Operator> {
    let rows: Vec<Vec<C64>> = m
        .iter()
        .map(|r| r.iter().map(|x| x.value()).collect())
        .collect();
    Operator::from_rows(&rows).map_err(|e| CliError::Input(format!("{name}: {e}")))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomSpec {
    pub d_s: usize,
    pub d_e: usize,
    #[serde(default)]
    pub h_total: Option<MatrixSpec>,
    #[serde(default)]
    pub h_s: Option<MatrixSpec>,
    #[serde(default)]
    pub h_e: Option<MatrixSpec>,
    #[serde(default)]
    pub h_i: Option<MatrixSpec>,
    #[serde(default)]
    pub rho_e: Option<MatrixSpec>,
    #[serde(default)]
    pub chi: Option<MatrixSpec>,
    #[serde(default)]
    pub rho_se: Option<MatrixSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwapSpec {
    pub p: f64,
}

fn default_omega0() -> f64 {
    1.0
}

fn default_cutoff() -> usize {
    corrdyn::models::jc::DEFAULT_FOCK_CUTOFF
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JcSpec {
    pub a: f64,
    pub p0: f64,
    #[serde(default = "default_omega0")]
    pub omega0: f64,
    pub delta: f64,
    pub g: f64,
    #[serde(default = "default_cutoff")]
    pub fock_cutoff: usize,
}

impl JcSpec {
    pub fn params(&self) -> CliResult<JcParams> {
        Ok(JcParams {
            a: self.a,
            p0: self.p0,
            omega0: self.omega0,
            delta: self.delta,
            g: self.g,
            fock_cutoff: self.fock_cutoff,
        }
        .validated()?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    Custom(CustomSpec),
    Swap(SwapSpec),
    JaynesCummings(JcSpec),
}

impl ModelSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            ModelSpec::Custom(_) => "custom",
            ModelSpec::Swap(_) => "swap",
            ModelSpec::JaynesCummings(_) => "jaynes_cummings",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialStateSpec {
    /// `"reference"` (the model's reduced reference state) or
    /// `"random_physical"` (rejection-sampled from the physical domain).
    Named(String),
    Bloch {
        bloch: [f64; 3],
    },
    Matrix {
        matrix: MatrixSpec,
    },
}

impl Default for InitialStateSpec {
    fn default() -> Self {
        InitialStateSpec::Named("reference".into())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGridSpec {
    pub t_max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    pub herm: Option<f64>,
    pub psd: Option<f64>,
    pub trace: Option<f64>,
    pub cond_threshold: Option<f64>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "yes")]
    pub exact: bool,
    #[serde(default = "yes")]
    pub linear_map: bool,
    #[serde(default = "yes")]
    pub master_equation: bool,
    #[serde(default)]
    pub svg: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            exact: true,
            linear_map: true,
            master_equation: true,
            svg: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub model: ModelSpec,
    #[serde(default)]
    pub initial_state: InitialStateSpec,
    #[serde(default)]
    pub time_grid: Option<TimeGridSpec>,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
}

/// A parsed scenario together with the SHA-256 of its source bytes.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub hash: String,
}

pub fn hash_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn parse_scenario(text: &str) -> CliResult<LoadedScenario> {
    let scenario: Scenario =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("scenario schema: {e}")))?;
    Ok(LoadedScenario {
        scenario,
        hash: hash_bytes(text.as_bytes()),
    })
}

pub fn load_scenario(path: &Path) -> CliResult<LoadedScenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read scenario {}: {e}", path.display())))?;
    parse_scenario(&text)
}

impl Scenario {
    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        let t = &self.tolerances;
        Tolerances {
            herm: t.herm.unwrap_or(d.herm),
            psd: t.psd.unwrap_or(d.psd),
            trace: t.trace.unwrap_or(d.trace),
            cond_threshold: t.cond_threshold.unwrap_or(d.cond_threshold),
        }
    }
}

/// Everything needed to run a command: the total model, the reference
/// reduced state (if the model defines one) and the JC parameters when
/// applicable.
pub struct BuiltModel {
    pub model: TotalModel,
    pub reference: Option<Operator>,
    pub jc: Option<JcParams>,
}

fn build_custom(spec: &CustomSpec, tol: Tolerances) -> CliResult<BuiltModel> {
    let (d_s, d_e) = (spec.d_s, spec.d_e);
    if d_s < 2 || d_e < 1 {
        return Err(CliError::Input(format!(
            "need d_s >= 2 and d_e >= 1, got {d_s}, {d_e}"
        )));
    }
    let check_dim = |name: &str, op: &Operator, d: usize| -> CliResult<()> {
        if op.dim() != d {
            return Err(CliError::Input(format!(
                "{name} has dimension {}, expected {d}",
                op.dim()
            )));
        }
        Ok(())
    };
    let split_given = spec.h_s.is_some() || spec.h_e.is_some() || spec.h_i.is_some();
    let h = match (&spec.h_total, split_given) {
        (Some(h), false) => parse_matrix("h_total", h)?,
        (None, true) => {
            let (Some(hs), Some(he)) = (&spec.h_s, &spec.h_e) else {
                return Err(CliError::Input(
                    "h_s and h_e are both required when h_total is absent".into(),
                ));
            };
            let hs = parse_matrix("h_s", hs)?;
            let he = parse_matrix("h_e", he)?;
            check_dim("h_s", &hs, d_s)?;
            check_dim("h_e", &he, d_e)?;
            let mut h =
                &tensor(&hs, &Operator::identity(d_e)) + &tensor(&Operator::identity(d_s), &he);
            if let Some(hi) = &spec.h_i {
                let hi = parse_matrix("h_i", hi)?;
                check_dim("h_i", &hi, d_s * d_e)?;
                h = &h + &hi;
            }
            h
        }
        (Some(_), true) => {
            return Err(CliError::Input(
                "give either h_total or h_s/h_e/h_i, not both".into(),
            ))
        }
        (None, false) => {
            return Err(CliError::Input(
                "missing Hamiltonian (h_total or h_s/h_e)".into(),
            ))
        }
    };
    check_dim("h_total", &h, d_s * d_e)?;
    let (ctx, reference) = match (&spec.chi, &spec.rho_se) {
        (Some(chi), None) => {
            let Some(rho_e) = &spec.rho_e else {
                return Err(CliError::Input(
                    "rho_e is required together with chi".into(),
                ));
            };
            let rho_e = parse_matrix("rho_e", rho_e)?;
            check_dim("rho_e", &rho_e, d_e)?;
            let chi = parse_matrix("chi", chi)?;
            check_dim("chi", &chi, d_s * d_e)?;
            (AssignmentContext::new(d_s, rho_e, chi, &tol)?, None)
        }
        (None, Some(rho_se)) => {
            if spec.rho_e.is_some() {
                return Err(CliError::Input(
                    "rho_e must not be given together with rho_se".into(),
                ));
            }
            let rho_se = parse_matrix("rho_se", rho_se)?;
            check_dim("rho_se", &rho_se, d_s * d_e)?;
            let (rho_s, ctx) = decompose_total(&rho_se, d_s, d_e, &tol)?;
            (ctx, Some(rho_s))
        }
        _ => {
            return Err(CliError::Input(
                "exactly one of chi and rho_se must be given".into(),
            ))
        }
    };
    Ok(BuiltModel {
        model: TotalModel::new(ctx, h, tol)?,
        reference,
        jc: None,
    })
}

pub fn build_model(spec: &ModelSpec, tol: Tolerances) -> CliResult<BuiltModel> {
    match spec {
        ModelSpec::Custom(c) => build_custom(c, tol),
        ModelSpec::Swap(s) => {
            let (model, rho) = swap_model(SwapParams::new(s.p)?, tol)?;
            Ok(BuiltModel {
                model,
                reference: Some(rho),
                jc: None,
            })
        }
        ModelSpec::JaynesCummings(j) => {
            let params = j.params()?;
            let (model, rho) = jc_model(&params, tol)?;
            Ok(BuiltModel {
                model,
                reference: Some(rho),
                jc: Some(params),
            })
        }
    }
}

pub fn initial_state(
    spec: &InitialStateSpec,
    built: &BuiltModel,
    tol: &Tolerances,
    seed: u64,
) -> CliResult<Operator> {
    let d_s = built.model.d_s();
    let rho = match spec {
        InitialStateSpec::Named(name) if name == "reference" => {
            built.reference.clone().ok_or_else(|| {
                CliError::Input(
                    "model has no reference state; give initial_state explicitly".into(),
                )
            })?
        }
        InitialStateSpec::Named(name) if name == "random_physical" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_physical_state(built.model.context(), tol, 1_000_000, &mut rng).ok_or_else(
                || CliError::Input("could not sample a state from the physical domain".into()),
            )?
        }
        InitialStateSpec::Named(other) => {
            return Err(CliError::Input(format!("unknown initial_state '{other}'")));
        }
        InitialStateSpec::Bloch { bloch } => {
            if d_s != 2 {
                return Err(CliError::Input(
                    "Bloch-vector initial states need d_s = 2".into(),
                ));
            }
            state_from_bloch(*bloch)
        }
        InitialStateSpec::Matrix { matrix } => parse_matrix("initial_state", matrix)?,
    };
    if rho.dim() != d_s {
        return Err(CliError::Input(format!(
            "initial state has dimension {}, expected {d_s}",
            rho.dim()
        )));
    }
    rho.ensure_state(tol)?;
    Ok(rho)
}
