//! Jaynes–Cummings model: a two-level atom coupled to a single field mode.
//!
//! Basis conventions: system index 0 is the excited state `|e⟩` and index 1
//! the ground state `|g⟩`, so `σ_z = diag(1, -1)`, `σ_+ = |e⟩⟨g|` and
//! `σ_+σ_- = |e⟩⟨e|`. The field is truncated to Fock states
//! `|0⟩ … |fock_cutoff⟩`.
//!
//! The reference total state is
//! `p_0 ρ_0 ⊗ |0⟩⟨0| + (1-p_0) ρ_1 ⊗ |1⟩⟨1|` with `ρ_{0,1} = (I ± aσ_z)/2`.

use nalgebra::DMatrix;

use crate::dynamics::{decompose_total, TotalModel};
use crate::error::{Error, Result};
use crate::generator::CanonicalForm;
use crate::operator::{pauli, tensor, Operator};
use crate::tolerance::Tolerances;
use crate::C64;

pub const DEFAULT_FOCK_CUTOFF: usize = 4;

/// Denominators `α+β-1` and `|γ|` below this make the rates undefined.
const SINGULAR_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcParams {
    /// Correlation strength, `0 ≤ a ≤ 1`.
    pub a: f64,
    /// Weight of the vacuum component, `0 < p0 < 1`.
    pub p0: f64,
    pub omega0: f64,
    /// Detuning `Δ = ω_0 - ω`.
    pub delta: f64,
    pub g: f64,
    pub fock_cutoff: usize,
}

impl JcParams {
    pub fn new(a: f64, p0: f64, omega0: f64, delta: f64, g: f64) -> Result<Self> {
        Self {
            a,
            p0,
            omega0,
            delta,
            g,
            fock_cutoff: DEFAULT_FOCK_CUTOFF,
        }
        .validated()
    }

    /// The parameters used for the ρ_gg comparison: `a = 0.6`, `p0 = 0.4`,
    /// `Δ = g = 0.1 ω_0`, `ω_0 = 1`.
    pub fn reference() -> Self {
        Self::new(0.6, 0.4, 1.0, 0.1, 0.1).expect("valid reference parameters")
    }

    pub fn with_fock_cutoff(self, fock_cutoff: usize) -> Result<Self> {
        Self {
            fock_cutoff,
            ..self
        }
        .validated()
    }

    pub fn with_a(self, a: f64) -> Result<Self> {
        Self { a, ..self }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(0.0..=1.0).contains(&self.a) {
            return bad(format!("a must lie in [0, 1], got {}", self.a));
        }
        if !(self.p0 > 0.0 && self.p0 < 1.0) {
            return bad(format!("p0 must lie in (0, 1), got {}", self.p0));
        }
        if self.fock_cutoff < 2 {
            return bad(format!(
                "fock_cutoff must be at least 2, got {}",
                self.fock_cutoff
            ));
        }
        if ![self.omega0, self.delta, self.g]
            .iter()
            .all(|x| x.is_finite())
        {
            return bad("omega0, delta and g must be finite".into());
        }
        Ok(self)
    }

    /// Field frequency `ω = ω_0 - Δ`.
    pub fn omega(&self) -> f64 {
        self.omega0 - self.delta
    }

    pub fn d_e(&self) -> usize {
        self.fock_cutoff + 1
    }

    /// Rabi frequency `Ω_n = √(Δ² + 4g²n)`.
    pub fn rabi(&self, n: usize) -> f64 {
        (self.delta * self.delta + 4.0 * self.g * self.g * n as f64).sqrt()
    }
}

fn annihilation(d: usize) -> Operator {
    let mut b = Operator::zeros(d).into_matrix();
    for n in 1..d {
        b[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Operator::new(b).expect("square")
}

fn fock_projector(d: usize, n: usize) -> Operator {
    Operator::unit(d, n, n)
}

pub fn jc_hamiltonian(params: &JcParams) -> Operator {
    let d_e = params.d_e();
    let b = annihilation(d_e);
    let bd = b.dagger();
    let id_e = Operator::identity(d_e);
    let excited = Operator::unit(2, 0, 0);
    let h_s = tensor(&excited.scale_real(params.omega0), &id_e);
    let h_e = tensor(
        &Operator::identity(2),
        &(&bd * &b).scale_real(params.omega()),
    );
    let h_i = (&tensor(&pauli::plus(), &b) + &tensor(&pauli::minus(), &bd)).scale_real(params.g);
    &(&h_s + &h_e) + &h_i
}

/// Excitation number `σ_+σ_- ⊗ I + I ⊗ b†b`.
pub fn excitation_number(params: &JcParams) -> Operator {
    let d_e = params.d_e();
    let b = annihilation(d_e);
    &tensor(&Operator::unit(2, 0, 0), &Operator::identity(d_e))
        + &tensor(&Operator::identity(2), &(&b.dagger() * &b))
}

pub fn jc_reference_state(params: &JcParams) -> Operator {
    let d_e = params.d_e();
    let id = Operator::identity(2);
    let az = pauli::z().scale_real(params.a);
    let rho0 = (&id + &az).scale_real(0.5);
    let rho1 = (&id - &az).scale_real(0.5);
    &tensor(&rho0, &fock_projector(d_e, 0)).scale_real(params.p0)
        + &tensor(&rho1, &fock_projector(d_e, 1)).scale_real(1.0 - params.p0)
}

/// The JC scenario and its reference reduced state `½(I + a(2p_0-1)σ_z)`.
pub fn jc_model(params: &JcParams, tol: Tolerances) -> Result<(TotalModel, Operator)> {
    let params = params.validated()?;
    let (rho_s, ctx) = decompose_total(&jc_reference_state(&params), 2, params.d_e(), &tol)?;
    Ok((TotalModel::new(ctx, jc_hamiltonian(&params), tol)?, rho_s))
}

/// Closed-form coefficients of the JC map and their time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcCoefficients {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: C64,
    pub f: f64,
    pub c1: C64,
    pub c2: C64,
    pub d1_sq: f64,
    pub d2_sq: f64,
    pub alpha_dot: f64,
    pub beta_dot: f64,
    pub gamma_dot: C64,
    pub f_dot: f64,
}

// c_n(t), ċ_n(t), |d_n(t)|² and its derivative.
fn rabi_terms(params: &JcParams, n: usize, t: f64) -> (C64, C64, f64, f64) {
    let omega = params.rabi(n);
    let delta = params.delta;
    let phase = C64::from_polar(1.0, 0.5 * delta * t);
    let (s, c) = (0.5 * omega * t).sin_cos();
    let ratio = if omega > 0.0 { delta / omega } else { 0.0 };
    let bracket = C64::new(c, -ratio * s);
    let c_n = phase * bracket;
    let bracket_dot = C64::new(-0.5 * omega * s, -0.5 * delta * c);
    let c_dot = C64::new(0.0, 0.5 * delta) * c_n + phase * bracket_dot;
    let amp = if omega > 0.0 {
        n as f64 * (2.0 * params.g / omega).powi(2)
    } else {
        0.0
    };
    let d_sq = amp * s * s;
    let d_sq_dot = amp * 0.5 * omega * (omega * t).sin();
    (c_n, c_dot, d_sq, d_sq_dot)
}

pub fn jc_coefficients(params: &JcParams, t: f64) -> JcCoefficients {
    let p0 = params.p0;
    let (c1, c1_dot, d1_sq, d1_dot) = rabi_terms(params, 1, t);
    let (c2, c2_dot, d2_sq, d2_dot) = rabi_terms(params, 2, t);
    let mix = C64::new(p0, 0.0) + c2 * (1.0 - p0);
    let weight = params.a * p0 * (1.0 - p0);
    JcCoefficients {
        t,
        alpha: 1.0 - (1.0 - p0) * d1_sq,
        beta: 1.0 - p0 * d1_sq - (1.0 - p0) * d2_sq,
        gamma: c1 * mix,
        f: weight * d2_sq,
        c1,
        c2,
        d1_sq,
        d2_sq,
        alpha_dot: -(1.0 - p0) * d1_dot,
        beta_dot: -p0 * d1_dot - (1.0 - p0) * d2_dot,
        gamma_dot: c1_dot * mix + c1 * c2_dot * (1.0 - p0),
        f_dot: weight * d2_dot,
    }
}

// Basis order (|e⟩, |g⟩): ρ_eg sits in row 0, column 1.
fn state_from_populations(rho_gg: f64, rho_eg: C64) -> Operator {
    Operator::from_rows(&[
        vec![C64::new(1.0 - rho_gg, 0.0), rho_eg],
        vec![rho_eg.conj(), C64::new(rho_gg, 0.0)],
    ])
    .expect("2x2 rows")
}

fn closed_form(params: &JcParams, t: f64, rho0: &Operator, correlated: bool) -> Operator {
    let k = jc_coefficients(params, t);
    let f = if correlated { k.f } else { 0.0 };
    let rho_gg = rho0.get(1, 1).re * (k.alpha + k.beta - 1.0) + 1.0 - k.beta - f;
    let rho_eg = rho0.get(0, 1) * C64::from_polar(1.0, -params.omega0 * t) * k.gamma;
    state_from_populations(rho_gg, rho_eg)
}

/// Closed-form correlated map on a trace-one Hermitian `ρ_S(0)`:
/// `ρ_gg(t) = ρ_gg(0)(α+β-1) + 1 - β - f`,
/// `ρ_eg(t) = ρ_eg(0) e^{-iω_0 t} γ`.
pub fn jc_map_closed_form(params: &JcParams, t: f64, rho0: &Operator) -> Operator {
    closed_form(params, t, rho0, true)
}

/// The same map without the correlation term (`f = 0`).
pub fn jc_map_closed_form_uncorrelated(params: &JcParams, t: f64, rho0: &Operator) -> Operator {
    closed_form(params, t, rho0, false)
}

/// Sphere centers `c_0 = -2a(1-p_0) ê_z` and `c_1 = 2a p_0 ê_z`.
pub fn jc_domain_centers(params: &JcParams) -> ([f64; 3], [f64; 3]) {
    (
        [0.0, 0.0, -2.0 * params.a * (1.0 - params.p0)],
        [0.0, 0.0, 2.0 * params.a * params.p0],
    )
}

/// `1 - max_i ‖v - c_i‖²`; non-negative exactly on the physical domain.
pub fn jc_domain_margin(params: &JcParams, v: [f64; 3]) -> f64 {
    let (c0, c1) = jc_domain_centers(params);
    let dist = |c: [f64; 3]| (0..3).map(|k| (v[k] - c[k]).powi(2)).sum::<f64>();
    1.0 - dist(c0).max(dist(c1))
}

/// Membership of the Bloch vector `v` in the intersection of the unit
/// spheres around `c_0` and `c_1`, with slack for rounding on the boundary.
pub fn jc_domain(params: &JcParams, v: [f64; 3]) -> bool {
    jc_domain_margin(params, v) >= -1e-12
}

/// Effective Hamiltonian and `σ_+`, `σ_-`, `σ_z` rates of the correlated
/// generator.
#[derive(Debug, Clone)]
pub struct JcRates {
    pub hamiltonian: Operator,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub lambda_z: f64,
}

/// Closed-form rates
///
/// ```text
/// λ_+ = [(α-f-1)β̇ - (β+f)α̇ + (α+β-1)ḟ] / (α+β-1)
/// λ_- = [(β+f-1)α̇ - (α-f)β̇ - (α+β-1)ḟ] / (α+β-1)
/// λ_z = ¼[(α̇+β̇)/(α+β-1) - 2 Re(γ̇/γ)]
/// K_S = [ω_0 - Im(γ̇/γ)] σ_+σ_-
/// ```
pub fn jc_rates_closed_form(params: &JcParams, t: f64) -> Result<JcRates> {
    let k = jc_coefficients(params, t);
    let den = k.alpha + k.beta - 1.0;
    if den.abs() < SINGULAR_EPS || k.gamma.norm() < SINGULAR_EPS {
        return Err(Error::SingularTime(t));
    }
    let (a, b, f) = (k.alpha, k.beta, k.f);
    let (ad, bd, fd) = (k.alpha_dot, k.beta_dot, k.f_dot);
    let log_gamma_dot = k.gamma_dot / k.gamma;
    Ok(JcRates {
        hamiltonian: Operator::unit(2, 0, 0).scale_real(params.omega0 - log_gamma_dot.im),
        lambda_plus: ((a - f - 1.0) * bd - (b + f) * ad + den * fd) / den,
        lambda_minus: ((b + f - 1.0) * ad - (a - f) * bd - den * fd) / den,
        lambda_z: 0.25 * ((ad + bd) / den - 2.0 * log_gamma_dot.re),
    })
}

/// Rates of a qubit canonical form in the `σ_+`, `σ_-`, `σ_z` channel
/// convention, obtained by projecting its dissipator onto the orthonormal
/// basis `{σ_+, σ_-, σ_z/√2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaRates {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub lambda_z: f64,
    /// Largest off-diagonal coefficient; zero when the dissipator is
    /// diagonal in this basis.
    pub off_diagonal: f64,
}

pub fn sigma_rates(form: &CanonicalForm) -> SigmaRates {
    let basis = [
        pauli::plus(),
        pauli::minus(),
        pauli::z().scale_real(std::f64::consts::FRAC_1_SQRT_2),
    ];
    let a: DMatrix<C64> = form.coefficient_matrix(&basis);
    let mut off = 0.0f64;
    for r in 0..3 {
        for s in 0..3 {
            if r != s {
                off = off.max(a[(r, s)].norm());
            }
        }
    }
    SigmaRates {
        lambda_plus: a[(0, 0)].re,
        lambda_minus: a[(1, 1)].re,
        lambda_z: 0.5 * a[(2, 2)].re,
        off_diagonal: off,
    }
}
