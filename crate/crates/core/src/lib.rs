//! Reduced dynamics of open quantum systems whose initial state carries a
//! fixed correlation operator with its environment.
//!
//! A correlated total state is split as `rho_S ⊗ rho_E + chi`. Keeping
//! `rho_E` and `chi` fixed, the reduced dynamics is the linear map
//!
//! ```text
//! Psi_t[X] = Phi_t[X] + I_t Tr{X},    I_t = Tr_E{U_t chi U_t†}
//! ```
//!
//! where `Phi_t` is the ordinary (uncorrelated, CPT) dynamical map. This
//! crate builds `Phi_t`, `I_t` and `Psi_t` from an exact total-system
//! propagation, derives the time-local generator
//! `L_t[X] + J_t Tr{X}` and its canonical Lindblad form, and integrates the
//! resulting master equation.
//!
//! Module map:
//!
//! - [`operator`], [`basis`], [`superop`]: dense operator algebra, Hermitian
//!   operator bases, vectorization, superoperators and Choi matrices.
//! - [`dynamics`]: assignment map, physical domain, exact propagation,
//!   `Phi_t`, `I_t`, `Psi_t`, inverses, Kraus and pseudo-Kraus forms, CP
//!   diagnostics.
//! - [`generator`]: analytic map derivatives, generators, canonical
//!   decomposition and a fixed-step RK4 master-equation integrator.
//! - [`models`]: the two-qubit swap-gate example and the Jaynes-Cummings
//!   model, with their closed-form references.
//! - [`sampling`]: random states, Bloch-ball sampling, rejection sampling
//!   of the physical domain.

pub mod basis;
pub mod dynamics;
pub mod error;
pub mod generator;
pub mod models;
pub mod operator;
pub mod sampling;
pub mod superop;
pub mod tolerance;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use operator::Operator;
pub use superop::{ChoiMatrix, SuperOperatorMatrix};
pub use tolerance::Tolerances;
