//! Correlated-initial-state dynamics.
//!
//! A total state `ρ_SE = ρ_S ⊗ ρ_E + χ` is split into its product of
//! marginals and a correlation operator `χ` (Hermitian, both partial traces
//! zero). With `ρ_E` and `χ` held fixed, every reduced operator `X` is
//! assigned the total operator `X ⊗ ρ_E + χ Tr{X}`, and the exact reduced
//! dynamics becomes the linear map `Ψ_t[X] = Φ_t[X] + I_t Tr{X}`.

mod context;
mod cp;
mod kraus;
mod maps;
mod model;

pub use context::{decompose_total, AssignmentContext, DomainCheck};
pub use cp::{cp_check, CpDiagnostics};
pub use kraus::{kraus_uncorrelated, pseudo_kraus_inhomogeneity, KrausTerm, PseudoKraus};
pub use maps::{condition_number, inverse_map, MapInverse, MapSnapshot};
pub use model::{propagator, TotalModel};
