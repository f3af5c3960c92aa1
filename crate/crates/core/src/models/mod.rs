//! Built-in scenarios with closed-form references.

pub mod jc;
pub mod swap;

pub use jc::{
    jc_coefficients, jc_domain, jc_domain_margin, jc_map_closed_form,
    jc_map_closed_form_uncorrelated, jc_model, jc_rates_closed_form, sigma_rates, JcCoefficients,
    JcParams, JcRates, SigmaRates,
};
pub use swap::{
    swap_correlated_map_closed_form, swap_hamiltonian, swap_model, swap_zero_discord_map,
    SwapParams,
};
