/// Numerical tolerances shared by validation and diagnostics.
///
/// Defaults sit well above double-precision eigensolver noise for the
/// intended dimensions (`d_S <= 4`, `d_E <= 64`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max elementwise `|A - A†|` accepted as Hermitian.
    pub herm: f64,
    /// Most negative eigenvalue accepted as positive semidefinite.
    pub psd: f64,
    /// Max `|Tr - 1|` for states, and `|Tr|` for traceless operators.
    pub trace: f64,
    /// Condition number above which a dynamical map counts as singular.
    pub cond_threshold: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            psd: 1e-9,
            trace: 1e-10,
            cond_threshold: 1e8,
        }
    }
}
