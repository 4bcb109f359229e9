/// Numerical tolerances shared by the simplex kernel and its callers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    /// Primal/dual feasibility and reduced-cost tolerance.
    pub feas_tol: f64,
    /// Smallest admissible pivot magnitude.
    pub pivot_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            feas_tol: 1e-9,
            pivot_tol: 1e-11,
        }
    }
}
