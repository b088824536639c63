//! Numerical tolerances shared by the simulator, the builders and the tests.

/// Tolerance record. All comparisons in the crate read from [`TOLERANCES`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of `sum |amp|^2` from one.
    pub norm: f64,
    /// Allowed deviation of a distribution's total mass from one.
    pub prob_sum: f64,
    /// Elementwise tolerance for unitary and amplitude comparisons.
    pub matrix: f64,
    /// Tolerance for distribution comparisons against closed forms.
    pub distribution: f64,
    /// Tolerance on the sum of a policy vector.
    pub policy_sum: f64,
    /// Two probabilities closer than this are treated as tied maxima.
    pub argmax_tie: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    norm: 1e-9,
    prob_sum: 1e-9,
    matrix: 1e-9,
    distribution: 1e-9,
    policy_sum: 1e-6,
    argmax_tie: 1e-9,
};
