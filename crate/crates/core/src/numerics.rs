//! Tolerances and step sizes shared by the analysis routines.

/// Numerical knobs. Every verdict produced by this crate is relative to one of
/// these values, and reports echo the ones they used.
#[derive(Debug, Clone, PartialEq)]
pub struct Numerics {
    /// Singular values below `rank_tol · max(σ_max, 1)` count as zero.
    pub rank_tol: f64,
    /// Per-component relative tolerance when grouping invariant vectors.
    pub feature_tol: f64,
    /// Per-component relative tolerance for "𝒟ʳK is constant".
    pub const_tol: f64,
    /// Largest accepted bracket residual `max_i ‖[Â, X_i]‖`.
    pub killing_tol: f64,
    /// Largest accepted generator residual along a transport path.
    pub transport_tol: f64,
    /// Fixed RK4 step.
    pub ode_step: f64,
    /// Radius of the outer probe shell; the inner shell sits at half of it.
    pub probe_radius: f64,
    /// Points per probe shell; `None` means `2n + 2`.
    pub probe_count: Option<usize>,
    /// Central-difference step used by the verifiers.
    pub fd_step: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            rank_tol: 1e-9,
            feature_tol: 1e-6,
            const_tol: 1e-6,
            killing_tol: 1e-6,
            transport_tol: 1e-7,
            ode_step: 1e-3,
            probe_radius: 0.1,
            probe_count: None,
            fd_step: 1e-3,
        }
    }
}

impl Numerics {
    pub fn probe_count(&self, n: usize) -> usize {
        self.probe_count.unwrap_or(2 * n + 2)
    }

    /// Threshold below which a singular value is treated as zero.
    pub fn rank_threshold(&self, sigma_max: f64) -> f64 {
        self.rank_tol * sigma_max.max(1.0)
    }
}

/// `|a − b| ≤ tol · max(|a|, |b|, 1)`.
pub fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Largest per-component relative deviation, same scaling as [`relative_close`].
pub fn relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0))
        .fold(0.0, f64::max)
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
