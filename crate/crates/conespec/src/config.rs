use serde::{Deserialize, Serialize};

/// Named tolerance bundle threaded through every numerical decision.
///
/// Rank, clustering, and cone-membership thresholds are *relative*: the
/// `_rel` values are multiplied by a problem scale (operator norm, spectral
/// radius, or vector norm) at the point of use. Every report serializes the
/// profile that produced it, so a verdict can always be traced back to the
/// thresholds that decided it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    pub name: String,
    /// Relative accuracy target for matrix-exponential evaluation.
    pub tol_exp: f64,
    /// Orthonormality slack for subspace bases.
    pub tol_ortho: f64,
    /// Eigenchain consistency residual, times the operator norm.
    pub tol_chain_rel: f64,
    /// Rank decision threshold, times the factored matrix's scale.
    pub tol_rank_rel: f64,
    /// Eigenvalue clustering radius, times max(1, spectral radius).
    pub cluster_radius_rel: f64,
    /// Cone membership slack, times the tested vector's norm.
    pub tol_cone_rel: f64,
    /// LP feasibility slack (absolute, on normalized tableaus).
    pub tol_lp: f64,
    /// Relative band around a spectral-gap decision that reads as Undecided.
    pub gap_tol: f64,
    /// Projective direction-convergence threshold for flow extraction.
    pub tol_dir: f64,
    /// Relative agreement required between independently computed eigenpairs.
    pub tol_pair: f64,
    /// Expansion coefficients below this (times the state norm) are treated as zero.
    pub coeff_floor_rel: f64,
    /// Condition-number cap for cone transforms.
    pub cond_cap: f64,
    /// Safety margin (radians) subtracted from open arcs before picking witnesses.
    pub arc_margin: f64,
    /// Resolution of the circle-grid used for verification scans.
    pub arc_grid: usize,
    /// Probe budget for sampled positivity campaigns.
    pub probe_count: usize,
    /// Violations are only reported beyond this multiple of the cone tolerance.
    pub violation_hysteresis: f64,
}

impl ToleranceProfile {
    pub fn default_profile() -> Self {
        ToleranceProfile {
            name: "default".into(),
            tol_exp: 1e-10,
            tol_ortho: 1e-12,
            tol_chain_rel: 1e-8,
            tol_rank_rel: 1e-9,
            cluster_radius_rel: 1e-7,
            tol_cone_rel: 1e-9,
            tol_lp: 1e-9,
            gap_tol: 1e-7,
            tol_dir: 1e-10,
            tol_pair: 1e-8,
            coeff_floor_rel: 1e-12,
            cond_cap: 1e8,
            arc_margin: 1e-10,
            arc_grid: 10_000,
            probe_count: 256,
            violation_hysteresis: 10.0,
        }
    }

    /// Tighter thresholds for final verification runs. Clustering radius and
    /// the transform condition cap stay put: those encode representability,
    /// not accuracy.
    pub fn strict_profile() -> Self {
        ToleranceProfile {
            name: "strict".into(),
            tol_exp: 1e-11,
            tol_ortho: 1e-13,
            tol_chain_rel: 1e-9,
            tol_rank_rel: 1e-10,
            tol_cone_rel: 1e-10,
            tol_lp: 1e-10,
            gap_tol: 1e-8,
            tol_dir: 1e-11,
            tol_pair: 1e-9,
            coeff_floor_rel: 1e-13,
            arc_grid: 20_000,
            probe_count: 1024,
            ..Self::default_profile()
        }
    }

    /// Look a profile up by name; `None` for anything unrecognized.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::default_profile()),
            "strict" => Some(Self::strict_profile()),
            _ => None,
        }
    }

    /// Cone membership slack for a vector of the given norm.
    pub fn tol_cone(&self, scale: f64) -> f64 {
        self.tol_cone_rel * scale.max(f64::MIN_POSITIVE)
    }

    /// Rank decision threshold at the given matrix scale.
    pub fn tol_rank(&self, scale: f64) -> f64 {
        self.tol_rank_rel * scale.max(f64::MIN_POSITIVE)
    }

    /// Clustering radius at the given spectral radius.
    pub fn cluster_radius(&self, spectral_radius: f64) -> f64 {
        self.cluster_radius_rel * spectral_radius.max(1.0)
    }
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self::default_profile()
    }
}
