//! Shifted linear flows, cone-invariance monitoring, and asymptotic growth
//! profiles.
//!
//! The flow `x(t) = e^{alpha t} e^{At} x0` is evaluated by exact semigroup
//! action (matrix exponentials), never by stepwise integration. Every
//! trajectory carries a log-magnitude ledger so growth can be measured long
//! after the state itself would overflow.
//!
//! The asymptotic profile of a trajectory — the growth rate `alpha`, the
//! polynomial power `nu`, and the oscillating limit function
//! `Gamma(t) = sum_i c_i e^{i beta_i t} w_i` with eigenvector terms — is
//! computed structurally from the generalized eigenbasis, and can be
//! cross-validated by [`estimate_growth`], an independent regression on the
//! trajectory tail.

use crate::cones::ConeSpec;
use crate::config::ToleranceProfile;
use crate::error::{Error, Result};
use crate::linalg::{c, eigen_spectrum, CMatrix, CVector, C64, Cpqr, Flow};

/// Exponent ledger values beyond this cannot be materialized in f64.
const MAX_MATERIALIZABLE_EXP: f64 = 700.0;

/// Central-difference step for validating that Gamma solves its ODE.
const GAMMA_ODE_STEP: f64 = 1e-5;

/// Relative residual allowed in the Gamma ODE validation.
const GAMMA_ODE_REL: f64 = 1e-6;

/// A sampled solution of `x' = A x + alpha x`.
///
/// In normalized mode each stored state is a unit vector and the true state
/// is `e^{log_norms[k]} * states[k]`; otherwise states are materialized
/// outright and `log_norms[k]` still records `ln ||x(t_k)||`.
#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
    pub alpha_used: f64,
    pub normalized: bool,
    /// Natural log of the true state magnitude at each grid time.
    pub log_norms: Vec<f64>,
}

impl FlowTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// CSV rendering: header `t,re_0,im_0,...,re_{n-1},im_{n-1},log_norm`,
    /// one row per grid point, 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, |s| s.dim());
        let mut out = String::from("t");
        for k in 0..n {
            out.push_str(&format!(",re_{k},im_{k}"));
        }
        out.push_str(",log_norm\n");
        for (k, t) in self.times.iter().enumerate() {
            out.push_str(&format!("{t:.16e}"));
            for z in self.states[k].iter() {
                out.push_str(&format!(",{:.16e},{:.16e}", z.re, z.im));
            }
            out.push_str(&format!(",{:.16e}\n", self.log_norms[k]));
        }
        out
    }
}

/// Default monitoring grid: 200 geometric points on [0.01, 40], covering the
/// transient and asymptotic regimes without overflow in normalized mode.
pub fn default_time_grid() -> Vec<f64> {
    let (t0, t1, n) = (0.01f64, 40.0f64, 200usize);
    (0..n).map(|k| t0 * (t1 / t0).powf(k as f64 / (n - 1) as f64)).collect()
}

/// Evaluates `x(t) = e^{alpha t} e^{At} x0` on the grid.
///
/// Normalized mode stores unit directions plus the magnitude ledger and
/// never overflows; plain mode materializes the states and reports
/// `Overflow` when a magnitude exceeds the f64 range.
pub fn evolve(
    a: &CMatrix,
    alpha_shift: f64,
    x0: &CVector,
    time_grid: &[f64],
    normalized: bool,
) -> Result<FlowTrajectory> {
    if !a.is_square() || a.nrows() != x0.dim() {
        return Err(Error::DimensionMismatch("operator shape vs initial state".into()));
    }
    if x0.norm() == 0.0 {
        return Err(Error::InvalidSpec("the flow of the zero state is identically zero".into()));
    }
    if !alpha_shift.is_finite() {
        return Err(Error::NonFinite("shift".into()));
    }
    if time_grid.is_empty() {
        return Err(Error::InvalidSpec("empty time grid".into()));
    }
    if time_grid.windows(2).any(|w| !(w[0] < w[1])) || time_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidSpec("time grid must be finite and strictly increasing".into()));
    }
    let flow = Flow::new(a)?;
    let mut states = Vec::with_capacity(time_grid.len());
    let mut log_norms = Vec::with_capacity(time_grid.len());
    for &t in time_grid {
        let (dir, log_mag) = flow.apply_normalized(t, x0)?;
        let total = alpha_shift * t + log_mag;
        if normalized {
            states.push(dir);
        } else {
            if total > MAX_MATERIALIZABLE_EXP {
                return Err(Error::Overflow { exponent: total });
            }
            states.push(dir.scale(c(total.exp(), 0.0)));
        }
        log_norms.push(total);
    }
    Ok(FlowTrajectory {
        times: time_grid.to_vec(),
        states,
        alpha_used: alpha_shift,
        normalized,
        log_norms,
    })
}

/// Grid-wise cone membership audit of a trajectory.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    /// Number of grid states checked.
    pub checked: usize,
    /// Largest membership violation among the stored states.
    pub max_violation: f64,
    /// Grid time at which the largest violation occurred.
    pub worst_time: f64,
    /// States whose violation exceeds the hysteresis threshold
    /// (10x the cone tolerance at the state's scale).
    pub breaches: usize,
    pub first_breach_time: Option<f64>,
}

/// Checks every stored state for cone membership. A positive operator keeps
/// the cone invariant along the flow, so a certified-positive `A` should
/// produce no breaches beyond the hysteresis threshold.
pub fn monitor_cone_invariance(
    traj: &FlowTrajectory,
    cone: &ConeSpec,
    tol: &ToleranceProfile,
) -> Result<InvarianceReport> {
    let mut report = InvarianceReport {
        checked: 0,
        max_violation: 0.0,
        worst_time: *traj.times.first().unwrap_or(&0.0),
        breaches: 0,
        first_breach_time: None,
    };
    for (k, x) in traj.states.iter().enumerate() {
        let v = cone.violation(x)?;
        report.checked += 1;
        if v > report.max_violation {
            report.max_violation = v;
            report.worst_time = traj.times[k];
        }
        if v > tol.violation_hysteresis * tol.tol_cone(x.norm().max(1.0)) {
            report.breaches += 1;
            report.first_breach_time.get_or_insert(traj.times[k]);
        }
    }
    Ok(report)
}

/// One oscillating term `coefficient * e^{i beta t} * eigenvector` of the
/// asymptotic limit function.
#[derive(Debug, Clone)]
pub struct ProfileTerm {
    pub coefficient: C64,
    pub beta: f64,
    pub eigenvector: CVector,
}

/// Asymptotic structure of the flow from a given state:
/// `t^{-nu} e^{-alpha t} x(t) -> Gamma(t)` with
/// `Gamma(t) = sum_i coefficient_i e^{i beta_i t} eigenvector_i`.
///
/// Every `alpha + i beta_i` is an eigenvalue, the eigenvectors are linearly
/// independent, and Gamma never vanishes. `nu` is the polynomial power of
/// `t` in the normalization (0 for semisimple dominant structure).
#[derive(Debug, Clone)]
pub struct AsymptoticProfile {
    pub alpha: f64,
    pub nu: usize,
    pub terms: Vec<ProfileTerm>,
}

impl AsymptoticProfile {
    /// Evaluates `Gamma(t)`.
    pub fn gamma_at(&self, t: f64) -> CVector {
        let dim = self.terms.first().map_or(0, |term| term.eigenvector.dim());
        let mut acc = CVector::zeros(dim);
        for term in &self.terms {
            let phase = c((term.beta * t).cos(), (term.beta * t).sin());
            acc = acc.axpy(term.coefficient * phase, &term.eigenvector);
        }
        acc
    }
}

/// Computes the asymptotic profile of the flow `x' = A x` from `x0`.
///
/// The state is expanded over a generalized eigenbasis organized in chains
/// `(A - mu) v_j = v_{j+1}` ending at a true eigenvector. For each chain the
/// lowest-index active coordinate `k` (coefficient above the floor
/// `coeff_floor_rel * ||x0||`) dominates with polynomial power
/// `chain_len - k - 1`; globally, `alpha` is the largest eigenvalue real
/// part among active chains, `nu` the largest power among those, and the
/// surviving terms carry coefficient `a_k / nu!` on the chain's eigenvector.
pub fn asymptotic_profile(
    a: &CMatrix,
    x0: &CVector,
    tol: &ToleranceProfile,
) -> Result<AsymptoticProfile> {
    if !a.is_square() || a.nrows() != x0.dim() {
        return Err(Error::DimensionMismatch("operator shape vs initial state".into()));
    }
    let n = a.nrows();
    if x0.norm() == 0.0 {
        return Err(Error::InvalidSpec("the zero state has no growth profile".into()));
    }
    let spectrum = eigen_spectrum(a, tol)?;

    // assemble the chain basis in deterministic cluster/chain/vector order
    let mut columns: Vec<&CVector> = Vec::with_capacity(n);
    for cluster in &spectrum.clusters {
        for chain in &cluster.chains {
            for v in &chain.vectors {
                columns.push(v);
            }
        }
    }
    if columns.len() != n {
        return Err(Error::ExpansionFailure(format!(
            "chain basis has {} vectors in dimension {n}",
            columns.len()
        )));
    }
    let mut w = CMatrix::zeros(n, n);
    for (j, v) in columns.iter().enumerate() {
        w.set_col(j, v);
    }
    let qr = Cpqr::factor(&w);
    let rank_tol = tol.tol_rank(w.norm_fro());
    if qr.rank(rank_tol) < n {
        return Err(Error::ExpansionFailure("chain basis is numerically rank deficient".into()));
    }
    let coeffs = qr.solve_lstsq(x0, rank_tol);
    let residual = w.matvec(&coeffs).sub(x0).norm();
    if residual > tol.tol_chain_rel * x0.norm() {
        return Err(Error::ExpansionFailure(format!(
            "expansion residual {residual:.3e} exceeds tolerance"
        )));
    }
    let floor = tol.coeff_floor_rel * x0.norm();

    // per chain: lowest active coordinate decides the dominant power
    struct Active {
        re: f64,
        beta: f64,
        power: usize,
        leading: C64,
        eigenvector: CVector,
    }
    let mut active: Vec<Active> = Vec::new();
    let mut offset = 0usize;
    for cluster in &spectrum.clusters {
        for chain in &cluster.chains {
            let len = chain.vectors.len();
            let slice = offset..offset + len;
            offset += len;
            let Some(k) = slice.clone().position(|j| coeffs[j].norm() > floor) else {
                continue;
            };
            active.push(Active {
                re: chain.eigenvalue.re,
                beta: chain.eigenvalue.im,
                power: len - k - 1,
                leading: coeffs[slice.start + k],
                eigenvector: chain.eigenvector().clone(),
            });
        }
    }
    if active.is_empty() {
        return Err(Error::ExpansionFailure(
            "no chain carries a coefficient above the floor".into(),
        ));
    }
    let alpha = active.iter().map(|t| t.re).fold(f64::NEG_INFINITY, f64::max);
    let radius = tol.cluster_radius(spectrum.spectral_radius);
    let dominant: Vec<&Active> = active.iter().filter(|t| alpha - t.re <= radius).collect();
    let nu = dominant.iter().map(|t| t.power).max().expect("nonempty dominant set");
    let factorial: f64 = (1..=nu).map(|k| k as f64).product();
    let terms = dominant
        .into_iter()
        .filter(|t| t.power == nu)
        .map(|t| ProfileTerm {
            coefficient: t.leading / c(factorial, 0.0),
            beta: t.beta,
            eigenvector: t.eigenvector.clone(),
        })
        .collect();
    Ok(AsymptoticProfile { alpha, nu, terms })
}

/// Tail regression on a trajectory: fits `log ||x(t)|| ~ alpha t + nu ln t
/// + const` over the samples with `t >= t_max / 4` and returns
/// `(alpha_hat, nu_hat)` with `nu_hat` rounded to the nearest nonnegative
/// integer. Independent of the eigenstructure: uses only the magnitude
/// ledger.
pub fn estimate_growth(traj: &FlowTrajectory, tol: &ToleranceProfile) -> Result<(f64, usize)> {
    let t_max = *traj.times.last().ok_or_else(|| {
        Error::InsufficientData("empty trajectory".into())
    })?;
    if t_max < 10.0 {
        return Err(Error::InsufficientData(format!(
            "trajectory ends at t = {t_max}; the fit needs t_max >= 10"
        )));
    }
    let tail: Vec<usize> =
        (0..traj.len()).filter(|&k| traj.times[k] >= t_max / 4.0).collect();
    if tail.len() < 20 {
        return Err(Error::InsufficientData(format!(
            "tail has {} samples; the fit needs at least 20",
            tail.len()
        )));
    }
    let rows: Vec<Vec<f64>> =
        tail.iter().map(|&k| vec![traj.times[k], traj.times[k].ln(), 1.0]).collect();
    let design = CMatrix::from_real_rows(&rows)?;
    let rhs = CVector::from_real(&tail.iter().map(|&k| traj.log_norms[k]).collect::<Vec<_>>())?;
    let qr = Cpqr::factor(&design);
    let rank_tol = tol.tol_rank(design.norm_fro());
    if qr.rank(rank_tol) < 3 {
        return Err(Error::InsufficientData("degenerate time grid for the fit".into()));
    }
    let sol = qr.solve_lstsq(&rhs, rank_tol);
    let alpha_hat = sol[0].re;
    let nu_hat = sol[1].re.round().max(0.0) as usize;
    Ok((alpha_hat, nu_hat))
}

/// Distance `|| t^{-nu} e^{-alpha t} x(t) - Gamma(t) ||` between the
/// normalized flow and its asymptotic limit at one time, for a profile
/// produced from the same `(A, x0)`. Also validates by central finite
/// differences that Gamma solves `Gamma' = (A - alpha) Gamma`, erring with
/// `ProofMismatch` when it does not.
pub fn gamma_residual(
    a: &CMatrix,
    profile: &AsymptoticProfile,
    x0: &CVector,
    t: f64,
) -> Result<f64> {
    if !a.is_square() || a.nrows() != x0.dim() {
        return Err(Error::DimensionMismatch("operator shape vs initial state".into()));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidSpec("the residual is defined for t > 0".into()));
    }
    let gamma = profile.gamma_at(t);
    if gamma.dim() != x0.dim() {
        return Err(Error::DimensionMismatch("profile dimension vs state".into()));
    }

    // Gamma' = (A - alpha) Gamma, checked by central differences
    let h = GAMMA_ODE_STEP;
    let diff = profile.gamma_at(t + h).sub(&profile.gamma_at(t - h)).scale(c(0.5 / h, 0.0));
    let ode = a.matvec(&gamma).sub(&gamma.scale(c(profile.alpha, 0.0)));
    let ode_residual = diff.sub(&ode).norm();
    if ode_residual > GAMMA_ODE_REL * gamma.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::ProofMismatch(format!(
            "limit function fails its own ODE by {ode_residual:.3e}"
        )));
    }

    let flow = Flow::new(a)?;
    let (dir, log_mag) = flow.apply_normalized(t, x0)?;
    let exponent = log_mag - profile.alpha * t - profile.nu as f64 * t.ln();
    if exponent > MAX_MATERIALIZABLE_EXP {
        return Err(Error::Overflow { exponent });
    }
    let scaled = if exponent == f64::NEG_INFINITY {
        CVector::zeros(x0.dim())
    } else {
        dir.scale(c(exponent.exp(), 0.0))
    };
    Ok(scaled.sub(&gamma).norm())
}
