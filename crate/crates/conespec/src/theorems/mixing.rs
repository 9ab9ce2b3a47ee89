//! Two-mode mixing diagnostic: for a dominant eigenvector ξ and a
//! subdominant eigenvector η, the set {z₁ξ + t·z₂η : |z₁| = |z₂| = 1} either
//! meets the cone or misses it, depending on the mixing weight t. The probe
//! locates the crossover empirically and brackets it — the exact threshold
//! is an infimum that a finite grid can only enclose.

use std::f64::consts::TAU;

use crate::cones::{ConeSpec, MarginRows};
use crate::config::ToleranceProfile;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, CVector};
use crate::positivity::robust_threshold;

/// Phase resolution of the coarse scan (per circle factor).
const PHASE_STEPS: usize = 360;
/// Shrinking-step refinement iterations after the coarse scan.
const REFINE_ITERATIONS: usize = 20;

/// Feasibility of the mixing set at one weight.
#[derive(Debug, Clone)]
pub struct MixingSample {
    pub t: f64,
    pub feasible: bool,
    /// Smallest cone violation found over both phase circles.
    pub min_violation: f64,
    /// Phases (θ₁, θ₂) attaining it.
    pub phases: (f64, f64),
}

/// Result of a mixing-weight sweep.
#[derive(Debug, Clone)]
pub struct MixingDiagnostic {
    pub samples: Vec<MixingSample>,
    /// (largest feasible t, smallest infeasible t) around the crossover,
    /// when the sweep saw one.
    pub tau_bracket: Option<(f64, f64)>,
    /// Whether feasibility never returned after first being lost.
    pub monotone: bool,
    /// The best cone point found at the feasible edge of the bracket.
    pub boundary_witness: Option<CVector>,
}

fn check_eigenvector(a: &CMatrix, v: &CVector, label: &str, tol: &ToleranceProfile) -> Result<()> {
    if v.dim() != a.nrows() {
        return Err(Error::DimensionMismatch(format!("{label} vs operator")));
    }
    let n2 = v.dot(v).re;
    if n2 == 0.0 {
        return Err(Error::NotEigenvectors(format!("{label} is the zero vector")));
    }
    let mu = v.dot(&a.matvec(v)) / n2;
    let residual = a.matvec(v).sub(&v.scale(mu)).norm() / n2.sqrt();
    let scale = a.norm_fro().max(1.0);
    if residual > tol.tol_pair * scale {
        return Err(Error::NotEigenvectors(format!(
            "{label} has eigen-residual {residual:.3e} beyond {:.3e}",
            tol.tol_pair * scale
        )));
    }
    Ok(())
}

fn violation_at(rows: &MarginRows, xi: &CVector, eta_t: &CVector, th1: f64, th2: f64) -> f64 {
    let x = xi.scale(c(th1.cos(), th1.sin())).add(&eta_t.scale(c(th2.cos(), th2.sin())));
    rows.violation(&x)
}

/// Sweeps the mixing weights in `t_grid`, deciding for each whether some
/// pair of unit phases puts z₁ξ + t·z₂η in the cone. ξ and η must be
/// eigenvectors of `a` (within `tol_pair`); they are normalized internally.
pub fn mixing_probe(
    a: &CMatrix,
    cone: &ConeSpec,
    xi: &CVector,
    eta: &CVector,
    t_grid: &[f64],
    tol: &ToleranceProfile,
) -> Result<MixingDiagnostic> {
    if !a.is_square() || a.nrows() != cone.dim() {
        return Err(Error::DimensionMismatch("operator shape vs cone".into()));
    }
    check_eigenvector(a, xi, "first eigenvector", tol)?;
    check_eigenvector(a, eta, "second eigenvector", tol)?;
    if t_grid.is_empty() {
        return Err(Error::InvalidSpec("empty mixing-weight grid".into()));
    }
    for pair in t_grid.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::InvalidSpec("mixing weights must strictly increase".into()));
        }
    }
    if !t_grid.iter().all(|t| t.is_finite() && *t >= 0.0) {
        return Err(Error::InvalidSpec("mixing weights must be finite and nonnegative".into()));
    }

    let xi = xi.normalized();
    let eta = eta.normalized();
    let rows = cone.margin_rows()?;

    let step = TAU / PHASE_STEPS as f64;
    let xi_rot: Vec<CVector> =
        (0..PHASE_STEPS).map(|i| xi.scale(c((i as f64 * step).cos(), (i as f64 * step).sin()))).collect();

    let mut samples = Vec::with_capacity(t_grid.len());
    let mut witness_candidate: Option<(f64, CVector)> = None;
    for &t in t_grid {
        let eta_t = eta.scale(c(t, 0.0));
        let eta_rot: Vec<CVector> = (0..PHASE_STEPS)
            .map(|j| eta_t.scale(c((j as f64 * step).cos(), (j as f64 * step).sin())))
            .collect();
        let mut best = f64::INFINITY;
        let mut best_ij = (0usize, 0usize);
        for (i, xr) in xi_rot.iter().enumerate() {
            for (j, er) in eta_rot.iter().enumerate() {
                let v = rows.violation(&xr.add(er));
                if v < best {
                    best = v;
                    best_ij = (i, j);
                }
            }
        }
        // shrinking-step coordinate descent around the best cell
        let mut th1 = best_ij.0 as f64 * step;
        let mut th2 = best_ij.1 as f64 * step;
        let mut h = step;
        for _ in 0..REFINE_ITERATIONS {
            let mut improved = false;
            for (d1, d2) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
                let v = violation_at(&rows, &xi, &eta_t, th1 + d1, th2 + d2);
                if v < best {
                    best = v;
                    th1 += d1;
                    th2 += d2;
                    improved = true;
                }
            }
            if !improved {
                h *= 0.5;
            }
        }
        let feasible = best <= robust_threshold(tol, 1.0 + t);
        if feasible {
            let x = xi
                .scale(c(th1.cos(), th1.sin()))
                .add(&eta_t.scale(c(th2.cos(), th2.sin())));
            witness_candidate = Some((t, x));
        }
        samples.push(MixingSample { t, feasible, min_violation: best, phases: (th1, th2) });
    }

    let first_infeasible = samples.iter().position(|s| !s.feasible);
    let tau_bracket = first_infeasible.map(|i| {
        let lower = if i > 0 { samples[i - 1].t } else { 0.0 };
        (lower, samples[i].t)
    });
    let monotone = match first_infeasible {
        Some(i) => samples[i..].iter().all(|s| !s.feasible),
        None => true,
    };
    let boundary_witness = match (first_infeasible, witness_candidate) {
        (Some(i), Some((tw, x))) if i > 0 && tw == samples[i - 1].t => Some(x),
        _ => None,
    };
    Ok(MixingDiagnostic { samples, tau_bracket, monotone, boundary_witness })
}
