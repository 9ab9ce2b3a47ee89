//! Extraction of the dominant positive eigenpair, by flow limit and by
//! dense eigensolver.

use super::{EigenpairCertificate, ExtractionMethod};
use crate::cones::{circle_align, AlignMode, ConeSpec};
use crate::config::ToleranceProfile;
use crate::error::{Error, Result};
use crate::families::generator_sum;
use crate::linalg::{c, eigen_spectrum, CMatrix, CVector, Flow, Lu};
use crate::positivity::{certify_positive, robust_threshold, PositivityVerdict};

/// Step-doubling budget for the flow limit.
const MAX_DOUBLINGS: usize = 60;
/// First evaluation time of the doubling schedule.
const BASE_TIME: f64 = 0.5;
/// Steps per decade: 2^4 = 16 >= 10, so comparing against the state four
/// doublings back spans at least one decade of time.
const DECADE_LAG: usize = 4;

/// Angle between the complex lines through two unit vectors. Computed from
/// the orthogonal component, not `acos` of the overlap: the overlap rounds
/// to 1.0 for angles under the square root of machine epsilon, which would
/// make every sub-1e-8 threshold unreliable.
pub(crate) fn projective_angle(u: &CVector, v: &CVector) -> f64 {
    let overlap = v.dot(u);
    let perp = u.sub(&v.scale(overlap));
    perp.norm().atan2(overlap.norm())
}

fn rayleigh(a: &CMatrix, w: &CVector) -> f64 {
    let den = w.dot(w).re;
    if den == 0.0 {
        return 0.0;
    }
    w.dot(&a.matvec(w)).re / den
}

fn residual_at(a: &CMatrix, w: &CVector, r: f64) -> f64 {
    let n = w.norm();
    if n == 0.0 {
        return f64::INFINITY;
    }
    a.matvec(w).sub(&w.scale(c(r, 0.0))).norm() / n
}

/// One inverse-iteration step at shift `r`, phase-aligned back onto `w`.
/// Returns `None` when the shifted solve is unusable (a singular shift is
/// itself a sign the pair is already converged).
fn inverse_polish(a: &CMatrix, w: &CVector, r: f64) -> Option<CVector> {
    let shifted = a.add(&CMatrix::identity(a.nrows()).scale(c(-r, 0.0)));
    let lu = Lu::factor(&shifted).ok()?;
    let u = lu.solve_vec(w).ok()?;
    let norm = u.norm();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    let u = u.normalized();
    let overlap = u.dot(w);
    if overlap.norm() == 0.0 {
        return None;
    }
    Some(u.scale(overlap / overlap.norm()))
}

/// Extracts the dominant eigenpair as the late-time limit of the normalized
/// exponential flow started at the cone's generator sum, then polishes it by
/// one inverse-iteration step (kept only if it does not push the vector off
/// the cone).
///
/// Requires the operator to preserve the cone: a `Violated` positivity
/// certificate aborts with `NotPositive`. When the projective direction has
/// not stabilized to `tol_dir` across a decade of time within the doubling
/// budget, fails with `NoConvergence`.
pub fn extract_perron_pair(
    a: &CMatrix,
    cone: &ConeSpec,
    tol: &ToleranceProfile,
) -> Result<EigenpairCertificate> {
    if !a.is_square() || a.nrows() != cone.dim() {
        return Err(Error::DimensionMismatch("operator shape vs cone".into()));
    }
    let gate = certify_positive(a, cone, tol)?;
    if gate.verdict == PositivityVerdict::Violated {
        let detail = gate
            .witnesses
            .first()
            .map(|w| w.reason.clone())
            .unwrap_or_else(|| "cone preservation refuted".into());
        return Err(Error::NotPositive(detail));
    }
    let x0 = generator_sum(cone)?;
    if x0.norm() == 0.0 {
        return Err(Error::NumericalFailure("cone generators sum to zero".into()));
    }
    let x0 = x0.normalized();

    let flow = Flow::new(a)?;
    let mut dirs: Vec<CVector> = Vec::with_capacity(MAX_DOUBLINGS);
    let mut last_angle = f64::INFINITY;
    let mut converged = None;
    for k in 0..MAX_DOUBLINGS {
        let t = BASE_TIME * 2f64.powi(k as i32);
        let (dir, _) = flow.apply_normalized(t, &x0)?;
        if dir.norm() == 0.0 {
            return Err(Error::NumericalFailure(format!("flow state vanished at t = {t}")));
        }
        dirs.push(dir);
        if k >= DECADE_LAG {
            last_angle = projective_angle(&dirs[k], &dirs[k - DECADE_LAG]);
            if last_angle <= tol.tol_dir {
                converged = Some(k);
                break;
            }
        }
    }
    let Some(k) = converged else {
        return Err(Error::NoConvergence { doublings: MAX_DOUBLINGS, last_angle });
    };

    let mut w = dirs[k].clone();
    let mut r = rayleigh(a, &w);
    if let Some(u) = inverse_polish(a, &w, r) {
        let keeps_cone = cone.violation(&u)? <= robust_threshold(tol, 1.0);
        if keeps_cone && residual_at(a, &u, rayleigh(a, &u)) < residual_at(a, &w, r) {
            w = u;
            r = rayleigh(a, &w);
        }
    }
    Ok(EigenpairCertificate {
        r,
        w: w.clone(),
        residual: residual_at(a, &w, r),
        cone_membership: cone.violation(&w)?,
        method: ExtractionMethod::FlowExtraction,
    })
}

/// Dominant eigenpair from the dense eigensolver: the real positive
/// eigenvalue attaining the spectral radius, with its eigenvector rotated
/// into the cone by phase alignment when possible.
pub fn direct_spectral_pair(
    a: &CMatrix,
    cone: &ConeSpec,
    tol: &ToleranceProfile,
) -> Result<EigenpairCertificate> {
    if !a.is_square() || a.nrows() != cone.dim() {
        return Err(Error::DimensionMismatch("operator shape vs cone".into()));
    }
    let data = eigen_spectrum(a, tol)?;
    let radius = tol.cluster_radius(data.spectral_radius);
    let cluster = data
        .clusters
        .iter()
        .filter(|cl| (cl.eigenvalue.norm() - data.spectral_radius).abs() <= radius)
        .filter(|cl| {
            cl.eigenvalue.re > 0.0
                && cl.eigenvalue.im.abs() <= (tol.tol_pair * cl.eigenvalue.norm()).max(radius)
        })
        .max_by(|x, y| x.eigenvalue.re.total_cmp(&y.eigenvalue.re))
        .ok_or_else(|| {
            Error::NumericalFailure(
                "no real positive eigenvalue attains the spectral radius".into(),
            )
        })?;

    let mut best: Option<(f64, CVector)> = None;
    for chain in &cluster.chains {
        let xi = chain.eigenvector().normalized();
        let aligned = circle_align(cone, &xi, AlignMode::Member, tol)?;
        let candidate = match (aligned.feasible, aligned.witness) {
            (true, Some(wit)) => wit,
            _ => xi,
        };
        let violation = cone.violation(&candidate)?;
        if best.as_ref().map(|(v, _)| violation < *v).unwrap_or(true) {
            best = Some((violation, candidate));
        }
    }
    let (violation, w) = best.expect("clusters carry at least one chain");
    let r = rayleigh(a, &w);
    Ok(EigenpairCertificate {
        r,
        w: w.clone(),
        residual: residual_at(a, &w, r),
        cone_membership: violation,
        method: ExtractionMethod::DirectSpectral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, Family};
    use crate::positivity::complexify;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default_profile()
    }

    fn mean_matrix() -> CMatrix {
        complexify(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap()
    }

    #[test]
    fn symmetric_mean_matrix_yields_three_and_the_diagonal_ray() {
        let k = ConeSpec::orthant(2).unwrap();
        let pair = extract_perron_pair(&mean_matrix(), &k, &tol()).unwrap();
        assert!((pair.r - 3.0).abs() <= 1e-8 * 3.0, "r = {}", pair.r);
        let target = CVector::from_real(&[1.0, 1.0]).unwrap().normalized();
        assert!(projective_angle(&pair.w, &target) <= 1e-6);
        assert_eq!(pair.method, ExtractionMethod::FlowExtraction);
        assert!(pair.residual <= 1e-8);
        assert!(pair.cone_membership <= 1e-10);
    }

    #[test]
    fn defective_dominant_eigenvalue_converges_to_the_corner_ray() {
        let a = complexify(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let k = ConeSpec::orthant(2).unwrap();
        let pair = extract_perron_pair(&a, &k, &tol()).unwrap();
        assert!((pair.r - 1.0).abs() <= 1e-8, "r = {}", pair.r);
        let e1 = CVector::basis(2, 0);
        assert!(projective_angle(&pair.w, &e1) <= 1e-6);
        assert!(pair.residual <= 1e-8);
        assert!(pair.cone_membership <= 1e-9);
    }

    #[test]
    fn flow_and_dense_extraction_agree_on_a_complexified_instance() {
        let inst = generate(Family::Complexified, 8, 5, &tol()).unwrap();
        let flow = extract_perron_pair(&inst.matrix, &inst.cone, &tol()).unwrap();
        let dense = direct_spectral_pair(&inst.matrix, &inst.cone, &tol()).unwrap();
        assert!((flow.r - dense.r).abs() <= 1e-8 * dense.r.abs());
        assert!(projective_angle(&flow.w, &dense.w) <= 1e-6);
        assert_eq!(dense.method, ExtractionMethod::DirectSpectral);
        assert!(dense.cone_membership <= 1e-9);
    }

    #[test]
    fn eigenvalue_scales_linearly_and_the_ray_is_invariant() {
        let k = ConeSpec::orthant(2).unwrap();
        let base = extract_perron_pair(&mean_matrix(), &k, &tol()).unwrap();
        let scaled_op = mean_matrix().scale(c(3.7, 0.0));
        let scaled = extract_perron_pair(&scaled_op, &k, &tol()).unwrap();
        assert!((scaled.r - 3.7 * base.r).abs() <= 1e-8 * 3.7 * base.r);
        assert!(projective_angle(&scaled.w, &base.w) <= 1e-8);
    }

    #[test]
    fn sign_mixing_operator_is_rejected_at_the_gate() {
        let a = complexify(&[vec![1.0, -5.0], vec![0.0, 1.0]]).unwrap();
        let k = ConeSpec::orthant(2).unwrap();
        assert!(matches!(
            extract_perron_pair(&a, &k, &tol()),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn dense_extraction_rotates_the_eigenvector_into_the_cone() {
        let k = ConeSpec::complexified(ConeSpec::orthant(3).unwrap()).unwrap();
        let inst = generate(Family::Complexified, 3, 9, &tol()).unwrap();
        let dense = direct_spectral_pair(&inst.matrix, &k, &tol()).unwrap();
        assert!(dense.cone_membership <= 1e-9);
        assert!(k.member(&dense.w, 1e-8).unwrap());
        assert!(dense.residual <= 1e-8 * inst.matrix.norm_fro());
    }

    #[test]
    fn permutation_flow_still_finds_the_perron_ray() {
        // eigenvalues 1 and -1 share the modulus, but the flow separates them
        let a = complexify(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let k = ConeSpec::orthant(2).unwrap();
        let pair = extract_perron_pair(&a, &k, &tol()).unwrap();
        assert!((pair.r - 1.0).abs() <= 1e-8);
        let target = CVector::from_real(&[1.0, 1.0]).unwrap().normalized();
        assert!(projective_angle(&pair.w, &target) <= 1e-7);
    }
}
