//! Intersecting cones with linear subspaces.
//!
//! Whether a cone touches a subspace beyond the origin is a linear
//! feasibility question over the generator coefficients. The full
//! intersection is recovered exactly for generator-described cones by
//! enumerating the vertices of the coefficient polytope
//! { lambda >= 0, C lambda = 0, sum lambda = 1 }, whose vertex images are
//! the extreme rays of the intersection.

use super::lp::lp_feasible;
use super::ConeSpec;
use crate::config::ToleranceProfile;
use crate::error::{Error, Result};
use crate::linalg::factor::Cpqr;
use crate::linalg::types::{c, CMatrix, CVector};
use crate::linalg::SubspaceBasis;

/// Ceiling on the number of basis subsets the exact enumeration will visit.
const MAX_VERTEX_SUBSETS: u128 = 2_000_000;

/// Rows of the coefficient system: realified residuals (I - BB^H) g_j as
/// columns, one row of ones appended. Shape (2n+1) x m.
fn coefficient_rows(gens: &[CVector], subspace: &SubspaceBasis) -> Result<Vec<Vec<f64>>> {
    let n = subspace.ambient_dim();
    let m = gens.len();
    let mut rows = vec![vec![0.0; m]; 2 * n + 1];
    for (j, g) in gens.iter().enumerate() {
        let resid = g.sub(&subspace.project(g)?);
        for (r, v) in resid.realified().into_iter().enumerate() {
            rows[r][j] = v;
        }
        rows[2 * n][j] = 1.0;
    }
    Ok(rows)
}

/// Does the cone meet the subspace in a nonzero point? Returns a unit-norm
/// witness inside both, or `None` when the intersection is trivial.
pub fn cone_meets_subspace(
    cone: &ConeSpec,
    subspace: &SubspaceBasis,
    tol: &ToleranceProfile,
) -> Result<Option<CVector>> {
    if subspace.ambient_dim() != cone.dim() {
        return Err(Error::DimensionMismatch("subspace ambient vs cone".into()));
    }
    if subspace.dim() == 0 {
        return Ok(None);
    }
    let gens = cone.real_conic_generators()?;
    if gens.is_empty() {
        return Ok(None);
    }
    let m = gens.len();
    let rows = coefficient_rows(&gens, subspace)?;
    let mut rhs = vec![0.0; rows.len()];
    *rhs.last_mut().expect("rows nonempty") = 1.0;
    let sol = lp_feasible(&rows, &rhs, &vec![true; m], tol.tol_lp)?;
    if !sol.feasible {
        return Ok(None);
    }
    let lambda = sol.witness.expect("feasible solutions carry a witness");
    let mut x = CVector::zeros(cone.dim());
    for (j, g) in gens.iter().enumerate() {
        x = x.add(&g.scale(c(lambda[j], 0.0)));
    }
    // a pointed cone cannot send a unit-sum nonnegative combination to zero
    if x.norm() <= 1e3 * tol.tol_lp {
        return Err(Error::NumericalFailure(
            "intersection witness collapsed to zero; cone may not be pointed".into(),
        ));
    }
    // clean residual numerical drift off the subspace
    let projected = subspace.project(&x)?;
    if projected.norm() <= 1e3 * tol.tol_lp {
        return Err(Error::NumericalFailure(
            "intersection witness lost its subspace component".into(),
        ));
    }
    Ok(Some(projected.normalized()))
}

fn binomial_capped(m: usize, r: usize, cap: u128) -> u128 {
    if r > m {
        return 0;
    }
    let r = r.min(m - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul((m - i) as u128) / (i as u128 + 1);
        if acc > cap {
            return cap + 1;
        }
    }
    acc
}

/// Advances `idx` to the next lexicographic r-combination of {0, .., m-1}.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let r = idx.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if idx[i] != i + m - r {
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The exact intersection K ∩ span(basis) as a section cone in local
/// coordinates, or `None` when the intersection is only the origin.
///
/// Exact for generator-described cones: the extreme rays of the
/// intersection are images of the vertices of the coefficient polytope.
/// Errors with `RepresentationMissing` when the subset enumeration would
/// exceed the internal budget.
pub fn intersect_cone_with_subspace(
    cone: &ConeSpec,
    subspace: &SubspaceBasis,
    tol: &ToleranceProfile,
) -> Result<Option<ConeSpec>> {
    if subspace.ambient_dim() != cone.dim() {
        return Err(Error::DimensionMismatch("subspace ambient vs cone".into()));
    }
    if subspace.dim() == 0 {
        return Ok(None);
    }
    if cone_meets_subspace(cone, subspace, tol)?.is_none() {
        return Ok(None);
    }
    let gens = cone.real_conic_generators()?;
    let m = gens.len();
    let rows = coefficient_rows(&gens, subspace)?;
    let nrows = rows.len();
    let mut rhs = CVector::zeros(nrows);
    rhs[nrows - 1] = c(1.0, 0.0);

    let amat = CMatrix::from_real_rows(&rows)?;
    let scale = amat.norm_fro().max(f64::MIN_POSITIVE);
    let rank_tol = tol.tol_rank(scale);
    let r = Cpqr::factor(&amat).rank(rank_tol);
    if r == 0 {
        return Err(Error::NumericalFailure(
            "coefficient system ranked zero despite a feasible intersection".into(),
        ));
    }
    if binomial_capped(m, r, MAX_VERTEX_SUBSETS) > MAX_VERTEX_SUBSETS {
        return Err(Error::RepresentationMissing(format!(
            "exact intersection needs {m} choose {r} basis subsets, over the budget"
        )));
    }

    let accept_tol = 1e3 * tol.tol_lp;
    let mut local_gens: Vec<CVector> = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        // columns of the candidate basis subset
        let mut sub = CMatrix::zeros(nrows, r);
        for (k, &j) in idx.iter().enumerate() {
            for row in 0..nrows {
                sub[(row, k)] = c(rows[row][j], 0.0);
            }
        }
        let qr = Cpqr::factor(&sub);
        if qr.rank(rank_tol) == r {
            let lam = qr.solve_lstsq(&rhs, rank_tol);
            let mut ok = true;
            for k in 0..r {
                if lam[k].re < -accept_tol || lam[k].im.abs() > accept_tol {
                    ok = false;
                    break;
                }
            }
            if ok {
                let resid = sub.matvec(&lam).sub(&rhs).norm();
                if resid <= accept_tol * (1.0 + scale) {
                    let mut x = CVector::zeros(cone.dim());
                    for (k, &j) in idx.iter().enumerate() {
                        x = x.add(&gens[j].scale(c(lam[k].re.max(0.0), 0.0)));
                    }
                    if x.norm() > accept_tol {
                        let local = subspace.coordinates(&x)?.normalized();
                        let fresh = local_gens.iter().all(|u| u.sub(&local).norm() > 1e-9);
                        if fresh {
                            local_gens.push(local);
                        }
                    }
                }
            }
        }
        if !next_combination(&mut idx, m) {
            break;
        }
    }

    if local_gens.is_empty() {
        return Err(Error::NumericalFailure(
            "vertex enumeration found nothing although the subspace meets the cone".into(),
        ));
    }
    Ok(Some(ConeSpec::section(cone.clone(), subspace.clone(), local_gens, tol)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ToleranceProfile;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default_profile()
    }

    fn real_span(vectors: &[Vec<f64>]) -> SubspaceBasis {
        let vs: Vec<CVector> =
            vectors.iter().map(|v| CVector::from_real(v).unwrap()).collect();
        SubspaceBasis::from_spanning(&vs, 1e-12).unwrap()
    }

    #[test]
    fn diagonal_line_meets_orthant() {
        let k = ConeSpec::orthant(3).unwrap();
        let m = real_span(&[vec![1.0, 1.0, 0.0]]);
        let w = cone_meets_subspace(&k, &m, &tol()).unwrap().unwrap();
        assert!(k.member(&w, 1e-9).unwrap());
        assert!(m.distance(&w).unwrap() < 1e-9);
        assert!((w.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sign_mixed_line_misses_orthant() {
        let k = ConeSpec::orthant(2).unwrap();
        let m = real_span(&[vec![1.0, -1.0]]);
        assert!(cone_meets_subspace(&k, &m, &tol()).unwrap().is_none());
        assert!(intersect_cone_with_subspace(&k, &m, &tol()).unwrap().is_none());
    }

    #[test]
    fn plane_slices_orthant_into_two_rays() {
        let k = ConeSpec::orthant(3).unwrap();
        let m = real_span(&[vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let sec = intersect_cone_with_subspace(&k, &m, &tol()).unwrap().unwrap();
        assert_eq!(sec.kind_name(), "section");
        assert_eq!(sec.dim(), 2);
        let gens = sec.real_conic_generators().unwrap();
        assert_eq!(gens.len(), 2);
        // embedded rays are (1,1,0)/sqrt2 and (0,0,1)
        let basis = sec.section_basis().unwrap();
        for g in &gens {
            let emb = basis.embed(g).unwrap();
            assert!(k.member(&emb, 1e-9).unwrap());
            let hits_diag = (emb[0].re - emb[1].re).abs() < 1e-9 && emb[2].norm() < 1e-9;
            let hits_axis = emb[0].norm() < 1e-9 && emb[1].norm() < 1e-9;
            assert!(hits_diag || hits_axis, "unexpected ray {emb:?}");
        }
    }

    #[test]
    fn complex_line_through_complexified_orthant() {
        let base = ConeSpec::orthant(2).unwrap();
        let k = ConeSpec::complexified(base).unwrap();
        let dir = CVector::from_real(&[1.0, 1.0]).unwrap();
        let m = SubspaceBasis::from_spanning(&[dir], 1e-12).unwrap();
        let sec = intersect_cone_with_subspace(&k, &m, &tol()).unwrap().unwrap();
        assert_eq!(sec.dim(), 1);
        // the slice is the quarter plane {(a+bi) u : a, b >= 0}: two rays
        let gens = sec.real_conic_generators().unwrap();
        assert_eq!(gens.len(), 2);
        assert!(sec.is_solid());
        assert!(sec.member(&CVector::new(vec![c(1.0, 1.0)]).unwrap(), 1e-9).unwrap());
        assert!(!sec.member(&CVector::new(vec![c(-1.0, 0.3)]).unwrap(), 1e-9).unwrap());
        assert!(sec
            .interior_member(&CVector::new(vec![c(1.0, 1.0)]).unwrap(), 1e-3)
            .unwrap());
    }

    #[test]
    fn full_space_section_recovers_generators() {
        let k = ConeSpec::orthant(2).unwrap();
        let m = real_span(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let sec = intersect_cone_with_subspace(&k, &m, &tol()).unwrap().unwrap();
        let gens = sec.real_conic_generators().unwrap();
        assert_eq!(gens.len(), 2);
    }

    #[test]
    fn trivial_subspace_never_meets() {
        let k = ConeSpec::orthant(2).unwrap();
        let m = SubspaceBasis::trivial(2);
        assert!(cone_meets_subspace(&k, &m, &tol()).unwrap().is_none());
        assert!(intersect_cone_with_subspace(&k, &m, &tol()).unwrap().is_none());
    }

    #[test]
    fn section_of_section_composes() {
        // slice the orthant in R^3 down to a plane, then to a line
        let k = ConeSpec::orthant(3).unwrap();
        let plane = real_span(&[vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let sec = intersect_cone_with_subspace(&k, &plane, &tol()).unwrap().unwrap();
        // inside the section's local coordinates, take the first local axis
        let basis = sec.section_basis().unwrap().clone();
        let diag_local = basis.coordinates(&CVector::from_real(&[1.0, 1.0, 0.0]).unwrap())
            .unwrap()
            .normalized();
        let line = SubspaceBasis::from_spanning(&[diag_local], 1e-12).unwrap();
        let sec2 = intersect_cone_with_subspace(&sec, &line, &tol()).unwrap().unwrap();
        assert_eq!(sec2.dim(), 1);
        let gens = sec2.real_conic_generators().unwrap();
        assert_eq!(gens.len(), 1);
    }
}
