//! Phase alignment: finding unit-modulus scalars z that place z*x inside a
//! cone (or its interior), exactly, via arc intersection.

use std::f64::consts::FRAC_PI_2;

use super::arcs::{quarter_arc_for, Arc, ArcSet};
use super::{ConeSpec, PhaseShape};
use crate::config::ToleranceProfile;
use crate::linalg::types::{c, CVector, C64};
use crate::error::Result;

/// Which containment the rotation must achieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignMode {
    /// z*x in the (closed) cone.
    Member,
    /// z*x strictly inside the cone.
    Interior,
}

/// Result of a phase-alignment query.
#[derive(Debug, Clone)]
pub struct Alignment {
    /// Whether a usable phase was found (and a witness produced).
    pub feasible: bool,
    /// The exact feasible phase set.
    pub arcs: ArcSet,
    /// Chosen phase theta, with z = e^{i theta}.
    pub witness_phase: Option<f64>,
    /// The rotated vector z*x.
    pub witness: Option<CVector>,
    /// Margin score of the witness (positive means strictly interior).
    pub margin: Option<f64>,
}

impl Alignment {
    fn infeasible(arcs: ArcSet) -> Alignment {
        Alignment { feasible: false, arcs, witness_phase: None, witness: None, margin: None }
    }
}

/// Feasible phases for Re(z * value) >= 0 (closed) or > 0 (open).
fn half_arc_for(value: C64, open: bool) -> ArcSet {
    if value.norm() == 0.0 {
        return if open { ArcSet::empty() } else { ArcSet::full() };
    }
    let start = -FRAC_PI_2 - value.arg();
    match Arc::new(start, std::f64::consts::PI, open, open) {
        Some(a) => ArcSet::single(a),
        None => ArcSet::empty(),
    }
}

/// Feasible phases for Re(z * value) == 0: the two antipodal phases where
/// z*value is purely imaginary. Always closed; full circle when value = 0.
fn equality_points_for(value: C64) -> ArcSet {
    if value.norm() == 0.0 {
        return ArcSet::full();
    }
    let p1 = FRAC_PI_2 - value.arg();
    let p2 = -FRAC_PI_2 - value.arg();
    let points: Vec<Arc> = [p1, p2]
        .iter()
        .filter_map(|&p| Arc::closed(p, 0.0))
        .collect();
    ArcSet::union(points)
}

/// The exact set of phases z with z*x in the cone (or its interior).
pub fn feasible_phases(cone: &ConeSpec, x: &CVector, mode: AlignMode) -> Result<ArcSet> {
    let open = mode == AlignMode::Interior;
    if x.norm() == 0.0 {
        // the zero vector is a member for every phase and interior for none
        return Ok(if open { ArcSet::empty() } else { ArcSet::full() });
    }
    let mut set = ArcSet::full();
    for pc in cone.alignment_constraints(x)? {
        let factor = if pc.equality {
            equality_points_for(pc.value)
        } else {
            match pc.shape {
                PhaseShape::Quarter => quarter_arc_for(pc.value, open),
                PhaseShape::Half => half_arc_for(pc.value, open),
            }
        };
        set = set.intersect(&factor);
        if set.is_empty() {
            break;
        }
    }
    Ok(set)
}

/// Finds a phase aligning `x` with the cone. In `Interior` mode, arcs
/// thinner than twice `tol.arc_margin` are rejected as numerically
/// untrustworthy unless they are exact points coming from equality
/// constraints (which are closed and legitimate).
pub fn circle_align(
    cone: &ConeSpec,
    x: &CVector,
    mode: AlignMode,
    tol: &ToleranceProfile,
) -> Result<Alignment> {
    let set = feasible_phases(cone, x, mode)?;
    let Some(widest) = set.widest().copied() else {
        return Ok(Alignment::infeasible(set));
    };
    if mode == AlignMode::Interior && widest.width > 0.0 && widest.width <= 2.0 * tol.arc_margin
    {
        return Ok(Alignment::infeasible(set));
    }
    let theta = if widest.width == 0.0 { widest.start } else { widest.midpoint() };
    let z = c(theta.cos(), theta.sin());
    let witness = x.scale(z);
    let margin = cone.margin_score(&witness)?;
    Ok(Alignment {
        feasible: true,
        arcs: set,
        witness_phase: Some(theta),
        witness: Some(witness),
        margin: Some(margin),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ToleranceProfile;
    use crate::linalg::types::CMatrix;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default_profile()
    }

    #[test]
    fn rotating_imaginary_vector_into_real_cone() {
        let k = ConeSpec::orthant(2).unwrap();
        // x = i * (1, 2): the phase -pi/2 (or equivalently 3pi/2) makes it
        // real positive
        let x = CVector::new(vec![c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
        let a = circle_align(&k, &x, AlignMode::Member, &tol()).unwrap();
        assert!(a.feasible);
        let w = a.witness.unwrap();
        assert!(k.member(&w, 1e-10).unwrap());
        assert!(w[0].re > 0.9 && w[0].im.abs() < 1e-12);
        // interior alignment also exists (strictly positive entries)
        let ai = circle_align(&k, &x, AlignMode::Interior, &tol()).unwrap();
        assert!(ai.feasible);
        assert!(ai.margin.unwrap() > 0.5);
    }

    #[test]
    fn mixed_phase_vector_cannot_align_with_real_cone() {
        let k = ConeSpec::orthant(2).unwrap();
        // entries with incompatible phases: no z makes both real
        let x = CVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let a = circle_align(&k, &x, AlignMode::Member, &tol()).unwrap();
        assert!(!a.feasible);
        // sign-mixed real vector stays infeasible too
        let y = CVector::from_real(&[1.0, -1.0]).unwrap();
        let b = circle_align(&k, &y, AlignMode::Member, &tol()).unwrap();
        assert!(!b.feasible);
    }

    #[test]
    fn complexified_alignment_uses_quarter_arcs() {
        let k = ConeSpec::complexified(ConeSpec::orthant(2).unwrap()).unwrap();
        // x = (1 - i) * (1, 2) needs a rotation by +pi/4-ish to enter P + iP
        let phase = c(1.0, -1.0);
        let x = CVector::new(vec![phase, phase * c(2.0, 0.0)]).unwrap();
        let a = circle_align(&k, &x, AlignMode::Member, &tol()).unwrap();
        assert!(a.feasible);
        assert!(k.member(a.witness.as_ref().unwrap(), 1e-10).unwrap());
        // the feasible set is exactly a quarter arc here
        assert!((a.arcs.measure() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn interior_alignment_fails_on_boundary_rays() {
        let k = ConeSpec::complexified(ConeSpec::orthant(2).unwrap()).unwrap();
        // e1 lies on the boundary of P + iP for every phase (second
        // coordinate is 0, never strictly positive)
        let x = CVector::basis(2, 0);
        let closed = circle_align(&k, &x, AlignMode::Member, &tol()).unwrap();
        assert!(closed.feasible);
        let open = circle_align(&k, &x, AlignMode::Interior, &tol()).unwrap();
        assert!(!open.feasible);
    }

    #[test]
    fn transformed_cone_alignment_delegates() {
        let t2 = CMatrix::from_real_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let k = ConeSpec::transformed(t2.clone(), ConeSpec::orthant(2).unwrap(), &tol()).unwrap();
        let interior_pt = CVector::from_real(&[3.0, 1.0]).unwrap(); // T (1,1)
        let x = interior_pt.scale(c(0.0, 1.0)); // rotate out by i
        let a = circle_align(&k, &x, AlignMode::Interior, &tol()).unwrap();
        assert!(a.feasible);
        assert!(k.interior_member(a.witness.as_ref().unwrap(), 1e-9).unwrap());
    }

    #[test]
    fn witness_margin_matches_cone_score() {
        let k = ConeSpec::complexified(ConeSpec::orthant(3).unwrap()).unwrap();
        let x = CVector::new(vec![c(1.0, 1.0), c(2.0, 0.5), c(0.5, 0.25)]).unwrap();
        let a = circle_align(&k, &x, AlignMode::Interior, &tol()).unwrap();
        assert!(a.feasible);
        let w = a.witness.unwrap();
        let m = a.margin.unwrap();
        assert!((k.margin_score(&w).unwrap() - m).abs() < 1e-15);
        assert!(m > 0.0);
    }
}
