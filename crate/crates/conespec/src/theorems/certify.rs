//! Report-producing certification of the dominance assertions, the
//! restriction of the analysis past a splitting radius, and the real-cone
//! entry point.

use super::perron::{direct_spectral_pair, extract_perron_pair};
use super::{
    input_digest, Assertion, CertificationReport, EigenpairCertificate, SpectralSummary, Verdict,
};
use crate::cones::{
    circle_align, cone_meets_subspace, intersect_cone_with_subspace, AlignMode, ConeSpec,
};
use crate::config::ToleranceProfile;
use crate::error::{Error, Result};
use crate::linalg::{
    c, eigen_spectrum, invariant_split, CMatrix, CVector, SpectralData, SubspaceBasis,
};
use crate::positivity::{
    certify_positive, certify_rotational_strong_positivity, complexify, robust_threshold,
    CertificationMethod, PositivityCertificate, PositivityVerdict,
};

fn verdict_of(v: PositivityVerdict) -> Verdict {
    match v {
        PositivityVerdict::Certified => Verdict::Pass,
        PositivityVerdict::Violated => Verdict::Fail,
        PositivityVerdict::Undecided => Verdict::Undecided,
    }
}

/// Rotational strong positivity, with non-solid cones reported as
/// `Undecided` instead of an error: the definition needs interior points,
/// so on a thin cone there is nothing to certify or refute.
fn rotational_or_undecided(
    a: &CMatrix,
    cone: &ConeSpec,
    tol: &ToleranceProfile,
) -> Result<PositivityCertificate> {
    match certify_rotational_strong_positivity(a, cone, tol) {
        Ok(cert) => Ok(cert),
        Err(Error::NotSolid(_)) => Ok(PositivityCertificate {
            verdict: PositivityVerdict::Undecided,
            witnesses: Vec::new(),
            probes_used: 0,
            method: CertificationMethod::ProbeSampled,
        }),
        Err(e) => Err(e),
    }
}

/// Sub-dominant modulus over the eigenvalue multiset with one copy of the
/// reference value removed, and the gap verdict it induces. Counting with
/// multiplicity makes a repeated dominant eigenvalue fail the gap, as it
/// must: dominance asks for strict decay of everything else.
fn gap_assertion(data: &SpectralData, r: Option<f64>, tol: &ToleranceProfile) -> (Verdict, String) {
    let Some(r) = r else {
        return (Verdict::Undecided, "no dominant reference eigenvalue".into());
    };
    if r <= 0.0 {
        return (Verdict::Fail, format!("reference eigenvalue {r:.6e} is not positive"));
    }
    let mut values = data.eigenvalues();
    let nearest = values
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| {
            (**x - c(r, 0.0)).norm().total_cmp(&(**y - c(r, 0.0)).norm())
        })
        .map(|(i, _)| i);
    if let Some(i) = nearest {
        values.remove(i);
    }
    if values.is_empty() {
        return (Verdict::Pass, format!("r = {r:.6e} is the only eigenvalue"));
    }
    let sub = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let margin = (r - sub) / r;
    let verdict = if margin > tol.gap_tol {
        Verdict::Pass
    } else if margin > 0.0 {
        Verdict::Undecided
    } else {
        Verdict::Fail
    };
    (verdict, format!("r = {r:.6e}, next modulus = {sub:.6e}, relative margin = {margin:.3e}"))
}

/// Checks that no non-dominant generalized eigenspace touches the cone,
/// via the exact intersection test on each chain span and a phase-alignment
/// check on every individual chain vector.
fn off_dominant_assertion(
    cone: &ConeSpec,
    data: &SpectralData,
    r: Option<f64>,
    tol: &ToleranceProfile,
) -> Result<(Verdict, String)> {
    let Some(r) = r else {
        return Ok((Verdict::Undecided, "no dominant reference eigenvalue".into()));
    };
    let radius = tol.cluster_radius(data.spectral_radius);
    let mut clusters_checked = 0usize;
    let mut vectors_checked = 0usize;
    for cl in &data.clusters {
        if (cl.eigenvalue - c(r, 0.0)).norm() <= radius {
            continue;
        }
        clusters_checked += 1;
        let vecs: Vec<CVector> =
            cl.chains.iter().flat_map(|ch| ch.vectors.iter().cloned()).collect();
        let span = SubspaceBasis::from_spanning(&vecs, 1e-12)?;
        if let Some(wit) = cone_meets_subspace(cone, &span, tol)? {
            return Ok((
                Verdict::Fail,
                format!(
                    "the generalized eigenspace of {:.6e}{:+.6e}i meets the cone \
                     (witness violation {:.3e})",
                    cl.eigenvalue.re,
                    cl.eigenvalue.im,
                    cone.violation(&wit)?
                ),
            ));
        }
        for v in &vecs {
            vectors_checked += 1;
            let aligned = circle_align(cone, &v.normalized(), AlignMode::Member, tol)?;
            if aligned.feasible {
                return Ok((
                    Verdict::Fail,
                    format!(
                        "a chain vector of {:.6e}{:+.6e}i rotates into the cone at phase {:.6}",
                        cl.eigenvalue.re,
                        cl.eigenvalue.im,
                        aligned.witness_phase.unwrap_or(f64::NAN)
                    ),
                ));
            }
        }
    }
    Ok((
        Verdict::Pass,
        format!(
            "{clusters_checked} non-dominant clusters and {vectors_checked} chain vectors \
             stay clear of the cone"
        ),
    ))
}

/// Certifies the dominance picture of one operator on one cone.
///
/// The report always measures positivity, rotational strong positivity, and
/// the dominant pair. The gap, off-dominant-direction, multiplicity, and
/// eigenvector-rotation assertions are *asserted* only when rotational
/// strong positivity is certified; otherwise they are computed all the same
/// but marked informational.
pub fn certify_dominance(
    a: &CMatrix,
    cone: &ConeSpec,
    tol: &ToleranceProfile,
) -> Result<CertificationReport> {
    if !a.is_square() || a.nrows() != cone.dim() {
        return Err(Error::DimensionMismatch("operator shape vs cone".into()));
    }
    let digest = input_digest(a, cone);
    let positivity = certify_positive(a, cone, tol)?;
    let rotational = rotational_or_undecided(a, cone, tol)?;
    let data = eigen_spectrum(a, tol)?;
    let rsp = rotational.verdict == PositivityVerdict::Certified;

    let mut assertions = Vec::new();
    assertions.push(Assertion::new(
        "positivity",
        verdict_of(positivity.verdict),
        format!(
            "method {:?}, {} probes, {} witnesses",
            positivity.method,
            positivity.probes_used,
            positivity.witnesses.len()
        ),
        true,
    ));
    assertions.push(Assertion::new(
        "rotational-strong-positivity",
        verdict_of(rotational.verdict),
        format!(
            "method {:?}, {} probes, {} witnesses",
            rotational.method,
            rotational.probes_used,
            rotational.witnesses.len()
        ),
        true,
    ));

    let mut attempts: Vec<String> = Vec::new();
    let pair = match extract_perron_pair(a, cone, tol) {
        Ok(p) => Some(p),
        Err(e @ (Error::NotPositive(_) | Error::NoConvergence { .. })) => {
            attempts.push(format!("flow extraction: {e}"));
            match direct_spectral_pair(a, cone, tol) {
                Ok(p) => Some(p),
                Err(e2) => {
                    attempts.push(format!("dense extraction: {e2}"));
                    None
                }
            }
        }
        Err(e) => return Err(e),
    };
    let scale = a.norm_fro().max(1.0);
    let (pair_verdict, pair_evidence) = match &pair {
        Some(p) => {
            let ok = p.residual <= tol.tol_pair * scale
                && p.cone_membership <= robust_threshold(tol, 1.0)
                && p.r > 0.0;
            (
                if ok { Verdict::Pass } else { Verdict::Fail },
                format!(
                    "r = {:.12e}, residual = {:.3e}, cone violation = {:.3e}, method {:?}",
                    p.r, p.residual, p.cone_membership, p.method
                ),
            )
        }
        None => (Verdict::Fail, attempts.join("; ")),
    };
    assertions.push(Assertion::new(
        "dominant-pair-in-cone",
        pair_verdict,
        pair_evidence,
        positivity.verdict != PositivityVerdict::Violated,
    ));

    let r_opt = pair.as_ref().map(|p| p.r);
    let (gap_verdict, gap_evidence) = gap_assertion(&data, r_opt, tol);
    assertions.push(Assertion::new("spectral-gap", gap_verdict, gap_evidence, rsp));

    let (off_verdict, off_evidence) = off_dominant_assertion(cone, &data, r_opt, tol)?;
    assertions.push(Assertion::new(
        "no-cone-directions-off-dominant",
        off_verdict,
        off_evidence,
        rsp,
    ));

    let radius = tol.cluster_radius(data.spectral_radius);
    let dominant_cluster = r_opt.and_then(|r| data.cluster_near(c(r, 0.0), radius));
    let (mult_verdict, mult_evidence) = match dominant_cluster {
        Some(cl) => (
            if cl.algebraic == cl.geometric { Verdict::Pass } else { Verdict::Fail },
            format!("algebraic = {}, geometric = {}", cl.algebraic, cl.geometric),
        ),
        None => (Verdict::Undecided, "no eigenvalue cluster near the dominant value".into()),
    };
    assertions.push(Assertion::new(
        "dominant-multiplicities-match",
        mult_verdict,
        mult_evidence,
        rsp,
    ));

    let (rot_verdict, rot_evidence) = match dominant_cluster {
        Some(cl) => {
            let mut feasible = 0usize;
            let total = cl.chains.len();
            for ch in &cl.chains {
                let aligned =
                    circle_align(cone, &ch.eigenvector().normalized(), AlignMode::Interior, tol)?;
                if aligned.feasible {
                    feasible += 1;
                }
            }
            (
                if feasible == total { Verdict::Pass } else { Verdict::Fail },
                format!("{feasible} of {total} dominant eigenvectors rotate strictly inside"),
            )
        }
        None => (Verdict::Undecided, "no eigenvalue cluster near the dominant value".into()),
    };
    assertions.push(Assertion::new(
        "dominant-eigenvectors-rotate-interior",
        rot_verdict,
        rot_evidence,
        rsp,
    ));

    Ok(CertificationReport {
        input_digest: digest,
        positivity,
        rotational,
        dominant: pair,
        assertions,
        spectrum: SpectralSummary::from_data(&data),
        tolerances: tol.clone(),
        seed: 0,
    })
}

/// Splits the space at radius `rho`, restricts the operator and cone to the
/// invariant subspace of the spectrum beyond `rho`, and certifies dominance
/// there. The restriction's assertions come back prefixed `restricted:`;
/// the report additionally records whether the cone meets the outer
/// subspace at all and whether the restricted cone is solid.
pub fn certify_split_dominance(
    a: &CMatrix,
    cone: &ConeSpec,
    rho: f64,
    tol: &ToleranceProfile,
) -> Result<CertificationReport> {
    if !a.is_square() || a.nrows() != cone.dim() {
        return Err(Error::DimensionMismatch("operator shape vs cone".into()));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "split radius must be finite and positive, got {rho}"
        )));
    }
    let data = eigen_spectrum(a, tol)?;
    if rho >= data.spectral_radius {
        return Err(Error::InvalidSpec(format!(
            "split radius {rho} does not lie below the spectral radius {}",
            data.spectral_radius
        )));
    }
    let split = invariant_split(a, rho, tol)?;
    let outer = split.outer;
    let witness = cone_meets_subspace(cone, &outer, tol)?;
    let meets = Assertion::new(
        "cone-meets-outer-subspace",
        if witness.is_some() { Verdict::Pass } else { Verdict::Fail },
        format!(
            "outer dimension {} holding {} eigenvalues beyond radius {:.6e}",
            outer.dim(),
            split.outer_eigenvalues.len(),
            rho
        ),
        true,
    );
    if witness.is_none() {
        let positivity = certify_positive(a, cone, tol)?;
        let rotational = rotational_or_undecided(a, cone, tol)?;
        return Ok(CertificationReport {
            input_digest: input_digest(a, cone),
            positivity,
            rotational,
            dominant: None,
            assertions: vec![meets],
            spectrum: SpectralSummary::from_data(&data),
            tolerances: tol.clone(),
            seed: 0,
        });
    }

    let k1 = intersect_cone_with_subspace(cone, &outer, tol)?.ok_or_else(|| {
        Error::NumericalFailure(
            "subspace meets the cone but the exact intersection came back trivial".into(),
        )
    })?;
    let a1 = outer.compress(a)?;
    let inner = certify_dominance(&a1, &k1, tol)?;

    let mut assertions = vec![meets];
    assertions.push(Assertion::new(
        "restricted-cone-solid",
        if k1.is_solid() { Verdict::Pass } else { Verdict::Fail },
        format!(
            "restricted cone dimension {}, {} generators",
            k1.dim(),
            k1.real_conic_generators().map(|g| g.len()).unwrap_or(0)
        ),
        false,
    ));
    for entry in inner.assertions {
        assertions.push(Assertion { name: format!("restricted:{}", entry.name), ..entry });
    }

    let dominant = match inner.dominant {
        Some(p) => {
            let w = outer.embed(&p.w)?.normalized();
            let residual = a.matvec(&w).sub(&w.scale(c(p.r, 0.0))).norm();
            Some(EigenpairCertificate {
                r: p.r,
                w: w.clone(),
                residual,
                cone_membership: cone.violation(&w)?,
                method: p.method,
            })
        }
        None => None,
    };

    Ok(CertificationReport {
        input_digest: input_digest(a, cone),
        positivity: inner.positivity,
        rotational: inner.rotational,
        dominant,
        assertions,
        spectrum: SpectralSummary::from_data(&data),
        tolerances: tol.clone(),
        seed: 0,
    })
}

/// Whether the rotated eigenvector is a complex phase times a real vector
/// strictly inside the real cone.
fn real_interior_check(
    p: &ConeSpec,
    w: &CVector,
    tol: &ToleranceProfile,
) -> Result<(Verdict, String)> {
    let fixed = w.phase_fixed();
    let imag: f64 = fixed.imag_part().iter().map(|v| v * v).sum::<f64>().sqrt();
    if imag > 1e-8 * fixed.norm().max(1.0) {
        return Ok((
            Verdict::Fail,
            format!("eigenvector is not a rotated real vector (imaginary mass {imag:.3e})"),
        ));
    }
    let x = CVector::from_real(&fixed.real_part())?;
    let margin = p.margin_score(&x)?;
    let verdict = if margin > robust_threshold(tol, 1.0) { Verdict::Pass } else { Verdict::Fail };
    Ok((verdict, format!("real-representative interior margin {margin:.3e}")))
}

/// Entry point for real matrices on real cones: lifts both to the
/// complexification, certifies dominance there, and adds the real-case
/// strengthenings — strong positivity of the real operator, simplicity of
/// the dominant eigenvalue, and interiority of its (real) eigenvector.
/// The two strengthenings are asserted only when strong positivity holds.
pub fn certify_real_operator(
    b: &[Vec<f64>],
    p: &ConeSpec,
    tol: &ToleranceProfile,
) -> Result<CertificationReport> {
    if !p.is_real() {
        return Err(Error::InvalidSpec("expected a real cone".into()));
    }
    let a = complexify(b)?;
    if a.nrows() != p.dim() {
        return Err(Error::DimensionMismatch("operator shape vs cone".into()));
    }
    let k = ConeSpec::complexified(p.clone())?;
    let mut report = certify_dominance(&a, &k, tol)?;

    let gens = p.real_generators()?;
    let mut strong = true;
    let mut worst = f64::INFINITY;
    for g in &gens {
        let y = a.matvec(&CVector::from_real(g)?);
        let m = p.margin_score(&y)?;
        worst = worst.min(m);
        if m <= robust_threshold(tol, y.norm()) {
            strong = false;
        }
    }
    report.assertions.push(Assertion::new(
        "strong-positivity",
        if strong { Verdict::Pass } else { Verdict::Fail },
        format!("worst generator-image margin {:.3e} over {} generators", worst, gens.len()),
        true,
    ));

    if let Some(pair) = report.dominant.clone() {
        let radius = tol.cluster_radius(report.spectrum.spectral_radius);
        let summary = report
            .spectrum
            .eigenvalues
            .iter()
            .find(|e| (e.value - c(pair.r, 0.0)).norm() <= radius);
        let (simple_verdict, simple_evidence) = match summary {
            Some(s) => (
                if s.algebraic == 1 && s.geometric == 1 { Verdict::Pass } else { Verdict::Fail },
                format!("algebraic = {}, geometric = {}", s.algebraic, s.geometric),
            ),
            None => {
                (Verdict::Undecided, "dominant value not matched in the spectrum".into())
            }
        };
        report.assertions.push(Assertion::new(
            "dominant-simplicity",
            simple_verdict,
            simple_evidence,
            strong,
        ));
        let (int_verdict, int_evidence) = real_interior_check(p, &pair.w, tol)?;
        report.assertions.push(Assertion::new(
            "eigenvector-interior",
            int_verdict,
            int_evidence,
            strong,
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::perron::projective_angle;
    use super::*;
    use crate::families::{generate, Family};

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default_profile()
    }

    fn mean_matrix() -> CMatrix {
        complexify(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap()
    }

    fn complexified_orthant(n: usize) -> ConeSpec {
        ConeSpec::complexified(ConeSpec::orthant(n).unwrap()).unwrap()
    }

    #[test]
    fn lifted_mean_matrix_passes_every_assertion() {
        let report = certify_dominance(&mean_matrix(), &complexified_orthant(2), &tol()).unwrap();
        assert!(report.all_asserted_pass());
        for name in [
            "positivity",
            "rotational-strong-positivity",
            "dominant-pair-in-cone",
            "spectral-gap",
            "no-cone-directions-off-dominant",
            "dominant-multiplicities-match",
            "dominant-eigenvectors-rotate-interior",
        ] {
            let a = report.assertion(name).unwrap_or_else(|| panic!("missing {name}"));
            assert_eq!(a.verdict, Verdict::Pass, "{name}: {}", a.evidence);
            assert!(a.asserted, "{name} should be asserted");
        }
        let pair = report.dominant.as_ref().unwrap();
        assert!((pair.r - 3.0).abs() <= 1e-8 * 3.0);
        assert_eq!(report.spectrum.eigenvalues.len(), 2);
    }

    #[test]
    fn lifted_identity_reports_failures_as_informational() {
        let a = complexify(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let report = certify_dominance(&a, &complexified_orthant(2), &tol()).unwrap();
        let rsp = report.assertion("rotational-strong-positivity").unwrap();
        assert_eq!(rsp.verdict, Verdict::Fail);
        let gap = report.assertion("spectral-gap").unwrap();
        assert_eq!(gap.verdict, Verdict::Fail, "{}", gap.evidence);
        assert!(!gap.asserted, "gap must be informational without the hypothesis");
        let pair_assert = report.assertion("dominant-pair-in-cone").unwrap();
        assert_eq!(pair_assert.verdict, Verdict::Pass);
        assert!((report.dominant.as_ref().unwrap().r - 1.0).abs() <= 1e-8);
        let mult = report.assertion("dominant-multiplicities-match").unwrap();
        assert_eq!(mult.verdict, Verdict::Pass);
        assert!(!mult.asserted);
        let interior = report.assertion("dominant-eigenvectors-rotate-interior").unwrap();
        assert_eq!(interior.verdict, Verdict::Fail);
        assert!(!interior.asserted);
    }

    #[test]
    fn random_lift_confirms_the_strict_disk_gap() {
        let inst = generate(Family::Complexified, 6, 17, &tol()).unwrap();
        let report = certify_dominance(&inst.matrix, &inst.cone, &tol()).unwrap();
        assert!(report.all_asserted_pass());
        let gap = report.assertion("spectral-gap").unwrap();
        assert_eq!(gap.verdict, Verdict::Pass, "{}", gap.evidence);
        assert!(gap.asserted);
        // every non-dominant modulus strictly inside the disk of the dominant
        let r = report.dominant.as_ref().unwrap().r;
        let radius = tol().cluster_radius(report.spectrum.spectral_radius);
        for e in &report.spectrum.eigenvalues {
            if (e.value - c(r, 0.0)).norm() <= radius {
                continue;
            }
            assert!(e.value.norm() < r * (1.0 - 1e-7), "eigenvalue {:?}", e.value);
        }
    }

    #[test]
    fn split_at_one_restricts_a_diagonal_operator_to_its_top_ray() {
        let a = complexify(&[vec![3.0, 0.0], vec![0.0, 0.5]]).unwrap();
        let k = ConeSpec::orthant(2).unwrap();
        let report = certify_split_dominance(&a, &k, 1.0, &tol()).unwrap();
        let meets = report.assertion("cone-meets-outer-subspace").unwrap();
        assert_eq!(meets.verdict, Verdict::Pass, "{}", meets.evidence);
        let solid = report.assertion("restricted-cone-solid").unwrap();
        assert!(!solid.asserted);
        let inner_pos = report.assertion("restricted:positivity").unwrap();
        assert_eq!(inner_pos.verdict, Verdict::Pass);
        let inner_pair = report.assertion("restricted:dominant-pair-in-cone").unwrap();
        assert_eq!(inner_pair.verdict, Verdict::Pass, "{}", inner_pair.evidence);
        let pair = report.dominant.as_ref().unwrap();
        assert!((pair.r - 3.0).abs() <= 1e-8 * 3.0);
        let e1 = CVector::basis(2, 0);
        assert!(projective_angle(&pair.w, &e1) <= 1e-7);
        assert!(pair.residual <= 1e-8 * 3.0);
    }

    #[test]
    fn splitting_on_an_eigenvalue_is_refused() {
        let a = complexify(&[vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.5]])
            .unwrap();
        let k = ConeSpec::orthant(3).unwrap();
        assert!(matches!(
            certify_split_dominance(&a, &k, 1.0, &tol()),
            Err(Error::SplitOnSpectrum(_, _, _))
        ));
        assert!(matches!(
            certify_split_dominance(&a, &k, 5.0, &tol()),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn split_and_full_certification_share_the_dominant_pair() {
        let inst = generate(Family::Positive, 8, 3, &tol()).unwrap();
        let full = certify_dominance(&inst.matrix, &inst.cone, &tol()).unwrap();
        let r = full.dominant.as_ref().unwrap().r;
        let split = certify_split_dominance(&inst.matrix, &inst.cone, 0.5 * r, &tol()).unwrap();
        let meets = split.assertion("cone-meets-outer-subspace").unwrap();
        assert_eq!(meets.verdict, Verdict::Pass);
        let sp = split.dominant.as_ref().unwrap();
        let fp = full.dominant.as_ref().unwrap();
        assert!((sp.r - fp.r).abs() <= 1e-8 * fp.r.abs(), "{} vs {}", sp.r, fp.r);
        assert!(projective_angle(&sp.w, &fp.w) <= 1e-6);
    }

    #[test]
    fn real_mean_matrix_is_simple_with_an_interior_eigenvector() {
        let p = ConeSpec::orthant(2).unwrap();
        let report =
            certify_real_operator(&[vec![2.0, 1.0], vec![1.0, 2.0]], &p, &tol()).unwrap();
        for name in ["strong-positivity", "dominant-simplicity", "eigenvector-interior"] {
            let a = report.assertion(name).unwrap();
            assert_eq!(a.verdict, Verdict::Pass, "{name}: {}", a.evidence);
            assert!(a.asserted);
        }
        assert!((report.dominant.as_ref().unwrap().r - 3.0).abs() <= 1e-8 * 3.0);
    }

    #[test]
    fn real_identity_keeps_its_pair_but_not_simplicity() {
        let p = ConeSpec::orthant(2).unwrap();
        let report =
            certify_real_operator(&[vec![1.0, 0.0], vec![0.0, 1.0]], &p, &tol()).unwrap();
        let strong = report.assertion("strong-positivity").unwrap();
        assert_eq!(strong.verdict, Verdict::Fail);
        let simple = report.assertion("dominant-simplicity").unwrap();
        assert_eq!(simple.verdict, Verdict::Fail);
        assert!(!simple.asserted, "simplicity must not be asserted without strong positivity");
        let pair = report.assertion("dominant-pair-in-cone").unwrap();
        assert_eq!(pair.verdict, Verdict::Pass);
        assert!((report.dominant.as_ref().unwrap().r - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn random_strictly_positive_real_operator_passes_the_real_path() {
        let inst = generate(Family::StrictlyPositive, 10, 23, &tol()).unwrap();
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|i| (0..10).map(|j| inst.matrix[(i, j)].re).collect())
            .collect();
        let p = ConeSpec::orthant(10).unwrap();
        let report = certify_real_operator(&rows, &p, &tol()).unwrap();
        assert!(report.all_asserted_pass());
        for name in ["strong-positivity", "dominant-simplicity", "eigenvector-interior"] {
            assert_eq!(report.assertion(name).unwrap().verdict, Verdict::Pass, "{name}");
        }
        let gap = report.assertion("spectral-gap").unwrap();
        assert_eq!(gap.verdict, Verdict::Pass);
    }

    #[test]
    fn verdicts_survive_a_well_conditioned_similarity() {
        let a = complexify(&[vec![2.0, 1.0, 0.2], vec![1.0, 2.0, 0.4], vec![0.3, 0.2, 1.0]])
            .unwrap();
        let k = complexified_orthant(3);
        let base = certify_dominance(&a, &k, &tol()).unwrap();

        let t = CMatrix::from_real_rows(&[
            vec![1.0, 0.2, 0.0],
            vec![0.0, 1.0, 0.1],
            vec![0.1, 0.0, 1.0],
        ])
        .unwrap();
        let t_inv = crate::linalg::Lu::factor(&t).unwrap().inverse().unwrap();
        let conj = t.matmul(&a).matmul(&t_inv);
        let kt = ConeSpec::transformed(t, k, &tol()).unwrap();
        let moved = certify_dominance(&conj, &kt, &tol()).unwrap();

        for entry in &base.assertions {
            let other = moved.assertion(&entry.name).unwrap();
            assert_eq!(
                entry.verdict, other.verdict,
                "{}: {} vs {}",
                entry.name, entry.evidence, other.evidence
            );
        }
        let br = base.dominant.as_ref().unwrap().r;
        let mr = moved.dominant.as_ref().unwrap().r;
        assert!((br - mr).abs() <= 1e-7 * br.abs());
    }

    #[test]
    fn near_degenerate_gap_reads_undecided() {
        let a = complexify(&[vec![1.0, 0.0], vec![0.0, 1.0 - 1e-9]]).unwrap();
        let report = certify_dominance(&a, &complexified_orthant(2), &tol()).unwrap();
        let gap = report.assertion("spectral-gap").unwrap();
        assert_eq!(gap.verdict, Verdict::Undecided, "{}", gap.evidence);
    }
}
