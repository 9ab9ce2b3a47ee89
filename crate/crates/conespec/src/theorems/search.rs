//! Seeded campaign hunting for an eigenvalue of geometric multiplicity two
//! or more on an instance whose rotational strong positivity survives
//! certification. Findings carry full reproduction coordinates; an empty
//! findings list claims nothing beyond the seeds actually tested.

use rayon::prelude::*;

use crate::cones::ConeSpec;
use crate::config::ToleranceProfile;
use crate::error::{Error, Result};
use crate::families::{generate, Family};
use crate::linalg::{eigen_spectrum, CMatrix};
use crate::positivity::{certify_rotational_strong_positivity, PositivityVerdict};

/// Gate decision for one instance.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    /// Not counted: the rotational-strong-positivity gate (or instance
    /// generation) kept the instance out of the eligible pool.
    Excluded { reason: String },
    /// Counted, with the dominant real eigenvalue and its multiplicities.
    Eligible { eigenvalue: f64, algebraic: usize, geometric: usize },
}

/// A reproducible instance whose dominant eigenvalue has geometric
/// multiplicity at least two.
#[derive(Debug, Clone)]
pub struct SearchFinding {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub eigenvalue: f64,
    pub algebraic: usize,
    pub geometric: usize,
    pub matrix: CMatrix,
}

/// Campaign tallies; `instances_tested = eligible + excluded`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCounts {
    pub instances_tested: usize,
    pub eligible: usize,
    pub excluded: usize,
    pub findings: usize,
}

/// An instance that could not be generated or assessed. Failures are
/// counted among the exclusions but kept individually addressable so batch
/// drivers can log or abort on them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchFailure {
    pub n: usize,
    pub seed: u64,
    pub reason: String,
}

/// Full campaign result, ordered by (size, seed).
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub counts: SearchCounts,
    pub findings: Vec<SearchFinding>,
    /// Histogram of dominant geometric multiplicities over the eligible
    /// instances, as sorted (multiplicity, count) pairs.
    pub multiplicity_histogram: Vec<(usize, usize)>,
    /// Instances excluded because generation or assessment errored.
    pub failures: Vec<SearchFailure>,
}

/// Applies the eligibility gate and measures the dominant multiplicities.
///
/// Eligible means rotational strong positivity is `Certified`, or
/// `Undecided` with a clean probe campaign (zero witnesses); everything
/// else — including refuted instances and cones where the notion does not
/// apply — is excluded, not counted as evidence.
pub fn assess_instance(
    a: &CMatrix,
    cone: &ConeSpec,
    tol: &ToleranceProfile,
) -> Result<SearchOutcome> {
    let rotational = match certify_rotational_strong_positivity(a, cone, tol) {
        Ok(cert) => cert,
        Err(Error::NotSolid(msg)) => {
            return Ok(SearchOutcome::Excluded { reason: format!("cone not solid: {msg}") })
        }
        Err(e) => return Err(e),
    };
    let eligible = rotational.verdict == PositivityVerdict::Certified
        || (rotational.verdict == PositivityVerdict::Undecided && rotational.witnesses.is_empty());
    if !eligible {
        let detail = rotational
            .witnesses
            .first()
            .map(|w| w.reason.clone())
            .unwrap_or_else(|| "no witness recorded".into());
        return Ok(SearchOutcome::Excluded {
            reason: format!("rotational strong positivity refuted: {detail}"),
        });
    }
    let data = eigen_spectrum(a, tol)?;
    let radius = tol.cluster_radius(data.spectral_radius);
    let dominant = data
        .clusters
        .iter()
        .filter(|cl| (cl.eigenvalue.norm() - data.spectral_radius).abs() <= radius)
        .find(|cl| {
            cl.eigenvalue.re > 0.0
                && cl.eigenvalue.im.abs() <= (tol.tol_pair * cl.eigenvalue.norm()).max(radius)
        });
    match dominant {
        Some(cl) => Ok(SearchOutcome::Eligible {
            eigenvalue: cl.eigenvalue.re,
            algebraic: cl.algebraic,
            geometric: cl.geometric,
        }),
        None => Ok(SearchOutcome::Excluded {
            reason: "no real positive eigenvalue attains the spectral radius".into(),
        }),
    }
}

/// Runs the campaign over every (size, seed) pair. Instances are generated
/// and assessed in parallel from per-instance deterministic streams, and
/// merged in (size, seed) order, so the report is identical across runs and
/// thread counts. A finding is recorded whenever the dominant geometric
/// multiplicity reaches two.
pub fn search_counterexample(
    family: Family,
    sizes: &[usize],
    seeds: &[u64],
    tol: &ToleranceProfile,
) -> Result<SearchReport> {
    let tasks: Vec<(usize, u64)> = sizes
        .iter()
        .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
        .collect();
    let outcomes: Vec<(usize, u64, SearchOutcome, Option<CMatrix>, bool)> = tasks
        .par_iter()
        .map(|&(n, seed)| {
            let (outcome, matrix, failed) = match generate(family, n, seed, tol) {
                Ok(inst) => match assess_instance(&inst.matrix, &inst.cone, tol) {
                    Ok(out) => (out, Some(inst.matrix), false),
                    Err(e) => (
                        SearchOutcome::Excluded { reason: format!("assessment failed: {e}") },
                        None,
                        true,
                    ),
                },
                Err(e) => (
                    SearchOutcome::Excluded { reason: format!("generation failed: {e}") },
                    None,
                    true,
                ),
            };
            (n, seed, outcome, matrix, failed)
        })
        .collect();

    let mut counts = SearchCounts { instances_tested: 0, eligible: 0, excluded: 0, findings: 0 };
    let mut findings = Vec::new();
    let mut failures = Vec::new();
    let mut histogram: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for (n, seed, outcome, matrix, failed) in outcomes {
        counts.instances_tested += 1;
        match outcome {
            SearchOutcome::Excluded { reason } => {
                counts.excluded += 1;
                if failed {
                    failures.push(SearchFailure { n, seed, reason });
                }
            }
            SearchOutcome::Eligible { eigenvalue, algebraic, geometric } => {
                counts.eligible += 1;
                *histogram.entry(geometric).or_insert(0) += 1;
                if geometric >= 2 {
                    counts.findings += 1;
                    findings.push(SearchFinding {
                        family,
                        n,
                        seed,
                        eigenvalue,
                        algebraic,
                        geometric,
                        matrix: matrix.expect("eligible outcomes keep their matrix"),
                    });
                }
            }
        }
    }
    Ok(SearchReport {
        family,
        sizes: sizes.to_vec(),
        seeds: seeds.to_vec(),
        counts,
        findings,
        multiplicity_histogram: histogram.into_iter().collect(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::positivity::complexify;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default_profile()
    }

    #[test]
    fn lifted_strictly_positive_campaign_is_clean() {
        let seeds: Vec<u64> = (0..10).collect();
        let report = search_counterexample(Family::Complexified, &[2, 3], &seeds, &tol()).unwrap();
        assert_eq!(report.counts.instances_tested, 20);
        assert_eq!(report.counts.eligible, 20);
        assert_eq!(report.counts.excluded, 0);
        assert_eq!(report.counts.findings, 0);
        assert!(report.findings.is_empty());
        // every eligible instance lands in the histogram; simple dominant
        // eigenvalues put them all in the multiplicity-one bucket
        assert_eq!(report.multiplicity_histogram, vec![(1, 20)]);
    }

    #[test]
    fn reducible_instances_are_excluded_at_the_gate() {
        let k = ConeSpec::complexified(ConeSpec::orthant(2).unwrap()).unwrap();
        // block-diagonal: positive but nowhere near rotationally strong
        let a = complexify(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        match assess_instance(&a, &k, &tol()).unwrap() {
            SearchOutcome::Excluded { reason } => {
                assert!(reason.contains("rotational"), "{reason}")
            }
            other => panic!("expected exclusion, got {other:?}"),
        }
        let id = complexify(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            assess_instance(&id, &k, &tol()).unwrap(),
            SearchOutcome::Excluded { .. }
        ));
    }

    #[test]
    fn transformed_campaign_stays_eligible_without_findings() {
        let seeds: Vec<u64> = (0..4).collect();
        let report = search_counterexample(Family::Transformed, &[3], &seeds, &tol()).unwrap();
        assert_eq!(report.counts.instances_tested, 4);
        assert_eq!(report.counts.eligible, 4);
        assert_eq!(report.counts.findings, 0);
        assert_eq!(report.multiplicity_histogram, vec![(1, 4)]);
    }

    #[test]
    fn campaigns_are_deterministic_across_runs() {
        let seeds: Vec<u64> = (0..6).collect();
        let a = search_counterexample(Family::Jordan, &[3], &seeds, &tol()).unwrap();
        let b = search_counterexample(Family::Jordan, &[3], &seeds, &tol()).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(
            a.counts.instances_tested,
            a.counts.eligible + a.counts.excluded
        );
        assert_eq!(a.findings.len(), b.findings.len());
        assert_eq!(a.multiplicity_histogram, b.multiplicity_histogram);
        for (x, y) in a.findings.iter().zip(&b.findings) {
            assert_eq!((x.n, x.seed), (y.n, y.seed));
            assert_eq!(x.geometric, y.geometric);
        }
    }
}
