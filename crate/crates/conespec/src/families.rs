//! Seeded generators of structured test instances (operator + cone pairs).
//!
//! Every instance is a pure function of `(family, n, seed)`: the same triple
//! always reproduces the same matrix entries bit for bit, so campaign
//! findings can be replayed from their coordinates alone.

use std::fmt;
use std::str::FromStr;

use crate::cones::ConeSpec;
use crate::config::ToleranceProfile;
use crate::error::{Error, Result};
use crate::linalg::{c, eigen_spectrum, CMatrix, CVector};
use crate::positivity::complexify;
use crate::rng::SplitMix64;

/// Campaign-level namespace for family streams.
const FAMILY_SEED_NS: u64 = 0x66616d696c79;

/// Largest instance dimension the generators accept.
pub const MAX_INSTANCE_DIM: usize = 128;

/// The built-in instance families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Entrywise nonnegative real matrix (some entries zero) on the orthant.
    Positive,
    /// Real matrix with entries in [0.1, 1] on the orthant.
    StrictlyPositive,
    /// Lift of a strictly positive real matrix on the complexified orthant.
    Complexified,
    /// Real matrix with exactly one length-2 chain at its dominant
    /// eigenvalue, built from an exact dyadic similarity; on the orthant.
    Jordan,
    /// Complexified instance conjugated by a well-conditioned real map, on
    /// the correspondingly transformed cone.
    Transformed,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Positive,
        Family::StrictlyPositive,
        Family::Complexified,
        Family::Jordan,
        Family::Transformed,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Positive => "positive",
            Family::StrictlyPositive => "strictly-positive",
            Family::Complexified => "complexified",
            Family::Jordan => "jordan",
            Family::Transformed => "transformed",
        }
    }

    fn tag(&self) -> u64 {
        match self {
            Family::Positive => 1,
            Family::StrictlyPositive => 2,
            Family::Complexified => 3,
            Family::Jordan => 4,
            Family::Transformed => 5,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s {
            "positive" => Ok(Family::Positive),
            "strictly-positive" => Ok(Family::StrictlyPositive),
            "complexified" => Ok(Family::Complexified),
            "jordan" => Ok(Family::Jordan),
            "transformed" => Ok(Family::Transformed),
            other => Err(Error::UnknownFamily(other.into())),
        }
    }
}

/// A generated operator/cone pair with its reproduction coordinates.
#[derive(Debug, Clone)]
pub struct Instance {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub matrix: CMatrix,
    pub cone: ConeSpec,
}

/// Generates the instance for `(family, n, seed)`.
pub fn generate(family: Family, n: usize, seed: u64, tol: &ToleranceProfile) -> Result<Instance> {
    if n == 0 || n > MAX_INSTANCE_DIM {
        return Err(Error::InvalidSpec(format!(
            "instance dimension must be in 1..={MAX_INSTANCE_DIM}, got {n}"
        )));
    }
    let matrix_cone = match family {
        Family::Positive => {
            let mut r = stream(family, n, seed, 0);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| if r.chance(0.25) { 0.0 } else { r.uniform(0.05, 1.0) })
                        .collect()
                })
                .collect();
            (complexify(&rows)?, ConeSpec::orthant(n)?)
        }
        Family::StrictlyPositive => {
            (complexify(&strictly_positive_rows(n, seed))?, ConeSpec::orthant(n)?)
        }
        Family::Complexified => {
            let a = complexify(&strictly_positive_rows(n, seed))?;
            (a, ConeSpec::complexified(ConeSpec::orthant(n)?)?)
        }
        Family::Jordan => (jordan_matrix(n, seed, tol)?, ConeSpec::orthant(n)?),
        Family::Transformed => {
            let a = complexify(&strictly_positive_rows(n, seed))?;
            let t = well_conditioned_map(n, seed)?;
            let t_inv = crate::linalg::Lu::factor(&t)?.inverse()?;
            let conjugated = t.matmul(&a).matmul(&t_inv);
            let cone = ConeSpec::transformed(
                t,
                ConeSpec::complexified(ConeSpec::orthant(n)?)?,
                tol,
            )?;
            (conjugated, cone)
        }
    };
    Ok(Instance { family, n, seed, matrix: matrix_cone.0, cone: matrix_cone.1 })
}

fn stream(family: Family, n: usize, seed: u64, attempt: u64) -> SplitMix64 {
    SplitMix64::stream(FAMILY_SEED_NS, &[family.tag(), n as u64, seed, attempt])
}

fn strictly_positive_rows(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = stream(Family::StrictlyPositive, n, seed, 0);
    (0..n).map(|_| (0..n).map(|_| r.uniform(0.1, 1.0)).collect()).collect()
}

/// Real map `I + s R` with `||s R||_F <= 0.4`, hence condition number below
/// 1.4 / 0.6 — far inside the transformed-cone cap of 1e3 used here.
fn well_conditioned_map(n: usize, seed: u64) -> Result<CMatrix> {
    let mut r = stream(Family::Transformed, n, seed, 1);
    let rows: Vec<Vec<f64>> =
        (0..n).map(|_| (0..n).map(|_| r.uniform(-1.0, 1.0)).collect()).collect();
    let raw = CMatrix::from_real_rows(&rows)?;
    let s = 0.4 / raw.norm_fro().max(1.0);
    Ok(CMatrix::identity(n).add(&raw.scale(c(s, 0.0))))
}

/// Dominant eigenvalue of every jordan-family instance.
pub const JORDAN_DOMINANT: f64 = 2.0;

/// Builds `S J S^{-1}` where `J` has the dominant eigenvalue 2 on a single
/// 2x2 upper-triangular block and well-separated dyadic simple eigenvalues
/// elsewhere, and `S` is a product of dyadic shears whose inverse is exact.
/// The chain structure is verified to be recoverable by the eigensolver;
/// if a draw fails the check, the next deterministic attempt is used.
fn jordan_matrix(n: usize, seed: u64, tol: &ToleranceProfile) -> Result<CMatrix> {
    if n < 2 {
        return Err(Error::InvalidSpec(
            "a length-2 chain needs dimension at least 2".into(),
        ));
    }
    let mut j = CMatrix::zeros(n, n);
    j[(0, 0)] = c(JORDAN_DOMINANT, 0.0);
    j[(0, 1)] = c(1.0, 0.0);
    j[(1, 1)] = c(JORDAN_DOMINANT, 0.0);
    for k in 2..n {
        j[(k, k)] = c(1.75 - 0.125 * (k - 2) as f64, 0.0);
    }
    for attempt in 0..8u64 {
        let mut r = stream(Family::Jordan, n, seed, attempt);
        let mut s = CMatrix::identity(n);
        let mut s_inv = CMatrix::identity(n);
        for _ in 0..3 {
            let i = r.below(n);
            let mut jj = r.below(n);
            if jj == i {
                jj = (jj + 1) % n;
            }
            let v = match r.below(4) {
                0 => 0.5,
                1 => -0.5,
                2 => 0.25,
                _ => -0.25,
            };
            let mut shear = CMatrix::identity(n);
            shear[(i, jj)] = c(v, 0.0);
            let mut unshear = CMatrix::identity(n);
            unshear[(i, jj)] = c(-v, 0.0);
            s = s.matmul(&shear);
            s_inv = unshear.matmul(&s_inv);
        }
        let a = s.matmul(&j).matmul(&s_inv);
        if jordan_structure_recoverable(&a, n, tol) {
            return Ok(a);
        }
    }
    Err(Error::NumericalFailure(
        "no draw produced a recoverable chain structure".into(),
    ))
}

fn jordan_structure_recoverable(a: &CMatrix, n: usize, tol: &ToleranceProfile) -> bool {
    let Ok(spectrum) = eigen_spectrum(a, tol) else {
        return false;
    };
    let mut dominant_ok = false;
    let mut total = 0usize;
    for cl in &spectrum.clusters {
        total += cl.algebraic;
        if (cl.eigenvalue - c(JORDAN_DOMINANT, 0.0)).norm() < 0.05 {
            dominant_ok = cl.algebraic == 2 && cl.geometric == 1 && cl.max_chain_len() == 2;
        } else if cl.algebraic != 1 {
            return false;
        }
    }
    dominant_ok && total == n
}

/// Deterministic member of the instance cone, usable as a flow seed:
/// the sum of the cone's conic generators.
pub fn generator_sum(cone: &ConeSpec) -> Result<CVector> {
    let gens = cone.real_conic_generators()?;
    let mut s = CVector::zeros(cone.dim());
    for g in &gens {
        s = s.add(g);
    }
    Ok(s)
}
