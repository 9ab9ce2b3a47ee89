//! Eigenstructure extraction: eigenvalue clustering, eigenvectors, Jordan
//! chains, algebraic/geometric multiplicities, and splitting C^n into the
//! invariant subspaces inside and outside a circle.
//!
//! Computed eigenvalues of a multiple root spread by roughly the m-th root of
//! the rounding level, so equality is meaningless at f64; instead, eigenvalues
//! within `cluster_radius_rel * ||A||_F` of each other (transitively) are
//! grouped into one cluster and analyzed around the cluster mean. Chains for a
//! multiple cluster come from a column-pivoted-QR nullspace cascade of
//! (A - mu I)^k; heads are selected top-down so every chain has full depth.

use super::factor::{orthonormalize, Cpqr};
use super::schur::{schur, Schur};
use super::subspace::SubspaceBasis;
use super::types::{c, CMatrix, CVector, C64};
use crate::config::ToleranceProfile;
use crate::error::{Error, Result};

/// One Jordan chain: `vectors[0]` is the head, and
/// (A - mu I) vectors[j] = vectors[j+1]; the last entry is a true eigenvector.
#[derive(Debug, Clone)]
pub struct EigenChain {
    pub eigenvalue: C64,
    pub vectors: Vec<CVector>,
}

impl EigenChain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn head(&self) -> &CVector {
        &self.vectors[0]
    }

    /// The true eigenvector at the end of the chain.
    pub fn eigenvector(&self) -> &CVector {
        self.vectors.last().expect("chains are nonempty")
    }
}

/// A group of numerically coincident eigenvalues with its chain structure.
#[derive(Debug, Clone)]
pub struct Cluster {
    /// Representative value (mean of the members).
    pub eigenvalue: C64,
    /// The individual computed eigenvalues grouped here.
    pub members: Vec<C64>,
    pub algebraic: usize,
    pub geometric: usize,
    /// Chains sorted by descending length; lengths sum to `algebraic`.
    pub chains: Vec<EigenChain>,
    /// max over chains of ||(A - mu I) tail|| / ||A||_F.
    pub chain_residual: f64,
}

impl Cluster {
    pub fn is_semisimple(&self) -> bool {
        self.algebraic == self.geometric
    }

    pub fn max_chain_len(&self) -> usize {
        self.chains.iter().map(|c| c.len()).max().unwrap_or(0)
    }
}

/// Full spectral picture of one matrix.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub dim: usize,
    /// Clusters sorted by (|lambda|, Re, Im) descending.
    pub clusters: Vec<Cluster>,
    pub spectral_radius: f64,
    /// max Re over the spectrum.
    pub abscissa: f64,
    /// ||A Q - Q T||_F / ||A||_F of the underlying factorization.
    pub schur_residual: f64,
}

impl SpectralData {
    /// The cluster of largest modulus.
    pub fn dominant(&self) -> &Cluster {
        &self.clusters[0]
    }

    /// All computed eigenvalues with multiplicity, in cluster order.
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.clusters.iter().flat_map(|c| c.members.iter().copied()).collect()
    }

    /// The cluster whose representative is nearest `mu`, if within `radius`
    /// of any member.
    pub fn cluster_near(&self, mu: C64, radius: f64) -> Option<&Cluster> {
        self.clusters
            .iter()
            .filter(|cl| cl.members.iter().any(|m| (m - mu).norm() <= radius))
            .min_by(|a, b| {
                (a.eigenvalue - mu).norm().total_cmp(&(b.eigenvalue - mu).norm())
            })
    }
}

/// Groups indices whose values are within `radius` of each other,
/// transitively (connected components of the proximity graph).
fn proximity_components(values: &[C64], radius: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut comp = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut stack = vec![start];
        comp[start] = id;
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..n {
                if comp[j] == usize::MAX && (values[i] - values[j]).norm() <= radius {
                    comp[j] = id;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    groups
}

/// Eigenvector of T for the eigenvalue at diagonal position `k`, mapped back
/// through Q: triangular back-substitution with guarded divisors.
fn schur_eigenvector(s: &Schur, k: usize) -> CVector {
    let n = s.t.nrows();
    let smin = (f64::EPSILON * s.t.norm_fro()).max(f64::MIN_POSITIVE * 1e16);
    let lam = s.t[(k, k)];
    let mut y = vec![C64::ZERO; n];
    y[k] = c(1.0, 0.0);
    for i in (0..k).rev() {
        let mut num = C64::ZERO;
        for (j, yj) in y.iter().enumerate().take(k + 1).skip(i + 1) {
            num += s.t[(i, j)] * yj;
        }
        let mut den = s.t[(i, i)] - lam;
        if den.norm() < smin {
            den = c(smin, 0.0);
        }
        let yi = -num / den;
        if yi.norm() > 1e200 {
            // rescale to dodge overflow; direction is all that matters
            let f = c(1e-200, 0.0);
            for yj in y.iter_mut() {
                *yj *= f;
            }
            y[i] = yi * f;
        } else {
            y[i] = yi;
        }
    }
    let yv = CVector::from_raw(y);
    s.q.matvec(&yv).normalized()
}

/// Chains for a cluster treated as a set of simple eigenvalues: one length-1
/// chain per member, eigenvectors from the Schur form.
fn simple_chains(s: &Schur, indices: &[usize]) -> Vec<EigenChain> {
    indices
        .iter()
        .map(|&k| EigenChain {
            eigenvalue: s.t[(k, k)],
            vectors: vec![schur_eigenvector(s, k)],
        })
        .collect()
}

/// Nullspace cascade for a multiple cluster. Returns None when the cluster
/// shows no rank deficiency at the mean (members are resolvable simples);
/// errors when the observed rank pattern is inconsistent with any Jordan
/// structure of the given size.
fn cascade_chains(
    a: &CMatrix,
    mu: C64,
    m: usize,
    tol: &ToleranceProfile,
) -> Result<Option<(usize, Vec<EigenChain>)>> {
    let b = a.shifted(mu);
    let bnorm = b.norm_fro().max(f64::MIN_POSITIVE);
    let mut dims: Vec<usize> = Vec::new();
    let mut nullspaces: Vec<Vec<CVector>> = Vec::new();
    let mut bk = b.clone();
    let mut power = 1i32;
    loop {
        // Reference scale ||B||^k, not ||B^k||: powers of a nearly nilpotent
        // matrix shrink to rounding level and would otherwise look full rank.
        let scale = bnorm.powi(power).min(f64::MAX).max(f64::MIN_POSITIVE);
        let ns = Cpqr::factor(&bk).nullspace(tol.tol_rank_rel * scale);
        let d = ns.len();
        if d > m {
            return Err(Error::NumericalFailure(format!(
                "root space at {mu} has dimension {d}, exceeding the cluster size {m}; \
                 a neighboring eigenvalue sits inside the rank tolerance"
            )));
        }
        if let Some(&prev) = dims.last() {
            if d <= prev {
                // stalled before capturing the whole cluster
                return Err(Error::NumericalFailure(format!(
                    "nullspace cascade at {mu} stalled at dimension {d} of {m}; \
                     the cluster mixes scales the rank tolerance cannot separate"
                )));
            }
        } else if d == 0 {
            return Ok(None); // no deficiency: resolvable simple members
        }
        dims.push(d);
        nullspaces.push(ns);
        if d == m {
            break;
        }
        bk = bk.matmul(&b);
        power += 1;
    }

    let depth = dims.len();
    let geometric = dims[0];
    let mut chains: Vec<EigenChain> = Vec::new();
    for k in (1..=depth).rev() {
        let d_k = dims[k - 1];
        let d_km1 = if k >= 2 { dims[k - 2] } else { 0 };
        let needed = d_k
            .checked_sub(d_km1 + chains.len())
            .ok_or_else(|| {
                Error::NumericalFailure(format!(
                    "inconsistent nullspace dimensions around {mu}: {dims:?}"
                ))
            })?;
        if needed == 0 {
            continue;
        }
        // Obstructions: N_{k-1} plus the depth-k vectors of longer chains.
        let mut obst: Vec<CVector> =
            if k >= 2 { nullspaces[k - 2].clone() } else { Vec::new() };
        for ch in &chains {
            obst.push(ch.vectors[ch.len() - k].clone());
        }
        let obst_basis = orthonormalize(&obst, 1e-12);
        // Residuals of the N_k basis against the obstruction span.
        let mut resid_cols: Vec<CVector> = Vec::new();
        for cand in &nullspaces[k - 1] {
            let mut r = cand.clone();
            for _ in 0..2 {
                for u in &obst_basis {
                    let coef = u.dot(&r);
                    r = r.axpy(-coef, u);
                }
            }
            resid_cols.push(r);
        }
        let n = a.nrows();
        let mut rm = CMatrix::zeros(n, resid_cols.len());
        for (j, col) in resid_cols.iter().enumerate() {
            rm.set_col(j, col);
        }
        let qr = Cpqr::factor(&rm);
        if qr.rank(1e-8 * qr.rdiag(0).abs().max(f64::MIN_POSITIVE)) < needed {
            return Err(Error::NumericalFailure(format!(
                "could not extract {needed} independent depth-{k} chain heads at {mu}"
            )));
        }
        for head in qr.q_thin(needed) {
            let mut vectors = vec![head];
            for _ in 1..k {
                let next = b.matvec(vectors.last().expect("nonempty"));
                vectors.push(next);
            }
            let tail_norm = vectors.last().expect("nonempty").norm();
            if tail_norm < f64::MIN_POSITIVE * 1e32 {
                return Err(Error::NumericalFailure(format!(
                    "depth-{k} chain at {mu} collapsed before reaching an eigenvector"
                )));
            }
            // Normalize so the eigenvector at the tail has unit norm; a
            // common factor preserves the chain relation.
            let f = c(1.0 / tail_norm, 0.0);
            let vectors = vectors.into_iter().map(|v| v.scale(f)).collect();
            chains.push(EigenChain { eigenvalue: mu, vectors });
        }
    }

    if chains.len() != geometric || chains.iter().map(|c| c.len()).sum::<usize>() != m {
        return Err(Error::NumericalFailure(format!(
            "chain bookkeeping at {mu} disagrees with multiplicities \
             (got {} chains totalling {}, want {geometric} totalling {m})",
            chains.len(),
            chains.iter().map(|c| c.len()).sum::<usize>(),
        )));
    }
    chains.sort_by(|x, y| y.len().cmp(&x.len()));
    Ok(Some((geometric, chains)))
}

/// Complete eigenstructure of `a` under the given tolerance profile.
pub fn eigen_spectrum(a: &CMatrix, tol: &ToleranceProfile) -> Result<SpectralData> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("spectrum of a non-square matrix".into()));
    }
    let n = a.nrows();
    if n == 0 {
        return Err(Error::InvalidSpec("spectrum of an empty matrix".into()));
    }
    let s = schur(a)?;
    let anorm = a.norm_fro();
    let schur_residual = s.residual(a) / anorm.max(f64::MIN_POSITIVE);
    let values = s.eigenvalues();
    let radius = tol.cluster_radius_rel * anorm.max(f64::MIN_POSITIVE);

    let mut clusters = Vec::new();
    for group in proximity_components(&values, radius) {
        let m = group.len();
        let members: Vec<C64> = group.iter().map(|&i| values[i]).collect();
        let mean = members.iter().sum::<C64>() / c(m as f64, 0.0);
        let (geometric, chains) = if m == 1 {
            (1, simple_chains(&s, &group))
        } else {
            match cascade_chains(a, mean, m, tol)? {
                Some(found) => found,
                None => (m, simple_chains(&s, &group)),
            }
        };
        let chain_residual = chains
            .iter()
            .map(|ch| {
                a.matvec(ch.eigenvector())
                    .axpy(-ch.eigenvalue, ch.eigenvector())
                    .norm()
                    / ch.eigenvector().norm().max(f64::MIN_POSITIVE)
            })
            .fold(0.0_f64, f64::max)
            / anorm.max(f64::MIN_POSITIVE);
        clusters.push(Cluster {
            eigenvalue: mean,
            members,
            algebraic: m,
            geometric,
            chains,
            chain_residual,
        });
    }

    clusters.sort_by(|x, y| {
        y.eigenvalue
            .norm()
            .total_cmp(&x.eigenvalue.norm())
            .then(y.eigenvalue.re.total_cmp(&x.eigenvalue.re))
            .then(y.eigenvalue.im.total_cmp(&x.eigenvalue.im))
    });

    let spectral_radius = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let abscissa = values.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(SpectralData { dim: n, clusters, spectral_radius, abscissa, schur_residual })
}

/// (algebraic, geometric) multiplicity of `mu`; `NotAnEigenvalue` when no
/// computed eigenvalue lies within the cluster radius of `mu`.
pub fn multiplicities(a: &CMatrix, mu: C64, tol: &ToleranceProfile) -> Result<(usize, usize)> {
    let data = eigen_spectrum(a, tol)?;
    let radius = tol.cluster_radius_rel * a.norm_fro().max(f64::MIN_POSITIVE);
    match data.cluster_near(mu, radius) {
        Some(cl) => Ok((cl.algebraic, cl.geometric)),
        None => Err(Error::NotAnEigenvalue(mu.re, mu.im)),
    }
}

/// Orthonormal bases of the invariant subspaces for the spectrum outside and
/// inside the circle of radius `rho`.
#[derive(Debug, Clone)]
pub struct InvariantSplit {
    /// Invariant subspace for eigenvalues with |lambda| > rho.
    pub outer: SubspaceBasis,
    /// Invariant subspace for eigenvalues with |lambda| < rho.
    pub inner: SubspaceBasis,
    pub outer_eigenvalues: Vec<C64>,
    pub inner_eigenvalues: Vec<C64>,
}

/// Splits C^n at the circle |z| = rho. The split is only well posed when no
/// eigenvalue modulus touches the circle; otherwise `SplitOnSpectrum`.
pub fn invariant_split(a: &CMatrix, rho: f64, tol: &ToleranceProfile) -> Result<InvariantSplit> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("invariant split".into()));
    }
    if !(rho.is_finite() && rho >= 0.0) {
        return Err(Error::InvalidSpec(format!("split radius must be finite and >= 0, got {rho}")));
    }
    let n = a.nrows();
    let s = schur(a)?;
    let values = s.eigenvalues();
    let sr = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let required = tol.gap_tol * sr.max(1e-300);
    for z in &values {
        if (z.norm() - rho).abs() <= required {
            return Err(Error::SplitOnSpectrum(rho, z.norm(), required));
        }
    }
    let (outer_schur, k_out) = super::schur::reorder(&s, |z| z.norm() > rho)?;
    let (inner_schur, k_in) = super::schur::reorder(&s, |z| z.norm() < rho)?;
    debug_assert_eq!(k_out + k_in, n);

    let take_basis = |sch: &Schur, k: usize| -> Result<SubspaceBasis> {
        if k == 0 {
            return Ok(SubspaceBasis::trivial(n));
        }
        let cols: Vec<CVector> = (0..k).map(|j| sch.q.col(j)).collect();
        SubspaceBasis::new(cols, tol.tol_ortho.max(1e-11))
    };
    let outer = take_basis(&outer_schur, k_out)?;
    let inner = take_basis(&inner_schur, k_in)?;
    let outer_eigenvalues = (0..k_out).map(|i| outer_schur.t[(i, i)]).collect();
    let inner_eigenvalues = (0..k_in).map(|i| inner_schur.t[(i, i)]).collect();
    Ok(InvariantSplit { outer, inner, outer_eigenvalues, inner_eigenvalues })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ToleranceProfile;

    fn default_profile() -> ToleranceProfile {
        ToleranceProfile::default_profile()
    }

    fn real(rows: &[Vec<f64>]) -> CMatrix {
        CMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn distinct_diagonal_spectrum() {
        let a = real(&[vec![3.0, 0.0, 0.0], vec![0.0, -1.0, 0.0], vec![0.0, 0.0, 0.5]]);
        let tol = default_profile();
        let data = eigen_spectrum(&a, &tol).unwrap();
        assert_eq!(data.clusters.len(), 3);
        assert!((data.spectral_radius - 3.0).abs() < 1e-12);
        assert!((data.abscissa - 3.0).abs() < 1e-12);
        assert!((data.dominant().eigenvalue.re - 3.0).abs() < 1e-12);
        for cl in &data.clusters {
            assert_eq!(cl.algebraic, 1);
            assert_eq!(cl.geometric, 1);
            assert!(cl.chain_residual < 1e-13);
        }
        // dominant eigenvector is the first axis
        let v = data.dominant().chains[0].eigenvector();
        assert!(v[0].norm() > 1.0 - 1e-10);
    }

    #[test]
    fn rotation_eigenvectors() {
        let a = real(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let data = eigen_spectrum(&a, &default_profile()).unwrap();
        assert_eq!(data.clusters.len(), 2);
        for cl in &data.clusters {
            let v = cl.chains[0].eigenvector();
            let resid = a.matvec(v).axpy(-cl.eigenvalue, v).norm();
            assert!(resid < 1e-13, "residual {resid}");
        }
    }

    #[test]
    fn repeated_semisimple_identity_block() {
        let a = real(&[
            vec![2.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 5.0],
        ]);
        let (alg, geo) = multiplicities(&a, c(2.0, 0.0), &default_profile()).unwrap();
        assert_eq!((alg, geo), (2, 2));
        assert!(matches!(
            multiplicities(&a, c(7.0, 0.0), &default_profile()),
            Err(Error::NotAnEigenvalue(_, _))
        ));
    }

    #[test]
    fn defective_block_recovers_chain() {
        // V J V^{-1} with exact integer arithmetic: J = [[2,1],[0,2]]
        let v = real(&[vec![1.0, 0.0], vec![3.0, 1.0]]);
        let vinv = real(&[vec![1.0, 0.0], vec![-3.0, 1.0]]);
        let j = real(&[vec![2.0, 1.0], vec![0.0, 2.0]]);
        let a = v.matmul(&j.matmul(&vinv));
        let data = eigen_spectrum(&a, &default_profile()).unwrap();
        assert_eq!(data.clusters.len(), 1);
        let cl = data.dominant();
        assert_eq!(cl.algebraic, 2);
        assert_eq!(cl.geometric, 1);
        assert_eq!(cl.chains.len(), 1);
        assert_eq!(cl.chains[0].len(), 2);
        assert!((cl.eigenvalue.re - 2.0).abs() < 1e-7);
        // chain relation: (A - mu) head = tail, (A - mu) tail ~ 0
        let b = a.shifted(cl.eigenvalue);
        let head = cl.chains[0].head();
        let tail = cl.chains[0].eigenvector();
        assert!(b.matvec(head).sub(tail).norm() < 1e-9 * head.norm());
        assert!(cl.chain_residual < 1e-8);
    }

    #[test]
    fn mixed_defective_and_simple() {
        // blocks: J_2(1) and a simple 4; exact similarity by a unit
        // lower-triangular integer matrix
        let v = real(&[vec![1.0, 0.0, 0.0], vec![2.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]]);
        let vinv = real(&[vec![1.0, 0.0, 0.0], vec![-2.0, 1.0, 0.0], vec![2.0, -1.0, 1.0]]);
        let j = real(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 4.0]]);
        let a = v.matmul(&j.matmul(&vinv));
        let data = eigen_spectrum(&a, &default_profile()).unwrap();
        assert_eq!(data.clusters.len(), 2);
        assert!((data.dominant().eigenvalue.re - 4.0).abs() < 1e-10);
        let jordan = &data.clusters[1];
        assert_eq!(jordan.algebraic, 2);
        assert_eq!(jordan.geometric, 1);
        assert_eq!(jordan.max_chain_len(), 2);
    }

    #[test]
    fn close_but_resolvable_pair_stays_simple() {
        let a = real(&[vec![1.0, 0.0], vec![0.0, 1.0 + 1e-5]]);
        let data = eigen_spectrum(&a, &default_profile()).unwrap();
        assert_eq!(data.clusters.len(), 2, "1e-5 gap must not cluster at 1e-7 radius");
    }

    #[test]
    fn clustered_diagonalizable_pair_reports_semisimple() {
        // gap below the cluster radius but above the rank tolerance: grouped,
        // then recognized as two resolvable simple directions
        let a = real(&[vec![1.0, 0.0], vec![0.0, 1.0 + 1e-8]]);
        let data = eigen_spectrum(&a, &default_profile()).unwrap();
        assert_eq!(data.clusters.len(), 1);
        let cl = data.dominant();
        assert_eq!(cl.algebraic, 2);
        assert_eq!(cl.geometric, 2);
        assert!(cl.is_semisimple());
    }

    #[test]
    fn invariant_split_dimensions_and_invariance() {
        let a = real(&[
            vec![3.0, 1.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![0.0, 0.0, 0.25],
        ]);
        let tol = default_profile();
        let split = invariant_split(&a, 2.0, &tol).unwrap();
        assert_eq!(split.outer.dim(), 1);
        assert_eq!(split.inner.dim(), 2);
        assert!(split.outer.is_invariant_under(&a, 1e-10).unwrap());
        assert!(split.inner.is_invariant_under(&a, 1e-10).unwrap());
        assert_eq!(split.outer_eigenvalues.len(), 1);
        assert!((split.outer_eigenvalues[0].re - 3.0).abs() < 1e-10);

        let wide = invariant_split(&a, 0.5, &tol).unwrap();
        assert_eq!(wide.outer.dim(), 2);

        assert!(matches!(
            invariant_split(&a, 1.0, &tol),
            Err(Error::SplitOnSpectrum(_, _, _))
        ));
    }

    #[test]
    fn identity_is_one_semisimple_cluster() {
        let a = CMatrix::identity(4);
        let data = eigen_spectrum(&a, &default_profile()).unwrap();
        assert_eq!(data.clusters.len(), 1);
        assert_eq!(data.dominant().algebraic, 4);
        assert_eq!(data.dominant().geometric, 4);
        assert_eq!(data.dominant().chains.len(), 4);
    }
}
