//! Properness of a cone with respect to a direct-sum decomposition.
//!
//! Given a splitting of the space into complementary blocks, each block
//! carries an oblique projection (onto the block, along the others). The
//! cone is "projectively proper" for the splitting when every projected
//! image of the cone is pointed. When some image is not pointed, that block
//! can be removed: the cone meets the span of the remaining blocks in a
//! nonzero subcone, and the question restarts one dimension class down.
//! Iterating yields a subcone that is projectively proper for the surviving
//! blocks, in its own coordinates.

use super::meets::intersect_cone_with_subspace;
use super::lp::{lp_feasible, lp_pointed};
use super::ConeSpec;
use crate::config::ToleranceProfile;
use crate::error::{Error, Result};
use crate::linalg::factor::{Cpqr, Lu};
use crate::linalg::types::{c, CMatrix, CVector};
use crate::linalg::SubspaceBasis;

/// A direct-sum decomposition of C^n into complementary blocks.
///
/// Blocks need not be mutually orthogonal; projections are oblique (onto a
/// block, along the others).
#[derive(Debug, Clone)]
pub struct DecompositionSpec {
    blocks: Vec<SubspaceBasis>,
    ambient: usize,
}

impl DecompositionSpec {
    /// Validates that the blocks share one ambient space, that their
    /// dimensions sum to it, and that the stacked basis is invertible.
    pub fn new(blocks: Vec<SubspaceBasis>, tol: &ToleranceProfile) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidSpec("decomposition needs at least one block".into()));
        }
        let ambient = blocks[0].ambient_dim();
        let mut total = 0usize;
        for (i, b) in blocks.iter().enumerate() {
            if b.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch("decomposition block ambient".into()));
            }
            if b.dim() == 0 {
                return Err(Error::InvalidSpec(format!("decomposition block {i} is trivial")));
            }
            total += b.dim();
        }
        if total != ambient {
            return Err(Error::InvalidSpec(format!(
                "block dimensions sum to {total}, ambient is {ambient}"
            )));
        }
        let spec = DecompositionSpec { blocks, ambient };
        let stacked = spec.stacked();
        let scale = stacked.norm_fro().max(f64::MIN_POSITIVE);
        if Cpqr::factor(&stacked).rank(tol.tol_rank(scale)) != ambient {
            return Err(Error::InvalidSpec(
                "blocks are not complementary: stacked basis is singular".into(),
            ));
        }
        Ok(spec)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[SubspaceBasis] {
        &self.blocks
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim()).collect()
    }

    /// All block bases side by side, as the columns of an n x n matrix.
    fn stacked(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.ambient, self.ambient);
        let mut col = 0;
        for b in &self.blocks {
            for v in b.vectors() {
                m.set_col(col, v);
                col += 1;
            }
        }
        m
    }

    /// Oblique projections of `x` onto every block at once (the i-th entry
    /// is the component of `x` in block i, in ambient coordinates).
    pub fn split(&self, x: &CVector) -> Result<Vec<CVector>> {
        if x.dim() != self.ambient {
            return Err(Error::DimensionMismatch("decomposition split input".into()));
        }
        let coords = Lu::factor(&self.stacked())?.solve_vec(x)?;
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut offset = 0;
        for b in &self.blocks {
            let mut piece = CVector::zeros(self.ambient);
            for (j, v) in b.vectors().iter().enumerate() {
                piece = piece.axpy(coords[offset + j], v);
            }
            out.push(piece);
            offset += b.dim();
        }
        Ok(out)
    }

    /// Oblique projection of `x` onto block `i` along the other blocks.
    pub fn project(&self, i: usize, x: &CVector) -> Result<CVector> {
        let pieces = self.split(x)?;
        pieces.into_iter().nth(i).ok_or_else(|| {
            Error::InvalidSpec(format!("block index {i} out of range"))
        })
    }
}

/// Pointedness verdict for one projected image of the cone.
#[derive(Debug, Clone)]
pub struct IndexProperness {
    pub index: usize,
    /// Whether the oblique image of the cone in this block is pointed.
    pub pointed: bool,
    /// When not pointed: a nonzero vector whose positive and negative
    /// multiples both lie in the projected image (ambient coordinates of
    /// the cone's space).
    pub witness: Option<CVector>,
}

/// Per-block properness of the cone under the decomposition.
#[derive(Debug, Clone)]
pub struct PropernessReport {
    pub per_index: Vec<IndexProperness>,
}

impl PropernessReport {
    /// True when every projected image is pointed.
    pub fn proper(&self) -> bool {
        self.per_index.iter().all(|p| p.pointed)
    }

    /// Lowest block index whose image is not pointed.
    pub fn first_improper(&self) -> Option<usize> {
        self.per_index.iter().find(|p| !p.pointed).map(|p| p.index)
    }
}

/// Extracts a line witness from an unpointedness certificate: nonnegative
/// weights nu summing to 1 with sum nu_j v_j = 0. Any term with positive
/// weight then has its negative expressed by the remaining terms.
fn line_witness(images: &[CVector], nu: &[f64], tol_lp: f64) -> Option<CVector> {
    for (j, &w) in nu.iter().enumerate() {
        if w > 1e3 * tol_lp {
            let x = images[j].scale(c(w, 0.0));
            if x.norm() > 1e3 * tol_lp {
                return Some(x.normalized());
            }
        }
    }
    None
}

/// Checks pointedness of every oblique image of the cone.
pub fn projectively_proper(
    cone: &ConeSpec,
    decomp: &DecompositionSpec,
    tol: &ToleranceProfile,
) -> Result<PropernessReport> {
    if decomp.ambient_dim() != cone.dim() {
        return Err(Error::DimensionMismatch("decomposition ambient vs cone".into()));
    }
    let gens = cone.real_conic_generators()?;
    // images[i][j] = oblique projection of generator j onto block i
    let mut images: Vec<Vec<CVector>> = vec![Vec::new(); decomp.len()];
    for g in &gens {
        for (i, piece) in decomp.split(g)?.into_iter().enumerate() {
            images[i].push(piece);
        }
    }
    let mut per_index = Vec::with_capacity(decomp.len());
    for (i, imgs) in images.iter().enumerate() {
        let kept: Vec<&CVector> =
            imgs.iter().filter(|v| v.norm() > 1e3 * tol.tol_lp).collect();
        let realified: Vec<Vec<f64>> = kept.iter().map(|v| v.realified()).collect();
        let pointed = lp_pointed(&realified, tol.tol_lp)?;
        let witness = if pointed {
            None
        } else {
            // rebuild the vanishing combination to extract the trapped line
            let m = realified.len();
            let d = 2 * cone.dim();
            let mut a = vec![vec![0.0f64; m]; d + 1];
            for (k, v) in realified.iter().enumerate() {
                for (r, &val) in v.iter().enumerate() {
                    a[r][k] = val;
                }
                a[d][k] = 1.0;
            }
            let mut b = vec![0.0f64; d + 1];
            b[d] = 1.0;
            let sol = lp_feasible(&a, &b, &vec![true; m], tol.tol_lp)?;
            sol.witness.as_deref().and_then(|nu| {
                let owned: Vec<CVector> = kept.iter().map(|v| (*v).clone()).collect();
                line_witness(&owned, nu, tol.tol_lp)
            })
        };
        per_index.push(IndexProperness { index: i, pointed, witness });
    }
    Ok(PropernessReport { per_index })
}

/// A subcone extracted by dropping blocks until every surviving oblique
/// image is pointed.
#[derive(Debug, Clone)]
pub struct ProperSubcone {
    /// The subcone in its own local coordinates (equal to the input cone
    /// when nothing was dropped).
    pub cone: ConeSpec,
    /// Original block indices that survived.
    pub kept_indices: Vec<usize>,
    /// The surviving blocks, re-expressed in the subcone's coordinates.
    pub decomposition: DecompositionSpec,
    /// Maps the subcone's coordinates into the original ambient space.
    pub embedding: SubspaceBasis,
    /// Number of blocks removed.
    pub dropped: usize,
}

/// Composition of two orthonormal embeddings: outer ∘ inner.
fn compose_embeddings(outer: &SubspaceBasis, inner: &SubspaceBasis) -> Result<SubspaceBasis> {
    let om = outer.as_matrix();
    let cols: Vec<CVector> = inner.vectors().iter().map(|v| om.matvec(v)).collect();
    SubspaceBasis::new(cols, 1e-10)
}

/// Runs the drop-and-restrict induction until the surviving decomposition is
/// projectively proper. Errors with `ProofMismatch` if a step contradicts
/// the guarantees the construction relies on (an improper block always
/// leaves a nonzero subcone behind).
pub fn find_proper_subcone(
    cone: &ConeSpec,
    decomp: &DecompositionSpec,
    tol: &ToleranceProfile,
) -> Result<ProperSubcone> {
    if decomp.ambient_dim() != cone.dim() {
        return Err(Error::DimensionMismatch("decomposition ambient vs cone".into()));
    }
    let mut current_cone = cone.clone();
    let mut current_decomp = decomp.clone();
    let mut kept: Vec<usize> = (0..decomp.len()).collect();
    let mut embedding = SubspaceBasis::new(
        (0..cone.dim()).map(|k| CVector::basis(cone.dim(), k)).collect(),
        1e-12,
    )?;
    let mut dropped = 0usize;

    loop {
        let report = projectively_proper(&current_cone, &current_decomp, tol)?;
        let Some(pos) = report.first_improper() else {
            return Ok(ProperSubcone {
                cone: current_cone,
                kept_indices: kept,
                decomposition: current_decomp,
                embedding,
                dropped,
            });
        };
        if current_decomp.len() == 1 {
            // a single block projects by the identity; a pointed cone can
            // never be improper there
            return Err(Error::ProofMismatch(
                "single-block image of a pointed cone reported not pointed".into(),
            ));
        }

        // span of the surviving blocks
        let mut spanning: Vec<CVector> = Vec::new();
        for (i, b) in current_decomp.blocks().iter().enumerate() {
            if i != pos {
                spanning.extend_from_slice(b.vectors());
            }
        }
        let expected_dim = current_decomp.ambient_dim() - current_decomp.blocks()[pos].dim();
        let v1 = SubspaceBasis::from_spanning(&spanning, 1e-10)?;
        if v1.dim() != expected_dim {
            return Err(Error::NumericalFailure(
                "surviving blocks lost rank while restricting".into(),
            ));
        }

        let section = intersect_cone_with_subspace(&current_cone, &v1, tol)?.ok_or_else(|| {
            Error::ProofMismatch(
                "dropping an improper block must leave a nonzero subcone, found none".into(),
            )
        })?;

        // restrict the surviving blocks to coordinates of the new space
        let mut new_blocks = Vec::with_capacity(current_decomp.len() - 1);
        for (i, b) in current_decomp.blocks().iter().enumerate() {
            if i == pos {
                continue;
            }
            let locals: Vec<CVector> = b
                .vectors()
                .iter()
                .map(|v| v1.coordinates(v))
                .collect::<Result<Vec<_>>>()?;
            let local_block = SubspaceBasis::from_spanning(&locals, 1e-10)?;
            if local_block.dim() != b.dim() {
                return Err(Error::NumericalFailure(
                    "a surviving block degenerated under restriction".into(),
                ));
            }
            new_blocks.push(local_block);
        }

        embedding = compose_embeddings(&embedding, &v1)?;
        kept.remove(pos);
        current_cone = section;
        current_decomp = DecompositionSpec::new(new_blocks, tol)?;
        dropped += 1;
    }
}
