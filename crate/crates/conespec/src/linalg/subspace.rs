//! Orthonormal subspace bases, orthogonal projections, and distances.

use super::factor::orthonormalize;
use super::types::{CMatrix, CVector};
use crate::error::{Error, Result};

/// A subspace of C^n held as an orthonormal spanning list.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    ambient: usize,
    vectors: Vec<CVector>,
}

impl SubspaceBasis {
    /// Wraps vectors that are already orthonormal to within `tol_ortho`.
    pub fn new(vectors: Vec<CVector>, tol_ortho: f64) -> Result<Self> {
        let ambient = match vectors.first() {
            Some(v) => v.dim(),
            None => {
                return Err(Error::InvalidSpec(
                    "subspace basis needs at least one vector; use `trivial` for {0}".into(),
                ))
            }
        };
        for (i, u) in vectors.iter().enumerate() {
            if u.dim() != ambient {
                return Err(Error::DimensionMismatch("subspace basis vectors".into()));
            }
            for (j, w) in vectors.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                if (u.dot(w).norm() - want).abs() > tol_ortho {
                    return Err(Error::InvalidSpec(format!(
                        "basis not orthonormal at pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(SubspaceBasis { ambient, vectors })
    }

    /// Orthonormalizes an arbitrary spanning list, dropping dependents.
    pub fn from_spanning(vectors: &[CVector], drop_tol: f64) -> Result<Self> {
        let ambient = match vectors.first() {
            Some(v) => v.dim(),
            None => return Err(Error::InvalidSpec("empty spanning list".into())),
        };
        let kept = orthonormalize(vectors, drop_tol);
        if kept.is_empty() {
            return Err(Error::InvalidSpec("spanning list is numerically zero".into()));
        }
        Ok(SubspaceBasis { ambient, vectors: kept })
    }

    /// The zero subspace of C^n.
    pub fn trivial(ambient: usize) -> Self {
        SubspaceBasis { ambient, vectors: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    /// Basis vectors as the columns of an n x d matrix.
    pub fn as_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.ambient, self.vectors.len());
        for (j, v) in self.vectors.iter().enumerate() {
            m.set_col(j, v);
        }
        m
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, v: &CVector) -> Result<CVector> {
        if v.dim() != self.ambient {
            return Err(Error::DimensionMismatch("projection input".into()));
        }
        let mut out = CVector::zeros(self.ambient);
        for b in &self.vectors {
            let coef = b.dot(v);
            out = out.axpy(coef, b);
        }
        Ok(out)
    }

    /// Coordinates of the projection in this basis.
    pub fn coordinates(&self, v: &CVector) -> Result<CVector> {
        if v.dim() != self.ambient {
            return Err(Error::DimensionMismatch("coordinate input".into()));
        }
        CVector::new(self.vectors.iter().map(|b| b.dot(v)).collect())
    }

    /// Embeds coordinate vector `y` (length = dim) back into C^n.
    pub fn embed(&self, y: &CVector) -> Result<CVector> {
        if y.dim() != self.vectors.len() {
            return Err(Error::DimensionMismatch("embedding coordinates".into()));
        }
        let mut out = CVector::zeros(self.ambient);
        for (j, b) in self.vectors.iter().enumerate() {
            out = out.axpy(y[j], b);
        }
        Ok(out)
    }

    /// || v - proj(v) ||.
    pub fn distance(&self, v: &CVector) -> Result<f64> {
        Ok(v.sub(&self.project(v)?).norm())
    }

    /// Compression of `a` to this subspace: B* A B (dim x dim).
    pub fn compress(&self, a: &CMatrix) -> Result<CMatrix> {
        if a.nrows() != self.ambient || a.ncols() != self.ambient {
            return Err(Error::DimensionMismatch("compression operand".into()));
        }
        let b = self.as_matrix();
        Ok(b.adjoint().matmul(&a.matmul(&b)))
    }

    /// Whether `a` maps this subspace into itself, up to `tol` relative to
    /// ||a||.
    pub fn is_invariant_under(&self, a: &CMatrix, tol: f64) -> Result<bool> {
        let scale = a.norm_fro().max(1.0);
        for b in &self.vectors {
            let image = a.matvec(b);
            if self.distance(&image)? > tol * scale {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Distance from `v` to the span of `basis` (convenience form).
pub fn distance_to_subspace(v: &CVector, basis: &SubspaceBasis) -> Result<f64> {
    basis.distance(v)
}
