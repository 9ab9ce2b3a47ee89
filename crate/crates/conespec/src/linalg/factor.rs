//! Dense complex factorizations: partially pivoted LU and column-pivoted
//! Householder QR. These back every solve, rank decision, and nullspace
//! extraction in the crate.

use super::types::{c, CMatrix, CVector, C64};
use crate::error::{Error, Result};

/// LU factorization with partial pivoting, PA = LU stored compactly.
pub struct Lu {
    lu: CMatrix,
    piv: Vec<usize>,
    /// Smallest pivot magnitude encountered; callers decide what is singular.
    min_pivot: f64,
    /// Pivots below this floor were replaced by the floor (inverse iteration
    /// wants near-singular solves to produce a huge, normalizable direction
    /// rather than fail).
    floored: bool,
}

impl Lu {
    pub fn factor(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch("LU requires a square matrix".into()));
        }
        let n = a.nrows();
        let mut lu = a.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        let mut floored = false;
        let scale = lu.norm_fro().max(f64::MIN_POSITIVE);
        // Floor only pivots that are zero for all practical purposes. Anything
        // merely tiny is kept: inverse iteration relies on near-singular
        // solves blowing up in the wanted direction.
        let floor = (scale * 1e-300).max(f64::MIN_POSITIVE);

        for k in 0..n {
            let mut p = k;
            let mut pmax = lu[(k, k)].norm();
            for i in k + 1..n {
                let m = lu[(i, k)].norm();
                if m > pmax {
                    pmax = m;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                piv.swap(k, p);
            }
            let mut pivot = lu[(k, k)];
            if pivot.norm() < floor {
                pivot = c(floor, 0.0);
                lu[(k, k)] = pivot;
                floored = true;
            }
            min_pivot = min_pivot.min(pivot.norm());
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                if m != C64::ZERO {
                    for j in k + 1..n {
                        let sub = m * lu[(k, j)];
                        lu[(i, j)] -= sub;
                    }
                }
            }
        }
        Ok(Lu { lu, piv, min_pivot, floored })
    }

    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub fn was_floored(&self) -> bool {
        self.floored
    }

    pub fn solve_vec(&self, b: &CVector) -> Result<CVector> {
        let n = self.lu.nrows();
        if b.dim() != n {
            return Err(Error::DimensionMismatch("LU solve rhs".into()));
        }
        let mut x: Vec<C64> = self.piv.iter().map(|&p| b[p]).collect();
        // forward: L y = Pb
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        // back: U x = y
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NumericalFailure("LU solve produced non-finite values".into()));
        }
        Ok(CVector::from_raw(x))
    }

    pub fn solve_mat(&self, b: &CMatrix) -> Result<CMatrix> {
        let mut cols = Vec::with_capacity(b.ncols());
        for j in 0..b.ncols() {
            cols.push(self.solve_vec(&b.col(j))?);
        }
        CMatrix::from_cols(&cols)
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        self.solve_mat(&CMatrix::identity(self.lu.nrows()))
    }
}

/// Solve A x = b by LU.
pub fn solve(a: &CMatrix, b: &CVector) -> Result<CVector> {
    Lu::factor(a)?.solve_vec(b)
}

/// Column-pivoted Householder QR: A P = Q R.
///
/// Householder vectors are kept in the strict lower part of `qr` plus `vs`;
/// the upper triangle is R. `jpvt[l]` names the original column now in slot l.
pub struct Cpqr {
    qr: CMatrix,
    vs: Vec<CVector>,
    jpvt: Vec<usize>,
    nsteps: usize,
}

impl Cpqr {
    pub fn factor(a: &CMatrix) -> Self {
        let m = a.nrows();
        let n = a.ncols();
        let mut qr = a.clone();
        let mut jpvt: Vec<usize> = (0..n).collect();
        let mut vs: Vec<CVector> = Vec::new();
        let steps = m.min(n);

        for k in 0..steps {
            // pivot: trailing column with the largest remaining norm
            let mut best = k;
            let mut best_norm = -1.0;
            for j in k..n {
                let nj: f64 = (k..m).map(|i| qr[(i, j)].norm_sqr()).sum();
                if nj > best_norm {
                    best_norm = nj;
                    best = j;
                }
            }
            if best != k {
                for i in 0..m {
                    let tmp = qr[(i, k)];
                    qr[(i, k)] = qr[(i, best)];
                    qr[(i, best)] = tmp;
                }
                jpvt.swap(k, best);
            }

            let xnorm = best_norm.max(0.0).sqrt();
            if xnorm == 0.0 {
                vs.push(CVector::zeros(m - k));
                continue;
            }
            let x0 = qr[(k, k)];
            let phase = if x0.norm() == 0.0 { C64::ONE } else { x0 / x0.norm() };
            let s = phase * xnorm;
            let mut v: Vec<C64> = (k..m).map(|i| qr[(i, k)]).collect();
            v[0] += s;
            let v = CVector::from_raw(v);
            let vv = v.norm();
            let v = if vv > 0.0 { v.scale(c(1.0 / vv, 0.0)) } else { v };

            // apply H = I - 2 v v* to trailing columns
            for j in k..n {
                let mut proj = C64::ZERO;
                for i in k..m {
                    proj += v[i - k].conj() * qr[(i, j)];
                }
                let proj = proj * 2.0;
                if proj != C64::ZERO {
                    for i in k..m {
                        let sub = v[i - k] * proj;
                        qr[(i, j)] -= sub;
                    }
                }
            }
            qr[(k, k)] = -s;
            for i in k + 1..m {
                qr[(i, k)] = C64::ZERO;
            }
            vs.push(v);
        }

        Cpqr { qr, vs, jpvt, nsteps: steps }
    }

    pub fn rdiag(&self, k: usize) -> f64 {
        self.qr[(k, k)].norm()
    }

    /// Numerical rank at an absolute diagonal threshold.
    pub fn rank(&self, tol_abs: f64) -> usize {
        (0..self.nsteps).take_while(|&k| self.rdiag(k) > tol_abs).count()
    }

    /// Apply Q (product of stored reflectors) to a vector.
    pub fn apply_q(&self, x: &CVector) -> CVector {
        let m = self.qr.nrows();
        let mut y = x.clone();
        for k in (0..self.vs.len()).rev() {
            let v = &self.vs[k];
            if v.norm() == 0.0 {
                continue;
            }
            let mut proj = C64::ZERO;
            for i in k..m {
                proj += v[i - k].conj() * y[i];
            }
            let proj = proj * 2.0;
            for i in k..m {
                let sub = v[i - k] * proj;
                y[i] -= sub;
            }
        }
        y
    }

    /// Apply Q* to a vector.
    pub fn apply_qh(&self, x: &CVector) -> CVector {
        let m = self.qr.nrows();
        let mut y = x.clone();
        for (k, v) in self.vs.iter().enumerate() {
            if v.norm() == 0.0 {
                continue;
            }
            let mut proj = C64::ZERO;
            for i in k..m {
                proj += v[i - k].conj() * y[i];
            }
            let proj = proj * 2.0;
            for i in k..m {
                let sub = v[i - k] * proj;
                y[i] -= sub;
            }
        }
        y
    }

    /// First `k` columns of Q: an orthonormal basis for the span of the
    /// pivoted leading columns.
    pub fn q_thin(&self, k: usize) -> Vec<CVector> {
        let m = self.qr.nrows();
        (0..k.min(self.nsteps)).map(|j| self.apply_q(&CVector::basis(m, j))).collect()
    }

    /// Orthonormal basis of the (numerical) nullspace at `tol_abs`.
    pub fn nullspace(&self, tol_abs: f64) -> Vec<CVector> {
        let n = self.qr.ncols();
        let r = self.rank(tol_abs);
        if r == n {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(n - r);
        for free in r..n {
            // solve R11 w = -R[0..r, free]
            let mut w = vec![C64::ZERO; r];
            for i in (0..r).rev() {
                let mut acc = -self.qr[(i, free)];
                for j in i + 1..r {
                    acc -= self.qr[(i, j)] * w[j];
                }
                w[i] = acc / self.qr[(i, i)];
            }
            let mut x = vec![C64::ZERO; n];
            for (l, &wl) in w.iter().enumerate() {
                x[self.jpvt[l]] = wl;
            }
            x[self.jpvt[free]] = C64::ONE;
            out.push(CVector::from_raw(x));
        }
        orthonormalize(&out, 1e-12)
    }

    /// Least-squares solution of min ||A x - b|| using rank `r` at `tol_abs`.
    pub fn solve_lstsq(&self, b: &CVector, tol_abs: f64) -> CVector {
        let n = self.qr.ncols();
        let r = self.rank(tol_abs);
        let y = self.apply_qh(b);
        let mut z = vec![C64::ZERO; r];
        for i in (0..r).rev() {
            let mut acc = y[i];
            for j in i + 1..r {
                acc -= self.qr[(i, j)] * z[j];
            }
            z[i] = acc / self.qr[(i, i)];
        }
        let mut x = vec![C64::ZERO; n];
        for (l, &zl) in z.iter().enumerate() {
            x[self.jpvt[l]] = zl;
        }
        CVector::from_raw(x)
    }
}

/// Modified Gram-Schmidt with re-orthogonalization. Vectors whose residual
/// drops below `drop_tol` times their original norm are discarded, so the
/// result is an orthonormal basis of the span.
pub fn orthonormalize(vs: &[CVector], drop_tol: f64) -> Vec<CVector> {
    let mut basis: Vec<CVector> = Vec::new();
    for v in vs {
        let orig = v.norm();
        if orig == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let coef = b.dot(&w);
                w = w.axpy(-coef, b);
            }
        }
        if w.norm() > drop_tol * orig {
            basis.push(w.normalized());
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn lu_solves_known_system() {
        let a = CMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let b = CVector::from_real(&[5.0, 10.0]).unwrap();
        let x = solve(&a, &b).unwrap();
        assert!(approx(x[0].re, 1.0, 1e-12));
        assert!(approx(x[1].re, 3.0, 1e-12));
    }

    #[test]
    fn lu_complex_roundtrip() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(2.0, -1.0), c(0.0, 0.5)],
            vec![c(0.0, 2.0), c(1.0, 0.0), c(3.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, -1.0), c(1.0, 1.0)],
        ])
        .unwrap();
        let b = CVector::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, 2.0)]).unwrap();
        let x = solve(&a, &b).unwrap();
        let r = a.matvec(&x).sub(&b);
        assert!(r.norm() < 1e-12);
    }

    #[test]
    fn cpqr_rank_and_nullspace() {
        // rank-2 3x3 with known nullspace direction (1, 1, -1)
        let a = CMatrix::from_real_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 2.0],
        ])
        .unwrap();
        let f = Cpqr::factor(&a);
        assert_eq!(f.rank(1e-10), 2);
        let ns = f.nullspace(1e-10);
        assert_eq!(ns.len(), 1);
        assert!(a.matvec(&ns[0]).norm() < 1e-12);
        assert!(approx(ns[0].norm(), 1.0, 1e-12));
    }

    #[test]
    fn q_thin_is_orthonormal_and_spans() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(0.0, 1.0)],
            vec![c(-1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.5, 0.5), c(1.0, -1.0)],
        ])
        .unwrap();
        let f = Cpqr::factor(&a);
        let q = f.q_thin(2);
        assert_eq!(q.len(), 2);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((q[i].dot(&q[j]).norm() - expect).abs() < 1e-12);
            }
        }
        // original columns must lie in span(q)
        for jcol in 0..2 {
            let col = a.col(jcol);
            let mut resid = col.clone();
            for b in &q {
                let coef = b.dot(&resid);
                resid = resid.axpy(-coef, b);
            }
            assert!(resid.norm() < 1e-12);
        }
    }

    #[test]
    fn lstsq_matches_exact_solution_when_consistent() {
        let a = CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let b = CVector::from_real(&[3.0, 4.0, 0.0]).unwrap();
        let f = Cpqr::factor(&a);
        let x = f.solve_lstsq(&b, 1e-12);
        assert!(approx(x[0].re, 3.0, 1e-12));
        assert!(approx(x[1].re, 2.0, 1e-12));
    }

    #[test]
    fn orthonormalize_drops_dependent_vectors() {
        let v1 = CVector::from_real(&[1.0, 0.0, 0.0]).unwrap();
        let v2 = CVector::from_real(&[1.0, 1e-15, 0.0]).unwrap();
        let v3 = CVector::from_real(&[0.0, 1.0, 0.0]).unwrap();
        let basis = orthonormalize(&[v1, v2, v3], 1e-10);
        assert_eq!(basis.len(), 2);
    }
}
