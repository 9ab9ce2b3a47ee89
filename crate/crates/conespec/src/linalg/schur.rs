//! Complex Schur decomposition A = Q T Q* via Householder reduction to
//! Hessenberg form followed by explicitly shifted QR iteration with complex
//! Givens rotations, plus unitary reordering of the triangular factor.

use super::types::{c, CMatrix, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Schur {
    /// Unitary factor; columns are Schur vectors.
    pub q: CMatrix,
    /// Upper triangular factor; eigenvalues on the diagonal.
    pub t: CMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Frobenius residual ||A Q - Q T|| of the factorization.
    pub fn residual(&self, a: &CMatrix) -> f64 {
        a.matmul(&self.q).sub(&self.q.matmul(&self.t)).norm_fro()
    }
}

/// Givens rotation G = [[c, s], [-conj(s), c]] with G [f; g] = [r; 0].
fn givens(f: C64, g: C64) -> (f64, C64, C64) {
    let fa = f.norm();
    let ga = g.norm();
    if ga == 0.0 {
        return (1.0, C64::ZERO, f);
    }
    if fa == 0.0 {
        return (0.0, g.conj() / ga, c(ga, 0.0));
    }
    let d = fa.hypot(ga);
    let cs = fa / d;
    let phase = f / fa;
    let sn = phase * (g.conj() / d);
    (cs, sn, phase * d)
}

/// Apply G to rows (i, i+1) of m over columns j0..j1.
fn rotate_rows(m: &mut CMatrix, i: usize, cs: f64, sn: C64, j0: usize, j1: usize) {
    for j in j0..j1 {
        let a = m[(i, j)];
        let b = m[(i + 1, j)];
        m[(i, j)] = a * cs + b * sn;
        m[(i + 1, j)] = b * cs - a * sn.conj();
    }
}

/// Apply G* to columns (j, j+1) of m over rows i0..i1.
fn rotate_cols(m: &mut CMatrix, j: usize, cs: f64, sn: C64, i0: usize, i1: usize) {
    for i in i0..i1 {
        let a = m[(i, j)];
        let b = m[(i, j + 1)];
        m[(i, j)] = a * cs + b * sn.conj();
        m[(i, j + 1)] = b * cs - a * sn;
    }
}

fn hessenberg(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    if n < 3 {
        return (q, h);
    }
    for k in 0..n - 2 {
        let xnorm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { C64::ONE } else { x0 / x0.norm() };
        let s = phase * xnorm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] += s;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        // H = I - 2 v v*, rows k+1..n
        for j in k..n {
            let mut proj = C64::ZERO;
            for i in k + 1..n {
                proj += v[i - k - 1].conj() * h[(i, j)];
            }
            let proj = proj * 2.0;
            for i in k + 1..n {
                let sub = v[i - k - 1] * proj;
                h[(i, j)] -= sub;
            }
        }
        // columns k+1..n
        for i in 0..n {
            let mut proj = C64::ZERO;
            for j in k + 1..n {
                proj += h[(i, j)] * v[j - k - 1];
            }
            let proj = proj * 2.0;
            for j in k + 1..n {
                let sub = proj * v[j - k - 1].conj();
                h[(i, j)] -= sub;
            }
        }
        for i in 0..n {
            let mut proj = C64::ZERO;
            for j in k + 1..n {
                proj += q[(i, j)] * v[j - k - 1];
            }
            let proj = proj * 2.0;
            for j in k + 1..n {
                let sub = proj * v[j - k - 1].conj();
                q[(i, j)] -= sub;
            }
        }
        h[(k + 1, k)] = -s;
        for i in k + 2..n {
            h[(i, k)] = C64::ZERO;
        }
    }
    (q, h)
}

/// Trailing-2x2 eigenvalue closest to the corner entry.
fn wilkinson_shift(t: &CMatrix, hi: usize) -> C64 {
    let a = t[(hi - 1, hi - 1)];
    let b = t[(hi - 1, hi)];
    let cc = t[(hi, hi - 1)];
    let d = t[(hi, hi)];
    let tr2 = (a + d) * 0.5;
    let det = a * d - b * cc;
    let disc = (tr2 * tr2 - det).sqrt();
    let l1 = tr2 + disc;
    let l2 = tr2 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition. Fails with `NonConvergence` only if the QR
/// iteration stalls past its sweep budget.
pub fn schur(a: &CMatrix) -> Result<Schur> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("Schur requires a square matrix".into()));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(Schur { q: CMatrix::zeros(0, 0), t: CMatrix::zeros(0, 0) });
    }
    let (mut q, mut t) = hessenberg(a);
    let norm = t.norm_fro().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;

    let mut hi = n - 1;
    let mut stall = 0usize;
    let mut total_iters = 0usize;
    let budget = 40 * n.max(4);

    while hi > 0 {
        // zero out negligible subdiagonals
        for i in 1..=hi {
            let small = eps * (t[(i - 1, i - 1)].norm() + t[(i, i)].norm()).max(0.1 * eps * norm);
            if t[(i, i - 1)].norm() <= small {
                t[(i, i - 1)] = C64::ZERO;
            }
        }
        if t[(hi, hi - 1)] == C64::ZERO {
            hi -= 1;
            stall = 0;
            continue;
        }
        // active block [lo, hi]
        let mut lo = hi;
        while lo > 0 && t[(lo, lo - 1)] != C64::ZERO {
            lo -= 1;
        }

        total_iters += 1;
        stall += 1;
        if total_iters > budget {
            return Err(Error::NonConvergence { n, iterations: total_iters });
        }
        let sigma = if stall % 12 == 0 {
            // exceptional shift to break symmetric stalls
            t[(hi, hi)] + c(1.5 * t[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&t, hi)
        };

        for i in lo..=hi {
            t[(i, i)] -= sigma;
        }
        let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (cs, sn, r) = givens(t[(i, i)], t[(i + 1, i)]);
            t[(i, i)] = r;
            t[(i + 1, i)] = C64::ZERO;
            rotate_rows(&mut t, i, cs, sn, i + 1, n);
            rots.push((cs, sn));
        }
        for (off, &(cs, sn)) in rots.iter().enumerate() {
            let i = lo + off;
            rotate_cols(&mut t, i, cs, sn, 0, i + 2);
            rotate_cols(&mut q, i, cs, sn, 0, n);
        }
        for i in lo..=hi {
            t[(i, i)] += sigma;
        }
    }

    for i in 1..n {
        for j in 0..i {
            t[(i, j)] = C64::ZERO;
        }
    }
    Ok(Schur { q, t })
}

/// Unitarily reorder the Schur form so every eigenvalue satisfying `select`
/// comes first. Returns the reordered form and the count of selected values.
pub fn reorder(s: &Schur, select: impl Fn(C64) -> bool) -> Result<(Schur, usize)> {
    let mut out = s.clone();
    let n = out.t.nrows();
    let norm = out.t.norm_fro().max(f64::MIN_POSITIVE);
    loop {
        let mut moved = false;
        for i in 0..n.saturating_sub(1) {
            let l1 = out.t[(i, i)];
            let l2 = out.t[(i + 1, i + 1)];
            if !select(l1) && select(l2) {
                swap_adjacent(&mut out, i, norm)?;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let count = (0..n).take_while(|&i| select(out.t[(i, i)])).count();
    Ok((out, count))
}

fn swap_adjacent(s: &mut Schur, i: usize, norm: f64) -> Result<()> {
    let n = s.t.nrows();
    let l1 = s.t[(i, i)];
    let l2 = s.t[(i + 1, i + 1)];
    let b = s.t[(i, i + 1)];
    let diff = l2 - l1;
    if b.norm().hypot(diff.norm()) < 1e-300 * norm.max(1.0) {
        return Err(Error::NumericalFailure(
            "cannot separate numerically identical eigenvalues while reordering".into(),
        ));
    }
    // [b; l2 - l1] is the in-block eigenvector for l2; rotate it onto e1.
    let (cs, sn, _) = givens(b, diff);
    rotate_rows(&mut s.t, i, cs, sn, i, n);
    rotate_cols(&mut s.t, i, cs, sn, 0, i + 2);
    rotate_cols(&mut s.q, i, cs, sn, 0, n);
    s.t[(i + 1, i)] = C64::ZERO;
    // diagonal entries swap exactly; pin them to kill rounding drift
    s.t[(i, i)] = l2;
    s.t[(i + 1, i + 1)] = l1;
    Ok(())
}

/// Unitarity defect ||Q*Q - I||_F.
pub fn unitarity_defect(q: &CMatrix) -> f64 {
    q.adjoint().matmul(q).sub(&CMatrix::identity(q.nrows())).norm_fro()
}
