//! Matrix exponential by Pade-13 scaling and squaring, and the spectral-shift
//! flow evaluator built on it.
//!
//! `e^{At} x0` is never formed directly for large `t`: the evaluator shifts by
//! the spectral abscissa alpha = max Re(spectrum), computes the polynomially
//! bounded `e^{(A - alpha I)t} x0`, and reattaches the scalar `e^{alpha t}`
//! through a log-magnitude ledger. Directions stay representable for any `t`;
//! materializing the magnitude is the only step that can overflow.

use super::factor::Lu;
use super::schur::schur;
use super::types::{c, CMatrix, CVector};
use crate::error::{Error, Result};

/// Pade-13 numerator coefficients (denominator uses alternating signs).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which an unscaled order-13 approximant meets double
/// precision.
const THETA13: f64 = 5.371920351148152;

/// Exponent ledger values beyond this cannot be materialized in f64.
const MAX_MATERIALIZABLE_EXP: f64 = 700.0;

pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("expm requires a square matrix".into()));
    }
    let n = a.nrows();
    let norm1 = a.norm_one();
    let s = if norm1 > THETA13 { (norm1 / THETA13).log2().ceil().max(0.0) as u32 } else { 0 };
    let scaled = a.scale(c(0.5f64.powi(s as i32), 0.0));

    let ident = CMatrix::identity(n);
    let a2 = scaled.matmul(&scaled);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);

    let b = &PADE13;
    let w1 = a6.scale(c(b[13], 0.0)).add(&a4.scale(c(b[11], 0.0))).add(&a2.scale(c(b[9], 0.0)));
    let w2 = a6
        .scale(c(b[7], 0.0))
        .add(&a4.scale(c(b[5], 0.0)))
        .add(&a2.scale(c(b[3], 0.0)))
        .add(&ident.scale(c(b[1], 0.0)));
    let u = scaled.matmul(&a6.matmul(&w1).add(&w2));

    let z1 = a6.scale(c(b[12], 0.0)).add(&a4.scale(c(b[10], 0.0))).add(&a2.scale(c(b[8], 0.0)));
    let z2 = a6
        .scale(c(b[6], 0.0))
        .add(&a4.scale(c(b[4], 0.0)))
        .add(&a2.scale(c(b[2], 0.0)))
        .add(&ident.scale(c(b[0], 0.0)));
    let v = a6.matmul(&z1).add(&z2);

    // (V - U) X = (V + U)
    let lhs = v.sub(&u);
    let rhs = v.add(&u);
    let mut x = Lu::factor(&lhs)?.solve_mat(&rhs)?;
    for _ in 0..s {
        x = x.matmul(&x);
    }
    Ok(x)
}

/// Flow evaluator for x' = A x. Precomputes the spectral abscissa once so
/// repeated applications at different times stay overflow-safe.
pub struct Flow {
    a: CMatrix,
    abscissa: f64,
}

impl Flow {
    pub fn new(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch("flow requires a square matrix".into()));
        }
        let abscissa = if a.nrows() == 0 {
            0.0
        } else {
            schur(a)?.eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
        };
        Ok(Flow { a: a.clone(), abscissa })
    }

    pub fn abscissa(&self) -> f64 {
        self.abscissa
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.a
    }

    /// Unit direction of e^{At} x0 together with log ||e^{At} x0||.
    /// Never overflows; a zero initial state reports a -inf ledger.
    pub fn apply_normalized(&self, t: f64, x0: &CVector) -> Result<(CVector, f64)> {
        if x0.dim() != self.a.nrows() {
            return Err(Error::DimensionMismatch("flow state".into()));
        }
        if !t.is_finite() {
            return Err(Error::NonFinite("flow time".into()));
        }
        let shifted = self.a.shifted(c(self.abscissa, 0.0));
        let y = expm(&shifted.scale(c(t, 0.0)))?.matvec(x0);
        let ny = y.norm();
        if ny == 0.0 {
            return Ok((CVector::zeros(x0.dim()), f64::NEG_INFINITY));
        }
        Ok((y.scale(c(1.0 / ny, 0.0)), self.abscissa * t + ny.ln()))
    }

    /// e^{At} x0 as a concrete vector; `Overflow` if the magnitude ledger
    /// exceeds what f64 can hold.
    pub fn apply(&self, t: f64, x0: &CVector) -> Result<CVector> {
        let (dir, log_mag) = self.apply_normalized(t, x0)?;
        if log_mag > MAX_MATERIALIZABLE_EXP {
            return Err(Error::Overflow { exponent: log_mag });
        }
        if log_mag == f64::NEG_INFINITY {
            return Ok(dir); // zero state stays zero
        }
        Ok(dir.scale(c(log_mag.exp(), 0.0)))
    }
}

/// One-shot convenience: e^{At} x0.
pub fn flow_apply(a: &CMatrix, t: f64, x0: &CVector) -> Result<CVector> {
    Flow::new(a)?.apply(t, x0)
}
