use crate::error::{Error, Result};
use num_complex::Complex;
use std::ops::{Index, IndexMut};

/// Scalar type used throughout: double-precision complex.
pub type C64 = Complex<f64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex vector. Construction rejects non-finite entries so that
/// NaN/Inf can never propagate silently into certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    data: Vec<C64>,
}

impl CVector {
    pub fn new(data: Vec<C64>) -> Result<Self> {
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("vector entry".into()));
        }
        Ok(CVector { data })
    }

    /// Construction from values already known to be finite.
    pub(crate) fn from_raw(data: Vec<C64>) -> Self {
        debug_assert!(data.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        CVector { data }
    }

    pub fn zeros(n: usize) -> Self {
        CVector { data: vec![C64::ZERO; n] }
    }

    /// Standard basis vector e_k.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[k] = C64::ONE;
        v
    }

    pub fn from_real(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C64> {
        self.data.iter()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Hermitian inner product, conjugate-linear in `self`.
    pub fn dot(&self, rhs: &CVector) -> C64 {
        debug_assert_eq!(self.dim(), rhs.dim());
        self.data.iter().zip(&rhs.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: C64) -> CVector {
        CVector::from_raw(self.data.iter().map(|z| z * s).collect())
    }

    pub fn add(&self, rhs: &CVector) -> CVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        CVector::from_raw(self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, rhs: &CVector) -> CVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        CVector::from_raw(self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect())
    }

    /// self + s * rhs
    pub fn axpy(&self, s: C64, rhs: &CVector) -> CVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        CVector::from_raw(self.data.iter().zip(&rhs.data).map(|(a, b)| a + s * b).collect())
    }

    pub fn normalized(&self) -> CVector {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(c(1.0 / n, 0.0))
        }
    }

    /// Rotate so the first entry of largest magnitude becomes real positive,
    /// and scale to unit norm. The canonical representative of the complex
    /// line through `self`; deterministic, hence usable in reports.
    pub fn phase_fixed(&self) -> CVector {
        let mut best = 0usize;
        let mut best_mag = -1.0;
        for (i, z) in self.data.iter().enumerate() {
            let m = z.norm();
            if m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        if best_mag <= 0.0 {
            return self.clone();
        }
        let phase = self.data[best] / best_mag;
        self.scale(phase.conj()).normalized()
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.re).collect()
    }

    pub fn imag_part(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.im).collect()
    }

    /// Largest |Im entry|; a reality check for vectors expected real.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Real embedding [Re x; Im x] of length 2n, used by the LP layer.
    pub fn realified(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.dim());
        out.extend(self.data.iter().map(|z| z.re));
        out.extend(self.data.iter().map(|z| z.im));
        out
    }
}

impl Index<usize> for CVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.data[i]
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(nrows: usize, ncols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(Error::DimensionMismatch(format!(
                "matrix storage {} != {}x{}",
                data.len(),
                nrows,
                ncols
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entry".into()));
        }
        Ok(CMatrix { nrows, ncols, data })
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CMatrix { nrows, ncols, data: vec![C64::ZERO; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(nrows, ncols, rows.concat())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect();
        Self::from_rows(&complex)
    }

    pub fn from_cols(cols: &[CVector]) -> Result<Self> {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, |v| v.dim());
        if cols.iter().any(|v| v.dim() != nrows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = Self::zeros(nrows, ncols);
        for (j, v) in cols.iter().enumerate() {
            for i in 0..nrows {
                m[(i, j)] = v[i];
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn col(&self, j: usize) -> CVector {
        CVector::from_raw((0..self.nrows).map(|i| self[(i, j)]).collect())
    }

    pub fn set_col(&mut self, j: usize, v: &CVector) {
        debug_assert_eq!(v.dim(), self.nrows);
        for i in 0..self.nrows {
            self[(i, j)] = v[i];
        }
    }

    pub fn matvec(&self, x: &CVector) -> CVector {
        debug_assert_eq!(self.ncols, x.dim());
        let mut out = vec![C64::ZERO; self.nrows];
        for i in 0..self.nrows {
            let row = self.row(i);
            let mut acc = C64::ZERO;
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            out[i] = acc;
        }
        CVector::from_raw(out)
    }

    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        debug_assert_eq!(self.ncols, rhs.nrows);
        let mut out = CMatrix::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let aik = self[(i, k)];
                if aik == C64::ZERO {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.ncols..(i + 1) * rhs.ncols];
                for (o, r) in orow.iter_mut().zip(rrow.iter()) {
                    *o += aik * r;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        debug_assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        CMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        debug_assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        CMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// A - mu * I
    pub fn shifted(&self, mu: C64) -> CMatrix {
        debug_assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.nrows {
            m[(i, i)] -= mu;
        }
        m
    }

    pub fn pow(&self, k: usize) -> CMatrix {
        debug_assert!(self.is_square());
        let mut acc = CMatrix::identity(self.nrows);
        for _ in 0..k {
            acc = acc.matmul(self);
        }
        acc
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.ncols)
            .map(|j| (0..self.nrows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn real_part(&self) -> CMatrix {
        CMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(|z| c(z.re, 0.0)).collect(),
        }
    }

    pub fn imag_part(&self) -> CMatrix {
        CMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(|z| c(z.im, 0.0)).collect(),
        }
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &self.data[i * self.ncols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.data[i * self.ncols + j]
    }
}
