//! Small dense complex linear algebra.
//!
//! Everything here is sized for the antenna counts of a relay network
//! (a handful of rows and columns), so the kernels are plain O(n³) loops
//! over a row-major `Vec<Complex64>`.

use std::f64::consts::LN_2;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Relative tolerance for the Hermitian check in [`logdet_identity_plus`].
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries given for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real row slices. All rows must have equal length.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidArgument(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::InvalidArgument(
                "vstack: column count differs".into(),
            ));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `self` to the left of `other`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::InvalidArgument("hstack: row count differs".into()));
        }
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        Ok(out)
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry of |M - M†|; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// (M + M†)/2. Panics on non-square input.
    pub fn symmetrized(&self) -> Self {
        assert!(self.is_square(), "symmetrize requires a square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    /// Max entrywise distance to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Draws a matrix with i.i.d. CN(0, 1) entries: real and imaginary parts
/// are independent N(0, 1/2).
pub fn sample_complex_gaussian<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!(
            "gaussian sample needs positive dimensions, got {rows}x{cols}"
        )));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let data = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        })
        .collect();
    Ok(ComplexMatrix { rows, cols, data })
}

/// H·H†.
pub fn gram(h: &ComplexMatrix) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(h.rows, h.rows);
    for i in 0..h.rows {
        for j in 0..=i {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..h.cols {
                acc += h[(i, k)] * h[(j, k)].conj();
            }
            g[(i, j)] = acc;
            g[(j, i)] = acc.conj();
        }
        // exact real diagonal
        g[(i, i)].im = 0.0;
    }
    g
}

/// H†·H.
pub fn gram_adjoint(h: &ComplexMatrix) -> ComplexMatrix {
    gram(&h.adjoint())
}

/// log₂ det(I + M) for Hermitian PSD `M`.
///
/// `M` is symmetrized before a Cholesky factorization of `I + M`. The
/// Hermitian check is relative: `max|M − M†| ≤ 1e-9 · max(1, max|M|)`.
pub fn logdet_identity_plus(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::InvalidArgument(format!(
            "log-det needs a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    let defect = m.hermitian_defect();
    let scale = m.max_abs().max(1.0);
    if !(defect <= HERMITIAN_TOL * scale) {
        return Err(Error::NumericDomain(format!(
            "matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    let mut a = m.symmetrized();
    for i in 0..a.rows {
        a[(i, i)] += 1.0;
    }
    cholesky_log2_det(a.rows, &mut a.data)
        .ok_or_else(|| Error::NumericDomain("I + M is not positive definite".into()))
}

/// In-place Cholesky of a Hermitian positive definite row-major `n×n`
/// buffer, reading only the lower triangle. Returns log₂ det, or `None`
/// if a pivot is not positive.
pub(crate) fn cholesky_log2_det(n: usize, a: &mut [Complex64]) -> Option<f64> {
    let mut log_det = 0.0;
    for j in 0..n {
        let mut d = a[j * n + j].re;
        for k in 0..j {
            d -= a[j * n + k].norm_sqr();
        }
        if !(d > 0.0) {
            return None;
        }
        let l_jj = d.sqrt();
        a[j * n + j] = Complex64::new(l_jj, 0.0);
        log_det += d.ln();
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k].conj();
            }
            a[i * n + j] = s / l_jj;
        }
    }
    Some(log_det / LN_2)
}

/// log₂ det(I + Σ cᵢ·Gᵢ) for Hermitian PSD terms of equal size.
///
/// Hot path of the Monte Carlo estimators: no Hermitian check and no
/// allocation for sizes up to 8.
pub(crate) fn logdet_identity_plus_sum(terms: &[(f64, &ComplexMatrix)]) -> f64 {
    let n = terms[0].1.rows;
    let mut stack = [Complex64::new(0.0, 0.0); 64];
    let mut heap;
    let buf: &mut [Complex64] = if n * n <= stack.len() {
        &mut stack[..n * n]
    } else {
        heap = vec![Complex64::new(0.0, 0.0); n * n];
        &mut heap
    };
    for i in 0..n {
        buf[i * n + i] = Complex64::new(1.0, 0.0);
    }
    for &(c, g) in terms {
        debug_assert_eq!(g.rows, n);
        for i in 0..n {
            for j in 0..=i {
                buf[i * n + j] += g.data[i * n + j] * c;
            }
        }
    }
    cholesky_log2_det(n, buf).unwrap_or(f64::NAN)
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// in descending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::InvalidArgument(
            "eigenvalues need a square matrix".into(),
        ));
    }
    let n = m.rows;
    let mut a = m.symmetrized();
    let total: f64 = a.frobenius_norm_sq();
    if total == 0.0 {
        return Ok(vec![0.0; n]);
    }
    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= 1e-30 * total {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = D·R with D = diag(1, conj(phase)) on (p, q)
                let j_pp = Complex64::new(c, 0.0);
                let j_pq = Complex64::new(s, 0.0);
                let j_qp = -phase.conj() * s;
                let j_qq = phase.conj() * c;
                // A <- A·J (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j_pp + akq * j_qp;
                    a[(k, q)] = akp * j_pq + akq * j_qq;
                }
                // A <- J†·A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
                    a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(h: &ComplexMatrix) -> Vec<f64> {
    let g = if h.rows <= h.cols {
        gram(h)
    } else {
        gram_adjoint(h)
    };
    hermitian_eigenvalues(&g)
        .expect("gram matrix is square")
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect()
}
