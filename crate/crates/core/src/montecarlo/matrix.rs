use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{})", self.rows, self.cols)
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|z| *z *= s);
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

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("subtraction of differently shaped matrices".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let oc = other.cols;
        for i in 0..self.rows {
            let dst = &mut out.data[i * oc..(i + 1) * oc];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = &other.data[k * oc..(k + 1) * oc];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    /// `A·A*`, filled from its upper triangle.
    pub fn gram(&self) -> Self {
        let r = self.rows;
        let c = self.cols;
        let mut out = Self::zeros(r, r);
        for i in 0..r {
            let ri = &self.data[i * c..(i + 1) * c];
            for j in i..r {
                let rj = &self.data[j * c..(j + 1) * c];
                let s: Complex64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
                out.data[i * r + j] = s;
                out.data[j * r + i] = s.conj();
            }
        }
        for i in 0..r {
            out.data[i * r + i].im = 0.0;
        }
        out
    }

    /// `tr(A·B)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> Result<Complex64> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::DimensionMismatch("trace of product needs transposed shapes".into()));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.data[i * self.cols + k] * other.data[k * other.cols + i];
            }
        }
        Ok(acc)
    }

    /// Largest `|A − A*|` entry.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol * self.frobenius_norm().max(1.0)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Transpose on the second factor of `C^m ⊗ C^n`, with `(x, y)` stored at
/// index `x·n + y`: `B[xy, x'y'] = A[xy', x'y]`.
pub fn partial_transpose(a: &ComplexMatrix, m: usize, n: usize) -> Result<ComplexMatrix> {
    let d = m * n;
    if a.rows != d || a.cols != d {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not {m}·{n} square", a.rows, a.cols)));
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for x in 0..m {
        for y in 0..n {
            for xp in 0..m {
                for yp in 0..n {
                    out[(x * n + y, xp * n + yp)] = a[(x * n + yp, xp * n + y)];
                }
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix in increasing order.
pub fn empirical_spectrum(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let mut ev: Vec<f64> = a.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", a.rows, a.cols)));
    }
    let defect = a.hermitian_defect();
    if defect > 1e-9 * a.frobenius_norm().max(1.0) {
        return Err(Error::NonHermitian(defect));
    }
    Ok(())
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below
/// `1e-12·‖A‖`. Cubic per sweep; meant for small matrices and as a
/// reference for [`empirical_spectrum`].
pub fn jacobi_spectrum(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let n = a.rows;
    let mut m = a.clone();
    let tol = 1e-12 * a.frobenius_norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Phase e^{iφ} = apq/|apq| reduces the 2×2 block to a real
                // symmetric one.
                let phase = apq / mag;
                let theta = 0.5 * (2.0 * mag).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // A ← J*AJ with J_pp = J_qq = c, J_pq = s·phase, J_qp = −s·conj(phase).
                let jpq = phase * s;
                let jqp = -phase.conj() * s;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c + mkq * jqp;
                    m[(k, q)] = mkp * jpq + mkq * c;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c + mqk * jqp.conj();
                    m[(q, k)] = mpk * jpq.conj() + mqk * c;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}
