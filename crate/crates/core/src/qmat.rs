//! Dense complex linear algebra on small Hermitian operators.
//!
//! Operators on a bipartite space follow the convention that system A is the
//! first tensor factor, so the basis index of `|a>|b>` is `a * d_b + b`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;

/// Relative eigenvalue threshold below which a direction counts as outside the support.
pub const SUPPORT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QmatError {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteDims {
    pub fn new(d_a: usize, d_b: usize) -> Self {
        Self { d_a, d_b }
    }

    pub fn total(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn swapped(&self) -> Self {
        Self { d_a: self.d_b, d_b: self.d_a }
    }

    fn check(&self, m: &CMatrix) -> Result<(), QmatError> {
        if self.d_a == 0 || self.d_b == 0 {
            return Err(QmatError::InvalidDimensions("zero subsystem dimension".into()));
        }
        if m.nrows() != self.total() || m.ncols() != self.total() {
            return Err(QmatError::InvalidDimensions(format!(
                "operator is {}x{}, expected {}x{} for d_A={} d_B={}",
                m.nrows(),
                m.ncols(),
                self.total(),
                self.total(),
                self.d_a,
                self.d_b
            )));
        }
        Ok(())
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn zeros(r: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(r, cols)
}

pub fn diag(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { real(values[i]) } else { real(0.0) })
}

/// Real matrix given row-major.
pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
    let r = rows.len();
    let cols = if r == 0 { 0 } else { rows[0].len() };
    CMatrix::from_fn(r, cols, |i, j| real(rows[i][j]))
}

/// Computational basis vector `|i>` of dimension `d`.
pub fn basis_ket(d: usize, i: usize) -> CMatrix {
    let mut v = CMatrix::zeros(d, 1);
    v[(i, 0)] = real(1.0);
    v
}

pub fn ket(amplitudes: &[Complex64]) -> CMatrix {
    CMatrix::from_column_slice(amplitudes.len(), 1, amplitudes)
}

pub fn projector(ket: &CMatrix) -> CMatrix {
    ket * ket.adjoint()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}

/// `Re Tr[a b]` without forming the product.
pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            let x = a[(i, k)] * b[(k, i)];
            acc += x.re;
        }
    }
    acc
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn is_hermitian(m: &CMatrix, rel_tol: f64) -> bool {
    m.is_square() && hermiticity_defect(m) <= rel_tol * max_abs(m).max(f64::MIN_POSITIVE)
}

/// Hermiticity check used by the spectral routines; scaled by the largest entry.
pub fn ensure_hermitian(m: &CMatrix) -> Result<(), QmatError> {
    if !m.is_square() {
        return Err(QmatError::InvalidDimensions(format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    if !is_finite(m) {
        return Err(QmatError::NonFinite);
    }
    let defect = hermiticity_defect(m);
    let scale = max_abs(m).max(1.0);
    if defect > 1e-8 * scale {
        return Err(QmatError::NotHermitian(defect));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors matching `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Result<Self, QmatError> {
        ensure_hermitian(m)?;
        let n = m.nrows();
        if n == 0 {
            return Ok(Self { values: vec![], vectors: CMatrix::zeros(0, 0) });
        }
        let eig = SymmetricEigen::new(hermitian_part(m));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
        Ok(Self { values, vectors })
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Rebuild `sum_i g(lambda_i) |v_i><v_i|`.
    pub fn map<F: Fn(f64) -> f64>(&self, g: F) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (col, &lam) in self.values.iter().enumerate() {
            let w = g(lam);
            for r in 0..n {
                scaled[(r, col)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

pub fn eigenvalues(m: &CMatrix) -> Result<Vec<f64>, QmatError> {
    Ok(HermitianEigen::new(m)?.values)
}

pub fn min_eigenvalue(m: &CMatrix) -> Result<f64, QmatError> {
    Ok(HermitianEigen::new(m)?.min())
}

pub fn max_eigenvalue(m: &CMatrix) -> Result<f64, QmatError> {
    Ok(HermitianEigen::new(m)?.max())
}

pub fn partial_trace(m: &CMatrix, dims: BipartiteDims, which: Subsystem) -> Result<CMatrix, QmatError> {
    dims.check(m)?;
    let (da, db) = (dims.d_a, dims.d_b);
    Ok(match which {
        Subsystem::B => CMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Subsystem::A => CMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()),
    })
}

pub fn partial_transpose(m: &CMatrix, dims: BipartiteDims, which: Subsystem) -> Result<CMatrix, QmatError> {
    dims.check(m)?;
    let (da, db) = (dims.d_a, dims.d_b);
    let n = da * db;
    let mut out = CMatrix::zeros(n, n);
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    let (ra, rb, ca, cb) = match which {
                        Subsystem::A => (a2, b, a, b2),
                        Subsystem::B => (a, b2, a2, b),
                    };
                    out[(ra * db + rb, ca * db + cb)] = m[(a * db + b, a2 * db + b2)];
                }
            }
        }
    }
    Ok(out)
}

/// Swap the tensor factors: an operator on A⊗B becomes one on B⊗A.
pub fn swap_systems(m: &CMatrix, dims: BipartiteDims) -> Result<CMatrix, QmatError> {
    dims.check(m)?;
    let (da, db) = (dims.d_a, dims.d_b);
    Ok(CMatrix::from_fn(da * db, da * db, |r, col| {
        let (rb, ra) = (r / da, r % da);
        let (cb, ca) = (col / da, col % da);
        m[(ra * db + rb, ca * db + cb)]
    }))
}

fn check_psd(eig: &HermitianEigen, tol: f64) -> Result<(), QmatError> {
    let scale = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let floor = -tol * scale.max(f64::MIN_POSITIVE);
    let lo = eig.min();
    if lo < floor {
        return Err(QmatError::NotPsd(lo));
    }
    Ok(())
}

/// Apply `f` to the eigenvalues of a PSD matrix that lie strictly above
/// `tol * lambda_max`; the remaining eigenvalues map to zero.
pub fn func_on_support<F: Fn(f64) -> f64>(m: &CMatrix, f: F, tol: f64) -> Result<CMatrix, QmatError> {
    let eig = HermitianEigen::new(m)?;
    check_psd(&eig, tol)?;
    let cut = tol * eig.max().max(0.0);
    Ok(eig.map(|x| if x > cut && x > 0.0 { f(x) } else { 0.0 }))
}

pub fn support_projector(m: &CMatrix, tol: f64) -> Result<CMatrix, QmatError> {
    func_on_support(m, |_| 1.0, tol)
}

pub fn rank(m: &CMatrix, tol: f64) -> Result<usize, QmatError> {
    let eig = HermitianEigen::new(m)?;
    let cut = tol * eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(eig.values.iter().filter(|v| v.abs() > cut).count())
}

/// Largest eigenvalue magnitude of a Hermitian matrix.
pub fn spectral_norm(m: &CMatrix) -> Result<f64, QmatError> {
    let eig = HermitianEigen::new(m)?;
    Ok(eig.max().abs().max(eig.min().abs()))
}

/// Sum of singular values of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &CMatrix) -> Result<f64, QmatError> {
    Ok(eigenvalues(m)?.iter().map(|v| v.abs()).sum())
}

/// Trace norm of a general square matrix, via `sqrt(X^† X)`.
pub fn trace_norm(m: &CMatrix) -> Result<f64, QmatError> {
    let g = m.adjoint() * m;
    Ok(eigenvalues(&g)?.iter().map(|v| v.max(0.0).sqrt()).sum())
}

pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix, QmatError> {
    func_on_support(m, f64::sqrt, SUPPORT_TOL)
}

/// Pseudo-inverse square root on the support.
pub fn inv_sqrt_psd(m: &CMatrix) -> Result<CMatrix, QmatError> {
    func_on_support(m, |x| 1.0 / x.sqrt(), SUPPORT_TOL)
}

/// Diagonal of a matrix as reals.
pub fn real_diagonal(m: &CMatrix) -> Vec<f64> {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)].re).collect()
}

pub fn is_diagonal(m: &CMatrix, tol: f64) -> bool {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && m[(i, j)].norm() > tol {
                return false;
            }
        }
    }
    true
}

/// JSON exchange form: `{"rows": n, "cols": m, "re": [[...]], "im": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        let re = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect()).collect();
        Self { rows: m.nrows(), cols: m.ncols(), re, im }
    }
}

impl TryFrom<&MatrixJson> for CMatrix {
    type Error = QmatError;

    fn try_from(j: &MatrixJson) -> Result<Self, Self::Error> {
        let shape_ok = j.re.len() == j.rows
            && j.im.len() == j.rows
            && j.re.iter().all(|r| r.len() == j.cols)
            && j.im.iter().all(|r| r.len() == j.cols);
        if !shape_ok || j.rows == 0 || j.cols == 0 {
            return Err(QmatError::InvalidDimensions(format!("matrix JSON does not match declared shape {}x{}", j.rows, j.cols)));
        }
        let m = CMatrix::from_fn(j.rows, j.cols, |r, col| c(j.re[r][col], j.im[r][col]));
        if !is_finite(&m) {
            return Err(QmatError::NonFinite);
        }
        Ok(m)
    }
}

pub mod serde_cmatrix {
    //! `#[serde(with = ...)]` adapter for fields holding a [`CMatrix`].
    use super::{CMatrix, MatrixJson};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson::from(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        CMatrix::try_from(&j).map_err(serde::de::Error::custom)
    }
}
