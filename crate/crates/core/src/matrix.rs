//! Dense hermitian linear algebra kernel.
//!
//! Everything downstream (seminorms, matrix absolute values, Krein
//! symmetries) runs through [`eig_hermitian`], a cyclic Jacobi
//! eigendecomposition for complex hermitian matrices. Jacobi is chosen over a
//! faster factorisation because every case in this crate is desk scale
//! (dim ≤ 64) and the deterministic sweep order gives bit-reproducible
//! results across runs and platforms.
//!
//! Tolerances scale with `dim · max|entry|` so checks stay meaningful under
//! rescaling of the input.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Asymmetry above `HERMITICITY_TOL · max|entry|` is rejected rather than
/// repaired; silent symmetrisation would hide caller bugs.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// A dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidInput("matrix needs at least one row".into()));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged or empty rows".into()));
        }
        Ok(ComplexMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Real entries convenience constructor.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        ComplexMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &ComplexMatrix,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidInput("shape mismatch".into()));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// `self · v` for a column vector.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::InvalidInput("vector length mismatch".into()));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// A complex hermitian matrix: `entry(i,j) = conj(entry(j,i))`, real diagonal.
///
/// Hermiticity is exact after construction: inputs within [`HERMITICITY_TOL`]
/// of hermitian are exactified by averaging with their adjoint, anything
/// worse is rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn from_complex(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput("hermitian matrix must be square".into()));
        }
        if !m.all_finite() {
            return Err(Error::InvalidInput("non-finite entries".into()));
        }
        let n = m.rows();
        let scale = m.max_abs();
        let tol = HERMITICITY_TOL * scale;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let a = m[(i, j)];
                let b = m[(j, i)];
                let gap = (a - b.conj()).norm();
                if gap > tol {
                    return Err(Error::InvalidInput(format!(
                        "asymmetry {gap:.3e} at ({i},{j}) exceeds {tol:.3e}"
                    )));
                }
                let avg = (a + b.conj()) * 0.5;
                let avg = if i == j {
                    Complex64::new(avg.re, 0.0)
                } else {
                    avg
                };
                data[i * n + j] = avg;
                data[j * n + i] = avg.conj();
            }
        }
        Ok(HermitianMatrix { dim: n, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        HermitianMatrix::from_complex(&ComplexMatrix::from_real_rows(rows)?)
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n > 0);
        let mut m = ComplexMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        HermitianMatrix {
            dim: n,
            data: m.data,
        }
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix::diag(&vec![1.0; n])
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix::diag(&vec![0.0; n])
    }

    /// Random hermitian matrix with entries of magnitude O(1); exact by
    /// construction.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            for j in (i + 1)..dim {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        HermitianMatrix { dim, data: m.data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.dim,
            cols: self.dim,
            data: self.data.clone(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        HermitianMatrix::from_complex(&self.to_complex().add(&other.to_complex())?)
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        HermitianMatrix::from_complex(&self.to_complex().sub(&other.to_complex())?)
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }
}

/// Eigendecomposition of a hermitian matrix: `values` ascending, `vectors`
/// holds the unit eigenvector for `values[k]` in column k.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// Rebuilds `V · diag(g(λ)) · V†` — the spectral function calculus.
    pub fn apply(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let gk = g(self.values[k]);
            if gk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * gk;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Cyclic Jacobi eigendecomposition of a complex hermitian matrix.
///
/// Sweeps the strict upper triangle in row-major order, annihilating each
/// off-diagonal entry with a phase rotation followed by a real Jacobi
/// rotation. Converges quadratically; the fixed sweep order makes the result
/// deterministic. Within a degenerate eigenvalue the returned basis is
/// solver-dependent — downstream code must use spectral projections only.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<Eigen> {
    let n = a.dim;
    let mut m = a.to_complex();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.max_abs();
    if scale == 0.0 || n == 1 {
        let values = (0..n).map(|i| m[(i, i)].re).collect();
        return Ok(Eigen { values, vectors: v });
    }
    let stop = 1e-14 * scale;
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut max_off = 0.0f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                max_off = max_off.max(mag);
                if mag <= stop * 1e-2 {
                    continue;
                }
                rotate(&mut m, &mut v, p, q, apq, mag);
            }
        }
        if max_off <= stop {
            break;
        }
    }
    // Sort ascending; stable in the original index order for ties.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| m[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, new_col)] = v[(i, old_col)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// One Jacobi step: a unitary rotation in the (p,q) plane that zeroes m[p][q].
///
/// The rotation is `U = P·J` with `P = diag(1, e^{-iθ})` absorbing the phase
/// of m[p][q] and `J` the real symmetric Schur rotation.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, apq: Complex64, mag: f64) {
    let n = m.rows();
    let phase = apq / mag; // e^{iθ}
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Real Schur rotation for [[app, mag], [mag, aqq]].
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // Column p/q entries of U (all other columns are identity):
    //   U[p][p] = c           U[p][q] = s
    //   U[q][p] = -s·conj(phase)   U[q][q] = c·conj(phase)
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;

    // m ← U† m U, applied as column then row updates.
    for i in 0..n {
        let mip = m[(i, p)];
        let miq = m[(i, q)];
        m[(i, p)] = mip * upp + miq * uqp;
        m[(i, q)] = mip * upq + miq * uqq;
    }
    for j in 0..n {
        let mpj = m[(p, j)];
        let mqj = m[(q, j)];
        m[(p, j)] = upp.conj() * mpj + uqp.conj() * mqj;
        m[(q, j)] = upq.conj() * mpj + uqq.conj() * mqj;
    }
    // Clean the entries the rotation is designed to fix.
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * upp + viq * uqp;
        v[(i, q)] = vip * upq + viq * uqq;
    }
}

/// Largest singular value, `sqrt(λ_max(A†A))`.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.all_finite() {
        return Err(Error::InvalidInput("non-finite entries".into()));
    }
    let ata = a.adjoint().mul(a)?;
    let herm = HermitianMatrix::from_complex(&ata)?;
    let eig = eig_hermitian(&herm)?;
    let top = eig.values.last().copied().unwrap_or(0.0);
    Ok(top.max(0.0).sqrt())
}

/// `|A| = V·|Λ|·V†` from the eigendecomposition; positive semidefinite and
/// squares to A².
pub fn matrix_abs(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(a)?;
    HermitianMatrix::from_complex(&eig.apply(f64::abs))
}

/// True iff the smallest eigenvalue is ≥ −tol.
pub fn is_psd(a: &HermitianMatrix, tol: f64) -> Result<bool> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput("tolerance must be non-negative".into()));
    }
    let eig = eig_hermitian(a)?;
    Ok(eig.values.first().map_or(true, |&min| min >= -tol))
}
