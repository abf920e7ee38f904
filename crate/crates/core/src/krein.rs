//! Indefinite inner product spaces.
//!
//! A Krein space here is a finite-dimensional space with an invertible
//! hermitian Gram form `(u, v) = u† G v`. Splitting along the sign of the
//! spectrum gives the fundamental symmetry `J = U·sign(Λ)·U†` with `J² = id`,
//! and `⟨u, v⟩_J = (u, J v)` is positive definite — the Hilbert-space norm
//! hiding inside the indefinite one.
//!
//! The Krein adjoint `A^× ` is defined by `(A u, v) = (u, A^× v)`. For the
//! canonical form `G = J = diag(±1)` it is the involution `J A† J`; a general
//! Gram form is reduced to canonical shape by the congruence
//! `S = |Λ|^{1/2} U†` (so `G = S† J_c S`), the adjoint is taken in that frame
//! and mapped back. Operators that are Krein-self-adjoint without being
//! hermitian are the point of the construction — see the γ⁰/γ¹ pair in the
//! tests.
//!
//! Which J to prefer when several fundamental symmetries exist is an open
//! question; this module always picks the spectral one above and exposes the
//! signature so callers can tell what they got.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{eig_hermitian, operator_norm, ComplexMatrix, HermitianMatrix};

/// An indefinite inner product space with its fundamental symmetry.
#[derive(Clone, Debug)]
pub struct KreinSpace {
    gram: HermitianMatrix,
    j: HermitianMatrix,
    signature: (usize, usize),
    /// Congruence to canonical coordinates: `G = S† J_c S`.
    s: ComplexMatrix,
    s_inv: ComplexMatrix,
    /// Signs of the Gram spectrum in the sorted eigenbasis (−1s first).
    canonical_signs: Vec<f64>,
}

impl KreinSpace {
    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn gram(&self) -> &HermitianMatrix {
        &self.gram
    }

    /// The fundamental symmetry `J = U·sign(Λ)·U†`.
    pub fn j(&self) -> &HermitianMatrix {
        &self.j
    }

    /// (n_plus, n_minus) — counts of positive and negative Gram eigenvalues.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }
}

/// Smallest |eigenvalue| below `SINGULAR_TOL · max|eigenvalue|` rejects the
/// form as singular.
pub const SINGULAR_TOL: f64 = 1e-10;

/// Builds the Krein space of an invertible hermitian Gram form: fundamental
/// symmetry, signature, and the canonical congruence frame.
///
/// For `gram = diag(±1, ...)` the symmetry equals the Gram form itself.
pub fn fundamental_symmetry(gram: HermitianMatrix) -> Result<KreinSpace> {
    let eig = eig_hermitian(&gram)?;
    let scale = eig
        .values
        .iter()
        .map(|v| v.abs())
        .fold(0.0f64, f64::max);
    let min_abs = eig
        .values
        .iter()
        .map(|v| v.abs())
        .fold(f64::INFINITY, f64::min);
    if scale == 0.0 || min_abs <= SINGULAR_TOL * scale {
        return Err(Error::SingularForm(format!(
            "|λ|_min = {min_abs:.3e} vs scale {scale:.3e}"
        )));
    }
    let j = HermitianMatrix::from_complex(&eig.apply(f64::signum))?;
    let n_minus = eig.values.iter().filter(|&&v| v < 0.0).count();
    let n_plus = gram.dim() - n_minus;

    // S = |Λ|^{1/2} U†, so that S† J_c S = U Λ U† = G.
    let n = gram.dim();
    let u_adj = eig.vectors.adjoint();
    let mut s = ComplexMatrix::zeros(n, n);
    let mut s_inv = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let root = eig.values[i].abs().sqrt();
        for k in 0..n {
            s.set(i, k, u_adj.get(i, k) * root);
            // S⁻¹ = U |Λ|^{-1/2}
            s_inv.set(k, i, eig.vectors.get(k, i) / root);
        }
    }
    let canonical_signs = eig.values.iter().map(|v| v.signum()).collect();

    let space = KreinSpace {
        gram,
        j,
        signature: (n_plus, n_minus),
        s,
        s_inv,
        canonical_signs,
    };
    debug_assert!(space_invariants_hold(&space));
    Ok(space)
}

#[cfg(debug_assertions)]
fn space_invariants_hold(space: &KreinSpace) -> bool {
    let n = space.dim();
    let j = space.j.to_complex();
    let j2 = j.mul(&j).expect("square");
    let mut ok = true;
    for i in 0..n {
        for k in 0..n {
            let expect = if i == k { 1.0 } else { 0.0 };
            ok &= (j2.get(i, k) - Complex64::new(expect, 0.0)).norm() < 1e-9;
        }
    }
    ok
}

#[cfg(not(debug_assertions))]
fn space_invariants_hold(_space: &KreinSpace) -> bool {
    true
}

/// The J-inner product `⟨u, v⟩_J = u† · G · J · v`; positive definite.
pub fn j_inner(space: &KreinSpace, u: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
    let n = space.dim();
    if u.len() != n || v.len() != n {
        return Err(Error::InvalidInput("vector length mismatch".into()));
    }
    let gj = space.gram.to_complex().mul(&space.j.to_complex())?;
    let gjv = gj.mul_vec(v)?;
    Ok(u.iter().zip(&gjv).map(|(a, b)| a.conj() * b).sum())
}

/// The Krein adjoint `A^×` with `(A u, v) = (u, A^× v)` for the indefinite
/// product. Computed as `J_c A_c† J_c` in the canonical congruence frame and
/// mapped back; an involution that reverses products.
pub fn krein_adjoint(space: &KreinSpace, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = space.dim();
    if !a.is_square() || a.rows() != n {
        return Err(Error::InvalidInput(format!(
            "operator must be {n}x{n}, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.all_finite() {
        return Err(Error::InvalidInput("non-finite entries".into()));
    }
    // A_c = S A S⁻¹
    let a_c = space.s.mul(a)?.mul(&space.s_inv)?;
    // J_c A_c† J_c with J_c diagonal ±1.
    let mut adj_c = a_c.adjoint();
    for i in 0..n {
        for k in 0..n {
            let sign = space.canonical_signs[i] * space.canonical_signs[k];
            adj_c.set(i, k, adj_c.get(i, k) * sign);
        }
    }
    // Back to the original frame: A^× = S⁻¹ (J_c A_c† J_c) S.
    space.s_inv.mul(&adj_c)?.mul(&space.s)
}

/// `A = A^×` up to `1e-9 · scale`.
pub fn is_krein_selfadjoint(space: &KreinSpace, a: &ComplexMatrix) -> Result<bool> {
    let adj = krein_adjoint(space, a)?;
    let gap = operator_norm(&a.sub(&adj)?)?;
    let scale = a.max_abs().max(1.0);
    Ok(gap <= 1e-9 * scale)
}

/// Random invertible hermitian Gram form: a random hermitian matrix with its
/// spectrum pushed away from zero (|λ| ≥ 0.5), keeping random eigenvectors
/// and an indefinite signature with high probability.
pub fn random_invertible_gram<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    let h = HermitianMatrix::random(dim, rng);
    let eig = eig_hermitian(&h).expect("random hermitian");
    let pushed = eig.apply(|l| {
        let s = if l == 0.0 { 1.0 } else { l.signum() };
        s * l.abs().max(0.5)
    });
    HermitianMatrix::from_complex(&pushed).expect("spectral rebuild stays hermitian")
}

/// Wire format: Gram entries as [re, im] pairs, row-major, plus signature.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KreinFile {
    pub dim: usize,
    pub gram: Vec<[f64; 2]>,
    pub signature: (usize, usize),
}

impl KreinFile {
    pub fn from_space(space: &KreinSpace) -> Self {
        let n = space.dim();
        let mut gram = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                let z = space.gram().get(i, k);
                gram.push([z.re, z.im]);
            }
        }
        KreinFile {
            dim: n,
            gram,
            signature: space.signature(),
        }
    }

    /// Rebuilds the space from the stored Gram form; the stored signature is
    /// cross-checked against the recomputed one.
    pub fn into_space(self) -> Result<KreinSpace> {
        if self.gram.len() != self.dim * self.dim {
            return Err(Error::InvalidInput(format!(
                "gram has {} entries, expected {}",
                self.gram.len(),
                self.dim * self.dim
            )));
        }
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let [re, im] = self.gram[i * self.dim + k];
                m.set(i, k, Complex64::new(re, im));
            }
        }
        let space = fundamental_symmetry(HermitianMatrix::from_complex(&m)?)?;
        if space.signature() != self.signature {
            return Err(Error::InvalidInput(format!(
                "stored signature {:?} does not match recomputed {:?}",
                self.signature,
                space.signature()
            )));
        }
        Ok(space)
    }
}
