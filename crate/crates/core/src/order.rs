//! Causality as order: finite posets, isotone functions, and the matrix
//! meet/join cone axioms.
//!
//! The recovery statement driving this module: on a completely separated
//! ordered space the isotone functions determine the order,
//! `x ≤ y ⟺ ∀f: f(x) ≤ f(y)`. On a finite poset the up-set indicators are a
//! canonical separating family, so recovery is exact and testable by brute
//! force. The noncommutative counterpart replaces isotone functions with a
//! closed convex cone of hermitian elements containing the constants and
//! stable under
//!
//! ```text
//! a ∧ b = (a+b)/2 − |a−b|/2        a ∨ b = (a+b)/2 + |a−b|/2
//! ```
//!
//! [`istar_axioms_check`] probes those axioms on a finitely generated cone.
//! Cone membership is decided by a non-negative least-squares fit over the
//! generators with residual threshold 1e-6 — solver-free, at the price of
//! being a certificate check rather than exact LP feasibility. Closedness is
//! vacuous in finite dimension and the dense-span axiom becomes full span;
//! both are reported as such instead of silently passed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitmat::BoolMatrix;
use crate::error::{Error, Result};
use crate::matrix::{matrix_abs, HermitianMatrix};

/// A finite poset: reflexive, antisymmetric, transitive boolean matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FinitePoset {
    leq: BoolMatrix,
}

impl FinitePoset {
    pub fn new(leq: BoolMatrix) -> Result<Self> {
        if leq.n() == 0 {
            return Err(Error::InvalidInput("poset needs at least one element".into()));
        }
        if !leq.is_reflexive() {
            return Err(Error::InvalidInput("order not reflexive".into()));
        }
        if !leq.is_antisymmetric() {
            return Err(Error::InvalidInput("order not antisymmetric".into()));
        }
        if !leq.is_transitive() {
            return Err(Error::InvalidInput("order not transitive".into()));
        }
        Ok(FinitePoset { leq })
    }

    /// Builds from covering pairs (i ≤ j edges): closes transitively, adds
    /// the diagonal, validates antisymmetry.
    pub fn from_cover_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = BoolMatrix::new(n);
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("pair ({i},{j}) out of range")));
            }
            m.set(i, j, true);
        }
        FinitePoset::new(m.transitive_closure().with_diagonal())
    }

    pub fn chain(n: usize) -> Self {
        let mut m = BoolMatrix::new(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, true);
            }
        }
        FinitePoset { leq: m }
    }

    pub fn antichain(n: usize) -> Self {
        FinitePoset {
            leq: BoolMatrix::new(n).with_diagonal(),
        }
    }

    /// Random poset: edges i → j with probability `edge_prob` under a random
    /// relabeling of a base linear order, then closed. Acyclic by
    /// construction, so always a valid order.
    pub fn random<R: Rng + ?Sized>(n: usize, edge_prob: f64, rng: &mut R) -> Self {
        let mut label: Vec<usize> = (0..n).collect();
        // Fisher-Yates with the caller's generator.
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            label.swap(i, j);
        }
        let mut m = BoolMatrix::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random_range(0.0..1.0) < edge_prob {
                    m.set(label[i], label[j], true);
                }
            }
        }
        FinitePoset {
            leq: m.transitive_closure().with_diagonal(),
        }
    }

    pub fn n(&self) -> usize {
        self.leq.n()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq.get(i, j)
    }

    pub fn matrix(&self) -> &BoolMatrix {
        &self.leq
    }

    /// Covering relation (transitive reduction minus the diagonal).
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq(i, j) {
                    continue;
                }
                let between = (0..n).any(|k| k != i && k != j && self.leq(i, k) && self.leq(k, j));
                if !between {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }
}

/// Wire format: element count plus the covering relation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetFile {
    pub n: usize,
    pub leq_pairs: Vec<(usize, usize)>,
}

impl PosetFile {
    pub fn from_poset(p: &FinitePoset) -> Self {
        PosetFile {
            n: p.n(),
            leq_pairs: p.cover_pairs(),
        }
    }

    pub fn into_poset(self) -> Result<FinitePoset> {
        FinitePoset::from_cover_pairs(self.n, &self.leq_pairs)
    }
}

/// A poset together with isotone functions on it; every member is validated
/// at construction.
#[derive(Clone, Debug)]
pub struct IsotoneFamily {
    pub poset: FinitePoset,
    pub functions: Vec<Vec<f64>>,
}

impl IsotoneFamily {
    pub fn new(poset: FinitePoset, functions: Vec<Vec<f64>>) -> Result<Self> {
        for (k, f) in functions.iter().enumerate() {
            if !is_isotone(f, &poset)? {
                return Err(Error::InvalidInput(format!("function {k} is not isotone")));
            }
        }
        Ok(IsotoneFamily { poset, functions })
    }
}

/// `x ≤ y ⇒ f(x) ≤ f(y)`, with slack 1e-12 for rounded inputs.
pub fn is_isotone(f: &[f64], poset: &FinitePoset) -> Result<bool> {
    if f.len() != poset.n() {
        return Err(Error::InvalidInput(format!(
            "function length {} does not match poset size {}",
            f.len(),
            poset.n()
        )));
    }
    for x in 0..poset.n() {
        for y in poset.matrix().row_iter(x) {
            if f[x] > f[y] + 1e-12 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The canonical separating family: for each element e, the 0/1 indicator of
/// its up-set `{z : e ≤ z}`.
pub fn upset_indicators(poset: &FinitePoset) -> IsotoneFamily {
    let n = poset.n();
    let functions = (0..n)
        .map(|e| {
            (0..n)
                .map(|z| if poset.leq(e, z) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    IsotoneFamily::new(poset.clone(), functions).expect("up-set indicators are isotone")
}

/// Order recovery: `recovered(x, y)` iff every family member has
/// `f(x) ≤ f(y)`. With the up-set indicators this reproduces the original
/// order exactly; with a non-separating family it is coarser.
pub fn order_from_functions(family: &IsotoneFamily) -> Result<BoolMatrix> {
    if family.functions.is_empty() {
        return Err(Error::InvalidInput("empty function family".into()));
    }
    let n = family.poset.n();
    let mut recovered = BoolMatrix::new(n);
    for x in 0..n {
        for y in 0..n {
            if family.functions.iter().all(|f| f[x] <= f[y]) {
                recovered.set(x, y, true);
            }
        }
    }
    Ok(recovered)
}

/// `a ∧ b = (a+b)/2 − |a−b|/2`.
pub fn meet(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    meet_join(a, b, -1.0)
}

/// `a ∨ b = (a+b)/2 + |a−b|/2`.
pub fn join(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    meet_join(a, b, 1.0)
}

fn meet_join(a: &HermitianMatrix, b: &HermitianMatrix, sign: f64) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let avg = a.add(b)?.scale(0.5);
    let abs = matrix_abs(&a.sub(b)?)?.scale(0.5 * sign);
    avg.add(&abs)
}

/// Finitely many hermitian generators of a candidate cone.
#[derive(Clone, Debug)]
pub struct ConeSample {
    pub dim: usize,
    pub generators: Vec<HermitianMatrix>,
}

impl ConeSample {
    pub fn new(dim: usize, generators: Vec<HermitianMatrix>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("cone needs at least one generator".into()));
        }
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(Error::InvalidInput("generator dimension mismatch".into()));
        }
        Ok(ConeSample { dim, generators })
    }
}

/// Residual threshold for the least-squares cone-membership certificate.
pub const CONE_FIT_TOL: f64 = 1e-6;

/// A meet/join stability failure: the combination of cone elements whose
/// meet or join could not be fitted back into the cone.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityFailure {
    pub trial: usize,
    pub operation: String,
    pub residual: f64,
}

/// Axiom report for a finitely generated hermitian cone.
///
/// `constants_pass` certifies the identity inside the cone; `convexity` is
/// structural (non-negative combinations of generators are in the cone by
/// construction); `stability_*` samples meets and joins of cone elements and
/// refits them; span fields compare the generators' real span against the
/// full hermitian space of dimension dim². `cone_axioms_pass` covers
/// constants + stability; `all_pass` additionally requires full span.
#[derive(Clone, Debug, Serialize)]
pub struct IstarReport {
    pub dim: usize,
    pub generator_count: usize,
    pub constants_pass: bool,
    pub constants_residual: f64,
    pub convexity: &'static str,
    pub stability_trials: usize,
    pub stability_failures: Vec<StabilityFailure>,
    pub span_rank: usize,
    pub span_expected: usize,
    pub span_full: bool,
    pub cone_axioms_pass: bool,
    pub all_pass: bool,
}

/// Checks the I*-cone axioms on the cone generated by `sample`:
/// constants membership, structural convexity, meet/join stability over
/// `trials` seeded pairs, and span rank against dim².
pub fn istar_axioms_check(sample: &ConeSample, trials: usize, seed: u64) -> Result<IstarReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be ≥ 1".into()));
    }
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let dim = sample.dim;
    let gen_vecs: Vec<Vec<f64>> = sample.generators.iter().map(hermitian_to_real_vec).collect();

    let identity_vec = hermitian_to_real_vec(&HermitianMatrix::identity(dim));
    let (_, constants_residual) = nnls(&gen_vecs, &identity_vec);
    let constants_pass = constants_residual <= CONE_FIT_TOL * (dim as f64).sqrt();

    let mut stability_failures = Vec::new();
    for trial in 0..trials {
        let a = random_cone_element(sample, &mut rng);
        let b = random_cone_element(sample, &mut rng);
        for (op, m) in [("meet", meet(&a, &b)?), ("join", join(&a, &b)?)] {
            let target = hermitian_to_real_vec(&m);
            let scale = target.iter().map(|v| v.abs()).fold(1.0, f64::max);
            let (_, residual) = nnls(&gen_vecs, &target);
            if residual > CONE_FIT_TOL * scale {
                stability_failures.push(StabilityFailure {
                    trial,
                    operation: op.to_string(),
                    residual,
                });
            }
        }
    }

    let span_rank = real_rank(&gen_vecs);
    let span_expected = dim * dim;
    let span_full = span_rank == span_expected;
    let cone_axioms_pass = constants_pass && stability_failures.is_empty();
    Ok(IstarReport {
        dim,
        generator_count: sample.generators.len(),
        constants_pass,
        constants_residual,
        convexity: "structural",
        stability_trials: trials,
        stability_failures,
        span_rank,
        span_expected,
        span_full,
        cone_axioms_pass,
        all_pass: cone_axioms_pass && span_full,
    })
}

fn random_cone_element<R: Rng + ?Sized>(sample: &ConeSample, rng: &mut R) -> HermitianMatrix {
    let mut acc = HermitianMatrix::zeros(sample.dim);
    for g in &sample.generators {
        let lambda: f64 = rng.random_range(0.0..1.0);
        acc = acc.add(&g.scale(lambda)).expect("same dim");
    }
    acc
}

/// Real coordinates of a hermitian matrix: diagonal, then re/im of the upper
/// triangle — dim² numbers, a linear isomorphism onto ℝ^{dim²}.
fn hermitian_to_real_vec(m: &HermitianMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut v = Vec::with_capacity(n * n);
    for i in 0..n {
        v.push(m.get(i, i).re);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let z = m.get(i, j);
            v.push(z.re);
            v.push(z.im);
        }
    }
    v
}

/// Rank of a set of real vectors by Gaussian elimination with partial
/// pivoting.
fn real_rank(vecs: &[Vec<f64>]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    let mut rows: Vec<Vec<f64>> = vecs.to_vec();
    let cols = rows[0].len();
    let scale = rows
        .iter()
        .flat_map(|r| r.iter().map(|v| v.abs()))
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let tol = 1e-9 * scale;
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len())
            .filter(|&r| rows[r][col].abs() > tol)
            .max_by(|&a, &b| rows[a][col].abs().partial_cmp(&rows[b][col].abs()).unwrap())
        else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col];
        for r in (rank + 1)..rows.len() {
            let factor = rows[r][col] / p;
            if factor != 0.0 {
                for c in col..cols {
                    let sub = factor * rows[rank][c];
                    rows[r][c] -= sub;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Lawson–Hanson non-negative least squares: minimizes `‖G·c − target‖` over
/// `c ≥ 0`, where column k of G is `columns[k]`. Returns the coefficients and
/// the final residual norm. Problem sizes here are tiny (a handful of
/// generators), so normal equations with Gaussian elimination are fine.
fn nnls(columns: &[Vec<f64>], target: &[f64]) -> (Vec<f64>, f64) {
    let k = columns.len();
    let m = target.len();
    let mut passive: Vec<bool> = vec![false; k];
    let mut coeff = vec![0.0f64; k];
    let residual_vec = |coeff: &[f64]| -> Vec<f64> {
        let mut r = target.to_vec();
        for (c, col) in coeff.iter().zip(columns) {
            if *c != 0.0 {
                for (ri, gi) in r.iter_mut().zip(col) {
                    *ri -= c * gi;
                }
            }
        }
        r
    };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target_scale = norm(target).max(1e-300);
    for _ in 0..(3 * k + 10) {
        let r = residual_vec(&coeff);
        if norm(&r) <= 1e-14 * target_scale {
            break;
        }
        // Most positive gradient among the active (zero) coefficients.
        let mut best = (usize::MAX, 1e-12 * target_scale);
        for j in 0..k {
            if !passive[j] {
                let g: f64 = columns[j].iter().zip(&r).map(|(a, b)| a * b).sum();
                if g > best.1 {
                    best = (j, g);
                }
            }
        }
        if best.0 == usize::MAX {
            break;
        }
        passive[best.0] = true;
        // Inner loop: solve the unconstrained LS on the passive set and clip
        // negative coordinates back out.
        loop {
            let active_set: Vec<usize> = (0..k).filter(|&j| passive[j]).collect();
            let sol = ls_solve(columns, target, &active_set, m);
            if sol.iter().all(|&v| v > 0.0) {
                coeff.fill(0.0);
                for (idx, &j) in active_set.iter().enumerate() {
                    coeff[j] = sol[idx];
                }
                break;
            }
            // Step toward sol until the first coordinate hits zero.
            let mut alpha = f64::INFINITY;
            for (idx, &j) in active_set.iter().enumerate() {
                if sol[idx] <= 0.0 {
                    let denom = coeff[j] - sol[idx];
                    if denom > 0.0 {
                        alpha = alpha.min(coeff[j] / denom);
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for (idx, &j) in active_set.iter().enumerate() {
                coeff[j] += alpha * (sol[idx] - coeff[j]);
                if coeff[j] <= 1e-14 * target_scale {
                    coeff[j] = 0.0;
                    passive[j] = false;
                }
            }
            if active_set.iter().all(|&j| !passive[j]) {
                break;
            }
        }
    }
    let res = norm(&residual_vec(&coeff));
    (coeff, res)
}

/// Unconstrained least squares on a column subset via normal equations.
fn ls_solve(columns: &[Vec<f64>], target: &[f64], subset: &[usize], m: usize) -> Vec<f64> {
    let k = subset.len();
    let mut ata = vec![0.0f64; k * k];
    let mut atb = vec![0.0f64; k];
    for (a, &ja) in subset.iter().enumerate() {
        for (b, &jb) in subset.iter().enumerate() {
            ata[a * k + b] = (0..m).map(|i| columns[ja][i] * columns[jb][i]).sum();
        }
        atb[a] = (0..m).map(|i| columns[ja][i] * target[i]).sum();
        ata[a * k + a] += 1e-12; // ridge against rank-deficient subsets
    }
    // Gaussian elimination with partial pivoting.
    let mut x = atb;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&a, &b| ata[a * k + col].abs().partial_cmp(&ata[b * k + col].abs()).unwrap())
            .unwrap();
        if ata[pivot * k + col].abs() < 1e-300 {
            continue;
        }
        for c in 0..k {
            ata.swap(col * k + c, pivot * k + c);
        }
        x.swap(col, pivot);
        for r in (col + 1)..k {
            let factor = ata[r * k + col] / ata[col * k + col];
            for c in col..k {
                let sub = factor * ata[col * k + c];
                ata[r * k + c] -= sub;
            }
            let sub = factor * x[col];
            x[r] -= sub;
        }
    }
    for col in (0..k).rev() {
        let mut acc = x[col];
        for c in (col + 1)..k {
            acc -= ata[col * k + c] * x[c];
        }
        x[col] = if ata[col * k + col].abs() < 1e-300 {
            0.0
        } else {
            acc / ata[col * k + col]
        };
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::eig_hermitian;
    use num_complex::Complex64;

    #[test]
    fn isotone_basics() {
        let chain = FinitePoset::chain(2);
        assert!(is_isotone(&[5.0, 5.0], &chain).unwrap());
        assert!(!is_isotone(&[1.0, 0.0], &chain).unwrap());
        assert!(is_isotone(&[0.0, 1.0], &chain).unwrap());
        assert!(is_isotone(&[1.0], &chain).is_err());
    }

    #[test]
    fn upset_indicators_on_antichain_and_chain() {
        let anti = FinitePoset::antichain(3);
        let fam = upset_indicators(&anti);
        assert_eq!(fam.functions.len(), 3);
        for (e, f) in fam.functions.iter().enumerate() {
            for (z, &v) in f.iter().enumerate() {
                assert_eq!(v, if z == e { 1.0 } else { 0.0 });
            }
        }
        let chain = FinitePoset::chain(2);
        let fam = upset_indicators(&chain);
        assert_eq!(fam.functions[0], vec![1.0, 1.0]);
        assert_eq!(fam.functions[1], vec![0.0, 1.0]);
    }

    #[test]
    fn upset_indicators_isotone_on_random_posets() {
        let mut rng = crate::testutil::rng(71);
        for _ in 0..20 {
            let p = FinitePoset::random(6, 0.4, &mut rng);
            for f in &upset_indicators(&p).functions {
                assert!(is_isotone(f, &p).unwrap());
            }
        }
    }

    #[test]
    fn recovery_exact_on_random_posets() {
        let mut rng = crate::testutil::rng(72);
        for _ in 0..50 {
            let n = rng.random_range(1..8);
            let p = FinitePoset::random(n, 0.35, &mut rng);
            let recovered = order_from_functions(&upset_indicators(&p)).unwrap();
            assert_eq!(&recovered, p.matrix());
        }
    }

    #[test]
    fn recovery_constant_family_is_total() {
        let p = FinitePoset::antichain(3);
        let fam = IsotoneFamily::new(p, vec![vec![1.0, 1.0, 1.0]]).unwrap();
        let recovered = order_from_functions(&fam).unwrap();
        assert_eq!(recovered.count_ones(), 9);
    }

    #[test]
    fn recovery_single_element() {
        let p = FinitePoset::antichain(1);
        let recovered = order_from_functions(&upset_indicators(&p)).unwrap();
        assert!(recovered.get(0, 0));
        assert_eq!(recovered.count_ones(), 1);
    }

    #[test]
    fn isotone_min_max_stability() {
        let mut rng = crate::testutil::rng(73);
        for _ in 0..20 {
            let p = FinitePoset::random(5, 0.4, &mut rng);
            let fam = upset_indicators(&p);
            let f = &fam.functions[rng.random_range(0..fam.functions.len())];
            let g = &fam.functions[rng.random_range(0..fam.functions.len())];
            let min: Vec<f64> = f.iter().zip(g).map(|(a, b)| a.min(*b)).collect();
            let max: Vec<f64> = f.iter().zip(g).map(|(a, b)| a.max(*b)).collect();
            assert!(is_isotone(&min, &p).unwrap());
            assert!(is_isotone(&max, &p).unwrap());
        }
    }

    #[test]
    fn meet_join_diagonal_pointwise() {
        let a = HermitianMatrix::diag(&[1.0, 3.0]);
        let b = HermitianMatrix::diag(&[2.0, 2.0]);
        let lo = meet(&a, &b).unwrap();
        let hi = join(&a, &b).unwrap();
        for (i, (want_lo, want_hi)) in [(1.0, 2.0), (2.0, 3.0)].into_iter().enumerate() {
            assert!((lo.get(i, i).re - want_lo).abs() < 1e-12);
            assert!((hi.get(i, i).re - want_hi).abs() < 1e-12);
        }
    }

    #[test]
    fn meet_join_hand_eigendecomposition() {
        // a − b = [[1,−1],[−1,−1]] has |a−b| = √2 I.
        let a = HermitianMatrix::diag(&[1.0, -1.0]);
        let b = HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let lo = meet(&a, &b).unwrap();
        let half_sqrt2 = 0.5 * 2.0f64.sqrt();
        let avg = a.add(&b).unwrap().scale(0.5);
        for i in 0..2 {
            for j in 0..2 {
                let want = avg.get(i, j) - if i == j { Complex64::new(half_sqrt2, 0.0) } else { Complex64::new(0.0, 0.0) };
                assert!((lo.get(i, j) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn meet_with_self_is_identity_op() {
        let mut rng = crate::testutil::rng(74);
        let a = HermitianMatrix::random(4, &mut rng);
        let m = meet(&a, &a).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((m.get(i, j) - a.get(i, j)).norm() < 1e-12);
            }
        }
        let b = HermitianMatrix::random(3, &mut rng);
        assert!(meet(&a, &b).is_err());
    }

    #[test]
    fn meet_join_identities_random() {
        let mut rng = crate::testutil::rng(75);
        for _ in 0..30 {
            let dim = rng.random_range(1..7);
            let a = HermitianMatrix::random(dim, &mut rng);
            let b = HermitianMatrix::random(dim, &mut rng);
            let lo = meet(&a, &b).unwrap();
            let hi = join(&a, &b).unwrap();
            let scale = a.max_abs().max(b.max_abs()).max(1.0);
            let sum = a.add(&b).unwrap();
            let sum2 = lo.add(&hi).unwrap();
            let abs = matrix_abs(&a.sub(&b).unwrap()).unwrap();
            let diff = hi.sub(&lo).unwrap();
            for i in 0..dim {
                for j in 0..dim {
                    assert!((sum.get(i, j) - sum2.get(i, j)).norm() < 1e-9 * scale);
                    assert!((abs.get(i, j) - diff.get(i, j)).norm() < 1e-9 * scale);
                }
            }
        }
    }

    #[test]
    fn meet_join_commuting_pair_is_pointwise_in_eigenbasis() {
        // Simultaneously diagonalizable pair: polynomials in one hermitian H.
        let mut rng = crate::testutil::rng(76);
        let h = HermitianMatrix::random(4, &mut rng);
        let eig = eig_hermitian(&h).unwrap();
        let a = HermitianMatrix::from_complex(&eig.apply(|l| l)).unwrap();
        let b = HermitianMatrix::from_complex(&eig.apply(|l| 0.5 * l * l - 1.0)).unwrap();
        let lo = meet(&a, &b).unwrap();
        let expect = HermitianMatrix::from_complex(
            &eig.apply(|l| l.min(0.5 * l * l - 1.0)),
        )
        .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((lo.get(i, j) - expect.get(i, j)).norm() < 1e-9);
            }
        }
    }

    /// Diagonal isotone cone on a 2-chain: generators I, −I, diag(0,1)
    /// span {diag(a,b) : a ≤ b} as a cone. The cone axioms hold; the span is
    /// deliberately deficient (diagonal matrices only) and reported as such.
    #[test]
    fn istar_diagonal_chain_cone() {
        let sample = ConeSample::new(
            2,
            vec![
                HermitianMatrix::identity(2),
                HermitianMatrix::identity(2).scale(-1.0),
                HermitianMatrix::diag(&[0.0, 1.0]),
            ],
        )
        .unwrap();
        let report = istar_axioms_check(&sample, 40, 9).unwrap();
        assert!(report.constants_pass);
        assert!(report.stability_failures.is_empty(), "{report:?}");
        assert!(report.cone_axioms_pass);
        assert_eq!(report.span_rank, 2);
        assert_eq!(report.span_expected, 4);
        assert!(!report.span_full);
        assert!(!report.all_pass);
    }

    #[test]
    fn istar_identity_only_cone() {
        let sample = ConeSample::new(2, vec![HermitianMatrix::identity(2)]).unwrap();
        let report = istar_axioms_check(&sample, 20, 10).unwrap();
        assert!(report.constants_pass);
        assert!(report.stability_failures.is_empty());
        assert_eq!(report.span_rank, 1);
        assert!(!report.span_full);
    }

    /// Random hermitian generators are generically not meet/join stable; the
    /// membership fit must detect that.
    #[test]
    fn istar_random_generators_fail_stability() {
        let mut rng = crate::testutil::rng(77);
        let sample = ConeSample::new(
            3,
            (0..3).map(|_| HermitianMatrix::random(3, &mut rng)).collect(),
        )
        .unwrap();
        let report = istar_axioms_check(&sample, 30, 11).unwrap();
        assert!(
            !report.stability_failures.is_empty(),
            "expected stability failures, got {report:?}"
        );
        assert!(!report.cone_axioms_pass);
    }

    #[test]
    fn istar_rejects_zero_trials() {
        let sample = ConeSample::new(2, vec![HermitianMatrix::identity(2)]).unwrap();
        assert!(istar_axioms_check(&sample, 0, 0).is_err());
    }

    #[test]
    fn nnls_fits_and_rejects() {
        // target inside the cone of (1,0) and (1,1):
        let cols = vec![vec![1.0, 0.0], vec![1.0, 1.0]];
        let (c, res) = nnls(&cols, &[3.0, 2.0]);
        assert!(res < 1e-10, "residual {res}");
        assert!((c[0] - 1.0).abs() < 1e-8 && (c[1] - 2.0).abs() < 1e-8);
        // target needing a negative coefficient: positive residual.
        let (_, res) = nnls(&cols, &[-1.0, 0.5]);
        assert!(res > 0.1);
    }

    #[test]
    fn poset_file_round_trip() {
        let mut rng = crate::testutil::rng(78);
        for _ in 0..10 {
            let p = FinitePoset::random(7, 0.3, &mut rng);
            let file = PosetFile::from_poset(&p);
            let back = file.into_poset().unwrap();
            assert_eq!(back.matrix(), p.matrix());
        }
    }

    #[test]
    fn poset_rejects_cycles() {
        let mut m = BoolMatrix::new(2).with_diagonal();
        m.set(0, 1, true);
        m.set(1, 0, true);
        assert!(FinitePoset::new(m).is_err());
        assert!(FinitePoset::from_cover_pairs(2, &[(0, 1), (1, 0)]).is_err());
    }
}
