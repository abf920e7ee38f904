//! Distances from algebraic and order-theoretic data on finite carriers.
//!
//! The crate is organised around two distance constructions and the machinery
//! they share:
//!
//! * [`triple`] — finite spectral triples with a commutative diagonal algebra,
//!   the Lipschitz seminorm `‖[D, f]‖`, and the Connes distance
//!   `sup {|f(p) − f(q)| : ‖[D, f]‖ ≤ 1}` with certified lower and upper bounds.
//! * [`lorentz`] — the Lorentzian counterpart on causal sets: the dilatation
//!   infimum `inf {|f(p) − f(q)| : |f(x) − f(y)| ≥ d(x, y)}`, solved exactly via
//!   longest-path duality, plus the Cauchy-surface witness function
//!   `f(z) = d(z, C) − d(C, z)` and its case-by-case verification.
//! * [`causet`] — finite causal sets in flat 1+1 spacetime: seeded sprinkling,
//!   the causal order, covering links, proper-time oracles, longest paths.
//! * [`order`] — finite posets, isotone functions, order recovery, and the
//!   meet/join operations `(a + b)/2 ∓ |a − b|/2` on hermitian matrices.
//! * [`krein`] — indefinite inner product spaces: fundamental symmetry `J`,
//!   the positive product `⟨·,·⟩_J`, and Krein adjoints `A^× = J A† J`.
//! * [`matrix`] — the dense hermitian kernel everything else is built on:
//!   cyclic Jacobi eigendecomposition, operator norms, matrix absolute value.
//!
//! All operations are pure functions of their inputs and deterministic for a
//! fixed seed; nothing in the crate holds global mutable state.

pub mod bitmat;
pub mod causet;
pub mod error;
pub mod krein;
pub mod lorentz;
pub mod matrix;
pub mod order;
pub mod triple;


pub use bitmat::BoolMatrix;
pub use causet::{CausalSet, Event, Region};
pub use error::{Error, Result};
pub use krein::KreinSpace;
pub use lorentz::{CauchySlice, DilatationProgram, LorentzDistanceResult};
pub use matrix::{ComplexMatrix, HermitianMatrix};
pub use order::{ConeSample, FinitePoset, IsotoneFamily};
pub use triple::{DistanceResult, FiniteSpectralTriple};
