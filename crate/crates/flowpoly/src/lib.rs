//! Exact-arithmetic toolkit for flow polytopes of loopless forward-directed
//! multigraphs: Kostant partition functions, lattice points of the projected
//! polytopes `P(G;a)` and `Q(G;a)`, the projected integer point transforms
//! `sigma_phi` / `sigma_psi`, Baldoni–Vergne volume polynomials, and a fully
//! exact Lorentzian-polynomial checker (integer characteristic polynomials,
//! Descartes sign counting — no floating point anywhere on a decision path).
//!
//! The crate is organized around the pipeline it verifies:
//!
//! * [`multigraph`] — graphs, sink structure, and the graph surgeries
//!   (`restriction`, `extension`, `simplify_at_sink`, `flip`, proof graph).
//! * [`kostant`] — exact flow counting and enumeration.
//! * [`polyalg`] — sparse multivariate polynomials over `BigRational`.
//! * [`permutahedra`] — Minkowski sums of scaled coordinate simplices and
//!   M-convexity checking.
//! * [`projections`] — the maps `phi`, `psi`, their fibers, and the projected
//!   transforms computed by two independent routes.
//! * [`lorentzian`] — exact inertia, Hessian slices, and the Lorentzian
//!   predicate for normalized integer polynomials.
//! * [`volume`] — Baldoni–Vergne volume polynomials and the Hessian-via-volume
//!   pipeline.
//! * [`admissible`] — lattice-level polytope/projection pairs and the
//!   derivative identity.
//! * [`verify`] — seeded randomized verification sweeps with machine-readable
//!   reports.

pub mod admissible;
pub mod kostant;
pub mod lorentzian;
pub mod multigraph;
pub mod permutahedra;
pub mod polyalg;
pub mod projections;
pub mod verify;
pub mod volume;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph violates the unique-sink convention: {0}")]
    NoUniqueSink(String),
    #[error("netflow has length {found}, expected {expected}")]
    NetflowLength { expected: usize, found: usize },
    #[error("netflow {0:?} violates the projection conventions: {1}")]
    NetflowConvention(Vec<i64>, String),
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix entry ({row},{col}) differs from ({col},{row}); matrix is not symmetric")]
    NotSymmetric { row: usize, col: usize },
    #[error("negative entry at ({row},{col}) where nonnegative entries are required")]
    NegativeEntry { row: usize, col: usize },
    #[error("non-integer coefficient {coefficient} at exponent {exponents:?}")]
    NonIntegerCoefficient {
        coefficient: String,
        exponents: Vec<u32>,
    },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point {0:?} is not a lattice point of the target polytope")]
    PointOutsidePolytope(Vec<u32>),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use lorentzian::{Inertia, LorentzianVerdict, SymmetricIntMatrix};
pub use multigraph::{EdgeId, Multigraph, SinkStructure};
pub use polyalg::{Monomial, SparsePolynomial};
pub use verify::{SweepConfig, VerificationReport};
