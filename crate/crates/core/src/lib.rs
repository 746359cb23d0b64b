//! Computational harmonic analysis on exponential sums and atomic measures.
//!
//! The crate revolves around four kinds of objects and the transforms that
//! connect them:
//!
//! * [`ExpSum`] — finite exponential sums `f(x) = Σ cₙ e^{2πi⟨x,λₙ⟩}` with the
//!   `Σ|cₙ|` norm, closed under addition and multiplication.
//! * [`Lattice`] / [`Coset`] — full-rank lattices `A·Zᵈ`, their duals, and
//!   translated copies, with deterministic point enumeration.
//! * [`AtomicMeasure`] — finitely windowed atomic measures `Σ c_λ δ_λ` with
//!   translation-bound, growth, and separation diagnostics.
//! * [`FourierPair`] — a measure (or exponential-sum density) bundled with its
//!   atomic Fourier transform, closed under comb construction, modulation,
//!   multiplication by exponential sums, and smooth-bump convolution.
//!
//! On top of these sit three subsystems: a functional calculus that applies a
//! symbol pointwise to an exponential sum and recovers absolutely convergent
//! coefficients through a torus FFT (including a certified ε-inverse), a
//! decomposition pass that recognises finite unions of translated lattices and
//! factors a measure over them, and a coherence module that builds an
//! interpolation certificate for a frequency set and verifies the resulting
//! sup-norm inequality on concrete exponential sums.

pub mod calculus;
pub mod coherence;
pub mod decompose;
mod error;
pub mod exp_sum;
pub mod fourier;
pub mod lattice;
pub mod measure;
pub mod serial;
pub mod synth;
pub(crate) mod util;

pub use calculus::{
    basis::{find_basis, FrequencyBasis},
    compose, eps_inverse, ComposeResult, EpsInverseResult, HolomorphicSymbol,
};
pub use coherence::{build_certificate, select_u, verify_inequality, CoherenceCertificate};
pub use decompose::{
    detect_lattice_union, factor_measure, spectral_parts, Decomposition, DetectOutcome,
};
pub use error::Error;
pub use exp_sum::{CombineOp, ExpSum, Term};
pub use fourier::{
    bump::BumpFunction, convolve_bump, mass_sup_check, pair_from_comb, pair_from_expsum,
    poisson_check, schwartz_mass_report, test_fn::TestFunction, verify_pairing, FourierPair,
    TimeSide,
};
pub use lattice::{Coset, Lattice};
pub use measure::{Atom, AtomicMeasure};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Frequencies (and atom positions) closer than this are identified.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

/// Coefficients below this modulus are dropped and charged to the tail ledger.
pub const DEFAULT_DROP_TOL: f64 = 1e-14;

/// Condition-number guard for lattice basis inversion.
pub const CONDITION_GUARD: f64 = 1e12;

/// Default cap on lattice/coset point enumeration.
pub const DEFAULT_ENUM_CAP: usize = 2_000_000;
