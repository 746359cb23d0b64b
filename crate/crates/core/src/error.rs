use num_complex::Complex64;

/// Errors shared by all modules of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("lattice basis is numerically singular (condition estimate {cond:.3e})")]
    SingularLattice { cond: f64 },

    #[error("enumeration exceeds the cap of {cap} points")]
    EnumerationCap { cap: usize },

    #[error("window too small: need radius {needed:.3}, have {have:.3}")]
    WindowTooSmall { needed: f64, have: f64 },

    #[error(
        "frequency truncation insufficient: tail estimate {tail:.3e} exceeds tolerance {tol:.3e} \
         (radius {required_radius:.1} would suffice)"
    )]
    TruncationInsufficient {
        tail: f64,
        tol: f64,
        required_radius: f64,
    },

    #[error("symbol domain guard violated at grid point {index}: value {value}")]
    DomainGuard { index: usize, value: Complex64 },

    #[error("grid too coarse: residual {residual:.3e} above tolerance {tol:.3e} at grid_n {grid_n}; increase grid_n")]
    GridTooCoarse {
        residual: f64,
        tol: f64,
        grid_n: usize,
    },

    #[error("frequency basis rank {rank} exceeds the supported maximum {max}")]
    RankTooLarge { rank: usize, max: usize },

    #[error("too many frequencies: {count} (maximum {max})")]
    TooManyFrequencies { count: usize, max: usize },

    #[error("bump support radius {eta:.4} too wide for minimum separation {min_sep:.4}")]
    BumpTooWide { eta: f64, min_sep: f64 },

    #[error("point {point:?} is not covered by any coset")]
    CoverageGap { point: Vec<f64> },

    #[error("unsupported dimension {dim} for this operation (maximum {max})")]
    UnsupportedDimension { dim: usize, max: usize },

    #[error("invalid input: {0}")]
    BadInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
