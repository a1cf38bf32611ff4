use thiserror::Error;

/// Errors raised by the analysis routines.
///
/// Reports that merely fail a hypothesis (an "inapplicable" Liouville bound,
/// an inconclusive integrability verdict) are not errors; they are carried
/// inside the corresponding report types.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("operator is not self-adjoint; sorted real bands are undefined")]
    NotSelfAdjoint,

    #[error("fermi-surface-not-finite: {0}")]
    FermiSurfaceNotFinite(String),

    #[error("rank-unstable: nullity {at_threshold} at threshold, {tighter} at threshold/10, {looser} at threshold*10")]
    RankUnstable {
        at_threshold: usize,
        tighter: usize,
        looser: usize,
    },

    #[error("eigenvalue within the exclusion annulus of the contour (|z - c| = {distance:.3e}, radius {radius:.3e})")]
    EigenvalueOnContour { distance: f64, radius: f64 },

    #[error("reduced basis degenerated (Gram determinant {0:.3e}); shrink the neighbourhood")]
    BasisDegenerate(f64),

    #[error("Taylor order undetermined up to order {0}")]
    TaylorUndetermined(usize),

    #[error("reconstruction at {0:?} lies outside the exactness window")]
    WindowOverflow(Vec<i64>),

    #[error("twisted difference by {0:?} leaves an empty window")]
    WindowUnderflow(Vec<i64>),

    #[error("operator outside the Perron class: {0}")]
    NotPerronType(String),

    #[error("complex Perron pair: leading eigenvalue {re} + {im}i")]
    ComplexPerron { re: f64, im: f64 },

    #[error("concavity violated at {count} of {trials} midpoint tests (worst slack {worst:.3e})")]
    ConcavityViolation { count: usize, trials: usize, worst: f64 },

    #[error("principal eigenvalue has no interior maximum (gradient norm {0:.3e} after ascent)")]
    NoInteriorMaximum(f64),

    #[error("no certified shift tuple within search radius {0}")]
    SearchExhausted(i64),

    #[error("truncated system is singular: {0}")]
    SingularSystem(String),

    #[error("spectral margin {margin:.3e} below the required {required:.3e}")]
    MarginViolation { margin: f64, required: f64 },

    #[error("singular basis element evaluated at its own centre")]
    SingularEvaluation,

    #[error("degenerate random configuration after {0} resamples")]
    DegenerateConfiguration(usize),

    #[error("refusing to serialize non-finite value at {0}")]
    NonFinite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
