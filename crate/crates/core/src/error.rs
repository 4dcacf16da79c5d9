use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not an orthogonal projector")]
    NotProjector,

    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("eigenvalues are not pairwise distinct")]
    DuplicateValues,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid timeline: {0}")]
    InvalidTimeline(String),

    #[error("unknown moment `{0}`")]
    UnknownMoment(String),

    #[error("moment `{from}` comes after `{to}`")]
    BackwardInterval { from: String, to: String },

    #[error("candidate moment `{0}` is not strictly before the final moment")]
    NotBeforeFinal(String),

    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),

    #[error("no interference witness: every cross-block vanishes")]
    NoWitness,

    #[error(
        "witness re-simulation disagrees: predicted {predicted:.12e}, simulated {simulated:.12e}"
    )]
    WitnessMismatch { predicted: f64, simulated: f64 },

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("invalid axis: {0}")]
    InvalidAxis(String),
}
