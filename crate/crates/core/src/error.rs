use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is not bipartite: odd-set constraints would be required")]
    NotBipartite,

    #[error("empty polytope: {0} has no perfect matching")]
    EmptyPolytope(String),

    #[error("label vector has length {got}, graph has {expected} edges")]
    LengthMismatch { expected: usize, got: usize },

    #[error("witness case {case} does not apply to a {rows}x{cols} grid")]
    IncompatibleWitness {
        case: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("enumeration cap of {limit} labellings exceeded ({found} found before stopping)")]
    CapExceeded { limit: usize, found: usize },

    #[error("{states} states exceed the configured cap of {cap}")]
    StateCap { states: u128, cap: usize },

    #[error("held-out check failed at t={t}: polynomial gives {predicted}, count is {counted}")]
    HeldOut {
        t: u32,
        predicted: String,
        counted: String,
    },

    #[error("h-vector entry h_{index} = {value} is negative")]
    NegativeH { index: usize, value: String },

    #[error("affine rank {rank} disagrees with the dimension formula value {formula}")]
    DimensionMismatch { rank: usize, formula: usize },

    #[error("evidence window too short: t_max = {t_max}, need at least {needed}")]
    EvidenceWindow { t_max: u32, needed: u32 },

    #[error("gorenstein modes disagree: h-vector says {hvector}, functional says {functional}")]
    ModeDisagreement { hvector: String, functional: String },

    #[error("backward extension undefined for this recurrence")]
    BackwardUndefined,

    #[error("no recurrence of order at most {max_order} fits the {len} supplied terms")]
    InconsistentSequence { len: usize, max_order: usize },

    #[error("recurrence failed to reproduce term {index}")]
    Reproduction { index: i64 },

    #[error("closed form did not settle below the precision ceiling of {ceiling} bits")]
    PrecisionCeiling { ceiling: usize },

    #[error("no perfect matching in support: labelling invalid or graph non-bipartite")]
    NoMatching,

    #[error("labelling is not magic: {0}")]
    NotMagic(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
