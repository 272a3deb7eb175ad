use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("point {0} lies outside the space")]
    PointOutsideSpace(String),
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("region is empty")]
    EmptyRegion,
    #[error("region {0} is not open")]
    NotOpen(String),
    #[error("region {0} is not closed")]
    NotClosed(String),
    #[error("region {0} is not regularly open")]
    NotRegularOpen(String),
    #[error("closure of K is not contained in U")]
    KNotInsideU,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("function is not an element of the sublattice")]
    NotInSublattice,
    #[error("even-near-zero sublattice requires a single symmetric component [-c,c] with c > 0")]
    InvalidSublattice,
    #[error("ideal is not a projection band")]
    NotProjectionBand,
    #[error("ideal is not order dense")]
    NotOrderDense,
    #[error("regions intersect")]
    RegionsIntersect,
    #[error("support of the function is not covered by U and V")]
    CoverViolated,
    #[error("K is not contained in the support of the ideal")]
    KNotInsideSupport,
    #[error("no witness region exists")]
    NoWitnessRegion,
    #[error("invalid sequence rule: {0}")]
    InvalidSequenceRule(String),
    #[error("invalid bump family: {0}")]
    InvalidFamily(String),
    #[error("bump family is not contained in the ideal")]
    FamilyNotInIdeal,
    #[error("unsupported ideal shape: {0}")]
    UnsupportedIdealShape(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("not a lattice: elements {a} and {b} have no {which}")]
    NotALattice {
        a: usize,
        b: usize,
        which: &'static str,
    },
    #[error("lattice is not distributive: witness ({p}, {q}, {r})")]
    NotDistributive { p: usize, q: usize, r: usize },
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
