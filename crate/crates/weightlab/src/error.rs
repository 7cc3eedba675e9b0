use thiserror::Error;

/// Errors raised by the library. The CLI maps them onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed simplex {0:?}: repeated vertex")]
    MalformedSimplex(Vec<usize>),
    #[error("degree {degree} out of range 1..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("boundary maps do not compose to zero in degree {0}")]
    NotAComplex(usize),
    #[error("map does not commute with boundaries in degree {0}")]
    NotChainMap(usize),
    #[error("{0} is not orientable")]
    NotOrientable(String),
    #[error("{0} is not a closed pseudomanifold")]
    NotPseudomanifold(String),
    #[error("{0} has no fixed orientation")]
    NotOriented(String),
    #[error("self-intersection numbers missing for {0} component(s)")]
    MissingSelfIntersection(usize),
    #[error("differentials do not anticommute: {0}")]
    AnticommutationViolated(String),
    #[error("seed is not a vertical cycle")]
    NotVerticalCycle,
    #[error("seed does not lie in the kernel of d1")]
    NotInKernelD1,
    #[error("completion system has no solution")]
    ObstructedCompletion,
    #[error("integer overflow during exact elimination")]
    Overflow,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
