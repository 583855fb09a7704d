use thiserror::Error;

/// Errors raised by the invariant engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("germ does not pass through the origin")]
    NotThroughOrigin,

    #[error("irrational center: infinitely-near singular point of factor {factor} is not defined over Q")]
    IrrationalCenter { factor: String },

    #[error("polynomials share a common factor: {0}")]
    CommonFactor(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid fiber configuration: {0}")]
    Config(String),

    #[error("self-intersection of component {component} is not an integer ({value})")]
    NonIntegralSelfIntersection { component: String, value: String },

    #[error("component {0} is a (-1)-curve; the fiber is not relatively minimal")]
    NotRelativelyMinimal(String),

    #[error("declared genus {declared} does not match adjunction genus {computed}")]
    GenusMismatch { declared: u64, computed: i64 },

    #[error("fiber genus {0} is out of range for this computation")]
    GenusOutOfRange(i64),

    #[error("dual graph is disconnected")]
    Disconnected,

    #[error("ambiguous monodromy over component {0}")]
    AmbiguousMonodromy(String),

    #[error("ambiguous attachment of chains over the node {0} -- {1}")]
    AmbiguousAttachment(String, String),

    #[error("degree {degree} is not divisible by multiplicity {multiplicity}")]
    DegreeNotDivisible { degree: u64, multiplicity: u64 },

    #[error("unknown Kodaira type '{0}'")]
    UnknownKodairaType(String),

    #[error("unknown ADE type '{0}'")]
    UnknownAdeType(String),

    #[error("base change branches over unknown fiber {0}")]
    UnknownFiber(usize),

    #[error("invalid base change: {0}")]
    BaseChange(String),

    #[error("non-stabilizing base change over fiber {0} requires pullback fiber data")]
    PullbackRequired(String),

    #[error("inconsistent ledger: {0}")]
    InconsistentLedger(String),

    #[error("fibration is isotrivial (I_chi = 0); the semistable slope is undefined")]
    Isotrivial,

    #[error("graph description error on line {line}: {msg}")]
    GraphFormat { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
