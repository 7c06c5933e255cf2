use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, Error)]
pub enum Error {
    #[error("invalid abelian group orders: {0}")]
    InvalidOrders(String),

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("matrix for H element {element} is not an automorphism of A: {reason}")]
    NotAutomorphism { element: usize, reason: String },

    #[error("action is not a homomorphism: t({g}*{h}) != t({g}) o t({h})")]
    NotHomomorphism { g: usize, h: usize },

    #[error("group order {order} exceeds the size limit {limit}")]
    SizeLimit { order: usize, limit: usize },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("not a representation: {0}")]
    NotRepresentation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Hom dimension {re:.9}{im:+.9}i is not a non-negative integer")]
    NonIntegralHom { re: f64, im: f64 },

    #[error("character {character} is not fixed by stabilizer element {h}")]
    NotStabilized { h: usize, character: usize },

    #[error("invalid projection valued measure: {0}")]
    InvalidPvm(String),

    #[error("covariance fails at h = {h}, character {character} (deviation {deviation:.3e})")]
    Covariance { h: usize, character: usize, deviation: f64 },

    #[error("character {0} is not in the support of the system")]
    NotInSupport(usize),

    #[error("system is reducible")]
    ReducibleSystem,

    #[error("support {support:?} is not the orbit {orbit:?}")]
    SupportMismatch { support: Vec<usize>, orbit: Vec<usize> },

    #[error("decomposition failed after {attempts} attempts: {reason}")]
    DecompositionFailed { attempts: usize, reason: String },

    #[error("orbit with representative {representative}: {source}")]
    Orbit {
        representative: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("no classification entry matches the representation")]
    NoMatch,

    #[error("{0} classification entries match the representation")]
    AmbiguousMatch(usize),

    #[error("{0}")]
    Parse(String),
}
