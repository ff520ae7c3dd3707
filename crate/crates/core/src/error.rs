use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring modulus must be at least 1")]
    ZeroModulus,

    #[error("order {order} does not divide modulus {modulus}")]
    OrderDoesNotDivide { order: u64, modulus: u64 },

    #[error("module order overflows the addressable range")]
    ModuleTooLarge,

    #[error("invalid element {coords:?} for cyclic orders {orders:?}")]
    InvalidElement { coords: Vec<u64>, orders: Vec<u64> },

    #[error("element set is not a submodule: {0}")]
    NotASubmodule(String),

    #[error("submodules belong to different parent modules")]
    ParentMismatch,

    #[error("{what} exceeds cap of {cap} (raise it with --{flag})")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        flag: &'static str,
    },

    #[error("homomorphism endpoints use different rings (Z/{0} vs Z/{1})")]
    RingMismatch(u64, u64),

    #[error("expected {expected} generator images, got {got}")]
    ImageCountMismatch { expected: usize, got: usize },

    #[error(
        "ill-defined homomorphism: generator {generator} has order {order} but {order}·{image} ≠ 0"
    )]
    IllDefinedHom {
        generator: usize,
        order: u64,
        image: String,
    },

    #[error("contraction property fails: preimage of {witness} is not in the class")]
    ContractionFails { witness: String },

    #[error("point set is not closed")]
    NotClosed,

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("nothing to minimize: verdict is not a failure")]
    NothingToMinimize,

    #[error("unknown class name `{0}`")]
    UnknownClass(String),

    #[error("unknown statement id `{0}`")]
    UnknownStatement(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
