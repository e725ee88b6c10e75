use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown {kind} `{name}`")]
    Dangling {
        line: usize,
        kind: &'static str,
        name: String,
    },

    #[error("line {line}: duplicate id `{name}`")]
    DuplicateId { line: usize, name: String },

    #[error("invalid literal `{literal}`: {message}")]
    Literal { literal: String, message: String },

    #[error("path is not composable at position {position}")]
    NotComposable { position: usize },

    #[error("cycle must be a nonempty closed path starting where the prefix ends")]
    BadCycle,

    #[error("finite boundary path must end at a sink, `{vertex}` emits edges")]
    NotASink { vertex: String },

    #[error("point or path does not belong to this graph")]
    GraphMismatch,

    #[error("point has fewer than {required} edges")]
    Domain { required: usize },

    #[error("function is nonzero outside dom(sigma) on cylinder `{cylinder}`")]
    Support { cylinder: String },

    #[error("cylinders `{first}` and `{second}` overlap")]
    Overlap { first: String, second: String },

    #[error("transducer is not valid: {0}")]
    Validity(String),

    #[error("map is not a verified homeomorphism: {0}")]
    Unverified(String),

    #[error("sigma^m(x) != sigma^n(y) for the supplied witness ({m}, {n})")]
    Witness { m: usize, n: usize },

    #[error("groupoid elements are not composable")]
    NotComposableElements,

    #[error("map is not a conjugacy: {0}")]
    NotConjugacy(String),

    #[error("no k <= {bound} satisfies the eventual conjugacy relation at `{point}`")]
    NotEventuallyConjugate { point: String, bound: usize },

    #[error("map is not an eventual conjugacy in both directions")]
    NotDegreePreserving,

    #[error("graph has a cycle through `{vertex}`; the groupoid is infinite")]
    NotAcyclic { vertex: String },

    #[error("groupoid has nontrivial isotropy")]
    NonPrincipal,

    #[error("|z| = {modulus} is not 1")]
    NotUnimodular { modulus: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
