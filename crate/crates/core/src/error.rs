use thiserror::Error;

/// Errors produced by the toolkit.
///
/// `SizeLimit` and `Budget` are resource guards; everything else is a
/// contract violation by the caller or a malformed input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet must have at least one generator")]
    EmptyAlphabet,

    #[error("invalid letter {0}: letters are non-zero signed generator indices")]
    InvalidLetter(i64),

    #[error("letter {letter} is outside the alphabet of {n} generators")]
    LetterOutOfRange { letter: i32, n: u32 },

    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} = {value} exceeds the configured cap {cap}")]
    SizeLimit {
        what: &'static str,
        value: String,
        cap: u64,
    },

    #[error("floor of {base}^({exponent}) is too close to an integer to round safely")]
    BoundaryAmbiguous { base: u32, exponent: f64 },

    #[error("{what} needs {required} steps, budget is {limit}")]
    Budget {
        what: &'static str,
        required: String,
        limit: u64,
    },

    #[error("word {0} is not reduced")]
    NotReduced(String),

    #[error("word length {length} is not divisible by block length {block}")]
    LengthNotDivisible { length: usize, block: usize },

    #[error("length {length} is not in the class I_{residue} for block length {block}")]
    ResidueMismatch {
        length: usize,
        block: usize,
        residue: usize,
    },

    #[error("relators have differing lengths")]
    MixedLengths,
}

impl Error {
    /// True for the resource guards (size caps and enumeration budgets).
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::SizeLimit { .. } | Error::Budget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
