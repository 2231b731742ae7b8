use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("mode index {doubled}/2 does not match the index set of the configuration")]
    ModeParity { doubled: i64 },
    #[error("flavor {flavor} out of range 1..={l}")]
    Flavor { flavor: usize, l: usize },
    #[error("field not present in this configuration: {0}")]
    MissingField(String),
    #[error("generator {generator} is not admissible here: {reason}")]
    Inadmissible { generator: String, reason: String },
    #[error("invalid label: {0}")]
    Label(String),
    #[error("label does not belong to pair {pair}: {reason}")]
    LabelPair { pair: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a highest weight vector: {0}")]
    NotHighest(String),
    #[error("vector is not an eigenvector of {0}")]
    NotEigen(String),
    #[error("zero vector")]
    ZeroVector,
    #[error("non-scalar bracket defect for {0}")]
    NonScalarDefect(String),
    #[error("coroot index {index} out of range for algebra {algebra}")]
    CorootIndex { algebra: String, index: i64 },
    #[error("character oracle: {0}")]
    Oracle(String),
    #[error("multiplicity did not stabilize by degree {0}")]
    Unstabilized(String),
}

pub type Result<T> = std::result::Result<T, Error>;
