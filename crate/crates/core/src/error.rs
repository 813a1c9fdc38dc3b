use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation bounds differ: {0} vs {1}")]
    BoundMismatch(i64, i64),
    #[error("series has no invertible leading coefficient")]
    NotInvertible,
    #[error("index {index} out of range (allowed 0..={max})")]
    OutOfRange { index: usize, max: usize },
    #[error("degree {0} must be even and nonnegative")]
    OddDegree(i64),
    #[error("parts sum to {sum}, expected {whole}")]
    PartsMismatch { sum: usize, whole: usize },
    #[error("empty or zero part in composition")]
    BadComposition,
    #[error("orbit index {i} out of range for colors ({m},{n})")]
    OrbitOutOfRange { m: usize, n: usize, i: usize },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("braid is not closable: top coloring {top:?} but bottom coloring {bottom:?}")]
    NotClosable { top: Vec<usize>, bottom: Vec<usize> },
    #[error("generator index {index} out of range for {strands} strands")]
    GeneratorOutOfRange { index: i64, strands: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("colored braid where all colors must be 1")]
    Colored,
    #[error("differential check failed: {0}")]
    NotAComplex(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
