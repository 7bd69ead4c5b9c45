use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Daubechies order {0} is outside the supported range 1..=12")]
    OrderOutOfRange(usize),

    #[error("level parameters underflow: xi={xi}, k={k} gives a damping factor of zero")]
    DampingUnderflow { xi: f64, k: u32 },

    #[error("degenerate spectral factor: root {index} has |z| = {modulus} on the unit circle")]
    DegenerateFactor { index: usize, modulus: f64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("reconstruction has imaginary residue {0:e}")]
    NonRealResult(f64),

    #[error("value {value} exceeds quantizer amplitude {amplitude}")]
    OutOfRange { value: f64, amplitude: f64 },

    #[error("non-finite value in coefficient stream")]
    NonFinite,

    #[error("symbol {symbol} is outside the representable range +-{limit}")]
    SymbolOutOfRange { symbol: i64, limit: i64 },

    #[error("entropy stream: {0}")]
    Entropy(String),

    #[error("container: {0}")]
    Container(String),

    #[error("image format: {0}")]
    Format(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
