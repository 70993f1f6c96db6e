use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u32),
    #[error("alphabet size must be at most 256, got {0}")]
    AlphabetTooLarge(u32),
    #[error("atom index {atom} out of range for alphabet of size {size}")]
    AtomOutOfRange { atom: u32, size: u32 },
    #[error("words must be non-empty")]
    EmptyWord,
    #[error("word of length {len} exceeds packing capacity of {capacity} atoms")]
    Capacity { len: usize, capacity: usize },
    #[error("word belongs to a different alphabet")]
    AlphabetMismatch,
    #[error("foodset must be non-empty")]
    EmptyFoodset,
    #[error("duplicate food word {0}")]
    DuplicateFood(String),
    #[error("{name} must lie in (0,1), got {value}")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },
    #[error("fugacity z must lie in (0,1], got {0}")]
    FugacityOutOfRange(f64),
    #[error("Model I requires z = 1 and Model II requires z < 1 (got z = {0})")]
    VariantMismatch(f64),
    #[error("cut {cut} does not split a word of length {len}")]
    InvalidCut { cut: u32, len: usize },
    #[error("cannot parse word {0:?}")]
    ParseWord(String),
}
