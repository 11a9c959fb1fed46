//! Shared domain model: alphabets, symbol strings, covertext sources, secret
//! bit providers, and the encoder/decoder contract all codecs implement.

mod alphabet;
mod codec;
mod secret;
mod source;

pub use alphabet::{Alphabet, Bits, SymbolString};
pub use codec::{EncodeResult, StegoCodec};
pub use secret::SecretProvider;
pub use source::{
    enumerate_strings, enumerate_strings_with_budget, parse_rational, parse_source_config,
    rational_str, string_space_size, write_subset_config, IidSource, Source, StringIter,
    SubsetSource, DEFAULT_ENUMERATION_BUDGET,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("alphabet needs at least 2 symbols, got {size}")]
    AlphabetTooSmall { size: usize },
    #[error("alphabet larger than 256 symbols ({size})")]
    AlphabetTooLarge { size: usize },
    #[error("duplicate alphabet symbol {symbol:?}")]
    DuplicateSymbol { symbol: char },
    #[error("symbol {symbol:?} is not in the alphabet")]
    SymbolNotInAlphabet { symbol: char },
    #[error("alphabet mismatch: {context}")]
    AlphabetMismatch { context: &'static str },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("need {expected} probabilities for the alphabet, got {actual}")]
    ProbabilityCount { expected: usize, actual: usize },
    #[error("probabilities must be nonnegative rationals summing to exactly 1, got sum {sum}")]
    BadProbabilities { sum: String },
    #[error("secret bits exhausted after {consumed} bits")]
    SecretsExhausted { consumed: usize },
    #[error("enumerating {required} strings exceeds the budget of {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("subset source must be nonempty")]
    EmptySubset,
    #[error("{codec} codec requires a binary alphabet")]
    NonBinaryAlphabet { codec: &'static str },
    #[error("block length must be at least 1")]
    ZeroBlockLength,
    #[error("rank {rank} out of range for a class of size {size}")]
    RankOutOfRange { rank: String, size: String },
    #[error("invalid bit character {ch:?} (expected '0' or '1')")]
    InvalidBit { ch: char },
    #[error("invalid source config: {reason}")]
    InvalidConfig { reason: String },
}
