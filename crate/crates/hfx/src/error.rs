//! Error types for compilation, database handling and scanning.

use thiserror::Error;

/// Position-tagged pattern parse failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {offset}: {kind}")]
pub struct ParseError {
    /// Byte offset into the pattern where the problem was detected.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected end of pattern")]
    UnexpectedEnd,
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("quantifier with nothing to repeat")]
    NothingToRepeat,
    #[error("repetition bounds out of order (min > max)")]
    RepeatBoundsOutOfOrder,
    #[error("repetition bound too large")]
    RepeatBoundTooLarge,
    #[error("empty byte class")]
    EmptyClass,
    #[error("class range endpoints out of order")]
    BadClassRange,
    #[error("unrecognized escape")]
    BadEscape,
    #[error("expected two hex digits after \\x")]
    BadHexEscape,
    #[error("unclosed group")]
    UnclosedGroup,
    #[error("unmatched ')'")]
    UnmatchedParen,
    #[error("unclosed byte class")]
    UnclosedClass,
    #[error("unsupported feature: {0}")]
    Unsupported(&'static str),
}

/// Per-pattern parse failure inside a set compilation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("pattern {index}: {error}")]
pub struct PatternError {
    /// Zero-based pattern index within the compiled set.
    pub index: usize,
    pub error: ParseError,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("empty pattern set")]
    NoPatterns,
    #[error("{} pattern(s) failed to parse", .0.len())]
    Parse(Vec<PatternError>),
    #[error("NFA exceeds configured maximum of {limit} states")]
    NfaTooLarge { limit: usize },
    #[error("DFA exceeds configured maximum of {limit} states")]
    DfaTooLarge { limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("hyper region of {size} states exceeds the 63-state capacity")]
    RegionTooLarge { size: usize },
}

/// Database decoding failures; each corruption class is distinct.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("bad magic bytes (not an hfx database)")]
    BadMagic,
    #[error("unsupported database format version {version}")]
    UnsupportedVersion { version: u32 },
    #[error("truncated database payload")]
    Truncated,
    #[error("invalid database: {reason}")]
    Invalid { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("stream state {state} does not belong to this database")]
    StateMismatch { state: u32 },
}

/// Rejected detector or engine parameter.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid configuration: {message}")]
pub struct ConfigError {
    pub message: String,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        ConfigError {
            message: message.into(),
        }
    }
}
