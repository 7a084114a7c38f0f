use thiserror::Error;

/// Errors raised while reading `.aut` or native Kripke text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header: {reason}")]
    Header { line: usize, reason: String },
    #[error("line {line}: malformed transition: {reason}")]
    Transition { line: usize, reason: String },
    #[error("line {line}: malformed label line: {reason}")]
    Label { line: usize, reason: String },
    #[error("line {line}: state {state} out of range (structure has {num_states} states)")]
    StateOutOfRange {
        line: usize,
        state: usize,
        num_states: usize,
    },
    #[error("line {line}: header declares {expected} transitions but {actual} were found")]
    TransitionCount {
        line: usize,
        expected: usize,
        actual: usize,
    },
    #[error("line {line}: unrecognized line `{text}`")]
    Unrecognized { line: usize, text: String },
    #[error("missing header")]
    MissingHeader,
}

/// Errors raised by the explicit domain oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("universe of {size} states exceeds the explicit-representation cap of {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
    #[error("family exceeds the explicit-representation cap of {cap} members")]
    FamilyTooLarge { cap: usize },
    #[error("enumeration of {what} exceeds the cap of {cap}")]
    EnumerationTooLarge { what: &'static str, cap: usize },
    #[error("not a Moore family: {reason}")]
    NotMooreFamily { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("partitions are over different universes ({left} and {right} states)")]
    UniverseMismatch { left: usize, right: usize },
    #[error("state {state} is out of range for a universe of {universe} states")]
    StateOutOfRange { state: usize, universe: usize },
    #[error("state {0} appears in more than one block")]
    Overlap(usize),
    #[error("state {0} is not covered by any block")]
    Uncovered(usize),
    #[error("blocks must be nonempty")]
    EmptyBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("state {state} out of range (structure has {num_states} states)")]
    StateOutOfRange { state: usize, num_states: usize },
    #[error("transition relation is not total: {} state(s) without successors, first is {}", .states.len(), .states[0])]
    NotTotal { states: Vec<usize> },
}
