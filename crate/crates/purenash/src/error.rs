use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A structural rule of a graph, hypergraph, or game was violated at
    /// construction time.
    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    /// An operation was called on an input that does not satisfy its
    /// documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The instance is larger than a configured resource cap. Raising the
    /// cap (CLI flag or config field) makes the call legal again.
    #[error("{stage}: instance needs {needed} but the cap is {cap}")]
    CapExceeded {
        stage: &'static str,
        needed: String,
        cap: String,
    },

    /// Extending a reduced-game equilibrium produced a profile in which some
    /// player can still improve, i.e. the supplied profile was not an
    /// equilibrium of the reduced game.
    #[error("extension failed: player {player} can deviate, so the input was not an equilibrium of the reduced game")]
    ExtensionFailed { player: String },

    /// Input text is not syntactically valid.
    #[error("malformed document: {0}")]
    MalformedDocument(String),

    /// Input is well-formed but does not match any document schema.
    #[error("schema violation at {path}: {reason}")]
    SchemaViolation { path: String, reason: String },

    /// Input matches a schema but breaks a structural invariant of the
    /// object it describes.
    #[error("invariant violation at {path}: {reason}")]
    InvariantViolation { path: String, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for the CLI: cap refusals are distinguishable from usage
    /// and format errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::CapExceeded { .. } => 2,
            _ => 1,
        }
    }
}
