use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GentleError {
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("not gentle: ({condition}) fails: {detail}")]
    NotGentle { condition: &'static str, detail: String },

    #[error("infinite-dimensional: the path {cycle} avoids every relation")]
    InfiniteDimensional { cycle: String },

    #[error("disconnected quiver: {0}")]
    Disconnected(String),

    #[error("invalid word: {0}")]
    Word(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl GentleError {
    /// Errors that indicate a bug or a violated theorem rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, GentleError::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, GentleError>;
