use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable `{0}` occurs inside its own definition")]
    NestedDefinition(String),
    #[error("{what} budget of {limit} exceeded")]
    Budget { what: &'static str, limit: usize },
    #[error("invalid automaton: {0}")]
    Schema(String),
    #[error("active variable degree {avd} exceeds memory bound {k}")]
    AvdTooLarge { avd: usize, k: usize },
    #[error("{count} variables exceed the brute-force cap of {cap}")]
    TooManyVariables { count: usize, cap: usize },
    #[error("malformed ref-word: {0}")]
    MalformedRefWord(String),
    #[error("invalid instance: {0}")]
    Instance(String),
}
