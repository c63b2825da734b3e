use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("sentence {sentence}: {message}")]
    Structure { sentence: u32, message: String },

    #[error("{0}")]
    Input(String),

    #[error("mixed coordination: {0}")]
    MixedCoordination(String),

    #[error("training: {0}")]
    Training(String),

    #[error("unknown lemma `{0}` in synset graph")]
    UnknownLemma(String),

    #[error("synset graph: {0}")]
    Graph(String),

    #[error("re-parse failed: {0}")]
    Reparse(String),

    #[error("authoring: {0}")]
    Authoring(String),

    #[error("evaluation: {0}")]
    Evaluation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
