use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("profile shape: {0}")]
    ProfileShape(String),

    #[error("no runtime for partition {pid} under config `{config}`")]
    MissingRuntime { pid: usize, config: String },

    #[error("config `{id}` is not a {expected} config")]
    KindMismatch { id: String, expected: &'static str },

    #[error("unknown platform config `{0}`")]
    UnknownConfig(String),

    #[error("duplicate platform config id `{0}`")]
    DuplicateConfig(String),

    #[error("candidate catalog is empty")]
    EmptyCatalog,

    #[error("cut_id {cut} out of range 1..={partitions}")]
    CutOutOfRange { cut: usize, partitions: usize },

    #[error("No configuration meets SLO.")]
    NoFeasibleConfig,

    #[error("unknown sweep axis `{0}`")]
    UnknownAxis(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("plan does not match inputs: {0}")]
    PlanMismatch(String),

    #[error("trace is empty")]
    EmptyTrace,

    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ProfileShape(msg.into())
    }
}
