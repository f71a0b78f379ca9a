use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit detuning {name} is zero; dispersive terms are undefined")]
    ZeroDetuning { name: &'static str },

    #[error("array `{name}` has {got} entries, expected at least {expected}")]
    LengthMismatch {
        name: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("potential site {site} is outside 1..={n_sites}")]
    BadSite { site: usize, n_sites: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("lost track of level `{level}` between phi = {from} and phi = {to}")]
    TrackingLost { level: String, from: f64, to: f64 },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("at {name} = {value}: {source}")]
    AtParameter {
        name: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn at(self, name: &'static str, value: f64) -> Self {
        Error::AtParameter {
            name,
            value,
            source: Box::new(self),
        }
    }
}
