use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported ambient dimension {0} (expected 7 or 8)")]
    UnsupportedDimension(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("{op}: invalid degree {degree}")]
    InvalidDegree { op: &'static str, degree: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular endomorphism (condition estimate {condition:e})")]
    Singular { condition: f64 },
    #[error("degenerate metric: theta = {theta:e} is below tolerance")]
    DegenerateMetric { theta: f64 },
    #[error("left the almost-calibrated set at grid point {point} (theta = {theta:e})")]
    LeftAlmostCalibrated { point: usize, theta: f64 },
    #[error("no instanton in this Chern class on the torus: |pi_7(flux)| = {norm:e}")]
    InstantonObstruction { norm: f64 },
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("identity {id} has no mutation site `{site}`")]
    UnknownSite { id: String, site: String },
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::DegenerateMetric { .. }
                | Error::LeftAlmostCalibrated { .. }
                | Error::InstantonObstruction { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
