use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// `1 + βx ≤ 0`: the perturbed metric degenerates.
    #[error("metric singularity: 1 + beta*x = {factor} at x = {x} (beta = {beta})")]
    MetricSingularity { x: f64, beta: f64, factor: f64 },

    #[error("fixed-point iteration did not converge in {iters} iterations (residual {residual:e})")]
    FixedPointDiverged { iters: usize, residual: f64 },

    #[error("invalid step configuration: {0}")]
    InvalidConfig(String),

    #[error("t_end = {t_end} is not an integer multiple of h = {h}")]
    GridMismatch { t_end: f64, h: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("step {index} failed: {source}")]
    StepFailed {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn at_step(self, index: usize) -> Self {
        Error::StepFailed {
            index,
            source: Box::new(self),
        }
    }
}
