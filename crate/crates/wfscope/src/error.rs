use thiserror::Error;

/// Errors surfaced by grid construction, the transform engine, and the
/// detection pipeline. Detector entry points convert these into
/// `Inconclusive` verdicts with a reason instead of aborting a scan.
#[derive(Debug, Error)]
pub enum WfError {
    #[error("grid too small for {what}: need at least N = {required_n} per axis")]
    GridTooSmall { what: String, required_n: usize },

    #[error("signal support touches the grid boundary (boundary peak ratio {ratio:.3e} > 1e-12)")]
    SupportTouchesBoundary { ratio: f64 },

    #[error("window of radius {radius} overhangs the grid at position {position:?}")]
    WindowOverhang { position: Vec<f64>, radius: f64 },

    #[error("window seminorm order {k} exceeds differentiability class ({max} for this window)")]
    SeminormOrder { k: usize, max: usize },

    #[error("invalid cone pair: {reason}")]
    InvalidConePair { reason: String },

    #[error("shell partition exceeds the aliasing cap: R0*2^J = {top} > cap = {cap}")]
    ShellsExceedCap { top: f64, cap: f64 },

    #[error("too few usable shells for a fit: got {got}, need {need}")]
    TooFewShells { got: usize, need: usize },

    #[error("Sobolev bisection endpoint s = {s} is {verdict}; a larger grid is needed")]
    EndpointInconclusive { s: f64, verdict: String },

    #[error("point is not Regular at order {n} (fitted exponent {n_hat}); seminorm audit undefined")]
    NotRegularAtOrder { n: f64, n_hat: f64 },

    #[error("no closed form available for corpus member {name}")]
    UnsupportedClosedForm { name: String },

    #[error("unknown corpus member {name}")]
    UnknownMember { name: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, WfError>;
