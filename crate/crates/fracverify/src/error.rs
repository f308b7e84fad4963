use thiserror::Error;

/// Failure modes shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid of {got} points cannot resolve bandwidth {bandwidth} (need at least {need})")]
    GridTooSmall {
        got: usize,
        bandwidth: usize,
        need: usize,
    },

    #[error("coefficient table has {got} entries, expected {expected} ({components} components x {modes} modes)")]
    BadCoefficientShape {
        got: usize,
        expected: usize,
        components: usize,
        modes: usize,
    },

    #[error(
        "coefficients violate real-valued symmetry at component {component}, mode {k}: \
         |conj(u(k)) - u(-k)| = {defect:.3e}"
    )]
    NotReal {
        component: usize,
        k: i64,
        defect: f64,
    },

    #[error("radius {r} lies outside the open unit interval (0,1)")]
    RadiusOutOfRange { r: f64 },

    #[error("exponent s = {s} outside the supported range {range}")]
    SOutOfRange { s: f64, range: &'static str },

    #[error("component counts differ: {left} vs {right}")]
    ComponentMismatch { left: usize, right: usize },

    #[error(
        "evaluation point {x} lies {dist:.3e} from the support boundary; \
         points closer than {min:.3e} are rejected for s = {s}"
    )]
    TooCloseToBoundary { x: f64, dist: f64, min: f64, s: f64 },

    #[error("malformed grid: {0}")]
    BadGrid(String),

    #[error("product bandwidth {need} exceeds the permitted cap {cap}")]
    BandwidthOverflow { need: usize, cap: usize },

    #[error("kernel argument z = {z} is congruent to 0 mod 2pi")]
    KernelAtOrigin { z: f64 },

    #[error(
        "input is not sphere-valued: |u|^2 deviates from 1 by {defect:.3e} \
         at theta = {theta:.6} (tolerance {tol:.1e})"
    )]
    NotSphereValued { theta: f64, defect: f64, tol: f64 },

    #[error("Newton iteration stalled after {iters} steps (last residual {residual:.3e})")]
    NewtonStalled { iters: usize, residual: f64 },

    #[error(
        "eigenrelation validation failed at basis index {n}: \
         max deviation {defect:.3e} exceeds {tol:.1e}"
    )]
    EigenrelationFailed { n: usize, defect: f64, tol: f64 },

    #[error(
        "boundary-limit extrapolation did not settle: spread {spread:.3e} \
         exceeds {threshold:.3e}; the C^2 hypothesis on u^2 likely fails"
    )]
    ExtrapolationDiverged { spread: f64, threshold: f64 },

    #[error(
        "exterior asymptotics fit residual {residual:.3e} exceeds {threshold:.3e} \
         and no logarithmic profile was detected"
    )]
    AsymptoticFitFailed { residual: f64, threshold: f64 },

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("csv serialization failed: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
