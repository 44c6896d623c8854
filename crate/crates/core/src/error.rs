use thiserror::Error;

/// Errors raised by the geometric kernels and the experiment drivers.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("elliptic element: |trace| = {trace} < 2")]
    Elliptic { trace: f64 },

    #[error("parabolic element has no axis (|trace| = {trace})")]
    Parabolic { trace: f64 },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("arc lengths are undefined on a cusped surface")]
    CuspArc,

    #[error("boundary lengths differ between the two surfaces; arcs cannot be compared")]
    BoundaryMismatch,

    #[error("assembly failed at slot (pants {pants}, cuff {cuff}): {reason}")]
    Assembly { pants: usize, cuff: usize, reason: String },

    #[error("family is empty")]
    EmptyFamily,

    #[error("mapping class is periodic or reducible; no dilatation to estimate")]
    PeriodicOrReducible,

    #[error("search domain is empty: {0}")]
    SearchDomain(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
