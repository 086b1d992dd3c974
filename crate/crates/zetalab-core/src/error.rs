use alloc::string::String;

/// Errors shared by every module of the laboratory.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Invalid configuration value (limits, support radii, budgets).
    #[error("configuration error: {0}")]
    Config(String),

    /// A lookup outside the range covered by a precomputed table.
    #[error("table range error: requested {requested} exceeds table limit {limit}")]
    TableRange { requested: f64, limit: f64 },

    /// Argument outside the analytic domain of an evaluator.
    #[error("domain error: {0}")]
    Domain(String),

    /// An ordinate window is not covered by certified zeros.
    #[error("zero coverage error: [{lo}, {hi}] not covered by a certified window")]
    Coverage { lo: f64, hi: f64 },

    /// A zero table failed Turing certification.
    #[error("uncertified zero table on [{lo}, {hi}]")]
    Uncertified { lo: f64, hi: f64 },

    /// Evaluation requested within the exclusion radius of a zero.
    #[error("singular ordinate: t = {t} is within {radius} of a zero")]
    SingularOrdinate { t: f64, radius: f64 },

    /// Odd moment order where an even one is required.
    #[error("parity error: {0}")]
    Parity(String),

    /// Enumeration budget exceeded.
    #[error("budget error: {0}")]
    Budget(String),

    /// All weights vanished; the weighted measure is degenerate.
    #[error("degenerate measure: all weights are zero")]
    DegenerateMeasure,

    /// Too few effective samples for a distributional statistic.
    #[error("insufficient samples: effective count {effective:.1} below {required}")]
    InsufficientSamples { effective: f64, required: f64 },

    /// An integrand produced a non-finite value.
    #[error("poisoned sample: integrand not finite at t = {t}")]
    PoisonedSample { t: f64 },
}
