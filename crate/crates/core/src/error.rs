use thiserror::Error;

/// Errors raised by the evaluation engine and the analytic layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("recurrence order k must be at least 2 (got {0})")]
    InvalidOrder(u32),

    #[error("empty range: n0 = {0} exceeds n1 = {1}")]
    EmptyRange(u64, u64),

    #[error("remainder r = {r} outside [-1, {max}]")]
    RemainderOutOfRange { r: i64, max: i64 },

    #[error("m = {m} below the closed-form threshold k-1 = {min}")]
    MSliceTooSmall { m: u64, min: u64 },

    #[error("index {0} is positive; only non-positive indices are supported here")]
    PositiveIndex(i64),

    #[error("invalid block coordinates: b = {b}, j = {j}, r = {r} for order k = {k}")]
    InvalidBlockCoords { k: u32, b: u64, j: i64, r: i64 },

    #[error("block entry offset {offset} decodes below index 0 (block b = {b})")]
    BlockIndexUnderflow { b: u64, offset: i64 },

    #[error("psi({v}, {w}) = 0 has no 2-adic valuation")]
    PsiIsZero { v: u64, w: u64 },

    #[error("order k = {0} must be even for the sign check")]
    RequiresEvenOrder(u32),

    #[error("order k = {0} must be odd here")]
    RequiresOddOrder(u32),

    #[error("sign-check window must start at or above k^2-k-1 = {min} (got {got})")]
    WindowBelowThreshold { min: u64, got: u64 },

    #[error("{what} requires k >= {min} (got {k})")]
    UnsupportedOrder { k: u32, min: u32, what: &'static str },

    #[error("precision must be at least {min} bits (got {got})")]
    PrecisionTooLow { min: u32, got: u32 },

    #[error("root certification failed at {precision} bits for k = {k}: {detail}")]
    CertificationFailed {
        k: u32,
        precision: u32,
        detail: String,
    },

    #[error("evaluation at the pole z = 2 - 2/(k+1) of the weight function")]
    WeightPole,

    #[error("insufficient precision: error bound {error} >= 0.5 at {precision} bits")]
    InsufficientPrecision { error: f64, precision: u32 },

    #[error("certified radii too coarse to decide the ratio gap for k = {k} (pair {i}, {j})")]
    GapUndecidable { k: u32, i: usize, j: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
