use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: n = {n}, h = {h} (need n >= 1, h >= 2)")]
    InvalidParams { n: usize, h: u64 },

    #[error("h = {h} does not divide n = {n}")]
    NotDivisible { n: usize, h: u64 },

    #[error("bidder index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("offer {offer} is neither 1 nor h = {h}")]
    InvalidOffer { offer: u64, h: u64 },

    #[error("cannot parse bid {0:?}; expected H/L or 1/0")]
    InvalidBid(char),

    #[error("n = {n} exceeds the enumeration limit {limit}")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("Monte Carlo needs at least one sample")]
    ZeroSamples,

    #[error("unknown auction {0:?}")]
    UnknownAuction(String),
}
