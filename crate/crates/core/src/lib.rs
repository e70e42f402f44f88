//! Bi-valued digital-good auctions.
//!
//! Every bidder values an item of unlimited supply at either `1` or `h`. The
//! fixed-price benchmark on a bid vector `b` is `max{n, h·n_h(b)}`, where
//! `n_h(b)` counts the `h`-bids. This crate implements three bid-independent
//! auctions on that setting and the machinery to certify how far each falls
//! short of the benchmark:
//!
//! * [`auctions::dop`]: the deterministic optimal price auction (two variants),
//!   which can lose a factor of `h`.
//! * [`auctions::randomized`]: offers `h` with a clamped probability driven by
//!   `h·n_h(i) − n`, losing `O(√(nh))` in expectation.
//! * [`auctions::derand`]: a deterministic modular schedule with the same
//!   per-class offer frequencies, losing `O(√(nh))` on every input.
//!
//! [`analysis`] holds the certification tools: exhaustive worst-case sweeps,
//! exact expectations under the i.i.d. distribution where an `h`-bid occurs
//! with probability `1/h`, Monte Carlo estimates and the block-structure
//! checker for the derandomized schedule. [`cli`] wires these into a batch
//! experiment runner with CSV and JSON output.
//!
//! ```
//! use bivalued::{AuctionParams, BidVector, auctions::derand};
//!
//! let params = AuctionParams::new(4, 2).unwrap();
//! let bids = BidVector::parse(params, "HLHL").unwrap();
//! let schedule = derand::run(&bids);
//! assert_eq!(schedule.revenue(), 4);
//! assert_eq!(bids.offline_optimal(), 4);
//! ```

pub mod analysis;
pub mod auctions;
pub mod bids;
pub mod cli;
mod error;
pub mod surd;

pub use auctions::AuctionKind;
pub use bids::{AuctionParams, Bid, BidMask, BidVector, MaskedBidVector, OfferSchedule, Price};
pub use error::{Error, Result};
pub use surd::{ExactRational, Surd};
