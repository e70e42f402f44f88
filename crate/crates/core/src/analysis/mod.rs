//! Certification of the auctions against the fixed-price benchmark.

use num_rational::BigRational;
use serde::Serialize;

use crate::auctions::{randomized, AuctionKind};
use crate::bids::{AuctionParams, BidVector};
use crate::error::Result;
use crate::surd::Surd;

pub mod blocks;
pub mod distribution;
pub mod monte_carlo;
pub mod sweep;
pub mod truthfulness;

pub use blocks::{block_structure_check, block_structure_sweep, check_offer_blocks, BlockViolation};
pub use distribution::{
    exact_e_dop_under_d, exact_e_opt_under_d, high_count_pmf, lower_bound_gap, DistributionIdentities, IdentityViolation,
};
pub use monte_carlo::{monte_carlo_under_d, DistributionDReport};
pub use sweep::{worst_case_sweep, worst_case_sweep_with_limit, LossProfile, DEFAULT_ENUMERATION_LIMIT};
pub use truthfulness::{bid_independence_sweep, flip_sweep, TruthfulnessReport};

/// `OPT(b)` minus the auction's revenue on `b` (its exact expectation for
/// the randomized auction). Negative when the auction beats the benchmark.
pub fn additive_loss(b: &BidVector, auction: AuctionKind) -> Result<Surd> {
    let opt = Surd::from_integer(b.offline_optimal() as i64);
    Ok(match auction.rule(b.params())? {
        Some(rule) => &opt - &Surd::from_integer(rule.run(b).revenue() as i64),
        None => &opt - &randomized::exact_expectation(b),
    })
}

/// Outcome of running DOP on a vector with exactly `n/h` h-bids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DopDemo {
    pub n: usize,
    pub h: u64,
    pub count_high: usize,
    pub opt: u64,
    pub revenue: u64,
    #[serde(serialize_with = "crate::cli::report::serialize_rational")]
    pub ratio: BigRational,
}

/// DOP on `n/h` leading h-bidders; `n` defaults to `h²`. Every h-bidder is
/// offered 1 and every 1-bidder is offered `h`, so the ratio is `h`.
pub fn dop_unboundedness_demo(h: u64, n: Option<usize>) -> Result<DopDemo> {
    let n = n.unwrap_or((h * h) as usize);
    let params = AuctionParams::new(n, h)?;
    let count_high = params.high_quota()?;
    let b = BidVector::with_leading_high(params, count_high);
    let revenue = crate::auctions::dop::run(&b).revenue();
    let opt = b.offline_optimal();
    Ok(DopDemo {
        n,
        h,
        count_high,
        opt,
        revenue,
        ratio: BigRational::new((opt as i64).into(), (revenue as i64).into()),
    })
}
