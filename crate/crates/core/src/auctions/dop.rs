//! Deterministic optimal price.
//!
//! Bidder `i` is offered the fixed price that would be optimal on `b_{-i}`.
//! On bi-valued bids that compares `h·n_h(i)` (price `h`) against `n − 1`
//! (price 1). The threshold variant instead offers `h` iff `n_h(i) ≥ n/h`.

use super::{BidderView, Rule};
use crate::bids::{BidVector, MaskedBidVector, OfferSchedule, Price};
use crate::error::Result;

#[inline]
pub(crate) fn offer_from_view(view: &BidderView) -> Price {
    let n = view.params.n() as u64;
    let h = view.params.h();
    if h * view.others_high as u64 >= n - 1 {
        h
    } else {
        1
    }
}

#[inline]
pub(crate) fn threshold_offer_from_view(view: &BidderView, quota: usize) -> Price {
    if view.others_high >= quota {
        view.params.h()
    } else {
        1
    }
}

/// DOP price for bidder `i`; ties go to `h`.
pub fn offer(m: &MaskedBidVector<'_>) -> Price {
    offer_from_view(&BidderView::from_masked(m))
}

/// Threshold-DOP price for bidder `i`. Fails unless `h | n`.
pub fn threshold_offer(m: &MaskedBidVector<'_>) -> Result<Price> {
    let quota = m.params().high_quota()?;
    Ok(threshold_offer_from_view(&BidderView::from_masked(m), quota))
}

pub fn run(b: &BidVector) -> OfferSchedule {
    Rule::Dop.run(b)
}

pub fn threshold_run(b: &BidVector) -> Result<OfferSchedule> {
    let quota = b.params().high_quota()?;
    Ok(Rule::ThresholdDop { quota }.run(b))
}
