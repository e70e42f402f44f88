//! The bid-independent auctions.
//!
//! Every auction here prices bidder `i` from a handful of statistics of
//! `b_{-i}`, collected in [`BidderView`]. A view is built either by scanning
//! a [`MaskedBidVector`] (which cannot see the masked bid) or, for whole-vector
//! runs and sweeps, from totals and prefix counts in `O(n)` for all bidders.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bids::{AuctionParams, Bid, BidMask, BidVector, MaskedBidVector, OfferSchedule, Price};
use crate::error::{Error, Result};

pub mod derand;
pub mod dop;
pub mod randomized;
pub mod rng;

/// Identifies an auction on the command line and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuctionKind {
    /// Optimal fixed price on `b_{-i}`, ties broken toward `h`.
    Dop,
    /// `h` iff `n_h(i) ≥ n/h`; needs `h | n`.
    ThresholdDop,
    Randomized,
    Derand,
}

impl AuctionKind {
    pub const ALL: [AuctionKind; 4] =
        [AuctionKind::Dop, AuctionKind::ThresholdDop, AuctionKind::Randomized, AuctionKind::Derand];

    pub fn name(self) -> &'static str {
        match self {
            AuctionKind::Dop => "dop",
            AuctionKind::ThresholdDop => "threshold-dop",
            AuctionKind::Randomized => "randomized",
            AuctionKind::Derand => "derand",
        }
    }

    /// The deterministic offer rule, or `None` for the randomized auction.
    pub fn rule(self, params: AuctionParams) -> Result<Option<Rule>> {
        Ok(match self {
            AuctionKind::Dop => Some(Rule::Dop),
            AuctionKind::ThresholdDop => Some(Rule::ThresholdDop { quota: params.high_quota()? }),
            AuctionKind::Derand => Some(Rule::Derand),
            AuctionKind::Randomized => None,
        })
    }

    /// Whether this auction can be evaluated at `params`.
    pub fn supports(self, params: AuctionParams) -> bool {
        self.rule(params).is_ok()
    }
}

impl fmt::Display for AuctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AuctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AuctionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownAuction(s.to_string()))
    }
}

/// The statistics of `b_{-i}` that every auction in this crate consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BidderView {
    pub params: AuctionParams,
    /// 1-based index of the priced bidder.
    pub index: usize,
    /// `n_h(i)`.
    pub others_high: usize,
    /// Sum of the indices `j ≠ i` with `b_j = h`.
    pub others_index_sum: u64,
    /// Number of `j < i` with `b_j = h`.
    pub high_before: usize,
}

impl BidderView {
    pub fn from_masked(m: &MaskedBidVector<'_>) -> Self {
        let i = m.index();
        let mut view = BidderView {
            params: m.params(),
            index: i,
            others_high: 0,
            others_index_sum: 0,
            high_before: 0,
        };
        for (j, bid) in m.others() {
            if bid == Bid::High {
                view.others_high += 1;
                view.others_index_sum += j as u64;
                if j < i {
                    view.high_before += 1;
                }
            }
        }
        view
    }

    /// Views for every bidder of `b`, in index order.
    pub fn all(b: &BidVector) -> Vec<BidderView> {
        all_views(b.params(), |i| b.bids()[i - 1] == Bid::High)
    }

    /// Views for every bidder of a packed vector.
    pub fn all_from_mask(params: AuctionParams, mask: BidMask) -> Vec<BidderView> {
        all_views(params, |i| mask.is_high(i))
    }
}

fn all_views(params: AuctionParams, is_high: impl Fn(usize) -> bool) -> Vec<BidderView> {
    let n = params.n();
    let (mut total_high, mut index_sum) = (0usize, 0u64);
    for i in 1..=n {
        if is_high(i) {
            total_high += 1;
            index_sum += i as u64;
        }
    }
    let mut high_before = 0;
    let mut views = Vec::with_capacity(n);
    for i in 1..=n {
        let own = is_high(i);
        views.push(BidderView {
            params,
            index: i,
            others_high: total_high - usize::from(own),
            others_index_sum: index_sum - if own { i as u64 } else { 0 },
            high_before,
        });
        high_before += usize::from(own);
    }
    views
}

/// A deterministic offer rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Dop,
    ThresholdDop { quota: usize },
    Derand,
}

impl Rule {
    #[inline]
    pub fn offer(&self, view: &BidderView) -> Price {
        match *self {
            Rule::Dop => dop::offer_from_view(view),
            Rule::ThresholdDop { quota } => dop::threshold_offer_from_view(view, quota),
            Rule::Derand => derand::offer_from_view(view),
        }
    }

    pub fn offers(&self, b: &BidVector) -> Vec<Price> {
        BidderView::all(b).iter().map(|v| self.offer(v)).collect()
    }

    pub fn run(&self, b: &BidVector) -> OfferSchedule {
        b.settle(&self.offers(b)).expect("rules only offer 1 or h")
    }

    /// Revenue on a packed vector without materializing a schedule.
    pub fn revenue_of_mask(&self, params: AuctionParams, mask: BidMask) -> u64 {
        let h = params.h();
        BidderView::all_from_mask(params, mask)
            .iter()
            .map(|v| {
                let offer = self.offer(v);
                if offer == 1 {
                    1
                } else if mask.is_high(v.index) {
                    h
                } else {
                    0
                }
            })
            .sum()
    }
}
