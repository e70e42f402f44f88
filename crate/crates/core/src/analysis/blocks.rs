//! Checker for the block structure of the derandomized schedule.
//!
//! Split each bidder class, in index order, into runs of `b` members, where
//! `b` is the class's modulus. Every full run must contain exactly `a⁺`
//! offers of `h`; a trailing partial run at most `a⁺`.

use rayon::prelude::*;
use serde::Serialize;

use crate::auctions::derand::{self, DerandState};
use crate::auctions::BidderView;
use crate::bids::{AuctionParams, Bid, BidMask, BidVector, Price};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockViolation {
    pub class: BidClass,
    /// 0-based run number within the class.
    pub block: usize,
    /// 1-based indices of the run's members.
    pub bidders: Vec<usize>,
    pub partial: bool,
    pub expected_high_offers: u64,
    pub found_high_offers: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BidClass {
    LowBidders,
    HighBidders,
}

/// Runs the derandomized auction on `b` and checks its offers.
pub fn block_structure_check(b: &BidVector) -> Result<(), BlockViolation> {
    check_offer_blocks(b, derand::run(b).offers())
}

/// Checks an arbitrary offer sequence against the block counts the
/// derandomized auction must produce on `b`.
pub fn check_offer_blocks(b: &BidVector, offers: &[Price]) -> Result<(), BlockViolation> {
    assert_eq!(offers.len(), b.n(), "one offer per bidder");
    let views = BidderView::all(b);
    for (class, bid) in [(BidClass::LowBidders, Bid::Low), (BidClass::HighBidders, Bid::High)] {
        let members: Vec<usize> = (1..=b.n()).filter(|&i| b.bids()[i - 1] == bid).collect();
        let Some(&first) = members.first() else { continue };
        // a and b are shared by the whole class
        let state = DerandState::from_view(&views[first - 1]);
        let quota = state.clamped_a();
        for (block, run) in members.chunks(state.b_val as usize).enumerate() {
            let found = run.iter().filter(|&&i| offers[i - 1] == b.h()).count() as u64;
            let partial = (run.len() as u64) < state.b_val;
            let ok = if partial { found <= quota } else { found == quota };
            if !ok {
                return Err(BlockViolation {
                    class,
                    block,
                    bidders: run.to_vec(),
                    partial,
                    expected_high_offers: quota,
                    found_high_offers: found,
                });
            }
        }
    }
    Ok(())
}

/// Checks every vector of width `n`. Returns the number checked, or the
/// least failing vector.
pub fn block_structure_sweep(params: AuctionParams) -> Result<u64, (BidVector, BlockViolation)> {
    let n = params.n();
    let total = BidMask::space_size(n);
    let failure = (0..total).into_par_iter().find_first(|&bits| {
        let b = BidVector::from_mask(params, BidMask::new(bits, n)).expect("width matches");
        block_structure_check(&b).is_err()
    });
    match failure {
        None => Ok(total),
        Some(bits) => {
            let b = BidVector::from_mask(params, BidMask::new(bits, n)).expect("width matches");
            let violation = block_structure_check(&b).expect_err("failed above");
            Err((b, violation))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_low_passes_vacuously() {
        let b = BidVector::all_low(AuctionParams::new(9, 3).unwrap());
        assert_eq!(block_structure_check(&b), Ok(()));
    }

    #[test]
    fn single_flip_is_caught() {
        // 1-bidders see n_h = 5: a = 15 − 12 = 3, b = ⌈3√5⌉ = 7, one full run
        let p = AuctionParams::new(12, 3).unwrap();
        let b = BidVector::with_leading_high(p, 5);
        let mut offers = derand::run(&b).offers().to_vec();
        assert_eq!(check_offer_blocks(&b, &offers), Ok(()));
        let target = (1..=12).find(|&i| b.bids()[i - 1] == Bid::Low && offers[i - 1] == 1).unwrap();
        offers[target - 1] = 3;
        let err = check_offer_blocks(&b, &offers).unwrap_err();
        assert_eq!(err.class, BidClass::LowBidders);
        assert!(err.bidders.contains(&target));
        assert!(!err.partial);
        assert_eq!(err.found_high_offers, err.expected_high_offers + 1);
    }

    #[test]
    fn sweep_passes_at_small_width() {
        assert_eq!(block_structure_sweep(AuctionParams::new(10, 3).unwrap()), Ok(1024));
    }
}
