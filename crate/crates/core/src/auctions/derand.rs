//! Deterministic derandomization of the randomized auction.
//!
//! With `m = n_h(i)`, `a(i) = h·m − n` and the modulus
//! `b(i) = ⌈h·√m⌉` (at least 1), bidder `i` computes
//!
//! * `X(i)`: the sum of indices `j ≠ i` with `b_j = h`,
//! * `Y(i)`: the number of `j < i` with `b_j = h`,
//! * `Z(i) = (i + X(i) + (b(i) − 1)·Y(i)) mod b(i)`,
//!
//! and is offered `h` iff `Z(i) < a(i)`. Consecutive h-bidders share `X + i`
//! and step `Y` by one, so their residues walk down by one; consecutive
//! 1-bidders walk up by one. Either way each run of `b(i)` same-class
//! bidders sees every residue once, so exactly `clamp(a, 0, b)` of them are
//! offered `h`.
//!
//! Indices are 1-based; shifting them breaks the residue walk.

use super::{BidderView, Rule};
use crate::bids::{BidVector, MaskedBidVector, OfferSchedule, Price};
use crate::error::Result;
use crate::surd::ceil_sqrt;

/// Intermediate quantities of the offer rule for one bidder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DerandState {
    pub a_val: i64,
    pub b_val: u64,
    pub x_val: u64,
    pub y_val: u64,
    pub z_val: u64,
}

impl DerandState {
    pub fn from_view(view: &BidderView) -> Self {
        let n = view.params.n() as i64;
        let h = view.params.h();
        let m = view.others_high as u64;
        let a_val = h as i64 * m as i64 - n;
        let b_val = modulus(h, m);
        let x_val = view.others_index_sum;
        let y_val = view.high_before as u64;
        let z = (view.index as u128 + x_val as u128 + (b_val as u128 - 1) * y_val as u128) % b_val as u128;
        DerandState { a_val, b_val, x_val, y_val, z_val: z as u64 }
    }

    /// `a⁺ = clamp(a, 0, b)`: the number of `h` offers in every full block.
    pub fn clamped_a(&self) -> u64 {
        self.a_val.clamp(0, self.b_val as i64) as u64
    }

    pub fn offers_high(&self) -> bool {
        (self.z_val as i64) < self.a_val
    }
}

/// `⌈h·√m⌉`, exact, and at least 1.
pub fn modulus(h: u64, m: u64) -> u64 {
    ceil_sqrt(h * h * m).max(1)
}

#[inline]
pub(crate) fn offer_from_view(view: &BidderView) -> Price {
    let n = view.params.n() as i64;
    let h = view.params.h();
    // a(i) ≤ 0 never offers h; skip the residue.
    if h as i64 * view.others_high as i64 <= n {
        return 1;
    }
    if DerandState::from_view(view).offers_high() {
        h
    } else {
        1
    }
}

/// State for bidder `i` (1-based) of `b`.
pub fn state(b: &BidVector, i: usize) -> Result<DerandState> {
    Ok(DerandState::from_view(&BidderView::from_masked(&b.mask(i)?)))
}

pub fn offer(m: &MaskedBidVector<'_>) -> Price {
    offer_from_view(&BidderView::from_masked(m))
}

/// Prices every bidder from shared totals and prefix counts in `O(n)`.
pub fn run(b: &BidVector) -> OfferSchedule {
    Rule::Derand.run(b)
}
