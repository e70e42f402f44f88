//! Exhaustive bid-independence check.
//!
//! For every vector and bidder, flips that bidder's bid and compares the
//! offer (or exact offer probability) computed through the masked view.

use rayon::prelude::*;
use serde::Serialize;

use crate::auctions::{derand, dop, randomized, AuctionKind};
use crate::bids::{AuctionParams, BidMask, BidVector, MaskedBidVector};
use crate::error::{Error, Result};
use crate::surd::Surd;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthfulnessReport {
    pub n: usize,
    pub h: u64,
    pub auction: AuctionKind,
    /// `(vector, bidder)` pairs examined.
    pub checked: u64,
    /// `(vector, bidder)` pairs whose offer moved with the bidder's own bid.
    pub violations: Vec<(String, usize)>,
}

#[derive(PartialEq)]
enum Outcome {
    Price(u64),
    Probability(Surd),
}

fn outcome(auction: AuctionKind, m: &MaskedBidVector<'_>) -> Result<Outcome> {
    Ok(match auction {
        AuctionKind::Dop => Outcome::Price(dop::offer(m)),
        AuctionKind::ThresholdDop => Outcome::Price(dop::threshold_offer(m)?),
        AuctionKind::Derand => Outcome::Price(derand::offer(m)),
        AuctionKind::Randomized => Outcome::Probability(randomized::offer_probability(m).value()),
    })
}

pub fn bid_independence_sweep(params: AuctionParams, auction: AuctionKind, limit: usize) -> Result<TruthfulnessReport> {
    auction.rule(params)?;
    let (checked, violations) = flip_sweep(params, limit, |b, i| {
        outcome(auction, &b.mask(i).expect("index in range")).expect("validated above")
    })?;
    Ok(TruthfulnessReport { n: params.n(), h: params.h(), auction, checked, violations })
}

/// Evaluates `price(b, i)` and `price(b with b_i flipped, i)` for every
/// vector of width `n` and every bidder. Returns the number of pairs checked
/// and the sorted pairs where the two differ.
pub fn flip_sweep<T, F>(params: AuctionParams, limit: usize, price: F) -> Result<(u64, Vec<(String, usize)>)>
where
    T: PartialEq,
    F: Fn(&BidVector, usize) -> T + Sync,
{
    let n = params.n();
    if n > limit || n >= 64 {
        return Err(Error::EnumerationLimit { n, limit });
    }
    let mut violations: Vec<(String, usize)> = (0..BidMask::space_size(n))
        .into_par_iter()
        .flat_map_iter(|bits| {
            let b = BidVector::from_mask(params, BidMask::new(bits, n)).expect("width matches");
            (1..=n)
                .filter(|&i| price(&b, i) != price(&b.flipped(i).expect("index in range"), i))
                .map(|i| (b.to_bitstring(), i))
                .collect::<Vec<_>>()
        })
        .collect();
    violations.sort();
    Ok((BidMask::space_size(n) * n as u64, violations))
}
