//! The randomized bi-valued auction.
//!
//! Bidder `i` is offered `h` with probability
//! `p(i) = clamp((h·n_h(i) − n) / (h·√n_h(i)), 0, 1)` and 1 otherwise.
//! Probabilities are kept exact: the interior value is the surd
//! `(h·m − n)/(h·m) · √m` with `m = n_h(i)`, sampled by integer comparison.

use num_bigint::BigUint;
use num_rational::BigRational;

use super::{rng, BidderView};
use crate::bids::{AuctionParams, BidVector, MaskedBidVector, OfferSchedule, Price};
use crate::surd::Surd;

/// Exact probability of offering `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OfferProbability {
    Zero,
    One,
    /// `numerator / (h·√others_high)`, strictly inside `(0, 1)`.
    Interior { numerator: u64, h: u64, others_high: u64 },
}

impl OfferProbability {
    /// Probability for a bidder who sees `others_high` h-bids.
    pub fn for_count(params: AuctionParams, others_high: usize) -> Self {
        let h = params.h();
        let m = others_high as u64;
        let n = params.n() as u64;
        let hm = h * m;
        // sign check before any division; covers m = 0
        if hm <= n {
            return OfferProbability::Zero;
        }
        let numerator = hm - n;
        if u128::from(numerator) * u128::from(numerator) >= u128::from(h) * u128::from(h) * u128::from(m) {
            return OfferProbability::One;
        }
        OfferProbability::Interior { numerator, h, others_high: m }
    }

    pub fn value(&self) -> Surd {
        match *self {
            OfferProbability::Zero => Surd::zero(),
            OfferProbability::One => Surd::one(),
            OfferProbability::Interior { numerator, h, others_high } => Surd::scaled_sqrt(
                BigRational::new(numerator.into(), (h * others_high).into()),
                others_high,
            ),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            OfferProbability::Zero => 0.0,
            OfferProbability::One => 1.0,
            OfferProbability::Interior { numerator, h, others_high } => {
                numerator as f64 / (h as f64 * (others_high as f64).sqrt())
            }
        }
    }

    /// Whether a uniform 64-bit draw `u` lands below `p`, i.e.
    /// `u / 2^64 < p`. The acceptance probability is `⌈p·2^64⌉ / 2^64`.
    pub fn accepts(&self, u: u64) -> bool {
        match *self {
            OfferProbability::Zero => false,
            OfferProbability::One => true,
            OfferProbability::Interior { numerator, h, others_high } => {
                // u·h·√m < numerator·2^64  ⇔  (u·h)²·m < (numerator·2^64)²
                let lhs = BigUint::from(u) * h;
                let lhs = &lhs * &lhs * others_high;
                let rhs = BigUint::from(numerator) << 64u32;
                lhs < &rhs * &rhs
            }
        }
    }
}

/// `p(i)` for the masked bidder.
pub fn offer_probability(m: &MaskedBidVector<'_>) -> OfferProbability {
    OfferProbability::for_count(m.params(), m.count_high())
}

/// Per-class offer probabilities for a bid vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OfferProbabilities {
    pub p_low_gets_one: Surd,
    pub p_high_gets_one: Surd,
    pub p_high_gets_h: Surd,
}

impl OfferProbabilities {
    /// A 1-bidder sees `n_h` h-bids and an h-bidder sees `n_h − 1`. With no
    /// h-bidders the high class is empty and its entries use `n_h(i) = 0`.
    pub fn for_vector(b: &BidVector) -> Self {
        let count = b.count_high();
        let low = OfferProbability::for_count(b.params(), count).value();
        let high = OfferProbability::for_count(b.params(), count.saturating_sub(1)).value();
        OfferProbabilities {
            p_low_gets_one: &Surd::one() - &low,
            p_high_gets_one: &Surd::one() - &high,
            p_high_gets_h: high,
        }
    }
}

fn offer_from_view(view: &BidderView, seed: u64) -> Price {
    let p = OfferProbability::for_count(view.params, view.others_high);
    if p.accepts(rng::word(seed, view.index as u64)) {
        view.params.h()
    } else {
        1
    }
}

/// One draw of the auction. Bidder `i`'s coin is keyed by `(seed, i)`.
pub fn run(b: &BidVector, seed: u64) -> OfferSchedule {
    let offers: Vec<Price> = BidderView::all(b).iter().map(|v| offer_from_view(v, seed)).collect();
    b.settle(&offers).expect("offers are 1 or h")
}

/// Exact expected revenue, `(n − n_h)(1 − p_L) + n_h(h·p_H + 1 − p_H)`.
pub fn exact_expectation(b: &BidVector) -> Surd {
    expectation_for_count(b.params(), b.count_high())
}

/// Expected revenue depends on `b` only through `n_h`.
pub fn expectation_for_count(params: AuctionParams, count_high: usize) -> Surd {
    let n = params.n();
    let h = params.h();
    let low = OfferProbability::for_count(params, count_high).value();
    let from_low = &(&Surd::one() - &low) * &int((n - count_high) as u64);
    if count_high == 0 {
        return from_low;
    }
    let high = OfferProbability::for_count(params, count_high - 1).value();
    // h·p + (1 − p) = 1 + (h − 1)·p
    let per_high = &Surd::one() + &(&high * &int(h - 1));
    &from_low + &(&per_high * &int(count_high as u64))
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(v.into())
}
