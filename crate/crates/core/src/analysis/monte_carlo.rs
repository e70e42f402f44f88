//! Sampling bid vectors from the lower-bound distribution.
//!
//! Sample `s` draws its bids from stream `s` of the master seed, and the
//! randomized auction's coins from a child seed of `s`. Revenue sums are
//! accumulated as integers, so reports are identical for any worker count.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::distribution::DistributionIdentities;
use crate::auctions::{randomized, rng, AuctionKind};
use crate::bids::{AuctionParams, Bid, BidVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionDReport {
    pub n: usize,
    pub h: u64,
    pub auction: AuctionKind,
    pub samples: u64,
    pub seed: u64,
    /// Present when `h | n`.
    pub exact: Option<DistributionIdentities>,
    pub mc_mean_opt: f64,
    pub mc_stderr_opt: f64,
    pub mc_mean_auction: f64,
    pub mc_stderr_auction: f64,
}

/// Draws one bid vector: each bidder bids `h` with probability `1/h`.
pub fn sample_bids(params: AuctionParams, seed: u64, sample: u64) -> BidVector {
    let mut rng = rng::stream_rng(seed, sample);
    let h = params.h();
    let bids = (0..params.n())
        .map(|_| if rng.random_range(0..h) == 0 { Bid::High } else { Bid::Low })
        .collect();
    BidVector::new(params, bids).expect("length n")
}

#[derive(Debug, Default, Clone, Copy)]
struct Moments {
    sum: u128,
    sum_sq: u128,
}

impl Moments {
    fn push(&mut self, x: u64) {
        self.sum += u128::from(x);
        self.sum_sq += u128::from(x) * u128::from(x);
    }

    fn merge(self, other: Self) -> Self {
        Moments { sum: self.sum + other.sum, sum_sq: self.sum_sq + other.sum_sq }
    }

    /// Mean and standard error of the mean.
    fn summary(&self, count: u64) -> (f64, f64) {
        let c = count as f64;
        let mean = self.sum as f64 / c;
        if count < 2 {
            return (mean, 0.0);
        }
        // exact numerator: c·Σx² − (Σx)²
        let spread = count as u128 * self.sum_sq - self.sum * self.sum;
        let var = spread as f64 / (c * (c - 1.0));
        (mean, (var / c).sqrt())
    }
}

pub fn monte_carlo_under_d(params: AuctionParams, auction: AuctionKind, samples: u64, seed: u64) -> Result<DistributionDReport> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let rule = auction.rule(params)?;
    let (opt, revenue) = (0..samples)
        .into_par_iter()
        .fold(
            || (Moments::default(), Moments::default()),
            |(mut opt, mut rev), s| {
                let b = sample_bids(params, seed, s);
                opt.push(b.offline_optimal());
                rev.push(match rule {
                    Some(rule) => rule.run(&b).revenue(),
                    None => randomized::run(&b, rng::child_seed(seed, s)).revenue(),
                });
                (opt, rev)
            },
        )
        .reduce(
            || (Moments::default(), Moments::default()),
            |a, b| (a.0.merge(b.0), a.1.merge(b.1)),
        );
    let exact = match params.high_quota() {
        Ok(_) => Some(DistributionIdentities::compute(params)?),
        Err(_) => None,
    };
    let (mc_mean_opt, mc_stderr_opt) = opt.summary(samples);
    let (mc_mean_auction, mc_stderr_auction) = revenue.summary(samples);
    Ok(DistributionDReport {
        n: params.n(),
        h: params.h(),
        auction,
        samples,
        seed,
        exact,
        mc_mean_opt,
        mc_stderr_opt,
        mc_mean_auction,
        mc_stderr_auction,
    })
}
