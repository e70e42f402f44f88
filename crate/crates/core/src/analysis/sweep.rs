//! Exhaustive worst-case additive loss over all `2^n` bid vectors.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::auctions::{randomized, AuctionKind, Rule};
use crate::bids::{AuctionParams, BidMask, BidVector};
use crate::error::{Error, Result};
use crate::surd::Surd;

pub const DEFAULT_ENUMERATION_LIMIT: usize = 20;

/// Masks per parallel task.
const CHUNK: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LossProfile {
    pub params: AuctionParams,
    pub auction: AuctionKind,
    /// Worst loss among vectors with each h-bid count.
    pub per_nh_worst: BTreeMap<usize, Surd>,
    pub global_worst: Surd,
    /// Lexicographically least vector attaining `global_worst`.
    pub witness: BidVector,
}

impl LossProfile {
    /// `global_worst / √(n·h)`.
    pub fn normalized(&self) -> f64 {
        self.global_worst.to_f64() / self.params.loss_scale()
    }
}

pub fn worst_case_sweep(params: AuctionParams, auction: AuctionKind) -> Result<LossProfile> {
    worst_case_sweep_with_limit(params, auction, DEFAULT_ENUMERATION_LIMIT)
}

pub fn worst_case_sweep_with_limit(params: AuctionParams, auction: AuctionKind, limit: usize) -> Result<LossProfile> {
    let n = params.n();
    if n > limit || n >= 64 {
        return Err(Error::EnumerationLimit { n, limit });
    }
    match auction.rule(params)? {
        Some(rule) => Ok(sweep_rule(params, auction, rule)),
        None => Ok(sweep_randomized(params)),
    }
}

/// Worst `(loss, mask)` per h-bid count; ties keep the smaller mask.
type Slots = Vec<Option<(i64, u64)>>;

fn merge(mut left: Slots, right: Slots) -> Slots {
    for (l, r) in left.iter_mut().zip(right) {
        *l = match (*l, r) {
            (None, r) => r,
            (l, None) => l,
            (Some(a), Some(b)) => Some(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
        };
    }
    left
}

fn sweep_rule(params: AuctionParams, auction: AuctionKind, rule: Rule) -> LossProfile {
    let n = params.n();
    let h = params.h() as i64;
    let total = BidMask::space_size(n);
    let chunks = total.div_ceil(CHUNK);
    let slots = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut slots: Slots = vec![None; n + 1];
            for bits in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let mask = BidMask::new(bits, n);
                let k = mask.count_high();
                let opt = (n as i64).max(h * k as i64);
                let loss = opt - rule.revenue_of_mask(params, mask) as i64;
                // ascending scan: strict improvement keeps the least mask
                if slots[k].is_none_or(|(worst, _)| loss > worst) {
                    slots[k] = Some((loss, bits));
                }
            }
            slots
        })
        .reduce(|| vec![None; n + 1], merge);

    let per_nh: BTreeMap<usize, (i64, u64)> =
        slots.into_iter().enumerate().filter_map(|(k, s)| s.map(|s| (k, s))).collect();
    let (worst, bits) = per_nh
        .values()
        .copied()
        .reduce(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("at least one vector");
    LossProfile {
        params,
        auction,
        per_nh_worst: per_nh.into_iter().map(|(k, (l, _))| (k, Surd::from_integer(l))).collect(),
        global_worst: Surd::from_integer(worst),
        witness: BidVector::from_mask(params, BidMask::new(bits, n)).expect("width matches"),
    }
}

/// The randomized auction is symmetric: its expected loss depends only on
/// `n_h`, and the least vector with `k` h-bids is `L…LH…H`.
fn sweep_randomized(params: AuctionParams) -> LossProfile {
    let n = params.n();
    let h = params.h();
    let per_nh: BTreeMap<usize, Surd> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let opt = Surd::from_integer((n as u64).max(h * k as u64) as i64);
            (k, &opt - &randomized::expectation_for_count(params, k))
        })
        .collect();
    // among equal losses the smaller k has the smaller mask
    let (&k, worst) = per_nh
        .iter()
        .reduce(|a, b| if b.1 > a.1 { b } else { a })
        .expect("n ≥ 1");
    let witness = BidVector::from_mask(params, BidMask::new((1u64 << k) - 1, n)).expect("width matches");
    LossProfile { params, auction: AuctionKind::Randomized, global_worst: worst.clone(), per_nh_worst: per_nh, witness }
}
