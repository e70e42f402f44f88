//! Bid vectors, the masked view `b_{-i}`, settlement and the fixed-price
//! benchmark.
//!
//! Bidder indices are 1-based everywhere in the public API.

use std::fmt;

use crate::error::{Error, Result};

/// A posted price. Every auction in this crate offers either `1` or `h`.
pub type Price = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AuctionParams {
    n: usize,
    h: u64,
}

impl AuctionParams {
    pub fn new(n: usize, h: u64) -> Result<Self> {
        if n == 0 || h < 2 {
            return Err(Error::InvalidParams { n, h });
        }
        Ok(Self { n, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    /// `√(n·h)`, the scale of every additive loss in this setting.
    pub fn loss_scale(&self) -> f64 {
        (self.n as f64 * self.h as f64).sqrt()
    }

    /// Returns `n / h`, or an error when `h ∤ n`.
    pub fn high_quota(&self) -> Result<usize> {
        let h = self.h as usize;
        if self.n % h != 0 {
            return Err(Error::NotDivisible { n: self.n, h: self.h });
        }
        Ok(self.n / h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bid {
    /// Value 1.
    Low,
    /// Value `h`.
    High,
}

impl Bid {
    pub fn value(self, h: u64) -> u64 {
        match self {
            Bid::Low => 1,
            Bid::High => h,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Bid::Low => Bid::High,
            Bid::High => Bid::Low,
        }
    }

    fn symbol(self) -> char {
        match self {
            Bid::Low => 'L',
            Bid::High => 'H',
        }
    }
}

/// Packed bid vector for enumeration, `n ≤ 64`.
///
/// Bidder `i` lives in bit `n − i`, so bidder 1 is the most significant bit
/// and numeric order on masks equals lexicographic order on bid sequences
/// (with `L < H`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BidMask {
    bits: u64,
    n: usize,
}

impl BidMask {
    pub const MAX_BIDDERS: usize = 64;

    pub fn new(bits: u64, n: usize) -> Self {
        assert!(n >= 1 && n <= Self::MAX_BIDDERS, "mask width {n} out of range");
        let bits = if n == 64 { bits } else { bits & ((1u64 << n) - 1) };
        Self { bits, n }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// 1-based.
    #[inline]
    pub fn is_high(&self, i: usize) -> bool {
        (self.bits >> (self.n - i)) & 1 == 1
    }

    pub fn count_high(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Number of vectors of width `n`, i.e. `2^n`.
    pub fn space_size(n: usize) -> u64 {
        assert!(n < 64, "cannot enumerate 2^{n} vectors");
        1u64 << n
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BidVector {
    params: AuctionParams,
    bids: Vec<Bid>,
}

impl BidVector {
    pub fn new(params: AuctionParams, bids: Vec<Bid>) -> Result<Self> {
        if bids.len() != params.n() {
            return Err(Error::LengthMismatch { expected: params.n(), actual: bids.len() });
        }
        Ok(Self { params, bids })
    }

    /// Parses `H`/`L` (or `1`/`0`) characters, bidder 1 first.
    pub fn parse(params: AuctionParams, text: &str) -> Result<Self> {
        let bids = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'H' | 'h' | '1' => Ok(Bid::High),
                'L' | 'l' | '0' => Ok(Bid::Low),
                other => Err(Error::InvalidBid(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, bids)
    }

    pub fn uniform(params: AuctionParams, bid: Bid) -> Self {
        Self { params, bids: vec![bid; params.n()] }
    }

    pub fn all_low(params: AuctionParams) -> Self {
        Self::uniform(params, Bid::Low)
    }

    pub fn all_high(params: AuctionParams) -> Self {
        Self::uniform(params, Bid::High)
    }

    /// The first `high` bidders bid `h`, the rest bid 1.
    pub fn with_leading_high(params: AuctionParams, high: usize) -> Self {
        let bids = (0..params.n())
            .map(|j| if j < high { Bid::High } else { Bid::Low })
            .collect();
        Self { params, bids }
    }

    pub fn from_mask(params: AuctionParams, mask: BidMask) -> Result<Self> {
        if mask.len() != params.n() {
            return Err(Error::LengthMismatch { expected: params.n(), actual: mask.len() });
        }
        let bids = (1..=params.n())
            .map(|i| if mask.is_high(i) { Bid::High } else { Bid::Low })
            .collect();
        Ok(Self { params, bids })
    }

    pub fn to_mask(&self) -> Option<BidMask> {
        let n = self.params.n();
        if n > BidMask::MAX_BIDDERS {
            return None;
        }
        let bits = self
            .bids
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b == Bid::High));
        Some(BidMask::new(bits, n))
    }

    pub fn params(&self) -> AuctionParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn h(&self) -> u64 {
        self.params.h()
    }

    pub fn bids(&self) -> &[Bid] {
        &self.bids
    }

    /// Bid of bidder `i` (1-based).
    pub fn bid(&self, i: usize) -> Result<Bid> {
        self.check_index(i)?;
        Ok(self.bids[i - 1])
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        Ok(())
    }

    /// `n_h(b)`.
    pub fn count_high(&self) -> usize {
        self.bids.iter().filter(|&&b| b == Bid::High).count()
    }

    /// Best single posted price revenue, `max{n, h·n_h(b)}`.
    pub fn offline_optimal(&self) -> u64 {
        (self.n() as u64).max(self.h() * self.count_high() as u64)
    }

    /// The view `b_{-i}` of everyone but bidder `i`.
    pub fn mask(&self, i: usize) -> Result<MaskedBidVector<'_>> {
        self.check_index(i)?;
        Ok(MaskedBidVector { base: self, masked: i })
    }

    /// Copy with bidder `i`'s bid replaced.
    pub fn with_bid(&self, i: usize, bid: Bid) -> Result<Self> {
        self.check_index(i)?;
        let mut out = self.clone();
        out.bids[i - 1] = bid;
        Ok(out)
    }

    pub fn flipped(&self, i: usize) -> Result<Self> {
        let current = self.bid(i)?;
        self.with_bid(i, current.flipped())
    }

    /// `H`/`L` string, bidder 1 first.
    pub fn to_bitstring(&self) -> String {
        self.bids.iter().map(|b| b.symbol()).collect()
    }

    /// Applies per-bidder offers: an offer is accepted iff it does not
    /// exceed the bid.
    pub fn settle(&self, offers: &[Price]) -> Result<OfferSchedule> {
        if offers.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), actual: offers.len() });
        }
        let h = self.h();
        if let Some(&bad) = offers.iter().find(|&&p| p != 1 && p != h) {
            return Err(Error::InvalidOffer { offer: bad, h });
        }
        let payments: Vec<u64> = offers
            .iter()
            .zip(&self.bids)
            .map(|(&offer, &bid)| if offer <= bid.value(h) { offer } else { 0 })
            .collect();
        let revenue = payments.iter().sum();
        Ok(OfferSchedule { offers: offers.to_vec(), payments, revenue })
    }
}

impl fmt::Debug for BidVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BidVector(n={}, h={}, {})", self.n(), self.h(), self.to_bitstring())
    }
}

impl fmt::Display for BidVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// `b_{-i}`: a bid vector with bidder `i`'s bid hidden.
///
/// There is no accessor for the masked bid, so anything computed from this
/// view is bid-independent by construction.
#[derive(Clone, Copy)]
pub struct MaskedBidVector<'a> {
    base: &'a BidVector,
    masked: usize,
}

impl<'a> MaskedBidVector<'a> {
    pub fn params(&self) -> AuctionParams {
        self.base.params
    }

    /// The masked bidder's 1-based index.
    pub fn index(&self) -> usize {
        self.masked
    }

    /// `(j, b_j)` for every `j ≠ i`, in index order.
    pub fn others(&self) -> impl Iterator<Item = (usize, Bid)> + 'a {
        let masked = self.masked;
        self.base
            .bids
            .iter()
            .enumerate()
            .map(|(k, &b)| (k + 1, b))
            .filter(move |&(j, _)| j != masked)
    }

    /// `n_h(i)`, the number of `h`-bids in `b_{-i}`.
    pub fn count_high(&self) -> usize {
        self.others().filter(|&(_, b)| b == Bid::High).count()
    }
}

impl fmt::Debug for MaskedBidVector<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = self
            .base
            .bids
            .iter()
            .enumerate()
            .map(|(k, b)| if k + 1 == self.masked { '?' } else { b.symbol() })
            .collect();
        write!(f, "MaskedBidVector({text})")
    }
}

/// Offers, payments and revenue of one auction run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OfferSchedule {
    offers: Vec<Price>,
    payments: Vec<u64>,
    revenue: u64,
}

impl OfferSchedule {
    pub fn offers(&self) -> &[Price] {
        &self.offers
    }

    pub fn payments(&self) -> &[u64] {
        &self.payments
    }

    pub fn revenue(&self) -> u64 {
        self.revenue
    }
}
