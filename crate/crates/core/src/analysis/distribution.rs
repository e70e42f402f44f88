//! Exact expectations under the i.i.d. distribution in which each bidder
//! bids `h` with probability `1/h`.
//!
//! With `k = n/h` and `w_i = C(n, i)·(h − 1)^{n−i}` (so `Pr[n_h = i] =
//! w_i / h^n`):
//!
//! * the benchmark averages `Σ_{i<k} n·w_i + Σ_{i>k} h·i·w_i + n·w_k`,
//! * threshold DOP averages the same sum with `k·w_k` in place of `n·w_k`,
//!   and equals `n` exactly,
//! * so the gap is `(n − k)·w_k / h^n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bids::AuctionParams;
use crate::error::Result;
use crate::surd::ExactRational;

/// `(w_0, …, w_n)` and `h^n`.
fn weights(n: usize, h: u64) -> (Vec<BigInt>, BigInt) {
    let mut binom = BigInt::one();
    let mut powers = vec![BigInt::one(); n + 1];
    for e in 1..=n {
        powers[e] = &powers[e - 1] * (h - 1);
    }
    let mut w = Vec::with_capacity(n + 1);
    for i in 0..=n {
        w.push(&binom * &powers[n - i]);
        binom = binom * (n - i) / (i + 1);
    }
    (w, BigInt::from(h).pow(n as u32))
}

/// `Pr[n_h = i]`.
pub fn high_count_pmf(params: AuctionParams, i: usize) -> ExactRational {
    let (w, total) = weights(params.n(), params.h());
    w.get(i).map_or_else(BigRational::zero, |wi| BigRational::new(wi.clone(), total))
}

/// The two sums, differing only in the coefficient of the `i = n/h` term.
fn boundary_sum(params: AuctionParams, boundary_coeff: impl Fn(usize, usize) -> usize) -> Result<ExactRational> {
    let n = params.n();
    let h = params.h();
    let k = params.high_quota()?;
    let (w, total) = weights(n, h);
    let mut acc = BigInt::zero();
    for (i, wi) in w.iter().enumerate() {
        let coeff = match i.cmp(&k) {
            std::cmp::Ordering::Less => BigInt::from(n),
            std::cmp::Ordering::Greater => BigInt::from(h) * i,
            std::cmp::Ordering::Equal => BigInt::from(boundary_coeff(n, k)),
        };
        acc += coeff * wi;
    }
    Ok(BigRational::new(acc, total))
}

/// Expected benchmark revenue `E[max{n, h·n_h}]`. Needs `h | n`.
pub fn exact_e_opt_under_d(params: AuctionParams) -> Result<ExactRational> {
    boundary_sum(params, |n, _| n)
}

/// Expected threshold-DOP revenue. Needs `h | n`; equals `n`.
pub fn exact_e_dop_under_d(params: AuctionParams) -> Result<ExactRational> {
    boundary_sum(params, |_, k| k)
}

/// `(n − n/h)·C(n, n/h)·(1/h)^{n/h}·(1 − 1/h)^{n − n/h}`. Needs `h | n`.
pub fn lower_bound_gap(params: AuctionParams) -> Result<ExactRational> {
    let k = params.high_quota()?;
    let coeff = BigRational::from_integer(BigInt::from(params.n() - k));
    Ok(coeff * high_count_pmf(params, k))
}

/// The three exact quantities and the identities tying them together.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistributionIdentities {
    pub n: usize,
    pub h: u64,
    #[serde(serialize_with = "crate::cli::report::serialize_rational")]
    pub e_opt: ExactRational,
    #[serde(serialize_with = "crate::cli::report::serialize_rational")]
    pub e_dop: ExactRational,
    #[serde(serialize_with = "crate::cli::report::serialize_rational")]
    pub gap: ExactRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityViolation {
    /// `E[P_DOP] ≠ n`.
    DopExpectationNotN,
    /// `E[M(b)] − n ≠ gap`.
    GapMismatch,
    /// `gap ≤ 0`.
    GapNotPositive,
}

impl IdentityViolation {
    pub fn describe(self) -> &'static str {
        match self {
            IdentityViolation::DopExpectationNotN => "expected DOP revenue under D must equal n",
            IdentityViolation::GapMismatch => "E[OPT] - n must equal the closed-form gap",
            IdentityViolation::GapNotPositive => "the lower-bound gap must be positive",
        }
    }
}

impl DistributionIdentities {
    pub fn compute(params: AuctionParams) -> Result<Self> {
        Ok(Self {
            n: params.n(),
            h: params.h(),
            e_opt: exact_e_opt_under_d(params)?,
            e_dop: exact_e_dop_under_d(params)?,
            gap: lower_bound_gap(params)?,
        })
    }

    pub fn violations(&self) -> Vec<IdentityViolation> {
        let n = BigRational::from_integer(BigInt::from(self.n));
        let mut out = Vec::new();
        if self.e_dop != n {
            out.push(IdentityViolation::DopExpectationNotN);
        }
        if &self.e_opt - &n != self.gap {
            out.push(IdentityViolation::GapMismatch);
        }
        if self.gap <= BigRational::zero() {
            out.push(IdentityViolation::GapNotPositive);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn params(n: usize, h: u64) -> AuctionParams {
        AuctionParams::new(n, h).unwrap()
    }

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn pmf_sums_to_one() {
        let p = params(13, 4);
        let total: BigRational = (0..=13).map(|i| high_count_pmf(p, i)).sum();
        assert_eq!(total, BigRational::one());
    }

    #[test]
    fn small_gap_by_hand() {
        // 2·C(4,2)/16
        assert_eq!(lower_bound_gap(params(4, 2)).unwrap(), q(3, 4));
        assert_eq!(exact_e_dop_under_d(params(4, 2)).unwrap(), q(4, 1));
    }

    #[test]
    fn n_equals_h_closed_form() {
        for h in 2..=9u64 {
            let n = h as usize;
            // n + (n − 1)·n·(1/h)·(1 − 1/h)^{n−1}
            let tail = BigRational::new(BigInt::from(h - 1).pow(n as u32 - 1), BigInt::from(h).pow(n as u32 - 1));
            let expected = q(n as i64, 1) + q((n as i64 - 1) * n as i64, h as i64) * tail;
            assert_eq!(exact_e_opt_under_d(params(n, h)).unwrap(), expected);
        }
    }

    #[test]
    fn hundred_bidders_gap_value() {
        let p = params(100, 10);
        let pmf = high_count_pmf(p, 10).to_f64().unwrap();
        assert!((pmf - 0.131_865).abs() < 1e-5, "pmf {pmf}");
        let gap = lower_bound_gap(p).unwrap().to_f64().unwrap();
        assert!((gap - 11.868).abs() < 1e-3, "gap {gap}");
        assert!((gap / 1000f64.sqrt() - 0.375).abs() < 1e-3);
    }

    #[test]
    fn identities_hold_and_detect_tampering() {
        let mut ids = DistributionIdentities::compute(params(12, 3)).unwrap();
        assert!(ids.violations().is_empty());
        ids.e_dop += BigRational::one();
        assert_eq!(ids.violations(), vec![IdentityViolation::DopExpectationNotN]);
        ids.gap = BigRational::zero();
        assert_eq!(
            ids.violations(),
            vec![IdentityViolation::DopExpectationNotN, IdentityViolation::GapMismatch, IdentityViolation::GapNotPositive]
        );
    }

    #[test]
    fn indivisible_is_rejected() {
        assert!(exact_e_opt_under_d(params(10, 4)).is_err());
        assert!(exact_e_dop_under_d(params(10, 4)).is_err());
        assert!(lower_bound_gap(params(10, 4)).is_err());
    }
}
