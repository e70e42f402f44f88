//! Exact arithmetic for rationals extended by square roots.
//!
//! The randomized auction offers `h` with probability
//! `(h·m − n) / (h·√m)`, which is irrational for most `m`. Expected revenues
//! are therefore rational combinations of a few square roots. [`Surd`]
//! stores such a combination in canonical form (square-free radicands, no
//! zero coefficients) so equality is structural and ordering is decided by
//! interval refinement, never by floating point.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational used for every exact identity.
pub type ExactRational = BigRational;

/// Splits `r` as `s² · f` with `f` square-free; returns `(s, f)`.
pub fn square_free_split(mut r: u64) -> (u64, u64) {
    if r == 0 {
        return (0, 1);
    }
    let mut outside = 1u64;
    let mut inside = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= r {
        let mut exp = 0;
        while r % p == 0 {
            r /= p;
            exp += 1;
        }
        outside *= p.pow(exp / 2);
        if exp % 2 == 1 {
            inside *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (outside, inside * r)
}

/// Smallest integer `k` with `k ≥ √r`.
pub fn ceil_sqrt(r: u64) -> u64 {
    let s = r.sqrt();
    if s * s == r {
        s
    } else {
        s + 1
    }
}

/// A finite sum `Σ c_r · √r` over square-free radicands `r` with rational
/// coefficients. Radicand `1` holds the rational part.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    terms: BTreeMap<u64, BigRational>,
}

impl Surd {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_integer(value: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_rational(value: BigRational) -> Self {
        Self::scaled_sqrt(value, 1)
    }

    /// `coeff · √radicand`, canonicalized.
    pub fn scaled_sqrt(coeff: BigRational, radicand: u64) -> Self {
        let mut out = Self::zero();
        out.add_term(coeff, radicand);
        out
    }

    pub fn sqrt(radicand: u64) -> Self {
        Self::scaled_sqrt(BigRational::one(), radicand)
    }

    fn add_term(&mut self, coeff: BigRational, radicand: u64) {
        if coeff.is_zero() || radicand == 0 {
            return;
        }
        let (outside, inside) = square_free_split(radicand);
        let coeff = coeff * BigRational::from_integer(BigInt::from(outside));
        let slot = self.terms.entry(inside).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&inside);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&r| r == 1)
    }

    /// The value as a rational, if it has no irrational part.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Iterates `(radicand, coefficient)` pairs in increasing radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(&r, c)| (r, c))
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .fold(0.0, |acc, (&r, c)| acc + c.to_f64().unwrap_or(f64::NAN) * (r as f64).sqrt())
    }

    /// Exact sign. Square roots of distinct square-free integers are linearly
    /// independent over the rationals, so a non-empty canonical sum is never
    /// zero and refinement terminates.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = self.to_rational() {
            return q.cmp(&BigRational::zero());
        }
        let mut bits = 32u32;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// Rational interval `[lo, hi]` containing the value, with each root
    /// approximated to within `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let scale = BigUint::one() << bits;
        let denom = BigInt::from(scale.clone());
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (&r, c) in &self.terms {
            if r == 1 {
                lo += c;
                hi += c;
                continue;
            }
            let scaled = BigUint::from(r) * &scale * &scale;
            let root_lo = scaled.sqrt();
            let root_hi = &root_lo + BigUint::one();
            let below = BigRational::new(BigInt::from_biguint(Sign::Plus, root_lo), denom.clone());
            let above = BigRational::new(BigInt::from_biguint(Sign::Plus, root_hi), denom.clone());
            if c.is_positive() {
                lo += c * &below;
                hi += c * &above;
            } else {
                lo += c * &above;
                hi += c * &below;
            }
        }
        (lo, hi)
    }
}

impl From<BigRational> for Surd {
    fn from(value: BigRational) -> Self {
        Self::from_rational(value)
    }
}

impl From<i64> for Surd {
    fn from(value: i64) -> Self {
        Self::from_integer(value)
    }
}

impl Add<&Surd> for &Surd {
    type Output = Surd;

    fn add(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (&r, c) in &rhs.terms {
            out.add_term(c.clone(), r);
        }
        out
    }
}

impl Add for Surd {
    type Output = Surd;

    fn add(self, rhs: Surd) -> Surd {
        &self + &rhs
    }
}

impl Neg for &Surd {
    type Output = Surd;

    fn neg(self) -> Surd {
        Surd {
            terms: self.terms.iter().map(|(&r, c)| (r, -c)).collect(),
        }
    }
}

impl Neg for Surd {
    type Output = Surd;

    fn neg(self) -> Surd {
        -&self
    }
}

impl Sub<&Surd> for &Surd {
    type Output = Surd;

    fn sub(self, rhs: &Surd) -> Surd {
        self + &(-rhs)
    }
}

impl Sub for Surd {
    type Output = Surd;

    fn sub(self, rhs: Surd) -> Surd {
        &self - &rhs
    }
}

impl Mul<&BigRational> for &Surd {
    type Output = Surd;

    fn mul(self, rhs: &BigRational) -> Surd {
        if rhs.is_zero() {
            return Surd::zero();
        }
        Surd {
            terms: self.terms.iter().map(|(&r, c)| (r, c * rhs)).collect(),
        }
    }
}

impl Mul<&Surd> for &Surd {
    type Output = Surd;

    fn mul(self, rhs: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (&r1, c1) in &self.terms {
            for (&r2, c2) in &rhs.terms {
                out.add_term(c1 * c2, r1 * r2);
            }
        }
        out
    }
}

impl Mul for Surd {
    type Output = Surd;

    fn mul(self, rhs: Surd) -> Surd {
        &self * &rhs
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (&r, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if r == 1 {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "sqrt({r})")?;
            } else {
                write!(f, "{magnitude}*sqrt({r})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn square_free_split_small_values() {
        assert_eq!(square_free_split(1), (1, 1));
        assert_eq!(square_free_split(12), (2, 3));
        assert_eq!(square_free_split(72), (6, 2));
        assert_eq!(square_free_split(49), (7, 1));
        assert_eq!(square_free_split(97), (1, 97));
    }

    #[test]
    fn ceil_sqrt_matches_definition() {
        for r in 0..2000u64 {
            let k = ceil_sqrt(r);
            assert!(k * k >= r);
            assert!(k == 0 || (k - 1) * (k - 1) < r);
        }
    }

    #[test]
    fn perfect_squares_collapse_to_rationals() {
        let s = Surd::scaled_sqrt(q(1, 3), 9);
        assert_eq!(s.to_rational(), Some(q(1, 1)));
        assert_eq!(Surd::sqrt(8), Surd::scaled_sqrt(q(2, 1), 2));
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = Surd::sqrt(11) + Surd::from_integer(2);
        let b = Surd::sqrt(11);
        assert_eq!(&a - &b, Surd::from_integer(2));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn sign_of_close_irrational_sums() {
        // 140/99 < √2 < 99/70
        let lower = Surd::sqrt(2) - Surd::from_rational(q(140, 99));
        let upper = Surd::from_rational(q(99, 70)) - Surd::sqrt(2);
        assert_eq!(lower.signum(), Ordering::Greater);
        assert_eq!(upper.signum(), Ordering::Greater);
        // √2 + √3 vs √10: 5 + 2√6 ≈ 9.899 < 10
        let diff = Surd::sqrt(2) + Surd::sqrt(3) - Surd::sqrt(10);
        assert_eq!(diff.signum(), Ordering::Less);
    }

    #[test]
    fn products_merge_radicands() {
        let p = Surd::sqrt(6) * Surd::sqrt(10);
        assert_eq!(p, Surd::scaled_sqrt(q(2, 1), 15));
        let sq = (Surd::from_integer(1) + Surd::sqrt(2)) * (Surd::from_integer(1) + Surd::sqrt(2));
        assert_eq!(sq, Surd::from_integer(3) + Surd::scaled_sqrt(q(2, 1), 2));
    }

    #[test]
    fn ordering_agrees_with_floats_when_far_apart() {
        let a = Surd::scaled_sqrt(q(3, 7), 11);
        let b = Surd::from_rational(q(7, 5));
        assert_eq!(a.cmp(&b), a.to_f64().partial_cmp(&b.to_f64()).unwrap());
    }

    #[test]
    fn display_is_readable() {
        let s = Surd::from_rational(q(3, 2)) - Surd::scaled_sqrt(q(1, 4), 11);
        assert_eq!(s.to_string(), "3/2 - 1/4*sqrt(11)");
        assert_eq!(Surd::zero().to_string(), "0");
        assert!(Surd::zero().to_f64().is_sign_positive());
        assert_eq!((-Surd::sqrt(5)).to_string(), "-sqrt(5)");
    }
}
