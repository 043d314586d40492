//! Rationals with an inline fast path.
//!
//! A value is stored as a reduced `i64` fraction whenever both parts fit and
//! as a `BigRational` otherwise, so each rational has exactly one
//! representation and derived equality and hashing are sound. Small
//! operands are combined in `i128`, where no intermediate can overflow.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Rat {
    /// Reduced, denominator positive, numerator never `i64::MIN`.
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn fits(v: i128) -> Option<i64> {
    if v > i64::MIN as i128 && v <= i64::MAX as i128 {
        Some(v as i64)
    } else {
        None
    }
}

impl Rat {
    pub(crate) const ZERO: Rat = Rat::Small(0, 1);

    pub(crate) fn integer(v: i64) -> Rat {
        match fits(v as i128) {
            Some(v) => Rat::Small(v, 1),
            None => Rat::Big(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// `num / den` with `den != 0`.
    fn from_i128(num: i128, den: i128) -> Rat {
        debug_assert!(den != 0);
        if num == 0 {
            return Rat::ZERO;
        }
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs());
        // |num|, |den| < 2^127, so g fits in i128
        let g = g as i128;
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            (n, d) = (-n, -d);
        }
        match (fits(n), fits(d)) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    /// Normalises a reduced big rational.
    pub(crate) fn from_big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rat::Small(n, d),
            _ => Rat::Big(r),
        }
    }

    pub(crate) fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(r) => r.clone(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub(crate) fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub(crate) fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(r) => r.is_integer(),
        }
    }

    pub(crate) fn numer(&self) -> BigInt {
        match self {
            Rat::Small(n, _) => BigInt::from(*n),
            Rat::Big(r) => r.numer().clone(),
        }
    }

    pub(crate) fn denom(&self) -> BigInt {
        match self {
            Rat::Small(_, d) => BigInt::from(*d),
            Rat::Big(r) => r.denom().clone(),
        }
    }

    /// Bit length of the larger of numerator and denominator.
    pub(crate) fn bits(&self) -> u64 {
        match self {
            Rat::Small(n, d) => {
                let m = n.unsigned_abs().max(d.unsigned_abs());
                u64::from(64 - m.leading_zeros())
            }
            Rat::Big(r) => r.numer().abs().bits().max(r.denom().bits()),
        }
    }

    /// `None` for zero.
    pub(crate) fn recip(&self) -> Option<Rat> {
        match self {
            Rat::Small(0, _) => None,
            Rat::Small(n, d) => Some(Rat::from_i128(*d as i128, *n as i128)),
            Rat::Big(r) => Some(Rat::from_big(r.recip())),
        }
    }

    /// `self - a * b`.
    pub(crate) fn sub_mul(&self, a: &Rat, b: &Rat) -> Rat {
        self - &(a * b)
    }
}

impl Add for &Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(0, _), r) | (r, Rat::Small(0, _)) => r.clone(),
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Rat::from_i128(a + c, b)
                } else {
                    Rat::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Rat::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            // the numerator is never i64::MIN, so negation cannot overflow
            Rat::Small(n, d) => Rat::Small(-n, *d),
            Rat::Big(r) => Rat::from_big(-r),
        }
    }
}

impl Sub for &Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        self + &(-rhs)
    }
}

impl Mul for &Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(0, _), _) | (_, Rat::Small(0, _)) => Rat::ZERO,
            (Rat::Small(1, 1), r) | (r, Rat::Small(1, 1)) => r.clone(),
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rat::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn agrees_with_bigrational_across_the_boundary() {
        let vals = [
            (0, 1),
            (1, 1),
            (-3, 4),
            (i64::MAX, 1),
            (-i64::MAX, 3),
            (1, i64::MAX),
            (i64::MAX - 1, i64::MAX),
            (7, 2),
        ];
        for &(a, b) in &vals {
            for &(c, d) in &vals {
                let (x, y) = (Rat::from_big(big(a, b)), Rat::from_big(big(c, d)));
                let (bx, by) = (big(a, b), big(c, d));
                assert_eq!(&x + &y, Rat::from_big(&bx + &by));
                assert_eq!(&x - &y, Rat::from_big(&bx - &by));
                assert_eq!(&x * &y, Rat::from_big(&bx * &by));
                if !by.is_zero() {
                    assert_eq!(y.recip().unwrap(), Rat::from_big(by.recip()));
                }
            }
        }
    }

    #[test]
    fn big_values_shrink_back() {
        let m = Rat::from_big(big(i64::MAX, 1));
        let sq = &m * &m;
        assert!(matches!(sq, Rat::Big(_)));
        let back = &sq * &m.recip().unwrap();
        assert_eq!(back, m);
        assert!(matches!(back, Rat::Small(..)));
        assert!(matches!(Rat::integer(i64::MIN), Rat::Big(_)));
        assert_eq!(-&Rat::integer(i64::MIN), Rat::from_big(big(i64::MAX, 1) + big(1, 1)));
    }
}
