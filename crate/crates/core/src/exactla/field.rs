//! Coefficient fields: GF(p) for a prime p, and the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::rational::Rat;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which exact field a matrix lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec(Kind);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Prime(u64),
    Rationals,
}

/// A field element in canonical form: a residue in `[0, p)` or a reduced
/// fraction with positive denominator.
///
/// Scalars carry no reference to their field; arithmetic goes through
/// [`FieldSpec`] so that a residue is always interpreted modulo the right
/// prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Repr {
    Mod(u64),
    Rat(Rat),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid on signed values
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "{a} is not invertible mod {p}");
    t0.rem_euclid(p as i128) as u64
}

impl FieldSpec {
    /// GF(p). Fails unless `p` is prime and below 2^32.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec(Kind::Prime(p)))
    }

    pub fn rationals() -> Self {
        FieldSpec(Kind::Rationals)
    }

    /// The characteristic: `Some(p)` for GF(p), `None` for the rationals.
    pub fn characteristic(&self) -> Option<u64> {
        match self.0 {
            Kind::Prime(p) => Some(p),
            Kind::Rationals => None,
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self.0, Kind::Rationals)
    }

    pub fn zero(&self) -> Scalar {
        match self.0 {
            Kind::Prime(_) => Scalar(Repr::Mod(0)),
            Kind::Rationals => Scalar(Repr::Rat(Rat::ZERO)),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self.0 {
            Kind::Prime(p) => Scalar(Repr::Mod((v as i128).rem_euclid(p as i128) as u64)),
            Kind::Rationals => Scalar(Repr::Rat(Rat::integer(v))),
        }
    }

    /// `num/den` reduced into the field. Fails when `den` vanishes in it.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        match self.0 {
            Kind::Prime(p) => {
                let pb = BigInt::from(p);
                let n = num.mod_floor(&pb).to_u64().unwrap_or(0);
                let d = den.mod_floor(&pb).to_u64().unwrap_or(0);
                if d == 0 {
                    return Err(Error::Parse(format!("denominator {den} vanishes mod {p}")));
                }
                Ok(Scalar(Repr::Mod(mul_mod(n, inv_mod(d, p), p))))
            }
            Kind::Rationals => {
                if den.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(Scalar(Repr::Rat(Rat::from_big(BigRational::new(num.clone(), den.clone())))))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match &a.0 {
            Repr::Mod(v) => *v == 0,
            Repr::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match &a.0 {
            Repr::Mod(v) => *v == 1,
            Repr::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self.0, &a.0, &b.0) {
            (Kind::Prime(p), Repr::Mod(x), Repr::Mod(y)) => Scalar(Repr::Mod((x + y) % p)),
            (Kind::Rationals, Repr::Rat(x), Repr::Rat(y)) => Scalar(Repr::Rat(x + y)),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self.0, &a.0, &b.0) {
            (Kind::Prime(p), Repr::Mod(x), Repr::Mod(y)) => Scalar(Repr::Mod((x + p - y) % p)),
            (Kind::Rationals, Repr::Rat(x), Repr::Rat(y)) => Scalar(Repr::Rat(x - y)),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self.0, &a.0, &b.0) {
            (Kind::Prime(p), Repr::Mod(x), Repr::Mod(y)) => Scalar(Repr::Mod(mul_mod(*x, *y, p))),
            (Kind::Rationals, Repr::Rat(x), Repr::Rat(y)) => Scalar(Repr::Rat(x * y)),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self.0, &a.0) {
            (Kind::Prime(p), Repr::Mod(x)) => Scalar(Repr::Mod((p - x) % p)),
            (Kind::Rationals, Repr::Rat(x)) => Scalar(Repr::Rat(-x)),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match (self.0, &a.0) {
            (Kind::Prime(p), Repr::Mod(x)) => Some(Scalar(Repr::Mod(inv_mod(*x, p)))),
            (Kind::Rationals, Repr::Rat(x)) => x.recip().map(|r| Scalar(Repr::Rat(r))),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Parses an integer (`-3`) or a fraction (`5/7`) into the field.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::Parse(format!("bad scalar `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a, b),
            None => (s, "1"),
        };
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        self.from_ratio(&num, &den)
    }

    pub fn format_scalar(&self, a: &Scalar) -> String {
        match &a.0 {
            Repr::Mod(v) => v.to_string(),
            Repr::Rat(r) if r.is_integer() => r.numer().to_string(),
            Repr::Rat(r) => format!("{}/{}", r.numer(), r.denom()),
        }
    }

    /// Canonical residue when this is GF(p).
    pub fn residue(&self, a: &Scalar) -> Option<u64> {
        match &a.0 {
            Repr::Mod(v) => Some(*v),
            Repr::Rat(_) => None,
        }
    }

    /// Rough size of a scalar, used to keep random rational data small.
    pub fn height(&self, a: &Scalar) -> u64 {
        match &a.0 {
            Repr::Mod(_) => 0,
            Repr::Rat(r) => r.bits(),
        }
    }

    pub(crate) fn mod_value(a: &Scalar) -> u64 {
        match a.0 {
            Repr::Mod(v) => v,
            Repr::Rat(_) => unreachable!("rational scalar in a GF(p) kernel"),
        }
    }

    pub(crate) fn from_mod(v: u64) -> Scalar {
        Scalar(Repr::Mod(v))
    }

    pub(crate) fn rat_value(a: &Scalar) -> &Rat {
        match &a.0 {
            Repr::Rat(r) => r,
            Repr::Mod(_) => unreachable!("residue in a rational kernel"),
        }
    }

    pub(crate) fn from_rat(r: Rat) -> Scalar {
        Scalar(Repr::Rat(r))
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Prime(p) => write!(f, "GF({p})"),
            Kind::Rationals => write!(f, "Q"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q` (or `q`) and a decimal prime.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::rationals());
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad field `{s}` (expected a prime or Q)")))?;
        FieldSpec::prime(p)
    }
}
