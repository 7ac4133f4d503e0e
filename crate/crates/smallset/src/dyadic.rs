//! Exact dyadic rationals `m / 2^e` with an arbitrary-precision mantissa.
//!
//! Every weight in this crate (block weights, prefix weights, tail sums,
//! epsilon schedules) is dyadic, so every inequality the constructions rely
//! on is decided exactly. There is no floating point anywhere in the
//! weight path.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// `mantissa / 2^exponent`, kept in lowest terms: the mantissa is odd, or the
/// exponent is zero (zero itself is stored as `0 / 2^0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: u32,
}

impl Dyadic {
    pub fn new(mantissa: impl Into<BigInt>, exponent: u32) -> Self {
        let mut d = Dyadic {
            mantissa: mantissa.into(),
            exponent,
        };
        d.normalize();
        d
    }

    /// `numer / 2^exp`, the shape of every block weight `|J| / 2^{|I|}`.
    pub fn ratio(numer: impl Into<BigInt>, exp: u32) -> Self {
        Self::new(numer, exp)
    }

    /// `2^p` for any integer `p`, positive or negative.
    pub fn pow2(p: i64) -> Self {
        if p >= 0 {
            Dyadic {
                mantissa: BigInt::one() << p as usize,
                exponent: 0,
            }
        } else {
            Dyadic {
                mantissa: BigInt::one(),
                exponent: (-p) as u32,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Multiply by `2^p` without changing the mantissa's odd part.
    pub fn mul_pow2(&self, p: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let e = self.exponent as i64 - p;
        if e >= 0 {
            Dyadic {
                mantissa: self.mantissa.clone(),
                exponent: e as u32,
            }
        } else {
            Dyadic {
                mantissa: &self.mantissa << (-e) as usize,
                exponent: 0,
            }
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.exponent as usize)
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        while self.exponent > 0 && self.mantissa.is_even() {
            self.mantissa >>= 1;
            self.exponent -= 1;
        }
    }
}

impl From<u64> for Dyadic {
    fn from(v: u64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        let a = &self.mantissa << (e - self.exponent) as usize;
        let b = &rhs.mantissa << (e - rhs.exponent) as usize;
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        let a = &self.mantissa << (e - self.exponent) as usize;
        let b = &rhs.mantissa << (e - rhs.exponent) as usize;
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(
            &self.mantissa * &rhs.mantissa,
            self.exponent + rhs.exponent,
        )
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = &self.mantissa << (e - self.exponent) as usize;
        let b = &other.mantissa << (e - other.exponent) as usize;
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/2^{}", self.mantissa, self.exponent)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `m`, `m/2^e`, and `m/d` where `d` is a power of two.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidInput(format!("not a dyadic rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => {
                let m: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Dyadic::new(m, 0))
            }
            Some((num, den)) => {
                let m: BigInt = num.trim().parse().map_err(|_| bad())?;
                let den = den.trim();
                if let Some(exp) = den.strip_prefix("2^") {
                    let e: u32 = exp.parse().map_err(|_| bad())?;
                    Ok(Dyadic::new(m, e))
                } else {
                    let d: BigInt = den.parse().map_err(|_| bad())?;
                    if !d.is_positive() {
                        return Err(bad());
                    }
                    let bits = d.bits();
                    // d must be a single set bit
                    if d != (BigInt::one() << (bits - 1) as usize) {
                        return Err(bad());
                    }
                    Ok(Dyadic::new(m, (bits - 1) as u32))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn canonical_form() {
        let d = Dyadic::new(4, 3); // 4/8 = 1/2
        assert_eq!(d, Dyadic::new(1, 1));
        assert_eq!(d.to_string(), "1/2^1");
        assert_eq!(Dyadic::new(0, 7), Dyadic::zero());
        assert_eq!(Dyadic::pow2(3).to_string(), "8");
    }

    #[test]
    fn arithmetic_matches_rationals() {
        let mut rng = SplitMix64::new(0xd1ad1c);
        for _ in 0..200 {
            let a = Dyadic::new(rng.next() as i64 % 10_000, (rng.next() % 40) as u32);
            let b = Dyadic::new(rng.next() as i64 % 10_000, (rng.next() % 40) as u32);
            let sum = &a + &b;
            assert_eq!(sum.to_rational(), a.to_rational() + b.to_rational());
            let prod = &a * &b;
            assert_eq!(prod.to_rational(), a.to_rational() * b.to_rational());
            assert_eq!(
                a.cmp(&b),
                a.to_rational().cmp(&b.to_rational()),
                "order must agree with rational value"
            );
        }
    }

    // Spec'd exactness property: (a + b) - b == a on 10^4 random pairs.
    #[test]
    fn add_sub_roundtrip_exact() {
        let mut rng = SplitMix64::new(42);
        for _ in 0..10_000 {
            let a = Dyadic::new(rng.next() as i64, (rng.next() % 64) as u32);
            let b = Dyadic::new(rng.next() as i64, (rng.next() % 64) as u32);
            assert_eq!(&(&a + &b) - &b, a);
        }
    }

    #[test]
    fn parsing() {
        assert_eq!("3/8".parse::<Dyadic>().unwrap(), Dyadic::new(3, 3));
        assert_eq!("3/2^3".parse::<Dyadic>().unwrap(), Dyadic::new(3, 3));
        assert_eq!("-5".parse::<Dyadic>().unwrap(), Dyadic::new(-5, 0));
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
    }
}
