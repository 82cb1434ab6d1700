//! Exact dyadic rationals `m / 2^e`.
//!
//! Distance sequences and their weighted degrees only ever divide by powers
//! of two, so a big-integer mantissa plus a binary exponent keeps every
//! operation exact without gcd normalisation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `mant / 2^exp`, normalised so that `mant` is odd, or `mant == 0` and `exp == 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    mant: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(mant: impl Into<BigInt>, exp: u32) -> Self {
        let mut d = Dyadic {
            mant: mant.into(),
            exp,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic::default()
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(v, 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// `2^k` for any signed `k`.
    pub fn pow2(k: i64) -> Self {
        if k >= 0 {
            Dyadic::from_bigint(BigInt::one() << (k as usize))
        } else {
            Dyadic::new(1, (-k) as u32)
        }
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        if self.exp == 0 {
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0).min(self.exp as u64) as u32;
        if tz > 0 {
            self.mant >>= tz as usize;
            self.exp -= tz;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    /// Multiplies by `2^k` (divides when `k < 0`).
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        if k >= 0 {
            let k = k as u64;
            if k <= self.exp as u64 {
                Dyadic {
                    mant: self.mant.clone(),
                    exp: self.exp - k as u32,
                }
            } else {
                Dyadic {
                    mant: &self.mant << (k - self.exp as u64) as usize,
                    exp: 0,
                }
            }
        } else {
            Dyadic::new(self.mant.clone(), self.exp + (-k) as u32)
        }
    }

    pub fn half(&self) -> Dyadic {
        self.shl(-1)
    }

    pub fn mul_int(&self, k: i64) -> Dyadic {
        Dyadic::new(&self.mant * k, self.exp)
    }

    /// Returns the value as an integer when it is one.
    pub fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.mant.clone())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_bigint().and_then(|v| v.to_i64())
    }

    pub fn to_f64(&self) -> f64 {
        // Shift the mantissa down to 64 significant bits before converting
        // so huge exponents do not overflow to inf/inf.
        let bits = self.mant.bits();
        if bits > 64 {
            let drop = bits - 64;
            let m = (&self.mant >> drop as usize).to_f64().unwrap_or(f64::NAN);
            m * 2f64.powi(drop as i32 - self.exp as i32)
        } else {
            self.mant.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(self.exp as i32))
        }
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, u32) {
        match a.exp.cmp(&b.exp) {
            Ordering::Equal => (a.mant.clone(), b.mant.clone(), a.exp),
            Ordering::Less => (
                &a.mant << (b.exp - a.exp) as usize,
                b.mant.clone(),
                b.exp,
            ),
            Ordering::Greater => (
                a.mant.clone(),
                &b.mant << (a.exp - b.exp) as usize,
                a.exp,
            ),
        }
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let (a, b, e) = Dyadic::aligned(self, rhs);
        Dyadic::new(a + b, e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Dyadic::aligned(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.mant)
        } else if self.exp <= 64 {
            write!(f, "{}/{}", self.mant, BigInt::one() << self.exp as usize)
        } else {
            write!(f, "{}/2^{}", self.mant, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Dyadic {
    type Err = String;

    /// Accepts `a`, `a/b` with `b` a power of two, or `a/2^k`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let mant: BigInt = num.parse().map_err(|_| format!("bad numerator `{num}`"))?;
        let exp = match den {
            None => 0,
            Some(d) => {
                if let Some(k) = d.strip_prefix("2^") {
                    k.parse::<u32>().map_err(|_| format!("bad exponent `{k}`"))?
                } else {
                    let d: BigInt = d.parse().map_err(|_| format!("bad denominator `{d}`"))?;
                    if d <= BigInt::zero() || (&d & (&d - 1u32)) != BigInt::zero() {
                        return Err(format!("denominator `{d}` is not a power of two"));
                    }
                    (d.bits() - 1) as u32
                }
            }
        };
        Ok(Dyadic::new(mant, exp))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
