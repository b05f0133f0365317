use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Field, FieldError, Ring};

/// Reduced rational number with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rat {
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn int(v: i64) -> Rat {
        Rat::from(v)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut acc = Rat::int(1);
        for _ in 0..e {
            acc = Ring::mul(&acc, self);
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Residue modulo a prime below 2³¹, `None` when p divides the denominator.
    pub fn mod_p(&self, p: u64) -> Option<u64> {
        let bp = BigInt::from(p);
        let n = ((self.numer() % &bp) + &bp) % &bp;
        let d = ((self.denom() % &bp) + &bp) % &bp;
        let n = n.to_u64()?;
        let d = d.to_u64()?;
        if d == 0 {
            return None;
        }
        Some(n * crate::linalg::modp::inv_mod(d, p) % p)
    }

    /// Bit size of numerator plus denominator, a rough cost measure.
    pub fn bits(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Rat {
        Rat(BigRational::from_integer(v))
    }
}

impl Ring for Rat {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Rat {
        Rat(BigRational::zero())
    }
    fn one(_: &()) -> Rat {
        Rat(BigRational::one())
    }
    fn from_rat(_: &(), r: &Rat) -> Rat {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, o: &Rat) -> Rat {
        Rat(&self.0 + &o.0)
    }
    fn sub(&self, o: &Rat) -> Rat {
        Rat(&self.0 - &o.0)
    }
    fn neg(&self) -> Rat {
        Rat(-&self.0)
    }
    fn mul(&self, o: &Rat) -> Rat {
        Rat(&self.0 * &o.0)
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl Field for Rat {
    fn inv(&self) -> Option<Rat> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Rat, FieldError> {
        let s = s.trim();
        let bad = || FieldError::Parse(s.to_string());
        match s.split_once('/') {
            None => Ok(Rat::from(BigInt::from_str(s).map_err(|_| bad())?)),
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                if d.is_zero() || d.is_negative() {
                    return Err(bad());
                }
                Ok(Rat(BigRational::new(n, d)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    /// Accepts "p/q" strings and plain integers.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(v) => Ok(Rat::int(v)),
        }
    }
}
