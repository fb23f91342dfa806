//! Exact half-integer scalars.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A number of the form `k / 2` with `k` an arbitrary-precision integer.
///
/// Only the numerator over the fixed denominator 2 is stored, so equality and
/// ordering are plain integer comparisons.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Half {
    twice: BigInt,
}

impl Half {
    pub fn zero() -> Self {
        Half {
            twice: BigInt::zero(),
        }
    }

    /// Builds the value `twice / 2`.
    pub fn from_twice(twice: impl Into<BigInt>) -> Self {
        Half {
            twice: twice.into(),
        }
    }

    pub fn from_int(value: impl Into<BigInt>) -> Self {
        Half {
            twice: value.into() * 2,
        }
    }

    /// Converts an exact rational if it lies on the half-integer lattice.
    pub fn from_rational(value: &BigRational) -> Option<Self> {
        let doubled = value * BigInt::from(2);
        doubled.is_integer().then(|| Half {
            twice: doubled.to_integer(),
        })
    }

    /// Numerator over the denominator 2.
    pub fn twice(&self) -> &BigInt {
        &self.twice
    }

    pub fn is_zero(&self) -> bool {
        self.twice.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.twice.is_even()
    }

    pub fn abs(&self) -> Self {
        Half {
            twice: self.twice.abs(),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.twice.clone(), BigInt::from(2))
    }

    pub fn to_f64(&self) -> f64 {
        self.twice.to_f64().unwrap_or(f64::NAN) / 2.0
    }

    /// `(a/2)·(b/2) = ab/4`, which is only a half-integer when `ab` is even.
    pub fn checked_mul(&self, other: &Half) -> Option<Half> {
        let product = &self.twice * &other.twice;
        product.is_even().then(|| Half { twice: product / 2 })
    }

    pub fn mul_int(&self, k: &BigInt) -> Half {
        Half {
            twice: &self.twice * k,
        }
    }
}

impl From<i64> for Half {
    fn from(value: i64) -> Self {
        Half::from_int(value)
    }
}

impl From<BigInt> for Half {
    fn from(value: BigInt) -> Self {
        Half::from_int(value)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_even() {
            write!(f, "{}", &self.twice / 2)
        } else {
            let sign = if self.twice.is_negative() { "-" } else { "" };
            write!(f, "{}{}.5", sign, self.twice.abs() / 2)
        }
    }
}

impl Add for &Half {
    type Output = Half;
    fn add(self, rhs: &Half) -> Half {
        Half {
            twice: &self.twice + &rhs.twice,
        }
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, rhs: Half) -> Half {
        Half {
            twice: self.twice + rhs.twice,
        }
    }
}

impl Sub for &Half {
    type Output = Half;
    fn sub(self, rhs: &Half) -> Half {
        Half {
            twice: &self.twice - &rhs.twice,
        }
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, rhs: Half) -> Half {
        Half {
            twice: self.twice - rhs.twice,
        }
    }
}

impl AddAssign<&Half> for Half {
    fn add_assign(&mut self, rhs: &Half) {
        self.twice += &rhs.twice;
    }
}

impl SubAssign<&Half> for Half {
    fn sub_assign(&mut self, rhs: &Half) {
        self.twice -= &rhs.twice;
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half { twice: -self.twice }
    }
}

impl Neg for &Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half {
            twice: -&self.twice,
        }
    }
}

impl Mul<&BigInt> for &Half {
    type Output = Half;
    fn mul(self, rhs: &BigInt) -> Half {
        self.mul_int(rhs)
    }
}
