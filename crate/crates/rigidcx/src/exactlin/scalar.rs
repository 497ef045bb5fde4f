//! Exact scalars over ℤ, ℚ and prime fields.
//!
//! Every scalar is carried as a [`BigRational`]; the [`BaseRing`] decides how values are
//! normalized. Rationals are kept in lowest terms with positive denominator (guaranteed by
//! `num-rational`), prime-field values are integers in `[0, p)`, and integers have
//! denominator one.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};

/// Coefficient type used by every exact computation.
pub type Q = BigRational;

/// Builds a rational from a machine integer.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Builds the rational `n/d`.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// The base ring tag of a scalar, matrix or presented ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseRing {
    /// The integers ℤ.
    Integers,
    /// The rationals ℚ.
    Rationals,
    /// The prime field 𝔽_p.
    PrimeField(u64),
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "ZZ"),
            BaseRing::Rationals => write!(f, "QQ"),
            BaseRing::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseRing {
    /// Builds a prime field tag, checking primality.
    pub fn prime_field(p: u64) -> Result<BaseRing> {
        if is_prime(p) {
            Ok(BaseRing::PrimeField(p))
        } else {
            domain(format!("{p} is not prime"))
        }
    }

    /// True for ℚ and 𝔽_p.
    pub fn is_field(&self) -> bool {
        !matches!(self, BaseRing::Integers)
    }

    /// Reduces an arbitrary rational into canonical form for this base ring.
    ///
    /// For ℤ the value must already be integral; callers that cannot guarantee this
    /// should use [`BaseRing::normalize`].
    pub fn reduce(&self, v: Q) -> Q {
        match self {
            BaseRing::Integers | BaseRing::Rationals => v,
            BaseRing::PrimeField(p) => {
                let p = BigInt::from(*p);
                let num = v.numer().mod_floor(&p);
                let den = v.denom().mod_floor(&p);
                let inv = mod_inverse(&den, &p).expect("denominator divisible by p");
                Q::from_integer((num * inv).mod_floor(&p))
            }
        }
    }

    /// Checks membership in the base ring and returns the canonical representative.
    pub fn normalize(&self, v: Q) -> Result<Q> {
        match self {
            BaseRing::Integers => {
                if v.is_integer() {
                    Ok(v)
                } else {
                    domain(format!("{v} is not an integer"))
                }
            }
            BaseRing::Rationals => Ok(v),
            BaseRing::PrimeField(p) => {
                if (v.denom() % BigInt::from(*p)).is_zero() {
                    domain(format!("{v} has denominator divisible by {p}"))
                } else {
                    Ok(self.reduce(v))
                }
            }
        }
    }

    /// Sum in the base ring.
    pub fn add(&self, a: &Q, b: &Q) -> Q {
        self.reduce(a + b)
    }

    /// Difference in the base ring.
    pub fn sub(&self, a: &Q, b: &Q) -> Q {
        self.reduce(a - b)
    }

    /// Product in the base ring.
    pub fn mul(&self, a: &Q, b: &Q) -> Q {
        self.reduce(a * b)
    }

    /// Negation in the base ring.
    pub fn neg(&self, a: &Q) -> Q {
        self.reduce(-a)
    }

    /// Multiplicative inverse, if it exists in the base ring.
    pub fn inv(&self, a: &Q) -> Option<Q> {
        if a.is_zero() {
            return None;
        }
        match self {
            BaseRing::Integers => {
                if a.is_integer() && a.numer().abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            BaseRing::Rationals => Some(a.recip()),
            BaseRing::PrimeField(_) => Some(self.reduce(a.recip())),
        }
    }

    /// Whether `a` is a unit of the base ring.
    pub fn is_unit(&self, a: &Q) -> bool {
        self.inv(a).is_some()
    }

    /// The image of a machine integer.
    pub fn from_int(&self, n: i64) -> Q {
        self.reduce(q(n))
    }

    /// Characteristic of the base ring (0 for ℤ and ℚ).
    pub fn characteristic(&self) -> u64 {
        match self {
            BaseRing::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// Size used by the pivot rule: absolute value of the canonical representative.
    pub fn pivot_size(&self, a: &Q) -> Q {
        a.abs()
    }
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else if (-&e.gcd).is_one() {
        Some((-e.x).mod_floor(m))
    } else {
        None
    }
}

/// A scalar tagged with its base ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    base: BaseRing,
    value: Q,
}

impl Scalar {
    /// Builds a scalar, validating and normalizing the value.
    pub fn new(base: BaseRing, value: Q) -> Result<Scalar> {
        let value = base.normalize(value)?;
        Ok(Scalar { base, value })
    }

    /// The base ring tag.
    pub fn base(&self) -> BaseRing {
        self.base
    }

    /// The canonical value.
    pub fn value(&self) -> &Q {
        &self.value
    }

    /// Sum of two scalars with the same tag.
    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_base(other)?;
        Ok(Scalar {
            base: self.base,
            value: self.base.add(&self.value, &other.value),
        })
    }

    /// Product of two scalars with the same tag.
    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_base(other)?;
        Ok(Scalar {
            base: self.base,
            value: self.base.mul(&self.value, &other.value),
        })
    }

    fn same_base(&self, other: &Scalar) -> Result<()> {
        if self.base == other.base {
            Ok(())
        } else {
            domain(format!("base ring mismatch: {} vs {}", self.base, other.base))
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Lowest-terms numerator and denominator magnitudes, max of the two (rational height).
pub fn height(a: &Q) -> BigInt {
    let n = a.numer().abs();
    let d = a.denom().abs();
    if n > d {
        n
    } else {
        d
    }
}

/// Formats a rational compactly (`3`, `-1/2`).
pub fn fmt_q(a: &Q) -> String {
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// Zero of the coefficient type.
pub fn zero() -> Q {
    Q::zero()
}

/// One of the coefficient type.
pub fn one() -> Q {
    Q::one()
}
