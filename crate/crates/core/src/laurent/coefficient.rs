use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

/// Arithmetic mode of a coefficient or polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Arbitrary-precision rationals, always in lowest terms.
    Exact,
    /// IEEE double precision.
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// A single filter tap.
///
/// The two variants never mix: binary operations on an exact and a float
/// coefficient fail with [`AlgebraError::ModeMismatch`]. Use
/// [`Coefficient::to_float`] to promote explicitly.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Exact(BigRational),
    Float(f64),
}

impl Coefficient {
    /// Exact `numer / denom`, reduced. Panics if `denom == 0`.
    pub fn rational(numer: i64, denom: i64) -> Self {
        Coefficient::Exact(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn integer(value: i64) -> Self {
        Coefficient::Exact(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn float(value: f64) -> Self {
        Coefficient::Float(value)
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Coefficient::Exact(BigRational::zero()),
            Mode::Float => Coefficient::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Coefficient::Exact(BigRational::one()),
            Mode::Float => Coefficient::Float(1.0),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Coefficient::Exact(_) => Mode::Exact,
            Coefficient::Float(_) => Mode::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(r) => r.is_zero(),
            Coefficient::Float(x) => *x == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Exact(r) => r.is_one(),
            Coefficient::Float(x) => *x == 1.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Coefficient::Float(x) => *x,
        }
    }

    /// Explicit promotion to float mode.
    pub fn to_float(&self) -> Self {
        Coefficient::Float(self.to_f64())
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.mode() == other.mode() {
            Ok(())
        } else {
            Err(AlgebraError::ModeMismatch {
                left: self.mode(),
                right: other.mode(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Coefficient::Exact(a + b),
            (Coefficient::Float(a), Coefficient::Float(b)) => Coefficient::Float(a + b),
            _ => unreachable!(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Coefficient::Exact(a * b),
            (Coefficient::Float(a), Coefficient::Float(b)) => Coefficient::Float(a * b),
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            Coefficient::Exact(a) => Coefficient::Exact(-a),
            Coefficient::Float(a) => Coefficient::Float(-a),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Coefficient::Exact(a) => Coefficient::Exact(a.recip()),
            Coefficient::Float(a) => Coefficient::Float(1.0 / a),
        })
    }

    pub(crate) fn is_negative(&self) -> bool {
        match self {
            Coefficient::Exact(a) => a.is_negative(),
            Coefficient::Float(a) => *a < 0.0,
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Coefficient::Float(x) => write!(f, "{x}"),
        }
    }
}
