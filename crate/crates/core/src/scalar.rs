//! Scalar traits the exact algorithms are generic over.
//!
//! Integer algorithms (Smith normal form, saturation, kernels) run over any
//! [`ExactInt`]; rational algorithms (elimination, rank, feasibility) run over
//! any [`ExactField`]. Floating point types deliberately do not implement
//! either trait.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive};

/// An exact, signed Euclidean ring element (`i64`, `i128`, `BigInt`).
pub trait ExactInt: Integer + Signed + Clone + Debug + Display + Hash + Send + Sync {
    fn from_i64(v: i64) -> Self;
    fn to_i64(&self) -> Option<i64>;
}

/// An exact ordered field (`Ratio<i64>`, `Ratio<i128>`, `BigRational`).
pub trait ExactField:
    Num + Signed + Clone + Ord + Debug + Display + Hash + Send + Sync
{
    type Int: ExactInt;
    fn from_i64(v: i64) -> Self;
    fn from_int(v: Self::Int) -> Self;
    fn from_ratio(numer: Self::Int, denom: Self::Int) -> Self;
    fn numer_int(&self) -> Self::Int;
    fn denom_int(&self) -> Self::Int;
}

macro_rules! prim_int {
    ($t:ty) => {
        impl ExactInt for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn to_i64(&self) -> Option<i64> {
                ToPrimitive::to_i64(self)
            }
        }

        impl ExactField for Ratio<$t> {
            type Int = $t;
            fn from_i64(v: i64) -> Self {
                Ratio::from_integer(v as $t)
            }
            fn from_int(v: $t) -> Self {
                Ratio::from_integer(v)
            }
            fn from_ratio(numer: $t, denom: $t) -> Self {
                Ratio::new(numer, denom)
            }
            fn numer_int(&self) -> $t {
                *self.numer()
            }
            fn denom_int(&self) -> $t {
                *self.denom()
            }
        }
    };
}

prim_int!(i64);
prim_int!(i128);

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
}

impl ExactField for BigRational {
    type Int = BigInt;
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_int(v: BigInt) -> Self {
        BigRational::from_integer(v)
    }
    fn from_ratio(numer: BigInt, denom: BigInt) -> Self {
        BigRational::new(numer, denom)
    }
    fn numer_int(&self) -> BigInt {
        self.numer().clone()
    }
    fn denom_int(&self) -> BigInt {
        self.denom().clone()
    }
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational<F: ExactField>(q: &F) -> String {
    let d = q.denom_int();
    if d.is_one() {
        format!("{}", q.numer_int())
    } else {
        format!("{}/{}", q.numer_int(), d)
    }
}

/// Parses `"p"`, `"-p"` or `"p/q"` (q nonzero).
pub fn parse_rational(s: &str) -> Option<crate::Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

use num_traits::One;
