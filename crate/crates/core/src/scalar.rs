//! Exact scalars: prime fields `F_p` and the rationals.
//!
//! Everything above this layer is generic over [`Scalar`], so the same code
//! runs over `F_2`, `F_3` or `Q` without change. No floating point is used
//! anywhere in the crate.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use rand::Rng;

/// Which field a scalar type lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

impl FieldSpec {
    pub fn is_finite(self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "{p}"),
            FieldSpec::Rational => f.write_str("Q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rational);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| ParseScalarError(format!("unknown field `{s}` (expected a prime or `Q`)")))?;
        if !is_prime(p) {
            return Err(ParseScalarError(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ParseScalarError(pub String);

pub const fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + fmt::Debug + fmt::Display + Eq + Hash + Send + Sync + 'static
{
    fn field() -> FieldSpec;

    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    /// Parses `"3"`, `"-1"` or, over `Q`, `"a/b"`. Residues are reduced.
    fn parse_scalar(s: &str) -> Result<Self, ParseScalarError>;

    /// All field elements, in increasing residue order, when the field is finite.
    fn elements() -> Option<Vec<Self>>;

    /// A small random element; over `Q` numerators lie in `-3..=3` and denominators in `1..=3`.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

/// Residue class modulo the prime `P`, kept in `0..P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    const PRIME_CHECK: () = assert!(is_prime(P), "Fp modulus must be prime");

    pub fn new(v: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::PRIME_CHECK;
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::new(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp::new(self.0 + o.0)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp::new(self.0 + P - o.0)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp::new(P - self.0)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.inverse().expect("division by zero in F_p")
    }
}

impl<const P: u64> Rem for Fp<P> {
    type Output = Self;
    fn rem(self, o: Self) -> Self {
        assert!(!o.is_zero(), "remainder by zero in F_p");
        Fp(0)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp::new(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp::new(1)
    }
}

impl<const P: u64> Num for Fp<P> {
    type FromStrRadixErr = ParseScalarError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let v = i128::from_str_radix(s.trim(), radix)
            .map_err(|e| ParseScalarError(format!("bad residue `{s}`: {e}")))?;
        Ok(Fp::new(v.rem_euclid(P as i128) as u64))
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn field() -> FieldSpec {
        FieldSpec::Prime(P)
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }

    fn from_i64(v: i64) -> Self {
        Fp::new((v as i128).rem_euclid(P as i128) as u64)
    }

    fn parse_scalar(s: &str) -> Result<Self, ParseScalarError> {
        Self::from_str_radix(s, 10)
    }

    fn elements() -> Option<Vec<Self>> {
        Some((0..P).map(Fp::new).collect())
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp::new(rng.gen_range(0..P))
    }
}

impl Scalar for BigRational {
    fn field() -> FieldSpec {
        FieldSpec::Rational
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn parse_scalar(s: &str) -> Result<Self, ParseScalarError> {
        let s = s.trim();
        let bad = || ParseScalarError(format!("bad rational `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(ParseScalarError(format!("zero denominator in `{s}`")));
                }
                Ok(BigRational::new(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(BigRational::from_integer(n))
            }
        }
    }

    fn elements() -> Option<Vec<Self>> {
        None
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let n: i64 = rng.gen_range(-3..=3);
        let d: i64 = rng.gen_range(1..=3);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
}

/// Canonical text of a scalar: residues as integers, rationals as `a` or `a/b`.
pub fn scalar_text<S: Scalar>(s: &S) -> String {
    s.to_string()
}

/// Whether a rational is written in lowest terms with a positive denominator.
pub fn is_reduced_rational(q: &BigRational) -> bool {
    use num_integer::Integer;
    q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    type F2 = Fp<2>;
    type F3 = Fp<3>;

    #[test]
    fn prime_field_arithmetic() {
        assert_eq!(F3::new(2) + F3::new(2), F3::new(1));
        assert_eq!(F3::new(0) - F3::new(1), F3::new(2));
        assert_eq!(F3::new(2).inverse(), Some(F3::new(2)));
        assert_eq!(F2::new(0).inverse(), None);
        assert_eq!(-F2::new(1), F2::new(1));
        assert_eq!(F3::from_i64(-4), F3::new(2));
    }

    #[test]
    fn parses_scalars() {
        assert_eq!(F3::parse_scalar("-1").unwrap(), F3::new(2));
        let q = BigRational::parse_scalar("2/4").unwrap();
        assert_eq!(q.to_string(), "1/2");
        assert!(is_reduced_rational(&q));
        assert!(BigRational::parse_scalar("1/0").is_err());
        assert!(BigRational::parse_scalar("x").is_err());
    }

    #[test]
    fn field_spec_round_trip() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("7".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(7));
        assert!("4".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(5).to_string(), "5");
    }

    #[test]
    fn every_nonzero_residue_is_invertible() {
        for a in Fp::<7>::elements().unwrap().into_iter().skip(1) {
            assert_eq!(a * a.inverse().unwrap(), Fp::one());
        }
    }
}
