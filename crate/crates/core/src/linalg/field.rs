use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{inv_mod, is_prime, mul_mod};
use crate::error::{Error, Result};

/// Coefficient field for homology computations: the rationals or `F_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(l: u64) -> Result<Self> {
        if is_prime(l) {
            Ok(FieldSpec::Prime(l))
        } else {
            Err(Error::NotPrime(l))
        }
    }

    /// 0 for the rationals, `l` otherwise.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(l) => *l,
        }
    }
}

impl Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(l) => write!(f, "F{l}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q`, `0`, `l`, `Fl` or `F_l`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t == "0" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix(['F', 'f'])
            .map(|rest| rest.trim_start_matches('_'))
            .unwrap_or(t);
        let l: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad field '{s}'")))?;
        FieldSpec::prime(l)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Arithmetic context for a field whose elements need outside data (the
/// modulus of `F_l`). Elements are plain values; the context does the work.
pub trait ScalarField: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// `a - b*c`
    fn sub_mul(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(b, c))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl ScalarField for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn sub_mul(&self, a: &BigRational, b: &BigRational, c: &BigRational) -> BigRational {
        // Integral fast path: most entries stay in Z during elimination.
        if a.is_integer() && b.is_integer() && c.is_integer() {
            return BigRational::from_integer(a.numer() - b.numer() * c.numer());
        }
        a - b * c
    }
}

/// `F_l` with elements stored as residues in `0..l`.
#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    l: u64,
}

impl PrimeField {
    pub fn new(l: u64) -> Result<Self> {
        if is_prime(l) {
            Ok(PrimeField { l })
        } else {
            Err(Error::NotPrime(l))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.l
    }

    /// Reduce an exact rational with denominator prime to `l`.
    pub fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let l = BigInt::from(self.l);
        let num = (q.numer() % &l + &l) % &l;
        let den = (q.denom() % &l + &l) % &l;
        let den: u64 = den.try_into().ok()?;
        let num: u64 = num.try_into().ok()?;
        inv_mod(den, self.l).map(|d| mul_mod(num, d, self.l))
    }
}

impl ScalarField for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.l)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, v: i64) -> u64 {
        crate::arith::rem(v, self.l)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.l as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.l)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.l - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.l).expect("inverse of zero")
    }
}

/// Render an exact rational as `n` or `n/d`.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("0".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("F_3".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(3));
        assert_eq!("f7".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(7));
        assert_eq!("5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert!("4".parse::<FieldSpec>().is_err());
        assert!("x".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(3).to_string(), "F3");
    }

    #[test]
    fn prime_field_ops() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.mul(&3, &f.inv(&3)), 1);
        assert_eq!(f.sub(&2, &5), 4);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half), Some(4));
        let bad = BigRational::new(BigInt::from(1), BigInt::from(7));
        assert_eq!(f.from_rational(&bad), None);
    }
}
