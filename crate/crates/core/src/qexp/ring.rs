//! Exact coefficient rings for q-expansions.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::factor;
use crate::linalg::field::rational_string;

/// A commutative ring with exact arithmetic and a map from `Q`.
pub trait CoefficientRing: Clone + PartialEq + Debug + Display {
    fn zero() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn one() -> Self {
        Self::from_i64(1)
    }
    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn scale(&self, q: &BigRational) -> Self {
        self.mul(&Self::from_rational(q))
    }
    /// Exact division by a nonzero integer.
    fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        self.scale(&BigRational::new(BigInt::one(), BigInt::from(k)))
    }
}

pub trait CoefficientField: CoefficientRing {
    /// Panics on zero.
    fn inv(&self) -> Self;

    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
}

impl CoefficientRing for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl CoefficientField for BigRational {
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
}

/// Parse `n` or `n/d`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// `a + b sqrt(D)` for squarefree `D != 1`. Elements with `b = 0` are
/// rational and carry `D = 0`; mixing two different nonzero `D` panics.
#[derive(Clone, Debug)]
pub struct Quad {
    pub a: BigRational,
    pub b: BigRational,
    pub d: i64,
}

impl Quad {
    pub fn new(a: BigRational, b: BigRational, d: i64) -> Self {
        let q = Quad { a, b, d };
        q.tidy()
    }

    pub fn rational(a: BigRational) -> Self {
        Quad { a, b: Zero::zero(), d: 0 }
    }

    fn tidy(mut self) -> Self {
        if Zero::is_zero(&self.b) {
            self.d = 0;
        }
        self
    }

    fn common_d(&self, o: &Quad) -> i64 {
        match (self.d, o.d) {
            (0, d) | (d, 0) => d,
            (d, e) => {
                assert_eq!(d, e, "mixed quadratic fields");
                d
            }
        }
    }

    pub fn conj(&self) -> Quad {
        Quad::new(self.a.clone(), -&self.b, self.d)
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }
}

impl PartialEq for Quad {
    fn eq(&self, o: &Quad) -> bool {
        self.a == o.a && self.b == o.b && (Zero::is_zero(&self.b) || self.d == o.d)
    }
}

impl Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return f.write_str(&rational_string(&self.a));
        }
        let b = rational_string(&self.b);
        if Zero::is_zero(&self.a) {
            write!(f, "{b}*sqrt({})", self.d)
        } else {
            write!(f, "{}+{b}*sqrt({})", rational_string(&self.a), self.d)
        }
    }
}

impl CoefficientRing for Quad {
    fn zero() -> Self {
        Quad::rational(Zero::zero())
    }
    fn from_rational(q: &BigRational) -> Self {
        Quad::rational(q.clone())
    }
    fn add(&self, o: &Self) -> Self {
        Quad::new(&self.a + &o.a, &self.b + &o.b, self.common_d(o))
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.common_d(o);
        let dd = BigRational::from_integer(BigInt::from(d));
        Quad::new(
            &self.a * &o.a + &self.b * &o.b * dd,
            &self.a * &o.b + &self.b * &o.a,
            d,
        )
    }
    fn neg(&self) -> Self {
        Quad::new(-&self.a, -&self.b, self.d)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
}

impl CoefficientField for Quad {
    fn inv(&self) -> Self {
        assert!(!CoefficientRing::is_zero(self), "inverse of zero");
        let dd = BigRational::from_integer(BigInt::from(self.d));
        let norm = &self.a * &self.a - &self.b * &self.b * dd;
        Quad::new(&self.a / &norm, -&self.b / &norm, self.d)
    }
}

/// `sqrt(q)` inside `Q(sqrt D)`, `D` the squarefree part of `q`.
pub fn sqrt_rational(q: &BigRational) -> Quad {
    if Zero::is_zero(q) {
        return Quad::zero();
    }
    // sqrt(n/m) = sqrt(n m) / m
    let nm: i64 = (q.numer() * q.denom())
        .try_into()
        .expect("radicand fits in 64 bits");
    let sign = if nm < 0 { -1 } else { 1 };
    let (mut square, mut free) = (1i64, sign);
    for (p, e) in factor(nm.unsigned_abs()) {
        square *= (p as i64).pow(e / 2);
        if e % 2 == 1 {
            free *= p as i64;
        }
    }
    let coef = BigRational::new(BigInt::from(square), q.denom().clone());
    if free == 1 {
        Quad::rational(coef)
    } else {
        Quad::new(Zero::zero(), coef, free)
    }
}

/// Polynomials over `Q` in variables `x0, x1, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    /// Exponent vector (trailing zeros trimmed) to nonzero coefficient.
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        MPoly {
            terms: BTreeMap::from([(e, <BigRational as One>::one())]),
        }
    }

    pub fn constant(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&q) {
            terms.insert(Vec::new(), q);
        }
        MPoly { terms }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(terms: &mut BTreeMap<Vec<u32>, BigRational>, mut e: Vec<u32>, c: BigRational) {
        while e.last() == Some(&0) {
            e.pop();
        }
        let slot = terms.entry(e.clone()).or_insert_with(Zero::zero);
        *slot += c;
        if Zero::is_zero(slot) {
            terms.remove(&e);
        }
    }
}

impl Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mon: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            let neg = c.is_negative();
            let mag = c.abs();
            if !first {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            first = false;
            if mon.is_empty() {
                f.write_str(&rational_string(&mag))?;
            } else if mag.is_one() {
                f.write_str(&mon.join("*"))?;
            } else {
                write!(f, "{}*{}", rational_string(&mag), mon.join("*"))?;
            }
        }
        Ok(())
    }
}

impl CoefficientRing for MPoly {
    fn zero() -> Self {
        MPoly::default()
    }
    fn from_rational(q: &BigRational) -> Self {
        MPoly::constant(q.clone())
    }
    fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            MPoly::insert(&mut terms, e.clone(), c.clone());
        }
        MPoly { terms }
    }
    fn mul(&self, o: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u32> = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                MPoly::insert(&mut terms, e, c1 * c2);
            }
        }
        MPoly { terms }
    }
    fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn scale(&self, q: &BigRational) -> Self {
        if Zero::is_zero(q) {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn quad_arithmetic() {
        let s = sqrt_rational(&q(8, 1));
        assert_eq!(s, Quad::new(q(0, 1), q(2, 1), 2));
        assert_eq!(s.mul(&s), Quad::from_i64(8));
        let x = Quad::new(q(1, 2), q(3, 1), 5);
        assert_eq!(x.mul(&x.inv()), Quad::one());
        assert!(x.mul(&x.conj()).is_rational());
        assert_eq!(sqrt_rational(&q(9, 4)), Quad::rational(q(3, 2)));
        let i = sqrt_rational(&q(-1, 3));
        assert_eq!(i.mul(&i), Quad::rational(q(-1, 3)));
    }

    #[test]
    fn mpoly_arithmetic() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let lhs = x.add(&y).mul(&x.sub(&y));
        let rhs = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(lhs, rhs);
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.mul(&y).scale(&q(1, 2)).to_string(), "1/2*x0*x1");
        assert_eq!(x.div_int(2).add(&MPoly::from_i64(3)).to_string(), "1/2*x0 + 3");
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
