//! Truncated q-expansions `sum_{n >= 1} a_n q^n` and the operators
//! `B_d`, `U_q`, `t_p`, `T_n`.
//!
//! A series knows its truncation `T` (coefficients `a_1..a_T` are stored)
//! and its reliable order `R <= T`: coefficients past `R` are not claimed
//! to be correct. Comparisons only look up to the smaller reliable order.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::character::Character;
use super::ring::CoefficientRing;
use crate::arith::factor;

#[derive(Debug, Clone, PartialEq)]
pub struct QExpansion<R: CoefficientRing> {
    /// `coeffs[n - 1] = a_n`.
    coeffs: Vec<R>,
    reliable: usize,
    weight: u32,
    chi: Character,
}

impl<R: CoefficientRing> QExpansion<R> {
    pub fn new(coeffs: Vec<R>, weight: u32, chi: Character) -> Self {
        let reliable = coeffs.len();
        QExpansion {
            coeffs,
            reliable,
            weight,
            chi,
        }
    }

    pub fn from_fn(order: usize, weight: u32, chi: Character, f: impl FnMut(usize) -> R) -> Self {
        QExpansion::new((1..=order).map(f).collect(), weight, chi)
    }

    pub fn zero(order: usize, weight: u32, chi: Character) -> Self {
        QExpansion::from_fn(order, weight, chi, |_| R::zero())
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn reliable(&self) -> usize {
        self.reliable
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn character(&self) -> Character {
        self.chi
    }

    /// `a_n`; zero for `n = 0` and past the truncation.
    pub fn coeff(&self, n: usize) -> R {
        if n == 0 || n > self.coeffs.len() {
            R::zero()
        } else {
            self.coeffs[n - 1].clone()
        }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Lower the reliable order (never raises it).
    pub fn with_reliable(mut self, r: usize) -> Self {
        self.reliable = self.reliable.min(r);
        self
    }

    fn same_space(&self, o: &Self) {
        assert_eq!(self.weight, o.weight, "weights differ");
        assert_eq!(self.chi, o.chi, "characters differ");
    }

    fn zip(&self, o: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        self.same_space(o);
        let t = self.truncation().min(o.truncation());
        QExpansion {
            coeffs: (0..t).map(|i| f(&self.coeffs[i], &o.coeffs[i])).collect(),
            reliable: self.reliable.min(o.reliable).min(t),
            weight: self.weight,
            chi: self.chi,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn mul_scalar(&self, c: &R) -> Self {
        QExpansion {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        QExpansion {
            coeffs: self.coeffs.iter().map(|a| a.scale(q)).collect(),
            ..self.clone()
        }
    }

    /// Order up to which `self` and `o` can be compared.
    pub fn common_reliable(&self, o: &Self) -> usize {
        self.reliable.min(o.reliable)
    }

    /// Equality of `a_1..a_R` with `R` the common reliable order.
    pub fn agrees_with(&self, o: &Self) -> bool {
        (1..=self.common_reliable(o)).all(|n| self.coeff(n) == o.coeff(n))
    }

    /// First index `n <= R` where the two differ.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        (1..=self.common_reliable(o)).find(|&n| self.coeff(n) != o.coeff(n))
    }

    pub fn is_zero_to_reliable(&self) -> bool {
        (1..=self.reliable).all(|n| self.coeff(n).is_zero())
    }

    /// `eps(p) p^(weight-1)`.
    pub fn hecke_constant(&self, p: u64) -> i64 {
        let e = self.chi.value(p);
        if e == 0 {
            0
        } else {
            e * (p as i64).pow(self.weight - 1)
        }
    }

    /// `B_d f = sum a_n q^(nd)`.
    pub fn op_b(&self, d: u64) -> Self {
        assert!(d >= 1);
        let d = d as usize;
        let t = self.truncation();
        QExpansion {
            coeffs: (1..=t)
                .map(|n| if n % d == 0 { self.coeff(n / d) } else { R::zero() })
                .collect(),
            reliable: self.reliable.saturating_mul(d).min(t),
            weight: self.weight,
            chi: self.chi,
        }
    }

    /// `U_q f = sum a_(nq) q^n`.
    pub fn op_u(&self, q: u64) -> Self {
        assert!(q >= 1);
        let q = q as usize;
        QExpansion {
            coeffs: (1..=self.truncation() / q).map(|n| self.coeff(n * q)).collect(),
            reliable: self.reliable / q,
            weight: self.weight,
            chi: self.chi,
        }
    }

    /// `t_p f = sum (a_(np) + eps(p) p^(weight-1) a_(n/p)) q^n`.
    pub fn op_t(&self, p: u64) -> Self {
        let c = R::from_i64(self.hecke_constant(p));
        let pu = p as usize;
        QExpansion {
            coeffs: (1..=self.truncation() / pu)
                .map(|n| {
                    let tail = if n % pu == 0 { self.coeff(n / pu).mul(&c) } else { R::zero() };
                    self.coeff(n * pu).add(&tail)
                })
                .collect(),
            reliable: self.reliable / pu,
            weight: self.weight,
            chi: self.chi,
        }
    }

    /// `T_(p^k)` by `T_(p^(j+1)) = t_p T_(p^j) - eps(p) p^(weight-1) T_(p^(j-1))`.
    fn op_t_prime_power(&self, p: u64, k: u32) -> Self {
        let c = BigRational::from_integer(BigInt::from(self.hecke_constant(p)));
        let mut prev = self.clone();
        let mut cur = self.op_t(p);
        if k == 0 {
            return prev;
        }
        for _ in 1..k {
            let next = cur.op_t(p).sub(&prev.scale(&c));
            prev = cur;
            cur = next;
        }
        cur
    }

    /// The Hecke operator `T_n` at the level of the character: multiplicative
    /// over coprime factors, and `U_p` at primes dividing the level.
    pub fn op_hecke(&self, n: u64) -> Self {
        assert!(n >= 1);
        factor(n)
            .into_iter()
            .fold(self.clone(), |f, (p, k)| f.op_t_prime_power(p, k))
    }
}
