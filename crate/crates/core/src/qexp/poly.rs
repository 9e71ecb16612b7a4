//! Dense univariate polynomials and the division-free characteristic
//! polynomial.

use std::fmt;

use super::matrix::Matrix;
use super::ring::CoefficientRing;

/// Coefficients from degree 0 upwards, without trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<R: CoefficientRing> {
    coeffs: Vec<R>,
}

impl<R: CoefficientRing> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn x() -> Self {
        Poly::new(vec![R::zero(), R::one()])
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    pub fn x_pow(k: usize) -> Self {
        let mut c = vec![R::zero(); k + 1];
        c[k] = R::one();
        Poly::new(c)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[R], i: usize| v.get(i).cloned().unwrap_or_else(R::zero);
        Poly::new((0..n).map(|i| get(&self.coeffs, i).add(&get(&o.coeffs, i))).collect())
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![R::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }
}

impl<R: CoefficientRing> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*X"),
                _ => format!("({c})*X^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// `det(X I - M)` by Berkowitz's algorithm: no divisions, so it works over
/// any commutative ring, including polynomial rings with symbolic entries.
pub fn charpoly<R: CoefficientRing>(m: &Matrix<R>) -> Poly<R> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix expected");
    // coefficient vectors are stored highest degree first here
    let mut p: Vec<R> = vec![R::one()];
    for k in 0..n {
        // A_k = [[A, C], [R, a]] with A the leading k x k block
        let a = m.get(k, k).clone();
        let col: Vec<R> = (0..k).map(|i| m.get(i, k).clone()).collect();
        let row: Vec<R> = (0..k).map(|j| m.get(k, j).clone()).collect();
        // toeplitz column: 1, -a, -R C, -R A C, ..., -R A^(k-1) C
        let mut t = vec![R::one(), a.neg()];
        let mut v = col;
        for _ in 0..k {
            let rv = row
                .iter()
                .zip(&v)
                .fold(R::zero(), |acc, (x, y)| acc.add(&x.mul(y)));
            t.push(rv.neg());
            v = (0..k)
                .map(|i| (0..k).fold(R::zero(), |acc, j| acc.add(&m.get(i, j).mul(&v[j]))))
                .collect();
        }
        // new p = T p, T lower-triangular Toeplitz of size (k+2) x (k+1)
        let next: Vec<R> = (0..k + 2)
            .map(|i| {
                (0..=i.min(k))
                    .filter(|&j| i - j < t.len())
                    .fold(R::zero(), |acc, j| acc.add(&t[i - j].mul(&p[j])))
            })
            .collect();
        p = next;
    }
    p.reverse();
    Poly::new(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::ring::MPoly;
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn two_by_two() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(3), q(4)]]);
        // X^2 - 5X - 2
        assert_eq!(charpoly(&m), Poly::new(vec![q(-2), q(-5), q(1)]));
    }

    #[test]
    fn companion_matrix() {
        // companion of X^3 - 2X^2 + 3X - 7
        let m = Matrix::from_rows(vec![
            vec![q(0), q(0), q(7)],
            vec![q(1), q(0), q(-3)],
            vec![q(0), q(1), q(2)],
        ]);
        assert_eq!(charpoly(&m), Poly::new(vec![q(-7), q(3), q(-2), q(1)]));
    }

    #[test]
    fn symbolic_entries() {
        let (a, b, c, d) = (MPoly::var(0), MPoly::var(1), MPoly::var(2), MPoly::var(3));
        let m = Matrix::from_rows(vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]);
        let det = a.mul(&d).sub(&b.mul(&c));
        let tr = a.add(&d);
        assert_eq!(charpoly(&m), Poly::new(vec![det, tr.neg(), MPoly::one()]));
    }
}
