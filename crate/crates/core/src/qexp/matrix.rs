//! Small dense matrices over a coefficient ring.

use super::ring::{CoefficientField, CoefficientRing};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<R: CoefficientRing> {
    rows: Vec<Vec<R>>,
    ncols: usize,
}

impl<R: CoefficientRing> Matrix<R> {
    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix { rows, ncols }
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Matrix {
            rows: vec![vec![R::zero(); m]; n],
            ncols: m,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = R::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<R>] {
        &self.rows
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.ncols, o.nrows(), "shape mismatch");
        let rows = (0..self.nrows())
            .map(|i| {
                (0..o.ncols)
                    .map(|j| {
                        (0..self.ncols).fold(R::zero(), |acc, k| acc.add(&self.rows[i][k].mul(&o.rows[k][j])))
                    })
                    .collect()
            })
            .collect();
        Matrix { rows, ncols: o.ncols }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Matrix {
            rows: self
                .rows
                .iter()
                .zip(&o.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(y)).collect())
                .collect(),
            ncols: self.ncols,
        }
    }

    /// `self - mu I`.
    pub fn shift(&self, mu: &R) -> Self {
        let mut m = self.clone();
        for i in 0..self.nrows().min(self.ncols) {
            m.rows[i][i] = m.rows[i][i].sub(mu);
        }
        m
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Matrix::identity(self.nrows()), |acc, _| acc.mul(self))
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let (n, m) = (self.nrows(), self.ncols);
        let mut out = Matrix::zeros(n + o.nrows(), m + o.ncols);
        for i in 0..n {
            for j in 0..m {
                out.rows[i][j] = self.rows[i][j].clone();
            }
        }
        for i in 0..o.nrows() {
            for j in 0..o.ncols {
                out.rows[n + i][m + j] = o.rows[i][j].clone();
            }
        }
        out
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().take(i).all(|x| x.is_zero()))
    }

    pub fn diagonal(&self) -> Vec<R> {
        (0..self.nrows().min(self.ncols)).map(|i| self.rows[i][i].clone()).collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect()
    }

    /// Nilpotent Jordan block of size `n` (ones above the diagonal).
    pub fn nilpotent_block(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for j in 1..n {
            m.rows[j - 1][j] = R::one();
        }
        m
    }
}

impl<F: CoefficientField> Matrix<F> {
    pub fn rank(&self) -> usize {
        let mut a = self.rows.clone();
        let (n, m) = (self.nrows(), self.ncols);
        let mut rank = 0;
        for col in 0..m {
            let Some(piv) = (rank..n).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(rank, piv);
            let inv = a[rank][col].inv();
            for i in rank + 1..n {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].mul(&inv);
                for j in col..m {
                    let v = a[i][j].sub(&f.mul(&a[rank][j]));
                    a[i][j] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.nrows();
        if n != self.ncols {
            return Err(Error::DimensionMismatch { expected: n, got: self.ncols });
        }
        let mut a = self.rows.clone();
        let mut inv = Matrix::<F>::identity(n).rows;
        for col in 0..n {
            let piv = (col..n)
                .find(|&i| !a[i][col].is_zero())
                .ok_or_else(|| Error::Precondition("singular matrix".into()))?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = a[col][col].inv();
            for j in 0..n {
                a[col][j] = a[col][j].mul(&s);
                inv[col][j] = inv[col][j].mul(&s);
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    let v = a[i][j].sub(&f.mul(&a[col][j]));
                    a[i][j] = v;
                    let w = inv[i][j].sub(&f.mul(&inv[col][j]));
                    inv[i][j] = w;
                }
            }
        }
        Ok(Matrix { rows: inv, ncols: n })
    }
}

/// Jordan blocks for one eigenvalue, largest first.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBlocks<F: CoefficientField> {
    pub eigenvalue: F,
    pub sizes: Vec<usize>,
}

/// Block sizes from the ranks of `(M - mu)^j`. The candidate eigenvalues
/// must account for the whole matrix.
pub fn jordan_census<F: CoefficientField>(m: &Matrix<F>, eigenvalues: &[F]) -> Result<Vec<EigenBlocks<F>>> {
    let n = m.nrows();
    let mut distinct: Vec<F> = Vec::new();
    for e in eigenvalues {
        if !distinct.contains(e) {
            distinct.push(e.clone());
        }
    }
    let mut out = Vec::new();
    let mut total = 0;
    for mu in distinct {
        let shifted = m.shift(&mu);
        let mut ranks = vec![n];
        let mut power = Matrix::identity(n);
        for _ in 0..n {
            power = power.mul(&shifted);
            ranks.push(power.rank());
            if ranks[ranks.len() - 1] == ranks[ranks.len() - 2] {
                break;
            }
        }
        // at_least[j] = number of blocks of size >= j + 1
        let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
        let mut sizes = Vec::new();
        for j in (0..at_least.len()).rev() {
            let exact = at_least[j] - at_least.get(j + 1).copied().unwrap_or(0);
            sizes.extend(std::iter::repeat_n(j + 1, exact));
        }
        total += sizes.iter().sum::<usize>();
        if !sizes.is_empty() {
            out.push(EigenBlocks { eigenvalue: mu, sizes });
        }
    }
    if total != n {
        return Err(Error::Precondition(format!(
            "eigenvalues cover {total} of {n} dimensions"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn rank_and_inverse() {
        let m = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(4), q(2)]]);
        assert_eq!(m.rank(), 1);
        assert!(m.inverse().is_err());
        let m = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(1)]]);
        assert_eq!(m.mul(&m.inverse().unwrap()), Matrix::identity(2));
    }

    #[test]
    fn census_of_known_forms() {
        let j = Matrix::<BigRational>::nilpotent_block(3)
            .direct_sum(&Matrix::nilpotent_block(1))
            .direct_sum(&Matrix::from_rows(vec![vec![q(5)]]));
        let c = jordan_census(&j, &[q(0), q(5)]).unwrap();
        assert_eq!(c[0].sizes, vec![3, 1]);
        assert_eq!(c[1].sizes, vec![1]);
        assert!(jordan_census(&j, &[q(0)]).is_err());
    }
}
