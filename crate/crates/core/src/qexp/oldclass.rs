//! `U_p` on the span of `f, B_p f, ..., B_(p^k) f` for a newform `f` of lower
//! level, and the block structure on a full oldclass.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::character::Character;
use super::matrix::{jordan_census, Matrix};
use super::poly::{charpoly, Poly};
use super::ring::{sqrt_rational, CoefficientRing, Quad};
use super::series::QExpansion;
use crate::arith::{divisors, factor, valuation};
use crate::error::{Error, Result};
use crate::linalg::field::rational_string;

/// Whether `p` divides the level of the newform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelCase {
    Divides,
    Coprime,
}

impl FromStr for LevelCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "divides" | "p|M" | "M1" => Ok(LevelCase::Divides),
            "coprime" | "p!|M" | "M2" => Ok(LevelCase::Coprime),
            _ => Err(Error::InvalidArgument(format!(
                "unknown case '{s}', expected 'divides' or 'coprime'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// `p | M`: companion-like with `a_p` in the corner.
    M1,
    /// `p` prime to `M`: as `M1` with `-c` below the corner.
    M2,
    /// Jordan form of `M2` with two distinct roots.
    M3,
    /// Jordan form of `M2` with a double root.
    M4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OldclassMatrix<R: CoefficientRing> {
    pub shape: Shape,
    pub k: usize,
    pub matrix: Matrix<R>,
}

/// `eps(p) p^(weight - 1)`, with `eps(p)` given directly.
pub fn hecke_scalar(eps_p: i64, p: u64, weight: u32) -> i64 {
    if eps_p == 0 || weight == 0 {
        return 0;
    }
    eps_p * (p as i64).pow(weight - 1)
}

/// Matrix of `U_p` in the basis `B_(p^j) f`, `j = 0..=k`, columns being
/// images. `c` is `eps(p) p^(weight - 1)`.
pub fn build_up_matrix<R: CoefficientRing>(case: LevelCase, a_p: &R, c: &R, k: usize) -> OldclassMatrix<R> {
    let mut m = Matrix::nilpotent_block(k + 1);
    m.set(0, 0, a_p.clone());
    let shape = match case {
        LevelCase::Divides => Shape::M1,
        LevelCase::Coprime => {
            if k >= 1 {
                m.set(1, 0, c.neg());
            }
            Shape::M2
        }
    };
    OldclassMatrix { shape, k, matrix: m }
}

/// `(X^2 - a X + c) X^(k-1)` or `(X - a) X^k`.
pub fn expected_charpoly<R: CoefficientRing>(case: LevelCase, a_p: &R, c: &R, k: usize) -> Poly<R> {
    match case {
        LevelCase::Divides => Poly::new(vec![a_p.neg(), R::one()]).mul(&Poly::x_pow(k)),
        LevelCase::Coprime if k == 0 => Poly::new(vec![a_p.neg(), R::one()]),
        LevelCase::Coprime => Poly::new(vec![c.clone(), a_p.neg(), R::one()]).mul(&Poly::x_pow(k - 1)),
    }
}

/// Roots of `X^2 - a X + c` in `Q(sqrt(a^2 - 4c))`.
pub fn quadratic_roots(a: &BigRational, c: &BigRational) -> (Quad, Quad) {
    let disc = a * a - BigRational::from_integer(BigInt::from(4)) * c;
    let s = sqrt_rational(&disc);
    let half = Quad::rational(a.clone());
    let two = BigRational::from_integer(BigInt::from(2));
    let r1 = half.add(&s).scale(&two.recip());
    let r2 = half.sub(&s).scale(&two.recip());
    (r1, r2)
}

/// Jordan form of `U_p` for `p` prime to the level: `diag(alpha, alpha')` or
/// the double-root block, followed by a nilpotent block of size `k - 1`.
pub fn normal_form(a_p: &BigRational, c: &BigRational, k: usize) -> Result<OldclassMatrix<Quad>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let (r1, r2) = quadratic_roots(a_p, c);
    let (head, shape) = if r1 == r2 {
        (
            Matrix::from_rows(vec![vec![r1.clone(), Quad::one()], vec![Quad::zero(), r1]]),
            Shape::M4,
        )
    } else {
        (
            Matrix::from_rows(vec![vec![r1, Quad::zero()], vec![Quad::zero(), r2]]),
            Shape::M3,
        )
    };
    let m = if k > 1 { head.direct_sum(&Matrix::nilpotent_block(k - 1)) } else { head };
    Ok(OldclassMatrix { shape, k, matrix: m })
}

fn to_quad(m: &Matrix<BigRational>) -> Matrix<Quad> {
    Matrix::from_rows(
        m.rows()
            .iter()
            .map(|r| r.iter().cloned().map(Quad::rational).collect())
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockCount {
    pub eigenvalue: String,
    pub sizes: Vec<usize>,
}

/// Jordan census of an oldclass matrix over `Q(sqrt(a_p^2 - 4c))`.
pub fn census(m: &Matrix<BigRational>, a_p: &BigRational, c: &BigRational) -> Result<Vec<BlockCount>> {
    let (r1, r2) = quadratic_roots(a_p, c);
    let candidates = [Quad::rational(a_p.clone()), r1, r2, Quad::zero()];
    Ok(jordan_census(&to_quad(m), &candidates)?
        .into_iter()
        .map(|b| BlockCount {
            eigenvalue: b.eigenvalue.to_string(),
            sizes: b.sizes,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpMatrixReport {
    pub case: LevelCase,
    pub shape: Shape,
    pub k: usize,
    pub p: u64,
    pub weight: u32,
    pub eps: i64,
    pub a_p: String,
    pub c: String,
    pub matrix: Vec<Vec<String>>,
    pub charpoly: String,
    pub expected_charpoly: String,
    pub charpoly_matches: bool,
    pub jordan: Vec<BlockCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<Vec<Vec<String>>>,
    /// The census agrees with that of the normal form (coprime case only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form_census_matches: Option<bool>,
}

impl UpMatrixReport {
    pub fn pass(&self) -> bool {
        self.charpoly_matches && self.normal_form_census_matches != Some(false)
    }
}

pub fn up_matrix_report(
    case: LevelCase,
    k: usize,
    a_p: BigRational,
    eps: i64,
    p: u64,
    weight: u32,
) -> Result<UpMatrixReport> {
    let c = BigRational::from_integer(BigInt::from(hecke_scalar(eps, p, weight)));
    let om = build_up_matrix(case, &a_p, &c, k);
    let cp = charpoly(&om.matrix);
    let expected = expected_charpoly(case, &a_p, &c, k);
    let jordan = census(&om.matrix, &a_p, &c)?;
    let (normal_form, matches) = if case == LevelCase::Coprime && k >= 1 {
        let nf = normal_form(&a_p, &c, k)?;
        let (r1, r2) = quadratic_roots(&a_p, &c);
        let nf_census: Vec<BlockCount> = jordan_census(&nf.matrix, &[r1, r2, Quad::zero()])?
            .into_iter()
            .map(|b| BlockCount {
                eigenvalue: b.eigenvalue.to_string(),
                sizes: b.sizes,
            })
            .collect();
        let same = nf_census.len() == jordan.len() && nf_census.iter().all(|b| jordan.contains(b));
        (Some(nf.matrix.to_strings()), Some(same))
    } else {
        (None, None)
    };
    Ok(UpMatrixReport {
        case,
        shape: om.shape,
        k,
        p,
        weight,
        eps,
        a_p: rational_string(&a_p),
        c: rational_string(&c),
        matrix: om.matrix.to_strings(),
        charpoly: cp.to_string(),
        expected_charpoly: expected.to_string(),
        charpoly_matches: cp == expected,
        jordan,
        normal_form,
        normal_form_census_matches: matches,
    })
}

/// Result of checking the kernel vector of `U_p` on an eigen-series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelCheck {
    pub p: u64,
    pub a_p: String,
    /// `t_p f = a_p f` to the reliable order.
    pub eigen_precondition: bool,
    pub compared_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_annihilated: Option<bool>,
    /// Only when `a_p^2 = 4c`: `U_p(a_p f - 2c B_p f) = (a_p/2)(a_p f - 2c B_p f)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub double_root_eigenvector: Option<bool>,
}

impl KernelCheck {
    pub fn pass(&self) -> bool {
        self.eigen_precondition && self.kernel_annihilated == Some(true) && self.double_root_eigenvector != Some(false)
    }
}

/// With `c = eps(p) p^(weight-1) != 0`, check that `U_p` kills
/// `B_(p^2) f - (a_p / c) B_p f + (1/c) f`.
pub fn kernel_vector_check<R: CoefficientRing>(f: &QExpansion<R>, p: u64, a_p: &R) -> Result<KernelCheck> {
    let c_int = f.hecke_constant(p);
    if c_int == 0 {
        return Err(Error::Precondition(format!("eps({p}) = 0: p divides the level")));
    }
    let c = BigRational::from_integer(BigInt::from(c_int));
    let eigen = f.op_t(p).agrees_with(&f.mul_scalar(a_p));
    let mut out = KernelCheck {
        p,
        a_p: a_p.to_string(),
        eigen_precondition: eigen,
        compared_order: 0,
        kernel_annihilated: None,
        double_root_eigenvector: None,
    };
    if !eigen {
        return Ok(out);
    }
    let bp = f.op_b(p);
    let v = f
        .op_b(p * p)
        .sub(&bp.mul_scalar(a_p).scale(&c.recip()))
        .add(&f.scale(&c.recip()));
    let image = v.op_u(p);
    out.compared_order = image.reliable();
    out.kernel_annihilated = Some(image.is_zero_to_reliable());
    if a_p.mul(a_p) == R::from_i64(4 * c_int) {
        let w = f.mul_scalar(a_p).sub(&bp.scale(&(&c * BigInt::from(2))));
        let lhs = w.op_u(p);
        let rhs = w.mul_scalar(a_p).div_int_series(2);
        out.double_root_eigenvector = Some(lhs.agrees_with(&rhs));
    }
    Ok(out)
}

impl<R: CoefficientRing> QExpansion<R> {
    fn div_int_series(&self, k: i64) -> Self {
        self.scale(&BigRational::new(BigInt::from(1), BigInt::from(k)))
    }
}

/// Formal eigenform: `a_1 = 1`, multiplicative, and
/// `a_(p^(j+1)) = a_p a_(p^j) - eps(p) p^(weight-1) a_(p^(j-1))`.
pub fn formal_eigenform<R: CoefficientRing>(
    order: usize,
    weight: u32,
    chi: Character,
    mut a_prime: impl FnMut(u64) -> R,
) -> QExpansion<R> {
    let mut cache: std::collections::BTreeMap<u64, R> = Default::default();
    let mut coeffs: Vec<R> = Vec::with_capacity(order);
    for n in 1..=order as u64 {
        let mut a = R::one();
        for (p, e) in factor(n) {
            let ap = cache.entry(p).or_insert_with(|| a_prime(p)).clone();
            let c = R::from_i64(hecke_scalar(chi.value(p), p, weight));
            let (mut prev, mut cur) = (R::one(), ap.clone());
            for _ in 1..e {
                let next = ap.mul(&cur).sub(&c.mul(&prev));
                prev = cur;
                cur = next;
            }
            a = a.mul(&cur);
        }
        coeffs.push(a);
    }
    QExpansion::new(coeffs, weight, chi)
}

/// `U_q` on the formal span of `B_d f`, `d | n`, ordered in groups
/// `d, dq, ..., dq^m` for `d | n/q^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct OldclassBlocks<R: CoefficientRing> {
    pub basis: Vec<u64>,
    pub matrix: Matrix<R>,
    pub block_size: usize,
    pub block_count: usize,
}

impl<R: CoefficientRing> OldclassBlocks<R> {
    /// Block diagonal, each block equal to the single-prime matrix.
    pub fn blocks_match(&self, case: LevelCase, a_q: &R, c: &R) -> bool {
        let single = build_up_matrix(case, a_q, c, self.block_size - 1).matrix;
        let s = self.block_size;
        (0..self.matrix.nrows()).all(|i| {
            (0..self.matrix.ncols()).all(|j| {
                let v = self.matrix.get(i, j);
                if i / s == j / s {
                    *v == *single.get(i % s, j % s)
                } else {
                    v.is_zero()
                }
            })
        })
    }
}

pub fn oldclass_blocks<R: CoefficientRing>(
    q: u64,
    n: u64,
    a_q: &R,
    c: &R,
    case: LevelCase,
) -> Result<OldclassBlocks<R>> {
    let m = valuation(n, q) as usize;
    if n == 0 || m == 0 {
        return Err(Error::Precondition(format!("{q} does not divide {n}")));
    }
    let rest = n / q.pow(m as u32);
    let mut basis = Vec::new();
    for d in divisors(rest) {
        for j in 0..=m {
            basis.push(d * q.pow(j as u32));
        }
    }
    let pos = |e: u64| basis.iter().position(|&b| b == e).expect("basis label");
    let mut mat = Matrix::zeros(basis.len(), basis.len());
    for (col, &e) in basis.iter().enumerate() {
        if e % q == 0 {
            mat.set(pos(e / q), col, R::one());
        } else {
            mat.set(col, col, a_q.clone());
            if case == LevelCase::Coprime {
                mat.set(pos(e * q), col, c.neg());
            }
        }
    }
    Ok(OldclassBlocks {
        block_count: basis.len() / (m + 1),
        basis,
        matrix: mat,
        block_size: m + 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JordanBasisReport {
    pub a_p: i64,
    pub k: usize,
    pub basis: Vec<String>,
    pub conjugated: Vec<Vec<String>>,
    pub triangular: bool,
    pub diagonal: Vec<String>,
    /// Conjugated matrix is exactly `(a_p)` plus a nilpotent block of size `k`.
    pub jordan_form: bool,
}

/// For a trivial character and `a_p = +-1`, conjugate `U_p` by the basis
/// `f, B_p f - a_p f, B_(p^2) f - f, B_(p^3) f - a_p f, ...`.
pub fn jordan_basis_trivial_char(a_p: i64, k: usize) -> Result<JordanBasisReport> {
    if a_p != 1 && a_p != -1 {
        return Err(Error::InvalidArgument(format!("a_p must be 1 or -1, got {a_p}")));
    }
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let ap = q(a_p);
    let m = build_up_matrix(LevelCase::Divides, &ap, &q(0), k).matrix;
    let mut change = Matrix::identity(k + 1);
    let mut basis = vec!["f".to_string()];
    for j in 1..=k {
        let s = if j % 2 == 1 { a_p } else { 1 };
        change.set(0, j, q(-s));
        basis.push(format!("B_(p^{j}) f - ({s}) f"));
    }
    let conj = change.inverse()?.mul(&m).mul(&change);
    let expected = Matrix::from_rows(vec![vec![ap]]).direct_sum(&Matrix::nilpotent_block(k));
    Ok(JordanBasisReport {
        a_p,
        k,
        basis,
        triangular: conj.is_upper_triangular(),
        diagonal: conj.diagonal().iter().map(rational_string).collect(),
        jordan_form: conj == expected,
        conjugated: conj.to_strings(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::ring::MPoly;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn head_block() {
        let m = build_up_matrix(LevelCase::Coprime, &q(5), &q(7), 1);
        assert_eq!(m.matrix, Matrix::from_rows(vec![vec![q(5), q(1)], vec![q(-7), q(0)]]));
        assert_eq!(m.shape, Shape::M2);
    }

    #[test]
    fn symbolic_charpoly() {
        let (a, c) = (MPoly::var(0), MPoly::var(1));
        for k in 1..=4 {
            let m = build_up_matrix(LevelCase::Coprime, &a, &c, k);
            assert_eq!(charpoly(&m.matrix), expected_charpoly(LevelCase::Coprime, &a, &c, k));
            let m1 = build_up_matrix(LevelCase::Divides, &a, &c, k);
            assert_eq!(charpoly(&m1.matrix), expected_charpoly(LevelCase::Divides, &a, &c, k));
        }
    }

    #[test]
    fn censuses() {
        let m = build_up_matrix(LevelCase::Divides, &q(0), &q(0), 3).matrix;
        let c = census(&m, &q(0), &q(0)).unwrap();
        assert_eq!(c, vec![BlockCount { eigenvalue: "0".into(), sizes: vec![4] }]);
        let m = build_up_matrix(LevelCase::Divides, &q(-1), &q(0), 3).matrix;
        let c = census(&m, &q(-1), &q(0)).unwrap();
        assert_eq!(c.len(), 2);
        let rep = up_matrix_report(LevelCase::Coprime, 3, q(-2), 1, 2, 2).unwrap();
        assert!(rep.pass());
        assert_eq!(rep.jordan.iter().map(|b| b.sizes.clone()).collect::<Vec<_>>(), vec![vec![1], vec![1], vec![2]]);
        // a^2 = 4c: double root 2 with a 2x2 block
        let rep = up_matrix_report(LevelCase::Coprime, 2, q(4), 1, 2, 3).unwrap();
        assert_eq!(rep.c, "4");
        assert_eq!(rep.jordan[0], BlockCount { eigenvalue: "2".into(), sizes: vec![2] });
        assert_eq!(rep.normal_form_census_matches, Some(true));
    }

    #[test]
    fn blocks() {
        let b = oldclass_blocks(2, 12, &q(3), &q(2), LevelCase::Coprime).unwrap();
        assert_eq!((b.block_count, b.block_size), (2, 3));
        assert_eq!(b.basis, vec![1, 2, 4, 3, 6, 12]);
        assert!(b.blocks_match(LevelCase::Coprime, &q(3), &q(2)));
        let b = oldclass_blocks(5, 30, &q(1), &q(0), LevelCase::Divides).unwrap();
        assert_eq!((b.block_count, b.block_size), (4, 2));
        assert!(b.blocks_match(LevelCase::Divides, &q(1), &q(0)));
        assert!(oldclass_blocks(7, 30, &q(1), &q(0), LevelCase::Divides).is_err());
    }

    #[test]
    fn jordan_bases() {
        let r = jordan_basis_trivial_char(1, 2).unwrap();
        assert!(r.triangular && r.jordan_form);
        assert_eq!(r.diagonal, vec!["1", "0", "0"]);
        let r = jordan_basis_trivial_char(-1, 1).unwrap();
        assert_eq!(r.basis, vec!["f", "B_(p^1) f - (-1) f"]);
        let r = jordan_basis_trivial_char(1, 0).unwrap();
        assert_eq!(r.conjugated, vec![vec!["1".to_string()]]);
        assert!(jordan_basis_trivial_char(2, 1).is_err());
    }

    #[test]
    fn kernel_on_symbolic_eigenform() {
        let chi = Character::trivial(1).unwrap();
        let f = formal_eigenform(60, 2, chi, |p| MPoly::var(p as usize));
        for p in [2u64, 3, 5] {
            let chk = kernel_vector_check(&f, p, &MPoly::var(p as usize)).unwrap();
            assert!(chk.pass(), "p={p}: {chk:?}");
        }
        // a perturbed series fails the precondition
        let mut coeffs = f.coeffs().to_vec();
        coeffs[5] = coeffs[5].add(&MPoly::one());
        let g = QExpansion::new(coeffs, 2, chi);
        let chk = kernel_vector_check(&g, 2, &MPoly::var(2)).unwrap();
        assert!(!chk.eigen_precondition && !chk.pass());
    }

    #[test]
    fn double_root_eigenvector() {
        // weight 3: c = 4 and a_2 = 4
        let chi = Character::trivial(1).unwrap();
        let f = formal_eigenform(200, 3, chi, |p| if p == 2 { q(4) } else { q(p as i64 % 5) });
        let chk = kernel_vector_check(&f, 2, &q(4)).unwrap();
        assert_eq!(chk.double_root_eigenvector, Some(true));
        assert!(chk.pass());
    }
}
