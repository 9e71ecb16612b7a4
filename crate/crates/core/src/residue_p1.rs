//! The projective line over `Z/p^n Z` and the right action of the two
//! torsion elements `sigma = [[0,-1],[1,0]]` and `tau = [[0,-1],[1,-1]]` of
//! `SL_2(Z)`.
//!
//! Every point has exactly one representative of the form `(r, 1)` with
//! `r mod p^n` ("affine"), or `(1, p*r')` with `r' mod p^(n-1)` (the branch
//! through infinity). Indices are laid out with the affine points first, by
//! residue, followed by the infinite branch by `r'`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::{inv_mod, is_prime, mul_mod, rem};
use crate::error::{Error, Result};

/// Largest table `build` will enumerate.
pub const TABLE_LIMIT: u64 = 1 << 28;

/// A validated prime power `p^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimePower {
    p: u64,
    n: u32,
    modulus: u64,
}

impl PrimePower {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroExponent);
        }
        let modulus = p.checked_pow(n).ok_or(Error::ModulusOverflow { p, n })?;
        Ok(PrimePower { p, n, modulus })
    }

    /// Recognise `q` as a prime power.
    pub fn from_modulus(q: u64) -> Result<Self> {
        let factors = crate::arith::factor(q);
        match factors.as_slice() {
            [(p, n)] => PrimePower::new(*p, *n),
            _ => Err(Error::InvalidArgument(format!("{q} is not a prime power"))),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn modulus_big(&self) -> BigUint {
        BigUint::from(self.p).pow(self.n)
    }

    /// `|P^1(Z/p^n Z)| = p^n + p^(n-1)`.
    pub fn p1_size(&self) -> u64 {
        self.modulus + self.modulus / self.p
    }
}

/// A normalized point of `P^1(Z/p^n Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum P1Point {
    /// `(r, 1)`.
    Affine(u64),
    /// `(1, p*r')`, stored as `r'`.
    Infinite(u64),
}

impl P1Point {
    /// A lift `(w, t)` of the representative.
    pub fn pair(&self, pp: &PrimePower) -> (u64, u64) {
        match *self {
            P1Point::Affine(r) => (r, 1),
            P1Point::Infinite(r) => (1, pp.p * r),
        }
    }
}

impl std::fmt::Display for P1Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            P1Point::Affine(r) => write!(f, "({r}:1)"),
            P1Point::Infinite(r) => write!(f, "(1:p*{r})"),
        }
    }
}

/// Normalize `(c : d)` modulo `p^n`. Returns `None` when `p` divides both
/// coordinates, in which case the pair is not a point of the projective line.
pub fn normalize(c: i64, d: i64, pp: &PrimePower) -> Option<P1Point> {
    let m = pp.modulus;
    normalize_residues(rem(c, m), rem(d, m), pp)
}

/// As [`normalize`] for coordinates already reduced into `0..p^n`.
pub fn normalize_residues(c: u64, d: u64, pp: &PrimePower) -> Option<P1Point> {
    let (p, m) = (pp.p, pp.modulus);
    if !d.is_multiple_of(p) {
        let dinv = inv_mod(d, m).expect("unit");
        Some(P1Point::Affine(mul_mod(c, dinv, m)))
    } else if !c.is_multiple_of(p) {
        let cinv = inv_mod(c, m).expect("unit");
        // d * c^-1 is divisible by p.
        Some(P1Point::Infinite(mul_mod(d, cinv, m) / p))
    } else {
        None
    }
}

/// The enumerated projective line with the `sigma` and `tau` permutations.
#[derive(Debug, Clone)]
pub struct P1Table {
    pp: PrimePower,
    sigma: Vec<u32>,
    tau: Vec<u32>,
}

impl P1Table {
    pub fn build(pp: PrimePower) -> Result<Self> {
        let size = pp.p1_size();
        if size > TABLE_LIMIT {
            return Err(Error::TableTooLarge {
                size,
                limit: TABLE_LIMIT,
            });
        }
        let m = pp.modulus;
        let mut table = P1Table {
            pp,
            sigma: Vec::with_capacity(size as usize),
            tau: Vec::with_capacity(size as usize),
        };
        for idx in 0..size as usize {
            let (w, t) = table.point(idx).pair(&pp);
            // (w,t).sigma = (-t, w);  (w,t).tau = (t, -w-t)
            let s = table.index_of_residues((m - t % m) % m, w % m);
            let u = table.index_of_residues(t % m, (2 * m - w % m - t % m) % m);
            table.sigma.push(s.expect("sigma image is a point") as u32);
            table.tau.push(u.expect("tau image is a point") as u32);
        }
        Ok(table)
    }

    pub fn prime_power(&self) -> &PrimePower {
        &self.pp
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn point(&self, idx: usize) -> P1Point {
        let m = self.pp.modulus as usize;
        if idx < m {
            P1Point::Affine(idx as u64)
        } else {
            P1Point::Infinite((idx - m) as u64)
        }
    }

    pub fn points(&self) -> impl Iterator<Item = P1Point> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    pub fn index_of(&self, pt: P1Point) -> usize {
        match pt {
            P1Point::Affine(r) => r as usize,
            P1Point::Infinite(r) => self.pp.modulus as usize + r as usize,
        }
    }

    /// Index of the class of `(c : d)`, or `None` if `p | gcd(c, d)`.
    pub fn index_of_pair(&self, c: i64, d: i64) -> Option<usize> {
        normalize(c, d, &self.pp).map(|pt| self.index_of(pt))
    }

    fn index_of_residues(&self, c: u64, d: u64) -> Option<usize> {
        normalize_residues(c, d, &self.pp).map(|pt| self.index_of(pt))
    }

    /// Index of the affine point `(a, 1)`.
    pub fn affine(&self, a: i64) -> usize {
        rem(a, self.pp.modulus) as usize
    }

    pub fn act_sigma(&self, idx: usize) -> usize {
        self.sigma[idx] as usize
    }

    pub fn act_tau(&self, idx: usize) -> usize {
        self.tau[idx] as usize
    }

    pub fn sigma_perm(&self) -> &[u32] {
        &self.sigma
    }

    pub fn tau_perm(&self) -> &[u32] {
        &self.tau
    }

    /// Checked variant of [`act_sigma`](Self::act_sigma).
    pub fn try_act_sigma(&self, idx: usize) -> Result<usize> {
        self.check(idx).map(|i| self.act_sigma(i))
    }

    pub fn try_act_tau(&self, idx: usize) -> Result<usize> {
        self.check(idx).map(|i| self.act_tau(i))
    }

    fn check(&self, idx: usize) -> Result<usize> {
        if idx < self.len() {
            Ok(idx)
        } else {
            Err(Error::IndexOutOfRange {
                index: idx,
                len: self.len(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn table(p: u64, n: u32) -> P1Table {
        P1Table::build(PrimePower::new(p, n).unwrap()).unwrap()
    }

    // Count pairs (c, d) mod N with gcd(c, d, p) = 1, up to unit scaling,
    // by brute-force orbit collection.
    fn brute_p1_count(p: u64, n: u32) -> usize {
        let m = p.pow(n);
        let units: Vec<u64> = (1..m).filter(|u| u % p != 0).collect();
        let mut seen = HashSet::new();
        let mut classes = 0;
        for c in 0..m {
            for d in 0..m {
                if c % p == 0 && d % p == 0 {
                    continue;
                }
                if seen.contains(&(c, d)) {
                    continue;
                }
                classes += 1;
                for &u in &units {
                    seen.insert((c * u % m, d * u % m));
                }
                seen.insert((c, d));
            }
        }
        classes
    }

    #[test]
    fn sizes_match_enumeration() {
        for (p, n) in [(11, 1), (3, 2), (2, 1), (2, 3), (5, 2), (7, 1)] {
            assert_eq!(table(p, n).len(), brute_p1_count(p, n), "p={p} n={n}");
        }
        assert_eq!(table(11, 1).len(), 12);
        assert_eq!(table(3, 2).len(), 12);
        assert_eq!(table(2, 1).len(), 3);
    }

    #[test]
    fn composite_rejected() {
        assert_eq!(PrimePower::new(12, 1), Err(Error::NotPrime(12)));
        assert_eq!(PrimePower::new(5, 0), Err(Error::ZeroExponent));
        assert!(PrimePower::new(2, 64).is_err());
        assert!(PrimePower::from_modulus(12).is_err());
        assert_eq!(PrimePower::from_modulus(343).unwrap().n(), 3);
    }

    #[test]
    fn normalize_examples() {
        let pp = PrimePower::new(11, 1).unwrap();
        assert_eq!(normalize(2, 3, &pp), Some(P1Point::Affine(8)));
        assert_eq!(normalize(0, 1, &pp), Some(P1Point::Affine(0)));
        assert_eq!(normalize(1, 0, &pp), Some(P1Point::Infinite(0)));
        let pp = PrimePower::new(2, 5).unwrap();
        assert_eq!(normalize(2, 4, &pp), None);
        // 3^-1 = 11 mod 32, 4 * 11 = 44 = 12 mod 32, r' = 6
        assert_eq!(normalize(3, 4, &pp), Some(P1Point::Infinite(6)));
    }

    #[test]
    fn sigma_and_tau_examples() {
        let t = table(11, 1);
        let zero = t.affine(0);
        assert_eq!(t.point(t.act_sigma(zero)), P1Point::Infinite(0));
        let three = t.affine(3);
        assert_eq!(t.point(t.act_sigma(t.act_tau(three))), P1Point::Affine(4));
    }

    #[test]
    fn permutation_laws_exhaustive() {
        for (p, n) in [(2, 1), (2, 5), (3, 3), (5, 2), (11, 1), (101, 1), (7, 3)] {
            let t = table(p, n);
            let mut s_seen = vec![false; t.len()];
            let mut t_seen = vec![false; t.len()];
            for x in 0..t.len() {
                assert_eq!(t.act_sigma(t.act_sigma(x)), x);
                assert_eq!(t.act_tau(t.act_tau(t.act_tau(x))), x);
                s_seen[t.act_sigma(x)] = true;
                t_seen[t.act_tau(x)] = true;
            }
            assert!(s_seen.iter().all(|&b| b) && t_seen.iter().all(|&b| b));
            let m = t.prime_power().modulus() as i64;
            for a in 0..m {
                let x = t.affine(a);
                assert_eq!(t.act_sigma(t.act_tau(x)), t.affine(a + 1));
                let back = t.act_tau(t.act_tau(t.act_sigma(x)));
                assert_eq!(back, t.affine(a - 1));
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn normalize_is_idempotent(c in -5000i64..5000, d in -5000i64..5000, which in 0usize..4) {
            let pp = [(2, 7), (3, 4), (11, 2), (101, 1)][which];
            let pp = PrimePower::new(pp.0, pp.1).unwrap();
            if let Some(pt) = normalize(c, d, &pp) {
                let (w, t) = pt.pair(&pp);
                proptest::prop_assert_eq!(normalize(w as i64, t as i64, &pp), Some(pt));
            } else {
                proptest::prop_assert!(c % pp.p() as i64 == 0 && d % pp.p() as i64 == 0);
            }
        }
    }

    #[test]
    fn out_of_range_index() {
        let t = table(2, 1);
        assert!(t.try_act_sigma(3).is_err());
        assert_eq!(t.try_act_tau(0).unwrap(), t.act_tau(0));
    }
}
