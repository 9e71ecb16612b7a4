//! Cusps of `X_0(N)` and the action of `T_r` on them.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{divisors, gcd};
use crate::error::{Error, Result};

/// The cusp `a/c`, stored with `gcd(a, c) = 1` and `c >= 0`; infinity is `1/0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cusp {
    pub a: i64,
    pub c: i64,
}

impl Cusp {
    pub const INFINITY: Cusp = Cusp { a: 1, c: 0 };
    pub const ZERO: Cusp = Cusp { a: 0, c: 1 };

    /// Panics when `a = c = 0`.
    pub fn new(a: i64, c: i64) -> Cusp {
        assert!(a != 0 || c != 0, "0/0 is not a cusp");
        if c == 0 {
            return Cusp::INFINITY;
        }
        let g = a.gcd(&c);
        let (mut a, mut c) = (a / g, c / g);
        if c < 0 {
            a = -a;
            c = -c;
        }
        Cusp { a, c }
    }

    pub fn is_infinity(&self) -> bool {
        self.c == 0
    }

    /// Some `(b, d)` completing `(a, b; c, d)` to a matrix of determinant 1.
    fn completion(&self) -> (i64, i64) {
        let e = self.a.extended_gcd(&self.c);
        // a*x + c*y = 1  =>  (a, -y; c, x)
        debug_assert_eq!(e.gcd, 1);
        (-e.y, e.x)
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "oo")
        } else {
            write!(f, "{}/{}", self.a, self.c)
        }
    }
}

/// `s` with `a*s = 1 (mod c)`; 1 for the cusp at infinity.
fn inverse_numerator(x: &Cusp) -> i64 {
    if x.c == 0 {
        return 1;
    }
    let e = x.a.extended_gcd(&x.c);
    e.x
}

/// Gamma_0(N)-equivalence: `a1/c1 ~ a2/c2` iff `c2*s1 = c1*s2 (mod gcd(c1*c2, N))`
/// where `a_j*s_j = 1 (mod c_j)`.
pub fn cusp_equivalent(x: Cusp, y: Cusp, level: u64) -> bool {
    let n = level as i128;
    let m = gcd((x.c as i128 * y.c as i128).unsigned_abs() as u64, level) as i128;
    if m == 0 {
        return n == 0 && x == y;
    }
    let s1 = inverse_numerator(&x) as i128;
    let s2 = inverse_numerator(&y) as i128;
    (y.c as i128 * s1 - x.c as i128 * s2).rem_euclid(m) == 0
}

/// Exhaustive check: with `g, g'` in `SL_2(Z)` sending infinity to `x` and `y`,
/// the cusps are equivalent iff `g' T^m g^-1` lies in Gamma_0(N) up to sign for
/// some translation `T^m`, and `m` only matters modulo `N`.
pub fn brute_force_equivalent(x: Cusp, y: Cusp, level: u64) -> bool {
    let n = level as i128;
    let (_, d) = x.completion();
    let (_, d2) = y.completion();
    let (c, c2) = (x.c as i128, y.c as i128);
    (0..n).any(|m| (c2 * d as i128 - c * d2 as i128 - m * c * c2).rem_euclid(n) == 0)
}

/// A class of cusps with its multiplicity in a formal sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspClassCount {
    pub representative: Cusp,
    pub count: u64,
}

/// Apply the degree-`sigma_1(r)` correspondence `T_r` to a cusp: the images
/// under `(r/delta, -beta; 0, delta)` for `delta | r`, `0 <= beta < delta`,
/// grouped into Gamma_0(N)-classes in order of first appearance.
pub fn hecke_cusp_action(level: u64, r: u64, x: Cusp) -> Result<Vec<CuspClassCount>> {
    if r == 0 || gcd(r, level) != 1 {
        return Err(Error::NotCoprime { r, level });
    }
    let mut classes: Vec<CuspClassCount> = Vec::new();
    for delta in divisors(r) {
        let alpha = (r / delta) as i64;
        let delta = delta as i64;
        for beta in 0..delta {
            let image = Cusp::new(alpha * x.a - beta * x.c, delta * x.c);
            match classes
                .iter_mut()
                .find(|k| cusp_equivalent(k.representative, image, level))
            {
                Some(k) => k.count += 1,
                None => classes.push(CuspClassCount {
                    representative: image,
                    count: 1,
                }),
            }
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sigma1;

    fn all_cusps(bound: i64) -> Vec<Cusp> {
        let mut out = vec![Cusp::INFINITY];
        for c in 1..=bound {
            for a in -bound..=bound {
                if a.gcd(&c) == 1 {
                    out.push(Cusp::new(a, c));
                }
            }
        }
        out
    }

    #[test]
    fn normalization() {
        assert_eq!(Cusp::new(2, -4), Cusp { a: -1, c: 2 });
        assert_eq!(Cusp::new(-3, 0), Cusp::INFINITY);
        assert_eq!(Cusp::new(0, 5), Cusp::ZERO);
    }

    #[test]
    fn criterion_agrees_with_brute_force() {
        let cusps = all_cusps(12);
        for level in [1, 2, 4, 6, 9, 11, 12, 25, 27] {
            for &x in &cusps {
                for &y in cusps.iter().step_by(3) {
                    assert_eq!(
                        cusp_equivalent(x, y, level),
                        brute_force_equivalent(x, y, level),
                        "N={level} {x} {y}"
                    );
                }
            }
        }
    }

    #[test]
    fn class_counts_small_levels() {
        // the number of inequivalent cusps among a/c with c | N
        for (level, expect) in [(11u64, 2usize), (25, 6), (27, 6), (12, 6)] {
            let mut reps: Vec<Cusp> = Vec::new();
            for c in divisors(level) {
                for a in 0..level as i64 {
                    if a.gcd(&(c as i64)) != 1 {
                        continue;
                    }
                    let x = Cusp::new(a, c as i64);
                    if !reps.iter().any(|&r| cusp_equivalent(r, x, level)) {
                        reps.push(x);
                    }
                }
            }
            assert_eq!(reps.len(), expect, "N={level}");
        }
    }

    #[test]
    fn hecke_fixes_zero_and_infinity() {
        let out = hecke_cusp_action(11, 2, Cusp::ZERO).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].count, 3);
        assert!(cusp_equivalent(out[0].representative, Cusp::ZERO, 11));
        for r in [1, 2, 3, 4, 6] {
            let out = hecke_cusp_action(25, r, Cusp::INFINITY).unwrap();
            assert_eq!(out.len(), 1);
            assert_eq!(out[0].count, sigma1(r));
        }
        let id = hecke_cusp_action(11, 1, Cusp::new(1, 3)).unwrap();
        assert_eq!(id, vec![CuspClassCount { representative: Cusp::new(1, 3), count: 1 }]);
    }

    #[test]
    fn rejects_shared_factor() {
        assert_eq!(
            hecke_cusp_action(25, 5, Cusp::ZERO),
            Err(Error::NotCoprime { r: 5, level: 25 })
        );
    }
}
