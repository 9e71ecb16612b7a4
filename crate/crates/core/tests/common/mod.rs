//! Reference computations for integration tests, written without the
//! library's arithmetic.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        let mut e = 0;
        while n.is_multiple_of(q) {
            n /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

/// Legendre symbol by Euler's criterion for an odd prime; `(a/2)` via `a mod 8`.
fn legendre(a: i64, p: u64) -> i64 {
    if p == 2 {
        return match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut r = 1u128;
    let (mut b, mut e) = (a as u128, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Number of cusps of `X_0(N)`: `sum over d | N of phi(gcd(d, N/d))`.
pub fn cusp_count(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| totient(gcd(d, n / d))).sum()
}

/// Genus of `X_0(N)` from the index and the elliptic points.
pub fn genus(n: u64) -> u64 {
    let f = prime_factors(n);
    // 12 * (index / 12), kept integral by scaling everything by 12
    let index: u64 = f.iter().map(|&(p, e)| p.pow(e - 1) * (p + 1)).product();
    let nu2: i64 = if n.is_multiple_of(4) {
        0
    } else {
        f.iter().map(|&(p, _)| 1 + legendre(-4, p)).product()
    };
    let nu3: i64 = if n.is_multiple_of(9) {
        0
    } else {
        f.iter().map(|&(p, _)| if p == 3 { 1 } else { 1 + legendre(-3, p) }).product()
    };
    let twelve_g = 12 + index as i64 - 3 * nu2 - 4 * nu3 - 6 * cusp_count(n) as i64;
    assert!(twelve_g >= 0 && twelve_g % 12 == 0, "genus formula not integral at N={n}");
    (twelve_g / 12) as u64
}

/// Coefficients `a_0..a_order` of `q prod (1 - q^n)^2 (1 - q^(11 n))^2`.
pub fn eta_product_11(order: usize) -> Vec<i64> {
    let mut f = vec![0i64; order + 1];
    if order >= 1 {
        f[1] = 1;
    }
    let times_one_minus = |f: &mut Vec<i64>, k: usize| {
        for i in (k..=order).rev() {
            f[i] -= f[i - k];
        }
    };
    for n in 1..=order {
        for _ in 0..2 {
            times_one_minus(&mut f, n);
        }
        if 11 * n <= order {
            for _ in 0..2 {
                times_one_minus(&mut f, 11 * n);
            }
        }
    }
    f
}

/// `(w, t)` reduced to a canonical representative of its class in
/// `P^1(Z/M)`, by trying every unit scalar. `None` if not primitive.
pub fn p1_class(w: i64, t: i64, m: u64) -> Option<(u64, u64)> {
    let (w, t) = (w.rem_euclid(m as i64) as u64, t.rem_euclid(m as i64) as u64);
    if gcd(gcd(w, t), m) != 1 {
        return None;
    }
    (1..m.max(2))
        .filter(|&u| gcd(u, m) == 1)
        .map(|u| ((u * w) % m, (u * t) % m))
        .min()
}

/// `T_r {0, oo}` by scanning the whole box `0 <= u, v, w, t <= r`.
pub fn winding_image_box(r: i64, m: u64) -> BTreeMap<(u64, u64), i64> {
    let mut out = BTreeMap::new();
    for u in 0..=r {
        for v in 0..u {
            for t in 0..=r {
                for w in 0..t {
                    if u * t - v * w == r {
                        if let Some(c) = p1_class(w, t, m) {
                            *out.entry(c).or_insert(0) += 1;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Orbit of `+-(a, c) mod N` under `(a, c) -> (x a + y c, c / x)`, the
/// reduction of Gamma_0(N) acting on column vectors.
pub fn vector_orbit(start: (i64, i64), n: u64) -> BTreeSet<(i64, i64)> {
    let m = n as i64;
    let red = |(a, c): (i64, i64)| (a.rem_euclid(m), c.rem_euclid(m));
    let units: Vec<(i64, i64)> = (0..m)
        .filter_map(|u| (0..m).find(|&v| (u * v).rem_euclid(m) == 1 % m).map(|v| (u, v)))
        .collect();
    let start = red(start);
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((a, c)) = queue.pop_front() {
        let mut next = vec![red((-a, -c)), red((a + c, c))];
        next.extend(units.iter().map(|&(u, v)| red((u * a, v * c))));
        for s in next {
            if seen.insert(s) {
                queue.push_back(s);
            }
        }
    }
    seen
}

/// Cusps `a/c` and `a'/c'` of `X_0(N)` are equivalent iff the vectors
/// `(a, c)` and `(a', c')` lie in one orbit mod N.
pub fn cusps_equivalent_by_orbit(x: (i64, i64), y: (i64, i64), n: u64) -> bool {
    let m = n as i64;
    vector_orbit(x, n).contains(&(y.0.rem_euclid(m), y.1.rem_euclid(m)))
}

/// Orbit label of every primitive `(a, c) mod N`.
pub fn cusp_orbits(n: u64) -> BTreeMap<(i64, i64), usize> {
    let m = n as i64;
    let mut label = BTreeMap::new();
    let mut next = 0;
    for a in 0..m {
        for c in 0..m {
            if label.contains_key(&(a, c)) || gcd(gcd(a as u64, c as u64), n) != 1 {
                continue;
            }
            for v in vector_orbit((a, c), n) {
                label.insert(v, next);
            }
            next += 1;
        }
    }
    label
}

pub fn sum_of_divisors(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigRational::zero(), |s, k| s + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Jordan block sizes (descending) of `m` at a rational eigenvalue, from the
/// ranks of `(m - lambda)^j`.
pub fn jordan_sizes(m: &[Vec<i64>], lambda: i64) -> Vec<usize> {
    let n = m.len();
    let shifted: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(BigInt::from(m[i][j] - if i == j { lambda } else { 0 })))
                .collect()
        })
        .collect();
    let mut ranks = vec![n];
    let mut power: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    loop {
        power = mat_mul(&power, &shifted);
        let r = rank(power.clone());
        if r == *ranks.last().unwrap() {
            break;
        }
        ranks.push(r);
    }
    // blocks of size >= j: rank_(j-1) - rank_j
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for j in 0..at_least.len() {
        let next = at_least.get(j + 1).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(j + 1, at_least[j] - next));
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}
