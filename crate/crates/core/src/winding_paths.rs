//! Walks through the Manin-symbol graph on `P^1(Z/p^n Z)` that avoid the
//! classes touched by `T_i {0, oo}` (`i <= r`), and the inverse-pair search on
//! two intervals of residues.

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::{gcd, inv_mod, mul_mod};
use crate::error::{Error, Result};
use crate::hecke_symbols::SigmaRSet;
use crate::residue_p1::{P1Table, PrimePower};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChainLabel {
    A,
    B,
    #[serde(rename = "Bprime")]
    BPrime,
}

impl std::fmt::Display for ChainLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChainLabel::A => "A",
            ChainLabel::B => "B",
            ChainLabel::BPrime => "Bprime",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    HitSigma { index: usize },
    HitLeading { index: usize },
    Wrapped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub label: ChainLabel,
    pub r: u64,
    pub start: usize,
    /// Every vertex passed, main track and intermediates, in order. The
    /// stopping vertex is not included.
    pub visited: Vec<usize>,
    /// Affine residues collected on the main track.
    pub interval: Vec<u64>,
    pub stop: StopReason,
}

impl Chain {
    pub fn interval_len(&self) -> u64 {
        self.interval.len() as u64
    }
}

struct Walker<'a> {
    table: &'a P1Table,
    sigma: &'a SigmaRSet,
    visited: Vec<usize>,
    interval: Vec<u64>,
}

impl Walker<'_> {
    fn bad(&self, idx: usize) -> Option<StopReason> {
        if self.sigma.contains(idx) {
            Some(StopReason::HitSigma { index: idx })
        } else if self.sigma.leading == Some(idx) {
            Some(StopReason::HitLeading { index: idx })
        } else {
            None
        }
    }

    /// Push `idx` unless it is bad.
    fn step(&mut self, idx: usize) -> std::result::Result<(), StopReason> {
        match self.bad(idx) {
            Some(s) => Err(s),
            None => {
                self.visited.push(idx);
                Ok(())
            }
        }
    }

    fn finish(self, label: ChainLabel, start: usize, stop: StopReason) -> Chain {
        Chain {
            label,
            r: self.sigma.r,
            start,
            visited: self.visited,
            interval: self.interval,
            stop,
        }
    }

    fn residue(&self, idx: usize) -> u64 {
        debug_assert!(idx < self.table.prime_power().modulus() as usize);
        idx as u64
    }
}

fn check_sigma(table: &P1Table, sigma: &SigmaRSet) -> Result<()> {
    if sigma.members.iter().chain(sigma.leading.iter()).any(|&i| i >= table.len()) {
        return Err(Error::InvalidArgument("obstruction set built for another table".into()));
    }
    Ok(())
}

/// Walk backwards from `(-r-1 : 1)` by `sigma` then `tau^2` (affine `-1` per
/// step). A residue joins the interval once both it and its `sigma`-image are
/// clear.
pub fn walk_chain_a(table: &P1Table, sigma: &SigmaRSet) -> Result<Chain> {
    check_sigma(table, sigma)?;
    let r = sigma.r as i64;
    let start = table.affine(-r - 1);
    let mut w = Walker {
        table,
        sigma,
        visited: Vec::new(),
        interval: Vec::new(),
    };
    let mut m = start;
    let stop = loop {
        if let Err(s) = w.step(m) {
            break s;
        }
        let i = table.act_sigma(m);
        if let Err(s) = w.step(i) {
            break s;
        }
        w.interval.push(w.residue(m));
        m = table.act_tau(table.act_tau(i));
        if m == start {
            break StopReason::Wrapped;
        }
    };
    Ok(w.finish(ChainLabel::A, start, stop))
}

/// Case `p` prime to `r`: walk backwards from `(1 : r)` itself by
/// `sigma tau^2`, collecting the residues `1/r - k`.
pub fn walk_chain_b(table: &P1Table, sigma: &SigmaRSet) -> Result<Chain> {
    check_sigma(table, sigma)?;
    let pp = table.prime_power();
    let r = sigma.r;
    if r.is_multiple_of(pp.p()) {
        return Err(Error::Precondition(format!(
            "p = {} divides r = {r}; use the shifted walk",
            pp.p()
        )));
    }
    let start = table.index_of_pair(1, r as i64).expect("(1 : r) is a point");
    let mut w = Walker {
        table,
        sigma,
        visited: vec![start],
        interval: Vec::new(),
    };
    let mut m = start;
    let stop = loop {
        let i = table.act_sigma(m);
        if let Err(s) = w.step(i) {
            break s;
        }
        m = table.act_tau(table.act_tau(i));
        if m == start {
            break StopReason::Wrapped;
        }
        if let Err(s) = w.step(m) {
            break s;
        }
        w.interval.push(w.residue(m));
    };
    Ok(w.finish(ChainLabel::B, start, stop))
}

/// Case `p | r`: pass `(-r : 1)` and `(1-r : r)` to reach `(r : r-1)`, then
/// walk forwards by `tau sigma` (affine `+1`).
pub fn walk_chain_b_prime(table: &P1Table, sigma: &SigmaRSet) -> Result<Chain> {
    check_sigma(table, sigma)?;
    let pp = table.prime_power();
    let r = sigma.r as i64;
    if !sigma.r.is_multiple_of(pp.p()) {
        return Err(Error::Precondition(format!(
            "p = {} does not divide r = {r}; use the direct walk",
            pp.p()
        )));
    }
    let start = table.index_of_pair(r, r - 1).expect("r - 1 is a unit");
    let mut w = Walker {
        table,
        sigma,
        visited: Vec::new(),
        interval: Vec::new(),
    };
    for (c, d) in [(-r, 1), (1 - r, r)] {
        let idx = table.index_of_pair(c, d).expect("point");
        if let Err(s) = w.step(idx) {
            return Ok(w.finish(ChainLabel::BPrime, start, s));
        }
    }
    let mut m = start;
    let stop = loop {
        if let Err(s) = w.step(m) {
            break s;
        }
        let i = table.act_tau(m);
        if let Err(s) = w.step(i) {
            break s;
        }
        w.interval.push(w.residue(m));
        m = table.act_sigma(i);
        if m == start {
            break StopReason::Wrapped;
        }
    };
    Ok(w.finish(ChainLabel::BPrime, start, stop))
}

/// The second walk appropriate to `r`.
pub fn walk_second_chain(table: &P1Table, sigma: &SigmaRSet) -> Result<Chain> {
    if sigma.r.is_multiple_of(table.prime_power().p()) {
        walk_chain_b_prime(table, sigma)
    } else {
        walk_chain_b(table, sigma)
    }
}

/// Lower bound an interval is held to, as the exact rational `num / den`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub chain: ChainLabel,
    pub d: u64,
    pub interval_len: u64,
    /// `p^n/D - D - 2` or `p^n/D^2 - 2`, as `num/den`.
    pub bound: String,
    /// Whether the bound is positive, i.e. the instance is in range.
    pub in_regime: bool,
    pub pass: bool,
}

/// `(numerator, denominator)` of the bound for `label` with parameter `d`.
fn bound_fraction(label: ChainLabel, modulus: u64, d: u64) -> (i128, i128) {
    let (q, d) = (modulus as i128, d as i128);
    match label {
        ChainLabel::A => (q - d * d - 2 * d, d),
        _ => (q - 2 * d * d, d * d),
    }
}

pub fn check_bound(chain: &Chain, pp: &PrimePower, d: u64) -> Result<BoundCheck> {
    if d == 0 {
        return Err(Error::InvalidArgument("D must be at least 1".into()));
    }
    let (num, den) = bound_fraction(chain.label, pp.modulus(), d);
    let len = chain.interval_len() as i128;
    Ok(BoundCheck {
        chain: chain.label,
        d,
        interval_len: chain.interval_len(),
        bound: if num % den == 0 {
            (num / den).to_string()
        } else {
            format!("{num}/{den}")
        },
        in_regime: num > 0,
        pass: len * den >= num,
    })
}

/// Verify the structural claims on a walk: no visited vertex is bad, and
/// the interval is a run of consecutive residues in the walk's direction.
pub fn chain_is_consistent(chain: &Chain, table: &P1Table, sigma: &SigmaRSet) -> bool {
    let m = table.prime_power().modulus();
    let clean = chain.visited.iter().enumerate().all(|(k, &v)| {
        !sigma.contains(v) && (sigma.leading != Some(v) || (chain.label == ChainLabel::B && k == 0))
    });
    let step = match chain.label {
        ChainLabel::BPrime => 1,
        _ => m - 1,
    };
    let consecutive = chain
        .interval
        .windows(2)
        .all(|w| w[1] == (w[0] + step) % m);
    let sigma_images_on_chain = chain.label != ChainLabel::A
        || chain
            .interval
            .iter()
            .all(|&a| chain.visited.contains(&table.act_sigma(a as usize)));
    clean && consecutive && sigma_images_on_chain
}

/// A residue interval `{start, ..., start + len - 1}` inside `1..p^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub start: u64,
    pub len: u64,
}

impl Interval {
    pub fn contains(&self, x: u64) -> bool {
        x >= self.start && x < self.start + self.len
    }

    fn validate(&self, modulus: u64) -> Result<()> {
        if self.len == 0 || self.start == 0 || self.start + self.len > modulus {
            return Err(Error::InvalidArgument(format!(
                "interval [{}, {}) not inside 1..{modulus}",
                self.start,
                self.start + self.len
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntervalPair {
    pub a: Interval,
    pub b: Interval,
}

/// Smallest `y` in `A` with `z = -1/y` in `B`.
pub fn find_inverse_pair(pair: IntervalPair, pp: &PrimePower) -> Result<Option<(u64, u64)>> {
    let m = pp.modulus();
    pair.a.validate(m)?;
    pair.b.validate(m)?;
    let neg_inv = |x: u64| inv_mod(x, m).map(|i| (m - i) % m);
    let found = if pair.a.len <= pair.b.len {
        (pair.a.start..pair.a.start + pair.a.len)
            .find_map(|y| neg_inv(y).filter(|&z| pair.b.contains(z)).map(|z| (y, z)))
    } else {
        (pair.b.start..pair.b.start + pair.b.len)
            .filter_map(|z| neg_inv(z).filter(|&y| pair.a.contains(y)).map(|y| (y, z)))
            .min()
    };
    if let Some((y, z)) = found {
        assert!(
            gcd(y, m) == 1 && mul_mod(y, z, m) == m - 1,
            "inverse pair post-check failed: {y}*{z} mod {m}"
        );
    }
    Ok(found)
}

/// `(C'^2, minimal product)`: `|A||B|` must satisfy `(|A||B|)^2 >= C'^2 p^(3n)`
/// with `C'^2 = 128` for `p = 2` and 64 otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairRequirement {
    pub c_prime_squared: u64,
    /// `C'^2 p^(3n)`.
    pub product_squared_at_least: String,
    /// Smallest integer product meeting the requirement.
    pub min_product: String,
}

pub fn pair_size_requirement(pp: &PrimePower) -> PairRequirement {
    let c2 = if pp.p() == 2 { 128 } else { 64 };
    let target = BigUint::from(c2) * pp.modulus_big().pow(3);
    let mut root = target.sqrt();
    if &root * &root < target {
        root += 1u32;
    }
    PairRequirement {
        c_prime_squared: c2,
        product_squared_at_least: target.to_string(),
        min_product: root.to_string(),
    }
}

pub fn pair_requirement_met(pp: &PrimePower, product: u64) -> bool {
    let c2 = if pp.p() == 2 { 128u32 } else { 64 };
    product > 0 && BigUint::from(product).pow(2) >= BigUint::from(c2) * pp.modulus_big().pow(3)
}

/// Outcome of scanning every placement of two intervals of given lengths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub modulus: u64,
    pub len_a: u64,
    pub len_b: u64,
    pub requirement_met: bool,
    pub pairs_checked: u64,
    pub counterexamples: Vec<IntervalPair>,
}

/// Try every `A`, `B` of the given lengths inside `1..p^n`.
pub fn scan_interval_pairs(pp: &PrimePower, len_a: u64, len_b: u64) -> Result<ScanReport> {
    let m = pp.modulus();
    if len_a == 0 || len_b == 0 || len_a >= m || len_b >= m {
        return Err(Error::InvalidArgument("interval lengths must lie in 1..p^n-1".into()));
    }
    let mut report = ScanReport {
        modulus: m,
        len_a,
        len_b,
        requirement_met: pair_requirement_met(pp, len_a * len_b),
        pairs_checked: 0,
        counterexamples: Vec::new(),
    };
    for sa in 1..=m - len_a {
        for sb in 1..=m - len_b {
            let pair = IntervalPair {
                a: Interval { start: sa, len: len_a },
                b: Interval { start: sb, len: len_b },
            };
            report.pairs_checked += 1;
            if find_inverse_pair(pair, pp)?.is_none() {
                report.counterexamples.push(pair);
            }
        }
    }
    Ok(report)
}
