//! Hecke images of the symbol `{0, oo}` as sums of Manin symbols, the set of
//! classes they can touch, and the independence test over a field.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arith::smallest_prime_other_than;
use crate::bounds::criterion_threshold;
use crate::error::{Error, Result};
use crate::linalg::FieldSpec;
use crate::rel_homology::AnyPresentation;
use crate::residue_p1::{P1Table, PrimePower};

/// Integer vector on the points of `P^1`, stored sparsely without zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolVector {
    len: usize,
    entries: BTreeMap<usize, i64>,
}

impl SymbolVector {
    pub fn zero(len: usize) -> Self {
        SymbolVector {
            len,
            entries: BTreeMap::new(),
        }
    }

    /// Sums duplicate indices. Indices are not range-checked here; reduction
    /// against a presentation does that.
    pub fn from_entries(len: usize, entries: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut v = SymbolVector::zero(len);
        for (i, x) in entries {
            v.add_at(i, x);
        }
        v
    }

    pub fn add_at(&mut self, idx: usize, x: i64) {
        if x == 0 {
            return;
        }
        let slot = self.entries.entry(idx).or_insert(0);
        *slot += x;
        if *slot == 0 {
            self.entries.remove(&idx);
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when the ambient space has no points.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, idx: usize) -> i64 {
        self.entries.get(&idx).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.entries.iter().map(|(&i, &x)| (i, x))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> i64 {
        self.entries.values().sum()
    }
}

/// Bookkeeping from a tuple enumeration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TupleStats {
    /// Tuples `(u, v, w, t)` with `0 <= v < u`, `0 <= w < t`, `ut - vw = r`.
    pub tuples: u64,
    /// Of those, the ones whose `(w, t)` is not a point mod `p^n`.
    pub dropped: u64,
}

/// `T_r {0, oo}` as the sum of the classes of `(w, t)` over all tuples with
/// `0 <= v < u`, `0 <= w < t` and `ut - vw = r`.
pub fn winding_image(r: u64, table: &P1Table) -> SymbolVector {
    winding_image_with_stats(r, table).0
}

pub fn winding_image_with_stats(r: u64, table: &P1Table) -> (SymbolVector, TupleStats) {
    let mut out = SymbolVector::zero(table.len());
    let mut stats = TupleStats::default();
    let r = r as i64;
    // ut - vw >= u + t - 1, so t <= r and u <= r + 1 - t
    for t in 1..=r {
        for u in 1..=r + 1 - t {
            let ut = u * t;
            if ut < r {
                continue;
            }
            for w in 0..t {
                let count = if w == 0 {
                    if ut == r {
                        u
                    } else {
                        0
                    }
                } else {
                    let gap = ut - r;
                    (gap % w == 0 && gap / w < u) as i64
                };
                if count == 0 {
                    continue;
                }
                stats.tuples += count as u64;
                match table.index_of_pair(w, t) {
                    Some(idx) => out.add_at(idx, count),
                    None => stats.dropped += count as u64,
                }
            }
        }
    }
    (out, stats)
}

/// Classes that can appear in `T_i {0, oo}` for some `i <= r`, except the
/// leading class `(1 : r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaRSet {
    pub r: u64,
    pub members: BTreeSet<usize>,
    /// Index of `(1 : r)`, if it is a point.
    pub leading: Option<usize>,
}

impl SigmaRSet {
    pub fn contains(&self, idx: usize) -> bool {
        self.members.contains(&idx)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A pair `0 <= w < t` is admissible for some determinant in `1..=r` exactly
/// when `t <= r`: `u = 1, v = 0` gives determinant `t`, and every admissible
/// tuple has determinant at least `t`.
pub fn sigma_r_set(r: u64, table: &P1Table) -> SigmaRSet {
    let r_i = r as i64;
    let leading = table.index_of_pair(1, r_i);
    let mut members = BTreeSet::new();
    for t in 1..=r_i {
        for w in 0..t {
            if let Some(idx) = table.index_of_pair(w, t) {
                members.insert(idx);
            }
        }
    }
    if let Some(l) = leading {
        members.remove(&l);
    }
    SigmaRSet { r, members, leading }
}

/// Rank of `T_1 {0, oo}, ..., T_imax {0, oo}` in the quotient.
pub fn hecke_span_rank_in(pres: &AnyPresentation, table: &P1Table, imax: u64) -> Result<usize> {
    let images: Vec<SymbolVector> = (1..=imax).map(|i| winding_image(i, table)).collect();
    pres.span_rank(&images)
}

pub fn hecke_span_rank(pp: PrimePower, imax: u64, field: FieldSpec) -> Result<usize> {
    let table = P1Table::build(pp)?;
    let pres = AnyPresentation::build(&table, field)?;
    hecke_span_rank_in(&pres, &table, imax)
}

/// Outcome of the independence test for one field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub p: u64,
    pub n: u32,
    pub d: u64,
    pub l: u64,
    pub s: u64,
    pub required_rank: u64,
    pub achieved_rank: u64,
    pub pass: bool,
    /// `C^2 (sd)^6` as a decimal string.
    pub threshold: String,
    /// Whether `p^n >= C^2 (sd)^6`.
    pub threshold_satisfied: bool,
    /// The test is normally run with `l != p`.
    pub l_equals_p: bool,
}

/// Test `F_l`-independence of `T_1 {0, oo}, ..., T_{sd} {0, oo}` in
/// `H_1(X_0(p^n), cusps) (x) F_l`.
pub fn check_independence(p: u64, n: u32, d: u64, l: u64) -> Result<CriterionReport> {
    let pp = PrimePower::new(p, n)?;
    let table = P1Table::build(pp)?;
    let pres = AnyPresentation::build(&table, FieldSpec::prime(l)?)?;
    criterion_report_in(&pres, &table, d)
}

/// As [`check_independence`] against a prebuilt presentation over `F_l`.
pub fn criterion_report_in(pres: &AnyPresentation, table: &P1Table, d: u64) -> Result<CriterionReport> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let pp = *table.prime_power();
    let l = match pres.field() {
        FieldSpec::Prime(l) => l,
        FieldSpec::Rationals => {
            return Err(Error::InvalidArgument("criterion needs a finite field".into()))
        }
    };
    let s = smallest_prime_other_than(pp.p());
    let required = s * d;
    let achieved = hecke_span_rank_in(pres, table, required)? as u64;
    let th = criterion_threshold(pp.p(), d)?;
    Ok(CriterionReport {
        p: pp.p(),
        n: pp.n(),
        d,
        l,
        s,
        required_rank: required,
        achieved_rank: achieved,
        pass: achieved == required,
        threshold_satisfied: pp.modulus_big() >= th.threshold,
        threshold: th.threshold.to_string(),
        l_equals_p: l == pp.p(),
    })
}
