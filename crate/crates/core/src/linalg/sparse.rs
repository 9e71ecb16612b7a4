//! Sparse row echelon over a [`ScalarField`].
//!
//! Rows are inserted one at a time and reduced on their leading entry only
//! (semi-echelon form). The pivot rule is fixed: a row is pivoted on the
//! first column that survives reduction, and earlier rows win. Full reduction
//! of an arbitrary vector against the pivots yields the unique representative
//! supported on the non-pivot columns.

use std::collections::BTreeMap;

use super::field::ScalarField;

/// Sorted `(column, value)` pairs without explicit zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Build a sparse vector from unsorted pairs, summing duplicates.
pub fn collect_sparse<F: ScalarField>(
    field: &F,
    entries: impl IntoIterator<Item = (usize, F::Elem)>,
) -> SparseVec<F::Elem> {
    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (c, v) in entries {
        match acc.get_mut(&c) {
            Some(slot) => *slot = field.add(slot, &v),
            None => {
                acc.insert(c, v);
            }
        }
    }
    acc.into_iter().filter(|(_, v)| !field.is_zero(v)).collect()
}

#[derive(Debug, Clone)]
pub struct Echelon<F: ScalarField> {
    field: F,
    ncols: usize,
    /// Pivot rows, each with leading coefficient one.
    rows: Vec<SparseVec<F::Elem>>,
    pivot_row: Vec<Option<u32>>,
}

impl<F: ScalarField> Echelon<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        Echelon {
            field,
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Pivot columns in insertion order.
    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    /// Insert a row; returns `true` when it was independent of the existing
    /// rows and became a new pivot.
    pub fn insert(&mut self, row: SparseVec<F::Elem>) -> bool {
        let f = &self.field;
        let mut acc: BTreeMap<usize, F::Elem> = row.into_iter().collect();
        loop {
            let Some((&lead, _)) = acc.first_key_value() else {
                return false;
            };
            match self.pivot_row[lead] {
                Some(r) => {
                    let coef = acc.remove(&lead).unwrap();
                    axpy(f, &mut acc, &coef, &self.rows[r as usize][1..]);
                }
                None => {
                    let coef = acc.remove(&lead).unwrap();
                    let inv = f.inv(&coef);
                    let mut new_row = Vec::with_capacity(acc.len() + 1);
                    new_row.push((lead, f.one()));
                    new_row.extend(acc.into_iter().map(|(c, v)| (c, f.mul(&v, &inv))));
                    self.pivot_row[lead] = Some(self.rows.len() as u32);
                    self.rows.push(new_row);
                    return true;
                }
            }
        }
    }

    /// Canonical representative of `v` modulo the row space: the unique
    /// vector congruent to `v` with support on non-pivot columns.
    pub fn reduce(&self, v: impl IntoIterator<Item = (usize, F::Elem)>) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
        for (c, x) in v {
            match acc.get_mut(&c) {
                Some(slot) => *slot = f.add(slot, &x),
                None => {
                    acc.insert(c, x);
                }
            }
        }
        acc.retain(|_, x| !f.is_zero(x));
        let mut out = Vec::new();
        while let Some((col, coef)) = acc.pop_first() {
            match self.pivot_row[col] {
                Some(r) => axpy(f, &mut acc, &coef, &self.rows[r as usize][1..]),
                None => out.push((col, coef)),
            }
        }
        out
    }
}

/// `acc -= coef * row`, dropping entries that cancel.
fn axpy<F: ScalarField>(
    f: &F,
    acc: &mut BTreeMap<usize, F::Elem>,
    coef: &F::Elem,
    row: &[(usize, F::Elem)],
) {
    for (c, x) in row {
        match acc.get_mut(c) {
            Some(slot) => {
                let v = f.sub_mul(slot, coef, x);
                if f.is_zero(&v) {
                    acc.remove(c);
                } else {
                    *slot = v;
                }
            }
            None => {
                acc.insert(*c, f.neg(&f.mul(coef, x)));
            }
        }
    }
}

/// Rank of a list of sparse vectors.
pub fn rank_of<F: ScalarField>(field: F, ncols: usize, vecs: Vec<SparseVec<F::Elem>>) -> usize {
    let mut e = Echelon::new(field, ncols);
    for v in vecs {
        e.insert(v);
    }
    e.rank()
}
