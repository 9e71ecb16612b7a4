//! Elementary divisors of an integer matrix.
//!
//! Unit pivots are eliminated sparsely first (each contributes an invariant
//! factor 1); whatever remains is put into Smith normal form densely over
//! `BigInt`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Default column cap for [`smith_invariants`].
pub const DEFAULT_SMITH_CAP: usize = 5000;

/// Nonzero elementary divisors of the matrix with the given sparse rows,
/// in divisibility order.
pub fn smith_invariants(rows: &[Vec<(usize, i64)>], ncols: usize) -> Vec<BigInt> {
    let mut mat: Vec<BTreeMap<usize, BigInt>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .filter(|(_, v)| *v != 0)
                .map(|&(c, v)| (c, BigInt::from(v)))
                .collect()
        })
        .collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, r) in mat.iter().enumerate() {
        for &c in r.keys() {
            col_rows[c].insert(i);
        }
    }
    let mut alive_row = vec![true; mat.len()];
    let mut alive_col = vec![true; ncols];
    let mut units = 0usize;

    loop {
        // Unit entry in the shortest live row.
        let pivot = mat
            .iter()
            .enumerate()
            .filter(|(i, _)| alive_row[*i])
            .filter_map(|(i, r)| {
                r.iter()
                    .find(|(_, v)| v.is_one() || (-*v).is_one())
                    .map(|(&c, _)| (r.len(), i, c))
            })
            .min();
        let Some((_, pr, pc)) = pivot else { break };
        let pv = mat[pr][&pc].clone();
        let prow: Vec<(usize, BigInt)> = mat[pr].iter().map(|(c, v)| (*c, v.clone())).collect();
        let targets: Vec<usize> = col_rows[pc].iter().copied().filter(|&i| i != pr).collect();
        for i in targets {
            // row_i -= (a_ic / pv) * row_pr ; pv = ±1 so division is multiplication
            let factor = &mat[i][&pc] * &pv;
            for (c, v) in &prow {
                let entry = mat[i].entry(*c).or_insert_with(BigInt::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    mat[i].remove(c);
                    col_rows[*c].remove(&i);
                } else {
                    col_rows[*c].insert(i);
                }
            }
        }
        // Column operations now clear the pivot row without touching others.
        for (c, _) in &prow {
            col_rows[*c].remove(&pr);
        }
        mat[pr].clear();
        alive_row[pr] = false;
        alive_col[pc] = false;
        units += 1;
    }

    let rest_cols: Vec<usize> = (0..ncols).filter(|&c| alive_col[c] && !col_rows[c].is_empty()).collect();
    let col_pos: BTreeMap<usize, usize> = rest_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense: Vec<Vec<BigInt>> = mat
        .iter()
        .enumerate()
        .filter(|(i, r)| alive_row[*i] && !r.is_empty())
        .map(|(_, r)| {
            let mut row = vec![BigInt::zero(); rest_cols.len()];
            for (c, v) in r {
                row[col_pos[c]] = v.clone();
            }
            row
        })
        .collect();

    let mut out = vec![BigInt::one(); units];
    out.extend(dense_smith_diagonal(dense));
    out
}

/// Nonzero diagonal of the Smith normal form of a dense integer matrix.
pub fn dense_smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    if m == 0 {
        return Vec::new();
    }
    let n = a[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry in the lower-right block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut done = false;
        while !done {
            done = true;
            let piv = a[t][t].clone();
            // clear column t
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&piv);
                for j in t..n {
                    let sub = &q * &a[t][j];
                    a[i][j] -= sub;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    done = false;
                    break;
                }
            }
            if !done {
                continue;
            }
            // clear row t
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&piv);
                for i in t..m {
                    let sub = &q * &a[i][t];
                    a[i][j] -= sub;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    done = false;
                    break;
                }
            }
            if !done {
                continue;
            }
            // divisibility of the remaining block
            let piv = a[t][t].clone();
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&a[i][j] % &piv).is_zero() {
                        for k in t..n {
                            let v = a[i][k].clone();
                            a[t][k] += v;
                        }
                        done = false;
                        break 'outer;
                    }
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}
