//! Relative homology `H_1(X_0(p^n), cusps)` presented as the quotient of the
//! free module on `P^1(Z/p^n Z)` by its `sigma`-invariant and `tau`-invariant
//! submodules.

mod cusps;

pub use cusps::{
    brute_force_equivalent, cusp_equivalent, hecke_cusp_action, Cusp, CuspClassCount,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke_symbols::SymbolVector;
use crate::linalg::{
    smith_invariants, Echelon, FieldSpec, PrimeField, Rationals, ScalarField, SparseVec,
};
use crate::residue_p1::P1Table;

/// Which invariant submodule a relation row generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    SigmaOrbit,
    SigmaFixed,
    TauOrbit,
    TauFixed,
}

/// Generators of `Z[P^1]^sigma + Z[P^1]^tau` as sparse 0/1 rows.
#[derive(Debug, Clone)]
pub struct RelationSpan {
    ncols: usize,
    rows: Vec<Vec<(usize, i64)>>,
    kinds: Vec<RelationKind>,
}

impl RelationSpan {
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<(usize, i64)>] {
        &self.rows
    }

    pub fn kinds(&self) -> &[RelationKind] {
        &self.kinds
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// One row per orbit: `x + x.sigma` (or `x` when fixed), then
/// `x + x.tau + x.tau^2` (or `x` when fixed). Rows are keyed by the smallest
/// index in the orbit, in ascending order, sigma rows first.
pub fn invariant_generators(table: &P1Table) -> RelationSpan {
    let len = table.len();
    let mut rows = Vec::new();
    let mut kinds = Vec::new();
    for x in 0..len {
        let y = table.act_sigma(x);
        if y == x {
            rows.push(vec![(x, 1)]);
            kinds.push(RelationKind::SigmaFixed);
        } else if x < y {
            rows.push(vec![(x, 1), (y, 1)]);
            kinds.push(RelationKind::SigmaOrbit);
        }
    }
    for x in 0..len {
        let y = table.act_tau(x);
        if y == x {
            rows.push(vec![(x, 1)]);
            kinds.push(RelationKind::TauFixed);
            continue;
        }
        let z = table.act_tau(y);
        if x < y && x < z {
            let mut orbit = [x, y, z];
            orbit.sort_unstable();
            rows.push(orbit.iter().map(|&i| (i, 1)).collect());
            kinds.push(RelationKind::TauOrbit);
        }
    }
    RelationSpan {
        ncols: len,
        rows,
        kinds,
    }
}

/// Echelonized relations over a field together with the quotient basis.
#[derive(Debug, Clone)]
pub struct H1Presentation<F: ScalarField> {
    echelon: Echelon<F>,
    /// Column -> quotient coordinate, for non-pivot columns.
    coordinate: Vec<Option<u32>>,
    free_columns: Vec<usize>,
}

impl<F: ScalarField> H1Presentation<F> {
    pub fn build(table: &P1Table, field: F) -> Self {
        Self::from_relations(&invariant_generators(table), field)
    }

    pub fn from_relations(rel: &RelationSpan, field: F) -> Self {
        let mut echelon = Echelon::new(field.clone(), rel.ncols);
        for row in &rel.rows {
            let v = row.iter().map(|&(c, x)| (c, field.from_i64(x))).collect();
            echelon.insert(v);
        }
        let mut coordinate = vec![None; rel.ncols];
        let mut free_columns = Vec::new();
        for (c, slot) in coordinate.iter_mut().enumerate() {
            if !echelon.is_pivot(c) {
                *slot = Some(free_columns.len() as u32);
                free_columns.push(c);
            }
        }
        H1Presentation {
            echelon,
            coordinate,
            free_columns,
        }
    }

    pub fn field(&self) -> &F {
        self.echelon.field()
    }

    pub fn p1_size(&self) -> usize {
        self.echelon.ncols()
    }

    pub fn relation_rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn quotient_dim(&self) -> usize {
        self.free_columns.len()
    }

    /// The `P^1` indices whose classes form the quotient basis.
    pub fn basis_columns(&self) -> &[usize] {
        &self.free_columns
    }

    /// Coordinates of the class of an integer vector on `P^1`.
    pub fn reduce_vector(&self, v: &SymbolVector) -> Result<SparseVec<F::Elem>> {
        let f = self.field();
        self.reduce_sparse(v.iter().map(|(c, x)| (c, f.from_i64(x))).collect(), v.len())
    }

    /// Coordinates of the class of a field-valued vector of length `len`.
    pub fn reduce_sparse(&self, v: SparseVec<F::Elem>, len: usize) -> Result<SparseVec<F::Elem>> {
        if len != self.p1_size() {
            return Err(Error::DimensionMismatch {
                expected: self.p1_size(),
                got: len,
            });
        }
        if let Some(&(c, _)) = v.iter().find(|(c, _)| *c >= len) {
            return Err(Error::IndexOutOfRange { index: c, len });
        }
        Ok(self
            .echelon
            .reduce(v)
            .into_iter()
            .map(|(c, x)| (self.coordinate[c].expect("free column") as usize, x))
            .collect())
    }

    /// Rank of the classes of the given vectors.
    pub fn span_rank(&self, vecs: &[SymbolVector]) -> Result<usize> {
        let mut e = Echelon::new(self.field().clone(), self.quotient_dim());
        for v in vecs {
            e.insert(self.reduce_vector(v)?);
        }
        Ok(e.rank())
    }
}

/// A presentation over a field chosen at run time.
#[derive(Debug, Clone)]
pub enum AnyPresentation {
    Rational(H1Presentation<Rationals>),
    Prime(H1Presentation<PrimeField>),
}

impl AnyPresentation {
    pub fn build(table: &P1Table, field: FieldSpec) -> Result<Self> {
        Ok(match field {
            FieldSpec::Rationals => AnyPresentation::Rational(H1Presentation::build(table, Rationals)),
            FieldSpec::Prime(l) => {
                AnyPresentation::Prime(H1Presentation::build(table, PrimeField::new(l)?))
            }
        })
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            AnyPresentation::Rational(p) => p.field().spec(),
            AnyPresentation::Prime(p) => p.field().spec(),
        }
    }

    pub fn quotient_dim(&self) -> usize {
        match self {
            AnyPresentation::Rational(p) => p.quotient_dim(),
            AnyPresentation::Prime(p) => p.quotient_dim(),
        }
    }

    pub fn relation_rank(&self) -> usize {
        match self {
            AnyPresentation::Rational(p) => p.relation_rank(),
            AnyPresentation::Prime(p) => p.relation_rank(),
        }
    }

    pub fn p1_size(&self) -> usize {
        match self {
            AnyPresentation::Rational(p) => p.p1_size(),
            AnyPresentation::Prime(p) => p.p1_size(),
        }
    }

    pub fn span_rank(&self, vecs: &[SymbolVector]) -> Result<usize> {
        match self {
            AnyPresentation::Rational(p) => p.span_rank(vecs),
            AnyPresentation::Prime(p) => p.span_rank(vecs),
        }
    }

    /// Whether `v` is zero in the quotient.
    pub fn is_zero_class(&self, v: &SymbolVector) -> Result<bool> {
        Ok(match self {
            AnyPresentation::Rational(p) => p.reduce_vector(v)?.is_empty(),
            AnyPresentation::Prime(p) => p.reduce_vector(v)?.is_empty(),
        })
    }
}

/// Exported summary record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationSummary {
    pub p: u64,
    pub n: u32,
    pub field: FieldSpec,
    pub p1_size: usize,
    pub relation_rank: usize,
    pub quotient_dim: usize,
}

pub fn summarize(table: &P1Table, pres: &AnyPresentation) -> PresentationSummary {
    let pp = table.prime_power();
    PresentationSummary {
        p: pp.p(),
        n: pp.n(),
        field: pres.field(),
        p1_size: pres.p1_size(),
        relation_rank: pres.relation_rank(),
        quotient_dim: pres.quotient_dim(),
    }
}

/// Elementary divisors of the relation matrix; refuses matrices wider than `cap`.
pub fn relation_smith_invariants(rel: &RelationSpan, cap: usize) -> Result<Vec<num_bigint::BigInt>> {
    if rel.ncols > cap {
        return Err(Error::SmithCapExceeded {
            cols: rel.ncols,
            cap,
        });
    }
    Ok(smith_invariants(&rel.rows, rel.ncols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue_p1::{P1Point, PrimePower};
    use num_traits::One;
    use std::collections::HashSet;

    fn table(p: u64, n: u32) -> P1Table {
        P1Table::build(PrimePower::new(p, n).unwrap()).unwrap()
    }

    #[test]
    fn generators_on_three_points() {
        let t = table(2, 1);
        let zero = t.index_of(P1Point::Affine(0));
        let one = t.index_of(P1Point::Affine(1));
        let inf = t.index_of(P1Point::Infinite(0));
        let rel = invariant_generators(&t);
        let as_sets: Vec<HashSet<usize>> = rel
            .rows()
            .iter()
            .map(|r| r.iter().map(|&(c, _)| c).collect())
            .collect();
        assert_eq!(rel.len(), 3);
        assert_eq!(as_sets[0], HashSet::from([zero, inf]));
        assert_eq!(as_sets[1], HashSet::from([one]));
        assert_eq!(as_sets[2], HashSet::from([zero, one, inf]));
        assert_eq!(
            rel.kinds(),
            &[RelationKind::SigmaOrbit, RelationKind::SigmaFixed, RelationKind::TauOrbit]
        );
    }

    #[test]
    fn generators_are_invariant_and_distinct() {
        for (p, n) in [(2, 4), (3, 3), (11, 1), (13, 1), (5, 2)] {
            let t = table(p, n);
            let rel = invariant_generators(&t);
            let mut seen = HashSet::new();
            let mut sigma_rows = 0;
            let mut tau_rows = 0;
            for (row, kind) in rel.rows().iter().zip(rel.kinds()) {
                assert!(seen.insert(row.clone()), "duplicate row");
                let support: HashSet<usize> = row.iter().map(|&(c, _)| c).collect();
                let act = |f: &dyn Fn(usize) -> usize| support.iter().map(|&c| f(c)).collect::<HashSet<_>>();
                match kind {
                    RelationKind::SigmaOrbit | RelationKind::SigmaFixed => {
                        sigma_rows += 1;
                        assert_eq!(act(&|c| t.act_sigma(c)), support);
                    }
                    _ => {
                        tau_rows += 1;
                        assert_eq!(act(&|c| t.act_tau(c)), support);
                    }
                }
            }
            assert!(sigma_rows <= t.len() && tau_rows <= t.len());
        }
    }

    #[test]
    fn small_quotient_dimensions() {
        for (p, n, dim) in [(11, 1, 3), (5, 2, 5), (3, 1, 1)] {
            let t = table(p, n);
            let pres = H1Presentation::build(&t, Rationals);
            assert_eq!(pres.quotient_dim(), dim, "p^n = {p}^{n}");
            assert_eq!(pres.quotient_dim() + pres.relation_rank(), t.len());
        }
    }

    #[test]
    fn relation_rows_reduce_to_zero() {
        let t = table(3, 3);
        let rel = invariant_generators(&t);
        let pres = H1Presentation::build(&t, Rationals);
        for row in rel.rows() {
            let v = SymbolVector::from_entries(t.len(), row.iter().copied());
            assert!(pres.reduce_vector(&v).unwrap().is_empty());
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let t = table(11, 1);
        let pres = H1Presentation::build(&t, Rationals);
        let v = SymbolVector::from_entries(5, [(0, 1)]);
        assert_eq!(
            pres.reduce_vector(&v),
            Err(Error::DimensionMismatch { expected: 12, got: 5 })
        );
    }

    #[test]
    fn smith_torsion_free_small_levels() {
        for (p, n) in [(11, 1), (13, 1), (2, 3)] {
            let rel = invariant_generators(&table(p, n));
            let inv = relation_smith_invariants(&rel, 5000).unwrap();
            assert!(inv.iter().all(|d| d.is_one()), "p^n = {p}^{n}: {inv:?}");
        }
        let rel = invariant_generators(&table(11, 1));
        assert!(matches!(
            relation_smith_invariants(&rel, 10),
            Err(Error::SmithCapExceeded { cols: 12, cap: 10 })
        ));
    }

    #[test]
    fn any_presentation_dispatch() {
        let t = table(11, 1);
        let q = AnyPresentation::build(&t, FieldSpec::Rationals).unwrap();
        let f3 = AnyPresentation::build(&t, FieldSpec::Prime(3)).unwrap();
        assert_eq!(q.quotient_dim(), f3.quotient_dim());
        let s = summarize(&t, &f3);
        assert_eq!(s.p1_size, 12);
        assert_eq!(s.relation_rank + s.quotient_dim, 12);
        assert!(AnyPresentation::build(&t, FieldSpec::Prime(4)).is_err());
    }

    proptest::proptest! {
        #[test]
        fn reduction_is_linear(
            u in proptest::collection::vec((0usize..36, -9i64..10), 0..8),
            v in proptest::collection::vec((0usize..36, -9i64..10), 0..8),
            a in -5i64..6,
            b in -5i64..6,
        ) {
            let t = table(3, 3);
            let pres = H1Presentation::build(&t, Rationals);
            let uv = SymbolVector::from_entries(36, u.iter().copied());
            let vv = SymbolVector::from_entries(36, v.iter().copied());
            let combo = SymbolVector::from_entries(
                36,
                u.iter().map(|&(c, x)| (c, a * x)).chain(v.iter().map(|&(c, x)| (c, b * x))),
            );
            let lhs = pres.reduce_vector(&combo).unwrap();
            let ru = pres.reduce_vector(&uv).unwrap();
            let rv = pres.reduce_vector(&vv).unwrap();
            let f = Rationals;
            let rhs = crate::linalg::sparse::collect_sparse(
                &f,
                ru.into_iter().map(|(c, x)| (c, x * f.from_i64(a)))
                    .chain(rv.into_iter().map(|(c, x)| (c, x * f.from_i64(b)))),
            );
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }
}
