//! Randomized verification of the commutation relations between `t_p`,
//! `U_q` and `B_d`, and of `a_1(T_n f) = a_n(f)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::character::Character;
use super::series::QExpansion;
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::linalg::field::rational_string;

type Series = QExpansion<BigRational>;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Largest `n` for the first-coefficient identity.
pub const HECKE_COEFF_MAX: u64 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationResult {
    pub relation: String,
    pub checked: u32,
    pub passed: u32,
    /// Smallest order up to which a comparison was made.
    pub min_compared_order: usize,
    pub pass: bool,
}

/// A series on which an operator identity fails, showing that a
/// hypothesis of a relation is needed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub relation: String,
    pub trial: u32,
    pub index: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationsReport {
    pub order: usize,
    pub trials: u32,
    pub seed: u64,
    pub relations: Vec<RelationResult>,
    /// `t_3 B_3 != B_3 t_3`.
    pub expected_inequality: Option<Witness>,
    pub all_pass: bool,
}

fn characters() -> [Character; 4] {
    [
        Character::Trivial { modulus: 1 },
        Character::Quadratic { modulus: 4, disc: -4 },
        Character::Quadratic { modulus: 5, disc: 5 },
        Character::Quadratic { modulus: 3, disc: -3 },
    ]
}

pub fn random_series(rng: &mut impl Rng, order: usize, weight: u32, chi: Character) -> Series {
    QExpansion::from_fn(order, weight, chi, |_| {
        BigRational::new(BigInt::from(rng.gen_range(-20i64..=20)), BigInt::from(rng.gen_range(1i64..=5)))
    })
}

struct Tally {
    name: &'static str,
    checked: u32,
    passed: u32,
    min_order: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            passed: 0,
            min_order: usize::MAX,
        }
    }

    fn record(&mut self, lhs: &Series, rhs: &Series) {
        self.checked += 1;
        self.min_order = self.min_order.min(lhs.common_reliable(rhs));
        if lhs.agrees_with(rhs) {
            self.passed += 1;
        }
    }

    fn finish(self) -> RelationResult {
        RelationResult {
            relation: self.name.into(),
            checked: self.checked,
            passed: self.passed,
            min_compared_order: if self.checked == 0 { 0 } else { self.min_order },
            pass: self.checked > 0 && self.passed == self.checked,
        }
    }
}

fn pick_coprime(rng: &mut impl Rng, to: u64) -> u64 {
    loop {
        let d = rng.gen_range(1..=6);
        if gcd(d, to) == 1 {
            return d;
        }
    }
}

pub fn verify_relations(order: usize, trials: u32, seed: u64) -> Result<RelationsReport> {
    if order < 8 {
        return Err(Error::InvalidArgument("order must be at least 8".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = [
        Tally::new("B_d B_d' = B_d' B_d"),
        Tally::new("t_p B_d = B_d t_p, (p,d)=1"),
        Tally::new("t_p t_p' = t_p' t_p"),
        Tally::new("t_p U_q = U_q t_p, p!=q"),
        Tally::new("U_q U_q' = U_q' U_q"),
        Tally::new("U_q B_d = B_d U_q, (q,d)=1"),
        Tally::new("U_q B_(q^k) = B_(q^(k-1))"),
        Tally::new("a_1(T_n f) = a_n(f)"),
    ];
    let mut witness = None;
    let chars = characters();
    for trial in 0..trials {
        let chi = chars[trial as usize % chars.len()];
        let weight = rng.gen_range(1..=4);
        let f = random_series(&mut rng, order, weight, chi);
        let prime = |rng: &mut ChaCha8Rng| *PRIMES.choose(rng).unwrap();

        let (d, d2) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        tallies[0].record(&f.op_b(d2).op_b(d), &f.op_b(d).op_b(d2));

        let p = prime(&mut rng);
        let d = pick_coprime(&mut rng, p);
        tallies[1].record(&f.op_b(d).op_t(p), &f.op_t(p).op_b(d));

        let (p, p2) = (prime(&mut rng), prime(&mut rng));
        tallies[2].record(&f.op_t(p2).op_t(p), &f.op_t(p).op_t(p2));

        let p = prime(&mut rng);
        let q = loop {
            let q = prime(&mut rng);
            if q != p {
                break q;
            }
        };
        tallies[3].record(&f.op_u(q).op_t(p), &f.op_t(p).op_u(q));

        let (q, q2) = (prime(&mut rng), prime(&mut rng));
        tallies[4].record(&f.op_u(q2).op_u(q), &f.op_u(q).op_u(q2));

        let q = prime(&mut rng);
        let d = pick_coprime(&mut rng, q);
        tallies[5].record(&f.op_b(d).op_u(q), &f.op_u(q).op_b(d));

        let q = prime(&mut rng);
        let k = rng.gen_range(1..=3u32);
        tallies[6].record(&f.op_b(q.pow(k)).op_u(q), &f.op_b(q.pow(k - 1)));

        let n_max = HECKE_COEFF_MAX.min(order as u64);
        let ok = (1..=n_max).all(|n| {
            let g = f.op_hecke(n);
            g.reliable() >= 1 && g.coeff(1) == f.coeff(n as usize)
        });
        let t = &mut tallies[7];
        t.checked += 1;
        t.passed += ok as u32;
        t.min_order = t.min_order.min(order / n_max as usize);

        if witness.is_none() && chi.value(3) != 0 {
            let lhs = f.op_b(3).op_t(3);
            let rhs = f.op_t(3).op_b(3);
            if let Some(n) = lhs.first_difference(&rhs) {
                witness = Some(Witness {
                    relation: "t_3 B_3 = B_3 t_3".into(),
                    trial,
                    index: n,
                    lhs: rational_string(&lhs.coeff(n)),
                    rhs: rational_string(&rhs.coeff(n)),
                });
            }
        }
    }
    let relations: Vec<RelationResult> = tallies.into_iter().map(Tally::finish).collect();
    let all_pass = relations.iter().all(|r| r.pass) && witness.is_some();
    Ok(RelationsReport {
        order,
        trials,
        seed,
        relations,
        expected_inequality: witness,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run() {
        let rep = verify_relations(60, 8, 7).unwrap();
        assert!(rep.all_pass, "{rep:#?}");
        assert_eq!(rep.relations.len(), 8);
        assert!(verify_relations(4, 1, 0).is_err());
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(verify_relations(40, 3, 11).unwrap(), verify_relations(40, 3, 11).unwrap());
    }

    #[test]
    fn operators_are_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let chi = Character::Trivial { modulus: 1 };
        let f = random_series(&mut rng, 80, 2, chi);
        let g = random_series(&mut rng, 80, 2, chi);
        let a = BigRational::new(3.into(), 7.into());
        let comb = f.scale(&a).add(&g);
        for op in [|s: &Series| s.op_t(3), |s: &Series| s.op_u(2), |s: &Series| s.op_b(5), |s: &Series| s.op_hecke(12)] {
            assert!(op(&comb).agrees_with(&op(&f).scale(&a).add(&op(&g))));
        }
    }
}
