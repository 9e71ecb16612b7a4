//! Closed-form torsion bounds and the constants behind them, in exact
//! arithmetic.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith::{is_prime, smallest_prime_other_than};
use crate::error::{Error, Result};
use crate::linalg::field::rational_string;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn check_inputs(prime: u64, d: u64, what: &str) -> Result<()> {
    if !is_prime(prime) {
        return Err(Error::NotPrime(prime));
    }
    if d == 0 {
        return Err(Error::InvalidArgument(format!("{what}: d must be at least 1")));
    }
    Ok(())
}

/// A named exact value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaggedValue {
    pub tag: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn tagged(tag: &str, value: impl ToString, note: Option<&str>) -> TaggedValue {
    TaggedValue {
        tag: tag.into(),
        value: value.to_string(),
        note: note.map(Into::into),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub d: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    pub case: String,
    pub formula: String,
    pub value: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sub_values: Vec<TaggedValue>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// `2 (1 + l^d)`: the bound on the order of a point when the reduction at a
/// place over `l` is not split multiplicative with the point off the
/// identity component.
pub fn reduction_bound_value(l: u64, d: u64) -> Result<BigUint> {
    check_inputs(l, d, "reduction bound")?;
    Ok(big(2) * (BigUint::one() + big(l).pow(d as u32)))
}

pub fn reduction_bound(l: u64, d: u64) -> Result<BoundReport> {
    let value = reduction_bound_value(l, d)?;
    let q = big(l).pow(d as u32);
    // floor((sqrt(q) + 1)^2) = q + 1 + floor(2 sqrt(q))
    let weil = &q + BigUint::one() + (big(4) * &q).sqrt();
    let twisted_other = big(2) * (BigUint::one() + big(3).pow(d as u32));
    Ok(BoundReport {
        p: None,
        d,
        l: Some(l),
        case: "reduction_type".into(),
        formula: "2*(1+l^d)".into(),
        value: value.to_string(),
        sub_values: vec![
            tagged("good_weil", &weil, Some("floor((l^(d/2)+1)^2)")),
            tagged("split_identity_component", &q - BigUint::one(), Some("l^d-1")),
            tagged("additive_p_ge_5", 1, None),
            tagged("additive_p_eq_3", 3, None),
            tagged("additive_p_eq_2", 4, None),
            tagged("twisted_identity_component", &q + BigUint::one(), Some("1+l^d")),
            tagged("twisted_other_component", twisted_other, Some("2*(1+3^d), only for p=2")),
        ],
        notes: Vec::new(),
    })
}

/// Which branch of the final bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeCase {
    PGe5,
    PEq3,
    PEq2,
}

impl PrimeCase {
    pub fn of(p: u64) -> Self {
        match p {
            2 => PrimeCase::PEq2,
            3 => PrimeCase::PEq3,
            _ => PrimeCase::PGe5,
        }
    }

    /// `(C^2, auxiliary prime l, s)`.
    fn constants(self) -> (u64, u64, u64) {
        match self {
            PrimeCase::PGe5 => (65, 3, 2),
            PrimeCase::PEq3 => (65, 5, 2),
            PrimeCase::PEq2 => (129, 3, 3),
        }
    }

    fn formula(self) -> &'static str {
        match self {
            PrimeCase::PGe5 => "65*(3^d-1)*(2d)^6",
            PrimeCase::PEq3 => "65*(5^d-1)*(2d)^6",
            PrimeCase::PEq2 => "129*(3^d-1)*(3d)^6",
        }
    }
}

/// `C^2 (l^d - 1)(s d)^6`.
pub fn torsion_bound_value(case: PrimeCase, d: u64) -> BigUint {
    let (c2, l, s) = case.constants();
    big(c2) * (big(l).pow(d as u32) - BigUint::one()) * big(s * d).pow(6)
}

/// Bound on `p^n` for a point of order `p^n` over a field of degree `d`.
/// With `original_order` the extra factor `l^d - 1` is applied.
pub fn torsion_bound(p: u64, d: u64, original_order: bool) -> Result<BoundReport> {
    check_inputs(p, d, "torsion bound")?;
    let case = PrimeCase::of(p);
    let (_, l, _) = case.constants();
    let mut value = torsion_bound_value(case, d);
    let mut formula = case.formula().to_string();
    let mut notes = Vec::new();
    if original_order {
        value *= big(l).pow(d as u32) - BigUint::one();
        formula = format!("({formula})*(l^d-1)");
        notes.push(format!("multiplied by l^d-1 with l={l} to bound the original order"));
    }
    Ok(BoundReport {
        p: Some(p),
        d,
        l: Some(l),
        case: serde_json::to_value(case)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default(),
        formula,
        value: value.to_string(),
        sub_values: Vec::new(),
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionThreshold {
    pub p: u64,
    pub d: u64,
    pub s: u64,
    pub c_squared: u64,
    #[serde(serialize_with = "as_string")]
    pub threshold: BigUint,
}

fn as_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// `C^2 (s d)^6` with `C^2 = 129` for `p = 2` and 65 otherwise.
pub fn criterion_threshold(p: u64, d: u64) -> Result<CriterionThreshold> {
    check_inputs(p, d, "threshold")?;
    let s = smallest_prime_other_than(p);
    let c_squared = if p == 2 { 129 } else { 65 };
    Ok(CriterionThreshold {
        p,
        d,
        s,
        c_squared,
        threshold: big(c_squared) * big(s * d).pow(6),
    })
}

/// One row of `bounds --table`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionBoundRow {
    pub d: u64,
    pub p_ge5: String,
    pub p_eq3: String,
    pub p_eq2: String,
}

pub fn torsion_bound_table(d_max: u64, original_order: bool) -> Result<Vec<TorsionBoundRow>> {
    (1..=d_max)
        .map(|d| {
            Ok(TorsionBoundRow {
                d,
                p_ge5: torsion_bound(5, d, original_order)?.value,
                p_eq3: torsion_bound(3, d, original_order)?.value,
                p_eq2: torsion_bound(2, d, original_order)?.value,
            })
        })
        .collect()
}

/// An exact inequality together with both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstantCheck {
    pub name: String,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
    /// `rhs - lhs` for `lhs <= rhs` checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
    /// Not part of the pass/fail verdict; reported for inspection.
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstantsReport {
    pub lambda: String,
    pub checks: Vec<ConstantCheck>,
    pub consistent: bool,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(42119/42120)(379079/379080)`.
pub fn lambda() -> BigRational {
    rat(42119, 42120) * rat(379079, 379080)
}

fn le_check(name: &str, lhs: BigRational, rhs: BigRational, informational: bool) -> ConstantCheck {
    ConstantCheck {
        name: name.into(),
        holds: lhs <= rhs,
        margin: Some(rational_string(&(&rhs - &lhs))),
        lhs: rational_string(&lhs),
        rhs: rational_string(&rhs),
        informational,
    }
}

/// Whether `(x/D - D - 2)(x/D^2 - 2) >= C' x^(3/2)` at `x = C^2 D^6`, decided
/// by squaring: with `C'^2` given, both factors positive and
/// `((x - D^2 - 2D)(x - 2D^2))^2 >= C'^2 x^3 D^6`.
pub fn interval_product_at_threshold(c_squared: u64, c_prime_squared: u64, dd: u64) -> bool {
    let x = BigInt::from(c_squared) * BigInt::from(dd).pow(6);
    let dd = BigInt::from(dd);
    let a = &x - &dd * &dd - BigInt::from(2) * &dd;
    let b = &x - BigInt::from(2) * &dd * &dd;
    if !a.is_positive() || !b.is_positive() {
        return false;
    }
    let lhs = (&a * &b).pow(2);
    let rhs = BigInt::from(c_prime_squared) * x.pow(3) * dd.pow(6);
    lhs >= rhs
}

/// Range of `D` probed by the per-`D` checks.
pub const CONSTANTS_D_RANGE: std::ops::RangeInclusive<u64> = 6..=40;

/// Exact verification of the constants linking the interval estimate to the
/// threshold `C^2 D^6`.
pub fn constants_consistency() -> ConstantsReport {
    let lam = lambda();
    let lam2 = &lam * &lam;
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut checks = vec![
        le_check("lambda < 1", lam.clone(), int(1), false),
        le_check("64/lambda^2 <= 65", int(64) / &lam2, int(65), false),
        le_check("128/lambda^2 <= 129", int(128) / &lam2, int(129), false),
    ];
    checks[0].holds = lam < int(1);
    checks.push(ConstantCheck {
        name: "65*6^4 = 2*42120".into(),
        holds: 65 * 6u64.pow(4) == 2 * 42120,
        lhs: (65 * 6u64.pow(4)).to_string(),
        rhs: (2 * 42120u64).to_string(),
        margin: None,
        informational: false,
    });
    let dr = CONSTANTS_D_RANGE;
    checks.push(ConstantCheck {
        name: format!("D+2 <= 4D/3 for D in {}..={}", dr.start(), dr.end()),
        holds: dr.clone().all(|d| 3 * (d + 2) <= 4 * d),
        lhs: "3(D+2)".into(),
        rhs: "4D".into(),
        margin: None,
        informational: false,
    });
    // The printed step for the second interval asks for 65 D^5 >= 379080 (D+2);
    // it only holds from D = 10, so it is reported but not relied on.
    let failing: Vec<u64> = dr
        .clone()
        .filter(|&d| big(65) * big(d).pow(5) < big(379080) * big(d + 2))
        .collect();
    checks.push(ConstantCheck {
        name: format!("65*D^5 >= 379080*(D+2) for D in {}..={}", dr.start(), dr.end()),
        holds: failing.is_empty(),
        lhs: "65*D^5".into(),
        rhs: "379080*(D+2)".into(),
        margin: (!failing.is_empty()).then(|| format!("fails for D in {failing:?}")),
        informational: true,
    });
    for (c2, cp2) in [(65u64, 64u64), (129, 128)] {
        checks.push(ConstantCheck {
            name: format!(
                "(x/D-D-2)(x/D^2-2) >= C'x^(3/2) at x={c2}*D^6, C'^2={cp2}, D in {}..={}",
                dr.start(),
                dr.end()
            ),
            holds: dr.clone().all(|d| interval_product_at_threshold(c2, cp2, d)),
            lhs: "((x-D^2-2D)(x-2D^2))^2".into(),
            rhs: format!("{cp2}*x^3*D^6"),
            margin: None,
            informational: false,
        });
    }
    let consistent = checks.iter().all(|c| c.informational || c.holds);
    ConstantsReport {
        lambda: rational_string(&lam),
        checks,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_bound_values() {
        assert_eq!(reduction_bound_value(3, 1).unwrap(), big(8));
        assert_eq!(reduction_bound_value(3, 2).unwrap(), big(20));
        assert!(reduction_bound_value(3, 0).is_err());
        assert!(reduction_bound_value(4, 1).is_err());
        let rep = reduction_bound(3, 2).unwrap();
        let weil = rep.sub_values.iter().find(|v| v.tag == "good_weil").unwrap();
        assert_eq!(weil.value, "16");
        let rep = reduction_bound(5, 1).unwrap();
        let weil = rep.sub_values.iter().find(|v| v.tag == "good_weil").unwrap();
        // (sqrt 5 + 1)^2 = 10.47...
        assert_eq!(weil.value, "10");
    }

    #[test]
    fn torsion_bound_cases() {
        assert_eq!(torsion_bound(5, 1, false).unwrap().value, "8320");
        assert_eq!(torsion_bound(3, 1, false).unwrap().value, "16640");
        assert_eq!(torsion_bound(2, 1, false).unwrap().value, "188082");
        assert_eq!(torsion_bound(7, 1, true).unwrap().value, (8320 * 2).to_string());
        assert_eq!(torsion_bound(5, 1, false).unwrap().case, "p_ge5");
        assert_eq!(torsion_bound_table(5, false).unwrap().len(), 5);
    }

    #[test]
    fn thresholds() {
        let t = |p, d| criterion_threshold(p, d).unwrap().threshold;
        assert_eq!(t(5, 1), big(4160));
        assert_eq!(t(2, 1), big(94041));
        assert_eq!(t(3, 2), big(266240));
    }

    #[test]
    fn constants() {
        let rep = constants_consistency();
        assert!(rep.consistent, "{rep:#?}");
        let b_step = rep.checks.iter().find(|c| c.name.starts_with("65*D^5")).unwrap();
        assert!(!b_step.holds);
        assert_eq!(b_step.margin.as_deref(), Some("fails for D in [6, 7, 8, 9]"));
    }

    #[test]
    fn interval_product_small_d() {
        assert!(interval_product_at_threshold(65, 64, 6));
        assert!(interval_product_at_threshold(129, 128, 6));
        assert!(!interval_product_at_threshold(1, 64, 1));
    }
}
