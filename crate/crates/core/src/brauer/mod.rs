//! Hasse-invariant calculus over number fields.
//!
//! A Brauer class is a finitely supported vector of local invariants in
//! `Q/Z` whose entries sum to zero. Index equals exponent over number
//! fields, so the index is the lcm of the local orders.

mod solve;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use solve::{feasibility_solve, restriction_preimage, FeasibilitySpec, SlotConstraint};

use crate::arith::{factorize, gcd, lcm, p_part};
use crate::groups::{contains_p_sylow, FiniteGroup, GroupError, Subgroup};
use crate::numberfields::{PrimeSlot, RelativeExtensionData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BrauerError {
    #[error("invariants sum to {0}, not 0 in Q/Z")]
    NonZeroSum(InvariantValue),
    #[error("slot {0} listed twice")]
    DuplicateSlot(PrimeSlot),
    #[error("missing local data for slot {0}")]
    MissingData(PrimeSlot),
    #[error("bad invariant `{0}`")]
    BadInvariant(String),
    #[error("bad feasibility spec: {0}")]
    BadSpec(String),
    #[error("fiber comparison needs Galois relative data")]
    NotGalois,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An element `num/den` of `Q/Z` in lowest terms with `0 ≤ num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantValue {
    num: u64,
    den: u64,
}

impl InvariantValue {
    pub const ZERO: InvariantValue = InvariantValue { num: 0, den: 1 };

    /// `num/den` reduced mod 1; negative numerators wrap around.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let r = num.rem_euclid(den as i64) as u64;
        let g = gcd(r, den);
        if r == 0 {
            InvariantValue::ZERO
        } else {
            InvariantValue { num: r / g, den: den / g }
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Order in `Q/Z`.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn times(self, k: u64) -> Self {
        InvariantValue::new(((self.num as u128 * k as u128) % self.den as u128) as i64, self.den)
    }
}

impl Add for InvariantValue {
    type Output = InvariantValue;

    fn add(self, rhs: Self) -> Self {
        let den = lcm(self.den, rhs.den);
        let num = self.num * (den / self.den) + rhs.num * (den / rhs.den);
        InvariantValue::new((num % den) as i64, den)
    }
}

impl Neg for InvariantValue {
    type Output = InvariantValue;

    fn neg(self) -> Self {
        InvariantValue::new(-(self.num as i64), self.den)
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for InvariantValue {
    type Err = BrauerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BrauerError::BadInvariant(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(InvariantValue::ZERO);
        }
        let (n, d) = s.split_once('/').ok_or_else(bad)?;
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(InvariantValue::new(n, d))
    }
}

/// A global Brauer class over a named base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrauerClass {
    base_field: String,
    invariants: BTreeMap<PrimeSlot, InvariantValue>,
}

#[derive(Serialize, Deserialize)]
struct InvariantEntry {
    slot: PrimeSlot,
    num: i64,
    den: u64,
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    base_field: String,
    invariants: Vec<InvariantEntry>,
}

/// Builds a class from slot assignments; zero entries are dropped and the
/// invariants must sum to zero.
pub fn make_class(
    base_field: impl Into<String>,
    assignments: impl IntoIterator<Item = (PrimeSlot, InvariantValue)>,
) -> Result<BrauerClass, BrauerError> {
    let mut invariants = BTreeMap::new();
    let mut total = InvariantValue::ZERO;
    for (slot, value) in assignments {
        if invariants.contains_key(&slot) {
            return Err(BrauerError::DuplicateSlot(slot));
        }
        total = total + value;
        invariants.insert(slot, value);
    }
    if !total.is_zero() {
        return Err(BrauerError::NonZeroSum(total));
    }
    invariants.retain(|_, v| !v.is_zero());
    Ok(BrauerClass { base_field: base_field.into(), invariants })
}

impl BrauerClass {
    pub fn zero(base_field: impl Into<String>) -> Self {
        BrauerClass { base_field: base_field.into(), invariants: BTreeMap::new() }
    }

    pub fn base_field(&self) -> &str {
        &self.base_field
    }

    pub fn invariant(&self, slot: &PrimeSlot) -> InvariantValue {
        self.invariants.get(slot).copied().unwrap_or(InvariantValue::ZERO)
    }

    /// Nonzero invariants, ordered by slot.
    pub fn support(&self) -> impl Iterator<Item = (&PrimeSlot, &InvariantValue)> {
        self.invariants.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.invariants.is_empty()
    }

    /// Index, equal to the exponent: lcm of the local orders.
    pub fn index(&self) -> u64 {
        self.invariants.values().fold(1, |acc, v| lcm(acc, v.order()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = ClassJson {
            base_field: self.base_field.clone(),
            invariants: self
                .invariants
                .iter()
                .map(|(slot, v)| InvariantEntry { slot: slot.clone(), num: v.num as i64, den: v.den })
                .collect(),
        };
        serde_json::to_value(json).expect("class serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, BrauerError> {
        let json: ClassJson = serde_json::from_value(value.clone())
            .map_err(|e| BrauerError::BadInvariant(e.to_string()))?;
        make_class(
            json.base_field,
            json.invariants.into_iter().map(|e| {
                if e.den == 0 {
                    Err(BrauerError::BadInvariant(format!("{}/0", e.num)))
                } else {
                    Ok((e.slot, InvariantValue::new(e.num, e.den)))
                }
            }).collect::<Result<Vec<_>, _>>()?,
        )
    }
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.invariants.iter().map(|(s, v)| format!("{s}: {v}")).collect();
        write!(f, "[{}] {{{}}}", self.base_field, parts.join(", "))
    }
}

pub fn index(d: &BrauerClass) -> u64 {
    d.index()
}

/// Scalar extension along `M/K`: each base slot `v` yields `g_rel` top slots
/// carrying `n_rel · inv_v`.
pub fn restrict(
    d: &BrauerClass,
    rel: &RelativeExtensionData,
    top_field: impl Into<String>,
) -> Result<BrauerClass, BrauerError> {
    let mut out = Vec::new();
    for (slot, value) in &d.invariants {
        let record = rel.record_for(slot).ok_or_else(|| BrauerError::MissingData(slot.clone()))?;
        for w in record.fiber(slot) {
            out.push((w, value.times(record.n_rel)));
        }
    }
    make_class(top_field, out)
}

/// Whether every local invariant is killed by the local degree at its slot.
pub fn splits(d: &BrauerClass, local_degrees: &BTreeMap<PrimeSlot, u64>) -> Result<bool, BrauerError> {
    let mut all = true;
    for (slot, value) in &d.invariants {
        let deg = local_degrees.get(slot).ok_or_else(|| BrauerError::MissingData(slot.clone()))?;
        all &= deg % value.order() == 0;
    }
    Ok(all)
}

/// Ramification data of a local extension at one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalExtensionData {
    pub e: u64,
    pub f: u64,
    /// Residue characteristic.
    pub p: u64,
}

impl LocalExtensionData {
    /// Degree of the maximal tame subextension: `f` times the prime-to-`p` part of `e`.
    pub fn tame_degree(&self) -> u64 {
        self.f * (self.e / p_part(self.e, self.p))
    }
}

/// Whether the class is split by the maximal tame subextension at every slot.
pub fn tame_splits(
    d: &BrauerClass,
    local: &BTreeMap<PrimeSlot, LocalExtensionData>,
) -> Result<bool, BrauerError> {
    let mut all = true;
    for (slot, value) in &d.invariants {
        let data = local.get(slot).ok_or_else(|| BrauerError::MissingData(slot.clone()))?;
        all &= data.tame_degree() % value.order() == 0;
    }
    Ok(all)
}

/// Whether the relative Brauer group with these local degrees contains a
/// class of order `n`: every prime power `ℓ^a ∥ n` must divide at least two
/// local degrees.
pub fn adequacy(local_degrees: &[u64], n: u64) -> bool {
    factorize(n).into_iter().all(|(l, a)| {
        let la = l.pow(a);
        local_degrees.iter().filter(|&&deg| deg % la == 0).count() >= 2
    })
}

/// Schacher's criterion on a candidate set of decomposition groups: for every
/// prime `ℓ` dividing `|G|`, at least two of them contain an `ℓ`-Sylow subgroup.
pub fn schacher_check(g: &FiniteGroup, decomposition: &[Subgroup]) -> Result<bool, BrauerError> {
    for (l, _) in factorize(g.order() as u64) {
        let mut count = 0;
        for h in decomposition {
            if contains_p_sylow(g, h, l)? {
                count += 1;
            }
        }
        if count < 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the invariants agree across each fiber of `M/K`: necessary for
/// `D` to lie in the image of restriction. Slots outside every listed fiber
/// are unconstrained.
pub fn constant_on_fibers(d: &BrauerClass, rel: &RelativeExtensionData) -> Result<bool, BrauerError> {
    if !rel.galois {
        return Err(BrauerError::NotGalois);
    }
    for record in &rel.records {
        for base in record.base_slots() {
            let fiber = record.fiber(&base);
            let first = fiber.first().map(|w| d.invariant(w));
            if fiber.iter().any(|w| Some(d.invariant(w)) != first) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfields::{RecordKey, RelativeRecord};

    fn slot(s: &str) -> PrimeSlot {
        s.parse().unwrap()
    }

    fn inv(s: &str) -> InvariantValue {
        s.parse().unwrap()
    }

    fn class(entries: &[(&str, &str)]) -> Result<BrauerClass, BrauerError> {
        make_class("K", entries.iter().map(|(s, v)| (slot(s), inv(v))))
    }

    fn manual(records: &[(&str, u64, u64)]) -> RelativeExtensionData {
        RelativeExtensionData::manual(
            true,
            records
                .iter()
                .map(|&(s, g, n)| RelativeRecord {
                    key: RecordKey::Slot { slot: slot(s) },
                    g_rel: g,
                    n_rel: n,
                    e_rel: None,
                    f_rel: None,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn invariant_arithmetic() {
        assert_eq!(inv("-1/9"), inv("8/9"));
        assert_eq!(inv("3/9"), inv("1/3"));
        assert_eq!(inv("1/2") + inv("1/2"), InvariantValue::ZERO);
        assert_eq!(-inv("1/27"), inv("26/27"));
        assert_eq!(inv("26/27").times(3), inv("8/9"));
        assert!("1/0".parse::<InvariantValue>().is_err());
    }

    #[test]
    fn make_class_examples() {
        let d = class(&[("w1", "1/27"), ("w2", "26/27")]).unwrap();
        assert_eq!(d.index(), 27);
        assert!(class(&[]).unwrap().is_zero());
        assert_eq!(class(&[]).unwrap().index(), 1);
        assert_eq!(class(&[("v", "1/2")]), Err(BrauerError::NonZeroSum(inv("1/2"))));
        assert_eq!(class(&[("a", "1/2"), ("b", "1/3"), ("c", "1/6")]).unwrap().index(), 6);
        assert!(matches!(class(&[("a", "1/2"), ("a", "1/2")]), Err(BrauerError::DuplicateSlot(_))));
    }

    #[test]
    fn restriction_with_split_and_inert_primes() {
        let d0 = class(&[("nu", "1/27"), ("varpi", "-1/27")]).unwrap();
        let rel = manual(&[("nu", 3, 1), ("varpi", 1, 3)]);
        let d = restrict(&d0, &rel, "M").unwrap();
        let expected = make_class(
            "M",
            [
                (slot("nu.0"), inv("1/27")),
                (slot("nu.1"), inv("1/27")),
                (slot("nu.2"), inv("1/27")),
                (slot("varpi.0"), inv("-1/9")),
            ],
        )
        .unwrap();
        assert_eq!(d, expected);
        assert!(constant_on_fibers(&d, &rel).unwrap());
        // order-3 class killed by degree-3 local extensions everywhere
        let d3 = class(&[("a", "1/3"), ("b", "2/3")]).unwrap();
        assert!(restrict(&d3, &manual(&[("a", 1, 3), ("b", 1, 3)]), "M").unwrap().is_zero());
        assert_eq!(
            restrict(&d3, &manual(&[("a", 1, 3)]), "M"),
            Err(BrauerError::MissingData(slot("b")))
        );
    }

    #[test]
    fn fiber_constancy_detects_unequal_invariants() {
        let rel = manual(&[("v", 2, 1), ("u", 2, 1)]);
        let d = make_class(
            "M",
            [(slot("v.0"), inv("1/9")), (slot("v.1"), inv("2/9")), (slot("w"), inv("6/9"))],
        )
        .unwrap();
        assert!(!constant_on_fibers(&d, &rel).unwrap());
        assert!(constant_on_fibers(&BrauerClass::zero("M"), &rel).unwrap());
    }

    #[test]
    fn splitting_tests() {
        let d = class(&[("a", "1/27"), ("b", "26/27")]).unwrap();
        let degrees: BTreeMap<_, _> = [(slot("a"), 27), (slot("b"), 27)].into();
        assert!(splits(&d, &degrees).unwrap());
        let short: BTreeMap<_, _> = [(slot("a"), 27)].into();
        assert!(matches!(splits(&d, &short), Err(BrauerError::MissingData(_))));
        assert!(splits(&BrauerClass::zero("K"), &BTreeMap::new()).unwrap());
        let d3 = class(&[("a", "1/3"), ("b", "2/3")]).unwrap();
        let wild = LocalExtensionData { e: 3, f: 1, p: 3 };
        let local: BTreeMap<_, _> = [(slot("a"), wild), (slot("b"), wild)].into();
        assert!(!tame_splits(&d3, &local).unwrap());
        let tame = LocalExtensionData { e: 3, f: 1, p: 7 };
        let local: BTreeMap<_, _> = [(slot("a"), tame), (slot("b"), tame)].into();
        assert!(tame_splits(&d3, &local).unwrap());
    }

    #[test]
    fn adequacy_examples() {
        assert!(adequacy(&[3u64.pow(3), 3u64.pow(3)], 27));
        assert!(!adequacy(&[27], 27));
        assert!(adequacy(&[], 1));
        assert!(!adequacy(&[4, 6], 12));
        assert!(adequacy(&[4, 12, 3], 12));
    }

    #[test]
    fn json_round_trip() {
        let d = class(&[("5.0", "1/25"), ("5.1", "24/25")]).unwrap();
        assert_eq!(BrauerClass::from_json(&d.to_json()).unwrap(), d);
    }
}
