//! Abelian number fields as subfields of cyclotomic fields.
//!
//! A field is the fixed field of a subgroup `H ≤ (Z/n)^*` acting on `Q(μ_n)`,
//! always stored at its minimal conductor `n`. Everything here (compositum,
//! intersection, prime splitting, the action of `σ_{t,n}`) reduces to subgroup
//! arithmetic inside `(Z/N)^*` for a common modulus `N`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{crt, divisors, euler_phi, gcd, is_prime, is_squarefree, kronecker, lcm, valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("parse failure: {0}")]
    Parse(String),
    #[error("{0} is not a nonzero squarefree integer")]
    NotSquarefree(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("base field is not contained in the top field")]
    NotSubfield,
    #[error("gcd({t}, {n}) != 1")]
    NotCoprime { t: i64, n: u64 },
    #[error("inconsistent relative data: {0}")]
    InconsistentRelative(String),
}

fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&x| gcd(x, n) == 1).collect()
}

/// An abelian number field: the subfield of `Q(μ_conductor)` fixed by `fixing`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianNumberField {
    conductor: u64,
    fixing: Vec<u64>,
}

impl AbelianNumberField {
    pub fn rational() -> Self {
        AbelianNumberField { conductor: 1, fixing: vec![0] }
    }

    pub fn cyclotomic(n: u64) -> Self {
        assert!(n > 0, "cyclotomic field of level 0");
        AbelianNumberField::from_subgroup(n, [1 % n].into_iter().collect())
    }

    /// `Q(√d)`, with conductor `|disc|` and fixing group the kernel of the
    /// Kronecker character of the discriminant.
    pub fn quadratic(d: i64) -> Result<Self, FieldError> {
        if !is_squarefree(d) {
            return Err(FieldError::NotSquarefree(d));
        }
        if d == 1 {
            return Ok(AbelianNumberField::rational());
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        let n = disc.unsigned_abs();
        let fixing = units(n).into_iter().filter(|&a| kronecker(disc, a) == 1).collect();
        Ok(AbelianNumberField::from_subgroup(n, fixing))
    }

    /// Canonicalizes `(n, H)` to the minimal conductor.
    fn from_subgroup(n: u64, fixing: BTreeSet<u64>) -> Self {
        let all = units(n);
        for d in divisors(n) {
            let kernel_inside = all.iter().filter(|&&x| x % d == 1 % d).all(|x| fixing.contains(x));
            if kernel_inside {
                let reduced: BTreeSet<u64> = fixing.iter().map(|x| x % d).collect();
                return AbelianNumberField { conductor: d, fixing: reduced.into_iter().collect() };
            }
        }
        unreachable!("d = n always qualifies")
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Sorted residues of the fixing subgroup in `(Z/conductor)^*`.
    pub fn fixing_subgroup(&self) -> &[u64] {
        &self.fixing
    }

    pub fn degree(&self) -> u64 {
        euler_phi(self.conductor) / self.fixing.len() as u64
    }

    /// Preimage of the fixing subgroup in `(Z/modulus)^*`; `modulus` must be a
    /// multiple of the conductor.
    fn fixing_at(&self, modulus: u64) -> BTreeSet<u64> {
        debug_assert_eq!(modulus % self.conductor, 0);
        units(modulus)
            .into_iter()
            .filter(|x| self.fixing.binary_search(&(x % self.conductor)).is_ok())
            .collect()
    }

    pub fn compositum(&self, other: &Self) -> Self {
        let n = lcm(self.conductor, other.conductor);
        let a = self.fixing_at(n);
        let b = other.fixing_at(n);
        AbelianNumberField::from_subgroup(n, a.intersection(&b).copied().collect())
    }

    /// `self ∩ other`; the fixing group is the product of the two fixing groups.
    pub fn intersection(&self, other: &Self) -> Self {
        let n = lcm(self.conductor, other.conductor);
        let a = self.fixing_at(n);
        let b = other.fixing_at(n);
        let product = a.iter().flat_map(|x| b.iter().map(move |y| x * y % n)).collect();
        AbelianNumberField::from_subgroup(n, product)
    }

    /// `K ∩ Q(μ_n)`.
    pub fn intersect_with_cyclotomic(&self, n: u64) -> Self {
        self.intersection(&AbelianNumberField::cyclotomic(n))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> bool {
        let n = lcm(self.conductor, other.conductor);
        self.fixing_at(n).is_subset(&other.fixing_at(n))
    }

    /// Decomposition statistics `(e, f, g)` of the rational prime `q`.
    pub fn splitting(&self, q: u64) -> Result<SplittingDatum, FieldError> {
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        let n = self.conductor;
        let qa = q.pow(valuation(n, q));
        let m = n / qa;
        let h = self.fixing_at(n);
        let inertia: Vec<u64> = units(n).into_iter().filter(|x| x % m == 1 % m).collect();
        let ih: HashSet<u64> = inertia.iter().flat_map(|x| h.iter().map(move |y| x * y % n)).collect();
        let frob = if m == 1 { 1 % n } else { crt(q % m, m, 1 % qa, qa) };
        // D = ⟨IH, frob⟩
        let mut decomposition = ih.clone();
        let mut layer: Vec<u64> = ih.iter().copied().collect();
        loop {
            let next: Vec<u64> = layer.iter().map(|x| x * frob % n).collect();
            if next.iter().all(|x| decomposition.contains(x)) {
                break;
            }
            decomposition.extend(next.iter().copied());
            layer = next;
        }
        let e = (ih.len() / h.len()) as u64;
        let f = (decomposition.len() / ih.len()) as u64;
        let g = self.degree() / (e * f);
        Ok(SplittingDatum { e, f, g })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "conductor": self.conductor,
            "fixing_subgroup": self.fixing,
            "degree": self.degree(),
        })
    }
}

impl Serialize for AbelianNumberField {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl FromStr for AbelianNumberField {
    type Err = FieldError;

    /// `Q` | `Q(i)` | `Q(zeta:n)` | `Q(sqrt:d)` | `A*B`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut acc = AbelianNumberField::rational();
        for part in s.split('*') {
            let part = part.trim();
            let field = match part {
                "Q" => AbelianNumberField::rational(),
                "Q(i)" => AbelianNumberField::cyclotomic(4),
                _ => {
                    let inner = part
                        .strip_prefix("Q(")
                        .and_then(|r| r.strip_suffix(')'))
                        .ok_or_else(|| FieldError::Parse(format!("unrecognized field `{part}`")))?;
                    let (kind, arg) = inner
                        .split_once(':')
                        .ok_or_else(|| FieldError::Parse(format!("unrecognized field `{part}`")))?;
                    match kind.trim() {
                        "zeta" => {
                            let n: u64 = arg
                                .trim()
                                .parse()
                                .ok()
                                .filter(|&n| n > 0)
                                .ok_or_else(|| FieldError::Parse(format!("bad level in `{part}`")))?;
                            AbelianNumberField::cyclotomic(n)
                        }
                        "sqrt" => {
                            let d: i64 = arg
                                .trim()
                                .parse()
                                .map_err(|_| FieldError::Parse(format!("bad radicand in `{part}`")))?;
                            AbelianNumberField::quadratic(d)?
                        }
                        other => return Err(FieldError::Parse(format!("unknown field kind `{other}`"))),
                    }
                }
            };
            acc = acc.compositum(&field);
        }
        Ok(acc)
    }
}

impl fmt::Display for AbelianNumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.fixing.len() == 1 {
            if self.conductor == 1 {
                write!(f, "Q")
            } else {
                write!(f, "Q(zeta:{})", self.conductor)
            }
        } else {
            let h: Vec<String> = self.fixing.iter().map(u64::to_string).collect();
            write!(f, "Q(zeta:{})^<{}>", self.conductor, h.join(","))
        }
    }
}

/// Ramification index, residue degree and number of primes above a rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingDatum {
    pub e: u64,
    pub f: u64,
    pub g: u64,
}

/// `K ∩ Q(μ_n)`.
pub fn intersect_with_cyclotomic(k: &AbelianNumberField, n: u64) -> AbelianNumberField {
    k.intersect_with_cyclotomic(n)
}

/// Whether `σ_{t,n}: ζ ↦ ζ^t` fixes `K ∩ Q(μ_n)` pointwise.
pub fn sigma_fixes(t: i64, n: u64, k: &AbelianNumberField) -> Result<bool, FieldError> {
    if n == 0 || gcd(t.unsigned_abs(), n) != 1 {
        return Err(FieldError::NotCoprime { t, n });
    }
    let sub = k.intersect_with_cyclotomic(n);
    let c = sub.conductor();
    let residue = t.rem_euclid(c as i64) as u64;
    Ok(sub.fixing_subgroup().binary_search(&residue).is_ok())
}

/// One prime of a field: either the `j`-th prime above the rational prime `q`
/// in a modelled field, or a symbolic label for manually supplied data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimeSlot {
    Rational { q: u64, j: u64 },
    Label(String),
}

impl fmt::Display for PrimeSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSlot::Rational { q, j } => write!(f, "{q}.{j}"),
            PrimeSlot::Label(l) => write!(f, "{l}"),
        }
    }
}

impl FromStr for PrimeSlot {
    type Err = FieldError;

    /// `q.j` with both parts numeric is a rational slot; anything else is a label.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(FieldError::Parse("empty prime slot".into()));
        }
        if let Some((q, j)) = s.split_once('.') {
            if let (Ok(q), Ok(j)) = (q.parse::<u64>(), j.parse::<u64>()) {
                return Ok(PrimeSlot::Rational { q, j });
            }
        }
        Ok(PrimeSlot::Label(s.to_string()))
    }
}

impl Serialize for PrimeSlot {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PrimeSlot {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which base primes a relative record describes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKey {
    /// All `g_base` primes above the rational prime `q` (modelled fields).
    Rational { q: u64, g_base: u64 },
    /// One manually specified prime.
    Slot { slot: PrimeSlot },
}

/// Local behaviour of the base primes in `M/K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeRecord {
    pub key: RecordKey,
    /// Number of primes of `M` above each listed base prime.
    pub g_rel: u64,
    /// Local degree `[M_w : K_v]`.
    pub n_rel: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_rel: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_rel: Option<u64>,
}

impl RelativeRecord {
    /// The base-field slots this record covers.
    pub fn base_slots(&self) -> Vec<PrimeSlot> {
        match &self.key {
            RecordKey::Rational { q, g_base } => {
                (0..*g_base).map(|j| PrimeSlot::Rational { q: *q, j }).collect()
            }
            RecordKey::Slot { slot } => vec![slot.clone()],
        }
    }

    /// Primes of the top field above `base`, which must be one of [`Self::base_slots`].
    pub fn fiber(&self, base: &PrimeSlot) -> Vec<PrimeSlot> {
        match (&self.key, base) {
            (RecordKey::Rational { q, .. }, PrimeSlot::Rational { j, .. }) => (0..self.g_rel)
                .map(|k| PrimeSlot::Rational { q: *q, j: j * self.g_rel + k })
                .collect(),
            _ => (0..self.g_rel).map(|k| PrimeSlot::Label(format!("{base}.{k}"))).collect(),
        }
    }
}

/// Relative splitting data for an extension `M/K`, model-computed or asserted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeExtensionData {
    pub galois: bool,
    pub records: Vec<RelativeRecord>,
}

impl RelativeExtensionData {
    /// Manually asserted data, checked for the Galois invariant
    /// `g_rel · n_rel = [M:K]` when `galois` is set.
    pub fn manual(galois: bool, records: Vec<RelativeRecord>) -> Result<Self, FieldError> {
        let data = RelativeExtensionData { galois, records };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        for r in &self.records {
            if r.g_rel == 0 || r.n_rel == 0 {
                return Err(FieldError::InconsistentRelative("zero fiber size or degree".into()));
            }
            if let (Some(e), Some(f)) = (r.e_rel, r.f_rel) {
                if e * f != r.n_rel {
                    return Err(FieldError::InconsistentRelative(format!(
                        "e·f = {} but n_rel = {}",
                        e * f,
                        r.n_rel
                    )));
                }
            }
        }
        if self.galois {
            let degrees: BTreeSet<u64> = self.records.iter().map(|r| r.g_rel * r.n_rel).collect();
            if degrees.len() > 1 {
                return Err(FieldError::InconsistentRelative(format!(
                    "Galois data with differing g_rel·n_rel {degrees:?}"
                )));
            }
        }
        Ok(())
    }

    /// The record covering `slot`, if any.
    pub fn record_for(&self, slot: &PrimeSlot) -> Option<&RelativeRecord> {
        self.records.iter().find(|r| match (&r.key, slot) {
            (RecordKey::Rational { q, g_base }, PrimeSlot::Rational { q: sq, j }) => q == sq && j < g_base,
            (RecordKey::Slot { slot: s }, _) => s == slot,
            _ => false,
        })
    }

    /// The base slot whose fiber contains the top-field slot `top`.
    pub fn parent_of(&self, top: &PrimeSlot) -> Option<PrimeSlot> {
        self.records.iter().find_map(|r| {
            r.base_slots().into_iter().find(|b| r.fiber(b).contains(top))
        })
    }

    /// Identity extension data for the listed rational primes of `k`.
    pub fn identity(k: &AbelianNumberField, primes: &[u64]) -> Result<Self, FieldError> {
        relative_splitting(k, k, primes)
    }
}

/// Relative splitting data for abelian fields `K ⊆ M` at the listed primes.
pub fn relative_splitting(
    k: &AbelianNumberField,
    m: &AbelianNumberField,
    primes: &[u64],
) -> Result<RelativeExtensionData, FieldError> {
    if !m.contains(k) {
        return Err(FieldError::NotSubfield);
    }
    let records = primes
        .iter()
        .map(|&q| {
            let sk = k.splitting(q)?;
            let sm = m.splitting(q)?;
            Ok(RelativeRecord {
                key: RecordKey::Rational { q, g_base: sk.g },
                g_rel: sm.g / sk.g,
                n_rel: (sm.e * sm.f) / (sk.e * sk.f),
                e_rel: Some(sm.e / sk.e),
                f_rel: Some(sm.f / sk.f),
            })
        })
        .collect::<Result<Vec<_>, FieldError>>()?;
    Ok(RelativeExtensionData { galois: true, records })
}
