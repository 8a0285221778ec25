//! Exhaustive search over invariant vectors under order, equality and
//! sum-zero constraints.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{make_class, BrauerClass, BrauerError, InvariantValue};
use crate::arith::{gcd, lcm};
use crate::numberfields::{PrimeSlot, RelativeExtensionData};

/// Largest common denominator the solver accepts.
const MAX_MODULUS: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotConstraint {
    pub slot: PrimeSlot,
    /// The invariant's order must divide this.
    pub max_order: u64,
    /// If set, the invariant's order must equal this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_order: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilitySpec {
    pub field: String,
    pub slots: Vec<SlotConstraint>,
    /// Groups of slots forced to carry equal invariants.
    #[serde(default)]
    pub equal_groups: Vec<Vec<PrimeSlot>>,
    #[serde(default = "default_true")]
    pub sum_zero: bool,
}

fn default_true() -> bool {
    true
}

/// One unknown of the search: a value `k/modulus` drawn from `allowed`,
/// counted `weight` times in the sum.
struct Variable {
    allowed: Vec<u64>,
    weight: u64,
}

/// Lexicographically least choice of one allowed value per variable with
/// `Σ weight·k ≡ target (mod modulus)`, or any least choice if `target` is `None`.
fn least_solution(vars: &[Variable], modulus: u64, target: Option<u64>) -> Option<Vec<u64>> {
    let Some(target) = target else {
        return vars.iter().map(|v| v.allowed.first().copied()).collect();
    };
    let m = modulus as usize;
    // reach[i][r]: residue r is attainable by variables i..
    let mut reach = vec![vec![false; m]; vars.len() + 1];
    reach[vars.len()][0] = true;
    for i in (0..vars.len()).rev() {
        let shifts: BTreeSet<usize> =
            vars[i].allowed.iter().map(|&k| ((vars[i].weight % modulus) * k % modulus) as usize).collect();
        let (head, tail) = reach.split_at_mut(i + 1);
        let next = &tail[0];
        let cur = &mut head[i];
        for r in (0..m).filter(|&r| next[r]) {
            for &s in &shifts {
                cur[(r + s) % m] = true;
            }
        }
    }
    if !reach[0][target as usize % m] {
        return None;
    }
    let mut remaining = target % modulus;
    let mut out = Vec::with_capacity(vars.len());
    for (i, var) in vars.iter().enumerate() {
        let k = *var.allowed.iter().find(|&&k| {
            let used = (var.weight % modulus) * k % modulus;
            reach[i + 1][((remaining + modulus - used) % modulus) as usize]
        })?;
        remaining = (remaining + modulus - (var.weight % modulus) * k % modulus) % modulus;
        out.push(k);
    }
    Some(out)
}

fn check_modulus(modulus: u64) -> Result<(), BrauerError> {
    if modulus > MAX_MODULUS {
        return Err(BrauerError::BadSpec(format!("common denominator {modulus} exceeds {MAX_MODULUS}")));
    }
    Ok(())
}

/// Searches for the lexicographically least class (slots in spec order,
/// values ordered in `[0, 1)`) meeting every constraint.
pub fn feasibility_solve(spec: &FeasibilitySpec) -> Result<Option<BrauerClass>, BrauerError> {
    let mut index = BTreeMap::new();
    for (i, c) in spec.slots.iter().enumerate() {
        if c.max_order == 0 || c.exact_order == Some(0) {
            return Err(BrauerError::BadSpec(format!("slot {}: orders must be positive", c.slot)));
        }
        if index.insert(c.slot.clone(), i).is_some() {
            return Err(BrauerError::DuplicateSlot(c.slot.clone()));
        }
    }
    let modulus = spec.slots.iter().fold(1, |acc, c| lcm(acc, c.max_order));
    check_modulus(modulus)?;

    // union-find over slot indices
    let mut parent: Vec<usize> = (0..spec.slots.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for group in &spec.equal_groups {
        let ids = group
            .iter()
            .map(|s| index.get(s).copied().ok_or_else(|| BrauerError::BadSpec(format!("unknown slot {s} in equality group"))))
            .collect::<Result<Vec<_>, _>>()?;
        for w in ids.windows(2) {
            let (a, b) = (root(&mut parent, w[0]), root(&mut parent, w[1]));
            // keep the smaller index as representative so variables follow slot order
            parent[a.max(b)] = a.min(b);
        }
    }

    let mut class_of = vec![0; spec.slots.len()];
    let mut reps: Vec<usize> = Vec::new();
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..spec.slots.len() {
        let r = root(&mut parent, i);
        members.entry(r).or_default().push(i);
        if r == i {
            reps.push(i);
        }
    }
    let mut vars = Vec::with_capacity(reps.len());
    for (v, &r) in reps.iter().enumerate() {
        let ids = &members[&r];
        let max_order = ids.iter().fold(0, |acc, &i| gcd(acc, spec.slots[i].max_order));
        let exact: BTreeSet<u64> = ids.iter().filter_map(|&i| spec.slots[i].exact_order).collect();
        if exact.len() > 1 {
            return Ok(None);
        }
        let exact = exact.into_iter().next();
        let step = modulus / max_order;
        let allowed: Vec<u64> = (0..max_order)
            .filter(|&a| exact.is_none_or(|e| max_order / gcd(a, max_order) == e))
            .map(|a| a * step)
            .collect();
        for &i in ids {
            class_of[i] = v;
        }
        vars.push(Variable { allowed, weight: ids.len() as u64 });
    }
    let Some(values) = least_solution(&vars, modulus, spec.sum_zero.then_some(0)) else {
        return Ok(None);
    };
    let assignments = spec
        .slots
        .iter()
        .enumerate()
        .map(|(i, c)| (c.slot.clone(), InvariantValue::new(values[class_of[i]] as i64, modulus)));
    if spec.sum_zero {
        make_class(spec.field.clone(), assignments).map(Some)
    } else {
        // without the global constraint the vector is reported as-is
        let mut out = BrauerClass::zero(spec.field.clone());
        for (slot, v) in assignments {
            if !v.is_zero() {
                out.invariants.insert(slot, v);
            }
        }
        Ok(Some(out))
    }
}

/// Looks for a class over the base field whose restriction along `rel` is
/// `d`. Besides the slots under the support of `d`, only the slots in
/// `pool` may carry nonzero invariants; they must die under restriction.
/// `None` means no such class exists with this pool, not that `d` lies
/// outside the image.
pub fn restriction_preimage(
    d: &BrauerClass,
    rel: &RelativeExtensionData,
    pool: &[PrimeSlot],
    base_field: impl Into<String>,
) -> Result<Option<BrauerClass>, BrauerError> {
    if !rel.galois {
        return Err(BrauerError::NotGalois);
    }
    // base slot -> (n_rel, required restricted value)
    let mut needed: BTreeMap<PrimeSlot, (u64, InvariantValue)> = BTreeMap::new();
    for (top, value) in d.support() {
        let base = rel.parent_of(top).ok_or_else(|| BrauerError::MissingData(top.clone()))?;
        let record = rel.record_for(&base).expect("parent has a record");
        if record.fiber(&base).iter().any(|w| d.invariant(w) != *value) {
            return Ok(None);
        }
        needed.insert(base, (record.n_rel, *value));
    }
    let mut aux = Vec::new();
    for slot in pool {
        if needed.contains_key(slot) || aux.iter().any(|(s, _)| s == slot) {
            continue;
        }
        let record = rel.record_for(slot).ok_or_else(|| BrauerError::MissingData(slot.clone()))?;
        aux.push((slot.clone(), record.n_rel));
    }
    let modulus = needed
        .values()
        .map(|(n, v)| n * v.den())
        .chain(aux.iter().map(|(_, n)| *n))
        .fold(1, lcm);
    check_modulus(modulus)?;
    // x = k/modulus with n·x ≡ v, i.e. n·k ≡ v·modulus (mod modulus)
    let solutions = |n: u64, v: InvariantValue| -> Vec<u64> {
        let target = v.num() * (modulus / v.den()) % modulus;
        (0..modulus).filter(|&k| n * k % modulus == target).collect()
    };
    let mut slots = Vec::new();
    let mut vars = Vec::new();
    for (slot, (n, v)) in &needed {
        slots.push(slot.clone());
        vars.push(Variable { allowed: solutions(*n, *v), weight: 1 });
    }
    for (slot, n) in &aux {
        slots.push(slot.clone());
        vars.push(Variable { allowed: solutions(*n, InvariantValue::ZERO), weight: 1 });
    }
    let Some(values) = least_solution(&vars, modulus, Some(0)) else {
        return Ok(None);
    };
    make_class(
        base_field,
        slots.into_iter().zip(values).map(|(s, k)| (s, InvariantValue::new(k as i64, modulus))),
    )
    .map(Some)
}
