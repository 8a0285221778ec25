use super::subgroup::{derived_subgroup, normal_closure_of};
use super::{FiniteGroup, GroupError, Subgroup};
use crate::arith::{factorize, is_prime, p_part};

/// True iff `G/N` is abelian for every nontrivial normal subgroup `N`.
///
/// Every nontrivial normal subgroup contains a minimal one, so it suffices to
/// check that each normal closure of a single element contains `[G, G]`. For
/// p-groups the minimal normal subgroups are central of order `p`, which
/// narrows the candidates to central elements of order `p`.
pub fn proper_quotients_abelian(g: &FiniteGroup) -> bool {
    let derived = derived_subgroup(g);
    if derived.order() == 1 {
        return true;
    }
    let p = g.p_group_prime();
    let candidates = g.elements().skip(1).filter(|&z| match p {
        Some(p) => {
            g.pow(z, p) == 0 && g.generators().iter().all(|&s| g.mul(z, s) == g.mul(s, z))
        }
        None => true,
    });
    for z in candidates {
        let n = normal_closure_of(g, [z]);
        if !derived.is_subgroup_of(&n) {
            return false;
        }
    }
    true
}

/// Invariant factors of `G/[G, G]`, largest first; `[]` for a perfect group.
pub fn abelian_invariants(g: &FiniteGroup) -> Vec<u64> {
    let derived = derived_subgroup(g);
    // coset labels of G/[G,G]
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset[x] == usize::MAX {
            let id = reps.len();
            reps.push(x);
            for &d in derived.elements() {
                coset[g.mul(x, d)] = id;
            }
        }
    }
    let quotient_order = |x: usize| -> u64 {
        let mut acc = x;
        let mut k = 1;
        while !derived.contains(acc) {
            acc = g.mul(acc, x);
            k += 1;
        }
        k
    };
    let orders: Vec<u64> = reps.iter().map(|&r| quotient_order(r)).collect();
    let total = reps.len() as u64;
    // per prime: number of cyclic factors of order ≥ ℓ^j is log_ℓ(|A[ℓ^j]| / |A[ℓ^{j-1}]|)
    let mut factors_by_prime: Vec<Vec<u64>> = Vec::new();
    for (l, e) in factorize(total) {
        let mut exps = Vec::new();
        let mut prev = 1u64;
        for j in 1..=e {
            let lj = l.pow(j);
            let count = orders.iter().filter(|&&o| lj % o == 0).count() as u64;
            let mut ratio = count / prev;
            let mut at_least = 0;
            while ratio > 1 {
                ratio /= l;
                at_least += 1;
            }
            exps.push(at_least);
            prev = count;
        }
        // exps[j-1] = number of factors with exponent ≥ j
        let rank = exps.first().copied().unwrap_or(0);
        let mut powers = Vec::with_capacity(rank);
        for r in 0..rank {
            let exp = exps.iter().filter(|&&c| c > r).count() as u32;
            powers.push(l.pow(exp));
        }
        factors_by_prime.push(powers);
    }
    let len = factors_by_prime.iter().map(Vec::len).max().unwrap_or(0);
    (0..len)
        .map(|r| factors_by_prime.iter().map(|fs| fs.get(r).copied().unwrap_or(1)).product())
        .collect()
}

/// True iff the `p`-part of `|H|` equals the `p`-part of `|G|`.
pub fn contains_p_sylow(g: &FiniteGroup, h: &Subgroup, p: u64) -> Result<bool, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    Ok(p_part(h.order() as u64, p) == p_part(g.order() as u64, p))
}

/// Sylow data for a group that is the direct product of its Sylow subgroups.
#[derive(Debug, Clone)]
pub enum SylowStructure {
    /// One Sylow subgroup per prime divisor, ascending by prime.
    Nilpotent(Vec<(u64, FiniteGroup)>),
    /// The elements of some prime-power order do not form a subgroup.
    NotNilpotent,
}

/// Sylow subgroups as groups in their own right, when `G` is nilpotent.
pub fn sylow_subgroups(g: &FiniteGroup) -> SylowStructure {
    let mut out = Vec::new();
    for (l, _) in factorize(g.order() as u64) {
        let target = p_part(g.order() as u64, l) as usize;
        let l_elements: Vec<usize> = g
            .elements()
            .filter(|&x| p_part(g.element_order(x) as u64, l) == g.element_order(x) as u64)
            .collect();
        if l_elements.len() != target {
            return SylowStructure::NotNilpotent;
        }
        let sub = Subgroup::generated(g, &l_elements);
        if sub.order() != target {
            return SylowStructure::NotNilpotent;
        }
        let label = format!("{}[{l}-Sylow]", g.label());
        out.push((l, FiniteGroup::from_subgroup(g, &sub, label)));
    }
    SylowStructure::Nilpotent(out)
}
