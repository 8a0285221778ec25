//! Frattini subgroup of a finite p-group by two independent routes:
//! the intersection of all maximal subgroups, and `G^p [G, G]`.

use serde::Serialize;

use super::subgroup::derived_subgroup;
use super::{BitSet, FiniteGroup, GroupError, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrattiniReport {
    pub prime: Option<u64>,
    pub order: usize,
    pub frattini_order: usize,
    /// `dim_{F_p} G/Φ(G)`, the minimal number of generators.
    pub rank: u32,
    pub maximal_subgroups: u64,
}

/// Homomorphisms `G → Z/p` as a basis of linear forms on generator values.
///
/// Each element gets a label `λ(g) ∈ F_p^k` (k = number of generators) along
/// a spanning tree of the right Cayley graph, so that `f(g) = λ(g)·v` for the
/// homomorphism sending generator `j` to `v_j`. Every non-tree edge yields a
/// linear constraint on `v`; the solution space is `Hom(G, Z/p)`.
struct HomSpace {
    labels: Vec<Vec<u64>>,
    basis: Vec<Vec<u64>>,
}

fn reduce(row: &mut [u64], echelon: &[(usize, Vec<u64>)], p: u64) {
    for (pivot, e) in echelon {
        let c = row[*pivot];
        if c != 0 {
            for (x, y) in row.iter_mut().zip(e) {
                *x = (*x + (p - c) * y) % p;
            }
        }
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

fn hom_space(g: &FiniteGroup, p: u64) -> HomSpace {
    let gens = g.generators();
    let k = gens.len();
    let mut labels: Vec<Option<Vec<u64>>> = vec![None; g.order()];
    labels[0] = Some(vec![0; k]);
    // rows in reduced echelon form, keyed by pivot column
    let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let lx = labels[x].clone().expect("labelled");
        for (j, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            let mut expected = lx.clone();
            expected[j] = (expected[j] + 1) % p;
            match &labels[y] {
                None => {
                    labels[y] = Some(expected);
                    queue.push_back(y);
                }
                Some(ly) => {
                    let mut row: Vec<u64> =
                        expected.iter().zip(ly).map(|(a, b)| (a + p - b) % p).collect();
                    reduce(&mut row, &echelon, p);
                    if let Some(pivot) = row.iter().position(|&c| c != 0) {
                        let scale = inv_mod(row[pivot], p);
                        row.iter_mut().for_each(|c| *c = *c * scale % p);
                        for (_, e) in echelon.iter_mut() {
                            let c = e[pivot];
                            if c != 0 {
                                for (x, y) in e.iter_mut().zip(&row) {
                                    *x = (*x + (p - c) * y) % p;
                                }
                            }
                        }
                        echelon.push((pivot, row));
                    }
                }
            }
        }
    }
    // nullspace of the constraint rows
    let pivots: Vec<usize> = echelon.iter().map(|(c, _)| *c).collect();
    let basis = (0..k)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; k];
            v[free] = 1;
            for (pivot, row) in &echelon {
                v[*pivot] = (p - row[free]) % p;
            }
            v
        })
        .collect();
    HomSpace { labels: labels.into_iter().map(|l| l.expect("group is generated")).collect(), basis }
}

fn require_p_group(g: &FiniteGroup) -> Result<Option<u64>, GroupError> {
    if g.order() == 1 {
        return Ok(None);
    }
    g.p_group_prime()
        .map(Some)
        .ok_or(GroupError::NotPGroup(g.order() as u64))
}

/// Intersection of the maximal subgroups, each found as the kernel of an
/// epimorphism onto `Z/p`. Returns the intersection and the number of
/// maximal subgroups.
pub fn frattini_maximal_route(g: &FiniteGroup) -> Result<(BitSet, u64), GroupError> {
    let Some(p) = require_p_group(g)? else {
        return Ok((BitSet::full(1), 0));
    };
    let space = hom_space(g, p);
    let mut phi = BitSet::full(g.order());
    for v in &space.basis {
        let mut kernel = BitSet::new(g.order());
        for (x, l) in space.labels.iter().enumerate() {
            if l.iter().zip(v).map(|(a, b)| a * b).sum::<u64>() % p == 0 {
                kernel.insert(x);
            }
        }
        phi.intersect_with(&kernel);
    }
    let d = space.basis.len() as u32;
    let maximal = (p.pow(d) - 1) / (p - 1);
    Ok((phi, maximal))
}

/// `⟨g^p : g ∈ G⟩ · [G, G]`.
pub fn frattini_power_commutator_route(g: &FiniteGroup) -> Result<Subgroup, GroupError> {
    let Some(p) = require_p_group(g)? else {
        return Ok(Subgroup::trivial(g));
    };
    let mut sub = derived_subgroup(g);
    for x in g.elements() {
        let xp = g.pow(x, p);
        sub.adjoin(g, xp);
    }
    Ok(sub)
}

/// Minimal number of generators of a p-group, with both Frattini routes
/// required to agree.
pub fn frattini_quotient_rank(g: &FiniteGroup) -> Result<FrattiniReport, GroupError> {
    let prime = require_p_group(g)?;
    let (by_maximal, maximal_subgroups) = frattini_maximal_route(g)?;
    let by_powers = frattini_power_commutator_route(g)?;
    if &by_maximal != by_powers.members() && g.order() > 1 {
        return Err(GroupError::RouteMismatch {
            maximal: by_maximal.count(),
            power_commutator: by_powers.order(),
        });
    }
    let index = g.order() / by_powers.order();
    let rank = match prime {
        Some(p) => crate::arith::valuation(index as u64, p),
        None => 0,
    };
    Ok(FrattiniReport {
        prime,
        order: g.order(),
        frattini_order: by_powers.order(),
        rank,
        maximal_subgroups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_group;

    fn rank(s: &str) -> u32 {
        frattini_quotient_rank(&build_group(&s.parse().unwrap()).unwrap())
            .unwrap()
            .rank
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank("elab:3:3"), 3);
        assert_eq!(rank("heis:3"), 2);
        assert_eq!(rank("cyclic:1"), 0);
        assert_eq!(rank("cyclic:9"), 1);
        assert_eq!(rank("abelian:4,2"), 2);
        assert_eq!(rank("wreath:3"), 2);
        assert_eq!(rank("meta:5:25:0:6"), 2);
    }

    #[test]
    fn maximal_subgroup_count() {
        let g = build_group(&"elab:3:2".parse().unwrap()).unwrap();
        let (_, count) = frattini_maximal_route(&g).unwrap();
        assert_eq!(count, 4);
    }

    #[test]
    fn non_p_group_rejected() {
        let g = build_group(&"cyclic:6".parse().unwrap()).unwrap();
        assert_eq!(frattini_quotient_rank(&g).unwrap_err(), GroupError::NotPGroup(6));
    }
}
