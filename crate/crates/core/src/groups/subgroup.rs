use super::FiniteGroup;

/// Fixed-size bit set over group element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn full(len: usize) -> Self {
        let mut s = BitSet::new(len);
        for k in 0..len {
            s.insert(k);
        }
        s
    }

    pub fn contains(&self, k: usize) -> bool {
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    /// Returns `true` if `k` was newly inserted.
    pub fn insert(&mut self, k: usize) -> bool {
        let w = &mut self.words[k / 64];
        let bit = 1u64 << (k % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&k| self.contains(k))
    }

    pub fn capacity(&self) -> usize {
        self.len
    }
}

/// A subgroup of a [`FiniteGroup`], stored as an element list plus membership set.
#[derive(Debug, Clone)]
pub struct Subgroup {
    members: BitSet,
    elements: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn trivial(g: &FiniteGroup) -> Self {
        let mut members = BitSet::new(g.order());
        members.insert(0);
        Subgroup { members, elements: vec![0], generators: Vec::new() }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Subgroup::generated(g, g.generators())
    }

    /// `⟨gens⟩`; the recorded generators drop redundant entries.
    pub fn generated(g: &FiniteGroup, gens: &[usize]) -> Self {
        let mut sub = Subgroup::trivial(g);
        for &s in gens {
            sub.adjoin(g, s);
        }
        sub
    }

    /// Replaces `self` with `⟨self, s⟩`. Returns `true` if the subgroup grew.
    pub fn adjoin(&mut self, g: &FiniteGroup, s: usize) -> bool {
        if self.members.contains(s) {
            return false;
        }
        self.generators.push(s);
        // every new element is reached by right-multiplying by a generator
        let mut frontier = self.elements.clone();
        while let Some(x) = frontier.pop() {
            for &gen in &self.generators {
                let y = g.mul(x, gen);
                if self.members.insert(y) {
                    self.elements.push(y);
                    frontier.push(y);
                }
            }
        }
        true
    }

    /// Smallest normal subgroup of `g` containing `self`.
    pub fn normal_closure(mut self, g: &FiniteGroup) -> Self {
        let mut k = 0;
        while k < self.generators.len() {
            let h = self.generators[k];
            for &x in g.generators() {
                let c = g.conjugate(h, x);
                self.adjoin(g, c);
            }
            k += 1;
        }
        self
    }

    pub fn is_normal(&self, g: &FiniteGroup) -> bool {
        self.generators
            .iter()
            .all(|&h| g.generators().iter().all(|&x| self.members.contains(g.conjugate(h, x))))
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// Normal closure of an arbitrary element set.
pub(crate) fn normal_closure_of(g: &FiniteGroup, elems: impl IntoIterator<Item = usize>) -> Subgroup {
    let mut sub = Subgroup::trivial(g);
    for e in elems {
        sub.adjoin(g, e);
    }
    sub.normal_closure(g)
}

/// `[G, G]`, as the normal closure of commutators of generators.
pub(crate) fn derived_subgroup(g: &FiniteGroup) -> Subgroup {
    let gens = g.generators();
    let comms: Vec<usize> = gens
        .iter()
        .enumerate()
        .flat_map(|(k, &a)| gens[k + 1..].iter().map(move |&b| (a, b)))
        .map(|(a, b)| g.commutator(a, b))
        .collect();
    normal_closure_of(g, comms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_group;

    #[test]
    fn derived_subgroups() {
        let heis = build_group(&"heis:3".parse().unwrap()).unwrap();
        assert_eq!(derived_subgroup(&heis).order(), 3);
        let wreath = build_group(&"wreath:3".parse().unwrap()).unwrap();
        assert_eq!(derived_subgroup(&wreath).order(), 9);
        let ab = build_group(&"abelian:4,6".parse().unwrap()).unwrap();
        assert_eq!(derived_subgroup(&ab).order(), 1);
    }

    #[test]
    fn generated_subgroups_are_closed() {
        let g = build_group(&"meta:5:25:0:6".parse().unwrap()).unwrap();
        let y = g.generators()[1];
        let h = Subgroup::generated(&g, &[y]);
        assert_eq!(h.order(), 25);
        assert!(h.is_normal(&g));
        for &a in h.elements() {
            for &b in h.elements() {
                assert!(h.contains(g.mul(a, b)));
            }
        }
        let x = g.generators()[0];
        let xs = Subgroup::generated(&g, &[x]);
        assert!(!xs.is_normal(&g));
        assert_eq!(xs.clone().normal_closure(&g).order(), 25);
    }
}
