use std::cmp::Reverse;
use std::collections::BTreeMap;

use serde::Serialize;

use super::{FiniteGroup, Subgroup};
use crate::arith::factorize;

/// A presentation `⟨x, y | x^m = y^i, y^n = 1, x^{-1} y x = y^t⟩` together
/// with the witness pair realizing it in a concrete group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MetacyclicPresentation {
    pub m: u64,
    pub n: u64,
    pub i: u64,
    pub t: u64,
    #[serde(skip)]
    pub x: usize,
    #[serde(skip)]
    pub y: usize,
}

impl MetacyclicPresentation {
    pub fn params(&self) -> (u64, u64, u64, u64) {
        (self.m, self.n, self.i, self.t)
    }

    /// Replays every defining relation against the witness pair.
    pub fn verify(&self, g: &FiniteGroup) -> bool {
        let (x, y) = (self.x, self.y);
        let cyclic = Subgroup::generated(g, &[y]);
        let whole = Subgroup::generated(g, &[x, y]);
        g.pow(x, self.m) == g.pow(y, self.i)
            && g.pow(y, self.n) == 0
            && g.conjugate(y, x) == g.pow(y, self.t)
            && cyclic.order() as u64 == self.n
            && cyclic.is_normal(g)
            && whole.order() == g.order()
            && (g.order() as u64) == self.m * self.n
    }
}

/// All parameter tuples `(m, n, i, t)` realized by some witness pair in `g`,
/// ordered by `n` descending and then `(m, i, t)` ascending. Empty iff `g`
/// is not metacyclic.
///
/// Every `y` spanning a normal cyclic subgroup with cyclic quotient is tried
/// against every `x` whose image generates that quotient.
pub fn metacyclic_presentations(g: &FiniteGroup) -> Vec<MetacyclicPresentation> {
    let order = g.order();
    let mut found: BTreeMap<(Reverse<u64>, u64, u64, u64), MetacyclicPresentation> = BTreeMap::new();
    let mut dlog = vec![u32::MAX; order];
    for y in g.elements() {
        // power table of y
        let mut powers = Vec::new();
        let mut acc = 0;
        loop {
            dlog[acc] = powers.len() as u32;
            powers.push(acc);
            acc = g.mul(acc, y);
            if acc == 0 {
                break;
            }
        }
        let n = powers.len();
        let normal = g.generators().iter().all(|&s| dlog[g.conjugate(y, s)] != u32::MAX);
        if normal {
            let m = order / n;
            let prime_divisors: Vec<u64> = factorize(m as u64).into_iter().map(|(q, _)| q).collect();
            for x in g.elements() {
                let generates_quotient = prime_divisors
                    .iter()
                    .all(|&q| dlog[g.pow(x, m as u64 / q)] == u32::MAX);
                if !generates_quotient {
                    continue;
                }
                let i = dlog[g.pow(x, m as u64)] as u64;
                let t = dlog[g.conjugate(y, x)] as u64;
                let key = (Reverse(n as u64), m as u64, i, t);
                found.entry(key).or_insert(MetacyclicPresentation {
                    m: m as u64,
                    n: n as u64,
                    i,
                    t,
                    x,
                    y,
                });
            }
        }
        for &e in &powers {
            dlog[e] = u32::MAX;
        }
    }
    found.into_values().collect()
}
