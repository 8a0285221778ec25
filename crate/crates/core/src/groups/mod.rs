//! Finite group engine for the small p-groups used in admissibility arguments.
//!
//! Every group is stored as a concrete representation whose elements are
//! encoded as indices `0..order` in a mixed-radix layout; index `0` is always
//! the identity. All algorithms work on these indices through [`FiniteGroup::mul`]
//! and [`FiniteGroup::inv`], so no general word-problem machinery is needed.

mod frattini;
mod metacyclic;
mod spec;
mod structure;
mod subgroup;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

pub use frattini::{frattini_maximal_route, frattini_power_commutator_route, frattini_quotient_rank, FrattiniReport};
pub use metacyclic::{metacyclic_presentations, MetacyclicPresentation};
pub use spec::GroupSpec;
pub use structure::{
    abelian_invariants, contains_p_sylow, proper_quotients_abelian, sylow_subgroups, SylowStructure,
};
pub use subgroup::{BitSet, Subgroup};

use crate::arith::{gcd, is_prime, prime_power};

/// Default enumeration bound on group orders.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// Environment variable overriding [`DEFAULT_MAX_ORDER`].
pub const MAX_ORDER_ENV: &str = "ADLAB_MAX_ORDER";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("parse failure: {0}")]
    Parse(String),
    #[error("inconsistent metacyclic parameters: {0}")]
    InconsistentMetacyclic(String),
    #[error("group order {order} exceeds enumeration bound {bound}")]
    OrderOverBound { order: u64, bound: u64 },
    #[error("not a p-group: order {0}")]
    NotPGroup(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("bad element word `{0}`")]
    BadWord(String),
    #[error("Frattini routes disagree: maximal-subgroup intersection has order {maximal}, G^p[G,G] has order {power_commutator}")]
    RouteMismatch { maximal: usize, power_commutator: usize },
}

/// The enumeration bound in effect: `ADLAB_MAX_ORDER` if set and valid,
/// otherwise [`DEFAULT_MAX_ORDER`].
pub fn max_order() -> u64 {
    std::env::var(MAX_ORDER_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v: &u64| v > 0)
        .unwrap_or(DEFAULT_MAX_ORDER)
}

/// 3×3 matrix over `F_p`, row-major.
pub type Mat3 = [[u64; 3]; 3];

pub const IDENTITY3: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

pub fn mat3_mul(a: &Mat3, b: &Mat3, p: u64) -> Mat3 {
    let mut out = [[0; 3]; 3];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| a[r][k] * b[k][c]).sum::<u64>() % p;
        }
    }
    out
}

pub fn mat3_pow(a: &Mat3, mut e: u64, p: u64) -> Mat3 {
    let mut acc = IDENTITY3;
    let mut base = *a;
    while e > 0 {
        if e & 1 == 1 {
            acc = mat3_mul(&acc, &base, p);
        }
        base = mat3_mul(&base, &base, p);
        e >>= 1;
    }
    acc
}

/// The unitriangular generators acting on `F_p^3` column vectors:
/// `(a,b,c) ↦ (a+b,b,c)`, `(a,b,c) ↦ (a,b+c,c)`, `(a,b,c) ↦ (a+c,b,c)`.
pub fn heisenberg_action_generators() -> [Mat3; 3] {
    [
        [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
        [[1, 0, 0], [0, 1, 1], [0, 0, 1]],
        [[1, 0, 1], [0, 1, 0], [0, 0, 1]],
    ]
}

#[derive(Debug, Clone)]
enum Repr {
    /// `Z/a1 × ... × Z/ak`, first factor is the least significant digit.
    Abelian { moduli: Vec<u64> },
    /// Unitriangular matrices `[[1,a,c],[0,1,b],[0,0,1]]`, digits `(a,b,c)`.
    Heisenberg { p: u64 },
    /// `F_p^p ⋊ Z/p` with cyclic shift, digits `(v_0..v_{p-1}, k)`.
    Wreath { p: u64 },
    /// Normal form `x^a y^b`, digits `(b, a)`.
    Metacyclic { m: u64, n: u64, i: u64, t: u64 },
    /// `F_p^3 ⋊_φ F_p^3`, digits `(h_0,h_1,h_2, g_0,g_1,g_2)` for `(g, h)`;
    /// `action[g]` is `φ(g)` acting on the normal factor.
    Semidirect { p: u64, action: Arc<Vec<Mat3>> },
    /// Subgroup of another group, re-indexed so that `0` is the identity.
    Sub {
        parent: Arc<FiniteGroup>,
        elements: Arc<Vec<usize>>,
        index: Arc<HashMap<usize, usize>>,
    },
}

/// An enumerable finite group with a distinguished generating sequence.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    repr: Repr,
    generators: Vec<usize>,
}

/// Builds the group named by `spec` under the current [`max_order`] bound.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    build_group_with_bound(spec, max_order())
}

pub fn build_group_with_bound(spec: &GroupSpec, bound: u64) -> Result<FiniteGroup, GroupError> {
    let order = spec
        .formulaic_order()
        .ok_or(GroupError::OrderOverBound { order: u64::MAX, bound })?;
    if order > bound {
        return Err(GroupError::OrderOverBound { order, bound });
    }
    let label = spec.to_string();
    match *spec {
        GroupSpec::Cyclic(n) => Ok(FiniteGroup::abelian(label, vec![n])),
        GroupSpec::ElementaryAbelian { p, rank } => {
            Ok(FiniteGroup::abelian(label, vec![p; rank as usize]))
        }
        GroupSpec::Abelian(ref factors) => Ok(FiniteGroup::abelian(label, factors.clone())),
        GroupSpec::Heisenberg(p) => Ok(FiniteGroup::heisenberg(label, p)),
        GroupSpec::Wreath(p) => Ok(FiniteGroup::wreath(label, p)),
        GroupSpec::Metacyclic { m, n, i, t } => FiniteGroup::metacyclic(label, m, n, i, t),
        GroupSpec::Double(p) => {
            let [phi_x, _, phi_u] = heisenberg_action_generators();
            FiniteGroup::semidirect_square(label, p, [phi_x, phi_u, IDENTITY3])
        }
    }
}

impl FiniteGroup {
    fn abelian(label: String, moduli: Vec<u64>) -> Self {
        let moduli: Vec<u64> = moduli.into_iter().filter(|&m| m > 1).collect();
        let order = moduli.iter().product::<u64>() as usize;
        let mut generators = Vec::with_capacity(moduli.len());
        let mut place = 1usize;
        for &m in &moduli {
            generators.push(place);
            place *= m as usize;
        }
        FiniteGroup { label, order, repr: Repr::Abelian { moduli }, generators }
    }

    fn heisenberg(label: String, p: u64) -> Self {
        let p_us = p as usize;
        // x = (1,0,0), y = (0,1,0), u = (0,0,1)
        let generators = vec![1, p_us, p_us * p_us];
        FiniteGroup { label, order: p_us.pow(3), repr: Repr::Heisenberg { p }, generators }
    }

    fn wreath(label: String, p: u64) -> Self {
        let p_us = p as usize;
        // basis vector e_0 of the base, and the shift x
        let generators = vec![1, p_us.pow(p as u32)];
        FiniteGroup {
            label,
            order: p_us.pow(p as u32 + 1),
            repr: Repr::Wreath { p },
            generators,
        }
    }

    fn metacyclic(label: String, m: u64, n: u64, i: u64, t: u64) -> Result<Self, GroupError> {
        let (i, t) = (i % n, t % n);
        if gcd(t, n) != 1 && n > 1 {
            return Err(GroupError::InconsistentMetacyclic(format!(
                "t = {t} is not a unit mod {n}"
            )));
        }
        if crate::arith::pow_mod(t, m, n) != 1 % n {
            return Err(GroupError::InconsistentMetacyclic(format!(
                "t^m = {t}^{m} is not 1 mod {n}"
            )));
        }
        if (i as u128 * (t as u128 + n as u128 - 1)) % n as u128 != 0 {
            return Err(GroupError::InconsistentMetacyclic(format!(
                "x^m = y^{i} is not fixed by conjugation (i(t-1) != 0 mod {n})"
            )));
        }
        let order = (m * n) as usize;
        let x = if m > 1 { n as usize } else { i as usize };
        let y = if n > 1 { 1 } else { 0 };
        let mut generators = vec![x, y];
        generators.retain(|&g| g != 0);
        Ok(FiniteGroup { label, order, repr: Repr::Metacyclic { m, n, i, t }, generators })
    }

    /// `F_p^3 ⋊_φ F_p^3` where `φ(e_k) = images[k]`. The images must commute
    /// pairwise and have order dividing `p`.
    pub fn semidirect_square(label: String, p: u64, images: [Mat3; 3]) -> Result<Self, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        for (k, a) in images.iter().enumerate() {
            if mat3_pow(a, p, p) != IDENTITY3 {
                return Err(GroupError::InvalidAction(format!("image {k} has order not dividing {p}")));
            }
            for b in &images[k + 1..] {
                if mat3_mul(a, b, p) != mat3_mul(b, a, p) {
                    return Err(GroupError::InvalidAction("images do not commute".into()));
                }
            }
        }
        let p_us = p as usize;
        let mut action = Vec::with_capacity(p_us.pow(3));
        for g in 0..p_us.pow(3) {
            let (g0, g1, g2) = (g % p_us, (g / p_us) % p_us, g / (p_us * p_us));
            let m = mat3_mul(
                &mat3_mul(&mat3_pow(&images[0], g0 as u64, p), &mat3_pow(&images[1], g1 as u64, p), p),
                &mat3_pow(&images[2], g2 as u64, p),
                p,
            );
            action.push(m);
        }
        let cube = p_us.pow(3);
        let generators = vec![cube, cube * p_us, cube * p_us * p_us, 1, p_us, p_us * p_us];
        Ok(FiniteGroup {
            label,
            order: cube * cube,
            repr: Repr::Semidirect { p, action: Arc::new(action) },
            generators,
        })
    }

    /// The subgroup `sub` of `parent` as a group in its own right.
    pub fn from_subgroup(parent: &FiniteGroup, sub: &Subgroup, label: String) -> FiniteGroup {
        let mut elements = sub.elements().to_vec();
        elements.sort_unstable();
        debug_assert_eq!(elements.first(), Some(&0));
        let index: HashMap<usize, usize> =
            elements.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let generators = sub.generators().iter().map(|g| index[g]).collect();
        FiniteGroup {
            label,
            order: elements.len(),
            repr: Repr::Sub {
                parent: Arc::new(parent.clone()),
                elements: Arc::new(elements),
                index: Arc::new(index),
            },
            generators,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Abelian { moduli } => {
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut place = 1;
                for &m in moduli {
                    let m = m as usize;
                    out += ((a % m + b % m) % m) * place;
                    a /= m;
                    b /= m;
                    place *= m;
                }
                out
            }
            Repr::Heisenberg { p } => {
                let p = *p as usize;
                let (a0, a1, a2) = (a % p, (a / p) % p, a / (p * p));
                let (b0, b1, b2) = (b % p, (b / p) % p, b / (p * p));
                let x = (a0 + b0) % p;
                let y = (a1 + b1) % p;
                let z = (a2 + b2 + a0 * b1) % p;
                x + p * (y + p * z)
            }
            Repr::Wreath { p } => {
                let p = *p as usize;
                let mut va = [0usize; 8];
                let mut vb = [0usize; 8];
                let (mut ra, mut rb) = (a, b);
                for j in 0..p {
                    va[j] = ra % p;
                    vb[j] = rb % p;
                    ra /= p;
                    rb /= p;
                }
                let (ka, kb) = (ra, rb);
                let mut out = 0;
                let mut place = 1;
                for j in 0..p {
                    // (σ^k w)_j = w_{j-k}
                    let shifted = vb[(j + p - ka) % p];
                    out += ((va[j] + shifted) % p) * place;
                    place *= p;
                }
                out + ((ka + kb) % p) * place
            }
            Repr::Metacyclic { m, n, i, t } => {
                let (m, n) = (*m as usize, *n as usize);
                let (b1, a1) = (a % n, a / n);
                let (b2, a2) = (b % n, b / n);
                // x^a1 y^b1 x^a2 y^b2 = x^(a1+a2) y^(b1 t^a2 + b2)
                let conj = crate::arith::pow_mod(*t, a2 as u64, n as u64) as usize;
                let mut e = (b1 * conj + b2) % n;
                let mut xa = a1 + a2;
                if xa >= m {
                    xa -= m;
                    e = (e + *i as usize) % n;
                }
                e + n * xa
            }
            Repr::Semidirect { p, action } => {
                let p = *p as usize;
                let cube = p * p * p;
                let (ha, ga) = (a % cube, a / cube);
                let (hb, gb) = (b % cube, b / cube);
                let mat = &action[ga];
                let hbv = [hb % p, (hb / p) % p, hb / (p * p)];
                let hav = [ha % p, (ha / p) % p, ha / (p * p)];
                let gav = [ga % p, (ga / p) % p, ga / (p * p)];
                let gbv = [gb % p, (gb / p) % p, gb / (p * p)];
                let mut h = 0;
                let mut g = 0;
                let mut place = 1;
                for r in 0..3 {
                    let img: usize = (0..3).map(|c| mat[r][c] as usize * hbv[c]).sum();
                    h += ((hav[r] + img) % p) * place;
                    g += ((gav[r] + gbv[r]) % p) * place;
                    place *= p;
                }
                h + cube * g
            }
            Repr::Sub { parent, elements, index } => {
                index[&parent.mul(elements[a], elements[b])]
            }
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        match &self.repr {
            Repr::Abelian { moduli } => {
                let mut a = a;
                let mut out = 0;
                let mut place = 1;
                for &m in moduli {
                    let m = m as usize;
                    out += ((m - a % m) % m) * place;
                    a /= m;
                    place *= m;
                }
                out
            }
            Repr::Heisenberg { p } => {
                let p = *p as usize;
                let (a0, a1, a2) = (a % p, (a / p) % p, a / (p * p));
                let x = (p - a0) % p;
                let y = (p - a1) % p;
                let z = (a0 * a1 + p - a2) % p;
                x + p * (y + p * z)
            }
            Repr::Sub { parent, elements, index } => index[&parent.inv(elements[a])],
            _ => {
                let ord = self.element_order(a);
                self.pow(a, ord as u64 - 1)
            }
        }
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut acc = 0;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `a^{-1} b^{-1} a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `g^{-1} h g`.
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), h), g)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .enumerate()
            .all(|(k, &a)| gens[k + 1..].iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `Some(p)` when the order is a power of the prime `p` (including order 1,
    /// which reports `None`).
    pub fn p_group_prime(&self) -> Option<u64> {
        prime_power(self.order as u64).map(|(p, _)| p)
    }

    /// Parses a word such as `g0*g1^2*g0^-1` over the distinguished generators.
    /// `e` or `1` denotes the identity.
    pub fn parse_word(&self, word: &str) -> Result<usize, GroupError> {
        let word = word.trim();
        if word == "e" || word == "1" || word.is_empty() {
            return Ok(0);
        }
        let mut acc = 0;
        for factor in word.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.trim().parse::<i64>().map_err(|_| GroupError::BadWord(word.into()))?,
                ),
                None => (factor, 1),
            };
            let k: usize = base
                .strip_prefix('g')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| GroupError::BadWord(word.into()))?;
            let g = *self.generators.get(k).ok_or_else(|| GroupError::BadWord(word.into()))?;
            let g = if exp < 0 { self.inv(g) } else { g };
            acc = self.mul(acc, self.pow(g, exp.unsigned_abs()));
        }
        Ok(acc)
    }

    /// Verifies the group axioms: identity and inverses exhaustively up to
    /// order `10^4`, associativity on a deterministic sample of triples, and
    /// that the distinguished generators generate.
    pub fn verify_axioms(&self) -> bool {
        let n = self.order;
        let exhaustive = n <= 10_000;
        let stride = if exhaustive { 1 } else { n / 2_000 + 1 };
        let idents = (0..n).step_by(stride).all(|a| {
            self.mul(a, 0) == a && self.mul(0, a) == a && self.mul(a, self.inv(a)) == 0
        });
        // deterministic LCG sample for associativity
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize % n
        };
        let assoc = (0..2_000).all(|_| {
            let (a, b, c) = (next(), next(), next());
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        });
        let generates = Subgroup::generated(self, self.generators()).order() == n;
        idents && assoc && generates
    }
}
