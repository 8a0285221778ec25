//! Completions of abelian fields and realizability of finite p-groups as
//! local Galois groups, decided only where a criterion is available.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime, prime_power};
use crate::groups::{abelian_invariants, frattini_quotient_rank, metacyclic_presentations, FiniteGroup, GroupError};
use crate::numberfields::{relative_splitting, AbelianNumberField, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("group of order {0} is not a prime-power group")]
    NotPrimePowerGroup(u64),
    #[error("inconsistent local datum: {0}")]
    BadDatum(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Invariants of a finite extension of `Q_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFieldDatum {
    /// Residue characteristic.
    pub p: u64,
    /// Absolute degree `[K_v : Q_p]`.
    pub d: u64,
    pub e: u64,
    pub f: u64,
    /// Largest `k` with `μ_{p^k} ⊆ K_v`.
    pub s: u32,
}

impl LocalFieldDatum {
    pub fn new(p: u64, e: u64, f: u64, s: u32) -> Result<Self, LocalError> {
        let datum = LocalFieldDatum { p, d: e * f, e, f, s };
        datum.validate()?;
        Ok(datum)
    }

    /// `Q_p` itself.
    pub fn rational(p: u64) -> Self {
        LocalFieldDatum { p, d: 1, e: 1, f: 1, s: u32::from(p == 2) }
    }

    pub fn validate(&self) -> Result<(), LocalError> {
        if !is_prime(self.p) {
            return Err(LocalError::BadDatum(format!("{} is not prime", self.p)));
        }
        if self.e == 0 || self.f == 0 || self.e * self.f != self.d {
            return Err(LocalError::BadDatum(format!("e·f = {}·{} != d = {}", self.e, self.f, self.d)));
        }
        if self.p == 2 && self.s == 0 {
            return Err(LocalError::BadDatum("every 2-adic field contains μ_2".into()));
        }
        // [Q_p(μ_{p^s}) : Q_p] = φ(p^s) must divide d
        if self.s >= 1 {
            let cyclotomic_degree = (self.p - 1) * self.p.pow(self.s - 1);
            if self.d % cyclotomic_degree != 0 {
                return Err(LocalError::BadDatum(format!(
                    "μ_{{{}^{}}} needs degree divisible by {cyclotomic_degree}, d = {}",
                    self.p, self.s, self.d
                )));
            }
        }
        Ok(())
    }
}

/// Completion of `K` at any prime above `q` (all are conjugate).
pub fn completion(k: &AbelianNumberField, q: u64) -> Result<LocalFieldDatum, LocalError> {
    let split = k.splitting(q)?;
    // μ_{q^j} ⊆ K_v iff v splits completely in K(μ_{q^j})/K
    let cap = {
        let mut c = 2u32;
        let mut n = k.conductor();
        while n >= q {
            n /= q;
            c += 1;
        }
        c
    };
    let mut s = 0;
    for j in 1..=cap {
        let top = k.compositum(&AbelianNumberField::cyclotomic(q.pow(j)));
        let rel = relative_splitting(k, &top, &[q])?;
        if rel.records[0].n_rel == 1 {
            s = j;
        } else {
            break;
        }
    }
    Ok(LocalFieldDatum { p: q, d: split.e * split.f, e: split.e, f: split.f, s })
}

/// Rank of the maximal abelian pro-p quotient: `d + 1`, plus one when `μ_p ⊆ K_v`.
pub fn max_abelian_p_rank(datum: &LocalFieldDatum) -> u64 {
    datum.d + 1 + u64::from(datum.s >= 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Which criterion decided a [`RealizabilityVerdict`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// Trivial group.
    Trivial,
    /// `μ_p ⊄ K_v`: the maximal pro-p quotient is free of rank `d + 1`.
    FreeProP,
    /// `μ_p ⊆ K_v`, abelian: quotient of `Z_p^{d+1} × Z/p^s`.
    AbelianProP,
    /// `μ_p ⊆ K_v`, nonabelian: generator bound `d + 2` only.
    DemushkinRankBound,
    /// `μ_p ⊆ K_v`, nonabelian within the generator bound.
    DemushkinUndecided,
    /// Residue characteristic prime to `|G|`: tame, Galois group metacyclic.
    TameMetacyclic,
    /// Tame and metacyclic: no sufficiency criterion implemented.
    TameUndecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizabilityVerdict {
    pub verdict: Verdict,
    pub criterion: Criterion,
    pub detail: String,
}

impl RealizabilityVerdict {
    fn new(verdict: Verdict, criterion: Criterion, detail: impl Into<String>) -> Self {
        RealizabilityVerdict { verdict, criterion, detail: detail.into() }
    }
}

/// Whether an abelian p-group with the given invariant factors is a quotient
/// of `Z_p^{d+1} × Z/p^s`.
pub fn abelian_quotient_of_completion(invariants: &[u64], p: u64, d: u64, s: u32) -> bool {
    let rank = invariants.len() as u64;
    if rank <= d + 1 {
        return true;
    }
    if rank == d + 2 && s >= 1 {
        // the extra cyclic factor must fit inside Z/p^s
        let smallest = invariants.iter().copied().min().unwrap_or(1);
        return smallest <= p.pow(s);
    }
    false
}

/// Decides whether `G` occurs as a Galois group over the local field, where a
/// criterion applies; otherwise reports `Unknown`.
pub fn realizable(g: &FiniteGroup, datum: &LocalFieldDatum) -> Result<RealizabilityVerdict, LocalError> {
    datum.validate()?;
    if g.order() == 1 {
        return Ok(RealizabilityVerdict::new(Verdict::Yes, Criterion::Trivial, "trivial group"));
    }
    let (q, _) = prime_power(g.order() as u64).ok_or(LocalError::NotPrimePowerGroup(g.order() as u64))?;
    let p = datum.p;
    if q != p {
        if metacyclic_presentations(g).is_empty() {
            return Ok(RealizabilityVerdict::new(
                Verdict::No,
                Criterion::TameMetacyclic,
                format!("{q}-group is not metacyclic; every {q}-extension of a {p}-adic field is tame"),
            ));
        }
        return Ok(RealizabilityVerdict::new(
            Verdict::Unknown,
            Criterion::TameUndecided,
            "metacyclic tame candidate; sufficiency not decided",
        ));
    }
    let rank = u64::from(frattini_quotient_rank(g)?.rank);
    if datum.s == 0 {
        let bound = datum.d + 1;
        let verdict = if rank <= bound { Verdict::Yes } else { Verdict::No };
        return Ok(RealizabilityVerdict::new(
            verdict,
            Criterion::FreeProP,
            format!("d(G) = {rank}, free pro-{p} rank {bound}"),
        ));
    }
    if g.is_abelian() {
        let inv = abelian_invariants(g);
        let ok = abelian_quotient_of_completion(&inv, p, datum.d, datum.s);
        return Ok(RealizabilityVerdict::new(
            if ok { Verdict::Yes } else { Verdict::No },
            Criterion::AbelianProP,
            format!("invariants {inv:?} against Z_{p}^{} x Z/{p}^{}", datum.d + 1, datum.s),
        ));
    }
    let bound = datum.d + 2;
    if rank > bound {
        Ok(RealizabilityVerdict::new(
            Verdict::No,
            Criterion::DemushkinRankBound,
            format!("d(G) = {rank} exceeds generator count {bound}"),
        ))
    } else {
        Ok(RealizabilityVerdict::new(
            Verdict::Unknown,
            Criterion::DemushkinUndecided,
            format!("d(G) = {rank} within generator count {bound}; nonabelian case not decided"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_group;

    fn field(s: &str) -> AbelianNumberField {
        s.parse().unwrap()
    }

    fn group(s: &str) -> FiniteGroup {
        build_group(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn completion_examples() {
        let c = completion(&field("Q(i)*Q(sqrt:5)"), 5).unwrap();
        assert_eq!((c.d, c.e, c.f, c.s), (2, 2, 1, 0));
        let c = completion(&field("Q"), 5).unwrap();
        assert_eq!((c.d, c.s), (1, 0));
        let c = completion(&field("Q(zeta:5)"), 5).unwrap();
        assert_eq!((c.d, c.e, c.f, c.s), (4, 4, 1, 1));
        let c = completion(&field("Q(zeta:25)"), 5).unwrap();
        assert_eq!((c.d, c.s), (20, 2));
        // Q(i) completed at 5 is Q_5, which contains μ_4 but μ_5 is irrelevant here
        let c = completion(&field("Q(i)"), 5).unwrap();
        assert_eq!((c.d, c.s), (1, 0));
        // μ_2 ⊆ Q_2 and Q_2(i) contains μ_4
        assert_eq!(completion(&field("Q"), 2).unwrap().s, 1);
        assert_eq!(completion(&field("Q(i)"), 2).unwrap().s, 2);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(max_abelian_p_rank(&LocalFieldDatum::new(3, 2, 1, 0).unwrap()), 3);
        assert_eq!(max_abelian_p_rank(&LocalFieldDatum::rational(3)), 2);
        assert_eq!(max_abelian_p_rank(&LocalFieldDatum::new(5, 4, 1, 1).unwrap()), 6);
    }

    #[test]
    fn realizability_examples() {
        let v = |g: &str, d: LocalFieldDatum| realizable(&group(g), &d).unwrap().verdict;
        assert_eq!(v("elab:3:3", LocalFieldDatum::rational(3)), Verdict::No);
        assert_eq!(v("elab:3:3", LocalFieldDatum::new(3, 2, 1, 0).unwrap()), Verdict::Yes);
        assert_eq!(v("wreath:3", LocalFieldDatum::rational(3)), Verdict::Yes);
        assert_eq!(v("elab:5:3", LocalFieldDatum::rational(7)), Verdict::No);
        assert_eq!(v("cyclic:25", LocalFieldDatum::rational(7)), Verdict::Unknown);
        assert_eq!(v("heis:5", LocalFieldDatum::new(5, 4, 1, 1).unwrap()), Verdict::Unknown);
        let r = realizable(&group("cyclic:6"), &LocalFieldDatum::rational(3));
        assert_eq!(r, Err(LocalError::NotPrimePowerGroup(6)));
    }

    #[test]
    fn abelian_with_roots_of_unity() {
        let d = LocalFieldDatum::new(5, 4, 1, 1).unwrap();
        // rank 6 = d + 2 allowed only when the extra factor has exponent ≤ 5^1
        assert!(abelian_quotient_of_completion(&[5; 6], 5, d.d, d.s));
        assert!(!abelian_quotient_of_completion(&[25; 6], 5, d.d, d.s));
        assert!(!abelian_quotient_of_completion(&[5; 7], 5, d.d, d.s));
    }

    #[test]
    fn bad_datum_rejected() {
        assert!(LocalFieldDatum::new(5, 1, 1, 1).is_err());
        assert!(LocalFieldDatum::new(4, 1, 1, 0).is_err());
    }
}
