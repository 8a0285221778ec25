//! Liedahl's condition for metacyclic groups over abelian fields, and the
//! tame admissibility verdict built on it.

use serde::Serialize;

use crate::groups::{metacyclic_presentations, sylow_subgroups, FiniteGroup, MetacyclicPresentation, SylowStructure};
use crate::numberfields::{sigma_fixes, AbelianNumberField, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LiedahlVerdict {
    Satisfied {
        witness: MetacyclicPresentation,
        /// `K ∩ Q(μ_n)` for the witness `n`.
        field: AbelianNumberField,
    },
    Failed {
        searched: usize,
    },
    NotMetacyclic,
}

impl LiedahlVerdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, LiedahlVerdict::Satisfied { .. })
    }
}

/// First presentation, in search order, whose `σ_{t,n}` fixes `K ∩ Q(μ_n)`.
pub fn liedahl_check(g: &FiniteGroup, k: &AbelianNumberField) -> Result<LiedahlVerdict, FieldError> {
    let presentations = metacyclic_presentations(g);
    if presentations.is_empty() {
        return Ok(LiedahlVerdict::NotMetacyclic);
    }
    for p in &presentations {
        if sigma_fixes(p.t as i64, p.n, k)? {
            return Ok(LiedahlVerdict::Satisfied { witness: *p, field: k.intersect_with_cyclotomic(p.n) });
        }
    }
    Ok(LiedahlVerdict::Failed { searched: presentations.len() })
}

/// Checks that the condition over `m` descends to the subfield `k`.
/// Returns whether the implication holds for this pair.
pub fn subfield_monotonicity(
    g: &FiniteGroup,
    k: &AbelianNumberField,
    m: &AbelianNumberField,
) -> Result<bool, FieldError> {
    if !m.contains(k) {
        return Err(FieldError::NotSubfield);
    }
    let over_m = liedahl_check(g, m)?.is_satisfied();
    Ok(!over_m || liedahl_check(g, k)?.is_satisfied())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TameVerdict {
    Yes,
    No,
    Unknown,
}

/// How a step of the verdict is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Support {
    /// Recomputed here.
    Checked,
    /// Taken from a published theorem; not constructed here.
    Cited,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisStep {
    pub support: Support,
    pub claim: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TameAdmissibility {
    pub verdict: TameVerdict,
    pub basis: Vec<BasisStep>,
    /// Set when `G` is not the direct product of its Sylow subgroups.
    pub unknown_structure: bool,
}

/// Tame admissibility over `k`: yes iff every Sylow subgroup is metacyclic
/// and satisfies Liedahl's condition.
pub fn tame_admissibility_verdict(g: &FiniteGroup, k: &AbelianNumberField) -> Result<TameAdmissibility, FieldError> {
    let sylows = match sylow_subgroups(g) {
        SylowStructure::Nilpotent(s) => s,
        SylowStructure::NotNilpotent => {
            return Ok(TameAdmissibility {
                verdict: TameVerdict::Unknown,
                basis: vec![BasisStep {
                    support: Support::Checked,
                    claim: format!("{} is not the direct product of its Sylow subgroups", g.label()),
                }],
                unknown_structure: true,
            });
        }
    };
    let mut basis = Vec::new();
    for (p, s) in &sylows {
        let verdict = liedahl_check(s, k)?;
        let (claim, ok) = match &verdict {
            LiedahlVerdict::Satisfied { witness, .. } => (
                format!("{p}-Sylow has presentation {:?} with σ_{{t,n}} fixing K ∩ Q(μ_n)", witness.params()),
                true,
            ),
            LiedahlVerdict::Failed { searched } => {
                (format!("{p}-Sylow: none of {searched} presentations satisfies Liedahl's condition"), false)
            }
            LiedahlVerdict::NotMetacyclic => (format!("{p}-Sylow is not metacyclic"), false),
        };
        basis.push(BasisStep { support: Support::Checked, claim });
        if !ok {
            basis.push(BasisStep {
                support: Support::Cited,
                claim: "tamely admissible groups have metacyclic Sylow subgroups satisfying Liedahl's condition".into(),
            });
            return Ok(TameAdmissibility { verdict: TameVerdict::No, basis, unknown_structure: false });
        }
    }
    basis.push(BasisStep {
        support: Support::Cited,
        claim: "metacyclic Sylow subgroups satisfying Liedahl's condition give a tame crossed-product extension".into(),
    });
    Ok(TameAdmissibility { verdict: TameVerdict::Yes, basis, unknown_structure: false })
}
