//! Replays the CHECKED steps of a certificate through the computational
//! modules.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use super::{closure, implies, Certificate, CertificateParams, Condition, ConditionError, Mode, Registry, Relation, StepKind};
use crate::arith::{factorial, pow_mod};
use crate::brauer::{adequacy, feasibility_solve, restrict, splits, BrauerClass, FeasibilitySpec};
use crate::groups::{
    abelian_invariants, build_group, frattini_power_commutator_route, frattini_quotient_rank,
    heisenberg_action_generators, mat3_mul, metacyclic_presentations, proper_quotients_abelian, FiniteGroup,
    GroupSpec, Mat3, IDENTITY3,
};
use crate::liedahl::{liedahl_check, LiedahlVerdict};
use crate::localfields::{completion, max_abelian_p_rank, realizable, LocalFieldDatum};
use crate::numberfields::{relative_splitting, AbelianNumberField, PrimeSlot, RelativeExtensionData};

/// Operations a CHECKED step may name.
pub const OPS: [&str; 21] = [
    "group.frattini_rank",
    "group.semidirect_min_rank",
    "group.metacyclic_count",
    "group.proper_quotients_abelian",
    "group.abelian_invariants",
    "field.splitting",
    "field.contains",
    "field.relative",
    "local.completion",
    "local.datum",
    "local.rank",
    "local.realizable",
    "local.residue_roots",
    "brauer.restrict",
    "brauer.index",
    "brauer.splits",
    "brauer.adequacy",
    "brauer.solve",
    "liedahl.check",
    "conditions.implies",
    "conditions.closure_from",
];

const NOGAL_OP: &str = "nogal.divisibility";

fn known_op(op: &str) -> bool {
    OPS.contains(&op) || op == NOGAL_OP
}

fn bad(op: &str, reason: impl ToString) -> ConditionError {
    ConditionError::BadInputs { op: op.into(), reason: reason.to_string() }
}

fn arg<T: DeserializeOwned>(op: &str, inputs: &Value, key: &str) -> Result<T, ConditionError> {
    let v = inputs.get(key).ok_or_else(|| bad(op, format!("missing `{key}`")))?;
    serde_json::from_value(v.clone()).map_err(|e| bad(op, format!("`{key}`: {e}")))
}

fn group_arg(op: &str, inputs: &Value) -> Result<FiniteGroup, ConditionError> {
    let spec: String = arg(op, inputs, "group")?;
    let spec: GroupSpec = spec.parse().map_err(|e| bad(op, e))?;
    build_group(&spec).map_err(|e| bad(op, e))
}

fn field_arg(op: &str, inputs: &Value, key: &str) -> Result<AbelianNumberField, ConditionError> {
    let s: String = arg(op, inputs, key)?;
    s.parse().map_err(|e| bad(op, e))
}

fn datum_arg(op: &str, inputs: &Value) -> Result<LocalFieldDatum, ConditionError> {
    let d: LocalFieldDatum = arg(op, inputs, "datum")?;
    d.validate().map_err(|e| bad(op, e))?;
    Ok(d)
}

fn class_arg(op: &str, inputs: &Value) -> Result<BrauerClass, ConditionError> {
    let v = inputs.get("class").ok_or_else(|| bad(op, "missing `class`"))?;
    BrauerClass::from_json(v).map_err(|e| bad(op, e))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// The unitriangular group over `F_p` as a list of matrices.
fn unitriangular(p: u64) -> Vec<Mat3> {
    let gens = heisenberg_action_generators();
    let mut elements = vec![IDENTITY3];
    let mut i = 0;
    while i < elements.len() {
        for g in &gens {
            let m = mat3_mul(&elements[i], g, p);
            if !elements.contains(&m) {
                elements.push(m);
            }
        }
        i += 1;
    }
    elements
}

/// Smallest Frattini-quotient rank of `F_p^3 ⋊_φ F_p^3` over all `φ` into
/// the unitriangular group, computed through `G^p [G, G]`.
fn semidirect_min_rank(p: u64) -> Result<Value, ConditionError> {
    let op = "group.semidirect_min_rank";
    let elems = unitriangular(p);
    let commute = |a: &Mat3, b: &Mat3| mat3_mul(a, b, p) == mat3_mul(b, a, p);
    let mut min_rank = u32::MAX;
    let mut max_rank = 0;
    let mut actions = 0u64;
    for a in &elems {
        for b in elems.iter().filter(|b| commute(a, b)) {
            for c in elems.iter().filter(|c| commute(a, c) && commute(b, c)) {
                let g = FiniteGroup::semidirect_square(format!("double:{p}:phi"), p, [*a, *b, *c])
                    .map_err(|e| bad(op, e))?;
                let phi = frattini_power_commutator_route(&g).map_err(|e| bad(op, e))?;
                let mut index = g.order() / phi.order();
                let mut rank = 0;
                while index > 1 {
                    index /= p as usize;
                    rank += 1;
                }
                min_rank = min_rank.min(rank);
                max_rank = max_rank.max(rank);
                actions += 1;
            }
        }
    }
    Ok(json!({"min_rank": min_rank, "max_rank": max_rank, "actions": actions}))
}

/// Runs one catalogue operation.
pub fn replay_op(op: &str, inputs: &Value) -> Result<Value, ConditionError> {
    Ok(match op {
        "group.frattini_rank" => {
            let g = group_arg(op, inputs)?;
            json!(frattini_quotient_rank(&g).map_err(|e| bad(op, e))?.rank)
        }
        "group.semidirect_min_rank" => {
            let p: u64 = arg(op, inputs, "p")?;
            if p > 5 {
                return Err(bad(op, "exhaustive action search limited to p ≤ 5"));
            }
            semidirect_min_rank(p)?
        }
        "group.metacyclic_count" => json!(metacyclic_presentations(&group_arg(op, inputs)?).len()),
        "group.proper_quotients_abelian" => json!(proper_quotients_abelian(&group_arg(op, inputs)?)),
        "group.abelian_invariants" => json!(abelian_invariants(&group_arg(op, inputs)?)),
        "field.splitting" => {
            let k = field_arg(op, inputs, "field")?;
            let q: u64 = arg(op, inputs, "prime")?;
            let s = k.splitting(q).map_err(|e| bad(op, e))?;
            json!({"e": s.e, "f": s.f, "g": s.g})
        }
        "field.contains" => {
            let big = field_arg(op, inputs, "big")?;
            let small = field_arg(op, inputs, "small")?;
            json!(big.contains(&small))
        }
        "field.relative" => {
            let k = field_arg(op, inputs, "base")?;
            let m = field_arg(op, inputs, "top")?;
            let primes: Vec<u64> = arg(op, inputs, "primes")?;
            to_value(&relative_splitting(&k, &m, &primes).map_err(|e| bad(op, e))?)
        }
        "local.completion" => {
            let k = field_arg(op, inputs, "field")?;
            let q: u64 = arg(op, inputs, "prime")?;
            to_value(&completion(&k, q).map_err(|e| bad(op, e))?)
        }
        "local.datum" => {
            datum_arg(op, inputs)?;
            json!(true)
        }
        "local.rank" => json!(max_abelian_p_rank(&datum_arg(op, inputs)?)),
        "local.realizable" => {
            let g = group_arg(op, inputs)?;
            let d = datum_arg(op, inputs)?;
            to_value(&realizable(&g, &d).map_err(|e| bad(op, e))?.verdict)
        }
        "local.residue_roots" => {
            let q: u64 = arg(op, inputs, "q")?;
            let f: u64 = arg(op, inputs, "f")?;
            let p: u64 = arg(op, inputs, "p")?;
            if p < 2 || q < 2 {
                return Err(bad(op, "p and q must be at least 2"));
            }
            json!(pow_mod(q, f, p) == 1 % p)
        }
        "brauer.restrict" => {
            let d = class_arg(op, inputs)?;
            let rel: RelativeExtensionData = arg(op, inputs, "rel")?;
            rel.validate().map_err(|e| bad(op, e))?;
            let top: String = arg(op, inputs, "top")?;
            restrict(&d, &rel, top).map_err(|e| bad(op, e))?.to_json()
        }
        "brauer.index" => json!(class_arg(op, inputs)?.index()),
        "brauer.splits" => {
            let d = class_arg(op, inputs)?;
            let degrees: BTreeMap<String, u64> = arg(op, inputs, "degrees")?;
            let degrees = degrees
                .into_iter()
                .map(|(k, v)| Ok((k.parse::<PrimeSlot>().map_err(|e| bad(op, e))?, v)))
                .collect::<Result<BTreeMap<_, _>, ConditionError>>()?;
            json!(splits(&d, &degrees).map_err(|e| bad(op, e))?)
        }
        "brauer.adequacy" => {
            let degrees: Vec<u64> = arg(op, inputs, "degrees")?;
            let n: u64 = arg(op, inputs, "n")?;
            if n == 0 {
                return Err(bad(op, "n must be positive"));
            }
            json!(adequacy(&degrees, n))
        }
        "brauer.solve" => {
            let spec: FeasibilitySpec = arg(op, inputs, "spec")?;
            match feasibility_solve(&spec).map_err(|e| bad(op, e))? {
                Some(d) => d.to_json(),
                None => Value::Null,
            }
        }
        "liedahl.check" => {
            let g = group_arg(op, inputs)?;
            let k = field_arg(op, inputs, "field")?;
            match liedahl_check(&g, &k).map_err(|e| bad(op, e))? {
                LiedahlVerdict::Satisfied { witness, .. } => {
                    let (m, n, i, t) = witness.params();
                    json!({"status": "satisfied", "params": [m, n, i, t]})
                }
                LiedahlVerdict::Failed { .. } => json!({"status": "failed"}),
                LiedahlVerdict::NotMetacyclic => json!({"status": "not_metacyclic"}),
            }
        }
        "conditions.implies" => {
            let x: Condition = arg(op, inputs, "from")?;
            let y: Condition = arg(op, inputs, "to")?;
            let mode: Mode = arg(op, inputs, "mode")?;
            // positive implications only: no registry, so no circularity
            json!(implies(x, y, mode, &Registry::empty())?.short())
        }
        "conditions.closure_from" => {
            let x: Condition = arg(op, inputs, "from")?;
            let mode: Mode = arg(op, inputs, "mode")?;
            let reach: Vec<String> =
                closure(mode).into_iter().filter(|(a, _)| *a == x).map(|(_, b)| b.to_string()).collect();
            json!(reach)
        }
        NOGAL_OP => {
            let n: u64 = arg(op, inputs, "n")?;
            if !(1..=30).contains(&n) {
                return Err(bad(op, "n must lie in 1..=30"));
            }
            // (n-1)! ∤ n
            json!(u128::from(n) % factorial(n - 1) != 0)
        }
        other => return Err(ConditionError::UnknownOp(other.into())),
    })
}

fn compare(observed: &Value, expected: &Value, relation: Relation) -> bool {
    match relation {
        Relation::Eq => observed == expected,
        _ => match (observed.as_f64(), expected.as_f64()) {
            (Some(o), Some(e)) => match relation {
                Relation::Ge => o >= e,
                Relation::Gt => o > e,
                Relation::Le => o <= e,
                Relation::Eq => unreachable!(),
            },
            _ => false,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StepOutcome {
    Pass,
    Fail,
    Cited,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    pub index: usize,
    /// Operation name or cited theorem.
    pub label: String,
    pub outcome: StepOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<Relation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub id: String,
    pub params: CertificateParams,
    pub passed: bool,
    pub checked: usize,
    pub cited: usize,
    pub steps: Vec<StepReport>,
    pub notes: Vec<String>,
}

impl CertificateReport {
    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

/// Replays every CHECKED step; the certificate passes iff all of them do.
pub fn verify_certificate(cert: &Certificate) -> Result<CertificateReport, ConditionError> {
    cert.validate()?;
    if let Some(c) = cert.unsupported_claims().first() {
        return Err(ConditionError::BadCertificate(format!("{}: claim {c} has no supporting step", cert.id)));
    }
    for step in &cert.steps {
        if let StepKind::Checked { op, .. } = &step.kind {
            if !known_op(op) {
                return Err(ConditionError::UnknownOp(op.clone()));
            }
        }
    }
    let mut steps = Vec::with_capacity(cert.steps.len());
    let (mut checked, mut cited) = (0, 0);
    for (index, step) in cert.steps.iter().enumerate() {
        let report = match &step.kind {
            StepKind::Checked { op, inputs, expected, relation, select } => {
                checked += 1;
                let (observed, error) = match replay_op(op, inputs) {
                    Ok(v) => (Some(v), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                let compared = observed.as_ref().map(|v| match select {
                    Some(key) => v.get(key).cloned().unwrap_or(Value::Null),
                    None => v.clone(),
                });
                let pass = compared.as_ref().is_some_and(|v| compare(v, expected, *relation));
                StepReport {
                    index,
                    label: op.clone(),
                    outcome: if pass { StepOutcome::Pass } else { StepOutcome::Fail },
                    observed,
                    expected: Some(expected.clone()),
                    relation: Some(*relation),
                    error,
                    note: step.note.clone(),
                }
            }
            StepKind::Cited { theorem, statement } => {
                cited += 1;
                StepReport {
                    index,
                    label: to_value(theorem).as_str().unwrap_or_default().to_string(),
                    outcome: StepOutcome::Cited,
                    observed: None,
                    expected: None,
                    relation: None,
                    error: None,
                    note: statement.clone(),
                }
            }
        };
        steps.push(report);
    }
    let passed = steps.iter().all(|s| s.outcome != StepOutcome::Fail);
    Ok(CertificateReport {
        id: cert.id.clone(),
        params: cert.params.clone(),
        passed,
        checked,
        cited,
        steps,
        notes: cert.notes.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::build_certificate;

    fn run(id: &str, params: CertificateParams) -> CertificateReport {
        verify_certificate(&build_certificate(id, &params).unwrap()).unwrap()
    }

    #[test]
    fn ex4_restriction_replays() {
        let report = run("ex4", CertificateParams { p: Some(3), q: Some(7), ..Default::default() });
        assert!(report.passed, "{report:#?}");
        let restrict = report.steps.iter().find(|s| s.label == "brauer.restrict").unwrap();
        let invariants = restrict.observed.as_ref().unwrap()["invariants"].as_array().unwrap();
        assert!(invariants.iter().any(|v| v["num"] == 8 && v["den"] == 9));
    }

    #[test]
    fn small_certificates_pass() {
        assert!(run("nogal", CertificateParams::default()).passed);
        assert!(run("cyclic", CertificateParams::default()).passed);
        assert!(run("ex3", CertificateParams { p: Some(3), ..Default::default() }).passed);
    }

    #[test]
    fn tampered_expectation_fails() {
        let mut cert = build_certificate("nogal", &CertificateParams::default()).unwrap();
        if let StepKind::Checked { expected, .. } = &mut cert.steps[0].kind {
            *expected = json!(false);
        }
        let report = verify_certificate(&cert).unwrap();
        assert!(!report.passed);
        assert_eq!(report.steps[0].outcome, StepOutcome::Fail);
    }

    #[test]
    fn unknown_op_rejected() {
        let mut cert = build_certificate("nogal", &CertificateParams::default()).unwrap();
        if let StepKind::Checked { op, .. } = &mut cert.steps[0].kind {
            *op = "group.nonsense".into();
        }
        assert_eq!(verify_certificate(&cert), Err(ConditionError::UnknownOp("group.nonsense".into())));
    }

    #[test]
    fn nogal_divisibility() {
        assert_eq!(replay_op(NOGAL_OP, &json!({"n": 3})).unwrap(), json!(true));
        assert_eq!(replay_op(NOGAL_OP, &json!({"n": 2})).unwrap(), json!(false));
        assert_eq!(replay_op(NOGAL_OP, &json!({"n": 1})).unwrap(), json!(false));
    }
}
