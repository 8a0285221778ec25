//! Counterexample certificates: for each example, the conditions it
//! satisfies and violates, and a script of checked computations and cited
//! existence theorems supporting each claim.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Condition, ConditionError};
use crate::arith::is_prime;

pub const EXAMPLE_IDS: [&str; 7] = ["nogal", "ex1", "ex2", "ex3", "ex4", "ex5", "cyclic"];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    /// `[M:K]` for the cyclic example.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
}

/// A condition claimed to hold or to fail for an example's triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    Holds(Condition),
    Fails(Condition),
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Holds(c) => write!(f, "holds:{c}"),
            Claim::Fails(c) => write!(f, "fails:{c}"),
        }
    }
}

impl FromStr for Claim {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some(("holds", c)) => Ok(Claim::Holds(c.parse()?)),
            Some(("fails", c)) => Ok(Claim::Fails(c.parse()?)),
            _ => Err(ConditionError::Parse(format!("claim {s}"))),
        }
    }
}

impl Serialize for Claim {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Claim {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// How an observed value is compared with the expected one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    #[default]
    Eq,
    Ge,
    Gt,
    Le,
}

/// Existence theorems a certificate may invoke without recomputing them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CitedTheorem {
    /// Global abelian extensions with prescribed local behaviour at finitely many primes.
    GrunwaldWang,
    /// Infinitely many primes with a prescribed Frobenius class.
    Chebotarev,
    /// Generic extensions for wreath products of abelian groups.
    SaltmanGeneric,
    /// Global extensions of a p-group with prescribed completions at finitely many primes.
    NeukirchLifting,
    /// A local `G`-extension disjoint from a given one, via a split embedding problem.
    LocalEmbedding,
    /// A metacyclic group satisfying Liedahl's condition is realizable at infinitely many primes.
    LiedahlRealizability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "UPPERCASE")]
pub enum StepKind {
    Checked {
        op: String,
        inputs: Value,
        expected: Value,
        #[serde(default)]
        relation: Relation,
        /// Compare only this key of an object-valued result.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        select: Option<String>,
    },
    Cited {
        theorem: CitedTheorem,
        statement: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    #[serde(flatten)]
    pub kind: StepKind,
    #[serde(default)]
    pub note: String,
    pub supports: Vec<Claim>,
}

impl Step {
    pub fn is_checked(&self) -> bool {
        matches!(self.kind, StepKind::Checked { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub id: String,
    pub params: CertificateParams,
    pub description: String,
    /// Whether `M/K` is Galois, so the example also bears on that lattice.
    pub mk_galois: bool,
    pub holds: Vec<Condition>,
    pub fails: Vec<Condition>,
    pub steps: Vec<Step>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Certificate {
    /// Each satisfied condition paired with each violated one.
    pub fn base_pairs(&self) -> Vec<(Condition, Condition)> {
        self.holds.iter().flat_map(|&a| self.fails.iter().map(move |&b| (a, b))).collect()
    }

    pub fn claims(&self) -> Vec<Claim> {
        self.holds.iter().map(|&c| Claim::Holds(c)).chain(self.fails.iter().map(|&c| Claim::Fails(c))).collect()
    }

    /// Claims no step supports.
    pub fn unsupported_claims(&self) -> Vec<Claim> {
        self.claims().into_iter().filter(|c| !self.steps.iter().any(|s| s.supports.contains(c))).collect()
    }

    /// Structural checks: at least one checked step, no condition both
    /// holding and failing, every step's claim among the declared ones.
    pub fn validate(&self) -> Result<(), ConditionError> {
        let bad = |msg: String| Err(ConditionError::BadCertificate(format!("{}: {msg}", self.id)));
        if !self.steps.iter().any(Step::is_checked) {
            return bad("no CHECKED steps".into());
        }
        if let Some(c) = self.holds.iter().find(|c| self.fails.contains(c)) {
            return bad(format!("condition {c} both holds and fails"));
        }
        let claims = self.claims();
        for (i, step) in self.steps.iter().enumerate() {
            if let Some(c) = step.supports.iter().find(|c| !claims.contains(c)) {
                return bad(format!("step {i} supports undeclared claim {c}"));
            }
        }
        Ok(())
    }
}

fn checked(op: &str, inputs: Value, expected: Value, note: &str, supports: &[Claim]) -> Step {
    Step {
        kind: StepKind::Checked { op: op.into(), inputs, expected, relation: Relation::Eq, select: None },
        note: note.into(),
        supports: supports.to_vec(),
    }
}

fn checked_rel(
    op: &str,
    inputs: Value,
    expected: Value,
    relation: Relation,
    select: Option<&str>,
    note: &str,
    supports: &[Claim],
) -> Step {
    Step {
        kind: StepKind::Checked { op: op.into(), inputs, expected, relation, select: select.map(String::from) },
        note: note.into(),
        supports: supports.to_vec(),
    }
}

fn cited(theorem: CitedTheorem, statement: &str, supports: &[Claim]) -> Step {
    Step { kind: StepKind::Cited { theorem, statement: statement.into() }, note: String::new(), supports: supports.to_vec() }
}

fn holds(i: u8) -> Claim {
    Claim::Holds(Condition::c(i))
}

fn fails(i: u8) -> Claim {
    Claim::Fails(Condition::c(i))
}

fn conds(list: &[u8]) -> Vec<Condition> {
    list.iter().map(|&i| Condition::c(i)).collect()
}

fn precondition(id: &str, reason: impl Into<String>) -> ConditionError {
    ConditionError::Precondition { id: id.into(), reason: reason.into() }
}

/// `p` must be a prime with `p ≡ 1 (mod 4)`, or `p = 3` in reduced mode.
fn check_split_prime(id: &str, p: u64) -> Result<bool, ConditionError> {
    if !is_prime(p) {
        return Err(precondition(id, format!("{p} is not prime")));
    }
    if p == 3 {
        return Ok(false);
    }
    if p % 4 != 1 {
        return Err(precondition(id, format!("need p ≡ 1 (mod 4) or p = 3, got {p}")));
    }
    Ok(true)
}

fn datum(p: u64, e: u64, f: u64, s: u32) -> Value {
    json!({"p": p, "d": e * f, "e": e, "f": f, "s": s})
}

/// Completion step: computed from the field model, or validated explicit data.
fn completion_step(field_model: bool, field: &str, datum_value: &Value, supports: &[Claim]) -> Step {
    if field_model {
        checked("local.completion", json!({"field": field, "prime": datum_value["p"]}), datum_value.clone(), "", supports)
    } else {
        checked(
            "local.datum",
            json!({"datum": datum_value}),
            json!(true),
            "field model does not reproduce the splitting at this prime; local field entered explicitly",
            supports,
        )
    }
}

fn inv(slot: &str, num: i64, den: u64) -> Value {
    json!({"slot": slot, "num": num, "den": den})
}

/// Expected JSON of a canonical class, entries sorted by slot as [`BrauerClass::to_json`] emits them.
///
/// [`BrauerClass::to_json`]: crate::brauer::BrauerClass::to_json
fn class_json(field: &str, mut entries: Vec<(String, i64, u64)>) -> Value {
    let mut canonical = Vec::new();
    entries.sort_by(|a, b| {
        let pa: crate::numberfields::PrimeSlot = a.0.parse().expect("slot");
        let pb: crate::numberfields::PrimeSlot = b.0.parse().expect("slot");
        pa.cmp(&pb)
    });
    for (slot, num, den) in entries {
        let v = crate::brauer::InvariantValue::new(num, den);
        if !v.is_zero() {
            canonical.push(inv(&slot, v.num() as i64, v.den()));
        }
    }
    json!({"base_field": field, "invariants": canonical})
}

/// Builds the certificate for `id`, filling parameter defaults and
/// enforcing the example's preconditions.
pub fn build_certificate(id: &str, params: &CertificateParams) -> Result<Certificate, ConditionError> {
    match id {
        "nogal" => nogal(params),
        "ex1" => ex1(params),
        "ex2" => ex2(params),
        "ex3" => ex3(params),
        "ex4" => ex4(params),
        "ex5" => ex5(params),
        "cyclic" => cyclic(params),
        other => Err(ConditionError::UnknownExample(other.into())),
    }
}

fn ex1(params: &CertificateParams) -> Result<Certificate, ConditionError> {
    let p = params.p.unwrap_or(5);
    let field_model = check_split_prime("ex1", p)?;
    let k = format!("Q(i)*Q(sqrt:{p})");
    let p3 = p.pow(3);
    let local = datum(p, 2, 1, 0);
    let mut steps = Vec::new();
    let mut notes = Vec::new();
    if field_model {
        steps.push(checked(
            "field.splitting",
            json!({"field": k, "prime": p}),
            json!({"e": 2, "f": 1, "g": 2}),
            "p has two primes above it in K",
            &[holds(2), holds(5), holds(9)],
        ));
    }
    steps.push(completion_step(field_model, &k, &local, &[holds(9), fails(3)]));
    steps.push(checked(
        "local.rank",
        json!({"datum": local}),
        json!(3),
        "maximal abelian pro-p quotient of the completion has rank 3",
        &[holds(9), fails(3)],
    ));
    steps.push(checked("group.frattini_rank", json!({"group": format!("elab:{p}:3")}), json!(3), "", &[holds(9)]));
    steps.push(checked(
        "local.realizable",
        json!({"group": format!("elab:{p}:3"), "datum": local}),
        json!("yes"),
        "G occurs over both completions above p",
        &[holds(2), holds(9)],
    ));
    steps.push(checked(
        "brauer.adequacy",
        json!({"degrees": [p3, p3], "n": p3}),
        json!(true),
        "full local degree at two primes",
        &[holds(2), holds(9)],
    ));
    steps.push(checked(
        "brauer.solve",
        json!({"spec": {
            "field": "M",
            "slots": [
                {"slot": "varpi1", "max_order": p3, "exact_order": p3},
                {"slot": "varpi2", "max_order": p3, "exact_order": p3},
            ],
            "sum_zero": true,
        }}),
        class_json("M", vec![("varpi1".into(), 1, p3), ("varpi2".into(), -1, p3)]),
        "class supported on the unique primes above nu_1, nu_2",
        &[holds(5)],
    ));
    if p == 3 {
        steps.push(checked_rel(
            "group.semidirect_min_rank",
            json!({"p": p}),
            json!(3),
            Relation::Gt,
            Some("min_rank"),
            "every action of G on G through the unitriangular group",
            &[fails(3)],
        ));
        notes.push("action quantification: exhaustive over commuting unitriangular triples".into());
    } else {
        steps.push(checked_rel(
            "group.frattini_rank",
            json!({"group": format!("double:{p}")}),
            json!(3),
            Relation::Gt,
            None,
            "representative action",
            &[fails(3)],
        ));
        notes.push("action quantification: representative action only".into());
    }
    steps.push(checked(
        "local.realizable",
        json!({"group": format!("double:{p}"), "datum": local}),
        json!("no"),
        "the semidirect square cannot be a local Galois group above p",
        &[fails(3)],
    ));
    steps.push(cited(
        CitedTheorem::GrunwaldWang,
        "a (Z/p^2)^3-extension of K whose completions above p are the maximal abelian exponent-p^2 extensions",
        &[holds(2), holds(5), holds(9)],
    ));
    if !field_model {
        notes.push("p = 3: K is modelled only through its completion Q_3(sqrt 3)".into());
    }
    Ok(Certificate {
        id: "ex1".into(),
        params: CertificateParams { p: Some(p), ..Default::default() },
        description: format!("K = Q(i, sqrt {p}), G = (Z/{p})^3, M/K a G-extension"),
        mk_galois: true,
        holds: conds(&[2, 5, 9]),
        fails: conds(&[3]),
        steps,
        notes,
    })
}

fn ex2(params: &CertificateParams) -> Result<Certificate, ConditionError> {
    let p = params.p.unwrap_or(5);
    let field_model = check_split_prime("ex2", p)?;
    let pp = p.pow(p as u32);
    let local = datum(p, 1, 1, 0);
    let elab = format!("elab:{p}:{p}");
    let mut steps = Vec::new();
    if field_model {
        steps.push(checked(
            "field.splitting",
            json!({"field": "Q(i)", "prime": p}),
            json!({"e": 1, "f": 1, "g": 2}),
            "p splits in Q(i)",
            &[holds(8)],
        ));
    }
    steps.push(completion_step(field_model, "Q(i)", &local, &[holds(8), fails(9), fails(4)]));
    steps.push(checked("local.rank", json!({"datum": local}), json!(2), "", &[holds(8)]));
    steps.push(checked("group.frattini_rank", json!({"group": format!("wreath:{p}")}), json!(2), "", &[holds(8)]));
    steps.push(checked(
        "local.realizable",
        json!({"group": format!("wreath:{p}"), "datum": local}),
        json!("yes"),
        "",
        &[holds(8)],
    ));
    steps.push(checked("group.frattini_rank", json!({"group": elab}), json!(p), "", &[fails(9), fails(4)]));
    steps.push(checked(
        "local.realizable",
        json!({"group": elab, "datum": local}),
        json!("no"),
        "G is not a local Galois group above p",
        &[fails(9), fails(4)],
    ));
    steps.push(checked(
        "group.metacyclic_count",
        json!({"group": elab}),
        json!(0),
        "G is not metacyclic, so no tame completion realizes it",
        &[fails(9)],
    ));
    steps.push(checked(
        "brauer.adequacy",
        json!({"degrees": [pp, pp], "n": pp}),
        json!(true),
        "L_0 has full local degree at both primes above p",
        &[holds(8)],
    ));
    steps.push(cited(
        CitedTheorem::SaltmanGeneric,
        "the wreath product has a generic extension, hence a global extension with full local groups above p",
        &[holds(8)],
    ));
    steps.push(checked(
        "conditions.implies",
        json!({"from": "8", "to": "2", "mode": "galois-mk"}),
        json!("proved"),
        "M/K is Galois",
        &[holds(2)],
    ));
    let mut notes = Vec::new();
    if !field_model {
        notes.push("p = 3: the completion is taken to be Q_3".into());
    }
    Ok(Certificate {
        id: "ex2".into(),
        params: CertificateParams { p: Some(p), ..Default::default() },
        description: format!("K = Q(i), G = (Z/{p})^{p}, P = Z/{p} wr Z/{p}, M = L^G"),
        mk_galois: true,
        holds: conds(&[8, 2]),
        fails: conds(&[9, 4]),
        steps,
        notes,
    })
}

fn ex3(params: &CertificateParams) -> Result<Certificate, ConditionError> {
    let p = params.p.unwrap_or(5);
    let field_model = check_split_prime("ex3", p)?;
    let k = format!("Q(sqrt:{p})");
    let m = format!("Q(sqrt:{p})*Q(i)");
    let (p2, p3) = (p.pow(2), p.pow(3));
    let local = datum(p, 2, 1, 0);
    let elab = format!("elab:{p}:3");
    let mut steps = Vec::new();
    if field_model {
        steps.push(checked(
            "field.splitting",
            json!({"field": k, "prime": p}),
            json!({"e": 2, "f": 1, "g": 1}),
            "a unique prime above p in K",
            &[fails(9), fails(8)],
        ));
        steps.push(checked(
            "field.relative",
            json!({"base": k, "top": m, "primes": [p]}),
            json!({"galois": true, "records": [{
                "key": {"rational": {"q": p, "g_base": 1}},
                "g_rel": 2, "n_rel": 1, "e_rel": 1, "f_rel": 1,
            }]}),
            "nu splits into two primes of M with trivial local degree",
            &[holds(4), fails(5)],
        ));
    }
    steps.push(completion_step(field_model, &k, &local, &[holds(4)]));
    steps.push(checked(
        "local.realizable",
        json!({"group": elab, "datum": local}),
        json!("yes"),
        "",
        &[holds(4)],
    ));
    steps.push(checked(
        "group.metacyclic_count",
        json!({"group": elab}),
        json!(0),
        "tame completions only realize metacyclic groups",
        &[fails(9), fails(8), fails(5)],
    ));
    steps.push(checked(
        "brauer.adequacy",
        json!({"degrees": [p3], "n": p3}),
        json!(false),
        "only nu can carry full local degree",
        &[fails(9), fails(8)],
    ));
    steps.push(checked(
        "brauer.solve",
        json!({"spec": {
            "field": "M",
            "slots": [
                {"slot": "nu1", "max_order": p3, "exact_order": p3},
                {"slot": "nu2", "max_order": p3, "exact_order": p3},
                {"slot": "u1", "max_order": p2},
                {"slot": "u2", "max_order": p2},
            ],
            "equal_groups": [["nu1", "nu2"]],
            "sum_zero": true,
        }}),
        Value::Null,
        "restriction forces equal invariants above nu",
        &[fails(5)],
    ));
    steps.push(cited(
        CitedTheorem::GrunwaldWang,
        "a G-extension L_0/K with full local group at nu",
        &[holds(4)],
    ));
    let mut notes = Vec::new();
    if !field_model {
        notes.push("p = 3: field-model splitting steps skipped; completion entered explicitly".into());
    }
    Ok(Certificate {
        id: "ex3".into(),
        params: CertificateParams { p: Some(p), ..Default::default() },
        description: format!("K = Q(sqrt {p}), M = Q(sqrt {p}, i), G = (Z/{p})^3"),
        mk_galois: true,
        holds: conds(&[4]),
        fails: conds(&[9, 8, 5]),
        steps,
        notes,
    })
}

fn smallest_prime_one_mod(p: u64) -> u64 {
    (1..).map(|k| k * p + 1).find(|&q| is_prime(q)).expect("Dirichlet")
}

fn ex4(params: &CertificateParams) -> Result<Certificate, ConditionError> {
    let p = params.p.unwrap_or(5);
    if !is_prime(p) || p == 2 {
        return Err(precondition("ex4", format!("need an odd prime p, got {p}")));
    }
    let q = params.q.unwrap_or_else(|| smallest_prime_one_mod(p));
    if !is_prime(q) || q % p != 1 {
        return Err(precondition("ex4", format!("need a prime q ≡ 1 (mod {p}), got {q}")));
    }
    let field_model = p % 4 == 1;
    let k = format!("Q(sqrt:{p})");
    let (p2, p3) = (p.pow(2), p.pow(3));
    let local = datum(p, 2, 1, 0);
    let elab = format!("elab:{p}:3");
    let mut steps = Vec::new();
    if field_model {
        steps.push(checked(
            "field.splitting",
            json!({"field": k, "prime": p}),
            json!({"e": 2, "f": 1, "g": 1}),
            "a unique prime nu above p",
            &[fails(9)],
        ));
        steps.push(checked(
            "field.splitting",
            json!({"field": k, "prime": q}),
            json!({"e": 1, "f": 1, "g": 2}),
            "q splits in K",
            &[holds(5)],
        ));
    }
    steps.push(completion_step(field_model, &k, &local, &[holds(5)]));
    steps.push(checked(
        "local.realizable",
        json!({"group": elab, "datum": local}),
        json!("yes"),
        "G occurs over M_{nu_i} = K_nu",
        &[holds(5)],
    ));
    steps.push(checked(
        "local.residue_roots",
        json!({"q": q, "f": p, "p": p}),
        json!(true),
        "mu_p lies in the residue field at varpi', so (Z/p)^2 is tamely realizable there",
        &[holds(5)],
    ));
    let rel = json!({"galois": true, "records": [
        {"key": {"slot": {"slot": "nu"}}, "g_rel": p, "n_rel": 1},
        {"key": {"slot": {"slot": "varpi"}}, "g_rel": 1, "n_rel": p},
    ]});
    let d0 = class_json("K", vec![("nu".into(), 1, p3), ("varpi".into(), -1, p3)]);
    let mut restricted_entries: Vec<(String, i64, u64)> = (0..p).map(|j| (format!("nu.{j}"), 1, p3)).collect();
    restricted_entries.push(("varpi.0".into(), -1, p2));
    let restricted = class_json("M", restricted_entries);
    steps.push(checked(
        "brauer.restrict",
        json!({"class": d0, "rel": rel, "top": "M"}),
        restricted.clone(),
        "nu splits completely, varpi is inert",
        &[holds(5)],
    ));
    steps.push(checked("brauer.index", json!({"class": restricted}), json!(p3), "", &[holds(5)]));
    let mut degrees = serde_json::Map::new();
    for j in 0..p {
        degrees.insert(format!("nu.{j}"), json!(p3));
    }
    degrees.insert("varpi.0".into(), json!(p2));
    steps.push(checked(
        "brauer.splits",
        json!({"class": restricted, "degrees": degrees}),
        json!(true),
        "L splits D, and [L:M] = index, so L is a maximal subfield",
        &[holds(5)],
    ));
    steps.push(checked(
        "group.metacyclic_count",
        json!({"group": elab}),
        json!(0),
        "tame completions of K cannot realize G",
        &[fails(9)],
    ));
    steps.push(checked(
        "brauer.adequacy",
        json!({"degrees": [p3], "n": p3}),
        json!(false),
        "only nu can carry full local degree",
        &[fails(9)],
    ));
    steps.push(cited(
        CitedTheorem::GrunwaldWang,
        "a G-extension L/M with full local group at each nu_i and (Z/p)^2 at varpi'",
        &[holds(5)],
    ));
    let mut notes = Vec::new();
    if !field_model {
        notes.push("p ≡ 3 (mod 4): splitting of q in K depends on q mod 4; field-model steps skipped".into());
    }
    Ok(Certificate {
        id: "ex4".into(),
        params: CertificateParams { p: Some(p), q: Some(q), ..Default::default() },
        description: format!("K = Q(sqrt {p}), q = {q}, M/K cyclic of degree {p}, G = (Z/{p})^3"),
        mk_galois: true,
        holds: conds(&[5]),
        fails: conds(&[9]),
        steps,
        notes,
    })
}

fn ex5(params: &CertificateParams) -> Result<Certificate, ConditionError> {
    let p = params.p.unwrap_or(5);
    let field_model = check_split_prime("ex5", p)?;
    let (p2, p3) = (p.pow(2), p.pow(3));
    let k = format!("Q(zeta:{p})");
    let m = format!("Q(zeta:{})", 4 * p2);
    let g = format!("meta:{p}:{p2}:0:{}", p + 1);
    let mut steps = Vec::new();
    if field_model {
        steps.push(checked(
            "field.splitting",
            json!({"field": m, "prime": p}),
            json!({"e": p * (p - 1), "f": 1, "g": 2}),
            "exactly two primes of M above p",
            &[fails(5)],
        ));
    }
    steps.push(checked(
        "field.contains",
        json!({"big": m, "small": k}),
        json!(true),
        "K ⊆ M, both abelian, so M/K is Galois",
        &[holds(2)],
    ));
    steps.push(checked(
        "liedahl.check",
        json!({"group": g, "field": m}),
        json!({"status": "failed"}),
        "so G is realizable at no prime of M outside those above p",
        &[fails(5)],
    ));
    steps.push(checked(
        "liedahl.check",
        json!({"group": g, "field": k}),
        json!({"status": "satisfied", "params": [p, p2, 0, p + 1]}),
        "sigma_{p+1} fixes mu_p",
        &[holds(7)],
    ));
    steps.push(checked(
        "brauer.solve",
        json!({"spec": {
            "field": "M",
            "slots": [
                {"slot": "nu1", "max_order": p3, "exact_order": p3},
                {"slot": "nu2", "max_order": p3, "exact_order": p3},
                {"slot": "w1", "max_order": p2},
                {"slot": "w2", "max_order": p2},
            ],
            "equal_groups": [["nu1", "nu2"]],
            "sum_zero": true,
        }}),
        Value::Null,
        "no class with the forced invariants sums to zero",
        &[fails(5)],
    ));
    steps.push(checked(
        "group.proper_quotients_abelian",
        json!({"group": g}),
        json!(true),
        "",
        &[holds(7)],
    ));
    steps.push(checked("group.abelian_invariants", json!({"group": g}), json!([p, p]), "", &[holds(7)]));
    let local = datum(p, p - 1, 1, 1);
    steps.push(checked(
        "local.completion",
        json!({"field": k, "prime": p}),
        local.clone(),
        "K_u = Q_p(mu_p)",
        &[holds(7)],
    ));
    steps.push(checked(
        "local.rank",
        json!({"datum": local}),
        json!(p + 1),
        "abelianization of the maximal pro-p quotient has rank d + 2",
        &[holds(7)],
    ));
    steps.push(checked(
        "local.realizable",
        json!({"group": g, "datum": local}),
        json!("unknown"),
        "within the generator bound; decided by the cited embedding step",
        &[holds(7)],
    ));
    steps.push(cited(
        CitedTheorem::LiedahlRealizability,
        "G is realizable at infinitely many primes of K, in particular at some varpi not above p",
        &[holds(7)],
    ));
    steps.push(cited(
        CitedTheorem::LocalEmbedding,
        "a G-extension of K_u disjoint from M_u",
        &[holds(7)],
    ));
    steps.push(cited(
        CitedTheorem::NeukirchLifting,
        "a global G-extension L_0/K with the prescribed completions at varpi and u",
        &[holds(7)],
    ));
    steps.push(checked(
        "conditions.implies",
        json!({"from": "7", "to": "2", "mode": "galois-mk"}),
        json!("proved"),
        "",
        &[holds(2)],
    ));
    let mut notes = vec!["the embedding step is stated for p ≥ 11; at small p it is carried as a citation".to_string()];
    if !field_model {
        notes.push("p = 3: p has a single prime in M; the splitting step is skipped".into());
    }
    Ok(Certificate {
        id: "ex5".into(),
        params: CertificateParams { p: Some(p), ..Default::default() },
        description: format!("K = Q(zeta_{p}), M = Q(zeta_{}), G = <x,y | x^{p}, y^{p2}, y^x = y^{}>", 4 * p2, p + 1),
        mk_galois: true,
        holds: conds(&[7, 2]),
        fails: conds(&[5]),
        steps,
        notes,
    })
}

fn nogal(params: &CertificateParams) -> Result<Certificate, ConditionError> {
    let n = params.n.unwrap_or(3);
    if n < 3 {
        return Err(precondition("nogal", format!("need n ≥ 3, got {n}")));
    }
    let steps = vec![
        checked(
            "nogal.divisibility",
            json!({"n": n}),
            json!(true),
            "[M':M] = (n-1)! does not divide n = [L:M]",
            &[fails(2)],
        ),
        checked("brauer.adequacy", json!({"degrees": [n, n], "n": n}), json!(true), "", &[holds(6)]),
        cited(CitedTheorem::Chebotarev, "two primes of K split completely in the Galois closure of M", &[holds(6)]),
        cited(
            CitedTheorem::GrunwaldWang,
            "a cyclic extension of degree n with full local degree at both primes",
            &[holds(6)],
        ),
    ];
    Ok(Certificate {
        id: "nogal".into(),
        params: CertificateParams { n: Some(n), ..Default::default() },
        description: format!("[M:K] = {n} with Galois closure group S_{n}, G = Z/{n}"),
        mk_galois: false,
        holds: conds(&[6]),
        fails: conds(&[2]),
        steps,
        notes: Vec::new(),
    })
}

fn cyclic(params: &CertificateParams) -> Result<Certificate, ConditionError> {
    let n = params.n.unwrap_or(4);
    let degree = params.degree.unwrap_or(2);
    if n == 0 || degree == 0 {
        return Err(precondition("cyclic", "n and degree must be positive"));
    }
    let rel = json!({"galois": true, "records": [
        {"key": {"slot": {"slot": "nu1"}}, "g_rel": degree, "n_rel": 1},
        {"key": {"slot": {"slot": "nu2"}}, "g_rel": degree, "n_rel": 1},
    ]});
    let d0 = class_json("K", vec![("nu1".into(), 1, n), ("nu2".into(), -1, n)]);
    let entries: Vec<(String, i64, u64)> = (0..degree)
        .map(|j| (format!("nu1.{j}"), 1, n))
        .chain((0..degree).map(|j| (format!("nu2.{j}"), -1, n)))
        .collect();
    let restricted = class_json("M", entries);
    let reach: Vec<String> =
        ["1", "3", "4", "5", "6", "7", "8", "9", "X"].iter().map(|s| s.to_string()).collect();
    let all_holds: Vec<Claim> = [6, 1, 3, 4, 5, 7, 8, 9].iter().map(|&i| holds(i)).collect();
    let steps = vec![
        checked("brauer.adequacy", json!({"degrees": [n, n], "n": n}), json!(true), "", &[holds(6)]),
        checked(
            "brauer.restrict",
            json!({"class": d0, "rel": rel, "top": "M"}),
            restricted.clone(),
            "both primes split completely in M",
            &[holds(6)],
        ),
        checked("brauer.index", json!({"class": restricted}), json!(n), "index preserved", &[holds(6)]),
        checked(
            "conditions.closure_from",
            json!({"from": "6", "mode": "general"}),
            json!(reach),
            "",
            &all_holds,
        ),
        cited(CitedTheorem::Chebotarev, "infinitely many primes of K split completely in M", &[holds(6)]),
        cited(
            CitedTheorem::GrunwaldWang,
            "a cyclic G-extension L_0/K with full local degree at two such primes",
            &[holds(6)],
        ),
    ];
    Ok(Certificate {
        id: "cyclic".into(),
        params: CertificateParams { n: Some(n), degree: Some(degree), ..Default::default() },
        description: format!("G = Z/{n}, any M/K of degree {degree}"),
        mk_galois: true,
        holds: conds(&[6, 1, 3, 4, 5, 7, 8, 9]),
        fails: Vec::new(),
        steps,
        notes: Vec::new(),
    })
}
