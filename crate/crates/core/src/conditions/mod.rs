//! The implication lattice between the nine field-of-definition conditions,
//! closure and refutation deduction, and replayable counterexample
//! certificates.
//!
//! Numbering: 1 admissible over `M`; 2 `L` Galois over `K`; 3 `L` defined
//! over `K`; 4 `L = L_0 ⊗ M` with `Gal(L_0/K) ≅ G`; 5 `D` defined over `K`;
//! 6 compatible pair `(L_0, D_0)` with `L_0 ∩ M = K`; 7 `K`-adequate `L_0`
//! with `L_0 M` `M`-adequate; 8 as 7 with `L_0 M / M` a `G`-extension;
//! 9 `K`- and `M`-admissible. `X` is the crossed-product compatibility
//! condition, equivalent to 6.

mod certificate;
mod registry;
mod replay;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use certificate::{
    build_certificate, Certificate, CertificateParams, CitedTheorem, Claim, Relation, Step, StepKind, EXAMPLE_IDS,
};
pub use registry::{Registry, RegistryEntry};
pub use replay::{replay_op, verify_certificate, CertificateReport, StepOutcome, StepReport, OPS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConditionError {
    #[error("cannot parse condition `{0}`")]
    Parse(String),
    #[error("condition {condition} does not belong to the {mode} lattice")]
    ModeMismatch { condition: Condition, mode: Mode },
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("precondition violated for {id}: {reason}")]
    Precondition { id: String, reason: String },
    #[error("invalid certificate: {0}")]
    BadCertificate(String),
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("bad inputs for {op}: {reason}")]
    BadInputs { op: String, reason: String },
}

/// One of the conditions `1..9`, or `X` (stored as 10), optionally starred
/// for the tame lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Condition {
    index: u8,
    starred: bool,
}

pub const CX_INDEX: u8 = 10;

impl Condition {
    pub fn new(index: u8, starred: bool) -> Result<Self, ConditionError> {
        if (1..=CX_INDEX).contains(&index) {
            Ok(Condition { index, starred })
        } else {
            Err(ConditionError::Parse(index.to_string()))
        }
    }

    /// `C1..C9`, or `X` for 10. Panics outside `1..=10`.
    pub fn c(index: u8) -> Self {
        Condition::new(index, false).expect("condition index in 1..=10")
    }

    pub fn star(index: u8) -> Self {
        Condition::new(index, true).expect("condition index in 1..=10")
    }

    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn is_starred(&self) -> bool {
        self.starred
    }

    fn with_star(self, starred: bool) -> Self {
        Condition { starred, ..self }
    }

    /// `1..9` in the given lattice flavour.
    pub fn nine(starred: bool) -> Vec<Condition> {
        (1..=9).map(|i| Condition { index: i, starred }).collect()
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == CX_INDEX {
            write!(f, "X")?;
        } else {
            write!(f, "{}", self.index)?;
        }
        if self.starred {
            write!(f, "*")?;
        }
        Ok(())
    }
}

impl FromStr for Condition {
    type Err = ConditionError;

    /// Accepts `6`, `C6`, `6*`, `X`, `CX`, `X*`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConditionError::Parse(s.to_string());
        let t = s.trim();
        let (t, starred) = match t.strip_suffix('*') {
            Some(rest) => (rest, true),
            None => (t, false),
        };
        let t = t.strip_prefix(['C', 'c']).unwrap_or(t);
        let index = if t.eq_ignore_ascii_case("x") { CX_INDEX } else { t.parse().map_err(|_| bad())? };
        Condition::new(index, starred).map_err(|_| bad())
    }
}

impl Serialize for Condition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Condition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    General,
    /// `M/K` Galois: adds `3 ⇒ 2`.
    GaloisMk,
    /// Tame admissibility, starred conditions.
    Tame,
}

impl Mode {
    fn starred(self) -> bool {
        self == Mode::Tame
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::General => "general",
            Mode::GaloisMk => "galois-mk",
            Mode::Tame => "tame",
        })
    }
}

impl FromStr for Mode {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "general" => Ok(Mode::General),
            "galois-mk" | "galoismk" | "galois" => Ok(Mode::GaloisMk),
            "tame" => Ok(Mode::Tame),
            _ => Err(ConditionError::Parse(format!("mode {s}"))),
        }
    }
}

const GENERAL_EDGES: [(u8, u8); 13] = [
    (6, 5),
    (6, 7),
    (7, 4),
    (7, 8),
    (7, 9),
    (4, 3),
    (8, 3),
    (3, 1),
    (2, 1),
    (5, 1),
    (9, 1),
    (CX_INDEX, 6),
    (6, CX_INDEX),
];

/// Direct implications of the lattice for `mode`.
pub fn base_edges(mode: Mode) -> Vec<(Condition, Condition)> {
    let starred = mode.starred();
    let mut raw: Vec<(u8, u8)> = GENERAL_EDGES.to_vec();
    match mode {
        Mode::General => {}
        Mode::GaloisMk => raw.push((3, 2)),
        Mode::Tame => raw.push((1, 6)),
    }
    raw.into_iter()
        .map(|(a, b)| (Condition { index: a, starred }, Condition { index: b, starred }))
        .collect()
}

fn adjacency(mode: Mode) -> BTreeMap<Condition, Vec<Condition>> {
    let mut adj: BTreeMap<Condition, Vec<Condition>> = BTreeMap::new();
    for (a, b) in base_edges(mode) {
        adj.entry(a).or_default().push(b);
    }
    adj
}

/// Shortest edge path from `x` to `y`, if any; empty when `x == y`.
fn path(adj: &BTreeMap<Condition, Vec<Condition>>, x: Condition, y: Condition) -> Option<Vec<(Condition, Condition)>> {
    let mut prev: BTreeMap<Condition, Condition> = BTreeMap::new();
    let mut seen = BTreeSet::from([x]);
    let mut queue = VecDeque::from([x]);
    while let Some(c) = queue.pop_front() {
        if c == y {
            let mut edges = Vec::new();
            let mut cur = y;
            while cur != x {
                let p = prev[&cur];
                edges.push((p, cur));
                cur = p;
            }
            edges.reverse();
            return Some(edges);
        }
        for &n in adj.get(&c).into_iter().flatten() {
            if seen.insert(n) {
                prev.insert(n, c);
                queue.push_back(n);
            }
        }
    }
    None
}

/// Reflexive-transitive closure over the conditions of `mode` (including `X`).
pub fn closure(mode: Mode) -> BTreeSet<(Condition, Condition)> {
    let adj = adjacency(mode);
    let starred = mode.starred();
    let all: Vec<Condition> = (1..=CX_INDEX).map(|i| Condition { index: i, starred }).collect();
    let mut out = BTreeSet::new();
    for &x in &all {
        for &y in &all {
            if path(&adj, x, y).is_some() {
                out.insert((x, y));
            }
        }
    }
    out
}

fn edge_strings(edges: &[(Condition, Condition)]) -> Vec<String> {
    edges.iter().map(|(a, b)| format!("{a}->{b}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ImplicationVerdict {
    Proved {
        path: Vec<String>,
    },
    /// `example` exhibits `base.0` without `base.1`, while `base.0 ⇒* x`
    /// and `y ⇒* base.1`.
    Refuted {
        example: String,
        base: (Condition, Condition),
        from_path: Vec<String>,
        to_path: Vec<String>,
    },
    Undecided,
}

impl ImplicationVerdict {
    pub fn is_decided(&self) -> bool {
        !matches!(self, ImplicationVerdict::Undecided)
    }

    pub fn short(&self) -> &'static str {
        match self {
            ImplicationVerdict::Proved { .. } => "proved",
            ImplicationVerdict::Refuted { .. } => "refuted",
            ImplicationVerdict::Undecided => "undecided",
        }
    }
}

fn check_mode(c: Condition, mode: Mode) -> Result<(), ConditionError> {
    if c.starred != mode.starred() {
        return Err(ConditionError::ModeMismatch { condition: c, mode });
    }
    Ok(())
}

/// Decides `x ⇒ y` from the lattice and the registry's base non-implications.
pub fn implies(x: Condition, y: Condition, mode: Mode, registry: &Registry) -> Result<ImplicationVerdict, ConditionError> {
    check_mode(x, mode)?;
    check_mode(y, mode)?;
    let adj = adjacency(mode);
    if let Some(p) = path(&adj, x, y) {
        return Ok(ImplicationVerdict::Proved { path: edge_strings(&p) });
    }
    for entry in registry.entries_for(mode) {
        for (a, b) in entry.base_pairs() {
            let (a, b) = (a.with_star(mode.starred()), b.with_star(mode.starred()));
            if let (Some(from), Some(to)) = (path(&adj, a, x), path(&adj, y, b)) {
                return Ok(ImplicationVerdict::Refuted {
                    example: entry.id.clone(),
                    base: (a, b),
                    from_path: edge_strings(&from),
                    to_path: edge_strings(&to),
                });
            }
        }
    }
    Ok(ImplicationVerdict::Undecided)
}

/// Verdicts for all ordered pairs of `1..9` in `mode` (diagonal included).
pub fn matrix(mode: Mode, registry: &Registry) -> Vec<Vec<ImplicationVerdict>> {
    let conds = Condition::nine(mode.starred());
    conds
        .iter()
        .map(|&x| {
            conds.iter().map(|&y| implies(x, y, mode, registry).expect("mode-matched conditions")).collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub mode: Mode,
    pub pairs: usize,
    pub proved: usize,
    pub refuted: usize,
    pub undecided: Vec<(Condition, Condition)>,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        self.undecided.is_empty()
    }
}

/// Classifies every ordered pair of distinct conditions among `1..9`.
pub fn completeness_check(mode: Mode, registry: &Registry) -> CompletenessReport {
    let conds = Condition::nine(mode.starred());
    let mut report = CompletenessReport { mode, pairs: 0, proved: 0, refuted: 0, undecided: Vec::new() };
    for &x in &conds {
        for &y in conds.iter().filter(|&&y| y != x) {
            report.pairs += 1;
            match implies(x, y, mode, registry).expect("mode-matched conditions") {
                ImplicationVerdict::Proved { .. } => report.proved += 1,
                ImplicationVerdict::Refuted { .. } => report.refuted += 1,
                ImplicationVerdict::Undecided => report.undecided.push((x, y)),
            }
        }
    }
    report
}

/// Base pairs contradicting the closure: `(example, A, B)` with `A ⇒* B`.
/// Empty for a sound registry.
pub fn consistency_violations(mode: Mode, registry: &Registry) -> Vec<(String, Condition, Condition)> {
    let closed = closure(mode);
    let mut out = Vec::new();
    for entry in registry.entries_for(mode) {
        for (a, b) in entry.base_pairs() {
            let (a, b) = (a.with_star(mode.starred()), b.with_star(mode.starred()));
            if closed.contains(&(a, b)) {
                out.push((entry.id.clone(), a, b));
            }
        }
    }
    out
}
