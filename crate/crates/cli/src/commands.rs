use std::collections::BTreeMap;
use std::fmt::{Debug, Display};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use adlab::brauer::{
    adequacy, constant_on_fibers, feasibility_solve, restrict, restriction_preimage, schacher_check, splits,
    tame_splits, BrauerClass, FeasibilitySpec, LocalExtensionData,
};
use adlab::conditions::{
    build_certificate, closure, completeness_check, implies, matrix, verify_certificate, Certificate,
    CertificateParams, Condition, Mode, Registry, EXAMPLE_IDS,
};
use adlab::groups::{
    abelian_invariants, build_group, frattini_quotient_rank, metacyclic_presentations, proper_quotients_abelian,
    sylow_subgroups, FiniteGroup, GroupSpec, Subgroup, SylowStructure,
};
use adlab::liedahl::{liedahl_check, tame_admissibility_verdict};
use adlab::localfields::{completion, max_abelian_p_rank, realizable, LocalFieldDatum};
use adlab::numberfields::{relative_splitting, sigma_fixes, AbelianNumberField, PrimeSlot, RelativeExtensionData};

#[derive(Parser, Debug)]
#[command(name = "adlab", version, about = "Crossed-product admissibility toolkit")]
pub struct Cli {
    /// JSON output (the only format; accepted for scripts).
    #[arg(long, global = true)]
    json: bool,
    /// Lattice: general, galois-mk or tame.
    #[arg(long, global = true, default_value = "general")]
    mode: String,
    /// Certificate file (one certificate or an array) replacing the built-in registry.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite p-group engine.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Abelian number fields.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Completions and local realizability.
    #[command(subcommand)]
    Local(LocalCmd),
    /// Hasse-invariant calculus.
    #[command(subcommand)]
    Brauer(BrauerCmd),
    /// Liedahl's condition.
    #[command(subcommand)]
    Liedahl(LiedahlCmd),
    /// Implication lattice.
    #[command(subcommand)]
    Conditions(ConditionsCmd),
    /// Counterexample certificates.
    #[command(subcommand)]
    Example(ExampleCmd),
}

#[derive(Args, Debug)]
struct SpecArg {
    /// Group spec, e.g. heis:3, wreath:5, meta:5:25:0:6.
    #[arg(long)]
    spec: String,
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    Info(SpecArg),
    Frattini(SpecArg),
    Metacyclic(SpecArg),
    Quotients(SpecArg),
    Sylow(SpecArg),
}

#[derive(Subcommand, Debug)]
enum FieldCmd {
    Parse {
        #[arg(long)]
        field: String,
    },
    Splitting {
        #[arg(long)]
        field: String,
        #[arg(long)]
        prime: u64,
    },
    /// Intersection with another field, or with `Q(μ_n)` via `--cyclotomic`.
    Intersect {
        #[arg(long)]
        field: String,
        #[arg(long, conflicts_with = "cyclotomic", required_unless_present = "cyclotomic")]
        with: Option<String>,
        #[arg(long)]
        cyclotomic: Option<u64>,
    },
    Sigma {
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        field: String,
    },
    Relative {
        #[arg(long)]
        base: String,
        #[arg(long)]
        top: String,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
}

#[derive(Args, Debug)]
struct DatumArgs {
    /// Local datum as JSON {p,d,e,f,s}, inline or @file.
    #[arg(long, conflicts_with_all = ["p", "e", "f", "s"])]
    datum: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    e: u64,
    #[arg(long, default_value_t = 1)]
    f: u64,
    #[arg(long)]
    s: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum LocalCmd {
    Completion {
        #[arg(long)]
        field: String,
        #[arg(long)]
        prime: u64,
    },
    Rank(DatumArgs),
    Realizable {
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        datum: DatumArgs,
    },
}

#[derive(Subcommand, Debug)]
enum BrauerCmd {
    /// Validate a class given as JSON {base_field, invariants:[{slot,num,den}]}.
    Make {
        #[arg(long)]
        class: String,
    },
    Index {
        #[arg(long)]
        class: String,
    },
    Restrict {
        #[arg(long)]
        class: String,
        /// Relative data JSON {galois, records}.
        #[arg(long)]
        rel: String,
        #[arg(long, default_value = "M")]
        top: String,
    },
    /// Local degrees as JSON {slot: degree}; with `--tame`, {slot: {e,f,p}}.
    Splits {
        #[arg(long)]
        class: String,
        #[arg(long)]
        degrees: String,
        #[arg(long)]
        tame: bool,
    },
    Adequate {
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u64>,
        #[arg(long)]
        n: u64,
    },
    /// Decomposition groups as `;`-separated lists of generator words.
    Schacher {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        subgroups: String,
    },
    Fibers {
        #[arg(long)]
        class: String,
        #[arg(long)]
        rel: String,
    },
    Solve {
        /// FeasibilitySpec JSON.
        #[arg(long)]
        spec: String,
    },
    Preimage {
        #[arg(long)]
        class: String,
        #[arg(long)]
        rel: String,
        /// Auxiliary base slots allowed to carry invariants.
        #[arg(long, value_delimiter = ',')]
        pool: Vec<String>,
        #[arg(long, default_value = "K")]
        base: String,
    },
}

#[derive(Subcommand, Debug)]
enum LiedahlCmd {
    Check {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        field: String,
    },
    Tame {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        field: String,
    },
}

#[derive(Subcommand, Debug)]
enum ConditionsCmd {
    Closure,
    Implies {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    Matrix,
    Complete {
        /// Drop one example from the registry first.
        #[arg(long)]
        without: Option<String>,
    },
}

#[derive(Args, Debug)]
struct ExampleArgs {
    /// Example id: nogal, ex1..ex5, cyclic.
    #[arg(long)]
    id: String,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    degree: Option<u64>,
}

impl ExampleArgs {
    fn params(&self) -> CertificateParams {
        CertificateParams { p: self.p, q: self.q, n: self.n, degree: self.degree }
    }
}

#[derive(Subcommand, Debug)]
enum ExampleCmd {
    List,
    /// Replay a built-in certificate, or one read with `--file`.
    Verify {
        #[arg(long, required_unless_present = "file")]
        id: Option<String>,
        #[arg(long, conflicts_with = "id")]
        file: Option<PathBuf>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        degree: Option<u64>,
    },
    Export(ExampleArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { error: &'static str, kind: String, message: String, payload: Option<Value> },
}

fn domain<E: Debug + Display>(error: &'static str) -> impl Fn(E) -> CliError {
    move |e| {
        let debug = format!("{e:?}");
        let kind = debug.split(|c: char| !c.is_alphanumeric() && c != '_').next().unwrap_or("Error").to_string();
        CliError::Domain { error, kind, message: e.to_string(), payload: None }
    }
}

/// Inline text, or the contents of a file when prefixed with `@`.
fn read_input(raw: &str) -> Result<String, CliError> {
    match raw.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}"))),
        None => Ok(raw.to_string()),
    }
}

fn json_input(raw: &str) -> Result<Value, CliError> {
    serde_json::from_str(&read_input(raw)?).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))
}

fn typed_input<T: serde::de::DeserializeOwned>(raw: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_value(json_input(raw)?).map_err(|e| CliError::Usage(format!("invalid {what}: {e}")))
}

fn group(spec: &str) -> Result<(GroupSpec, FiniteGroup), CliError> {
    let spec: GroupSpec = spec.parse().map_err(domain("GroupError"))?;
    let g = build_group(&spec).map_err(domain("GroupError"))?;
    Ok((spec, g))
}

fn field(s: &str) -> Result<AbelianNumberField, CliError> {
    s.parse().map_err(domain("FieldError"))
}

fn class(raw: &str) -> Result<BrauerClass, CliError> {
    BrauerClass::from_json(&json_input(raw)?).map_err(domain("BrauerError"))
}

fn relative(raw: &str) -> Result<RelativeExtensionData, CliError> {
    let rel: RelativeExtensionData = typed_input(raw, "relative data")?;
    rel.validate().map_err(domain("FieldError"))?;
    Ok(rel)
}

fn datum(args: &DatumArgs) -> Result<LocalFieldDatum, CliError> {
    let d = match (&args.datum, args.p) {
        (Some(raw), _) => typed_input::<LocalFieldDatum>(raw, "local datum")?,
        (None, Some(p)) => LocalFieldDatum { p, d: args.e * args.f, e: args.e, f: args.f, s: args.s.unwrap_or(u32::from(p == 2)) },
        (None, None) => return Err(CliError::Usage("give --datum or --p".into())),
    };
    d.validate().map_err(domain("LocalError"))?;
    Ok(d)
}

fn condition(s: &str) -> Result<Condition, CliError> {
    s.parse().map_err(domain("ConditionError"))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn run(cli: &Cli) -> Result<Value, CliError> {
    let mode: Mode = cli.mode.parse().map_err(|_| CliError::Usage(format!("unknown mode `{}`", cli.mode)))?;
    let registry = match &cli.registry {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Registry::from_json(&text).map_err(domain("ConditionError"))?
        }
        None => Registry::standard(),
    };
    match &cli.command {
        Command::Group(cmd) => run_group(cmd),
        Command::Field(cmd) => run_field(cmd),
        Command::Local(cmd) => run_local(cmd),
        Command::Brauer(cmd) => run_brauer(cmd),
        Command::Liedahl(cmd) => run_liedahl(cmd),
        Command::Conditions(cmd) => run_conditions(cmd, mode, &registry),
        Command::Example(cmd) => run_example(cmd),
    }
}

fn run_group(cmd: &GroupCmd) -> Result<Value, CliError> {
    Ok(match cmd {
        GroupCmd::Info(a) => {
            let (spec, g) = group(&a.spec)?;
            json!({
                "spec": spec.to_string(),
                "order": g.order(),
                "abelian": g.is_abelian(),
                "prime": g.p_group_prime(),
                "generators": g.generators().len(),
            })
        }
        GroupCmd::Frattini(a) => to_value(&frattini_quotient_rank(&group(&a.spec)?.1).map_err(domain("GroupError"))?),
        GroupCmd::Metacyclic(a) => {
            let ps = metacyclic_presentations(&group(&a.spec)?.1);
            json!({"count": ps.len(), "presentations": ps})
        }
        GroupCmd::Quotients(a) => {
            let g = group(&a.spec)?.1;
            json!({
                "proper_quotients_abelian": proper_quotients_abelian(&g),
                "abelian_invariants": abelian_invariants(&g),
            })
        }
        GroupCmd::Sylow(a) => match sylow_subgroups(&group(&a.spec)?.1) {
            SylowStructure::Nilpotent(s) => json!({
                "nilpotent": true,
                "sylow": s.iter().map(|(p, h)| json!({"prime": p, "order": h.order()})).collect::<Vec<_>>(),
            }),
            SylowStructure::NotNilpotent => json!({"nilpotent": false}),
        },
    })
}

fn run_field(cmd: &FieldCmd) -> Result<Value, CliError> {
    Ok(match cmd {
        FieldCmd::Parse { field: f } => {
            let k = field(f)?;
            let mut v = k.to_json();
            v["name"] = json!(k.to_string());
            v
        }
        FieldCmd::Splitting { field: f, prime } => {
            let s = field(f)?.splitting(*prime).map_err(domain("FieldError"))?;
            json!({"e": s.e, "f": s.f, "g": s.g})
        }
        FieldCmd::Intersect { field: f, with, cyclotomic } => {
            let k = field(f)?;
            match (with, cyclotomic) {
                (Some(w), _) => k.intersection(&field(w)?).to_json(),
                (None, Some(n)) => k.intersect_with_cyclotomic(*n).to_json(),
                (None, None) => return Err(CliError::Usage("give --with or --cyclotomic".into())),
            }
        }
        FieldCmd::Sigma { t, n, field: f } => {
            json!({"fixes": sigma_fixes(*t, *n, &field(f)?).map_err(domain("FieldError"))?})
        }
        FieldCmd::Relative { base, top, primes } => {
            to_value(&relative_splitting(&field(base)?, &field(top)?, primes).map_err(domain("FieldError"))?)
        }
    })
}

fn run_local(cmd: &LocalCmd) -> Result<Value, CliError> {
    Ok(match cmd {
        LocalCmd::Completion { field: f, prime } => to_value(&completion(&field(f)?, *prime).map_err(domain("LocalError"))?),
        LocalCmd::Rank(args) => {
            let d = datum(args)?;
            json!({"datum": d, "rank": max_abelian_p_rank(&d)})
        }
        LocalCmd::Realizable { spec, datum: args } => {
            let g = group(spec)?.1;
            to_value(&realizable(&g, &datum(args)?).map_err(domain("LocalError"))?)
        }
    })
}

fn parse_slot(s: &str) -> Result<PrimeSlot, CliError> {
    s.parse().map_err(domain("FieldError"))
}

fn run_brauer(cmd: &BrauerCmd) -> Result<Value, CliError> {
    Ok(match cmd {
        BrauerCmd::Make { class: c } => {
            let d = class(c)?;
            json!({"class": d.to_json(), "index": d.index()})
        }
        BrauerCmd::Index { class: c } => json!({"index": class(c)?.index()}),
        BrauerCmd::Restrict { class: c, rel, top } => {
            let d = restrict(&class(c)?, &relative(rel)?, top.clone()).map_err(domain("BrauerError"))?;
            json!({"class": d.to_json(), "index": d.index()})
        }
        BrauerCmd::Splits { class: c, degrees, tame } => {
            let d = class(c)?;
            let result = if *tame {
                let raw: BTreeMap<String, LocalExtensionData> = typed_input(degrees, "tame local data")?;
                let local = raw
                    .into_iter()
                    .map(|(k, v)| Ok((parse_slot(&k)?, v)))
                    .collect::<Result<BTreeMap<_, _>, CliError>>()?;
                tame_splits(&d, &local)
            } else {
                let raw: BTreeMap<String, u64> = typed_input(degrees, "local degrees")?;
                let local = raw
                    .into_iter()
                    .map(|(k, v)| Ok((parse_slot(&k)?, v)))
                    .collect::<Result<BTreeMap<_, _>, CliError>>()?;
                splits(&d, &local)
            };
            json!({"splits": result.map_err(domain("BrauerError"))?})
        }
        BrauerCmd::Adequate { degrees, n } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be positive".into()));
            }
            json!({"adequate": adequacy(degrees, *n)})
        }
        BrauerCmd::Schacher { spec, subgroups } => {
            let g = group(spec)?.1;
            let mut subs = Vec::new();
            for part in subgroups.split(';') {
                let mut gens = Vec::new();
                for w in part.split(',').map(str::trim).filter(|w| !w.is_empty()) {
                    gens.push(g.parse_word(w).map_err(domain("GroupError"))?);
                }
                subs.push(Subgroup::generated(&g, &gens));
            }
            json!({
                "holds": schacher_check(&g, &subs).map_err(domain("BrauerError"))?,
                "subgroup_orders": subs.iter().map(Subgroup::order).collect::<Vec<_>>(),
            })
        }
        BrauerCmd::Fibers { class: c, rel } => {
            json!({"constant": constant_on_fibers(&class(c)?, &relative(rel)?).map_err(domain("BrauerError"))?})
        }
        BrauerCmd::Solve { spec } => {
            let spec: FeasibilitySpec = typed_input(spec, "feasibility spec")?;
            let witness = feasibility_solve(&spec).map_err(domain("BrauerError"))?;
            json!({"feasible": witness.is_some(), "witness": witness.map(|d| d.to_json())})
        }
        BrauerCmd::Preimage { class: c, rel, pool, base } => {
            let pool = pool.iter().map(|s| parse_slot(s)).collect::<Result<Vec<_>, _>>()?;
            let found = restriction_preimage(&class(c)?, &relative(rel)?, &pool, base.clone())
                .map_err(domain("BrauerError"))?;
            json!({"found": found.is_some(), "preimage": found.map(|d| d.to_json())})
        }
    })
}

fn run_liedahl(cmd: &LiedahlCmd) -> Result<Value, CliError> {
    Ok(match cmd {
        LiedahlCmd::Check { spec, field: f } => {
            to_value(&liedahl_check(&group(spec)?.1, &field(f)?).map_err(domain("FieldError"))?)
        }
        LiedahlCmd::Tame { spec, field: f } => {
            to_value(&tame_admissibility_verdict(&group(spec)?.1, &field(f)?).map_err(domain("FieldError"))?)
        }
    })
}

fn run_conditions(cmd: &ConditionsCmd, mode: Mode, registry: &Registry) -> Result<Value, CliError> {
    Ok(match cmd {
        ConditionsCmd::Closure => {
            let pairs: Vec<String> = closure(mode).into_iter().map(|(a, b)| format!("{a}->{b}")).collect();
            json!({"mode": mode, "count": pairs.len(), "pairs": pairs})
        }
        ConditionsCmd::Implies { from, to } => {
            to_value(&implies(condition(from)?, condition(to)?, mode, registry).map_err(domain("ConditionError"))?)
        }
        ConditionsCmd::Matrix => {
            let conds = Condition::nine(mode == Mode::Tame);
            let m = matrix(mode, registry);
            let table: Vec<Vec<&str>> = m.iter().map(|row| row.iter().map(|v| v.short()).collect()).collect();
            let undecided = m.iter().flatten().filter(|v| !v.is_decided()).count();
            json!({
                "mode": mode,
                "conditions": conds.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "table": table,
                "undecided": undecided,
                "verdicts": m,
            })
        }
        ConditionsCmd::Complete { without } => {
            let reg = match without {
                Some(id) => registry.without(id),
                None => registry.clone(),
            };
            let report = completeness_check(mode, &reg);
            let mut v = to_value(&report);
            v["complete"] = json!(report.is_complete());
            v
        }
    })
}

fn run_example(cmd: &ExampleCmd) -> Result<Value, CliError> {
    match cmd {
        ExampleCmd::List => {
            let mut out = Vec::new();
            for id in EXAMPLE_IDS {
                let c = build_certificate(id, &CertificateParams::default()).map_err(domain("ConditionError"))?;
                out.push(json!({
                    "id": id,
                    "description": c.description,
                    "params": c.params,
                    "holds": c.holds,
                    "fails": c.fails,
                }));
            }
            Ok(json!(out))
        }
        ExampleCmd::Verify { id, file, p, q, n, degree } => {
            let cert: Certificate = match (id, file) {
                (_, Some(path)) => {
                    let text =
                        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid certificate: {e}")))?
                }
                (Some(id), None) => {
                    let params = CertificateParams { p: *p, q: *q, n: *n, degree: *degree };
                    build_certificate(id, &params).map_err(domain("ConditionError"))?
                }
                (None, None) => return Err(CliError::Usage("give --id or --file".into())),
            };
            let report = verify_certificate(&cert).map_err(domain("ConditionError"))?;
            let mut v = to_value(&report);
            v["status"] = json!(report.status());
            if report.passed {
                Ok(v)
            } else {
                Err(CliError::Domain {
                    error: "ConditionError",
                    kind: "CertificateFailed".into(),
                    message: format!("certificate {} has failing CHECKED steps", report.id),
                    payload: Some(v),
                })
            }
        }
        ExampleCmd::Export(args) => {
            Ok(to_value(&build_certificate(&args.id, &args.params()).map_err(domain("ConditionError"))?))
        }
    }
}
