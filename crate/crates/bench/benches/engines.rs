use criterion::{black_box, criterion_group, criterion_main, Criterion};

use adlab::brauer::{adequacy, feasibility_solve, FeasibilitySpec};
use adlab::conditions::{build_certificate, matrix, verify_certificate, CertificateParams, Mode, Registry};
use adlab::groups::{build_group, frattini_quotient_rank, metacyclic_presentations, FiniteGroup};
use adlab::liedahl::liedahl_check;
use adlab::numberfields::AbelianNumberField;

fn group(spec: &str) -> FiniteGroup {
    build_group(&spec.parse().unwrap()).unwrap()
}

fn groups(c: &mut Criterion) {
    let mut g = c.benchmark_group("groups");
    g.sample_size(20);
    for spec in ["heis:3", "double:3", "wreath:5"] {
        let grp = group(spec);
        g.bench_function(format!("frattini/{spec}"), |b| b.iter(|| frattini_quotient_rank(black_box(&grp)).unwrap()));
    }
    let meta = group("meta:5:25:0:6");
    g.bench_function("metacyclic/meta:5:25:0:6", |b| b.iter(|| metacyclic_presentations(black_box(&meta))));
    g.bench_function("build/double:5", |b| b.iter(|| group(black_box("double:5"))));
    g.finish();
}

fn fields(c: &mut Criterion) {
    let meta = group("meta:5:25:0:6");
    let k: AbelianNumberField = "Q(zeta:100)".parse().unwrap();
    c.bench_function("liedahl/meta:5:25:0:6 over Q(zeta:100)", |b| b.iter(|| liedahl_check(&meta, black_box(&k))));
    let comp: AbelianNumberField = "Q(i)*Q(sqrt:5)".parse().unwrap();
    c.bench_function("splitting/compositum at 5", |b| b.iter(|| comp.splitting(black_box(5)).unwrap()));
}

fn brauer(c: &mut Criterion) {
    let spec: FeasibilitySpec = serde_json::from_value(serde_json::json!({
        "field": "M",
        "slots": [
            {"slot": "nu1", "max_order": 125, "exact_order": 125},
            {"slot": "nu2", "max_order": 125, "exact_order": 125},
            {"slot": "u1", "max_order": 25},
            {"slot": "u2", "max_order": 25},
        ],
        "equal_groups": [["nu1", "nu2"]],
    }))
    .unwrap();
    c.bench_function("solve/infeasible p=5", |b| b.iter(|| feasibility_solve(black_box(&spec)).unwrap()));
    c.bench_function("adequacy/N=27", |b| b.iter(|| adequacy(black_box(&[27, 9, 27, 3]), 27)));
}

fn conditions(c: &mut Criterion) {
    let reg = Registry::standard();
    c.bench_function("conditions/matrix general", |b| b.iter(|| matrix(Mode::General, black_box(&reg))));
    let mut g = c.benchmark_group("certificates");
    g.sample_size(10);
    for id in ["ex4", "ex5"] {
        let cert = build_certificate(id, &CertificateParams { p: Some(3), ..CertificateParams::default() }).unwrap();
        g.bench_function(format!("verify/{id} p=3"), |b| b.iter(|| verify_certificate(black_box(&cert)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, groups, fields, brauer, conditions);
criterion_main!(benches);
