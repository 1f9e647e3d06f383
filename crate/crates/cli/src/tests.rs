use super::*;
use lrbi::lie_rinehart::jacobi_violating_spec;

const AXB: &str = include_str!("../../../specs/axb.spec");

fn params(n: usize, d: usize) -> Params {
    Params { truncation: Truncation { h_order: n, pbw_degree: 2, jet_degree: d, n_max: n }, seed: 0 }
}

fn axb() -> EngineSpec {
    EngineSpec::parse(AXB).unwrap()
}

#[test]
fn validate_axb_passes() {
    let rep = run_command(&axb(), Command::Validate, &params(1, 2));
    assert!(rep.passed(), "{rep}");
}

#[test]
fn validate_jacobi_violation_fails_with_witness() {
    let mut spec = axb();
    spec.spec = jacobi_violating_spec();
    let rep = run_command(&spec, Command::Validate, &params(1, 2));
    assert_eq!(rep.verdict(), Status::Fail);
    assert!(rep.get("lr.jacobi").is_some_and(|c| c.witness.is_some()));
}

#[test]
fn twist_axb_passes() {
    let rep = run_command(&axb(), Command::Twist, &params(2, 2));
    assert!(rep.passed(), "{rep}");
    assert!(rep.get("twistor.cocycle").is_some());
}

#[test]
fn corrupted_twistor_fails_cocycle() {
    let text = AXB
        .replace("form = exp", "form = orders")
        .replace("weight = 1/2\n", "")
        .replace("r = [x1*d1 | d2] - [d2 | x1*d1]", "order 1 = [x1*d1 | d2]\norder 2 = [x1 | d1*d2]");
    let rep = run_command(&EngineSpec::parse(&text).unwrap(), Command::Twist, &params(2, 2));
    assert_eq!(rep.verdict(), Status::Fail);
    assert!(rep.get("twistor.cocycle").is_some_and(|c| c.status == Status::Fail && c.witness.is_some()), "{rep}");
}

#[test]
fn dualize_dumps_relations() {
    let rep = run_command(&axb(), Command::Dualize(Side::Left), &params(2, 2));
    assert!(rep.passed(), "{rep}");
    let rel = rep.checks.iter().find(|c| c.name.starts_with("left.vee.relation.")).unwrap();
    assert!(rel.value.is_some());
}

#[test]
fn drinfeld_functors_on_axb() {
    for f in [Functor::Vee, Functor::Prime, Functor::Roundtrip] {
        let rep = run_command(&axb(), Command::Drinfeld(f, Side::Left), &params(2, 2));
        assert!(rep.passed(), "{f:?}: {rep}");
    }
}

#[test]
fn semiclassical_on_axb() {
    let rep = run_command(&axb(), Command::Semiclassical, &params(2, 2));
    assert!(rep.passed(), "{rep}");
}

#[test]
fn checks_are_sorted_and_jsonl_is_stable() {
    let p = params(2, 2);
    let rep = run_command(&axb(), Command::Dualize(Side::Right), &p);
    let names: Vec<_> = rep.checks.iter().map(|c| c.name.clone()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    let h = header(Command::Dualize(Side::Right), "axb.spec", &p);
    let a = render_jsonl(&h, &rep);
    let b = render_jsonl(&h, &run_command(&axb(), Command::Dualize(Side::Right), &p));
    assert_eq!(a, b);
    let first: Value = serde_json::from_str(a.lines().next().unwrap()).unwrap();
    assert_eq!(first["truncation"]["h_order"], 2);
    assert_eq!(first["side"], "right");
    let last: Value = serde_json::from_str(a.lines().last().unwrap()).unwrap();
    assert_eq!(last["record"], "verdict");
}

#[test]
fn exit_codes() {
    assert_eq!(exit_code(Status::Pass), 0);
    assert_eq!(exit_code(Status::Fail), 1);
    assert_eq!(exit_code(Status::Indeterminate), 2);
}
