use super::*;
use crate::axb::build_axb;
use crate::deform::twistor_validate;
use crate::lie_rinehart::random_valid_spec;

const AXB: &str = include_str!("../../../../specs/axb.spec");

fn parse_err(text: &str) -> (usize, usize) {
    match EngineSpec::parse(text) {
        Err(Error::Parse { line, col, .. }) => (line, col),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn axb_file_matches_builder() {
    let es = EngineSpec::parse(AXB).unwrap();
    let axb = build_axb(4, 4);
    assert_eq!(es.spec, axb.spec);
    assert_eq!(es.build_twistor(&axb.env, 4).unwrap().f, axb.twistor.f);
    assert_eq!(es.truncation, Truncation { h_order: 4, pbw_degree: 2, jet_degree: 4, n_max: 4 });
}

#[test]
fn orders_form_matches_exp_form() {
    let es = EngineSpec::parse(AXB).unwrap();
    let env = std::sync::Arc::new(Envelope::new(es.spec.clone()));
    // exp(h/2 r) = 1 + h/2 r + h²/8 r² + …; spell out the first order only
    let text = AXB
        .replace("form = exp", "form = orders")
        .replace("weight = 1/2\n", "")
        .replace("r = [x1*d1 | d2] - [d2 | x1*d1]", "order 1 = 1/2*[x1*d1 | d2] - 1/2*[d2 | x1*d1]");
    let per = EngineSpec::parse(&text).unwrap();
    let a = es.build_twistor(&env, 1).unwrap();
    let b = per.build_twistor(&env, 1).unwrap();
    assert_eq!(a.f, b.f);
    assert!(twistor_validate(env.clone(), &b).passed());
}

#[test]
fn empty_file_is_a_parse_error() {
    assert_eq!(parse_err(""), (1, 1));
    assert_eq!(parse_err("# only a comment\n\n"), (1, 1));
}

#[test]
fn errors_carry_positions() {
    assert_eq!(parse_err("[base]\nvars = x1\n[nope]\n"), (3, 2));
    assert_eq!(parse_err("vars = x1\n"), (1, 1));
    assert_eq!(parse_err("[base]\nvars = x1, x3\n"), (2, 8));
    // bad polynomial inside an anchor list: column of the offending token
    let (line, col) = parse_err("[base]\nvars = x1\n[algebra]\nrank = 1\nanchor 1 = x1 +* 2\n");
    assert_eq!(line, 5);
    assert!(col >= 12, "col {col}");
    let (line, _) = parse_err(&AXB.replace("[x1*d1 | d2]", "[x1*q | d2]"));
    assert_eq!(line, AXB.lines().position(|l| l.starts_with("r =")).unwrap() + 1);
}

#[test]
fn semantic_errors() {
    let base = "[base]\nvars = x1\n[algebra]\nrank = 2\n";
    assert!(matches!(EngineSpec::parse(&format!("{base}bracket 1 3 = 0, 0\n")), Err(Error::Semantic(_))));
    assert!(matches!(EngineSpec::parse(&format!("{base}anchor 1 = 1, 1\n")), Err(Error::Semantic(_))));
    assert!(matches!(EngineSpec::parse(&format!("{base}names = a\n")), Err(Error::Semantic(_))));
    assert!(matches!(EngineSpec::parse(&format!("{base}names = a, x2\n")), Err(Error::Parse { .. })));
    assert!(matches!(EngineSpec::parse(&format!("{base}[truncation]\nh_order = 0\n")), Err(Error::Semantic(_))));
    assert!(matches!(EngineSpec::parse(&format!("{base}[twistor]\nweight = 1\n")), Err(Error::Semantic(_))));
}

#[test]
fn reversed_bracket_indices_negate() {
    let a = EngineSpec::parse("[base]\nvars = x1\n[algebra]\nrank = 2\nbracket 1 2 = x1, 1\n").unwrap();
    let b = EngineSpec::parse("[base]\nvars = x1\n[algebra]\nrank = 2\nbracket 2 1 = -x1, -1\n").unwrap();
    assert_eq!(a.spec, b.spec);
}

#[test]
fn elements_multiply_in_the_envelope() {
    let env = Envelope::new(random_valid_spec(0));
    let names = env.names().to_vec();
    let u = parse_element(&env, &format!("{} * x1 - x1*{}", names[0], names[0])).unwrap();
    assert_eq!(u, env.poly(&env.spec().anchor_on(0, &CPoly::var(env.p(), 0))));
    let sq = parse_element(&env, &format!("({} + 1)^2", names[1])).unwrap();
    let g = env.gen(1).add(&env.one());
    assert_eq!(sq, env.mul(&g, &g));
}

#[test]
fn sample_block() {
    let es = EngineSpec::parse(&AXB.replace("seed = 0", "seed = 7\nextra = x1*x2, x2^3")).unwrap();
    assert_eq!(es.sample.seed, 7);
    assert_eq!(es.sample.extra.len(), 2);
}

#[test]
fn zero_anchor_rank_two_is_valid() {
    let es = EngineSpec::parse("[base]\nvars = x1, x2\n[algebra]\nrank = 2\nbracket 1 2 = x1, 0\n").unwrap();
    assert!(es.spec.has_zero_anchor());
    assert!(crate::lie_rinehart::lr_validate(&es.spec).passed());
    assert!(es.twistor.is_none());
}
