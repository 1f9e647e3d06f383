use super::*;

fn failing(rep: &Report) -> Vec<String> {
    rep.problems().iter().map(|c| c.name.clone()).collect()
}

#[test]
fn twistor_is_valid() {
    let ax = build_axb(3, 1);
    let rep = axb_twistor_report(&ax);
    assert!(rep.passed(), "{rep}");
}

#[test]
fn x1_series_match_display_and_x2_series_match_expansion() {
    let ax = build_axb(3, 1);
    let rep = axb_source_target_report(&ax);
    assert_eq!(failing(&rep), vec!["display.s_F(x2)", "display.t_F(x2)"]);
    let w = rep.get("display.s_F(x2)").unwrap().witness.clone().unwrap();
    assert!(w.starts_with("at h^1"), "{w}");
}

#[test]
fn relation_suite_passes() {
    let ax = build_axb(3, 3);
    let rep = axb_relation_suite(&ax.ctx);
    assert!(rep.passed(), "{rep}");
    assert!(rep.get("left.relation.[ďe1,ďe2]=-ďe1").is_some());
    assert!(rep.get("right.relation.[e1,e2]=-h*e1").is_some());
    assert_eq!(rep.checks.iter().filter(|c| c.name.contains(".relation.[")).count(), 12);
}

#[test]
fn relation_suite_detects_wrong_sign() {
    let ax = build_axb(2, 2);
    let ctx = &ax.ctx;
    let rel = (G::D(0), G::D(1), Some((1, 0, G::D(0))));
    let v = vee_build(ctx, Side::Left).unwrap();
    assert!(vee_relation_defect(&v, &rel).is_some());
    assert_eq!(vee_relation_defect(&v, &displayed_relations(Side::Left)[0]), None);
}

#[test]
fn phi_transports_everything() {
    let ax = build_axb(3, 3);
    let rep = axb_iso_phi(&ax.ctx);
    assert!(rep.passed(), "{rep}");
    assert_eq!(rep.checks.iter().filter(|c| c.name.starts_with("phi.relation")).count(), 6);
}

#[test]
fn hprime_witnesses() {
    let ax = build_axb(3, 1);
    let rep = axb_hprime_report(&ax.dfa, 3);
    assert!(rep.passed(), "{rep}");
}

#[test]
fn example_report_fails_only_on_displayed_x2_series() {
    let rep = axb_example_report(2, 2, 2);
    assert_eq!(failing(&rep), vec!["source_target.display.s_F(x2)", "source_target.display.t_F(x2)"]);
}

#[test]
fn preset_spec_is_derivations() {
    let ax = build_axb(1, 1);
    assert_eq!(ax.spec, LieRinehartSpec::derivations(2));
    assert_eq!(ax.ctx.order(), 1);
}
