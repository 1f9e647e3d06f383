//! Subcommand dispatch and report rendering for the `lrbi` binary.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use serde_json::{json, Value};

use lrbi::axb::axb_example_report;
use lrbi::deform::{deformed_axiom_suite, twistor_validate, Deformation};
use lrbi::drinfeld::{
    cobracket_report, duality_roundtrip_standard, hprime_basis, hprime_basis_defect, hprime_member,
    semiclassical_cobracket, semiclassical_consistency, vee_build, vee_semiclassical, VeeAlgebroid,
};
use lrbi::jets::{jet_axiom_suite, JetCtx, Side};
use lrbi::properties::{property_suite, SampleSize};
use lrbi::specfile::{EngineSpec, Truncation};
use lrbi::{Check, Envelope, Error, Report, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functor {
    Vee,
    Prime,
    Roundtrip,
}

impl Functor {
    pub fn name(self) -> &'static str {
        match self {
            Functor::Vee => "vee",
            Functor::Prime => "prime",
            Functor::Roundtrip => "roundtrip",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Twist,
    Dualize(Side),
    Drinfeld(Functor, Side),
    Semiclassical,
    ExampleAxb,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Twist => "twist",
            Command::Dualize(_) => "dualize",
            Command::Drinfeld(..) => "drinfeld",
            Command::Semiclassical => "semiclassical",
            Command::ExampleAxb => "example axb",
        }
    }
}

/// Effective parameters of a run: the spec's blocks overridden by flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub truncation: Truncation,
    pub seed: u64,
}

/// Process exit code for a verdict.
pub fn exit_code(s: Status) -> i32 {
    match s {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Indeterminate => 2,
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "computation aborted".into())
}

/// Run `f` and merge its report under `prefix`; errors and aborted
/// computations become a single indeterminate entry.
fn section(rep: &mut Report, prefix: &str, f: impl FnOnce() -> lrbi::Result<Report>) {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(r)) => rep.merge(prefix, r),
        Ok(Err(e)) => rep.indeterminate(prefix, e.to_string()),
        Err(p) => rep.indeterminate(prefix, format!("internal error: {}", panic_message(p))),
    }
}

fn deformation(spec: &EngineSpec, n: usize) -> lrbi::Result<(Arc<Envelope>, Arc<Deformation>)> {
    let env = Arc::new(Envelope::new(spec.spec.clone()));
    let tw = spec.build_twistor(&env, n)?;
    let dfa = Arc::new(Deformation::new(env.clone(), tw)?);
    Ok((env, dfa))
}

fn jet_ctx(spec: &EngineSpec, t: &Truncation) -> lrbi::Result<JetCtx> {
    let (_, dfa) = deformation(spec, t.h_order)?;
    Ok(JetCtx::new(dfa, t.jet_degree))
}

/// The relation table, coproducts and sources/targets of a `∨` presentation.
fn vee_dump(v: &VeeAlgebroid) -> Report {
    let mut rep = Report::new();
    for (name, rhs) in v.relation_strings() {
        rep.push(Check::new(format!("relation.{name}"), Status::Pass).with_value(rhs).at_order(v.n));
    }
    for (g, gen) in v.gens.iter().enumerate() {
        if let Some(c) = v.coproduct_string(g) {
            rep.push(Check::new(format!("coproduct.{}", gen.label), Status::Pass).with_value(c).at_order(v.n));
        }
    }
    for (kind, table) in [("source", &v.sources), ("target", &v.targets)] {
        for (i, l) in table.iter().enumerate() {
            if let Some(l) = l {
                rep.push(Check::new(format!("{kind}.x{}", i + 1), Status::Pass).with_value(v.linear_string(l)).at_order(v.n));
            }
        }
    }
    rep
}

/// `∨` on one side: integrality of the rescaled generators, the presentation
/// and its semiclassical Lie-Rinehart axioms.
fn vee_report(ctx: &JetCtx, side: Side) -> lrbi::Result<Report> {
    let mut rep = Report::new();
    match vee_build(ctx, side) {
        Ok(v) => {
            rep.push(Check::new("integral", Status::Pass).at_order(ctx.order()).at_degree(ctx.degree()));
            rep.merge("", vee_dump(&v));
            rep.merge("semiclassical", vee_semiclassical(&v).1);
        }
        Err(e @ Error::NonIntegral { .. }) => rep.fail("integral", e.to_string()),
        Err(e) => return Err(e),
    }
    Ok(rep)
}

fn prime_report(ctx: &JetCtx, side: Side, t: &Truncation) -> lrbi::Result<Report> {
    let dfa = ctx.dfa();
    let env = dfa.env();
    let n_max = t.n_max.min(dfa.order());
    let mut rep = Report::new();
    let mut member = |name: String, u, expect: bool| -> lrbi::Result<()> {
        let m = hprime_member(dfa, &u, n_max)?;
        let c = match (m.member(), expect) {
            (true, true) => Check::new(name, Status::Pass),
            (false, false) => Check::new(name, Status::Pass).with_value(format!("rejected at n = {}", m.failed_at.unwrap_or(0))),
            (true, false) => Check::new(name, Status::Fail).with_witness(format!("accepted up to n = {n_max}")),
            (false, true) => Check::new(name, Status::Fail)
                .with_witness(m.witness.unwrap_or_else(|| format!("rejected at n = {:?}", m.failed_at))),
        };
        rep.push(c.at_order(n_max));
        Ok(())
    };
    for i in 0..env.m() {
        let name = &env.names()[i];
        member(format!("member.h*{name}"), dfa.u_const(&env.gen(i)).shift(1), true)?;
        member(format!("member.{name}_rejected"), dfa.u_const(&env.gen(i)), false)?;
    }
    for v in 0..env.p() {
        let x = lrbi::CPoly::var(env.p(), v);
        member(format!("member.s(x{})", v + 1), dfa.source(&dfa.a_const(&x)), true)?;
    }
    let b = hprime_basis(ctx, side, t.pbw_degree)?;
    rep.record(format!("basis.{}", side.name()), hprime_basis_defect(ctx, &b)?);
    Ok(rep)
}

fn semiclassical_report(ctx: &JetCtx) -> lrbi::Result<Report> {
    let mut rep = semiclassical_consistency(ctx);
    let cb = semiclassical_cobracket(ctx.dfa())?;
    rep.merge("cobracket", cobracket_report(ctx.dfa(), &cb));
    Ok(rep)
}

/// Dispatch one subcommand. Every computational error is reported as an
/// indeterminate entry; the returned report is sorted by check name.
pub fn run_command(spec: &EngineSpec, cmd: Command, params: &Params) -> Report {
    let t = &params.truncation;
    let mut rep = Report::new();
    match cmd {
        Command::Validate => {
            let size = SampleSize {
                jet_degree: t.jet_degree,
                max_degree: spec.sample.max_degree,
                extra: spec.sample.extra.clone(),
                ..SampleSize::default()
            };
            section(&mut rep, "", || Ok(property_suite(&spec.spec, params.seed, &size)));
        }
        Command::Twist => {
            let env = Arc::new(Envelope::new(spec.spec.clone()));
            let mut twistor_ok = false;
            section(&mut rep, "twistor", || {
                let r = twistor_validate(env.clone(), &spec.build_twistor(&env, t.h_order)?);
                twistor_ok = r.passed();
                Ok(r)
            });
            if twistor_ok {
                section(&mut rep, "axioms", || Ok(deformed_axiom_suite(&deformation(spec, t.h_order)?.1, t.pbw_degree)));
            } else {
                rep.indeterminate("axioms", "skipped: the twistor did not validate");
            }
        }
        Command::Dualize(side) => {
            section(&mut rep, side.name(), || {
                let ctx = jet_ctx(spec, t)?;
                let mut r = jet_axiom_suite(&ctx, side);
                r.merge("vee", vee_report(&ctx, side)?);
                Ok(r)
            });
        }
        Command::Drinfeld(f, side) => {
            section(&mut rep, f.name(), || {
                let ctx = jet_ctx(spec, t)?;
                match f {
                    Functor::Vee => vee_report(&ctx, side),
                    Functor::Prime => prime_report(&ctx, side, t),
                    Functor::Roundtrip => Ok(duality_roundtrip_standard(&ctx, side, t.n_max.min(t.h_order))),
                }
            });
        }
        Command::Semiclassical => {
            section(&mut rep, "semiclassical", || semiclassical_report(&jet_ctx(spec, t)?));
        }
        Command::ExampleAxb => {
            section(&mut rep, "", || Ok(axb_example_report(t.h_order, t.jet_degree, t.n_max)));
        }
    }
    rep.sort();
    rep
}

/// The header record: command, effective truncation and seed.
pub fn header(cmd: Command, spec_label: &str, params: &Params) -> Value {
    let t = &params.truncation;
    let mut h = json!({
        "record": "header",
        "tool": "lrbi",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cmd.name(),
        "spec": spec_label,
        "truncation": {
            "h_order": t.h_order,
            "pbw_degree": t.pbw_degree,
            "jet_degree": t.jet_degree,
            "n_max": t.n_max,
        },
        "seed": params.seed,
    });
    match cmd {
        Command::Dualize(s) => h["side"] = json!(s.name()),
        Command::Drinfeld(f, s) => {
            h["functor"] = json!(f.name());
            h["side"] = json!(s.name());
        }
        _ => {}
    }
    h
}

/// Line-delimited JSON: the header, one record per check, then the verdict.
pub fn render_jsonl(header: &Value, rep: &Report) -> String {
    let mut out = String::new();
    let mut line = |v: &Value| {
        out.push_str(&serde_json::to_string(v).expect("json values serialize"));
        out.push('\n');
    };
    line(header);
    for c in &rep.checks {
        let mut v = serde_json::to_value(c).expect("checks serialize");
        v["record"] = json!("check");
        line(&v);
    }
    let (pass, fail, indeterminate) = rep.counts();
    line(&json!({
        "record": "verdict",
        "status": rep.verdict(),
        "pass": pass,
        "fail": fail,
        "indeterminate": indeterminate,
    }));
    out
}

/// Human-readable summary for standard error.
pub fn render_summary(cmd: Command, params: &Params, rep: &Report) -> String {
    let t = &params.truncation;
    let (pass, fail, ind) = rep.counts();
    let mut s = format!(
        "lrbi {}: h_order={} pbw_degree={} jet_degree={} n_max={} seed={}\n",
        cmd.name(),
        t.h_order,
        t.pbw_degree,
        t.jet_degree,
        t.n_max,
        params.seed
    );
    for c in rep.problems() {
        s.push_str(&format!("  {:<13} {}", c.status.to_string(), c.name));
        if let Some(w) = &c.witness {
            s.push_str(&format!("  [{w}]"));
        }
        s.push('\n');
    }
    s.push_str(&format!(
        "{}: {pass} passed, {fail} failed, {ind} indeterminate (identities certified modulo h^{})\n",
        rep.verdict(),
        t.h_order + 1
    ));
    s
}

#[cfg(test)]
mod tests;
