//! Commands and their JSON reports.

use crate::error::Error;
use crate::geometry::{Cert, ClosureStatus, DivisorClass, ReductionCertificate, SchemeDesc};
use crate::input::Input;
use crate::pipeline::{
    analyze, essential_part, fibration, reduce_stage, run_stages, verify_cbf, CbfReport, EssentialPart, FibrationReport,
    LinearSystemData, Options, Stages,
};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::time::Instant;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Reduce,
    Movable,
    Fixed,
    Essential,
    Cbf,
    Fibration,
    Analyze,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Reduce,
        Command::Movable,
        Command::Fixed,
        Command::Essential,
        Command::Cbf,
        Command::Fibration,
        Command::Analyze,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Reduce => "reduce",
            Command::Movable => "movable",
            Command::Fixed => "fixed",
            Command::Essential => "essential",
            Command::Cbf => "cbf",
            Command::Fibration => "fibration",
            Command::Analyze => "analyze",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub value: Value,
    pub hash: String,
    pub exit_code: i32,
}

impl Report {
    /// Canonical JSON (sorted keys, two-space indent).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.value).expect("report serialises")
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Validation(_) => "validation",
        Error::Precondition(_) => "precondition",
        Error::InvalidArgument(_) => "invalid-argument",
        Error::Unsupported(_) => "unsupported",
        Error::Rank(_) => "rank",
        Error::Consistency(_) => "consistency",
        Error::EssentialVerification(_) => "essential-verification",
        Error::Io(_) => "io",
    }
}

fn cert_json(c: &Cert) -> Value {
    match c {
        Cert::Certified => json!({"status": "certified"}),
        Cert::Uncertified(r) => json!({"status": "uncertified", "reason": r}),
        Cert::Unknown => json!({"status": "unknown"}),
    }
}

fn class_json(c: &DivisorClass) -> Value {
    json!(c.0)
}

pub fn input_json(input: &Input) -> Value {
    let x = &input.x;
    json!({
        "field": x.field().to_string(),
        "p": x.field().p(),
        "params": x.field().params(),
        "levels": x.field().levels(),
        "blocks": x.blocks(),
        "generators": x.render_gens(),
        "target": input.bc.target.to_string(),
        "target_levels": input.bc.target.levels(),
        "dimension": x.dimension,
        "complete_intersection": x.flags.complete_intersection,
    })
}

fn reduce_json(input: &Input, z: &SchemeDesc, cert: &ReductionCertificate) -> Value {
    json!({
        "field": z.field().to_string(),
        "generators": z.render_gens(),
        "changed": cert.changed,
        "root_steps": cert.root_steps,
        "combination_roots": cert.combination_roots,
        "certificate": cert_json(&cert.status),
        "base_change_degree": input.bc.degree(),
    })
}

fn closure_json(st: &Stages) -> Value {
    let c = &st.closure;
    json!({
        "status": match c.status { ClosureStatus::CertifiedNormal => "certified-normal", ClosureStatus::ClosureAtBound => "closure-at-bound" },
        "field": c.y.field().to_string(),
        "generators": c.y.render_gens(),
        "adjoined": c.adjoined.iter().map(|a| json!({"element": a.element, "pth_power": a.pth_power, "function": a.function})).collect::<Vec<_>>(),
        "conductor_candidates": c.conductor_candidates.iter().map(|p| p.render()).collect::<Vec<_>>(),
        "r1": cert_json(&c.y.flags.r1),
        "degree_insep": st.degree_insep,
        "omega_rank": st.conormal.rank,
        "adjoined_symbols": st.conormal.labels,
    })
}

fn movable_json(d: &LinearSystemData) -> Value {
    json!({
        "zero": d.movable_is_zero(),
        "sections": d.movable.iter().map(|f| f.render()).collect::<Vec<_>>(),
        "class": class_json(&d.movable_class),
    })
}

fn fixed_json(d: &LinearSystemData) -> Value {
    json!({
        "zero": d.fixed_is_zero(),
        "certified": d.fixed_certified,
        "components": d.fixed.iter().map(|c| json!({
            "equation": c.prime.equation.render(),
            "multiplicity": c.multiplicity,
            "class": class_json(&c.prime.class),
            "chart": c.chart,
        })).collect::<Vec<_>>(),
        "class": class_json(&d.fixed_class),
        "total_class": class_json(&d.total_class),
    })
}

fn essential_json(e: &EssentialPart) -> Value {
    let l = &e.subfield.ambient;
    let ders: Vec<String> = e
        .foliation
        .iter()
        .map(|d| {
            d.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| format!("({})*d/d({})", l.render(c), l.symbol_name(i)))
                .collect::<Vec<_>>()
                .join(" + ")
        })
        .collect();
    json!({
        "field": e.field.to_string(),
        "generators": e.subfield.render_generators(),
        "foliation": ders,
        "degree": e.degree,
        "degree_over_base": e.degree_over_base,
        "flags": {
            "reduced_after_base_change": e.reduced_after_base_change,
            "no_vector_fields": e.no_vector_fields,
        },
    })
}

fn cbf_json(c: &CbfReport) -> Value {
    json!({
        "canonical_y": class_json(&c.canonical_y),
        "pullback_canonical_x": class_json(&c.pullback_canonical_x),
        "difference": class_json(&c.difference),
        "correction": class_json(&c.correction),
        "pass": c.pass,
    })
}

fn fibration_json(f: &FibrationReport) -> Value {
    json!({
        "trivial": f.trivial,
        "note": f.note,
        "sections": f.sections,
        "image_ideal": f.image_ideal,
        "image_dimension": f.image_dimension,
        "v_generators": f.v_generators,
        "v_dimension": f.v_dimension,
        "v_status": f.v_status,
        "function_field": f.function_field,
        "fibre_generators": f.fibre_generators,
        "w_field": f.w_field,
        "movable_over_v_zero": f.movable_over_v_zero,
        "fibre_reduced_over_w": f.fibre_reduced_over_w,
        "fibre_nonreduced_over_root": f.fibre_nonreduced_over_root,
    })
}

type Outcome = crate::error::Result<(Value, Vec<String>)>;

fn stages_common(st: &Stages) -> Value {
    json!({
        "closure": closure_json(st),
    })
}

fn execute(cmd: Command, input: &Input, opts: &Options) -> Outcome {
    let x = &input.x;
    let target = input.target();
    match cmd {
        Command::Reduce => {
            let (_, _, z, cert) = reduce_stage(x, target)?;
            let unc = if cert.status.is_certified() { vec![] } else { vec!["reduce".to_string()] };
            Ok((json!({"reduce": reduce_json(input, &z, &cert)}), unc))
        }
        Command::Movable | Command::Fixed => {
            let st = run_stages(x, target, opts)?;
            let mut v = stages_common(&st);
            v["reduce"] = reduce_json(input, &st.z, &st.reduction);
            let mut unc = vec![];
            if cmd == Command::Movable {
                v["movable"] = movable_json(&st.decomposition);
            } else {
                v["fixed"] = fixed_json(&st.decomposition);
                if !st.decomposition.fixed_certified {
                    unc.push("fixed".to_string());
                }
            }
            Ok((v, unc))
        }
        Command::Essential => {
            let (_, _, z, cert) = reduce_stage(x, target)?;
            let e = essential_part(&z, x)?;
            Ok((json!({"reduce": reduce_json(input, &z, &cert), "essential": essential_json(&e)}), vec![]))
        }
        Command::Cbf => {
            let st = run_stages(x, target, opts)?;
            let c = verify_cbf(&st.decomposition, x, &st.closure.y)?;
            let unc = if c.pass { vec![] } else { vec!["cbf".to_string()] };
            let mut v = stages_common(&st);
            v["movable"] = movable_json(&st.decomposition);
            v["fixed"] = fixed_json(&st.decomposition);
            v["cbf"] = cbf_json(&c);
            Ok((v, unc))
        }
        Command::Fibration => {
            let st = run_stages(x, target, opts)?;
            let f = fibration(&st.decomposition, x, &st.z, target, opts)?;
            let unc = if f.checks_pass() { vec![] } else { vec!["fibration".to_string()] };
            let mut v = stages_common(&st);
            v["movable"] = movable_json(&st.decomposition);
            v["fibration"] = fibration_json(&f);
            Ok((v, unc))
        }
        Command::Analyze => {
            let a = analyze(x, target, opts)?;
            let st = &a.stages;
            let mut v = stages_common(st);
            v["reduce"] = reduce_json(input, &st.z, &st.reduction);
            v["movable"] = movable_json(&st.decomposition);
            v["fixed"] = fixed_json(&st.decomposition);
            v["cbf"] = cbf_json(&a.cbf);
            v["essential"] = match &a.essential {
                Ok(e) => essential_json(e),
                Err(msg) => json!({"error": msg}),
            };
            v["fibration"] = match &a.fibration {
                Ok(f) => fibration_json(f),
                Err(msg) => json!({"error": msg}),
            };
            v["summary"] = json!(summary(&st.decomposition));
            Ok((v, a.uncertified.clone()))
        }
    }
}

fn summary(d: &LinearSystemData) -> String {
    if d.movable_is_zero() && d.fixed_is_zero() {
        "base change reduced; trivial decomposition".into()
    } else {
        format!("fixed class {}, movable class {}", d.fixed_class, d.movable_class)
    }
}

/// SHA-256 of the canonical report with timing and the hash removed.
pub fn report_hash(v: &Value) -> String {
    let mut v = v.clone();
    if let Some(m) = v.as_object_mut() {
        m.remove("timing");
        m.remove("hash");
    }
    let bytes = serde_json::to_vec(&v).expect("report serialises");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn run(cmd: Command, input: &Input, opts: &Options) -> Report {
    let start = Instant::now();
    let outcome = execute(cmd, input, opts);
    let mut v = json!({
        "schema": SCHEMA,
        "tool": {"name": "insep", "version": env!("CARGO_PKG_VERSION")},
        "command": cmd.name(),
        "options": {"degree_bound": opts.degree_bound, "chart": opts.chart},
        "input": input_json(input),
    });
    let exit_code = match outcome {
        Ok((result, unc)) => {
            let code = if unc.is_empty() { 0 } else { 2 };
            v["status"] = json!(if code == 0 { "ok" } else { "uncertified" });
            v["uncertified"] = json!(unc);
            v["result"] = result;
            code
        }
        Err(e) => {
            v["status"] = json!("error");
            v["error"] = json!({"kind": error_kind(&e), "message": e.to_string()});
            1
        }
    };
    v["timing"] = json!({"elapsed_ms": start.elapsed().as_millis() as u64});
    let hash = report_hash(&v);
    v["hash"] = json!(hash);
    Report { value: v, hash, exit_code }
}

/// Short human-readable rendering of a report.
pub fn render_text(r: &Report) -> String {
    let v = &r.value;
    let mut out = String::new();
    out.push_str(&format!("command: {}\n", v["command"].as_str().unwrap_or("")));
    out.push_str(&format!("input: {} over {}\n", v["input"]["generators"], v["input"]["field"].as_str().unwrap_or("")));
    out.push_str(&format!("base change: {}\n", v["input"]["target"].as_str().unwrap_or("")));
    if let Some(e) = v.get("error") {
        out.push_str(&format!("error ({}): {}\n", e["kind"].as_str().unwrap_or(""), e["message"].as_str().unwrap_or("")));
    }
    if let Some(res) = v.get("result").and_then(|r| r.as_object()) {
        for (k, val) in res {
            out.push_str(&format!("{k}: {}\n", serde_json::to_string(val).unwrap_or_default()));
        }
    }
    out.push_str(&format!("status: {}\n", v["status"].as_str().unwrap_or("")));
    out.push_str(&format!("hash: {}\n", r.hash));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::parse_input;

    const SMOOTH: &str = r#"
[field]
p = 2
params = ["s"]

[ambient]
blocks = [["x", "y", "z"]]

[scheme]
generators = ["x^3 + y^3 + z^3"]

[base_change]
raise = ["s"]
"#;

    #[test]
    fn smooth_cubic_report() {
        let i = parse_input(SMOOTH).unwrap();
        let r = run(Command::Analyze, &i, &Options::default());
        assert_eq!(r.exit_code, 0, "{}", r.to_json());
        assert_eq!(r.value["schema"], 1);
        assert_eq!(r.value["result"]["summary"], "base change reduced; trivial decomposition");
        let r2 = run(Command::Analyze, &i, &Options::default());
        assert_eq!(r.hash, r2.hash);
    }

    #[test]
    fn keys_are_sorted() {
        let i = parse_input(SMOOTH).unwrap();
        let r = run(Command::Reduce, &i, &Options::default());
        let keys: Vec<&String> = r.value.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn error_exit_code() {
        let i = parse_input(SMOOTH).unwrap();
        let r = run(Command::Fibration, &i, &Options { degree_bound: None, chart: Some(99) });
        // The movable part is zero, so the chart is never consulted.
        assert_eq!(r.exit_code, 0);
        let bad = parse_input(&SMOOTH.replace("x^3 + y^3 + z^3", "x*y*z")).unwrap();
        let r = run(Command::Analyze, &bad, &Options::default());
        assert_eq!(r.exit_code, 1);
        assert_eq!(r.value["status"], "error");
    }
}
