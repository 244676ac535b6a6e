use std::fmt::Write as _;
use std::fs;

use anyhow::{bail, Context, Result};
use modlab_core::bisim::{
    check_morphism, check_tau_bisim, check_zigzag_decomposition, greatest_tau_bisim, zigzag_free_subrelation,
};
use modlab_core::formula::{axiom, axioms};
use modlab_core::positivity::{
    check_monotone, interpolant_witness_search, positivity_witness_search, synthesize_interpolant, synthesize_positive,
    SearchMode, SearchOutcome, SynthesisResult,
};
use modlab_core::product::{check_product, max_product, positive_bound_check, preservation_suite, AxiomStatus};
use modlab_core::repro::{list_cases, run_case, CaseReport};
use modlab_core::structures::{frame_validity, frame_validity_sampled, Validity};
use modlab_core::{print, Formula, Guards, LiteralSet, Model, Relation};
use serde_json::{json, Value};

use crate::input;
use crate::{Command, Format, Mode, Options};

/// What a subcommand found. `ok` is false when a checked property failed.
struct Report {
    ok: bool,
    value: Value,
    text: String,
}

impl Report {
    fn new(ok: bool, value: Value, text: impl Into<String>) -> Report {
        Report {
            ok,
            value,
            text: text.into(),
        }
    }
}

pub fn run(command: Command, opts: &Options) -> Result<bool> {
    let guards = Guards::with_bits(opts.guard_bits);
    let report = dispatch(command, opts, &guards)?;
    let pretty = serde_json::to_string_pretty(&report.value)? + "\n";
    if let Some(path) = &opts.out {
        fs::write(path, &pretty).with_context(|| format!("--out: cannot write {}", path.display()))?;
    }
    match opts.format {
        Format::Json => print!("{pretty}"),
        Format::Text => println!("{}", report.text.trim_end()),
    }
    Ok(report.ok)
}

fn search_mode(opts: &Options) -> SearchMode {
    match opts.mode {
        Mode::Exhaustive => SearchMode::Exhaustive,
        Mode::Sampled => SearchMode::Sampled {
            seed: opts.seed,
            trials: opts.trials,
        },
    }
}

fn dispatch(command: Command, opts: &Options, guards: &Guards) -> Result<Report> {
    match command {
        Command::Parse { formula } => parse(&formula),
        Command::Eval { model, formula, world } => eval(&model, &formula, world),
        Command::Validity { frame, formula } => validity(&frame, &formula, opts, guards),
        Command::Monotone { frame, formula, pvars } => monotone(&frame, &formula, &pvars, guards),
        Command::BisimCheck { m1, m2, z, tau, cert } => match cert {
            Some(cert) => recheck_certificate(&cert),
            None => {
                let (m1, m2) = (input::model(&m1.unwrap(), "m1")?, input::model(&m2.unwrap(), "m2")?);
                let z = input::relation(&z.unwrap(), "z")?;
                let tau = input::tau(&tau.unwrap(), "tau")?;
                bisim_check(m1, m2, z, tau)
            }
        },
        Command::BisimGreatest { m1, m2, tau } => {
            let (m1, m2) = (input::model(&m1, "m1")?, input::model(&m2, "m2")?);
            let tau = input::tau(&tau, "tau")?;
            let z = greatest_tau_bisim(&m1, &m2, &tau)?;
            let text = format!("greatest bisimulation: {z}");
            Ok(Report::new(
                true,
                json!({ "m1": m1, "m2": m2, "tau": tau, "z": z }),
                text,
            ))
        }
        Command::ZigzagSplit { z } => {
            let z = input::relation(&z, "z")?;
            let d = zigzag_free_subrelation(&z)?;
            let valid = check_zigzag_decomposition(&d.union(), &d);
            let text = format!("functional part {}\ninverse-functional part {}", d.z1, d.z2);
            Ok(Report::new(
                valid,
                json!({ "z": z, "z0": d.union(), "z1": d.z1, "z2": d.z2 }),
                text,
            ))
        }
        Command::MorphismCheck { src, dst, map, pvars } => {
            let (src, dst) = (input::frame_or_model(&src, "src")?, input::frame_or_model(&dst, "dst")?);
            let map = input::relation(&map, "map")?;
            let pvars = input::vars(&pvars)?;
            let v = check_morphism(&map, &src, &dst, (!pvars.is_empty()).then_some(&pvars[..]))?;
            let text = v
                .as_ref()
                .map_or("morphism".to_string(), |v| format!("not a morphism: {v}"));
            let value = json!({ "src": src, "dst": dst, "map": map, "pvars": pvars, "violation": v });
            Ok(Report::new(v.is_none(), value, text))
        }
        Command::PositiveSearch { frame, formula, pvars } => {
            let frame = input::frame(&frame, "frame")?;
            let f = input::formula(&formula, "formula")?;
            let pvars = input::vars(&pvars)?;
            let outcome = positivity_witness_search(&frame, &f, &pvars, &search_mode(opts), guards)?;
            let mut value = search_value(outcome);
            value["frame"] = json!(frame);
            value["formula"] = json!(f);
            value["pvars"] = json!(pvars);
            Ok(search_report(value))
        }
        Command::PositiveSynth { frame, formula, pvars } => {
            let frame = input::frame(&frame, "frame")?;
            let f = input::formula(&formula, "formula")?;
            let pvars = input::vars(&pvars)?;
            let r = synthesize_positive(&frame, &f, &pvars, opts.max_size, guards)?;
            let value = json!({ "frame": frame, "formula": f, "pvars": pvars, "synthesis": r });
            Ok(Report::new(true, value, synthesis_text(&r, "positive equivalent")))
        }
        Command::Interpolant { frame, f, g, tau } => {
            let frame = input::frame(&frame, "frame")?;
            let (f, g) = (input::formula(&f, "f")?, input::formula(&g, "g")?);
            let tau = input::tau(&tau, "tau")?;
            interpolant(frame, f, g, tau, opts, guards)
        }
        Command::Product {
            f1,
            f2,
            z,
            axioms,
            alphas,
        } => {
            let (f1, f2) = (input::frame(&f1, "f1")?, input::frame(&f2, "f2")?);
            let z = input::relation(&z, "z")?;
            product(f1, f2, z, &axioms, &alphas, guards)
        }
        Command::Repro { id, list, all } => repro(id, list, all, guards),
    }
}

fn parse(text: &str) -> Result<Report> {
    let f = input::formula(text, "formula")?;
    let value = json!({
        "formula": f,
        "size": f.size(),
        "modal_depth": f.modal_depth(),
        "vars": f.vars(),
        "positive": f.is_positive(),
        "negation": f.negate(),
        "dual": f.dualize(),
    });
    Ok(Report::new(true, value, print(&f)))
}

fn eval(model: &str, formula: &str, world: Option<usize>) -> Result<Report> {
    let m = input::model(model, "model")?;
    let f = input::formula(formula, "formula")?;
    if let Some(w) = world {
        if w >= m.size() {
            bail!("--world: {w} is not a world of a {}-world model", m.size());
        }
    }
    let truth = m.eval(&f);
    let holds = world.map(|w| truth.contains(w));
    let mut text = format!("truth set {truth}");
    if let (Some(w), Some(h)) = (world, holds) {
        write!(text, "\nholds at {w}: {h}")?;
    }
    let value = json!({ "model": m, "formula": f, "truth_set": truth, "world": world, "holds": holds });
    Ok(Report::new(holds.unwrap_or(true), value, text))
}

fn validity(frame: &str, formula: &str, opts: &Options, guards: &Guards) -> Result<Report> {
    let frame = input::frame(frame, "frame")?;
    let f = input::formula(formula, "formula")?;
    let (valid, counter, extra) = match opts.mode {
        Mode::Exhaustive => match frame_validity(&frame, &f, guards)? {
            Validity::Valid => (true, None, json!({ "mode": "exhaustive" })),
            Validity::Countermodel { valuation, world } => {
                (false, Some((valuation, world)), json!({ "mode": "exhaustive" }))
            }
        },
        Mode::Sampled => {
            let s = frame_validity_sampled(&frame, &f, opts.seed, opts.trials);
            let extra = json!({ "mode": "sampled", "seed": s.seed, "trials": s.trials });
            (s.countermodel.is_none(), s.countermodel, extra)
        }
    };
    let mut value = json!({ "frame": frame, "formula": f, "valid": valid });
    value["search"] = extra;
    let text = match &counter {
        None => "valid".to_string(),
        Some((val, w)) => {
            value["countermodel"] = json!({ "valuation": val, "world": w });
            format!("refuted at world {w} under {}", serde_json::to_string(val)?)
        }
    };
    Ok(Report::new(valid, value, text))
}

fn monotone(frame: &str, formula: &str, pvars: &[String], guards: &Guards) -> Result<Report> {
    let frame = input::frame(frame, "frame")?;
    let f = input::formula(formula, "formula")?;
    let pvars = input::vars(pvars)?;
    let v = check_monotone(&frame, &f, &pvars, guards)?;
    let text = match &v.counterexample {
        None => format!("monotone ({} valuation pairs)", v.pairs_checked),
        Some(c) => format!(
            "not monotone: holds at {} under {} but not under {}",
            c.world,
            serde_json::to_string(&c.val1)?,
            serde_json::to_string(&c.val2)?
        ),
    };
    let value = json!({ "frame": frame, "formula": f, "pvars": pvars, "monotonicity": v });
    Ok(Report::new(v.monotone, value, text))
}

fn bisim_check(m1: Model, m2: Model, z: Relation, tau: LiteralSet) -> Result<Report> {
    let v = check_tau_bisim(&m1, &m2, &z, &tau)?;
    let text = v
        .as_ref()
        .map_or("bisimulation".to_string(), |v| format!("not a bisimulation: {v}"));
    let value = json!({ "m1": m1, "m2": m2, "z": z, "tau": tau, "violation": v });
    Ok(Report::new(v.is_none(), value, text))
}

/// Finds the witness object in a certificate written by `positive-search`,
/// `interpolant` or `repro`.
fn witness_object(v: &Value) -> Option<&Value> {
    [&v["witness"], &v["certificate"]["witness"], v]
        .into_iter()
        .find(|w| ["m1", "m2", "z", "tau"].iter().all(|k| w.get(k).is_some()))
}

fn recheck_certificate(path: &str) -> Result<Report> {
    let doc = input::json(path, "cert")?;
    let w = witness_object(&doc).context("--cert: no object with m1, m2, z and tau")?;
    let m1: Model = input::decode(w["m1"].clone(), "m1")?;
    let m2: Model = input::decode(w["m2"].clone(), "m2")?;
    let z: Relation = input::decode(w["z"].clone(), "z")?;
    let tau: LiteralSet = input::decode(w["tau"].clone(), "tau")?;
    let mut report = bisim_check(m1.clone(), m2.clone(), z.clone(), tau)?;
    if let Some(pair) = w.get("pair") {
        let (w1, w2): (usize, usize) = input::decode(pair.clone(), "pair")?;
        let f: Formula = input::decode(w["f"].clone(), "f")?;
        let g: Formula = match w.get("g") {
            Some(g) => input::decode(g.clone(), "g")?,
            None => f.clone(),
        };
        if w1 >= m1.size() || w2 >= m2.size() {
            bail!("pair: ({w1}, {w2}) is out of range");
        }
        let in_z = z.contains(w1, w2);
        let left = m1.holds_at(w1, &f);
        let right = m2.holds_at(w2, &g);
        report.ok &= in_z && left && !right;
        report.value["pair"] = json!([w1, w2]);
        report.value["pair_in_z"] = json!(in_z);
        report.value["holds_left"] = json!(left);
        report.value["holds_right"] = json!(right);
        write!(
            report.text,
            "\npair ({w1}, {w2}) in Z: {in_z}\nf holds at {w1} on the left: {left}\ng holds at {w2} on the right: {right}"
        )?;
    }
    write!(
        report.text,
        "\ncertificate {}",
        if report.ok { "verified" } else { "REJECTED" }
    )?;
    report.value["verified"] = json!(report.ok);
    Ok(report)
}

fn search_value(outcome: SearchOutcome) -> Value {
    match outcome {
        SearchOutcome::Found(w) => json!({ "outcome": "witness", "witness": w }),
        SearchOutcome::NoneFound {
            pairs_checked,
            complete,
        } => {
            json!({ "outcome": "none-found", "pairs_checked": pairs_checked, "complete": complete })
        }
        SearchOutcome::Exhausted { seed, trials } => json!({ "outcome": "exhausted", "seed": seed, "trials": trials }),
    }
}

fn search_report(value: Value) -> Report {
    let text = match value["outcome"].as_str() {
        Some("witness") => {
            let w = &value["witness"];
            format!(
                "witness at pair {}\nleft valuation {}\nright valuation {}\nbisimulation {}",
                w["pair"], w["m1"]["valuation"], w["m2"]["valuation"], w["z"]["pairs"]
            )
        }
        Some("none-found") => format!(
            "no witness among {} model pairs{}",
            value["pairs_checked"],
            if value["complete"] == true { " (complete)" } else { "" }
        ),
        _ => format!("no witness in {} samples (seed {})", value["trials"], value["seed"]),
    };
    Report::new(true, value, text)
}

fn synthesis_text(r: &SynthesisResult, what: &str) -> String {
    let tail = format!(
        "{} candidates, {} distinct{}",
        r.candidates_checked,
        r.distinct,
        if r.truncated { ", budget exhausted" } else { "" }
    );
    match &r.found {
        Some(a) => format!("{what}: {a}\n{tail}"),
        None => format!("no {what} up to size {}\n{tail}", r.bound_reached),
    }
}

fn interpolant(
    frame: modlab_core::Frame,
    f: Formula,
    g: Formula,
    tau: LiteralSet,
    opts: &Options,
    guards: &Guards,
) -> Result<Report> {
    let outcome = interpolant_witness_search(&frame, &f, &g, &tau, &search_mode(opts), guards)?;
    let refuted = matches!(outcome, SearchOutcome::Found(_));
    let mut value = search_value(outcome);
    let mut text = search_report(value.clone()).text;
    if !refuted {
        let r = synthesize_interpolant(&frame, &f, &g, &tau, opts.max_size, guards)?;
        text = format!("{text}\n{}", synthesis_text(&r, "interpolant"));
        value["synthesis"] = json!(r);
    }
    value["frame"] = json!(frame);
    value["f"] = json!(f);
    value["g"] = json!(g);
    value["tau"] = json!(tau);
    Ok(Report::new(true, value, text))
}

fn product(
    f1: modlab_core::Frame,
    f2: modlab_core::Frame,
    z: Relation,
    names: &[String],
    alphas: &[String],
    guards: &Guards,
) -> Result<Report> {
    let table: Vec<(String, Formula)> = if names.is_empty() {
        axioms().into_iter().map(|(n, f)| (n.to_string(), f)).collect()
    } else {
        names
            .iter()
            .map(|n| {
                axiom(n)
                    .map(|f| (n.clone(), f))
                    .with_context(|| format!("--axiom: unknown axiom `{n}`"))
            })
            .collect::<Result<_>>()?
    };
    let alphas: Vec<Formula> = alphas
        .iter()
        .map(|a| input::formula(a, "alpha"))
        .collect::<Result<_>>()?;
    let p = max_product(&f1, &f2, &z, guards)?;
    let violation = check_product(&p, &f1, &f2)?;
    let suite = preservation_suite(&f1, &f2, &z, &table, guards)?;
    let mut bounds = Vec::new();
    for a in &alphas {
        bounds.push((a, positive_bound_check(&p, &f1, &f2, a)?));
    }
    let ok = violation.is_none()
        && suite
            .iter()
            .all(|r| !matches!(r.status, AxiomStatus::Counterexample { .. }))
        && bounds.iter().all(|(_, b)| b.is_none());

    let mut text = format!("product with {} worlds\n", p.size());
    match &violation {
        None => text.push_str("projection equations and maximality hold\n"),
        Some(v) => writeln!(text, "product check failed: {}", serde_json::to_string(v)?)?,
    }
    for r in &suite {
        let status = serde_json::to_value(&r.status)?;
        writeln!(text, "{}: {}", r.name, status["status"].as_str().unwrap_or("?"))?;
    }
    for (a, b) in &bounds {
        match b {
            None => writeln!(text, "bound holds for {a}")?,
            Some(x) => writeln!(text, "bound fails for {a} at X = {x}")?,
        }
    }
    let value = json!({
        "f1": f1,
        "f2": f2,
        "z": z,
        "product": p,
        "product_violation": violation,
        "axioms": suite,
        "positive_bounds": bounds.iter().map(|(a, b)| json!({ "alpha": a, "violation": b })).collect::<Vec<_>>(),
    });
    Ok(Report::new(ok, value, text))
}

fn case_text(r: &CaseReport) -> String {
    let mut text = format!("{} {}: {}\n", if r.passed { "PASS" } else { "FAIL" }, r.id, r.claim);
    for c in &r.checks {
        let _ = writeln!(
            text,
            "  [{}] {} {}",
            if c.passed { "ok" } else { "FAILED" },
            c.name,
            c.detail
        );
    }
    text
}

fn repro(id: Option<String>, list: bool, all: bool, guards: &Guards) -> Result<Report> {
    if list {
        let text = list_cases()
            .iter()
            .map(|c| format!("{}  {}", c.id, c.claim))
            .collect::<Vec<_>>()
            .join("\n");
        return Ok(Report::new(true, json!(list_cases()), text));
    }
    if all {
        let reports = list_cases()
            .iter()
            .map(|c| run_case(c.id, guards))
            .collect::<modlab_core::Result<Vec<_>>>()?;
        let ok = reports.iter().all(|r| r.passed);
        let text = reports.iter().map(case_text).collect::<String>();
        return Ok(Report::new(ok, json!(reports), text));
    }
    let report = run_case(id.as_deref().expect("clap requires an id"), guards)?;
    Ok(Report::new(report.passed, json!(report), case_text(&report)))
}
