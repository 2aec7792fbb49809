//! The four user-facing operations on an instance file, shared by the CLI and the C ABI.
//! Each returns an [`Outcome`]: an exit status plus a JSON report and its text rendering.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::conditions::{run_certificate, CertificateReport, CharTriple, NOTE_HALF_FACTOR};
use crate::error::{Error, Result};
use crate::exact_linalg::{Rational, Vector};
use crate::instance::{InstanceFile, MatrixValue, PairEntry};
use crate::lie_builder::{build_bracket, BuildReport, LieAlgebraStructure};
use crate::realizer::{realize, RealizationConfig, RealizationReport};
use crate::subalgebra::{CheckResult, LieSubalgebra, WitnessValue};
use crate::torsion_reduction::{curvature_correction, remove_torsion, torsion_shift};

/// Process exit status: 0 pass, 1 a condition fails, 2 the input is unusable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[repr(i32)]
pub enum Status {
    Pass = 0,
    ConditionFailed = 1,
    InputError = 2,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub report: Value,
    pub text: String,
}

impl Outcome {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("reports serialize") + "\n"
    }
}

/// Errors that are a mathematical answer rather than bad input.
fn is_condition_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Membership { .. } | Error::NonInvariantTorsion(_) | Error::Unsupported(_)
    )
}

/// Turns an error into a report; input errors are passed back to the caller.
fn condition_failure(e: Error) -> Result<Outcome> {
    if !is_condition_error(&e) {
        return Err(e);
    }
    let mut report = json!({ "error": e.to_string() });
    if let Error::Membership { condition, location, recheck } = &e {
        report["condition"] = json!(condition);
        report["location"] = json!(location);
        report["recheck"] = json!(recheck);
    }
    Ok(Outcome {
        status: Status::ConditionFailed,
        text: format!("failed: {e}\n"),
        report,
    })
}

fn render_value(v: &WitnessValue) -> String {
    serde_json::to_string(v).expect("values serialize")
}

fn render_check(out: &mut String, c: &CheckResult) {
    let _ = write!(out, "{:<24} {}", c.name, if c.pass { "pass" } else { "FAIL" });
    if let Some(w) = &c.witness {
        if let Some(g) = w.generator {
            let _ = write!(out, "  generator={g}");
        }
        if let Some(cond) = &w.condition {
            let _ = write!(out, "  condition={cond}");
        }
        if let Some(b) = w.basis {
            let _ = write!(out, "  h-basis={b}");
        }
        let _ = write!(out, "  indices={:?}", w.indices);
        if let Some(v) = &w.value {
            let _ = write!(out, "  value={}", render_value(v));
        }
    }
    out.push('\n');
}

pub fn render_certificate(rep: &CertificateReport) -> String {
    let mut out = String::new();
    for c in &rep.checks {
        render_check(&mut out, c);
    }
    for n in &rep.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let _ = writeln!(out, "verdict: {}", if rep.passed() { "pass" } else { "fail" });
    out
}

/// "e2", "-e1", "1/2 h1 + e3", "0".
pub fn render_combination(labels: &[String], v: &Vector) -> String {
    let mut out = String::new();
    for (c, l) in v.iter().zip(labels).filter(|(c, _)| !c.is_zero()) {
        let neg = c.signum() < 0;
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if a != Rational::one() {
            let _ = write!(out, "{a} ");
        }
        out.push_str(l);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn render_build(rep: &BuildReport, alg: &LieAlgebraStructure) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim {}  basis {}", rep.dim, rep.basis.join(" "));
    for a in 0..alg.dim {
        for b in a + 1..alg.dim {
            let c = alg.constant(a, b);
            if !c.is_zero() {
                let _ = writeln!(out, "[{},{}] = {}", alg.basis[a], alg.basis[b], render_combination(&alg.basis, c));
            }
        }
    }
    let [p, m, z] = rep.killing_inertia;
    let _ = writeln!(out, "killing inertia (+,-,0) = ({p},{m},{z})");
    let _ = writeln!(out, "derived series {:?}", rep.derived_series);
    let _ = writeln!(out, "jacobi {}", rep.jacobi);
    out
}

fn render_realization(rep: &RealizationReport) -> String {
    let mut out = String::new();
    if !rep.supported {
        let _ = writeln!(out, "unsupported: {}", rep.reason.as_deref().unwrap_or(""));
        return out;
    }
    if let Some(e) = rep.ad_commutator_error {
        let _ = writeln!(out, "ad commutator error {e:.3e}");
    }
    for c in &rep.checks {
        let _ = writeln!(out, "{} (fd_step {:e}, tolerance {:e}): {}", c.name, c.fd_step, c.tolerance, if c.pass { "pass" } else { "FAIL" });
        for p in &c.points {
            let _ = writeln!(out, "  point {} deviation {:.3e} limit {:.1e} {}", p.index, p.deviation, p.limit, if p.pass { "ok" } else { "over" });
        }
    }
    let _ = writeln!(out, "verdict: {}", if rep.pass { "pass" } else { "fail" });
    out
}

/// Certificate over all conditions; group checks only when `use_generators` is set and the
/// file carries generators.
pub fn cmd_check(inst: &InstanceFile, use_generators: bool) -> Result<Outcome> {
    let h = inst.subalgebra()?;
    let t = inst.triple()?;
    let g = if use_generators { inst.generators()? } else { None };
    let rep = run_certificate(&h, &t, g.as_ref())?;
    Ok(Outcome {
        status: if rep.passed() { Status::Pass } else { Status::ConditionFailed },
        text: render_certificate(&rep),
        report: serde_json::to_value(&rep)?,
    })
}

/// Torsion-free data for the bracket: the file's own when T = 0, else its reduction.
fn torsion_free(h: &LieSubalgebra, t: CharTriple) -> Result<CharTriple> {
    if t.is_torsion_free() {
        Ok(t)
    } else {
        remove_torsion(h, &t)
    }
}

pub fn cmd_build(inst: &InstanceFile) -> Result<Outcome> {
    let h = inst.subalgebra()?;
    let built = torsion_free(&h, inst.triple()?).and_then(|t| build_bracket(&h, &t.r, &t.lam));
    let alg = match built {
        Ok(a) => a,
        Err(e) => return condition_failure(e),
    };
    let rep = BuildReport::new(&alg);
    Ok(Outcome {
        status: if rep.jacobi == "pass" { Status::Pass } else { Status::ConditionFailed },
        text: render_build(&rep, &alg),
        report: serde_json::to_value(&rep)?,
    })
}

/// Reduced instance plus a note of the corrections that were subtracted.
pub fn cmd_reduce(inst: &InstanceFile) -> Result<(Outcome, Option<InstanceFile>)> {
    let h = inst.subalgebra()?;
    let t = inst.triple()?;
    let reduced = match remove_torsion(&h, &t) {
        Ok(r) => r,
        Err(e) => return Ok((condition_failure(e)?, None)),
    };
    let s0 = torsion_shift(&t.t);
    let corr = curvature_correction(&reduced.lam, &s0);
    let note = json!({
        "applied": if t.is_torsion_free() { "none (T0 = 0)" } else { "remove_torsion" },
        "s0": s0.components(),
        "curvature_correction": corr
            .nonzero_pairs()
            .map(|(i, j, m)| PairEntry { i, j, value: MatrixValue { matrix: m.clone() } })
            .collect::<Vec<_>>(),
        "convention": NOTE_HALF_FACTOR,
    });
    let out = InstanceFile::from_parts(inst.metadata.clone(), &h, &reduced, inst.group_generators.clone());
    let text = format!(
        "removed torsion with s0(X) = 1/2 T0(X,.); {} curvature components corrected\n",
        corr.nonzero_pairs().count()
    );
    Ok((Outcome { status: Status::Pass, report: note, text }, Some(out)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealizeOptions {
    pub fd_step: f64,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions {
            fd_step: crate::realizer::DEFAULT_FD_STEP,
            tolerance: crate::realizer::DEFAULT_TOLERANCE,
            seed: crate::realizer::DEFAULT_SEED,
        }
    }
}

pub fn cmd_realize(inst: &InstanceFile, opts: RealizeOptions) -> Result<Outcome> {
    let cfg = RealizationConfig::new(inst.dimension, opts.fd_step, opts.tolerance, opts.seed)?;
    let h = inst.subalgebra()?;
    let prepared = torsion_free(&h, inst.triple()?).and_then(|t| {
        let a = build_bracket(&h, &t.r, &t.lam)?;
        Ok((t, a))
    });
    let (t, alg) = match prepared {
        Ok(x) => x,
        Err(e) => return condition_failure(e),
    };
    let rep = realize(&alg, &h, &t.lam, &t.r, &cfg)?;
    let mut report = serde_json::to_value(&rep)?;
    report["config"] = serde_json::to_value(&cfg)?;
    Ok(Outcome {
        status: if rep.pass { Status::Pass } else { Status::ConditionFailed },
        text: render_realization(&rep),
        report,
    })
}

/// Resolves `corpus:<name>` to a bundled instance, anything else to a file path.
pub fn load_input(spec: &str) -> Result<InstanceFile> {
    match spec.strip_prefix("corpus:") {
        Some(name) => crate::corpus::load(name),
        None => crate::instance::parse_instance(spec),
    }
}
