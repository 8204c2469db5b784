//! JSON, Markdown and CSV forms of a report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use super::{Outcome, Status, Summary, Tolerances, VerificationReport, VerifyConfig};
use crate::catalog::{Group, Kind, TolClass};
use crate::expr::EvalConfig;
use crate::quadrature::QuadConfig;

/// Parameters as a JSON object in grid order.
#[derive(Debug, Default)]
struct Params(Vec<(String, String)>);

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Params {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Params;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a map of parameter names to values")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> Result<Params, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = a.next_entry::<String, String>()? {
                    out.push((k, v));
                }
                Ok(Params(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    fingerprint: String,
    tolerances: BTreeMap<String, f64>,
    quad_rel_tol: f64,
    quad_abs_tol: f64,
    quad_max_level: u32,
    quad_eval_cap: u64,
    threads: usize,
}

#[derive(Serialize, Deserialize)]
struct OutcomeJson {
    id: String,
    group: String,
    kind: String,
    tol_class: String,
    params: Params,
    lhs: Option<f64>,
    rhs: Option<f64>,
    abs_residual: Option<f64>,
    rel_residual: Option<f64>,
    err_budget: f64,
    threshold: f64,
    absolute: bool,
    status: String,
    diagnostic: Option<String>,
    ms: f64,
}

#[derive(Serialize, Deserialize)]
struct SummaryJson {
    total: usize,
    by_status: BTreeMap<String, usize>,
    by_group: BTreeMap<String, BTreeMap<String, usize>>,
    total_ms: f64,
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    config: ConfigJson,
    outcomes: Vec<OutcomeJson>,
    summary: SummaryJson,
}

/// SHA-256 over the tolerance table and quadrature limits.
pub fn fingerprint(cfg: &VerifyConfig) -> String {
    let mut text = String::new();
    for t in TolClass::ALL {
        let _ = writeln!(text, "{}={:e}", t.name(), cfg.tolerances.get(t));
    }
    let q = &cfg.eval.quad;
    let _ = writeln!(text, "rel_tol={:e}", q.rel_tol);
    let _ = writeln!(text, "abs_tol={:e}", q.abs_tol);
    let _ = writeln!(text, "max_level={}", q.max_level);
    let _ = writeln!(text, "eval_cap={}", q.eval_cap);
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn outcome_json(o: &Outcome) -> OutcomeJson {
    OutcomeJson {
        id: o.id.clone(),
        group: o.group.to_string(),
        kind: o.kind.name().to_string(),
        tol_class: o.tol_class.name().to_string(),
        params: Params(o.params.clone()),
        lhs: o.lhs,
        rhs: o.rhs,
        abs_residual: o.abs_residual,
        rel_residual: o.rel_residual,
        err_budget: o.err_budget,
        threshold: o.threshold,
        absolute: o.absolute,
        status: o.status.name().to_string(),
        diagnostic: o.diagnostic.clone(),
        ms: o.ms,
    }
}

pub fn render_json(rep: &VerificationReport) -> String {
    let cfg = &rep.config;
    let doc = ReportJson {
        config: ConfigJson {
            fingerprint: fingerprint(cfg),
            tolerances: TolClass::ALL.iter().map(|t| (t.name().to_string(), cfg.tolerances.get(*t))).collect(),
            quad_rel_tol: cfg.eval.quad.rel_tol,
            quad_abs_tol: cfg.eval.quad.abs_tol,
            quad_max_level: cfg.eval.quad.max_level,
            quad_eval_cap: cfg.eval.quad.eval_cap,
            threads: cfg.threads,
        },
        outcomes: rep.outcomes.iter().map(outcome_json).collect(),
        summary: SummaryJson {
            total: rep.summary.total,
            by_status: rep.summary.by_status.iter().map(|(s, n)| (s.name().to_string(), *n)).collect(),
            by_group: rep
                .summary
                .by_group
                .iter()
                .map(|(g, m)| (g.to_string(), m.iter().map(|(s, n)| (s.name().to_string(), *n)).collect()))
                .collect(),
            total_ms: rep.total_ms,
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReportParseError {
    #[error("malformed report: {0}")]
    Json(String),
    #[error("outcome {index}: unknown {field} `{value}`")]
    Field {
        index: usize,
        field: &'static str,
        value: String,
    },
    #[error("summary does not match the outcomes")]
    Summary,
}

/// Read back a report written by [`render_json`].
pub fn parse_report_json(text: &str) -> Result<VerificationReport, ReportParseError> {
    let doc: ReportJson = serde_json::from_str(text).map_err(|e| ReportParseError::Json(e.to_string()))?;
    let c = &doc.config;
    let mut tolerances = Tolerances::default();
    for (name, v) in &c.tolerances {
        if let Some(t) = TolClass::parse(name) {
            tolerances.set(t, *v);
        }
    }
    let cfg = VerifyConfig {
        eval: EvalConfig {
            quad: QuadConfig {
                rel_tol: c.quad_rel_tol,
                abs_tol: c.quad_abs_tol,
                max_level: c.quad_max_level,
                eval_cap: c.quad_eval_cap,
            },
        },
        tolerances,
        threads: c.threads,
        timing: doc.summary.total_ms != 0.0,
    };
    let mut outcomes = Vec::with_capacity(doc.outcomes.len());
    for (i, o) in doc.outcomes.into_iter().enumerate() {
        let bad = |field: &'static str, value: &str| ReportParseError::Field {
            index: i,
            field,
            value: value.to_string(),
        };
        let index = outcomes.iter().rev().take_while(|p: &&Outcome| p.id == o.id).count();
        outcomes.push(Outcome {
            group: Group::parse(&o.group).ok_or_else(|| bad("group", &o.group))?,
            kind: Kind::parse(&o.kind).ok_or_else(|| bad("kind", &o.kind))?,
            tol_class: TolClass::parse(&o.tol_class).ok_or_else(|| bad("tol_class", &o.tol_class))?,
            status: Status::ALL
                .into_iter()
                .find(|s| s.name() == o.status)
                .ok_or_else(|| bad("status", &o.status))?,
            id: o.id,
            index,
            params: o.params.0,
            lhs: o.lhs,
            rhs: o.rhs,
            abs_residual: o.abs_residual,
            rel_residual: o.rel_residual,
            err_budget: o.err_budget,
            threshold: o.threshold,
            absolute: o.absolute,
            diagnostic: o.diagnostic,
            ms: o.ms,
        });
    }
    let summary = Summary::from_outcomes(&outcomes);
    if summary.total != doc.summary.total
        || summary.by_status.iter().any(|(s, n)| doc.summary.by_status.get(s.name()) != Some(n))
    {
        return Err(ReportParseError::Summary);
    }
    Ok(VerificationReport {
        config: cfg,
        outcomes,
        summary,
        total_ms: doc.summary.total_ms,
    })
}

fn num(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6e}"))
}

fn params_text(o: &Outcome) -> String {
    o.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

pub fn render_markdown(rep: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Verification report\n");
    let _ = writeln!(out, "Config fingerprint: `{}`\n", fingerprint(&rep.config));
    let _ = writeln!(out, "| group | {} |", Status::ALL.map(|s| s.name()).join(" | "));
    let _ = writeln!(out, "|---|{}", "---|".repeat(Status::ALL.len()));
    for (g, m) in &rep.summary.by_group {
        let cells: Vec<String> = Status::ALL
            .iter()
            .map(|s| m.get(s).copied().unwrap_or(0).to_string())
            .collect();
        let _ = writeln!(out, "| {g} | {} |", cells.join(" | "));
    }
    let _ = writeln!(out, "\nTotal cases: {}\n", rep.summary.total);
    let _ = writeln!(out, "| id | params | lhs | rhs | residual | threshold | status |");
    let _ = writeln!(out, "|---|---|---|---|---|---|---|");
    for o in &rep.outcomes {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {:.3e} | {} |",
            o.id,
            params_text(o),
            num(o.lhs),
            num(o.rhs),
            num(o.judged_residual()),
            o.threshold,
            o.status
        );
    }
    out
}

pub fn render_csv(rep: &VerificationReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = [
        "id", "group", "kind", "tol_class", "params", "lhs", "rhs", "abs_residual", "rel_residual", "err_budget",
        "threshold", "status", "ms",
    ];
    w.write_record(header).expect("in-memory write");
    let opt = |x: Option<f64>| x.map_or_else(String::new, |v| format!("{v:e}"));
    for o in &rep.outcomes {
        w.write_record([
            o.id.clone(),
            o.group.to_string(),
            o.kind.name().to_string(),
            o.tol_class.name().to_string(),
            params_text(o),
            opt(o.lhs),
            opt(o.rhs),
            opt(o.abs_residual),
            opt(o.rel_residual),
            format!("{:e}", o.err_budget),
            format!("{:e}", o.threshold),
            o.status.name().to_string(),
            format!("{:.3}", o.ms),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
