//! Case execution, tolerance policy and suite reports.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{instantiate_cases, Group, IdentityRecord, Kind, TestCase, TolClass};
use crate::exact;
use crate::expr::{evaluate, evaluate_exact, Env, EvalConfig, ExactEnv};

mod render;

pub use render::{fingerprint, parse_report_json, render_csv, render_json, render_markdown, ReportParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    ExpectedFailConfirmed,
    ExpectedFailViolated,
    Error,
}

impl Status {
    pub const ALL: [Status; 5] = [
        Status::Pass,
        Status::Fail,
        Status::ExpectedFailConfirmed,
        Status::ExpectedFailViolated,
        Status::Error,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ExpectedFailConfirmed => "EXPECTED_FAIL_CONFIRMED",
            Status::ExpectedFailViolated => "EXPECTED_FAIL_VIOLATED",
            Status::Error => "ERROR",
        }
    }

    /// Whether the outcome counts as a success of the suite.
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::ExpectedFailConfirmed)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: String,
    pub group: Group,
    pub kind: Kind,
    pub tol_class: TolClass,
    pub index: usize,
    /// Parameter values as written in the grid, plus a derived `q`.
    pub params: Vec<(String, String)>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub abs_residual: Option<f64>,
    pub rel_residual: Option<f64>,
    /// Accumulated absolute evaluation error of both sides.
    pub err_budget: f64,
    /// The bound the residual was judged against: tolerance plus budget,
    /// on the same scale as the residual, or the floor for controls.
    pub threshold: f64,
    /// The threshold applies to the absolute residual.
    pub absolute: bool,
    pub status: Status,
    pub diagnostic: Option<String>,
    pub ms: f64,
}

impl Outcome {
    /// The residual the status was decided on.
    pub fn judged_residual(&self) -> Option<f64> {
        if self.absolute {
            self.abs_residual
        } else {
            self.rel_residual
        }
    }
}

/// Pass thresholds per tolerance class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub tight: f64,
    pub med: f64,
    pub loose: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tight: TolClass::Tight.threshold(),
            med: TolClass::Med.threshold(),
            loose: TolClass::Loose.threshold(),
        }
    }
}

impl Tolerances {
    pub fn get(&self, class: TolClass) -> f64 {
        match class {
            TolClass::Exact => 0.0,
            TolClass::Tight => self.tight,
            TolClass::Med => self.med,
            TolClass::Loose => self.loose,
        }
    }

    /// Replace the threshold of `class`; the exact class cannot be relaxed.
    pub fn set(&mut self, class: TolClass, value: f64) -> bool {
        match class {
            TolClass::Exact => return false,
            TolClass::Tight => self.tight = value,
            TolClass::Med => self.med = value,
            TolClass::Loose => self.loose = value,
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub eval: EvalConfig,
    pub tolerances: Tolerances,
    /// Worker threads; 0 uses the rayon default, 1 runs serially.
    pub threads: usize,
    pub timing: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            eval: EvalConfig::default(),
            tolerances: Tolerances::default(),
            threads: 0,
            timing: true,
        }
    }
}

/// Case selection. Empty lists match everything.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Filter {
    pub id_prefix: Option<String>,
    pub groups: Vec<Group>,
    pub kinds: Vec<Kind>,
    pub tol_classes: Vec<TolClass>,
}

impl Filter {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn id(prefix: &str) -> Self {
        Self {
            id_prefix: Some(prefix.to_string()),
            ..Self::default()
        }
    }

    pub fn group(g: Group) -> Self {
        Self {
            groups: vec![g],
            ..Self::default()
        }
    }

    pub fn matches(&self, r: &IdentityRecord) -> bool {
        self.id_prefix.as_deref().map_or(true, |p| r.id.starts_with(p))
            && (self.groups.is_empty() || self.groups.contains(&r.group))
            && (self.kinds.is_empty() || self.kinds.contains(&r.kind))
            && (self.tol_classes.is_empty() || self.tol_classes.contains(&r.tol_class))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("the selection matches no identity")]
    EmptySelection,
    #[error(transparent)]
    Catalog(#[from] crate::catalog::CatalogError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub by_status: BTreeMap<Status, usize>,
    pub by_group: BTreeMap<Group, BTreeMap<Status, usize>>,
}

impl Summary {
    pub fn from_outcomes(outcomes: &[Outcome]) -> Summary {
        let mut s = Summary {
            total: outcomes.len(),
            ..Summary::default()
        };
        for o in outcomes {
            *s.by_status.entry(o.status).or_default() += 1;
            *s.by_group.entry(o.group).or_default().entry(o.status).or_default() += 1;
        }
        s
    }

    pub fn count(&self, st: Status) -> usize {
        self.by_status.get(&st).copied().unwrap_or(0)
    }

    /// No FAIL, violated control or ERROR.
    pub fn all_ok(&self) -> bool {
        self.by_status.iter().all(|(st, n)| st.is_ok() || *n == 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub config: VerifyConfig,
    pub outcomes: Vec<Outcome>,
    pub summary: Summary,
    pub total_ms: f64,
}

impl VerificationReport {
    /// Zero every timing field, for byte comparisons between runs.
    pub fn without_timing(mut self) -> Self {
        self.total_ms = 0.0;
        for o in &mut self.outcomes {
            o.ms = 0.0;
        }
        self
    }

    pub fn outcomes_for<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Outcome> + 'a {
        self.outcomes.iter().filter(move |o| o.id == id)
    }
}

fn params_of(c: &TestCase) -> Vec<(String, String)> {
    c.env.iter().map(|(n, v)| (n.clone(), v.text.clone())).collect()
}

fn skeleton(r: &IdentityRecord, c: &TestCase, cfg: &VerifyConfig) -> Outcome {
    Outcome {
        id: r.id.clone(),
        group: r.group,
        kind: r.kind,
        tol_class: r.tol_class,
        index: c.index,
        params: params_of(c),
        lhs: None,
        rhs: None,
        abs_residual: None,
        rel_residual: None,
        err_budget: 0.0,
        threshold: cfg.tolerances.get(c.tol.class),
        absolute: c.tol.absolute,
        status: Status::Error,
        diagnostic: None,
        ms: 0.0,
    }
}

fn rel(l: f64, r: f64) -> f64 {
    (l - r).abs() / l.abs().max(r.abs()).max(1e-300)
}

/// Evaluate one case of `r` and judge it.
pub fn verify_case(r: &IdentityRecord, c: &TestCase, cfg: &VerifyConfig) -> Outcome {
    let start = Instant::now();
    let mut o = skeleton(r, c, cfg);
    match c.kind {
        Kind::Exact => verify_exact(r, c, &mut o),
        Kind::Numeric | Kind::NegativeControl => verify_numeric(r, c, cfg, &mut o),
    }
    if cfg.timing {
        o.ms = start.elapsed().as_secs_f64() * 1e3;
    }
    o
}

fn verify_exact(r: &IdentityRecord, c: &TestCase, o: &mut Outcome) {
    let mut env = ExactEnv::new();
    for (n, v) in &c.env {
        env.set(n, v.exact());
    }
    let (l, rh) = match (evaluate_exact(&r.lhs, &env), evaluate_exact(&r.rhs, &env)) {
        (Ok(l), Ok(rh)) => (l, rh),
        (Err(e), _) => return error(o, format!("lhs: {e}")),
        (_, Err(e)) => return error(o, format!("rhs: {e}")),
    };
    let lf = exact::to_f64(&l);
    let rf = exact::to_f64(&rh);
    let diff = (&l - &rh).abs();
    o.lhs = Some(lf);
    o.rhs = Some(rf);
    o.abs_residual = Some(exact::to_f64(&diff));
    o.rel_residual = Some(if diff.is_zero() { 0.0 } else { rel(lf, rf).max(f64::MIN_POSITIVE) });
    o.threshold = 0.0;
    o.absolute = true;
    o.status = if diff.is_zero() { Status::Pass } else { Status::Fail };
    if !diff.is_zero() {
        o.diagnostic = Some(format!("exact residual {diff}"));
    }
}

fn verify_numeric(r: &IdentityRecord, c: &TestCase, cfg: &VerifyConfig, o: &mut Outcome) {
    let mut env = Env::new();
    for (n, v) in &c.env {
        env.set(n, v.value);
    }
    let l = match evaluate(&r.lhs, &env, &cfg.eval) {
        Ok(v) => v,
        Err(e) => return error(o, format!("lhs: {e}")),
    };
    let rh = match evaluate(&r.rhs, &env, &cfg.eval) {
        Ok(v) => v,
        Err(e) => return error(o, format!("rhs: {e}")),
    };
    o.lhs = Some(l.value);
    o.rhs = Some(rh.value);
    if !l.value.is_finite() || !rh.value.is_finite() {
        return error(o, "non-finite side".to_string());
    }
    let abs = (l.value - rh.value).abs();
    let relr = rel(l.value, rh.value);
    let budget = l.err + rh.err;
    o.abs_residual = Some(abs);
    o.rel_residual = Some(relr);
    o.err_budget = budget;
    let (residual, scaled_budget) = if c.tol.absolute {
        (abs, budget)
    } else {
        (relr, budget / l.value.abs().max(rh.value.abs()).max(1e-300))
    };
    if c.kind == Kind::NegativeControl {
        let floor = c.tol.expected_floor.unwrap_or(1e-3);
        o.threshold = floor;
        o.status = if residual > floor + scaled_budget {
            Status::ExpectedFailConfirmed
        } else {
            Status::ExpectedFailViolated
        };
        return;
    }
    o.threshold = cfg.tolerances.get(c.tol.class) + scaled_budget;
    o.status = if residual <= o.threshold { Status::Pass } else { Status::Fail };
}

fn error(o: &mut Outcome, msg: String) {
    o.status = Status::Error;
    o.diagnostic = Some(msg);
}

/// Run every case of the selected records. Outcomes are ordered by id, then
/// by grid position, whatever the parallelism.
pub fn run_suite(
    records: &[IdentityRecord],
    filter: &Filter,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut selected: Vec<&IdentityRecord> = records.iter().filter(|r| filter.matches(r)).collect();
    if selected.is_empty() {
        return Err(VerifyError::EmptySelection);
    }
    selected.sort_by(|a, b| a.id.cmp(&b.id));
    let mut jobs = Vec::new();
    for r in &selected {
        for c in instantiate_cases(r)? {
            jobs.push((*r, c));
        }
    }
    let outcomes: Vec<Outcome> = if cfg.threads == 1 {
        jobs.iter().map(|(r, c)| verify_case(r, c, cfg)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| VerifyError::ThreadPool(e.to_string()))?;
        pool.install(|| jobs.par_iter().map(|(r, c)| verify_case(r, c, cfg)).collect())
    };
    let summary = Summary::from_outcomes(&outcomes);
    Ok(VerificationReport {
        config: *cfg,
        outcomes,
        summary,
        total_ms: if cfg.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 },
    })
}

#[cfg(test)]
mod tests;
