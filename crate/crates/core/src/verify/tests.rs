use super::*;
use crate::catalog::{builtin_identities, find_identity, GridValue};
use crate::expr::parse_catalog_file;

fn serial() -> VerifyConfig {
    VerifyConfig {
        threads: 1,
        timing: false,
        ..VerifyConfig::default()
    }
}

fn case_at(id: &str, point: &[(&str, &str)], cfg: &VerifyConfig) -> Outcome {
    let r = find_identity(builtin_identities(), id).unwrap();
    let mut c = instantiate_cases(r).unwrap().remove(0);
    for (n, v) in point {
        let g = GridValue::parse(v).unwrap();
        match c.env.iter_mut().find(|(k, _)| k == n) {
            Some(slot) => slot.1 = g,
            None => c.env.push((n.to_string(), g)),
        }
    }
    if let Some(a) = c.env.iter().find(|(k, _)| k == "a").map(|(_, v)| v.clone()) {
        if let Some(q) = c.env.iter_mut().find(|(k, _)| k == "q") {
            let mut g = GridValue::from_exact(&(a.exact() / crate::exact::int(4) + crate::exact::rat(1, 4)));
            g.value = a.value / 4.0 + 0.25;
            q.1 = g;
        }
    }
    verify_case(r, &c, cfg)
}

/// Parse ad hoc records, filling in the group and anchor.
fn records(text: &str) -> Vec<IdentityRecord> {
    let text = text.replace("]\n", "]\ngroup = A\npaper = \"test \\\"x\\\"\"\n");
    parse_catalog_file(&text).unwrap()
}

#[test]
fn exact_case_has_zero_residual() {
    let o = case_at("ScJ1", &[("n", "2")], &serial());
    assert_eq!(o.status, Status::Pass);
    assert_eq!(o.abs_residual, Some(0.0));
    assert_eq!(o.threshold, 0.0);
}

#[test]
fn numeric_case_passes() {
    let o = case_at("sechT", &[("w", "1")], &serial());
    assert_eq!(o.status, Status::Pass, "{o:?}");
    assert!(o.abs_residual.unwrap() < 1e-10);
    assert!(o.err_budget > 0.0);
}

#[test]
fn sign_control_is_confirmed() {
    let o = case_at("Pat3p17_original_sign", &[("n", "0"), ("a", "1"), ("s", "2.5")], &serial());
    assert_eq!(o.status, Status::ExpectedFailConfirmed);
    assert!(o.rel_residual.unwrap() > 1.0);
    // s = 2 puts P1 at its removable singularity s = 1: an error, never a pass
    let o = case_at("Pat3p17_original_sign", &[("n", "0"), ("a", "1"), ("s", "2")], &serial());
    assert_eq!(o.status, Status::Error);
    let o = case_at("Pat3p17", &[("n", "0"), ("a", "1"), ("s", "2")], &serial());
    assert_eq!(o.status, Status::Error);
}

#[test]
fn evaluation_errors_are_not_passes() {
    let recs = records(
        "[identity diverges]\nkind = numeric\ntol = loose\nlhs = integral(v, 0, inf, 1/(1 + v))\nrhs = 1\n\n\
         [identity domain]\nkind = numeric\ntol = loose\nlhs = ln(-x)\nrhs = 0\nparams = { x in {1} }\n",
    );
    let rep = run_suite(&recs, &Filter::all(), &serial()).unwrap();
    assert_eq!(rep.summary.count(Status::Error), 2);
    assert!(rep.outcomes.iter().all(|o| o.diagnostic.is_some()));
    assert!(!rep.summary.all_ok());
}

#[test]
fn violated_control_and_plain_failure() {
    let recs = records(
        "[identity same]\nkind = negative_control\ntol = tight\nlhs = sin(x)\nrhs = sin(x)\nparams = { x in {1} }\nfloor = 1e-3\n\n\
         [identity off]\nkind = numeric\ntol = tight\nlhs = 1 + 1e-9\nrhs = 1\n\n\
         [identity near]\nkind = numeric\ntol = tight\nlhs = 1 + 1e-11\nrhs = 1\n\n\
         [identity zero]\nkind = numeric\ntol = loose\nlhs = 1e-7\nrhs = 0\n",
    );
    let rep = run_suite(&recs, &Filter::all(), &serial()).unwrap();
    let st = |id: &str| rep.outcomes_for(id).next().unwrap().status;
    assert_eq!(st("same"), Status::ExpectedFailViolated);
    assert_eq!(st("off"), Status::Fail);
    assert_eq!(st("near"), Status::Pass);
    // literal zero on the right: absolute residual against 1e-6
    assert_eq!(st("zero"), Status::Pass);
    assert!(rep.outcomes_for("zero").next().unwrap().absolute);
}

#[test]
fn selection() {
    let recs = builtin_identities();
    assert_eq!(run_suite(recs, &Filter::id("nothing"), &serial()), Err(VerifyError::EmptySelection));
    let mut f = Filter::id("Theorem4");
    assert!(f.matches(find_identity(recs, "Theorem4_S").unwrap()));
    f.groups = vec![Group::B];
    f.kinds = vec![Kind::Numeric];
    f.tol_classes = vec![TolClass::Tight];
    assert!(f.matches(find_identity(recs, "Theorem4a").unwrap()));
    f.tol_classes = vec![TolClass::Loose];
    assert!(!f.matches(find_identity(recs, "Theorem4").unwrap()));
}

#[test]
fn theorem_grid_has_sixty_outcomes() {
    let mut f = Filter::id("Theorem4");
    f.id_prefix = Some("Theorem4".into());
    let rep = run_suite(builtin_identities(), &f, &serial()).unwrap();
    assert_eq!(rep.outcomes_for("Theorem4").count(), 60);
    assert!(rep.summary.all_ok(), "{:?}", rep.summary);
}

#[test]
fn group_c_has_no_failures() {
    let rep = run_suite(builtin_identities(), &Filter::group(Group::C), &serial()).unwrap();
    assert!(rep.summary.count(Status::Pass) > 300);
    assert_eq!(rep.summary.count(Status::Pass), rep.summary.total);
}

#[test]
fn ordering_and_parallel_equivalence() {
    let f = Filter {
        groups: vec![Group::A, Group::G],
        ..Filter::default()
    };
    let one = run_suite(builtin_identities(), &f, &serial()).unwrap();
    let four = run_suite(builtin_identities(), &f, &VerifyConfig { threads: 4, ..serial() }).unwrap();
    assert_eq!(one.outcomes, four.outcomes);
    assert_eq!(render_json(&one), render_json(&VerificationReport { config: one.config, ..four.clone() }));
    let keys: Vec<(&str, usize)> = one.outcomes.iter().map(|o| (o.id.as_str(), o.index)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let counted: usize = one.summary.by_group.values().flat_map(|m| m.values()).sum();
    assert_eq!(counted, one.outcomes.len());
}

#[test]
fn renderings() {
    let rep = run_suite(builtin_identities(), &Filter::id("Lims1"), &serial()).unwrap();
    let json = render_json(&rep);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["outcomes"].as_array().unwrap().len(), 3);
    assert_eq!(v["outcomes"][0]["status"], "PASS");
    assert_eq!(v["summary"]["total"], 3);
    assert_eq!(v["config"]["fingerprint"].as_str().unwrap().len(), 64);
    let keys: Vec<&str> = json.lines().filter_map(|l| l.trim().strip_prefix('"')).map(|l| l.split('"').next().unwrap()).collect();
    let pos = |k: &str| keys.iter().position(|x| *x == k).unwrap();
    assert!(pos("config") < pos("outcomes") && pos("outcomes") < pos("summary"));
    assert!(pos("lhs") < pos("rhs") && pos("abs_residual") < pos("rel_residual"));

    let csv = render_csv(&rep);
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("id,group,kind,tol_class,params,lhs,rhs"));
    let md = render_markdown(&rep);
    assert!(md.contains("| Lims1 | q=0.3 |"));
    assert!(md.contains("| D | 3 | 0 | 0 | 0 | 0 |"));
}

#[test]
fn fingerprint_tracks_the_quadrature_cap() {
    let a = serial();
    let mut b = serial();
    b.eval.quad.eval_cap += 1;
    assert_ne!(fingerprint(&a), fingerprint(&b));
    b.threads = 7;
    b.eval.quad.eval_cap -= 1;
    assert_eq!(fingerprint(&a), fingerprint(&b));
}

#[test]
fn repeated_runs_are_bitwise_identical() {
    let f = Filter::id("Cor4");
    let x = run_suite(builtin_identities(), &f, &serial()).unwrap();
    let y = run_suite(builtin_identities(), &f, &serial()).unwrap();
    assert_eq!(render_json(&x), render_json(&y));
    let timed = run_suite(builtin_identities(), &f, &VerifyConfig { timing: true, ..serial() }).unwrap();
    let timed = VerificationReport { config: x.config, ..timed.without_timing() };
    assert_eq!(render_json(&timed), render_json(&x));
}

#[test]
fn json_reads_back() {
    let f = Filter {
        groups: vec![Group::G],
        ..Filter::default()
    };
    let rep = run_suite(builtin_identities(), &f, &serial()).unwrap();
    let back = parse_report_json(&render_json(&rep)).unwrap();
    assert_eq!(back, rep);
    assert_eq!(render_markdown(&back), render_markdown(&rep));
    assert_eq!(render_csv(&back), render_csv(&rep));
    let broken = render_json(&rep).replacen("\"total\": ", "\"total\": 1", 1);
    assert_eq!(parse_report_json(&broken), Err(ReportParseError::Summary));
    assert!(matches!(parse_report_json("{"), Err(ReportParseError::Json(_))));
}

#[test]
fn tolerance_overrides_move_the_threshold() {
    let recs = records("[identity off]\nkind = numeric\ntol = tight\nlhs = 1 + 1e-9\nrhs = 1\n");
    let mut cfg = serial();
    assert!(cfg.tolerances.set(TolClass::Tight, 1e-8));
    assert!(!cfg.tolerances.set(TolClass::Exact, 1.0));
    let rep = run_suite(&recs, &Filter::all(), &cfg).unwrap();
    assert_eq!(rep.outcomes[0].status, Status::Pass);
    assert_eq!(rep.outcomes[0].threshold, 1e-8);
    assert_ne!(fingerprint(&cfg), fingerprint(&serial()));
}
