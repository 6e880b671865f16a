use iwacoh_cli::report::Verdict;
use iwacoh_cli::run::run_tasks;
use iwacoh_cli::workspace::{DegreeRange, TaskKind, Workspace, WorkspaceError};

const BASIC: &str = include_str!("../workspaces/basic.json");

fn with_body(body: &str) -> String {
    format!(r#"{{"schema": "iwacoh-workspace/1", "ring": {{"p": 2, "e": 1}}, {body}}}"#)
}

fn validation(text: &str) -> (String, String) {
    match Workspace::parse(text) {
        Err(WorkspaceError::Validation { field, message }) => (field, message),
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn example_workspace_parses_and_passes() {
    let ws = Workspace::parse(BASIC).unwrap();
    assert_eq!(ws.tasks.len(), 10);
    let report = run_tasks(&ws, &ws.tasks, 0, false);
    assert_eq!(report.verdict, Verdict::Pass, "{}", report.to_text());
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn cohomology_of_z2_renders_invariants() {
    let ws = Workspace::parse(&with_body(
        r#""groups": {"C2": "cyclic:2"}, "modules": {"M": {"group": "C2", "exps": [1]}},
           "tasks": [{"kind": "cohomology", "module": "M", "degrees": "0..2"}]"#,
    ))
    .unwrap();
    let report = run_tasks(&ws, &ws.tasks, 0, false);
    let text = report.to_text();
    for i in 0..=2 {
        assert!(text.contains(&format!("H^{i} = Z/2")), "{text}");
    }
    assert!(report.to_json().contains(r#""value": "Z/2""#));
}

#[test]
fn direct_sums_render_with_oplus() {
    let ws = Workspace::parse(&with_body(
        r#""groups": {"K": "klein"}, "modules": {"M": {"group": "K", "exps": [1]}},
           "tasks": [{"kind": "cohomology", "module": "M", "degrees": "1..1"}]"#,
    ))
    .unwrap();
    let text = run_tasks(&ws, &ws.tasks, 0, false).to_text();
    assert!(text.contains("H^1 = Z/2 ⊕ Z/2"), "{text}");
}

#[test]
fn parse_errors_carry_a_location() {
    let err = Workspace::parse("{\n  \"schema\": \"iwacoh-workspace/1\",\n  \"ring\": {\"p\": 2 \"e\": 1}\n}").unwrap_err();
    match err {
        WorkspaceError::Parse { line, column, .. } => assert_eq!((line, column), (3, 19)),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let err = Workspace::parse(&with_body(r#""modulez": {}"#)).unwrap_err();
    assert!(matches!(err, WorkspaceError::Parse { .. }), "{err}");
    assert!(err.to_string().contains("modulez"), "{err}");
}

#[test]
fn wrong_schema_is_rejected() {
    let (field, message) = validation(r#"{"schema": "iwacoh-workspace/9", "ring": {"p": 2, "e": 1}}"#);
    assert_eq!(field, "schema");
    assert!(message.contains("iwacoh-workspace/9"));
}

#[test]
fn non_associative_tables_name_the_triple() {
    let (field, message) = validation(&with_body(
        r#""groups": {"bad": {"table": [[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],[3,2,4,0,1],[4,3,1,2,0]]}}"#,
    ));
    assert_eq!(field, "groups.bad");
    assert!(message.contains("not associative at ("), "{message}");
}

#[test]
fn undeclared_modules_are_reported() {
    let (field, message) = validation(&with_body(r#""tasks": [{"kind": "tate", "module": "X"}]"#));
    assert_eq!(field, "tasks[0].module");
    assert_eq!(message, "unknown module 'X'");
}

#[test]
fn undeclared_groups_towers_and_suites_are_reported() {
    let (field, message) = validation(&with_body(r#""modules": {"M": {"group": "G", "exps": [1]}}"#));
    assert_eq!((field.as_str(), message.as_str()), ("modules.M.group", "unknown group 'G'"));
    let (field, _) = validation(&with_body(r#""tasks": [{"kind": "tower", "tower": "t", "degree": 1}]"#));
    assert_eq!(field, "tasks[0].tower");
    let (field, message) = validation(&with_body(r#""tasks": [{"kind": "verify", "suites": ["signs", "nope"]}]"#));
    assert_eq!(field, "tasks[0].suites");
    assert!(message.contains("nope"));
}

#[test]
fn actions_must_be_homomorphisms() {
    // The generator of C2 acting by 2 on Z/4 is not invertible.
    let text = r#"{"schema": "iwacoh-workspace/1", "ring": {"p": 2, "e": 2}, "groups": {"C2": "cyclic:2"},
                   "modules": {"M": {"group": "C2", "exps": [2], "action": [[[1]], [[2]]]}}}"#;
    let (field, _) = validation(text);
    assert_eq!(field, "modules.M.action");
}

#[test]
fn matrix_shapes_are_checked() {
    let text = with_body(
        r#""groups": {"C2": "cyclic:2"}, "modules": {"M": {"group": "C2", "exps": [1]}},
           "complexes": {"X": {"lo": 0, "terms": ["M", "M"], "diffs": [[[1, 0]]]}}"#,
    );
    let (field, message) = validation(&text);
    assert_eq!(field, "complexes.X.diffs[0][0]");
    assert!(message.contains("expected 1"), "{message}");
}

#[test]
fn degree_ranges_parse_inclusively() {
    let r: DegreeRange = "-2..1".parse().unwrap();
    assert_eq!(r.degrees().collect::<Vec<_>>(), vec![-2, -1, 0, 1]);
    assert!("3..1".parse::<DegreeRange>().is_err());
    assert!("1-3".parse::<DegreeRange>().is_err());
    let (field, _) = validation(&with_body(
        r#""groups": {"C2": "cyclic:2"}, "modules": {"M": {"group": "C2", "exps": [1]}},
           "tasks": [{"kind": "tate", "module": "M", "degrees": "a..b"}]"#,
    ));
    assert_eq!(field, "tasks[0].degrees");
}

#[test]
fn empty_suite_list_gives_an_empty_passing_report() {
    let ws = Workspace::parse(&with_body(r#""tasks": [{"kind": "verify", "suites": []}]"#)).unwrap();
    assert!(matches!(&ws.tasks[0].kind, TaskKind::Verify { suites } if suites.is_empty()));
    let report = run_tasks(&ws, &ws.tasks, 0, false);
    assert_eq!(report.verdict, Verdict::Pass);
    assert!(report.tasks[0].checks.is_empty());
}

#[test]
fn parallel_runs_keep_task_order() {
    let ws = Workspace::parse(BASIC).unwrap();
    let seq = run_tasks(&ws, &ws.tasks, 3, false);
    let par = run_tasks(&ws, &ws.tasks, 3, true);
    assert_eq!(seq.to_json(), par.to_json());
}

#[test]
fn task_errors_fail_the_report() {
    // Ordinary cohomology is not defined in negative degrees.
    let ws = Workspace::parse(&with_body(
        r#""groups": {"C2": "cyclic:2"}, "modules": {"M": {"group": "C2", "exps": [1]}},
           "tasks": [{"kind": "cohomology", "module": "M", "degrees": "-1..0"}]"#,
    ))
    .unwrap();
    let report = run_tasks(&ws, &ws.tasks, 0, false);
    assert_eq!(report.verdict, Verdict::Fail);
    assert_eq!(report.exit_code(), 1);
    assert!(report.tasks[0].error.as_deref().unwrap().contains("degrees ≥ 0"));
}

#[test]
fn short_towers_are_inconclusive() {
    let ws = Workspace::parse(&with_body(
        r#""towers": {"t": {"kind": "cyclic_p_tower", "levels": 1, "window": 1}},
           "tasks": [{"kind": "tower", "tower": "t", "degree": 1}]"#,
    ))
    .unwrap();
    let report = run_tasks(&ws, &ws.tasks, 0, false);
    assert_eq!(report.verdict, Verdict::Inconclusive);
    assert_eq!(report.exit_code(), 1);
}
