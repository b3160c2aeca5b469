use std::fs;

use clap::Parser;
use shiftmip::cli::{
    cmd_build_milp, cmd_gen, cmd_import, cmd_solve, cmd_validate, run, Cli, Command, ModelFormat, EXIT_INPUT, EXIT_OK,
    EXIT_VIOLATIONS,
};
use shiftmip::domain::{Assignment, Solution};
use shiftmip::generate::GenParams;
use shiftmip::io::{load_instance, merge_plan_path, save_solution};

fn small() -> GenParams {
    GenParams { employees: 4, activities: 4, days: 2, seed: 3, ..GenParams::default() }
}

#[test]
fn commands_report_status() {
    let dir = tempfile::tempdir().unwrap();
    let inst_path = dir.path().join("store.json");
    assert_eq!(cmd_gen(&small(), &inst_path).status, EXIT_OK);

    let sol_path = dir.path().join("store.solution.json");
    let solved = cmd_solve(&inst_path, &sol_path, 5.0, 0, true, None);
    assert_eq!(solved.status, EXIT_OK, "{}", solved.summary);
    assert!(solved.summary.contains("Violations: 0"));
    let valid = cmd_validate(&inst_path, &sol_path, None);
    assert_eq!(valid.status, EXIT_OK, "{}", valid.summary);

    // someone working all day every day
    let inst = load_instance(&inst_path).unwrap();
    let mut x = Assignment::empty(&inst);
    for d in 0..inst.grid().days() {
        for t in 0..inst.grid().num_slots() {
            x.set(0, 0, t, d, true);
        }
    }
    let bad_path = dir.path().join("bad.json");
    save_solution(&inst, &Solution::from_assignment(&inst, x).unwrap(), &bad_path).unwrap();
    let bad = cmd_validate(&inst_path, &bad_path, None);
    assert_eq!(bad.status, EXIT_VIOLATIONS);
    assert!(!bad.summary.contains("Violations: 0"));

    assert_eq!(cmd_validate(&dir.path().join("missing.json"), &sol_path, None).status, EXIT_INPUT);
    fs::write(dir.path().join("junk.json"), "{").unwrap();
    assert_eq!(cmd_validate(&dir.path().join("junk.json"), &sol_path, None).status, EXIT_INPUT);
    assert_eq!(cmd_solve(&inst_path, &sol_path, -1.0, 0, false, None).status, EXIT_INPUT);
}

#[test]
fn model_warm_start_and_import_line_up() {
    let dir = tempfile::tempdir().unwrap();
    let inst_path = dir.path().join("store.json");
    cmd_gen(&small(), &inst_path);
    let model_path = dir.path().join("store.mps");
    let built = cmd_build_milp(&inst_path, &model_path, true, ModelFormat::Mps);
    assert_eq!(built.status, EXIT_OK, "{}", built.summary);
    assert!(merge_plan_path(&model_path).exists());

    let ws = dir.path().join("ws.txt");
    let out = dir.path().join("sol.json");
    assert_eq!(cmd_solve(&inst_path, &out, 5.0, 0, true, Some(&ws)).status, EXIT_OK);
    let imported = dir.path().join("imported.json");
    let outcome = cmd_import(&inst_path, &ws, Some(&merge_plan_path(&model_path)), &imported);
    assert_eq!(outcome.status, EXIT_OK, "{}", outcome.summary);
    assert_eq!(cmd_validate(&inst_path, &imported, None).status, EXIT_OK);
}

#[test]
fn instance_without_activities_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    fs::write(
        &path,
        r#"{"schema_version": 1,
            "grid": {"slot_minutes": 30, "window_start": 480, "window_end": 600, "days": 1},
            "rules": {"max_daily_minutes": 480, "max_horizon_minutes": 480, "max_consecutive_days": 6,
                      "max_stretch_minutes": 360, "min_break_minutes": 30, "max_daily_span_minutes": 600,
                      "min_rest_minutes": 660, "min_work_after_break_minutes": 60},
            "employees": [], "activities": [], "demands": []}"#,
    )
    .unwrap();
    let outcome = cmd_build_milp(&path, &dir.path().join("m.mps"), false, ModelFormat::Lp);
    assert_eq!(outcome.status, EXIT_INPUT, "{}", outcome.summary);
    assert!(outcome.summary.contains("empty instance"), "{}", outcome.summary);
}

#[test]
fn arguments_and_defaults() {
    let cli = Cli::try_parse_from(["shiftmip", "solve", "store.json"]).unwrap();
    match cli.command {
        Command::Solve { time_limit, seed, merge, out, .. } => {
            assert_eq!(time_limit, 3600.0);
            assert_eq!(seed, 0);
            assert!(!merge && out.is_none());
        }
        other => panic!("{other:?}"),
    }
    assert!(Cli::try_parse_from(["shiftmip", "build-milp", "a.json", "m.x", "--format", "xls"]).is_err());
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let cli = Cli::try_parse_from(["shiftmip", "gen", "--employees", "2", "--ts", "30", out.to_str().unwrap()]).unwrap();
    assert_eq!(run(cli).status, EXIT_OK);
    assert_eq!(load_instance(&out).unwrap().num_employees(), 2);
}
