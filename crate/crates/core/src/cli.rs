//! Command-line commands. Each returns a [`CommandOutcome`] instead of
//! exiting, so the binary stays a thin wrapper.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::domain::{Instance, Solution};
use crate::error::{Error, Result};
use crate::formulation::{build_model, emit_lp, emit_mps, model_stats};
use crate::generate::{generate, GenParams};
use crate::heuristics::{greedy, improve, SearchConfig};
use crate::io::{
    format_values, import_external_solution, load_instance, load_merge_plan, load_solution, merge_plan_path,
    read_values, save_instance, save_merge_plan, save_solution, warm_start_values,
};
use crate::preprocess::{build_compatibility, merge_identical, redistribute, MergePlan};
use crate::validator::{check, format_percent, format_table, metrics, DepartmentMap, MetricsRow, ViolationReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATIONS: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    /// 0 success, 1 violations found, 2 bad input.
    pub status: u8,
    pub summary: String,
    /// File written by the command, if any.
    pub report: Option<PathBuf>,
}

impl CommandOutcome {
    fn input_error(err: Error) -> Self {
        CommandOutcome { status: EXIT_INPUT, summary: format!("error: {err}"), report: None }
    }

    fn from_result(result: Result<CommandOutcome>) -> Self {
        result.unwrap_or_else(Self::input_error)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelFormat {
    Mps,
    Lp,
}

#[derive(Debug, Parser)]
#[command(name = "shiftmip", version, about = "Shift design and task scheduling for retail stores")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a solution against every rule and print its metrics.
    Validate {
        instance: PathBuf,
        solution: PathBuf,
        /// JSON object mapping activity ids to departments.
        #[arg(long)]
        departments: Option<PathBuf>,
    },
    /// Write the MILP model as MPS or LP.
    BuildMilp {
        instance: PathBuf,
        out: PathBuf,
        /// Merge interchangeable activities first.
        #[arg(long)]
        merge: bool,
        #[arg(long, value_enum, default_value_t = ModelFormat::Mps)]
        format: ModelFormat,
    },
    /// Greedy warm start followed by local search.
    Solve {
        instance: PathBuf,
        /// Seconds of local search.
        #[arg(long, default_value_t = 3600.0)]
        time_limit: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        merge: bool,
        /// Solution file; defaults to the instance path with `.solution.json`.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write the greedy schedule as `name value` lines for a MILP solver.
        #[arg(long)]
        warm_start: Option<PathBuf>,
    },
    /// Side-by-side metrics of two solutions.
    Compare {
        instance: PathBuf,
        solution_a: PathBuf,
        solution_b: PathBuf,
        departments: PathBuf,
    },
    /// Random instance.
    Gen {
        #[arg(long, default_value_t = 10)]
        employees: usize,
        #[arg(long, default_value_t = 6)]
        activities: usize,
        #[arg(long, default_value_t = 7)]
        days: u32,
        /// Slot length in minutes.
        #[arg(long, default_value_t = 15)]
        ts: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        out: PathBuf,
    },
    /// Turn solver output (`name value` lines) into a solution file.
    Import {
        instance: PathBuf,
        values: PathBuf,
        /// Merge plan the model was built with.
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

pub fn run(cli: Cli) -> CommandOutcome {
    match cli.command {
        Command::Validate { instance, solution, departments } => cmd_validate(&instance, &solution, departments.as_deref()),
        Command::BuildMilp { instance, out, merge, format } => cmd_build_milp(&instance, &out, merge, format),
        Command::Solve { instance, time_limit, seed, merge, out, warm_start } => {
            let out = out.unwrap_or_else(|| instance.with_extension("solution.json"));
            cmd_solve(&instance, &out, time_limit, seed, merge, warm_start.as_deref())
        }
        Command::Compare { instance, solution_a, solution_b, departments } => {
            cmd_compare(&instance, &solution_a, &solution_b, &departments)
        }
        Command::Gen { employees, activities, days, ts, seed, out } => {
            cmd_gen(&GenParams { employees, activities, days, slot_minutes: ts, seed }, &out)
        }
        Command::Import { instance, values, plan, out } => cmd_import(&instance, &values, plan.as_deref(), &out),
    }
}

fn load_departments(path: &Path) -> Result<DepartmentMap> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn violation_lines(inst: &Instance, report: &ViolationReport, out: &mut String) {
    writeln!(out, "Violations: {}", report.total()).unwrap();
    let counts: Vec<String> = report
        .counts()
        .into_iter()
        .filter(|&(_, n)| n > 0)
        .map(|(f, n)| format!("{f}: {n}"))
        .collect();
    if !counts.is_empty() {
        writeln!(out, "  by family: {}", counts.join(", ")).unwrap();
    }
    for v in &report.violations {
        writeln!(out, "  - {}", v.describe(inst)).unwrap();
    }
}

pub fn cmd_validate(instance: &Path, solution: &Path, departments: Option<&Path>) -> CommandOutcome {
    CommandOutcome::from_result((|| {
        let inst = load_instance(instance)?;
        let sol = load_solution(solution, &inst)?;
        let map = match departments {
            Some(path) => load_departments(path)?,
            None => DepartmentMap::single(&inst, "store"),
        };
        let report = check(&inst, &sol.assignment)?;
        let m = metrics(&inst, &sol, &map)?;
        let mut summary = String::new();
        violation_lines(&inst, &report, &mut summary);
        writeln!(summary, "Objective: {}", sol.cost).unwrap();
        writeln!(summary, "Slack: {:.2} h", m.total_slack_hours).unwrap();
        writeln!(summary, "Department demand satisfaction: {}%", format_percent(m.department_demand_satisfaction)).unwrap();
        let status = if report.is_empty() { EXIT_OK } else { EXIT_VIOLATIONS };
        Ok(CommandOutcome { status, summary, report: None })
    })())
}

fn merged(inst: &Instance, merge: bool) -> (Instance, MergePlan) {
    if merge {
        merge_identical(inst)
    } else {
        (inst.clone(), MergePlan::default())
    }
}

pub fn cmd_build_milp(instance: &Path, out: &Path, merge: bool, format: ModelFormat) -> CommandOutcome {
    CommandOutcome::from_result((|| {
        let inst = load_instance(instance)?;
        if inst.num_activities() == 0 {
            return Err(Error::invalid("activities", "empty instance: no activities"));
        }
        let (target, plan) = merged(&inst, merge);
        let model = build_model(&target, &build_compatibility(&target))?;
        match format {
            ModelFormat::Mps => emit_mps(&model, out)?,
            ModelFormat::Lp => emit_lp(&model, out)?,
        }
        let stats = model_stats(&model);
        let mut summary = String::new();
        writeln!(summary, "Variables: {} ({} binary)", stats.variables, stats.binaries).unwrap();
        writeln!(summary, "Rows: {}", stats.rows).unwrap();
        writeln!(summary, "Nonzeros: {}", stats.nonzeros).unwrap();
        if merge {
            let full = model_stats(&build_model(&inst, &build_compatibility(&inst))?);
            let cut = |before: usize, after: usize| {
                if before == 0 {
                    0.0
                } else {
                    100.0 * (before - after) as f64 / before as f64
                }
            };
            writeln!(
                summary,
                "Merged {} groups: activities {} -> {}, binaries {} -> {} (-{:.1}%), variables -{:.1}%",
                plan.groups.len(),
                inst.num_activities(),
                target.num_activities(),
                full.binaries,
                stats.binaries,
                cut(full.binaries, stats.binaries),
                cut(full.variables, stats.variables),
            )
            .unwrap();
            let plan_path = merge_plan_path(out);
            save_merge_plan(&plan, &plan_path)?;
            writeln!(summary, "Wrote {}", plan_path.display()).unwrap();
        }
        writeln!(summary, "Wrote {}", out.display()).unwrap();
        Ok(CommandOutcome { status: EXIT_OK, summary, report: Some(out.to_path_buf()) })
    })())
}

pub fn cmd_solve(
    instance: &Path,
    out: &Path,
    time_limit: f64,
    seed: u64,
    merge: bool,
    warm_start: Option<&Path>,
) -> CommandOutcome {
    CommandOutcome::from_result((|| {
        let started = Instant::now();
        let inst = load_instance(instance)?;
        let config = SearchConfig::with_limit(time_limit, seed)?;
        let (target, plan) = merged(&inst, merge);
        let start = greedy(&target, &build_compatibility(&target), None);
        if let Some(path) = warm_start {
            let model = build_model(&target, &build_compatibility(&target))?;
            fs::write(path, format_values(&warm_start_values(&model, &target, &start)?))?;
        }
        let best = improve(&target, &start, &config);
        let sol: Solution = if merge { redistribute(&best, &plan, &inst)? } else { best };
        let report = check(&inst, &sol.assignment)?;
        save_solution(&inst, &sol, out)?;
        let mut summary = String::new();
        writeln!(summary, "Objective: {} (greedy {})", sol.cost, start.cost).unwrap();
        writeln!(summary, "Slack: {:.2} h", sol.total_slack_minutes() as f64 / 60.0).unwrap();
        violation_lines(&inst, &report, &mut summary);
        writeln!(summary, "Runtime: {:.2} s", started.elapsed().as_secs_f64()).unwrap();
        writeln!(summary, "Wrote {}", out.display()).unwrap();
        let status = if report.is_empty() { EXIT_OK } else { EXIT_VIOLATIONS };
        Ok(CommandOutcome { status, summary, report: Some(out.to_path_buf()) })
    })())
}

pub fn cmd_compare(instance: &Path, solution_a: &Path, solution_b: &Path, departments: &Path) -> CommandOutcome {
    CommandOutcome::from_result((|| {
        let inst = load_instance(instance)?;
        let map = load_departments(departments)?;
        let name = instance.file_stem().map_or_else(|| "instance".to_string(), |s| s.to_string_lossy().into_owned());
        let mut rows = Vec::new();
        let mut legend = String::new();
        for (case, path) in [("A", solution_a), ("B", solution_b)] {
            let sol = load_solution(path, &inst)?;
            rows.push(MetricsRow { instance: name.clone(), case: case.to_string(), metrics: metrics(&inst, &sol, &map)? });
            writeln!(legend, "{case}: {}", path.display()).unwrap();
        }
        let status = if rows.iter().all(|r| r.metrics.violation_count == 0) { EXIT_OK } else { EXIT_VIOLATIONS };
        Ok(CommandOutcome { status, summary: format!("{}{legend}", format_table(&rows)), report: None })
    })())
}

pub fn cmd_gen(params: &GenParams, out: &Path) -> CommandOutcome {
    CommandOutcome::from_result((|| {
        let inst = generate(params)?;
        save_instance(&inst, out)?;
        let summary = format!(
            "Wrote {}: {} employees, {} activities, {} demands, {} days of {} slots\n",
            out.display(),
            inst.num_employees(),
            inst.num_activities(),
            inst.demands().len(),
            inst.grid().days(),
            inst.grid().num_slots()
        );
        Ok(CommandOutcome { status: EXIT_OK, summary, report: Some(out.to_path_buf()) })
    })())
}

pub fn cmd_import(instance: &Path, values: &Path, plan: Option<&Path>, out: &Path) -> CommandOutcome {
    CommandOutcome::from_result((|| {
        let inst = load_instance(instance)?;
        let plan = plan.map(load_merge_plan).transpose()?;
        let imported = import_external_solution(&read_values(values)?, &inst, plan.as_ref())?;
        save_solution(&inst, &imported.solution, out)?;
        let mut summary = String::new();
        writeln!(summary, "Objective: {}", imported.solution.cost).unwrap();
        violation_lines(&inst, &imported.violations, &mut summary);
        writeln!(summary, "Wrote {}", out.display()).unwrap();
        let status = if imported.violations.is_empty() { EXIT_OK } else { EXIT_VIOLATIONS };
        Ok(CommandOutcome { status, summary, report: Some(out.to_path_buf()) })
    })())
}
