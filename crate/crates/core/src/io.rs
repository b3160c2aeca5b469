//! JSON documents for instances, solutions and merge plans, and the plain
//! `name value` format used to exchange variable values with MILP solvers.
//!
//! Documents express every time as minutes of the day and every day as
//! `1..=days`; slot indices never appear in files.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::domain::{
    boundary_of_minute, slot_of_minute, Activity, Assignment, CheckoutRole, Demand, Employee, EmployeeHistory,
    Instance, InstanceData, RuleSet, Solution, TimeGrid,
};
use crate::error::{Error, Result};
use crate::formulation::{build_model, canonical_point, MilpModel, VarKey, VarKind};
use crate::preprocess::{build_compatibility, redistribute, MergePlan};
use crate::validator::{check, ViolationReport};

pub const SCHEMA_VERSION: u32 = 1;

/// Slack on the bounds of imported values.
pub const IMPORT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub schema_version: u32,
    pub grid: GridDoc,
    pub rules: RuleSet,
    pub employees: Vec<EmployeeDoc>,
    pub activities: Vec<ActivityDoc>,
    pub demands: Vec<DemandDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<HistoryDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub affinity: Vec<AffinityDoc>,
}

/// Working window `[window_start, window_end)` repeated on each day.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub slot_minutes: u32,
    pub window_start: u32,
    pub window_end: u32,
    pub days: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmployeeDoc {
    pub id: String,
    pub skills: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unavailable: Vec<IntervalDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_horizon_minutes: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalDoc {
    pub day: u32,
    pub start: u32,
    pub end: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActivityDoc {
    pub id: String,
    pub required_skills: Vec<String>,
    #[serde(default)]
    pub min_consecutive_minutes: u32,
    pub slack_penalty: u32,
    #[serde(default, skip_serializing_if = "is_no_role")]
    pub checkout_role: CheckoutRole,
}

fn is_no_role(role: &CheckoutRole) -> bool {
    *role == CheckoutRole::None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandDoc {
    pub activity: String,
    pub day: u32,
    pub start: u32,
    pub end: u32,
    pub minutes: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistoryDoc {
    pub employee: String,
    /// End minute of the work on the day before the horizon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_end: Option<u32>,
    #[serde(default)]
    pub consecutive_days: u32,
    #[serde(default)]
    pub minutes_worked: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffinityDoc {
    pub employee: String,
    pub activity: String,
    pub cost: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDocument {
    pub schema_version: u32,
    /// Informational; recomputed on load.
    pub objective: f64,
    pub total_slack_minutes: u64,
    pub shifts: Vec<ShiftDoc>,
    pub slacks: Vec<SlackDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftDoc {
    pub employee: String,
    pub day: u32,
    pub start: u32,
    pub end: u32,
    pub segments: Vec<SegmentDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDoc {
    pub activity: String,
    pub start: u32,
    pub end: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlackDoc {
    pub activity: String,
    pub day: u32,
    pub start: u32,
    pub end: u32,
    pub minutes: u32,
}

fn lookup<'a>(ids: impl Iterator<Item = &'a str>) -> HashMap<&'a str, usize> {
    ids.enumerate().map(|(i, id)| (id, i)).collect()
}

fn find(index: &HashMap<&str, usize>, id: &str, path: String, kind: &str) -> Result<usize> {
    index
        .get(id)
        .copied()
        .ok_or_else(|| Error::invalid(path, format!("unknown {kind} `{id}`")))
}

fn day_index(day: u32, days: usize, path: String) -> Result<usize> {
    if day == 0 || day as usize > days {
        return Err(Error::invalid(path, format!("day {day} outside 1..={days}")));
    }
    Ok(day as usize - 1)
}

fn at(path: String) -> impl FnOnce(Error) -> Error {
    move |e| Error::invalid(path, e.to_string())
}

/// `[start, end)` in minutes as a slot range, both ends on the grid.
fn slot_range(grid: &TimeGrid, start: u32, end: u32, path: &str) -> Result<(u32, u32)> {
    let s = slot_of_minute(grid, start).map_err(at(format!("{path}.start")))?;
    let e = boundary_of_minute(grid, end).map_err(at(format!("{path}.end")))?;
    if s >= e {
        return Err(Error::invalid(path, format!("interval [{start}, {end}) is empty")));
    }
    Ok((s, e))
}

impl InstanceDocument {
    /// Canonical document of an instance.
    pub fn from_instance(inst: &Instance) -> Self {
        let grid = inst.grid();
        let ts = grid.slot_minutes();
        let minute = |offset: usize| grid.minute_of_slot(grid.slot_at(offset));
        let employees = inst
            .employees()
            .iter()
            .map(|e| {
                let mut unavailable = Vec::new();
                for (d, row) in e.availability.iter().enumerate() {
                    let mut t = 0;
                    while t < row.len() {
                        if row[t] {
                            t += 1;
                            continue;
                        }
                        let s = t;
                        while t < row.len() && !row[t] {
                            t += 1;
                        }
                        unavailable.push(IntervalDoc {
                            day: d as u32 + 1,
                            start: minute(s),
                            end: minute(t - 1) + ts,
                        });
                    }
                }
                EmployeeDoc {
                    id: e.id.clone(),
                    skills: e.skills.iter().cloned().collect(),
                    unavailable,
                    max_horizon_minutes: e.max_horizon_minutes,
                }
            })
            .collect();
        let activities = inst
            .activities()
            .iter()
            .map(|a| ActivityDoc {
                id: a.id.clone(),
                required_skills: a.required_skills.iter().cloned().collect(),
                min_consecutive_minutes: a.min_consecutive_minutes,
                slack_penalty: a.slack_penalty,
                checkout_role: a.checkout_role,
            })
            .collect();
        let demands = inst.demands().iter().map(|d| demand_doc(inst, d)).collect();
        let history = inst
            .history()
            .iter()
            .enumerate()
            .filter(|(_, h)| **h != EmployeeHistory::default())
            .map(|(r, h)| HistoryDoc {
                employee: inst.employees()[r].id.clone(),
                last_end: h.last_end_slot.map(|s| grid.minute_of_slot(s)),
                consecutive_days: h.consecutive_days,
                minutes_worked: h.minutes_worked,
            })
            .collect();
        let mut affinity = Vec::new();
        for (r, e) in inst.employees().iter().enumerate() {
            for (a, act) in inst.activities().iter().enumerate() {
                let cost = inst.affinity(r, a);
                if cost != 0 {
                    affinity.push(AffinityDoc { employee: e.id.clone(), activity: act.id.clone(), cost });
                }
            }
        }
        InstanceDocument {
            schema_version: SCHEMA_VERSION,
            grid: GridDoc {
                slot_minutes: ts,
                window_start: grid.minute_of_slot(grid.first_slot()),
                window_end: grid.minute_of_slot(grid.end_boundary()),
                days: grid.days() as u32,
            },
            rules: inst.rules().clone(),
            employees,
            activities,
            demands,
            history,
            affinity,
        }
    }

    /// Validated instance; errors name the offending field.
    pub fn to_instance(&self) -> Result<Instance> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::invalid(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        let g = &self.grid;
        if g.slot_minutes == 0 || 1440 % g.slot_minutes != 0 {
            return Err(Error::invalid("grid.slot_minutes", format!("ts must divide 1440 (got {})", g.slot_minutes)));
        }
        if g.window_end <= g.window_start || g.window_end > 1440 {
            return Err(Error::invalid("grid.window_end", "window must end after it starts and within the day"));
        }
        if !g.window_end.is_multiple_of(g.slot_minutes) {
            return Err(Error::invalid("grid.window_end", format!("{} is not a multiple of ts", g.window_end)));
        }
        let grid = TimeGrid::from_minutes(g.slot_minutes, g.window_start, g.window_end - g.slot_minutes, g.days)?;
        let days = grid.days();

        let mut employees = Vec::with_capacity(self.employees.len());
        for (r, doc) in self.employees.iter().enumerate() {
            let skills: Vec<&str> = doc.skills.iter().map(String::as_str).collect();
            let mut emp = Employee::always_available(doc.id.clone(), &skills, &grid);
            emp.max_horizon_minutes = doc.max_horizon_minutes;
            for (j, iv) in doc.unavailable.iter().enumerate() {
                let path = format!("employees[{r}].unavailable[{j}]");
                let d = day_index(iv.day, days, format!("{path}.day"))?;
                let (s, e) = slot_range(&grid, iv.start, iv.end, &path)?;
                for slot in s..e {
                    emp.availability[d][grid.offset(slot)] = false;
                }
            }
            employees.push(emp);
        }
        let activities: Vec<Activity> = self
            .activities
            .iter()
            .map(|doc| {
                let req: Vec<&str> = doc.required_skills.iter().map(String::as_str).collect();
                let mut act = Activity::new(doc.id.clone(), &req, doc.min_consecutive_minutes, doc.slack_penalty);
                act.checkout_role = doc.checkout_role;
                act
            })
            .collect();
        let emp_ix = lookup(self.employees.iter().map(|e| e.id.as_str()));
        let act_ix = lookup(self.activities.iter().map(|a| a.id.as_str()));

        let mut demands = Vec::with_capacity(self.demands.len());
        for (i, doc) in self.demands.iter().enumerate() {
            let path = format!("demands[{i}]");
            let activity = find(&act_ix, &doc.activity, format!("{path}.activity"), "activity")?;
            let day = day_index(doc.day, days, format!("{path}.day"))?;
            let start_slot = slot_of_minute(&grid, doc.start).map_err(at(format!("{path}.start")))?;
            let end_slot = boundary_of_minute(&grid, doc.end).map_err(at(format!("{path}.end")))?;
            demands.push(Demand { activity, day, start_slot, end_slot, minutes: doc.minutes });
        }

        let mut data = InstanceData::new(grid, employees, activities, demands, self.rules.clone());
        let mut seen = vec![false; data.employees.len()];
        for (i, doc) in self.history.iter().enumerate() {
            let path = format!("history[{i}]");
            let r = find(&emp_ix, &doc.employee, format!("{path}.employee"), "employee")?;
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::invalid(path, format!("second entry for `{}`", doc.employee)));
            }
            let last_end_slot = doc
                .last_end
                .map(|m| boundary_of_minute(&grid, m))
                .transpose()
                .map_err(at(format!("{path}.last_end")))?;
            data.history[r] = EmployeeHistory {
                last_end_slot,
                consecutive_days: doc.consecutive_days,
                minutes_worked: doc.minutes_worked,
            };
        }
        let mut given = HashMap::new();
        for (i, doc) in self.affinity.iter().enumerate() {
            let path = format!("affinity[{i}]");
            let r = find(&emp_ix, &doc.employee, format!("{path}.employee"), "employee")?;
            let a = find(&act_ix, &doc.activity, format!("{path}.activity"), "activity")?;
            if given.insert((r, a), ()).is_some() {
                return Err(Error::invalid(path, "pair listed twice"));
            }
            data.affinity[r][a] = doc.cost;
        }
        Instance::new(data)
    }
}

fn demand_doc(inst: &Instance, d: &Demand) -> DemandDoc {
    let grid = inst.grid();
    DemandDoc {
        activity: inst.activities()[d.activity].id.clone(),
        day: d.day as u32 + 1,
        start: grid.minute_of_slot(d.start_slot),
        end: grid.minute_of_slot(d.end_slot),
        minutes: d.minutes,
    }
}

impl SolutionDocument {
    pub fn from_solution(inst: &Instance, sol: &Solution) -> Self {
        let grid = inst.grid();
        let ts = grid.slot_minutes();
        let minute = |offset: usize| grid.minute_of_slot(grid.slot_at(offset));
        let x = &sol.assignment;
        let mut shifts = Vec::new();
        for (r, emp) in inst.employees().iter().enumerate() {
            for d in 0..grid.days() {
                let mut segments = Vec::new();
                for (a, act) in inst.activities().iter().enumerate() {
                    let mut t = 0;
                    while t < grid.num_slots() {
                        if !x.get(r, a, t, d) {
                            t += 1;
                            continue;
                        }
                        let s = t;
                        while t < grid.num_slots() && x.get(r, a, t, d) {
                            t += 1;
                        }
                        segments.push((s, a, SegmentDoc { activity: act.id.clone(), start: minute(s), end: minute(t - 1) + ts }));
                    }
                }
                if segments.is_empty() {
                    continue;
                }
                segments.sort_by_key(|&(s, a, _)| (s, a));
                let start = segments.iter().map(|s| s.2.start).min().unwrap_or_default();
                let end = segments.iter().map(|s| s.2.end).max().unwrap_or_default();
                shifts.push(ShiftDoc {
                    employee: emp.id.clone(),
                    day: d as u32 + 1,
                    start,
                    end,
                    segments: segments.into_iter().map(|s| s.2).collect(),
                });
            }
        }
        let slacks = inst
            .demands()
            .iter()
            .zip(&sol.slacks)
            .map(|(d, &minutes)| {
                let doc = demand_doc(inst, d);
                SlackDoc { activity: doc.activity, day: doc.day, start: doc.start, end: doc.end, minutes }
            })
            .collect();
        SolutionDocument {
            schema_version: SCHEMA_VERSION,
            objective: sol.cost.value(),
            total_slack_minutes: sol.total_slack_minutes(),
            shifts,
            slacks,
        }
    }

    /// Rebuilds the assignment; objective and slacks are recomputed.
    pub fn to_solution(&self, inst: &Instance) -> Result<Solution> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::invalid(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        let grid = inst.grid();
        let emp_ix = lookup(inst.employees().iter().map(|e| e.id.as_str()));
        let act_ix = lookup(inst.activities().iter().map(|a| a.id.as_str()));
        let mut x = Assignment::empty(inst);
        let mut seen = HashMap::new();
        for (i, shift) in self.shifts.iter().enumerate() {
            let path = format!("shifts[{i}]");
            let r = find(&emp_ix, &shift.employee, format!("{path}.employee"), "employee")?;
            let d = day_index(shift.day, grid.days(), format!("{path}.day"))?;
            if seen.insert((r, d), ()).is_some() {
                return Err(Error::invalid(path, format!("second shift of `{}` on day {}", shift.employee, shift.day)));
            }
            let (lo, hi) = slot_range(grid, shift.start, shift.end, &path)?;
            for (j, seg) in shift.segments.iter().enumerate() {
                let seg_path = format!("{path}.segments[{j}]");
                let a = find(&act_ix, &seg.activity, format!("{seg_path}.activity"), "activity")?;
                let (s, e) = slot_range(grid, seg.start, seg.end, &seg_path)?;
                if s < lo || e > hi {
                    return Err(Error::invalid(seg_path, "segment lies outside its shift"));
                }
                for slot in s..e {
                    let t = grid.offset(slot);
                    if x.get(r, a, t, d) {
                        return Err(Error::invalid(seg_path, "overlaps another segment of the same activity"));
                    }
                    x.set(r, a, t, d, true);
                }
            }
        }
        Solution::from_assignment(inst, x)
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn instance_to_string(inst: &Instance) -> String {
    let mut text = serde_json::to_string_pretty(&InstanceDocument::from_instance(inst)).expect("documents serialize");
    text.push('\n');
    text
}

pub fn instance_from_str(text: &str) -> Result<Instance> {
    serde_json::from_str::<InstanceDocument>(text)?.to_instance()
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    read_json::<InstanceDocument>(path.as_ref())?.to_instance()
}

pub fn save_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    write_json(&InstanceDocument::from_instance(inst), path.as_ref())
}

pub fn solution_to_string(inst: &Instance, sol: &Solution) -> String {
    let mut text =
        serde_json::to_string_pretty(&SolutionDocument::from_solution(inst, sol)).expect("documents serialize");
    text.push('\n');
    text
}

pub fn load_solution(path: impl AsRef<Path>, inst: &Instance) -> Result<Solution> {
    read_json::<SolutionDocument>(path.as_ref())?.to_solution(inst)
}

pub fn save_solution(inst: &Instance, sol: &Solution, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, solution_to_string(inst, sol))?;
    Ok(())
}

/// Where the merge plan of a model file is kept.
pub fn merge_plan_path(model_path: impl AsRef<Path>) -> PathBuf {
    let mut name = model_path.as_ref().as_os_str().to_owned();
    name.push(".merge.json");
    PathBuf::from(name)
}

pub fn save_merge_plan(plan: &MergePlan, path: impl AsRef<Path>) -> Result<()> {
    write_json(plan, path.as_ref())
}

pub fn load_merge_plan(path: impl AsRef<Path>) -> Result<MergePlan> {
    read_json(path.as_ref())
}

/// Parses `name value` lines; blank lines and `#` comments are skipped.
pub fn parse_values(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut values = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("line {}: {what}", i + 1));
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad("expected `name value`"));
        };
        let value: f64 = value.parse().map_err(|_| bad("value is not a number"))?;
        if values.insert(name.to_string(), value).is_some() {
            return Err(bad(&format!("`{name}` given twice")));
        }
    }
    Ok(values)
}

pub fn read_values(path: impl AsRef<Path>) -> Result<BTreeMap<String, f64>> {
    parse_values(&fs::read_to_string(path)?)
}

pub fn format_values<V: std::fmt::Display>(values: &[(String, V)]) -> String {
    let mut out = String::new();
    for (name, value) in values {
        writeln!(out, "{name} {value}").expect("writing to a string cannot fail");
    }
    out
}

/// Every model variable at its value for `sol`, in model order.
pub fn warm_start_values(model: &MilpModel, inst: &Instance, sol: &Solution) -> Result<Vec<(String, i64)>> {
    let point = canonical_point(model, inst, &sol.assignment)?;
    Ok(model.variables.iter().zip(point).map(|(v, p)| (v.name.clone(), p)).collect())
}

/// Solution imported from solver output, with the rules it breaks.
#[derive(Debug, Clone)]
pub struct ImportOutcome {
    pub solution: Solution,
    pub violations: ViolationReport,
}

/// Reads solver values for the model of `instance`, or of its merged form
/// when `plan` is given, in which case the schedule is redistributed onto
/// the original activities.
///
/// Assignment variables are taken as worked at 0.5 and above. Slacks are
/// recomputed from the schedule.
pub fn import_external_solution(
    values: &BTreeMap<String, f64>,
    instance: &Instance,
    plan: Option<&MergePlan>,
) -> Result<ImportOutcome> {
    let merged = plan.map(|p| p.apply(instance)).transpose()?;
    let target = merged.as_ref().unwrap_or(instance);
    let model = build_model(target, &build_compatibility(target))?;
    let index: HashMap<&str, usize> = model.variables.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();

    let mut x = Assignment::empty(target);
    for (name, &value) in values {
        let &i = index
            .get(name.as_str())
            .ok_or_else(|| Error::Import(format!("unknown variable `{name}`")))?;
        let var = &model.variables[i];
        let upper = match var.kind {
            VarKind::Binary => Some(1),
            _ => var.upper,
        };
        let below = value < var.lower as f64 - IMPORT_TOLERANCE;
        let above = upper.is_some_and(|u| value > u as f64 + IMPORT_TOLERANCE);
        if !value.is_finite() || below || above {
            return Err(Error::Import(format!("value {value} of `{name}` is out of bounds")));
        }
        if let VarKey::X { employee, activity, slot, day } = var.key {
            if value >= 0.5 {
                x.set(employee, activity, target.grid().offset(slot), day, true);
            }
        }
    }
    let mut solution = Solution::from_assignment(target, x)?;
    if let Some(plan) = plan {
        solution = redistribute(&solution, plan, instance)?;
    }
    let violations = check(instance, &solution.assignment)?;
    Ok(ImportOutcome { solution, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristics::{enumerate_optimal, greedy};

    const MINIMAL: &str = r#"{
  "schema_version": 1,
  "grid": { "slot_minutes": 30, "window_start": 480, "window_end": 660, "days": 1 },
  "rules": {
    "max_daily_minutes": 480, "max_horizon_minutes": 2400, "max_consecutive_days": 6,
    "max_stretch_minutes": 360, "min_break_minutes": 30, "max_daily_span_minutes": 720,
    "min_rest_minutes": 660, "min_work_after_break_minutes": 60
  },
  "employees": [ { "id": "ann", "skills": ["till"] } ],
  "activities": [ { "id": "checkout", "required_skills": ["till"], "slack_penalty": 1 } ],
  "demands": [ { "activity": "checkout", "day": 1, "start": 510, "end": 600, "minutes": 60 } ]
}"#;

    fn minimal() -> Instance {
        instance_from_str(MINIMAL).unwrap()
    }

    fn edited(from: &str, to: &str) -> Result<Instance> {
        assert!(MINIMAL.contains(from));
        instance_from_str(&MINIMAL.replace(from, to))
    }

    #[test]
    fn minimal_document_loads() {
        let inst = minimal();
        assert_eq!((inst.num_employees(), inst.num_activities(), inst.grid().days()), (1, 1, 1));
        assert_eq!(inst.grid().first_slot(), 16);
        assert_eq!(inst.demands()[0].start_slot, 17);
    }

    #[test]
    fn bad_documents_are_rejected_with_a_path() {
        let err = edited(r#""start": 510, "end": 600"#, r#""start": 600, "end": 540"#).unwrap_err();
        assert!(err.to_string().contains("demand interval"), "{err}");
        let err = edited(r#""slot_minutes": 30"#, r#""slot_minutes": 25"#).unwrap_err();
        assert!(err.to_string().contains("ts must divide 1440"), "{err}");
        let err = edited(r#""activity": "checkout""#, r#""activity": "bakery""#).unwrap_err();
        assert!(err.to_string().starts_with("demands[0].activity"), "{err}");
        let err = edited(r#""days": 1"#, r#""days": 1, "weeks": 1"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
        let err = edited(r#""schema_version": 1"#, r#""schema_version": 2"#).unwrap_err();
        assert!(err.to_string().contains("schema_version"), "{err}");
    }

    #[test]
    fn instance_round_trip_is_canonical() {
        let mut data = minimal().into_data();
        data.employees[0].availability[0][2] = false;
        data.employees[0].availability[0][3] = false;
        data.history[0] = EmployeeHistory { last_end_slot: Some(20), consecutive_days: 2, minutes_worked: 90 };
        data.affinity[0][0] = 3;
        let inst = Instance::new(data).unwrap();
        let text = instance_to_string(&inst);
        let back = instance_from_str(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(instance_to_string(&back), text);
        assert!(text.contains(r#""start": 540"#) && text.contains(r#""end": 600"#));
    }

    #[test]
    fn solution_round_trip() {
        let inst = minimal();
        let sol = greedy(&inst, &build_compatibility(&inst), None);
        let text = solution_to_string(&inst, &sol);
        let doc: SolutionDocument = serde_json::from_str(&text).unwrap();
        let back = doc.to_solution(&inst).unwrap();
        assert_eq!(back, sol);

        let empty = SolutionDocument::from_solution(&inst, &Solution::empty(&inst));
        assert!(empty.shifts.is_empty());
        assert_eq!(empty.slacks[0].minutes, 60);
    }

    #[test]
    fn solution_with_unknown_activity_fails() {
        let inst = minimal();
        let mut doc = SolutionDocument::from_solution(&inst, &greedy(&inst, &build_compatibility(&inst), None));
        doc.shifts[0].segments[0].activity = "bakery".into();
        let err = doc.to_solution(&inst).unwrap_err();
        assert!(err.to_string().contains("unknown activity `bakery`"), "{err}");
    }

    #[test]
    fn import_rounds_and_bounds_binaries() {
        let inst = minimal();
        let zero = import_external_solution(&BTreeMap::new(), &inst, None).unwrap();
        assert_eq!(zero.solution.total_slack_minutes(), 60);

        let mut values = BTreeMap::new();
        values.insert("x_r0_a0_t17_d1".to_string(), 0.4);
        let low = import_external_solution(&values, &inst, None).unwrap();
        assert!(low.solution.assignment.is_empty());
        values.insert("x_r0_a0_t17_d1".to_string(), 1.2);
        assert!(import_external_solution(&values, &inst, None).is_err());
        values.clear();
        values.insert("x_r9_a0_t17_d1".to_string(), 1.0);
        assert!(import_external_solution(&values, &inst, None).is_err());
    }

    #[test]
    fn oracle_point_imports_at_oracle_cost() {
        let inst = minimal();
        let (opt, cost) = enumerate_optimal(&inst).unwrap();
        let model = build_model(&inst, &build_compatibility(&inst)).unwrap();
        let values: BTreeMap<String, f64> =
            warm_start_values(&model, &inst, &opt).unwrap().into_iter().map(|(n, v)| (n, v as f64)).collect();
        let imported = import_external_solution(&values, &inst, None).unwrap();
        assert_eq!(imported.solution.cost, cost);
        assert!(imported.violations.is_empty());
    }

    #[test]
    fn value_lines() {
        let parsed = parse_values("# start\nx_r0_a0_t17_d1 1\n\ns_a0_d1_t17_20  30.5\n").unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed["s_a0_d1_t17_20"], 30.5);
        assert!(parse_values("a 1\na 2\n").is_err());
        assert!(parse_values("a b\n").is_err());
        assert_eq!(format_values(&[("a".to_string(), 1), ("b".to_string(), 0)]), "a 1\nb 0\n");
    }
}
