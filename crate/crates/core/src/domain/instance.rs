use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::grid::{TimeGrid, MINUTES_PER_DAY};
use crate::error::{Error, Result};
use crate::preprocess::{compatibility_of, CompatibilityMatrix};

/// Role of an activity in the checkout opening/closure rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckoutRole {
    #[default]
    None,
    Opening,
    Closing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Employee {
    pub id: String,
    pub skills: BTreeSet<String>,
    /// `availability[day][offset]`, one entry per slot of the window.
    pub availability: Vec<Vec<bool>>,
    /// Replaces the horizon-wide limit of the rule set for this employee.
    pub max_horizon_minutes: Option<u32>,
}

impl Employee {
    /// Employee available on every slot of every day.
    pub fn always_available(id: impl Into<String>, skills: &[&str], grid: &TimeGrid) -> Self {
        Employee {
            id: id.into(),
            skills: skills.iter().map(|s| s.to_string()).collect(),
            availability: vec![vec![true; grid.num_slots()]; grid.days()],
            max_horizon_minutes: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Activity {
    pub id: String,
    pub required_skills: BTreeSet<String>,
    pub min_consecutive_minutes: u32,
    /// Cost per unmet demand minute.
    pub slack_penalty: u32,
    pub checkout_role: CheckoutRole,
}

impl Activity {
    pub fn new(id: impl Into<String>, required: &[&str], min_consecutive_minutes: u32, slack_penalty: u32) -> Self {
        Activity {
            id: id.into(),
            required_skills: required.iter().map(|s| s.to_string()).collect(),
            min_consecutive_minutes,
            slack_penalty,
            checkout_role: CheckoutRole::None,
        }
    }
}

/// `minutes` of work on `activity` wanted inside `[start_slot, end_slot)` of `day`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Demand {
    pub activity: usize,
    pub day: usize,
    pub start_slot: u32,
    pub end_slot: u32,
    pub minutes: u32,
}

impl Demand {
    pub fn contains(&self, slot: u32) -> bool {
        (self.start_slot..self.end_slot).contains(&slot)
    }

    pub fn len_slots(&self) -> u32 {
        self.end_slot - self.start_slot
    }
}

/// Legal and company limits, all in minutes except the day count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSet {
    pub max_daily_minutes: u32,
    pub max_horizon_minutes: u32,
    pub max_consecutive_days: u32,
    pub max_stretch_minutes: u32,
    pub min_break_minutes: u32,
    pub max_daily_span_minutes: u32,
    pub min_rest_minutes: u32,
    pub min_work_after_break_minutes: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_daily_breaks: Option<u32>,
}

impl RuleSet {
    /// Limits loose enough that only structural rules bind.
    pub fn permissive(grid: &TimeGrid) -> Self {
        let window = grid.num_slots() as u32 * grid.slot_minutes();
        RuleSet {
            max_daily_minutes: window,
            max_horizon_minutes: window * grid.days() as u32,
            max_consecutive_days: grid.days() as u32,
            max_stretch_minutes: window,
            min_break_minutes: 0,
            max_daily_span_minutes: MINUTES_PER_DAY - MINUTES_PER_DAY % grid.slot_minutes(),
            min_rest_minutes: 0,
            min_work_after_break_minutes: 0,
            max_daily_breaks: None,
        }
    }
}

/// Rule limits converted to slot counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotRules {
    pub daily: u32,
    pub horizon: u32,
    pub consecutive_days: u32,
    pub stretch: u32,
    pub rest_break: u32,
    pub span: u32,
    pub rest: u32,
    pub after_break: u32,
    pub max_breaks: Option<u32>,
}

impl SlotRules {
    /// Window length of the sliding max-stretch rule.
    pub fn stretch_window(&self) -> u32 {
        self.stretch + self.rest_break
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EmployeeHistory {
    /// Exclusive end slot of the work on the day before the horizon.
    pub last_end_slot: Option<u32>,
    pub consecutive_days: u32,
    pub minutes_worked: u32,
}

/// Plain instance contents; validated into an [`Instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceData {
    pub grid: TimeGrid,
    pub employees: Vec<Employee>,
    pub activities: Vec<Activity>,
    pub demands: Vec<Demand>,
    pub rules: RuleSet,
    /// One entry per employee.
    pub history: Vec<EmployeeHistory>,
    /// `affinity[employee][activity]`, missing pairs cost 0.
    pub affinity: Vec<Vec<u32>>,
}

impl InstanceData {
    /// Empty history and zero affinity for the given people and tasks.
    pub fn new(
        grid: TimeGrid,
        employees: Vec<Employee>,
        activities: Vec<Activity>,
        demands: Vec<Demand>,
        rules: RuleSet,
    ) -> Self {
        let history = vec![EmployeeHistory::default(); employees.len()];
        let affinity = vec![vec![0; activities.len()]; employees.len()];
        InstanceData {
            grid,
            employees,
            activities,
            demands,
            rules,
            history,
            affinity,
        }
    }
}

/// A validated, immutable problem instance.
#[derive(Debug, Clone)]
pub struct Instance {
    data: InstanceData,
    slot_rules: SlotRules,
    compat: CompatibilityMatrix,
    affinity_divisor: u64,
    /// `(activity, day, offset)` -> demand index.
    demand_at: Vec<Option<u32>>,
    opening: Option<usize>,
    closing: Option<usize>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl Instance {
    pub fn new(data: InstanceData) -> Result<Self> {
        let grid = data.grid;
        let days = grid.days();
        let slots = grid.num_slots();

        check_unique_ids(data.employees.iter().map(|e| e.id.as_str()), "employees")?;
        check_unique_ids(data.activities.iter().map(|a| a.id.as_str()), "activities")?;

        for (r, emp) in data.employees.iter().enumerate() {
            if emp.availability.len() != days || emp.availability.iter().any(|row| row.len() != slots) {
                return Err(Error::invalid(
                    format!("employees[{r}].availability"),
                    format!("expected {days} days x {slots} slots"),
                ));
            }
            if let Some(limit) = emp.max_horizon_minutes {
                grid.minutes_to_slots(limit, &format!("employees[{r}].max_horizon_minutes"))?;
            }
        }

        let mut opening = None;
        let mut closing = None;
        for (a, act) in data.activities.iter().enumerate() {
            grid.minutes_to_slots(
                act.min_consecutive_minutes,
                &format!("activities[{a}].min_consecutive_minutes"),
            )?;
            let slot = match act.checkout_role {
                CheckoutRole::Opening => &mut opening,
                CheckoutRole::Closing => &mut closing,
                CheckoutRole::None => continue,
            };
            if slot.replace(a).is_some() {
                return Err(Error::invalid(
                    format!("activities[{a}].checkout_role"),
                    "at most one activity per checkout role",
                ));
            }
        }

        let mut demand_at = vec![None; data.activities.len() * days * slots];
        for (i, dem) in data.demands.iter().enumerate() {
            let path = format!("demands[{i}]");
            if dem.activity >= data.activities.len() {
                return Err(Error::invalid(path, format!("unknown activity index {}", dem.activity)));
            }
            if dem.day >= days {
                return Err(Error::invalid(path, format!("day {} outside horizon", dem.day + 1)));
            }
            if dem.start_slot >= dem.end_slot {
                return Err(Error::invalid(path, "demand interval must satisfy start < end"));
            }
            if dem.start_slot < grid.first_slot() || dem.end_slot > grid.end_boundary() {
                return Err(Error::invalid(path, "demand interval lies outside the time window"));
            }
            for slot in dem.start_slot..dem.end_slot {
                let cell = &mut demand_at[(dem.activity * days + dem.day) * slots + grid.offset(slot)];
                if let Some(other) = cell.replace(i as u32) {
                    return Err(Error::invalid(
                        path,
                        format!("demand interval overlaps demands[{other}] of the same activity"),
                    ));
                }
            }
        }

        let slot_rules = slot_rules(&data.rules, &grid)?;

        if data.history.len() != data.employees.len() {
            return Err(Error::invalid("history", "one entry per employee is required"));
        }
        for (r, hist) in data.history.iter().enumerate() {
            if let Some(end) = hist.last_end_slot {
                if end < grid.first_slot() || end > grid.end_boundary() {
                    return Err(Error::invalid(
                        format!("history[{r}].last_end"),
                        "end of previous work lies outside the time window",
                    ));
                }
            }
        }

        if data.affinity.len() != data.employees.len()
            || data.affinity.iter().any(|row| row.len() != data.activities.len())
        {
            return Err(Error::invalid("affinity", "expected an employees x activities table"));
        }

        let compat = compatibility_of(&data.employees, &data.activities);
        let affinity_divisor = affinity_divisor(&data, &compat);

        Ok(Instance {
            data,
            slot_rules,
            compat,
            affinity_divisor,
            demand_at,
            opening,
            closing,
        })
    }

    pub fn data(&self) -> &InstanceData {
        &self.data
    }

    pub fn into_data(self) -> InstanceData {
        self.data
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.data.grid
    }

    pub fn employees(&self) -> &[Employee] {
        &self.data.employees
    }

    pub fn activities(&self) -> &[Activity] {
        &self.data.activities
    }

    pub fn demands(&self) -> &[Demand] {
        &self.data.demands
    }

    pub fn rules(&self) -> &RuleSet {
        &self.data.rules
    }

    pub fn slot_rules(&self) -> &SlotRules {
        &self.slot_rules
    }

    pub fn history(&self) -> &[EmployeeHistory] {
        &self.data.history
    }

    pub fn num_employees(&self) -> usize {
        self.data.employees.len()
    }

    pub fn num_activities(&self) -> usize {
        self.data.activities.len()
    }

    pub fn compatibility(&self) -> &CompatibilityMatrix {
        &self.compat
    }

    pub fn is_compatible(&self, employee: usize, activity: usize) -> bool {
        self.compat.get(employee, activity)
    }

    pub fn is_available(&self, employee: usize, offset: usize, day: usize) -> bool {
        self.data.employees[employee].availability[day][offset]
    }

    /// Whether the cell `x(employee, activity, offset, day)` is a model variable.
    pub fn is_materialized(&self, employee: usize, activity: usize, offset: usize, day: usize) -> bool {
        self.is_compatible(employee, activity) && self.is_available(employee, offset, day)
    }

    pub fn affinity(&self, employee: usize, activity: usize) -> u32 {
        self.data.affinity[employee][activity]
    }

    /// Affinity costs enter the objective divided by this value.
    pub fn affinity_divisor(&self) -> u64 {
        self.affinity_divisor
    }

    /// Index of the demand of `activity` covering `offset` on `day`.
    pub fn demand_at(&self, activity: usize, day: usize, offset: usize) -> Option<usize> {
        let slots = self.grid().num_slots();
        self.demand_at[(activity * self.grid().days() + day) * slots + offset].map(|i| i as usize)
    }

    pub fn opening_activity(&self) -> Option<usize> {
        self.opening
    }

    pub fn closing_activity(&self) -> Option<usize> {
        self.closing
    }

    /// Minimum run length in slots on `activity`.
    pub fn min_run_slots(&self, activity: usize) -> u32 {
        self.data.activities[activity].min_consecutive_minutes / self.grid().slot_minutes()
    }

    /// Slots `employee` may still work over the horizon, net of history.
    pub fn horizon_budget(&self, employee: usize) -> u32 {
        let limit = self.data.employees[employee]
            .max_horizon_minutes
            .unwrap_or(self.data.rules.max_horizon_minutes);
        limit.saturating_sub(self.data.history[employee].minutes_worked) / self.grid().slot_minutes()
    }

    pub fn employee_index(&self, id: &str) -> Option<usize> {
        self.data.employees.iter().position(|e| e.id == id)
    }

    pub fn activity_index(&self, id: &str) -> Option<usize> {
        self.data.activities.iter().position(|a| a.id == id)
    }

    /// Number of `x` cells that are model variables.
    pub fn materialized_cells(&self) -> usize {
        let grid = self.grid();
        let mut count = 0;
        for r in 0..self.num_employees() {
            for a in 0..self.num_activities() {
                if !self.is_compatible(r, a) {
                    continue;
                }
                for d in 0..grid.days() {
                    count += self.data.employees[r].availability[d].iter().filter(|&&v| v).count();
                }
            }
        }
        count
    }

    pub fn total_demand_minutes(&self) -> u64 {
        self.data.demands.iter().map(|d| d.minutes as u64).sum()
    }
}

fn check_unique_ids<'a>(ids: impl Iterator<Item = &'a str>, what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for (i, id) in ids.enumerate() {
        if id.is_empty() {
            return Err(Error::invalid(format!("{what}[{i}].id"), "identifier must not be empty"));
        }
        if !seen.insert(id) {
            return Err(Error::invalid(format!("{what}[{i}].id"), format!("duplicate identifier `{id}`")));
        }
    }
    Ok(())
}

fn slot_rules(rules: &RuleSet, grid: &TimeGrid) -> Result<SlotRules> {
    let conv = |minutes: u32, field: &str| grid.minutes_to_slots(minutes, &format!("rules.{field}"));
    if rules.max_consecutive_days == 0 {
        return Err(Error::invalid("rules.max_consecutive_days", "must be at least one day"));
    }
    if rules.max_daily_span_minutes > MINUTES_PER_DAY {
        return Err(Error::invalid("rules.max_daily_span_minutes", "must not exceed 1440"));
    }
    if rules.min_rest_minutes > MINUTES_PER_DAY {
        return Err(Error::invalid("rules.min_rest_minutes", "must not exceed 1440"));
    }
    Ok(SlotRules {
        daily: conv(rules.max_daily_minutes, "max_daily_minutes")?,
        horizon: conv(rules.max_horizon_minutes, "max_horizon_minutes")?,
        consecutive_days: rules.max_consecutive_days,
        stretch: conv(rules.max_stretch_minutes, "max_stretch_minutes")?,
        rest_break: conv(rules.min_break_minutes, "min_break_minutes")?,
        span: conv(rules.max_daily_span_minutes, "max_daily_span_minutes")?,
        rest: conv(rules.min_rest_minutes, "min_rest_minutes")?,
        after_break: conv(rules.min_work_after_break_minutes, "min_work_after_break_minutes")?,
        max_breaks: rules.max_daily_breaks,
    })
}

/// Smallest integer divisor that keeps the whole affinity term below one
/// minute of the cheapest positive slack penalty.
///
/// The bound is the sum, over every available employee slot, of the largest
/// affinity among compatible activities (at most one activity per slot).
fn affinity_divisor(data: &InstanceData, compat: &CompatibilityMatrix) -> u64 {
    let min_penalty = data
        .demands
        .iter()
        .filter(|d| d.minutes > 0)
        .map(|d| data.activities[d.activity].slack_penalty)
        .filter(|&p| p > 0)
        .min();
    let Some(min_penalty) = min_penalty else {
        return 1;
    };
    let mut total: u64 = 0;
    for (r, emp) in data.employees.iter().enumerate() {
        let max_cost = (0..data.activities.len())
            .filter(|&a| compat.get(r, a))
            .map(|a| data.affinity[r][a] as u64)
            .max()
            .unwrap_or(0);
        let available: u64 = emp.availability.iter().flatten().filter(|&&v| v).count() as u64;
        total += max_cost * available;
    }
    total / min_penalty as u64 + 1
}
