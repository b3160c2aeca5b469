//! Direct feasibility checks, slack and objective computation.

mod metrics;

use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::domain::{Assignment, Cost, Instance, Solution};
use crate::error::Result;

pub use metrics::{format_percent, format_table, metrics, DepartmentMap, Metrics, MetricsRow, TABLE_HEADER};

/// Constraint family a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    D4,
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    G1,
    G3,
    G6,
    #[serde(rename = "availability")]
    Availability,
    #[serde(rename = "compatibility")]
    Compatibility,
    #[serde(rename = "daily-breaks")]
    DailyBreaks,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::D4,
        Family::L1,
        Family::L2,
        Family::L3,
        Family::L4,
        Family::L5,
        Family::L6,
        Family::G1,
        Family::G3,
        Family::G6,
        Family::Availability,
        Family::Compatibility,
        Family::DailyBreaks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::D4 => "D4",
            Family::L1 => "L1",
            Family::L2 => "L2",
            Family::L3 => "L3",
            Family::L4 => "L4",
            Family::L5 => "L5",
            Family::L6 => "L6",
            Family::G1 => "G1",
            Family::G3 => "G3",
            Family::G6 => "G6",
            Family::Availability => "availability",
            Family::Compatibility => "compatibility",
            Family::DailyBreaks => "daily-breaks",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One located breach. Days are 0-based, slots absolute and half-open.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub family: Family,
    pub employee: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub day: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub activity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slots: Option<(u32, u32)>,
}

impl Violation {
    fn new(family: Family, employee: usize) -> Self {
        Violation {
            family,
            employee,
            day: None,
            activity: None,
            slots: None,
        }
    }

    fn on_day(mut self, day: usize) -> Self {
        self.day = Some(day);
        self
    }

    fn on_activity(mut self, activity: usize) -> Self {
        self.activity = Some(activity);
        self
    }

    fn on_slots(mut self, start: u32, end: u32) -> Self {
        self.slots = Some((start, end));
        self
    }

    /// Human-readable location using the instance's identifiers.
    pub fn describe(&self, instance: &Instance) -> String {
        let mut out = format!("{} employee {}", self.family, instance.employees()[self.employee].id);
        if let Some(a) = self.activity {
            out.push_str(&format!(" activity {}", instance.activities()[a].id));
        }
        if let Some(d) = self.day {
            out.push_str(&format!(" day {}", d + 1));
        }
        if let Some((s, e)) = self.slots {
            let ts = instance.grid().slot_minutes();
            out.push_str(&format!(" {}-{}", hhmm(s * ts), hhmm(e * ts)));
        }
        out
    }
}

pub(crate) fn hhmm(minutes: u32) -> String {
    format!("{:02}:{:02}", minutes / 60, minutes % 60)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn total(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, family: Family) -> usize {
        self.violations.iter().filter(|v| v.family == family).count()
    }

    /// Count for every family, in a fixed order.
    pub fn counts(&self) -> Vec<(Family, usize)> {
        Family::ALL.iter().map(|&f| (f, self.count(f))).collect()
    }
}

/// Checks every hard rule directly on the assignment.
pub fn check(instance: &Instance, assignment: &Assignment) -> Result<ViolationReport> {
    assignment.ensure_matches(instance)?;
    let mut violations = Vec::new();
    for r in 0..instance.num_employees() {
        check_employee(instance, assignment, r, &mut violations);
    }
    Ok(ViolationReport { violations })
}

/// Number of violations of one employee's schedule.
pub(crate) fn employee_violations(instance: &Instance, assignment: &Assignment, employee: usize) -> usize {
    let mut out = Vec::new();
    check_employee(instance, assignment, employee, &mut out);
    out.len()
}

/// Windows `(days, rhs)` of the consecutive-days rule for `employee`:
/// at most `rhs` of the listed days may be worked.
pub(crate) fn consecutive_day_windows(instance: &Instance, employee: usize) -> Vec<(Range<usize>, u32)> {
    let cd = instance.slot_rules().consecutive_days as i64;
    let days = instance.grid().days() as i64;
    let streak = instance.history()[employee].consecutive_days as i64;
    let mut windows = Vec::new();
    // windows reaching back before the horizon count the worked history days
    if streak > 0 {
        for s in (1 - cd)..=0 {
            let last = (s + cd).min(days);
            if last < 1 {
                continue;
            }
            let rhs = cd - (1 - s).min(streak);
            windows.push((0..last as usize, rhs as u32));
        }
    }
    for d in 1..=(days - cd) {
        windows.push(((d - 1) as usize..(d + cd) as usize, cd as u32));
    }
    windows.retain(|(range, rhs)| (*rhs as usize) < range.len());
    windows
}

pub(crate) fn check_employee(instance: &Instance, x: &Assignment, r: usize, out: &mut Vec<Violation>) {
    let grid = instance.grid();
    let n = grid.num_slots();
    let days = grid.days();
    let rules = instance.slot_rules();
    let na = instance.num_activities();

    let mut work = vec![0u32; days * n];
    for d in 0..days {
        for t in 0..n {
            work[d * n + t] = x.worked_count(r, t, d);
        }
    }
    let day_work = |d: usize| &work[d * n..(d + 1) * n];
    let day_total: Vec<u32> = (0..days).map(|d| day_work(d).iter().sum()).collect();

    for d in 0..days {
        let row = day_work(d);
        for t in 0..n {
            if row[t] > 1 {
                out.push(Violation::new(Family::D4, r).on_day(d).on_slots(grid.slot_at(t), grid.slot_at(t) + 1));
            }
        }
    }

    for d in 0..days {
        if day_total[d] > rules.daily {
            out.push(Violation::new(Family::L1, r).on_day(d));
        }
    }

    if day_total.iter().sum::<u32>() > instance.horizon_budget(r) {
        out.push(Violation::new(Family::L2, r));
    }

    for (range, rhs) in consecutive_day_windows(instance, r) {
        let worked = range.clone().filter(|&d| day_total[d] > 0).count() as u32;
        if worked > rhs {
            out.push(Violation::new(Family::L3, r).on_day(range.end - 1));
        }
    }

    let window = rules.stretch_window() as usize;
    if window >= 1 && window <= n {
        for d in 0..days {
            let row = day_work(d);
            let mut sum: u32 = row[..window].iter().sum();
            for s in 0..=n - window {
                if s > 0 {
                    sum = sum + row[s + window - 1] - row[s - 1];
                }
                if sum > rules.stretch {
                    out.push(
                        Violation::new(Family::L4, r)
                            .on_day(d)
                            .on_slots(grid.slot_at(s), grid.slot_at(s + window)),
                    );
                }
            }
        }
    }

    let bounds: Vec<Option<(u32, u32)>> = (0..days)
        .map(|d| {
            let row = day_work(d);
            let first = row.iter().position(|&w| w > 0)?;
            let last = row.iter().rposition(|&w| w > 0)?;
            Some((grid.slot_at(first), grid.slot_at(last) + 1))
        })
        .collect();

    for d in 0..days {
        if let Some((b, e)) = bounds[d] {
            if e - b > rules.span {
                out.push(Violation::new(Family::L5, r).on_day(d).on_slots(b, e));
            }
        }
    }

    check_rest(instance, r, &bounds, out);

    let k = rules.after_break as usize;
    if k >= 2 && k <= n {
        for d in 0..days {
            let row = day_work(d);
            push_run_rows(row, k, |s| {
                out.push(Violation::new(Family::G1, r).on_day(d).on_slots(grid.slot_at(s), grid.slot_at(s + k)));
            });
        }
    }

    for a in 0..na {
        let k = instance.min_run_slots(a) as usize;
        if k < 2 || k > n {
            continue;
        }
        for d in 0..days {
            let row: Vec<u32> = (0..n).map(|t| x.get(r, a, t, d) as u32).collect();
            push_run_rows(&row, k, |s| {
                out.push(
                    Violation::new(Family::G3, r)
                        .on_day(d)
                        .on_activity(a)
                        .on_slots(grid.slot_at(s), grid.slot_at(s + k)),
                );
            });
        }
    }

    if let (Some(op), Some(cl)) = (instance.opening_activity(), instance.closing_activity()) {
        for d in 0..days {
            if !checkout_day_ok(x, r, d, n, op, cl) {
                out.push(Violation::new(Family::G6, r).on_day(d));
            }
        }
    }

    for d in 0..days {
        let row = day_work(d);
        for t in 0..n {
            if row[t] > 0 && !instance.is_available(r, t, d) && (t == 0 || row[t - 1] == 0 || instance.is_available(r, t - 1, d)) {
                let end = (t..n).find(|&u| row[u] == 0 || instance.is_available(r, u, d)).unwrap_or(n);
                out.push(
                    Violation::new(Family::Availability, r)
                        .on_day(d)
                        .on_slots(grid.slot_at(t), grid.slot_at(end)),
                );
            }
        }
    }

    for a in (0..na).filter(|&a| !instance.is_compatible(r, a)) {
        for d in 0..days {
            for t in 0..n {
                if x.get(r, a, t, d) && (t == 0 || !x.get(r, a, t - 1, d)) {
                    let end = (t..n).find(|&u| !x.get(r, a, u, d)).unwrap_or(n);
                    out.push(
                        Violation::new(Family::Compatibility, r)
                            .on_day(d)
                            .on_activity(a)
                            .on_slots(grid.slot_at(t), grid.slot_at(end)),
                    );
                }
            }
        }
    }

    if let Some(max_breaks) = rules.max_breaks {
        for d in 0..days {
            let row = day_work(d);
            let stretches = (0..n).filter(|&t| row[t] > 0 && (t == 0 || row[t - 1] == 0)).count() as u32;
            if stretches.saturating_sub(1) > max_breaks {
                out.push(Violation::new(Family::DailyBreaks, r).on_day(d));
            }
        }
    }
}

/// Calls `emit(s)` for every start `s` where a run beginning at `s` is
/// shorter than `k` slots, i.e. `sum(row[s..s+k]) < k * (row[s] - row[s-1])`.
fn push_run_rows(row: &[u32], k: usize, mut emit: impl FnMut(usize)) {
    let n = row.len();
    let mut sum: i64 = row[..k].iter().map(|&v| v as i64).sum();
    for s in 0..=n - k {
        if s > 0 {
            sum += row[s + k - 1] as i64 - row[s - 1] as i64;
        }
        let prev = if s == 0 { 0 } else { row[s - 1] as i64 };
        let rise = row[s] as i64 - prev;
        if sum < k as i64 * rise {
            emit(s);
        }
    }
}

/// Checkout rule for one employee-day: no opening means no closing;
/// otherwise exactly one closing, right after the last opening.
fn checkout_day_ok(x: &Assignment, r: usize, d: usize, n: usize, op: usize, cl: usize) -> bool {
    let opens: Vec<usize> = (0..n).filter(|&t| x.get(r, op, t, d)).collect();
    let closes: Vec<usize> = (0..n).filter(|&t| x.get(r, cl, t, d)).collect();
    match opens.last() {
        None => closes.is_empty(),
        Some(&last) => closes.len() == 1 && closes[0] == last + 1,
    }
}

/// Minimum rest between working days.
///
/// Days off have free bounds in the model, so a block of `m` days off
/// between two worked days is feasible iff its bounds can descend from the
/// earliest start allowed after the left day to the latest end allowed
/// before the right one, by at most `tsD - mr` slots per day.
fn check_rest(instance: &Instance, r: usize, bounds: &[Option<(u32, u32)>], out: &mut Vec<Violation>) {
    let grid = instance.grid();
    let tsd = grid.slots_per_day() as i64;
    let rest = instance.slot_rules().rest as i64;
    let gap = tsd - rest;
    let t0 = grid.first_slot() as i64;
    let end_boundary = grid.end_boundary() as i64;

    // (day index of the left worked day or None for history, its end)
    let mut left: Option<i64> = instance.history()[r].last_end_slot.map(|e| e as i64);
    let mut off_days: i64 = 0;
    for (d, b) in bounds.iter().enumerate() {
        match *b {
            None => off_days += 1,
            Some((begin, end)) => {
                if let Some(prev_end) = left {
                    let ok = if off_days == 0 {
                        tsd + begin as i64 - prev_end >= rest
                    } else {
                        let lo = t0.max(prev_end + rest - tsd);
                        let hi = end_boundary.min(tsd + begin as i64 - rest);
                        lo - hi <= (off_days - 1) * gap
                    };
                    if !ok {
                        out.push(Violation::new(Family::L6, r).on_day(d));
                    }
                }
                left = Some(end as i64);
                off_days = 0;
            }
        }
    }
}

/// Unmet minutes per demand.
pub fn slacks(instance: &Instance, assignment: &Assignment) -> Vec<u32> {
    let grid = instance.grid();
    let ts = grid.slot_minutes();
    instance
        .demands()
        .iter()
        .map(|dem| {
            let mut covered: u32 = 0;
            for slot in dem.start_slot..dem.end_slot {
                let t = grid.offset(slot);
                for r in 0..instance.num_employees() {
                    covered += assignment.get(r, dem.activity, t, dem.day) as u32 * ts;
                }
            }
            dem.minutes.saturating_sub(covered)
        })
        .collect()
}

pub fn cost_of(instance: &Instance, assignment: &Assignment, slacks: &[u32]) -> Cost {
    let penalty = instance
        .demands()
        .iter()
        .zip(slacks)
        .map(|(dem, &s)| instance.activities()[dem.activity].slack_penalty as u64 * s as u64)
        .sum();
    let affinity = assignment.ones().map(|(r, a, _, _)| instance.affinity(r, a) as u64).sum();
    Cost {
        penalty,
        affinity,
        divisor: instance.affinity_divisor(),
    }
}

/// Objective of a solution, recomputed from its assignment.
pub fn objective(instance: &Instance, solution: &Solution) -> Result<Cost> {
    solution.assignment.ensure_matches(instance)?;
    let slacks = slacks(instance, &solution.assignment);
    Ok(cost_of(instance, &solution.assignment, &slacks))
}
