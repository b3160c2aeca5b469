//! Random instances shaped like a supermarket week.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{
    Activity, CheckoutRole, Demand, Employee, EmployeeHistory, Instance, InstanceData, RuleSet, TimeGrid,
    MINUTES_PER_DAY,
};
use crate::error::{Error, Result};

/// Store opening hours used by the generator, in minutes of the day.
pub const OPENING: u32 = 8 * 60;
pub const CLOSING: u32 = 20 * 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub employees: usize,
    pub activities: usize,
    pub days: u32,
    pub slot_minutes: u32,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            employees: 10,
            activities: 6,
            days: 7,
            slot_minutes: 15,
            seed: 0,
        }
    }
}

fn floor_to(v: u32, ts: u32) -> u32 {
    (v / ts * ts).max(ts)
}

fn ceil_to(v: u32, ts: u32) -> u32 {
    v.div_ceil(ts) * ts
}

/// Default limits: 8 h a day, 40 h a week pro rata, 6 days in a row, a
/// 10 minute break after 6 h, a 10 h span, 11 h of rest between days, 1 h
/// of work after a break and at most one break a day. Values are rounded
/// onto the grid, limits down and minimums up.
pub fn default_rules(grid: &TimeGrid) -> RuleSet {
    let ts = grid.slot_minutes();
    let days = grid.days() as u32;
    RuleSet {
        max_daily_minutes: floor_to(480, ts),
        max_horizon_minutes: floor_to(2400 * days / 7, ts),
        max_consecutive_days: 6,
        max_stretch_minutes: floor_to(360, ts),
        min_break_minutes: ceil_to(10, ts),
        max_daily_span_minutes: floor_to(600, ts),
        min_rest_minutes: ceil_to(660, ts),
        min_work_after_break_minutes: ceil_to(60, ts),
        max_daily_breaks: Some(1),
    }
}

/// Random valid instance; the same parameters give the same instance.
///
/// Activities come in skill groups; when there are at least three the last
/// one duplicates the first with its demand in the other half of the day,
/// so merging has something to find. With at least four, activities 1 and
/// 2 are the checkout opening and closing.
pub fn generate(params: &GenParams) -> Result<Instance> {
    let ts = params.slot_minutes;
    if ts == 0 || !MINUTES_PER_DAY.is_multiple_of(ts) {
        return Err(Error::invalid("ts", format!("ts must divide 1440 (got {ts})")));
    }
    if params.employees == 0 {
        return Err(Error::invalid("employees", "at least one employee is required"));
    }
    if params.activities == 0 {
        return Err(Error::invalid("activities", "at least one activity is required"));
    }
    let first = OPENING / ts;
    let end = CLOSING.div_ceil(ts).min(MINUTES_PER_DAY / ts);
    let grid = TimeGrid::new(ts, first, end - 1, params.days)?;
    let n = grid.num_slots();
    let days = grid.days();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let groups = params.activities.div_ceil(2).max(1);
    let skill = |g: usize| format!("s{}", g + 1);

    let clone_pair = params.activities >= 3;
    let checkout = params.activities >= 4;
    let mut activities: Vec<Activity> = Vec::with_capacity(params.activities);
    for a in 0..params.activities {
        let act = if clone_pair && a == params.activities - 1 {
            let mut twin = activities[0].clone();
            twin.id = format!("act{:02}", a + 1);
            twin
        } else {
            let k = ceil_to(*[0, 30, 60].choose(&mut rng).expect("nonempty"), ts);
            let mut act = Activity::new(format!("act{:02}", a + 1), &[&skill(a % groups)], k, rng.gen_range(1..=5));
            if checkout && (a == 1 || a == 2) {
                act.min_consecutive_minutes = 0;
                act.checkout_role = if a == 1 { CheckoutRole::Opening } else { CheckoutRole::Closing };
            }
            act
        };
        activities.push(act);
    }

    let mut employees = Vec::with_capacity(params.employees);
    for r in 0..params.employees {
        let count = rng.gen_range(1..=groups.min(3));
        let mut owned: Vec<usize> = (0..groups).collect();
        owned.shuffle(&mut rng);
        let names: Vec<String> = owned[..count].iter().map(|&g| skill(g)).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut emp = Employee::always_available(format!("emp{:02}", r + 1), &refs, &grid);
        if days >= 2 {
            let off = rng.gen_range(0..days);
            emp.availability[off].iter_mut().for_each(|v| *v = false);
        }
        for row in &mut emp.availability {
            if rng.gen_bool(0.2) {
                // morning or evening unavailable
                let cut = rng.gen_range(1..n);
                let range = if rng.gen_bool(0.5) { 0..cut } else { cut..n };
                row[range].iter_mut().for_each(|v| *v = false);
            }
        }
        employees.push(emp);
    }
    // every skill group has at least one holder
    for g in 0..groups {
        if !employees.iter().any(|e| e.skills.contains(&skill(g))) {
            let r = rng.gen_range(0..employees.len());
            employees[r].skills.insert(skill(g));
        }
    }

    let mut demands = Vec::new();
    let half = n / 2;
    for (a, act) in activities.iter().enumerate() {
        let k = act.min_consecutive_minutes / ts;
        let gap = (2 * k).saturating_sub(2) as usize;
        for d in 0..days {
            let (lo, hi) = if clone_pair && a == 0 {
                (0usize, half.saturating_sub(gap.div_ceil(2)))
            } else if clone_pair && a == activities.len() - 1 {
                ((half + gap / 2 + gap % 2).min(n), n)
            } else {
                (0, n)
            };
            let mut start = lo;
            let pieces = if act.checkout_role == CheckoutRole::None { rng.gen_range(1..=2) } else { 1 };
            for _ in 0..pieces {
                if start + 1 >= hi {
                    break;
                }
                let s = rng.gen_range(start..hi - 1);
                let e = rng.gen_range(s + 1..=hi.min(s + n / 2).max(s + 1));
                let len = (e - s) as u32;
                let minutes = match act.checkout_role {
                    CheckoutRole::Closing => ts,
                    _ => rng.gen_range(len / 2..=2 * len).max(1) * ts,
                };
                demands.push(Demand {
                    activity: a,
                    day: d,
                    start_slot: grid.slot_at(s),
                    end_slot: grid.slot_at(e - 1) + 1,
                    minutes,
                });
                start = e;
            }
        }
    }

    let rules = default_rules(&grid);
    let mut data = InstanceData::new(grid, employees, activities, demands, rules);
    for hist in &mut data.history {
        if rng.gen_bool(0.5) {
            *hist = EmployeeHistory {
                last_end_slot: Some(grid.slot_at(rng.gen_range(half..n)) + 1),
                consecutive_days: rng.gen_range(0..=3),
                minutes_worked: 0,
            };
        }
    }
    for r in 0..data.employees.len() {
        for a in 0..data.activities.len() {
            if rng.gen_bool(0.3) {
                data.affinity[r][a] = rng.gen_range(1..=3);
            }
        }
        if clone_pair {
            let last = data.activities.len() - 1;
            data.affinity[r][last] = data.affinity[r][0];
        }
    }
    Instance::new(data)
}
