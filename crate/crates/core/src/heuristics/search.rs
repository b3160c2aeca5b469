use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::state::State;
use super::{checkout_fixup, Cell};
use crate::domain::{Instance, Solution};
use crate::error::{Error, Result};
use crate::validator;

/// Settings of [`improve`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub time_limit: Duration,
    pub seed: u64,
    /// Shift a run by one slot or hand it to another employee.
    pub segment_move: bool,
    /// Relabel a run with another activity.
    pub activity_swap: bool,
    /// Grow, shrink, drop or insert runs.
    pub shift_extend: bool,
    /// Move a run to another day.
    pub day_reassign: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            time_limit: Duration::from_secs(3600),
            seed: 0,
            segment_move: true,
            activity_swap: true,
            shift_extend: true,
            day_reassign: true,
        }
    }
}

impl SearchConfig {
    pub fn with_limit(seconds: f64, seed: u64) -> Result<Self> {
        if !(seconds > 0.0 && seconds.is_finite()) {
            return Err(Error::invalid("time_limit", format!("must be positive, got {seconds}")));
        }
        Ok(SearchConfig {
            time_limit: Duration::from_secs_f64(seconds),
            seed,
            ..SearchConfig::default()
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub passes: u64,
    pub evaluated: u64,
    pub applied: u64,
    /// A full pass found no improving move before the time limit.
    pub converged: bool,
}

/// Maximal run of one activity for one employee on one day.
#[derive(Debug, Clone, Copy)]
struct Run {
    r: usize,
    a: usize,
    d: usize,
    s: usize,
    e: usize,
}

/// Net cell changes of a move, all of which must flip a cell.
type Move = Vec<Cell>;

/// First-improvement hill climbing from `start`. Returns `start` unchanged
/// if it does not fit the instance or breaks a rule.
pub fn improve(instance: &Instance, start: &Solution, config: &SearchConfig) -> Solution {
    improve_with_stats(instance, start, config).0
}

pub fn improve_with_stats(instance: &Instance, start: &Solution, config: &SearchConfig) -> (Solution, SearchStats) {
    let mut stats = SearchStats::default();
    let clean = start.assignment.matches(instance)
        && (0..instance.num_employees()).all(|r| validator::employee_violations(instance, &start.assignment, r) == 0);
    if !clean {
        return (start.clone(), stats);
    }
    let deadline = Instant::now() + config.time_limit;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = State::new(instance, start.assignment.clone());
    'search: loop {
        stats.passes += 1;
        let mut moves = neighbourhood(&state, config);
        moves.shuffle(&mut rng);
        let mut improved = false;
        for mv in &moves {
            if Instant::now() >= deadline {
                break 'search;
            }
            stats.evaluated += 1;
            if try_move(&mut state, mv) {
                stats.applied += 1;
                improved = true;
            }
        }
        if !improved {
            stats.converged = true;
            break;
        }
    }
    (state.into_solution(), stats)
}

/// Applies `mv` if it is still applicable, strictly improves the objective
/// and leaves every touched employee legal.
fn try_move(state: &mut State<'_>, mv: &Move) -> bool {
    if mv.iter().any(|&(r, a, t, d, v)| state.x.get(r, a, t, d) == v) {
        return false;
    }
    let inst = state.inst;
    let before = state.scaled;
    let mut undo = state.apply(mv);
    let mut touched: Vec<(usize, usize)> = mv.iter().map(|&(r, _, _, d, _)| (r, d)).collect();
    touched.sort_unstable();
    touched.dedup();
    let mut ok = true;
    for &(r, d) in &touched {
        match checkout_fixup(inst, &state.x, r, d) {
            Some(fix) => undo.splice(0..0, state.apply(&fix)).for_each(drop),
            None => ok = false,
        }
    }
    ok = ok && state.scaled < before;
    if ok {
        let mut employees: Vec<usize> = touched.iter().map(|&(r, _)| r).collect();
        employees.dedup();
        ok = employees.iter().all(|&r| validator::employee_violations(inst, &state.x, r) == 0);
    }
    if !ok {
        state.apply(&undo);
    }
    ok
}

fn runs(state: &State<'_>) -> Vec<Run> {
    let inst = state.inst;
    let n = inst.grid().num_slots();
    let mut out = Vec::new();
    for r in 0..inst.num_employees() {
        for d in 0..inst.grid().days() {
            for a in 0..inst.num_activities() {
                let mut t = 0;
                while t < n {
                    if !state.x.get(r, a, t, d) {
                        t += 1;
                        continue;
                    }
                    let s = t;
                    while t < n && state.x.get(r, a, t, d) {
                        t += 1;
                    }
                    out.push(Run { r, a, d, s, e: t });
                }
            }
        }
    }
    out
}

/// Net changes of clearing `from` and setting `to`.
fn relocate(from: &[(usize, usize, usize, usize)], to: &[(usize, usize, usize, usize)]) -> Move {
    let mut mv: Move = from.iter().filter(|c| !to.contains(c)).map(|&(r, a, t, d)| (r, a, t, d, false)).collect();
    mv.extend(to.iter().filter(|c| !from.contains(c)).map(|&(r, a, t, d)| (r, a, t, d, true)));
    mv
}

fn cells(r: usize, a: usize, d: usize, slots: std::ops::Range<usize>) -> Vec<(usize, usize, usize, usize)> {
    slots.map(|t| (r, a, t, d)).collect()
}

fn neighbourhood(state: &State<'_>, config: &SearchConfig) -> Vec<Move> {
    let inst = state.inst;
    let grid = inst.grid();
    let n = grid.num_slots();
    let fits = |r: usize, a: usize, d: usize, s: usize, e: usize| (s..e).all(|t| inst.is_materialized(r, a, t, d));
    let mut moves: Vec<Move> = Vec::new();
    for run in runs(state) {
        let Run { r, a, d, s, e } = run;
        let own = cells(r, a, d, s..e);
        if config.shift_extend {
            moves.push(relocate(&own, &[]));
            if e - s > 1 {
                moves.push(vec![(r, a, s, d, false)]);
                moves.push(vec![(r, a, e - 1, d, false)]);
            }
            if s > 0 && inst.is_materialized(r, a, s - 1, d) {
                moves.push(vec![(r, a, s - 1, d, true)]);
            }
            if e < n && inst.is_materialized(r, a, e, d) {
                moves.push(vec![(r, a, e, d, true)]);
            }
        }
        if config.segment_move {
            if s > 0 && fits(r, a, d, s - 1, e - 1) {
                moves.push(relocate(&own, &cells(r, a, d, s - 1..e - 1)));
            }
            if e < n && fits(r, a, d, s + 1, e + 1) {
                moves.push(relocate(&own, &cells(r, a, d, s + 1..e + 1)));
            }
            for other in (0..inst.num_employees()).filter(|&o| o != r && fits(o, a, d, s, e)) {
                moves.push(relocate(&own, &cells(other, a, d, s..e)));
            }
        }
        if config.activity_swap {
            for b in (0..inst.num_activities()).filter(|&b| b != a && fits(r, b, d, s, e)) {
                moves.push(relocate(&own, &cells(r, b, d, s..e)));
            }
        }
        if config.day_reassign {
            for day in (0..grid.days()).filter(|&day| day != d && fits(r, a, day, s, e)) {
                moves.push(relocate(&own, &cells(r, a, day, s..e)));
            }
        }
    }
    if config.shift_extend {
        let rules = inst.slot_rules();
        let lead_of = |a: usize| {
            (Some(a) == inst.closing_activity())
                .then(|| inst.opening_activity())
                .flatten()
                .map(|op| (op, inst.min_run_slots(op).max(rules.after_break).max(1) as usize))
        };
        for (i, dem) in inst.demands().iter().enumerate() {
            if state.remaining(i) == 0 {
                continue;
            }
            let a = dem.activity;
            let (w0, w1) = (grid.offset(dem.start_slot), grid.offset(dem.end_slot - 1) + 1);
            let lead = lead_of(a);
            let len = if lead.is_some() { 1 } else { inst.min_run_slots(a).max(rules.after_break).max(1) as usize };
            for r in 0..inst.num_employees() {
                // overhanging the window only when the run cannot fit inside
                let starts = if w1 - w0 >= len { w0..w1 - len + 1 } else { (w0 + 1).saturating_sub(len)..w1 };
                for s in starts {
                    if s + len > n || !fits(r, a, dem.day, s, s + len) {
                        continue;
                    }
                    let mut add = cells(r, a, dem.day, s..s + len);
                    if let Some((op, l)) = lead {
                        if s < l || !fits(r, op, dem.day, s - l, s) {
                            continue;
                        }
                        add.extend(cells(r, op, dem.day, s - l..s));
                    }
                    if add.iter().all(|&(r, a, t, d)| !state.x.get(r, a, t, d)) {
                        moves.push(relocate(&[], &add));
                    }
                }
            }
        }
    }
    moves
}
