use std::cmp::Reverse;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::state::State;
use super::{checkout_fixup, Cell};
use crate::domain::{Assignment, Instance, Solution};
use crate::preprocess::CompatibilityMatrix;
use crate::validator;

/// A run placed by the greedy, newest last per employee.
#[derive(Debug, Clone)]
struct Placed {
    activity: usize,
    day: usize,
    slots: Range<usize>,
    /// Opening run placed ahead of a closing slot.
    lead: Option<(usize, Range<usize>)>,
}

/// Constructive warm start.
///
/// Demands are served in descending order of required minutes. For each one
/// the compatible employees are ranked by minutes already worked, affinity
/// cost and id, and the first one able to take a legal run of at least the
/// minimum run length gets the longest such run, never longer than the
/// remaining demand needs. With a seed, employee ties are broken by a
/// seeded shuffle instead of by id.
pub fn greedy(instance: &Instance, compat: &CompatibilityMatrix, seed: Option<u64>) -> Solution {
    let ne = instance.num_employees();
    let mut tie: Vec<usize> = (0..ne).collect();
    match seed {
        Some(seed) => tie.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
        None => tie.sort_by(|&a, &b| instance.employees()[a].id.cmp(&instance.employees()[b].id)),
    }
    let mut rank = vec![0; ne];
    for (i, &r) in tie.iter().enumerate() {
        rank[r] = i;
    }

    let mut state = State::new(instance, Assignment::empty(instance));
    let ts = instance.grid().slot_minutes() as u64;
    let mut worked: Vec<u64> = instance.history().iter().map(|h| h.minutes_worked as u64).collect();
    let mut placed: Vec<Vec<Placed>> = vec![Vec::new(); ne];

    let mut order: Vec<usize> = (0..instance.demands().len()).collect();
    order.sort_by_key(|&i| (Reverse(instance.demands()[i].minutes), i));
    for i in order {
        let a = instance.demands()[i].activity;
        while state.remaining(i) > 0 {
            let mut candidates: Vec<usize> = (0..ne).filter(|&r| compat.get(r, a)).collect();
            candidates.sort_by_key(|&r| (worked[r], instance.affinity(r, a), rank[r]));
            let Some((r, run)) = candidates.into_iter().find_map(|r| best_run(&mut state, i, r).map(|c| (r, c))) else {
                break;
            };
            let before = state.x.ones().filter(|c| c.0 == r).count() as i64;
            apply_run(&mut state, r, &run);
            let after = state.x.ones().filter(|c| c.0 == r).count() as i64;
            worked[r] = (worked[r] as i64 + (after - before) * ts as i64) as u64;
            placed[r].push(run);
        }
    }
    repair(&mut state, &mut placed);
    state.into_solution()
}

/// Best legal run of employee `r` for demand `i`, verified on `state` but
/// left undone.
fn best_run(state: &mut State<'_>, i: usize, r: usize) -> Option<Placed> {
    let inst = state.inst;
    let grid = inst.grid();
    let n = grid.num_slots();
    let ts = grid.slot_minutes() as u64;
    let dem = &inst.demands()[i];
    let (a, d) = (dem.activity, dem.day);
    let (w0, w1) = (grid.offset(dem.start_slot), grid.offset(dem.end_slot - 1) + 1);
    let rules = inst.slot_rules();

    // a closing slot is placed with an opening run ending right before it
    let (len_min, lead) = if Some(a) == inst.closing_activity() {
        let op = inst.opening_activity()?;
        (1, Some((op, inst.min_run_slots(op).max(rules.after_break).max(1) as usize)))
    } else {
        (inst.min_run_slots(a).max(rules.after_break).max(1) as usize, None)
    };
    let needed = state.remaining(i).div_ceil(ts) as usize;
    let lead_len = lead.map_or(0, |(_, l)| l);

    let free = |state: &State<'_>, act: usize, t: usize| state.x.worked_count(r, t, d) == 0 && inst.is_materialized(r, act, t, d);
    let mut best: Option<(usize, usize, usize)> = None;
    for s in (w0 + 1).saturating_sub(len_min).max(lead_len)..w1 {
        if let Some((op, l)) = lead {
            if !(s - l..s).all(|t| free(state, op, t)) {
                continue;
            }
        }
        let mut last_legal: Option<(usize, usize)> = None;
        let mut len = 1;
        while s + len <= n {
            let t = s + len - 1;
            if !free(state, a, t) {
                break;
            }
            let covered = (s.max(w0)..(s + len).min(w1)).len();
            if len >= len_min {
                let run = Placed { activity: a, day: d, slots: s..s + len, lead: lead.map(|(op, l)| (op, s - l..s)) };
                match is_improving(state, r, &run) {
                    true => last_legal = Some((covered, len)),
                    false if last_legal.is_some() => break,
                    false => {}
                }
            }
            if len >= len_min && (covered >= needed || s + len >= w1) {
                break;
            }
            len += 1;
        }
        if let Some((covered, len)) = last_legal {
            if best.as_ref().is_none_or(|&(c, l, _)| covered > c || (covered == c && len < l)) {
                best = Some((covered, len, s));
            }
        }
    }
    best.map(|(_, len, s)| Placed { activity: a, day: d, slots: s..s + len, lead: lead.map(|(op, l)| (op, s - l..s)) })
}

fn run_cells(r: usize, run: &Placed) -> Vec<Cell> {
    let mut cells: Vec<Cell> = Vec::new();
    if let Some((op, slots)) = &run.lead {
        cells.extend(slots.clone().map(|t| (r, *op, t, run.day, true)));
    }
    cells.extend(run.slots.clone().map(|t| (r, run.activity, t, run.day, true)));
    cells
}

/// Sets the run and the matching closing slot. Returns the undo list, or
/// `None` (with nothing changed) when no closing slot fits.
fn apply_run(state: &mut State<'_>, r: usize, run: &Placed) -> Option<Vec<Cell>> {
    let mut undo = state.apply(&run_cells(r, run));
    match checkout_fixup(state.inst, &state.x, r, run.day) {
        Some(fix) => {
            undo.splice(0..0, state.apply(&fix));
            Some(undo)
        }
        None => {
            state.apply(&undo);
            None
        }
    }
}

/// Whether adding the run keeps `r` legal and lowers the objective.
fn is_improving(state: &mut State<'_>, r: usize, run: &Placed) -> bool {
    let before = state.scaled;
    let Some(undo) = apply_run(state, r, run) else {
        return false;
    };
    let ok = state.scaled < before && validator::employee_violations(state.inst, &state.x, r) == 0;
    state.apply(&undo);
    ok
}

/// Removes cells of `r` and restores the closing slot rule.
fn unset(state: &mut State<'_>, r: usize, day: usize, cells: impl IntoIterator<Item = (usize, usize)>) {
    for (a, t) in cells {
        state.set(r, a, t, day, false);
    }
    if let Some(fix) = checkout_fixup(state.inst, &state.x, r, day) {
        state.apply(&fix);
    }
}

/// Truncates, then drops, the newest run of any employee left with a
/// violation until every schedule is clean.
fn repair(state: &mut State<'_>, placed: &mut [Vec<Placed>]) {
    let inst = state.inst;
    let clean = |state: &State<'_>, r: usize| validator::employee_violations(inst, &state.x, r) == 0;
    for r in 0..placed.len() {
        while !clean(state, r) {
            let Some(mut run) = placed[r].pop() else {
                let all: Vec<Cell> = state.x.ones().filter(|c| c.0 == r).map(|(r, a, t, d)| (r, a, t, d, false)).collect();
                state.apply(&all);
                break;
            };
            while run.slots.len() > 1 && !clean(state, r) {
                run.slots.end -= 1;
                unset(state, r, run.day, [(run.activity, run.slots.end)]);
            }
            if !clean(state, r) {
                let lead = run.lead.iter().flat_map(|(op, s)| s.clone().map(|t| (*op, t)));
                let main = run.slots.clone().map(|t| (run.activity, t));
                unset(state, r, run.day, lead.chain(main).collect::<Vec<_>>());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Activity, CheckoutRole, Demand, Employee, InstanceData, RuleSet, TimeGrid};
    use crate::preprocess::build_compatibility;
    use crate::validator::check;

    fn toy(minutes: u32) -> Instance {
        let g = TimeGrid::new(30, 16, 21, 1).unwrap();
        Instance::new(InstanceData::new(
            g,
            vec![Employee::always_available("r1", &["s"], &g)],
            vec![Activity::new("a", &["s"], 0, 1)],
            vec![Demand { activity: 0, day: 0, start_slot: 17, end_slot: 20, minutes }],
            RuleSet::permissive(&g),
        ))
        .unwrap()
    }

    #[test]
    fn zero_demand_gives_empty_schedule() {
        let inst = toy(0);
        let sol = greedy(&inst, &build_compatibility(&inst), None);
        assert!(sol.assignment.is_empty());
        assert_eq!(sol.cost.value(), 0.0);
    }

    #[test]
    fn covers_a_small_demand_exactly() {
        let inst = toy(60);
        let sol = greedy(&inst, &build_compatibility(&inst), None);
        assert_eq!(sol.total_slack_minutes(), 0);
        assert_eq!(sol.assignment.count_ones(), 2);
        assert!(check(&inst, &sol.assignment).unwrap().is_empty());
    }

    #[test]
    fn respects_the_daily_limit() {
        let g = TimeGrid::new(30, 16, 25, 1).unwrap();
        let mut data = InstanceData::new(
            g,
            vec![Employee::always_available("r1", &["s"], &g), Employee::always_available("r2", &["s"], &g)],
            vec![Activity::new("a", &["s"], 60, 1)],
            vec![Demand { activity: 0, day: 0, start_slot: 16, end_slot: 26, minutes: 600 }],
            RuleSet::permissive(&g),
        );
        data.rules.max_daily_minutes = 120;
        let inst = Instance::new(data).unwrap();
        let sol = greedy(&inst, &build_compatibility(&inst), None);
        assert!(check(&inst, &sol.assignment).unwrap().is_empty());
        assert_eq!(sol.total_slack_minutes(), 600 - 240);
    }

    #[test]
    fn closing_demand_brings_an_opening_run() {
        let g = TimeGrid::new(30, 16, 21, 1).unwrap();
        let mut op = Activity::new("op", &["s"], 0, 1);
        op.checkout_role = CheckoutRole::Opening;
        let mut cl = Activity::new("cl", &["s"], 0, 5);
        cl.checkout_role = CheckoutRole::Closing;
        let inst = Instance::new(InstanceData::new(
            g,
            vec![Employee::always_available("r1", &["s"], &g)],
            vec![op, cl],
            vec![
                Demand { activity: 0, day: 0, start_slot: 16, end_slot: 18, minutes: 60 },
                Demand { activity: 1, day: 0, start_slot: 18, end_slot: 19, minutes: 30 },
            ],
            RuleSet::permissive(&g),
        ))
        .unwrap();
        let sol = greedy(&inst, &build_compatibility(&inst), None);
        assert!(check(&inst, &sol.assignment).unwrap().is_empty());
        assert_eq!(sol.total_slack_minutes(), 0);
    }
}
