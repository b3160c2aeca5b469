use crate::domain::{Assignment, Cost, Instance, Solution};
use crate::error::{Error, Result};
use crate::validator;

/// Largest number of model cells the oracle will enumerate.
pub const ORACLE_CELL_CAP: usize = 24;

/// Exhaustive optimum over every 0/1 assignment of the model cells.
///
/// Cells are ordered by employee, day, slot and activity; among optimal
/// assignments the lexicographically smallest in that order is returned.
pub fn enumerate_optimal(instance: &Instance) -> Result<(Solution, Cost)> {
    let grid = instance.grid();
    let mut cells = Vec::new();
    for r in 0..instance.num_employees() {
        for d in 0..grid.days() {
            for t in 0..grid.num_slots() {
                for a in 0..instance.num_activities() {
                    if instance.is_materialized(r, a, t, d) {
                        cells.push((r, a, t, d));
                    }
                }
            }
        }
    }
    let n = cells.len();
    if n > ORACLE_CELL_CAP {
        return Err(Error::OracleCap { cells: n, cap: ORACLE_CELL_CAP });
    }
    let bit = |i: usize| 1u32 << (n - 1 - i);

    // cells sharing an employee-slot; at most one of each group may be set
    let mut groups: Vec<u32> = Vec::new();
    let mut i = 0;
    while i < n {
        let (r, _, t, d) = cells[i];
        let mut mask = 0;
        while i < n && (cells[i].0, cells[i].2, cells[i].3) == (r, t, d) {
            mask |= bit(i);
            i += 1;
        }
        if mask.count_ones() > 1 {
            groups.push(mask);
        }
    }

    let mut best: Option<(Cost, u32)> = None;
    let mut x = Assignment::empty(instance);
    for mask in 0..(1u64 << n) {
        let mask = mask as u32;
        if groups.iter().any(|g| (mask & g).count_ones() > 1) {
            continue;
        }
        for (i, &(r, a, t, d)) in cells.iter().enumerate() {
            x.set(r, a, t, d, mask & bit(i) != 0);
        }
        let slacks = validator::slacks(instance, &x);
        let cost = validator::cost_of(instance, &x, &slacks);
        if best.as_ref().is_some_and(|(b, _)| cost >= *b) {
            continue;
        }
        let feasible = (0..instance.num_employees()).all(|r| validator::employee_violations(instance, &x, r) == 0);
        if feasible {
            best = Some((cost, mask));
        }
    }

    // the empty assignment is always feasible
    let (_, mask) = best.ok_or_else(|| Error::Internal("no feasible assignment found".into()))?;
    let mut x = Assignment::empty(instance);
    for (i, &(r, a, t, d)) in cells.iter().enumerate() {
        x.set(r, a, t, d, mask & bit(i) != 0);
    }
    let solution = Solution::from_assignment(instance, x)?;
    let cost = solution.cost;
    Ok((solution, cost))
}
