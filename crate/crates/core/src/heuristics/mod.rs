//! Greedy warm start, local search and an exhaustive oracle.

mod greedy;
mod oracle;
mod search;
mod state;

pub use greedy::greedy;
pub use oracle::{enumerate_optimal, ORACLE_CELL_CAP};
pub use search::{improve, improve_with_stats, SearchConfig, SearchStats};

use crate::domain::{Assignment, Instance};

/// `(employee, activity, offset, day, value)`.
type Cell = (usize, usize, usize, usize, bool);

/// Changes that leave employee `r` on day `d` with exactly one closing slot
/// right after the last opening slot, or none without openings. `None` when
/// the last opening slot ends the window.
fn checkout_fixup(inst: &Instance, x: &Assignment, r: usize, d: usize) -> Option<Vec<Cell>> {
    let (Some(op), Some(cl)) = (inst.opening_activity(), inst.closing_activity()) else {
        return Some(Vec::new());
    };
    let n = inst.grid().num_slots();
    let target = match (0..n).rev().find(|&t| x.get(r, op, t, d)) {
        Some(t) if t + 1 < n => Some(t + 1),
        Some(_) => return None,
        None => None,
    };
    Some(
        (0..n)
            .filter(|&t| x.get(r, cl, t, d) != (Some(t) == target))
            .map(|t| (r, cl, t, d, Some(t) == target))
            .collect(),
    )
}
