use super::Cell;
use crate::domain::{Assignment, Instance, Solution};

/// Assignment with demand coverage kept up to date, so the objective of a
/// change can be read off without a full recount.
#[derive(Debug, Clone)]
pub(crate) struct State<'a> {
    pub inst: &'a Instance,
    pub x: Assignment,
    /// Covered minutes per demand.
    pub covered: Vec<u64>,
    /// Objective scaled by the affinity divisor.
    pub scaled: i64,
    div: i64,
}

impl<'a> State<'a> {
    pub fn new(inst: &'a Instance, x: Assignment) -> Self {
        let div = inst.affinity_divisor() as i64;
        let mut state = State {
            inst,
            x: Assignment::empty(inst),
            covered: vec![0; inst.demands().len()],
            scaled: 0,
            div,
        };
        state.scaled = (0..inst.demands().len()).map(|i| state.penalty_of(i, 0)).sum();
        for (r, a, t, d) in x.ones().collect::<Vec<_>>() {
            state.set(r, a, t, d, true);
        }
        state
    }

    fn penalty_of(&self, demand: usize, covered: u64) -> i64 {
        let dem = &self.inst.demands()[demand];
        let short = (dem.minutes as u64).saturating_sub(covered) as i64;
        short * self.inst.activities()[dem.activity].slack_penalty as i64 * self.div
    }

    /// Change in the scaled objective if cell `(r, a, t, d)` took `value`.
    pub fn delta(&self, r: usize, a: usize, t: usize, d: usize, value: bool) -> i64 {
        if self.x.get(r, a, t, d) == value {
            return 0;
        }
        let sign = if value { 1 } else { -1 };
        let mut delta = sign * self.inst.affinity(r, a) as i64;
        if let Some(i) = self.inst.demand_at(a, d, t) {
            let ts = self.inst.grid().slot_minutes() as u64;
            let now = self.covered[i];
            let next = if value { now + ts } else { now - ts };
            delta += self.penalty_of(i, next) - self.penalty_of(i, now);
        }
        delta
    }

    pub fn set(&mut self, r: usize, a: usize, t: usize, d: usize, value: bool) {
        if self.x.get(r, a, t, d) == value {
            return;
        }
        self.scaled += self.delta(r, a, t, d, value);
        if let Some(i) = self.inst.demand_at(a, d, t) {
            let ts = self.inst.grid().slot_minutes() as u64;
            if value {
                self.covered[i] += ts;
            } else {
                self.covered[i] -= ts;
            }
        }
        self.x.set(r, a, t, d, value);
    }

    /// Applies `cells` and returns the changes that undo them.
    pub fn apply(&mut self, cells: &[Cell]) -> Vec<Cell> {
        let mut undo = Vec::with_capacity(cells.len());
        for &(r, a, t, d, v) in cells {
            if self.x.get(r, a, t, d) != v {
                undo.push((r, a, t, d, !v));
                self.set(r, a, t, d, v);
            }
        }
        undo.reverse();
        undo
    }

    pub fn remaining(&self, demand: usize) -> u64 {
        (self.inst.demands()[demand].minutes as u64).saturating_sub(self.covered[demand])
    }

    pub fn into_solution(self) -> Solution {
        Solution::from_assignment(self.inst, self.x).expect("state assignment matches its instance")
    }
}
