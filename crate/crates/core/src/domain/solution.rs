use std::cmp::Ordering;
use std::fmt;

use super::assignment::Assignment;
use super::instance::Instance;
use crate::error::Result;
use crate::validator;

/// Exact objective value `penalty + affinity / divisor`.
///
/// `penalty` is the priority-weighted slack in minutes and `affinity` the raw
/// sum of employee/activity affinity over worked cells; the divisor is the
/// instance's affinity scaling. Costs of the same instance compare exactly.
#[derive(Debug, Clone, Copy)]
pub struct Cost {
    pub penalty: u64,
    pub affinity: u64,
    pub divisor: u64,
}

impl Cost {
    pub fn zero(divisor: u64) -> Self {
        Cost {
            penalty: 0,
            affinity: 0,
            divisor,
        }
    }

    fn scaled(&self) -> u128 {
        self.penalty as u128 * self.divisor as u128 + self.affinity as u128
    }

    pub fn value(&self) -> f64 {
        self.penalty as f64 + self.affinity as f64 / self.divisor as f64
    }
}

impl PartialEq for Cost {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.divisor == other.divisor {
            return self.scaled().cmp(&other.scaled());
        }
        // a/b vs c/d with b, d < 2^64 and numerators < 2^128
        let lhs = widen_mul(self.scaled(), other.divisor);
        let rhs = widen_mul(other.scaled(), self.divisor);
        lhs.cmp(&rhs)
    }
}

/// 128x64 -> 192-bit product as (high, low) for exact comparison.
fn widen_mul(a: u128, b: u64) -> (u128, u128) {
    let lo = (a & u64::MAX as u128) * b as u128;
    let hi = (a >> 64) * b as u128;
    let low = lo.wrapping_add(hi << 64);
    let carry = (low < lo) as u128;
    ((hi >> 64) + carry, low)
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.affinity == 0 {
            write!(f, "{}", self.penalty)
        } else {
            write!(f, "{:.6}", self.value())
        }
    }
}

/// An assignment together with its per-demand slack and objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub assignment: Assignment,
    /// Unmet minutes per demand, in instance demand order.
    pub slacks: Vec<u32>,
    pub cost: Cost,
}

impl Solution {
    /// Computes slacks and objective from the assignment.
    pub fn from_assignment(instance: &Instance, assignment: Assignment) -> Result<Self> {
        assignment.ensure_matches(instance)?;
        let slacks = validator::slacks(instance, &assignment);
        let cost = validator::cost_of(instance, &assignment, &slacks);
        Ok(Solution {
            assignment,
            slacks,
            cost,
        })
    }

    pub fn empty(instance: &Instance) -> Self {
        Self::from_assignment(instance, Assignment::empty(instance))
            .expect("empty assignment matches its instance")
    }

    pub fn total_slack_minutes(&self) -> u64 {
        self.slacks.iter().map(|&s| s as u64).sum()
    }
}
