//! Problem data, the slot encoding of the horizon and assignment views.

mod assignment;
mod grid;
mod instance;
mod solution;

pub use assignment::{derive_change_points, derive_day_bounds, Assignment, DayBounds};
pub(crate) use assignment::day_bounds;
pub use grid::{boundary_of_minute, slot_of_minute, TimeGrid, MINUTES_PER_DAY};
pub use instance::{
    Activity, CheckoutRole, Demand, Employee, EmployeeHistory, Instance, InstanceData, RuleSet, SlotRules,
};
pub use solution::{Cost, Solution};
