use super::instance::Instance;
use crate::error::{Error, Result};

/// Dense 0/1 tensor `x(employee, activity, slot, day)`.
///
/// Cells outside the compatibility or availability pattern can be set so
/// that hand-written or imported rosters can be checked, but no solver in
/// this crate ever writes them. Slot coordinates are offsets into the daily
/// window.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    employees: usize,
    activities: usize,
    slots: usize,
    days: usize,
    cells: Vec<bool>,
}

impl Assignment {
    pub fn empty(instance: &Instance) -> Self {
        Self::with_dims(
            instance.num_employees(),
            instance.num_activities(),
            instance.grid().num_slots(),
            instance.grid().days(),
        )
    }

    pub fn with_dims(employees: usize, activities: usize, slots: usize, days: usize) -> Self {
        Assignment {
            employees,
            activities,
            slots,
            days,
            cells: vec![false; employees * activities * slots * days],
        }
    }

    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.employees, self.activities, self.slots, self.days)
    }

    pub fn matches(&self, instance: &Instance) -> bool {
        self.dims()
            == (
                instance.num_employees(),
                instance.num_activities(),
                instance.grid().num_slots(),
                instance.grid().days(),
            )
    }

    pub(crate) fn ensure_matches(&self, instance: &Instance) -> Result<()> {
        if self.matches(instance) {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "assignment is {:?}, instance is {:?}",
                self.dims(),
                (
                    instance.num_employees(),
                    instance.num_activities(),
                    instance.grid().num_slots(),
                    instance.grid().days()
                )
            )))
        }
    }

    #[inline]
    fn index(&self, employee: usize, activity: usize, offset: usize, day: usize) -> usize {
        debug_assert!(employee < self.employees && activity < self.activities);
        debug_assert!(offset < self.slots && day < self.days);
        ((employee * self.days + day) * self.slots + offset) * self.activities + activity
    }

    #[inline]
    pub fn get(&self, employee: usize, activity: usize, offset: usize, day: usize) -> bool {
        self.cells[self.index(employee, activity, offset, day)]
    }

    #[inline]
    pub fn set(&mut self, employee: usize, activity: usize, offset: usize, day: usize, value: bool) {
        let i = self.index(employee, activity, offset, day);
        self.cells[i] = value;
    }

    /// Cells of one employee-slot, one per activity.
    #[inline]
    pub fn slot_cells(&self, employee: usize, offset: usize, day: usize) -> &[bool] {
        let start = self.index(employee, 0, offset, day);
        &self.cells[start..start + self.activities]
    }

    /// `sum_a x(employee, a, offset, day)`.
    #[inline]
    pub fn worked_count(&self, employee: usize, offset: usize, day: usize) -> u32 {
        self.slot_cells(employee, offset, day).iter().filter(|&&v| v).count() as u32
    }

    /// First activity worked in the slot, if any.
    #[inline]
    pub fn activity_at(&self, employee: usize, offset: usize, day: usize) -> Option<usize> {
        self.slot_cells(employee, offset, day).iter().position(|&v| v)
    }

    pub fn clear_slot(&mut self, employee: usize, offset: usize, day: usize) {
        let start = self.index(employee, 0, offset, day);
        self.cells[start..start + self.activities].fill(false);
    }

    pub fn is_empty(&self) -> bool {
        !self.cells.iter().any(|&v| v)
    }

    pub fn count_ones(&self) -> usize {
        self.cells.iter().filter(|&&v| v).count()
    }

    /// Iterates `(employee, activity, offset, day)` of every set cell.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        self.cells.iter().enumerate().filter(|(_, &v)| v).map(move |(i, _)| {
            let a = i % self.activities;
            let rest = i / self.activities;
            let t = rest % self.slots;
            let rest = rest / self.slots;
            let d = rest % self.days;
            let r = rest / self.days;
            (r, a, t, d)
        })
    }
}

/// First/last-plus-one worked slot of an employee on a day.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DayBounds {
    pub worked: bool,
    /// Absolute slot index of the first worked slot.
    pub begin: u32,
    /// Absolute exclusive end (last worked slot + 1).
    pub end: u32,
}

fn check_indices(instance: &Instance, assignment: &Assignment, employee: usize, day: usize) -> Result<()> {
    assignment.ensure_matches(instance)?;
    if employee >= instance.num_employees() {
        return Err(Error::unknown("employee index", employee.to_string()));
    }
    if day >= instance.grid().days() {
        return Err(Error::unknown("day index", day.to_string()));
    }
    Ok(())
}

/// Slots where the work status of `employee` on `activity` changes on `day`,
/// with `+1` for a start and `-1` for a stop; the slot before the window
/// counts as not worked.
pub fn derive_change_points(
    instance: &Instance,
    assignment: &Assignment,
    employee: usize,
    activity: usize,
    day: usize,
) -> Result<Vec<(u32, i8)>> {
    check_indices(instance, assignment, employee, day)?;
    if activity >= instance.num_activities() {
        return Err(Error::unknown("activity index", activity.to_string()));
    }
    let grid = instance.grid();
    let mut previous = false;
    let mut points = Vec::new();
    for t in 0..grid.num_slots() {
        let current = assignment.get(employee, activity, t, day);
        if current != previous {
            points.push((grid.slot_at(t), if current { 1 } else { -1 }));
        }
        previous = current;
    }
    Ok(points)
}

/// Begin/end of the working day; a day off is reported as `begin = end = t0`.
pub fn derive_day_bounds(
    instance: &Instance,
    assignment: &Assignment,
    employee: usize,
    day: usize,
) -> Result<DayBounds> {
    check_indices(instance, assignment, employee, day)?;
    Ok(day_bounds(instance, assignment, employee, day))
}

pub(crate) fn day_bounds(instance: &Instance, assignment: &Assignment, employee: usize, day: usize) -> DayBounds {
    let grid = instance.grid();
    let slots = grid.num_slots();
    let first = (0..slots).find(|&t| assignment.worked_count(employee, t, day) > 0);
    match first {
        None => DayBounds {
            worked: false,
            begin: grid.first_slot(),
            end: grid.first_slot(),
        },
        Some(first) => {
            let last = (0..slots)
                .rev()
                .find(|&t| assignment.worked_count(employee, t, day) > 0)
                .unwrap_or(first);
            DayBounds {
                worked: true,
                begin: grid.slot_at(first),
                end: grid.slot_at(last) + 1,
            }
        }
    }
}
