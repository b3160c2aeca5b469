use std::ops::RangeInclusive;

use crate::error::{Error, Result};

pub const MINUTES_PER_DAY: u32 = 1440;

/// Discretisation of the planning horizon into fixed-length slots.
///
/// Slot indices are absolute within a day (`start minute / slot length`), so
/// with 30-minute slots the slot starting at 8:30 has index 17. The working
/// window of every day is the slot range `first_slot..=last_slot`; days are
/// numbered `1..=days` in documents and variable names, and indexed from zero
/// in the API.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeGrid {
    slot_minutes: u32,
    first_slot: u32,
    last_slot: u32,
    days: u32,
}

impl TimeGrid {
    pub fn new(slot_minutes: u32, first_slot: u32, last_slot: u32, days: u32) -> Result<Self> {
        if slot_minutes == 0 || !MINUTES_PER_DAY.is_multiple_of(slot_minutes) {
            return Err(Error::invalid(
                "grid.slot_minutes",
                format!("ts must divide 1440 (got {slot_minutes})"),
            ));
        }
        let per_day = MINUTES_PER_DAY / slot_minutes;
        if first_slot > last_slot {
            return Err(Error::invalid(
                "grid",
                format!("first slot {first_slot} is after last slot {last_slot}"),
            ));
        }
        if last_slot >= per_day {
            return Err(Error::invalid(
                "grid",
                format!("last slot {last_slot} does not fit in a day of {per_day} slots"),
            ));
        }
        if days == 0 {
            return Err(Error::invalid("grid.days", "at least one day is required"));
        }
        Ok(TimeGrid {
            slot_minutes,
            first_slot,
            last_slot,
            days,
        })
    }

    /// Builds a grid from the start minutes of the first and last slot.
    pub fn from_minutes(
        slot_minutes: u32,
        first_minute: u32,
        last_minute: u32,
        days: u32,
    ) -> Result<Self> {
        if slot_minutes == 0 || !MINUTES_PER_DAY.is_multiple_of(slot_minutes) {
            return Err(Error::invalid(
                "grid.slot_minutes",
                format!("ts must divide 1440 (got {slot_minutes})"),
            ));
        }
        for (field, minute) in [("grid.first_minute", first_minute), ("grid.last_minute", last_minute)] {
            if minute % slot_minutes != 0 {
                return Err(Error::invalid(
                    field,
                    format!("{minute} is not a multiple of ts={slot_minutes}"),
                ));
            }
        }
        Self::new(
            slot_minutes,
            first_minute / slot_minutes,
            last_minute / slot_minutes,
            days,
        )
    }

    pub fn slot_minutes(&self) -> u32 {
        self.slot_minutes
    }

    pub fn first_slot(&self) -> u32 {
        self.first_slot
    }

    pub fn last_slot(&self) -> u32 {
        self.last_slot
    }

    /// One past the last slot; the largest value an exclusive end can take.
    pub fn end_boundary(&self) -> u32 {
        self.last_slot + 1
    }

    pub fn days(&self) -> usize {
        self.days as usize
    }

    /// Number of slots in a whole day (`1440 / ts`).
    pub fn slots_per_day(&self) -> u32 {
        MINUTES_PER_DAY / self.slot_minutes
    }

    pub fn num_slots(&self) -> usize {
        (self.last_slot - self.first_slot + 1) as usize
    }

    pub fn slots(&self) -> RangeInclusive<u32> {
        self.first_slot..=self.last_slot
    }

    /// Position of an absolute slot inside the daily window.
    pub fn offset(&self, slot: u32) -> usize {
        debug_assert!(slot >= self.first_slot);
        (slot - self.first_slot) as usize
    }

    pub fn slot_at(&self, offset: usize) -> u32 {
        self.first_slot + offset as u32
    }

    pub fn contains_slot(&self, slot: u32) -> bool {
        self.slots().contains(&slot)
    }

    pub fn minute_of_slot(&self, slot: u32) -> u32 {
        slot * self.slot_minutes
    }

    /// Converts minutes to a slot count, rejecting non-multiples of ts.
    pub fn minutes_to_slots(&self, minutes: u32, what: &str) -> Result<u32> {
        if !minutes.is_multiple_of(self.slot_minutes) {
            return Err(Error::invalid(
                what,
                format!("{minutes} minutes is not a multiple of ts={}", self.slot_minutes),
            ));
        }
        Ok(minutes / self.slot_minutes)
    }
}

/// Slot index of a slot-start minute inside the working window.
pub fn slot_of_minute(grid: &TimeGrid, minute_of_day: u32) -> Result<u32> {
    if !minute_of_day.is_multiple_of(grid.slot_minutes) {
        return Err(Error::Encoding(format!(
            "minute {minute_of_day} is not a multiple of ts={}",
            grid.slot_minutes
        )));
    }
    let slot = minute_of_day / grid.slot_minutes;
    if !grid.contains_slot(slot) {
        return Err(Error::Encoding(format!(
            "minute {minute_of_day} is outside the window [{}, {}]",
            grid.minute_of_slot(grid.first_slot),
            grid.minute_of_slot(grid.last_slot)
        )));
    }
    Ok(slot)
}

/// Like [`slot_of_minute`] but also accepts the exclusive end of the window.
pub fn boundary_of_minute(grid: &TimeGrid, minute_of_day: u32) -> Result<u32> {
    if minute_of_day == grid.minute_of_slot(grid.end_boundary()) {
        return Ok(grid.end_boundary());
    }
    slot_of_minute(grid, minute_of_day)
}
