use std::fmt;

use crate::error::{Error, Result};

/// Index tuple behind a model variable. Slots are absolute, days 0-based
/// (names carry `day + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKey {
    X { employee: usize, activity: usize, slot: u32, day: usize },
    Y { employee: usize, activity: usize, slot: u32, day: usize },
    Z { employee: usize, day: usize },
    B { employee: usize, day: usize },
    E { employee: usize, day: usize },
    Slack { activity: usize, day: usize, start_slot: u32, end_slot: u32 },
}

impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarKey::X { employee, activity, slot, day } => {
                write!(f, "x_r{employee}_a{activity}_t{slot}_d{}", day + 1)
            }
            VarKey::Y { employee, activity, slot, day } => {
                write!(f, "y_r{employee}_a{activity}_t{slot}_d{}", day + 1)
            }
            VarKey::Z { employee, day } => write!(f, "z_r{employee}_d{}", day + 1),
            VarKey::B { employee, day } => write!(f, "b_r{employee}_d{}", day + 1),
            VarKey::E { employee, day } => write!(f, "e_r{employee}_d{}", day + 1),
            VarKey::Slack { activity, day, start_slot, end_slot } => {
                write!(f, "s_a{activity}_d{}_t{start_slot}_{end_slot}", day + 1)
            }
        }
    }
}

pub fn var_name(key: &VarKey) -> String {
    key.to_string()
}

/// Inverse of [`var_name`].
pub fn parse_var_name(name: &str) -> Result<VarKey> {
    let bad = || Error::Parse(format!("`{name}` is not a model variable name"));
    let mut parts = name.split('_');
    let kind = parts.next().ok_or_else(bad)?;
    let rest: Vec<&str> = parts.collect();
    let field = |i: usize, prefix: &str| -> Result<u64> {
        let part = rest.get(i).ok_or_else(bad)?;
        let digits = part.strip_prefix(prefix).ok_or_else(bad)?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0')) {
            return Err(bad());
        }
        digits.parse().map_err(|_| bad())
    };
    let day = |i: usize| -> Result<usize> {
        match field(i, "d")? {
            0 => Err(bad()),
            d => Ok(d as usize - 1),
        }
    };
    let key = match (kind, rest.len()) {
        ("x" | "y", 4) => {
            let (employee, activity) = (field(0, "r")? as usize, field(1, "a")? as usize);
            let slot = u32::try_from(field(2, "t")?).map_err(|_| bad())?;
            let day = day(3)?;
            if kind == "x" {
                VarKey::X { employee, activity, slot, day }
            } else {
                VarKey::Y { employee, activity, slot, day }
            }
        }
        ("z" | "b" | "e", 2) => {
            let employee = field(0, "r")? as usize;
            let day = day(1)?;
            match kind {
                "z" => VarKey::Z { employee, day },
                "b" => VarKey::B { employee, day },
                _ => VarKey::E { employee, day },
            }
        }
        ("s", 4) => VarKey::Slack {
            activity: field(0, "a")? as usize,
            day: day(1)?,
            start_slot: u32::try_from(field(2, "t")?).map_err(|_| bad())?,
            end_slot: u32::try_from(field(3, "")?).map_err(|_| bad())?,
        },
        _ => return Err(bad()),
    };
    Ok(key)
}
