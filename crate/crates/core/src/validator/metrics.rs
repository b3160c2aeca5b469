use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::{Instance, Solution};
use crate::error::{Error, Result};

/// Activity id -> department name.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DepartmentMap(pub BTreeMap<String, String>);

impl DepartmentMap {
    /// Every activity in one department.
    pub fn single(instance: &Instance, name: &str) -> Self {
        DepartmentMap(
            instance
                .activities()
                .iter()
                .map(|a| (a.id.clone(), name.to_string()))
                .collect(),
        )
    }

    /// Department index of every activity, in activity order.
    fn resolve(&self, instance: &Instance) -> Result<Vec<usize>> {
        let names: Vec<&String> = {
            let mut v: Vec<&String> = self.0.values().collect();
            v.sort();
            v.dedup();
            v
        };
        instance
            .activities()
            .iter()
            .map(|a| {
                let dep = self.0.get(&a.id).ok_or_else(|| Error::unknown("activity in department map", a.id.clone()))?;
                Ok(names.binary_search(&dep).unwrap_or(0))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub total_slack_hours: f64,
    pub violation_count: usize,
    /// Percentage in `[0, 100]`.
    pub department_demand_satisfaction: f64,
}

/// Slack hours, violation count and department saturation.
///
/// Within a department and day, demand windows that overlap are pooled: the
/// pool is credited with the work on any of the department's activities in
/// its slots, up to the pool's demanded minutes.
pub fn metrics(instance: &Instance, solution: &Solution, departments: &DepartmentMap) -> Result<Metrics> {
    let dept_of = departments.resolve(instance)?;
    let report = super::check(instance, &solution.assignment)?;
    let slacks = super::slacks(instance, &solution.assignment);
    let slack_minutes: u64 = slacks.iter().map(|&s| s as u64).sum();

    let grid = instance.grid();
    let ts = grid.slot_minutes() as u64;
    let demanded: u64 = instance.total_demand_minutes();
    let mut credited: u64 = 0;

    let mut keys: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, dem) in instance.demands().iter().enumerate() {
        keys.entry((dept_of[dem.activity], dem.day)).or_default().push(i);
    }
    for ((dept, day), mut members) in keys {
        members.sort_by_key(|&i| instance.demands()[i].start_slot);
        let mut clusters: Vec<(u32, u32, Vec<usize>)> = Vec::new();
        for i in members {
            let dem = instance.demands()[i];
            match clusters.last_mut() {
                Some((_, end, ids)) if dem.start_slot < *end => {
                    *end = (*end).max(dem.end_slot);
                    ids.push(i);
                }
                _ => clusters.push((dem.start_slot, dem.end_slot, vec![i])),
            }
        }
        for (start, end, ids) in clusters {
            let wanted: u64 = ids.iter().map(|&i| instance.demands()[i].minutes as u64).sum();
            let mut covered: u64 = 0;
            for slot in start..end {
                let t = grid.offset(slot);
                for r in 0..instance.num_employees() {
                    for a in (0..instance.num_activities()).filter(|&a| dept_of[a] == dept) {
                        covered += solution.assignment.get(r, a, t, day) as u64 * ts;
                    }
                }
            }
            credited += covered.min(wanted);
        }
    }

    let satisfaction = if demanded == 0 {
        100.0
    } else {
        100.0 * credited as f64 / demanded as f64
    };
    Ok(Metrics {
        total_slack_hours: slack_minutes as f64 / 60.0,
        violation_count: report.total(),
        department_demand_satisfaction: satisfaction,
    })
}

/// One line of the comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub instance: String,
    pub case: String,
    #[serde(flatten)]
    pub metrics: Metrics,
}

pub const TABLE_HEADER: [&str; 5] = ["Instance", "Case", "Σα [h]", "Violations", "Dept dem %"];

/// One decimal, except that a value short of 100 never prints as `100.0`.
pub fn format_percent(value: f64) -> String {
    let text = format!("{value:.1}");
    if value < 100.0 && text == "100.0" {
        "99.9".to_string()
    } else {
        text
    }
}

/// Aligned plain-text table with one row per case.
pub fn format_table(rows: &[MetricsRow]) -> String {
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|row| {
            [
                row.instance.clone(),
                row.case.clone(),
                format!("{:.2}", row.metrics.total_slack_hours),
                row.metrics.violation_count.to_string(),
                format_percent(row.metrics.department_demand_satisfaction),
            ]
        })
        .collect();
    let mut widths: [usize; 5] = TABLE_HEADER.map(|h| h.chars().count());
    for row in &cells {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cols: [&str; 5]| {
        let mut out = String::new();
        for (i, (col, w)) in cols.iter().zip(widths).enumerate() {
            let pad = w - col.chars().count();
            if i > 0 {
                out.push_str("  ");
            }
            if i < 2 {
                out.push_str(col);
                out.push_str(&" ".repeat(pad));
            } else {
                out.push_str(&" ".repeat(pad));
                out.push_str(col);
            }
        }
        out.trim_end().to_string()
    };
    let mut out = line(TABLE_HEADER);
    out.push('\n');
    for row in &cells {
        out.push_str(&line([&row[0], &row[1], &row[2], &row[3], &row[4]]));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Activity, Assignment, Demand, Employee, InstanceData, RuleSet, TimeGrid};

    fn instance() -> Instance {
        let g = TimeGrid::new(30, 16, 23, 1).unwrap();
        Instance::new(InstanceData::new(
            g,
            vec![Employee::always_available("r1", &[], &g)],
            vec![Activity::new("a", &[], 0, 1)],
            vec![Demand { activity: 0, day: 0, start_slot: 16, end_slot: 18, minutes: 60 }],
            RuleSet::permissive(&g),
        ))
        .unwrap()
    }

    #[test]
    fn half_covered_demand() {
        let inst = instance();
        let mut x = Assignment::empty(&inst);
        x.set(0, 0, 0, 0, true);
        let sol = Solution::from_assignment(&inst, x).unwrap();
        let m = metrics(&inst, &sol, &DepartmentMap::single(&inst, "store")).unwrap();
        assert_eq!(m.total_slack_hours, 0.5);
        assert_eq!(m.violation_count, 0);
        assert_eq!(m.department_demand_satisfaction, 50.0);
    }

    #[test]
    fn sibling_activity_counts_toward_its_department() {
        let g = TimeGrid::new(30, 16, 23, 1).unwrap();
        let inst = Instance::new(InstanceData::new(
            g,
            vec![Employee::always_available("r1", &[], &g)],
            vec![Activity::new("a", &[], 0, 1), Activity::new("b", &[], 0, 1)],
            vec![
                Demand { activity: 0, day: 0, start_slot: 16, end_slot: 18, minutes: 30 },
                Demand { activity: 1, day: 0, start_slot: 17, end_slot: 19, minutes: 30 },
            ],
            RuleSet::permissive(&g),
        ))
        .unwrap();
        // one hour on b while a goes uncovered
        let mut x = Assignment::empty(&inst);
        x.set(0, 1, 1, 0, true);
        x.set(0, 1, 2, 0, true);
        let sol = Solution::from_assignment(&inst, x).unwrap();
        let pooled = metrics(&inst, &sol, &DepartmentMap::single(&inst, "store")).unwrap();
        assert_eq!(pooled.total_slack_hours, 0.5);
        assert_eq!(pooled.department_demand_satisfaction, 100.0);
        let split: DepartmentMap = serde_json::from_str(r#"{"a": "x", "b": "y"}"#).unwrap();
        assert_eq!(metrics(&inst, &sol, &split).unwrap().department_demand_satisfaction, 50.0);
    }

    #[test]
    fn unmapped_activity_is_an_error() {
        let inst = instance();
        let err = metrics(&inst, &Solution::empty(&inst), &DepartmentMap::default()).unwrap_err();
        assert!(matches!(err, Error::UnknownId { .. }));
    }

    #[test]
    fn table_has_the_comparison_columns() {
        let inst = instance();
        let m = metrics(&inst, &Solution::empty(&inst), &DepartmentMap::single(&inst, "store")).unwrap();
        let table = format_table(&[MetricsRow { instance: "toy".into(), case: "A".into(), metrics: m }]);
        let mut lines = table.lines();
        let header = lines.next().unwrap();
        for col in TABLE_HEADER {
            assert!(header.contains(col));
        }
        let row: Vec<&str> = lines.next().unwrap().split_whitespace().collect();
        assert_eq!(row, vec!["toy", "A", "1.00", "0", "0.0"]);
    }

    #[test]
    fn percent_below_full_never_rounds_up() {
        assert_eq!(format_percent(99.96), "99.9");
        assert_eq!(format_percent(100.0), "100.0");
        assert_eq!(format_percent(57.3), "57.3");
    }
}
