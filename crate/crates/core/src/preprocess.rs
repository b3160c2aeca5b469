//! Compatibility matrix, merging of identical activities into macro
//! activities, and the backward relabelling of macro solutions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::{Activity, Assignment, CheckoutRole, Demand, Employee, Instance, InstanceData, Solution};
use crate::error::{Error, Result};

/// `compatible(r, a)` holds iff the employee has every skill the activity requires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityMatrix {
    activities: usize,
    cells: Vec<bool>,
}

impl CompatibilityMatrix {
    pub fn get(&self, employee: usize, activity: usize) -> bool {
        self.cells[employee * self.activities + activity]
    }

    pub fn num_employees(&self) -> usize {
        if self.activities == 0 {
            0
        } else {
            self.cells.len() / self.activities
        }
    }

    pub fn num_activities(&self) -> usize {
        self.activities
    }

    /// Employees able to perform `activity`, in index order.
    pub fn eligible(&self, activity: usize) -> Vec<usize> {
        (0..self.num_employees()).filter(|&r| self.get(r, activity)).collect()
    }
}

pub(crate) fn compatibility_of(employees: &[Employee], activities: &[Activity]) -> CompatibilityMatrix {
    let mut cells = Vec::with_capacity(employees.len() * activities.len());
    for emp in employees {
        for act in activities {
            cells.push(act.required_skills.is_subset(&emp.skills));
        }
    }
    CompatibilityMatrix {
        activities: activities.len(),
        cells,
    }
}

pub fn build_compatibility(instance: &Instance) -> CompatibilityMatrix {
    compatibility_of(instance.employees(), instance.activities())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MergeGroup {
    pub macro_id: String,
    pub members: Vec<String>,
}

/// Which activities were merged, and where each original demand went.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MergePlan {
    pub groups: Vec<MergeGroup>,
    /// Original demand index -> demand index in the merged instance.
    pub demand_map: Vec<usize>,
}

impl MergePlan {
    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Builds the reduced instance described by this plan.
    pub fn apply(&self, original: &Instance) -> Result<Instance> {
        let layout = PlanLayout::new(self, original)?;
        let data = original.data();

        let mut activities = Vec::with_capacity(layout.merged_to_members.len());
        for (m, members) in layout.merged_to_members.iter().enumerate() {
            let mut act = data.activities[members[0]].clone();
            if let Some(id) = &layout.macro_ids[m] {
                act.id = id.clone();
            }
            activities.push(act);
        }
        let affinity = data
            .affinity
            .iter()
            .map(|row| layout.merged_to_members.iter().map(|members| row[members[0]]).collect())
            .collect();
        if self.demand_map.len() != data.demands.len() {
            return Err(Error::invalid("merge_plan.demand_map", "one entry per original demand is required"));
        }
        let mut demands: Vec<Option<Demand>> = vec![None; data.demands.len()];
        for (i, dem) in data.demands.iter().enumerate() {
            let target = self.demand_map[i];
            if target >= demands.len() || demands[target].is_some() {
                return Err(Error::invalid("merge_plan.demand_map", "demand map must be a permutation"));
            }
            demands[target] = Some(Demand {
                activity: layout.original_to_merged[dem.activity],
                ..*dem
            });
        }
        let demands = demands.into_iter().flatten().collect();

        Instance::new(InstanceData {
            grid: data.grid,
            employees: data.employees.clone(),
            activities,
            demands,
            rules: data.rules.clone(),
            history: data.history.clone(),
            affinity,
        })
    }
}

/// Index bookkeeping shared by `apply` and `redistribute`.
struct PlanLayout {
    original_to_merged: Vec<usize>,
    /// Members (original indices) of each merged activity, in index order.
    merged_to_members: Vec<Vec<usize>>,
    macro_ids: Vec<Option<String>>,
}

impl PlanLayout {
    fn new(plan: &MergePlan, original: &Instance) -> Result<Self> {
        let n = original.num_activities();
        let mut group_of = vec![None; n];
        for (g, group) in plan.groups.iter().enumerate() {
            if group.members.len() < 2 {
                return Err(Error::invalid(
                    format!("merge_plan.groups[{g}]"),
                    "a group needs at least two members",
                ));
            }
            let mut members = Vec::with_capacity(group.members.len());
            for id in &group.members {
                let a = original.activity_index(id).ok_or_else(|| Error::unknown("activity", id.clone()))?;
                if group_of[a].replace(g).is_some() {
                    return Err(Error::invalid(
                        format!("merge_plan.groups[{g}]"),
                        format!("activity `{id}` appears in more than one group"),
                    ));
                }
                members.push(a);
            }
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[..i] {
                    if !mergeable(original, a, b) {
                        return Err(Error::invalid(
                            format!("merge_plan.groups[{g}]"),
                            format!(
                                "activities `{}` and `{}` are not identical",
                                original.activities()[b].id,
                                original.activities()[a].id
                            ),
                        ));
                    }
                }
            }
        }

        let mut original_to_merged = vec![usize::MAX; n];
        let mut merged_to_members: Vec<Vec<usize>> = Vec::new();
        let mut macro_ids = Vec::new();
        let mut group_slot: BTreeMap<usize, usize> = BTreeMap::new();
        for a in 0..n {
            match group_of[a] {
                None => {
                    original_to_merged[a] = merged_to_members.len();
                    merged_to_members.push(vec![a]);
                    macro_ids.push(None);
                }
                Some(g) => {
                    let m = *group_slot.entry(g).or_insert_with(|| {
                        merged_to_members.push(Vec::new());
                        macro_ids.push(Some(plan.groups[g].macro_id.clone()));
                        merged_to_members.len() - 1
                    });
                    original_to_merged[a] = m;
                    merged_to_members[m].push(a);
                }
            }
        }
        Ok(PlanLayout {
            original_to_merged,
            merged_to_members,
            macro_ids,
        })
    }
}

/// Whether two activities may share a macro activity.
///
/// Besides equal eligible employees, parameters and affinities, demand
/// windows on the same day must be disjoint and, when the activity has a
/// minimum run of `k >= 2` slots, at least `2k - 2` slots apart so every
/// macro run can be split back into member runs of length `k`.
pub fn mergeable(instance: &Instance, a: usize, b: usize) -> bool {
    let acts = instance.activities();
    let (x, y) = (&acts[a], &acts[b]);
    if a == b
        || x.checkout_role != CheckoutRole::None
        || y.checkout_role != CheckoutRole::None
        || x.min_consecutive_minutes != y.min_consecutive_minutes
        || x.slack_penalty != y.slack_penalty
    {
        return false;
    }
    for r in 0..instance.num_employees() {
        if instance.is_compatible(r, a) != instance.is_compatible(r, b)
            || instance.affinity(r, a) != instance.affinity(r, b)
        {
            return false;
        }
    }
    let k = instance.min_run_slots(a);
    let min_gap = (2 * k).saturating_sub(2);
    for da in instance.demands().iter().filter(|d| d.activity == a) {
        for db in instance.demands().iter().filter(|d| d.activity == b && d.day == da.day) {
            let gap = if da.end_slot <= db.start_slot {
                db.start_slot - da.end_slot
            } else if db.end_slot <= da.start_slot {
                da.start_slot - db.end_slot
            } else {
                return false;
            };
            if gap < min_gap {
                return false;
            }
        }
    }
    true
}

/// Merges identical activities into macro activities.
///
/// Activities are scanned in index order and each joins the first group
/// whose members it is pairwise identical with; groups of one are left
/// untouched. Demands keep their order.
pub fn merge_identical(instance: &Instance) -> (Instance, MergePlan) {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for a in 0..instance.num_activities() {
        match groups.iter_mut().find(|g| g.iter().all(|&b| mergeable(instance, a, b))) {
            Some(group) => group.push(a),
            None => groups.push(vec![a]),
        }
    }
    let groups: Vec<MergeGroup> = groups
        .into_iter()
        .filter(|g| g.len() >= 2)
        .map(|g| {
            let members: Vec<String> = g.iter().map(|&a| instance.activities()[a].id.clone()).collect();
            MergeGroup {
                macro_id: format!("macro:{}", members.join("+")),
                members,
            }
        })
        .collect();
    if groups.is_empty() {
        let plan = MergePlan {
            groups,
            demand_map: (0..instance.demands().len()).collect(),
        };
        return (instance.clone(), plan);
    }
    let plan = MergePlan {
        groups,
        demand_map: (0..instance.demands().len()).collect(),
    };
    let merged = plan
        .apply(instance)
        .expect("a plan built from pairwise identical activities is valid");
    (merged, plan)
}

/// Relabels a macro solution onto the original activities.
///
/// Inside a member's demand window the slot takes that member. Slots of a
/// macro run between windows of different members are split so that the
/// earlier member's piece reaches the minimum run length when possible;
/// other free slots continue the nearest window's member, and runs touching
/// no window take the member with the smallest id.
pub fn redistribute(macro_solution: &Solution, plan: &MergePlan, original: &Instance) -> Result<Solution> {
    let layout = PlanLayout::new(plan, original)?;
    let grid = original.grid();
    let (emps, merged_acts, slots, days) = macro_solution.assignment.dims();
    if emps != original.num_employees()
        || merged_acts != layout.merged_to_members.len()
        || slots != grid.num_slots()
        || days != grid.days()
    {
        return Err(Error::Dimension("macro solution does not match the merged instance".into()));
    }
    let source = &macro_solution.assignment;
    let mut x = Assignment::empty(original);

    for r in 0..emps {
        for d in 0..days {
            for (m, members) in layout.merged_to_members.iter().enumerate() {
                if members.len() == 1 {
                    for t in 0..slots {
                        if source.get(r, m, t, d) {
                            x.set(r, members[0], t, d, true);
                        }
                    }
                    continue;
                }
                let mut t = 0;
                while t < slots {
                    if !source.get(r, m, t, d) {
                        t += 1;
                        continue;
                    }
                    let start = t;
                    while t < slots && source.get(r, m, t, d) {
                        t += 1;
                    }
                    let labels = label_run(original, members, d, start, t)?;
                    for (offset, a) in (start..t).zip(labels) {
                        x.set(r, a, offset, d, true);
                    }
                }
            }
        }
    }
    Solution::from_assignment(original, x)
}

fn label_run(original: &Instance, members: &[usize], day: usize, start: usize, end: usize) -> Result<Vec<usize>> {
    let forced: Vec<Option<usize>> = (start..end)
        .map(|t| members.iter().copied().find(|&a| original.demand_at(a, day, t).is_some()))
        .collect();
    let fallback = members
        .iter()
        .copied()
        .min_by(|&a, &b| original.activities()[a].id.cmp(&original.activities()[b].id))
        .ok_or_else(|| Error::Internal("macro activity without members".into()))?;
    let positions: Vec<usize> = (0..forced.len()).filter(|&i| forced[i].is_some()).collect();
    let Some(&first) = positions.first() else {
        return Ok(vec![fallback; end - start]);
    };
    let k = original.min_run_slots(members[0]).max(1) as usize;
    let mut labels = vec![fallback; end - start];
    let mut label = forced[first].unwrap_or(fallback);
    let mut piece_start = 0;
    labels[..=first].fill(label);
    for pair in positions.windows(2) {
        let (p, q) = (pair[0], pair[1]);
        let next = forced[q].unwrap_or(fallback);
        if next == label {
            labels[p..=q].fill(label);
            continue;
        }
        let split = (piece_start + k).max(p + 1).min(q);
        labels[p + 1..split].fill(label);
        labels[split..=q].fill(next);
        label = next;
        piece_start = split;
    }
    let last = *positions.last().unwrap_or(&first);
    labels[last..].fill(label);
    Ok(labels)
}
