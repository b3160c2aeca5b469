//! Solver-agnostic MILP of a rostering instance, and its MPS/LP text forms.

mod emit;
mod naming;

pub use emit::{emit_lp, emit_mps, lp_string, mps_string, write_lp, write_mps};
pub use naming::{parse_var_name, var_name, VarKey};

use crate::domain::{Assignment, Instance};
use crate::error::{Error, Result};
use crate::preprocess::CompatibilityMatrix;
use crate::validator::{consecutive_day_windows, slacks};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Binary,
    Integer,
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub key: VarKey,
    pub kind: VarKind,
    pub lower: i64,
    /// `None` is unbounded above.
    pub upper: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

/// `sum(coef * var) sense rhs`, terms sorted by variable index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Row {
    pub fn activity(&self, values: &[i64]) -> i64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    pub fn is_satisfied(&self, values: &[i64]) -> bool {
        self.sense.holds(self.activity(values), self.rhs)
    }
}

/// Minimisation model with integer row data.
///
/// Objective coefficients are numerators over `objective_denominator`, so
/// the objective of an integral point is an exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilpModel {
    pub name: String,
    pub variables: Vec<Variable>,
    pub rows: Vec<Row>,
    pub objective: Vec<(usize, i64)>,
    pub objective_denominator: u64,
}

impl MilpModel {
    pub fn empty(name: impl Into<String>) -> Self {
        MilpModel {
            name: name.into(),
            variables: Vec::new(),
            rows: Vec::new(),
            objective: Vec::new(),
            objective_denominator: 1,
        }
    }

    pub fn variable_index(&self, key: &VarKey) -> Option<usize> {
        self.variables.iter().position(|v| v.key == *key)
    }

    /// Objective numerator at an integral point.
    pub fn objective_numerator(&self, values: &[i64]) -> i64 {
        self.objective.iter().map(|&(v, c)| c * values[v]).sum()
    }

    pub fn objective_value(&self, values: &[i64]) -> f64 {
        self.objective_numerator(values) as f64 / self.objective_denominator as f64
    }

    pub fn in_bounds(&self, values: &[i64]) -> bool {
        self.variables
            .iter()
            .zip(values)
            .all(|(v, &x)| x >= v.lower && v.upper.is_none_or(|u| x <= u))
    }

    /// Rows violated at an integral point.
    pub fn violated_rows(&self, values: &[i64]) -> Vec<&Row> {
        self.rows.iter().filter(|row| !row.is_satisfied(values)).collect()
    }

    pub fn is_feasible(&self, values: &[i64]) -> bool {
        values.len() == self.variables.len() && self.in_bounds(values) && self.violated_rows(values).is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelStats {
    pub variables: usize,
    pub binaries: usize,
    pub rows: usize,
    pub nonzeros: usize,
}

/// Counts of variables, binaries, rows and constraint-matrix nonzeros.
pub fn model_stats(model: &MilpModel) -> ModelStats {
    ModelStats {
        variables: model.variables.len(),
        binaries: model.variables.iter().filter(|v| v.kind == VarKind::Binary).count(),
        rows: model.rows.len(),
        nonzeros: model.rows.iter().map(|r| r.terms.len()).sum(),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Create every `x` cell and forbid incompatible or unavailable ones
    /// with explicit rows instead of leaving them out.
    pub dense: bool,
}

pub fn build_model(instance: &Instance, compat: &CompatibilityMatrix) -> Result<MilpModel> {
    build_model_with(instance, compat, BuildOptions::default())
}

struct Builder {
    model: MilpModel,
}

impl Builder {
    fn var(&mut self, key: VarKey, kind: VarKind, lower: i64, upper: Option<i64>) -> usize {
        self.model.variables.push(Variable {
            name: var_name(&key),
            key,
            kind,
            lower,
            upper,
        });
        self.model.variables.len() - 1
    }

    fn row(&mut self, name: String, mut terms: Vec<(usize, i64)>, sense: Sense, rhs: i64) {
        terms.sort_by_key(|&(v, _)| v);
        self.model.rows.push(Row { name, terms, sense, rhs });
    }
}

/// Dense lookup from `(employee, activity, offset, day)` to a variable.
struct CellIndex {
    activities: usize,
    slots: usize,
    days: usize,
    cells: Vec<Option<usize>>,
}

impl CellIndex {
    fn new(employees: usize, activities: usize, slots: usize, days: usize) -> Self {
        CellIndex {
            activities,
            slots,
            days,
            cells: vec![None; employees * activities * slots * days],
        }
    }

    fn at(&self, r: usize, a: usize, t: usize, d: usize) -> usize {
        ((r * self.days + d) * self.slots + t) * self.activities + a
    }

    fn get(&self, r: usize, a: usize, t: usize, d: usize) -> Option<usize> {
        self.cells[self.at(r, a, t, d)]
    }

    /// Variable at `t - 1`, with nothing before the first slot.
    fn before(&self, r: usize, a: usize, t: usize, d: usize) -> Option<usize> {
        if t == 0 {
            None
        } else {
            self.get(r, a, t - 1, d)
        }
    }

    fn set(&mut self, r: usize, a: usize, t: usize, d: usize, v: usize) {
        let i = self.at(r, a, t, d);
        self.cells[i] = Some(v);
    }
}

/// Builds the full model: definition rows, legal and company rules,
/// soft demand rows and the slack-plus-affinity objective.
pub fn build_model_with(instance: &Instance, compat: &CompatibilityMatrix, options: BuildOptions) -> Result<MilpModel> {
    let grid = *instance.grid();
    let (nr, na, n, nd) = (
        instance.num_employees(),
        instance.num_activities(),
        grid.num_slots(),
        grid.days(),
    );
    if compat.num_activities() != na || (na > 0 && compat.num_employees() != nr) {
        return Err(Error::Dimension("compatibility matrix does not match the instance".into()));
    }
    let checkout = match (instance.opening_activity(), instance.closing_activity()) {
        (Some(op), Some(cl)) => Some((op, cl)),
        (None, None) => None,
        _ => {
            return Err(Error::Formulation(
                "the checkout rule needs both an opening and a closing activity".into(),
            ))
        }
    };
    let rules = *instance.slot_rules();
    let t0 = grid.first_slot() as i64;
    let tsd = grid.slots_per_day() as i64;
    let ts = grid.slot_minutes() as i64;
    let big_t = n as i64;
    let exists = |r: usize, a: usize, t: usize, d: usize| {
        options.dense || (compat.get(r, a) && instance.is_available(r, t, d))
    };

    let mut b = Builder {
        model: MilpModel::empty("roster"),
    };

    let mut x = CellIndex::new(nr, na, n, nd);
    for r in 0..nr {
        for d in 0..nd {
            for t in 0..n {
                for a in 0..na {
                    if exists(r, a, t, d) {
                        let key = VarKey::X { employee: r, activity: a, slot: grid.slot_at(t), day: d };
                        let v = b.var(key, VarKind::Binary, 0, Some(1));
                        x.set(r, a, t, d, v);
                    }
                }
            }
        }
    }
    let mut y = CellIndex::new(nr, na, n, nd);
    for r in 0..nr {
        for d in 0..nd {
            for t in 0..n {
                for a in 0..na {
                    if x.get(r, a, t, d).is_some() || x.before(r, a, t, d).is_some() {
                        let key = VarKey::Y { employee: r, activity: a, slot: grid.slot_at(t), day: d };
                        let v = b.var(key, VarKind::Integer, -1, Some(1));
                        y.set(r, a, t, d, v);
                    }
                }
            }
        }
    }
    let per_day = |b: &mut Builder, make: fn(usize, usize) -> VarKey, kind: VarKind, lo: i64, hi: Option<i64>| -> Vec<usize> {
        let mut out = Vec::with_capacity(nr * nd);
        for r in 0..nr {
            for d in 0..nd {
                out.push(b.var(make(r, d), kind, lo, hi));
            }
        }
        out
    };
    let bound_hi = Some(grid.end_boundary() as i64);
    let z = per_day(&mut b, |employee, day| VarKey::Z { employee, day }, VarKind::Binary, 0, Some(1));
    let bv = per_day(&mut b, |employee, day| VarKey::B { employee, day }, VarKind::Integer, t0, bound_hi);
    let ev = per_day(&mut b, |employee, day| VarKey::E { employee, day }, VarKind::Integer, t0, bound_hi);
    let rd = |r: usize, d: usize| r * nd + d;
    let slack: Vec<usize> = instance
        .demands()
        .iter()
        .map(|dem| {
            let key = VarKey::Slack {
                activity: dem.activity,
                day: dem.day,
                start_slot: dem.start_slot,
                end_slot: dem.end_slot,
            };
            b.var(key, VarKind::Continuous, 0, None)
        })
        .collect();

    let slot_terms = |r: usize, t: usize, d: usize| -> Vec<usize> { (0..na).filter_map(|a| x.get(r, a, t, d)).collect() };
    let day_terms = |r: usize, d: usize| -> Vec<usize> { (0..n).flat_map(|t| slot_terms(r, t, d)).collect() };

    // D1
    for r in 0..nr {
        for d in 0..nd {
            for t in 0..n {
                for a in 0..na {
                    let Some(yv) = y.get(r, a, t, d) else { continue };
                    let mut terms = vec![(yv, 1)];
                    if let Some(xv) = x.get(r, a, t, d) {
                        terms.push((xv, -1));
                    }
                    if let Some(xp) = x.before(r, a, t, d) {
                        terms.push((xp, 1));
                    }
                    let name = format!("D1_r{r}_a{a}_t{}_d{}", grid.slot_at(t), d + 1);
                    b.row(name, terms, Sense::Eq, 0);
                }
            }
        }
    }

    // D2
    let big_m = (na * n) as i64;
    for r in 0..nr {
        for d in 0..nd {
            let xs = day_terms(r, d);
            let mut upper: Vec<(usize, i64)> = xs.iter().map(|&v| (v, 1)).collect();
            upper.push((z[rd(r, d)], -big_m));
            b.row(format!("D2a_r{r}_d{}", d + 1), upper, Sense::Le, 0);
            let mut lower: Vec<(usize, i64)> = xs.iter().map(|&v| (v, 1)).collect();
            lower.push((z[rd(r, d)], -1));
            b.row(format!("D2b_r{r}_d{}", d + 1), lower, Sense::Ge, 0);
        }
    }

    // D3, D4
    for r in 0..nr {
        for d in 0..nd {
            for t in 0..n {
                let xs = slot_terms(r, t, d);
                if xs.is_empty() {
                    continue;
                }
                let slot = grid.slot_at(t) as i64;
                let mut begin: Vec<(usize, i64)> = xs.iter().map(|&v| (v, tsd)).collect();
                begin.push((bv[rd(r, d)], 1));
                b.row(format!("D3b_r{r}_t{slot}_d{}", d + 1), begin, Sense::Le, slot + tsd);
                let mut end: Vec<(usize, i64)> = xs.iter().map(|&v| (v, -(slot + 1))).collect();
                end.push((ev[rd(r, d)], 1));
                b.row(format!("D3e_r{r}_t{slot}_d{}", d + 1), end, Sense::Ge, 0);
                if xs.len() >= 2 {
                    let terms = xs.iter().map(|&v| (v, 1)).collect();
                    b.row(format!("D4_r{r}_t{slot}_d{}", d + 1), terms, Sense::Le, 1);
                }
            }
        }
    }

    // D5
    for r in 0..nr {
        for d in 0..nd {
            b.row(
                format!("D5_r{r}_d{}", d + 1),
                vec![(bv[rd(r, d)], 1), (ev[rd(r, d)], -1)],
                Sense::Le,
                0,
            );
        }
    }

    // L1, L2
    for r in 0..nr {
        for d in 0..nd {
            let xs = day_terms(r, d);
            if !xs.is_empty() {
                let terms = xs.into_iter().map(|v| (v, 1)).collect();
                b.row(format!("L1_r{r}_d{}", d + 1), terms, Sense::Le, rules.daily as i64);
            }
        }
        let all: Vec<(usize, i64)> = (0..nd).flat_map(|d| day_terms(r, d)).map(|v| (v, 1)).collect();
        if !all.is_empty() {
            b.row(format!("L2_r{r}"), all, Sense::Le, instance.horizon_budget(r) as i64);
        }
    }

    // L3
    for r in 0..nr {
        for (w, (days, rhs)) in consecutive_day_windows(instance, r).into_iter().enumerate() {
            let terms = days.map(|d| (z[rd(r, d)], 1)).collect();
            b.row(format!("L3_r{r}_w{w}"), terms, Sense::Le, rhs as i64);
        }
    }

    // L4
    let window = rules.stretch_window() as usize;
    if window >= 1 && window <= n {
        for r in 0..nr {
            for d in 0..nd {
                for s in 0..=n - window {
                    let terms: Vec<(usize, i64)> = (s..s + window).flat_map(|t| slot_terms(r, t, d)).map(|v| (v, 1)).collect();
                    if terms.len() as u32 > rules.stretch {
                        b.row(
                            format!("L4_r{r}_t{}_d{}", grid.slot_at(s), d + 1),
                            terms,
                            Sense::Le,
                            rules.stretch as i64,
                        );
                    }
                }
            }
        }
    }

    // L5, L6
    for r in 0..nr {
        for d in 0..nd {
            b.row(
                format!("L5_r{r}_d{}", d + 1),
                vec![(ev[rd(r, d)], 1), (bv[rd(r, d)], -1)],
                Sense::Le,
                rules.span as i64,
            );
        }
        let rest = rules.rest as i64;
        if let Some(last_end) = instance.history()[r].last_end_slot {
            b.row(format!("L6_r{r}_d1"), vec![(bv[rd(r, 0)], 1)], Sense::Ge, rest - tsd + last_end as i64);
        }
        for d in 1..nd {
            b.row(
                format!("L6_r{r}_d{}", d + 1),
                vec![(bv[rd(r, d)], 1), (ev[rd(r, d - 1)], -1)],
                Sense::Ge,
                rest - tsd,
            );
        }
    }

    // G1
    let k = rules.after_break as usize;
    if k >= 2 && k <= n {
        for r in 0..nr {
            for d in 0..nd {
                for s in 0..=n - k {
                    let ys: Vec<usize> = (0..na).filter_map(|a| y.get(r, a, s, d)).collect();
                    if ys.is_empty() {
                        continue;
                    }
                    let mut terms: Vec<(usize, i64)> = (s..s + k).flat_map(|t| slot_terms(r, t, d)).map(|v| (v, 1)).collect();
                    terms.extend(ys.into_iter().map(|v| (v, -(k as i64))));
                    b.row(format!("G1_r{r}_t{}_d{}", grid.slot_at(s), d + 1), terms, Sense::Ge, 0);
                }
            }
        }
    }

    // G2
    for (i, dem) in instance.demands().iter().enumerate() {
        let mut terms = Vec::new();
        for slot in dem.start_slot..dem.end_slot {
            let t = grid.offset(slot);
            for r in 0..nr {
                if let Some(v) = x.get(r, dem.activity, t, dem.day) {
                    terms.push((v, ts));
                }
            }
        }
        terms.push((slack[i], 1));
        let name = format!("G2_a{}_d{}_t{}_{}", dem.activity, dem.day + 1, dem.start_slot, dem.end_slot);
        b.row(name, terms, Sense::Ge, dem.minutes as i64);
    }

    // G3
    for a in 0..na {
        let k = instance.min_run_slots(a) as usize;
        if k < 2 || k > n {
            continue;
        }
        for r in 0..nr {
            for d in 0..nd {
                for s in 0..=n - k {
                    let Some(yv) = y.get(r, a, s, d) else { continue };
                    let mut terms: Vec<(usize, i64)> = (s..s + k).filter_map(|t| x.get(r, a, t, d)).map(|v| (v, 1)).collect();
                    terms.push((yv, -(k as i64)));
                    b.row(format!("G3_r{r}_a{a}_t{}_d{}", grid.slot_at(s), d + 1), terms, Sense::Ge, 0);
                }
            }
        }
    }

    // G4, G5 (dense build only)
    if options.dense {
        for r in 0..nr {
            for d in 0..nd {
                for t in 0..n {
                    for a in 0..na {
                        let v = x.get(r, a, t, d).expect("dense build has every cell");
                        let slot = grid.slot_at(t);
                        if !compat.get(r, a) {
                            b.row(format!("G4_r{r}_a{a}_t{slot}_d{}", d + 1), vec![(v, 1)], Sense::Le, 0);
                        }
                        if !instance.is_available(r, t, d) {
                            b.row(format!("G5_r{r}_a{a}_t{slot}_d{}", d + 1), vec![(v, 1)], Sense::Le, 0);
                        }
                    }
                }
            }
        }
    }

    // G6
    if let Some((op, cl)) = checkout {
        for r in 0..nr {
            for d in 0..nd {
                let ops: Vec<Option<usize>> = (0..n).map(|t| x.get(r, op, t, d)).collect();
                let cls: Vec<Option<usize>> = (0..n).map(|t| x.get(r, cl, t, d)).collect();
                if ops.iter().all(Option::is_none) && cls.iter().all(Option::is_none) {
                    continue;
                }
                let day = d + 1;
                let mut link: Vec<(usize, i64)> = ops.iter().flatten().map(|&v| (v, 1)).collect();
                if !link.is_empty() {
                    link.extend(cls.iter().flatten().map(|&v| (v, -big_t)));
                    b.row(format!("G6a_r{r}_d{day}"), link, Sense::Le, 0);
                }
                let once: Vec<(usize, i64)> = cls.iter().flatten().map(|&v| (v, 1)).collect();
                if once.len() > 1 {
                    b.row(format!("G6b_r{r}_d{day}"), once, Sense::Le, 1);
                }
                for t in 0..n {
                    let Some(cv) = cls[t] else { continue };
                    let slot = grid.slot_at(t);
                    let later: Vec<(usize, i64)> = ops[t..].iter().flatten().map(|&v| (v, 1)).collect();
                    if !later.is_empty() {
                        let mut terms = later;
                        terms.push((cv, big_t));
                        b.row(format!("G6c_r{r}_t{slot}_d{day}"), terms, Sense::Le, big_t);
                    }
                    let mut terms = vec![(cv, 1)];
                    if t > 0 {
                        if let Some(pv) = ops[t - 1] {
                            terms.push((pv, -1));
                        }
                    }
                    b.row(format!("G6d_r{r}_t{slot}_d{day}"), terms, Sense::Le, 0);
                }
            }
        }
    }

    // objective
    let divisor = instance.affinity_divisor();
    let divisor_i = i64::try_from(divisor).map_err(|_| Error::Formulation("affinity divisor overflows".into()))?;
    let mut objective = Vec::new();
    for r in 0..nr {
        for d in 0..nd {
            for t in 0..n {
                for a in 0..na {
                    if let Some(v) = x.get(r, a, t, d) {
                        let c = instance.affinity(r, a) as i64;
                        if c != 0 {
                            objective.push((v, c));
                        }
                    }
                }
            }
        }
    }
    for (i, dem) in instance.demands().iter().enumerate() {
        let p = instance.activities()[dem.activity].slack_penalty as i64;
        if p != 0 {
            objective.push((slack[i], p * divisor_i));
        }
    }
    objective.sort_by_key(|&(v, _)| v);
    b.model.objective = objective;
    b.model.objective_denominator = divisor;
    Ok(b.model)
}

/// Model point of an assignment: `x` as given, `y`, `z` and slack derived,
/// `b`/`e` at the first and one-past-last worked slot of worked days.
///
/// On days off `b = e` takes the smallest value the rest rule allows after
/// the previous worked day, which is the window start unless the required
/// rest exceeds the night.
pub fn canonical_point(model: &MilpModel, instance: &Instance, assignment: &Assignment) -> Result<Vec<i64>> {
    assignment.ensure_matches(instance)?;
    let grid = instance.grid();
    let t0 = grid.first_slot() as i64;
    let tsd = grid.slots_per_day() as i64;
    let rest = instance.slot_rules().rest as i64;
    let nd = grid.days();

    let mut bounds = vec![(t0, t0); instance.num_employees() * nd];
    for r in 0..instance.num_employees() {
        let mut prev_end = instance.history()[r].last_end_slot.map(|e| e as i64);
        for d in 0..nd {
            let db = crate::domain::day_bounds(instance, assignment, r, d);
            let (begin, end) = if db.worked {
                (db.begin as i64, db.end as i64)
            } else {
                let lowest = prev_end.map_or(t0, |e| t0.max(e + rest - tsd));
                (lowest, lowest)
            };
            bounds[r * nd + d] = (begin, end);
            prev_end = Some(end);
        }
    }
    let slack = slacks(instance, assignment);
    let demand_index = |activity: usize, day: usize, start: u32, end: u32| {
        instance
            .demands()
            .iter()
            .position(|d| d.activity == activity && d.day == day && d.start_slot == start && d.end_slot == end)
    };

    model
        .variables
        .iter()
        .map(|var| {
            let cell = |r: usize, a: usize, slot: u32, d: usize| assignment.get(r, a, grid.offset(slot), d) as i64;
            let before = |r: usize, a: usize, slot: u32, d: usize| {
                if slot == grid.first_slot() {
                    0
                } else {
                    cell(r, a, slot - 1, d)
                }
            };
            Ok(match var.key {
                VarKey::X { employee, activity, slot, day } => cell(employee, activity, slot, day),
                VarKey::Y { employee, activity, slot, day } => {
                    cell(employee, activity, slot, day) - before(employee, activity, slot, day)
                }
                VarKey::Z { employee, day } => (assignment_day_worked(assignment, employee, day, grid.num_slots())) as i64,
                VarKey::B { employee, day } => bounds[employee * nd + day].0,
                VarKey::E { employee, day } => bounds[employee * nd + day].1,
                VarKey::Slack { activity, day, start_slot, end_slot } => {
                    let i = demand_index(activity, day, start_slot, end_slot)
                        .ok_or_else(|| Error::Internal(format!("no demand for slack `{}`", var.name)))?;
                    slack[i] as i64
                }
            })
        })
        .collect()
}

fn assignment_day_worked(x: &Assignment, r: usize, d: usize, slots: usize) -> bool {
    (0..slots).any(|t| x.worked_count(r, t, d) > 0)
}

/// Assignment encoded in a model point (`x` entries equal to 1).
pub fn assignment_of_point(model: &MilpModel, instance: &Instance, values: &[i64]) -> Assignment {
    let grid = instance.grid();
    let mut x = Assignment::empty(instance);
    for (var, &v) in model.variables.iter().zip(values) {
        if let VarKey::X { employee, activity, slot, day } = var.key {
            if v == 1 {
                x.set(employee, activity, grid.offset(slot), day, true);
            }
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Activity, Demand, Employee, InstanceData, RuleSet, TimeGrid};
    use crate::preprocess::build_compatibility;

    fn toy() -> Instance {
        let g = TimeGrid::new(30, 16, 19, 1).unwrap();
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
    fn toy_variable_count() {
        let inst = toy();
        let model = build_model(&inst, &build_compatibility(&inst)).unwrap();
        let stats = model_stats(&model);
        // 4 x + 4 y + z + b + e + 1 slack
        assert_eq!(stats.variables, 4 + 4 + 1 + 1 + 1 + 1);
        assert_eq!(stats.binaries, 5);
        assert_eq!(model.variables[0].name, "x_r0_a0_t16_d1");
    }

    #[test]
    fn empty_model_stats_are_zero() {
        let stats = model_stats(&MilpModel::empty("m"));
        assert_eq!(stats, ModelStats { variables: 0, binaries: 0, rows: 0, nonzeros: 0 });
    }

    #[test]
    fn canonical_point_of_feasible_assignment_is_feasible() {
        let inst = toy();
        let model = build_model(&inst, &build_compatibility(&inst)).unwrap();
        let mut x = Assignment::empty(&inst);
        x.set(0, 0, 1, 0, true);
        x.set(0, 0, 2, 0, true);
        let point = canonical_point(&model, &inst, &x).unwrap();
        assert!(model.is_feasible(&point));
        assert_eq!(assignment_of_point(&model, &inst, &point), x);
        let sol = crate::domain::Solution::from_assignment(&inst, x).unwrap();
        assert_eq!(model.objective_value(&point), sol.cost.value());
    }

    #[test]
    fn one_sided_checkout_is_a_formulation_error() {
        let mut data = toy().into_data();
        data.activities[0].checkout_role = crate::domain::CheckoutRole::Opening;
        let inst = Instance::new(data).unwrap();
        assert!(matches!(build_model(&inst, &build_compatibility(&inst)), Err(Error::Formulation(_))));
    }
}
