//! Shared helpers for integration tests: random tiny instances, an
//! independent enumerator of integral model points, and an MPS reader.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftmip::domain::{
    Activity, CheckoutRole, Demand, Employee, EmployeeHistory, Instance, InstanceData, RuleSet, TimeGrid,
};
use shiftmip::formulation::{MilpModel, Sense};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct TinyShape {
    pub max_employees: usize,
    pub max_activities: usize,
    pub min_slots: usize,
    pub max_slots: usize,
    pub max_days: usize,
    pub min_cells: usize,
    pub max_cells: usize,
    /// Probability of a checkout opening/closing pair.
    pub checkout: f64,
    pub daily_breaks: bool,
    /// Scales the probability that each work rule is tightened.
    pub rule_rate: f64,
}

impl Default for TinyShape {
    fn default() -> Self {
        TinyShape {
            max_employees: 2,
            max_activities: 3,
            min_slots: 3,
            max_slots: 6,
            max_days: 2,
            min_cells: 0,
            max_cells: 12,
            checkout: 0.3,
            daily_breaks: false,
            rule_rate: 1.0,
        }
    }
}

fn pick_minutes<R: Rng>(rng: &mut R, ts: u32, max_slots: u32) -> u32 {
    rng.gen_range(0..=max_slots) * ts
}

/// Random valid instance with between `shape.min_cells` and
/// `shape.max_cells` model cells.
pub fn tiny_instance<R: Rng>(rng: &mut R, shape: &TinyShape) -> Instance {
    loop {
        if let Some(inst) = try_tiny(rng, shape) {
            if (shape.min_cells..=shape.max_cells).contains(&inst.materialized_cells()) {
                return inst;
            }
        }
    }
}

fn try_tiny<R: Rng>(rng: &mut R, shape: &TinyShape) -> Option<Instance> {
    let ts = *[15u32, 30, 60].choose(rng).unwrap();
    let per_day = 1440 / ts;
    let n = rng.gen_range(shape.min_slots..=shape.max_slots) as u32;
    let t0 = rng.gen_range(0..=per_day - n);
    let days = rng.gen_range(1..=shape.max_days) as u32;
    let grid = TimeGrid::new(ts, t0, t0 + n - 1, days).ok()?;
    let skills = ["s0", "s1"];

    let ne = rng.gen_range(1..=shape.max_employees);
    let mut employees = Vec::new();
    for r in 0..ne {
        let mut emp = Employee::always_available(format!("r{r}"), &[], &grid);
        for s in skills {
            if rng.gen_bool(0.6) {
                emp.skills.insert(s.to_string());
            }
        }
        for row in &mut emp.availability {
            for cell in row.iter_mut() {
                *cell = rng.gen_bool(0.8);
            }
        }
        if rng.gen_bool(0.2) {
            emp.max_horizon_minutes = Some(pick_minutes(rng, ts, n * days));
        }
        employees.push(emp);
    }

    let na = rng.gen_range(1..=shape.max_activities);
    let mut activities = Vec::new();
    for a in 0..na {
        let req: Vec<&str> = skills.iter().copied().filter(|_| rng.gen_bool(0.3)).collect();
        let mut act = Activity::new(format!("a{a}"), &req, pick_minutes(rng, ts, 3.min(n)), rng.gen_range(0..=4));
        if rng.gen_bool(0.5) {
            act.min_consecutive_minutes = 0;
        }
        activities.push(act);
    }
    if na >= 2 && rng.gen_bool(shape.checkout) {
        activities[0].checkout_role = CheckoutRole::Opening;
        activities[1].checkout_role = CheckoutRole::Closing;
    }

    let mut demands = Vec::new();
    for a in 0..na {
        for d in 0..days as usize {
            let mut start = t0;
            while start < t0 + n && rng.gen_bool(0.6) {
                let s = rng.gen_range(start..t0 + n);
                let e = rng.gen_range(s + 1..=t0 + n);
                let minutes = rng.gen_range(0..=(e - s + 1)) * ts;
                demands.push(Demand { activity: a, day: d, start_slot: s, end_slot: e, minutes });
                start = e;
            }
        }
    }

    let mut rules = RuleSet::permissive(&grid);
    if rng.gen_bool(0.5 * shape.rule_rate) {
        rules.max_daily_minutes = pick_minutes(rng, ts, n);
    }
    if rng.gen_bool(0.3 * shape.rule_rate) {
        rules.max_horizon_minutes = pick_minutes(rng, ts, n * days);
    }
    rules.max_consecutive_days = rng.gen_range(1..=days.max(1));
    if rng.gen_bool(0.5 * shape.rule_rate) {
        rules.max_stretch_minutes = pick_minutes(rng, ts, n);
        rules.min_break_minutes = pick_minutes(rng, ts, 2);
    }
    if rng.gen_bool(0.4 * shape.rule_rate) {
        rules.max_daily_span_minutes = pick_minutes(rng, ts, n);
    }
    if rng.gen_bool(0.5 * shape.rule_rate) {
        rules.min_rest_minutes = rng.gen_range(0..=per_day) * ts;
    }
    if rng.gen_bool(0.5 * shape.rule_rate) {
        rules.min_work_after_break_minutes = pick_minutes(rng, ts, 3.min(n));
    }
    if shape.daily_breaks && rng.gen_bool(0.5 * shape.rule_rate) {
        rules.max_daily_breaks = Some(rng.gen_range(0..=1));
    }

    let mut data = InstanceData::new(grid, employees, activities, demands, rules);
    for hist in &mut data.history {
        *hist = EmployeeHistory {
            last_end_slot: rng.gen_bool(0.5).then(|| rng.gen_range(t0..=t0 + n)),
            consecutive_days: rng.gen_range(0..=2),
            minutes_worked: if rng.gen_bool(0.3) { rng.gen_range(0..=n) * ts } else { 0 },
        };
    }
    for row in &mut data.affinity {
        for c in row.iter_mut() {
            *c = if rng.gen_bool(0.5) { rng.gen_range(0..=3) } else { 0 };
        }
    }
    Instance::new(data).ok()
}

/// Instance with at least two interchangeable activities.
pub fn clone_instance<R: Rng>(rng: &mut R, max_cells: usize) -> Instance {
    loop {
        let ts = 30;
        let n = rng.gen_range(4..=7u32);
        let t0 = 16;
        let grid = TimeGrid::new(ts, t0, t0 + n - 1, 1).unwrap();
        let ne = rng.gen_range(1..=2);
        let mut employees = Vec::new();
        for r in 0..ne {
            let mut emp = Employee::always_available(format!("r{r}"), &["s0"], &grid);
            if rng.gen_bool(0.5) {
                emp.skills.insert("s1".into());
            }
            for cell in emp.availability[0].iter_mut() {
                *cell = rng.gen_bool(0.85);
            }
            employees.push(emp);
        }
        let k = rng.gen_range(0..=2u32);
        let penalty = rng.gen_range(1..=3);
        let mut activities = vec![
            Activity::new("a0", &["s0"], k * ts, penalty),
            Activity::new("a1", &["s0"], k * ts, penalty),
        ];
        if rng.gen_bool(0.5) {
            activities.push(Activity::new("a2", &["s1"], 0, rng.gen_range(1..=3)));
        }
        // disjoint windows far enough apart for runs of k slots
        let gap = (2 * k).saturating_sub(2);
        let len0 = rng.gen_range(1..=2u32);
        let start1 = t0 + len0 + gap + rng.gen_range(0..=1);
        if start1 >= t0 + n {
            continue;
        }
        let end1 = rng.gen_range(start1 + 1..=t0 + n);
        let mut demands = vec![
            Demand { activity: 0, day: 0, start_slot: t0, end_slot: t0 + len0, minutes: rng.gen_range(1..=len0 + 1) * ts },
            Demand { activity: 1, day: 0, start_slot: start1, end_slot: end1, minutes: rng.gen_range(1..=end1 - start1 + 1) * ts },
        ];
        if activities.len() == 3 {
            let s = rng.gen_range(t0..t0 + n);
            demands.push(Demand { activity: 2, day: 0, start_slot: s, end_slot: s + 1, minutes: ts });
        }
        let mut rules = RuleSet::permissive(&grid);
        if rng.gen_bool(0.5) {
            rules.max_daily_minutes = rng.gen_range(1..=n) * ts;
        }
        if rng.gen_bool(0.5) {
            rules.min_work_after_break_minutes = rng.gen_range(0..=2) * ts;
        }
        let mut data = InstanceData::new(grid, employees, activities, demands, rules);
        let c = rng.gen_range(0..=2);
        for row in &mut data.affinity {
            row[0] = c;
            row[1] = c;
        }
        let Ok(inst) = Instance::new(data) else { continue };
        if inst.materialized_cells() <= max_cells {
            return inst;
        }
    }
}

// ---------------------------------------------------------------------
// integral point enumeration

const BIG: i64 = 1_000_000_000;

/// Exhaustive search over integral points of a small model.
///
/// `x_*` variables are branched on exhaustively; for each of their
/// assignments the remaining integer variables only need one feasible
/// completion, and variables with a positive objective coefficient that are
/// not `x_*` take the smallest value the rows allow.
pub struct PointSearch<'a> {
    model: &'a MilpModel,
    rows_of: Vec<Vec<usize>>,
    decisions: Vec<usize>,
    priced: Vec<bool>,
    pub nodes: u64,
}

type Domains = Vec<(i64, i64)>;

impl<'a> PointSearch<'a> {
    pub fn new(model: &'a MilpModel) -> Self {
        let mut rows_of = vec![Vec::new(); model.variables.len()];
        for (i, row) in model.rows.iter().enumerate() {
            for &(v, _) in &row.terms {
                rows_of[v].push(i);
            }
        }
        let decisions = (0..model.variables.len())
            .filter(|&v| model.variables[v].name.starts_with("x_"))
            .collect();
        let mut priced = vec![false; model.variables.len()];
        for &(v, c) in &model.objective {
            assert!(c >= 0, "negative objective coefficients are not supported");
            if !model.variables[v].name.starts_with("x_") {
                priced[v] = true;
            }
        }
        PointSearch { model, rows_of, decisions, priced, nodes: 0 }
    }

    fn initial(&self) -> Domains {
        self.model
            .variables
            .iter()
            .map(|v| (v.lower, v.upper.unwrap_or(BIG)))
            .collect()
    }

    /// Tightens bounds through every row touching a changed variable.
    /// Returns false on an empty domain.
    fn propagate(&self, dom: &mut Domains, seeds: &[usize]) -> bool {
        let mut queue: Vec<usize> = Vec::new();
        let mut queued = vec![false; self.model.rows.len()];
        let push = |row: usize, queue: &mut Vec<usize>, queued: &mut Vec<bool>| {
            if !queued[row] {
                queued[row] = true;
                queue.push(row);
            }
        };
        if seeds.is_empty() {
            for r in 0..self.model.rows.len() {
                push(r, &mut queue, &mut queued);
            }
        } else {
            for &v in seeds {
                for &r in &self.rows_of[v] {
                    push(r, &mut queue, &mut queued);
                }
            }
        }
        while let Some(ri) = queue.pop() {
            queued[ri] = false;
            let row = &self.model.rows[ri];
            let (mut lo_sum, mut hi_sum) = (0i128, 0i128);
            for &(v, c) in &row.terms {
                let (lo, hi) = dom[v];
                let (a, b) = (c as i128 * lo as i128, c as i128 * hi as i128);
                lo_sum += a.min(b);
                hi_sum += a.max(b);
            }
            let rhs = row.rhs as i128;
            let upper = matches!(row.sense, Sense::Le | Sense::Eq);
            let lower = matches!(row.sense, Sense::Ge | Sense::Eq);
            if (upper && lo_sum > rhs) || (lower && hi_sum < rhs) {
                return false;
            }
            for &(v, c) in &row.terms {
                let (lo, hi) = dom[v];
                let c = c as i128;
                let (a, b) = (c * lo as i128, c * hi as i128);
                let (mut nlo, mut nhi) = (lo as i128, hi as i128);
                if upper {
                    // c*v <= rhs - (lo_sum - min_v)
                    let res = rhs - (lo_sum - a.min(b));
                    if c > 0 {
                        nhi = nhi.min(floor_div(res, c));
                    } else {
                        nlo = nlo.max(ceil_div(res, c));
                    }
                }
                if lower {
                    let res = rhs - (hi_sum - a.max(b));
                    if c > 0 {
                        nlo = nlo.max(ceil_div(res, c));
                    } else {
                        nhi = nhi.min(floor_div(res, c));
                    }
                }
                if nlo > nhi {
                    return false;
                }
                if (nlo, nhi) != (lo as i128, hi as i128) {
                    dom[v] = (nlo as i64, nhi as i64);
                    for &r in &self.rows_of[v] {
                        push(r, &mut queue, &mut queued);
                    }
                }
            }
        }
        true
    }

    fn fix(&self, dom: &Domains, v: usize, value: i64) -> Option<Domains> {
        if value < dom[v].0 || value > dom[v].1 {
            return None;
        }
        let mut next = dom.clone();
        next[v] = (value, value);
        self.propagate(&mut next, &[v]).then_some(next)
    }

    /// One feasible completion of the non-decision variables, priced ones
    /// at their minimum.
    fn complete(&mut self, dom: Domains) -> Option<Vec<i64>> {
        let mut dom = dom;
        // priced variables go to their lower bounds first
        for v in 0..dom.len() {
            if self.priced[v] && dom[v].0 != dom[v].1 {
                dom = self.fix(&dom, v, dom[v].0)?;
            }
        }
        self.search_rest(dom)
    }

    fn search_rest(&mut self, dom: Domains) -> Option<Vec<i64>> {
        self.nodes += 1;
        let open = (0..dom.len())
            .filter(|&v| dom[v].0 != dom[v].1)
            .min_by_key(|&v| dom[v].1 - dom[v].0);
        let Some(v) = open else {
            let point: Vec<i64> = dom.iter().map(|d| d.0).collect();
            assert!(self.model.rows.iter().all(|r| r.is_satisfied(&point)));
            return Some(point);
        };
        let (lo, hi) = dom[v];
        for value in lo..=hi {
            assert!(value - lo < 10_000, "no completion near the bound of {}", self.model.variables[v].name);
            if let Some(next) = self.fix(&dom, v, value) {
                if let Some(p) = self.search_rest(next) {
                    return Some(p);
                }
            }
        }
        None
    }

    /// Every decision assignment with a feasible completion, with the point
    /// found for it.
    pub fn feasible_points(&mut self) -> Vec<Vec<i64>> {
        let mut dom = self.initial();
        let mut out = Vec::new();
        if self.propagate(&mut dom, &[]) {
            self.branch(dom, 0, &mut out);
        }
        out
    }

    /// Minimum objective numerator over integral points, with its point.
    pub fn optimum(&mut self) -> Option<(i64, Vec<i64>)> {
        let mut dom = self.initial();
        if !self.propagate(&mut dom, &[]) {
            return None;
        }
        let mut best: Option<(i64, Vec<i64>)> = None;
        self.branch_best(dom, 0, &mut best);
        best
    }

    fn objective_floor(&self, dom: &Domains) -> i64 {
        self.model.objective.iter().map(|&(v, c)| c * dom[v].0).sum()
    }

    fn branch(&mut self, dom: Domains, depth: usize, out: &mut Vec<Vec<i64>>) {
        self.nodes += 1;
        if depth == self.decisions.len() {
            if let Some(p) = self.complete(dom) {
                out.push(p);
            }
            return;
        }
        let v = self.decisions[depth];
        for value in 0..=1 {
            if let Some(next) = self.fix(&dom, v, value) {
                self.branch(next, depth + 1, out);
            }
        }
    }

    fn branch_best(&mut self, dom: Domains, depth: usize, best: &mut Option<(i64, Vec<i64>)>) {
        self.nodes += 1;
        if let Some((b, _)) = best {
            if self.objective_floor(&dom) >= *b {
                return;
            }
        }
        if depth == self.decisions.len() {
            if let Some(p) = self.complete(dom) {
                let value = self.model.objective_numerator(&p);
                if best.as_ref().is_none_or(|(b, _)| value < *b) {
                    *best = Some((value, p));
                }
            }
            return;
        }
        let v = self.decisions[depth];
        for value in 0..=1 {
            if let Some(next) = self.fix(&dom, v, value) {
                self.branch_best(next, depth + 1, best);
            }
        }
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

// ---------------------------------------------------------------------
// MPS reading

#[derive(Debug, Default)]
pub struct ParsedMps {
    pub name: String,
    /// Constraint rows in file order with their sense letter.
    pub rows: Vec<(String, char)>,
    pub columns: Vec<String>,
    pub integer: Vec<bool>,
    /// (column, row) -> coefficient, objective included under the N row.
    pub coefficients: BTreeMap<(String, String), f64>,
    pub rhs: HashMap<String, f64>,
    pub lower: HashMap<String, f64>,
    pub upper: HashMap<String, f64>,
    pub binary: Vec<String>,
    pub objective_row: String,
}

impl ParsedMps {
    pub fn nonzeros(&self) -> usize {
        self.coefficients.keys().filter(|(_, r)| *r != self.objective_row).count()
    }

    /// Rows violated by `values` (missing names count as 0).
    pub fn violated(&self, values: &HashMap<String, f64>) -> Vec<String> {
        let mut activity: HashMap<&str, f64> = HashMap::new();
        for ((col, row), coef) in &self.coefficients {
            *activity.entry(row.as_str()).or_default() += coef * values.get(col).copied().unwrap_or(0.0);
        }
        self.rows
            .iter()
            .filter(|(name, sense)| {
                let lhs = activity.get(name.as_str()).copied().unwrap_or(0.0);
                let rhs = self.rhs.get(name).copied().unwrap_or(0.0);
                match sense {
                    'L' => lhs > rhs + 1e-9,
                    'G' => lhs < rhs - 1e-9,
                    _ => (lhs - rhs).abs() > 1e-9,
                }
            })
            .map(|(name, _)| name.clone())
            .collect()
    }

    pub fn objective(&self, values: &HashMap<String, f64>) -> f64 {
        self.coefficients
            .iter()
            .filter(|((_, r), _)| *r == self.objective_row)
            .map(|((c, _), coef)| coef * values.get(c).copied().unwrap_or(0.0))
            .sum()
    }
}

/// Minimal free-format MPS reader, written independently of the emitter.
pub fn parse_mps(text: &str) -> Result<ParsedMps, String> {
    let mut out = ParsedMps::default();
    let mut section = "";
    let mut integer_block = false;
    let mut seen_columns: HashMap<String, usize> = HashMap::new();
    let mut ended = false;
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('*') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !line.starts_with(' ') {
            section = fields[0];
            match section {
                "NAME" => out.name = fields.get(1).unwrap_or(&"").to_string(),
                "ROWS" | "COLUMNS" | "RHS" | "BOUNDS" | "RANGES" => {}
                "ENDATA" => {
                    ended = true;
                    break;
                }
                other => return Err(format!("line {}: unknown section {other}", lineno + 1)),
            }
            continue;
        }
        let err = |m: &str| format!("line {}: {m}", lineno + 1);
        match section {
            "ROWS" => {
                let [sense, name] = fields[..] else { return Err(err("bad row")) };
                let sense = sense.chars().next().unwrap();
                if sense == 'N' {
                    out.objective_row = name.to_string();
                } else if "LGE".contains(sense) {
                    out.rows.push((name.to_string(), sense));
                } else {
                    return Err(err("bad sense"));
                }
            }
            "COLUMNS" => {
                if fields.get(1) == Some(&"'MARKER'") {
                    integer_block = match fields.get(2) {
                        Some(&"'INTORG'") => true,
                        Some(&"'INTEND'") => false,
                        _ => return Err(err("bad marker")),
                    };
                    continue;
                }
                if fields.len() != 3 && fields.len() != 5 {
                    return Err(err("bad column entry"));
                }
                let col = fields[0].to_string();
                if !seen_columns.contains_key(&col) {
                    seen_columns.insert(col.clone(), out.columns.len());
                    out.columns.push(col.clone());
                    out.integer.push(integer_block);
                }
                for pair in fields[1..].chunks(2) {
                    let value: f64 = pair[1].parse().map_err(|_| err("bad number"))?;
                    if value != 0.0 {
                        out.coefficients.insert((col.clone(), pair[0].to_string()), value);
                    }
                }
            }
            "RHS" => {
                for pair in fields[1..].chunks(2) {
                    let value: f64 = pair[1].parse().map_err(|_| err("bad number"))?;
                    out.rhs.insert(pair[0].to_string(), value);
                }
            }
            "BOUNDS" => {
                let kind = fields[0];
                let col = fields.get(2).ok_or_else(|| err("bad bound"))?.to_string();
                let value = || -> Result<f64, String> {
                    fields.get(3).ok_or_else(|| err("missing bound"))?.parse().map_err(|_| err("bad number"))
                };
                match kind {
                    "UP" => {
                        out.upper.insert(col, value()?);
                    }
                    "LO" => {
                        out.lower.insert(col, value()?);
                    }
                    "FX" => {
                        let v = value()?;
                        out.lower.insert(col.clone(), v);
                        out.upper.insert(col, v);
                    }
                    "BV" => out.binary.push(col),
                    "PL" | "MI" | "FR" => {}
                    _ => return Err(err("bad bound type")),
                }
            }
            _ => return Err(err("data outside a section")),
        }
    }
    if !ended {
        return Err("missing ENDATA".into());
    }
    Ok(out)
}
