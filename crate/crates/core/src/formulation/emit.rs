use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::{MilpModel, Sense, VarKind};
use crate::error::Result;

const LP_WIDTH: usize = 78;

/// Objective coefficient `numerator / denominator` in shortest exact form.
fn objective_coef(numerator: i64, denominator: u64) -> String {
    let den = denominator as i64;
    if den != 0 && numerator % den == 0 {
        (numerator / den).to_string()
    } else {
        (numerator as f64 / denominator as f64).to_string()
    }
}

/// Free-format MPS.
pub fn write_mps<W: Write>(model: &MilpModel, out: &mut W) -> io::Result<()> {
    writeln!(out, "NAME {}", model.name)?;
    writeln!(out, "ROWS")?;
    writeln!(out, " N  OBJ")?;
    for row in &model.rows {
        let tag = match row.sense {
            Sense::Le => 'L',
            Sense::Ge => 'G',
            Sense::Eq => 'E',
        };
        writeln!(out, " {tag}  {}", row.name)?;
    }
    if model.variables.is_empty() {
        return writeln!(out, "ENDATA");
    }

    let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); model.variables.len()];
    for (i, row) in model.rows.iter().enumerate() {
        for &(v, c) in &row.terms {
            columns[v].push((i, c));
        }
    }
    let mut objective = vec![0i64; model.variables.len()];
    for &(v, c) in &model.objective {
        objective[v] += c;
    }

    writeln!(out, "COLUMNS")?;
    let mut integer_block = false;
    for (v, var) in model.variables.iter().enumerate() {
        let integer = var.kind != VarKind::Continuous;
        if integer != integer_block {
            let marker = if integer { "'INTORG'" } else { "'INTEND'" };
            writeln!(out, "    MARKER  'MARKER'  {marker}")?;
            integer_block = integer;
        }
        let mut wrote = false;
        if objective[v] != 0 {
            writeln!(out, "    {}  OBJ  {}", var.name, objective_coef(objective[v], model.objective_denominator))?;
            wrote = true;
        }
        for &(row, c) in &columns[v] {
            writeln!(out, "    {}  {}  {c}", var.name, model.rows[row].name)?;
            wrote = true;
        }
        if !wrote {
            writeln!(out, "    {}  OBJ  0", var.name)?;
        }
    }
    if integer_block {
        writeln!(out, "    MARKER  'MARKER'  'INTEND'")?;
    }

    if model.rows.iter().any(|r| r.rhs != 0) {
        writeln!(out, "RHS")?;
        for row in model.rows.iter().filter(|r| r.rhs != 0) {
            writeln!(out, "    RHS  {}  {}", row.name, row.rhs)?;
        }
    }

    let mut bounds = Vec::new();
    for var in &model.variables {
        match var.kind {
            VarKind::Binary if var.lower == 0 && var.upper == Some(1) => bounds.push(format!(" BV BND {}", var.name)),
            _ => {
                if var.lower != 0 {
                    bounds.push(format!(" LO BND {} {}", var.name, var.lower));
                }
                match var.upper {
                    Some(u) => bounds.push(format!(" UP BND {} {u}", var.name)),
                    None if var.kind != VarKind::Continuous => bounds.push(format!(" PL BND {}", var.name)),
                    None => {}
                }
            }
        }
    }
    if !bounds.is_empty() {
        writeln!(out, "BOUNDS")?;
        for line in bounds {
            writeln!(out, "{line}")?;
        }
    }
    writeln!(out, "ENDATA")
}

/// Appends whitespace-separated tokens, wrapping long lines.
struct Wrapped<'a, W: Write> {
    out: &'a mut W,
    line: String,
}

impl<'a, W: Write> Wrapped<'a, W> {
    fn new(out: &'a mut W, head: String) -> Self {
        Wrapped { out, line: head }
    }

    fn token(&mut self, token: &str) -> io::Result<()> {
        if self.line.len() + 1 + token.len() > LP_WIDTH && !self.line.trim().is_empty() {
            writeln!(self.out, "{}", self.line)?;
            self.line = String::from("   ");
        }
        self.line.push(' ');
        self.line.push_str(token);
        Ok(())
    }

    fn finish(self) -> io::Result<()> {
        writeln!(self.out, "{}", self.line)
    }
}

fn lp_terms<W: Write>(line: &mut Wrapped<'_, W>, terms: impl Iterator<Item = (String, String)>) -> io::Result<()> {
    for (i, (coef, name)) in terms.enumerate() {
        let (sign, magnitude) = match coef.strip_prefix('-') {
            Some(m) => ("-", m.to_string()),
            None => ("+", coef),
        };
        if i > 0 || sign == "-" {
            line.token(sign)?;
        }
        if magnitude == "1" {
            line.token(&name)?;
        } else {
            line.token(&format!("{magnitude} {name}"))?;
        }
    }
    Ok(())
}

/// CPLEX LP format.
pub fn write_lp<W: Write>(model: &MilpModel, out: &mut W) -> io::Result<()> {
    writeln!(out, "\\ {}", model.name)?;
    writeln!(out, "Minimize")?;
    let mut line = Wrapped::new(out, String::from(" obj:"));
    lp_terms(
        &mut line,
        model
            .objective
            .iter()
            .filter(|&&(_, c)| c != 0)
            .map(|&(v, c)| (objective_coef(c, model.objective_denominator), model.variables[v].name.clone())),
    )?;
    line.finish()?;

    writeln!(out, "Subject To")?;
    for row in &model.rows {
        let mut line = Wrapped::new(out, format!(" {}:", row.name));
        lp_terms(
            &mut line,
            row.terms.iter().map(|&(v, c)| (c.to_string(), model.variables[v].name.clone())),
        )?;
        if row.terms.is_empty() {
            line.token("0")?;
        }
        let sense = match row.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        line.token(sense)?;
        line.token(&row.rhs.to_string())?;
        line.finish()?;
    }

    writeln!(out, "Bounds")?;
    for var in model.variables.iter().filter(|v| v.kind != VarKind::Binary) {
        match var.upper {
            Some(u) => writeln!(out, " {} <= {} <= {u}", var.lower, var.name)?,
            None if var.lower != 0 => writeln!(out, " {} >= {}", var.name, var.lower)?,
            None => {}
        }
    }
    for (section, kind) in [("Binaries", VarKind::Binary), ("Generals", VarKind::Integer)] {
        let names: Vec<&str> = model
            .variables
            .iter()
            .filter(|v| v.kind == kind)
            .map(|v| v.name.as_str())
            .collect();
        if names.is_empty() {
            continue;
        }
        writeln!(out, "{section}")?;
        let mut line = Wrapped::new(out, String::new());
        for name in names {
            line.token(name)?;
        }
        line.finish()?;
    }
    writeln!(out, "End")
}

pub fn mps_string(model: &MilpModel) -> String {
    let mut buf = Vec::new();
    write_mps(model, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("model names are UTF-8")
}

pub fn lp_string(model: &MilpModel) -> String {
    let mut buf = Vec::new();
    write_lp(model, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("model names are UTF-8")
}

pub fn emit_mps(model: &MilpModel, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_mps(model, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn emit_lp(model: &MilpModel, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_lp(model, &mut out)?;
    out.flush()?;
    Ok(())
}
