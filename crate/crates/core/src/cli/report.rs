//! Report model shared by every task, with JSON and text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::contraction::{ContractionReport, Termination, Witness};
use crate::numeric::Exact;
use crate::spaces::PointSpace;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub task: String,
    pub verdicts: Vec<Verdict>,
    pub values: Vec<NamedValue>,
    pub tables: Vec<ReportTable>,
    pub traces: Vec<Trace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_points: Option<Vec<String>>,
    pub warnings: Vec<String>,
}

/// A pass/fail outcome. Only `required` verdicts decide the exit code;
/// the rest (classical baselines, informational checks) are reported as-is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    pub required: bool,
    pub detail: String,
    pub witnesses: Vec<WitnessEntry>,
}

/// One offending tuple, by label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub points: Vec<String>,
    pub lhs: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: Exact,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Number(Exact),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(Exact::from(x))
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportTable {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ReportTable {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        ReportTable {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }
}

/// An orbit: visited labels, how it ended, and a per-step table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub title: String,
    pub points: Vec<String>,
    pub terminated: Termination,
    pub fixed_point: Option<String>,
    pub steps: ReportTable,
}

impl Report {
    pub fn new(task: &str) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            task: task.to_owned(),
            verdicts: Vec::new(),
            values: Vec::new(),
            tables: Vec::new(),
            traces: Vec::new(),
            fixed_points: None,
            warnings: Vec::new(),
        }
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn value(&mut self, name: impl Into<String>, x: f64, at: Option<Vec<String>>) {
        self.values.push(NamedValue {
            name: name.into(),
            value: Exact::from(x),
            at,
        });
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        if !self.warnings.contains(&msg) {
            self.warnings.push(msg);
        }
    }

    /// 0 when every required verdict holds, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.verdicts.iter().all(|v| v.holds || !v.required) {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "task: {}", self.task);
        for v in &self.verdicts {
            let status = if v.holds { "PASS" } else { "FAIL" };
            let tag = if v.required { "" } else { " (baseline)" };
            let _ = writeln!(out, "[{status}] {}{tag}: {}", v.name, v.detail);
            for w in &v.witnesses {
                let _ = writeln!(
                    out,
                    "    witness ({}): lhs {:.9} > bound {:.9}",
                    w.points.join(", "),
                    w.lhs,
                    w.bound
                );
            }
        }
        for nv in &self.values {
            let _ = write!(out, "{} = {}", nv.name, nv.value);
            if let Some(at) = &nv.at {
                let _ = write!(out, " at ({})", at.join(", "));
            }
            out.push('\n');
        }
        if let Some(fix) = &self.fixed_points {
            let _ = writeln!(out, "fixed points: {{{}}}", fix.join(", "));
        }
        for t in &self.tables {
            render_table(&mut out, t);
        }
        for tr in &self.traces {
            let _ = writeln!(out, "\n{}: {}", tr.title, tr.points.join(" → "));
            let _ = write!(out, "terminated: {}", tr.terminated);
            if let Some(p) = &tr.fixed_point {
                let _ = write!(out, " at {p}");
            }
            out.push('\n');
            render_table(&mut out, &tr.steps);
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Text(s) => s.clone(),
        Cell::Number(e) => match &e.rational {
            Some(r) => r.clone(),
            None => format!("{:.6}", e.decimal),
        },
    }
}

fn render_table(out: &mut String, t: &ReportTable) {
    let cells: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| r.iter().map(cell_text).collect())
        .collect();
    let widths: Vec<usize> = (0..t.columns.len())
        .map(|j| {
            cells
                .iter()
                .filter_map(|r| r.get(j))
                .map(|s| s.chars().count())
                .chain([t.columns[j].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |row: &[String]| {
        row.iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let _ = writeln!(out, "\n{}", t.title);
    let _ = writeln!(out, "{}", line(&t.columns));
    for r in &cells {
        let _ = writeln!(out, "{}", line(r));
    }
}

pub(crate) fn labels_of(space: &PointSpace, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| space.label(i).to_owned()).collect()
}

/// Turns a contraction report into a verdict, listing every violation.
pub(crate) fn contraction_verdict(
    name: &str,
    required: bool,
    space: &PointSpace,
    r: &ContractionReport,
) -> Verdict {
    let tuples = match r.worst {
        Some(Witness::Pair(_)) => "pairs",
        _ => "ordered triples",
    };
    let mut detail = format!(
        "{} of {} {tuples} violate",
        r.violations.len(),
        r.checked_count
    );
    if let (Some(ratio), Some(w)) = (r.max_ratio, r.worst) {
        let _ = write!(
            detail,
            "; max ratio {} at ({})",
            Exact::from(ratio),
            labels_of(space, w.indices()).join(", ")
        );
    } else if let Some(w) = r.worst {
        let _ = write!(
            detail,
            "; tightest at ({})",
            labels_of(space, w.indices()).join(", ")
        );
    }
    Verdict {
        name: name.to_owned(),
        holds: r.holds,
        required,
        detail,
        witnesses: r
            .violations
            .iter()
            .map(|v| WitnessEntry {
                points: labels_of(space, v.witness.indices()),
                lhs: v.lhs,
                bound: v.bound,
            })
            .collect(),
    }
}
