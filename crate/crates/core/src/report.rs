//! Stable renderings of solver results. Object keys are sorted and costs are
//! fixed-point integers, so equal results give byte-identical output.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::Result;
use crate::instance::{check_solution, format_fixed, AuditReport, Instance, COST_SCALE};
use crate::rational::{format_rational, to_decimal};
use crate::solvers::SolverResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Human,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "human" => Ok(Format::Human),
            other => Err(format!("unknown format `{other}` (expected json, csv or human)")),
        }
    }
}

/// Everything a report shows: the result and its own feasibility audit.
pub struct Report<'a> {
    pub inst: &'a Instance,
    pub result: &'a SolverResult,
    pub audit: AuditReport,
    /// Wall-clock milliseconds; only set when explicitly requested, since it
    /// breaks reproducibility.
    pub wall_ms: Option<u128>,
}

impl<'a> Report<'a> {
    pub fn new(inst: &'a Instance, result: &'a SolverResult) -> Result<Self> {
        let audit = check_solution(inst, &result.solution, &result.gamma)?;
        Ok(Report { inst, result, audit, wall_ms: None })
    }

    pub fn to_json(&self) -> Value {
        let r = self.result;
        let ts = r.transform_stats;
        let cs = r.cover_stats;
        let mut v = json!({
            "solver": r.solver.name(),
            "cost": r.cost,
            "scale": COST_SCALE,
            "claimed_ratio": r.claimed_ratio.as_ref().map(format_rational),
            "ratio_note": r.ratio_note,
            "gamma": format_rational(&r.gamma),
            "iterations_run": r.iterations_run,
            "iterations_enumerated": r.iterations_enumerated,
            "guarantee_void": r.guarantee_void,
            "certificates": r.certificates.iter().map(|c| json!({
                "name": c.name,
                "holds": c.holds,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "transform": {
                "calls": ts.calls,
                "bound_violations": ts.bound_violations,
                "vehicle_violations": ts.vehicle_violations,
                "fleet_violations": ts.fleet_violations,
            },
            "covers": {
                "checked": cs.covers,
                "cycles": cs.cycles,
                "violations": cs.violations,
            },
            "audit": {
                "feasible": self.audit.feasible,
                "violations": self.audit.violations,
                "vehicles_used": self.audit.vehicles_used,
                "max_load_ratio": format_rational(&self.audit.max_load_ratio),
            },
            "solution": r.solution.to_json_value(self.inst),
        });
        if let Some(ms) = self.wall_ms {
            v["wall_time_ms"] = json!(ms);
        }
        v
    }

    pub const CSV_HEADER: &'static str =
        "solver,cost,claimed_ratio,gamma,iterations_run,iterations_enumerated,guarantee_void,feasible,tours";

    pub fn csv_row(&self) -> String {
        let r = self.result;
        format!(
            "{},{},{},{},{},{},{},{},{}",
            r.solver,
            r.cost,
            r.claimed_ratio.as_ref().map(format_rational).unwrap_or_default(),
            format_rational(&r.gamma),
            r.iterations_run,
            r.iterations_enumerated,
            r.guarantee_void,
            self.audit.feasible,
            r.solution.tours.len()
        )
    }

    pub fn human(&self) -> String {
        let r = self.result;
        let mut s = String::new();
        let _ = writeln!(s, "solver      {}", r.solver);
        let _ = writeln!(s, "cost        {}", format_fixed(r.cost));
        let ratio = match &r.claimed_ratio {
            Some(c) => format!("{} ({})", format_rational(c), to_decimal(c, 3)),
            None => "none".into(),
        };
        let _ = writeln!(s, "ratio       {ratio}");
        if let Some(note) = &r.ratio_note {
            let _ = writeln!(s, "            {note}");
        }
        let _ = writeln!(s, "gamma       {}", format_rational(&r.gamma));
        let _ = writeln!(
            s,
            "iterations  {} run / {} enumerated{}",
            r.iterations_run,
            r.iterations_enumerated,
            if r.guarantee_void { " (capped: guarantee void)" } else { "" }
        );
        let _ = writeln!(
            s,
            "feasible    {} ({} tours, max load {} Q)",
            self.audit.feasible,
            r.solution.tours.len(),
            to_decimal(&self.audit.max_load_ratio, 3)
        );
        for c in &r.certificates {
            let _ = writeln!(s, "check       {} {}: {}", if c.holds { "ok " } else { "BAD" }, c.name, c.detail);
        }
        for t in &r.solution.tours {
            let seq: Vec<String> = t.seq.iter().map(|v| v.to_string()).collect();
            let lam: Vec<String> = t.lambda.iter().map(|(v, a)| format!("{v}:{a}")).collect();
            let _ = writeln!(
                s,
                "  vehicle {:>3} depot {:>2}  {}  [{}]  cost {}",
                t.vehicle,
                t.depot,
                seq.join("-"),
                lam.join(" "),
                format_fixed(t.cost(self.inst))
            );
        }
        if let Some(ms) = self.wall_ms {
            let _ = writeln!(s, "wall time   {ms} ms");
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                text.push('\n');
                text
            }
            Format::Csv => format!("{}\n{}\n", Self::CSV_HEADER, self.csv_row()),
            Format::Human => self.human(),
        }
    }
}
