//! Line-oriented instance text format.
//!
//! ```text
//! MDSDVRP 1
//! <k> <n> <Q>
//! depot <id> <r_u> [<x> <y>]      (k lines)
//! cust <id> <q_v> [<x> <y>]       (n lines)
//! coords | matrix
//! <|V| rows of fixed-point costs>  (matrix only)
//! ```
//!
//! Blank lines and `#` comments are ignored. Matrix entries are decimal
//! numbers with at most six fractional digits.

use std::fmt::Write as _;

use super::{CostSource, Instance, Point, COST_SCALE};
use crate::error::{Error, Result};

const HEADER: &str = "MDSDVRP 1";
const FRACTION_DIGITS: usize = 6;

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, msg: msg.into() }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut next = |what: &str| -> Result<(usize, &str)> {
        lines.next().ok_or_else(|| syntax(0, format!("unexpected end of input, expected {what}")))
    };

    let (no, header) = next("header")?;
    if header.split_whitespace().collect::<Vec<_>>() != HEADER.split_whitespace().collect::<Vec<_>>()
    {
        return Err(syntax(no, format!("expected `{HEADER}`")));
    }

    let (no, dims) = next("`k n Q`")?;
    let dims: Vec<&str> = dims.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(syntax(no, "expected `k n Q`"));
    }
    let k: usize = parse_int(no, dims[0], "k")?;
    let n: usize = parse_int(no, dims[1], "n")?;
    let capacity: u64 = parse_int(no, dims[2], "Q")?;

    let mut fleets = Vec::with_capacity(k);
    let mut demands = Vec::with_capacity(n);
    let mut points: Vec<Option<Point>> = Vec::with_capacity(k + n);

    for expected in 0..k + n {
        let (keyword, what) = if expected < k { ("depot", "depot line") } else { ("cust", "customer line") };
        let (no, line) = next(what)?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.first() != Some(&keyword) {
            return Err(syntax(no, format!("expected `{keyword}` line")));
        }
        if fields.len() != 3 && fields.len() != 5 {
            return Err(syntax(no, format!("expected `{keyword} <id> <amount> [<x> <y>]`")));
        }
        let id: usize = parse_int(no, fields[1], "id")?;
        if id != expected {
            return Err(syntax(no, format!("id {id} out of order, expected {expected}")));
        }
        let amount: u64 = parse_int(no, fields[2], "amount")?;
        if expected < k {
            fleets.push(amount);
        } else {
            demands.push(amount);
        }
        points.push(if fields.len() == 5 {
            Some(Point { x: parse_float(no, fields[3])?, y: parse_float(no, fields[4])? })
        } else {
            None
        });
    }

    let all_points: Option<Vec<Point>> = points.iter().copied().collect();
    let any_points = points.iter().any(Option::is_some);
    let (no, mode) = next("`coords` or `matrix`")?;
    match mode {
        "coords" => {
            let pts = all_points
                .ok_or_else(|| syntax(no, "`coords` requires coordinates on every vertex line"))?;
            if let Some((no, _)) = lines.next() {
                return Err(syntax(no, "trailing content after `coords`"));
            }
            Instance::from_points(capacity, fleets, demands, pts)
        }
        "matrix" => {
            if any_points && all_points.is_none() {
                return Err(syntax(no, "coordinates must be given on all vertex lines or none"));
            }
            let size = k + n;
            let mut costs = Vec::with_capacity(size * size);
            for row in 0..size {
                let (no, line) = lines
                    .next()
                    .ok_or_else(|| syntax(0, format!("matrix row {row} missing")))?;
                let before = costs.len();
                for field in line.split_whitespace() {
                    costs.push(parse_fixed(no, field)?);
                }
                if costs.len() - before != size {
                    return Err(syntax(no, format!("matrix row has {} entries, expected {size}", costs.len() - before)));
                }
            }
            if let Some((no, _)) = lines.next() {
                return Err(syntax(no, "trailing content after matrix"));
            }
            Instance::from_matrix(capacity, fleets, demands, costs, all_points)
        }
        _ => Err(syntax(no, "expected `coords` or `matrix`")),
    }
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "{} {} {}", inst.k(), inst.n(), inst.capacity());
    let point_suffix = |v: usize| match inst.points() {
        Some(p) => format!(" {} {}", p[v].x, p[v].y),
        None => String::new(),
    };
    for u in inst.depots() {
        let _ = writeln!(out, "depot {u} {}{}", inst.fleet(u), point_suffix(u));
    }
    for v in inst.customers() {
        let _ = writeln!(out, "cust {v} {}{}", inst.demand(v), point_suffix(v));
    }
    match inst.source() {
        CostSource::Coordinates => {
            let _ = writeln!(out, "coords");
        }
        CostSource::Matrix => {
            let _ = writeln!(out, "matrix");
            let size = inst.num_vertices();
            for a in 0..size {
                let row: Vec<String> = (0..size).map(|b| format_fixed(inst.cost(a, b))).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
    }
    out
}

/// Renders a fixed-point cost as a decimal with six fractional digits.
pub fn format_fixed(value: i64) -> String {
    let sign = if value < 0 { "-" } else { "" };
    let abs = value.unsigned_abs();
    let scale = COST_SCALE as u64;
    format!("{sign}{}.{:0width$}", abs / scale, abs % scale, width = FRACTION_DIGITS)
}

fn parse_fixed(line: usize, field: &str) -> Result<i64> {
    let bad = || syntax(line, format!("invalid cost `{field}`"));
    let (negative, body) = match field.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, field),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() || frac.len() > FRACTION_DIGITS {
        return Err(bad());
    }
    if !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let int: i64 = int.parse().map_err(|_| bad())?;
    let mut frac_value: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    for _ in frac.len()..FRACTION_DIGITS {
        frac_value *= 10;
    }
    let value = int
        .checked_mul(COST_SCALE)
        .and_then(|v| v.checked_add(frac_value))
        .ok_or_else(bad)?;
    Ok(if negative { -value } else { value })
}

fn parse_int<T: std::str::FromStr>(line: usize, field: &str, what: &str) -> Result<T> {
    field.parse().map_err(|_| syntax(line, format!("invalid {what} `{field}`")))
}

fn parse_float(line: usize, field: &str) -> Result<f64> {
    let v: f64 = field.parse().map_err(|_| syntax(line, format!("invalid coordinate `{field}`")))?;
    if !v.is_finite() {
        return Err(syntax(line, format!("non-finite coordinate `{field}`")));
    }
    Ok(v)
}
