use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Cost, Instance, COST_SCALE};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// One vehicle's route `u v1 ... vl u` with the demand it delivers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tour {
    pub vehicle: usize,
    pub depot: usize,
    /// Vertex sequence starting and ending at `depot`.
    pub seq: Vec<usize>,
    /// Demand delivered per customer (`lambda(v, T)`); absent means zero.
    pub lambda: BTreeMap<usize, u64>,
}

impl Tour {
    pub fn cost(&self, inst: &Instance) -> Cost {
        inst.walk_cost(&self.seq)
    }

    pub fn load(&self) -> u64 {
        self.lambda.values().sum()
    }

    /// Customers strictly inside the sequence.
    pub fn customers(&self) -> &[usize] {
        if self.seq.len() <= 2 {
            &[]
        } else {
            &self.seq[1..self.seq.len() - 1]
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub tours: Vec<Tour>,
}

impl Solution {
    pub fn cost(&self, inst: &Instance) -> Cost {
        self.tours.iter().map(|t| t.cost(inst)).sum()
    }

    /// JSON object `{tours, cost, scale}` with costs as fixed-point integers.
    pub fn to_json_value(&self, inst: &Instance) -> serde_json::Value {
        serde_json::json!({
            "tours": self.tours,
            "cost": self.cost(inst),
            "scale": COST_SCALE,
        })
    }

    /// Reads either a bare solution object or a solver report holding one
    /// under `solution`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let body = value.get("solution").unwrap_or(&value);
        let tours = body
            .get("tours")
            .ok_or_else(|| Error::MalformedSolution("missing `tours`".into()))?;
        Ok(Solution { tours: serde_json::from_value(tours.clone())? })
    }
}

/// A failed condition of the feasibility definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Stable condition id, e.g. `capacity` or `demand-unmet`.
    pub condition: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub total_cost: Cost,
    pub vehicles_used: usize,
    /// Largest tour load divided by `Q`.
    pub max_load_ratio: Rational,
}

/// Checks the four feasibility conditions with capacity `gamma * Q`.
///
/// Condition ids:
/// * `tour-shape`, `vehicle-depot`, `vehicle-reused`: each tour is a depot
///   cycle driven by a distinct vehicle of that depot;
/// * `capacity`: tour load at most `gamma * Q`;
/// * `off-tour`: no demand credited to a customer the tour skips;
/// * `demand-unmet` / `demand-exceeded`: every customer receives exactly `q_v`.
pub fn check_solution(inst: &Instance, sol: &Solution, gamma: &Rational) -> Result<AuditReport> {
    let size = inst.num_vertices();
    for (i, t) in sol.tours.iter().enumerate() {
        if t.depot >= inst.k() {
            return Err(Error::MalformedSolution(format!("tour {i}: unknown depot {}", t.depot)));
        }
        if inst.depot_of_vehicle(t.vehicle).is_none() {
            return Err(Error::MalformedSolution(format!("tour {i}: unknown vehicle {}", t.vehicle)));
        }
        if let Some(&v) = t.seq.iter().find(|&&v| v >= size) {
            return Err(Error::MalformedSolution(format!("tour {i}: unknown vertex {v}")));
        }
        if let Some(&v) = t.lambda.keys().find(|&&v| !inst.is_customer(v)) {
            return Err(Error::MalformedSolution(format!("tour {i}: lambda names non-customer {v}")));
        }
    }

    let mut violations = Vec::new();
    let mut seen_vehicles = HashSet::new();
    let mut served = vec![0u128; size];
    let mut max_load = 0u64;
    let cap_num = gamma.numer();
    let cap_den = gamma.denom();

    for (i, t) in sol.tours.iter().enumerate() {
        let closed = t.seq.len() >= 2 && t.seq[0] == t.depot && t.seq[t.seq.len() - 1] == t.depot;
        let inner = t.customers();
        let mut distinct = HashSet::new();
        let inner_ok = inner.iter().all(|&v| inst.is_customer(v) && distinct.insert(v));
        if !closed || !inner_ok {
            violations.push(Violation {
                condition: "tour-shape",
                detail: format!("tour {i} is not a cycle u v1 .. vl u over distinct customers"),
            });
        }
        if inst.depot_of_vehicle(t.vehicle) != Some(t.depot) {
            violations.push(Violation {
                condition: "vehicle-depot",
                detail: format!("tour {i}: vehicle {} does not belong to depot {}", t.vehicle, t.depot),
            });
        }
        if !seen_vehicles.insert(t.vehicle) {
            violations.push(Violation {
                condition: "vehicle-reused",
                detail: format!("tour {i}: vehicle {} drives more than one tour", t.vehicle),
            });
        }
        let load = t.load();
        max_load = max_load.max(load);
        if i128::from(load) * cap_den > cap_num * i128::from(inst.capacity()) {
            violations.push(Violation {
                condition: "capacity",
                detail: format!(
                    "tour {i}: load {load} exceeds {} x {}",
                    crate::rational::format_rational(gamma),
                    inst.capacity()
                ),
            });
        }
        for (&v, &amount) in &t.lambda {
            if amount > 0 && !distinct.contains(&v) {
                violations.push(Violation {
                    condition: "off-tour",
                    detail: format!("tour {i}: customer {v} is credited {amount} but not visited"),
                });
            }
            served[v] += u128::from(amount);
        }
    }

    for v in inst.customers() {
        let want = u128::from(inst.demand(v));
        if served[v] < want {
            violations.push(Violation {
                condition: "demand-unmet",
                detail: format!("customer {v} receives {} of {want}", served[v]),
            });
        } else if served[v] > want {
            violations.push(Violation {
                condition: "demand-exceeded",
                detail: format!("customer {v} receives {} of {want}", served[v]),
            });
        }
    }

    let max_load_ratio = if inst.capacity() == 0 {
        Rational::zero()
    } else {
        Rational::new(i128::from(max_load), i128::from(inst.capacity()))
    };
    Ok(AuditReport {
        feasible: violations.is_empty(),
        violations,
        total_cost: sol.cost(inst),
        vehicles_used: sol.tours.len(),
        max_load_ratio,
    })
}
