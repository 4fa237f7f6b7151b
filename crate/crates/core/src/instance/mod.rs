//! Instance data model, validation, text format, random generation and the
//! solution feasibility checker.
//!
//! Vertex ids are dense: depots occupy `0..k`, customers `k..k+n`.
//! Vehicles are numbered depot by depot, so the vehicles of depot `u` are
//! `offset(u)..offset(u) + r_u`.

mod format;
mod generate;
mod solution;

pub use format::{format_fixed, parse_instance, write_instance};
pub use generate::{generate_instance, FleetPolicy, GenSpec};
pub use solution::{check_solution, AuditReport, Solution, Tour, Violation};

use crate::error::{Error, Result};

/// Fixed-point edge cost; one unit is `1 / COST_SCALE`.
pub type Cost = i64;

/// Number of cost units per unit of distance.
pub const COST_SCALE: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Where the cost matrix came from; decides how the instance is written.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostSource {
    /// Rounded Euclidean distances, repaired by metric closure.
    Coordinates,
    /// Explicit matrix.
    Matrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    capacity: u64,
    fleets: Vec<u64>,
    demands: Vec<u64>,
    points: Option<Vec<Point>>,
    costs: Vec<Cost>,
    source: CostSource,
    vehicle_offsets: Vec<usize>,
}

impl Instance {
    /// Builds an instance from an explicit `|V| x |V|` row-major matrix.
    ///
    /// Only shapes are checked here; metric properties are reported by
    /// [`Instance::validate`].
    pub fn from_matrix(
        capacity: u64,
        fleets: Vec<u64>,
        demands: Vec<u64>,
        costs: Vec<Cost>,
        points: Option<Vec<Point>>,
    ) -> Result<Self> {
        let size = fleets.len() + demands.len();
        if costs.len() != size * size {
            return Err(Error::InvalidInstance(format!(
                "cost matrix has {} entries, expected {}",
                costs.len(),
                size * size
            )));
        }
        if let Some(points) = &points {
            if points.len() != size {
                return Err(Error::InvalidInstance(format!(
                    "{} points given for {size} vertices",
                    points.len()
                )));
            }
        }
        Ok(Self::assemble(capacity, fleets, demands, points, costs, CostSource::Matrix))
    }

    /// Builds an instance whose costs are Euclidean distances rounded half-up
    /// to fixed point, then closed under shortest paths so the triangle
    /// inequality holds exactly.
    pub fn from_points(
        capacity: u64,
        fleets: Vec<u64>,
        demands: Vec<u64>,
        points: Vec<Point>,
    ) -> Result<Self> {
        let size = fleets.len() + demands.len();
        if points.len() != size {
            return Err(Error::InvalidInstance(format!(
                "{} points given for {size} vertices",
                points.len()
            )));
        }
        let costs = euclidean_metric(&points);
        Ok(Self::assemble(capacity, fleets, demands, Some(points), costs, CostSource::Coordinates))
    }

    fn assemble(
        capacity: u64,
        fleets: Vec<u64>,
        demands: Vec<u64>,
        points: Option<Vec<Point>>,
        costs: Vec<Cost>,
        source: CostSource,
    ) -> Self {
        let mut vehicle_offsets = Vec::with_capacity(fleets.len() + 1);
        let mut acc = 0usize;
        for &r in &fleets {
            vehicle_offsets.push(acc);
            acc += r as usize;
        }
        vehicle_offsets.push(acc);
        Self { capacity, fleets, demands, points, costs, source, vehicle_offsets }
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    /// Number of depots.
    pub fn k(&self) -> usize {
        self.fleets.len()
    }

    /// Number of customers.
    pub fn n(&self) -> usize {
        self.demands.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.fleets.len() + self.demands.len()
    }

    pub fn depots(&self) -> std::ops::Range<usize> {
        0..self.k()
    }

    pub fn customers(&self) -> std::ops::Range<usize> {
        self.k()..self.num_vertices()
    }

    pub fn is_depot(&self, v: usize) -> bool {
        v < self.k()
    }

    pub fn is_customer(&self, v: usize) -> bool {
        v >= self.k() && v < self.num_vertices()
    }

    /// Fleet size `r_u` of depot `u`.
    pub fn fleet(&self, u: usize) -> u64 {
        self.fleets[u]
    }

    pub fn fleets(&self) -> &[u64] {
        &self.fleets
    }

    /// Demand of vertex `v`; depots have demand 0.
    pub fn demand(&self, v: usize) -> u64 {
        if v < self.k() {
            0
        } else {
            self.demands[v - self.k()]
        }
    }

    /// Customer demands in customer order.
    pub fn demands(&self) -> &[u64] {
        &self.demands
    }

    /// Total number of vehicles `m`.
    pub fn total_fleet(&self) -> u64 {
        self.fleets.iter().sum()
    }

    pub fn total_demand(&self) -> u64 {
        self.demands.iter().sum()
    }

    #[inline]
    pub fn cost(&self, a: usize, b: usize) -> Cost {
        self.costs[a * self.num_vertices() + b]
    }

    pub fn cost_matrix(&self) -> &[Cost] {
        &self.costs
    }

    pub fn points(&self) -> Option<&[Point]> {
        self.points.as_deref()
    }

    pub fn source(&self) -> CostSource {
        self.source
    }

    /// First vehicle id of depot `u`.
    pub fn vehicle_offset(&self, u: usize) -> usize {
        self.vehicle_offsets[u]
    }

    /// Depot owning `vehicle`, if the id is in range.
    pub fn depot_of_vehicle(&self, vehicle: usize) -> Option<usize> {
        if vehicle >= *self.vehicle_offsets.last().unwrap_or(&0) {
            return None;
        }
        Some(self.vehicle_offsets.partition_point(|&off| off <= vehicle) - 1)
    }

    /// Cost of the closed walk visiting `seq` in order and returning to the
    /// first vertex.
    pub fn cycle_cost(&self, seq: &[usize]) -> Cost {
        if seq.len() < 2 {
            return 0;
        }
        let open: Cost = seq.windows(2).map(|w| self.cost(w[0], w[1])).sum();
        open + self.cost(seq[seq.len() - 1], seq[0])
    }

    /// Cost of the open walk `seq`.
    pub fn walk_cost(&self, seq: &[usize]) -> Cost {
        seq.windows(2).map(|w| self.cost(w[0], w[1])).sum()
    }

    /// Same graph and fleets with new customer demands and capacity.
    pub fn with_demands(&self, demands: Vec<u64>, capacity: u64) -> Result<Self> {
        if demands.len() != self.n() {
            return Err(Error::InvalidInstance("demand vector length mismatch".into()));
        }
        Ok(Self { demands, capacity, ..self.clone() })
    }

    /// Same graph and demands with new fleet sizes.
    pub fn with_fleets(&self, fleets: Vec<u64>) -> Result<Self> {
        if fleets.len() != self.k() {
            return Err(Error::InvalidInstance("fleet vector length mismatch".into()));
        }
        Ok(Self::assemble(
            self.capacity,
            fleets,
            self.demands.clone(),
            self.points.clone(),
            self.costs.clone(),
            self.source,
        ))
    }

    /// Lists every broken invariant; empty means the instance is valid.
    pub fn validate(&self) -> Vec<InstanceViolation> {
        validate_instance(self)
    }
}

/// A broken instance invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceViolation {
    NoDepot,
    ZeroCapacity,
    ZeroFleet { depot: usize },
    ZeroDemand { customer: usize },
    NegativeCost { a: usize, b: usize },
    NonZeroDiagonal { v: usize },
    Asymmetric { a: usize, b: usize },
    Triangle { x: usize, y: usize, via: usize },
    FleetCapacity { total_demand: u64, vehicles: u64, capacity: u64 },
}

impl std::fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InstanceViolation::NoDepot => write!(f, "instance has no depot"),
            InstanceViolation::ZeroCapacity => write!(f, "vehicle capacity must be at least 1"),
            InstanceViolation::ZeroFleet { depot } => write!(f, "depot {depot} has no vehicles"),
            InstanceViolation::ZeroDemand { customer } => {
                write!(f, "customer {customer} has zero demand")
            }
            InstanceViolation::NegativeCost { a, b } => write!(f, "cost({a},{b}) is negative"),
            InstanceViolation::NonZeroDiagonal { v } => write!(f, "cost({v},{v}) is not zero"),
            InstanceViolation::Asymmetric { a, b } => write!(f, "cost({a},{b}) != cost({b},{a})"),
            InstanceViolation::Triangle { x, y, via } => {
                write!(f, "triangle inequality fails: cost({x},{y}) > cost({x},{via}) + cost({via},{y})")
            }
            InstanceViolation::FleetCapacity { total_demand, vehicles, capacity } => write!(
                f,
                "total demand {total_demand} exceeds fleet capacity {vehicles} x {capacity}"
            ),
        }
    }
}

/// Checks every instance invariant. The triangle check is exhaustive over
/// all triples and reports each violating pair once, with its first witness.
pub fn validate_instance(inst: &Instance) -> Vec<InstanceViolation> {
    let mut out = Vec::new();
    if inst.k() == 0 {
        out.push(InstanceViolation::NoDepot);
    }
    if inst.capacity == 0 {
        out.push(InstanceViolation::ZeroCapacity);
    }
    for u in inst.depots() {
        if inst.fleet(u) == 0 {
            out.push(InstanceViolation::ZeroFleet { depot: u });
        }
    }
    for v in inst.customers() {
        if inst.demand(v) == 0 {
            out.push(InstanceViolation::ZeroDemand { customer: v });
        }
    }
    let size = inst.num_vertices();
    for v in 0..size {
        if inst.cost(v, v) != 0 {
            out.push(InstanceViolation::NonZeroDiagonal { v });
        }
    }
    for a in 0..size {
        for b in 0..size {
            if inst.cost(a, b) < 0 {
                out.push(InstanceViolation::NegativeCost { a, b });
            }
        }
    }
    for a in 0..size {
        for b in a + 1..size {
            if inst.cost(a, b) != inst.cost(b, a) {
                out.push(InstanceViolation::Asymmetric { a, b });
            }
        }
    }
    for x in 0..size {
        for y in x + 1..size {
            let direct = inst.cost(x, y);
            if let Some(via) =
                (0..size).find(|&z| direct > inst.cost(x, z) + inst.cost(z, y))
            {
                out.push(InstanceViolation::Triangle { x, y, via });
            }
        }
    }
    let total = inst.total_demand();
    let vehicles = inst.total_fleet();
    if u128::from(total) > u128::from(vehicles) * u128::from(inst.capacity) {
        out.push(InstanceViolation::FleetCapacity {
            total_demand: total,
            vehicles,
            capacity: inst.capacity,
        });
    }
    out
}

/// Euclidean distance rounded half-up to fixed point.
pub fn rounded_distance(a: Point, b: Point) -> Cost {
    let d = ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt() * COST_SCALE as f64;
    (d + 0.5).floor() as Cost
}

/// Rounded Euclidean matrix closed under shortest paths.
fn euclidean_metric(points: &[Point]) -> Vec<Cost> {
    let size = points.len();
    let mut costs = vec![0; size * size];
    for a in 0..size {
        for b in 0..size {
            if a != b {
                costs[a * size + b] = rounded_distance(points[a], points[b]);
            }
        }
    }
    metric_closure(&mut costs, size);
    costs
}

/// Floyd-Warshall in place.
pub fn metric_closure(costs: &mut [Cost], size: usize) {
    for z in 0..size {
        for x in 0..size {
            let xz = costs[x * size + z];
            for y in 0..size {
                let via = xz + costs[z * size + y];
                if via < costs[x * size + y] {
                    costs[x * size + y] = via;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix3(ab: Cost, ac: Cost, cb: Cost) -> Vec<Cost> {
        // vertices: 0 = depot a, 1 = customer b, 2 = customer c
        vec![0, ab, ac, ab, 0, cb, ac, cb, 0]
    }

    #[test]
    fn minimal_metric_is_valid() {
        let inst = Instance::from_matrix(3, vec![1], vec![1], vec![0, 5, 5, 0], None).unwrap();
        assert!(inst.validate().is_empty());
    }

    #[test]
    fn triangle_violation_reported_once() {
        let inst =
            Instance::from_matrix(5, vec![1], vec![1, 1], matrix3(10, 1, 1), None).unwrap();
        let v = inst.validate();
        assert_eq!(v, vec![InstanceViolation::Triangle { x: 0, y: 1, via: 2 }]);
    }

    #[test]
    fn fleet_capacity_violation() {
        // two depots with one vehicle each, Q = 3, demands sum to 7
        let size = 4;
        let costs = vec![0; size * size];
        let inst = Instance::from_matrix(3, vec![1, 1], vec![3, 4], costs, None).unwrap();
        assert_eq!(
            inst.validate(),
            vec![InstanceViolation::FleetCapacity { total_demand: 7, vehicles: 2, capacity: 3 }]
        );
    }

    #[test]
    fn asymmetric_and_diagonal() {
        let inst = Instance::from_matrix(3, vec![1], vec![1], vec![1, 5, 4, 0], None).unwrap();
        let v = inst.validate();
        assert!(v.contains(&InstanceViolation::NonZeroDiagonal { v: 0 }));
        assert!(v.contains(&InstanceViolation::Asymmetric { a: 0, b: 1 }));
    }

    #[test]
    fn vehicles_map_to_depots() {
        let inst =
            Instance::from_matrix(3, vec![2, 1, 3], vec![], vec![0; 9], None).unwrap();
        assert_eq!(inst.depot_of_vehicle(0), Some(0));
        assert_eq!(inst.depot_of_vehicle(1), Some(0));
        assert_eq!(inst.depot_of_vehicle(2), Some(1));
        assert_eq!(inst.depot_of_vehicle(5), Some(2));
        assert_eq!(inst.depot_of_vehicle(6), None);
        assert_eq!(inst.vehicle_offset(2), 3);
    }

    #[test]
    fn closure_repairs_rounding() {
        let pts = vec![
            Point { x: 0.0, y: 0.0 },
            Point { x: 0.3333333, y: 0.0 },
            Point { x: 0.6666667, y: 0.0000001 },
        ];
        let inst = Instance::from_points(1, vec![2], vec![1, 1], pts).unwrap();
        assert!(inst.validate().is_empty());
    }
}
