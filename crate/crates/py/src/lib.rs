//! Python module `mdsdvrp`: instances, solvers, the feasibility checker and
//! the exact oracle. Costs cross the boundary as fixed-point integers and
//! rationals as strings such as `"3/2"`.

// pyo3 0.22's generated wrappers trip this lint on every `PyResult` return.
#![allow(clippy::useless_conversion)]

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use mdsdvrp::instance::{check_solution as check, generate_instance, parse_instance, write_instance, GenSpec};
use mdsdvrp::oracle::{solve_exact as exact, OracleLimits};
use mdsdvrp::rational::{format_rational, parse_rational};
use mdsdvrp::report::{Format, Report};
use mdsdvrp::solvers::{solve as run_solver, SolveOptions};
use mdsdvrp::{Rational, Solution, SolverKind};

/// `(vehicle, depot, seq, {customer: amount})`.
type TourTuple = (usize, usize, Vec<usize>, BTreeMap<usize, u64>);

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(text: &str) -> PyResult<Rational> {
    parse_rational(text).ok_or_else(|| value_error(format!("`{text}` is not a rational number")))
}

#[pyclass(frozen, module = "mdsdvrp")]
#[derive(Clone)]
struct Instance {
    inner: mdsdvrp::Instance,
}

#[pymethods]
impl Instance {
    /// Parses the `MDSDVRP 1` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_instance(text).map(|inner| Instance { inner }).map_err(value_error)
    }

    #[staticmethod]
    #[pyo3(signature = (seed, n, k, capacity, demand_lo=1, demand_hi=None, fleet="extra:0"))]
    fn generate(
        seed: u64,
        n: usize,
        k: usize,
        capacity: u64,
        demand_lo: u64,
        demand_hi: Option<u64>,
        fleet: &str,
    ) -> PyResult<Self> {
        let spec = GenSpec {
            seed,
            n,
            k,
            capacity,
            demand_range: (demand_lo, demand_hi.unwrap_or(capacity)),
            fleet: fleet.parse().map_err(value_error)?,
        };
        generate_instance(&spec).map(|inner| Instance { inner }).map_err(value_error)
    }

    fn to_text(&self) -> String {
        write_instance(&self.inner)
    }

    /// Broken invariants; empty when the instance is valid.
    fn validate(&self) -> Vec<String> {
        self.inner.validate().iter().map(|v| v.to_string()).collect()
    }

    fn cost(&self, a: usize, b: usize) -> PyResult<i64> {
        let size = self.inner.num_vertices();
        if a >= size || b >= size {
            return Err(value_error(format!("vertex out of range 0..{size}")));
        }
        Ok(self.inner.cost(a, b))
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn capacity(&self) -> u64 {
        self.inner.capacity()
    }

    #[getter]
    fn fleets(&self) -> Vec<u64> {
        self.inner.fleets().to_vec()
    }

    #[getter]
    fn demands(&self) -> Vec<u64> {
        self.inner.demands().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Instance(k={}, n={}, Q={})", self.inner.k(), self.inner.n(), self.inner.capacity())
    }
}

#[pyclass(frozen, module = "mdsdvrp")]
struct SolverResult {
    inst: mdsdvrp::Instance,
    inner: mdsdvrp::SolverResult,
}

#[pymethods]
impl SolverResult {
    #[getter]
    fn solver(&self) -> &'static str {
        self.inner.solver.name()
    }

    #[getter]
    fn cost(&self) -> i64 {
        self.inner.cost
    }

    #[getter]
    fn gamma(&self) -> String {
        format_rational(&self.inner.gamma)
    }

    #[getter]
    fn claimed_ratio(&self) -> Option<String> {
        self.inner.claimed_ratio.as_ref().map(format_rational)
    }

    #[getter]
    fn iterations_run(&self) -> u64 {
        self.inner.iterations_run
    }

    #[getter]
    fn iterations_enumerated(&self) -> u64 {
        self.inner.iterations_enumerated
    }

    #[getter]
    fn guarantee_void(&self) -> bool {
        self.inner.guarantee_void
    }

    #[getter]
    fn tours(&self) -> Vec<TourTuple> {
        self.inner
            .solution
            .tours
            .iter()
            .map(|t| (t.vehicle, t.depot, t.seq.clone(), t.lambda.clone()))
            .collect()
    }

    fn certificates_hold(&self) -> bool {
        self.inner.certificates_hold()
    }

    /// Full report; `format` is `json`, `csv` or `human`.
    #[pyo3(signature = (format="json"))]
    fn report(&self, format: &str) -> PyResult<String> {
        let format: Format = format.parse().map_err(value_error)?;
        let report = Report::new(&self.inst, &self.inner).map_err(value_error)?;
        Ok(report.render(format))
    }

    /// The bare solution object `{tours, cost, scale}`.
    fn solution_json(&self) -> String {
        self.inner.solution.to_json_value(&self.inst).to_string()
    }
}

#[pyfunction]
#[pyo3(signature = (inst, solver="alg3", eps="1", mdtsp="forest2", max_iters=None))]
fn solve(
    py: Python<'_>,
    inst: &Instance,
    solver: &str,
    eps: &str,
    mdtsp: &str,
    max_iters: Option<u64>,
) -> PyResult<SolverResult> {
    let kind: SolverKind = solver.parse().map_err(value_error)?;
    let opts = SolveOptions { eps: rational(eps)?, mdtsp: mdtsp.parse().map_err(value_error)?, max_iters };
    let inner = py.allow_threads(|| run_solver(&inst.inner, kind, &opts)).map_err(value_error)?;
    Ok(SolverResult { inst: inst.inner.clone(), inner })
}

/// `(feasible, ["condition: detail", ...])` for a solution JSON, bare or
/// inside a report.
#[pyfunction]
#[pyo3(signature = (inst, solution_json, gamma="1"))]
fn check_solution(inst: &Instance, solution_json: &str, gamma: &str) -> PyResult<(bool, Vec<String>)> {
    let sol = Solution::from_json_str(solution_json).map_err(value_error)?;
    let audit = check(&inst.inner, &sol, &rational(gamma)?).map_err(value_error)?;
    let lines = audit.violations.iter().map(|v| format!("{}: {}", v.condition, v.detail)).collect();
    Ok((audit.feasible, lines))
}

/// `(optimal cost, solution JSON)`; honours `MDSDVRP_ORACLE_LIMITS`.
#[pyfunction]
fn solve_exact(py: Python<'_>, inst: &Instance) -> PyResult<(i64, String)> {
    let limits = OracleLimits::from_env().map_err(value_error)?;
    let opt = py.allow_threads(|| exact(&inst.inner, &limits)).map_err(value_error)?;
    Ok((opt.opt_cost, opt.witness.to_json_value(&inst.inner).to_string()))
}

#[pymodule]
#[pyo3(name = "mdsdvrp")]
fn python_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_class::<SolverResult>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(check_solution, m)?)?;
    m.add_function(wrap_pyfunction!(solve_exact, m)?)?;
    m.add("COST_SCALE", mdsdvrp::instance::COST_SCALE)?;
    m.add("SOLVERS", SolverKind::ALL.map(|k| k.name()).to_vec())?;
    Ok(())
}
