use std::time::Duration;

use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use permuta::bench;
use permuta::domain::{Domain, MAX_VALUE};
use permuta::model::{build_injection_model, build_permutation_model, ModelSpec, VarRef};
use permuta::problems::{self, InstanceKind};
use permuta::propagate::{gac_alldiff as gac, propagate_fixpoint_with, AllDiffMode, DomainStore};
use permuta::sat::{lockstep_compare, SatVariant};
use permuta::search::{solve, Algorithm, Goal, Heuristic, SearchConfig};

fn err(e: permuta::error::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = permuta::error::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn to_lists(doms: &[Domain]) -> Vec<Vec<u32>> {
    doms.iter().map(|d| d.iter().collect()).collect()
}

fn from_lists(v: Vec<Vec<u32>>) -> PyResult<Vec<Domain>> {
    v.into_iter()
        .map(|d| {
            if let Some(&bad) = d.iter().find(|&&x| x > MAX_VALUE) {
                return Err(PyValueError::new_err(format!("value {bad} does not fit in a domain")));
            }
            Ok(Domain::from_values(d))
        })
        .collect()
}

/// A constraint model: primal, dual and auxiliary variables with their
/// constraints.
#[pyclass(name = "Problem", module = "permuta_py")]
struct PyProblem {
    inner: permuta::model::Problem,
    spec: ModelSpec,
}

#[pymethods]
impl PyProblem {
    /// Permutation of 1..n under a model tag such as "c" or "neq-c".
    #[staticmethod]
    fn permutation(n: u32, model: &str) -> PyResult<Self> {
        let spec = parse(model)?;
        Ok(PyProblem { inner: build_permutation_model(n, spec).map_err(err)?, spec })
    }

    /// Injection of n variables into 1..m under a model such as "injection-c2".
    #[staticmethod]
    fn injection(n: u32, m: u32, model: &str) -> PyResult<Self> {
        let spec = parse(model)?;
        Ok(PyProblem { inner: build_injection_model(n, m, spec).map_err(err)?, spec })
    }

    /// A benchmark instance, e.g. instance("langford:3,9", "c").
    #[staticmethod]
    fn instance(name: &str, model: &str) -> PyResult<Self> {
        let kind: InstanceKind = parse(name)?;
        let spec = parse(model)?;
        Ok(PyProblem { inner: kind.build(spec).map_err(err)?, spec })
    }

    #[getter]
    fn model(&self) -> &'static str {
        self.spec.cli_name()
    }

    #[getter]
    fn num_primal(&self) -> usize {
        self.inner.primal.len()
    }

    #[getter]
    fn num_dual(&self) -> usize {
        self.inner.dual.len()
    }

    #[getter]
    fn num_vars(&self) -> usize {
        self.inner.num_vars()
    }

    #[getter]
    fn num_constraints(&self) -> usize {
        self.inner.constraints.len()
    }

    /// Domains in flat order: primal, dual, auxiliary.
    fn domains(&self) -> Vec<Vec<u32>> {
        to_lists(&self.inner.flat_domains())
    }

    /// Replace the domain of primal variable `i` (1-based).
    fn set_primal_domain(&mut self, i: u32, values: Vec<u32>) -> PyResult<()> {
        if i == 0 || i as usize > self.inner.primal.len() {
            return Err(PyIndexError::new_err(format!("no primal variable {i}")));
        }
        let d = from_lists(vec![values])?.remove(0);
        *self.inner.domain_mut(VarRef::primal(i)) = d;
        Ok(())
    }

    fn is_solution(&self, assignment: Vec<u32>) -> bool {
        assignment.len() == self.inner.num_vars() && self.inner.is_solution(&assignment)
    }

    /// Propagate to a fixpoint. Returns the domains, or None on a wipeout.
    #[pyo3(signature = (alldiff = "gac"))]
    fn propagate(&self, alldiff: &str) -> PyResult<Option<Vec<Vec<u32>>>> {
        let mode = match alldiff {
            "gac" => AllDiffMode::Gac,
            "decompose" => AllDiffMode::Decompose,
            other => return Err(PyValueError::new_err(format!("unknown all-different mode `{other}`"))),
        };
        let mut s = DomainStore::from_problem(&self.inner);
        let out = propagate_fixpoint_with(&self.inner, &mut s, mode);
        Ok((!out.is_wipeout()).then(|| to_lists(s.domains())))
    }

    /// Backtracking search. `algorithm` defaults to mgac for models with an
    /// all-different and mac otherwise.
    #[pyo3(signature = (heuristic = "lex", goal = "first", algorithm = None, time_limit = None))]
    fn solve(
        &self,
        py: Python<'_>,
        heuristic: &str,
        goal: &str,
        algorithm: Option<&str>,
        time_limit: Option<f64>,
    ) -> PyResult<SolveResult> {
        let algorithm = match algorithm {
            Some(a) => parse(a)?,
            None => Algorithm::default_for(self.spec),
        };
        let mut cfg = SearchConfig::new(algorithm, parse::<Heuristic>(heuristic)?, parse::<Goal>(goal)?);
        if let Some(t) = time_limit {
            if !(t.is_finite() && t >= 0.0) {
                return Err(PyValueError::new_err(format!("invalid time limit {t}")));
            }
            cfg.time_limit = Some(Duration::from_secs_f64(t));
        }
        let p = &self.inner;
        let r = py.detach(|| solve(p, &cfg)).map_err(err)?;
        Ok(SolveResult {
            solutions: r.primal_solutions(p),
            fails: r.stats.fails,
            nodes: r.stats.nodes,
            branches: r.stats.branches,
            solution_count: r.stats.solutions,
            aborted: r.stats.aborted,
            elapsed_ms: r.stats.elapsed.as_secs_f64() * 1e3,
        })
    }

    /// Branch-by-branch comparison of DP on the direct encoding with FC.
    /// `variant` is "primal" or "channelling".
    #[pyo3(signature = (variant = "channelling"))]
    fn lockstep<'py>(&self, py: Python<'py>, variant: &str) -> PyResult<Bound<'py, PyDict>> {
        let v = match variant {
            "primal" => SatVariant::PrimalSAT,
            "channelling" => SatVariant::ChannellingSAT,
            other => return Err(PyValueError::new_err(format!("unknown variant `{other}`"))),
        };
        let r = lockstep_compare(&self.inner, v).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("fc_branches", r.fc_branches)?;
        d.set_item("dp_branches", r.dp_branches)?;
        d.set_item("fc_solutions", r.fc_solutions)?;
        d.set_item("dp_models", r.dp_models)?;
        d.set_item("equal", r.equal())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Problem(model={}, primal={}, dual={}, constraints={})",
            self.spec.cli_name(),
            self.inner.primal.len(),
            self.inner.dual.len(),
            self.inner.constraints.len()
        )
    }
}

#[pyclass(module = "permuta_py", get_all, frozen)]
struct SolveResult {
    /// Primal projections of the solutions found.
    solutions: Vec<Vec<u32>>,
    fails: u64,
    nodes: u64,
    branches: u64,
    solution_count: u64,
    aborted: bool,
    elapsed_ms: f64,
}

#[pymethods]
impl SolveResult {
    fn __repr__(&self) -> String {
        format!(
            "SolveResult(solutions={}, fails={}, nodes={}, aborted={})",
            self.solution_count,
            self.fails,
            self.nodes,
            if self.aborted { "True" } else { "False" }
        )
    }
}

/// GAC filtering of one all-different constraint; None when unsatisfiable.
#[pyfunction]
fn gac_alldiff(domains: Vec<Vec<u32>>) -> PyResult<Option<Vec<Vec<u32>>>> {
    Ok(gac(&from_lists(domains)?).map(|d| to_lists(&d)))
}

/// One benchmark run as a dict of the report columns.
#[pyfunction]
#[pyo3(signature = (instance, model, heuristic = "lex", goal = "first", algorithm = None))]
fn run<'py>(
    py: Python<'py>,
    instance: &str,
    model: &str,
    heuristic: &str,
    goal: &str,
    algorithm: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut spec = bench::RunSpec::new(parse(instance)?, parse(model)?, parse(heuristic)?, parse(goal)?);
    if let Some(a) = algorithm {
        spec.algorithm = parse(a)?;
    }
    let row = py.detach(|| bench::run_one(&spec)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("instance", spec.instance.to_string())?;
    d.set_item("model", spec.model.cli_name())?;
    d.set_item("heuristic", spec.heuristic.name())?;
    d.set_item("algorithm", spec.algorithm.name())?;
    d.set_item("goal", spec.goal.name())?;
    d.set_item("fails", row.stats.fails)?;
    d.set_item("nodes", row.stats.nodes)?;
    d.set_item("solutions", row.stats.solutions)?;
    d.set_item("ref_fails", row.ref_fails)?;
    d.set_item("delta", row.delta())?;
    Ok(d)
}

/// Embedded reference fail counts as (table, instance, model, heuristic, goal, fails).
#[pyfunction]
fn reference_cells() -> Vec<(u8, String, &'static str, &'static str, &'static str, u64)> {
    bench::reference_cells()
        .iter()
        .map(|c| (c.table, c.instance.to_string(), c.model.cli_name(), c.heuristic.name(), c.goal.name(), c.fails))
        .collect()
}

/// Number of stored counterexample classifications that disagree with
/// their expectation.
#[pyfunction]
fn fixture_mismatches() -> PyResult<usize> {
    Ok(bench::verify_fixtures().map_err(err)?.violations)
}

#[pyfunction]
fn is_golomb_ruler(marks: Vec<u32>) -> bool {
    problems::is_golomb_ruler(&marks)
}

/// Digits by position for a Langford primal assignment.
#[pyfunction]
fn langford_sequence(x: Vec<u32>, m: u32) -> PyResult<Vec<u32>> {
    let len = x.len() as u32;
    if m == 0 || len % m != 0 || x.iter().any(|&p| p == 0 || p > len) {
        return Err(PyValueError::new_err("not a Langford assignment"));
    }
    Ok(problems::langford_sequence(&x, m))
}

#[pymodule]
fn permuta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add_class::<SolveResult>()?;
    m.add_function(wrap_pyfunction!(gac_alldiff, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(reference_cells, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_mismatches, m)?)?;
    m.add_function(wrap_pyfunction!(is_golomb_ruler, m)?)?;
    m.add_function(wrap_pyfunction!(langford_sequence, m)?)?;
    Ok(())
}
