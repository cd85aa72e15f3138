//! Python module `tiling_lab`.
//!
//! Graphs are wrapped in a `Graph` class; partitions are passed as a list of
//! A-classes plus an optional B-class, each a list of vertex ids. Results
//! come back as plain dicts and lists.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::{json, Value};

use tiling_lab::constructions::{generate as gen_family, predicted_count_balanced as predicted, FamilySpec};
use tiling_lab::factor::{SearchBudget, TilingJson};
use tiling_lab::io::{parse_graph, write_edge_list};
use tiling_lab::partition::{verify_good_partition as verify, PartitionParams};
use tiling_lab::pipeline::{run_pipeline as run, PipelineConfig};
use tiling_lab::robustness::{self, SamplingConfig};
use tiling_lab::{has_kr_factor as decide, LabeledPartition, VertexSet};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(xs) => {
            let list = PyList::empty(py);
            for x in xs {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn ser<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(v).map_err(value_err)?)
}

fn budget(max_nodes: Option<u64>) -> SearchBudget {
    max_nodes.map(SearchBudget::nodes).unwrap_or_default()
}

fn partition(n: usize, a: Vec<Vec<usize>>, b: Option<Vec<usize>>) -> PyResult<LabeledPartition> {
    let a: Vec<VertexSet> = a.iter().map(|c| c.iter().collect()).collect();
    let b = b.map(|c| c.iter().collect());
    LabeledPartition::new(n, a, b).map_err(value_err)
}

fn params(r: usize, n: usize, alpha: f64, beta: f64, beta_prime: f64, gamma: f64) -> PyResult<PartitionParams> {
    PartitionParams::new(alpha, beta, beta_prime, gamma, n, r).map_err(value_err)
}

/// Simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "tiling_lab", frozen)]
pub struct PyGraph {
    inner: tiling_lab::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Self {
            inner: tiling_lab::Graph::from_edges(n, &edges).map_err(value_err)?,
        })
    }

    /// Parses edge-list, DIMACS or JSON text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_graph(text).map_err(value_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.inner.n() && v < self.inner.n() && self.inner.has_edge(u, v)
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        self.inner.check_vertex(v).map_err(value_err)?;
        Ok(self.inner.degree(v))
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.inner.check_vertex(v).map_err(value_err)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn to_edge_list(&self) -> String {
        write_edge_list(&self.inner, &[])
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.edge_count())
    }
}

/// `(graph, partition)` for a family spec such as `"balanced:r=3,n=3"`;
/// `partition` is `None` or a dict with `a`, `b` and (for planted
/// instances) `params`.
#[pyfunction]
fn generate<'py>(py: Python<'py>, spec: &str) -> PyResult<(PyGraph, Bound<'py, PyAny>)> {
    let spec = FamilySpec::parse(spec).map_err(value_err)?;
    let g = gen_family(&spec).map_err(value_err)?;
    let part = match &g.partition {
        Some(p) => json!({
            "a": p.a_classes().iter().map(VertexSet::to_vec).collect::<Vec<_>>(),
            "b": p.has_b().then(|| p.b().to_vec()),
            "params": g.params,
        }),
        None => Value::Null,
    };
    Ok((PyGraph { inner: g.graph }, to_py(py, &part)?))
}

/// `{"exists": "true"|"false"|"unknown", "factor": [[..], ..] | None, ..}`.
#[pyfunction]
#[pyo3(signature = (g, r, max_nodes=None))]
fn has_kr_factor<'py>(py: Python<'py>, g: &PyGraph, r: usize, max_nodes: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    let res = decide(&g.inner, r, &budget(max_nodes)).map_err(value_err)?;
    let body = json!({
        "exists": res.exists,
        "factor": res.factor.as_ref().map(|t| TilingJson::new(r, t).cliques),
        "nodes_explored": res.nodes_explored,
        "timed_out": res.timed_out,
    });
    to_py(py, &body)
}

/// Exact count of subsets inducing a K_r-factor, with a size histogram.
#[pyfunction]
#[pyo3(signature = (g, r, max_nodes=None))]
fn count_factor_subsets<'py>(
    py: Python<'py>,
    g: &PyGraph,
    r: usize,
    max_nodes: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let est = py
        .detach(|| robustness::count_factor_subsets(&g.inner, r, &budget(max_nodes)))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    ser(py, &est)
}

/// Monte Carlo estimate of the probability that a `p`-random subset
/// induces a K_r-factor.
#[pyfunction]
#[pyo3(signature = (g, r, p=0.5, trials=10_000, seed=0))]
fn estimate_factor_probability<'py>(
    py: Python<'py>,
    g: &PyGraph,
    r: usize,
    p: f64,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = SamplingConfig::new(p, trials, seed);
    let est = py
        .detach(|| robustness::estimate_factor_probability(&g.inner, r, &cfg))
        .map_err(value_err)?;
    ser(py, &est)
}

/// `Σ_k C(n,k)^r` as a Python int.
#[pyfunction]
fn predicted_count_balanced(r: usize, n: usize) -> BigUint {
    predicted(r, n)
}

#[pyfunction]
fn binomial_interval_prob(n: u64, p: f64, lo: u64, hi: u64) -> PyResult<f64> {
    robustness::binomial_interval_prob(n, p, lo, hi).map_err(value_err)
}

#[pyfunction]
fn normal_cdf(z: f64) -> f64 {
    robustness::normal_cdf(z)
}

/// Per-condition verdicts with witnesses.
#[allow(clippy::too_many_arguments)]
#[pyfunction]
#[pyo3(signature = (g, r, a, b=None, n=None, alpha=0.15, beta=0.25, beta_prime=0.75, gamma=0.05))]
fn verify_good_partition<'py>(
    py: Python<'py>,
    g: &PyGraph,
    r: usize,
    a: Vec<Vec<usize>>,
    b: Option<Vec<usize>>,
    n: Option<usize>,
    alpha: f64,
    beta: f64,
    beta_prime: f64,
    gamma: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let nn = n.unwrap_or(g.inner.n() / r.max(1));
    let prm = params(r, nn, alpha, beta, beta_prime, gamma)?;
    let p = partition(g.inner.n(), a, b)?;
    let rep = verify(&g.inner, &p, &prm, &SearchBudget::default()).map_err(value_err)?;
    let body = json!({ "good": rep.is_good(), "report": rep });
    to_py(py, &body)
}

/// Runs the factor pipeline; raises `ValueError` if the partition is not good.
#[allow(clippy::too_many_arguments)]
#[pyfunction]
#[pyo3(signature = (g, r, a, b=None, n=None, alpha=0.15, beta=0.25, beta_prime=0.75, gamma=0.05, relaxed=false))]
fn run_pipeline<'py>(
    py: Python<'py>,
    g: &PyGraph,
    r: usize,
    a: Vec<Vec<usize>>,
    b: Option<Vec<usize>>,
    n: Option<usize>,
    alpha: f64,
    beta: f64,
    beta_prime: f64,
    gamma: f64,
    relaxed: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let nn = n.unwrap_or(g.inner.n() / r.max(1));
    let prm = params(r, nn, alpha, beta, beta_prime, gamma)?;
    let p = partition(g.inner.n(), a, b)?;
    let cfg = PipelineConfig {
        budget: SearchBudget::default(),
        relaxed,
    };
    let st = py.detach(|| run(&g.inner, &p, &prm, cfg)).map_err(value_err)?;
    let body = json!({
        "stage": st.stage,
        "factor": st.factor.as_ref().map(|t| t.to_vecs()),
        "failure": st.failure,
        "ledger": st.ledger,
        "tilings": st.tilings.sizes(),
    });
    to_py(py, &body)
}

#[pymodule]
#[pyo3(name = "tiling_lab")]
fn tiling_lab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(has_kr_factor, m)?)?;
    m.add_function(wrap_pyfunction!(count_factor_subsets, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_factor_probability, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_count_balanced, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_interval_prob, m)?)?;
    m.add_function(wrap_pyfunction!(normal_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(verify_good_partition, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    Ok(())
}
