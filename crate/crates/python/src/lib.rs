//! Python bindings. Exact values come back as `fractions.Fraction`.

use std::collections::BTreeMap;
use std::sync::Arc;

use mh::growth::{GrowthState, GrowthTrace};
use mh::io::{self, TraceFile};
use mh::montecarlo::{self, SimConfig, Statistic, TrackedVertex};
use mh::theory;
use mh::verify::{self, VerifyConfig};
use mh::{profile_seed, BuildingSequence, Gamma, GrowthOptions, Rational, SeedProfile, SeedSpec, VertexId};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

fn to_rational(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let numer: BigInt = x.getattr("numerator")?.extract()?;
    let denom: BigInt = x.getattr("denominator")?.extract()?;
    Ok(Rational::new(numer, denom))
}

#[pyclass(name = "Seed", frozen)]
struct PySeed {
    spec: SeedSpec,
    profile: Arc<SeedProfile>,
}

impl PySeed {
    fn from_spec(spec: SeedSpec) -> PyResult<Self> {
        let profile = Arc::new(profile_seed(&spec).map_err(err)?);
        Ok(Self { spec, profile })
    }
}

#[pymethods]
impl PySeed {
    /// Parses seed-file text (`hook <name>`, `edge <u> <v>`).
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Self::from_spec(io::parse_seed(text).map_err(err)?.spec)
    }

    #[staticmethod]
    fn k2() -> PyResult<Self> {
        Self::from_spec(SeedSpec::k2())
    }

    #[staticmethod]
    fn ps() -> PyResult<Self> {
        Self::from_spec(SeedSpec::ps())
    }

    #[staticmethod]
    fn triangle() -> PyResult<Self> {
        Self::from_spec(SeedSpec::triangle())
    }

    #[getter]
    fn tau0(&self) -> u64 {
        self.profile.tau0
    }

    #[getter]
    fn eta(&self) -> u64 {
        self.profile.eta
    }

    #[getter]
    fn hook_degree(&self) -> u64 {
        self.profile.hook_degree
    }

    #[getter]
    fn min_degree(&self) -> u64 {
        self.profile.min_degree
    }

    #[getter]
    fn min_degree_count(&self) -> u64 {
        self.profile.min_degree_count
    }

    #[getter]
    fn hook_is_min(&self) -> bool {
        self.profile.hook_is_min
    }

    #[getter]
    fn total_path_length(&self) -> u64 {
        self.profile.total_path_length
    }

    #[getter]
    fn mean_depth<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.profile.mean_depth)
    }

    #[getter]
    fn diameter(&self) -> u32 {
        self.profile.diameter0
    }

    #[getter]
    fn degrees(&self) -> Vec<u64> {
        self.profile.degree0.clone()
    }

    #[getter]
    fn edges(&self) -> Vec<(u32, u32)> {
        self.spec.graph().edges().iter().map(|(u, v)| (u.0, v.0)).collect()
    }

    #[getter]
    fn digest(&self) -> String {
        io::seed_digest(&self.spec)
    }

    fn canonical(&self) -> String {
        io::canonical_seed(&self.spec)
    }

    fn __repr__(&self) -> String {
        format!("Seed(tau0={}, eta={}, hook_degree={})", self.profile.tau0, self.profile.eta, self.profile.hook_degree)
    }
}

#[pyclass(name = "Sequence", frozen)]
struct PySequence {
    inner: BuildingSequence,
}

#[pymethods]
impl PySequence {
    /// `const:<k>`, `linear`, `takeall` or `explicit:<k0>,<k1>,...`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self {
            inner: spec.parse().map_err(err)?,
        })
    }

    fn k(&self, seed: &PySeed, n: usize) -> PyResult<u64> {
        self.inner.k(n, &seed.profile).map_err(err)
    }

    fn tau(&self, seed: &PySeed, n: usize) -> PyResult<u64> {
        self.inner.tau(n, &seed.profile).map_err(err)
    }

    /// {"a", "b", "gamma" (None when infinite), "exact"}.
    fn limits<'py>(&self, py: Python<'py>, seed: &PySeed) -> PyResult<Bound<'py, PyDict>> {
        let limits = self.inner.limits(&seed.profile);
        let d = PyDict::new(py);
        d.set_item("a", fraction(py, &limits.a)?)?;
        d.set_item("b", fraction(py, &limits.b)?)?;
        match &limits.gamma {
            Gamma::Finite(g) => d.set_item("gamma", fraction(py, g)?)?,
            Gamma::Infinite => d.set_item("gamma", py.None())?,
        }
        d.set_item("exact", limits.known_exactly)?;
        Ok(d)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Sequence('{}')", self.inner)
    }
}

/// One growing realisation.
#[pyclass(name = "Network")]
struct PyNetwork {
    spec: SeedSpec,
    state: GrowthState,
    trace: GrowthTrace,
    rng: ChaCha8Rng,
}

#[pymethods]
impl PyNetwork {
    #[new]
    #[pyo3(signature = (seed, sequence, rng_seed = 0, track_ecc = false))]
    fn new(seed: &PySeed, sequence: &PySequence, rng_seed: u64, track_ecc: bool) -> Self {
        let options = GrowthOptions {
            track_ecc,
            ..GrowthOptions::default()
        };
        let state = GrowthState::new(Arc::clone(&seed.profile), sequence.inner.clone(), options);
        let trace = GrowthTrace {
            steps: Vec::new(),
            recorded: vec![state.record()],
        };
        Self {
            spec: seed.spec.clone(),
            state,
            trace,
            rng: ChaCha8Rng::seed_from_u64(rng_seed),
        }
    }

    /// One random step; returns the sorted latch ids.
    fn step(&mut self) -> PyResult<Vec<u32>> {
        let sample = self.state.step_random(&mut self.rng).map_err(err)?;
        Ok(self.push(sample.latches))
    }

    /// One step with the given latches.
    fn step_with(&mut self, latches: Vec<u32>) -> PyResult<Vec<u32>> {
        let ids: Vec<VertexId> = latches.into_iter().map(VertexId).collect();
        let sample = self.state.step_with(&ids).map_err(err)?;
        Ok(self.push(sample.latches))
    }

    fn grow(&mut self, steps: usize) -> PyResult<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    #[getter]
    fn n(&self) -> usize {
        self.state.step()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.state.order()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.state.graph().edge_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(u32, u32)> {
        self.state.graph().edges().iter().map(|(u, v)| (u.0, v.0)).collect()
    }

    #[getter]
    fn degrees(&self) -> Vec<u64> {
        self.state.graph().degrees().to_vec()
    }

    #[getter]
    fn depths(&self) -> Vec<u32> {
        self.state.depths().to_vec()
    }

    #[getter]
    fn min_degree_count(&self) -> u64 {
        self.state.min_degree_count()
    }

    #[getter]
    fn total_path_length(&self) -> u64 {
        self.state.total_path_length()
    }

    #[getter]
    fn diameter(&self) -> Option<u32> {
        self.state.diameter()
    }

    #[getter]
    fn eccentricities(&self) -> Option<Vec<u32>> {
        self.state.eccentricities().map(<[u32]>::to_vec)
    }

    fn trace_json(&self) -> String {
        TraceFile::new(&self.spec, self.state.sequence(), &self.trace).to_json()
    }
}

impl PyNetwork {
    fn push(&mut self, latches: Vec<VertexId>) -> Vec<u32> {
        let ids = latches.iter().map(|v| v.0).collect();
        self.trace.steps.push(latches);
        self.trace.recorded.push(self.state.record());
        ids
    }
}

/// Replays a trace; returns the list of mismatches as (n, field, recorded, replayed).
#[pyfunction]
#[pyo3(signature = (trace_json, seed = None))]
fn replay(trace_json: &str, seed: Option<&PySeed>) -> PyResult<Vec<(usize, String, String, String)>> {
    let file = TraceFile::from_json(trace_json).map_err(err)?;
    let spec = match seed {
        Some(s) => s.spec.clone(),
        None => file.embedded_seed().map_err(err)?,
    };
    let outcome = io::replay_trace(&file, &spec).map_err(err)?;
    Ok(outcome
        .mismatches
        .into_iter()
        .map(|m| (m.n, m.field, m.recorded, m.replayed))
        .collect())
}

#[pyfunction]
fn limiting_average_degree<'py>(py: Python<'py>, seed: &PySeed) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &theory::limiting_average_degree(&seed.profile))
}

#[pyfunction]
fn exact_average_degree<'py>(py: Python<'py>, seed: &PySeed, sequence: &PySequence, n: usize) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &theory::exact_average_degree(&seed.profile, &sequence.inner, n).map_err(err)?)
}

/// E[X_{j:n}] for the vertex with seed role `role` born at step `j`.
#[pyfunction]
fn expected_tracked_degree<'py>(
    py: Python<'py>,
    seed: &PySeed,
    sequence: &PySequence,
    j: usize,
    n: usize,
    role: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let role = VertexId(role);
    if !seed.profile.graph.contains(role) {
        return Err(err(format!("seed has no vertex {role}")));
    }
    let delta = seed.profile.degree_of(role);
    fraction(py, &theory::expected_tracked_degree(&seed.profile, &sequence.inner, j, n, delta).map_err(err)?)
}

#[pyfunction]
fn expected_min_degree_count<'py>(py: Python<'py>, seed: &PySeed, sequence: &PySequence, n: usize) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &theory::expected_min_degree_count(&seed.profile, &sequence.inner, n).map_err(err)?)
}

#[pyfunction]
fn limiting_min_degree_proportion<'py>(py: Python<'py>, seed: &PySeed) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &theory::limiting_min_degree_proportion(&seed.profile))
}

/// Exact law of X_n as {value: Fraction}.
#[pyfunction]
#[pyo3(signature = (seed, sequence, n, state_cap = theory::DEFAULT_STATE_CAP))]
fn min_degree_pmf<'py>(
    py: Python<'py>,
    seed: &PySeed,
    sequence: &PySequence,
    n: usize,
    state_cap: usize,
) -> PyResult<BTreeMap<u64, Bound<'py, PyAny>>> {
    let pmf = theory::min_degree_pmf(&seed.profile, &sequence.inner, n, state_cap).map_err(err)?;
    pmf.support.iter().map(|(x, p)| Ok((*x, fraction(py, p)?))).collect()
}

#[pyfunction]
fn expected_total_path_length<'py>(py: Python<'py>, seed: &PySeed, sequence: &PySequence, n: usize) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &theory::expected_total_path_length(&seed.profile, &sequence.inner, n).map_err(err)?)
}

#[pyfunction]
fn expected_depth<'py>(py: Python<'py>, seed: &PySeed, sequence: &PySequence, n: usize) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &theory::expected_depth(&seed.profile, &sequence.inner, n).map_err(err)?)
}

/// Σ_{i=1}^n 1/(i + x) for an int or Fraction `x`.
#[pyfunction]
fn generalized_harmonic<'py>(py: Python<'py>, n: u64, x: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &theory::generalized_harmonic(n, &to_rational(x)?).map_err(err)?)
}

fn parse_stat(name: &str) -> PyResult<Statistic> {
    Ok(match name {
        "order" => Statistic::Order,
        "edges" => Statistic::Edges,
        "avgdeg" => Statistic::AvgDegree,
        "mindeg" => Statistic::MinDegreeCount,
        "mindeg_prop" => Statistic::MinDegreeProportion,
        "tpl" => Statistic::TotalPathLength,
        "depth" => Statistic::Depth,
        "tracked" => Statistic::TrackedDegree,
        other => return Err(err(format!("unknown statistic `{other}`"))),
    })
}

/// Monte Carlo rows as dicts with keys stat, n, mean, variance, se,
/// theory (Fraction), z, pass.
#[pyfunction]
#[pyo3(signature = (seed, sequence, steps, replicates, rng_seed = 0, stats = None, tracked = None))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    seed: &PySeed,
    sequence: &PySequence,
    steps: usize,
    replicates: usize,
    rng_seed: u64,
    stats: Option<Vec<String>>,
    tracked: Option<(usize, u32)>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let mut config = SimConfig::new(Arc::clone(&seed.profile), sequence.inner.clone(), steps, replicates);
    config.master_seed = rng_seed;
    if let Some(names) = stats {
        config.stats = names.iter().map(|s| parse_stat(s)).collect::<PyResult<_>>()?;
    }
    if let Some((birth_step, role)) = tracked {
        config.tracked = Some(TrackedVertex {
            birth_step,
            role: VertexId(role),
        });
        if !config.stats.contains(&Statistic::TrackedDegree) {
            config.stats.push(Statistic::TrackedDegree);
        }
    }
    let report = py.detach(|| montecarlo::run(&config)).map_err(err)?;
    report
        .rows
        .iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("stat", row.stat.name())?;
            d.set_item("n", row.n)?;
            d.set_item("mean", row.mean)?;
            d.set_item("variance", row.variance)?;
            d.set_item("se", row.se)?;
            d.set_item("theory", fraction(py, &row.theory)?)?;
            d.set_item("z", row.z)?;
            d.set_item("pass", row.pass)?;
            Ok(d)
        })
        .collect()
}

/// Runs the recurrence checks on the default grid; returns
/// {property name: (checks, failures)}.
#[pyfunction]
#[pyo3(signature = (max_n = 6, runs = 100, rng_seed = 0))]
fn verify_grid(py: Python<'_>, max_n: usize, runs: usize, rng_seed: u64) -> PyResult<BTreeMap<String, (usize, Vec<String>)>> {
    let config = VerifyConfig {
        max_n,
        runs,
        rng_seed,
        ..VerifyConfig::default_grid()
    };
    let report = py.detach(|| verify::run(&config)).map_err(err)?;
    Ok(report
        .properties
        .into_iter()
        .map(|p| (p.name.to_owned(), (p.checks, p.failures)))
        .collect())
}

#[pymodule]
fn multihook(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeed>()?;
    m.add_class::<PySequence>()?;
    m.add_class::<PyNetwork>()?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(limiting_average_degree, m)?)?;
    m.add_function(wrap_pyfunction!(exact_average_degree, m)?)?;
    m.add_function(wrap_pyfunction!(expected_tracked_degree, m)?)?;
    m.add_function(wrap_pyfunction!(expected_min_degree_count, m)?)?;
    m.add_function(wrap_pyfunction!(limiting_min_degree_proportion, m)?)?;
    m.add_function(wrap_pyfunction!(min_degree_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(expected_total_path_length, m)?)?;
    m.add_function(wrap_pyfunction!(expected_depth, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_grid, m)?)?;
    Ok(())
}
