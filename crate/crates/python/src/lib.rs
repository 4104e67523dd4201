//! Python bindings. Exact quantities come back as `fractions.Fraction`;
//! counts may be given as `int`, `Fraction` or a `"p/q"` string.

use std::time::Duration;

use dexbound::bound::{self, Permutation};
use dexbound::index_coding::{self, SideInfoInstance, Tightness};
use dexbound::oracle::{self, OracleLimits};
use dexbound::rational::{self, Rational};
use dexbound::scenarios::{self, CachingSetting, CachingSpec, CdcSpec, DecentralizedMode};
use dexbound::{format, BitClass, ExchangeInstance, NodeSet, OracleError};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(dexbound, BudgetExhausted, PyRuntimeError, "Oracle search stopped; args are (message, lower, upper).");

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, x: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((x.numer().clone(), x.denom().clone()))
}

fn parse_count(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    rational::parse(&text).ok_or_else(|| value_error(format!("cannot read {text:?} as a count")))
}

fn node_set(nodes: &[usize]) -> PyResult<NodeSet> {
    NodeSet::from_nodes(nodes.iter().copied()).ok_or_else(|| value_error("node indices must be below 64"))
}

/// A data-exchange instance: classes of bits demanded by `p` and held by `q`.
#[pyclass(name = "Instance", module = "dexbound", skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: ExchangeInstance,
}

impl PyInstance {
    fn side_info(&self) -> PyResult<SideInfoInstance> {
        SideInfoInstance::from_exchange(&self.inner).map_err(value_error)
    }
}

#[pymethods]
impl PyInstance {
    /// `classes` holds `(p, q, count)` triples.
    #[new]
    #[pyo3(signature = (k, classes, centralized = false))]
    fn new(k: usize, classes: Vec<(Vec<usize>, Vec<usize>, Bound<'_, PyAny>)>, centralized: bool) -> PyResult<Self> {
        let classes = classes
            .iter()
            .map(|(p, q, c)| Ok(BitClass::with_mass(node_set(p)?, node_set(q)?, parse_count(c)?)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyInstance {
            inner: ExchangeInstance::new(k, centralized, classes),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        format::from_json(text).map(|inner| PyInstance { inner }).map_err(value_error)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        format::read_file(&path).map(|inner| PyInstance { inner }).map_err(value_error)
    }

    fn to_json(&self) -> String {
        format::to_json(&self.inner)
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.node_count
    }

    #[getter]
    fn centralized(&self) -> bool {
        self.inner.centralized
    }

    #[getter]
    fn classes<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Vec<usize>, Vec<usize>, Bound<'py, PyAny>)>> {
        self.inner
            .classes
            .iter()
            .map(|c| Ok((c.demanders.to_vec(), c.owners.to_vec(), fraction(py, &c.count)?)))
            .collect()
    }

    /// Violated invariants, one message each; empty when valid.
    fn validate(&self) -> Vec<String> {
        self.inner.validate().violations.iter().map(|v| v.to_string()).collect()
    }

    fn is_valid(&self) -> bool {
        self.inner.is_valid()
    }

    /// The `n(p,q)` table as `{(p, q): Fraction}`.
    fn profile<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let out = PyDict::new(py);
        for ((p, q), v) in &self.inner.profile().table {
            out.set_item((p, q), fraction(py, v)?)?;
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(k={}, classes={}, centralized={})",
            self.inner.node_count,
            self.inner.classes.len(),
            if self.inner.centralized { "True" } else { "False" }
        )
    }
}

#[pyfunction]
fn generic_bound<'py>(py: Python<'py>, instance: &PyInstance) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &bound::generic_bound(&instance.inner).map_err(value_error)?)
}

#[pyfunction]
fn profile_bound<'py>(py: Python<'py>, instance: &PyInstance) -> PyResult<Bound<'py, PyAny>> {
    bound::generic_bound(&instance.inner).map_err(value_error)?;
    fraction(py, &bound::profile_bound(&instance.inner.profile()))
}

#[pyfunction]
fn centralized_bound<'py>(py: Python<'py>, instance: &PyInstance) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &bound::centralized_bound(&instance.side_info()?))
}

#[pyfunction]
fn permutation_bound(instance: &PyInstance, order: Vec<usize>) -> PyResult<u64> {
    let si = instance.side_info()?;
    let gamma = Permutation::new(order, si.clients()).map_err(value_error)?;
    bound::permutation_bound(&si, &gamma).map_err(value_error)
}

/// `(alpha, order)` with a maximizing client order.
#[pyfunction]
fn alpha(instance: &PyInstance) -> PyResult<(u64, Vec<usize>)> {
    let r = index_coding::alpha_exact(&instance.side_info()?).map_err(value_error)?;
    Ok((r.alpha, r.permutation.order().to_vec()))
}

/// `None` when tight, else `(clique, first, first_count, second, second_count)`.
#[pyfunction]
fn tightness(instance: &PyInstance) -> PyResult<Option<(Vec<usize>, usize, u64, usize, u64)>> {
    Ok(match index_coding::tightness_check(&instance.side_info()?).map_err(value_error)? {
        Tightness::Tight => None,
        Tightness::NotTight {
            clique,
            first,
            first_count,
            second,
            second_count,
        } => Some((clique.to_vec(), first, first_count, second, second_count)),
    })
}

/// The clique-cover scheme as a JSON string, with a `verified` field.
#[pyfunction]
#[pyo3(signature = (instance, trials = 8, seed = dexbound::reproduce::DEFAULT_SEED))]
fn scheme(instance: &PyInstance, trials: usize, seed: u64) -> PyResult<String> {
    let si = instance.side_info()?;
    let s = index_coding::clique_cover_scheme(&si).map_err(value_error)?;
    let verified = index_coding::verify_scheme(&si, &s, trials, seed).map_err(value_error)?;
    let mut doc = s.to_json(&si);
    doc["verified"] = verified.into();
    Ok(doc.to_string())
}

/// `(load, certified, rows)` for the optimal binary linear scheme, where
/// `rows` lists `(node, [bit indices])` per transmission. Raises
/// `BudgetExhausted` carrying the bracket when the budget runs out.
#[pyfunction]
#[pyo3(signature = (instance, max_load = None, budget = None))]
fn linear_optimal_load(
    py: Python<'_>,
    instance: &PyInstance,
    max_load: Option<usize>,
    budget: Option<f64>,
) -> PyResult<(u64, bool, Vec<(usize, Vec<usize>)>)> {
    if budget.is_some_and(|b| !(b.is_finite() && b > 0.0)) {
        return Err(value_error("budget must be a positive number of seconds"));
    }
    let defaults = OracleLimits::default();
    let limits = OracleLimits {
        max_load: max_load.unwrap_or(defaults.max_load),
        budget: budget.map(Duration::from_secs_f64).or(defaults.budget),
        ..defaults
    };
    let inst = instance.inner.clone();
    match py.detach(|| oracle::linear_optimal_load(&inst, &limits)) {
        Ok(r) => {
            let rows = r
                .scheme
                .rows
                .iter()
                .flat_map(|(node, masks)| {
                    masks
                        .iter()
                        .map(move |m| (*node, (0..64).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect()))
                })
                .collect();
            Ok((r.load, r.verdict == oracle::Verdict::CertifiedOptimal, rows))
        }
        Err(OracleError::BudgetExhausted { lower, upper }) => {
            Err(BudgetExhausted::new_err((format!("linear optimum in [{lower}, {upper}]"), lower, upper)))
        }
        Err(e) => Err(value_error(e)),
    }
}

fn cache_fraction(m: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_count(m)
}

/// Symmetric caching averaged over cyclic demands: `(constructed, closed, instance)`.
#[pyfunction]
fn caching<'py>(
    py: Python<'py>,
    k: usize,
    n: usize,
    m: Bound<'py, PyAny>,
    f: u64,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>, PyInstance)> {
    let spec = CachingSpec::new(k, n, cache_fraction(&m)?, f);
    let placement = scenarios::man_placement(&spec).map_err(value_error)?;
    let family = scenarios::cyclic_demand_family(n, k, 1).map_err(value_error)?;
    let constructed = scenarios::averaged_bound(&placement, &family).map_err(value_error)?;
    let closed = scenarios::caching_closed_form(&spec, CachingSetting::Centralized).map_err(value_error)?;
    let inner = scenarios::caching_instance(&placement, &family[0]).map_err(value_error)?;
    Ok((fraction(py, &constructed)?, fraction(py, &closed)?, PyInstance { inner }))
}

/// Decentralized caching: `(constructed, closed, instance)`; `seed` selects sampling.
#[pyfunction]
#[pyo3(signature = (k, n, m, f, seed = None))]
fn decentralized<'py>(
    py: Python<'py>,
    k: usize,
    n: usize,
    m: Bound<'py, PyAny>,
    f: u64,
    seed: Option<u64>,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>, PyInstance)> {
    let spec = CachingSpec::new(k, n, cache_fraction(&m)?, f);
    let mode = seed.map_or(DecentralizedMode::Exact, |seed| DecentralizedMode::Sampled { seed });
    let inner = scenarios::decentralized_instance(&spec, mode).map_err(value_error)?;
    let constructed = bound::generic_bound(&inner).map_err(value_error)?;
    let closed = scenarios::caching_closed_form(&spec, CachingSetting::Decentralized).map_err(value_error)?;
    Ok((fraction(py, &constructed)?, fraction(py, &closed)?, PyInstance { inner }))
}

/// Symmetric-storage shuffling averaged over cyclic shuffles: `(constructed, closed)`.
#[pyfunction]
#[pyo3(signature = (k, q, m, unit_bits = 1))]
fn shuffling<'py>(
    py: Python<'py>,
    k: usize,
    q: usize,
    m: usize,
    unit_bits: u64,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let spec = scenarios::symmetric_storage(k, q, m, unit_bits).map_err(value_error)?;
    let constructed = scenarios::shuffle_average_bound(&spec).map_err(value_error)?;
    let closed = scenarios::shuffling_closed_form(k, q, m, unit_bits).map_err(value_error)?;
    Ok((fraction(py, &constructed)?, fraction(py, &closed)?))
}

/// Coded distributed computing with cyclic mapping: normalized `(constructed, closed)`.
#[pyfunction]
#[pyo3(signature = (k, n, r, w, t = 1, s = 1))]
fn cdc<'py>(
    py: Python<'py>,
    k: usize,
    n: usize,
    r: usize,
    w: u64,
    t: u64,
    s: usize,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let spec = CdcSpec {
        nodes: k,
        mappers: scenarios::cyclic_mapping(k, n, r),
        reducers: w,
        value_bits: t,
        replication: s,
    };
    let constructed = scenarios::cdc_normalized_bound(&spec).map_err(value_error)?;
    let closed = if s == 1 {
        scenarios::cdc_closed_form_s1(&spec.computation_load(), k).map_err(value_error)?
    } else {
        scenarios::cdc_prop_bound(&spec.mapping_profile(), k, s, n)
    };
    Ok((fraction(py, &constructed)?, fraction(py, &closed)?))
}

#[pymodule]
#[pyo3(name = "dexbound")]
fn dexbound_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add("BudgetExhausted", m.py().get_type::<BudgetExhausted>())?;
    m.add_function(wrap_pyfunction!(generic_bound, m)?)?;
    m.add_function(wrap_pyfunction!(profile_bound, m)?)?;
    m.add_function(wrap_pyfunction!(centralized_bound, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_bound, m)?)?;
    m.add_function(wrap_pyfunction!(alpha, m)?)?;
    m.add_function(wrap_pyfunction!(tightness, m)?)?;
    m.add_function(wrap_pyfunction!(scheme, m)?)?;
    m.add_function(wrap_pyfunction!(linear_optimal_load, m)?)?;
    m.add_function(wrap_pyfunction!(caching, m)?)?;
    m.add_function(wrap_pyfunction!(decentralized, m)?)?;
    m.add_function(wrap_pyfunction!(shuffling, m)?)?;
    m.add_function(wrap_pyfunction!(cdc, m)?)?;
    Ok(())
}
