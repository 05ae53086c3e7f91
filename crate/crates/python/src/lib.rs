//! Python bindings: `import ym2d`.
//!
//! Groups and irreps are classes; every engine is a function. Structured
//! results come back as plain dicts and lists.

use std::str::FromStr;

use num_rational::Rational64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use ym2d_core::asymptotics::{
    asymptotic_series_exact, gaussian_lie_expectation, instanton_gap as core_instanton_gap, limits_comparison, Rho,
};
use ym2d_core::heatkernel::{heat_kernel_value, HeatKernelQuery, Truncation};
use ym2d_core::lattice::{
    graph_expectation_mc, partition_function as core_partition, wilson_exact_fusion, wilson_exact_r2 as core_r2,
    wilson_exact_simple, LoopConfig, LoopObservable, SurfaceMap,
};
use ym2d_core::liegroup::enumerate_irreps;
use ym2d_core::pertloop::{decompactified_comparison_with, ContourLoop, MatrixRep, PertOptions, QuadBudget};
use ym2d_core::wick::{berezin_gaussian, pfaffian_gaussian, wick_expectation as core_wick, Generator, GradedExpr, PairingKernel};
use ym2d_core::{ClassFunction, Error};

fn py_err(e: Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(format!("{}: {e}", e.kind()))
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for ym2d_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<PyObject> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any().unbind(),
            (None, Some(x)) => x.into_pyobject(py)?.into_any().unbind(),
            _ => py.None(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

fn serialized(py: Python<'_>, v: impl serde::Serialize) -> PyResult<PyObject> {
    let value = serde_json::to_value(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &value)
}

/// A compact Lie group with the invariant metric `c^2 (-tr XY)`.
#[pyclass(name = "GroupModel", frozen)]
#[derive(Clone)]
struct PyGroup(ym2d_core::GroupModel);

#[pymethods]
impl PyGroup {
    #[new]
    #[pyo3(signature = (name = "SU2", metric_scale = 1.0))]
    fn new(name: &str, metric_scale: f64) -> PyResult<Self> {
        let g = ym2d_core::GroupModel::from_name(name).py()?;
        Ok(Self(g.with_metric_scale(metric_scale).py()?))
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.0.name()
    }

    #[getter]
    fn metric_scale(&self) -> f64 {
        self.0.metric_scale()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim_g()
    }

    fn irrep(&self, label: i64) -> PyResult<PyIrrep> {
        Ok(PyIrrep(self.0.irrep(label).py()?))
    }

    /// Irreps with Casimir at most `cutoff`, sorted by Casimir.
    fn irreps(&self, cutoff: f64) -> PyResult<Vec<PyIrrep>> {
        Ok(enumerate_irreps(&self.0, cutoff).py()?.into_iter().map(PyIrrep).collect())
    }

    fn __repr__(&self) -> String {
        format!("GroupModel('{}', metric_scale={})", self.0.name(), self.0.metric_scale())
    }
}

#[pyclass(name = "Irrep", frozen)]
#[derive(Clone)]
struct PyIrrep(ym2d_core::liegroup::Irrep);

#[pymethods]
impl PyIrrep {
    #[getter]
    fn label(&self) -> i64 {
        self.0.label
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim
    }

    #[getter]
    fn casimir(&self) -> f64 {
        self.0.casimir
    }

    #[getter]
    fn group(&self) -> PyGroup {
        PyGroup(self.0.group)
    }

    /// Character at the torus angle `theta`.
    fn character(&self, theta: f64) -> f64 {
        ym2d_core::liegroup::character_at(&self.0, theta).re
    }

    fn __repr__(&self) -> String {
        format!("Irrep({}, label={}, dim={})", self.0.group.name(), self.0.label, self.0.dim)
    }
}

fn chi(group: &PyGroup, label: i64) -> PyResult<ClassFunction> {
    Ok(ClassFunction::character(group.0.irrep(label).py()?))
}

fn sphere_areas(areas: (f64, f64)) -> PyResult<(f64, f64)> {
    let (r1, r2) = areas;
    if r1 > 0.0 && r2 > 0.0 && r1.is_finite() && r2.is_finite() {
        Ok((r1, r2))
    } else {
        Err(PyValueError::new_err("areas must be two positive numbers"))
    }
}

/// Heat kernel `K_t` at the torus angle `theta`, with method and truncation bound.
///
/// `truncation` is None (automatic), `("casimir", cutoff)` or `("winding", count)`.
#[pyfunction]
#[pyo3(signature = (group, t, theta = 0.0, truncation = None))]
fn heat_kernel(py: Python<'_>, group: &PyGroup, t: f64, theta: f64, truncation: Option<(String, f64)>) -> PyResult<PyObject> {
    let trunc = match truncation {
        None => Truncation::Auto,
        Some((kind, x)) => match kind.as_str() {
            "casimir" => Truncation::CasimirCutoff(x),
            "winding" if x >= 0.0 => Truncation::WindingCutoff(x as usize),
            _ => return Err(PyValueError::new_err("truncation must be ('casimir', c) or ('winding', n)")),
        },
    };
    serialized(py, heat_kernel_value(&HeatKernelQuery::new(group.0, t, theta).with_truncation(trunc)).py()?)
}

/// Partition function of a closed genus-`genus` surface at coupling `lambda_ = lambda0 |S|`.
#[pyfunction]
fn partition_function(group: &PyGroup, genus: u32, lambda_: f64) -> PyResult<f64> {
    core_partition(&group.0, genus, lambda_).py()
}

/// Exact simple loop on the sphere; `lambda_` is the coupling times the total area.
///
/// Returns the quadrature value; `fusion=True` uses the fusion-rule sum instead.
#[pyfunction]
#[pyo3(signature = (group, irrep, lambda_, areas = (0.5, 0.5), fusion = false))]
fn wilson_exact(group: &PyGroup, irrep: i64, lambda_: f64, areas: (f64, f64), fusion: bool) -> PyResult<f64> {
    let (r1, r2) = sphere_areas(areas)?;
    let cfg = LoopConfig::sphere(r1, r2, chi(group, irrep)?).py()?;
    let lambda0 = lambda_ / (r1 + r2);
    if fusion {
        wilson_exact_fusion(&group.0, &cfg, lambda0).py()
    } else {
        wilson_exact_simple(&group.0, &cfg, lambda0).py()
    }
}

/// Exact simple loop of area `area` on the plane.
#[pyfunction]
fn wilson_r2(group: &PyGroup, irrep: i64, lambda0: f64, area: f64) -> PyResult<f64> {
    if !(lambda0 >= 0.0 && area >= 0.0) {
        return Err(PyValueError::new_err("lambda0 and area must be non-negative"));
    }
    Ok(core_r2(&group.0.irrep(irrep).py()?, lambda0, area))
}

/// Monte Carlo expectation of a named loop on a surface map.
///
/// Without `map_json` the map is the sphere cut into regions with the given
/// exact areas (strings such as `"1/3"`).
#[pyfunction]
#[pyo3(signature = (group, irrep, lambda0, areas = ("1/2".to_string(), "1/2".to_string()), map_json = None, loop_name = "gamma", samples = 100_000, seed = 20_240_917))]
#[allow(clippy::too_many_arguments)]
fn wilson_mc(
    py: Python<'_>,
    group: &PyGroup,
    irrep: i64,
    lambda0: f64,
    areas: (String, String),
    map_json: Option<&str>,
    loop_name: &str,
    samples: usize,
    seed: u64,
) -> PyResult<PyObject> {
    let area = |s: &str| Rational64::from_str(s.trim()).map_err(|_| PyValueError::new_err(format!("`{s}` is not p/q")));
    let map = match map_json {
        Some(text) => SurfaceMap::from_json(text).py()?,
        None => SurfaceMap::sphere_simple_loop(area(&areas.0)?, area(&areas.1)?).py()?,
    };
    let word = map
        .loop_word(loop_name)
        .ok_or_else(|| PyValueError::new_err(format!("the map has no loop named `{loop_name}`")))?
        .to_vec();
    let obs = LoopObservable {
        function: chi(group, irrep)?,
        word,
    };
    serialized(py, graph_expectation_mc(&group.0, &map, lambda0, Some(&obs), samples, seed).py()?)
}

/// Gaussian Lie-algebra integral of `chi_irrep` with variance parameter `rho`.
#[pyfunction]
fn gaussian_expectation(group: &PyGroup, irrep: i64, rho: f64) -> PyResult<f64> {
    gaussian_lie_expectation(&group.0, &chi(group, irrep)?, Rho::new(rho).py()?).py()
}

/// Coefficients of the small-`rho` series as `(float, "p/q")` pairs.
#[pyfunction]
fn asymptotic_series(group: &PyGroup, irrep: i64, order: usize) -> PyResult<Vec<(f64, String)>> {
    let s = asymptotic_series_exact(&group.0, &chi(group, irrep)?, order).py()?;
    let floats = s.to_f64();
    Ok(floats.coeffs().iter().copied().zip(s.rational_strings()).collect())
}

/// Both orders of limits for `chi_m` on SU(2).
#[pyfunction]
#[pyo3(signature = (m, order = 3))]
fn compare_limits(py: Python<'_>, m: i64, order: usize) -> PyResult<PyObject> {
    serialized(py, limits_comparison(m, order).py()?)
}

/// Exponentially small gap between the exact and Gaussian values and its fit.
#[pyfunction]
#[pyo3(signature = (group, irrep, lambda_, equal_areas = true))]
fn instanton_gap(py: Python<'_>, group: &PyGroup, irrep: i64, lambda_: f64, equal_areas: bool) -> PyResult<PyObject> {
    serialized(py, core_instanton_gap(&group.0, &chi(group, irrep)?, lambda_, equal_areas).py()?)
}

/// Perturbative coefficients on a circle or ellipse, compared with the series.
#[pyfunction]
#[pyo3(signature = (group, irrep, order = 2, radius = 1.0, semi_axes = None, budget = None, seed = 20_240_917))]
#[allow(clippy::too_many_arguments)]
fn wilson_pert(
    py: Python<'_>,
    group: &PyGroup,
    irrep: i64,
    order: usize,
    radius: f64,
    semi_axes: Option<(f64, f64)>,
    budget: Option<usize>,
    seed: u64,
) -> PyResult<PyObject> {
    let rep = MatrixRep::new(group.0.irrep(irrep).py()?).py()?;
    let lp = match semi_axes {
        Some((a, b)) => ContourLoop::ellipse(a, b).py()?,
        None => ContourLoop::circle(Default::default(), radius).py()?,
    };
    let budget = match budget {
        Some(n) => QuadBudget::new(n).py()?,
        None => QuadBudget::from_env().py()?,
    };
    serialized(py, decompactified_comparison_with(&rep, &lp, order, &PertOptions { budget, seed }).py()?)
}

/// Gaussian expectation of a graded polynomial.
///
/// `generators` are `(id, degree)` pairs, `terms` are `(word, coeff)` with
/// words as lists of ids, and `pairing` lists `(a, b, value)` entries.
#[pyfunction]
fn wick_expectation(
    generators: Vec<(u32, i32)>,
    terms: Vec<(Vec<u32>, f64)>,
    pairing: Vec<(u32, u32, f64)>,
) -> PyResult<f64> {
    let lookup = |id: u32| -> PyResult<Generator> {
        generators
            .iter()
            .find(|(i, _)| *i == id)
            .map(|&(i, d)| Generator::new(i, d))
            .ok_or_else(|| PyValueError::new_err(format!("generator {id} is not declared")))
    };
    let mut p = PairingKernel::new();
    for (a, b, v) in pairing {
        p.set(lookup(a)?, lookup(b)?, v).py()?;
    }
    let mut f = GradedExpr::zero();
    for (word, c) in terms {
        let gens = word.into_iter().map(lookup).collect::<PyResult<Vec<_>>>()?;
        f = &f + &GradedExpr::monomial(&gens, c);
    }
    Ok(core_wick(&f, &p))
}

/// Berezin integral of `exp(-omega* B omega)`, which equals `det B`.
#[pyfunction]
fn berezin_determinant(b: Vec<Vec<f64>>) -> PyResult<f64> {
    berezin_gaussian(&b).py()
}

/// Pfaffian of an antisymmetric matrix from its Gaussian Berezin integral.
#[pyfunction]
fn pfaffian(a: Vec<Vec<f64>>) -> PyResult<f64> {
    pfaffian_gaussian(&a).py()
}

#[pymodule]
fn ym2d(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyIrrep>()?;
    m.add_function(wrap_pyfunction!(heat_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(partition_function, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_exact, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_r2, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_mc, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_series, m)?)?;
    m.add_function(wrap_pyfunction!(compare_limits, m)?)?;
    m.add_function(wrap_pyfunction!(instanton_gap, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_pert, m)?)?;
    m.add_function(wrap_pyfunction!(wick_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(berezin_determinant, m)?)?;
    m.add_function(wrap_pyfunction!(pfaffian, m)?)?;
    Ok(())
}
