use std::cell::RefCell;
use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dunkl_core::dunkl::{self as core_dunkl, Accuracy, BesselSpec, Evaluation, KernelQuery, Method};
use dunkl_core::poly::{self, Multiplicity, Rational, Transposition};
use dunkl_core::quadrature::{self, SimplexRule as CoreRule};
use dunkl_core::special::{self, HumbertSpec, LauricellaSpec, SeriesParams, SeriesValue};
use dunkl_core::verify::{self, VerifyConfig};

create_exception!(dunkl_sn, DunklError, PyException, "Evaluation or precondition failure.");

fn err(e: impl std::fmt::Display) -> PyErr {
    DunklError::new_err(e.to_string())
}

/// κ from a Python value: `str` ("1/2", "0.3"), `int` (exact) or `float`.
fn kappa_arg(obj: &Bound<'_, PyAny>) -> PyResult<Multiplicity> {
    if let Ok(s) = obj.extract::<String>() {
        return Multiplicity::parse(&s).map_err(err);
    }
    if let Ok(i) = obj.extract::<i64>() {
        return Multiplicity::exact(Rational::from_integer(i.into())).map_err(err);
    }
    if let Ok(f) = obj.extract::<f64>() {
        return Multiplicity::float(f).map_err(err);
    }
    Err(PyValueError::new_err("kappa must be a str, int or float"))
}

fn exact_kappa(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    Ok(kappa_arg(obj)?.to_rational())
}

fn method_arg(s: &str) -> PyResult<Method> {
    s.parse().map_err(err)
}

fn series_params(max_order: usize, tol: f64) -> PyResult<SeriesParams> {
    SeriesParams::new(max_order, tol).map_err(err)
}

fn evaluation_dict<'py>(py: Python<'py>, e: &Evaluation) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", e.value)?;
    d.set_item("err_bound", e.err_bound)?;
    d.set_item("method", e.method.to_string())?;
    d.set_item("discrepancy", e.discrepancy)?;
    Ok(d)
}

fn series_dict<'py>(py: Python<'py>, v: &SeriesValue) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", v.value)?;
    d.set_item("error_bound", v.error_bound)?;
    d.set_item("certified", v.certified)?;
    d.set_item("order", v.order)?;
    d.set_item("roundoff", v.roundoff)?;
    Ok(d)
}

/// Sparse polynomial with exact rational coefficients.
#[pyclass(name = "MultiPoly", module = "dunkl_sn", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMultiPoly {
    inner: poly::MultiPoly,
}

impl From<poly::MultiPoly> for PyMultiPoly {
    fn from(inner: poly::MultiPoly) -> Self {
        PyMultiPoly { inner }
    }
}

#[pymethods]
impl PyMultiPoly {
    /// Parse `"3/4 * x1^2 x2 + -1/2 * x3 + 5"`; `nvars` defaults to the
    /// highest variable index present.
    #[new]
    #[pyo3(signature = (text, nvars = None))]
    fn new(text: &str, nvars: Option<usize>) -> PyResult<Self> {
        let inner = match nvars {
            Some(n) => poly::MultiPoly::parse(text, n),
            None => text.parse(),
        }
        .map_err(err)?;
        Ok(inner.into())
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    /// `(exponents, "p/q")` pairs in descending graded-lex order.
    fn terms(&self) -> Vec<(Vec<u32>, String)> {
        self.inner
            .terms()
            .map(|(m, c)| (m.exps().to_vec(), c.to_string()))
            .collect()
    }

    fn coeff(&self, exps: Vec<u32>) -> String {
        self.inner.coeff(&exps).to_string()
    }

    fn total_degree(&self) -> Option<u32> {
        self.inner.total_degree()
    }

    fn is_homogeneous(&self) -> bool {
        self.inner.is_homogeneous()
    }

    fn partial(&self, i: usize) -> PyResult<Self> {
        Ok(self.inner.partial(i).map_err(err)?.into())
    }

    fn transpose(&self, i: usize, j: usize) -> PyResult<Self> {
        let s = Transposition::new(i, j).map_err(err)?;
        Ok(self.inner.transpose(s).map_err(err)?.into())
    }

    /// `(p − p∘(i j)) / (x_i − x_j)`.
    fn divided_difference(&self, i: usize, j: usize) -> PyResult<Self> {
        let s = Transposition::new(i, j).map_err(err)?;
        Ok(self.inner.divided_difference(s).map_err(err)?.into())
    }

    /// Dunkl operator `D_i` (1-based) with multiplicity `kappa`.
    fn dunkl(&self, i: usize, kappa: &Bound<'_, PyAny>) -> PyResult<Self> {
        let k = kappa_arg(kappa)?;
        Ok(self.inner.dunkl(i, &k).map_err(err)?.into())
    }

    fn eval(&self, x: Vec<f64>) -> PyResult<f64> {
        if x.len() != self.inner.nvars() {
            return Err(PyValueError::new_err(format!(
                "expected {} coordinates, got {}",
                self.inner.nvars(),
                x.len()
            )));
        }
        Ok(self.inner.eval(&x))
    }

    fn __add__(&self, other: &Self) -> Self {
        (&self.inner + &other.inner).into()
    }

    fn __sub__(&self, other: &Self) -> Self {
        (&self.inner - &other.inner).into()
    }

    fn __mul__(&self, other: &Self) -> Self {
        (&self.inner * &other.inner).into()
    }

    fn __neg__(&self) -> Self {
        (-&self.inner).into()
    }

    fn __bool__(&self) -> bool {
        !self.inner.is_zero()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MultiPoly({:?}, nvars={})", self.inner.to_string(), self.inner.nvars())
    }
}

/// Gauss–Jacobi tensor rule on the simplex for the symmetric Dirichlet weight.
#[pyclass(name = "SimplexRule", module = "dunkl_sn", frozen)]
struct PySimplexRule {
    inner: CoreRule,
}

/// Call a Python callable from inside a numeric closure, keeping the first error.
fn guarded<'py, A>(f: &'py Bound<'py, PyAny>, failure: &'py RefCell<Option<PyErr>>) -> impl Fn(A) -> f64 + 'py
where
    A: IntoPyObject<'py> + 'py,
{
    move |arg: A| {
        if failure.borrow().is_some() {
            return f64::NAN;
        }
        match f.call1((arg,)).and_then(|r| r.extract::<f64>()) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                f64::NAN
            }
        }
    }
}

fn finish<T>(value: T, failure: &RefCell<Option<PyErr>>) -> PyResult<T> {
    match failure.borrow_mut().take() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

#[pymethods]
impl PySimplexRule {
    #[new]
    #[pyo3(signature = (n, kappa, q = 12))]
    fn new(n: usize, kappa: f64, q: usize) -> PyResult<Self> {
        Ok(PySimplexRule {
            inner: CoreRule::new(n, kappa, q).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn points_per_dim(&self) -> usize {
        self.inner.points_per_dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// `(t, weight)` pairs; `t` has all `n` barycentric coordinates.
    fn nodes(&self) -> Vec<(Vec<f64>, f64)> {
        self.inner.nodes().map(|(t, w)| (t.to_vec(), w)).collect()
    }

    fn total_mass(&self) -> f64 {
        self.inner.total_mass()
    }

    /// `∫ f(t) ∏ t_j^{κ−1} dt` for a callable `f(list[float]) -> float`.
    fn integrate(&self, f: &Bound<'_, PyAny>) -> PyResult<f64> {
        let failure = RefCell::new(None);
        let g = guarded::<Vec<f64>>(f, &failure);
        let v = self.inner.integrate(|t| g(t.to_vec()));
        let v = finish(v, &failure)?;
        v.map_err(err)
    }

    /// Expectation of `f` under the normalized Dirichlet weight.
    fn expectation(&self, f: &Bound<'_, PyAny>) -> PyResult<f64> {
        let failure = RefCell::new(None);
        let g = guarded::<Vec<f64>>(f, &failure);
        let v = self.inner.expectation(|t| g(t.to_vec()));
        let v = finish(v, &failure)?;
        v.map_err(err)
    }
}

/// `E_κ(x, e_ℓ)`.
#[pyfunction]
#[pyo3(signature = (x, ell = None, kappa = None, method = "series", q = 12, max_order = 60, tol = 1e-12))]
#[allow(clippy::too_many_arguments)]
fn kernel<'py>(
    py: Python<'py>,
    x: Vec<f64>,
    ell: Option<usize>,
    kappa: Option<&Bound<'py, PyAny>>,
    method: &str,
    q: usize,
    max_order: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let k = kappa.map(kappa_arg).transpose()?.unwrap_or(Multiplicity::Float(1.0));
    let ell = ell.unwrap_or(x.len());
    let acc = Accuracy {
        series: series_params(max_order, tol)?,
        q,
    };
    let query = KernelQuery::new(k, x, ell, method_arg(method)?)
        .map_err(err)?
        .with_accuracy(acc);
    let e = py.detach(|| core_dunkl::dunkl_kernel(&query)).map_err(err)?;
    evaluation_dict(py, &e)
}

/// `J_κ(λ(ν), x)`.
#[pyfunction]
#[pyo3(signature = (x, kappa = None, nu = 1.0, method = "series", q = 12, max_order = 60, tol = 1e-12))]
#[allow(clippy::too_many_arguments)]
fn bessel<'py>(
    py: Python<'py>,
    x: Vec<f64>,
    kappa: Option<&Bound<'py, PyAny>>,
    nu: f64,
    method: &str,
    q: usize,
    max_order: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let k = kappa.map(kappa_arg).transpose()?.unwrap_or(Multiplicity::Float(1.0));
    let acc = Accuracy {
        series: series_params(max_order, tol)?,
        q,
    };
    let spec = BesselSpec::new(k, nu, x).map_err(err)?;
    let m = method_arg(method)?;
    let e = py.detach(|| core_dunkl::bessel(&spec, m, &acc)).map_err(err)?;
    evaluation_dict(py, &e)
}

/// Exact `V_κ(x_ℓ^m)` as a polynomial.
#[pyfunction]
fn intertwine_monomial(n: usize, ell: usize, m: u32, kappa: &Bound<'_, PyAny>) -> PyResult<PyMultiPoly> {
    let k = exact_kappa(kappa)?;
    Ok(core_dunkl::intertwine_monomial(n, ell, m, &k).map_err(err)?.into())
}

/// `V_κ F(x)` for `F(x) = f(x_ℓ)`, `f` a Python callable of one float.
#[pyfunction]
#[pyo3(signature = (f, ell, x, kappa, q = 12))]
fn intertwine_single(f: &Bound<'_, PyAny>, ell: usize, x: Vec<f64>, kappa: f64, q: usize) -> PyResult<f64> {
    let rule = CoreRule::cached(x.len(), kappa, q).map_err(err)?;
    let failure = RefCell::new(None);
    let g = guarded::<f64>(f, &failure);
    let v = core_dunkl::intertwine_single(g, ell, &x, &rule);
    let v = finish(v, &failure)?;
    v.map_err(err)
}

/// `V_κ F(x)` for `F(x) = Σ_σ f((xσ)_n)`.
#[pyfunction]
#[pyo3(signature = (f, x, kappa, q = 12))]
fn intertwine_symmetric(f: &Bound<'_, PyAny>, x: Vec<f64>, kappa: f64, q: usize) -> PyResult<f64> {
    let rule = CoreRule::cached(x.len(), kappa, q).map_err(err)?;
    let failure = RefCell::new(None);
    let g = guarded::<f64>(f, &failure);
    let v = core_dunkl::intertwine_symmetric(g, &x, &rule);
    let v = finish(v, &failure)?;
    v.map_err(err)
}

/// Exact `E[t^m]` under the symmetric Dirichlet weight, as `"p/q"`.
#[pyfunction]
fn dirichlet_moment(n: usize, kappa: &Bound<'_, PyAny>, m: Vec<u32>) -> PyResult<String> {
    let k = exact_kappa(kappa)?;
    Ok(quadrature::dirichlet_moment(n, &k, &m).map_err(err)?.to_string())
}

#[pyfunction]
#[pyo3(signature = (b, c, x, max_order = 60, tol = 1e-12))]
fn humbert_phi2<'py>(
    py: Python<'py>,
    b: Vec<f64>,
    c: f64,
    x: Vec<f64>,
    max_order: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = HumbertSpec::new(b, c, x).map_err(err)?;
    let v = special::humbert_phi2(&spec, &series_params(max_order, tol)?).map_err(err)?;
    series_dict(py, &v)
}

#[pyfunction]
#[pyo3(signature = (a, b, c, z, max_order = 60, tol = 1e-12))]
fn lauricella_fd<'py>(
    py: Python<'py>,
    a: f64,
    b: Vec<f64>,
    c: f64,
    z: Vec<f64>,
    max_order: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = LauricellaSpec::new(a, b, c, z).map_err(err)?;
    let v = special::lauricella_fd(&spec, &series_params(max_order, tol)?).map_err(err)?;
    series_dict(py, &v)
}

/// Heckman–Opdam function at the degenerate spectral parameter, `x` on `Σx_j = 0`.
#[pyfunction]
#[pyo3(signature = (nu, kappa, x, max_order = 60, tol = 1e-12))]
fn degenerate_ho<'py>(
    py: Python<'py>,
    nu: f64,
    kappa: f64,
    x: Vec<f64>,
    max_order: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let v = special::degenerate_ho(nu, kappa, &x, &series_params(max_order, tol)?).map_err(err)?;
    series_dict(py, &v)
}

#[pyfunction]
fn identity_ids() -> Vec<&'static str> {
    verify::all_ids()
}

/// Run the identity suite; one dict per parameter point.
#[pyfunction]
#[pyo3(signature = (only = None, seed = 20_240_917, points = 20, q = 12, timing = false))]
fn run_suite<'py>(
    py: Python<'py>,
    only: Option<Vec<String>>,
    seed: u64,
    points: usize,
    q: usize,
    timing: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let ids: Vec<String> = only.unwrap_or_else(|| verify::all_ids().into_iter().map(String::from).collect());
    let config = VerifyConfig {
        seed,
        points,
        q,
        timing,
        ..VerifyConfig::default()
    };
    let reports = py
        .detach(|| verify::run_suite(&ids, &config))
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    reports
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("id", r.id)?;
            d.set_item("params", r.params.into_iter().collect::<BTreeMap<_, _>>())?;
            d.set_item("metric", r.metric)?;
            d.set_item("threshold", r.threshold)?;
            d.set_item("passed", r.passed)?;
            d.set_item("runtime_ms", r.runtime_ms)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn dunkl_sn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DunklError", m.py().get_type::<DunklError>())?;
    m.add_class::<PyMultiPoly>()?;
    m.add_class::<PySimplexRule>()?;
    m.add_function(wrap_pyfunction!(kernel, m)?)?;
    m.add_function(wrap_pyfunction!(bessel, m)?)?;
    m.add_function(wrap_pyfunction!(intertwine_monomial, m)?)?;
    m.add_function(wrap_pyfunction!(intertwine_single, m)?)?;
    m.add_function(wrap_pyfunction!(intertwine_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_moment, m)?)?;
    m.add_function(wrap_pyfunction!(humbert_phi2, m)?)?;
    m.add_function(wrap_pyfunction!(lauricella_fd, m)?)?;
    m.add_function(wrap_pyfunction!(degenerate_ho, m)?)?;
    m.add_function(wrap_pyfunction!(identity_ids, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
