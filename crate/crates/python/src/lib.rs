//! Python bindings: expressions, jets, quadrature and the theorem checks.
//!
//! Reports come back as plain dicts with the same keys as the JSON form;
//! complex metrics are Python `complex` values.

use std::path::PathBuf;

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use structhol::area::{area_integral, RegionSpec};
use structhol::contour::{line_integral, winding_number, ContourSpec};
use structhol::report::Metric;
use structhol::theorems::{self as th, SamplePoints};
use structhol::{CheckReport, Complex, Error};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Parse(_)
        | Error::InvalidSpec(_)
        | Error::Placement { .. }
        | Error::PointOnContour { .. } => PyValueError::new_err(e.to_string()),
        other => PyArithmeticError::new_err(other.to_string()),
    }
}

/// Parsed expression in `z` and `conj(z)`.
#[pyclass(name = "Expr", module = "structhol", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyExpr {
    inner: structhol::Expr,
}

#[pymethods]
impl PyExpr {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        structhol::parse(text)
            .map(|inner| PyExpr { inner })
            .map_err(|e| to_py_err(e.into()))
    }

    fn format(&self) -> String {
        self.inner.format()
    }

    fn is_conj_free(&self) -> bool {
        self.inner.is_conj_free()
    }

    fn eval(&self, z: Complex) -> PyResult<Complex> {
        self.inner.eval(z).map_err(|e| to_py_err(e.into()))
    }

    /// `(value, ∂/∂z, ∂/∂z̄)` at `z`.
    fn eval_jet(&self, z: Complex) -> PyResult<(Complex, Complex, Complex)> {
        let j = self.inner.eval_jet(z).map_err(|e| to_py_err(e.into()))?;
        Ok((j.value, j.dz, j.dzbar))
    }

    fn __str__(&self) -> String {
        self.inner.format()
    }

    fn __repr__(&self) -> String {
        format!("Expr('{}')", self.inner.format())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Accepts either an `Expr` or expression text.
fn expr(obj: &Bound<'_, PyAny>) -> PyResult<structhol::Expr> {
    if let Ok(e) = obj.cast::<PyExpr>() {
        return Ok(e.get().inner.clone());
    }
    let text: String = obj.extract()?;
    structhol::parse(&text).map_err(|e| to_py_err(e.into()))
}

fn parse_region(text: &str, res: Option<(usize, usize)>) -> PyResult<RegionSpec> {
    RegionSpec::parse(text, res).map_err(to_py_err)
}

fn parse_contour(text: &str) -> PyResult<ContourSpec> {
    ContourSpec::parse(text).map_err(to_py_err)
}

fn sample_grid(text: &str, res: usize) -> PyResult<SamplePoints> {
    Ok(parse_region(text, Some((res, res)))?.into())
}

fn report_dict<'py>(py: Python<'py>, r: &CheckReport) -> PyResult<Bound<'py, PyDict>> {
    let inputs = PyDict::new(py);
    for (k, v) in &r.inputs {
        inputs.set_item(k, v)?;
    }
    let metrics = PyDict::new(py);
    for (k, v) in &r.metrics {
        match v {
            Metric::Real(x) => metrics.set_item(k, *x)?,
            Metric::Complex(z) => metrics.set_item(k, *z)?,
        }
    }
    let d = PyDict::new(py);
    d.set_item("check", &r.check)?;
    d.set_item("inputs", inputs)?;
    d.set_item("metrics", metrics)?;
    d.set_item("tolerance", r.tolerance)?;
    d.set_item("pass", r.pass)?;
    d.set_item("n_points", r.n_points)?;
    d.set_item("n_skipped", r.n_skipped)?;
    Ok(d)
}

fn checked<'py>(
    py: Python<'py>,
    r: structhol::Result<CheckReport>,
) -> PyResult<Bound<'py, PyDict>> {
    report_dict(py, &r.map_err(to_py_err)?)
}

fn parse_variant(text: &str) -> PyResult<th::StructuralVariant> {
    text.parse().map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (w, k, grid = "rect:-1,-1,1,1", res = 32, variant = "reduced", tol = th::JET_TOLERANCE))]
fn structural_residual<'py>(
    py: Python<'py>,
    w: &Bound<'py, PyAny>,
    k: &Bound<'py, PyAny>,
    grid: &str,
    res: usize,
    variant: &str,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = th::structural_residual(
        &expr(w)?,
        &expr(k)?,
        &sample_grid(grid, res)?,
        parse_variant(variant)?,
        tol,
    );
    checked(py, r)
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (w, a = "0", b = "0", phi = "0", grid = "rect:-1,-1,1,1", res = 32, tol = th::JET_TOLERANCE))]
fn cbv_residual<'py>(
    py: Python<'py>,
    w: &Bound<'py, PyAny>,
    a: &str,
    b: &str,
    phi: &str,
    grid: &str,
    res: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let parse = |s: &str| structhol::parse(s).map_err(|e| to_py_err(e.into()));
    let r = th::cbv_residual(
        &expr(w)?,
        &parse(a)?,
        &parse(b)?,
        &parse(phi)?,
        &sample_grid(grid, res)?,
        tol,
    );
    checked(py, r)
}

#[pyfunction]
#[pyo3(signature = (f, region = "disc:0,0,1", res = None, n = 256, tol = th::GREEN_TOLERANCE))]
fn green_identity<'py>(
    py: Python<'py>,
    f: &Bound<'py, PyAny>,
    region: &str,
    res: Option<(usize, usize)>,
    n: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    checked(
        py,
        th::green_identity_check(&expr(f)?, &parse_region(region, res)?, n, tol),
    )
}

#[pyfunction]
#[pyo3(signature = (w, k = None, contour = "circle:0,0,1", transform = "none", n = 256, tol = th::QUADRATURE_TOLERANCE))]
fn generalized_cauchy<'py>(
    py: Python<'py>,
    w: &Bound<'py, PyAny>,
    k: Option<&Bound<'py, PyAny>>,
    contour: &str,
    transform: &str,
    n: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let k = match k {
        Some(k) => expr(k)?,
        None => structhol::Expr::real(0.0),
    };
    let transform: th::TransformKind = transform.parse().map_err(to_py_err)?;
    checked(
        py,
        th::generalized_cauchy_check(&expr(w)?, &k, &parse_contour(contour)?, transform, n, tol),
    )
}

#[pyfunction]
#[pyo3(signature = (w, z, center = Complex::new(0.0, 0.0), radius = 1.0, k = 0, n = 256))]
fn cauchy_eval(
    w: &Bound<'_, PyAny>,
    z: Complex,
    center: Complex,
    radius: f64,
    k: u32,
    n: usize,
) -> PyResult<Complex> {
    th::cauchy_eval(&expr(w)?, center, radius, z, k, n).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (w, radius = 1.0, k_max = 8, n = 256))]
fn taylor_coefficients(
    w: &Bound<'_, PyAny>,
    radius: f64,
    k_max: u32,
    n: usize,
) -> PyResult<Vec<Complex>> {
    th::taylor_coefficients(&expr(w)?, radius, k_max, n).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (w, a = Complex::new(0.0, 0.0), radius = 1.0, n_max = 5, n = 256, tol = th::ESTIMATE_SLACK))]
fn cauchy_estimate<'py>(
    py: Python<'py>,
    w: &Bound<'py, PyAny>,
    a: Complex,
    radius: f64,
    n_max: u32,
    n: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    checked(
        py,
        th::cauchy_estimate_check(&expr(w)?, a, radius, n_max, n, tol),
    )
}

#[pyfunction]
#[pyo3(signature = (w, zeta, region = "disc:0,0,1", res = None, n = 256, tol = th::POMPEIU_TOLERANCE))]
fn pompeiu<'py>(
    py: Python<'py>,
    w: &Bound<'py, PyAny>,
    zeta: Complex,
    region: &str,
    res: Option<(usize, usize)>,
    n: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    checked(
        py,
        th::pompeiu_check(&expr(w)?, &parse_region(region, res)?, zeta, n, tol),
    )
}

#[pyfunction]
#[pyo3(signature = (w, region = "disc:0,0,1", probes = 16, probe_radius = 0.05, tol = th::QUADRATURE_TOLERANCE))]
fn morera<'py>(
    py: Python<'py>,
    w: &Bound<'py, PyAny>,
    region: &str,
    probes: usize,
    probe_radius: f64,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    checked(
        py,
        th::morera_classify(
            &expr(w)?,
            &parse_region(region, None)?,
            probes,
            probe_radius,
            tol,
        ),
    )
}

/// `phi · exp(−K)`
#[pyfunction]
fn build_structural_solution(phi: &Bound<'_, PyAny>, k: &Bound<'_, PyAny>) -> PyResult<PyExpr> {
    Ok(PyExpr {
        inner: th::build_structural_solution(&expr(phi)?, &expr(k)?),
    })
}

/// `(phi_hat, deviation, report)`
#[pyfunction]
#[pyo3(signature = (w, k, grid = "rect:-1,-1,1,1", res = 32, tol = th::JET_TOLERANCE))]
fn recover_phi<'py>(
    py: Python<'py>,
    w: &Bound<'py, PyAny>,
    k: &Bound<'py, PyAny>,
    grid: &str,
    res: usize,
    tol: f64,
) -> PyResult<(Complex, f64, Bound<'py, PyDict>)> {
    let r =
        th::recover_phi(&expr(w)?, &expr(k)?, &sample_grid(grid, res)?, tol).map_err(to_py_err)?;
    Ok((r.phi_hat, r.deviation, report_dict(py, &r.report)?))
}

#[pyfunction]
#[pyo3(signature = (w, k, grid = "rect:-1,-1,1,1", res = 32, tol = th::JET_TOLERANCE))]
fn modulus_law<'py>(
    py: Python<'py>,
    w: &Bound<'py, PyAny>,
    k: &Bound<'py, PyAny>,
    grid: &str,
    res: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    checked(
        py,
        th::modulus_law_check(&expr(w)?, &expr(k)?, &sample_grid(grid, res)?, tol),
    )
}

/// `(argmax, max_value, location)` with location one of boundary, interior, tie.
#[pyfunction]
#[pyo3(signature = (w, region = "disc:0,0,1", res = (256, 256)))]
fn max_modulus(
    w: &Bound<'_, PyAny>,
    region: &str,
    res: (usize, usize),
) -> PyResult<(Complex, f64, String)> {
    let m =
        th::max_modulus_scan(&expr(w)?, &parse_region(region, Some(res))?).map_err(to_py_err)?;
    Ok((m.argmax, m.max_value, m.location.to_string()))
}

#[pyfunction]
#[pyo3(signature = (f, contour = "circle:0,0,1", n = 256))]
fn contour_integral(f: &Bound<'_, PyAny>, contour: &str, n: usize) -> PyResult<Complex> {
    line_integral(&expr(f)?, &parse_contour(contour)?, n).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (f, region = "disc:0,0,1", res = None))]
fn region_integral(
    f: &Bound<'_, PyAny>,
    region: &str,
    res: Option<(usize, usize)>,
) -> PyResult<Complex> {
    area_integral(&expr(f)?, &parse_region(region, res)?)
        .map(|a| a.value)
        .map_err(to_py_err)
}

#[pyfunction]
fn winding(contour: &str, z: Complex) -> PyResult<i64> {
    winding_number(&parse_contour(contour)?, z)
        .map(|w| w.number)
        .map_err(to_py_err)
}

/// Writes a PPM and returns the number of black (non-evaluable) pixels.
#[pyfunction]
#[pyo3(signature = (f, out, window = (-2.0, -2.0, 2.0, 2.0), size = (256, 256)))]
fn render(
    f: &Bound<'_, PyAny>,
    out: PathBuf,
    window: (f64, f64, f64, f64),
    size: (usize, usize),
) -> PyResult<usize> {
    let window = structhol::render::Window::new(window.0, window.1, window.2, window.3);
    let image = structhol::render::render_domain_coloring(&expr(f)?, window, size.0, size.1, &out)
        .map_err(to_py_err)?;
    Ok(image.pixels.iter().filter(|p| **p == [0, 0, 0]).count())
}

/// Runs the command-line front end in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("structhol".to_string()).chain(args);
    let code = structhol::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

#[pymodule]
#[pyo3(name = "structhol")]
fn structhol_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyExpr>()?;
    m.add_function(wrap_pyfunction!(structural_residual, m)?)?;
    m.add_function(wrap_pyfunction!(cbv_residual, m)?)?;
    m.add_function(wrap_pyfunction!(green_identity, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_cauchy, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_eval, m)?)?;
    m.add_function(wrap_pyfunction!(taylor_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(pompeiu, m)?)?;
    m.add_function(wrap_pyfunction!(morera, m)?)?;
    m.add_function(wrap_pyfunction!(build_structural_solution, m)?)?;
    m.add_function(wrap_pyfunction!(recover_phi, m)?)?;
    m.add_function(wrap_pyfunction!(modulus_law, m)?)?;
    m.add_function(wrap_pyfunction!(max_modulus, m)?)?;
    m.add_function(wrap_pyfunction!(contour_integral, m)?)?;
    m.add_function(wrap_pyfunction!(region_integral, m)?)?;
    m.add_function(wrap_pyfunction!(winding, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
