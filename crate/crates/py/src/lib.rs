//! Python bindings: weights, radial test maps, the modulus and capacity formulas, the
//! distortion estimates and the suite runner.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ringmod_core::report::{self, Quantity, Suite, SuiteConfig};
use ringmod_core::{capacity, distortion, modulus, test_maps};
use ringmod_core::{Annulus, Error, ExponentP, PlanePoint, QuadratureSpec, RingCondenser};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Validation(_) | Error::Domain(_) | Error::InvalidField { .. } => PyValueError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn exponent(p: f64) -> PyResult<ExponentP> {
    ExponentP::new(p).map_err(to_py)
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// Positive weight `Q` on the plane.
#[pyclass(name = "QField", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyQField(ringmod_core::QField);

#[pymethods]
impl PyQField {
    #[staticmethod]
    fn constant(c: f64) -> PyResult<Self> {
        ringmod_core::QField::constant(c).map(Self).map_err(to_py)
    }

    /// The dilatation `K_p(f, ·)` of a radial map, on the unit disk.
    #[staticmethod]
    fn dilatation(map: &PyRadialMap, p: f64) -> PyResult<Self> {
        Ok(Self(test_maps::kp_field(&map.0, exponent(p)?)))
    }

    fn eval(&self, x: f64, y: f64) -> PyResult<f64> {
        self.0.eval(PlanePoint::new(x, y)).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// Radial homeomorphism `z ↦ ρ(|z|) z/|z|` of the unit disk.
#[pyclass(name = "RadialMap", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRadialMap(test_maps::RadialMap);

#[pymethods]
impl PyRadialMap {
    #[staticmethod]
    fn identity() -> Self {
        Self(test_maps::RadialMap::identity())
    }

    /// `z |z|^{α-1}`.
    #[staticmethod]
    fn power(alpha: f64) -> PyResult<Self> {
        test_maps::radial_power_map(alpha).map(Self).map_err(to_py)
    }

    fn scaled(&self, c: f64) -> PyResult<Self> {
        self.0.scaled(c).map(Self).map_err(to_py)
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    fn radius(&self, r: f64) -> f64 {
        self.0.radius(r)
    }

    fn image_disk_area(&self, r: f64) -> f64 {
        test_maps::image_disk_area(&self.0, r)
    }

    fn __repr__(&self) -> String {
        format!("RadialMap({})", self.0.label())
    }
}

/// `‖Q‖_{1/(p-1)}(r)` around `center`; returns `(value, error_bound)`.
#[pyfunction]
#[pyo3(signature = (q, p, r, center = (0.0, 0.0)))]
fn ring_norm(q: &PyQField, p: f64, r: f64, center: (f64, f64)) -> PyResult<(f64, f64)> {
    let e = modulus::ring_norm(&q.0, PlanePoint::new(center.0, center.1), r, exponent(p)?, &spec()).map_err(to_py)?;
    Ok((e.value, e.error_bound))
}

/// `∫_{r1}^{r2} dr/‖Q‖(r)`; returns `(value, error_bound, degeneracy)`.
#[pyfunction]
fn lower_modulus_bound(q: &PyQField, p: f64, r1: f64, r2: f64) -> PyResult<(f64, f64, String)> {
    let annulus = Annulus::centered(r1, r2).map_err(to_py)?;
    let b = modulus::lower_modulus_bound(&q.0, annulus, exponent(p)?, &spec()).map_err(to_py)?;
    Ok((b.value, b.error_bound, format!("{:?}", b.degeneracy).to_lowercase()))
}

#[pyfunction]
fn circle_family_modulus(p: f64, r1: f64, r2: f64) -> PyResult<f64> {
    Ok(modulus::circle_family_modulus(Annulus::centered(r1, r2).map_err(to_py)?, exponent(p)?))
}

#[pyfunction]
fn connecting_modulus_annulus(q: f64, r1: f64, r2: f64) -> PyResult<f64> {
    modulus::connecting_modulus_annulus(Annulus::centered(r1, r2).map_err(to_py)?, q).map_err(to_py)
}

fn measure_space(phi: Vec<f64>, weights: Vec<f64>) -> PyResult<modulus::DiscreteMeasureSpace> {
    let points = (0..phi.len()).map(|i| i as f64).collect();
    modulus::DiscreteMeasureSpace::new(points, weights, phi).map_err(to_py)
}

/// Closed-form `inf Σ φ α^q μ` over `α ≥ 0, Σ α μ = 1`; returns `(value, alpha0)`.
#[pyfunction]
fn weighted_infimum_closed(phi: Vec<f64>, weights: Vec<f64>, q: f64) -> PyResult<(f64, Vec<f64>)> {
    let s = modulus::weighted_infimum_closed(&measure_space(phi, weights)?, q).map_err(to_py)?;
    Ok((s.value, s.alpha0))
}

#[pyfunction]
#[pyo3(signature = (phi, weights, q, iters = 100_000, tol = 1e-10))]
fn weighted_infimum_numeric(phi: Vec<f64>, weights: Vec<f64>, q: f64, iters: usize, tol: f64) -> PyResult<f64> {
    modulus::weighted_infimum_numeric(&measure_space(phi, weights)?, q, iters, tol).map_err(to_py)
}

#[pyfunction]
fn annulus_capacity(q: f64, r1: f64, r2: f64) -> PyResult<f64> {
    let cond = RingCondenser::new(PlanePoint::ORIGIN, r1, r2).map_err(to_py)?;
    capacity::annulus_capacity(&cond, q).map_err(to_py)
}

/// Capacity check rows for the condenser `(B(0, r2), closed B(0, r1))` as
/// `(check, params, lhs, rhs, margin, status)` tuples.
#[pyfunction]
fn check_capacity_bounds(r1: f64, r2: f64, p_list: Vec<f64>) -> PyResult<Vec<(String, String, f64, f64, f64, String)>> {
    let cond = RingCondenser::new(PlanePoint::ORIGIN, r1, r2).map_err(to_py)?;
    let report = capacity::check_capacity_bounds(&cond, &p_list).map_err(to_py)?;
    Ok(report
        .entries
        .into_iter()
        .map(|c| (c.name, c.params, c.lhs, c.rhs, c.margin, c.status.to_string()))
        .collect())
}

/// Upper bound for the area of the image of `B(0, r)`; returns `(value, error_bound)`.
#[pyfunction]
fn area_bound(q: &PyQField, p: f64, r: f64) -> PyResult<(f64, f64)> {
    let params = distortion::AreaBoundParams { p: exponent(p)?, field: q.0.clone(), r };
    let b = distortion::area_bound(&params, &spec()).map_err(to_py)?;
    Ok((b.value, b.error_bound))
}

#[pyfunction]
fn point_radius_r(q: &PyQField, p: f64, r: f64) -> PyResult<f64> {
    Ok(distortion::point_radius_r(exponent(p)?, &q.0, r, &spec()).map_err(to_py)?.value)
}

/// Tail minimum of `|f|/R` on the default shrinking grid.
#[pyfunction]
fn liminf_ratio(map: &PyRadialMap, q: &PyQField, p: f64) -> PyResult<f64> {
    let grid = distortion::default_shrinking_grid();
    let res = distortion::liminf_scan(&map.0, exponent(p)?, &q.0, &grid, &spec()).map_err(to_py)?;
    Ok(res.liminf_estimate)
}

/// One-shot quantity as on the command line, e.g. `compute("annulus_capacity", q=2, r1=0.5, r2=1)`.
#[pyfunction]
#[pyo3(signature = (quantity, **params))]
fn compute(quantity: &str, params: Option<std::collections::HashMap<String, f64>>) -> PyResult<(f64, f64)> {
    let q = Quantity::parse(quantity).map_err(to_py)?;
    let mut args: Vec<String> = params.unwrap_or_default().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
    args.sort();
    let out = report::compute(q, &args, &spec()).map_err(to_py)?;
    Ok((out.value, out.error_bound))
}

/// Runs a suite from a JSON configuration (same keys as `config.json`) without writing
/// files; returns `(rows, exit_code)` with rows as
/// `(suite, check, params, lhs, rhs, margin, status)` tuples.
#[pyfunction]
#[pyo3(signature = (suite, config_json = None))]
#[allow(clippy::type_complexity)]
fn run_checks(suite: &str, config_json: Option<&str>) -> PyResult<(Vec<(String, String, String, f64, f64, f64, String)>, i32)> {
    let mut cfg = match config_json {
        Some(text) => SuiteConfig::from_json(text).map_err(to_py)?,
        None => SuiteConfig::default(),
    };
    cfg.suite = Suite::parse(suite).map_err(to_py)?;
    let rows = report::run_checks(&cfg).map_err(to_py)?;
    let code = report::exit_code_for(&rows);
    let rows = rows
        .into_iter()
        .map(|r| (r.suite, r.check, r.params, r.lhs, r.rhs, r.margin, r.status.to_string()))
        .collect();
    Ok((rows, code))
}

#[pymodule]
fn ringmod(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQField>()?;
    m.add_class::<PyRadialMap>()?;
    m.add_function(wrap_pyfunction!(ring_norm, m)?)?;
    m.add_function(wrap_pyfunction!(lower_modulus_bound, m)?)?;
    m.add_function(wrap_pyfunction!(circle_family_modulus, m)?)?;
    m.add_function(wrap_pyfunction!(connecting_modulus_annulus, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_infimum_closed, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_infimum_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(annulus_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(check_capacity_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(area_bound, m)?)?;
    m.add_function(wrap_pyfunction!(point_radius_r, m)?)?;
    m.add_function(wrap_pyfunction!(liminf_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(compute, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
