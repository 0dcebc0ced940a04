//! Python bindings: domains, closed forms, the extremal solver, valence
//! counts and the property suite.

use ahlfors_core::harness::{self, CheckReport};
use ahlfors_core::{
    self as core, AhlforsClosedForm, AhlforsSolution, AnalyticFunction, BasePoint, BasisSpec,
    Circle, Complex64, Error, QuadratureSpec, SolverConfig,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyString;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. }
        | Error::Resolution { .. }
        | Error::NumericalInstability(_)
        | Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn geometry(e: core::GeometryError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// `None` or `"inf"` is the point at infinity; anything else must convert to
/// a complex number.
fn base_point(p: Option<&Bound<'_, PyAny>>) -> PyResult<BasePoint> {
    match p {
        None => Ok(BasePoint::Infinity),
        Some(obj) if obj.is_instance_of::<PyString>() => {
            let s: String = obj.extract()?;
            s.parse().map_err(geometry)
        }
        Some(obj) => Ok(BasePoint::Finite(obj.extract::<Complex64>()?)),
    }
}

#[pyclass(name = "Domain", module = "ahlfors", frozen)]
struct PyDomain {
    inner: core::Domain,
}

#[pymethods]
impl PyDomain {
    #[staticmethod]
    fn unit_disk() -> Self {
        Self {
            inner: core::Domain::UnitDisk,
        }
    }

    #[staticmethod]
    fn exterior_unit_disk() -> Self {
        Self {
            inner: core::Domain::ExteriorUnitDisk,
        }
    }

    /// `outer` and each hole are `(center, radius)` pairs.
    #[staticmethod]
    #[pyo3(signature = (outer, holes = Vec::new()))]
    fn circle_domain(outer: (Complex64, f64), holes: Vec<(Complex64, f64)>) -> PyResult<Self> {
        let holes = holes.into_iter().map(|(c, r)| Circle::new(c, r)).collect();
        let inner =
            core::Domain::circle_domain(Circle::new(outer.0, outer.1), holes).map_err(geometry)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn real_slit(intervals: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(Self {
            inner: core::Domain::real_slit(intervals).map_err(geometry)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: text.parse().map_err(geometry)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&core::DomainSpec::from(&self.inner))
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn contains(&self, z: Complex64) -> bool {
        self.inner.contains(z)
    }

    fn component_count(&self) -> usize {
        self.inner.component_count()
    }

    fn __repr__(&self) -> String {
        format!("Domain({:?})", self.inner)
    }
}

#[pyclass(name = "ClosedForm", module = "ahlfors", frozen)]
struct PyClosedForm {
    inner: AhlforsClosedForm,
}

#[pymethods]
impl PyClosedForm {
    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    /// `(a, b, c, d)` of `(a z + b)/(c z + d)`, or `None` for slit maps.
    #[getter]
    fn moebius_coefficients(&self) -> Option<[Complex64; 4]> {
        self.inner.moebius().map(|t| t.coefficients())
    }

    fn __call__(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.try_eval(z).map_err(to_py)
    }

    fn derivative(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.try_derivative(z).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("ClosedForm(gamma={})", self.inner.gamma)
    }
}

#[pyclass(name = "Solution", module = "ahlfors", frozen)]
struct PySolution {
    inner: AhlforsSolution,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[getter]
    fn coefficients(&self) -> Vec<Complex64> {
        self.inner.coefficients.clone()
    }

    #[getter]
    fn basis(&self) -> Vec<String> {
        self.inner
            .basis
            .terms
            .iter()
            .map(|t| t.to_string())
            .collect()
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.diagnostics.iterations
    }

    #[getter]
    fn max_boundary_modulus(&self) -> f64 {
        self.inner.diagnostics.max_boundary_modulus
    }

    fn value_at_base_point(&self) -> f64 {
        self.inner.value_at_base_point()
    }

    fn __call__(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.evaluate(z).map_err(to_py)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.inner.derivative(z)
    }

    /// `(component, parameter, |F|)` at `n` points per boundary component.
    fn boundary_modulus_profile(&self, n: usize) -> PyResult<Vec<(usize, f64, f64)>> {
        self.inner.boundary_modulus_profile(n).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(gamma={}, terms={})",
            self.inner.gamma,
            self.inner.coefficients.len()
        )
    }
}

#[pyclass(name = "Report", module = "ahlfors", frozen)]
struct PyReport {
    inner: CheckReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn check_name(&self) -> &str {
        &self.inner.check_name
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed
    }

    #[getter]
    fn measured(&self) -> f64 {
        self.inner.measured
    }

    #[getter]
    fn threshold(&self) -> f64 {
        self.inner.threshold
    }

    #[getter]
    fn witness(&self) -> Option<Complex64> {
        self.inner.witness
    }

    fn to_json(&self) -> String {
        self.inner.to_json_line()
    }

    fn __repr__(&self) -> String {
        self.inner.to_string()
    }
}

#[derive(FromPyObject)]
enum AnyFunction<'py> {
    Closed(PyRef<'py, PyClosedForm>),
    Solved(PyRef<'py, PySolution>),
}

impl AnyFunction<'_> {
    fn function(&self) -> &dyn AnalyticFunction {
        match self {
            AnyFunction::Closed(f) => &f.inner,
            AnyFunction::Solved(s) => &s.inner,
        }
    }
}

#[pyfunction]
fn ahlfors_disk(p: Complex64) -> PyResult<PyClosedForm> {
    Ok(PyClosedForm {
        inner: core::ahlfors_disk(p).map_err(to_py)?,
    })
}

#[pyfunction]
#[pyo3(signature = (p = None))]
fn ahlfors_exterior_disk(p: Option<&Bound<'_, PyAny>>) -> PyResult<PyClosedForm> {
    let inner = AhlforsClosedForm::for_domain(&core::Domain::ExteriorUnitDisk, &base_point(p)?)
        .map_err(to_py)?;
    Ok(PyClosedForm { inner })
}

#[pyfunction]
#[pyo3(signature = (intervals, nodes_per_interval = 20))]
fn ahlfors_real_slit(
    intervals: Vec<(f64, f64)>,
    nodes_per_interval: usize,
) -> PyResult<PyClosedForm> {
    let set = core::RealSlitSet::new(intervals).map_err(geometry)?;
    let quadrature = QuadratureSpec::new(nodes_per_interval).map_err(to_py)?;
    Ok(PyClosedForm {
        inner: core::ahlfors_real_slit(&set, quadrature).map_err(to_py)?,
    })
}

/// Analytic capacity of a union of real intervals, read off the contour
/// integral of the slit map at infinity.
#[pyfunction]
fn slit_capacity(intervals: Vec<(f64, f64)>) -> PyResult<f64> {
    let domain = core::Domain::real_slit(intervals).map_err(geometry)?;
    let f = AhlforsClosedForm::for_domain(&domain, &BasePoint::Infinity).map_err(to_py)?;
    let (center, radius) = core::closed_form::infinity_contour(&domain)
        .ok_or_else(|| PyValueError::new_err("no contour at infinity"))?;
    Ok(core::derivative_at_infinity(&f, center, radius)
        .map_err(to_py)?
        .norm())
}

#[pyfunction]
#[pyo3(signature = (domain, p = None, degree = None, samples = 512, angle_cuts = 16, tolerance = 1e-6))]
fn solve_extremal(
    domain: &PyDomain,
    p: Option<&Bound<'_, PyAny>>,
    degree: Option<usize>,
    samples: usize,
    angle_cuts: usize,
    tolerance: f64,
) -> PyResult<PySolution> {
    let spec = degree.map_or_else(|| BasisSpec::default_for(&domain.inner), BasisSpec::new);
    let cfg = SolverConfig {
        boundary_samples_per_component: samples,
        angle_cuts,
        constraint_tolerance: tolerance,
        ..SolverConfig::default()
    };
    let inner = core::solve_extremal(&domain.inner, base_point(p)?, &spec, &cfg).map_err(to_py)?;
    Ok(PySolution { inner })
}

/// Number of solutions of `F(z) = w` in the domain.
#[pyfunction]
#[pyo3(signature = (f, domain, w, n = 2048))]
fn valence(f: AnyFunction<'_>, domain: &PyDomain, w: Complex64, n: usize) -> PyResult<i64> {
    Ok(core::valence(f.function(), &domain.inner, w, n)
        .map_err(to_py)?
        .count)
}

#[pyfunction]
#[pyo3(signature = (domain, p = None))]
fn run_suite(domain: &PyDomain, p: Option<&Bound<'_, PyAny>>) -> PyResult<Vec<PyReport>> {
    let reports = harness::run_suite(&domain.inner, &base_point(p)?, &SolverConfig::default());
    Ok(reports
        .into_iter()
        .map(|inner| PyReport { inner })
        .collect())
}

#[pymodule]
fn ahlfors(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDomain>()?;
    m.add_class::<PyClosedForm>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(ahlfors_disk, m)?)?;
    m.add_function(wrap_pyfunction!(ahlfors_exterior_disk, m)?)?;
    m.add_function(wrap_pyfunction!(ahlfors_real_slit, m)?)?;
    m.add_function(wrap_pyfunction!(slit_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(solve_extremal, m)?)?;
    m.add_function(wrap_pyfunction!(valence, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
