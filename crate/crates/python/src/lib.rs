//! Python bindings: `import orbiroot`.
//!
//! Rationals cross the boundary as `fractions.Fraction`. Bundles are built
//! from lists of `(d, weights)` or `(d, residues)` pairs; weights are given
//! as `"a/b"` strings or `Fraction`s.

use num_rational::Rational64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use orbiroot_core::correspondence;
use orbiroot_core::inertia_rr::{self, DEFAULT_TOL};
use orbiroot_core::local_model::{self, GradedModule, Poly};
use orbiroot_core::moduli;
use orbiroot_core::parabolic;
use orbiroot_core::rational;
use orbiroot_core::root_stack;
use orbiroot_core::{
    Error, LineObject, OrbiConfig, ParBundle as CoreParBundle, ParLine, StackBundle as CoreStackBundle,
};

fn err(e: Error) -> PyErr {
    if e.is_verification_failure() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn fraction(py: Python<'_>, x: Rational64) -> PyResult<Py<PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    Ok(cls.call1((*x.numer(), *x.denom()))?.unbind())
}

fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational64> {
    if let Ok(s) = obj.extract::<String>() {
        return rational::parse(&s).map_err(err);
    }
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(Rational64::from_integer(n));
    }
    let n: i64 = obj.getattr("numerator")?.extract()?;
    let d: i64 = obj.getattr("denominator")?.extract()?;
    Ok(Rational64::new(n, d))
}

/// A marked curve of genus `genus` with `num_points` points and root index
/// `root_index`.
#[pyclass(name = "OrbiConfig", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: OrbiConfig,
}

#[pymethods]
impl PyConfig {
    #[new]
    #[pyo3(signature = (genus, num_points, root_index, polarization_degree=1))]
    fn new(genus: u32, num_points: usize, root_index: u32, polarization_degree: u32) -> PyResult<Self> {
        let inner = OrbiConfig::new(genus, num_points, root_index)
            .and_then(|c| c.with_polarization_degree(polarization_degree))
            .map_err(err)?;
        Ok(PyConfig { inner })
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.inner.genus()
    }

    #[getter]
    fn num_points(&self) -> usize {
        self.inner.num_points()
    }

    #[getter]
    fn root_index(&self) -> u32 {
        self.inner.root_index()
    }

    /// All degree-0 line objects as `(d, residues)` pairs.
    fn finite_lines(&self) -> Vec<(i64, Vec<u32>)> {
        moduli::enumerate_finite_lines(&self.inner)
            .into_iter()
            .map(|k| (k.d, k.res))
            .collect()
    }

    /// `(count, min_d, max_d)` after checking `-m < d ≤ 0` on every finite
    /// line object.
    fn verify_structure_theorem(&self) -> PyResult<(usize, i64, i64)> {
        let rep = moduli::verify_structure_theorem(&self.inner).map_err(err)?;
        Ok((rep.count, rep.min_degree, rep.max_degree))
    }

    fn __repr__(&self) -> String {
        format!(
            "OrbiConfig(genus={}, num_points={}, root_index={})",
            self.inner.genus(),
            self.inner.num_points(),
            self.inner.root_index()
        )
    }
}

/// Split parabolic bundle.
#[pyclass(name = "ParBundle", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyParBundle {
    cfg: OrbiConfig,
    inner: CoreParBundle,
}

#[pymethods]
impl PyParBundle {
    #[new]
    fn new(cfg: &PyConfig, summands: Vec<(i64, Vec<Bound<'_, PyAny>>)>) -> PyResult<Self> {
        let lines = summands
            .into_iter()
            .map(|(d, ws)| {
                let weights = ws.iter().map(to_rational).collect::<PyResult<Vec<_>>>()?;
                ParLine::new(&cfg.inner, d, weights).map_err(err)
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyParBundle {
            cfg: cfg.inner.clone(),
            inner: CoreParBundle::new(lines),
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn summands(&self, py: Python<'_>) -> PyResult<Vec<(i64, Vec<Py<PyAny>>)>> {
        self.inner
            .summands()
            .iter()
            .map(|l| {
                Ok((
                    l.d,
                    l.weights.iter().map(|&w| fraction(py, w)).collect::<PyResult<_>>()?,
                ))
            })
            .collect()
    }

    fn deg_par(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        fraction(py, parabolic::deg_par(&self.inner))
    }

    fn deg_par_hilbert(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        fraction(py, parabolic::deg_par_hilbert(&self.cfg, &self.inner).map_err(err)?)
    }

    fn chi_par(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        fraction(py, parabolic::chi_par(&self.cfg, &self.inner))
    }

    /// `(parabolic, pushforward, inertia)` Euler characteristics.
    #[pyo3(signature = (tol=DEFAULT_TOL))]
    fn chi_three_way(&self, py: Python<'_>, tol: f64) -> PyResult<(Py<PyAny>, Py<PyAny>, Py<PyAny>)> {
        let t = inertia_rr::chi_par_three_way(&self.cfg, &self.inner, tol).map_err(err)?;
        Ok((
            fraction(py, t.parabolic)?,
            fraction(py, t.pushforward)?,
            fraction(py, t.inertia)?,
        ))
    }

    fn tensor(&self, other: &PyParBundle) -> PyResult<PyParBundle> {
        let inner = parabolic::tensor_par(&self.cfg, &self.inner, &other.inner).map_err(err)?;
        Ok(PyParBundle {
            cfg: self.cfg.clone(),
            inner,
        })
    }

    fn dual(&self) -> PyParBundle {
        PyParBundle {
            cfg: self.cfg.clone(),
            inner: parabolic::dual_par_bundle(&self.inner),
        }
    }

    fn to_stack(&self) -> PyResult<PyStackBundle> {
        let inner = correspondence::to_stack(&self.cfg, &self.inner).map_err(err)?;
        Ok(PyStackBundle {
            cfg: self.cfg.clone(),
            inner,
        })
    }

    fn degree_theorem_holds(&self) -> PyResult<bool> {
        inertia_rr::deg_theorem_check(&self.cfg, &self.inner).map_err(err)
    }

    fn __eq__(&self, other: &PyParBundle) -> bool {
        self.cfg == other.cfg && self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("ParBundle({})", self.inner)
    }
}

/// Split bundle on the root stack.
#[pyclass(name = "StackBundle", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyStackBundle {
    cfg: OrbiConfig,
    inner: CoreStackBundle,
}

#[pymethods]
impl PyStackBundle {
    #[new]
    fn new(cfg: &PyConfig, summands: Vec<(i64, Vec<u32>)>) -> PyResult<Self> {
        let lines = summands
            .into_iter()
            .map(|(d, res)| LineObject::new(&cfg.inner, d, res).map_err(err))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyStackBundle {
            cfg: cfg.inner.clone(),
            inner: CoreStackBundle::new(lines),
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn summands(&self) -> Vec<(i64, Vec<u32>)> {
        self.inner.summands().iter().map(|k| (k.d, k.res.clone())).collect()
    }

    fn deg_stack(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        fraction(py, root_stack::deg_stack_bundle(&self.cfg, &self.inner))
    }

    fn chi(&self) -> i64 {
        root_stack::chi_stack_bundle(&self.cfg, &self.inner)
    }

    #[pyo3(signature = (tol=DEFAULT_TOL))]
    fn chi_inertia(&self, py: Python<'_>, tol: f64) -> PyResult<Py<PyAny>> {
        fraction(py, inertia_rr::chi_inertia(&self.cfg, &self.inner, tol).map_err(err)?)
    }

    fn tensor(&self, other: &PyStackBundle) -> PyResult<PyStackBundle> {
        let inner = root_stack::tensor_stack_bundle(&self.cfg, &self.inner, &other.inner).map_err(err)?;
        Ok(PyStackBundle {
            cfg: self.cfg.clone(),
            inner,
        })
    }

    fn to_parabolic(&self) -> PyResult<PyParBundle> {
        let inner = correspondence::to_parabolic(&self.cfg, &self.inner).map_err(err)?;
        Ok(PyParBundle {
            cfg: self.cfg.clone(),
            inner,
        })
    }

    fn slope(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        fraction(py, moduli::slope(&self.cfg, &self.inner).map_err(err)?)
    }

    fn is_semistable(&self) -> PyResult<bool> {
        moduli::is_semistable(&self.cfg, &self.inner).map_err(err)
    }

    fn is_finite(&self) -> PyResult<bool> {
        moduli::is_finite(&self.cfg, &self.inner).map_err(err)
    }

    /// `(P, Q)` coefficient lists with `P(F) ≅ Q(F)`, or `None`.
    fn witness(&self, bound: i64) -> PyResult<Option<(Vec<String>, Vec<String>)>> {
        let w = moduli::witness_polynomials(&self.cfg, &self.inner, bound).map_err(err)?;
        Ok(w.map(|w| {
            (
                w.p.iter().map(|c| c.to_string()).collect(),
                w.q.iter().map(|c| c.to_string()).collect(),
            )
        }))
    }

    fn __eq__(&self, other: &PyStackBundle) -> bool {
        self.cfg == other.cfg && self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("StackBundle({})", self.inner)
    }
}

/// Shifts `{j: n_j}` of the graded module with the given ambient degrees and
/// matrix of polynomial strings in `t`.
#[pyfunction]
#[pyo3(signature = (r, ambient_degrees, matrix, precision=None))]
fn decompose_shifts(
    r: u32,
    ambient_degrees: Vec<u32>,
    matrix: Vec<Vec<String>>,
    precision: Option<usize>,
) -> PyResult<Vec<(u32, usize)>> {
    let rows = matrix
        .iter()
        .map(|row| row.iter().map(|s| Poly::parse(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let m = GradedModule::new(r, precision.unwrap_or(4 * r as usize), ambient_degrees, rows).map_err(err)?;
    Ok(local_model::decompose_shifts(&m).map_err(err)?.into_iter().collect())
}

/// Runs the randomised cross-checks; returns `(name, cases, failures)`.
#[pyfunction]
#[pyo3(signature = (samples=100, seed=0))]
fn selftest(samples: usize, seed: u64) -> PyResult<Vec<(String, usize, usize)>> {
    let report = orbiroot_core::selftest::run(samples, seed, DEFAULT_TOL).map_err(err)?;
    Ok(report
        .checks
        .into_iter()
        .map(|c| (c.name.to_string(), c.cases, c.failures))
        .collect())
}

#[pymodule]
fn orbiroot(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfig>()?;
    m.add_class::<PyParBundle>()?;
    m.add_class::<PyStackBundle>()?;
    m.add_function(wrap_pyfunction!(decompose_shifts, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
