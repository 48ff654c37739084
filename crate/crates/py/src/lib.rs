//! Python bindings: the main types and operations of the library.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::sync::OnceLock;
use triband::bands::{BandSystem, Interval};
use triband::elliptic;
use triband::error::Error;
use triband::oracle;
use triband::solutions::{self, FamilyExtras, FilterFamily, SolutionEvaluator};
use triband::verify;
use triband::zolotarev::ZolotarevFraction;
use num_complex::Complex64;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Purely imaginary elliptic modulus tau = i*t.
#[pyclass(name = "EllipticModulus", skip_from_py_object)]
#[derive(Clone)]
struct PyModulus {
    inner: elliptic::EllipticModulus,
}

#[pymethods]
impl PyModulus {
    #[new]
    fn new(t: f64) -> PyResult<Self> {
        Ok(PyModulus {
            inner: elliptic::modulus_from_t(t).map_err(to_py_err)?,
        })
    }
    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }
    #[getter]
    fn q(&self) -> f64 {
        self.inner.q
    }
    #[getter]
    fn big_k(&self) -> f64 {
        self.inner.big_k
    }
    #[getter]
    fn kinv(&self) -> f64 {
        self.inner.kinv
    }
    fn __repr__(&self) -> String {
        format!(
            "EllipticModulus(t={}, kinv={})",
            self.inner.t, self.inner.kinv
        )
    }
}

/// j-th Jacobi theta function at u = re + i*im for nome q.
#[pyfunction]
fn theta(j: usize, re: f64, im: f64, q: f64) -> PyResult<(f64, f64)> {
    let v = elliptic::theta(j, Complex64::new(re, im), q).map_err(to_py_err)?;
    Ok((v.re, v.im))
}

/// Rectangle developing map x(u | i t) = sn(K u).
#[pyfunction]
fn x_map(re: f64, im: f64, modulus: &PyModulus) -> (f64, f64) {
    let v = elliptic::x_map(Complex64::new(re, im), &modulus.inner);
    (v.re, v.im)
}

/// Inverse of the developing map into the closed fundamental rectangle.
#[pyfunction]
fn inverse_x(re: f64, im: f64, modulus: &PyModulus) -> PyResult<(f64, f64)> {
    let u = elliptic::inverse_x(Complex64::new(re, im), &modulus.inner).map_err(to_py_err)?;
    Ok((u.re, u.im))
}

/// Three ordered bands: one stopband and two passbands.
#[pyclass(name = "BandSystem", skip_from_py_object)]
#[derive(Clone)]
struct PyBands {
    inner: BandSystem,
}

#[pymethods]
impl PyBands {
    #[new]
    fn new(e_minus: (f64, f64), e1_plus: (f64, f64), e2_plus: (f64, f64)) -> PyResult<Self> {
        Ok(PyBands {
            inner: BandSystem::new(
                Interval::new(e_minus.0, e_minus.1),
                Interval::new(e1_plus.0, e1_plus.1),
                Interval::new(e2_plus.0, e2_plus.1),
            )
            .map_err(to_py_err)?,
        })
    }
    #[getter]
    fn e_minus(&self) -> (f64, f64) {
        (self.inner.eminus.lo, self.inner.eminus.hi)
    }
    #[getter]
    fn e1_plus(&self) -> (f64, f64) {
        (self.inner.e1plus.lo, self.inner.e1plus.hi)
    }
    #[getter]
    fn e2_plus(&self) -> (f64, f64) {
        (self.inner.e2plus.lo, self.inner.e2plus.hi)
    }
    /// Indicator S_E: -1, +1, or None outside the bands.
    fn indicator(&self, x: f64) -> Option<f64> {
        self.inner.indicator(x)
    }
    fn __repr__(&self) -> String {
        format!(
            "BandSystem({:?}, {:?}, {:?})",
            self.e_minus(),
            self.e1_plus(),
            self.e2_plus()
        )
    }
}

/// Degree-n Zolotarev fraction.
#[pyclass(name = "ZolotarevFraction")]
struct PyZolotarev {
    inner: ZolotarevFraction,
}

#[pymethods]
impl PyZolotarev {
    #[new]
    fn new(n: u32, t: f64) -> PyResult<Self> {
        Ok(PyZolotarev {
            inner: ZolotarevFraction::new(n, t).map_err(to_py_err)?,
        })
    }
    fn eval(&self, x: f64) -> PyResult<f64> {
        self.inner.eval_real(x).map_err(to_py_err)
    }
    /// (scale, mu): the equiripple rescaling and its deviation.
    fn rescaled_solution(&self) -> (f64, f64) {
        self.inner.rescaled_solution()
    }
    /// The two work bands as ((lo, hi), (lo, hi)).
    fn bands(&self) -> ((f64, f64), (f64, f64)) {
        let (em, ep) = self.inner.bands();
        ((em.lo, em.hi), (ep.lo, ep.hi))
    }
    /// (numerator, denominator) monomial coefficients, low order first.
    fn as_rational(&self) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let rf = self.inner.as_rational().map_err(to_py_err)?;
        Ok((rf.numerator, rf.denominator))
    }
    fn genus1_three_band(&self, m: u32, v1: f64, v2: f64) -> PyResult<PyBands> {
        Ok(PyBands {
            inner: self
                .inner
                .genus1_three_band(m, v1, v2)
                .map_err(to_py_err)?,
        })
    }
}

/// One constructed solution, evaluable as the raw function R(x).
#[pyclass(name = "FilterSolution")]
struct PySolution {
    inner: solutions::FilterSolution,
    evaluator: OnceLock<SolutionEvaluator>,
}

impl PySolution {
    fn wrap(inner: solutions::FilterSolution) -> Self {
        PySolution {
            inner,
            evaluator: OnceLock::new(),
        }
    }
    fn ev(&self) -> PyResult<&SolutionEvaluator> {
        if self.evaluator.get().is_none() {
            let built = self.inner.evaluator().map_err(to_py_err)?;
            let _ = self.evaluator.set(built);
        }
        Ok(self.evaluator.get().expect("just set"))
    }
}

#[pymethods]
impl PySolution {
    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family.name()
    }
    #[getter]
    fn n(&self) -> u32 {
        self.inner.n
    }
    #[getter]
    fn m(&self) -> u32 {
        self.inner.m
    }
    #[getter]
    fn t(&self) -> f64 {
        self.inner.modulus.t
    }
    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }
    #[getter]
    fn sigma(&self) -> (u8, u8, u8) {
        let s = self.inner.sigma;
        (s[0], s[1], s[2])
    }
    #[getter]
    fn scale(&self) -> f64 {
        self.inner.scale()
    }
    #[getter]
    fn branchpoints(&self) -> Vec<f64> {
        self.inner.hd.branchpoints.clone()
    }
    /// Raw solution value (multiply by `scale` for the equiripple form).
    fn eval(&self, x: f64) -> PyResult<f64> {
        self.ev()?.eval(x).map_err(to_py_err)
    }
    /// scale * R(x), the approximation of the band indicator.
    fn eval_rescaled(&self, x: f64) -> PyResult<f64> {
        Ok(self.inner.scale() * self.ev()?.eval(x).map_err(to_py_err)?)
    }
    fn __repr__(&self) -> String {
        format!(
            "FilterSolution(family={}, n={}, m={}, t={}, mu={})",
            self.family(),
            self.inner.n,
            self.inner.m,
            self.inner.modulus.t,
            self.inner.mu
        )
    }
}

/// Forward construction of one solution family.
#[pyfunction]
#[pyo3(signature = (family, t, n, m, h=None, h1=None, h2=None, c_re=None, c_im=None, v=None, v1=None, v2=None))]
#[allow(clippy::too_many_arguments)]
fn forward_construct(
    family: &str,
    t: f64,
    n: u32,
    m: u32,
    h: Option<f64>,
    h1: Option<f64>,
    h2: Option<f64>,
    c_re: Option<f64>,
    c_im: Option<f64>,
    v: Option<f64>,
    v1: Option<f64>,
    v2: Option<f64>,
) -> PyResult<(PySolution, PyBands)> {
    let fam = FilterFamily::parse(family).map_err(to_py_err)?;
    let need = |x: Option<f64>, name: &str| {
        x.ok_or_else(|| PyValueError::new_err(format!("family {family} requires {name}")))
    };
    let extras = match fam {
        FilterFamily::Genus1Zolotarev => FamilyExtras::Genus1 {
            v1: need(v1, "v1")?,
            v2: need(v2, "v2")?,
        },
        FilterFamily::Genus2Stiefel => FamilyExtras::Genus2 {
            h: need(h, "h")?,
            v: v.unwrap_or(m as f64),
        },
        FilterFamily::Genus3TwoSlit => FamilyExtras::TwoSlit {
            h1: need(h1, "h1")?,
            h2: need(h2, "h2")?,
        },
        FilterFamily::Genus3Octagon => FamilyExtras::Octagon {
            c_re: need(c_re, "c_re")?,
            c_im: need(c_im, "c_im")?,
        },
        FilterFamily::Genus3DecagonPlus | FilterFamily::Genus3DecagonMinus => {
            FamilyExtras::Decagon {
                h1: need(h1, "h1")?,
                h2: need(h2, "h2")?,
            }
        }
    };
    let (sol, bands) = solutions::forward_construct(fam, t, n, m, extras).map_err(to_py_err)?;
    Ok((PySolution::wrap(sol), PyBands { inner: bands }))
}

/// Inverse design: recover the family and parameters for given bands.
/// Returns (solution, recovered_params_dict).
#[pyfunction]
fn design(
    py: Python<'_>,
    bands: &PyBands,
    n: u32,
    sigma: (u8, u8, u8),
) -> PyResult<(PySolution, Py<pyo3::types::PyDict>)> {
    let out =
        solutions::design(&bands.inner, n, [sigma.0, sigma.1, sigma.2]).map_err(to_py_err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("family", out.family.name())?;
    dict.set_item("t", out.recovered.t)?;
    dict.set_item("m", out.recovered.m)?;
    match out.recovered.extras {
        FamilyExtras::Genus1 { v1, v2 } => {
            dict.set_item("v1", v1)?;
            dict.set_item("v2", v2)?;
        }
        FamilyExtras::Genus2 { h, v } => {
            dict.set_item("h", h)?;
            dict.set_item("v", v)?;
        }
        FamilyExtras::TwoSlit { h1, h2 } | FamilyExtras::Decagon { h1, h2 } => {
            dict.set_item("h1", h1)?;
            dict.set_item("h2", h2)?;
        }
        FamilyExtras::Octagon { c_re, c_im } => {
            dict.set_item("c_re", c_re)?;
            dict.set_item("c_im", c_im)?;
        }
    }
    dict.set_item("alternation_count", out.report.alternation_count)?;
    Ok((PySolution::wrap(out.solution), dict.unbind()))
}

/// Full verification report as a dict.
#[pyfunction]
#[pyo3(signature = (solution, bands, grid_density=128))]
fn verify_solution(
    py: Python<'_>,
    solution: &PySolution,
    bands: &PyBands,
    grid_density: usize,
) -> PyResult<Py<pyo3::types::PyDict>> {
    let ev = solution.ev()?;
    let f = |x: f64| ev.eval(x).unwrap_or(f64::INFINITY);
    let rep = verify::full_report(
        &f,
        solution.inner.scale(),
        &bands.inner,
        solution.inner.n as usize,
        &solution.inner.modulus,
        grid_density,
    )
    .map_err(to_py_err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("mu", rep.mu)?;
    dict.set_item("alternation_points", rep.alternation_points)?;
    dict.set_item("alternation_count", rep.alternation_count)?;
    dict.set_item("sigma", (rep.sigma[0], rep.sigma[1], rep.sigma[2]))?;
    dict.set_item("extremality", rep.extremality)?;
    dict.set_item(
        "extended_segments",
        rep.extended_segments
            .iter()
            .map(|iv| (iv.lo, iv.hi))
            .collect::<Vec<_>>(),
    )?;
    dict.set_item("theorem1_ok", rep.theorem1_ok)?;
    dict.set_item("degree_fit_residual", rep.degree_fit_residual)?;
    Ok(dict.unbind())
}

/// Grid minimax oracle comparison as a dict.
#[pyfunction]
fn oracle_compare(
    py: Python<'_>,
    solution: &PySolution,
    bands: &PyBands,
    n: usize,
) -> PyResult<Py<pyo3::types::PyDict>> {
    let rec = oracle::validate_against(&solution.inner, &bands.inner, n).map_err(to_py_err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("mu_constructed", rec.mu_constructed)?;
    dict.set_item("mu_grid", rec.mu_grid)?;
    dict.set_item("alternation_count", rec.alternation_count)?;
    dict.set_item("local_opt", rec.local_opt)?;
    Ok(dict.unbind())
}

#[pymodule]
fn triband_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModulus>()?;
    m.add_class::<PyBands>()?;
    m.add_class::<PyZolotarev>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(x_map, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_x, m)?)?;
    m.add_function(wrap_pyfunction!(forward_construct, m)?)?;
    m.add_function(wrap_pyfunction!(design, m)?)?;
    m.add_function(wrap_pyfunction!(verify_solution, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_compare, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
