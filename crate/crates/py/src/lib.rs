//! Python bindings. Every function returns the same report the `matsuo`
//! command prints, as plain Python objects.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use matsuo_core::algebra::AlgebraVector;
use matsuo_core::axial::{verify_axis, FusionLaw};
use matsuo_core::classify::{ClassifyOptions, Sampling};
use matsuo_core::closure::{Closure, Generator, ScalarMode, Subalgebra};
use matsuo_core::flip::{FlipInvolution, FlipKind, FlipReportOptions};
use matsuo_core::scalar::{parse_rational, EtaScalar, Rational};
use matsuo_core::space::FischerSpace;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, value: &impl Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn space(spec: &str) -> PyResult<Arc<FischerSpace>> {
    FischerSpace::from_spec(spec).map(Arc::new).map_err(err)
}

fn rational(s: &str) -> PyResult<Rational> {
    parse_rational(s).map_err(err)
}

/// Point and line counts, degrees and components of a space such as "W3A:4".
#[pyfunction]
fn space_stats(py: Python<'_>, spec: &str) -> PyResult<Py<PyAny>> {
    to_py(py, &space(spec)?.stats())
}

/// Points with labels and the lines of a space.
#[pyfunction]
fn space_export(py: Python<'_>, spec: &str) -> PyResult<Py<PyAny>> {
    to_py(py, &space(spec)?.export())
}

/// Gram determinant and its rational roots.
#[pyfunction]
fn critical_values(py: Python<'_>, spec: &str) -> PyResult<Py<PyAny>> {
    to_py(py, &matsuo_core::algebra::critical_values(&*space(spec)?))
}

/// Closure of `;`-separated generators in mode "symbolic" or "eta=R".
#[pyfunction]
#[pyo3(signature = (spec, gens, mode = "symbolic"))]
fn close(py: Python<'_>, spec: &str, gens: &str, mode: &str) -> PyResult<Py<PyAny>> {
    let s = space(spec)?;
    let mode: ScalarMode = mode.parse().map_err(err)?;
    let gens = Generator::parse_list(&s, gens).map_err(err)?;
    let a = py.detach(|| Closure::new(s, gens).run(&mode)).map_err(err)?;
    to_py(py, &a.export())
}

/// Eigenspace dimensions and fusion violations of an axis, in the closure
/// of `gens` or in the whole algebra.
#[pyfunction]
#[pyo3(signature = (spec, axis, law = "J", gens = None, mode = "symbolic"))]
fn fusion(py: Python<'_>, spec: &str, axis: &str, law: &str, gens: Option<&str>, mode: &str) -> PyResult<Py<PyAny>> {
    let s = space(spec)?;
    let law: FusionLaw = law.parse().map_err(err)?;
    let mode: ScalarMode = mode.parse().map_err(err)?;
    let x = Generator::parse(&s, axis).map_err(err)?.vector;
    let gens = gens.map(|g| Generator::parse_list(&s, g)).transpose().map_err(err)?;
    let report = py
        .detach(|| match &mode {
            ScalarMode::Symbolic => {
                let a: Subalgebra<EtaScalar> = match gens {
                    Some(g) => Closure::new(s.clone(), g).symbolic()?,
                    None => Subalgebra::whole(s.clone(), EtaScalar::eta(), mode.clone())?,
                };
                let x = AlgebraVector::from_entries(x.entries().iter().map(|(k, c)| (*k, EtaScalar::from_rational(c))));
                verify_axis(&a, &x, &law)
            }
            ScalarMode::Evaluated(e) => {
                let a: Subalgebra<Rational> = match gens {
                    Some(g) => Closure::new(s.clone(), g).evaluated(e)?,
                    None => Subalgebra::whole(s.clone(), e.clone(), mode.clone())?,
                };
                verify_axis(&a, &x, &law)
            }
        })
        .map_err(err)?;
    to_py(py, &report)
}

/// Orbit counts, fixed and flip dimensions of a standard flip.
#[pyfunction]
#[pyo3(signature = (family, k, etas = Vec::new(), symbolic = true))]
fn flip_report(py: Python<'_>, family: &str, k: usize, etas: Vec<String>, symbolic: bool) -> PyResult<Py<PyAny>> {
    let kind: FlipKind = family.parse().map_err(err)?;
    let etas = etas.iter().map(|e| rational(e)).collect::<PyResult<Vec<_>>>()?;
    let opts = FlipReportOptions { symbolic, double_entry: symbolic && !etas.is_empty(), etas };
    let report = py
        .detach(|| {
            let tau = FlipInvolution::standard(kind, k)?;
            matsuo_core::flip::flip_report(&tau, &opts)
        })
        .map_err(err)?;
    to_py(py, &report)
}

/// Type-D configuration census of an ambient.
#[pyfunction]
#[pyo3(signature = (ambient, sample = None, seed = 1, eta = None, certify = true))]
fn classify(
    py: Python<'_>,
    ambient: &str,
    sample: Option<usize>,
    seed: u64,
    eta: Option<&str>,
    certify: bool,
) -> PyResult<Py<PyAny>> {
    let s = space(ambient)?;
    let sampling = match sample {
        Some(count) => Sampling::Random { count, seed },
        None => Sampling::Full,
    };
    let opts = ClassifyOptions { eta: eta.map(rational).transpose()?, sampling, certify, threads: None };
    let report = py.detach(|| matsuo_core::classify::classify(s, &opts)).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn pymatsuo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(space_stats, m)?)?;
    m.add_function(wrap_pyfunction!(space_export, m)?)?;
    m.add_function(wrap_pyfunction!(critical_values, m)?)?;
    m.add_function(wrap_pyfunction!(close, m)?)?;
    m.add_function(wrap_pyfunction!(fusion, m)?)?;
    m.add_function(wrap_pyfunction!(flip_report, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    Ok(())
}
