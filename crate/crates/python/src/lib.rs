//! Python bindings: expansions, convergents, criterion checks and the
//! quantitative bounds. Reports are returned as dicts with exact rationals
//! encoded as strings.

use num_bigint::BigInt;
use padiccf_core::cf::{self, CFExpansion, ConvergentTable};
use padiccf_core::growth::{golden_bound_check, liouville_constant, liouville_scan, loglog_statistic};
use padiccf_core::ridout::{self, BoundVariant, InequalityVariant};
use padiccf_core::structure::{detect_repetitions, growth_statistic, palindromic_prefixes, verify_matrix_symmetry};
use padiccf_core::{parse_rational, Branch, Mode, PadicContext, PadicValue, Rational, SurdElement};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: padiccf_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn rational(text: &str) -> PyResult<Rational> {
    parse_rational(text).map_err(err)
}

fn value(text: &str, branch: Branch) -> PyResult<PadicValue> {
    if text.contains("sqrt") {
        Ok(SurdElement::parse(text, branch).map_err(err)?.into())
    } else {
        Ok(PadicValue::Rational(rational(text)?))
    }
}

fn mode(text: &str) -> PyResult<Mode> {
    text.parse().map_err(err)
}

fn branch(text: &str) -> PyResult<Branch> {
    Branch::parse(text).map_err(err)
}

/// Partial quotients of a p-adic continued fraction with their convergents.
#[pyclass(frozen, module = "padiccf")]
struct Expansion {
    inner: CFExpansion,
    table: ConvergentTable,
    warnings: Vec<String>,
}

#[pymethods]
impl Expansion {
    #[getter]
    fn p(&self) -> u64 {
        self.inner.context.p()
    }

    #[getter]
    fn mode(&self) -> String {
        self.inner.context.mode().to_string()
    }

    #[getter]
    fn quotients(&self) -> Vec<String> {
        self.inner.partial_quotients.iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn termination(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.termination)
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.warnings.clone()
    }

    fn is_periodic(&self) -> bool {
        self.inner.is_periodic()
    }

    /// Exact value of the quotients as a fraction.
    fn evaluate(&self) -> PyResult<String> {
        Ok(cf::evaluate(&self.inner.partial_quotients).map_err(err)?.to_string())
    }

    fn convergents(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.table.pairs)
    }

    fn audit(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &cf::audit_identities(&self.table))
    }

    fn palindromes(&self) -> Vec<usize> {
        palindromic_prefixes(self.inner.partial_quotients.get(1..).unwrap_or_default()).lengths
    }

    fn symmetry(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let report = palindromic_prefixes(self.inner.partial_quotients.get(1..).unwrap_or_default());
        to_py(py, &verify_matrix_symmetry(&self.table, &report))
    }

    #[pyo3(signature = (min_lambda=2))]
    fn repetitions(&self, py: Python<'_>, min_lambda: usize) -> PyResult<Py<PyAny>> {
        let blocks = detect_repetitions(&self.inner.partial_quotients, min_lambda);
        let statistic = growth_statistic(&blocks);
        to_py(py, &serde_json::json!({"blocks": blocks, "statistic": statistic}))
    }

    fn golden(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &golden_bound_check(&self.table))
    }

    fn loglog(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &loglog_statistic(&self.table))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Expansion(p={}, mode={}, quotients={:?})", self.p(), self.mode(), self.quotients())
    }
}

/// Expands a rational "a/b" or surd such as "(-1/10 + 1/10*sqrt(101))".
#[pyfunction]
#[pyo3(signature = (value_text, p, mode_text="browkin", branch_text="+", max_terms=64, precision=None))]
fn expand(
    value_text: &str,
    p: u64,
    mode_text: &str,
    branch_text: &str,
    max_terms: usize,
    precision: Option<usize>,
) -> PyResult<Expansion> {
    let x = value(value_text, branch(branch_text)?)?;
    let ctx = PadicContext::new(p, mode(mode_text)?)
        .map_err(err)?
        .with_precision(precision.unwrap_or(16 * max_terms.max(1)));
    let (inner, warnings) = cf::expand_with_retry(&x, &ctx, max_terms).map_err(err)?;
    let table = cf::convergents(&inner.partial_quotients, p);
    Ok(Expansion { inner, table, warnings })
}

/// Exact value of a finite list of partial quotients.
#[pyfunction]
fn evaluate(quotients: Vec<String>) -> PyResult<String> {
    let qs = quotients.iter().map(|q| rational(q)).collect::<PyResult<Vec<_>>>()?;
    Ok(cf::evaluate(&qs).map_err(err)?.to_string())
}

/// A monic irreducible integer polynomial, leading coefficient first.
#[pyclass(frozen, module = "padiccf")]
struct MinimalPolynomial {
    inner: ridout::MinimalPolynomial,
}

#[pymethods]
impl MinimalPolynomial {
    #[new]
    fn new(coefficients: Vec<BigInt>) -> PyResult<Self> {
        Ok(MinimalPolynomial {
            inner: ridout::MinimalPolynomial::new(coefficients).map_err(err)?,
        })
    }

    #[getter]
    fn coefficients(&self) -> Vec<BigInt> {
        self.inner.coefficients().to_vec()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    #[getter]
    fn discriminant(&self) -> BigInt {
        self.inner.discriminant()
    }

    #[pyo3(signature = (epsilon, variant="theorem-half"))]
    fn count_bound(&self, py: Python<'_>, epsilon: &str, variant: &str) -> PyResult<Py<PyAny>> {
        let v = BoundVariant::parse(variant).map_err(err)?;
        to_py(py, &ridout::count_bound(&self.inner, &rational(epsilon)?, v).map_err(err)?)
    }

    #[pyo3(signature = (p, epsilon, hmax, variant="half", branch_text="+"))]
    fn enumerate(&self, py: Python<'_>, p: u64, epsilon: &str, hmax: u64, variant: &str, branch_text: &str) -> PyResult<Py<PyAny>> {
        let eps = rational(epsilon)?;
        let v = InequalityVariant::parse(variant).map_err(err)?;
        let solutions = ridout::enumerate_solutions(&self.inner, p, branch(branch_text)?, &eps, hmax, v).map_err(err)?;
        let gap = ridout::gap_law_check(&solutions, &eps).map_err(err)?;
        to_py(py, &serde_json::json!({"solutions": solutions, "gap_law": gap}))
    }

    #[pyo3(signature = (p, branch_text="+", precision=64))]
    fn liouville_constant(&self, py: Python<'_>, p: u64, branch_text: &str, precision: usize) -> PyResult<Py<PyAny>> {
        to_py(py, &liouville_constant(&self.inner, p, branch(branch_text)?, precision).map_err(err)?)
    }

    #[pyo3(signature = (p, hmax, branch_text="+"))]
    fn liouville(&self, py: Python<'_>, p: u64, hmax: u64, branch_text: &str) -> PyResult<Py<PyAny>> {
        to_py(py, &liouville_scan(&self.inner, p, branch(branch_text)?, hmax).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        let cs: Vec<String> = self.inner.coefficients().iter().map(ToString::to_string).collect();
        format!("MinimalPolynomial([{}])", cs.join(", "))
    }
}

/// m, t, k, l and the admissibility conditions for degree n and epsilon.
#[pyfunction]
#[pyo3(signature = (n, epsilon, a_bar=BigInt::from(1)))]
fn ridout_params(py: Python<'_>, n: u32, epsilon: &str, a_bar: BigInt) -> PyResult<Py<PyAny>> {
    to_py(py, &ridout::ridout_params(n, &rational(epsilon)?, &a_bar).map_err(err)?)
}

#[pymodule]
fn padiccf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Expansion>()?;
    m.add_class::<MinimalPolynomial>()?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(ridout_params, m)?)?;
    Ok(())
}
