//! Python module `rigidcx`: runs declaration-language programs and exposes a few kernels
//! directly.

use pyo3::exceptions::{PyNotImplementedError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rigidcx::cli::{run_text, Report, RunOptions};
use rigidcx::exactlin::{qf, smith_normal_form, BaseRing, ExactMatrix};
use rigidcx::polyring::{buchberger, FpModule, MonomialOrder, PresentedRing, RingMap};
use rigidcx::rigidity::rigid_existence;
use rigidcx::squaring::sq_object;
use rigidcx::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Parse { .. } => PyValueError::new_err(e.to_string()),
        Error::Unsupported(_) => PyNotImplementedError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_base(text: &str) -> PyResult<BaseRing> {
    let t = text.trim();
    match t {
        "QQ" => return Ok(BaseRing::Rationals),
        "ZZ" => return Ok(BaseRing::Integers),
        _ => {}
    }
    let inner = t
        .strip_prefix("Fp(")
        .or_else(|| t.strip_prefix("GF("))
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| PyValueError::new_err(format!("unknown base '{t}'; use QQ, ZZ or Fp(p)")))?;
    let p: u64 = inner
        .trim()
        .parse()
        .map_err(|_| PyValueError::new_err(format!("bad characteristic '{inner}'")))?;
    BaseRing::prime_field(p).map_err(to_py)
}

fn parse_order(text: &str) -> PyResult<MonomialOrder> {
    match text {
        "lex" => Ok(MonomialOrder::lex()),
        "degrevlex" => Ok(MonomialOrder::degrevlex()),
        other => Err(PyValueError::new_err(format!("unknown order '{other}'"))),
    }
}

fn ring(vars: &[String], relations: &[String], base: &str) -> PyResult<rigidcx::polyring::Ring> {
    let vs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let rs: Vec<&str> = relations.iter().map(String::as_str).collect();
    PresentedRing::from_strs(parse_base(base)?, &vs, &rs).map_err(to_py)
}

/// The report of one job.
#[pyclass(name = "Report", frozen)]
struct PyReport {
    inner: Report,
}

#[pymethods]
impl PyReport {
    /// The job's verb.
    #[getter]
    fn verb(&self) -> String {
        self.inner.verb().to_string()
    }

    /// Whether every check passed and no degree was left undetermined.
    #[getter]
    fn passes(&self) -> bool {
        self.inner.passes()
    }

    /// `(name, passed)` for every check.
    #[getter]
    fn checks(&self) -> Vec<(String, bool)> {
        self.inner.checks().to_vec()
    }

    /// Degrees the job could not determine.
    #[getter]
    fn undetermined(&self) -> Vec<String> {
        self.inner.undetermined().to_vec()
    }

    /// The value recorded under `key`.
    fn get(&self, key: &str) -> Option<String> {
        self.inner.get(key).map(str::to_string)
    }

    /// The report as text.
    fn render(&self) -> String {
        self.inner.render()
    }

    fn __repr__(&self) -> String {
        format!("<Report {} {}>", self.inner.verb(), if self.inner.passes() { "pass" } else { "fail" })
    }
}

/// Runs the statements of `text` whose verb is `verb` (all jobs when `verb` is None).
#[pyfunction]
#[pyo3(signature = (text, verb=None, base="QQ", window=None, trace=false))]
fn run(text: &str, verb: Option<&str>, base: &str, window: Option<(i32, i32)>, trace: bool) -> PyResult<Vec<PyReport>> {
    let opts = RunOptions { window, trace };
    let reports = run_text(text, verb, parse_base(base)?, &opts).map_err(to_py)?;
    Ok(reports.into_iter().map(|inner| PyReport { inner }).collect())
}

/// The reduced Gröbner basis of the ideal generated by `gens` in `base[vars]`.
#[pyfunction]
#[pyo3(signature = (vars, gens, base="QQ", order="degrevlex"))]
fn groebner_basis(vars: Vec<String>, gens: Vec<String>, base: &str, order: &str) -> PyResult<Vec<String>> {
    let r = PresentedRing::with_order(parse_base(base)?, vars, parse_order(order)?, Vec::new()).map_err(to_py)?;
    let polys = gens.iter().map(|g| r.parse(g)).collect::<rigidcx::Result<Vec<_>>>().map_err(to_py)?;
    let gb = buchberger(r.ctx(), &polys).map_err(to_py)?;
    Ok(gb.iter().map(|p| r.fmt(p)).collect())
}

/// The nonzero invariant factors of an integer matrix, as decimal strings.
#[pyfunction]
fn smith_invariants(rows: Vec<Vec<i64>>) -> PyResult<Vec<String>> {
    let rows = rows.into_iter().map(|r| r.into_iter().map(|x| qf(x, 1)).collect()).collect();
    let m = ExactMatrix::from_rows(BaseRing::Integers, rows).map_err(to_py)?;
    let s = smith_normal_form(&m).map_err(to_py)?;
    Ok(s.invariant_factors().iter().map(|d| d.to_string()).collect())
}

/// `(degree, invariants)` of `Sq B` for `B = base[vars]/(relations)` on `lo..=hi`.
#[pyfunction]
#[pyo3(signature = (vars, relations, lo, hi, base="QQ", bound=6))]
fn square_cohomology(
    vars: Vec<String>,
    relations: Vec<String>,
    lo: i32,
    hi: i32,
    base: &str,
    bound: i32,
) -> PyResult<Vec<(i32, String)>> {
    let b = ring(&vars, &relations, base)?;
    let sq = sq_object(&RingMap::from_base(&b), &FpModule::free(&b, 1), 0, bound, lo, hi).map_err(to_py)?;
    let graded = sq.graded().map_err(to_py)?;
    Ok(graded.into_iter().map(|(i, inv)| (i, inv.to_string())).collect())
}

/// Builds the rigid complex of `base[vars]/(relations)` and returns whether it verifies and
/// whether its endomorphisms are the algebra itself.
#[pyfunction]
#[pyo3(signature = (vars, relations, base="QQ"))]
fn rigid_exists(vars: Vec<String>, relations: Vec<String>, base: &str) -> PyResult<(bool, bool)> {
    let a = ring(&vars, &relations, base)?;
    let ex = rigid_existence(&a).map_err(to_py)?;
    Ok((ex.report.passes(), ex.endomorphisms.is_base))
}

#[pymodule]
#[pyo3(name = "rigidcx")]
fn rigidcx_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(groebner_basis, m)?)?;
    m.add_function(wrap_pyfunction!(smith_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(square_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(rigid_exists, m)?)?;
    Ok(())
}
