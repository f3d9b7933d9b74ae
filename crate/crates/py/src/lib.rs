//! Python bindings. Polynomials cross the boundary as little-endian lists of
//! Python ints (constant term first).

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use qtcore::census::{self, CensusOptions, FamilyKind, FamilySpec, Mode};
use qtcore::ff::{self, CensusPredicate, Fp, FpPoly};
use qtcore::ffcount::{self, SystemKind};
use qtcore::rank;
use qtcore::sieve::{self, PrimeSet, SieveParams};
use qtcore::{Error, IntPoly};

create_exception!(qtrank, BudgetExceededError, PyException);

/// Factors with multiplicities.
type Factors<T> = Vec<(Vec<T>, u32)>;
/// `(box_size, empirical_b_pz, exact_b, theoretical_bound)`.
type SieveRow = (u64, Option<u64>, Option<u64>, Option<f64>);
/// `(target, brute, closed_form, derived)`.
type CountRow = (Vec<u64>, u64, Option<u64>, Option<u64>);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceededError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn int_poly(c: Vec<BigInt>) -> IntPoly {
    IntPoly::new(c)
}

fn fp_poly(c: &[i64], p: u64) -> PyResult<FpPoly> {
    Ok(FpPoly::from_i64s(Fp::new(p).map_err(to_py)?, c))
}

fn py_bool(b: bool) -> &'static str {
    if b {
        "True"
    } else {
        "False"
    }
}

fn system_kind(s: &str) -> PyResult<SystemKind> {
    s.parse().map_err(to_py)
}

/// `Y^2 = A(X) T^2 + B(X) T + C(X)` with `C` monic cubic.
#[pyclass(frozen, module = "qtrank")]
struct FamilyCurve {
    inner: qtcore::FamilyCurve,
}

#[pymethods]
impl FamilyCurve {
    #[new]
    fn new(a: Vec<BigInt>, b: Vec<BigInt>, c: Vec<BigInt>) -> PyResult<Self> {
        let inner = qtcore::FamilyCurve::new(int_poly(a), int_poly(b), int_poly(c)).map_err(to_py)?;
        Ok(FamilyCurve { inner })
    }

    #[getter]
    fn a(&self) -> Vec<BigInt> {
        self.inner.a().coeffs().to_vec()
    }

    #[getter]
    fn b(&self) -> Vec<BigInt> {
        self.inner.b().coeffs().to_vec()
    }

    #[getter]
    fn c(&self) -> Vec<BigInt> {
        self.inner.c().coeffs().to_vec()
    }

    fn is_singular(&self) -> bool {
        self.inner.is_singular()
    }

    /// Weierstrass coefficients `(a2, a4, a6)` as polynomials in `T`.
    fn weierstrass(&self) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
        let w = self.inner.to_weierstrass();
        (w.a2.coeffs().to_vec(), w.a4.coeffs().to_vec(), w.a6.coeffs().to_vec())
    }

    fn rank_bound(&self) -> RankBound {
        RankBound::from(rank::rank_upper_bound(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("FamilyCurve(a={:?}, b={:?}, c={:?})", self.a(), self.b(), self.c())
    }
}

#[pyclass(frozen, get_all, module = "qtrank")]
struct RankBound {
    /// "MBC", "Disc", "MDiscA" or "None"; absent for unclassified curves.
    kind: Option<String>,
    certificate: Option<Vec<BigInt>>,
    omega: Option<u32>,
    bound: Option<u8>,
    isotrivial: bool,
    singular: bool,
}

impl From<qtcore::RankBoundResult> for RankBound {
    fn from(r: qtcore::RankBoundResult) -> Self {
        RankBound {
            kind: r.kind.map(|k| k.name().to_string()),
            certificate: r.certificate.map(|c| c.coeffs().to_vec()),
            omega: r.omega_q,
            bound: r.bound,
            isotrivial: r.isotrivial,
            singular: r.singular,
        }
    }
}

#[pymethods]
impl RankBound {
    fn __repr__(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "None".into());
        format!(
            "RankBound(kind={}, omega={}, bound={}, isotrivial={}, singular={})",
            opt(self.kind.as_ref().map(|k| format!("'{k}'"))),
            opt(self.omega.map(|o| o.to_string())),
            opt(self.bound.map(|b| b.to_string())),
            py_bool(self.isotrivial),
            py_bool(self.singular)
        )
    }
}

#[pyfunction]
#[pyo3(signature = (a, b, c))]
fn rank_bound(a: Vec<BigInt>, b: Vec<BigInt>, c: Vec<BigInt>) -> PyResult<RankBound> {
    Ok(FamilyCurve::new(a, b, c)?.rank_bound())
}

/// Irreducible factors over `Q` with multiplicities, and the signed content.
#[pyfunction]
fn factor_over_q(coeffs: Vec<BigInt>) -> PyResult<(BigInt, Factors<BigInt>)> {
    let q = rank::factor_over_q(&int_poly(coeffs)).map_err(to_py)?;
    Ok((q.content, q.factors.into_iter().map(|(f, m)| (f.coeffs().to_vec(), m)).collect()))
}

#[pyfunction]
fn omega_q(coeffs: Vec<BigInt>) -> PyResult<u32> {
    rank::omega_q(&int_poly(coeffs)).map_err(to_py)
}

/// Monic irreducible factors over `F_p` with multiplicities, and the unit.
#[pyfunction]
fn factor_mod_p(coeffs: Vec<i64>, p: u64) -> PyResult<(u64, Factors<u64>)> {
    let fm = ff::factor(&fp_poly(&coeffs, p)?).map_err(to_py)?;
    Ok((fm.unit, fm.factors.into_iter().map(|(f, m)| (f.coeffs().to_vec(), m)).collect()))
}

#[pyfunction]
fn is_irreducible_mod_p(coeffs: Vec<i64>, p: u64) -> PyResult<bool> {
    ff::is_irreducible(&fp_poly(&coeffs, p)?).map_err(to_py)
}

#[pyfunction]
fn legendre(a: i64, p: u64) -> PyResult<i8> {
    ff::legendre(a, p).map_err(to_py)
}

#[pyfunction]
fn count_irreducible_monic(p: u64, n: u32) -> PyResult<BigInt> {
    ff::count_irreducible_monic(p, n).map_err(to_py)
}

#[pyfunction]
fn count_even_irreducible_monic(p: u64, n: u32) -> PyResult<BigInt> {
    ff::count_even_irreducible_monic(p, n).map_err(to_py)
}

/// `predicate` is "all", "even", or "even:a" for even polynomials with
/// `X^(n-2)` coefficient `a`.
#[pyfunction]
#[pyo3(signature = (p, n, predicate = "all"))]
fn brute_census(p: u64, n: u32, predicate: &str) -> PyResult<u64> {
    let pred = match predicate {
        "all" => CensusPredicate::All,
        "even" => CensusPredicate::Even,
        s => match s.strip_prefix("even:").and_then(|a| a.parse::<i64>().ok()) {
            Some(a) => CensusPredicate::EvenWithCoeff(a.rem_euclid(p.max(1) as i64) as u64),
            None => return Err(PyValueError::new_err(format!("unknown predicate {s:?}"))),
        },
    };
    ff::brute_census(p, n, pred).map_err(to_py)
}

#[pyclass(frozen, module = "qtrank")]
struct DensityRecord {
    #[pyo3(get)]
    kind: String,
    #[pyo3(get)]
    h: u32,
    #[pyo3(get)]
    mode: String,
    #[pyo3(get)]
    total_box: u64,
    #[pyo3(get)]
    singular: u64,
    #[pyo3(get)]
    isotrivial: u64,
    #[pyo3(get)]
    family_size: u64,
    #[pyo3(get)]
    positive_bound: u64,
    #[pyo3(get)]
    avg_bound_num: u64,
    #[pyo3(get)]
    avg_bound_den: u64,
    #[pyo3(get)]
    ci_halfwidth: Option<f64>,
    #[pyo3(get)]
    wall_time_s: f64,
    inner: census::DensityRecord,
}

#[pymethods]
impl DensityRecord {
    /// `positive_bound / family_size`.
    fn density(&self) -> f64 {
        self.inner.density()
    }

    fn avg_bound(&self) -> f64 {
        self.inner.avg_bound()
    }

    fn csv_row(&self) -> String {
        self.inner.csv_row()
    }

    fn __repr__(&self) -> String {
        format!("DensityRecord({})", self.inner.csv_row())
    }
}

impl From<census::DensityRecord> for DensityRecord {
    fn from(r: census::DensityRecord) -> Self {
        DensityRecord {
            kind: r.spec.kind.to_string(),
            h: r.spec.h,
            mode: r.mode.to_string(),
            total_box: r.total_box,
            singular: r.singular,
            isotrivial: r.isotrivial,
            family_size: r.family_size,
            positive_bound: r.positive_bound,
            avg_bound_num: r.avg_bound_num,
            avg_bound_den: r.avg_bound_den,
            ci_halfwidth: r.ci_halfwidth,
            wall_time_s: r.wall_time_s,
            inner: r,
        }
    }
}

/// Exact census when `n` is `None`, otherwise `n` seeded samples.
#[pyfunction(name = "census")]
#[pyo3(signature = (kind, h, n = None, seed = 0, workers = None, budget = census::DEFAULT_BUDGET))]
fn run_census(
    py: Python<'_>,
    kind: &str,
    h: u32,
    n: Option<u64>,
    seed: u64,
    workers: Option<usize>,
    budget: u128,
) -> PyResult<DensityRecord> {
    let kind: FamilyKind = kind.parse().map_err(to_py)?;
    let spec = FamilySpec::new(kind, h).map_err(to_py)?;
    let mode = n.map_or(Mode::Exact, |n| Mode::Sampled { n, seed });
    let rec = py.detach(|| census::measure_density(spec, mode, CensusOptions { budget, workers })).map_err(to_py)?;
    Ok(rec.into())
}

/// Least-squares slope of log density against log H.
#[pyfunction]
fn fit_exponent(records: Vec<PyRef<'_, DensityRecord>>) -> PyResult<f64> {
    let recs: Vec<_> = records.iter().map(|r| r.inner.clone()).collect();
    census::fit_exponent(&recs).map_err(to_py)
}

/// Rows `(target, brute, closed_form, derived)` for every target of the
/// system's shape.
#[pyfunction]
#[pyo3(signature = (kind, p, irreducible_only = true))]
fn system_counts(py: Python<'_>, kind: &str, p: u64, irreducible_only: bool) -> PyResult<Vec<CountRow>> {
    let kind = system_kind(kind)?;
    let rows = py.detach(|| ffcount::system_counts(kind, p, irreducible_only)).map_err(to_py)?;
    Ok(rows.into_iter().map(|r| (r.u.coeffs().to_vec(), r.n_u, r.closed_form, r.derived)).collect())
}

/// Number of tuples mod `p` whose certificate is irreducible.
#[pyfunction]
fn count_ap(py: Python<'_>, kind: &str, p: u64) -> PyResult<u64> {
    let kind = system_kind(kind)?;
    py.detach(|| ffcount::count_ap(kind, p)).map_err(to_py)
}

#[pyfunction]
fn certificate_mod_p(kind: &str, p: u64, tuple: Vec<u64>) -> PyResult<Vec<u64>> {
    let kind = system_kind(kind)?;
    let f = ffcount::certificate_mod_p(kind, Fp::new(p).map_err(to_py)?, &tuple).map_err(to_py)?;
    Ok(f.coeffs().to_vec())
}

/// Turán bound over the primes `p >= min`, `p = residue mod modulus`.
#[pyfunction]
#[pyo3(signature = (boxes, delta, z, c1 = 1.0, c2 = 1.0, modulus = 1, residue = 0, min = 3))]
#[allow(clippy::too_many_arguments)]
fn turan_bound(
    boxes: Vec<u64>,
    delta: f64,
    z: u64,
    c1: f64,
    c2: f64,
    modulus: u64,
    residue: u64,
    min: u64,
) -> PyResult<f64> {
    if modulus == 0 {
        return Err(PyValueError::new_err("modulus must be positive"));
    }
    let mut params = SieveParams::new(boxes, delta, PrimeSet { modulus, residue, min }, z);
    params.c1 = c1;
    params.c2 = c2;
    sieve::turan_bound(&params).map_err(to_py)
}

#[pyfunction]
fn choose_z(h: u64) -> PyResult<u64> {
    sieve::choose_z(h).map_err(to_py)
}

/// Returns `(box_size, empirical_b_pz, exact_b, theoretical_bound)`.
#[pyfunction]
#[pyo3(signature = (kind, h, z, exact = false))]
fn empirical_sieve(py: Python<'_>, kind: &str, h: u64, z: u64, exact: bool) -> PyResult<SieveRow> {
    let kind = system_kind(kind)?;
    let r = py.detach(|| sieve::empirical_sieve(kind, h, z, exact)).map_err(to_py)?;
    Ok((r.box_size, r.empirical_b_pz, r.exact_b, r.theoretical_bound))
}

#[pymodule]
#[pyo3(name = "qtrank")]
pub fn qtrank_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BudgetExceededError", m.py().get_type::<BudgetExceededError>())?;
    m.add_class::<FamilyCurve>()?;
    m.add_class::<RankBound>()?;
    m.add_class::<DensityRecord>()?;
    m.add_function(wrap_pyfunction!(rank_bound, m)?)?;
    m.add_function(wrap_pyfunction!(factor_over_q, m)?)?;
    m.add_function(wrap_pyfunction!(omega_q, m)?)?;
    m.add_function(wrap_pyfunction!(factor_mod_p, m)?)?;
    m.add_function(wrap_pyfunction!(is_irreducible_mod_p, m)?)?;
    m.add_function(wrap_pyfunction!(legendre, m)?)?;
    m.add_function(wrap_pyfunction!(count_irreducible_monic, m)?)?;
    m.add_function(wrap_pyfunction!(count_even_irreducible_monic, m)?)?;
    m.add_function(wrap_pyfunction!(brute_census, m)?)?;
    m.add_function(wrap_pyfunction!(run_census, m)?)?;
    m.add_function(wrap_pyfunction!(fit_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(system_counts, m)?)?;
    m.add_function(wrap_pyfunction!(count_ap, m)?)?;
    m.add_function(wrap_pyfunction!(certificate_mod_p, m)?)?;
    m.add_function(wrap_pyfunction!(turan_bound, m)?)?;
    m.add_function(wrap_pyfunction!(choose_z, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_sieve, m)?)?;
    Ok(())
}
