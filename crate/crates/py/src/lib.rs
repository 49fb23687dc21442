//! Python bindings: the number-theory table with its dependent
//! operations as a class, pure predicates and constants as module
//! functions. Exact counts cross into Python as arbitrary-size ints.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use permarith::{bounds, compat, constructions, numtheory, permanent, verify, BigCount, Error};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(m) | Error::OutOfRange(m) => PyValueError::new_err(m),
        Error::ResourceLimit(m) | Error::Internal(m) => PyRuntimeError::new_err(m),
    }
}

fn parse_kind(kind: &str) -> PyResult<compat::CompatKind> {
    kind.parse().map_err(to_py_err)
}

#[pyclass(get_all)]
#[derive(Clone)]
struct CountResult {
    kind: String,
    n: usize,
    count: BigCount,
    nth_root: f64,
    engine: String,
    elapsed_ms: u64,
}

impl From<permanent::CountResult> for CountResult {
    fn from(r: permanent::CountResult) -> Self {
        CountResult {
            kind: r.kind.name().to_owned(),
            n: r.n,
            count: r.count,
            nth_root: r.nth_root,
            engine: r.engine.to_owned(),
            elapsed_ms: r.elapsed.as_millis() as u64,
        }
    }
}

#[pymethods]
impl CountResult {
    fn __repr__(&self) -> String {
        format!(
            "CountResult(kind='{}', n={}, count={}, nth_root={})",
            self.kind, self.n, self.count, self.nth_root
        )
    }
}

#[pyclass(get_all)]
#[derive(Clone)]
struct LowerBoundReport {
    b: u64,
    divisors: Vec<u64>,
    p_lcm_values: Vec<BigCount>,
    p_div_values: Vec<BigCount>,
    c: f64,
    c_d: f64,
    alpha: (u64, u64),
    c_alpha: f64,
    cd_alpha: f64,
    exp_c_alpha: f64,
    exp_cd_alpha: f64,
    phi_variant: f64,
}

#[pymethods]
impl LowerBoundReport {
    fn __repr__(&self) -> String {
        format!(
            "LowerBoundReport(b={}, c_alpha={:.6}, cd_alpha={:.6})",
            self.b, self.c_alpha, self.cd_alpha
        )
    }
}

#[pyclass(get_all)]
#[derive(Clone)]
struct UpperBoundReport {
    k: u64,
    yseq_const: f64,
    xi_const: f64,
    yi_const: f64,
    x0_analytic: f64,
    x0_empirical: Option<f64>,
    empirical_n: Option<u64>,
    total_analytic: f64,
    total_empirical: Option<f64>,
}

#[pymethods]
impl UpperBoundReport {
    fn __repr__(&self) -> String {
        format!(
            "UpperBoundReport(k={}, total_analytic={:.4})",
            self.k, self.total_analytic
        )
    }
}

#[pyclass(get_all)]
#[derive(Clone)]
struct RatioConstants {
    density_lhs: f64,
    density_rhs: f64,
    lcm6: BigCount,
    div6: BigCount,
    ratio_base: f64,
    ratio_exponent: f64,
    c: f64,
}

#[pyclass(get_all)]
#[derive(Clone)]
struct FamilySummary {
    b: u64,
    n: u64,
    blocks_total: usize,
    blocks_nontrivial: usize,
    per_interval_counts: Vec<u64>,
    family_count: BigCount,
}

/// Smallest-prime-factor table plus every operation that needs one.
#[pyclass]
struct SpfTable {
    inner: numtheory::SpfTable,
}

#[pymethods]
impl SpfTable {
    #[new]
    #[pyo3(signature = (limit = numtheory::DEFAULT_SPF_LIMIT))]
    fn new(limit: u64) -> PyResult<Self> {
        Ok(SpfTable {
            inner: numtheory::SpfTable::new(limit).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn limit(&self) -> u64 {
        self.inner.limit()
    }

    fn spf(&self, m: u64) -> PyResult<u64> {
        self.inner.spf(m).map_err(to_py_err)
    }

    fn factorize(&self, m: u64) -> PyResult<Vec<(u64, u32)>> {
        Ok(self.inner.factorize(m).map_err(to_py_err)?.pairs().to_vec())
    }

    fn divisors(&self, m: u64) -> PyResult<Vec<u64>> {
        self.inner.divisors(m).map_err(to_py_err)
    }

    fn tau(&self, m: u64) -> PyResult<u64> {
        self.inner.tau(m).map_err(to_py_err)
    }

    fn sigma(&self, m: u64) -> PyResult<u64> {
        self.inner.sigma(m).map_err(to_py_err)
    }

    fn phi(&self, m: u64) -> PyResult<u64> {
        self.inner.phi(m).map_err(to_py_err)
    }

    /// α(b) = b/σ(b) as an exact reduced fraction (numerator, denominator).
    fn alpha(&self, b: u64) -> PyResult<(u64, u64)> {
        let a = self.inner.alpha(b).map_err(to_py_err)?;
        Ok((*a.numer(), *a.denom()))
    }

    fn tau_below(&self, m: u64, z: f64) -> PyResult<u64> {
        self.inner.tau_below(m, z).map_err(to_py_err)
    }

    /// ∏_{p < x} (1 − 1/p).
    fn mertens_product(&self, x: u64) -> PyResult<f64> {
        self.inner.mertens_product(x).map_err(to_py_err)
    }

    fn neighbor_count_nk(&self, j: u64, k: u64, n: u64) -> PyResult<u64> {
        compat::neighbor_count_nk(&self.inner, j, k, n).map_err(to_py_err)
    }

    fn p_lcm(&self, a: u64, b: u64) -> PyResult<BigCount> {
        bounds::p_lcm(&self.inner, a, b).map_err(to_py_err)
    }

    fn p_div(&self, a: u64, b: u64) -> PyResult<BigCount> {
        bounds::p_div(&self.inner, a, b).map_err(to_py_err)
    }

    fn c_const(&self, b: u64) -> PyResult<f64> {
        bounds::c_const(&self.inner, b).map_err(to_py_err)
    }

    fn c_d_const(&self, b: u64) -> PyResult<f64> {
        bounds::c_d_const(&self.inner, b).map_err(to_py_err)
    }

    fn lower_bound_report(&self, b: u64) -> PyResult<LowerBoundReport> {
        let r = bounds::lower_bound_report(&self.inner, b).map_err(to_py_err)?;
        Ok(LowerBoundReport {
            b: r.b,
            divisors: r.divisors,
            p_lcm_values: r.p_lcm_values,
            p_div_values: r.p_div_values,
            c: r.c,
            c_d: r.c_d,
            alpha: (*r.alpha.numer(), *r.alpha.denom()),
            c_alpha: r.c_alpha,
            cd_alpha: r.cd_alpha,
            exp_c_alpha: r.exp_c_alpha,
            exp_cd_alpha: r.exp_cd_alpha,
            phi_variant: r.phi_variant,
        })
    }

    fn nu_const(&self, k: u64) -> PyResult<f64> {
        bounds::nu_const(&self.inner, k).map_err(to_py_err)
    }

    fn x0_analytic_const(&self, k: u64) -> PyResult<f64> {
        bounds::x0_analytic_const(&self.inner, k).map_err(to_py_err)
    }

    #[pyo3(signature = (k, empirical_n = None))]
    fn upper_bound_report(&self, k: u64, empirical_n: Option<u64>) -> PyResult<UpperBoundReport> {
        let r = bounds::upper_bound_report(&self.inner, k, empirical_n).map_err(to_py_err)?;
        Ok(UpperBoundReport {
            k: r.k,
            yseq_const: r.yseq_const,
            xi_const: r.xi_const,
            yi_const: r.yi_const,
            x0_analytic: r.x0_analytic,
            x0_empirical: r.x0_empirical,
            empirical_n: r.empirical_n,
            total_analytic: r.total_analytic,
            total_empirical: r.total_empirical,
        })
    }

    fn ratio_constants(&self) -> PyResult<RatioConstants> {
        let r = bounds::ratio_constants(&self.inner).map_err(to_py_err)?;
        Ok(RatioConstants {
            density_lhs: r.density_lhs,
            density_rhs: r.density_rhs,
            lcm6: r.lcm6,
            div6: r.div6,
            ratio_base: r.ratio_base,
            ratio_exponent: r.ratio_exponent,
            c: r.c,
        })
    }

    fn admissible(&self, j: u64, b: u64) -> PyResult<bool> {
        constructions::admissible(&self.inner, j, b).map_err(to_py_err)
    }

    fn build_family(&self, b: u64, n: u64) -> PyResult<FamilySummary> {
        let f = constructions::build_family(&self.inner, b, n).map_err(to_py_err)?;
        let count = constructions::family_count(&self.inner, &f).map_err(to_py_err)?;
        Ok(FamilySummary {
            b: f.b,
            n: f.n,
            blocks_total: f.blocks.len(),
            blocks_nontrivial: f.nontrivial_blocks(),
            per_interval_counts: f.per_interval_counts,
            family_count: count,
        })
    }

    /// Up to `limit` member permutations as 1-based image lists.
    fn emit_members(&self, b: u64, n: u64, limit: u64) -> PyResult<Vec<Vec<u64>>> {
        let f = constructions::build_family(&self.inner, b, n).map_err(to_py_err)?;
        constructions::emit_members(&self.inner, &f, limit).map_err(to_py_err)
    }

    /// Recompute all embedded reference values; returns
    /// (name, expected, actual, pass) per check.
    fn run_verify(&self) -> PyResult<Vec<(String, String, String, bool)>> {
        let report = verify::run_verify(&self.inner).map_err(to_py_err)?;
        Ok(report
            .items
            .into_iter()
            .map(|i| (i.name, i.expected, i.actual, i.pass))
            .collect())
    }
}

#[pyfunction]
fn is_compatible(kind: &str, j: u64, jp: u64, n: u64) -> PyResult<bool> {
    compat::is_compatible(parse_kind(kind)?, j, jp, n).map_err(to_py_err)
}

#[pyfunction]
fn triple_decomposition(j: u64, jp: u64, n: u64) -> Option<(u64, u64, u64)> {
    compat::triple_decomposition(j, jp, n)
}

#[pyfunction]
#[pyo3(signature = (kind, n, engine = "auto"))]
fn count_permutations(kind: &str, n: usize, engine: &str) -> PyResult<CountResult> {
    let engine: permanent::Engine = engine.parse().map_err(to_py_err)?;
    permanent::count_permutations(parse_kind(kind)?, n, engine)
        .map(CountResult::from)
        .map_err(to_py_err)
}

/// Rows (n, div_count, div_root, lcm_count, lcm_root) for n = 1..=max_n.
#[pyfunction]
fn table1(max_n: usize) -> PyResult<Vec<(usize, BigCount, f64, BigCount, f64)>> {
    Ok(permanent::table1(max_n)
        .map_err(to_py_err)?
        .into_iter()
        .map(|row| {
            (
                row.n,
                row.div.count,
                row.div.nth_root,
                row.lcm.count,
                row.lcm.nth_root,
            )
        })
        .collect())
}

/// Exact permanent of a 0-1 matrix given as row bitmasks or nested lists.
#[pyfunction]
fn permanent_of(rows: Vec<Vec<u8>>) -> PyResult<BigCount> {
    let n = rows.len();
    let bits = permanent::BitMatrix::from_fn(n, |i, j| rows[i][j] != 0).map_err(to_py_err)?;
    if n <= 10 {
        permanent::permanent_bruteforce(&bits).map_err(to_py_err)
    } else {
        permanent::permanent_ryser(&bits).map_err(to_py_err)
    }
}

#[pyfunction]
fn ub_yseq_const(k: u64) -> f64 {
    bounds::ub_yseq_const(k)
}

#[pyfunction]
fn ub_xi_const(k: u64) -> f64 {
    bounds::ub_xi_const(k)
}

#[pyfunction]
fn ub_yi_const(k: u64) -> f64 {
    bounds::ub_yi_const(k)
}

#[pyfunction]
fn x0_empirical_const(k: u64, n: u64) -> PyResult<f64> {
    bounds::x0_empirical_const(k, n).map_err(to_py_err)
}

#[pyfunction]
fn nk_counts(k: u64, n: u64) -> PyResult<Vec<u32>> {
    compat::nk_counts(k, n).map_err(to_py_err)
}

#[pyfunction]
fn v_p(m: u64, p: u64) -> u32 {
    numtheory::v_p(m, p)
}

#[pymodule]
fn permarith_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SpfTable>()?;
    m.add_class::<CountResult>()?;
    m.add_class::<LowerBoundReport>()?;
    m.add_class::<UpperBoundReport>()?;
    m.add_class::<RatioConstants>()?;
    m.add_class::<FamilySummary>()?;
    m.add_function(wrap_pyfunction!(is_compatible, m)?)?;
    m.add_function(wrap_pyfunction!(triple_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(count_permutations, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    m.add_function(wrap_pyfunction!(permanent_of, m)?)?;
    m.add_function(wrap_pyfunction!(ub_yseq_const, m)?)?;
    m.add_function(wrap_pyfunction!(ub_xi_const, m)?)?;
    m.add_function(wrap_pyfunction!(ub_yi_const, m)?)?;
    m.add_function(wrap_pyfunction!(x0_empirical_const, m)?)?;
    m.add_function(wrap_pyfunction!(nk_counts, m)?)?;
    m.add_function(wrap_pyfunction!(v_p, m)?)?;
    Ok(())
}
