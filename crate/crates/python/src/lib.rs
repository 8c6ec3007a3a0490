use num_bigint::BigUint;
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gabidulin::gabidulin::{
    middle_nucleus_bruteforce, middle_nucleus_formula, right_nucleus_bruteforce,
    right_nucleus_formula,
};
use gabidulin::{Elem, Error, FieldTower, GabidulinSpec, Limits};

fn err(e: Error) -> PyErr {
    match e {
        Error::LimitExceeded { .. } => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn limits(max_card: Option<u64>) -> Limits {
    let mut l = Limits::from_env();
    if let Some(c) = max_card {
        l.max_card = c;
    }
    l
}

/// The tower GF(p) < K = GF(p^e) < F = GF(p^(e n)). Elements are passed as integers
/// 0 .. |F| - 1 (packed coefficient vectors).
#[pyclass(name = "Tower", module = "pygabidulin", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTower {
    inner: FieldTower,
}

impl PyTower {
    fn elem(&self, v: u32) -> PyResult<Elem> {
        self.inner.elem(v).map_err(err)
    }
}

#[pymethods]
impl PyTower {
    #[new]
    #[pyo3(signature = (p, e, n))]
    fn new(p: u32, e: u32, n: u32) -> PyResult<Self> {
        Ok(PyTower {
            inner: FieldTower::new(p, e, n).map_err(err)?,
        })
    }

    /// Tower with |K| = q and [F : K] = n.
    #[staticmethod]
    fn from_q(q: u64, n: u32) -> PyResult<Self> {
        Ok(PyTower {
            inner: FieldTower::from_q(q, n, &Limits::from_env()).map_err(err)?,
        })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn e(&self) -> u32 {
        self.inner.e()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    #[getter]
    fn primitive(&self) -> u32 {
        self.inner.primitive().repr()
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.add(self.elem(a)?, self.elem(b)?).repr())
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.mul(self.elem(a)?, self.elem(b)?).repr())
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        Ok(self.inner.inv(self.elem(a)?).map_err(err)?.repr())
    }

    /// a^(q^i)
    fn frobenius(&self, a: u32, i: i64) -> PyResult<u32> {
        Ok(self.inner.frobenius(self.elem(a)?, i).repr())
    }

    /// Coordinates over K (as K labels) in the basis 1, x, ..., x^(n-1).
    fn coords(&self, a: u32) -> PyResult<Vec<u32>> {
        Ok(self.inner.coords(self.elem(a)?))
    }

    fn spec_json(&self) -> String {
        serde_json::to_string(&self.inner.spec()).expect("spec serializes")
    }

    fn __repr__(&self) -> String {
        format!(
            "Tower(p={}, e={}, n={})",
            self.inner.p(),
            self.inner.e(),
            self.inner.n()
        )
    }
}

/// A K-subspace of F, kept as reduced echelon rows of K labels.
#[pyclass(name = "Subspace", module = "pygabidulin", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySubspace {
    tower: FieldTower,
    inner: gabidulin::Subspace,
}

#[pymethods]
impl PySubspace {
    #[new]
    fn new(tower: &PyTower, rows: Vec<Vec<u32>>) -> PyResult<Self> {
        Ok(PySubspace {
            tower: tower.inner.clone(),
            inner: gabidulin::Subspace::from_rows(&tower.inner, rows).map_err(err)?,
        })
    }

    /// K-span of field elements.
    #[staticmethod]
    fn span(tower: &PyTower, elements: Vec<u32>) -> PyResult<Self> {
        let gens = elements
            .into_iter()
            .map(|v| tower.elem(v))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PySubspace {
            tower: tower.inner.clone(),
            inner: gabidulin::Subspace::span(&tower.inner, &gens),
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<u32>> {
        self.inner.rows().to_vec()
    }

    fn elements(&self) -> Vec<u32> {
        self.inner
            .elements(&self.tower)
            .into_iter()
            .map(Elem::repr)
            .collect()
    }

    fn __contains__(&self, x: u32) -> PyResult<bool> {
        Ok(self.inner.contains(&self.tower, self.tower.elem(x).map_err(err)?))
    }

    /// c * U^(q^j)
    #[pyo3(signature = (c, j = 0))]
    fn image(&self, c: u32, j: i64) -> PyResult<Self> {
        let c = self.tower.elem(c).map_err(err)?;
        if c.is_zero() {
            return Err(PyValueError::new_err("c must be nonzero"));
        }
        Ok(PySubspace {
            tower: self.tower.clone(),
            inner: self.inner.semilinear_image(&self.tower, c, j),
        })
    }

    /// Representative and size of the orbit under x -> c x^(q^j).
    fn orbit(&self) -> (Self, usize) {
        let o = gabidulin::orbit_of(&self.tower, &self.inner);
        (
            PySubspace {
                tower: self.tower.clone(),
                inner: o.representative,
            },
            o.members.len(),
        )
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.tower == other.tower && self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!("Subspace({})", self.inner.to_json())
    }
}

/// The projected Gabidulin code pi_U(G_{k,s}) in K^(m x n).
#[pyclass(name = "GabidulinCode", module = "pygabidulin", frozen)]
struct PyCode {
    spec: GabidulinSpec,
}

#[pymethods]
impl PyCode {
    #[new]
    #[pyo3(signature = (k, s, subspace))]
    fn new(k: usize, s: usize, subspace: &PySubspace) -> PyResult<Self> {
        Ok(PyCode {
            spec: GabidulinSpec::new(&subspace.tower, k, s, subspace.inner.clone()).map_err(err)?,
        })
    }

    #[getter]
    fn k(&self) -> usize {
        self.spec.k()
    }

    #[getter]
    fn s(&self) -> usize {
        self.spec.s()
    }

    #[getter]
    fn m(&self) -> usize {
        self.spec.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.spec.n()
    }

    #[getter]
    fn size(&self) -> u128 {
        self.spec.code_size()
    }

    #[getter]
    fn designed_distance(&self) -> usize {
        self.spec.designed_distance()
    }

    /// All codewords as m x n nested lists of K labels.
    #[pyo3(signature = (max_card = None))]
    fn words(&self, max_card: Option<u64>) -> PyResult<Vec<Vec<Vec<u32>>>> {
        let code = self.spec.to_matrix_code(&limits(max_card)).map_err(err)?;
        Ok(code.words().iter().map(|w| w.to_rows()).collect())
    }

    #[pyo3(signature = (max_card = None))]
    fn min_distance(&self, max_card: Option<u64>) -> PyResult<usize> {
        let code = self.spec.to_matrix_code(&limits(max_card)).map_err(err)?;
        gabidulin::min_distance(self.spec.tower(), &code).map_err(err)
    }

    #[pyo3(signature = (max_card = None))]
    fn is_mrd(&self, max_card: Option<u64>) -> PyResult<bool> {
        let code = self.spec.to_matrix_code(&limits(max_card)).map_err(err)?;
        Ok(gabidulin::is_mrd(self.spec.tower(), &code))
    }

    #[pyo3(signature = (max_card = None))]
    fn root_bound_holds(&self, max_card: Option<u64>) -> PyResult<bool> {
        self.spec.root_bound_holds(&limits(max_card)).map_err(err)
    }

    /// Nucleus orders: {"middle": ..., "right": ...}. `method` is "formula" or
    /// "bruteforce".
    #[pyo3(signature = (method = "formula", max_card = None))]
    fn nuclei<'py>(
        &self,
        py: Python<'py>,
        method: &str,
        max_card: Option<u64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let lim = limits(max_card);
        let (mid, right) = match method {
            "formula" => {
                let t = self.spec.tower();
                let right_spec = if self.spec.subspace().contains(t, Elem::ONE) {
                    self.spec.clone()
                } else {
                    self.spec
                        .with_subspace(self.spec.subspace().normalized(t))
                        .map_err(err)?
                };
                (
                    middle_nucleus_formula(&self.spec).map_err(err)?,
                    right_nucleus_formula(&right_spec, &lim).map_err(err)?,
                )
            }
            "bruteforce" => (
                middle_nucleus_bruteforce(&self.spec, &lim).map_err(err)?,
                right_nucleus_bruteforce(&self.spec, &lim).map_err(err)?,
            ),
            other => {
                return Err(PyValueError::new_err(format!(
                    "method must be 'formula' or 'bruteforce', got {other:?}"
                )))
            }
        };
        let d = PyDict::new(py);
        d.set_item("middle", mid.len())?;
        d.set_item("right", right.len())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "GabidulinCode(k={}, s={}, U={})",
            self.spec.k(),
            self.spec.s(),
            self.spec.subspace().to_json()
        )
    }
}

#[pyfunction]
fn gaussian_binomial(n: u32, m: u32, q: u64) -> BigUint {
    gabidulin::gaussian_binomial(n, m, q)
}

/// The counting bound as a fractions.Fraction.
#[pyfunction]
fn theorem11_bound<'py>(py: Python<'py>, q: u64, n: u32, m: u32, d: u32) -> PyResult<Bound<'py, PyAny>> {
    let b = gabidulin::theorem11_bound(q, n, m, d).map_err(err)?;
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    fraction.call1((b.numer().clone(), b.denom().clone()))
}

/// Orbits of m-dimensional subspaces as (representative, size) pairs.
#[pyfunction]
fn classify_all(py: Python<'_>, tower: &PyTower, m: usize) -> PyResult<Vec<(PySubspace, usize)>> {
    let t = tower.inner.clone();
    let orbits = py
        .detach(|| gabidulin::classify_all(&t, m, &Limits::from_env()))
        .map_err(err)?;
    Ok(orbits
        .into_iter()
        .map(|o| {
            let size = o.members.len();
            (
                PySubspace {
                    tower: t.clone(),
                    inner: o.representative,
                },
                size,
            )
        })
        .collect())
}

/// Census rows as CSV text.
#[pyfunction]
fn census(py: Python<'_>, q: u64, n: u32, k: Vec<u32>, m: Vec<u32>) -> PyResult<String> {
    let table = py
        .detach(|| gabidulin::census(q, n, &k, &m, &Limits::from_env()))
        .map_err(err)?;
    Ok(table.to_csv())
}

#[pyfunction]
fn equivalent_by_theorem(a: &PyCode, b: &PyCode) -> PyResult<bool> {
    gabidulin::equivalent_by_theorem(&a.spec, &b.spec).map_err(err)
}

/// Exhaustive search; returns the witness as a JSON string, or None.
#[pyfunction]
#[pyo3(signature = (a, b, max_card = None))]
fn equivalent_bruteforce(py: Python<'_>, a: &PyCode, b: &PyCode, max_card: Option<u64>) -> PyResult<Option<String>> {
    let lim = limits(max_card);
    let (sa, sb) = (a.spec.clone(), b.spec.clone());
    py.detach(move || {
        let c1 = sa.to_matrix_code(&lim)?;
        let c2 = sb.to_matrix_code(&lim)?;
        gabidulin::equivalent_bruteforce(sa.tower(), &c1, &c2, &lim)
    })
    .map(|w| w.map(|w| w.to_json()))
    .map_err(err)
}

#[pymodule]
fn pygabidulin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTower>()?;
    m.add_class::<PySubspace>()?;
    m.add_class::<PyCode>()?;
    m.add_function(wrap_pyfunction!(gaussian_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(theorem11_bound, m)?)?;
    m.add_function(wrap_pyfunction!(classify_all, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent_by_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent_bruteforce, m)?)?;
    Ok(())
}
