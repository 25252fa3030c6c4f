use pyo3::exceptions::{PyArithmeticError, PyMemoryError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde_json::Value;

use centext::cohomology::{z2_b2_h2, H2Description};
use centext::embedding::{embed, EmbeddingResult};
use centext::examples::{carry_report, heisenberg_carry_cocycle, heisenberg_report};
use centext::io::{parse_cocycle, to_json, BilinearJson, CocycleJson, EmbeddingJson};
use centext::twisted::{ExtElement, ExtensionGroup};
use centext::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Capacity { .. } => PyMemoryError::new_err(e.to_string()),
        Error::Inconsistent(_) | Error::CommutatorIncompatible(..) => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

#[pyclass(name = "AbelianGroup", module = "centext", frozen, from_py_object)]
#[derive(Clone)]
struct PyAbelianGroup(centext::AbelianGroup);

#[pymethods]
impl PyAbelianGroup {
    /// Any list of positive integers; the invariant factors are computed.
    #[new]
    fn new(orders: Vec<i64>) -> PyResult<Self> {
        Ok(Self(centext::canonicalize(&orders).map_err(err)?.target))
    }

    #[getter]
    fn factors(&self) -> Vec<u64> {
        self.0.factors().to_vec()
    }

    #[getter]
    fn order(&self) -> u128 {
        self.0.order()
    }

    #[getter]
    fn exponent(&self) -> u64 {
        self.0.exponent()
    }

    fn elements(&self) -> Vec<Vec<u64>> {
        self.0.elements().map(|e| e.into_coords()).collect()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("AbelianGroup({:?})", self.0.factors())
    }
}

#[pyclass(name = "Cocycle", module = "centext", frozen, from_py_object)]
#[derive(Clone)]
struct PyCocycle(centext::Cocycle);

#[pymethods]
impl PyCocycle {
    #[new]
    fn new(a: &PyAbelianGroup, b: &PyAbelianGroup, table: Vec<Vec<Vec<u64>>>) -> PyResult<Self> {
        Ok(Self(centext::Cocycle::from_table(&a.0, &b.0, &table).map_err(err)?))
    }

    /// The carry cocycle of `0 → Z/m → Z/nm → Z/n → 0`.
    #[staticmethod]
    fn carry(n: u64, m: u64) -> PyResult<Self> {
        Ok(Self(centext::cocycle::carry_cocycle(n, m).map_err(err)?))
    }

    #[staticmethod]
    fn heisenberg_carry(p: u64) -> PyResult<Self> {
        Ok(Self(heisenberg_carry_cocycle(p).map_err(err)?))
    }

    #[staticmethod]
    fn bilinear(a: &PyAbelianGroup, b: &PyAbelianGroup, matrix: Vec<Vec<Vec<u64>>>) -> PyResult<Self> {
        let doc = BilinearJson {
            a: (&a.0).into(),
            b: (&b.0).into(),
            matrix,
        };
        let m = centext::io::parse_bilinear(&to_json(&doc)).map_err(err)?;
        Ok(Self(m.to_cocycle().map_err(err)?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self(parse_cocycle(text).map_err(err)?))
    }

    fn to_json(&self) -> String {
        to_json(&CocycleJson::from(&self.0))
    }

    #[getter]
    fn a(&self) -> PyAbelianGroup {
        PyAbelianGroup(self.0.group_a().clone())
    }

    #[getter]
    fn b(&self) -> PyAbelianGroup {
        PyAbelianGroup(self.0.group_b().clone())
    }

    fn table(&self) -> Vec<Vec<Vec<u64>>> {
        self.0.to_table()
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = self.0.validate();
        let v = serde_json::to_value(&r).map_err(|e| PyValueError::new_err(e.to_string()))?;
        to_py(py, &v)
    }

    fn is_valid(&self) -> bool {
        self.0.validate().passed()
    }

    /// A witness `h` with `self − other = ∂h`, or None.
    fn cohomologous(&self, other: &PyCocycle) -> PyResult<Option<Vec<Vec<u64>>>> {
        Ok(self.0.cohomologous(&other.0).map_err(err)?.map(|h| h.values()))
    }

    fn __add__(&self, other: &PyCocycle) -> PyResult<Self> {
        Ok(Self(self.0.add(&other.0).map_err(err)?))
    }

    fn __sub__(&self, other: &PyCocycle) -> PyResult<Self> {
        Ok(Self(self.0.sub(&other.0).map_err(err)?))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Cocycle(A={:?}, B={:?})", self.0.group_a().factors(), self.0.group_b().factors())
    }
}

#[pyclass(name = "H2", module = "centext", frozen)]
struct PyH2(H2Description);

#[pymethods]
impl PyH2 {
    #[getter]
    fn factors(&self) -> Vec<u64> {
        self.0.abstract_group().factors().to_vec()
    }

    #[getter]
    fn order(&self) -> u128 {
        self.0.abstract_group().order()
    }

    #[getter]
    fn z2_order(&self) -> u128 {
        self.0.z2_order()
    }

    #[getter]
    fn b2_order(&self) -> u128 {
        self.0.b2_order()
    }

    fn representatives(&self) -> Vec<PyCocycle> {
        self.0.representatives().iter().cloned().map(PyCocycle).collect()
    }

    /// Coordinates of the class of `gamma` in the invariant-factor basis.
    fn project(&self, gamma: &PyCocycle) -> PyResult<Vec<u64>> {
        self.0.project(&gamma.0).map_err(err)
    }

    fn class_cocycle(&self, coords: Vec<u64>) -> PyResult<PyCocycle> {
        Ok(PyCocycle(self.0.class_cocycle(&coords).map_err(err)?))
    }

    fn bilinear_factors(&self) -> PyResult<Vec<u64>> {
        Ok(self.0.bilinear_subgroup().map_err(err)?.subgroup.group.factors().to_vec())
    }

    fn ext_factors(&self) -> PyResult<Vec<u64>> {
        Ok(self.0.ext_subgroup().map_err(err)?.group.factors().to_vec())
    }
}

#[pyclass(name = "ExtensionGroup", module = "centext", frozen)]
struct PyExtensionGroup(ExtensionGroup);

fn element(g: (Vec<u64>, Vec<u64>)) -> ExtElement {
    ExtElement { a: g.0, b: g.1 }
}

fn pair(g: ExtElement) -> (Vec<u64>, Vec<u64>) {
    (g.a, g.b)
}

#[pymethods]
impl PyExtensionGroup {
    #[new]
    fn new(gamma: &PyCocycle) -> PyResult<Self> {
        Ok(Self(ExtensionGroup::build(&gamma.0).map_err(err)?))
    }

    #[getter]
    fn order(&self) -> u128 {
        self.0.order()
    }

    fn elements(&self) -> Vec<(Vec<u64>, Vec<u64>)> {
        self.0.elements().map(pair).collect()
    }

    fn mul(&self, g: (Vec<u64>, Vec<u64>), h: (Vec<u64>, Vec<u64>)) -> PyResult<(Vec<u64>, Vec<u64>)> {
        let (g, h) = (self.checked(g)?, self.checked(h)?);
        Ok(pair(self.0.mul(&g, &h)))
    }

    fn inv(&self, g: (Vec<u64>, Vec<u64>)) -> PyResult<(Vec<u64>, Vec<u64>)> {
        Ok(pair(self.0.inv(&self.checked(g)?)))
    }

    fn power(&self, g: (Vec<u64>, Vec<u64>), n: i64) -> PyResult<(Vec<u64>, Vec<u64>)> {
        Ok(pair(self.0.power(&self.checked(g)?, n)))
    }

    fn commutator(&self, g: (Vec<u64>, Vec<u64>), h: (Vec<u64>, Vec<u64>)) -> PyResult<(Vec<u64>, Vec<u64>)> {
        let (g, h) = (self.checked(g)?, self.checked(h)?);
        Ok(pair(self.0.commutator(&g, &h)))
    }

    fn element_order(&self, g: (Vec<u64>, Vec<u64>)) -> PyResult<u64> {
        Ok(self.0.element_order(&self.checked(g)?))
    }

    fn is_abelian(&self) -> bool {
        self.0.is_abelian()
    }

    fn structure<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let s = self.0.structure_report().map_err(err)?;
        let v = serde_json::json!({
            "order": s.order,
            "exponent": s.exponent,
            "order_histogram": s.order_histogram,
            "center_order": s.center_order,
            "derived_subgroup": s.derived_subgroup.factors(),
            "abelianization": s.abelianization.factors(),
            "abelian": s.is_abelian,
            "nilpotency_class": s.nilpotency_class,
        });
        to_py(py, &v)
    }

    /// A bilinear cocycle in the same class, or None.
    fn bilinear_representative(&self) -> PyResult<Option<PyCocycle>> {
        match self.0.is_twisted_product_class().map_err(err)? {
            Some(m) => Ok(Some(PyCocycle(m.to_cocycle().map_err(err)?))),
            None => Ok(None),
        }
    }

    fn embed(&self) -> PyResult<PyEmbedding> {
        Ok(PyEmbedding(embed(&self.0).map_err(err)?))
    }
}

impl PyExtensionGroup {
    fn checked(&self, g: (Vec<u64>, Vec<u64>)) -> PyResult<ExtElement> {
        let g = element(g);
        if self.0.contains(&g) {
            Ok(g)
        } else {
            Err(PyValueError::new_err(format!("{:?} is not a canonical element", (g.a, g.b))))
        }
    }
}

#[pyclass(name = "Embedding", module = "centext", frozen)]
struct PyEmbedding(EmbeddingResult);

#[pymethods]
impl PyEmbedding {
    #[getter]
    fn l_rank(&self) -> usize {
        self.0.l_rank()
    }

    #[getter]
    fn image_f(&self) -> Vec<u64> {
        self.0.image_f.factors().to_vec()
    }

    fn passed(&self) -> bool {
        self.0.report.passed()
    }

    fn target_is_abelian(&self) -> bool {
        self.0.target_is_abelian()
    }

    /// `φ(g) = (π(g), f(g))` with `f(g)` as reduced fractions in `[0, 1)`.
    fn phi(&self, g: (Vec<u64>, Vec<u64>)) -> PyResult<(Vec<u64>, Vec<String>)> {
        let g = element(g);
        if !self.0.source.contains(&g) {
            return Err(PyValueError::new_err("not an element of the source group"));
        }
        let (a, f) = self.0.phi(&g);
        Ok((a, f.to_strings()))
    }

    fn to_json(&self) -> String {
        to_json(&EmbeddingJson::from(&self.0))
    }
}

#[pyfunction]
fn h2(a: &PyAbelianGroup, b: &PyAbelianGroup) -> PyResult<PyH2> {
    Ok(PyH2(z2_b2_h2(&a.0, &b.0).map_err(err)?))
}

#[pyfunction]
fn carry_example<'py>(py: Python<'py>, p: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = carry_report(p).map_err(err)?;
    to_py(py, &serde_json::json!(r))
}

#[pyfunction]
fn heisenberg_example<'py>(py: Python<'py>, p: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = heisenberg_report(p).map_err(err)?;
    to_py(py, &serde_json::json!(r))
}

#[pymodule]
#[pyo3(name = "centext")]
fn centext_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAbelianGroup>()?;
    m.add_class::<PyCocycle>()?;
    m.add_class::<PyH2>()?;
    m.add_class::<PyExtensionGroup>()?;
    m.add_class::<PyEmbedding>()?;
    m.add_function(wrap_pyfunction!(h2, m)?)?;
    m.add_function(wrap_pyfunction!(carry_example, m)?)?;
    m.add_function(wrap_pyfunction!(heisenberg_example, m)?)?;
    Ok(())
}
