use fitting_core::delta_invariants::{self as delta, DeltaError};
use fitting_core::exact_linalg::{
    json::parse_rational, smith_normal_form as snf, IntMatrix, RatMatrix, Subspace,
};
use fitting_core::nilpotent_groups as groups;
use fitting_core::pipeline::{self, PipelineError};
use fitting_core::symplectic::{self as symp, SymplecticSpace};
use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(fitting_quotients, CertificateError, PyException);

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pipeline_err(e: PipelineError) -> PyErr {
    match e {
        PipelineError::InvalidInput(_) => value_err(e),
        other => CertificateError::new_err(other.to_string()),
    }
}

fn int_matrix(rows: Vec<Vec<BigInt>>) -> PyResult<IntMatrix> {
    IntMatrix::from_rows(rows, None).map_err(value_err)
}

fn rat_rows(rows: &[Vec<BigInt>]) -> PyResult<RatMatrix> {
    Ok(int_matrix(rows.to_vec())?.to_rat())
}

/// Accepts ints or `"p/q"` strings.
fn rational_vector(v: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<BigRational>> {
    v.into_iter()
        .map(|x| {
            if let Ok(i) = x.extract::<BigInt>() {
                return Ok(BigRational::from_integer(i));
            }
            let s: String = x.extract()?;
            parse_rational(&s).ok_or_else(|| value_err(format!("not a rational: {s:?}")))
        })
        .collect()
}

/// `U A V = D` with `U`, `V` unimodular.
#[pyclass(frozen, get_all)]
struct SmithForm {
    u: Vec<Vec<BigInt>>,
    d: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    invariants: Vec<BigInt>,
}

#[pyfunction]
fn smith_normal_form(matrix: Vec<Vec<BigInt>>) -> PyResult<SmithForm> {
    let s = snf(&int_matrix(matrix)?);
    Ok(SmithForm {
        invariants: s.invariants(),
        u: s.u.to_rows(),
        d: s.d.to_rows(),
        v: s.v.to_rows(),
    })
}

/// Returns `(T, invariants)` with `Tᵀ B T` in block form.
#[pyfunction]
fn symplectic_normal_form(form: Vec<Vec<BigInt>>) -> PyResult<(Vec<Vec<BigInt>>, Vec<BigInt>)> {
    let f = symp::integer_symplectic_normal_form(&int_matrix(form)?).map_err(value_err)?;
    Ok((f.t.to_rows(), f.invariants))
}

/// Canonical basis of an isotropic `k`-subspace of the standard form on
/// `Q^{2k}` meeting every listed subspace trivially.
#[pyfunction]
fn lagrangian_avoiding(k: usize, omega: Vec<Vec<Vec<BigInt>>>) -> PyResult<Vec<Vec<BigInt>>> {
    let space = SymplecticSpace::standard(k);
    let family = omega
        .iter()
        .map(|vs| Subspace::from_int_spanning(2 * k, vs).map_err(value_err))
        .collect::<PyResult<Vec<_>>>()?;
    let l = symp::lagrangian_avoiding(&space, &family).map_err(value_err)?;
    Ok(l.basis().to_vec())
}

#[pyclass(frozen)]
struct HeisenbergGroup {
    inner: groups::HeisenbergGroup,
}

#[pymethods]
impl HeisenbergGroup {
    #[new]
    fn new(invariants: Vec<BigInt>) -> PyResult<Self> {
        Ok(HeisenbergGroup {
            inner: groups::HeisenbergGroup::new(invariants).map_err(value_err)?,
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn invariants(&self) -> Vec<BigInt> {
        self.inner.invariants().to_vec()
    }

    fn commutator_form(&self) -> Vec<Vec<BigInt>> {
        self.inner.commutator_form().to_rows()
    }

    #[pyo3(signature = (tag = "Q1"))]
    fn delta_bound(&self, tag: &str) -> DeltaBound {
        DeltaBound {
            inner: delta::heisenberg_delta_bound(self.inner.rank(), tag),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "HeisenbergGroup({:?})",
            self.invariants()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
        )
    }
}

/// Finite union of rational simplicial cones.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct DeltaBound {
    inner: delta::DeltaBound,
}

#[pymethods]
impl DeltaBound {
    /// `cones` is a list of generator lists, each generator an integer vector.
    #[new]
    #[pyo3(signature = (ambient_dim, cones, tag = "py"))]
    fn new(ambient_dim: usize, cones: Vec<Vec<Vec<BigInt>>>, tag: &str) -> PyResult<Self> {
        let cones = cones
            .into_iter()
            .map(|g| delta::SimplicialCone::new(ambient_dim, g, tag).map_err(value_err))
            .collect::<PyResult<_>>()?;
        Ok(DeltaBound {
            inner: delta::DeltaBound { ambient_dim, cones },
        })
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim
    }

    #[getter]
    fn cones(&self) -> Vec<(String, Vec<Vec<BigInt>>)> {
        self.inner
            .cones
            .iter()
            .map(|c| (c.tag.clone(), c.generators().to_vec()))
            .collect()
    }

    fn contains(&self, v: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        let v = rational_vector(v)?;
        if v.len() != self.inner.ambient_dim {
            return Err(value_err("dimension mismatch"));
        }
        Ok(self.inner.contains(&v))
    }

    /// A nonzero `v` with `±v` in the bound, as `"p/q"` strings, or `None`.
    fn contains_line(&self) -> Option<Vec<String>> {
        delta::contains_line(&self.inner).map(|v| v.iter().map(|x| x.to_string()).collect())
    }

    /// JSON tameness certificate; raises `CertificateError` on a line.
    fn tameness_certificate(&self) -> PyResult<String> {
        let cert = delta::tameness_certificate(&self.inner, vec![])
            .map_err(|e: DeltaError| CertificateError::new_err(e.to_string()))?;
        Ok(serde_json::to_string_pretty(&cert).expect("certificate serializes"))
    }

    fn pullback(&self, pi_star: Vec<Vec<BigInt>>) -> PyResult<DeltaBound> {
        let inner = delta::pullback(&self.inner, &rat_rows(&pi_star)?).map_err(value_err)?;
        Ok(DeltaBound { inner })
    }

    fn transfer(&self, iota_star: Vec<Vec<BigInt>>) -> PyResult<DeltaBound> {
        let inner =
            delta::induced_transfer(&self.inner, &rat_rows(&iota_star)?).map_err(value_err)?;
        Ok(DeltaBound { inner })
    }

    #[staticmethod]
    fn union(bounds: Vec<DeltaBound>) -> PyResult<DeltaBound> {
        let parts: Vec<_> = bounds.into_iter().map(|b| b.inner).collect();
        Ok(DeltaBound {
            inner: delta::union(&parts).map_err(value_err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.cones.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "DeltaBound(ambient_dim={}, cones={})",
            self.inner.ambient_dim,
            self.inner.cones.len()
        )
    }
}

#[pyclass(frozen)]
struct ProblemSpec {
    inner: pipeline::ProblemSpec,
}

#[pymethods]
impl ProblemSpec {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(ProblemSpec {
            inner: pipeline::ProblemSpec::from_json(text).map_err(pipeline_err)?,
        })
    }

    /// Subdirect decomposition as JSON.
    fn decompose(&self) -> PyResult<String> {
        let d = self.inner.decomposition().map_err(pipeline_err)?;
        Ok(serde_json::to_string_pretty(&d).expect("decomposition serializes"))
    }

    fn synthesize(&self) -> PyResult<SynthesisReport> {
        Ok(SynthesisReport {
            inner: pipeline::run_pipeline(&self.inner).map_err(pipeline_err)?,
        })
    }
}

#[pyclass(frozen)]
struct SynthesisReport {
    inner: pipeline::SynthesisReport,
}

#[pymethods]
impl SynthesisReport {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(SynthesisReport {
            inner: serde_json::from_str(text).map_err(value_err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    /// Names of the replayed checks; raises `CertificateError` on the first failure.
    fn verify(&self) -> PyResult<Vec<String>> {
        pipeline::verify_report(&self.inner).map_err(pipeline_err)
    }

    #[getter]
    fn final_bound(&self) -> DeltaBound {
        DeltaBound {
            inner: self.inner.final_bound.clone(),
        }
    }

    /// `(factor tag, basis)` for each member of the avoided family.
    #[getter]
    fn omega(&self) -> Vec<(String, Vec<Vec<BigInt>>)> {
        self.inner
            .omega
            .iter()
            .map(|e| (e.factor.clone(), e.subspace.basis().to_vec()))
            .collect()
    }

    #[getter]
    fn factor_tags(&self) -> Vec<(String, usize)> {
        self.inner
            .factors
            .iter()
            .map(|f| (f.tag.clone(), f.rank))
            .collect()
    }
}

#[pyfunction]
fn synthesize(spec_json: &str) -> PyResult<SynthesisReport> {
    ProblemSpec::from_json(spec_json)?.synthesize()
}

#[pyfunction]
fn verify_report(report_json: &str) -> PyResult<Vec<String>> {
    SynthesisReport::from_json(report_json)?.verify()
}

#[pymodule]
fn fitting_quotients(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CertificateError", m.py().get_type::<CertificateError>())?;
    m.add_class::<SmithForm>()?;
    m.add_class::<HeisenbergGroup>()?;
    m.add_class::<DeltaBound>()?;
    m.add_class::<ProblemSpec>()?;
    m.add_class::<SynthesisReport>()?;
    m.add_function(wrap_pyfunction!(smith_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(symplectic_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(lagrangian_avoiding, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(verify_report, m)?)?;
    Ok(())
}
