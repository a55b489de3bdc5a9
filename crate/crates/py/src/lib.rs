//! Python bindings over the toolkit. Functions take SMILES strings and
//! raise ValueError with the validation or parse message on bad input.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use molforge::eval::AnswerKind;
use molforge::{canonical_form, parse_smiles, Molecule};

fn parsed(smiles: &str) -> PyResult<Molecule> {
    parse_smiles(smiles).map_err(|err| PyValueError::new_err(err.to_string()))
}

/// Canonical SMILES of a validated molecule.
#[pyfunction]
fn canonical_smiles(smiles: &str) -> PyResult<String> {
    molforge::canonical_smiles(smiles).map_err(|report| PyValueError::new_err(report.summary()))
}

/// Hill-order molecular formula, including any net charge suffix.
#[pyfunction]
fn molecular_formula(smiles: &str) -> PyResult<String> {
    Ok(molforge::molecular_formula(&parsed(smiles)?).to_string())
}

/// (valid, failure_messages); failures are empty exactly when valid.
#[pyfunction]
fn validate(smiles: &str) -> (bool, Vec<String>) {
    let report = molforge::validate(smiles);
    let failures = report.failures.iter().map(|f| f.message.clone()).collect();
    (report.valid, failures)
}

/// Canonical SMILES of the Bemis-Murcko scaffold; empty for acyclic
/// molecules.
#[pyfunction]
fn murcko_scaffold(smiles: &str) -> PyResult<String> {
    Ok(canonical_form(&molforge::murcko_scaffold(&parsed(smiles)?)))
}

#[pyclass(frozen, get_all)]
struct MolStats {
    heavy_atom_count: usize,
    molecular_weight: f64,
    ring_count: usize,
}

#[pymethods]
impl MolStats {
    fn __repr__(&self) -> String {
        format!(
            "MolStats(heavy_atom_count={}, molecular_weight={}, ring_count={})",
            self.heavy_atom_count, self.molecular_weight, self.ring_count
        )
    }
}

/// Heavy atom count, average molecular weight, and SSSR ring count.
#[pyfunction]
fn mol_stats(smiles: &str) -> PyResult<MolStats> {
    let stats = molforge::mol_stats(&parsed(smiles)?);
    Ok(MolStats {
        heavy_atom_count: stats.heavy_atom_count,
        molecular_weight: stats.molecular_weight,
        ring_count: stats.ring_count,
    })
}

/// Bitset fingerprint; compare two of the same kind with tanimoto().
#[pyclass(frozen)]
struct Fingerprint {
    inner: molforge::Fingerprint,
}

#[pymethods]
impl Fingerprint {
    fn bit(&self, index: usize) -> PyResult<bool> {
        if index >= self.inner.width() {
            return Err(PyValueError::new_err(format!(
                "bit index {index} out of range for width {}",
                self.inner.width()
            )));
        }
        Ok(self.inner.bit(index))
    }

    fn popcount(&self) -> u32 {
        self.inner.popcount()
    }

    fn width(&self) -> usize {
        self.inner.width()
    }

    fn __repr__(&self) -> String {
        format!("Fingerprint(width={}, popcount={})", self.inner.width(), self.inner.popcount())
    }
}

fn checked_width(width: usize) -> PyResult<usize> {
    if width == 0 {
        return Err(PyValueError::new_err("fingerprint width must be positive"));
    }
    Ok(width)
}

/// Morgan (circular) fingerprint. Defaults match the scoring metrics.
#[pyfunction]
#[pyo3(signature = (smiles, radius = 2, width = 2048))]
fn morgan_fingerprint(smiles: &str, radius: u32, width: usize) -> PyResult<Fingerprint> {
    let mol = parsed(smiles)?;
    let inner = molforge::morgan_fingerprint(&mol, radius, checked_width(width)?);
    Ok(Fingerprint { inner })
}

/// Linear path fingerprint. Defaults match the scoring metrics.
#[pyfunction]
#[pyo3(signature = (smiles, min_len = 1, max_len = 7, width = 2048))]
fn path_fingerprint(
    smiles: &str,
    min_len: usize,
    max_len: usize,
    width: usize,
) -> PyResult<Fingerprint> {
    if min_len < 1 || min_len > max_len {
        return Err(PyValueError::new_err(format!(
            "path length bounds must satisfy 1 <= min <= max, got {min_len}..={max_len}"
        )));
    }
    let mol = parsed(smiles)?;
    let inner = molforge::path_fingerprint(&mol, min_len, max_len, checked_width(width)?);
    Ok(Fingerprint { inner })
}

/// Tanimoto similarity of two fingerprints of the same kind and width.
#[pyfunction]
fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> PyResult<f64> {
    molforge::tanimoto(&a.inner, &b.inner).map_err(|err| PyValueError::new_err(err.to_string()))
}

fn answer_kind(kind: &str) -> PyResult<AnswerKind> {
    match kind.to_ascii_lowercase().as_str() {
        "smiles" => Ok(AnswerKind::Smiles),
        "iupac" => Ok(AnswerKind::Iupac),
        "formula" => Ok(AnswerKind::Formula),
        "number" => Ok(AnswerKind::Number),
        "boolean" => Ok(AnswerKind::Boolean),
        "text" => Ok(AnswerKind::Text),
        _ => Err(PyValueError::new_err(format!("unknown answer kind {kind:?}"))),
    }
}

/// Pulls the answer of the given kind ("smiles", "iupac", "formula",
/// "number", "boolean", or "text") out of a model response, or None.
#[pyfunction]
#[pyo3(signature = (raw, kind = "smiles"))]
fn extract_answer(raw: &str, kind: &str) -> PyResult<Option<String>> {
    Ok(molforge::extract_answer(raw, answer_kind(kind)?))
}

#[pymodule]
#[pyo3(name = "molforge")]
fn molforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(canonical_smiles, m)?)?;
    m.add_function(wrap_pyfunction!(molecular_formula, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(murcko_scaffold, m)?)?;
    m.add_function(wrap_pyfunction!(mol_stats, m)?)?;
    m.add_function(wrap_pyfunction!(morgan_fingerprint, m)?)?;
    m.add_function(wrap_pyfunction!(path_fingerprint, m)?)?;
    m.add_function(wrap_pyfunction!(tanimoto, m)?)?;
    m.add_function(wrap_pyfunction!(extract_answer, m)?)?;
    m.add_class::<Fingerprint>()?;
    m.add_class::<MolStats>()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyTuple;

    /// One test drives the whole module through a real interpreter;
    /// inittab registration must happen before the first attach.
    #[test]
    fn module_round_trips_through_python() {
        pyo3::append_to_inittab!(molforge_py);
        Python::attach(|py| {
            let module = py.import("molforge").expect("module imports");
            let call = |name: &str, args: &[&str]| -> Py<PyAny> {
                let args = PyTuple::new(py, args).expect("args build");
                module
                    .getattr(name)
                    .expect("function exists")
                    .call1(args)
                    .unwrap_or_else(|err| panic!("{name} failed: {err}"))
                    .unbind()
            };

            let glucose_ring = "C(C1C(C(C(C(O1)O)O)O)O)O";
            let canon: String =
                call("canonical_smiles", &[glucose_ring]).extract(py).expect("string");
            assert_eq!(canon, molforge::canonical_smiles("OCC1OC(O)C(O)C(O)C1O").unwrap());

            let formula: String =
                call("molecular_formula", &[glucose_ring]).extract(py).expect("string");
            assert_eq!(formula, "C6H12O6");

            let (valid, failures): (bool, Vec<String>) =
                call("validate", &["XX"]).extract(py).expect("tuple");
            assert!(!valid);
            assert!(!failures.is_empty());

            let err = module
                .getattr("canonical_smiles")
                .unwrap()
                .call1(("C1CC",))
                .expect_err("unclosed ring must raise");
            assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));

            let similarity: f64 = module
                .getattr("tanimoto")
                .unwrap()
                .call1((
                    call("morgan_fingerprint", &["CCO"]),
                    call("morgan_fingerprint", &["CCC"]),
                ))
                .expect("tanimoto call")
                .extract()
                .expect("float");
            assert!((similarity - 3.0 / 7.0).abs() < 1e-12);

            let scaffold: String =
                call("murcko_scaffold", &["CCc1ccccc1"]).extract(py).expect("string");
            assert_eq!(scaffold, molforge::canonical_smiles("c1ccccc1").unwrap());

            let answer: Option<String> =
                call("extract_answer", &["Answer: <SMILES>CCO;CC</SMILES>", "smiles"])
                    .extract(py)
                    .expect("option");
            assert_eq!(answer.as_deref(), Some("CCO;CC"));
        });
    }
}
