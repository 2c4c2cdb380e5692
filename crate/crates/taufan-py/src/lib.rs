use pyo3::prelude::*;

#[pymodule]
fn taufan_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
