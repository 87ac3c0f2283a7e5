use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::wrap_pymodule;

/// Runs `python/smoke_test.py` against the module in an embedded
/// interpreter.
#[test]
fn python_smoke_script() {
    let script = include_str!("../../../python/smoke_test.py");
    Python::attach(|py| -> PyResult<()> {
        let module = wrap_pymodule!(lpa_ibn::lpa_ibn)(py);
        py.import("sys")?
            .getattr("modules")?
            .set_item("lpa_ibn", module)?;
        let code = CString::new(script).unwrap();
        let globals = pyo3::types::PyDict::new(py);
        globals.set_item("__name__", "smoke")?;
        py.run(&code, Some(&globals), None)?;
        py.run(c"main()", Some(&globals), None)
    })
    .unwrap();
}
