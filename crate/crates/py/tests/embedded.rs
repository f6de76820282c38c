use std::ffi::CString;

use pyo3::prelude::*;

use dendro_py::dendro_module;

const SCRIPT: &str = r#"
import json
import dendro as d

c2 = d.Tree("[**]")
assert c2.size == 3 and str(c2) == "[**]"
assert len(d.enumerate_trees(3, "closed")) == 2
rep = d.Presheaf.representable(c2, 3)
assert d.Presheaf.from_json(rep.to_json()).counts() == rep.counts()
assert d.PresheafMap.boundary(c2, 3).is_normal_mono(3)
assert not d.Presheaf.from_json(rep.to_json()).coskeleton_unit(0).is_iso()
assert d.matching_report(4)[3:] == (True, True)
assert json.loads(d.build_e("open", 1))["exhausted_at"] is None
try:
    d.Tree("[*]", "mauve")
    raise AssertionError("bad flavor accepted")
except ValueError as e:
    assert "mauve" in str(e)
"#;

#[test]
fn bindings_from_embedded_python() {
    pyo3::append_to_inittab!(dendro_module);
    Python::initialize();
    Python::attach(|py| {
        let code = CString::new(SCRIPT).unwrap();
        py.run(&code, None, None).map_err(|e| e.display(py)).expect("script runs");
    });
}
