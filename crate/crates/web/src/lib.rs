//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Every export takes plain strings and returns a JSON string, so the page
//! needs no bindings beyond `JSON.parse`.  The `*_json` functions are the
//! native versions used by the tests.

use cubic7::exactnum::parse_number;
use cubic7::gitstab::{self, Family};
use cubic7::polyalg::f_ab;
use cubic7::report::{self, Grid};
use cubic7::singular;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Stratum labels on a rational grid "a0,a1,b0,b1,step", plus an SVG plot.
pub fn plane_json(grid: &str) -> Result<String, String> {
    let g = Grid::parse(grid).map_err(|e| e.to_string())?;
    let rows = report::export_moduli_plane(&g);
    let svg = report::plane_svg(&g, &rows);
    Ok(json!({ "rows": rows, "svg": svg }).to_string())
}

/// Stability of a support pattern.  `slots` is a comma list of slot indices
/// (0-based, a1.. for C7, c1.. for F21).
pub fn classify_json(family: &str, slots: &str) -> Result<String, String> {
    let fam = match family {
        "c7" => Family::C7,
        "f21" => Family::F21,
        _ => return Err(format!("unknown family `{family}` (c7 or f21)")),
    };
    let mut idx = vec![];
    for s in slots.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let i: usize = s.parse().map_err(|_| format!("bad slot `{s}`"))?;
        if i >= fam.slots() {
            return Err(format!("slot {i} out of range (family has {})", fam.slots()));
        }
        idx.push(i);
    }
    let pattern = gitstab::pattern_from_slots(&idx);
    let (oracle, cert) = gitstab::oracle_classify(fam, pattern);
    let closed = match fam {
        Family::C7 => gitstab::closed_form_c7(pattern),
        Family::F21 => gitstab::closed_form_f21(pattern),
    };
    Ok(json!({
        "pattern": gitstab::pattern_string(fam, pattern),
        "oracle": oracle.as_str(),
        "closed_form": closed.as_str(),
        "certificate": cert,
    })
    .to_string())
}

/// Singular points of F_{a,b} with their classes.
pub fn singular_json(a: &str, b: &str) -> Result<String, String> {
    let a = parse_number(a).map_err(|e| e.to_string())?;
    let b = parse_number(b).map_err(|e| e.to_string())?;
    let f = f_ab(&a, &b);
    let pts = singular::singular_points(&a, &b);
    let mut out = vec![];
    for p in &pts {
        let c = singular::classify(&f, &p.coords).map_err(|e| e.to_string())?;
        out.push(json!({
            "coords": p.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "class": c.tag,
            "corank": c.corank,
        }));
    }
    Ok(json!({
        "label": report::plane_label(&a, &b),
        "on_curve": singular::discriminant_curve(&a, &b),
        "points": out,
    })
    .to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn explore_plane(grid: &str) -> Result<String, JsValue> {
    js(plane_json(grid))
}

#[wasm_bindgen]
pub fn classify_support(family: &str, slots: &str) -> Result<String, JsValue> {
    js(classify_json(family, slots))
}

#[wasm_bindgen]
pub fn find_singular_points(a: &str, b: &str) -> Result<String, JsValue> {
    js(singular_json(a, b))
}
