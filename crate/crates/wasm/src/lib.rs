//! Browser bindings: rot4 slice heatmaps, single-point bound evaluation and
//! isotropic-state bound curves. The plain functions are native-testable;
//! the `wasm_*` exports wrap them for JavaScript.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use entbound::bounds::{dual_upper, mb_lower, positive_map_bound, BoundReport};
use entbound::maps::reduction_map;
use entbound::observables::AlphaStrategy;
use entbound::scan::{lattice, subdivisions, Rot4Scanner, ScanRow};
use entbound::states::isotropic;
use entbound::RotParams;

pub const COLUMNS: [&str; 6] = [
    "tr_rho_rhoGamma",
    "breuer_value",
    "mb_raw",
    "transp_raw",
    "ppt_min_eig",
    "entropic2_violated",
];

fn column(row: &ScanRow, name: &str) -> Result<f64, String> {
    Ok(match name {
        "tr_rho_rhoGamma" => row.tr_rho_rho_gamma,
        "breuer_value" => row.breuer_value,
        "mb_raw" => row.mb_raw,
        "transp_raw" => row.transp_raw,
        "ppt_min_eig" => row.ppt_min_eig,
        "entropic2_violated" => f64::from(u8::from(row.entropic2_violated)),
        other => return Err(format!("unknown column {other:?}")),
    })
}

/// Row-major (n+1)×(n+1) grid over one face of the simplex. For `slice`
/// "p0" the axes are (q, r); for "q0" they are (p, r). Cells outside the
/// simplex are NaN.
pub fn rot4_slice(slice: &str, name: &str, step: f64) -> Result<Vec<f64>, String> {
    let n = subdivisions(step).map_err(|e| e.to_string())?;
    let scanner = Rot4Scanner::new().map_err(|e| e.to_string())?;
    let nf = n as f64;
    let mut out = vec![f64::NAN; (n + 1) * (n + 1)];
    for (a, b, _) in lattice(n).into_iter().filter(|t| t.2 == 0) {
        let (x, y) = (a as f64 / nf, b as f64 / nf);
        let params = match slice {
            "p0" => RotParams::new(0.0, x, y),
            "q0" => RotParams::new(x, 0.0, y),
            other => return Err(format!("unknown slice {other:?}")),
        }
        .map_err(|e| e.to_string())?;
        let row = scanner.row(params).map_err(|e| e.to_string())?;
        out[a * (n + 1) + b] = column(&row, name)?;
    }
    Ok(out)
}

/// All scan columns at one (p, q, r) point, as JSON.
pub fn rot4_point(p: f64, q: f64, r: f64) -> Result<String, String> {
    let params = RotParams::new(p, q, r).map_err(|e| e.to_string())?;
    let row = Rot4Scanner::new()
        .and_then(|s| s.row(params))
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&row).map_err(|e| e.to_string())
}

#[derive(Serialize)]
pub struct IsotropicCurves {
    pub d: usize,
    pub fidelity: Vec<f64>,
    pub exact: Vec<f64>,
    pub mb: Vec<f64>,
    pub dual: Vec<f64>,
    pub reduction_canonical: Vec<f64>,
}

/// Bounds on the C scale along the isotropic family f ∈ [0, 1].
pub fn isotropic_curves(d: usize, points: usize) -> Result<IsotropicCurves, String> {
    let err = |e: entbound::Error| e.to_string();
    if points < 2 {
        return Err("need at least two points".into());
    }
    let r = reduction_map(d).map_err(err)?;
    let mut c = IsotropicCurves {
        d,
        fidelity: Vec::with_capacity(points),
        exact: Vec::with_capacity(points),
        mb: Vec::with_capacity(points),
        dual: Vec::with_capacity(points),
        reduction_canonical: Vec::with_capacity(points),
    };
    for i in 0..points {
        let f = i as f64 / (points - 1) as f64;
        let s = isotropic(d, f).map_err(err)?;
        let scale = |b: BoundReport| b.on_c_scale();
        c.fidelity.push(f);
        c.exact.push(s.concurrence);
        c.mb.push(scale(mb_lower(&s.state).map_err(err)?));
        c.dual.push(scale(dual_upper(&s.state).map_err(err)?));
        c.reduction_canonical
            .push(scale(positive_map_bound(&s.state, &r, AlphaStrategy::Canonical).map_err(err)?));
    }
    Ok(c)
}

#[wasm_bindgen(js_name = rot4Slice)]
pub fn wasm_rot4_slice(slice: &str, name: &str, step: f64) -> Result<Vec<f64>, JsError> {
    rot4_slice(slice, name, step).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = rot4Point)]
pub fn wasm_rot4_point(p: f64, q: f64, r: f64) -> Result<String, JsError> {
    rot4_point(p, q, r).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = isotropicCurves)]
pub fn wasm_isotropic_curves(d: usize, points: usize) -> Result<String, JsError> {
    isotropic_curves(d, points)
        .and_then(|c| serde_json::to_string(&c).map_err(|e| e.to_string()))
        .map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_shape_and_mask() {
        let g = rot4_slice("p0", "breuer_value", 0.1).unwrap();
        assert_eq!(g.len(), 121);
        assert!(g[0].is_finite() && g[10].is_finite() && g[110].is_finite());
        assert!(g[120].is_nan());
        assert!(g.iter().filter(|x| x.is_finite()).all(|&x| x <= 1e-12));
        assert!(rot4_slice("r0", "mb_raw", 0.1).is_err());
        assert!(rot4_slice("p0", "nope", 0.1).is_err());
    }

    #[test]
    fn point_json_has_frozen_fields() {
        let v: serde_json::Value = serde_json::from_str(&rot4_point(1.0, 0.0, 0.0).unwrap()).unwrap();
        for c in COLUMNS {
            assert!(v.get(c).is_some(), "{c}");
        }
        assert_eq!(v["entropic2_violated"], true);
        assert!(rot4_point(0.8, 0.8, 0.0).is_err());
    }

    #[test]
    fn isotropic_curves_are_ordered() {
        let c = isotropic_curves(3, 11).unwrap();
        assert_eq!(c.fidelity.len(), 11);
        for i in 0..11 {
            assert!(c.mb[i] <= c.exact[i] + 1e-9);
            assert!(c.exact[i] <= c.dual[i] + 1e-9);
        }
        assert!((c.exact[10] - (4.0f64 / 3.0).sqrt()).abs() < 1e-10);
    }
}
