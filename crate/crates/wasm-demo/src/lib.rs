//! Browser bindings: STFT magnitudes, density profiles of sections and the
//! frame-operator spectrum of the constructed Gabor families.

use wasm_bindgen::prelude::*;

use lcagabor::density::{density_profile, PointSet};
use lcagabor::gabor::{fine_lattice_family, frame_bounds, onb_family, section_family, GaborFamily};
use lcagabor::geometry::section;
use lcagabor::linalg::hermitian_eigs;
use lcagabor::model::{stft, ModelFunction, ModelSpace};
use lcagabor::random::{random_function, Rng64};
use lcagabor::{GroupParams, Mode};

fn params(p: u32, modular: bool) -> Result<GroupParams, String> {
    GroupParams::new(p, if modular { Mode::Modular } else { Mode::Carry }).map_err(|e| e.to_string())
}

fn space(p: u32, modular: bool, m: u32, k: u32) -> Result<ModelSpace, String> {
    ModelSpace::new(params(p, modular)?, m, k).map_err(|e| e.to_string())
}

/// Row-major `|V_g f|` with `g = chi_{A^scale H}` and a seeded random `f`;
/// the grid side is `p^(m+k)`.
#[wasm_bindgen]
pub fn stft_magnitudes(
    p: u32,
    modular: bool,
    m: u32,
    k: u32,
    window_scale: i32,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let s = space(p, modular, m, k)?;
    if s.dim() > 243 {
        return Err(format!("grid side {} is too large for the demo", s.dim()));
    }
    let g = ModelFunction::indicator(s, window_scale as i64, &s.params().zero()).map_err(|e| e.to_string())?;
    let f = random_function(s, &mut Rng64::new(seed));
    let grid = stft(&f, &g).map_err(|e| e.to_string())?;
    Ok(grid.values().iter().map(|z| z.norm()).collect())
}

/// Density profile (JSON) of `section(outer, inner)` over scales `inner..=outer`.
#[wasm_bindgen]
pub fn section_density(p: u32, modular: bool, outer: i32, inner: i32) -> Result<String, String> {
    let g = params(p, modular)?;
    let sec = section(g, outer as i64, inner as i64).map_err(|e| e.to_string())?;
    let lam = PointSet::group(g, sec.elements().to_vec()).map_err(|e| e.to_string())?;
    let prof = density_profile(&lam, (inner as i64, outer as i64), outer as i64).map_err(|e| e.to_string())?;
    serde_json::to_string(&prof).map_err(|e| e.to_string())
}

/// Report and full spectrum (JSON) of a family: `onb`, `fine` (refinement
/// `j`) or `section` (offset `j`), on `ModelSpace(m, k)`.
#[wasm_bindgen]
pub fn frame_spectrum(p: u32, modular: bool, m: u32, k: u32, family: &str, j: i32) -> Result<String, String> {
    let s = space(p, modular, m, k)?;
    if s.dim() > 81 {
        return Err(format!("dimension {} is too large for the demo", s.dim()));
    }
    let fam: GaborFamily = match family {
        "onb" => onb_family(s),
        "fine" => fine_lattice_family(s, j.max(0) as u32),
        "section" => section_family(s, j as i64),
        other => return Err(format!("unknown family `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    let report = frame_bounds(&fam.system).map_err(|e| e.to_string())?;
    let op = fam.system.frame_operator().map_err(|e| e.to_string())?;
    let eig = hermitian_eigs(&op).map_err(|e| e.to_string())?;
    let value = serde_json::json!({ "name": fam.name, "report": report, "eigenvalues": eig.values });
    Ok(value.to_string())
}
