//! Three browser entry points: |ν̂| on [0, 1], return probabilities of the
//! simple random walk, and ball growth. Every function is a thin wrapper, so
//! the page shows exactly what the library computes.

use harmonics::group::{GroupSpec, OrderedGroup};
use harmonics::measure::{build_nu, build_nu_composite, nu_fourier};
use harmonics::suite::simple_random_walk;
use harmonics::walk::{growth_profile, return_probability};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use wasm_bindgen::prelude::*;

/// Support cap for in-browser convolutions; keeps a page responsive.
const BROWSER_CAP: usize = 200_000;

fn js(e: harmonics::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// |ν̂(i/points)| for i = 0..=points. `composite` selects the recipe
/// vanishing on ⋃_{k≤m} (1/k)ℤ instead of (1/m)ℤ.
#[wasm_bindgen]
pub fn nu_trace(m: i32, composite: bool, points: u32) -> Result<Vec<f64>, JsError> {
    let nu = if composite { build_nu_composite(m as i64) } else { build_nu(m as i64) }.map_err(js)?;
    let n = points.max(1) as i64;
    Ok((0..=n).map(|i| nu_fourier(&nu, &BigRational::new(i.into(), n.into())).abs()).collect())
}

/// Atoms and weights of ν as alternating (value, weight) pairs.
#[wasm_bindgen]
pub fn nu_weights(m: i32, composite: bool) -> Result<Vec<f64>, JsError> {
    let nu = if composite { build_nu_composite(m as i64) } else { build_nu(m as i64) }.map_err(js)?;
    Ok(nu.weights.iter().flat_map(|(j, w)| [*j as f64, w.to_f64().unwrap_or(f64::NAN)]).collect())
}

/// τ(xᵏ) for k = 0..=k_max with x the simple random walk on `group`.
#[wasm_bindgen]
pub fn return_probabilities(group: &str, k_max: u32) -> Result<Vec<f64>, JsError> {
    let spec: GroupSpec = group.parse().map_err(js)?;
    let series = return_probability(&simple_random_walk(spec), k_max as usize, BROWSER_CAP).map_err(js)?;
    Ok(series.as_f64())
}

/// |B_R| for R = 0..=r_max in the catalog generators of `group`.
#[wasm_bindgen]
pub fn growth(group: &str, r_max: u32) -> Result<Vec<f64>, JsError> {
    let spec: GroupSpec = group.parse().map_err(js)?;
    let og = OrderedGroup::natural(spec).map_err(js)?;
    let sizes = growth_profile(&og, r_max as usize, BROWSER_CAP).map_err(js)?;
    Ok(sizes.into_iter().map(|s| s as f64).collect())
}
