//! Named analytic profiles and initial-data presets.

use std::sync::Arc;

use crate::error::Error;
use crate::model::PerturbationField;
use crate::spectral::Grid;
use crate::transform::{
    eulerian_to_lagrangian, normalize_profile, EulerianProfile, Height, STEADY_MASS,
};
use crate::Result;

/// The steady droplet `u∞ = ½(1-x²)` on `(-1, 1)`.
pub fn steady() -> EulerianProfile {
    EulerianProfile::new(
        -1.0,
        1.0,
        Height::Analytic(Arc::new(|x| 0.5 * (1.0 - x * x).max(0.0))),
        (1.0, -1.0),
        Some((STEADY_MASS, 0.0)),
    )
    .expect("steady droplet is a valid profile")
}

/// Shifted steady droplet `½(1-(x-dx)²)` on `(dx-1, dx+1)`.
/// Exact moments: mass `2/3`, center `(2/3)·dx`.
pub fn shifted_parabola(dx: f64) -> EulerianProfile {
    EulerianProfile::new(
        dx - 1.0,
        dx + 1.0,
        Height::Analytic(Arc::new(move |x| {
            let t = x - dx;
            0.5 * (1.0 - t * t).max(0.0)
        })),
        (1.0, -1.0),
        Some((STEADY_MASS, STEADY_MASS * dx)),
    )
    .expect("shifted parabola is a valid profile")
}

/// `s·(1-x²)` on `(-1, 1)`: mass `4s/3`, contact slopes `±2s`. For `s = 1`
/// the normalized result keeps slope magnitude 2 and is rejected by the
/// Lagrangian transform.
pub fn scaled_parabola(s: f64) -> EulerianProfile {
    assert!(s > 0.0, "scale must be positive");
    EulerianProfile::new(
        -1.0,
        1.0,
        Height::Analytic(Arc::new(move |x| s * (1.0 - x * x).max(0.0))),
        (2.0 * s, -2.0 * s),
        Some((4.0 * s / 3.0, 0.0)),
    )
    .expect("scaled parabola is a valid profile")
}

/// Resolve an Eulerian preset name: `steady`, `shifted:<dx>`, `scaled:<s>`.
pub fn eulerian_preset(name: &str) -> Result<EulerianProfile> {
    let (kind, arg) = match name.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (name, None),
    };
    let parse = |a: Option<&str>| -> Result<f64> {
        a.ok_or_else(|| Error::InvalidArgument(format!("preset '{kind}' needs a numeric argument")))?
            .parse::<f64>()
            .map_err(|e| Error::InvalidArgument(format!("preset '{name}': {e}")))
    };
    match kind {
        "steady" => Ok(steady()),
        "shifted" => Ok(shifted_parabola(parse(arg)?)),
        "scaled" => Ok(scaled_parabola(parse(arg)?)),
        _ => Err(Error::InvalidArgument(format!(
            "unknown Eulerian preset '{name}' (expected steady | shifted:<dx> | scaled:<s>)"
        ))),
    }
}

/// Resolve an initial-data preset for the evolution:
/// `stationary`, `parabolic:<c>`, `skew:<c>`, or `file:<path>` (a two-column
/// Eulerian profile, normalized and transformed).
pub fn initial_data(grid: &Arc<Grid>, name: &str) -> Result<PerturbationField> {
    let (kind, arg) = match name.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (name, None),
    };
    let parse = |a: Option<&str>| -> Result<f64> {
        a.ok_or_else(|| Error::InvalidArgument(format!("preset '{kind}' needs a numeric argument")))?
            .parse::<f64>()
            .map_err(|e| Error::InvalidArgument(format!("preset '{name}': {e}")))
    };
    match kind {
        "stationary" => Ok(PerturbationField::stationary(grid)),
        "parabolic" => {
            let c = parse(arg)?;
            PerturbationField::from_fn(grid, |y| c * (1.0 - y * y), 0.0)
        }
        "skew" => {
            let c = parse(arg)?;
            PerturbationField::from_fn(grid, |y| c * y * (1.0 - y * y), 0.0)
        }
        "file" => {
            let path = arg.ok_or_else(|| {
                Error::InvalidArgument("preset 'file' needs a path argument".into())
            })?;
            let raw = EulerianProfile::from_file(path)?;
            let norm = normalize_profile(&raw)?;
            Ok(eulerian_to_lagrangian(&norm.profile, grid)?.g)
        }
        _ => Err(Error::InvalidArgument(format!(
            "unknown initial-data preset '{name}' \
             (expected stationary | parabolic:<c> | skew:<c> | file:<path>)"
        ))),
    }
}
