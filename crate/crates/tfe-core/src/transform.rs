//! Conversion between Eulerian droplet profiles and the Lagrangian
//! perturbation.
//!
//! The mass coordinate `Z(y)` is defined by matching cumulative mass against
//! the steady droplet `u∞ = ½(1-x²)₊`:
//!
//! ```text
//! ∫_{λ₋}^{Z(y)} u dx = ½ ∫_{-1}^{y} (1-x²) dx,
//! ```
//!
//! which pins `Z(±1) = λ±` and gives `1 + g = u(Z)/u∞`. The inverse map
//! integrates `Z_y = 1/(1+g)` and fixes the constant with the
//! center-of-mass gauge `∫ (1-y²) Z dy = 0`.

use std::path::Path;
use std::sync::Arc;

use crate::error::Error;
use crate::model::PerturbationField;
use crate::spectral::{Field, Grid};
use crate::Result;

/// Target mass of the normalized droplet.
pub const STEADY_MASS: f64 = 2.0 / 3.0;

/// Contact-slope deviation beyond which initial data is rejected.
pub const SLOPE_REJECT_TOL: f64 = 1e-3;

/// Contact-slope deviation beyond which the transform result is only
/// warning-grade.
pub const SLOPE_WARN_TOL: f64 = 1e-6;

/// Steady droplet height at mass coordinate `y`.
pub fn steady_height(y: f64) -> f64 {
    0.5 * (1.0 - y * y)
}

/// Cumulative steady mass `½ ∫_{-1}^{y} (1-x²) dx`.
pub fn steady_cumulative_mass(y: f64) -> f64 {
    0.5 * (y - y * y * y / 3.0 + 2.0 / 3.0)
}

// ---------------------------------------------------------------------------
// Quadrature and interpolation helpers
// ---------------------------------------------------------------------------

/// Adaptive Simpson quadrature with Richardson acceptance.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fb, m, fm, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + simpson_rec(f, m, b, fm, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
}

/// Monotone piecewise-cubic (Fritsch–Carlson) interpolant for sampled
/// profiles; avoids the overshoot a plain cubic spline shows near contact
/// points where the height drops to zero.
#[derive(Clone, Debug)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<MonotoneCubic> {
        if xs.len() != ys.len() || xs.len() < 4 {
            return Err(Error::InvalidProfile(format!(
                "need at least 4 samples, got {}",
                xs.len()
            )));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidProfile(
                "sample abscissae must be strictly increasing".into(),
            ));
        }
        let n = xs.len();
        let mut secants = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            secants.push((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
        }
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            let (d0, d1) = (secants[i - 1], secants[i]);
            if d0 * d1 <= 0.0 {
                slopes[i] = 0.0;
            } else {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w0 = 2.0 * h1 + h0;
                let w1 = h1 + 2.0 * h0;
                slopes[i] = (w0 + w1) / (w0 / d0 + w1 / d1);
            }
        }
        Ok(MonotoneCubic { xs, ys, slopes })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            k => k - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }

    pub fn edge_slopes(&self) -> (f64, f64) {
        (self.slopes[0], self.slopes[self.slopes.len() - 1])
    }
}

// ---------------------------------------------------------------------------
// Height representations
// ---------------------------------------------------------------------------

/// Height reconstructed from Lagrangian data: positions `z` and heights
/// `utilde` on a grid. Evaluation inverts the monotone `Z` barycentrically.
#[derive(Clone)]
pub struct LagrangianHeight {
    grid: Arc<Grid>,
    z: Vec<f64>,
    utilde: Vec<f64>,
}

impl LagrangianHeight {
    fn eval(&self, x: f64) -> f64 {
        let n = self.z.len();
        let (z_lo, z_hi) = (self.z[0], self.z[n - 1]);
        if x <= z_lo || x >= z_hi {
            return 0.0;
        }
        // Invert Z(y) = x by safeguarded bisection on the interpolant.
        let zf = |y: f64| self.grid.interpolate_unchecked(&self.z, y);
        let mut lo = -1.0;
        let mut hi = 1.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if zf(mid) < x {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        let y = 0.5 * (lo + hi);
        self.grid.interpolate_unchecked(&self.utilde, y)
    }
}

type HeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Evaluable droplet height.
#[derive(Clone)]
pub enum Height {
    Analytic(HeightFn),
    Sampled(Arc<MonotoneCubic>),
    Lagrangian(Arc<LagrangianHeight>),
    /// `u(x) = base(kappa·(x + shift)) / kappa` — the normalization map.
    Scaled {
        base: Box<Height>,
        kappa: f64,
        shift: f64,
    },
}

impl Height {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Height::Analytic(f) => f(x),
            Height::Sampled(s) => s.eval(x),
            Height::Lagrangian(l) => l.eval(x),
            Height::Scaled { base, kappa, shift } => base.eval(kappa * (x + shift)) / kappa,
        }
    }
}

impl std::fmt::Debug for Height {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Height::Analytic(_) => "Analytic",
            Height::Sampled(_) => "Sampled",
            Height::Lagrangian(_) => "Lagrangian",
            Height::Scaled { .. } => "Scaled",
        };
        write!(f, "Height::{name}")
    }
}

// ---------------------------------------------------------------------------
// Eulerian profile
// ---------------------------------------------------------------------------

/// Droplet height over its support, with contact-angle metadata and moments.
#[derive(Clone, Debug)]
pub struct EulerianProfile {
    lambda_minus: f64,
    lambda_plus: f64,
    height: Height,
    mass: f64,
    center: f64,
    edge_slopes: (f64, f64),
}

const MOMENT_QUAD_TOL: f64 = 1e-13;

impl EulerianProfile {
    /// Assemble and validate a profile. When `moments` is `None` the mass and
    /// center are computed by adaptive quadrature on the Eulerian axis.
    pub fn new(
        lambda_minus: f64,
        lambda_plus: f64,
        height: Height,
        edge_slopes: (f64, f64),
        moments: Option<(f64, f64)>,
    ) -> Result<EulerianProfile> {
        if !(lambda_minus < lambda_plus) {
            return Err(Error::InvalidProfile(format!(
                "support endpoints out of order: {lambda_minus} >= {lambda_plus}"
            )));
        }
        let e0 = height.eval(lambda_minus).abs();
        let e1 = height.eval(lambda_plus).abs();
        let span = lambda_plus - lambda_minus;
        // Positivity on the open support, sampled densely.
        let mut peak = 0.0_f64;
        for k in 1..512 {
            let x = lambda_minus + span * k as f64 / 512.0;
            let u = height.eval(x);
            if !u.is_finite() || u <= 0.0 {
                return Err(Error::InvalidProfile(format!(
                    "height must be positive on the open support; u({x}) = {u}"
                )));
            }
            peak = peak.max(u);
        }
        if e0 > 1e-8 * peak.max(1.0) || e1 > 1e-8 * peak.max(1.0) {
            return Err(Error::InvalidProfile(format!(
                "height must vanish at the contact points: u(λ-) = {e0:e}, u(λ+) = {e1:e}"
            )));
        }
        let (mass, center) = match moments {
            Some(m) => m,
            None => {
                let mass = adaptive_simpson(
                    &|x| height.eval(x),
                    lambda_minus,
                    lambda_plus,
                    MOMENT_QUAD_TOL,
                );
                let center = adaptive_simpson(
                    &|x| x * height.eval(x),
                    lambda_minus,
                    lambda_plus,
                    MOMENT_QUAD_TOL,
                );
                (mass, center)
            }
        };
        if !(mass > 0.0) {
            return Err(Error::InvalidProfile(format!("mass must be positive, got {mass}")));
        }
        Ok(EulerianProfile {
            lambda_minus,
            lambda_plus,
            height,
            mass,
            center,
            edge_slopes,
        })
    }

    /// Two-column whitespace-separated text (`x  u`), `#` comments allowed.
    pub fn from_file(path: impl AsRef<Path>) -> Result<EulerianProfile> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut xs = Vec::new();
        let mut us = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<f64> {
                tok.ok_or_else(|| {
                    Error::parse(path.display().to_string(), format!("line {}: expected two columns", lineno + 1))
                })?
                .parse::<f64>()
                .map_err(|e| Error::parse(path.display().to_string(), format!("line {}: {e}", lineno + 1)))
            };
            xs.push(parse(parts.next())?);
            us.push(parse(parts.next())?);
        }
        EulerianProfile::from_samples(xs, us)
    }

    /// Build from a dense sample `(x_i, u_i)`; first and last sample define
    /// the contact points and must carry (near-)zero heights.
    pub fn from_samples(xs: Vec<f64>, us: Vec<f64>) -> Result<EulerianProfile> {
        if us.iter().any(|u| !u.is_finite() || *u < 0.0) {
            return Err(Error::InvalidProfile(
                "sampled heights must be finite and nonnegative".into(),
            ));
        }
        let interp = MonotoneCubic::new(xs, us)?;
        let lambda_minus = interp.xs[0];
        let lambda_plus = *interp.xs.last().unwrap();
        let edge_slopes = interp.edge_slopes();
        EulerianProfile::new(
            lambda_minus,
            lambda_plus,
            Height::Sampled(Arc::new(interp)),
            edge_slopes,
            None,
        )
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lambda_minus, self.lambda_plus)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn edge_slopes(&self) -> (f64, f64) {
        self.edge_slopes
    }

    /// Height at `x`; zero outside the support.
    pub fn height_at(&self, x: f64) -> f64 {
        if x <= self.lambda_minus || x >= self.lambda_plus {
            0.0
        } else {
            self.height.eval(x)
        }
    }

    pub fn height(&self) -> &Height {
        &self.height
    }

    fn is_normalized(&self) -> bool {
        (self.mass - STEADY_MASS).abs() <= 1e-8 && self.center.abs() <= 1e-8
    }
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// Result of [`normalize_profile`] with the applied scaling recorded.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub profile: EulerianProfile,
    /// Spatial scaling factor `κ` of `u ↦ κ⁻¹ u(κ·)`.
    pub kappa: f64,
    /// Translation applied after scaling.
    pub shift: f64,
}

/// Rescale and translate so that mass is `2/3` and the center of mass is
/// zero. Uses the invariant scaling `u_κ(x) = κ⁻¹ u(κx)` (mass scales as
/// `κ⁻²`, contact slopes are preserved), then shifts by the center/mass
/// ratio.
pub fn normalize_profile(raw: &EulerianProfile) -> Result<Normalization> {
    if !(raw.mass > 0.0) {
        return Err(Error::InvalidProfile(format!(
            "cannot normalize: mass = {}",
            raw.mass
        )));
    }
    let kappa = (raw.mass / STEADY_MASS).sqrt();
    let scaled_center = raw.center / (kappa * kappa * kappa);
    let shift = scaled_center / STEADY_MASS;
    let height = Height::Scaled {
        base: Box::new(raw.height.clone()),
        kappa,
        shift,
    };
    let lambda_minus = raw.lambda_minus / kappa - shift;
    let lambda_plus = raw.lambda_plus / kappa - shift;
    // Contact slopes are invariant under this scaling.
    let profile = EulerianProfile::new(
        lambda_minus,
        lambda_plus,
        height,
        raw.edge_slopes,
        None,
    )?;
    if (profile.mass - STEADY_MASS).abs() > 1e-10 || profile.center.abs() > 1e-10 {
        return Err(Error::InvalidProfile(format!(
            "normalization failed: mass = {:.15e}, center = {:.3e}",
            profile.mass, profile.center
        )));
    }
    Ok(Normalization {
        profile,
        kappa,
        shift,
    })
}

// ---------------------------------------------------------------------------
// Lagrangian map
// ---------------------------------------------------------------------------

/// Positions of the mass coordinates: `Z(y)`, with `Z(±1) = λ±`.
#[derive(Clone, Debug)]
pub struct LagrangianMap {
    z: Field,
    lambda_minus: f64,
    lambda_plus: f64,
}

impl LagrangianMap {
    /// Gauge slack allowed on `∫ (1-y²) Z dy`.
    pub const GAUGE_TOL: f64 = 1e-9;

    pub fn new(z: Field) -> Result<LagrangianMap> {
        let v = z.values();
        if !v.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidProfile(
                "Lagrangian map must be strictly increasing".into(),
            ));
        }
        let gauge = z.grid().integrate(&Field::from_fn(z.grid(), |y| 1.0 - y * y).zip_with(&z, |w, zv| w * zv));
        if gauge.abs() > Self::GAUGE_TOL {
            return Err(Error::InvalidProfile(format!(
                "center-of-mass gauge violated: ∫(1-y²)Z = {gauge:e}"
            )));
        }
        let lambda_minus = v[0];
        let lambda_plus = v[v.len() - 1];
        Ok(LagrangianMap {
            z,
            lambda_minus,
            lambda_plus,
        })
    }

    pub fn z(&self) -> &Field {
        &self.z
    }

    pub fn lambda_minus(&self) -> f64 {
        self.lambda_minus
    }

    pub fn lambda_plus(&self) -> f64 {
        self.lambda_plus
    }
}

/// Output of [`eulerian_to_lagrangian`].
#[derive(Clone, Debug)]
pub struct LagrangianData {
    pub map: LagrangianMap,
    pub g: PerturbationField,
    /// Worst deviation of the measured contact slopes from ±1.
    pub slope_deviation: f64,
    /// Set when the slope deviation exceeds [`SLOPE_WARN_TOL`] but stayed
    /// below the rejection threshold.
    pub warning: bool,
}

/// Invert the cumulative-mass relation node by node and read off the
/// perturbation `g = u(Z)/u∞ - 1` (pinned to 0 at the endpoints, where the
/// model class fixes `Z_y = 1`).
pub fn eulerian_to_lagrangian(
    profile: &EulerianProfile,
    grid: &Arc<Grid>,
) -> Result<LagrangianData> {
    if !profile.is_normalized() {
        return Err(Error::InvalidProfile(format!(
            "profile must be normalized first (mass = {:.12}, center = {:.3e})",
            profile.mass, profile.center
        )));
    }
    let (s_minus, s_plus) = profile.edge_slopes;
    let slope_deviation = (s_minus.abs() - 1.0).abs().max((s_plus.abs() - 1.0).abs());
    if slope_deviation > SLOPE_REJECT_TOL {
        return Err(Error::ContactAngle(slope_deviation));
    }

    let (lm, lp) = profile.support();
    let n = grid.len();
    let mut z = vec![0.0; n];
    let mut gv = vec![0.0; n];
    z[0] = lm;
    z[n - 1] = lp;

    // March through the interior nodes, reusing the mass accumulated so far.
    let mut x_base = lm;
    let mut f_base = 0.0; // cumulative mass at x_base
    const SEG_TOL: f64 = 5e-15;
    for j in 1..n - 1 {
        let target = steady_cumulative_mass(grid.nodes()[j]);
        let mass_from_base = |x: f64| {
            f_base + adaptive_simpson(&|t| profile.height.eval(t), x_base, x, SEG_TOL)
        };
        // Bracket: cumulative mass is strictly increasing (u > 0).
        let mut lo = x_base;
        let mut hi = lp;
        let mut x = {
            // Initial guess: previous node position advanced proportionally.
            let guess = x_base + (hi - x_base) * 0.1;
            guess.clamp(lo, hi)
        };
        let mut fx = mass_from_base(x) - target;
        for _ in 0..200 {
            if fx > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let u = profile.height.eval(x);
            let newton = if u > 0.0 { x - fx / u } else { f64::NAN };
            x = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let fx_new = mass_from_base(x) - target;
            let dx = (fx / profile.height.eval(x).max(1e-300)).abs();
            fx = fx_new;
            if fx.abs() <= 1e-14 && dx <= 1e-12 {
                break;
            }
            if hi - lo <= 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
        if !(x > lm && x < lp) {
            return Err(Error::InvalidProfile(format!(
                "cumulative-mass inversion left the support at node {j}"
            )));
        }
        z[j] = x;
        // Advance the accumulation base with the actually attained mass.
        f_base = target + fx;
        x_base = x;
        gv[j] = profile.height.eval(x) / steady_height(grid.nodes()[j]) - 1.0;
    }

    if !z.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidProfile(
            "cumulative mass is not monotone".into(),
        ));
    }

    let z_field = Field::from_values(grid.clone(), z)?;
    let map = LagrangianMap::new(z_field)?;
    let g = PerturbationField::new(Field::from_values(grid.clone(), gv)?, 0.0)?;
    Ok(LagrangianData {
        map,
        g,
        slope_deviation,
        warning: slope_deviation > SLOPE_WARN_TOL,
    })
}

/// Reconstruct the map and the Eulerian profile from a perturbation:
/// `Z = C + ∫ dy/(1+g)` with `C` fixed in closed form by the gauge, and
/// `ũ = u∞ (1+g)` the height at position `Z(y)`.
pub fn lagrangian_to_eulerian(
    p: &PerturbationField,
) -> Result<(LagrangianMap, EulerianProfile)> {
    let grid = p.grid();
    let h = p.field().map(|g| 1.0 / (1.0 + g));
    let prim = grid.cumulative_integral(&h)?;
    // ∫(1-y²) dy = 4/3, so the gauge constant is C = -(3/4) ∫ (1-y²) P dy.
    let weight = Field::from_fn(grid, |y| 1.0 - y * y);
    let c = -0.75 * grid.integrate(&weight.zip_with(&prim, |w, v| w * v));
    let z = prim.map(|v| v + c);
    let map = LagrangianMap::new(z.clone())?;

    let utilde: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(p.field().values())
        .map(|(&y, &g)| steady_height(y) * (1.0 + g))
        .collect();
    // Change of variables: mass = ∫ ũ Z_y dy = ∫ u∞ dy, a quadrature identity.
    let mass = grid.integrate(&Field::from_values(grid.clone(), utilde.clone())?.zip_with(&h, |u, hh| u * hh));
    let center = 0.5 * grid.integrate(&weight.zip_with(&z, |w, zv| w * zv));
    let height = Height::Lagrangian(Arc::new(LagrangianHeight {
        grid: grid.clone(),
        z: z.values().to_vec(),
        utilde,
    }));
    // In the model class the reconstructed contact slopes are exactly ±1.
    let profile = EulerianProfile::new(
        map.lambda_minus(),
        map.lambda_plus(),
        height,
        (1.0, -1.0),
        Some((mass, center)),
    )?;
    Ok((map, profile))
}

/// Eulerian spatial derivatives along the map: `(G ∂_y)^k (u∞ G)` with
/// `G = 1+g` equals `∂_x^k u` at `x = Z(y)`. For `k = 3` the endpoint values
/// are the contact-point velocities.
pub fn eulerian_derivatives(p: &PerturbationField, k: usize) -> Result<Field> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "Eulerian derivative order must be 1..=3, got {k}"
        )));
    }
    let grid = p.grid();
    let big_g = p.field().map(|g| 1.0 + g);
    let mut w = Field::from_fn(grid, steady_height).zip_with(&big_g, |u, g| u * g);
    for _ in 0..k {
        let dw = grid.differentiate(&w, 1)?;
        w = big_g.zip_with(&dw, |g, d| g * d);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;
    use crate::presets;
    use approx::assert_abs_diff_eq;

    fn grid(n: usize) -> Arc<Grid> {
        Grid::new(n).unwrap()
    }

    #[test]
    fn adaptive_simpson_matches_closed_forms() {
        let v = adaptive_simpson(&|x: f64| x.cos(), 0.0, 1.0, 1e-13);
        assert_abs_diff_eq!(v, 1.0_f64.sin(), epsilon = 1e-12);
        let v = adaptive_simpson(&|x: f64| (1.0 - x * x).max(0.0), -1.0, 1.0, 1e-13);
        assert_abs_diff_eq!(v, 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn steady_profile_roundtrips_to_zero_perturbation() {
        let g = grid(64);
        let profile = presets::steady();
        let data = eulerian_to_lagrangian(&profile, &g).unwrap();
        assert!(!data.warning);
        for (&y, &z) in g.nodes().iter().zip(data.map.z().values()) {
            assert_abs_diff_eq!(z, y, epsilon = 1e-9);
        }
        assert!(crate::norms::sup_norm(data.g.field()) < 1e-8);
    }

    #[test]
    fn normalization_of_shifted_parabola_is_exact() {
        let raw = presets::shifted_parabola(0.2);
        assert_abs_diff_eq!(raw.mass(), STEADY_MASS, epsilon = 1e-15);
        assert_abs_diff_eq!(raw.center(), 2.0 / 15.0, epsilon = 1e-15);
        let norm = normalize_profile(&raw).unwrap();
        assert_abs_diff_eq!(norm.kappa, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(norm.shift, 0.2, epsilon = 1e-14);
        let (lm, lp) = norm.profile.support();
        assert_abs_diff_eq!(lm, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lp, 1.0, epsilon = 1e-12);
        // The normalized profile is the steady droplet itself.
        for &x in &[-0.9, -0.3, 0.0, 0.4, 0.8] {
            assert_abs_diff_eq!(norm.profile.height_at(x), steady_height(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn normalization_of_double_mass_parabola_scales_support() {
        let raw = presets::scaled_parabola(1.0); // mass 4/3, slopes ±2
        let norm = normalize_profile(&raw).unwrap();
        assert_abs_diff_eq!(norm.kappa, 2.0_f64.sqrt(), epsilon = 1e-13);
        let (lm, lp) = norm.profile.support();
        assert_abs_diff_eq!(lm, -1.0 / 2.0_f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(lp, 1.0 / 2.0_f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(norm.profile.mass(), STEADY_MASS, epsilon = 1e-11);
        // Contact slopes stay at magnitude 2, outside the model class.
        let g = grid(32);
        assert!(matches!(
            eulerian_to_lagrangian(&norm.profile, &g),
            Err(Error::ContactAngle(_))
        ));
    }

    #[test]
    fn reconstruction_from_zero_perturbation_is_steady() {
        let g = grid(32);
        let p = PerturbationField::stationary(&g);
        let (map, profile) = lagrangian_to_eulerian(&p).unwrap();
        assert_abs_diff_eq!(map.lambda_minus(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(map.lambda_plus(), 1.0, epsilon = 1e-12);
        for (&y, &z) in g.nodes().iter().zip(map.z().values()) {
            assert_abs_diff_eq!(z, y, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(profile.mass(), STEADY_MASS, epsilon = 1e-14);
        assert_abs_diff_eq!(profile.height_at(0.5), steady_height(0.5), epsilon = 1e-10);
    }

    #[test]
    fn support_width_matches_quadrature_oracle() {
        let g = grid(64);
        let c = 0.1;
        let p = PerturbationField::from_fn(&g, |y| c * (1.0 - y * y), 0.0).unwrap();
        let (map, _) = lagrangian_to_eulerian(&p).unwrap();
        let width = map.lambda_plus() - map.lambda_minus();
        let oracle = adaptive_simpson(&|y: f64| 1.0 / (1.0 + c * (1.0 - y * y)), -1.0, 1.0, 1e-13);
        assert_abs_diff_eq!(width, oracle, epsilon = 1e-10);
    }

    #[test]
    fn reconstructed_mass_is_conserved_for_random_fields() {
        let g = grid(48);
        for k in 0..10 {
            let mut rng = crate::corpus::sample_rng(31, k);
            let p = crate::corpus::random_admissible(&g, &mut rng);
            let (map, profile) = lagrangian_to_eulerian(&p).unwrap();
            assert_abs_diff_eq!(profile.mass(), STEADY_MASS, epsilon = 1e-12);
            assert!(profile.center().abs() < 1e-12);
            // ∂_y Z - 1 = -g/(1+g) nodewise.
            let dz = g.differentiate(map.z(), 1).unwrap();
            for j in 1..g.len() - 1 {
                let gv = p.field().values()[j];
                assert_abs_diff_eq!(
                    dz.values()[j] - 1.0,
                    -gv / (1.0 + gv),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn even_perturbations_keep_the_droplet_centered() {
        let g = grid(48);
        let p = PerturbationField::from_fn(&g, |y| 0.08 * (1.0 - y * y).powi(2), 0.0).unwrap();
        let (map, _) = lagrangian_to_eulerian(&p).unwrap();
        assert_abs_diff_eq!(map.lambda_plus() + map.lambda_minus(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn roundtrip_through_both_transforms() {
        // Build an exactly admissible Eulerian profile from a known g, then
        // recover g through the forward transform.
        let g = grid(128);
        let p = PerturbationField::from_fn(&g, |y| 0.05 * (1.0 - y * y) * (1.0 + 0.3 * y), 0.0)
            .unwrap();
        let (_, profile) = lagrangian_to_eulerian(&p).unwrap();
        let data = eulerian_to_lagrangian(&profile, &g).unwrap();
        let err: f64 = p
            .field()
            .values()
            .iter()
            .zip(data.g.field().values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "roundtrip error {err:e}");
    }

    #[test]
    fn eulerian_derivatives_of_steady_state() {
        let g = grid(32);
        let p = PerturbationField::stationary(&g);
        let d1 = eulerian_derivatives(&p, 1).unwrap();
        for (&y, &v) in g.nodes().iter().zip(d1.values()) {
            assert_abs_diff_eq!(v, -y, epsilon = 1e-10);
        }
        let d3 = eulerian_derivatives(&p, 3).unwrap();
        assert!(d3.max_abs() < 1e-7, "stationary contact velocity {}", d3.max_abs());
        assert!(eulerian_derivatives(&p, 4).is_err());
    }

    #[test]
    fn mass_change_of_variables_identity() {
        let g = grid(48);
        let mut rng = crate::corpus::sample_rng(77, 0);
        let p = crate::corpus::random_admissible(&g, &mut rng);
        let utilde = Field::from_fn(&g, steady_height)
            .zip_with(p.field(), |u, gv| u * (1.0 + gv));
        let integrand = utilde.zip_with(p.field(), |u, gv| u / (1.0 + gv));
        assert_abs_diff_eq!(g.integrate(&integrand), STEADY_MASS, epsilon = 1e-13);
        let _ = model::energy(&p);
    }

    #[test]
    fn sampled_profiles_parse_and_validate() {
        let dir = std::env::temp_dir().join("tfe_profile_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("parabola.txt");
        let mut text = String::from("# x u\n");
        for k in 0..=400 {
            let x = -1.0 + 2.0 * k as f64 / 400.0;
            text.push_str(&format!("{:.17e} {:.17e}\n", x, steady_height(x).max(0.0)));
        }
        std::fs::write(&path, text).unwrap();
        let profile = EulerianProfile::from_file(&path).unwrap();
        assert_abs_diff_eq!(profile.mass(), STEADY_MASS, epsilon = 1e-6);
        let (s0, s1) = profile.edge_slopes();
        assert_abs_diff_eq!(s0, 1.0, epsilon = 1e-2);
        assert_abs_diff_eq!(s1, -1.0, epsilon = 1e-2);

        let bad = dir.join("bad.txt");
        std::fs::write(&bad, "0.0 0.0\n0.5 nope\n").unwrap();
        assert!(matches!(
            EulerianProfile::from_file(&bad),
            Err(Error::Parse { .. })
        ));
    }
}
