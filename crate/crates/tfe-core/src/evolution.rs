//! Time integration of the transformed evolution.
//!
//! The linear operator is treated implicitly (it carries the full `dy⁻⁴`
//! stiffness), the nonlinearity explicitly. The fourth-order problem receives
//! exactly one Dirichlet condition per endpoint — the PDE rows at ±1 are
//! dropped in favor of `g(±1) = 0`, and the degeneracy of the `(1-y²)/2`
//! weight stands in for the missing conditions, mirroring the continuous
//! problem. Step acceptance is keyed to the discrete energy balance
//! `dE/dt + D + B = Σ I_k` rather than a CFL bound.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::model::{
    self, apply_nonlinear, balance_residual, boundary_term, dissipation, energy,
    interaction_integrals, PerturbationField,
};
use crate::norms;
use crate::spectral::{Field, Grid};
use crate::transform::lagrangian_to_eulerian;
use crate::Result;

/// Time-stepping scheme: the implicit treatment of `L` paired with an
/// explicit treatment of `N`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Backward Euler on `L`, explicit Euler on `N`; first order.
    BackwardEuler,
    /// Crank–Nicolson on `L`, Adams–Bashforth 2 on `N`; second order.
    /// The first two steps of a fresh stepper run backward Euler (Rannacher
    /// smoothing): CN barely damps the stiff transient that initial data
    /// incompatible with the boundary conditions excites, and without the
    /// smoothing that transient hides the formal order.
    CrankNicolsonAb2,
}

impl Scheme {
    pub fn formal_order(self) -> f64 {
        match self {
            Scheme::BackwardEuler => 1.0,
            Scheme::CrankNicolsonAb2 => 2.0,
        }
    }

    pub fn parse(s: &str) -> Result<Scheme> {
        match s {
            "be" | "backward-euler" => Ok(Scheme::BackwardEuler),
            "cnab2" | "crank-nicolson" => Ok(Scheme::CrankNicolsonAb2),
            _ => Err(Error::InvalidArgument(format!(
                "unknown scheme '{s}' (expected backward-euler | cnab2)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::BackwardEuler => "backward-euler",
            Scheme::CrankNicolsonAb2 => "cnab2",
        }
    }
}

/// Configuration of [`evolve`].
#[derive(Clone, Debug)]
pub struct StepperConfig {
    /// Initial step size.
    pub dt0: f64,
    /// Final time.
    pub t_end: f64,
    pub scheme: Scheme,
    /// Per-step relative tolerance on the energy-balance residual.
    pub balance_tol: f64,
    /// Abort threshold for the step size.
    pub dt_min: f64,
    /// Record a full snapshot every this many accepted steps.
    pub snapshot_stride: usize,
    /// Grow dt by 1.2× after 10 clean steps; disable for refinement studies.
    pub adaptive: bool,
    /// Drop the nonlinearity (linearized flow), used by diagnostics tests.
    pub linearized: bool,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            dt0: 1e-3,
            t_end: 0.5,
            scheme: Scheme::BackwardEuler,
            balance_tol: 1e-2,
            dt_min: 1e-9,
            snapshot_stride: 5,
            adaptive: true,
            linearized: false,
        }
    }
}

impl StepperConfig {
    fn validate(&self) -> Result<()> {
        if !(self.dt0 > self.dt_min && self.dt_min > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need dt0 > dt_min > 0, got dt0 = {}, dt_min = {}",
                self.dt0, self.dt_min
            )));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if !(self.balance_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "balance_tol must be positive, got {}",
                self.balance_tol
            )));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidArgument("snapshot_stride must be >= 1".into()));
        }
        Ok(())
    }
}

/// One implicit-explicit stepper with its factorization cache.
pub struct Stepper {
    grid: Arc<Grid>,
    scheme: Scheme,
    linearized: bool,
    l_matrix: DMatrix<f64>,
    cached_key: Option<(f64, bool)>,
    implicit_lu: Option<nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>,
    /// N(g) at the previous step, for the Adams–Bashforth extrapolation.
    prev_nonlinear: Option<Vec<f64>>,
    /// Remaining Rannacher startup steps (CN only).
    startup_remaining: usize,
}

const RANNACHER_STEPS: usize = 2;

impl Stepper {
    pub fn new(grid: Arc<Grid>, scheme: Scheme) -> Stepper {
        let l_matrix = model::linear_matrix(&grid);
        let startup_remaining = match scheme {
            Scheme::BackwardEuler => 0,
            Scheme::CrankNicolsonAb2 => RANNACHER_STEPS,
        };
        Stepper {
            grid,
            scheme,
            linearized: false,
            l_matrix,
            cached_key: None,
            implicit_lu: None,
            prev_nonlinear: None,
            startup_remaining,
        }
    }

    pub fn linearized(mut self, on: bool) -> Stepper {
        self.linearized = on;
        self
    }

    /// Forget multistep history (after a rejected step or a dt change the
    /// AB2 extrapolation from the old history is no longer consistent).
    pub fn reset_history(&mut self) {
        self.prev_nonlinear = None;
    }

    /// Euler-style startup step (BE on `L`, AB1 on `N`)?
    fn euler_mode(&self) -> bool {
        self.scheme == Scheme::BackwardEuler || self.startup_remaining > 0
    }

    fn factor_for(&mut self, dt: f64) -> Result<()> {
        let key = (dt, self.euler_mode());
        if self.cached_key == Some(key) {
            return Ok(());
        }
        let n = self.grid.len();
        let implicit_weight = if key.1 { dt } else { 0.5 * dt };
        let mut m = DMatrix::identity(n, n) + self.l_matrix.scale(implicit_weight);
        for j in 0..n {
            m[(0, j)] = if j == 0 { 1.0 } else { 0.0 };
            m[(n - 1, j)] = if j == n - 1 { 1.0 } else { 0.0 };
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem("non-finite implicit matrix".into()));
        }
        self.implicit_lu = Some(m.lu());
        self.cached_key = Some(key);
        Ok(())
    }

    /// Advance one step of size `dt`. Positivity of `1 + g` is checked after
    /// the solve; a violation surfaces as [`Error::PositivityLoss`] so the
    /// caller can halve `dt`.
    pub fn step(&mut self, g: &PerturbationField, dt: f64) -> Result<PerturbationField> {
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        self.factor_for(dt)?;
        let n = self.grid.len();
        let nonlinear_now: Vec<f64> = if self.linearized {
            vec![0.0; n]
        } else {
            apply_nonlinear(g).values().to_vec()
        };

        let mut rhs = DVector::from_column_slice(g.field().values());
        if self.euler_mode() {
            for j in 0..n {
                rhs[j] += dt * nonlinear_now[j];
            }
        } else {
            let lg = &self.l_matrix * DVector::from_column_slice(g.field().values());
            let prev = self.prev_nonlinear.as_deref();
            for j in 0..n {
                let explicit = match prev {
                    Some(p) => 1.5 * nonlinear_now[j] - 0.5 * p[j],
                    None => nonlinear_now[j],
                };
                rhs[j] += -0.5 * dt * lg[j] + dt * explicit;
            }
        }
        rhs[0] = 0.0;
        rhs[n - 1] = 0.0;

        let lu = self.implicit_lu.as_ref().expect("factored above");
        let mut next = lu
            .solve(&rhs)
            .ok_or_else(|| Error::SingularSystem("implicit step solve".into()))?;
        // The boundary rows are identity rows; pin the constraints exactly.
        next[0] = 0.0;
        next[n - 1] = 0.0;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem("non-finite step result".into()));
        }

        let field = Field::from_values(self.grid.clone(), next.as_slice().to_vec())?;
        let result = PerturbationField::new(field, g.time() + dt)?;
        self.prev_nonlinear = Some(nonlinear_now);
        self.startup_remaining = self.startup_remaining.saturating_sub(1);
        Ok(result)
    }
}

/// Time series of every diagnostic the energy identity involves, one entry
/// per accepted step, plus sparse full snapshots of `g`.
#[derive(Clone, Debug, Default)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub dissipation: Vec<f64>,
    pub boundary: Vec<f64>,
    pub interactions: Vec<[f64; 10]>,
    pub lambda_minus: Vec<f64>,
    pub lambda_plus: Vec<f64>,
    pub sup_g: Vec<f64>,
    pub mass_residual: Vec<f64>,
    pub center_residual: Vec<f64>,
    /// Per-step relative balance residuals (diagnostic, not exported).
    pub balance: Vec<f64>,
    /// Sparse snapshots `(t, g values)`.
    pub snapshots: Vec<(f64, Vec<f64>)>,
    pub scheme_order: f64,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn push_state(&mut self, p: &PerturbationField) -> Result<()> {
        let (map, profile) = lagrangian_to_eulerian(p)?;
        self.times.push(p.time());
        self.energy.push(energy(p));
        self.dissipation.push(dissipation(p));
        self.boundary.push(boundary_term(p));
        self.interactions.push(interaction_integrals(p));
        self.lambda_minus.push(map.lambda_minus());
        self.lambda_plus.push(map.lambda_plus());
        self.sup_g.push(norms::sup_norm(p.field()));
        self.mass_residual
            .push((profile.mass() - crate::transform::STEADY_MASS).abs());
        self.center_residual.push(profile.center().abs());
        Ok(())
    }

    pub fn consistent(&self) -> bool {
        let n = self.times.len();
        self.energy.len() == n
            && self.dissipation.len() == n
            && self.boundary.len() == n
            && self.interactions.len() == n
            && self.lambda_minus.len() == n
            && self.lambda_plus.len() == n
            && self.sup_g.len() == n
            && self.mass_residual.len() == n
            && self.center_residual.len() == n
            && self.times.windows(2).all(|w| w[0] < w[1])
    }
}

/// Relative scale for the balance residual: the magnitudes of the identity's
/// own terms.
fn balance_scale(p: &PerturbationField, de_dt: f64) -> f64 {
    let i_abs: f64 = interaction_integrals(p).iter().map(|v| v.abs()).sum();
    1.0 + de_dt.abs() + dissipation(p) + boundary_term(p) + i_abs
}

/// Steps exempt from balance rejection at the start of a run. Initial data
/// incompatible with the boundary conditions (generic: it only requires
/// `Lg ≠ N(g)` at ±1 at t = 0) resolves a boundary layer whose balance
/// defect is a property of the data, not of the step size; rejecting on it
/// drives `dt` to the floor without improving anything.
pub const BALANCE_SKIP: usize = 5;

/// Run the evolution with balance-keyed step control. After the first
/// [`BALANCE_SKIP`] steps, a step is rejected and `dt` halved when the
/// relative balance residual exceeds `balance_tol`; positivity failures are
/// always rejected. After 10 clean steps `dt` grows by 1.2× (if adaptive).
/// Hitting `dt_min` aborts with the partial record attached to the error.
pub fn evolve(g0: &PerturbationField, cfg: &StepperConfig) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    let grid = g0.grid().clone();
    let mut stepper = Stepper::new(grid, cfg.scheme).linearized(cfg.linearized);
    let mut record = TrajectoryRecord {
        scheme_order: cfg.scheme.formal_order(),
        ..TrajectoryRecord::default()
    };

    let mut state = g0.clone();
    record.push_state(&state)?;
    record.snapshots.push((state.time(), state.field().values().to_vec()));

    let mut dt = cfg.dt0;
    let mut clean_streak = 0usize;
    let mut accepted = 0usize;

    while state.time() < cfg.t_end - 1e-14 {
        let dt_step = dt.min(cfg.t_end - state.time());
        let attempt = stepper.step(&state, dt_step);
        let (next, residual_rel) = match attempt {
            Ok(next) => {
                let raw = balance_residual(&state, &next, dt_step)?;
                let de = (energy(&next) - energy(&state)) / dt_step;
                let rel = raw / balance_scale(&state, de);
                (next, rel)
            }
            Err(Error::PositivityLoss { .. }) => {
                // Retry with a smaller step.
                stepper.reset_history();
                dt *= 0.5;
                clean_streak = 0;
                if dt < cfg.dt_min {
                    return Err(Error::StepUnderflow {
                        t: state.time(),
                        dt_min: cfg.dt_min,
                        record: Box::new(record),
                    });
                }
                continue;
            }
            Err(e) => return Err(e),
        };

        if residual_rel > cfg.balance_tol && accepted >= BALANCE_SKIP {
            stepper.reset_history();
            dt *= 0.5;
            clean_streak = 0;
            if dt < cfg.dt_min {
                return Err(Error::StepUnderflow {
                    t: state.time(),
                    dt_min: cfg.dt_min,
                    record: Box::new(record),
                });
            }
            continue;
        }

        // Recording reconstructs the droplet; a state whose map is no longer
        // invertible at this resolution is rejected like a positivity loss.
        match record.push_state(&next) {
            Ok(()) => {}
            Err(Error::InvalidProfile(_) | Error::PositivityLoss { .. } | Error::InvalidField(_)) => {
                stepper.reset_history();
                dt *= 0.5;
                clean_streak = 0;
                if dt < cfg.dt_min {
                    return Err(Error::StepUnderflow {
                        t: state.time(),
                        dt_min: cfg.dt_min,
                        record: Box::new(record),
                    });
                }
                continue;
            }
            Err(e) => return Err(e),
        }
        state = next;
        accepted += 1;
        record.balance.push(residual_rel);
        if accepted % cfg.snapshot_stride == 0 || state.time() >= cfg.t_end - 1e-14 {
            record
                .snapshots
                .push((state.time(), state.field().values().to_vec()));
        }

        clean_streak += 1;
        if cfg.adaptive && clean_streak >= 10 {
            dt *= 1.2;
            clean_streak = 0;
            stepper.reset_history();
        }
    }

    debug_assert!(record.consistent());
    Ok(record)
}

/// Least-squares fit of `log E` against `t`.
#[derive(Clone, Copy, Debug)]
pub struct DecayFit {
    /// Fitted rate: `E ≈ C e^{-gamma t}`.
    pub gamma: f64,
    pub r_squared: f64,
    pub samples: usize,
}

/// Fit an exponential decay rate over a time window. Requires at least four
/// positive samples inside the window.
pub fn fit_decay(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    let (t0, t1) = window;
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(&t, &v)| t >= t0 && t <= t1 && v > 0.0)
        .map(|(&t, &v)| (t, v.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "decay fit needs at least 4 positive samples in [{t0}, {t1}], got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (t, y) in &pts {
        let dt = t - mean_t;
        let dy = y - mean_y;
        sxx += dt * dt;
        sxy += dt * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData("degenerate time window".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(DecayFit {
        gamma: -slope,
        r_squared,
        samples: pts.len(),
    })
}

/// Fit window used by the trajectory diagnostics: the last half of the span
/// where the series stays above the rounding floor.
pub fn default_fit_window(times: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    const FLOOR: f64 = 1e-13;
    let last_live = times
        .iter()
        .zip(values)
        .filter(|(_, &v)| v > FLOOR)
        .map(|(&t, _)| t)
        .next_back()
        .ok_or_else(|| Error::InsufficientData("series never exceeds the rounding floor".into()))?;
    let t0 = times[0];
    Ok((t0 + 0.5 * (last_live - t0), last_live))
}
