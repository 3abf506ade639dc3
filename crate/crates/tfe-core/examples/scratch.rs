// Scratch numerics probe (not part of the deliverable surface).
use tfe_core::evolution::{evolve, Scheme, StepperConfig};
use tfe_core::model::{self, PerturbationField};
use tfe_core::spectral::{Field, Grid};
use tfe_core::transform::{eulerian_derivatives, lagrangian_to_eulerian};

fn main() {
    for n in [48usize, 64, 96] {
        let grid = Grid::new(n).unwrap();
        let g0 = PerturbationField::from_fn(
            &grid,
            |y| 0.05 * (1.0 - y * y) + 0.03 * y * (1.0 - y * y),
            0.0,
        )
        .unwrap();
        let cfg = StepperConfig {
            dt0: 2.5e-4,
            t_end: 0.05,
            scheme: Scheme::BackwardEuler,
            snapshot_stride: 200,
            adaptive: false,
            ..StepperConfig::default()
        };
        let record = evolve(&g0, &cfg).unwrap();
        let (t, vals) = record.snapshots.last().unwrap().clone();
        let state = PerturbationField::new(
            Field::from_values(grid.clone(), vals.clone()).unwrap(),
            t,
        )
        .unwrap();

        // Semi-discrete Z_t: with h = 1/(1+g), dZ/dt = C'(t) + Q(-g_t h^2)
        // where Q is the cumulative integral and C' the gauge rate.
        let gdot_raw = {
            let lg = model::apply_linear(&state);
            let ng = model::apply_nonlinear(&state);
            let mut v: Vec<f64> = ng
                .values()
                .iter()
                .zip(lg.values())
                .map(|(n, l)| n - l)
                .collect();
            let m = v.len();
            v[0] = 0.0;
            v[m - 1] = 0.0;
            Field::from_values(grid.clone(), v).unwrap()
        };
        let integrand = gdot_raw.zip_with(state.field(), |gd, g| -gd / ((1.0 + g) * (1.0 + g)));
        let prim_dot = grid.cumulative_integral(&integrand).unwrap();
        let w = Field::from_fn(&grid, |y| 1.0 - y * y);
        let c_dot = -0.75 * grid.integrate(&w.zip_with(&prim_dot, |a, b| a * b));
        let z_t_sd = prim_dot.map(|v| v + c_dot);

        let u3 = eulerian_derivatives(&state, 3).unwrap();
        let mut worst = (0usize, 0.0f64);
        for j in 0..n {
            let r = (z_t_sd.values()[j] - u3.values()[j]).abs();
            if r > worst.1 {
                worst = (j, r);
            }
        }
        println!(
            "n={n:3}: semi-discrete |Z_t - u_xxx| sup = {:.4e} at y = {:+.4}",
            worst.1,
            grid.nodes()[worst.0]
        );
        for j in [0usize, 1, n / 4, n / 2, 3 * n / 4, n - 2, n - 1] {
            println!(
                "   y={:+.4}: zt_sd = {:+.5e}, u3 = {:+.5e}, diff = {:+.3e}",
                grid.nodes()[j],
                z_t_sd.values()[j],
                u3.values()[j],
                z_t_sd.values()[j] - u3.values()[j]
            );
        }
        let _ = lagrangian_to_eulerian(&state).unwrap();
    }
}
