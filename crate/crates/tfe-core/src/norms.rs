//! Discrete Lebesgue norms of spectral fields.
//!
//! Sup norms are taken over a dense interpolated sample (1024 uniform
//! intervals, endpoints included) plus the grid nodes themselves; grid maxima
//! alone under-report the sup of a high-degree interpolant. Finite-p norms
//! integrate `|f|^p` on the same dense sample with composite Simpson, which
//! stays accurate for the kinked integrands `|f|^p` produces at sign changes.

use crate::spectral::Field;

/// Number of uniform intervals in the dense sample.
pub const DENSE_INTERVALS: usize = 1024;

/// Dense evaluation points: `DENSE_INTERVALS + 1` uniform points including
/// both endpoints (and, the count being even, the origin).
pub fn dense_points() -> impl Iterator<Item = f64> {
    (0..=DENSE_INTERVALS).map(|i| -1.0 + 2.0 * i as f64 / DENSE_INTERVALS as f64)
}

fn dense_values(f: &Field) -> Vec<f64> {
    let grid = f.grid();
    dense_points()
        .map(|y| grid.interpolate_unchecked(f.values(), y))
        .collect()
}

/// `‖f‖_∞` over the dense sample and the grid nodes.
pub fn sup_norm(f: &Field) -> f64 {
    sup_norm_mapped(f, |_, v| v)
}

/// Sup of `|map(y, f(y))|` over the dense sample and the grid nodes.
pub fn sup_norm_mapped(f: &Field, map: impl Fn(f64, f64) -> f64) -> f64 {
    let grid = f.grid();
    let mut m = 0.0_f64;
    for y in dense_points() {
        let v = grid.interpolate_unchecked(f.values(), y);
        m = m.max(map(y, v).abs());
    }
    for (&y, &v) in grid.nodes().iter().zip(f.values()) {
        m = m.max(map(y, v).abs());
    }
    m
}

/// `‖f‖_p` on `(-1, 1)`; `p = f64::INFINITY` falls back to the sup norm.
/// Requires `p >= 1`.
pub fn lp_norm(f: &Field, p: f64) -> f64 {
    lp_norm_mapped(f, p, |_, v| v)
}

/// `‖map(y, f(y))‖_p` on `(-1, 1)`.
pub fn lp_norm_mapped(f: &Field, p: f64, map: impl Fn(f64, f64) -> f64) -> f64 {
    assert!(p >= 1.0, "Lebesgue exponent must be >= 1, got {p}");
    if p.is_infinite() {
        return sup_norm_mapped(f, map);
    }
    let values = dense_values(f);
    let h = 2.0 / DENSE_INTERVALS as f64;
    let mut integral = 0.0;
    let ys: Vec<f64> = dense_points().collect();
    let pow = |y: f64, v: f64| map(y, v).abs().powf(p);
    // Composite Simpson over pairs of intervals.
    let mut i = 0;
    while i + 2 <= DENSE_INTERVALS {
        integral += h / 3.0
            * (pow(ys[i], values[i])
                + 4.0 * pow(ys[i + 1], values[i + 1])
                + pow(ys[i + 2], values[i + 2]));
        i += 2;
    }
    integral.powf(1.0 / p)
}

/// `W^{1,r}` norm in the `‖u‖_r + ‖u'‖_r` convention.
pub fn w1r_norm(f: &Field, r: f64) -> f64 {
    let d1 = f
        .grid()
        .differentiate(f, 1)
        .expect("field validated against its own grid");
    lp_norm(f, r) + lp_norm(&d1, r)
}

/// Mean value `(1/|I|) ∫ f` via the grid quadrature.
pub fn mean(f: &Field) -> f64 {
    0.5 * f.grid().integrate(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sup_norm_catches_off_node_maxima() {
        let g = Grid::new(32).unwrap(); // even count: y = 0 is not a node
        let f = Field::from_fn(&g, |y| 1.0 - y * y);
        assert!(!g.nodes().contains(&0.0));
        assert_abs_diff_eq!(sup_norm(&f), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn lp_norms_of_polynomials() {
        let g = Grid::new(32).unwrap();
        let f = Field::from_fn(&g, |y| y);
        // ‖y‖₂ = √(2/3), ‖y‖₁ = 1, ‖y‖∞ = 1.
        assert_abs_diff_eq!(lp_norm(&f, 2.0), (2.0 / 3.0_f64).sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(lp_norm(&f, 1.0), 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(lp_norm(&f, f64::INFINITY), 1.0, epsilon = 1e-13);

        let f = Field::from_fn(&g, |y| 1.0 - y * y);
        // ‖1-y²‖₂ = √(16/15).
        assert_abs_diff_eq!(lp_norm(&f, 2.0), (16.0 / 15.0_f64).sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn mean_of_linear_field_vanishes() {
        let g = Grid::new(16).unwrap();
        let f = Field::from_fn(&g, |y| 3.0 * y);
        assert_abs_diff_eq!(mean(&f), 0.0, epsilon = 1e-14);
        let f = Field::from_fn(&g, |y| 2.0 + y);
        assert_abs_diff_eq!(mean(&f), 2.0, epsilon = 1e-13);
    }
}
