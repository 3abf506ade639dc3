//! Chebyshev–Gauss–Lobatto collocation on `[-1, 1]`.
//!
//! One [`Grid`] bundles everything the rest of the crate needs from the
//! discretization: the nodes (endpoints included, ascending), Clenshaw–Curtis
//! quadrature weights on the same nodes, dense differentiation matrices for
//! orders 1–4, barycentric interpolation weights, and a factored spectral
//! antiderivative operator. Grids are immutable and shared through `Arc`.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::Result;

static NEXT_GRID_ID: AtomicU64 = AtomicU64::new(0);

/// Smallest admissible node count; below this a fourth derivative is noise.
pub const MIN_NODES: usize = 8;

/// Collocation grid on `[-1, 1]` with differentiation and quadrature.
pub struct Grid {
    id: u64,
    nodes: Vec<f64>,
    quad_weights: Vec<f64>,
    bary_weights: Vec<f64>,
    /// Differentiation matrices, `diff[k-1]` realizes d^k/dy^k.
    diff: Vec<DMatrix<f64>>,
    /// LU factors of D1 with its first row replaced by the identity row;
    /// solving against it yields the antiderivative vanishing at y = -1.
    antideriv: nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid")
            .field("id", &self.id)
            .field("n", &self.nodes.len())
            .finish()
    }
}

impl Grid {
    /// Build a Chebyshev–Gauss–Lobatto grid with `n` nodes.
    pub fn new(n: usize) -> Result<Arc<Grid>> {
        if n < MIN_NODES {
            return Err(Error::GridTooSmall(n));
        }
        let m = n - 1; // polynomial degree
        // Symmetric form of the CGL nodes: exact ±1 endpoints, exact 0 for even n-1.
        let nodes: Vec<f64> = (0..n)
            .map(|j| (PI * (2 * j as i64 - m as i64) as f64 / (2.0 * m as f64)).sin())
            .collect();

        let mut bary_weights = vec![0.0; n];
        for (j, w) in bary_weights.iter_mut().enumerate() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            *w = if j == 0 || j == m { 0.5 * sign } else { sign };
        }

        let quad_weights = clenshaw_curtis_weights(n);

        let d1 = diff_matrix_order1(&nodes, &bary_weights);
        let mut diff = Vec::with_capacity(4);
        diff.push(d1.clone());
        for _ in 1..4 {
            let mut next = &d1 * diff.last().unwrap();
            apply_negative_sum_trick(&mut next);
            diff.push(next);
        }

        let mut antideriv_matrix = d1;
        for j in 0..n {
            antideriv_matrix[(0, j)] = if j == 0 { 1.0 } else { 0.0 };
        }
        let antideriv = antideriv_matrix.lu();

        Ok(Arc::new(Grid {
            id: NEXT_GRID_ID.fetch_add(1, Ordering::Relaxed),
            nodes,
            quad_weights,
            bary_weights,
            diff,
            antideriv,
        }))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    pub fn diff_matrix(&self, order: usize) -> &DMatrix<f64> {
        assert!((1..=4).contains(&order), "derivative order must be 1..=4");
        &self.diff[order - 1]
    }

    fn check(&self, f: &Field) -> Result<()> {
        if f.grid.id != self.id {
            return Err(Error::GridMismatch {
                field_len: f.values.len(),
                grid_len: self.nodes.len(),
            });
        }
        Ok(())
    }

    /// Spectral derivative of the interpolating polynomial.
    pub fn differentiate(&self, f: &Field, order: usize) -> Result<Field> {
        self.check(f)?;
        if !(1..=4).contains(&order) {
            return Err(Error::InvalidArgument(format!(
                "derivative order must be in 1..=4, got {order}"
            )));
        }
        let v = DVector::from_column_slice(&f.values);
        let out = &self.diff[order - 1] * v;
        Ok(Field {
            grid: f.grid.clone(),
            values: out.as_slice().to_vec(),
        })
    }

    /// Clenshaw–Curtis quadrature of `f` over `[-1, 1]`.
    pub fn integrate(&self, f: &Field) -> f64 {
        debug_assert_eq!(f.values.len(), self.nodes.len());
        self.quad_weights
            .iter()
            .zip(&f.values)
            .map(|(w, v)| w * v)
            .sum()
    }

    /// Barycentric evaluation of the interpolant at `y`.
    pub fn interpolate(&self, f: &Field, y: f64) -> Result<f64> {
        self.check(f)?;
        if !(-1.0..=1.0).contains(&y) {
            return Err(Error::OutOfDomain(y));
        }
        Ok(self.interpolate_unchecked(&f.values, y))
    }

    pub(crate) fn interpolate_unchecked(&self, values: &[f64], y: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&x, &w), &v) in self.nodes.iter().zip(&self.bary_weights).zip(values) {
            let d = y - x;
            if d == 0.0 {
                return v;
            }
            let t = w / d;
            num += t * v;
            den += t;
        }
        num / den
    }

    /// Antiderivative field `P` with `P(-1) = 0`, obtained by solving
    /// `D1 P = f` with the first row replaced by the boundary condition.
    /// Interior and right-endpoint rows of `D1 P` match `f` to solver
    /// precision, which is what the reconstruction identities rely on.
    pub fn cumulative_integral(&self, f: &Field) -> Result<Field> {
        self.check(f)?;
        let mut rhs = DVector::from_column_slice(&f.values);
        rhs[0] = 0.0;
        let sol = self
            .antideriv
            .solve(&rhs)
            .ok_or_else(|| Error::SingularSystem("antiderivative solve".into()))?;
        Ok(Field {
            grid: f.grid.clone(),
            values: sol.as_slice().to_vec(),
        })
    }
}

fn diff_matrix_order1(nodes: &[f64], bary: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                d[(i, j)] = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
            }
        }
    }
    apply_negative_sum_trick(&mut d);
    d
}

/// Set each diagonal entry to the negated sum of its row's off-diagonal
/// entries, so constants are annihilated exactly. Standard stabilization for
/// repeated differentiation.
fn apply_negative_sum_trick(d: &mut DMatrix<f64>) {
    let n = d.nrows();
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            if j != i {
                s += d[(i, j)];
            }
        }
        d[(i, i)] = -s;
    }
}

/// Clenshaw–Curtis weights for n Gauss–Lobatto nodes (either node ordering;
/// the weights are symmetric).
fn clenshaw_curtis_weights(n: usize) -> Vec<f64> {
    let m = n - 1;
    let mut w = vec![0.0; n];
    let end = if m % 2 == 0 {
        1.0 / (m * m - 1) as f64
    } else {
        1.0 / (m * m) as f64
    };
    w[0] = end;
    w[m] = end;
    for j in 1..m {
        let theta = PI * j as f64 / m as f64;
        let mut v = 1.0;
        for k in 1..=(m / 2) {
            let b = if 2 * k == m { 1.0 } else { 2.0 };
            v -= b * (2.0 * k as f64 * theta).cos() / (4 * k * k - 1) as f64;
        }
        w[j] = 2.0 * v / m as f64;
    }
    w
}

/// Real-valued samples on a [`Grid`], one per node.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl Field {
    /// Wrap nodal values; rejects length mismatches and non-finite entries.
    pub fn from_values(grid: Arc<Grid>, values: Vec<f64>) -> Result<Field> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch {
                field_len: values.len(),
                grid_len: grid.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidField(format!("non-finite value {bad}")));
        }
        Ok(Field { grid, values })
    }

    /// Sample a function at the grid nodes.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> f64) -> Field {
        let values = grid.nodes().iter().map(|&y| f(y)).collect();
        Field {
            grid: grid.clone(),
            values,
        }
    }

    pub fn zeros(grid: &Arc<Grid>) -> Field {
        Field {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Elementwise map into a new field on the same grid.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Nodewise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        debug_assert_eq!(self.values.len(), other.values.len());
        Field {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Field {
        self.map(|v| c * v)
    }

    /// Largest nodal magnitude (not the interpolant sup norm; see [`crate::norms`]).
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, &v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn grid(n: usize) -> Arc<Grid> {
        Grid::new(n).unwrap()
    }

    #[test]
    fn rejects_small_grids() {
        assert!(matches!(Grid::new(7), Err(Error::GridTooSmall(7))));
        assert!(Grid::new(8).is_ok());
    }

    #[test]
    fn nodes_contain_endpoints_and_are_monotone() {
        for n in [8, 9, 32, 33] {
            let g = grid(n);
            let nodes = g.nodes();
            assert_eq!(nodes[0], -1.0);
            assert_eq!(nodes[n - 1], 1.0);
            assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn weights_sum_to_interval_measure() {
        for n in [8, 16, 33, 64] {
            let g = grid(n);
            let total: f64 = g.quad_weights().iter().sum();
            assert_abs_diff_eq!(total, 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn quadrature_polynomial_oracles() {
        let g = grid(32);
        let one = Field::from_fn(&g, |_| 1.0);
        assert_abs_diff_eq!(g.integrate(&one), 2.0, epsilon = 1e-14);

        let odd = Field::from_fn(&g, |y| y);
        assert_abs_diff_eq!(g.integrate(&odd), 0.0, epsilon = 1e-14);

        let sq = Field::from_fn(&g, |y| y * y);
        assert_abs_diff_eq!(g.integrate(&sq), 2.0 / 3.0, epsilon = 1e-12);

        let parabola = Field::from_fn(&g, |y| 1.0 - y * y);
        assert_abs_diff_eq!(g.integrate(&parabola), 4.0 / 3.0, epsilon = 1e-12);

        let quartic = Field::from_fn(&g, |y| (1.0 - y * y).powi(2));
        assert_abs_diff_eq!(g.integrate(&quartic), 16.0 / 15.0, epsilon = 1e-12);
    }

    #[test]
    fn first_derivative_of_constants_and_identity() {
        let g = grid(24);
        let one = Field::from_fn(&g, |_| 1.0);
        let d = g.differentiate(&one, 1).unwrap();
        assert!(d.max_abs() < 1e-12);

        let id = Field::from_fn(&g, |y| y);
        let d = g.differentiate(&id, 1).unwrap();
        for &v in d.values() {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn derivatives_exact_on_polynomials() {
        let g = grid(32);
        let sq = Field::from_fn(&g, |y| y * y);
        let d = g.differentiate(&sq, 1).unwrap();
        for (&y, &v) in g.nodes().iter().zip(d.values()) {
            assert_abs_diff_eq!(v, 2.0 * y, epsilon = 1e-10);
        }

        // (1-y^2)^2 = 1 - 2y^2 + y^4 has constant fourth derivative 24.
        // Rounding amplification of a fourth-order matrix reaches ~n^8 eps.
        let q = Field::from_fn(&g, |y| (1.0 - y * y).powi(2));
        let d4 = g.differentiate(&q, 4).unwrap();
        for &v in d4.values() {
            assert_abs_diff_eq!(v, 24.0, epsilon = 1e-6);
        }

        // Constants are annihilated: exactly by construction at order 1,
        // up to n^{2k}·eps amplification for the higher powers.
        for order in 1..=4 {
            let c = Field::from_fn(&g, |_| 3.25);
            let d = g.differentiate(&c, order).unwrap();
            let tol = if order == 1 { 1e-12 } else { 1e-6 };
            assert!(d.max_abs() < tol, "order {order}: {}", d.max_abs());
        }
    }

    #[test]
    fn fundamental_theorem_for_smooth_fields() {
        let g = grid(48);
        let f = Field::from_fn(&g, |y| y.exp());
        let d = g.differentiate(&f, 1).unwrap();
        let boundary = 1.0_f64.exp() - (-1.0_f64).exp();
        assert_abs_diff_eq!(g.integrate(&d), boundary, epsilon = 1e-10);
    }

    #[test]
    fn interpolation_reproduces_nodes_and_polynomials() {
        let g = grid(32);
        let f = Field::from_fn(&g, |y| 1.0 - y * y);
        assert_abs_diff_eq!(g.interpolate(&f, 0.0).unwrap(), 1.0, epsilon = 1e-13);
        for (j, &y) in g.nodes().iter().enumerate() {
            assert_eq!(g.interpolate(&f, y).unwrap(), f.values()[j]);
        }

        let c = Field::from_fn(&g, |y| (PI * y / 2.0).cos());
        let expected = (0.15_f64 * PI).cos();
        assert_abs_diff_eq!(g.interpolate(&c, 0.3).unwrap(), expected, epsilon = 1e-10);

        assert!(matches!(
            g.interpolate(&c, 1.5),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn quadrature_converges_geometrically_for_analytic_fields() {
        // Reference at n = 96; the error should drop by orders of magnitude
        // with each refinement until it reaches the rounding floor.
        let reference = {
            let g = grid(96);
            g.integrate(&Field::from_fn(&g, |y| (2.0 + (3.0 * y).sin()).recip()))
        };
        let errs: Vec<f64> = [12, 16, 24, 32]
            .iter()
            .map(|&n| {
                let g = grid(n);
                let v = g.integrate(&Field::from_fn(&g, |y| (2.0 + (3.0 * y).sin()).recip()));
                (v - reference).abs().max(1e-16)
            })
            .collect();
        for pair in errs.windows(2) {
            assert!(
                pair[1] < 0.2 * pair[0] || pair[1] < 1e-13,
                "no geometric decay: {errs:?}"
            );
        }
        assert!(errs[3] < 1e-10, "final error too large: {errs:?}");
    }

    #[test]
    fn cumulative_integral_matches_antiderivative() {
        let g = grid(32);
        let f = Field::from_fn(&g, |_| 1.0);
        let p = g.cumulative_integral(&f).unwrap();
        for (&y, &v) in g.nodes().iter().zip(p.values()) {
            assert_abs_diff_eq!(v, y + 1.0, epsilon = 1e-12);
        }

        let f = Field::from_fn(&g, |y| y.cos());
        let p = g.cumulative_integral(&f).unwrap();
        for (&y, &v) in g.nodes().iter().zip(p.values()) {
            assert_abs_diff_eq!(v, y.sin() + 1.0_f64.sin(), epsilon = 1e-11);
        }
        // Consistent with the quadrature functional at the right endpoint.
        assert_abs_diff_eq!(
            p.values()[g.len() - 1],
            g.integrate(&f),
            epsilon = 1e-12
        );
    }

    #[test]
    fn field_validation() {
        let g = grid(8);
        assert!(Field::from_values(g.clone(), vec![0.0; 7]).is_err());
        assert!(Field::from_values(g.clone(), vec![f64::NAN; 8]).is_err());
        let other = grid(8);
        let f = Field::from_fn(&other, |y| y);
        assert!(matches!(
            g.differentiate(&f, 1),
            Err(Error::GridMismatch { .. })
        ));
    }

    proptest! {
        /// Quadrature is exact (to rounding) for random polynomials of
        /// degree <= 6 on any admissible grid.
        #[test]
        fn quadrature_exact_on_low_degree_polynomials(
            coeffs in proptest::collection::vec(-1.0f64..1.0, 7),
            n in 8usize..48,
        ) {
            let g = grid(n);
            let f = Field::from_fn(&g, |y| {
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c)
            });
            // Exact moments: int y^k = 2/(k+1) for even k, 0 for odd k.
            let exact: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 0 { 2.0 * c / (k as f64 + 1.0) } else { 0.0 })
                .sum();
            prop_assert!((g.integrate(&f) - exact).abs() < 1e-12);
        }

        /// Fundamental theorem of calculus at spectral accuracy.
        #[test]
        fn ftc_on_random_polynomials(
            coeffs in proptest::collection::vec(-1.0f64..1.0, 7),
        ) {
            let g = grid(32);
            let eval = |y: f64| coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c);
            let f = Field::from_fn(&g, eval);
            let d = g.differentiate(&f, 1).unwrap();
            prop_assert!((g.integrate(&d) - (eval(1.0) - eval(-1.0))).abs() < 1e-10);
        }
    }
}
