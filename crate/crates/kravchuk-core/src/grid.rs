//! Uniform symmetric grid and complex-valued grid functions.
//!
//! The grid has `N + 1` nodes `a_k = h (k - N/2)` with `h = sqrt(2/N)`, so it
//! spans exactly `[-1/h, 1/h]`. All discrete inner products and norms carry
//! the `h` weight of `l2(hZ)`; functions are implicitly zero outside the grid.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Immutable grid descriptor: `N` intervals, `N + 1` nodes, step `h = sqrt(2/N)`.
///
/// `h` is computed once at construction and reused verbatim everywhere, so
/// identities that rely on `N h^2 = 2` hold to machine precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    h: f64,
}

impl Grid {
    /// Create a grid with `n` intervals. `n` must be even and at least 2.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidGridSize(n));
        }
        let h = (2.0 / n as f64).sqrt();
        // N h^2 = 2 up to a few roundings of the sqrt/divide chain.
        debug_assert!((h * h * n as f64 - 2.0).abs() <= 8.0 * f64::EPSILON);
        Ok(Grid { n, h })
    }

    /// Number of intervals `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Step size `h = sqrt(2/N)`.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of nodes, `N + 1`.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    /// Always false; a valid grid has at least 3 nodes.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node coordinate `a_k = h (k - N/2)` without a range check.
    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        debug_assert!(k <= self.n);
        self.h * (k as f64 - (self.n / 2) as f64)
    }

    /// Checked node coordinate.
    pub fn tau(&self, k: usize) -> Result<f64> {
        if k > self.n {
            return Err(Error::IndexOutOfRange { index: k, max: self.n });
        }
        Ok(self.node(k))
    }

    /// Inverse node map: the `k` with `a_k = a`. Exact round trip of [`Self::tau`].
    pub fn tau_inv(&self, a: f64) -> Result<usize> {
        let k = (a / self.h + (self.n / 2) as f64).round();
        if !(0.0..=self.n as f64).contains(&k) {
            return Err(Error::IndexOutOfRange { index: k.abs() as usize, max: self.n });
        }
        Ok(k as usize)
    }

    /// All node coordinates in order.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|k| self.node(k)).collect()
    }

    pub(crate) fn check_same(&self, other: &Grid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(self.n, other.n));
        }
        Ok(())
    }
}

/// Complex-valued function sampled on a [`Grid`]; zero outside the grid.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { len: values.len(), expected: grid.len() });
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        GridFunction { grid, values: vec![Complex64::ZERO; grid.len()] }
    }

    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { len: values.len(), expected: grid.len() });
        }
        Ok(GridFunction {
            grid,
            values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        })
    }

    /// Sample a function at the grid nodes. Fails on non-finite samples,
    /// naming the offending node.
    pub fn project<F>(grid: Grid, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        let mut values = Vec::with_capacity(grid.len());
        for k in 0..grid.len() {
            let a = grid.node(k);
            let v = f(a);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite { value: v.re, node: a, index: k });
            }
            values.push(v);
        }
        Ok(GridFunction { grid, values })
    }

    /// Sample a real-valued function at the grid nodes.
    pub fn project_real<F>(grid: Grid, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        Self::project(grid, |a| Complex64::new(f(a), 0.0))
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, k: usize) -> Complex64 {
        self.values[k]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Discrete scalar product `<u, v> = h sum_k u_k conj(v_k)`.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        self.grid.check_same(&other.grid)?;
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| u * v.conj())
            .sum();
        Ok(s * self.grid.h)
    }

    /// `l2(hZ)` norm, `sqrt(h sum |u_k|^2)`.
    pub fn norm_l2(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (s * self.grid.h).sqrt()
    }

    /// Max-norm over the nodes.
    pub fn norm_linf(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Discrete `h1` norm: `(|u|_l2^2 + |d_h u|_l2^2)^(1/2)` with the forward
    /// difference `d_h u(a) = (u(a+h) - u(a))/h` taken over all of `hZ`
    /// (zero-padding contributes the two boundary jumps).
    pub fn norm_h1(&self) -> f64 {
        let h = self.grid.h;
        let mut diff_sq = self.values[0].norm_sqr(); // jump onto the grid at a_0 - h
        for k in 0..self.values.len() {
            let next = if k + 1 < self.values.len() { self.values[k + 1] } else { Complex64::ZERO };
            diff_sq += (next - self.values[k]).norm_sqr();
        }
        let l2_sq: f64 = self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * h;
        (l2_sq + diff_sq * h / (h * h)).sqrt()
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.grid.check_same(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(u, v)| u - v).collect();
        Ok(GridFunction { grid: self.grid, values })
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.grid.check_same(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(u, v)| u + v).collect();
        Ok(GridFunction { grid: self.grid, values })
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        GridFunction { grid: self.grid, values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Multiply pointwise by a real weight given per node.
    pub fn weighted(&self, weight: impl Fn(f64) -> f64) -> GridFunction {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v * weight(self.grid.node(k)))
            .collect();
        GridFunction { grid: self.grid, values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (diff {})", (a - b).abs());
    }

    #[test]
    fn grid_rejects_odd_or_tiny_n() {
        assert!(Grid::new(0).is_err());
        assert!(Grid::new(1).is_err());
        assert!(Grid::new(3).is_err());
        assert!(Grid::new(2).is_ok());
    }

    #[test]
    fn node_coordinates() {
        let g = Grid::new(4).unwrap();
        assert_eq!(g.tau(2).unwrap(), 0.0);
        assert_close(g.tau(0).unwrap(), -2.0_f64.sqrt(), 1e-15);
        let g2 = Grid::new(2).unwrap();
        assert_close(g2.tau(2).unwrap(), 1.0, 1e-15);
        assert!(g.tau(5).is_err());
    }

    #[test]
    fn endpoints_are_reciprocal_h() {
        for n in [2usize, 4, 50, 512] {
            let g = Grid::new(n).unwrap();
            assert_close(g.node(0), -1.0 / g.h(), 4.0 * f64::EPSILON / g.h());
            assert_close(g.node(n), 1.0 / g.h(), 4.0 * f64::EPSILON / g.h());
            assert_eq!(g.node(n / 2), 0.0);
        }
    }

    #[test]
    fn tau_round_trip_is_exact() {
        for n in [2usize, 4, 50, 256, 800] {
            let g = Grid::new(n).unwrap();
            for k in 0..=n {
                assert_eq!(g.tau_inv(g.node(k)).unwrap(), k);
            }
        }
    }

    #[test]
    fn inner_of_indicator_is_h() {
        let g = Grid::new(4).unwrap();
        let mut v = vec![Complex64::ZERO; 5];
        v[2] = Complex64::new(1.0, 0.0);
        let u = GridFunction::new(g, v).unwrap();
        let ip = u.inner(&u).unwrap();
        assert_close(ip.re, g.h(), 1e-15);
        assert_close(ip.im, 0.0, 1e-15);
        assert_close(u.norm_linf(), 1.0, 0.0);
        assert_close(u.norm_l2(), g.h().sqrt(), 1e-15);
    }

    #[test]
    fn zero_function_has_zero_norms() {
        let g = Grid::new(8).unwrap();
        let z = GridFunction::zeros(g);
        assert_eq!(z.norm_l2(), 0.0);
        assert_eq!(z.norm_linf(), 0.0);
        assert_eq!(z.norm_h1(), 0.0);
        assert_eq!(z.inner(&z).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn project_identity_function() {
        let g = Grid::new(4).unwrap();
        let u = GridFunction::project_real(g, |x| x).unwrap();
        let s = 2.0_f64.sqrt();
        let expected = [-s, -s / 2.0, 0.0, s / 2.0, s];
        for (v, e) in u.values().iter().zip(expected) {
            assert_close(v.re, e, 1e-15);
        }
    }

    #[test]
    fn project_reports_non_finite_node() {
        let g = Grid::new(4).unwrap();
        let err = GridFunction::project_real(g, |x| 1.0 / x).unwrap_err();
        match err {
            Error::NonFinite { index, .. } => assert_eq!(index, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let u = GridFunction::zeros(Grid::new(4).unwrap());
        let v = GridFunction::zeros(Grid::new(6).unwrap());
        assert!(u.inner(&v).is_err());
        assert!(u.sub(&v).is_err());
    }

    #[test]
    fn h1_norm_of_indicator() {
        // u = indicator of the center node: |u|^2 = h, |d_h u|^2 = 2/h.
        let g = Grid::new(4).unwrap();
        let mut v = vec![Complex64::ZERO; 5];
        v[2] = Complex64::new(1.0, 0.0);
        let u = GridFunction::new(g, v).unwrap();
        let h = g.h();
        assert_close(u.norm_h1(), (h + 2.0 / h).sqrt(), 1e-14);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
            proptest::collection::vec(
                (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex64::new(re, im)),
                len,
            )
        }

        proptest! {
            #[test]
            fn inner_conjugate_symmetry(a in complex_vec(9), b in complex_vec(9)) {
                let g = Grid::new(8).unwrap();
                let u = GridFunction::new(g, a).unwrap();
                let v = GridFunction::new(g, b).unwrap();
                let uv = u.inner(&v).unwrap();
                let vu = v.inner(&u).unwrap();
                prop_assert!((uv - vu.conj()).norm() <= 1e-12 * (1.0 + uv.norm()));
            }

            #[test]
            fn projection_is_linear(alpha in -5.0..5.0f64, beta in -5.0..5.0f64) {
                let g = Grid::new(16).unwrap();
                let f = |x: f64| x.cos();
                let gfn = |x: f64| x * x;
                let combo = GridFunction::project_real(g, |x| alpha * f(x) + beta * gfn(x)).unwrap();
                let pf = GridFunction::project_real(g, f).unwrap();
                let pg = GridFunction::project_real(g, gfn).unwrap();
                for k in 0..g.len() {
                    let lhs = combo.value(k).re;
                    let rhs = alpha * pf.value(k).re + beta * pg.value(k).re;
                    prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
                }
            }
        }
    }
}
