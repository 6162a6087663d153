//! The discrete oscillator and its ladder operators, on the index space
//! `{0, ..., N}` and scaled onto the grid `hZ`.
//!
//! The scaled Hamiltonian is a symmetric tridiagonal operator with diagonal
//! `1 + 2/h^2` whose spectrum is exactly `{1, 3, ..., 2N+1}`; the lowering
//! and raising operators shift the mode index by one with explicit
//! coefficients and are mutually adjoint for the `l2(hZ)` product.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::linalg;

/// Oscillator on the index space:
/// `(Hf)(k) = sqrt((k+1)(N-k)) f(k+1) + sqrt(k(N-k+1)) f(k-1) - N f(k)`,
/// zero outside `{0, ..., N}`. Eigenvalues are `-2n` on the basis rows.
pub fn apply_h_unscaled(f: &[f64]) -> Vec<f64> {
    let n = f.len() - 1;
    (0..=n)
        .map(|k| {
            let up = if k < n { ((k + 1) as f64 * (n - k) as f64).sqrt() * f[k + 1] } else { 0.0 };
            let down = if k > 0 { (k as f64 * (n - k + 1) as f64).sqrt() * f[k - 1] } else { 0.0 };
            up + down - n as f64 * f[k]
        })
        .collect()
}

/// Lowering operator with index shift: `(L_m f)(k) = (k - N + m) f(k) + sqrt((N-k)(k+1)) f(k+1)`.
pub fn apply_lowering_unscaled(m: usize, f: &[f64]) -> Vec<f64> {
    let n = f.len() - 1;
    (0..=n)
        .map(|k| {
            let up = if k < n { ((n - k) as f64 * (k + 1) as f64).sqrt() * f[k + 1] } else { 0.0 };
            (k as f64 - n as f64 + m as f64) * f[k] + up
        })
        .collect()
}

/// Raising operator with index shift: `(R_m f)(k) = (k - N + m) f(k) + sqrt(k(N-k+1)) f(k-1)`.
pub fn apply_raising_unscaled(m: usize, f: &[f64]) -> Vec<f64> {
    let n = f.len() - 1;
    (0..=n)
        .map(|k| {
            let down = if k > 0 { (k as f64 * (n - k + 1) as f64).sqrt() * f[k - 1] } else { 0.0 };
            (k as f64 - n as f64 + m as f64) * f[k] + down
        })
        .collect()
}

/// Residuals of the two index-space factorizations applied to `f`:
/// `R_{n-1} L_n - [(k+n-1-N)(H + n) + nk]` and
/// `L_{n+1} R_n - [(k+n+1-N)(H + n) + nk + N]`,
/// returned as Euclidean norms.
pub fn unscaled_factorization_residuals(m: usize, f: &[f64]) -> (f64, f64) {
    assert!(m >= 1);
    let n = f.len() - 1;
    let hf = apply_h_unscaled(f);
    let rl = apply_raising_unscaled(m - 1, &apply_lowering_unscaled(m, f));
    let lr = apply_lowering_unscaled(m + 1, &apply_raising_unscaled(m, f));
    let mut res_rl = 0.0;
    let mut res_lr = 0.0;
    for k in 0..=n {
        let shifted = hf[k] + m as f64 * f[k];
        let rhs_rl = (k as f64 + m as f64 - 1.0 - n as f64) * shifted + m as f64 * k as f64 * f[k];
        let rhs_lr = (k as f64 + m as f64 + 1.0 - n as f64) * shifted
            + (m as f64 * k as f64 + n as f64) * f[k];
        res_rl += (rl[k] - rhs_rl).powi(2);
        res_lr += (lr[k] - rhs_lr).powi(2);
    }
    (res_rl.sqrt(), res_lr.sqrt())
}

/// Scaled Hamiltonian `H_h` as a symmetric tridiagonal `(diag, off)` pair;
/// `off[k]` couples nodes `k` and `k + 1`.
#[derive(Debug, Clone)]
pub struct DiscreteHamiltonian {
    grid: Grid,
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl DiscreteHamiltonian {
    pub fn new(grid: Grid) -> Self {
        let n = grid.n();
        let h = grid.h();
        let diag = vec![1.0 + 2.0 / (h * h); n + 1];
        let off: Vec<f64> = (0..n)
            .map(|k| {
                let a = grid.node(k);
                -((1.0 + a * h + h * h) * (1.0 - a * h)).sqrt() / (h * h)
            })
            .collect();
        DiscreteHamiltonian { grid, diag, off }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction> {
        self.grid.check_same(&u.grid())?;
        let n = self.grid.n();
        let v = u.values();
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = v[k] * self.diag[k];
            if k < n {
                acc += v[k + 1] * self.off[k];
            }
            if k > 0 {
                acc += v[k - 1] * self.off[k - 1];
            }
            out.push(acc);
        }
        GridFunction::new(self.grid, out)
    }

    /// Full spectrum by the tridiagonal QL iteration, sorted ascending.
    /// Exactly `{1, 3, ..., 2N+1}` up to roundoff.
    pub fn spectrum(&self) -> Vec<f64> {
        linalg::tridiagonal_eigenvalues(&self.diag, &self.off)
    }

    /// Dense complex matrix `scale * H_h`, for the propagator oracle.
    pub fn to_dense(&self, scale: Complex64) -> Array2<Complex64> {
        let n = self.grid.n();
        let mut m = Array2::<Complex64>::zeros((n + 1, n + 1));
        for k in 0..=n {
            m[[k, k]] = scale * self.diag[k];
            if k < n {
                m[[k, k + 1]] = scale * self.off[k];
                m[[k + 1, k]] = scale * self.off[k];
            }
        }
        m
    }
}

/// Lowering/raising pair at mode index `n`, stored as diagonal plus one band
/// each. The bands are evaluated independently from their displayed formulas;
/// their agreement across an edge is what makes the pair adjoint.
#[derive(Debug, Clone)]
pub struct LadderPair {
    grid: Grid,
    n: usize,
    diag: Vec<f64>,
    /// `sup[k]` couples `k -> k+1` in the lowering operator.
    sup: Vec<f64>,
    /// `sub[k]` couples `k+1 -> k` in the raising operator.
    sub: Vec<f64>,
}

impl LadderPair {
    pub fn new(grid: Grid, n: usize) -> Self {
        let size = grid.n();
        let h = grid.h();
        let diag: Vec<f64> =
            (0..=size).map(|k| n as f64 * h - 1.0 / h + grid.node(k)).collect();
        let sup: Vec<f64> = (0..size)
            .map(|k| {
                let a = grid.node(k);
                ((1.0 - a * h) * (1.0 + a * h + h * h)).sqrt() / h
            })
            .collect();
        let sub: Vec<f64> = (1..=size)
            .map(|k| {
                let a = grid.node(k);
                ((1.0 + a * h) * (1.0 - a * h + h * h)).sqrt() / h
            })
            .collect();
        LadderPair { grid, n, diag, sup, sub }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn mode(&self) -> usize {
        self.n
    }

    /// `L_{n,h} u(a) = (nh - 1/h + a) u(a) + h^{-1} sqrt((1-ah)(1+ah+h^2)) u(a+h)`.
    pub fn apply_lowering(&self, u: &GridFunction) -> Result<GridFunction> {
        self.grid.check_same(&u.grid())?;
        let size = self.grid.n();
        let v = u.values();
        let out: Vec<Complex64> = (0..=size)
            .map(|k| {
                let mut acc = v[k] * self.diag[k];
                if k < size {
                    acc += v[k + 1] * self.sup[k];
                }
                acc
            })
            .collect();
        GridFunction::new(self.grid, out)
    }

    /// `R_{n,h} u(a) = (nh - 1/h + a) u(a) + h^{-1} sqrt((1+ah)(1-ah+h^2)) u(a-h)`.
    pub fn apply_raising(&self, u: &GridFunction) -> Result<GridFunction> {
        self.grid.check_same(&u.grid())?;
        let size = self.grid.n();
        let v = u.values();
        let out: Vec<Complex64> = (0..=size)
            .map(|k| {
                let mut acc = v[k] * self.diag[k];
                if k > 0 {
                    acc += v[k - 1] * self.sub[k - 1];
                }
                acc
            })
            .collect();
        GridFunction::new(self.grid, out)
    }
}

/// `l2(hZ)` residual of the mixed factorization
/// `(R_{n-1,h} L_{n,h} + L_{n+1,h} R_{n,h})/2
///  = (1 - ah - nh^2) H_h + ((2n+1) ah + (n+1) n h^2) Id`
/// applied to `u`; the `a`-dependent coefficients multiply pointwise after
/// the operators act.
pub fn factorization_residual(n: usize, u: &GridFunction) -> Result<f64> {
    let grid = u.grid();
    if n < 1 || n + 1 > grid.n() {
        return Err(Error::IndexOutOfRange { index: n, max: grid.n() - 1 });
    }
    let h = grid.h();
    let hamiltonian = DiscreteHamiltonian::new(grid);
    let pair_n = LadderPair::new(grid, n);
    let pair_prev = LadderPair::new(grid, n - 1);
    let pair_next = LadderPair::new(grid, n + 1);

    let rl = pair_prev.apply_raising(&pair_n.apply_lowering(u)?)?;
    let lr = pair_next.apply_lowering(&pair_n.apply_raising(u)?)?;
    let hu = hamiltonian.apply(u)?;

    let nf = n as f64;
    let mut residual = 0.0;
    for k in 0..=grid.n() {
        let a = grid.node(k);
        let lhs = (rl.value(k) + lr.value(k)) * 0.5;
        let rhs = hu.value(k) * (1.0 - a * h - nf * h * h)
            + u.value(k) * ((2.0 * nf + 1.0) * a * h + (nf + 1.0) * nf * h * h);
        residual += (lhs - rhs).norm_sqr();
    }
    Ok((residual * h).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::KravchukBasis;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (diff {:.3e})", (a - b).abs());
    }

    fn unit_grid_functions(grid: Grid, count: usize) -> Vec<GridFunction> {
        // Deterministic pseudo-random vectors from a small LCG.
        let mut state = 0x5EEDu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        (0..count)
            .map(|_| {
                let values: Vec<Complex64> =
                    (0..grid.len()).map(|_| Complex64::new(next(), next())).collect();
                let f = GridFunction::new(grid, values).unwrap();
                let norm = f.norm_l2();
                f.scale(Complex64::new(1.0 / norm, 0.0))
            })
            .collect()
    }

    #[test]
    fn unscaled_oscillator_eigenrelations() {
        let big_n = 8usize;
        let basis = KravchukBasis::new(Grid::new(big_n).unwrap()).unwrap();
        for n in 0..=big_n {
            let row: Vec<f64> = basis.phi().row(n).to_vec();
            let hf = apply_h_unscaled(&row);
            for k in 0..=big_n {
                assert_close(hf[k], -2.0 * n as f64 * row[k], 1e-12);
            }
        }
    }

    #[test]
    fn unscaled_oscillator_hand_stencil() {
        // N = 4, phi_1 = (-1/2, -1/2, 0, 1/2, 1/2): (Hf)(0) = 2(-1/2) - 4(-1/2) = 1.
        let f = [-0.5, -0.5, 0.0, 0.5, 0.5];
        let hf = apply_h_unscaled(&f);
        assert_close(hf[0], 1.0, 1e-15);
        for k in 0..=4 {
            assert_close(hf[k], -2.0 * f[k], 1e-14);
        }
    }

    #[test]
    fn hamiltonian_is_conjugate_of_unscaled() {
        // H_h = (-H + 1) after the index change: diagonal N + 1, off-diagonal
        // -sqrt((k+1)(N-k)), entrywise to 1e-12.
        for n in [4usize, 50] {
            let grid = Grid::new(n).unwrap();
            let ham = DiscreteHamiltonian::new(grid);
            assert_close(ham.diag()[0], n as f64 + 1.0, 1e-11);
            for k in 0..n {
                let expected = -((k + 1) as f64 * (n - k) as f64).sqrt();
                assert_close(ham.off()[k], expected, 1e-12 * expected.abs().max(1.0));
            }
        }
    }

    #[test]
    fn hamiltonian_coupling_is_symmetric() {
        // sqrt((1+ah+h^2)(1-ah)) at a_k equals sqrt((1-ah+h^2)(1+ah)) at a_{k+1}.
        let grid = Grid::new(64).unwrap();
        let h = grid.h();
        for k in 0..64 {
            let a = grid.node(k);
            let b = grid.node(k + 1);
            let forward = ((1.0 + a * h + h * h) * (1.0 - a * h)).sqrt();
            let backward = ((1.0 - b * h + h * h) * (1.0 + b * h)).sqrt();
            assert_close(forward, backward, 1e-13 * forward.max(1.0));
        }
    }

    #[test]
    fn eigenvalue_relation_on_grid() {
        let big_n = 50usize;
        let grid = Grid::new(big_n).unwrap();
        let basis = KravchukBasis::new(grid).unwrap();
        let ham = DiscreteHamiltonian::new(grid);
        for n in 0..=big_n {
            let phi = basis.phi_h(n).unwrap();
            let hphi = ham.apply(&phi).unwrap();
            let residual = hphi.sub(&phi.scale((2.0 * n as f64 + 1.0).into())).unwrap();
            assert!(
                residual.norm_l2() <= 1e-10,
                "n = {n}: residual {:.3e}",
                residual.norm_l2()
            );
        }
        let zero = GridFunction::zeros(grid);
        assert_eq!(ham.apply(&zero).unwrap().norm_l2(), 0.0);
    }

    #[test]
    fn spectrum_is_odd_integers() {
        for n in [4usize, 50, 256] {
            let ham = DiscreteHamiltonian::new(Grid::new(n).unwrap());
            let spectrum = ham.spectrum();
            for (i, lambda) in spectrum.iter().enumerate() {
                let exact = 2.0 * i as f64 + 1.0;
                assert!(
                    (lambda - exact).abs() <= 1e-8,
                    "N={n} i={i}: {lambda} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn ladder_moves_between_modes() {
        let big_n = 50usize;
        let grid = Grid::new(big_n).unwrap();
        let basis = KravchukBasis::new(grid).unwrap();
        let h = grid.h();
        for n in 0..=big_n {
            let pair = LadderPair::new(grid, n);
            let phi = basis.phi_h(n).unwrap();

            let lowered = pair.apply_lowering(&phi).unwrap();
            if n == 0 {
                assert!(lowered.norm_l2() <= 1e-11, "L_0 phi_0: {:.3e}", lowered.norm_l2());
            } else {
                let coeff = (n as f64 * (2.0 - n as f64 * h * h + h * h)).sqrt();
                let expected = basis.phi_h(n - 1).unwrap().scale(coeff.into());
                let res = lowered.sub(&expected).unwrap().norm_l2();
                assert!(res <= 1e-11, "lowering n={n}: {res:.3e}");
            }

            let raised = pair.apply_raising(&phi).unwrap();
            if n == big_n {
                assert!(raised.norm_l2() <= 1e-11, "R_N phi_N: {:.3e}", raised.norm_l2());
            } else {
                let coeff = ((2.0 - n as f64 * h * h) * (n as f64 + 1.0)).sqrt();
                let expected = basis.phi_h(n + 1).unwrap().scale(coeff.into());
                let res = raised.sub(&expected).unwrap().norm_l2();
                assert!(res <= 1e-11, "raising n={n}: {res:.3e}");
            }
        }
    }

    #[test]
    fn raising_and_lowering_are_adjoint() {
        let grid = Grid::new(32).unwrap();
        let vectors = unit_grid_functions(grid, 8);
        for n in [0usize, 1, 7] {
            let pair = LadderPair::new(grid, n);
            for pair_uv in vectors.chunks(2) {
                let (u, v) = (&pair_uv[0], &pair_uv[1]);
                let lhs = pair.apply_raising(u).unwrap().inner(v).unwrap();
                let rhs = u.inner(&pair.apply_lowering(v).unwrap()).unwrap();
                let scale = lhs.norm().max(rhs.norm()).max(1.0);
                assert!(
                    (lhs - rhs).norm() <= 1e-12 * scale,
                    "n={n}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn oscillator_is_self_adjoint() {
        let grid = Grid::new(32).unwrap();
        let ham = DiscreteHamiltonian::new(grid);
        let vectors = unit_grid_functions(grid, 4);
        for pair in vectors.chunks(2) {
            let (u, v) = (&pair[0], &pair[1]);
            let lhs = ham.apply(u).unwrap().inner(v).unwrap();
            let rhs = u.inner(&ham.apply(v).unwrap()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn mixed_factorization_identity() {
        let grid = Grid::new(50).unwrap();
        let basis = KravchukBasis::new(grid).unwrap();
        for n in [1usize, 3] {
            let residual = factorization_residual(n, &basis.phi_h(n).unwrap()).unwrap();
            assert!(residual <= 1e-10, "n={n} on eigenvector: {residual:.3e}");
        }
        let grid16 = Grid::new(16).unwrap();
        for u in unit_grid_functions(grid16, 3) {
            let residual = factorization_residual(1, &u).unwrap();
            assert!(residual <= 1e-10, "random vector: {residual:.3e}");
        }
        assert_eq!(factorization_residual(2, &GridFunction::zeros(grid16)).unwrap(), 0.0);
        assert!(factorization_residual(0, &GridFunction::zeros(grid16)).is_err());
    }

    #[test]
    fn unscaled_factorizations_and_composition() {
        let big_n = 24usize;
        let grid = Grid::new(big_n).unwrap();
        let basis = KravchukBasis::new(grid).unwrap();
        // R_{n-1} L_n phi_n = n (N - n + 1) phi_n.
        for n in 1..=big_n {
            let row: Vec<f64> = basis.phi().row(n).to_vec();
            let composed = apply_raising_unscaled(n - 1, &apply_lowering_unscaled(n, &row));
            let factor = n as f64 * (big_n - n + 1) as f64;
            for k in 0..=big_n {
                assert_close(composed[k], factor * row[k], 1e-10 * factor.max(1.0));
            }
        }
        // Both operator factorizations on generic data.
        let mut state = 1234567u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for m in [1usize, 2, 5] {
            let f: Vec<f64> = (0..=big_n).map(|_| next()).collect();
            let (rl, lr) = unscaled_factorization_residuals(m, &f);
            assert!(rl <= 1e-10, "RL residual {rl:.3e} at m={m}");
            assert!(lr <= 1e-10, "LR residual {lr:.3e} at m={m}");
        }
    }
}
