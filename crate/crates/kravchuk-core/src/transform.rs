//! The unitary transform between grid samples and mode coefficients, its
//! factorization through a tridiagonal matrix exponential, and coefficient
//! analysis/synthesis.
//!
//! The direct transform matrix `L` has row `n` equal to `phi_n`; it is real
//! orthogonal. The factored form is
//! `L = e^{i pi (N+1)/4} D exp(-i pi/4 A) D*` with `D = diag(i^k)` and `A`
//! the tridiagonal matrix with `N + 1` on the diagonal and `-sqrt(k(N-k+1))`
//! off it - the same matrix as the scaled Hamiltonian in index space, so its
//! eigenvalues are the odd integers and the exponential is unitary.

use ndarray::Array2;
use num_complex::Complex64;

use crate::basis::KravchukBasis;
use crate::error::{Error, Result};
use crate::evolution::SpectralState;
use crate::grid::{Grid, GridFunction};
use crate::linalg;

/// Real symmetric tridiagonal matrix with constant diagonal, stored as bands.
#[derive(Debug, Clone)]
pub struct TridiagonalHermitian {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl TridiagonalHermitian {
    /// The oscillator matrix on `{0, ..., N}`: diagonal `N + 1`, off-diagonal
    /// `-beta_k = -sqrt(k (N - k + 1))` for `k = 1..=N`.
    pub fn oscillator(grid: Grid) -> Self {
        let n = grid.n();
        let diag = vec![n as f64 + 1.0; n + 1];
        let off = (1..=n).map(|k| -((k * (n - k + 1)) as f64).sqrt()).collect();
        TridiagonalHermitian { diag, off }
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Induced 1-norm of `scale * A`, computed from the bands.
    pub fn one_norm_scaled(&self, scale: Complex64) -> f64 {
        let n = self.size();
        let mut best = 0.0f64;
        for j in 0..n {
            let mut sum = self.diag[j].abs();
            if j > 0 {
                sum += self.off[j - 1].abs();
            }
            if j + 1 < n {
                sum += self.off[j].abs();
            }
            best = best.max(sum);
        }
        best * scale.norm()
    }

    /// Dense `scale * A`.
    pub fn to_dense(&self, scale: Complex64) -> Array2<Complex64> {
        let n = self.size();
        let mut m = Array2::<Complex64>::zeros((n, n));
        for j in 0..n {
            m[[j, j]] = scale * self.diag[j];
            if j + 1 < n {
                m[[j, j + 1]] = scale * self.off[j];
                m[[j + 1, j]] = scale * self.off[j];
            }
        }
        m
    }

    /// Apply to a real vector (used by the eigen-relation checks).
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|j| {
                let mut acc = self.diag[j] * v[j];
                if j > 0 {
                    acc += self.off[j - 1] * v[j - 1];
                }
                if j + 1 < n {
                    acc += self.off[j] * v[j + 1];
                }
                acc
            })
            .collect()
    }
}

/// `exp(scale * A)` by scaling-and-squaring with Pade(13); the scaling
/// parameter comes from the 1-norm of `scale * A`, which is read off the
/// bands. Unitary whenever `scale` is purely imaginary.
pub fn expm_tridiagonal(
    a: &TridiagonalHermitian,
    scale: Complex64,
) -> Result<Array2<Complex64>> {
    if !scale.re.is_finite() || !scale.im.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    linalg::expm_with_norm(&a.to_dense(scale), a.one_norm_scaled(scale))
}

/// `exp(scale * A)` through the known eigenpairs: the basis rows are the
/// eigenvectors of `A` with eigenvalues `2n + 1`, so
/// `exp(scale A) = P^T diag(e^{scale (2n+1)}) P` with `P` the row matrix.
/// Cross-validation path for [`expm_tridiagonal`], and an `O(N^2)` apply.
pub fn expm_eigen(basis: &KravchukBasis, scale: Complex64) -> Result<Array2<Complex64>> {
    let p = full_phi(basis)?;
    let n = basis.grid().n();
    let mut scaled_re = p.clone();
    let mut scaled_im = p.clone();
    for m in 0..=n {
        let phase = (scale * (2.0 * m as f64 + 1.0)).exp();
        for k in 0..=n {
            scaled_re[[m, k]] *= phase.re;
            scaled_im[[m, k]] *= phase.im;
        }
    }
    let re = p.t().dot(&scaled_re);
    let im = p.t().dot(&scaled_im);
    let mut out = Array2::<Complex64>::zeros((n + 1, n + 1));
    for ((i, j), v) in out.indexed_iter_mut() {
        *v = Complex64::new(re[[i, j]], im[[i, j]]);
    }
    Ok(out)
}

fn full_phi(basis: &KravchukBasis) -> Result<&Array2<f64>> {
    if basis.max_mode() != basis.grid().n() {
        return Err(Error::Config(
            "transform matrices require the full basis (max_mode = N)".into(),
        ));
    }
    Ok(basis.phi())
}

/// The direct transform matrix: row `n`, column `k` is `phi_n(k)`.
pub fn build_l_direct(basis: &KravchukBasis) -> Result<Array2<f64>> {
    Ok(full_phi(basis)?.clone())
}

/// `i^k`, exactly.
fn phase_quarter(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `e^{i pi m / 4}`, exact for the axis and diagonal directions.
fn phase_eighth(m: usize) -> Complex64 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match m % 8 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(r, r),
        2 => Complex64::new(0.0, 1.0),
        3 => Complex64::new(-r, r),
        4 => Complex64::new(-1.0, 0.0),
        5 => Complex64::new(-r, -r),
        6 => Complex64::new(0.0, -1.0),
        _ => Complex64::new(r, -r),
    }
}

/// Construction fails above this unitarity residual.
pub const UNITARITY_HARD_LIMIT: f64 = 1e-8;

/// The factored transform `e^{i pi (N+1)/4} D exp(-i pi/4 A) D*`.
///
/// The product is real up to roundoff and equals the direct matrix; the
/// entrywise unitarity residual is checked before returning.
pub fn build_l_factored(grid: Grid) -> Result<Array2<Complex64>> {
    let a = TridiagonalHermitian::oscillator(grid);
    let core = expm_tridiagonal(&a, Complex64::new(0.0, -std::f64::consts::FRAC_PI_4))?;
    let n = grid.n();
    // e^{i pi (N+1) / 4}
    let global = phase_eighth(n + 1);
    let mut l = Array2::<Complex64>::zeros((n + 1, n + 1));
    for ((j, k), v) in l.indexed_iter_mut() {
        // D core D*: entry (j, k) picks up i^j (-i)^k.
        *v = global * phase_quarter(j) * phase_quarter(k).conj() * core[[j, k]];
    }
    let residual = unitarity_residual(&l);
    if residual > UNITARITY_HARD_LIMIT {
        return Err(Error::UnitarityResidual(residual));
    }
    Ok(l)
}

/// `K = e^{-i pi N / 4} D* L D`, the phase-conjugated transform; equals
/// `e^{i pi / 4} exp(-i pi/4 A)`.
pub fn build_k_direct(basis: &KravchukBasis) -> Result<Array2<Complex64>> {
    let phi = full_phi(basis)?;
    let n = basis.grid().n();
    // e^{-i pi N / 4}
    let global = phase_eighth(n).conj();
    let mut k_mat = Array2::<Complex64>::zeros((n + 1, n + 1));
    for ((row, col), v) in k_mat.indexed_iter_mut() {
        *v = global * phase_quarter(row).conj() * phase_quarter(col) * phi[[row, col]];
    }
    Ok(k_mat)
}

/// Worst entry of `M* M - I`.
pub fn unitarity_residual(m: &Array2<Complex64>) -> f64 {
    let gram = linalg::matmul(&m.t().mapv(|z| z.conj()), m);
    let mut worst = 0.0f64;
    for ((i, j), g) in gram.indexed_iter() {
        let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::ZERO };
        worst = worst.max((g - target).norm());
    }
    worst
}

/// Coefficients `c_n = <f, phi_{n,h}> = h sum_k f_k phi_n(k) / sqrt(h)` for
/// every built mode, as a spectral state.
pub fn analyze(basis: &KravchukBasis, f: &GridFunction) -> Result<SpectralState> {
    basis.grid().check_same(&f.grid())?;
    let h = basis.grid().h();
    let scale = 1.0 / h.sqrt();
    let coeffs: Vec<Complex64> = (0..=basis.max_mode())
        .map(|n| {
            let mut acc = Complex64::ZERO;
            for (k, v) in f.values().iter().enumerate() {
                acc += v * (basis.phi_value(n, k) * scale);
            }
            acc * h
        })
        .collect();
    SpectralState::from_coefficients(basis.grid(), coeffs)
}

/// The matrix route for the same coefficients: `C = L F` with
/// `F_k = sqrt(h) f(a_k)`, which calibrates the matrix normalization to the
/// inner-product definition. Agrees with [`analyze`] to roundoff.
pub fn analyze_via_matrix(
    l_direct: &Array2<f64>,
    grid: Grid,
    f: &GridFunction,
) -> Result<Vec<Complex64>> {
    grid.check_same(&f.grid())?;
    let sqrt_h = grid.h().sqrt();
    let n = grid.n();
    assert_eq!(l_direct.nrows(), n + 1);
    let scaled: Vec<Complex64> = f.values().iter().map(|v| v * sqrt_h).collect();
    Ok((0..=n)
        .map(|row| {
            let mut acc = Complex64::ZERO;
            for (k, v) in scaled.iter().enumerate() {
                acc += v * l_direct[[row, k]];
            }
            acc
        })
        .collect())
}

/// Reconstruct the grid function `sum_n c_n phi_{n,h}`.
pub fn synthesize(basis: &KravchukBasis, state: &SpectralState) -> Result<GridFunction> {
    basis.grid().check_same(&state.grid())?;
    if state.n_max() > basis.max_mode() {
        return Err(Error::TooManyCoefficients {
            len: state.coeffs().len(),
            max: basis.max_mode() + 1,
        });
    }
    let scale = 1.0 / basis.grid().h().sqrt();
    let values: Vec<Complex64> = (0..basis.grid().len())
        .map(|k| {
            let mut acc = Complex64::ZERO;
            for (n, c) in state.coeffs().iter().enumerate() {
                acc += c * (basis.phi_value(n, k) * scale);
            }
            acc
        })
        .collect();
    GridFunction::new(basis.grid(), values)
}
