//! Binomial weight, Kravchuk polynomials and the orthonormal Kravchuk basis.
//!
//! The basis rows are generated by the normalized raising recurrence acting
//! directly on the functions, which keeps every intermediate O(1); the
//! polynomial route `K_n sqrt(Pi) / d_n` is exposed only as a small-`N`
//! oracle, since the binomial and `h^{-n}` factors overflow long before the
//! functions themselves misbehave.

use ndarray::Array2;
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};

/// Symmetric binomial weight `Pi(k) = 2^{-N} C(N, k)` on `{0, ..., N}`,
/// stored both linearly and in log space.
#[derive(Debug, Clone)]
pub struct BinomialWeight {
    grid: Grid,
    pi: Vec<f64>,
    log_pi: Vec<f64>,
}

impl BinomialWeight {
    /// Build the weight by the ratio recurrence `Pi(k+1) = Pi(k) (N-k)/(k+1)`
    /// from `Pi(0) = 2^{-N}`, mirrored around the center so the symmetry
    /// `Pi(k) = Pi(N-k)` holds bit for bit. Above `N = 1024` the linear array
    /// is rebuilt from the log recurrence (the tails underflow; the center
    /// stays exact to rounding).
    pub fn new(grid: Grid) -> Self {
        let n = grid.n();
        let half = n / 2;

        let mut log_pi = vec![0.0; n + 1];
        log_pi[0] = -(n as f64) * LN_2;
        for k in 0..half {
            log_pi[k + 1] = log_pi[k] + ((n - k) as f64 / (k + 1) as f64).ln();
        }
        for k in 0..half {
            log_pi[n - k] = log_pi[k];
        }

        let mut pi = vec![0.0; n + 1];
        if n <= 1024 {
            pi[0] = 0.5f64.powi(n as i32);
            for k in 0..half {
                pi[k + 1] = pi[k] * (n - k) as f64 / (k + 1) as f64;
            }
        } else {
            for (k, v) in pi.iter_mut().enumerate().take(half + 1) {
                *v = log_pi[k].exp();
            }
        }
        for k in 0..half {
            pi[n - k] = pi[k];
        }

        BinomialWeight { grid, pi, log_pi }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// `Pi(k)` for `k = 0..=N`.
    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    /// `log Pi(k)` for `k = 0..=N`.
    pub fn log_pi(&self) -> &[f64] {
        &self.log_pi
    }

    /// The scaled weight `rho_h(a_k) = Pi(k)/h` as a grid function.
    pub fn rho(&self) -> GridFunction {
        let h = self.grid.h();
        let values: Vec<f64> = self.pi.iter().map(|&p| p / h).collect();
        GridFunction::from_real(self.grid, &values).expect("length matches by construction")
    }
}

/// Forward difference on an integer-indexed window: `(Df)(k) = f(k+1) - f(k)`,
/// reading zero beyond the right end. Exact wherever the true sequence
/// vanishes to the right of the window.
pub fn forward_diff(seq: &[f64]) -> Vec<f64> {
    (0..seq.len())
        .map(|k| {
            let next = if k + 1 < seq.len() { seq[k + 1] } else { 0.0 };
            next - seq[k]
        })
        .collect()
}

/// Backward difference: `(Df)(k) = f(k) - f(k-1)`, reading zero before the
/// left end.
pub fn backward_diff(seq: &[f64]) -> Vec<f64> {
    (0..seq.len())
        .map(|k| {
            let prev = if k > 0 { seq[k - 1] } else { 0.0 };
            seq[k] - prev
        })
        .collect()
}

/// Binomial coefficient as f64 by the multiplicative ladder; zero for `b > a`.
fn binom(a: usize, b: usize) -> f64 {
    if b > a {
        return 0.0;
    }
    let b = b.min(a - b);
    let mut r = 1.0;
    for i in 0..b {
        r = r * (a - i) as f64 / (i + 1) as f64;
    }
    r
}

/// Kravchuk polynomial `K_n(k, N)` by the three-term recurrence
/// `(m+1) K_{m+1}(k) = (k - N/2) K_m(k) - ((N-m+1)/4) K_{m-1}(k)`,
/// seeded `K_0 = 1`, `K_{-1} = 0`.
///
/// Returns `None` for `n > N`: the scaled family vanishes there and this
/// evaluator does not model it.
pub fn kravchuk_poly(n: usize, k: usize, big_n: usize) -> Option<f64> {
    if n > big_n {
        return None;
    }
    let x = k as f64 - big_n as f64 / 2.0;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for m in 0..n {
        let next = (x * cur - (big_n - m + 1) as f64 / 4.0 * prev) / (m as f64 + 1.0);
        prev = cur;
        cur = next;
    }
    Some(cur)
}

/// Reference evaluation of `K_n(k, N)` by the explicit alternating sum
/// `2^{-n} sum_j (-1)^{n-j} C(k, j) C(N-k, n-j)`. Oracle for small `N`.
pub fn kravchuk_poly_explicit(n: usize, k: usize, big_n: usize) -> f64 {
    let mut s = 0.0;
    for j in 0..=n {
        let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * binom(k, j) * binom(big_n - k, n - j);
    }
    s / 2.0f64.powi(n as i32)
}

/// Right-hand side of the Rodrigues formula,
/// `(-1)^n / (2^n n!) * D^n [ Pi(k) prod_{j<n} (k - j) ]`,
/// evaluated on `k = 0..=N` by `n` repeated forward differences.
/// The caller compares against `K_n(k) Pi(k)`. Oracle for `N <= 64`.
pub fn rodrigues_oracle(n: usize, big_n: usize) -> Vec<f64> {
    assert!(big_n <= 64 && n <= big_n, "rodrigues oracle is for small N");
    let weight: Vec<f64> =
        (0..=big_n).map(|k| binom(big_n, k) / 2.0f64.powi(big_n as i32)).collect();
    let mut seq: Vec<f64> = (0..=big_n)
        .map(|k| {
            let mut prod = 1.0;
            for j in 0..n {
                prod *= k as f64 - j as f64;
            }
            weight[k] * prod
        })
        .collect();
    for _ in 0..n {
        seq = forward_diff(&seq);
    }
    let mut factorial = 1.0;
    for m in 1..=n {
        factorial *= m as f64;
    }
    let scale = if n % 2 == 0 { 1.0 } else { -1.0 } / (2.0f64.powi(n as i32) * factorial);
    seq.iter_mut().for_each(|v| *v *= scale);
    seq
}

/// Orthonormal Kravchuk functions `phi_n(k)` on `{0, ..., N}` together with
/// the weight and the normalization sequences.
///
/// Each row is generated along `k` by its own eigenvector recurrence
/// `sqrt((k+1)(N-k)) phi_n(k+1) = (N-2n) phi_n(k) - sqrt(k(N-k+1)) phi_n(k-1)`,
/// seeded with the exact boundary value `phi_n(0) = (-1)^n 2^{-N/2} sqrt(C(N,n))`
/// and mirrored across the midpoint by the reflection symmetry
/// `phi_n(N-k) = (-1)^n phi_n(k)`. Every intermediate stays O(1), and the
/// recurrence runs with the growing solution up to the midpoint, so the rows
/// come out orthonormal to a few hundred ulps even at `N = 512`. (The
/// raising recurrence in `n` is not used for construction: noise components
/// under it grow roughly like `2^n`, which destroys the top half of the
/// family already at `N ~ 100`. It is still verified as an identity by the
/// operator tests.)
#[derive(Debug, Clone)]
pub struct KravchukBasis {
    grid: Grid,
    weight: BinomialWeight,
    phi: Array2<f64>,
    max_mode: usize,
    log_d: Vec<f64>,
    log_alpha: Vec<f64>,
}

/// Construction fails above this Gram residual.
pub const GRAM_HARD_LIMIT: f64 = 1e-8;

impl KravchukBasis {
    /// Build the full `(N+1) x (N+1)` family.
    pub fn new(grid: Grid) -> Result<Self> {
        Self::truncated(grid, grid.n())
    }

    /// Build rows `0..=max_mode` only. The Gram check covers the built rows.
    pub fn truncated(grid: Grid, max_mode: usize) -> Result<Self> {
        let n = grid.n();
        if max_mode > n {
            return Err(Error::IndexOutOfRange { index: max_mode, max: n });
        }
        let weight = BinomialWeight::new(grid);

        // log C(N, m) for the boundary seeds.
        let mut log_c = vec![0.0f64; n + 1];
        for m in 0..n {
            log_c[m + 1] = log_c[m] + ((n - m) as f64 / (m + 1) as f64).ln();
        }

        let half = n / 2;
        let mut phi = Array2::<f64>::zeros((max_mode + 1, n + 1));
        for mode in 0..=max_mode {
            let sign = if mode % 2 == 0 { 1.0 } else { -1.0 };
            phi[[mode, 0]] = sign * (0.5 * log_c[mode] - 0.5 * n as f64 * LN_2).exp();
            for k in 0..half {
                let up = ((k + 1) as f64 * (n - k) as f64).sqrt();
                let down = if k > 0 {
                    (k as f64 * (n - k + 1) as f64).sqrt() * phi[[mode, k - 1]]
                } else {
                    0.0
                };
                phi[[mode, k + 1]] =
                    ((n as f64 - 2.0 * mode as f64) * phi[[mode, k]] - down) / up;
            }
            for k in half + 1..=n {
                phi[[mode, k]] = sign * phi[[mode, n - k]];
            }
        }

        // d_n = 2^{-n} sqrt(C(N, n)) and alpha_{n,h} = h^{-n} / (sqrt(C(N, n)) n!),
        // kept in log space; both are positive.
        let ln_h = grid.h().ln();
        let mut log_d = vec![0.0; n + 1];
        let mut log_alpha = vec![0.0; n + 1];
        let mut log_binom = 0.0f64;
        let mut log_factorial = 0.0f64;
        for m in 0..=n {
            log_d[m] = -(m as f64) * LN_2 + 0.5 * log_binom;
            log_alpha[m] = -(m as f64) * ln_h - 0.5 * log_binom - log_factorial;
            if m < n {
                log_binom += ((n - m) as f64 / (m + 1) as f64).ln();
                log_factorial += ((m + 1) as f64).ln();
            }
        }

        let basis = KravchukBasis { grid, weight, phi, max_mode, log_d, log_alpha };
        let (residual, worst_n, worst_m) = basis.gram_residual();
        if residual > GRAM_HARD_LIMIT {
            return Err(Error::GramResidual {
                n: worst_n,
                m: worst_m,
                residual,
                limit: GRAM_HARD_LIMIT,
            });
        }
        Ok(basis)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn weight(&self) -> &BinomialWeight {
        &self.weight
    }

    /// Highest built mode index.
    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    /// Matrix of function values, row `n`, column `k`.
    pub fn phi(&self) -> &Array2<f64> {
        &self.phi
    }

    #[inline]
    pub fn phi_value(&self, n: usize, k: usize) -> f64 {
        self.phi[[n, k]]
    }

    /// `d_n = 2^{-n} sqrt(C(N, n))`.
    pub fn d(&self, n: usize) -> f64 {
        self.log_d[n].exp()
    }

    pub fn log_d(&self, n: usize) -> f64 {
        self.log_d[n]
    }

    /// `alpha_{n,h} = h^{-n} sqrt((N-n)! / (N! n!))`.
    pub fn alpha(&self, n: usize) -> f64 {
        self.log_alpha[n].exp()
    }

    pub fn log_alpha(&self, n: usize) -> f64 {
        self.log_alpha[n]
    }

    /// The scaled function `phi_{n,h}(a_k) = phi_n(k) / sqrt(h)` as a grid
    /// function; unit `l2(hZ)` norm.
    pub fn phi_h(&self, n: usize) -> Result<GridFunction> {
        if n > self.max_mode {
            return Err(Error::IndexOutOfRange { index: n, max: self.max_mode });
        }
        let scale = 1.0 / self.grid.h().sqrt();
        let values: Vec<f64> = self.phi.row(n).iter().map(|&v| v * scale).collect();
        GridFunction::from_real(self.grid, &values)
    }

    /// Worst deviation of the Gram matrix of the built rows from the
    /// identity, with the offending row pair.
    pub fn gram_residual(&self) -> (f64, usize, usize) {
        let gram = self.phi.dot(&self.phi.t());
        let mut worst = (0.0f64, 0usize, 0usize);
        for ((i, j), &g) in gram.indexed_iter() {
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (g - target).abs();
            if dev > worst.0 {
                worst = (dev, i, j);
            }
        }
        worst
    }
}
