//! Dense complex matrix kernels and a symmetric tridiagonal eigenvalue solver.
//!
//! The matrix exponential follows the scaling-and-squaring method with a
//! diagonal Pade approximant of order 13 (Higham 2005, SIAM J. Matrix Anal.
//! Appl. 26(4)); the tridiagonal solver is the implicit QL iteration with
//! Wilkinson shift, ported from the classic EISPACK/Handbook routine. Both
//! work entirely in memory proportional to the input: QL never forms a dense
//! matrix, and `expm` needs a handful of dense temporaries.

use ndarray::{s, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues of a real symmetric tridiagonal matrix, sorted ascending.
///
/// `diag` has length `n`, `off` length `n - 1` (`off[i]` couples rows `i` and
/// `i + 1`). Implicit QL with Wilkinson shift, eigenvalues only.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n, "off-diagonal must have length n - 1");
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Look for a negligible subdiagonal element to split the problem.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "QL iteration failed to converge");

            // Wilkinson shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut restart = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Recover from underflow by deflating and restarting.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    restart = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if restart {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d
}

/// Max column sum of moduli (the induced 1-norm).
pub fn one_norm(m: &Array2<Complex64>) -> f64 {
    let mut best = 0.0f64;
    for col in m.columns() {
        let sum: f64 = col.iter().map(|z| z.norm()).sum();
        best = best.max(sum);
    }
    best
}

/// Largest entry modulus.
pub fn max_abs(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Complex matrix product through four real GEMMs, which keeps the hot path
/// on the optimized f64 kernel regardless of how the complex fallback is
/// compiled.
pub fn matmul(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let a_re = a.mapv(|z| z.re);
    let a_im = a.mapv(|z| z.im);
    let b_re = b.mapv(|z| z.re);
    let b_im = b.mapv(|z| z.im);
    let re = a_re.dot(&b_re) - a_im.dot(&b_im);
    let im = a_re.dot(&b_im) + a_im.dot(&b_re);
    let mut out = Array2::zeros((a.nrows(), b.ncols()));
    for ((i, j), v) in out.indexed_iter_mut() {
        *v = Complex64::new(re[[i, j]], im[[i, j]]);
    }
    out
}

/// Solve `A X = B` by LU with partial pivoting.
pub fn solve(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "solve requires a square matrix");
    assert_eq!(n, b.nrows());
    let m = b.ncols();

    let mut aug = Array2::<Complex64>::zeros((n, n + m));
    aug.slice_mut(s![.., ..n]).assign(a);
    aug.slice_mut(s![.., n..]).assign(b);

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = aug[[col, col]].norm();
        for row in col + 1..n {
            let mag = aug[[row, col]].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag == 0.0 || !pivot_mag.is_finite() {
            return Err(Error::NonFiniteMatrix);
        }
        if pivot_row != col {
            for j in 0..n + m {
                aug.swap([col, j], [pivot_row, j]);
            }
        }
        let pivot = aug[[col, col]];
        for row in col + 1..n {
            let factor = aug[[row, col]] / pivot;
            if factor == Complex64::ZERO {
                continue;
            }
            for j in col..n + m {
                let v = aug[[col, j]];
                aug[[row, j]] -= factor * v;
            }
        }
    }

    let mut x = Array2::<Complex64>::zeros((n, m));
    for col in (0..n).rev() {
        let pivot = aug[[col, col]];
        for j in 0..m {
            let mut acc = aug[[col, n + j]];
            for k in col + 1..n {
                acc -= aug[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = acc / pivot;
        }
    }
    Ok(x)
}

/// Scaling threshold for the order-13 Pade approximant.
pub const THETA_13: f64 = 5.371920351148152;

// Numerator coefficients b_0..b_13 of the [13/13] Pade approximant to exp.
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential `exp(A)` by scaling-and-squaring with Pade(13).
pub fn expm(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    expm_with_norm(a, one_norm(a))
}

/// Same as [`expm`] with the 1-norm supplied by the caller (useful when the
/// norm is cheaper to compute from a structured representation).
pub fn expm_with_norm(a: &Array2<Complex64>, norm: f64) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if !norm.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }

    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.mapv(|z| z * 0.5f64.powi(squarings as i32));

    let mut x = pade_13(&scaled)?;
    for _ in 0..squarings {
        x = matmul(&x, &x);
    }
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFiniteMatrix);
    }
    Ok(x)
}

fn pade_13(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    let eye = Array2::<Complex64>::eye(n);
    let c = |i: usize| Complex64::new(PADE_13[i], 0.0);

    let a2 = matmul(a, a);
    let a4 = matmul(&a2, &a2);
    let a6 = matmul(&a2, &a4);

    // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let w1 = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let w2 = matmul(&a6, &w1) + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &eye * c(1);
    let u = matmul(a, &w2);

    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let v1 = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = matmul(&a6, &v1) + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &eye * c(0);

    // exp(A) ~ (V - U)^{-1} (V + U)
    solve(&(&v - &u), &(&v + &u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_matrix_close(a: &Array2<Complex64>, b: &Array2<Complex64>, tol: f64) {
        assert_eq!(a.shape(), b.shape());
        for ((i, j), v) in a.indexed_iter() {
            let diff = (v - b[[i, j]]).norm();
            assert!(diff <= tol, "({i}, {j}): {v} vs {} (diff {diff:.3e})", b[[i, j]]);
        }
    }

    #[test]
    fn ql_matches_closed_form_2x2() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
        let ev = tridiagonal_eigenvalues(&[2.0, 2.0], &[1.0]);
        assert!((ev[0] - 1.0).abs() < 1e-14);
        assert!((ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn ql_on_discrete_laplacian() {
        // Eigenvalues of tridiag(-1, 2, -1) of size n are 2 - 2 cos(pi k / (n+1)).
        let n = 40;
        let ev = tridiagonal_eigenvalues(&vec![2.0; n], &vec![-1.0; n - 1]);
        for (k, &lambda) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((lambda - exact).abs() < 1e-12, "k={k}: {lambda} vs {exact}");
        }
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let z = Array2::<Complex64>::zeros((5, 5));
        let e = expm(&z).unwrap();
        assert_matrix_close(&e, &Array2::eye(5), 1e-14);
    }

    #[test]
    fn expm_of_diagonal() {
        let mut m = Array2::<Complex64>::zeros((3, 3));
        m[[0, 0]] = Complex64::new(1.0, 0.0);
        m[[1, 1]] = Complex64::new(-2.0, 0.5);
        m[[2, 2]] = Complex64::new(0.0, 3.0);
        let e = expm(&m).unwrap();
        for i in 0..3 {
            let diff = (e[[i, i]] - m[[i, i]].exp()).norm();
            assert!(diff < 1e-13, "diagonal {i}: diff {diff:.3e}");
        }
        assert!(e[[0, 1]].norm() < 1e-15);
    }

    #[test]
    fn expm_rotation_block() {
        // exp([[0, -t], [t, 0]]) is the rotation by angle t.
        let t = 0.7;
        let mut m = Array2::<Complex64>::zeros((2, 2));
        m[[0, 1]] = Complex64::new(-t, 0.0);
        m[[1, 0]] = Complex64::new(t, 0.0);
        let e = expm(&m).unwrap();
        let mut expected = Array2::<Complex64>::zeros((2, 2));
        expected[[0, 0]] = Complex64::new(t.cos(), 0.0);
        expected[[0, 1]] = Complex64::new(-t.sin(), 0.0);
        expected[[1, 0]] = Complex64::new(t.sin(), 0.0);
        expected[[1, 1]] = Complex64::new(t.cos(), 0.0);
        assert_matrix_close(&e, &expected, 1e-14);
    }

    #[test]
    fn expm_large_norm_triggers_squaring() {
        // Hermitian argument times i gives a unitary exponential even when
        // the norm forces several squarings.
        let n = 24;
        let mut m = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            m[[i, i]] = Complex64::new(0.0, 30.0 + i as f64);
            if i + 1 < n {
                m[[i, i + 1]] = Complex64::new(0.0, 10.0);
                m[[i + 1, i]] = Complex64::new(0.0, 10.0);
            }
        }
        let e = expm(&m).unwrap();
        let gram = matmul(&e.t().mapv(|z| z.conj()), &e);
        assert_matrix_close(&gram, &Array2::eye(n), 1e-12);
    }

    #[test]
    fn solve_recovers_known_solution() {
        let n = 6;
        let mut a = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                a[[i, j]] = Complex64::new(
                    1.0 / (1.0 + (i + 2 * j) as f64),
                    (i as f64 - j as f64) * 0.1,
                );
            }
            a[[i, i]] += Complex64::new(3.0, 0.0);
        }
        let x_true = Array2::from_shape_fn((n, 2), |(i, j)| {
            Complex64::new(i as f64 + 1.0, j as f64 - 0.5)
        });
        let b = matmul(&a, &x_true);
        let x = solve(&a, &b).unwrap();
        assert_matrix_close(&x, &x_true, 1e-11);
    }

    #[test]
    fn solve_rejects_singular() {
        let a = Array2::<Complex64>::zeros((3, 3));
        let b = Array2::<Complex64>::eye(3);
        assert!(solve(&a, &b).is_err());
    }
}
