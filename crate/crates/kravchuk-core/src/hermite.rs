//! Continuous reference objects: normalized Hermite functions, the analytic
//! oscillator `H = -d^2/dx^2 + x^2` applied to registered test functions, and
//! the quadrature used to expand initial data in the Hermite basis.
//!
//! Everything here evaluates through the normalized recurrence
//! `psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}`;
//! the raw polynomials with explicit factorials are exposed only as a
//! small-order oracle.

use crate::error::{Error, Result};

/// Normalized Hermite function `psi_n(x)`; unit `L2(R)` norm, eigenvalue
/// `2n + 1` of the continuous oscillator.
pub fn psi(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    for m in 0..n {
        let mf = m as f64;
        let next = (2.0 / (mf + 1.0)).sqrt() * x * cur - (mf / (mf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `psi_0(x) ..= psi_{n_max}(x)` in one sweep of the recurrence.
pub fn psi_all(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    out.push(cur);
    for m in 0..n_max {
        let mf = m as f64;
        let next = (2.0 / (mf + 1.0)).sqrt() * x * cur - (mf / (mf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Unnormalized Hermite polynomial `H_n(x)`, `H_{n+1} = 2x H_n - 2n H_{n-1}`.
/// Oracle only; the explicit normalization overflows quickly, hence `n <= 30`.
pub fn hermite_poly(n: usize, x: f64) -> f64 {
    assert!(n <= 30, "unnormalized polynomials are exposed only up to n = 30");
    let mut prev = 0.0;
    let mut cur = 1.0;
    for m in 0..n {
        let next = 2.0 * x * cur - 2.0 * m as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A continuous test input together with the analytically applied oscillator
/// `(H g)(x) = -g''(x) + x^2 g(x)` and, when available, its exact expansion
/// in the Hermite basis.
pub struct TestFunction {
    name: &'static str,
    class: &'static str,
    eval: RealFn,
    apply_h: RealFn,
    expansion: Option<Vec<f64>>,
}

impl TestFunction {
    pub fn new(
        name: &'static str,
        class: &'static str,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        apply_h: impl Fn(f64) -> f64 + Send + Sync + 'static,
        expansion: Option<Vec<f64>>,
    ) -> Self {
        TestFunction { name, class, eval: Box::new(eval), apply_h: Box::new(apply_h), expansion }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Declared smoothness label.
    pub fn class(&self) -> &'static str {
        self.class
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Analytic `(H g)(x)`.
    pub fn apply_h(&self, x: f64) -> f64 {
        (self.apply_h)(x)
    }

    /// Exact Hermite coefficients when the expansion is closed-form.
    pub fn expansion(&self) -> Option<&[f64]> {
        self.expansion.as_deref()
    }

    /// Largest deviation between the analytic `H g` and a central
    /// finite-difference evaluation, sampled on 20 points in [-3, 3].
    pub fn self_check_residual(&self) -> f64 {
        let delta = 1e-4;
        let mut worst = 0.0f64;
        for i in 0..20 {
            let x = -3.0 + 6.0 * i as f64 / 19.0;
            let second = (self.eval(x + delta) - 2.0 * self.eval(x) + self.eval(x - delta))
                / (delta * delta);
            let fd = -second + x * x * self.eval(x);
            worst = worst.max((fd - self.apply_h(x)).abs());
        }
        worst
    }
}

/// The built-in test inputs: a Gaussian (an eigenfunction after
/// normalization), a shifted Gaussian, an odd Schwartz bump, and the first
/// six Hermite functions.
pub fn registry() -> Vec<TestFunction> {
    let quarter_pi = std::f64::consts::PI.powf(0.25);
    let mut fns = vec![
        TestFunction {
            name: "gaussian",
            class: "schwartz",
            eval: Box::new(|x| (-x * x / 2.0).exp()),
            // g'' = (x^2 - 1) g, so H g = g.
            apply_h: Box::new(|x| (-x * x / 2.0).exp()),
            expansion: Some(vec![quarter_pi]),
        },
        TestFunction {
            name: "shifted_gaussian",
            class: "schwartz",
            eval: Box::new(|x| (-(x - 1.0) * (x - 1.0) / 2.0).exp()),
            // g'' = ((x-1)^2 - 1) g, so H g = (x^2 - (x-1)^2 + 1) g = 2x g.
            apply_h: Box::new(|x| 2.0 * x * (-(x - 1.0) * (x - 1.0) / 2.0).exp()),
            expansion: None,
        },
        TestFunction {
            name: "bump",
            class: "schwartz",
            eval: Box::new(|x| x * (-x * x).exp()),
            // g'' = (4x^3 - 6x) e^{-x^2}, so H g = (6x - 3x^3) e^{-x^2}.
            apply_h: Box::new(|x| (6.0 * x - 3.0 * x * x * x) * (-x * x).exp()),
            expansion: None,
        },
    ];
    for n in 0..=5usize {
        let mut expansion = vec![0.0; n + 1];
        expansion[n] = 1.0;
        fns.push(TestFunction {
            name: match n {
                0 => "psi0",
                1 => "psi1",
                2 => "psi2",
                3 => "psi3",
                4 => "psi4",
                _ => "psi5",
            },
            class: "schwartz",
            eval: Box::new(move |x| psi(n, x)),
            apply_h: Box::new(move |x| (2.0 * n as f64 + 1.0) * psi(n, x)),
            expansion: Some(expansion),
        });
    }
    fns
}

/// Look up a registry entry by name.
pub fn lookup(name: &str) -> Result<TestFunction> {
    registry()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownTestFunction(name.to_string()))
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..m {
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j as f64 + 1.0) * z * p2 - j as f64 * p3) / (j as f64 + 1.0);
            }
            pp = m as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[m - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// Quadrature domain for Hermite expansions; `psi_120` is below 1e-16 outside.
pub const EXPANSION_DOMAIN: f64 = 12.0;
/// Panels times nodes-per-panel gives the 2000-point composite rule.
const PANELS: usize = 250;
const NODES_PER_PANEL: usize = 8;

/// Hermite coefficients `c_n = integral f psi_n` for `n = 0..=n_max` by a
/// composite Gauss-Legendre rule on `[-12, 12]` (250 panels, 8 nodes each).
pub fn hermite_coefficients<F: Fn(f64) -> f64>(f: F, n_max: usize) -> Vec<f64> {
    let (nodes, weights) = gauss_legendre(NODES_PER_PANEL);
    let width = 2.0 * EXPANSION_DOMAIN / PANELS as f64;
    let mut coeffs = vec![0.0; n_max + 1];
    for p in 0..PANELS {
        let left = -EXPANSION_DOMAIN + p as f64 * width;
        for (z, w) in nodes.iter().zip(&weights) {
            let x = left + 0.5 * width * (z + 1.0);
            let scale = 0.5 * width * w * f(x);
            for (c, p_val) in coeffs.iter_mut().zip(psi_all(n_max, x)) {
                *c += scale * p_val;
            }
        }
    }
    coeffs
}
