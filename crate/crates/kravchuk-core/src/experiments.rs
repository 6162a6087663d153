//! Parameter sweeps with log-log slope fits, the identity suite, the
//! acceptance criteria, and machine-readable CSV output.
//!
//! Everything here is deterministic: sweeps contain no randomness, and the
//! randomized identity checks draw from a fixed-seed generator recorded in
//! the CSV metadata. Two runs with the same configuration produce
//! bit-identical files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basis::{self, BinomialWeight, KravchukBasis};
use crate::error::{Error, Result};
use crate::evolution::{self, SpectralState};
use crate::grid::{Grid, GridFunction};
use crate::hermite::{self, TestFunction};
use crate::linalg;
use crate::operators::{self, DiscreteHamiltonian, LadderPair};
use crate::transform;

/// Seed for every randomized identity check, recorded in output metadata.
pub const SEED: u64 = 0x5EED;

/// Least-squares line through `(log x, log y)`.
#[derive(Debug, Clone, Copy)]
pub struct FitLine {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_loglog(x: &[f64], y: &[f64]) -> FitLine {
    assert_eq!(x.len(), y.len());
    if x.len() < 2 {
        return FitLine { slope: f64::NAN, intercept: f64::NAN, r_squared: f64::NAN };
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mean_x = lx.iter().sum::<f64>() / n;
    let mean_y = ly.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (a, b) in lx.iter().zip(&ly) {
        sxx += (a - mean_x) * (a - mean_x);
        sxy += (a - mean_x) * (b - mean_y);
        syy += (b - mean_y) * (b - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    FitLine { slope, intercept, r_squared }
}

/// Error of one grid comparison in the three norms.
#[derive(Debug, Clone, Copy)]
pub struct ErrorTriple {
    pub l2: f64,
    pub linf: f64,
    pub h1: f64,
}

fn error_norms(diff: &GridFunction, sigma: u32) -> ErrorTriple {
    let weighted;
    let measured = if sigma == 0 {
        diff
    } else {
        weighted = diff.weighted(|a| (1.0 + a * a).powf(sigma as f64 / 2.0));
        &weighted
    };
    ErrorTriple { l2: measured.norm_l2(), linf: measured.norm_linf(), h1: measured.norm_h1() }
}

/// One sweep over grid sizes with per-norm errors and fitted slopes vs `N`.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub n_values: Vec<usize>,
    pub h_values: Vec<f64>,
    pub errors: Vec<ErrorTriple>,
    pub fit_l2: FitLine,
    pub fit_linf: FitLine,
    pub fit_h1: FitLine,
}

impl SweepResult {
    fn assemble(n_values: Vec<usize>, errors: Vec<ErrorTriple>) -> Self {
        let x: Vec<f64> = n_values.iter().map(|&n| n as f64).collect();
        let h_values = n_values.iter().map(|&n| (2.0 / n as f64).sqrt()).collect();
        let l2: Vec<f64> = errors.iter().map(|e| e.l2).collect();
        let linf: Vec<f64> = errors.iter().map(|e| e.linf).collect();
        let h1: Vec<f64> = errors.iter().map(|e| e.h1).collect();
        SweepResult {
            fit_l2: fit_loglog(&x, &l2),
            fit_linf: fit_loglog(&x, &linf),
            fit_h1: fit_loglog(&x, &h1),
            n_values,
            h_values,
            errors,
        }
    }
}

fn validate_n_list(n_list: &[usize], min: usize) -> Result<()> {
    if n_list.is_empty() {
        return Err(Error::Config("empty N list".into()));
    }
    for pair in n_list.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::Config("N list must be strictly increasing".into()));
        }
    }
    for &n in n_list {
        if n % 2 != 0 || n < min {
            return Err(Error::Config(format!("N = {n} must be even and >= {min}")));
        }
    }
    Ok(())
}

/// Errors of the scaled binomial weight against the Gaussian
/// `e^{-a^2}/sqrt(pi)`, per grid size.
pub fn sweep_rho_convergence(n_list: &[usize], sigma: u32) -> Result<SweepResult> {
    validate_n_list(n_list, 10)?;
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
    let errors: Result<Vec<ErrorTriple>> = n_list
        .par_iter()
        .map(|&n| {
            let grid = Grid::new(n)?;
            let rho = BinomialWeight::new(grid).rho();
            let target = GridFunction::project_real(grid, |a| inv_sqrt_pi * (-a * a).exp())?;
            Ok(error_norms(&rho.sub(&target)?, sigma))
        })
        .collect();
    Ok(SweepResult::assemble(n_list.to_vec(), errors?))
}

/// Sweep of the basis rows against the projected Hermite functions, one
/// [`SweepResult`] per requested mode.
#[derive(Debug, Clone)]
pub struct PhiSweep {
    pub modes: Vec<usize>,
    pub per_mode: Vec<SweepResult>,
}

pub fn sweep_phi_convergence(n_list: &[usize], modes: &[usize], sigma: u32) -> Result<PhiSweep> {
    validate_n_list(n_list, 10)?;
    if modes.is_empty() {
        return Err(Error::Config("empty mode list".into()));
    }
    let top_mode = *modes.iter().max().expect("nonempty");
    if top_mode >= n_list[0] {
        return Err(Error::Config(format!(
            "mode {top_mode} exceeds the smallest grid size {}",
            n_list[0]
        )));
    }
    let per_n: Result<Vec<Vec<ErrorTriple>>> = n_list
        .par_iter()
        .map(|&n| {
            let grid = Grid::new(n)?;
            let b = KravchukBasis::truncated(grid, top_mode)?;
            modes
                .iter()
                .map(|&mode| {
                    let projected =
                        GridFunction::project_real(grid, |x| hermite::psi(mode, x))?;
                    let diff = b.phi_h(mode)?.sub(&projected)?;
                    Ok(error_norms(&diff, sigma))
                })
                .collect()
        })
        .collect();
    let per_n = per_n?;
    let per_mode = modes
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let errors: Vec<ErrorTriple> = per_n.iter().map(|row| row[i]).collect();
            SweepResult::assemble(n_list.to_vec(), errors)
        })
        .collect();
    Ok(PhiSweep { modes: modes.to_vec(), per_mode })
}

/// Node-by-node values of the first modes next to the Hermite functions, for
/// the visual comparison output.
#[derive(Debug, Clone)]
pub struct VisualTable {
    pub nodes: Vec<f64>,
    pub modes: Vec<usize>,
    /// `phi_rows[i][k]` is `phi_{modes[i], h}(a_k)`.
    pub phi_rows: Vec<Vec<f64>>,
    /// `psi_rows[i][k]` is `psi_{modes[i]}(a_k)`.
    pub psi_rows: Vec<Vec<f64>>,
}

pub fn phi_visual_table(n: usize, modes: &[usize]) -> Result<VisualTable> {
    let grid = Grid::new(n)?;
    let top = *modes.iter().max().ok_or_else(|| Error::Config("empty mode list".into()))?;
    let b = KravchukBasis::truncated(grid, top)?;
    let mut phi_rows = Vec::with_capacity(modes.len());
    let mut psi_rows = Vec::with_capacity(modes.len());
    for &mode in modes {
        phi_rows.push(b.phi_h(mode)?.values().iter().map(|v| v.re).collect());
        psi_rows.push((0..grid.len()).map(|k| hermite::psi(mode, grid.node(k))).collect());
    }
    Ok(VisualTable { nodes: grid.nodes(), modes: modes.to_vec(), phi_rows, psi_rows })
}

/// Consistency error `|pi_h (H g) - H_h (pi_h g)|` of the discrete operator
/// against the analytic one, per grid size.
pub fn sweep_operator_consistency(f: &TestFunction, n_list: &[usize]) -> Result<SweepResult> {
    validate_n_list(n_list, 4)?;
    let errors: Result<Vec<ErrorTriple>> = n_list
        .iter()
        .map(|&n| {
            let grid = Grid::new(n)?;
            let ham = DiscreteHamiltonian::new(grid);
            let projected = GridFunction::project_real(grid, |x| f.eval(x))?;
            let analytic = GridFunction::project_real(grid, |x| f.apply_h(x))?;
            let diff = analytic.sub(&ham.apply(&projected)?)?;
            Ok(error_norms(&diff, 0))
        })
        .collect();
    Ok(SweepResult::assemble(n_list.to_vec(), errors?))
}

/// Residual between the spectral propagator and the dense matrix exponential
/// `exp(-i t H_h)` applied to the same synthesized state.
pub fn propagation_expm_residual(n: usize, t: f64) -> Result<f64> {
    let grid = Grid::new(n)?;
    let basis = KravchukBasis::new(grid)?;
    let ham = DiscreteHamiltonian::new(grid);
    let f = hermite::lookup("shifted_gaussian")?;
    let projected = GridFunction::project_real(grid, |x| f.eval(x))?;
    let state = transform::analyze(&basis, &projected)?;
    let u0 = transform::synthesize(&basis, &state)?;

    let spectral = transform::synthesize(&basis, &state.propagate(t))?;

    let propagator = linalg::expm(&ham.to_dense(Complex64::new(0.0, -t)))?;
    let mut dense_values = vec![Complex64::ZERO; grid.len()];
    for (j, value) in dense_values.iter_mut().enumerate() {
        for k in 0..grid.len() {
            *value += propagator[[j, k]] * u0.value(k);
        }
    }
    let dense = GridFunction::new(grid, dense_values)?;
    Ok(spectral.sub(&dense)?.norm_l2())
}

/// Per-size residuals of the transform construction.
#[derive(Debug, Clone, Copy)]
pub struct TransformRow {
    pub n: usize,
    pub unitarity_direct: f64,
    pub unitarity_factored: f64,
    pub max_diff: f64,
}

pub fn transform_residual_rows(n_list: &[usize]) -> Result<Vec<TransformRow>> {
    validate_n_list(n_list, 2)?;
    n_list
        .iter()
        .map(|&n| {
            let grid = Grid::new(n)?;
            let b = KravchukBasis::new(grid)?;
            let direct = transform::build_l_direct(&b)?;
            let factored = transform::build_l_factored(grid)?;
            let mut max_diff = 0.0f64;
            for ((i, j), v) in factored.indexed_iter() {
                max_diff = max_diff.max((v - Complex64::new(direct[[i, j]], 0.0)).norm());
            }
            Ok(TransformRow {
                n,
                unitarity_direct: b.gram_residual().0,
                unitarity_factored: transform::unitarity_residual(&factored),
                max_diff,
            })
        })
        .collect()
}

/// Per-time row of the evolution experiment.
#[derive(Debug, Clone, Copy)]
pub struct EvolutionRow {
    pub t: f64,
    pub error_l2: f64,
    pub mass: f64,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct EvolveReport {
    pub rows: Vec<EvolutionRow>,
    pub n_max: usize,
    pub n_ref: usize,
}

/// The evolution experiment: error against the continuous flow plus the
/// conserved quantities of the discrete state at each requested time.
pub fn evolve_experiment(
    f: &TestFunction,
    n: usize,
    n_max: Option<usize>,
    times: &[f64],
) -> Result<EvolveReport> {
    if times.is_empty() {
        return Err(Error::Config("empty time list".into()));
    }
    let grid = Grid::new(n)?;
    let n_max = n_max.unwrap_or_else(|| evolution::default_n_max(grid));
    let table = evolution::evolve_and_compare(f, grid, n_max, times)?;

    let coeffs = evolution::continuous_coefficients(f)?;
    let m = table.n_max;
    let basis = KravchukBasis::truncated(grid, m)?;
    let ham = DiscreteHamiltonian::new(grid);
    let state = SpectralState::from_real_coefficients(grid, &coeffs[..=m])?;
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let report = evolution::energy_report(&ham, &basis, &state, row.t)?;
            Ok(EvolutionRow {
                t: row.t,
                error_l2: row.error_l2,
                mass: report.mass,
                energy: report.energy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvolveReport { rows, n_max: table.n_max, n_ref: table.n_ref })
}

/// One named residual or measurement with its constraint.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub constraint: String,
    pub passed: bool,
}

impl CheckResult {
    fn upper(name: impl Into<String>, value: f64, limit: f64) -> Self {
        CheckResult {
            name: name.into(),
            value,
            constraint: format!("<= {limit:.1e}"),
            passed: value <= limit,
        }
    }

    fn band(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        CheckResult {
            name: name.into(),
            value,
            constraint: format!("in [{lo}, {hi}]"),
            passed: (lo..=hi).contains(&value),
        }
    }

    fn lower(name: impl Into<String>, value: f64, floor: f64) -> Self {
        CheckResult {
            name: name.into(),
            value,
            constraint: format!(">= {floor}"),
            passed: value >= floor,
        }
    }
}

/// Outcome of one acceptance criterion: a summary over its checks.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub checks: Vec<CheckResult>,
}

impl CriterionResult {
    fn from_checks(id: usize, name: &str, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        let detail = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} = {:.3e} (want {})", c.name, c.value, c.constraint))
            .collect::<Vec<_>>()
            .join("; ");
        let detail = if passed {
            format!("{} checks passed", checks.len())
        } else {
            format!("FAILED: {detail}")
        };
        CriterionResult { id, name: name.to_string(), passed, detail, checks }
    }
}

const SPECTRUM_SIZES: [usize; 4] = [4, 50, 256, 512];

fn criterion_spectrum(ts: f64) -> Result<CriterionResult> {
    let per_n: Result<Vec<(usize, f64, f64)>> = SPECTRUM_SIZES
        .par_iter()
        .map(|&n| {
            let grid = Grid::new(n)?;
            let b = KravchukBasis::new(grid)?;
            let ham = DiscreteHamiltonian::new(grid);
            let mut worst_vec = 0.0f64;
            for mode in 0..=n {
                let phi = b.phi_h(mode)?;
                let hphi = ham.apply(&phi)?;
                let residual =
                    hphi.sub(&phi.scale((2.0 * mode as f64 + 1.0).into()))?.norm_l2();
                worst_vec = worst_vec.max(residual);
            }
            let mut worst_eig = 0.0f64;
            for (i, lambda) in ham.spectrum().iter().enumerate() {
                worst_eig = worst_eig.max((lambda - (2.0 * i as f64 + 1.0)).abs());
            }
            Ok((n, worst_vec, worst_eig))
        })
        .collect();
    let mut checks = Vec::new();
    for (n, worst_vec, worst_eig) in per_n? {
        checks.push(CheckResult::upper(
            format!("eigenvector residual N={n}"),
            worst_vec,
            1e-10 * ts,
        ));
        checks.push(CheckResult::upper(
            format!("spectrum deviation N={n}"),
            worst_eig,
            1e-8 * ts,
        ));
    }
    Ok(CriterionResult::from_checks(1, "exact spectrum", checks))
}

fn criterion_orthonormality(ts: f64) -> Result<CriterionResult> {
    let per_n: Result<Vec<CheckResult>> = SPECTRUM_SIZES
        .par_iter()
        .map(|&n| {
            let b = KravchukBasis::new(Grid::new(n)?)?;
            Ok(CheckResult::upper(
                format!("Gram residual N={n}"),
                b.gram_residual().0,
                1e-10 * ts,
            ))
        })
        .collect();
    Ok(CriterionResult::from_checks(2, "orthonormality", per_n?))
}

fn random_unit_pair(rng: &mut ChaCha8Rng, grid: Grid) -> (GridFunction, GridFunction) {
    let mut draw = |_: usize| {
        let values: Vec<Complex64> = (0..grid.len())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let f = GridFunction::new(grid, values).expect("length matches");
        let norm = f.norm_l2();
        f.scale(Complex64::new(1.0 / norm, 0.0))
    };
    (draw(0), draw(1))
}

fn criterion_ladders(ts: f64) -> Result<CriterionResult> {
    let mut checks = Vec::new();
    let n = 50usize;
    let grid = Grid::new(n)?;
    let b = KravchukBasis::new(grid)?;
    let h = grid.h();

    // Coefficient relations for every mode.
    let mut worst_lower = 0.0f64;
    let mut worst_raise = 0.0f64;
    for mode in 0..=n {
        let pair = LadderPair::new(grid, mode);
        let phi = b.phi_h(mode)?;
        let lowered = pair.apply_lowering(&phi)?;
        let res = if mode == 0 {
            lowered.norm_l2()
        } else {
            let coeff = (mode as f64 * (2.0 - mode as f64 * h * h + h * h)).sqrt();
            lowered.sub(&b.phi_h(mode - 1)?.scale(coeff.into()))?.norm_l2()
        };
        worst_lower = worst_lower.max(res);
        let raised = pair.apply_raising(&phi)?;
        let res = if mode == n {
            raised.norm_l2()
        } else {
            let coeff = ((2.0 - mode as f64 * h * h) * (mode as f64 + 1.0)).sqrt();
            raised.sub(&b.phi_h(mode + 1)?.scale(coeff.into()))?.norm_l2()
        };
        worst_raise = worst_raise.max(res);
    }
    checks.push(CheckResult::upper("lowering relation N=50", worst_lower, 1e-11 * ts));
    checks.push(CheckResult::upper("raising relation N=50", worst_raise, 1e-11 * ts));

    // Adjointness on 100 fixed-seed random pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_adj = 0.0f64;
    for i in 0..100usize {
        let mode = i % (n + 1);
        let pair = LadderPair::new(grid, mode);
        let (u, v) = random_unit_pair(&mut rng, grid);
        let lhs = pair.apply_raising(&u)?.inner(&v)?;
        let rhs = u.inner(&pair.apply_lowering(&v)?)?;
        let rel = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0);
        worst_adj = worst_adj.max(rel);
    }
    checks.push(CheckResult::upper("ladder adjointness (100 pairs)", worst_adj, 1e-12 * ts));

    // Mixed factorization on eigenvectors and on random data.
    let mut worst_mixed = 0.0f64;
    for mode in [1usize, 2, 3] {
        worst_mixed = worst_mixed.max(operators::factorization_residual(mode, &b.phi_h(mode)?)?);
    }
    let grid16 = Grid::new(16)?;
    for mode in [1usize, 2, 7] {
        let (u, _) = random_unit_pair(&mut rng, grid16);
        worst_mixed = worst_mixed.max(operators::factorization_residual(mode, &u)?);
    }
    checks.push(CheckResult::upper("mixed factorization", worst_mixed, 1e-10 * ts));

    // Index-space factorizations on random data at N = 64.
    let mut worst_unscaled = 0.0f64;
    for mode in [1usize, 2, 5, 20] {
        let f: Vec<f64> = (0..=64).map(|_| rng.random::<f64>() - 0.5).collect();
        let scale = f.iter().map(|v| v * v).sum::<f64>().sqrt();
        let f: Vec<f64> = f.iter().map(|v| v / scale).collect();
        let (rl, lr) = operators::unscaled_factorization_residuals(mode, &f);
        worst_unscaled = worst_unscaled.max(rl).max(lr);
    }
    checks.push(CheckResult::upper("index-space factorizations", worst_unscaled, 1e-10 * ts));

    Ok(CriterionResult::from_checks(3, "ladder identities", checks))
}

fn criterion_transform(ts: f64) -> Result<CriterionResult> {
    let mut checks = Vec::new();
    for row in transform_residual_rows(&[2, 16, 64, 128])? {
        checks.push(CheckResult::upper(
            format!("factorization difference N={}", row.n),
            row.max_diff,
            1e-9 * ts,
        ));
        checks.push(CheckResult::upper(
            format!("factored unitarity N={}", row.n),
            row.unitarity_factored,
            1e-10 * ts,
        ));
    }

    // Unitarity at the largest size, on both routes.
    let grid = Grid::new(512)?;
    let b = KravchukBasis::new(grid)?;
    checks.push(CheckResult::upper(
        "direct orthogonality N=512",
        b.gram_residual().0,
        1e-10 * ts,
    ));
    let a = transform::TridiagonalHermitian::oscillator(grid);
    let u = transform::expm_tridiagonal(&a, Complex64::new(0.0, -std::f64::consts::FRAC_PI_4))?;
    checks.push(CheckResult::upper(
        "exponential unitarity N=512",
        transform::unitarity_residual(&u),
        1e-10 * ts,
    ));

    // Self-reproducing identity at N = 64.
    let b64 = KravchukBasis::new(Grid::new(64)?)?;
    checks.push(CheckResult::upper(
        "self-reproducing identity N=64",
        self_reproducing_residual(&b64),
        1e-10 * ts,
    ));
    Ok(CriterionResult::from_checks(4, "transform factorization", checks))
}

/// Worst residual of the self-reproducing identity
/// `sum_k phi_k(n) phi_m(k) e^{i(k-m)pi/2} = phi_m(n) e^{i n pi/2} e^{-i pi N/4}`.
///
/// (The `e^{i n pi/2}` phase is the one the K-matrix derivation produces and
/// the one that checks out numerically; an `e^{i n pi/4}` variant fails
/// already at N = 2.)
pub fn self_reproducing_residual(b: &KravchukBasis) -> f64 {
    let n_size = b.grid().n();
    let quarter = |k: usize| -> Complex64 {
        match k % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    };
    let eighth = |m: usize| -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * (m % 8) as f64)
    };
    let mut worst = 0.0f64;
    for n in 0..=n_size {
        for m in 0..=n_size {
            let mut lhs = Complex64::ZERO;
            for k in 0..=n_size {
                lhs += quarter(k)
                    * quarter(m).conj()
                    * (b.phi_value(k, n) * b.phi_value(m, k));
            }
            let rhs = quarter(n) * eighth(n_size).conj() * b.phi_value(m, n);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

const RHO_SIZES: [usize; 5] = [50, 100, 200, 400, 800];

fn criterion_rho_rate(_ts: f64) -> Result<CriterionResult> {
    let sweep = sweep_rho_convergence(&RHO_SIZES, 0)?;
    let mut checks = vec![
        CheckResult::band("rho l2 slope", sweep.fit_l2.slope, -1.15, -0.85),
        CheckResult::band("rho linf slope", sweep.fit_linf.slope, -1.15, -0.85),
        CheckResult::lower("rho l2 fit R^2", sweep.fit_l2.r_squared, 0.98),
        CheckResult::lower("rho linf fit R^2", sweep.fit_linf.r_squared, 0.98),
    ];
    // The h1 slope is reported, not gated.
    checks.push(CheckResult {
        name: "rho h1 slope (reported)".into(),
        value: sweep.fit_h1.slope,
        constraint: "reported".into(),
        passed: true,
    });
    // Errors strictly decreasing across the sweep.
    let monotone = sweep.errors.windows(2).all(|w| w[1].l2 < w[0].l2);
    checks.push(CheckResult {
        name: "rho errors decreasing".into(),
        value: if monotone { 1.0 } else { 0.0 },
        constraint: "= 1".into(),
        passed: monotone,
    });
    Ok(CriterionResult::from_checks(5, "binomial-to-Gaussian rate", checks))
}

const PHI_SIZES: [usize; 4] = [100, 200, 400, 800];

fn criterion_phi_rate(_ts: f64) -> Result<CriterionResult> {
    let sweep = sweep_phi_convergence(&PHI_SIZES, &[10], 0)?;
    let fit = sweep.per_mode[0].fit_l2;
    let checks = vec![
        CheckResult::band("phi mode-10 l2 slope", fit.slope, -1.2, -0.8),
        CheckResult::lower("phi mode-10 fit R^2", fit.r_squared, 0.98),
    ];
    Ok(CriterionResult::from_checks(6, "Kravchuk-to-Hermite rate", checks))
}

const CONSISTENCY_SIZES: [usize; 4] = [64, 128, 256, 512];

fn criterion_consistency_rate(_ts: f64) -> Result<CriterionResult> {
    let f = hermite::lookup("gaussian")?;
    let sweep = sweep_operator_consistency(&f, &CONSISTENCY_SIZES)?;
    let checks = vec![
        CheckResult::band("consistency l2 slope", sweep.fit_l2.slope, -1.15, -0.85),
        CheckResult::lower("consistency fit R^2", sweep.fit_l2.r_squared, 0.98),
    ];
    Ok(CriterionResult::from_checks(7, "operator consistency rate", checks))
}

fn criterion_evolution(ts: f64) -> Result<CriterionResult> {
    let mut checks = Vec::new();

    // Conservation along the flow for a generic state.
    let grid = Grid::new(64)?;
    let f = hermite::lookup("shifted_gaussian")?;
    let coeffs = evolution::continuous_coefficients(&f)?;
    let m = 16usize;
    let basis = KravchukBasis::truncated(grid, m)?;
    let ham = DiscreteHamiltonian::new(grid);
    let state = SpectralState::from_real_coefficients(grid, &coeffs[..=m])?;
    let initial = evolution::energy_report(&ham, &basis, &state, 0.0)?;
    let mut mass_drift = 0.0f64;
    let mut energy_drift = 0.0f64;
    for &t in &[0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
        let report = evolution::energy_report(&ham, &basis, &state, t)?;
        mass_drift = mass_drift.max((report.mass - initial.mass).abs() / initial.mass);
        energy_drift = energy_drift.max((report.energy - initial.energy).abs() / initial.energy);
    }
    checks.push(CheckResult::upper("mass drift over [0, 100]", mass_drift, 1e-11 * ts));
    checks.push(CheckResult::upper("energy drift over [0, 100]", energy_drift, 1e-11 * ts));

    // Exact revival after 2 pi.
    let revived = state.propagate(2.0 * std::f64::consts::PI);
    let diff = transform::synthesize(&basis, &revived)?
        .sub(&transform::synthesize(&basis, &state)?)?
        .norm_l2();
    checks.push(CheckResult::upper("revival after 2 pi", diff, 1e-12 * ts));

    // Uniform-in-time error for the Gaussian at N = 100.
    let gaussian = hermite::lookup("gaussian")?;
    let table = evolution::evolve_and_compare(
        &gaussian,
        Grid::new(100)?,
        evolution::default_n_max(Grid::new(100)?),
        &[0.0, 1.0, 10.0, 100.0],
    )?;
    let max_err = table.rows.iter().map(|r| r.error_l2).fold(0.0, f64::max);
    let min_err = table.rows.iter().map(|r| r.error_l2).fold(f64::INFINITY, f64::min);
    let variation = (max_err - min_err) / max_err;
    checks.push(CheckResult::upper("error variation across times", variation, 0.2));

    Ok(CriterionResult::from_checks(8, "time evolution", checks))
}

fn criterion_oracles(ts: f64) -> Result<CriterionResult> {
    let mut checks = Vec::new();

    // Recurrence against the explicit sum.
    let mut worst = 0.0f64;
    for big_n in [2usize, 4, 8, 16] {
        for n in 0..=big_n {
            for k in 0..=big_n {
                let rec = basis::kravchuk_poly(n, k, big_n).expect("n <= N");
                let explicit = basis::kravchuk_poly_explicit(n, k, big_n);
                worst = worst.max((rec - explicit).abs() / rec.abs().max(1.0));
            }
        }
    }
    checks.push(CheckResult::upper("recurrence vs explicit sum", worst, 1e-10 * ts));

    // Rodrigues formula at N = 4.
    let w = BinomialWeight::new(Grid::new(4)?);
    let mut worst = 0.0f64;
    for n in 0..=4usize {
        let oracle = basis::rodrigues_oracle(n, 4);
        for k in 0..=4usize {
            let expected = basis::kravchuk_poly(n, k, 4).expect("n <= N") * w.pi()[k];
            worst = worst.max((oracle[k] - expected).abs());
        }
    }
    checks.push(CheckResult::upper("Rodrigues formula N=4", worst, 1e-14 * ts));

    // Pearson equation at N = 8.
    let w8 = BinomialWeight::new(Grid::new(8)?);
    let k_pi: Vec<f64> = w8.pi().iter().enumerate().map(|(k, &p)| k as f64 * p).collect();
    let lhs = basis::forward_diff(&k_pi);
    let mut worst = 0.0f64;
    for k in 0..=8usize {
        let rhs = (8.0 - 2.0 * k as f64) * w8.pi()[k];
        worst = worst.max((lhs[k] - rhs).abs());
    }
    checks.push(CheckResult::upper("Pearson equation N=8", worst, 1e-13 * ts));

    // Spectral propagation against the dense exponential.
    checks.push(CheckResult::upper(
        "spectral vs dense propagator",
        propagation_expm_residual(64, 1.0)?,
        1e-8 * ts,
    ));

    Ok(CriterionResult::from_checks(9, "oracle equivalences", checks))
}

/// Run one acceptance criterion (1 through 9). Criterion 10 is the timed
/// full run; see [`run_all`].
pub fn criterion(id: usize, tol_scale: f64) -> Result<CriterionResult> {
    match id {
        1 => criterion_spectrum(tol_scale),
        2 => criterion_orthonormality(tol_scale),
        3 => criterion_ladders(tol_scale),
        4 => criterion_transform(tol_scale),
        5 => criterion_rho_rate(tol_scale),
        6 => criterion_phi_rate(tol_scale),
        7 => criterion_consistency_rate(tol_scale),
        8 => criterion_evolution(tol_scale),
        9 => criterion_oracles(tol_scale),
        other => Err(Error::Config(format!("no criterion {other}"))),
    }
}

/// The identity-suite subset (everything except the convergence sweeps and
/// the timed run).
pub fn identity_suite(tol_scale: f64) -> Result<Vec<CriterionResult>> {
    [1usize, 2, 3, 4, 8, 9].iter().map(|&id| criterion(id, tol_scale)).collect()
}

/// Configuration for the full run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub out_dir: PathBuf,
    pub sigma: u32,
    pub tol_scale: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { out_dir: PathBuf::from("results"), sigma: 0, tol_scale: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub criteria: Vec<CriterionResult>,
    pub elapsed_seconds: f64,
    pub all_passed: bool,
    pub files: Vec<PathBuf>,
}

/// Full-precision float formatting for CSV cells (17 significant digits,
/// round-trip exact).
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Write a CSV file atomically: `#`-prefixed metadata lines, a header row,
/// data rows, then `#`-prefixed footer lines.
pub fn write_csv(
    path: &Path,
    meta: &[String],
    header: &[&str],
    rows: &[Vec<String>],
    footer: &[String],
) -> Result<()> {
    let mut out = String::new();
    for line in meta {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    for line in footer {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    let tmp = path.with_extension("csv.tmp");
    fs::write(&tmp, out)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn standard_meta(config_echo: &str) -> Vec<String> {
    vec![
        format!("kravchuk v{}", env!("CARGO_PKG_VERSION")),
        format!("seed 0x{SEED:X}"),
        format!("config: {config_echo}"),
    ]
}

fn sweep_footer(result: &SweepResult) -> Vec<String> {
    vec![
        format!(
            "fit_l2: slope={} intercept={} r2={}",
            fmt_g17(result.fit_l2.slope),
            fmt_g17(result.fit_l2.intercept),
            fmt_g17(result.fit_l2.r_squared)
        ),
        format!(
            "fit_linf: slope={} intercept={} r2={}",
            fmt_g17(result.fit_linf.slope),
            fmt_g17(result.fit_linf.intercept),
            fmt_g17(result.fit_linf.r_squared)
        ),
        format!(
            "fit_h1: slope={} intercept={} r2={}",
            fmt_g17(result.fit_h1.slope),
            fmt_g17(result.fit_h1.intercept),
            fmt_g17(result.fit_h1.r_squared)
        ),
    ]
}

fn sweep_rows(result: &SweepResult) -> Vec<Vec<String>> {
    result
        .n_values
        .iter()
        .zip(&result.h_values)
        .zip(&result.errors)
        .map(|((&n, &h), e)| {
            vec![n.to_string(), fmt_g17(h), fmt_g17(e.l2), fmt_g17(e.linf), fmt_g17(e.h1)]
        })
        .collect()
}

/// Write the rho sweep CSV; shared by the CLI and the full run.
pub fn write_rho_csv(path: &Path, sweep: &SweepResult, sigma: u32) -> Result<()> {
    let echo = format!(
        "rho --N {} --sigma {sigma}",
        sweep.n_values.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
    );
    write_csv(
        path,
        &standard_meta(&echo),
        &["N", "h", "err_l2", "err_linf", "err_h1"],
        &sweep_rows(sweep),
        &sweep_footer(sweep),
    )
}

/// Write the phi sweep CSV (one block of rows per mode).
pub fn write_phi_csv(path: &Path, sweep: &PhiSweep, sigma: u32) -> Result<()> {
    let echo = format!(
        "phi --N {} --modes {} --sigma {sigma}",
        sweep.per_mode[0]
            .n_values
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(","),
        sweep.modes.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
    );
    let mut rows = Vec::new();
    for (mode, result) in sweep.modes.iter().zip(&sweep.per_mode) {
        for ((&n, &h), e) in result.n_values.iter().zip(&result.h_values).zip(&result.errors) {
            rows.push(vec![
                n.to_string(),
                fmt_g17(h),
                mode.to_string(),
                fmt_g17(e.l2),
                fmt_g17(e.linf),
                fmt_g17(e.h1),
            ]);
        }
    }
    let mut footer = Vec::new();
    for (mode, result) in sweep.modes.iter().zip(&sweep.per_mode) {
        footer.push(format!(
            "mode {mode} fit_l2: slope={} intercept={} r2={}",
            fmt_g17(result.fit_l2.slope),
            fmt_g17(result.fit_l2.intercept),
            fmt_g17(result.fit_l2.r_squared)
        ));
    }
    write_csv(
        path,
        &standard_meta(&echo),
        &["N", "h", "n", "err_l2", "err_linf", "err_h1"],
        &rows,
        &footer,
    )
}

pub fn write_visual_csv(path: &Path, table: &VisualTable) -> Result<()> {
    let echo = format!(
        "visual comparison, N = {}, modes {}",
        table.nodes.len() - 1,
        table.modes.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
    );
    let mut header: Vec<String> = vec!["a".into()];
    for mode in &table.modes {
        header.push(format!("phi_{mode}"));
    }
    for mode in &table.modes {
        header.push(format!("psi_{mode}"));
    }
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let rows: Vec<Vec<String>> = (0..table.nodes.len())
        .map(|k| {
            let mut row = vec![fmt_g17(table.nodes[k])];
            for values in &table.phi_rows {
                row.push(fmt_g17(values[k]));
            }
            for values in &table.psi_rows {
                row.push(fmt_g17(values[k]));
            }
            row
        })
        .collect();
    write_csv(path, &standard_meta(&echo), &header_refs, &rows, &[])
}

pub fn write_consistency_csv(path: &Path, sweep: &SweepResult, fname: &str) -> Result<()> {
    let echo = format!(
        "consistency --f {fname} --N {}",
        sweep.n_values.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
    );
    write_csv(
        path,
        &standard_meta(&echo),
        &["N", "h", "err_l2", "err_linf", "err_h1"],
        &sweep_rows(sweep),
        &sweep_footer(sweep),
    )
}

pub fn write_transform_csv(path: &Path, rows: &[TransformRow]) -> Result<()> {
    let echo = format!(
        "transform --N {}",
        rows.iter().map(|r| r.n.to_string()).collect::<Vec<_>>().join(",")
    );
    let data: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                fmt_g17(r.unitarity_direct),
                fmt_g17(r.unitarity_factored),
                fmt_g17(r.max_diff),
            ]
        })
        .collect();
    write_csv(
        path,
        &standard_meta(&echo),
        &["N", "unitarity_direct", "unitarity_factored", "max_diff"],
        &data,
        &[],
    )
}

pub fn write_evolution_csv(
    path: &Path,
    report: &EvolveReport,
    fname: &str,
    n: usize,
) -> Result<()> {
    let echo = format!(
        "evolve --f {fname} --N {n} --t {} (n_max {}, n_ref {})",
        report.rows.iter().map(|r| r.t.to_string()).collect::<Vec<_>>().join(","),
        report.n_max,
        report.n_ref
    );
    let data: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| vec![fmt_g17(r.t), fmt_g17(r.error_l2), fmt_g17(r.mass), fmt_g17(r.energy)])
        .collect();
    write_csv(path, &standard_meta(&echo), &["t", "err_l2", "mass", "energy"], &data, &[])
}

pub fn write_checks_csv(path: &Path, criteria: &[CriterionResult]) -> Result<()> {
    let rows: Vec<Vec<String>> = criteria
        .iter()
        .flat_map(|c| {
            c.checks.iter().map(move |check| {
                vec![
                    c.id.to_string(),
                    check.name.clone(),
                    fmt_g17(check.value),
                    check.constraint.clone(),
                    if check.passed { "pass".into() } else { "fail".into() },
                ]
            })
        })
        .collect();
    write_csv(
        path,
        &standard_meta("identity checks"),
        &["criterion", "check", "value", "constraint", "status"],
        &rows,
        &[],
    )
}

pub fn write_summary_csv(path: &Path, criteria: &[CriterionResult]) -> Result<()> {
    let rows: Vec<Vec<String>> = criteria
        .iter()
        .map(|c| {
            vec![
                c.id.to_string(),
                c.name.clone(),
                if c.passed { "pass".into() } else { "fail".into() },
                c.detail.replace(',', ";"),
            ]
        })
        .collect();
    write_csv(
        path,
        &standard_meta("acceptance summary"),
        &["criterion", "name", "status", "detail"],
        &rows,
        &[],
    )
}

const RUNTIME_LIMIT_SECONDS: f64 = 300.0;

/// Execute every sweep and identity check, write one CSV per experiment plus
/// the acceptance summary, and report per-criterion pass/fail.
pub fn run_all(cfg: &RunConfig) -> Result<RunSummary> {
    let started = Instant::now();
    fs::create_dir_all(&cfg.out_dir)?;
    let mut files = Vec::new();

    let mut criteria: Vec<CriterionResult> =
        (1..=9).map(|id| criterion(id, cfg.tol_scale)).collect::<Result<_>>()?;

    // Experiment CSVs.
    let rho = sweep_rho_convergence(&RHO_SIZES, cfg.sigma)?;
    let path = cfg.out_dir.join("rho_convergence.csv");
    write_rho_csv(&path, &rho, cfg.sigma)?;
    files.push(path);

    let phi = sweep_phi_convergence(&PHI_SIZES, &[10], cfg.sigma)?;
    let path = cfg.out_dir.join("phi_convergence.csv");
    write_phi_csv(&path, &phi, cfg.sigma)?;
    files.push(path);

    let visual = phi_visual_table(50, &[1, 2, 3, 4, 5, 6])?;
    let path = cfg.out_dir.join("phi_visual_n50.csv");
    write_visual_csv(&path, &visual)?;
    files.push(path);

    let gaussian = hermite::lookup("gaussian")?;
    let consistency = sweep_operator_consistency(&gaussian, &CONSISTENCY_SIZES)?;
    let path = cfg.out_dir.join("operator_consistency.csv");
    write_consistency_csv(&path, &consistency, "gaussian")?;
    files.push(path);

    let transform_rows = transform_residual_rows(&[2, 16, 64, 128])?;
    let path = cfg.out_dir.join("transform_residuals.csv");
    write_transform_csv(&path, &transform_rows)?;
    files.push(path);

    let evolve = evolve_experiment(&gaussian, 100, None, &[0.0, 1.0, 10.0, 100.0])?;
    let path = cfg.out_dir.join("evolution_error.csv");
    write_evolution_csv(&path, &evolve, "gaussian", 100)?;
    files.push(path);

    let path = cfg.out_dir.join("identity_checks.csv");
    write_checks_csv(&path, &criteria)?;
    files.push(path);

    // Criterion 10: the run itself.
    let elapsed = started.elapsed().as_secs_f64();
    let others_passed = criteria.iter().all(|c| c.passed);
    let passed_10 = others_passed && elapsed <= RUNTIME_LIMIT_SECONDS;
    criteria.push(CriterionResult {
        id: 10,
        name: "full run".into(),
        passed: passed_10,
        detail: format!(
            "elapsed {elapsed:.1}s (limit {RUNTIME_LIMIT_SECONDS:.0}s), criteria 1-9 {}",
            if others_passed { "passed" } else { "FAILED" }
        ),
        checks: vec![CheckResult::upper("wall-clock seconds", elapsed, RUNTIME_LIMIT_SECONDS)],
    });

    let path = cfg.out_dir.join("summary.csv");
    write_summary_csv(&path, &criteria)?;
    files.push(path);

    let all_passed = criteria.iter().all(|c| c.passed);
    Ok(RunSummary { criteria, elapsed_seconds: elapsed, all_passed, files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loglog_fit_recovers_power_law() {
        let x = [50.0f64, 100.0, 200.0, 400.0];
        let y: Vec<f64> = x.iter().map(|&v| 3.5 * v.powf(-1.25)).collect();
        let fit = fit_loglog(&x, &y);
        assert!((fit.slope + 1.25).abs() <= 1e-12);
        assert!((fit.intercept - 3.5f64.ln()).abs() <= 1e-12);
        assert!((fit.r_squared - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn n_list_validation() {
        assert!(validate_n_list(&[], 2).is_err());
        assert!(validate_n_list(&[50, 50], 2).is_err());
        assert!(validate_n_list(&[50, 49], 2).is_err());
        assert!(validate_n_list(&[3, 50], 2).is_err());
        assert!(validate_n_list(&[4, 50], 10).is_err());
        assert!(validate_n_list(&[10, 50], 10).is_ok());
    }

    #[test]
    fn rho_errors_are_small_at_n50() {
        let sweep = sweep_rho_convergence(&[50], 0).unwrap();
        // Max-norm discrepancy against the Gaussian stays visibly small.
        assert!(sweep.errors[0].linf <= 0.05, "linf = {}", sweep.errors[0].linf);
    }

    #[test]
    fn rho_slope_on_a_short_ladder() {
        let sweep = sweep_rho_convergence(&[50, 100, 200], 0).unwrap();
        assert!(
            (-1.15..=-0.85).contains(&sweep.fit_l2.slope),
            "slope {}",
            sweep.fit_l2.slope
        );
        assert!(sweep.fit_l2.r_squared >= 0.98);
    }

    #[test]
    fn weighted_norms_grow_with_sigma() {
        let plain = sweep_rho_convergence(&[50], 0).unwrap();
        let weighted = sweep_rho_convergence(&[50], 2).unwrap();
        assert!(weighted.errors[0].l2 > plain.errors[0].l2);
    }

    #[test]
    fn phi_ground_mode_error_at_n50() {
        let sweep = sweep_phi_convergence(&[50], &[0], 0).unwrap();
        assert!(sweep.per_mode[0].errors[0].linf <= 0.02);
    }

    #[test]
    fn phi_mode_exceeding_grid_is_rejected() {
        assert!(sweep_phi_convergence(&[10, 20], &[10], 0).is_err());
    }

    #[test]
    fn consistency_scales_linearly() {
        // Doubling the input doubles the error at fixed N.
        let f = hermite::lookup("gaussian").unwrap();
        let base = sweep_operator_consistency(&f, &[64]).unwrap().errors[0].l2;
        let doubled = TestFunction::new(
            "gaussian_x2",
            "schwartz",
            |x| 2.0 * (-x * x / 2.0).exp(),
            |x| 2.0 * (-x * x / 2.0).exp(),
            None,
        );
        let scaled = sweep_operator_consistency(&doubled, &[64]).unwrap().errors[0].l2;
        assert!((scaled - 2.0 * base).abs() <= 1e-12 + 1e-12 * base);
    }

    #[test]
    fn visual_table_shapes() {
        let table = phi_visual_table(50, &[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(table.nodes.len(), 51);
        assert_eq!(table.phi_rows.len(), 6);
        assert_eq!(table.psi_rows.len(), 6);
        // The discrete and continuous rows are visually close at N = 50: the
        // pointwise gap is O(h^2) with a constant that grows with the mode
        // index (measured ~5.6/N for mode 6).
        for (phi_row, psi_row) in table.phi_rows.iter().zip(&table.psi_rows) {
            let max_diff = phi_row
                .iter()
                .zip(psi_row)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(max_diff <= 0.15, "visual rows differ by {max_diff}");
        }
    }

    #[test]
    fn csv_output_is_deterministic() {
        let dir = std::env::temp_dir().join(format!("kravchuk-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let sweep = sweep_rho_convergence(&[50, 100], 0).unwrap();
        let path_a = dir.join("a.csv");
        let path_b = dir.join("b.csv");
        write_rho_csv(&path_a, &sweep, 0).unwrap();
        let sweep_again = sweep_rho_convergence(&[50, 100], 0).unwrap();
        write_rho_csv(&path_b, &sweep_again, 0).unwrap();
        let a = fs::read(&path_a).unwrap();
        let b = fs::read(&path_b).unwrap();
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().starts_with("# kravchuk v"));
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn transform_rows_small() {
        let rows = transform_residual_rows(&[2, 16]).unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            assert!(row.max_diff <= 1e-9);
            assert!(row.unitarity_direct <= 1e-10);
            assert!(row.unitarity_factored <= 1e-10);
        }
    }

    #[test]
    fn propagation_matches_dense_exponential() {
        let residual = propagation_expm_residual(64, 1.0).unwrap();
        assert!(residual <= 1e-8, "residual {residual:.3e}");
    }

    #[test]
    fn fmt_g17_round_trips() {
        for &x in &[0.0, 1.0, -0.1, std::f64::consts::PI, 1e-300, 6.02e23] {
            let s = fmt_g17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }
}
