//! Deterministic integration over the affine chart `ℂⁿ` (n ≤ 2).
//!
//! The product rule works in polar coordinates `zⱼ = rⱼ e^{iθⱼ}`. Each radius
//! uses tanh-sinh on `u ∈ (0, π/2)` with `r = tan u`, each angle the periodic
//! trapezoid rule. Both rules nest, so the half-resolution sums come for free
//! and their disagreement is the reported error estimate.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation point of the tanh-sinh parameter.
const SINH_MAX: f64 = 3.2;
/// Independent random shifts used to estimate the quasi-Monte Carlo error.
const QMC_SHIFTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum QuadratureScheme {
    /// Tanh-sinh radial nodes × trapezoid angular nodes, per coordinate.
    Product { radial: usize, angular: usize },
    /// Randomly shifted Kronecker lattice on the unit cube.
    QuasiMonteCarlo { samples: usize, seed: u64 },
}

impl QuadratureScheme {
    pub fn product(radial: usize, angular: usize) -> Self {
        QuadratureScheme::Product { radial, angular }
    }
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        QuadratureScheme::Product {
            radial: 200,
            angular: 64,
        }
    }
}

/// A scheme plus an optional acceptance threshold on the error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: QuadratureScheme,
    pub tol: Option<f64>,
}

impl QuadratureSpec {
    pub fn new(scheme: QuadratureScheme) -> Self {
        Self { scheme, tol: None }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub(crate) fn check(&self, error: f64) -> Result<()> {
        match self.tol {
            Some(tol) if !(error <= tol) => Err(Error::Accuracy(format!(
                "quadrature error estimate {error:.3e} exceeds tolerance {tol:.3e}"
            ))),
            _ => Ok(()),
        }
    }
}

/// Tanh-sinh rule for `∫₀^∞ g(r) dr` through `r = tan u`.
#[derive(Debug, Clone)]
pub struct RadialRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Weights of the nested rule with twice the step (zero off its nodes).
    pub coarse_weights: Vec<f64>,
}

impl RadialRule {
    /// Uses `2⌊count/2⌋ + 1` nodes.
    pub fn tanh_sinh(count: usize) -> Result<Self> {
        let half = count / 2;
        if half < 2 {
            return Err(Error::invalid("tanh-sinh rule needs at least 4 nodes"));
        }
        let h = SINH_MAX / half as f64;
        let mut nodes = Vec::with_capacity(2 * half + 1);
        let mut weights = Vec::with_capacity(2 * half + 1);
        let mut coarse_weights = Vec::with_capacity(2 * half + 1);
        for k in -(half as i64)..=(half as i64) {
            let s = k as f64 * h;
            let v = FRAC_PI_2 * s.sinh();
            // 1 ∓ x computed without cancellation, x = tanh v.
            let comp = 2.0 / ((2.0 * v.abs()).exp() + 1.0);
            let dxds = FRAC_PI_2 * s.cosh() / v.cosh().powi(2);
            // u = π/4 (1 + x); measure distance to the nearer end of (0, π/2).
            let r = if k <= 0 {
                (FRAC_PI_4 * comp).tan()
            } else {
                1.0 / (FRAC_PI_4 * comp).tan()
            };
            let w = h * dxds * FRAC_PI_4 * (1.0 + r * r);
            if !r.is_finite() || !w.is_finite() || w == 0.0 {
                continue;
            }
            nodes.push(r);
            weights.push(w);
            coarse_weights.push(if k % 2 == 0 { 2.0 * w } else { 0.0 });
        }
        Ok(Self {
            nodes,
            weights,
            coarse_weights,
        })
    }

    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w * g(r))
            .sum()
    }
}

struct AngularRule {
    nodes: Vec<f64>,
    weight: f64,
}

impl AngularRule {
    fn trapezoid(count: usize) -> Result<Self> {
        if count < 2 || count % 2 != 0 {
            return Err(Error::invalid("angular node count must be even and ≥ 2"));
        }
        Ok(Self {
            nodes: (0..count)
                .map(|k| 2.0 * PI * k as f64 / count as f64)
                .collect(),
            weight: 2.0 * PI / count as f64,
        })
    }
}

/// Entrywise integral over `ℂⁿ` (Lebesgue measure) with an error estimate.
#[derive(Debug, Clone)]
pub struct ChartIntegral {
    pub values: Vec<Complex64>,
    pub error: f64,
}

/// Integrates a vector-valued integrand `f(z, out)` over `ℂⁿ`.
///
/// Work is split across threads by outer node, and partial sums are combined
/// in a fixed order, so results are bit-identical run to run.
pub fn integrate_chart<F>(n: usize, scheme: &QuadratureScheme, len: usize, f: F) -> Result<ChartIntegral>
where
    F: Fn(&[Complex64], &mut [Complex64]) + Sync,
{
    if !(1..=2).contains(&n) {
        return Err(Error::invalid(format!(
            "chart quadrature supports n = 1 or 2, got {n}"
        )));
    }
    match *scheme {
        QuadratureScheme::Product { radial, angular } => product_rule(n, radial, angular, len, &f),
        QuadratureScheme::QuasiMonteCarlo { samples, seed } => qmc(n, samples, seed, len, &f),
    }
}

fn add_scaled(acc: &mut [Complex64], vals: &[Complex64], w: f64) {
    for (a, v) in acc.iter_mut().zip(vals) {
        *a += v * w;
    }
}

fn product_rule<F>(n: usize, radial: usize, angular: usize, len: usize, f: &F) -> Result<ChartIntegral>
where
    F: Fn(&[Complex64], &mut [Complex64]) + Sync,
{
    let rad = RadialRule::tanh_sinh(radial)?;
    let ang = AngularRule::trapezoid(angular)?;
    let nr = rad.nodes.len();
    let na = ang.nodes.len();
    let points_per_outer = nr.pow(n as u32 - 1) * na.pow(n as u32);

    // Three running sums: full rule, radial-coarse, angular-coarse.
    let partials: Vec<[Vec<Complex64>; 3]> = (0..nr)
        .into_par_iter()
        .map(|outer| {
            let zero = vec![Complex64::new(0.0, 0.0); len];
            let mut sums = [zero.clone(), zero.clone(), zero.clone()];
            let mut out = zero;
            let mut z = vec![Complex64::new(0.0, 0.0); n];
            for inner in 0..points_per_outer {
                // Decode (radial indices, angular indices); radial[0] = outer.
                let mut rest = inner;
                let mut ri = [outer, 0];
                let mut ai = [0usize, 0];
                for j in 1..n {
                    ri[j] = rest % nr;
                    rest /= nr;
                }
                for a in ai.iter_mut().take(n) {
                    *a = rest % na;
                    rest /= na;
                }
                let mut w = 1.0;
                let mut w_rc = 1.0;
                let mut w_ac = 1.0;
                for j in 0..n {
                    let r = rad.nodes[ri[j]];
                    let theta = ang.nodes[ai[j]];
                    z[j] = Complex64::from_polar(r, theta);
                    w *= rad.weights[ri[j]] * r * ang.weight;
                    w_rc *= rad.coarse_weights[ri[j]] * r * ang.weight;
                    w_ac *= rad.weights[ri[j]]
                        * r
                        * if ai[j] % 2 == 0 { 2.0 * ang.weight } else { 0.0 };
                }
                out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
                f(&z, &mut out);
                add_scaled(&mut sums[0], &out, w);
                if w_rc != 0.0 {
                    add_scaled(&mut sums[1], &out, w_rc);
                }
                if w_ac != 0.0 {
                    add_scaled(&mut sums[2], &out, w_ac);
                }
            }
            sums
        })
        .collect();

    let zero = vec![Complex64::new(0.0, 0.0); len];
    let mut totals = [zero.clone(), zero.clone(), zero];
    for part in &partials {
        for (t, p) in totals.iter_mut().zip(part) {
            add_scaled(t, p, 1.0);
        }
    }
    let [full, coarse_r, coarse_a] = totals;
    let scale = full.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let diff = full
        .iter()
        .zip(coarse_r.iter().zip(&coarse_a))
        .map(|(v, (r, a))| (v - r).norm().max((v - a).norm()))
        .fold(0.0, f64::max);
    Ok(ChartIntegral {
        values: full,
        error: diff.max(64.0 * f64::EPSILON * scale),
    })
}

/// Irrational steps of the generalised golden-ratio (Kronecker) sequence.
fn kronecker_steps(dim: usize) -> Vec<f64> {
    // φ_d is the positive root of x^{d+1} = x + 1.
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
    }
    (1..=dim).map(|k| phi.powi(-(k as i32)).fract()).collect()
}

fn qmc<F>(n: usize, samples: usize, seed: u64, len: usize, f: &F) -> Result<ChartIntegral>
where
    F: Fn(&[Complex64], &mut [Complex64]) + Sync,
{
    if samples < QMC_SHIFTS * 16 {
        return Err(Error::invalid(format!(
            "quasi-Monte Carlo needs at least {} samples",
            QMC_SHIFTS * 16
        )));
    }
    let dim = 2 * n;
    let steps = kronecker_steps(dim);
    let per_shift = samples / QMC_SHIFTS;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts: Vec<Vec<f64>> = (0..QMC_SHIFTS)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect();

    let estimates: Vec<Vec<Complex64>> = shifts
        .par_iter()
        .map(|shift| {
            let mut acc = vec![Complex64::new(0.0, 0.0); len];
            let mut out = vec![Complex64::new(0.0, 0.0); len];
            let mut z = vec![Complex64::new(0.0, 0.0); n];
            for i in 1..=per_shift {
                let mut w = 1.0;
                for j in 0..n {
                    let v = (shift[2 * j] + i as f64 * steps[2 * j]).fract();
                    let a = (shift[2 * j + 1] + i as f64 * steps[2 * j + 1]).fract();
                    let u = FRAC_PI_2 * v;
                    let r = u.tan();
                    z[j] = Complex64::from_polar(r, 2.0 * PI * a);
                    w *= FRAC_PI_2 * (1.0 + r * r) * r * 2.0 * PI;
                }
                if !w.is_finite() {
                    continue;
                }
                out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
                f(&z, &mut out);
                add_scaled(&mut acc, &out, w / per_shift as f64);
            }
            acc
        })
        .collect();

    let k = QMC_SHIFTS as f64;
    let mut mean = vec![Complex64::new(0.0, 0.0); len];
    for e in &estimates {
        add_scaled(&mut mean, e, 1.0 / k);
    }
    let stderr = (0..len)
        .map(|i| {
            let var = estimates
                .iter()
                .map(|e| (e[i] - mean[i]).norm_sqr())
                .sum::<f64>()
                / (k - 1.0);
            (var / k).sqrt()
        })
        .fold(0.0, f64::max);
    Ok(ChartIntegral {
        values: mean,
        error: 3.0 * stderr,
    })
}
