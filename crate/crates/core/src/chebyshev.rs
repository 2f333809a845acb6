//! Chebyshev potentials of Fubini–Study metrics.
//!
//! For `φ_P = log z*Pz` the potential on the simplex is
//!
//! ```text
//! c[φ_P](α) = Σᵢ βᵢ log(βᵢ / μᵢ(P)),   β = (α₀, …, αₙ₋₁, 1 − Σαᵢ),
//! ```
//!
//! an entropy term minus a linear function of `log μ(P)`. Affineness of
//! `t ↦ c[φ_{P(t)}]` is therefore the same as affineness of each `log μᵢ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::{chebyshev_norms, gram_exact, ln_section_norm};
use crate::hermitian::{mu_vector, FsGeodesicPath, PosDefHermitian};
use crate::numeric::{is_uniform, max_second_difference, xlogx};
use crate::okounkov::{round_to_lattice, simplex_interior_contains, SimplexPoint};

/// Default threshold separating affine from non-affine curves.
pub const AFFINE_TOL: f64 = 1e-6;

const SIMPLEX_SLACK: f64 = 1e-12;

/// The μ-vector of `P`, which determines `c[φ_P]` completely.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevPotentialFs {
    mu: Vec<f64>,
}

impl ChebyshevPotentialFs {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.len() < 2 {
            return Err(Error::invalid("μ-vector needs n+1 ≥ 2 entries"));
        }
        if mu.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(Error::invalid("μ entries must be positive and finite"));
        }
        Ok(Self { mu })
    }

    pub fn from_matrix(p: &PosDefHermitian) -> Self {
        Self { mu: mu_vector(p) }
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn dim(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn eval(&self, alpha: &SimplexPoint) -> Result<f64> {
        cheb_closed_form(self, alpha)
    }
}

fn check_alpha(n: usize, alpha: &SimplexPoint) -> Result<()> {
    if alpha.dim() != n {
        return Err(Error::invalid(format!(
            "α has {} coordinates, expected {n}",
            alpha.dim()
        )));
    }
    if !alpha.in_closed_simplex(SIMPLEX_SLACK) {
        return Err(Error::Domain(format!(
            "α = {:?} lies outside the closed simplex",
            alpha.coords()
        )));
    }
    Ok(())
}

/// `Σᵢ βᵢ log(βᵢ/μᵢ)` with `0 log 0 = 0` on the boundary.
pub fn cheb_closed_form(pot: &ChebyshevPotentialFs, alpha: &SimplexPoint) -> Result<f64> {
    check_alpha(pot.dim(), alpha)?;
    Ok(alpha
        .barycentric()
        .iter()
        .zip(&pot.mu)
        .map(|(&b, &mu)| {
            let b = b.max(0.0);
            xlogx(b) - b * mu.ln()
        })
        .sum())
}

/// `(1/m) log ‖Ch_{m,α_m}‖²` with `α_m` the nearest degree-`m` lattice point.
pub fn cheb_finite_m(p: &PosDefHermitian, m: u32, alpha: &SimplexPoint) -> Result<f64> {
    check_alpha(p.dim(), alpha)?;
    let idx = round_to_lattice(alpha, m)?;
    Ok(ln_section_norm(&mu_vector(p), &idx) / f64::from(m))
}

/// [`cheb_finite_m`] through the Gram matrix and lex-ordered elimination.
pub fn cheb_finite_m_via_gram(p: &PosDefHermitian, m: u32, alpha: &SimplexPoint) -> Result<f64> {
    check_alpha(p.dim(), alpha)?;
    let idx = round_to_lattice(alpha, m)?;
    let g = gram_exact(p, m)?;
    let pos = g.basis().index_of(&idx).expect("rounded index is in the basis");
    Ok(chebyshev_norms(&g)?[pos].ln() / f64::from(m))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub m: u32,
    pub value: f64,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub limit: f64,
    pub rows: Vec<ConvergenceRow>,
    /// `max defect·m/log m` over the two largest levels.
    pub rate_constant: f64,
    /// Whether every level obeys `defect ≤ C log m / m` with the fitted `C`.
    pub rate_holds: bool,
    pub strictly_decreasing: bool,
}

pub fn convergence_report(
    p: &PosDefHermitian,
    alpha: &SimplexPoint,
    ms: &[u32],
) -> Result<ConvergenceReport> {
    if ms.len() < 2 || ms.windows(2).any(|w| w[0] >= w[1]) || ms[0] < 2 {
        return Err(Error::invalid(
            "levels must be strictly increasing, at least two, each ≥ 2",
        ));
    }
    let limit = cheb_closed_form(&ChebyshevPotentialFs::from_matrix(p), alpha)?;
    let rows = ms
        .iter()
        .map(|&m| {
            let idx = round_to_lattice(alpha, m)?;
            if idx.exponents().iter().any(|&k| k == 0) {
                return Err(Error::Domain(format!(
                    "level {m} rounds α to the boundary index {:?}",
                    idx.exponents()
                )));
            }
            let value = cheb_finite_m(p, m, alpha)?;
            Ok(ConvergenceRow {
                m,
                value,
                defect: (value - limit).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ratio = |r: &ConvergenceRow| r.defect * f64::from(r.m) / f64::from(r.m).ln();
    let rate_constant = rows[rows.len() - 2..].iter().map(ratio).fold(0.0, f64::max);
    let rate_holds = rows.iter().all(|r| ratio(r) <= rate_constant * (1.0 + 1e-12));
    let strictly_decreasing = rows.windows(2).all(|w| w[1].defect < w[0].defect);
    Ok(ConvergenceReport {
        limit,
        rows,
        rate_constant,
        rate_holds,
        strictly_decreasing,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineTestReport {
    /// Largest normalised second difference in `t`, one per α.
    pub defects: Vec<f64>,
    pub affine: bool,
}

/// Tests whether `t ↦ c[φ_{P(t)}](α)` is affine for each α.
pub fn affine_in_t_test(
    path: &FsGeodesicPath,
    alphas: &[SimplexPoint],
    ts: &[f64],
    tol: f64,
) -> Result<AffineTestReport> {
    if ts.len() < 3 || !is_uniform(ts) {
        return Err(Error::invalid("need at least three equally spaced times"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let pots = ts
        .iter()
        .map(|&t| path.eval(t).map(|p| ChebyshevPotentialFs::from_matrix(&p)))
        .collect::<Result<Vec<_>>>()?;
    let defects = alphas
        .iter()
        .map(|alpha| {
            let curve = pots
                .iter()
                .map(|pot| cheb_closed_form(pot, alpha))
                .collect::<Result<Vec<_>>>()?;
            Ok(max_second_difference(ts, &curve))
        })
        .collect::<Result<Vec<_>>>()?;
    let affine = defects.iter().all(|&d| d <= tol);
    Ok(AffineTestReport { defects, affine })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub trials: usize,
    pub failures: usize,
    /// Largest `c(λα+(1−λ)β) − λc(α) − (1−λ)c(β)`; non-positive for convex `c`.
    pub worst_slack: f64,
}

impl ConvexityReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Uniform interior point of the n-simplex (flat Dirichlet).
pub(crate) fn random_interior_point(rng: &mut impl Rng, n: usize) -> SimplexPoint {
    loop {
        let e: Vec<f64> = (0..=n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let total: f64 = e.iter().sum();
        let alpha: Vec<f64> = e[..n].iter().map(|x| x / total).collect();
        let p = SimplexPoint::new(alpha).expect("finite");
        if simplex_interior_contains(&p, 1e-9) {
            return p;
        }
    }
}

pub fn convexity_sample_check(
    pot: &ChebyshevPotentialFs,
    trials: usize,
    seed: u64,
) -> Result<ConvexityReport> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let a = random_interior_point(&mut rng, pot.dim());
        let b = random_interior_point(&mut rng, pot.dim());
        let lambda: f64 = rng.random_range(1e-6..1.0 - 1e-6);
        let mixed = cheb_closed_form(pot, &a.lerp(&b, lambda))?;
        let chord = lambda * cheb_closed_form(pot, &a)? + (1.0 - lambda) * cheb_closed_form(pot, &b)?;
        let slack = mixed - chord;
        worst = worst.max(slack);
        if slack > 1e-12 {
            failures += 1;
        }
    }
    Ok(ConvexityReport {
        trials,
        failures,
        worst_slack: worst,
    })
}

/// `(c(α) + c(β))/2 − c((α+β)/2)`, zero exactly when `α = β`.
pub fn midpoint_gap(pot: &ChebyshevPotentialFs, a: &SimplexPoint, b: &SimplexPoint) -> Result<f64> {
    let mid = cheb_closed_form(pot, &a.lerp(b, 0.5))?;
    Ok(0.5 * (cheb_closed_form(pot, a)? + cheb_closed_form(pot, b)?) - mid)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegendreCheck {
    pub closed_form: f64,
    pub legendre: f64,
    pub gap: f64,
}

/// Compares `c[φ_P]` for `P = diag(d)` with the convex conjugate
/// `sup_y ⟨α, y⟩ − log(dₙ + Σⱼ dⱼ e^{yⱼ})`, found by damped Newton.
pub fn toric_legendre_check(d: &[f64], alpha: &SimplexPoint) -> Result<LegendreCheck> {
    let pot = ChebyshevPotentialFs::new(d.to_vec())?;
    let n = pot.dim();
    check_alpha(n, alpha)?;
    if !simplex_interior_contains(alpha, 1e-12) {
        return Err(Error::Domain("the conjugate is evaluated at interior points only".into()));
    }
    let a = alpha.coords();
    let objective = |y: &[f64]| -> (f64, Vec<f64>) {
        // log S with S = dₙ + Σ dⱼ e^{yⱼ}, and pⱼ = dⱼ e^{yⱼ}/S.
        let mut logs: Vec<f64> = (0..n).map(|j| d[j].ln() + y[j]).collect();
        logs.push(d[n].ln());
        let log_s = crate::numeric::log_sum_exp(&logs);
        let p: Vec<f64> = logs[..n].iter().map(|l| (l - log_s).exp()).collect();
        let value = a.iter().zip(y).map(|(ai, yi)| ai * yi).sum::<f64>() - log_s;
        (value, p)
    };
    let mut y = vec![0.0; n];
    let mut converged = false;
    for _ in 0..200 {
        let (value, p) = objective(&y);
        let grad: Vec<f64> = a.iter().zip(&p).map(|(ai, pi)| ai - pi).collect();
        if grad.iter().all(|g| g.abs() < 1e-14) {
            converged = true;
            break;
        }
        // Negative Hessian diag(p) − ppᵀ is positive definite for p in the open simplex.
        let h = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            let diag = if i == j { p[i] } else { 0.0 };
            diag - p[i] * p[j]
        });
        let step = h
            .lu()
            .solve(&nalgebra::DVector::from_column_slice(&grad))
            .ok_or_else(|| Error::Accuracy("singular Newton system".into()))?;
        let mut scale = 1.0;
        loop {
            let trial: Vec<f64> = y.iter().zip(step.iter()).map(|(yi, si)| yi + scale * si).collect();
            if objective(&trial).0 >= value - 1e-15 * value.abs().max(1.0) || scale < 1e-10 {
                y = trial;
                break;
            }
            scale *= 0.5;
        }
    }
    if !converged {
        return Err(Error::Accuracy("conjugate maximisation did not converge".into()));
    }
    let legendre = objective(&y).0;
    let closed_form = cheb_closed_form(&pot, alpha)?;
    Ok(LegendreCheck {
        closed_form,
        legendre,
        gap: (legendre - closed_form).abs(),
    })
}
