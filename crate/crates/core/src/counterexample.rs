//! The order-2 geodesic `P(t) = [[cosh t, sinh t], [sinh t, cosh t]]`.
//!
//! Its energy is affine in `t` (indeed constant) while the Chebyshev
//! potential is not affine at any `α ≠ 1/2`, since `μ(P(t)) = (1/cosh t, cosh t)`.

use serde::Serialize;

use crate::chebyshev::{affine_in_t_test, cheb_closed_form, AffineTestReport, ChebyshevPotentialFs, AFFINE_TOL};
use crate::energy::energy_affine_along_geodesic;
use crate::error::Result;
use crate::fs::{counterexample_path, geodesic_from_endpoints};
use crate::hermitian::{inf_norm, mu_vector, CMatrix, PosDefHermitian};
use crate::okounkov::SimplexPoint;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    /// Largest entry of `|P(0) − I|` and `|P(1) − [[cosh 1, sinh 1], [sinh 1, cosh 1]]|`.
    pub endpoint_residual: f64,
    /// `D` recovered by simultaneously diagonalising the two endpoints.
    pub recovered_d: Vec<f64>,
    pub mu_at_1: Vec<f64>,
    pub alphas: Vec<f64>,
    pub ts: Vec<f64>,
    /// `curve[i][k] = c[φ_{P(ts[k])}](alphas[i])`.
    pub curve: Vec<Vec<f64>>,
    /// Affineness of `t ↦ c(0.25, t)` over `t = 0, 1, 2`.
    pub affine_at_quarter: AffineTestReport,
    /// Affineness over the whole `alphas × ts` grid.
    pub affine_on_grid: AffineTestReport,
    pub energy_defect: f64,
    pub energy_affine: bool,
}

pub fn counterexample_report() -> Result<CounterexampleReport> {
    let path = counterexample_path();
    let p0 = path.eval(0.0)?;
    let p1 = path.eval(1.0)?;
    let (ch, sh) = (1f64.cosh(), 1f64.sinh());
    let expected1 = PosDefHermitian::from_real_rows(&[&[ch, sh], &[sh, ch]])?;
    let endpoint_residual = inf_norm(&(p0.matrix() - CMatrix::identity(2, 2)))
        .max(inf_norm(&(p1.matrix() - expected1.matrix())));
    let recovered_d = geodesic_from_endpoints(&p0, &p1)?.d().to_vec();

    let alphas = vec![0.1, 0.25, 0.5, 0.75, 0.9];
    let ts: Vec<f64> = (0..9).map(|k| 0.25 * k as f64).collect();
    let points = alphas
        .iter()
        .map(|&a| SimplexPoint::new(vec![a]))
        .collect::<Result<Vec<_>>>()?;
    let pots = ts
        .iter()
        .map(|&t| path.eval(t).map(|p| ChebyshevPotentialFs::from_matrix(&p)))
        .collect::<Result<Vec<_>>>()?;
    let curve = points
        .iter()
        .map(|a| pots.iter().map(|pot| cheb_closed_form(pot, a)).collect())
        .collect::<Result<Vec<_>>>()?;

    let quarter = SimplexPoint::new(vec![0.25])?;
    let affine_at_quarter = affine_in_t_test(&path, &[quarter], &[0.0, 1.0, 2.0], AFFINE_TOL)?;
    let affine_on_grid = affine_in_t_test(&path, &points, &ts, AFFINE_TOL)?;
    let energy_defect = energy_affine_along_geodesic(&path, &ts)?;
    Ok(CounterexampleReport {
        endpoint_residual,
        recovered_d,
        mu_at_1: mu_vector(&p1),
        alphas,
        ts,
        curve,
        affine_at_quarter,
        affine_on_grid,
        energy_defect,
        energy_affine: energy_defect <= AFFINE_TOL,
    })
}
