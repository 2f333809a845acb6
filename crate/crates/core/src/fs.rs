//! Fubini–Study potentials `φ_P = log z*Pz` on the chart `{Zₙ ≠ 0}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{simultaneous_diagonalize, CMatrix, FsGeodesicPath, PosDefHermitian};

/// Affine coordinates `(z₀, …, zₙ₋₁)`; the homogeneous lift is `(z, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChartPoint(Vec<Complex64>);

impl ChartPoint {
    pub fn new(z: Vec<Complex64>) -> Result<Self> {
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("chart coordinates must be finite"));
        }
        Ok(Self(z))
    }

    pub fn origin(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn lift(&self) -> Vec<Complex64> {
        let mut v = self.0.clone();
        v.push(Complex64::new(1.0, 0.0));
        v
    }

    /// Chart image of the homogeneous point `Z`: `(Z/Zₙ, Zₙ)`.
    pub fn from_homogeneous(z: &[Complex64]) -> Result<(Self, Complex64)> {
        let (last, head) = z
            .split_last()
            .ok_or_else(|| Error::invalid("empty homogeneous vector"))?;
        if last.norm() == 0.0 {
            return Err(Error::Domain("point lies off the chart Zₙ ≠ 0".into()));
        }
        Ok((Self(head.iter().map(|c| c / last).collect()), *last))
    }
}

/// `Z* P Z` for a homogeneous vector.
pub(crate) fn quadratic_form(p: &CMatrix, z: &[Complex64]) -> f64 {
    let n = z.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += p[(i, j)] * z[j];
        }
        acc += z[i].conj() * row;
    }
    acc.re
}

fn check_dims(p: &PosDefHermitian, z: &ChartPoint) -> Result<()> {
    if p.order() != z.dim() + 1 {
        return Err(Error::invalid(format!(
            "matrix of order {} on a chart point with {} coordinates",
            p.order(),
            z.dim()
        )));
    }
    Ok(())
}

/// `φ_P(z) = log (z,1)* P (z,1)`.
pub fn fs_eval(p: &PosDefHermitian, z: &ChartPoint) -> Result<f64> {
    check_dims(p, z)?;
    let q = quadratic_form(p.matrix(), &z.lift());
    if !(q > 0.0) {
        return Err(Error::definiteness(format!("z*Pz = {q:.3e} at {:?}", z.coords())));
    }
    Ok(q.ln())
}

/// Complex Hessian `Hⱼₖ = ∂ⱼ∂̄ₖ log f`, `f = Z*PZ`, on the chart.
///
/// Uses `Hⱼₖ = Pₖⱼ/f − (Z*P)ⱼ (PZ)ₖ / f²`.
pub fn complex_hessian(p: &PosDefHermitian, z: &ChartPoint) -> Result<CMatrix> {
    check_dims(p, z)?;
    let lift = z.lift();
    let m = p.matrix();
    let n = z.dim();
    let f = quadratic_form(m, &lift);
    let pz: Vec<Complex64> = (0..=n)
        .map(|k| (0..=n).map(|j| m[(k, j)] * lift[j]).sum())
        .collect();
    // (Z*P)ⱼ = conj((PZ)ⱼ) since P is Hermitian.
    Ok(CMatrix::from_fn(n, n, |j, k| {
        m[(k, j)] / f - pz[j].conj() * pz[k] / (f * f)
    }))
}

/// `det ∂∂̄ φ_P = det P / (z*Pz)^{n+1}` in closed form.
pub fn monge_ampere_density(p: &PosDefHermitian, z: &ChartPoint) -> Result<f64> {
    check_dims(p, z)?;
    let f = quadratic_form(p.matrix(), &z.lift());
    Ok(p.det() / f.powi(z.dim() as i32 + 1))
}

/// Geodesic from `P0` to `P1`, i.e. `(A, D)` with `P(0) = P0`, `P(1) = P1`.
pub fn geodesic_from_endpoints(
    p0: &PosDefHermitian,
    p1: &PosDefHermitian,
) -> Result<FsGeodesicPath> {
    simultaneous_diagonalize(p0, p1)
}

/// The order-2 geodesic `P(t) = [[cosh t, sinh t], [sinh t, cosh t]]`,
/// factored as `A* diag(eᵗ, e⁻ᵗ) A` with `A = [[h, h], [−h, h]]`, `h = √2/2`.
pub fn counterexample_path() -> FsGeodesicPath {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let a = CMatrix::from_row_slice(2, 2, &[h, h, -h, h]);
    FsGeodesicPath::new(a, vec![1.0, -1.0]).expect("rotation is invertible")
}
