//! Aubin–Mabuchi energy of Fubini–Study potentials.
//!
//! The chart side integrates
//! `𝓔(φ₀, φ₁) = (1/(n+1)) Σⱼ ∫ (φ₀ − φ₁) (dd^cφ₀)ʲ ∧ (dd^cφ₁)^{n−j}`
//! with `dd^c` normalised so that `∫_{ℙⁿ} (dd^cφ_I)ⁿ = 1`. The simplex side
//! integrates `n! (c[φ₀] − c[φ₁])` over the simplex, where the entropy terms
//! cancel and the integral collapses to `(1/(n+1)) Σᵢ log(μᵢ(P₁)/μᵢ(P₀))`.
//! The two sides agree up to an overall sign, fixed by a scalar probe.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fs::{complex_hessian, fs_eval, ChartPoint};
use crate::hermitian::{mu_vector, CMatrix, FsGeodesicPath, PosDefHermitian};
use crate::numeric::{is_uniform, ln_factorial, max_second_difference};
use crate::quadrature::{integrate_chart, QuadratureSpec};

/// Closed-form simplex side.
pub fn energy_okounkov(p0: &PosDefHermitian, p1: &PosDefHermitian) -> Result<f64> {
    if p0.order() != p1.order() {
        return Err(Error::invalid(format!(
            "orders differ: {} vs {}",
            p0.order(),
            p1.order()
        )));
    }
    let sum: f64 = mu_vector(p1)
        .iter()
        .zip(mu_vector(p0))
        .map(|(a, b)| a.ln() - b.ln())
        .sum();
    Ok(sum / p0.order() as f64)
}

/// Mixed discriminant `D(A, …, A, B, …, B)` with `j` copies of `A`, for
/// `n ≤ 2`; `D(A, …, A) = det A`.
fn mixed_det(a: &CMatrix, b: &CMatrix, j: usize) -> f64 {
    let n = a.nrows();
    match (n, j) {
        (_, 0) => b.determinant().re,
        (n, j) if j == n => a.determinant().re,
        (2, 1) => 0.5 * ((a + b).determinant().re - a.determinant().re - b.determinant().re),
        _ => unreachable!("mixed determinants are only formed for n ≤ 2"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChartEnergy {
    pub value: f64,
    pub error_estimate: f64,
}

/// Chart quadrature of the energy. Also integrates `(dd^cφ_I)ⁿ` on the same
/// nodes and fails if it is not 1.
pub fn energy_chart(p0: &PosDefHermitian, p1: &PosDefHermitian, spec: &QuadratureSpec) -> Result<ChartEnergy> {
    if p0.order() != p1.order() {
        return Err(Error::invalid(format!(
            "orders differ: {} vs {}",
            p0.order(),
            p1.order()
        )));
    }
    let n = p0.dim();
    if n > 2 {
        return Err(Error::invalid("chart energy supports n ≤ 2"));
    }
    let identity = PosDefHermitian::identity(n + 1);
    // (dd^cφ)ⁿ = (n!/πⁿ) det ∂∂̄φ dλ.
    let volume = ln_factorial(n as u32).exp() / PI.powi(n as i32);
    let res = integrate_chart(n, &spec.scheme, 2, |z, out| {
        let z = ChartPoint::new(z.to_vec()).expect("finite nodes");
        let h0 = complex_hessian(p0, &z).expect("orders checked");
        let h1 = complex_hessian(p1, &z).expect("orders checked");
        let gap = fs_eval(p0, &z).expect("positive definite") - fs_eval(p1, &z).expect("positive definite");
        let mixed: f64 = (0..=n).map(|j| mixed_det(&h0, &h1, j)).sum();
        out[0] = Complex64::new(gap * mixed * volume / (n as f64 + 1.0), 0.0);
        let hi = complex_hessian(&identity, &z).expect("orders checked");
        out[1] = Complex64::new(hi.determinant().re * volume, 0.0);
    })?;
    let total_mass = res.values[1].re;
    if (total_mass - 1.0).abs() > (10.0 * res.error).max(1e-8) {
        return Err(Error::Inconsistent(format!(
            "(dd^c φ_I)^n integrates to {total_mass} instead of 1"
        )));
    }
    spec.check(res.error)?;
    Ok(ChartEnergy {
        value: res.values[0].re,
        error_estimate: res.error,
    })
}

/// `±1` relating the chart energy to the simplex side, read off from the
/// scalar shift `P ↦ eP` on `ℙⁿ`.
pub fn calibrate_sign(n: usize, spec: &QuadratureSpec) -> Result<f64> {
    let p = PosDefHermitian::identity(n + 1);
    let shifted = p.scaled(std::f64::consts::E)?;
    let chart = energy_chart(&p, &shifted, spec)?.value;
    let simplex = energy_okounkov(&p, &shifted)?;
    let ratio = chart / simplex;
    if (ratio.abs() - 1.0).abs() > 1e-6 {
        return Err(Error::Inconsistent(format!(
            "scalar probe ratio {ratio} is not ±1"
        )));
    }
    Ok(ratio.signum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub chart_value: f64,
    pub okounkov_value: f64,
    pub sign: f64,
    /// `|chart_value − sign·okounkov_value|`.
    pub gap: f64,
    pub quadrature_error_estimate: f64,
}

pub fn energy_report(p0: &PosDefHermitian, p1: &PosDefHermitian, spec: &QuadratureSpec) -> Result<EnergyReport> {
    let sign = calibrate_sign(p0.dim(), spec)?;
    let chart = energy_chart(p0, p1, spec)?;
    let okounkov_value = energy_okounkov(p0, p1)?;
    Ok(EnergyReport {
        chart_value: chart.value,
        okounkov_value,
        sign,
        gap: (chart.value - sign * okounkov_value).abs(),
        quadrature_error_estimate: chart.error_estimate,
    })
}

/// Largest normalised second difference of `t ↦ 𝓔(P(0), P(t))`.
pub fn energy_affine_along_geodesic(path: &FsGeodesicPath, ts: &[f64]) -> Result<f64> {
    if ts.len() < 3 || !is_uniform(ts) {
        return Err(Error::invalid("need at least three equally spaced times"));
    }
    let start = path.eval(0.0)?;
    let values = ts
        .iter()
        .map(|&t| energy_okounkov(&start, &path.eval(t)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(max_second_difference(ts, &values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fs::counterexample_path;
    use crate::quadrature::QuadratureScheme;

    #[test]
    fn okounkov_examples() {
        let i2 = PosDefHermitian::identity(2);
        assert_eq!(energy_okounkov(&i2, &i2).unwrap(), 0.0);
        let e2 = PosDefHermitian::from_real_diagonal(&[2f64.exp(), 1.0]).unwrap();
        assert!((energy_okounkov(&i2, &e2).unwrap() - 1.0).abs() < 1e-15);
        let p = PosDefHermitian::from_real_rows(&[&[2.0, 0.3, 0.0], &[0.3, 1.0, 0.1], &[0.0, 0.1, 0.7]]).unwrap();
        let v = energy_okounkov(&p, &p.scaled(3.0).unwrap()).unwrap();
        assert!((v - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn chart_scalar_shift_and_sign() {
        let spec = QuadratureSpec::new(QuadratureScheme::default());
        let p = PosDefHermitian::from_real_rows(&[&[1.5, 0.2], &[0.2, 0.8]]).unwrap();
        let v = energy_chart(&p, &p.scaled(2.0).unwrap(), &spec).unwrap();
        assert!((v.value + 2f64.ln()).abs() < 1e-9);
        assert_eq!(calibrate_sign(1, &spec).unwrap(), -1.0);
        assert!(energy_chart(&p, &p, &spec).unwrap().value.abs() < 1e-15);
    }

    #[test]
    fn chart_matches_simplex_for_a_pair() {
        let spec = QuadratureSpec::new(QuadratureScheme::default());
        let p0 = PosDefHermitian::from_real_rows(&[&[1.5, 0.2], &[0.2, 0.8]]).unwrap();
        let p1 = PosDefHermitian::from_real_rows(&[&[0.6, -0.4], &[-0.4, 2.0]]).unwrap();
        let rep = energy_report(&p0, &p1, &spec).unwrap();
        assert!(rep.gap <= 1e-3, "{rep:?}");
    }

    #[test]
    fn chart_matches_simplex_in_two_dimensions() {
        let spec = QuadratureSpec::new(QuadratureScheme::product(60, 16));
        let p0 = PosDefHermitian::from_real_rows(&[&[1.5, 0.2, 0.0], &[0.2, 0.8, 0.1], &[0.0, 0.1, 1.0]]).unwrap();
        let p1 = PosDefHermitian::from_real_rows(&[&[0.9, 0.0, 0.3], &[0.0, 1.2, 0.0], &[0.3, 0.0, 0.6]]).unwrap();
        let chart = energy_chart(&p0, &p1, &spec).unwrap();
        let simplex = energy_okounkov(&p0, &p1).unwrap();
        assert!((chart.value + simplex).abs() < 1e-3, "{chart:?} vs {simplex}");
    }

    #[test]
    fn energy_is_affine_on_the_counterexample() {
        let ts: Vec<f64> = (0..9).map(|k| k as f64 * 0.25).collect();
        assert!(energy_affine_along_geodesic(&counterexample_path(), &ts).unwrap() <= 1e-12);
        assert!(energy_affine_along_geodesic(&counterexample_path(), &[0.0, 1.0]).is_err());
    }

    #[test]
    fn rejects_large_dimension() {
        let p = PosDefHermitian::identity(4);
        assert!(energy_chart(&p, &p, &QuadratureSpec::default()).is_err());
    }
}
