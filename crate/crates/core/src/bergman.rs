//! Bergman geodesics between Fubini–Study endpoints.
//!
//! At level `m` each endpoint `φ_j` induces the inner product
//! `H_{m,j}(s, t) = ∫ s t̄ e^{-mφ_j} (√-1 ∂∂̄φ_j)ⁿ/n!` on degree-`m` sections.
//! A basis `s_j` orthonormal for `H_{m,0}` with `H_{m,1}(s_j, s_k) = e^{-λ_j} δ_jk`
//! gives the Bergman geodesic `φ_m(t) = (1/m) log Σ e^{λ_j t} |s_j|²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fs::{fs_eval, ChartPoint};
use crate::gram::{gram_exact, GramMatrix};
use crate::hermitian::{
    hermitian_eigen_desc, invert_lower, trailing_ldl_with_tol, CMatrix, MatrixRecord,
    PosDefHermitian,
};
use crate::numeric::{ln_factorial, log_sum_exp};
use crate::okounkov::{LatticeBasis, MultiIndex};

/// `H_{m}` for the endpoint `φ_P`, with `(√-1∂∂̄φ)ⁿ/n! = 2ⁿ det ∂∂̄φ dλ`.
///
/// This equals `(2π)ⁿ det P` times the Gram matrix of [`gram_exact`].
pub fn hilb_endpoint_gram(p: &PosDefHermitian, m: u32) -> Result<GramMatrix> {
    let n = p.dim() as i32;
    Ok(gram_exact(p, m)?.scaled((2.0 * PI).powi(n) * p.det()))
}

/// Sections `s_j = Σ_K sections[(j, K)] z^K` over the lex monomial basis and
/// their exponents `λ_j`, sorted descending.
#[derive(Debug, Clone)]
pub struct BergmanSpectrum {
    basis: LatticeBasis,
    sections: CMatrix,
    lambdas: Vec<f64>,
}

impl BergmanSpectrum {
    pub fn degree(&self) -> u32 {
        self.basis.degree()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn sections(&self) -> &CMatrix {
        &self.sections
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// `ln |s_j(z)|²` for every section.
    pub fn ln_section_moduli(&self, z: &ChartPoint) -> Result<Vec<f64>> {
        if z.dim() != self.dim() {
            return Err(Error::invalid(format!(
                "chart point has {} coordinates, spectrum lives on ℙ^{}",
                z.dim(),
                self.dim()
            )));
        }
        let lift = z.lift();
        let monomials: Vec<Complex64> = self
            .basis
            .points()
            .iter()
            .map(|idx| {
                idx.exponents()
                    .iter()
                    .zip(&lift)
                    .fold(Complex64::new(1.0, 0.0), |acc, (&k, zj)| acc * zj.powu(k))
            })
            .collect();
        Ok((0..self.sections.nrows())
            .map(|j| {
                let s: Complex64 = self
                    .sections
                    .row(j)
                    .iter()
                    .zip(&monomials)
                    .map(|(c, mono)| c * mono)
                    .sum();
                s.norm_sqr().ln()
            })
            .collect())
    }
}

#[derive(Serialize)]
struct SpectrumRecord<'a> {
    n: usize,
    m: u32,
    basis: &'a [MultiIndex],
    lambdas: &'a [f64],
    sections: MatrixRecord,
}

impl Serialize for BergmanSpectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpectrumRecord {
            n: self.dim(),
            m: self.degree(),
            basis: self.basis.points(),
            lambdas: &self.lambdas,
            sections: MatrixRecord::from(&self.sections),
        }
        .serialize(s)
    }
}

/// Simultaneous diagonalisation of `(H_{m,0}, H_{m,1})`.
pub fn bergman_spectrum(p0: &PosDefHermitian, p1: &PosDefHermitian, m: u32) -> Result<BergmanSpectrum> {
    if p0.order() != p1.order() {
        return Err(Error::invalid(format!(
            "orders differ: {} vs {}",
            p0.order(),
            p1.order()
        )));
    }
    let h0 = hilb_endpoint_gram(p0, m)?;
    let h1 = hilb_endpoint_gram(p1, m)?;
    // H0 = C*C with C lower triangular. Pivots can span many decades, so
    // the factorisation only asks for positivity.
    let (mut c, d) = trailing_ldl_with_tol(h0.entries(), 0.0)?;
    for (i, di) in d.iter().enumerate() {
        let s = di.sqrt();
        for j in 0..=i {
            c[(i, j)] *= s;
        }
    }
    let c_inv = invert_lower(&c);
    let whitened = c_inv.adjoint() * h1.entries() * &c_inv;
    let (sigma, v) = hermitian_eigen_desc(&whitened);
    if let Some(bad) = sigma.iter().find(|&&s| !(s > 0.0)) {
        return Err(Error::definiteness(format!(
            "endpoint inner products give eigenvalue {bad:.3e}"
        )));
    }
    // σ descending means λ = -ln σ ascending; flip both.
    let size = sigma.len();
    let mut lambdas = Vec::with_capacity(size);
    let mut x = CMatrix::zeros(size, size);
    let rows = v.adjoint() * c_inv.adjoint();
    for (dst, src) in (0..size).rev().enumerate() {
        lambdas.push(-sigma[src].ln());
        x.set_row(dst, &rows.row(src));
    }
    Ok(BergmanSpectrum {
        basis: h0.basis().clone(),
        sections: x,
        lambdas,
    })
}

/// `φ_m(t, z) = (1/m) log Σ_j e^{λ_j t} |s_j(z)|²`.
pub fn bergman_geodesic_eval(spec: &BergmanSpectrum, t: f64, z: &ChartPoint) -> Result<f64> {
    let terms: Vec<f64> = spec
        .ln_section_moduli(z)?
        .iter()
        .zip(&spec.lambdas)
        .map(|(ln_s, l)| l * t + ln_s)
        .collect();
    Ok(log_sum_exp(&terms) / f64::from(spec.degree()))
}

/// `(1/m) log((n+m)!/m!) − (n/m) log 2π`, the gap `φ_m − φ` for diagonal endpoints.
pub fn bergman_constant(n: usize, m: u32) -> f64 {
    let mf = f64::from(m);
    (ln_factorial(m + n as u32) - ln_factorial(m)) / mf - n as f64 / mf * (2.0 * PI).ln()
}

/// Sample grid for comparing potentials on `[0,1] × {|z| ≤ z_max}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartGrid {
    pub t_count: usize,
    pub z_count: usize,
    pub z_max: f64,
}

impl Default for ChartGrid {
    fn default() -> Self {
        Self {
            t_count: 11,
            z_count: 11,
            z_max: 3.0,
        }
    }
}

impl ChartGrid {
    pub fn times(&self) -> Vec<f64> {
        let last = (self.t_count - 1).max(1) as f64;
        (0..self.t_count).map(|k| k as f64 / last).collect()
    }

    /// Points of norm `z_max·l/(z_count−1)`, with deterministic phases that
    /// differ between coordinates.
    pub fn points(&self, n: usize) -> Vec<ChartPoint> {
        let last = (self.z_count - 1).max(1) as f64;
        let scale = 1.0 / (n as f64).sqrt();
        (0..self.z_count)
            .map(|l| {
                let rho = self.z_max * l as f64 / last;
                let z = (0..n)
                    .map(|j| {
                        let theta = l as f64 * 2.399963 + j as f64 * 1.1;
                        Complex64::from_polar(rho * scale, theta)
                    })
                    .collect();
                ChartPoint::new(z).expect("finite grid")
            })
            .collect()
    }

    fn check(&self) -> Result<()> {
        if self.t_count < 1 || self.z_count < 1 || !(self.z_max >= 0.0) || !self.z_max.is_finite() {
            return Err(Error::invalid("grid needs positive counts and a finite radius"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactnessReport {
    pub n: usize,
    pub m: u32,
    /// `max |φ_m − φ_{e^{tD}} − constant|` over the grid.
    pub defect: f64,
    /// The closed-form constant.
    pub constant: f64,
    /// `φ_m − φ_{e^{tD}}` at `t = 0`, `z = 0`.
    pub observed_constant: f64,
}

/// Compares the Bergman geodesic from `I` to `e^D` with `φ_{e^{tD}}`.
pub fn bergman_exactness_defect(d: &[f64], m: u32, grid: &ChartGrid) -> Result<ExactnessReport> {
    grid.check()?;
    if d.len() < 2 || d.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("D needs n+1 ≥ 2 finite entries"));
    }
    let n = d.len() - 1;
    let p0 = PosDefHermitian::identity(n + 1);
    let p1 = PosDefHermitian::from_real_diagonal(&d.iter().map(|x| x.exp()).collect::<Vec<_>>())?;
    let spec = bergman_spectrum(&p0, &p1, m)?;
    let constant = bergman_constant(n, m);
    let points = grid.points(n);
    let gap = |t: f64, z: &ChartPoint| -> Result<f64> {
        let pt = PosDefHermitian::from_real_diagonal(&d.iter().map(|x| (t * x).exp()).collect::<Vec<_>>())?;
        Ok(bergman_geodesic_eval(&spec, t, z)? - fs_eval(&pt, z)?)
    };
    let defects = grid
        .times()
        .par_iter()
        .map(|&t| {
            points
                .iter()
                .map(|z| gap(t, z).map(|g| (g - constant).abs()))
                .try_fold(0.0f64, |acc, g| g.map(|g| acc.max(g)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactnessReport {
        n,
        m,
        defect: defects.into_iter().fold(0.0, f64::max),
        constant,
        observed_constant: gap(0.0, &ChartPoint::origin(n))?,
    })
}
