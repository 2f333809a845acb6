//! Gram matrices of monomial sections and their Chebyshev sections.
//!
//! For a Fubini–Study matrix `P` on `ℙⁿ` the inner product on degree-`m`
//! sections is
//!
//! ```text
//! ⟨s, t⟩ = π⁻ⁿ ∫_{ℂⁿ} s(z) conj(t(z)) (z*Pz)^{-(m+n+1)} dλ(z),
//! ```
//!
//! i.e. the weight `e^{-mφ_P}` against the Fubini–Study volume of `P` itself.
//! Monomials `z^I` are indexed in lex order of their valuation; the Chebyshev
//! section at `I` is the minimal-norm section `z^I + (lex-greater terms)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::{
    hermitian_part, invert_lower, ldl_unitriangular, mu_vector, trailing_ldl_with_tol, CMatrix,
    MatrixRecord, PosDefHermitian,
};
use crate::numeric::ln_factorial;
use crate::okounkov::{LatticeBasis, MultiIndex};
use crate::quadrature::{integrate_chart, QuadratureSpec};

/// Largest basis the exact route will assemble.
pub const MAX_BASIS: usize = 5000;

/// Hermitian positive-definite Gram matrix over the lex monomial basis,
/// `entries[(K, L)] = ⟨z^K, z^L⟩`.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    basis: LatticeBasis,
    entries: CMatrix,
}

impl GramMatrix {
    /// Validates shape, Hermitian symmetry (1e-10 relative) and positivity
    /// of every lex-ordered pivot.
    pub fn new(basis: LatticeBasis, entries: CMatrix) -> Result<Self> {
        if entries.nrows() != basis.len() || entries.ncols() != basis.len() {
            return Err(Error::invalid(format!(
                "{}x{} entries for a basis of {}",
                entries.nrows(),
                entries.ncols(),
                basis.len()
            )));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let asym = (&entries - entries.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > 1e-10 * scale {
            return Err(Error::invalid(format!("Gram matrix asymmetry {asym:.3e}")));
        }
        let entries = hermitian_part(&entries);
        trailing_ldl_with_tol(&entries, 0.0)?;
        Ok(Self { basis, entries })
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `⟨Σ aₖ z^K, Σ bₗ z^L⟩ = Σ aₖ conj(bₗ) G[K, L]`.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let n = self.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            if a[k] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut row = Complex64::new(0.0, 0.0);
            for l in 0..n {
                row += self.entries[(k, l)] * b[l].conj();
            }
            acc += a[k] * row;
        }
        acc
    }

    pub(crate) fn scaled(&self, c: f64) -> Self {
        Self {
            basis: self.basis.clone(),
            entries: self.entries.scale(c),
        }
    }
}

/// Serialised as the entries plus the lex-ordered basis.
impl Serialize for GramMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            n: usize,
            m: u32,
            basis: &'a [MultiIndex],
            entries: MatrixRecord,
        }
        Repr {
            n: self.basis.dim(),
            m: self.basis.degree(),
            basis: self.basis.points(),
            entries: MatrixRecord::from(&self.entries),
        }
        .serialize(s)
    }
}

/// A Gram matrix together with its quadrature error estimate.
#[derive(Debug, Clone)]
pub struct NumericGram {
    pub gram: GramMatrix,
    pub error_estimate: f64,
}

/// Monic minimal-norm section with leading monomial `z^I`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevSection {
    pub alpha_index: MultiIndex,
    /// Coefficients over the lex basis: exactly `1` at `I`, exactly `0` before it.
    pub coeffs: Vec<Complex64>,
    pub norm_sq: f64,
}

fn check_degree(p: &PosDefHermitian, m: u32) -> Result<LatticeBasis> {
    if m == 0 {
        return Err(Error::invalid("section degree must be positive"));
    }
    let basis = LatticeBasis::new(p.dim(), m);
    if basis.len() > MAX_BASIS {
        return Err(Error::invalid(format!(
            "basis of {} sections exceeds the cap of {MAX_BASIS}",
            basis.len()
        )));
    }
    Ok(basis)
}

/// `ln ‖t^I‖² = ln I! − ln (m+n)! − Σⱼ (Iⱼ+1) ln μⱼ`.
pub fn ln_section_norm(mu: &[f64], idx: &MultiIndex) -> f64 {
    let n = idx.dim() as u32;
    let m = idx.degree();
    idx.ln_factorial()
        - ln_factorial(m + n)
        - idx
            .exponents()
            .iter()
            .zip(mu)
            .map(|(&k, &u)| f64::from(k + 1) * u.ln())
            .sum::<f64>()
}

/// `‖t^I‖² = I! / ((m+n)! Πⱼ μⱼ(P)^{Iⱼ+1})`.
pub fn section_norm_closed_form(p: &PosDefHermitian, idx: &MultiIndex) -> Result<f64> {
    if idx.dim() != p.dim() {
        return Err(Error::invalid(format!(
            "multi-index for ℙ^{} with a matrix of order {}",
            idx.dim(),
            p.order()
        )));
    }
    if idx.degree() == 0 {
        return Err(Error::invalid("multi-index degree must be positive"));
    }
    Ok(ln_section_norm(&mu_vector(p), idx).exp())
}

/// Coefficients of `Π (Σₖ L[j,k] Zₖ)^{Iⱼ}` over the degree-|I| monomials.
fn expand_product(l: &CMatrix, idx: &MultiIndex) -> BTreeMap<Vec<u32>, Complex64> {
    let order = l.nrows();
    let mut poly: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
    poly.insert(vec![0; order], Complex64::new(1.0, 0.0));
    for (j, &power) in idx.exponents().iter().enumerate() {
        for _ in 0..power {
            let mut next = BTreeMap::new();
            for (mono, coeff) in &poly {
                for k in 0..=j {
                    let lk = l[(j, k)];
                    if lk == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut key = mono.clone();
                    key[k] += 1;
                    *next.entry(key).or_insert(Complex64::new(0.0, 0.0)) += coeff * lk;
                }
            }
            poly = next;
        }
    }
    poly
}

/// Invert a unit upper-triangular matrix by back substitution.
fn invert_unit_upper(t: &CMatrix) -> CMatrix {
    invert_lower(&t.adjoint()).adjoint()
}

/// Gram matrix of `{z^I}` from the closed-form norms of the orthogonal
/// sections `t^I = (Lz)^I`, where `P = L* diag(μ) L`.
pub fn gram_exact(p: &PosDefHermitian, m: u32) -> Result<GramMatrix> {
    let basis = check_degree(p, m)?;
    let ldl = ldl_unitriangular(p);
    let size = basis.len();
    // transition[I, K] = coefficient of z^K in t^I; unit upper triangular.
    let mut transition = CMatrix::zeros(size, size);
    for (row, idx) in basis.points().iter().enumerate() {
        for (mono, coeff) in expand_product(&ldl.l, idx) {
            let key = MultiIndex::new(mono).expect("order ≥ 2");
            let col = basis.index_of(&key).expect("expansion stays in degree m");
            transition[(row, col)] = coeff;
        }
    }
    let t_inv = invert_unit_upper(&transition);
    let mut scaled = t_inv.clone();
    for (col, idx) in basis.points().iter().enumerate() {
        let norm = ln_section_norm(&ldl.d, idx).exp();
        scaled.column_mut(col).scale_mut(norm);
    }
    let entries = hermitian_part(&(scaled * t_inv.adjoint()));
    GramMatrix::new(basis, entries)
}

/// The same Gram matrix by direct quadrature over the chart.
pub fn gram_numeric(p: &PosDefHermitian, m: u32, spec: &QuadratureSpec) -> Result<NumericGram> {
    let basis = check_degree(p, m)?;
    let n = p.dim();
    if n > 2 {
        return Err(Error::invalid("numeric Gram assembly supports n ≤ 2"));
    }
    let size = basis.len();
    let pm = p.matrix().clone();
    let power = (m as i32) + (n as i32) + 1;
    let norm = std::f64::consts::PI.powi(-(n as i32));
    let exps: Vec<Vec<u32>> = basis.points().iter().map(|i| i.exponents().to_vec()).collect();
    let res = integrate_chart(n, &spec.scheme, size * size, |z, out| {
        let mut lift = z.to_vec();
        lift.push(Complex64::new(1.0, 0.0));
        let q = crate::fs::quadratic_form(&pm, &lift);
        let w = norm * q.powi(-power);
        let mono: Vec<Complex64> = exps
            .iter()
            .map(|e| {
                e.iter()
                    .zip(&lift)
                    .fold(Complex64::new(1.0, 0.0), |acc, (&k, zj)| acc * zj.powu(k))
            })
            .collect();
        for k in 0..size {
            let a = mono[k] * w;
            for l in 0..size {
                out[k * size + l] = a * mono[l].conj();
            }
        }
    })?;
    spec.check(res.error)?;
    let entries = CMatrix::from_row_slice(size, size, &res.values);
    Ok(NumericGram {
        gram: GramMatrix::new(basis, entries)?,
        error_estimate: res.error,
    })
}

/// `G = L* D L` in lex order together with `L⁻¹`.
fn lex_factor(g: &GramMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let (l, d) = trailing_ldl_with_tol(g.entries(), 0.0)?;
    Ok((d, invert_lower(&l)))
}

/// Squared norms of the Chebyshev sections, in lex order.
pub fn chebyshev_norms(g: &GramMatrix) -> Result<Vec<f64>> {
    trailing_ldl_with_tol(g.entries(), 0.0).map(|(_, d)| d)
}

fn section_from_factor(g: &GramMatrix, d: &[f64], l_inv: &CMatrix, pos: usize) -> ChebyshevSection {
    // Rows of (L⁻¹)* are the Chebyshev coefficient vectors.
    let size = g.len();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); size];
    coeffs[pos] = Complex64::new(1.0, 0.0);
    for (k, c) in coeffs.iter_mut().enumerate().skip(pos + 1) {
        *c = l_inv[(k, pos)].conj();
    }
    ChebyshevSection {
        alpha_index: g.basis().points()[pos].clone(),
        coeffs,
        norm_sq: d[pos],
    }
}

pub fn chebyshev_section_coeffs(g: &GramMatrix, idx: &MultiIndex) -> Result<ChebyshevSection> {
    let pos = g.basis().index_of(idx).ok_or_else(|| {
        Error::invalid(format!("{:?} is not in the degree-{} basis", idx.exponents(), g.basis().degree()))
    })?;
    let (d, l_inv) = lex_factor(g)?;
    Ok(section_from_factor(g, &d, &l_inv, pos))
}

/// Every Chebyshev section of the basis, in lex order.
pub fn chebyshev_sections(g: &GramMatrix) -> Result<Vec<ChebyshevSection>> {
    let (d, l_inv) = lex_factor(g)?;
    Ok((0..g.len())
        .map(|pos| section_from_factor(g, &d, &l_inv, pos))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureScheme;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn diag_of(g: &GramMatrix) -> Vec<f64> {
        (0..g.len()).map(|i| g.entries()[(i, i)].re).collect()
    }

    #[test]
    fn identity_degree_one() {
        let g = gram_exact(&PosDefHermitian::identity(2), 1).unwrap();
        assert_eq!(g.len(), 2);
        for i in 0..2 {
            assert!((g.entries()[(i, i)].re - 0.5).abs() < 1e-15);
        }
        assert!(g.entries()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn diagonal_matrices_give_diagonal_grams() {
        let d = [2.0, 0.5, 3.0];
        let p = PosDefHermitian::from_real_diagonal(&d).unwrap();
        let g = gram_exact(&p, 3).unwrap();
        for (pos, idx) in g.basis().points().iter().enumerate() {
            let e = idx.exponents();
            let fact: f64 = e.iter().map(|&k| (1..=k).product::<u32>() as f64).product();
            let denom: f64 = 120.0 * e.iter().zip(&d).map(|(&k, &x)| x.powi(k as i32 + 1)).product::<f64>();
            assert!((g.entries()[(pos, pos)].re - fact / denom).abs() < 1e-15);
            for other in 0..g.len() {
                if other != pos {
                    assert_eq!(g.entries()[(pos, other)], Complex64::new(0.0, 0.0));
                }
            }
        }
        assert_eq!(chebyshev_norms(&g).unwrap(), diag_of(&g));
    }

    #[test]
    fn closed_form_norms() {
        let i2 = PosDefHermitian::identity(2);
        assert!((section_norm_closed_form(&i2, &mi(&[0, 1])).unwrap() - 0.5).abs() < 1e-15);
        let i3 = PosDefHermitian::identity(3);
        assert!((section_norm_closed_form(&i3, &mi(&[1, 1, 0])).unwrap() - 1.0 / 24.0).abs() < 1e-15);
        let d = PosDefHermitian::from_real_diagonal(&[2.0, 1.0]).unwrap();
        assert!((section_norm_closed_form(&d, &mi(&[1, 0])).unwrap() - 0.125).abs() < 1e-15);
        assert!(section_norm_closed_form(&d, &mi(&[1, 0, 0])).is_err());
    }

    #[test]
    fn numeric_diagonal_example() {
        let p = PosDefHermitian::from_real_diagonal(&[2.0, 1.0]).unwrap();
        let spec = QuadratureSpec::new(QuadratureScheme::product(200, 64)).with_tol(1e-8);
        let g = gram_numeric(&p, 1, &spec).unwrap();
        // Basis (0,1), (1,0): norms 1/(2!·2·1) and 1/(2!·4·1).
        let diag = diag_of(&g.gram);
        assert!((diag[0] - 0.25).abs() < 1e-10);
        assert!((diag[1] - 0.125).abs() < 1e-10);
    }

    #[test]
    fn coarse_scheme_trips_tolerance() {
        let p = PosDefHermitian::identity(2);
        let spec = QuadratureSpec::new(QuadratureScheme::product(8, 4)).with_tol(1e-12);
        assert!(matches!(gram_numeric(&p, 2, &spec), Err(Error::Accuracy(_))));
    }

    #[test]
    fn sections_of_diagonal_gram_are_indicators() {
        let p = PosDefHermitian::from_real_diagonal(&[1.5, 0.7]).unwrap();
        let g = gram_exact(&p, 3).unwrap();
        let s = chebyshev_section_coeffs(&g, &mi(&[1, 2])).unwrap();
        let pos = g.basis().index_of(&mi(&[1, 2])).unwrap();
        for (k, c) in s.coeffs.iter().enumerate() {
            let expected = if k == pos { 1.0 } else { 0.0 };
            assert_eq!(*c, Complex64::new(expected, 0.0));
        }
        assert!(chebyshev_section_coeffs(&g, &mi(&[1, 1])).is_err());
    }
}
