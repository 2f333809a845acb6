//! Lattice points of the Okounkov body of `(ℙⁿ, H)` with the flag
//! `Yᵢ = V(Z₀, …, Zᵢ₋₁)`, which is the standard simplex.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ln_factorial;

/// Exponent vector `(I₀, …, Iₙ)` of the monomial `Z₀^{I₀}⋯Zₙ^{Iₙ}`.
///
/// All `n+1` entries are stored, including the one implied by the degree.
/// The derived `Ord` is lexicographic on the full vector, which agrees with
/// [`lex_compare`] whenever the degrees match.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.len() < 2 {
            return Err(Error::invalid("a multi-index on ℙⁿ needs n+1 ≥ 2 entries"));
        }
        Ok(Self(exponents))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `n`, the dimension of the projective space.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// `|I| = ΣIⱼ`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The Okounkov valuation `(I₀, …, Iₙ₋₁) ∈ ℕⁿ`.
    pub fn valuation(&self) -> &[u32] {
        &self.0[..self.0.len() - 1]
    }

    /// `ln I! = Σ ln Iⱼ!`.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&k| ln_factorial(k)).sum()
    }
}

/// Lexicographic comparison of the valuations (first `n` coordinates).
pub fn lex_compare(a: &MultiIndex, b: &MultiIndex) -> Result<Ordering> {
    if a.0.len() != b.0.len() || a.degree() != b.degree() {
        return Err(Error::invalid(format!(
            "cannot compare multi-indices of shape {}/{} and {}/{}",
            a.0.len(),
            a.degree(),
            b.0.len(),
            b.degree()
        )));
    }
    Ok(a.valuation().cmp(b.valuation()))
}

/// All degree-`m` multi-indices on `ℙⁿ`, sorted lexicographically.
pub fn lattice_points(n: usize, m: u32) -> Vec<MultiIndex> {
    fn fill(prefix: &mut Vec<u32>, n: usize, left: u32, out: &mut Vec<MultiIndex>) {
        if prefix.len() == n {
            let mut full = prefix.clone();
            full.push(left);
            out.push(MultiIndex(full));
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            fill(prefix, n, left - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(n), n, m, &mut out);
    out
}

/// `dim H⁰(ℙⁿ, mH) = C(m+n, n)`.
pub fn dim_h0(n: usize, m: u32) -> u64 {
    let n = n as u64;
    let m = u64::from(m);
    // Multiplicative form keeps every intermediate an exact binomial.
    (1..=n).fold(1u64, |acc, k| acc * (m + k) / k)
}

/// Lex-ordered monomial basis of `H⁰(ℙⁿ, mH)` with reverse lookup.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    n: usize,
    m: u32,
    points: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl LatticeBasis {
    pub fn new(n: usize, m: u32) -> Self {
        let points = lattice_points(n, m);
        let position = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Self { n, m, points, position }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[MultiIndex] {
        &self.points
    }

    pub fn index_of(&self, idx: &MultiIndex) -> Option<usize> {
        self.position.get(idx).copied()
    }
}

/// A point `α = (α₀, …, αₙ₋₁)` of the simplex `{αᵢ ≥ 0, Σαᵢ ≤ 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() || alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("simplex point needs finite coordinates"));
        }
        Ok(Self(alpha))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `1 − Σαᵢ`, the implied last barycentric coordinate.
    pub fn slack(&self) -> f64 {
        1.0 - self.0.iter().sum::<f64>()
    }

    /// `(α₀, …, αₙ₋₁, 1 − Σαᵢ)`.
    pub fn barycentric(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.push(self.slack());
        v
    }

    /// Closed-simplex membership up to `tol` on each constraint.
    pub fn in_closed_simplex(&self, tol: f64) -> bool {
        self.0.iter().all(|&a| a >= -tol) && self.slack() >= -tol
    }

    /// Convex combination `λ·self + (1−λ)·other`.
    pub fn lerp(&self, other: &SimplexPoint, lambda: f64) -> SimplexPoint {
        SimplexPoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                .collect(),
        )
    }
}

/// Default margin for interior tests.
pub const INTERIOR_EPS: f64 = 1e-6;

pub fn simplex_interior_contains(alpha: &SimplexPoint, eps: f64) -> bool {
    alpha.0.iter().all(|&a| a >= eps) && alpha.slack() >= eps
}

/// Degree-`m` multi-index nearest to `m·α` in ℓ¹ over all `n+1`
/// barycentric coordinates, searching the floor/ceil roundings of each
/// leading coordinate. Ties go to the lex-smaller valuation.
pub fn round_to_lattice(alpha: &SimplexPoint, m: u32) -> Result<MultiIndex> {
    if m == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    if !alpha.in_closed_simplex(1e-12) {
        return Err(Error::Domain(format!(
            "α = {:?} is outside the closed simplex",
            alpha.coords()
        )));
    }
    let mf = f64::from(m);
    let target: Vec<f64> = alpha.barycentric().iter().map(|a| a * mf).collect();
    let n = alpha.dim();
    let mut best: Option<(f64, Vec<u32>)> = None;
    for mask in 0u32..(1 << n) {
        let lead: Vec<u32> = (0..n)
            .map(|i| {
                let x = target[i].max(0.0);
                let v = if mask & (1 << i) == 0 { x.floor() } else { x.ceil() };
                v as u32
            })
            .collect();
        let used: u32 = lead.iter().sum();
        if used > m {
            continue;
        }
        let last = m - used;
        let dist: f64 = lead
            .iter()
            .zip(&target)
            .map(|(&a, &t)| (f64::from(a) - t).abs())
            .sum::<f64>()
            + (f64::from(last) - target[n]).abs();
        let better = match &best {
            None => true,
            Some((d, b)) => dist < *d - 1e-12 || ((dist - *d).abs() <= 1e-12 && lead < b[..n].to_vec()),
        };
        if better {
            let mut full = lead;
            full.push(last);
            best = Some((dist, full));
        }
    }
    best.map(|(_, v)| MultiIndex(v)).ok_or_else(|| {
        Error::Domain(format!("no degree-{m} lattice point near α = {:?}", alpha.coords()))
    })
}
