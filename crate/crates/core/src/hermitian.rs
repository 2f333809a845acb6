//! Complex Hermitian matrix algebra.
//!
//! Everything here is organised around *trailing* principal minors: for a
//! matrix `P` of order `n+1`, `detᵢ(P)` is the determinant of the block
//! `P[i.., i..]` and `μᵢ(P) = detᵢ(P)/detᵢ₊₁(P)`. The matching factorisation
//! is `P = L* diag(μ) L` with `L` lower unitriangular, obtained by
//! eliminating from the last row and column upwards.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::max_second_difference;

pub type CMatrix = DMatrix<Complex64>;

const HERMITIAN_TOL: f64 = 1e-12;
/// Elimination pivots at or below this fraction of the largest diagonal entry
/// are treated as a loss of definiteness.
const PIVOT_TOL: f64 = 1e-12;
const SINGULAR_TOL: f64 = 1e-12;

/// `(M + M*)/2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).unscale(2.0)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Row-sum norm ‖·‖∞.
pub fn inf_norm(m: &CMatrix) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::invalid(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let tol = HERMITIAN_TOL * max_abs(m).max(1.0);
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            let d = m[(i, j)] - m[(j, i)].conj();
            if d.re.abs() > tol || d.im.abs() > tol {
                return Err(Error::invalid(format!(
                    "matrix is not Hermitian at ({i}, {j}): asymmetry {:.3e}",
                    d.norm()
                )));
            }
        }
    }
    Ok(())
}

/// Rejects matrices whose determinant is negligible against Hadamard's bound.
pub(crate) fn check_invertible(a: &CMatrix) -> Result<()> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::invalid("expected a non-empty square matrix"));
    }
    let bound: f64 = a.row_iter().map(|r| r.norm()).product();
    let det = a.clone().lu().determinant().norm();
    if !(bound > 0.0) || !(det > SINGULAR_TOL * bound) {
        return Err(Error::invalid(format!(
            "matrix is singular (|det| = {det:.3e}, Hadamard bound {bound:.3e})"
        )));
    }
    Ok(())
}

/// Trailing elimination `M = L* diag(d) L` for a Hermitian `M`.
fn trailing_ldl(m: &CMatrix) -> Result<(CMatrix, Vec<f64>)> {
    trailing_ldl_with_tol(m, PIVOT_TOL)
}

/// As [`trailing_ldl`] with a caller-chosen relative pivot threshold. Gram
/// matrices use `0.0`: their pivots legitimately span many decades.
pub(crate) fn trailing_ldl_with_tol(m: &CMatrix, rel_tol: f64) -> Result<(CMatrix, Vec<f64>)> {
    let n = m.nrows();
    let scale = (0..n).map(|i| m[(i, i)].re).fold(0.0, f64::max);
    let mut work = m.clone();
    let mut l = CMatrix::identity(n, n);
    let mut d = vec![0.0; n];
    for k in (0..n).rev() {
        let pivot = work[(k, k)].re;
        if !(pivot > rel_tol * scale) {
            return Err(Error::definiteness(format!(
                "pivot {pivot:.3e} at index {k} (scale {scale:.3e})"
            )));
        }
        d[k] = pivot;
        for j in 0..k {
            l[(k, j)] = work[(k, j)] / pivot;
        }
        for i in 0..k {
            let lki = l[(k, i)].conj() * pivot;
            for j in 0..k {
                let update = lki * l[(k, j)];
                work[(i, j)] -= update;
            }
        }
    }
    Ok((l, d))
}

/// Square complex Hermitian positive-definite matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRecord", into = "MatrixRecord")]
pub struct PosDefHermitian {
    m: CMatrix,
}

impl PosDefHermitian {
    /// Validates Hermitian symmetry and positive definiteness. The stored
    /// matrix is the exact Hermitian part of the input.
    pub fn new(m: CMatrix) -> Result<Self> {
        check_hermitian(&m)?;
        let m = hermitian_part(&m);
        trailing_ldl(&m)?;
        Ok(Self { m })
    }

    pub fn identity(order: usize) -> Self {
        assert!(order > 0, "order must be positive");
        Self {
            m: CMatrix::identity(order, order),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(v)))
    }

    /// Builds from real row-major entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("rows must form a square matrix"));
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn order(&self) -> usize {
        self.m.nrows()
    }

    /// Complex dimension `n` of the projective space `ℙⁿ` this matrix lives on.
    pub fn dim(&self) -> usize {
        self.order() - 1
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::invalid("scale factor must be positive"));
        }
        Self::new(self.m.scale(c))
    }

    /// `diag(P, a)`, appending `a` as the new last row and column.
    pub fn block_extend(&self, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::invalid("appended entry must be positive"));
        }
        let n = self.order();
        let mut m = CMatrix::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(&self.m);
        m[(n, n)] = Complex64::new(a, 0.0);
        Self::new(m)
    }

    /// Determinant as the product of the μ-invariants.
    pub fn det(&self) -> f64 {
        mu_vector(self).iter().product()
    }

    pub fn ln_det(&self) -> f64 {
        mu_vector(self).iter().map(|m| m.ln()).sum()
    }
}

/// Determinant of the trailing `(order−i)×(order−i)` block; `1` for `i = order`.
pub fn trailing_minor_det(p: &PosDefHermitian, i: usize) -> Result<f64> {
    let n = p.order();
    if i > n {
        return Err(Error::invalid(format!("minor index {i} exceeds order {n}")));
    }
    if i == n {
        return Ok(1.0);
    }
    let block = p.matrix().view((i, i), (n - i, n - i)).into_owned();
    let det = block.lu().determinant();
    if det.im.abs() > 1e-10 * det.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::Inconsistent(format!(
            "trailing minor has imaginary part {:.3e}",
            det.im
        )));
    }
    Ok(det.re)
}

/// `μᵢ(P) = detᵢ(P)/detᵢ₊₁(P)` for `0 ≤ i ≤ n`, read off the trailing LDL.
pub fn mu_vector(p: &PosDefHermitian) -> Vec<f64> {
    // Validated at construction, so elimination cannot fail here.
    trailing_ldl(p.matrix())
        .map(|(_, d)| d)
        .expect("PosDefHermitian invariant")
}

/// `P = L* diag(d) L` with `L` lower unitriangular and `d = μ(P)`.
#[derive(Debug, Clone)]
pub struct UnitriangularLdl {
    pub l: CMatrix,
    pub d: Vec<f64>,
}

impl UnitriangularLdl {
    pub fn reconstruct(&self) -> CMatrix {
        let d = nalgebra::DVector::from_iterator(
            self.d.len(),
            self.d.iter().map(|&x| Complex64::new(x, 0.0)),
        );
        hermitian_part(&(self.l.adjoint() * CMatrix::from_diagonal(&d) * &self.l))
    }
}

pub fn ldl_unitriangular(p: &PosDefHermitian) -> UnitriangularLdl {
    let (l, d) = trailing_ldl(p.matrix()).expect("PosDefHermitian invariant");
    UnitriangularLdl { l, d }
}

/// Lower-triangular `C` with positive real diagonal and `P = C* C`.
pub fn lower_cholesky(p: &PosDefHermitian) -> CMatrix {
    let UnitriangularLdl { mut l, d } = ldl_unitriangular(p);
    for (i, di) in d.iter().enumerate() {
        let s = di.sqrt();
        for j in 0..=i {
            l[(i, j)] *= s;
        }
    }
    l
}

/// `A* P A`, Hermitian-symmetrised.
pub fn congruence(p: &PosDefHermitian, a: &CMatrix) -> Result<PosDefHermitian> {
    if a.nrows() != p.order() || a.ncols() != p.order() {
        return Err(Error::invalid(format!(
            "congruence by a {}x{} matrix on order {}",
            a.nrows(),
            a.ncols(),
            p.order()
        )));
    }
    check_invertible(a)?;
    PosDefHermitian::new(hermitian_part(&(a.adjoint() * p.matrix() * a)))
}

/// Geodesic of Fubini–Study potentials `P(t) = A* e^{tD} A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PathRecord", into = "PathRecord")]
pub struct FsGeodesicPath {
    a: CMatrix,
    d: Vec<f64>,
}

impl FsGeodesicPath {
    pub fn new(a: CMatrix, d: Vec<f64>) -> Result<Self> {
        check_invertible(&a)?;
        if d.len() != a.nrows() {
            return Err(Error::invalid(format!(
                "diagonal has length {} but A has order {}",
                d.len(),
                a.nrows()
            )));
        }
        if d.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("diagonal entries must be finite"));
        }
        Ok(Self { a, d })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn order(&self) -> usize {
        self.d.len()
    }

    /// `P(t)`; fails only if roundoff destroys definiteness at extreme `t`.
    pub fn eval(&self, t: f64) -> Result<PosDefHermitian> {
        let mut scaled = self.a.clone();
        for (i, &di) in self.d.iter().enumerate() {
            let w = (t * di).exp();
            scaled.row_mut(i).scale_mut(w);
        }
        PosDefHermitian::new(hermitian_part(&(self.a.adjoint() * scaled)))
    }
}

pub fn path_eval(path: &FsGeodesicPath, t: f64) -> Result<PosDefHermitian> {
    path.eval(t)
}

/// Invert a lower-triangular matrix by forward substitution.
pub(crate) fn invert_lower(c: &CMatrix) -> CMatrix {
    let n = c.nrows();
    let mut inv = CMatrix::zeros(n, n);
    for col in 0..n {
        for i in col..n {
            let mut acc = if i == col {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            for k in col..i {
                acc -= c[(i, k)] * inv[(k, col)];
            }
            inv[(i, col)] = acc / c[(i, i)];
        }
    }
    inv
}

/// Rotate each column so its first non-negligible entry is real and positive.
fn normalize_phases(u: &mut CMatrix) {
    for mut col in u.column_iter_mut() {
        let norm = col.norm();
        if let Some(lead) = col.iter().copied().find(|z| z.norm() > 1e-8 * norm) {
            let phase = lead.conj() / lead.norm();
            for z in col.iter_mut() {
                *z *= phase;
            }
        }
    }
}

/// Eigenpairs of a Hermitian matrix, descending, phase-normalised.
pub(crate) fn hermitian_eigen_desc(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    normalize_phases(&mut vectors);
    (values, vectors)
}

/// Finds `(A, D)` with `A*A = P0` and `A* e^D A = P1`; `D` descending.
pub fn simultaneous_diagonalize(
    p0: &PosDefHermitian,
    p1: &PosDefHermitian,
) -> Result<FsGeodesicPath> {
    if p0.order() != p1.order() {
        return Err(Error::invalid(format!(
            "orders differ: {} vs {}",
            p0.order(),
            p1.order()
        )));
    }
    let c = lower_cholesky(p0);
    let c_inv = invert_lower(&c);
    let whitened = c_inv.adjoint() * p1.matrix() * &c_inv;
    let (lambda, u) = hermitian_eigen_desc(&whitened);
    if let Some(bad) = lambda.iter().find(|&&l| !(l > 0.0)) {
        return Err(Error::definiteness(format!(
            "whitened pencil has eigenvalue {bad:.3e}"
        )));
    }
    let a = u.adjoint() * c;
    FsGeodesicPath::new(a, lambda.iter().map(|l| l.ln()).collect())
}

/// `P(t) = L* e^{tK} L` with `L` lower triangular, positive real diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularDecomposition {
    pub l: CMatrix,
    pub k: Vec<f64>,
}

impl TriangularDecomposition {
    pub fn eval(&self, t: f64) -> CMatrix {
        let mut scaled = self.l.clone();
        for (i, &ki) in self.k.iter().enumerate() {
            scaled.row_mut(i).scale_mut((t * ki).exp());
        }
        hermitian_part(&(self.l.adjoint() * scaled))
    }
}

/// Outcome of [`affine_mu_decompose`]; `defects[i]` is the largest normalised
/// second difference of `t ↦ log μᵢ(P(t))` over the samples.
#[derive(Debug, Clone, PartialEq)]
pub enum MuAffineness {
    Accepted {
        decomposition: TriangularDecomposition,
        defects: Vec<f64>,
    },
    Rejected {
        defects: Vec<f64>,
    },
}

impl MuAffineness {
    pub fn is_accepted(&self) -> bool {
        matches!(self, MuAffineness::Accepted { .. })
    }

    pub fn defects(&self) -> &[f64] {
        match self {
            MuAffineness::Accepted { defects, .. } | MuAffineness::Rejected { defects } => {
                defects
            }
        }
    }
}

/// Decides whether a geodesic has the triangular form `L* e^{tK} L`, and if
/// so recovers the unique `(L, K)` with positive diagonal in `L`.
pub fn affine_mu_decompose(
    path: &FsGeodesicPath,
    sample_ts: &[f64],
    tol: f64,
) -> Result<MuAffineness> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut ts = sample_ts.to_vec();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    if ts.len() < 3 || ts.len() != sample_ts.len() {
        return Err(Error::invalid("need at least three distinct sample times"));
    }
    if !ts.contains(&0.0) || !ts.contains(&1.0) {
        return Err(Error::invalid("sample times must include 0 and 1"));
    }
    let samples = ts
        .iter()
        .map(|&t| path.eval(t))
        .collect::<Result<Vec<_>>>()?;
    let log_mus: Vec<Vec<f64>> = samples
        .iter()
        .map(|p| mu_vector(p).iter().map(|m| m.ln()).collect())
        .collect();
    let order = path.order();
    let defects: Vec<f64> = (0..order)
        .map(|i| {
            let series: Vec<f64> = log_mus.iter().map(|row| row[i]).collect();
            max_second_difference(&ts, &series)
        })
        .collect();
    if defects.iter().any(|&d| d > tol) {
        return Ok(MuAffineness::Rejected { defects });
    }

    let at = |t: f64| ts.iter().position(|&s| s == t).expect("checked above");
    let (i0, i1) = (at(0.0), at(1.0));
    let decomposition = TriangularDecomposition {
        l: lower_cholesky(&samples[i0]),
        k: (0..order)
            .map(|i| log_mus[i1][i] - log_mus[i0][i])
            .collect(),
    };
    for (t, p) in ts.iter().zip(&samples) {
        let resid = inf_norm(&(decomposition.eval(*t) - p.matrix()));
        let scale = inf_norm(p.matrix());
        if resid > tol * scale {
            return Err(Error::Inconsistent(format!(
                "log μ is affine but L* e^(tK) L misses P({t}) by {resid:.3e}"
            )));
        }
    }
    Ok(MuAffineness::Accepted {
        decomposition,
        defects,
    })
}

/// JSON form `{"order": n+1, "re": [[…]], "im": [[…]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub order: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&CMatrix> for MatrixRecord {
    fn from(m: &CMatrix) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            m.row_iter()
                .map(|r| r.iter().map(f).collect())
                .collect::<Vec<Vec<f64>>>()
        };
        Self {
            order: m.nrows(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

impl TryFrom<MatrixRecord> for CMatrix {
    type Error = Error;

    fn try_from(r: MatrixRecord) -> Result<Self> {
        let n = r.order;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|x| x.len() == n);
        if n == 0 || !shape_ok(&r.re) || !shape_ok(&r.im) {
            return Err(Error::invalid(format!(
                "matrix record does not match declared order {n}"
            )));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(r.re[i][j], r.im[i][j])
        }))
    }
}

impl From<PosDefHermitian> for MatrixRecord {
    fn from(p: PosDefHermitian) -> Self {
        MatrixRecord::from(&p.m)
    }
}

impl TryFrom<MatrixRecord> for PosDefHermitian {
    type Error = Error;

    fn try_from(r: MatrixRecord) -> Result<Self> {
        PosDefHermitian::new(CMatrix::try_from(r)?)
    }
}

/// JSON form `{"A": matrix, "D": [reals]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    #[serde(rename = "A")]
    pub a: MatrixRecord,
    #[serde(rename = "D")]
    pub d: Vec<f64>,
}

impl From<FsGeodesicPath> for PathRecord {
    fn from(p: FsGeodesicPath) -> Self {
        Self {
            a: MatrixRecord::from(&p.a),
            d: p.d,
        }
    }
}

impl TryFrom<PathRecord> for FsGeodesicPath {
    type Error = Error;

    fn try_from(r: PathRecord) -> Result<Self> {
        FsGeodesicPath::new(CMatrix::try_from(r.a)?, r.d)
    }
}
