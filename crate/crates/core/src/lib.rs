//! Chebyshev potentials of Fubini–Study metrics on projective space.
//!
//! A Fubini–Study potential `φ_P = log z*Pz` is stored as its positive-definite
//! Hermitian matrix `P`. From `P` the crate computes
//!
//! * the trailing-minor ratios `μᵢ(P)` and the Chebyshev potential
//!   `c[φ_P](α) = Σ βᵢ log(βᵢ/μᵢ)` on the standard simplex ([`chebyshev`]),
//! * Gram matrices of monomial sections and their lex-ordered Chebyshev
//!   sections, exactly or by quadrature ([`gram`]),
//! * geodesics `P(t) = A* e^{tD} A` and the test of whether `t ↦ c[φ_{P(t)}]`
//!   is affine ([`hermitian`], [`chebyshev`]),
//! * Bergman geodesics at finite level ([`bergman`]),
//! * the Aubin–Mabuchi energy by chart quadrature and in closed form ([`energy`]).
//!
//! ```
//! use chebpot::{counterexample_path, mu_vector};
//!
//! let p = counterexample_path().eval(1.0).unwrap();
//! let mu = mu_vector(&p);
//! assert!((mu[0] * 1f64.cosh() - 1.0).abs() < 1e-12);
//! ```

pub mod bergman;
pub mod chebyshev;
pub mod counterexample;
pub mod energy;
pub mod error;
pub mod fs;
pub mod gram;
pub mod hermitian;
pub mod numeric;
pub mod okounkov;
pub mod quadrature;

pub use bergman::{
    bergman_constant, bergman_exactness_defect, bergman_geodesic_eval, bergman_spectrum,
    hilb_endpoint_gram, BergmanSpectrum, ChartGrid, ExactnessReport,
};
pub use chebyshev::{
    affine_in_t_test, cheb_closed_form, cheb_finite_m, cheb_finite_m_via_gram, convergence_report,
    convexity_sample_check, midpoint_gap, toric_legendre_check, AffineTestReport,
    ChebyshevPotentialFs, ConvergenceReport, ConvexityReport, LegendreCheck, AFFINE_TOL,
};
pub use counterexample::{counterexample_report, CounterexampleReport};
pub use energy::{
    calibrate_sign, energy_affine_along_geodesic, energy_chart, energy_okounkov, energy_report,
    ChartEnergy, EnergyReport,
};
pub use error::{Error, Result};
pub use fs::{
    complex_hessian, counterexample_path, fs_eval, geodesic_from_endpoints, monge_ampere_density,
    ChartPoint,
};
pub use gram::{
    chebyshev_norms, chebyshev_section_coeffs, chebyshev_sections, gram_exact, gram_numeric,
    section_norm_closed_form, ChebyshevSection, GramMatrix, NumericGram,
};
pub use hermitian::{
    affine_mu_decompose, congruence, ldl_unitriangular, lower_cholesky, mu_vector, path_eval,
    simultaneous_diagonalize, trailing_minor_det, CMatrix, FsGeodesicPath, MatrixRecord,
    MuAffineness, PosDefHermitian, TriangularDecomposition, UnitriangularLdl,
};
pub use okounkov::{
    dim_h0, lattice_points, lex_compare, round_to_lattice, simplex_interior_contains,
    LatticeBasis, MultiIndex, SimplexPoint,
};
pub use quadrature::{QuadratureScheme, QuadratureSpec};
