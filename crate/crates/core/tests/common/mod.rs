//! Random matrices shared by the integration tests.
#![allow(dead_code)]

use chebpot::{CMatrix, FsGeodesicPath, PosDefHermitian};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `B*B + shift·I` for `B` with entries in the unit square.
pub fn spd_from_entries(order: usize, entries: &[(f64, f64)], shift: f64) -> PosDefHermitian {
    let b = CMatrix::from_fn(order, order, |i, j| {
        let (re, im) = entries[i * order + j];
        c(re, im)
    });
    let m = b.adjoint() * b + CMatrix::identity(order, order).scale(shift);
    PosDefHermitian::new(m).expect("shifted Gram matrix is positive definite")
}

pub fn random_spd(rng: &mut impl Rng, order: usize) -> PosDefHermitian {
    let entries: Vec<(f64, f64)> = (0..order * order)
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    spd_from_entries(order, &entries, 0.5)
}

pub fn random_real_spd(rng: &mut impl Rng, order: usize) -> PosDefHermitian {
    let entries: Vec<(f64, f64)> = (0..order * order)
        .map(|_| (rng.random_range(-1.0..1.0), 0.0))
        .collect();
    spd_from_entries(order, &entries, 0.5)
}

/// Lower-triangular with positive real diagonal in `[0.5, 2]`.
pub fn random_lower(rng: &mut impl Rng, order: usize) -> CMatrix {
    CMatrix::from_fn(order, order, |i, j| {
        if i == j {
            c(rng.random_range(0.5..2.0), 0.0)
        } else if i > j {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        } else {
            c(0.0, 0.0)
        }
    })
}

pub fn random_unitriangular(rng: &mut impl Rng, order: usize) -> CMatrix {
    let mut l = random_lower(rng, order);
    for i in 0..order {
        l[(i, i)] = c(1.0, 0.0);
    }
    l
}

pub fn random_path(rng: &mut impl Rng, order: usize) -> FsGeodesicPath {
    let a = CMatrix::from_fn(order, order, |i, j| {
        let diag = if i == j { 1.5 } else { 0.0 };
        c(diag + rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
    });
    let d = (0..order).map(|_| rng.random_range(-1.0..1.0)).collect();
    FsGeodesicPath::new(a, d).expect("diagonally dominant A is invertible")
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

pub fn spd_strategy(order: usize) -> impl Strategy<Value = PosDefHermitian> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), order * order)
        .prop_map(move |e| spd_from_entries(order, &e, 0.5))
}

pub fn lower_strategy(order: usize) -> impl Strategy<Value = CMatrix> {
    (
        prop::collection::vec(0.5f64..2.0, order),
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), order * order),
    )
        .prop_map(move |(diag, off)| {
            CMatrix::from_fn(order, order, |i, j| {
                if i == j {
                    c(diag[i], 0.0)
                } else if i > j {
                    c(off[i * order + j].0, off[i * order + j].1)
                } else {
                    c(0.0, 0.0)
                }
            })
        })
}
