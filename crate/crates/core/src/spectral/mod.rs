//! Spectral data of strongly connected blocks: Perron eigenpairs, full
//! spectra of small blocks, Cesaro averages and the `G_d` numerators.

mod cesaro;
mod gd;
mod perron;
pub mod poly;
mod roots;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::AdjacencyMatrix;

pub use cesaro::{cesaro_average, cesaro_deviation};
pub use gd::{gd_polynomial, GdPolynomial, MAX_GD_DEGREE};
pub use perron::{perron, PerronData, PERRON_MAX_ITERATIONS, PERRON_TOLERANCE};
pub use poly::{characteristic_polynomial, have_common_factor, IntPoly};
pub use roots::aberth_roots;

/// Largest block handled by [`spectrum_small`].
pub const SPECTRUM_MAX_SIZE: usize = 16;
/// Relative tolerance for treating two Perron eigenvalues as equal.
pub const RHO_TIE_TOLERANCE: f64 = 1e-9;
/// Blocks above this size skip the exact common-factor confirmation.
pub const EXACT_TIE_MAX_SIZE: usize = 64;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    /// Eigenvalues with multiplicity, sorted by decreasing modulus then
    /// argument.
    #[serde(serialize_with = "crate::report::serialize_complex")]
    pub eigenvalues: Vec<Complex64>,
    pub method: String,
    pub seed: u64,
}

impl SpectrumEstimate {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues whose modulus is within `tol` of `rho`.
    pub fn peripheral(&self, rho: f64, tol: f64) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|z| (z.norm() - rho).abs() <= tol)
            .collect()
    }
}

pub fn spectrum_small(block: &AdjacencyMatrix) -> Result<SpectrumEstimate> {
    spectrum_small_seeded(block, DEFAULT_SEED)
}

/// All eigenvalues of a block of size at most 16: exact characteristic
/// polynomial, exact square-free splitting, then root iteration on each
/// square-free factor.
pub fn spectrum_small_seeded(block: &AdjacencyMatrix, seed: u64) -> Result<SpectrumEstimate> {
    if block.size() > SPECTRUM_MAX_SIZE {
        return Err(Error::InvalidArgument(format!(
            "block of size {} exceeds {SPECTRUM_MAX_SIZE}",
            block.size()
        )));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let p = characteristic_polynomial(block);
    let mut eigenvalues = Vec::with_capacity(block.size());
    for (factor, multiplicity) in p.to_rational().square_free() {
        let roots = aberth_roots(&factor.to_f64(), &mut rng)?;
        for z in roots {
            eigenvalues.extend(std::iter::repeat_n(z, multiplicity));
        }
    }
    eigenvalues.sort_by(|a, b| {
        b.norm()
            .partial_cmp(&a.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.arg().partial_cmp(&b.arg()).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(SpectrumEstimate {
        eigenvalues,
        method: "faddeev-leverrier+yun+aberth".into(),
        seed,
    })
}

/// Decides whether two blocks share their Perron eigenvalue: the floating
/// values must agree to `rel_tol` and, for blocks small enough, the exact
/// characteristic polynomials must have a common factor.
pub fn rho_equal(a: &AdjacencyMatrix, rho_a: f64, b: &AdjacencyMatrix, rho_b: f64, rel_tol: f64) -> bool {
    let scale = rho_a.abs().max(rho_b.abs());
    if scale == 0.0 {
        return true;
    }
    if (rho_a - rho_b).abs() > rel_tol * scale {
        return false;
    }
    if a.size() > EXACT_TIE_MAX_SIZE || b.size() > EXACT_TIE_MAX_SIZE {
        return true;
    }
    have_common_factor(&characteristic_polynomial(a), &characteristic_polynomial(b))
}
