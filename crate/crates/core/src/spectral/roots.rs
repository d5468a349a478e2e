//! Simultaneous root iteration (Aberth-Ehrlich) for real polynomials with
//! simple roots.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 2000;
const MAX_RESTARTS: usize = 8;
const STEP_TOLERANCE: f64 = 1e-14;

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Upper bound on root moduli (Cauchy).
fn root_bound(monic: &[f64]) -> f64 {
    let d = monic.len() - 1;
    1.0 + monic[..d].iter().map(|c| c.abs()).fold(0.0, f64::max)
}

/// All complex roots of the polynomial with coefficients `coeffs` (lowest
/// degree first). Roots are expected to be simple; restarts perturb the
/// starting circle when the iteration stagnates.
pub fn aberth_roots(coeffs: &[f64], rng: &mut StdRng) -> Result<Vec<Complex64>> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[d];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    if d == 1 {
        return Ok(vec![Complex64::new(-monic[0], 0.0)]);
    }
    let radius = root_bound(&monic);

    for restart in 0..=MAX_RESTARTS {
        let jitter = if restart == 0 { 0.0 } else { rng.gen::<f64>() };
        let r0 = radius * (0.5 + 0.5 * rng.gen::<f64>());
        let mut z: Vec<Complex64> = (0..d)
            .map(|k| {
                let angle = (2.0 * std::f64::consts::PI * (k as f64 + 0.25 + jitter)) / d as f64 + 0.4;
                Complex64::from_polar(r0, angle)
            })
            .collect();

        for _ in 0..MAX_ITERATIONS {
            let mut max_step: f64 = 0.0;
            for k in 0..d {
                let (p, dp) = horner(&monic, z[k]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / dp;
                let repulsion: Complex64 = (0..d).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
                if !step.re.is_finite() || !step.im.is_finite() {
                    max_step = f64::INFINITY;
                    break;
                }
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
            }
            if !max_step.is_finite() {
                break;
            }
            if max_step < STEP_TOLERANCE {
                return Ok(polish(&monic, z));
            }
        }
        // the step tolerance can sit below rounding noise; accept when the
        // backward error is at rounding level
        if z.iter().all(|r| r.re.is_finite() && r.im.is_finite())
            && z.iter().all(|&r| backward_error(&monic, r) < 1e-12)
        {
            return Ok(polish(&monic, z));
        }
    }
    Err(Error::NonConvergence("polynomial root iteration".into()))
}

/// `|p(z)| / sum |c_k| |z|^k`.
fn backward_error(monic: &[f64], z: Complex64) -> f64 {
    let (p, _) = horner(monic, z);
    let scale: f64 = monic.iter().rev().fold(0.0, |acc, c| acc * z.norm() + c.abs());
    p.norm() / scale.max(f64::MIN_POSITIVE)
}

fn polish(monic: &[f64], mut z: Vec<Complex64>) -> Vec<Complex64> {
    for root in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(monic, *root);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if step.norm() < 1e-17 * root.norm().max(1.0) {
                break;
            }
            *root -= step;
        }
        if root.im.abs() < 1e-13 * root.norm().max(1.0) {
            root.im = 0.0;
        }
    }
    z
}
