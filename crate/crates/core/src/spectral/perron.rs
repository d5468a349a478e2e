//! Perron eigenvalue and eigenvectors of a single strongly connected block.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::AdjacencyMatrix;

pub const PERRON_TOLERANCE: f64 = 1e-12;
pub const PERRON_MAX_ITERATIONS: usize = 100_000;

/// Spectral radius with left (`v`) and right (`w`) Perron vectors.
///
/// `v` is scaled to unit 1-norm and `w` so that `w . v = 1`. A trivial
/// block (one node, no self-loop) has `rho = 0` and empty vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronData {
    pub rho: f64,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub normalized: bool,
    pub iterations: usize,
    pub residual: f64,
}

impl PerronData {
    fn trivial() -> Self {
        Self {
            rho: 0.0,
            v: Vec::new(),
            w: Vec::new(),
            normalized: false,
            iterations: 0,
            residual: 0.0,
        }
    }

    /// `w v^T`, the limit of the Cesaro average of `B^l / rho^l`.
    pub fn projector(&self) -> Vec<Vec<f64>> {
        self.w
            .iter()
            .map(|wi| self.v.iter().map(|vj| wi * vj).collect())
            .collect()
    }
}

/// Power iteration with the shifted matrix `M = B + I`, which is primitive
/// whenever `B` is irreducible. Returns `(lambda, x, iterations)` where `x`
/// has unit 1-norm and satisfies `x M ~ lambda x` (`left`) or
/// `M x ~ lambda x`.
fn shifted_power_iteration(b: &[Vec<f64>], left: bool) -> Result<(f64, Vec<f64>, usize, f64)> {
    let n = b.len();
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    for it in 1..=PERRON_MAX_ITERATIONS {
        for (j, yj) in y.iter_mut().enumerate() {
            *yj = x[j];
        }
        if left {
            for (i, row) in b.iter().enumerate() {
                let xi = x[i];
                if xi == 0.0 {
                    continue;
                }
                for (j, &bij) in row.iter().enumerate() {
                    y[j] += xi * bij;
                }
            }
        } else {
            for (i, row) in b.iter().enumerate() {
                y[i] += row.iter().zip(&x).map(|(a, c)| a * c).sum::<f64>();
            }
        }
        let lambda: f64 = y.iter().sum();
        let residual = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| (yi - lambda * xi).abs())
            .fold(0.0, f64::max)
            / lambda;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / lambda;
        }
        if residual < PERRON_TOLERANCE {
            return Ok((lambda, x, it, residual));
        }
    }
    Err(Error::NonConvergence(format!(
        "power iteration did not reach {PERRON_TOLERANCE:e} in {PERRON_MAX_ITERATIONS} iterations"
    )))
}

/// Perron data of one strongly connected block.
///
/// `irreducible = false` declares a trivial singleton; the block must then
/// be the 1x1 zero matrix.
pub fn perron(block: &AdjacencyMatrix, irreducible: bool) -> Result<PerronData> {
    let n = block.size();
    if !irreducible {
        if n == 1 && block.get(0, 0) == 0 {
            return Ok(PerronData::trivial());
        }
        return Err(Error::InvalidArgument(
            "only a 1x1 zero block may be declared trivial".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("empty block".into()));
    }
    if n == 1 {
        let m = block.get(0, 0);
        if m == 0 {
            return Ok(PerronData::trivial());
        }
        return Ok(PerronData {
            rho: m as f64,
            v: vec![1.0],
            w: vec![1.0],
            normalized: true,
            iterations: 0,
            residual: 0.0,
        });
    }
    let b = block.as_f64_rows();
    let (lambda_l, v, it_l, _) = shifted_power_iteration(&b, true)?;
    let (_, mut w, it_r, _) = shifted_power_iteration(&b, false)?;
    let rho = lambda_l - 1.0;
    if v.iter().chain(&w).any(|&x| x <= 0.0) {
        return Err(Error::NonConvergence(
            "Perron vector is not strictly positive; block is not irreducible".into(),
        ));
    }
    let dot: f64 = w.iter().zip(&v).map(|(a, c)| a * c).sum();
    for wi in w.iter_mut() {
        *wi /= dot;
    }
    // unshifted residual ||vB - rho v||_inf
    let residual = (0..n)
        .map(|j| {
            let vb: f64 = (0..n).map(|i| v[i] * b[i][j]).sum();
            (vb - rho * v[j]).abs()
        })
        .fold(0.0, f64::max);
    Ok(PerronData {
        rho,
        v,
        w,
        normalized: true,
        iterations: it_l.max(it_r),
        residual,
    })
}
