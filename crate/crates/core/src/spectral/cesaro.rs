use crate::error::{Error, Result};
use crate::graph::AdjacencyMatrix;

use super::perron::PerronData;

/// `(1/k) * sum_{l=0..=k} rho^{-l} B^l`, which tends to `w v^T` for an
/// irreducible block.
pub fn cesaro_average(block: &AdjacencyMatrix, pd: &PerronData, k: usize) -> Result<Vec<Vec<f64>>> {
    if pd.rho == 0.0 {
        return Err(Error::ZeroRho);
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = block.size();
    let b: Vec<Vec<f64>> = block
        .as_f64_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x / pd.rho).collect())
        .collect();
    let mut power: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    let mut sum = power.clone();
    for _ in 0..k {
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for l in 0..n {
                let p = power[i][l];
                if p == 0.0 {
                    continue;
                }
                for j in 0..n {
                    next[i][j] += p * b[l][j];
                }
            }
        }
        power = next;
        for (srow, prow) in sum.iter_mut().zip(&power) {
            for (s, p) in srow.iter_mut().zip(prow) {
                *s += p;
            }
        }
    }
    let kf = k as f64;
    Ok(sum
        .into_iter()
        .map(|r| r.into_iter().map(|x| x / kf).collect())
        .collect())
}

/// `max |average(k) - w v^T|` over all entries.
pub fn cesaro_deviation(block: &AdjacencyMatrix, pd: &PerronData, k: usize) -> Result<f64> {
    let avg = cesaro_average(block, pd, k)?;
    let proj = pd.projector();
    Ok(avg
        .iter()
        .zip(&proj)
        .flat_map(|(a, p)| a.iter().zip(p).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max))
}
