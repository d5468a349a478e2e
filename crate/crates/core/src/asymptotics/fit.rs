//! Small dense least-squares polynomial fits (Householder QR).

/// Least-squares coefficients `c` (lowest degree first) minimising
/// `sum (y_k - sum_j c_j x_k^j)^2`, and the root-mean-square residual.
///
/// Returns `None` when there are fewer points than coefficients or the
/// design matrix is rank deficient.
pub fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Option<(Vec<f64>, f64)> {
    let m = xs.len();
    let n = degree + 1;
    if m < n || ys.len() != m {
        return None;
    }
    // column-major design matrix
    let mut a: Vec<Vec<f64>> = (0..n).map(|j| xs.iter().map(|x| x.powi(j as i32)).collect()).collect();
    let mut b = ys.to_vec();

    for k in 0..n {
        let norm = a[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for col in a.iter_mut().skip(k) {
            let dot: f64 = v.iter().zip(&col[k..]).map(|(p, q)| p * q).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vi) in col[k..].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
        let dot: f64 = v.iter().zip(&b[k..]).map(|(p, q)| p * q).sum();
        let f = 2.0 * dot / vnorm2;
        for (c, vi) in b[k..].iter_mut().zip(&v) {
            *c -= f * vi;
        }
    }

    let scale = a
        .iter()
        .map(|col| col.iter().map(|x| x.abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    let mut coeffs = vec![0.0; n];
    for k in (0..n).rev() {
        let diag = a[k][k];
        if diag.abs() <= 1e-13 * scale {
            return None;
        }
        let s: f64 = ((k + 1)..n).map(|j| a[j][k] * coeffs[j]).sum();
        coeffs[k] = (b[k] - s) / diag;
    }
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let fx = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            (y - fx).powi(2)
        })
        .sum();
    Some((coeffs, (rss / m as f64).sqrt()))
}
