use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_GD_DEGREE: usize = 20;

/// Numerator `G_d` in `sum_{l>=0} l^d z^l = G_d(z) / (1 - z)^(d+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GdPolynomial {
    pub d: usize,
    /// Lowest degree first.
    #[serde(serialize_with = "crate::report::serialize_bigints")]
    pub coefficients: Vec<BigInt>,
}

impl GdPolynomial {
    pub fn eval(&self, z: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn value_at_one(&self) -> BigInt {
        self.coefficients.iter().sum()
    }

    /// `G_d(z) / (1 - z)^(d+1)`, valid for `|z| < 1`.
    pub fn series_value(&self, z: f64) -> f64 {
        self.eval(z) / (1.0 - z).powi(self.d as i32 + 1)
    }
}

/// `G_0 = 1`, `G_{d+1}(z) = z (1 - z) G_d'(z) + (d + 1) z G_d(z)`.
pub fn gd_polynomial(d: usize) -> Result<GdPolynomial> {
    if d > MAX_GD_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "d = {d} exceeds the supported maximum {MAX_GD_DEGREE}"
        )));
    }
    let mut g = vec![BigInt::one()];
    for k in 0..d {
        let mut next = vec![BigInt::zero(); g.len() + 1];
        for (j, c) in g.iter().enumerate() {
            // z(1-z) * j c z^{j-1} = j c z^j - j c z^{j+1}
            if j > 0 {
                let jc = c * BigInt::from(j);
                next[j] += &jc;
                next[j + 1] -= &jc;
            }
            // (k+1) z * c z^j
            next[j + 1] += c * BigInt::from(k + 1);
        }
        while next.len() > 1 && next.last().is_some_and(Zero::is_zero) {
            next.pop();
        }
        g = next;
    }
    Ok(GdPolynomial { d, coefficients: g })
}
