//! Exact univariate polynomials: integer characteristic polynomials and the
//! small amount of rational-coefficient arithmetic needed for gcds and
//! square-free splitting.
//!
//! Coefficients are stored lowest degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::graph::AdjacencyMatrix;

/// Integer polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn one() -> Self {
        Self(vec![BigInt::one()])
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn to_rational(&self) -> RatPoly {
        RatPoly::new(self.0.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// `det(zI - A)` by the Faddeev-LeVerrier recurrence in exact integers.
pub fn characteristic_polynomial(a: &AdjacencyMatrix) -> IntPoly {
    let n = a.size();
    let am: Vec<Vec<BigInt>> = a
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                if am[i][l].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !m[l][j].is_zero() {
                        next[i][j] += &am[i][l] * &m[l][j];
                    }
                }
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        m = next;
        let mut trace = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                if !am[i][l].is_zero() && !m[l][i].is_zero() {
                    trace += &am[i][l] * &m[l][i];
                }
            }
        }
        let kb = BigInt::from(k);
        debug_assert!((&trace % &kb).is_zero(), "Faddeev-LeVerrier division must be exact");
        coeffs[n - k] = -(trace / kb);
    }
    IntPoly::new(coeffs)
}

/// Rational polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly(pub Vec<BigRational>);

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn monic(&self) -> RatPoly {
        match self.0.last() {
            None => self.clone(),
            Some(lead) => RatPoly(self.0.iter().map(|c| c / lead).collect()),
        }
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let len = self.0.len().max(other.0.len());
        RatPoly::new(
            (0..len)
                .map(|k| {
                    let a = self.0.get(k).cloned().unwrap_or_else(BigRational::zero);
                    let b = other.0.get(k).cloned().unwrap_or_else(BigRational::zero);
                    a - b
                })
                .collect(),
        )
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = &divisor.0[dd];
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (RatPoly(Vec::new()), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = &rem[k] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.0.iter().enumerate() {
                rem[k - dd + j] -= &c * d;
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Square-free decomposition (Yun): `self = c * prod f_k^k` with each
    /// `f_k` monic, square-free and pairwise coprime. Returns `(f_k, k)` for
    /// non-constant factors.
    pub fn square_free(&self) -> Vec<(RatPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            let b_next = b.div_rem(&a).0;
            let c_next = d.div_rem(&a).0;
            d = c_next.sub(&b_next.derivative());
            if !a.is_constant() {
                out.push((a, k));
            }
            b = b_next;
            k += 1;
        }
        out
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// True when two integer polynomials share a non-constant factor over Q.
pub fn have_common_factor(a: &IntPoly, b: &IntPoly) -> bool {
    let g = a.to_rational().gcd(&b.to_rational());
    !g.is_constant()
}

/// Evaluate an integer polynomial at an integer point.
pub fn eval_int(p: &IntPoly, x: &BigInt) -> BigInt {
    p.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Content-free sign check used by tests: leading coefficient positive.
pub fn leading_positive(p: &IntPoly) -> bool {
    p.0.last().is_some_and(|c| c.is_positive())
}
