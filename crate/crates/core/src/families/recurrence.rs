//! Monic polynomials through `P_{n+1}(x) = (x - a_n) P_n(x) - b_n P_{n-1}(x)`.

use super::{FamilySpec, Params};
use crate::error::Result;
use crate::numerics::Scalar;

/// Recurrence shifts `a_k` and norm ratios `b_k = d_k² / d_{k-1}²`
/// (`b_0 = 0`) for degrees `0..len`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceCoeffs {
    pub a: Vec<Scalar>,
    pub b: Vec<Scalar>,
}

impl FamilySpec {
    /// Coefficient `(a_k, b_k)` of the monic three-term recurrence.
    pub fn recurrence_coeff(&self, k: u32) -> (Scalar, Scalar) {
        let kk = i64::from(k);
        let ks = Scalar::from(k);
        match &self.params {
            Params::Charlier { mu } => (&ks + mu, &ks * mu),
            Params::Meixner { gamma, mu } => {
                let q = Scalar::one() - mu;
                let a = (&ks + &((gamma + kk) * mu)) / &q;
                let b = &ks * &(gamma + (kk - 1)) * mu / q.square();
                (a, b)
            }
            Params::Kravchuk { p, size } => {
                let big = i64::from(*size);
                let q = Scalar::one() - p;
                let a = p * (big - kk) + &ks * &q;
                let b = &ks * p * q * (big + 1 - kk);
                (a, b)
            }
            Params::Hahn { alpha, beta, size } => hahn_coeff(beta, alpha, i64::from(*size) - 1, kk),
        }
    }

    /// Recurrence coefficients for degrees `0..=n`.
    pub fn recurrence(&self, n: u32) -> Result<RecurrenceCoeffs> {
        self.check_degree(n)?;
        let (a, b) = (0..=n).map(|k| self.recurrence_coeff(k)).unzip();
        Ok(RecurrenceCoeffs { a, b })
    }

    /// Monic `P_n(x)`.
    pub fn eval_poly(&self, n: u32, x: &Scalar) -> Result<Scalar> {
        Ok(Polynomials::new(self, n)?.eval(x))
    }

    /// `ΔP_n(x) = P_n(x+1) - P_n(x)`.
    pub fn forward_diff(&self, n: u32, x: &Scalar) -> Result<Scalar> {
        let polys = Polynomials::new(self, n)?;
        Ok(polys.forward_diff(x))
    }

    /// `∇P_n(x) = P_n(x) - P_n(x-1)`.
    pub fn backward_diff(&self, n: u32, x: &Scalar) -> Result<Scalar> {
        let polys = Polynomials::new(self, n)?;
        Ok(polys.eval(x) - polys.eval(&(x - 1)))
    }
}

/// Hahn `Q_n(x; a, b, M)` recurrence in monic form, weight
/// `C(a+x, x) C(b+M-x, M-x)` on `0..=M`.
fn hahn_coeff(a: &Scalar, b: &Scalar, m: i64, k: i64) -> (Scalar, Scalar) {
    let s = a + b;
    let up = |k: i64| -> Scalar {
        if k == 0 {
            return (a + 1) * m / (&s + 2);
        }
        let t = &s + 2 * k;
        (&s + (k + 1)) * (a + (k + 1)) * (m - k) / ((&t + 1) * (&t + 2))
    };
    let down = |k: i64| -> Scalar {
        if k == 0 {
            return Scalar::zero();
        }
        let t = &s + 2 * k;
        Scalar::from(k) * (&s + (k + m + 1)) * (b + k) / (&t * &(&t + 1))
    };
    let a_k = up(k) + down(k);
    let b_k = if k == 0 {
        Scalar::zero()
    } else {
        up(k - 1) * down(k)
    };
    (a_k, b_k)
}

/// Evaluator for `P_0, ..., P_n` of one family, with the recurrence
/// coefficients computed once.
#[derive(Clone, Debug)]
pub struct Polynomials {
    degree: u32,
    coeffs: RecurrenceCoeffs,
}

impl Polynomials {
    pub fn new(family: &FamilySpec, degree: u32) -> Result<Self> {
        Ok(Polynomials {
            degree,
            coeffs: family.recurrence(degree)?,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &RecurrenceCoeffs {
        &self.coeffs
    }

    /// `[P_0(x), ..., P_n(x)]`.
    pub fn eval_all(&self, x: &Scalar) -> Vec<Scalar> {
        let n = self.degree as usize;
        let mut out = Vec::with_capacity(n + 1);
        out.push(Scalar::one());
        if n == 0 {
            return out;
        }
        out.push(x - &self.coeffs.a[0]);
        for k in 1..n {
            let next = (x - &self.coeffs.a[k]) * &out[k] - &self.coeffs.b[k] * &out[k - 1];
            out.push(next);
        }
        out
    }

    /// `P_n(x)`.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        if self.degree == 0 {
            return Scalar::one();
        }
        let mut prev = Scalar::one();
        let mut cur = x - &self.coeffs.a[0];
        for k in 1..self.degree as usize {
            let next = (x - &self.coeffs.a[k]) * &cur - &self.coeffs.b[k] * &prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn forward_diff(&self, x: &Scalar) -> Scalar {
        if self.degree == 0 {
            return Scalar::zero();
        }
        self.eval(&(x + 1)) - self.eval(x)
    }

    /// An upper bound on the zeros of `P_n` (Gershgorin on the Jacobi
    /// matrix): `max_k (a_k + √b_k + √b_{k+1})`, for `k < n`.
    pub fn zero_bound(&self) -> f64 {
        let n = self.degree as usize;
        let sqrt_b = |k: usize| -> f64 {
            if k == 0 || k >= n {
                0.0
            } else {
                self.coeffs.b[k].to_f64().max(0.0).sqrt()
            }
        };
        (0..n)
            .map(|k| self.coeffs.a[k].to_f64() + sqrt_b(k) + sqrt_b(k + 1))
            .fold(0.0, f64::max)
    }
}
