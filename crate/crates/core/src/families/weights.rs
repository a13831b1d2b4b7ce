use super::{FamilySpec, Params};
use crate::error::{Error, Result};
use crate::numerics::{binomial, factorial, pochhammer, ConstantFactor, Factored, Scalar};

impl FamilySpec {
    /// Weight at `x` with the family constant divided out:
    ///
    /// | family   | reduced weight                                     |
    /// |----------|----------------------------------------------------|
    /// | Charlier | `μ^x / x!`                                         |
    /// | Meixner  | `(γ)_x μ^x / x!`                                   |
    /// | Kravchuk | `C(N, x) p^x (1-p)^(N-x)`                          |
    /// | Hahn     | `(α+1)_(N-1-x) (β+1)_x / ((N-1-x)! x!)`            |
    pub fn reduced_weight(&self, x: i64) -> Result<Scalar> {
        self.support().check(x)?;
        let xu = x as u64;
        Ok(match &self.params {
            Params::Charlier { mu } => pow(mu, xu) / factorial(xu),
            Params::Meixner { gamma, mu } => pow(mu, xu) * pochhammer(gamma, xu) / factorial(xu),
            Params::Kravchuk { p, size } => {
                let n = u64::from(*size);
                binomial(n, xu) * pow(p, xu) * pow(&(Scalar::one() - p), n - xu)
            }
            Params::Hahn { alpha, beta, size } => {
                let rest = u64::from(*size) - 1 - xu;
                pochhammer(&(alpha + 1), rest) * pochhammer(&(beta + 1), xu)
                    / (factorial(rest) * factorial(xu))
            }
        })
    }

    /// Squared norm `Σ_x w̃(x) P_n(x)²` of the monic polynomial, on the same
    /// reduced scale as [`reduced_weight`](Self::reduced_weight).
    pub fn reduced_norm(&self, n: u32) -> Result<Factored> {
        self.check_degree(n)?;
        let nu = u64::from(n);
        let n_fact = factorial(nu);
        Ok(match &self.params {
            Params::Charlier { mu } => Factored::new(
                n_fact * pow(mu, nu),
                ConstantFactor::Exp(mu.clone()),
            ),
            Params::Meixner { gamma, mu } => Factored::new(
                n_fact * pochhammer(gamma, nu) * pow(mu, nu),
                ConstantFactor::Power {
                    base: Scalar::one() - mu,
                    exponent: -(gamma + 2 * i64::from(n)),
                },
            ),
            Params::Kravchuk { p, size } => {
                let big = u64::from(*size);
                let q = Scalar::one() - p;
                Factored::plain(
                    n_fact * factorial(big) * pow(&(p * &q), nu) / factorial(big - nu),
                )
            }
            Params::Hahn { alpha, beta, size } => {
                let big = u64::from(*size);
                let s = alpha + beta;
                if n == 0 {
                    return Ok(Factored::plain(
                        pochhammer(&(&s + 2), big - 1) / factorial(big - 1),
                    ));
                }
                let shifted = &s + (n as i64 + 1);
                let num = n_fact
                    * pochhammer(&(alpha + 1), nu)
                    * pochhammer(&(beta + 1), nu)
                    * pochhammer(&shifted, big);
                let den = (&s + (2 * n as i64 + 1))
                    * factorial(big - nu - 1)
                    * pochhammer(&shifted, nu).square();
                Factored::plain(num / den)
            }
        })
    }

    /// Total reduced mass `Σ_x w̃(x)`.
    pub fn reduced_mass(&self) -> Factored {
        self.reduced_norm(0).expect("degree 0 is always admissible")
    }

    /// `w(x-1) / w(x)` from the closed form of the weight, for `x ≥ 1` in the
    /// support.
    pub fn weight_ratio(&self, x: i64) -> Result<Scalar> {
        self.support().check(x)?;
        if x < 1 {
            return Err(Error::OutOfSupport {
                x,
                support: format!("{} without its first point", self.support()),
            });
        }
        let xs = Scalar::from(x);
        Ok(match &self.params {
            Params::Charlier { mu } => xs / mu,
            Params::Meixner { gamma, mu } => &xs / &(mu * &(gamma + (x - 1))),
            Params::Kravchuk { p, size } => {
                let q = Scalar::one() - p;
                (&xs * &q) / (p * (i64::from(*size) - x + 1))
            }
            Params::Hahn { alpha, beta, size } => {
                let n = i64::from(*size);
                (&xs * &(alpha + (n - x))) / ((beta + x) * (n - x))
            }
        })
    }

    /// `Σ_{x ≥ 0} w̃(x) x(x-1)···(x-k+1)` for the unbounded families:
    /// `μ^k e^μ` (Charlier) and `(γ)_k (μ/(1-μ))^k (1-μ)^(-γ)` (Meixner).
    pub(crate) fn falling_moment(&self, k: u64) -> Option<Factored> {
        match &self.params {
            Params::Charlier { mu } => Some(Factored::new(
                pow(mu, k),
                ConstantFactor::Exp(mu.clone()),
            )),
            Params::Meixner { gamma, mu } => {
                let q = Scalar::one() - mu;
                Some(Factored::new(
                    pochhammer(gamma, k) * pow(&(mu / &q), k),
                    ConstantFactor::Power {
                        base: q,
                        exponent: -gamma.clone(),
                    },
                ))
            }
            _ => None,
        }
    }
}

fn pow(base: &Scalar, k: u64) -> Scalar {
    base.powi(k as i64).expect("nonnegative power")
}
