//! Ladder relations `ΔP_n = n Q_{n-1}` and the expansion of `ΔP_n` in the
//! family's own basis.

use super::{FamilySpec, Params};
use crate::error::{Error, Result};
use crate::numerics::{binomial, pochhammer, terminating_pfq, PfqSpec, Scalar};

impl FamilySpec {
    /// The parameter-shifted family `Q` and factor `n` with
    /// `ΔP_n(x) = n Q_{n-1}(x)`.
    pub fn ladder_target(&self, n: u32) -> Result<(FamilySpec, Scalar)> {
        self.check_degree(n)?;
        if n == 0 {
            return Err(Error::Domain(
                "the ladder relation starts at degree 1".into(),
            ));
        }
        let target = match &self.params {
            Params::Charlier { .. } => self.clone(),
            Params::Meixner { gamma, mu } => FamilySpec::meixner(gamma + 1, mu.clone())?,
            Params::Kravchuk { p, size } => FamilySpec::kravchuk(p.clone(), size - 1)?,
            Params::Hahn { alpha, beta, size } => {
                FamilySpec::hahn(alpha + 1, beta + 1, size - 1)?
            }
        };
        Ok((target, Scalar::from(n)))
    }

    /// Coefficients `c_0, ..., c_{n-1}` with `ΔP_n(x) = Σ_j c_j P_j(x)`.
    pub fn connection_coeffs(&self, n: u32) -> Result<Vec<Scalar>> {
        self.check_degree(n)?;
        let nn = Scalar::from(n);
        let gap = |j: u32| u64::from(n - 1 - j);
        let coeffs = match &self.params {
            Params::Charlier { .. } => (0..n)
                .map(|j| if j + 1 == n { nn.clone() } else { Scalar::zero() })
                .collect(),
            Params::Meixner { mu, .. } => {
                let ratio = mu / &(mu - 1);
                (0..n)
                    .map(|j| {
                        let g = gap(j);
                        &nn * &pochhammer(&Scalar::from(j + 1), g) * power(&ratio, g)
                    })
                    .collect()
            }
            Params::Kravchuk { p, .. } => (0..n)
                .map(|j| {
                    let g = gap(j);
                    &nn * &pochhammer(&Scalar::from(j + 1), g) * power(p, g)
                })
                .collect(),
            Params::Hahn { alpha, beta, size } => {
                let big = i64::from(*size);
                let s = alpha + beta;
                let mut out = Vec::with_capacity(n as usize);
                for j in 0..n {
                    let jj = i64::from(j);
                    let g = gap(j);
                    let nj = i64::from(n);
                    let prefactor = binomial(u64::from(n - 1), u64::from(j))
                        * pochhammer(&Scalar::from(2 + jj - big), g)
                        * pochhammer(&(beta + (2 + jj)), g)
                        / pochhammer(&(&s + (2 + jj + nj)), g);
                    let series = terminating_pfq(&PfqSpec::new(
                        vec![
                            Scalar::from(jj - nj + 1),
                            Scalar::from(1 + jj - big),
                            beta + (jj + 1),
                            &s + (2 + nj + jj),
                        ],
                        vec![
                            Scalar::from(2 + jj - big),
                            beta + (jj + 2),
                            &s + (2 * jj + 2),
                        ],
                        Scalar::one(),
                    ))?;
                    out.push(&nn * &prefactor * series);
                }
                out
            }
        };
        Ok(coeffs)
    }
}

fn power(base: &Scalar, k: u64) -> Scalar {
    base.powi(k as i64).expect("nonnegative power")
}
