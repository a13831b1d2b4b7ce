//! Limiting forms of the relative Fisher information.
//!
//! | family   | limit   | asymptote                                   |
//! |----------|---------|---------------------------------------------|
//! | Meixner  | n → ∞   | `(1-μ)/μ + (1-γ)/n`                         |
//! | Meixner  | μ → 0   | `n / ((n+γ-1) μ)`                           |
//! | Meixner  | μ → 1   | `n/(n+γ-1) · 2F1(1-n, 1; 2-n-γ; 1) (1-μ)²`  |
//! | Meixner  | γ → ∞   | `n (1-μ)² / (μ γ)`                          |
//! | Meixner  | γ → 0   | `(n/γ) (1-μ)² μ^(n-2)`                      |
//! | Kravchuk | p → 0   | `n / ((N-n+1) p)`                           |
//! | Kravchuk | p → 1   | `n! / ((N-n+1)_n (1-p)^n)`                  |
//! | Kravchuk | N → ∞   | `1 / (N (1-p)^(N-1) p³)` at `n = N-1`       |
//!
//! The large-`n` Meixner form has the right limit `(1-μ)/μ`, but the
//! computed correction is `(1-γ)/(μ n)`, not `(1-γ)/n`; see the tests.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::{FamilySpec, FamilyTag, Params};
use crate::numerics::{factorial, pochhammer, terminating_pfq, PfqSpec, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Limit {
    DegreeToInfinity,
    MuToZero,
    MuToOne,
    GammaToZero,
    GammaToInfinity,
    PToZero,
    PToOne,
    SizeToInfinity,
}

impl Limit {
    pub const ALL: [Limit; 8] = [
        Limit::DegreeToInfinity,
        Limit::MuToZero,
        Limit::MuToOne,
        Limit::GammaToZero,
        Limit::GammaToInfinity,
        Limit::PToZero,
        Limit::PToOne,
        Limit::SizeToInfinity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Limit::DegreeToInfinity => "n->inf",
            Limit::MuToZero => "mu->0",
            Limit::MuToOne => "mu->1",
            Limit::GammaToZero => "gamma->0",
            Limit::GammaToInfinity => "gamma->inf",
            Limit::PToZero => "p->0",
            Limit::PToOne => "p->1",
            Limit::SizeToInfinity => "N->inf",
        }
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Limit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Limit::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Domain(format!("unknown limit {s:?}")))
    }
}

/// A family together with one of its limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AsymptoteSpec {
    tag: FamilyTag,
    limit: Limit,
}

impl AsymptoteSpec {
    pub fn new(tag: FamilyTag, limit: Limit) -> Result<Self> {
        let ok = matches!(
            (tag, limit),
            (
                FamilyTag::Meixner,
                Limit::DegreeToInfinity
                    | Limit::MuToZero
                    | Limit::MuToOne
                    | Limit::GammaToZero
                    | Limit::GammaToInfinity
            ) | (
                FamilyTag::Kravchuk,
                Limit::PToZero | Limit::PToOne | Limit::SizeToInfinity
            )
        );
        if ok {
            Ok(AsymptoteSpec { tag, limit })
        } else {
            Err(Error::Domain(format!("no {limit} asymptote for the {tag} family")))
        }
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn limit(&self) -> Limit {
        self.limit
    }

    /// The asymptotic value at the parameters of `family` and degree `n`.
    /// The `N → ∞` Kravchuk form applies to the maximal degree and ignores `n`.
    pub fn evaluate(&self, family: &FamilySpec, n: u32) -> Result<Scalar> {
        if family.tag() != self.tag {
            return Err(Error::Domain(format!(
                "asymptote for {} applied to {family}",
                self.tag
            )));
        }
        match (family.params(), self.limit) {
            (Params::Meixner { gamma, mu }, limit) => match limit {
                Limit::DegreeToInfinity => meixner_large_n(gamma, mu, n),
                Limit::MuToZero => meixner_mu_to_zero(gamma, n, mu),
                Limit::MuToOne => meixner_mu_to_one(gamma, n, mu),
                Limit::GammaToInfinity => meixner_gamma_to_infinity(n, mu, gamma),
                Limit::GammaToZero => meixner_gamma_to_zero(n, mu, gamma),
                _ => unreachable!("validated in AsymptoteSpec::new"),
            },
            (Params::Kravchuk { p, size }, limit) => match limit {
                Limit::PToZero => kravchuk_p_to_zero(n, *size, p),
                Limit::PToOne => kravchuk_p_to_one(n, *size, p),
                Limit::SizeToInfinity => kravchuk_large_size(*size, p),
                _ => unreachable!("validated in AsymptoteSpec::new"),
            },
            _ => unreachable!("validated in AsymptoteSpec::new"),
        }
    }
}

fn div(num: Scalar, den: Scalar) -> Result<Scalar> {
    num.checked_div(&den)
        .ok_or_else(|| Error::Degenerate("asymptote denominator".into()))
}

fn require_degree(n: u32) -> Result<i64> {
    if n == 0 {
        Err(Error::Domain("asymptotes are stated for n >= 1".into()))
    } else {
        Ok(i64::from(n))
    }
}

/// `(1-μ)/μ + (1-γ)/n`.
pub fn meixner_large_n(gamma: &Scalar, mu: &Scalar, n: u32) -> Result<Scalar> {
    let ni = require_degree(n)?;
    Ok(div(Scalar::one() - mu, mu.clone())? + (Scalar::one() - gamma) / ni)
}

/// `n / ((n+γ-1) μ)`.
pub fn meixner_mu_to_zero(gamma: &Scalar, n: u32, mu: &Scalar) -> Result<Scalar> {
    let ni = require_degree(n)?;
    div(Scalar::from(ni), (gamma + (ni - 1)) * mu)
}

/// `n/(n+γ-1) · 2F1(1-n, 1; 2-n-γ; 1) · (1-μ)²`.
pub fn meixner_mu_to_one(gamma: &Scalar, n: u32, mu: &Scalar) -> Result<Scalar> {
    let ni = require_degree(n)?;
    let series = terminating_pfq(&PfqSpec::new(
        vec![Scalar::from(1 - ni), Scalar::one()],
        vec![Scalar::from(2 - ni) - gamma],
        Scalar::one(),
    ))?;
    Ok(div(Scalar::from(ni), gamma + (ni - 1))? * series * (Scalar::one() - mu).square())
}

/// `n (1-μ)² / (μ γ)`.
pub fn meixner_gamma_to_infinity(n: u32, mu: &Scalar, gamma: &Scalar) -> Result<Scalar> {
    let ni = require_degree(n)?;
    div((Scalar::one() - mu).square() * ni, mu * gamma)
}

/// `(n/γ) (1-μ)² μ^(n-2)`.
pub fn meixner_gamma_to_zero(n: u32, mu: &Scalar, gamma: &Scalar) -> Result<Scalar> {
    let ni = require_degree(n)?;
    let power = mu
        .powi(ni - 2)
        .ok_or_else(|| Error::Degenerate("mu".into()))?;
    Ok(div(Scalar::from(ni), gamma.clone())? * (Scalar::one() - mu).square() * power)
}

/// `n / ((N-n+1) p)`.
pub fn kravchuk_p_to_zero(n: u32, size: u32, p: &Scalar) -> Result<Scalar> {
    let ni = require_degree(n)?;
    div(Scalar::from(ni), p * (i64::from(size) - ni + 1))
}

/// `n! / ((N-n+1)_n (1-p)^n)`.
pub fn kravchuk_p_to_one(n: u32, size: u32, p: &Scalar) -> Result<Scalar> {
    let ni = require_degree(n)?;
    let q_pow = (Scalar::one() - p).powi(ni).expect("positive power");
    div(
        factorial(u64::from(n)),
        pochhammer(&Scalar::from(i64::from(size) - ni + 1), u64::from(n)) * q_pow,
    )
}

/// Exact value at the maximal degree `n = N-1`:
/// `((1-p)^(1-N) + (1-N) p - 1) / (N p³)`.
pub fn kravchuk_max_degree(size: u32, p: &Scalar) -> Result<Scalar> {
    let big = i64::from(size);
    let q = Scalar::one() - p;
    let inv = q
        .powi(1 - big)
        .ok_or_else(|| Error::Degenerate("1 - p".into()))?;
    div(inv + p * (1 - big) - 1, p.powi(3).unwrap() * big)
}

/// `1 / (N (1-p)^(N-1) p³)`.
pub fn kravchuk_large_size(size: u32, p: &Scalar) -> Result<Scalar> {
    let big = i64::from(size);
    let q_pow = (Scalar::one() - p).powi(big - 1).expect("positive power");
    div(Scalar::one(), q_pow * p.powi(3).unwrap() * big)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher::fisher_expansion;

    fn q(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn plug_in_values() {
        assert_eq!(meixner_large_n(&q("1"), &q("1/4"), 7).unwrap(), q("3"));
        assert_eq!(meixner_mu_to_zero(&q("2"), 1, &q("0.01")).unwrap(), q("50"));
        assert_eq!(
            meixner_mu_to_one(&q("3/2"), 1, &q("9/10")).unwrap(),
            q("1/100") / q("3/2")
        );
        assert_eq!(kravchuk_max_degree(3, &q("1/2")).unwrap(), q("16/3"));
        assert_eq!(
            kravchuk_p_to_zero(2, 15, &q("1e-4")).unwrap(),
            q("2") / q("14e-4")
        );
    }

    #[test]
    fn spec_validation() {
        assert!(AsymptoteSpec::new(FamilyTag::Meixner, Limit::PToZero).is_err());
        assert!(AsymptoteSpec::new(FamilyTag::Hahn, Limit::DegreeToInfinity).is_err());
        let a = AsymptoteSpec::new(FamilyTag::Kravchuk, Limit::PToZero).unwrap();
        let f = FamilySpec::kravchuk(q("1e-4"), 15).unwrap();
        assert_eq!(a.evaluate(&f, 2).unwrap(), kravchuk_p_to_zero(2, 15, &q("1e-4")).unwrap());
        assert_eq!("mu->0".parse::<Limit>().unwrap(), Limit::MuToZero);
    }

    #[test]
    fn max_degree_is_exact() {
        for big in 2..=10u32 {
            for p in ["1/4", "1/2", "2/3"] {
                let f = FamilySpec::kravchuk(q(p), big).unwrap();
                assert_eq!(
                    fisher_expansion(&f, big - 1).unwrap(),
                    kravchuk_max_degree(big, &q(p)).unwrap()
                );
            }
        }
    }

    /// `n (I_n - (1-μ)/μ)` settles near `(1-γ)/μ`, so the stated `(1-γ)/n`
    /// correction is off by a factor `1/μ` while still `O(1/n)`.
    #[test]
    fn large_degree_correction_scales_with_inverse_mu() {
        for (gamma, mu) in [("3/2", "1/4"), ("4", "1/4"), ("3/2", "1/7")] {
            let (g, m) = (q(gamma), q(mu));
            let f = FamilySpec::meixner(g.clone(), m.clone()).unwrap();
            let n = 400u32;
            let limit = (Scalar::one() - &m) / &m;
            let scaled = (fisher_expansion(&f, n).unwrap() - limit) * i64::from(n);
            let predicted = (Scalar::one() - &g) / &m;
            assert!(
                scaled.rel_diff(&predicted) < q("0.1"),
                "gamma = {gamma}, mu = {mu}: {}",
                scaled.to_f64()
            );
        }
    }
}
