//! The four classical discrete families on the lattice `x = 0, 1, 2, ...`.
//!
//! Every weight and norm is stored *reduced*: the family's irrational
//! constant (the `e^{-μ}` of the Poisson weight, the Gamma functions of the
//! Meixner and Hahn weights) is divided out, so that all weights are rational
//! for rational parameters. The constant cancels in every ratio this crate
//! computes. Where a reduced norm still contains a transcendental part it is
//! carried symbolically in a [`Factored`](crate::numerics::Factored).

mod ladder;
mod recurrence;
mod weights;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{Backend, Scalar};

pub use recurrence::{Polynomials, RecurrenceCoeffs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    Charlier,
    Meixner,
    Kravchuk,
    Hahn,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 4] = [
        FamilyTag::Charlier,
        FamilyTag::Meixner,
        FamilyTag::Kravchuk,
        FamilyTag::Hahn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Charlier => "charlier",
            FamilyTag::Meixner => "meixner",
            FamilyTag::Kravchuk => "kravchuk",
            FamilyTag::Hahn => "hahn",
        }
    }

    /// Parameter names in canonical order.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            FamilyTag::Charlier => &["mu"],
            FamilyTag::Meixner => &["gamma", "mu"],
            FamilyTag::Kravchuk => &["p", "N"],
            FamilyTag::Hahn => &["alpha", "beta", "N"],
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "charlier" => Ok(FamilyTag::Charlier),
            "meixner" => Ok(FamilyTag::Meixner),
            "kravchuk" | "krawtchouk" => Ok(FamilyTag::Kravchuk),
            "hahn" => Ok(FamilyTag::Hahn),
            other => Err(Error::Domain(format!("unknown family {other:?}"))),
        }
    }
}

/// Parameters of one family. `size` is the lattice parameter `N`: the
/// Kravchuk lattice is `0..=N`, the Hahn lattice `0..N`.
#[derive(Clone, Debug, PartialEq)]
pub enum Params {
    Charlier { mu: Scalar },
    Meixner { gamma: Scalar, mu: Scalar },
    Kravchuk { p: Scalar, size: u32 },
    Hahn { alpha: Scalar, beta: Scalar, size: u32 },
}

/// A validated family descriptor. Construction enforces
/// `μ > 0` (Charlier), `γ > 0, 0 < μ < 1` (Meixner), `0 < p < 1` (Kravchuk),
/// `α, β > -1` (Hahn) and `N ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    params: Params,
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(what()))
    }
}

impl FamilySpec {
    pub fn charlier(mu: Scalar) -> Result<Self> {
        require(mu.is_positive(), || format!("Charlier requires mu > 0, got {mu}"))?;
        Ok(FamilySpec {
            params: Params::Charlier { mu },
        })
    }

    pub fn meixner(gamma: Scalar, mu: Scalar) -> Result<Self> {
        require(gamma.is_positive(), || {
            format!("Meixner requires gamma > 0, got {gamma}")
        })?;
        require(mu.is_positive() && mu < Scalar::one(), || {
            format!("Meixner requires 0 < mu < 1, got {mu}")
        })?;
        Ok(FamilySpec {
            params: Params::Meixner { gamma, mu },
        })
    }

    pub fn kravchuk(p: Scalar, size: u32) -> Result<Self> {
        require(p.is_positive() && p < Scalar::one(), || {
            format!("Kravchuk requires 0 < p < 1, got {p}")
        })?;
        require(size >= 1, || "Kravchuk requires N >= 1".to_string())?;
        Ok(FamilySpec {
            params: Params::Kravchuk { p, size },
        })
    }

    pub fn hahn(alpha: Scalar, beta: Scalar, size: u32) -> Result<Self> {
        let minus_one = Scalar::from(-1);
        require(alpha > minus_one, || {
            format!("Hahn requires alpha > -1, got {alpha}")
        })?;
        require(beta > minus_one, || format!("Hahn requires beta > -1, got {beta}"))?;
        require(size >= 1, || "Hahn requires N >= 1".to_string())?;
        Ok(FamilySpec {
            params: Params::Hahn { alpha, beta, size },
        })
    }

    /// Builds a family from named parameters (`mu`, `gamma`, `p`, `N`,
    /// `alpha`, `beta`); unused names are rejected.
    pub fn from_named(tag: FamilyTag, named: &[(&str, Scalar)]) -> Result<Self> {
        let names = tag.parameter_names();
        for (key, _) in named {
            if !names.contains(key) {
                return Err(Error::Domain(format!(
                    "parameter {key} does not belong to the {tag} family"
                )));
            }
        }
        let get = |key: &str| {
            named
                .iter()
                .rev()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Domain(format!("the {tag} family needs parameter {key}")))
        };
        let size = || -> Result<u32> {
            let v = get("N")?;
            v.to_i64()
                .and_then(|n| u32::try_from(n).ok())
                .filter(|_| v.is_exact())
                .ok_or_else(|| Error::Domain(format!("N must be a positive integer, got {v}")))
        };
        match tag {
            FamilyTag::Charlier => FamilySpec::charlier(get("mu")?),
            FamilyTag::Meixner => FamilySpec::meixner(get("gamma")?, get("mu")?),
            FamilyTag::Kravchuk => FamilySpec::kravchuk(get("p")?, size()?),
            FamilyTag::Hahn => FamilySpec::hahn(get("alpha")?, get("beta")?, size()?),
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn tag(&self) -> FamilyTag {
        match self.params {
            Params::Charlier { .. } => FamilyTag::Charlier,
            Params::Meixner { .. } => FamilyTag::Meixner,
            Params::Kravchuk { .. } => FamilyTag::Kravchuk,
            Params::Hahn { .. } => FamilyTag::Hahn,
        }
    }

    /// Named parameter values in canonical order.
    pub fn named_params(&self) -> Vec<(&'static str, Scalar)> {
        match &self.params {
            Params::Charlier { mu } => vec![("mu", mu.clone())],
            Params::Meixner { gamma, mu } => vec![("gamma", gamma.clone()), ("mu", mu.clone())],
            Params::Kravchuk { p, size } => vec![("p", p.clone()), ("N", Scalar::from(*size))],
            Params::Hahn { alpha, beta, size } => vec![
                ("alpha", alpha.clone()),
                ("beta", beta.clone()),
                ("N", Scalar::from(*size)),
            ],
        }
    }

    /// `name=value` pairs joined by `;`, e.g. `gamma=3/2;mu=1/4`.
    pub fn params_label(&self) -> String {
        self.named_params()
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn support(&self) -> LatticeSupport {
        match &self.params {
            Params::Charlier { .. } | Params::Meixner { .. } => LatticeSupport::unbounded(),
            Params::Kravchuk { size, .. } => LatticeSupport::bounded(i64::from(*size) + 1),
            Params::Hahn { size, .. } => LatticeSupport::bounded(i64::from(*size)),
        }
    }

    /// Largest admissible degree, `None` when unbounded.
    pub fn max_degree(&self) -> Option<u32> {
        match &self.params {
            Params::Charlier { .. } | Params::Meixner { .. } => None,
            Params::Kravchuk { size, .. } | Params::Hahn { size, .. } => Some(size - 1),
        }
    }

    pub fn check_degree(&self, n: u32) -> Result<()> {
        match self.max_degree() {
            Some(max) if n > max => Err(Error::DegreeOutOfRange { n, max }),
            _ => Ok(()),
        }
    }

    /// Exact iff every parameter is exact; otherwise the widest float.
    pub fn backend(&self) -> Backend {
        self.named_params()
            .iter()
            .map(|(_, v)| v.backend())
            .fold(Backend::Exact, Backend::join)
    }

    /// The same family with every real parameter converted to `backend`.
    pub fn with_backend(&self, backend: Backend) -> FamilySpec {
        let c = |s: &Scalar| s.with_backend(backend);
        let params = match &self.params {
            Params::Charlier { mu } => Params::Charlier { mu: c(mu) },
            Params::Meixner { gamma, mu } => Params::Meixner {
                gamma: c(gamma),
                mu: c(mu),
            },
            Params::Kravchuk { p, size } => Params::Kravchuk {
                p: c(p),
                size: *size,
            },
            Params::Hahn { alpha, beta, size } => Params::Hahn {
                alpha: c(alpha),
                beta: c(beta),
                size: *size,
            },
        };
        FamilySpec { params }
    }

    /// Coefficients of the second-order difference equation
    /// `σ(x) Δ∇P_n + τ(x) ΔP_n + λ_n P_n = 0`.
    pub fn table_one(&self) -> TableOneData {
        let one = Scalar::one();
        let zero = Scalar::zero();
        let (sigma, tau, kappa) = match &self.params {
            Params::Charlier { mu } => (
                [zero.clone(), one.clone(), zero],
                [mu.clone(), Scalar::from(-1)],
                "exp(-mu)",
            ),
            Params::Meixner { gamma, mu } => (
                [zero.clone(), one.clone(), zero],
                [mu * gamma, mu - 1],
                "1/Gamma(gamma)",
            ),
            Params::Kravchuk { p, size } => {
                let q = &one - p;
                (
                    [zero.clone(), one.clone(), zero],
                    [p * i64::from(*size) / &q, Scalar::from(-1) / &q],
                    "1",
                )
            }
            Params::Hahn { alpha, beta, size } => {
                let n = i64::from(*size);
                (
                    [zero, alpha + n, Scalar::from(-1)],
                    [(beta + 1) * (n - 1), -(alpha + beta + 2)],
                    "Gamma(alpha+1) Gamma(beta+1)",
                )
            }
        };
        TableOneData {
            family: self.clone(),
            sigma,
            tau,
            kappa,
            support: self.support(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.tag(), self.params_label())
    }
}

/// Half-open lattice `start .. end`; `end = None` is unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeSupport {
    pub start: i64,
    pub end: Option<i64>,
}

impl LatticeSupport {
    fn bounded(end: i64) -> Self {
        LatticeSupport {
            start: 0,
            end: Some(end),
        }
    }

    fn unbounded() -> Self {
        LatticeSupport {
            start: 0,
            end: None,
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= self.start && self.end.map_or(true, |b| x < b)
    }

    pub fn is_bounded(&self) -> bool {
        self.end.is_some()
    }

    pub fn check(&self, x: i64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfSupport {
                x,
                support: self.to_string(),
            })
        }
    }

    /// Lattice points, or `None` for an unbounded support.
    pub fn points(&self) -> Option<std::ops::Range<i64>> {
        self.end.map(|b| self.start..b)
    }
}

impl fmt::Display for LatticeSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end {
            Some(b) => write!(f, "{{{}, ..., {}}}", self.start, b - 1),
            None => write!(f, "{{{}, {}, ...}}", self.start, self.start + 1),
        }
    }
}

/// `σ(x) = sigma[0] + sigma[1] x + sigma[2] x²`, `τ(x) = tau[0] + tau[1] x`.
#[derive(Clone, Debug)]
pub struct TableOneData {
    family: FamilySpec,
    pub sigma: [Scalar; 3],
    pub tau: [Scalar; 2],
    /// The constant divided out of the weight and norm.
    pub kappa: &'static str,
    pub support: LatticeSupport,
}

impl TableOneData {
    pub fn sigma_at(&self, x: &Scalar) -> Scalar {
        &self.sigma[0] + &(x * &(&self.sigma[1] + &(x * &self.sigma[2])))
    }

    pub fn tau_at(&self, x: &Scalar) -> Scalar {
        &self.tau[0] + &(x * &self.tau[1])
    }

    /// Eigenvalue `λ_n`.
    pub fn lambda(&self, n: u32) -> Scalar {
        let n_s = Scalar::from(n);
        match self.family.params() {
            Params::Charlier { .. } => n_s,
            Params::Meixner { mu, .. } => (Scalar::one() - mu) * n_s,
            Params::Kravchuk { p, .. } => n_s / (Scalar::one() - p),
            Params::Hahn { alpha, beta, .. } => &n_s * &(alpha + beta + 1 + i64::from(n)),
        }
    }
}
