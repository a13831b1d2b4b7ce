//! Relative Fisher information `I[P_n] = (1/d_n²) Σ_x w(x) [ΔP_n(x)]²` of
//! the monic polynomials with respect to their weight, by four independent
//! routes, and the Rakhmanov density `w(x) P_n(x)² / d_n²`.
//!
//! * [`Method::DirectSum`] sums the definition over the lattice.
//! * [`Method::TheoremFormula`] sums by parts:
//!   `I = w(b-1) P_n(b)² / d_n² + Σ_x w(x) (w(x-1)/w(x)) P_n(x)² / d_n² - 1`,
//!   with the boundary term absent on unbounded lattices.
//! * [`Method::Expansion`] uses `ΔP_n = Σ_j c_j P_j` and orthogonality:
//!   `I = Σ_j c_j² d_j² / d_n²`. Only terminating series appear, so it is
//!   exact for exact parameters and serves as the reference value.
//! * [`Method::ClosedForm`] evaluates the per-family closed expressions.

mod closed;
mod lattice;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::{FamilySpec, Polynomials};
use crate::numerics::{Factored, Scalar};

pub use closed::{closed_form, hahn_factors, ClosedValue, HahnClosedFactors};
use lattice::{weighted_sum, Shift, Summand};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    DirectSum,
    TheoremFormula,
    Expansion,
    ClosedForm,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::DirectSum,
        Method::TheoremFormula,
        Method::Expansion,
        Method::ClosedForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::DirectSum => "direct",
            Method::TheoremFormula => "theorem",
            Method::Expansion => "expansion",
            Method::ClosedForm => "closed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "direct" | "directsum" | "direct-sum" => Ok(Method::DirectSum),
            "theorem" | "theoremformula" | "theorem-formula" => Ok(Method::TheoremFormula),
            "expansion" => Ok(Method::Expansion),
            "closed" | "closedform" | "closed-form" => Ok(Method::ClosedForm),
            other => Err(Error::Domain(format!("unknown method {other:?}"))),
        }
    }
}

/// Stopping rule for lattice sums over an unbounded support with float
/// parameters.
///
/// Once `x` lies beyond every zero of the summand, the term ratio
/// `t(x+1)/t(x)` is bounded for all later `x` by
/// `R = max(w(x+1)/w(x), lim w(x+1)/w(x)) · q(x+1)/q(x)`. Summation stops at
/// the first such `x` with `R < 1` and geometric tail bound
/// `t(x+1)/(1-R) ≤ tail_tol · Σ|t|`, and fails after `hard_cap` points.
/// (For Meixner weights `R` tends to `μ`, which may exceed 1/2.)
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationPolicy {
    pub tail_tol: Scalar,
    pub hard_cap: u64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tail_tol: Scalar::pow10(-30),
            hard_cap: 1_000_000,
        }
    }
}

fn zero() -> Scalar {
    Scalar::zero()
}

fn working_bits(family: &FamilySpec) -> u32 {
    family.backend().bits()
}

fn over_norm(sum: &Factored, family: &FamilySpec, n: u32) -> Result<Scalar> {
    sum.ratio(&family.reduced_norm(n)?, working_bits(family))
}

/// `Σ_x w̃(x) P_n(x) P_m(x)` by lattice summation.
pub fn inner_product(
    family: &FamilySpec,
    n: u32,
    m: u32,
    policy: &TruncationPolicy,
) -> Result<Factored> {
    let top = n.max(m);
    let polys = Polynomials::new(family, top)?;
    let low = Polynomials::new(family, n.min(m))?;
    let eval = |x: &Scalar| -> Scalar {
        let all = polys.eval_all(x);
        &all[n as usize] * &all[m as usize]
    };
    let summand = Summand {
        degree: (n + m) as usize,
        zero_bound: polys.zero_bound().max(low.zero_bound()),
        eval: &eval,
    };
    weighted_sum(family, &summand, Shift::None, policy)
}

/// `(1/d̃_n²) Σ_x w̃(x) [ΔP_n(x)]²`.
pub fn fisher_direct(family: &FamilySpec, n: u32, policy: &TruncationPolicy) -> Result<Scalar> {
    family.check_degree(n)?;
    if n == 0 {
        return Ok(zero());
    }
    let polys = Polynomials::new(family, n)?;
    let eval = |x: &Scalar| polys.forward_diff(x).square();
    let summand = Summand {
        degree: 2 * (n as usize - 1),
        zero_bound: polys.zero_bound(),
        eval: &eval,
    };
    let sum = weighted_sum(family, &summand, Shift::None, policy)?;
    over_norm(&sum, family, n)
}

/// Summation by parts: boundary term plus the weight-ratio average, minus 1.
pub fn fisher_theorem(family: &FamilySpec, n: u32, policy: &TruncationPolicy) -> Result<Scalar> {
    family.check_degree(n)?;
    if n == 0 {
        return Ok(zero());
    }
    let polys = Polynomials::new(family, n)?;
    let eval = |x: &Scalar| polys.eval(x).square();
    let summand = Summand {
        degree: 2 * n as usize,
        zero_bound: polys.zero_bound(),
        eval: &eval,
    };
    let mut sum = weighted_sum(family, &summand, Shift::Back, policy)?;
    // [w̃(x-1) P_n(x)²] from a to b; w̃(-1) = 0.
    if let Some(end) = family.support().end {
        let boundary = family.reduced_weight(end - 1)? * polys.eval(&Scalar::from(end)).square();
        sum = sum
            .add(&Factored::plain(boundary))
            .expect("bounded families carry no constant");
    }
    Ok(over_norm(&sum, family, n)? - 1)
}

/// `Σ_j c_j² d̃_j² / d̃_n²` with the connection coefficients `c_j` of `ΔP_n`.
/// The norm ratios `d̃_j²/d̃_n²` are the reciprocal products of the
/// recurrence's `b_{j+1} ··· b_n`.
pub fn fisher_expansion(family: &FamilySpec, n: u32) -> Result<Scalar> {
    family.check_degree(n)?;
    if n == 0 {
        return Ok(zero());
    }
    let coeffs = family.connection_coeffs(n)?;
    let rec = family.recurrence(n)?;
    let mut norm_ratio = Scalar::one();
    let mut total = Scalar::zero();
    for j in (0..n as usize).rev() {
        norm_ratio = norm_ratio
            .checked_div(&rec.b[j + 1])
            .ok_or_else(|| Error::Degenerate("recurrence coefficient".into()))?;
        total = total + coeffs[j].square() * &norm_ratio;
    }
    Ok(total)
}

pub fn fisher_closed(family: &FamilySpec, n: u32) -> Result<ClosedValue> {
    closed_form(family, n)
}

/// `w̃(x) P_n(x)² / d̃_n²`, the probability mass of the Rakhmanov density.
pub fn rakhmanov_density(family: &FamilySpec, n: u32, x: i64) -> Result<Scalar> {
    family.check_degree(n)?;
    let w = family.reduced_weight(x)?;
    let p = family.eval_poly(n, &Scalar::from(x))?;
    over_norm(&Factored::plain(w * p.square()), family, n)
}

/// Total Rakhmanov mass `Σ_x ρ_n(x)` by lattice summation; 1 in exact
/// arithmetic.
pub fn density_mass(family: &FamilySpec, n: u32, policy: &TruncationPolicy) -> Result<Scalar> {
    let sum = inner_product(family, n, n, policy)?;
    over_norm(&sum, family, n)
}

/// Value of one method, with the convergence flag of any non-terminating
/// series involved.
pub fn fisher_by(
    family: &FamilySpec,
    n: u32,
    method: Method,
    policy: &TruncationPolicy,
) -> Result<ClosedValue> {
    let plain = |v: Scalar| ClosedValue {
        value: v,
        converged: true,
    };
    match method {
        Method::DirectSum => fisher_direct(family, n, policy).map(plain),
        Method::TheoremFormula => fisher_theorem(family, n, policy).map(plain),
        Method::Expansion => fisher_expansion(family, n).map(plain),
        Method::ClosedForm => fisher_closed(family, n),
    }
}

#[derive(Clone, Debug)]
pub struct MethodOutcome {
    pub method: Method,
    pub result: Result<ClosedValue>,
}

/// All four methods side by side.
#[derive(Clone, Debug)]
pub struct FisherReport {
    pub family: FamilySpec,
    pub degree: u32,
    pub outcomes: Vec<MethodOutcome>,
    /// Largest relative difference between two successful, converged
    /// values; `None` if fewer than two are available.
    pub max_discrepancy: Option<Scalar>,
    /// Convergence of the accelerated series in the Hahn closed form.
    pub hahn_c3_converged: Option<bool>,
}

impl FisherReport {
    pub fn value(&self, method: Method) -> Option<&Scalar> {
        self.outcomes
            .iter()
            .find(|o| o.method == method)
            .and_then(|o| o.result.as_ref().ok())
            .map(|v| &v.value)
    }
}

pub fn fisher_report(family: &FamilySpec, n: u32, policy: &TruncationPolicy) -> FisherReport {
    let outcomes: Vec<MethodOutcome> = Method::ALL
        .iter()
        .map(|&method| MethodOutcome {
            method,
            result: fisher_by(family, n, method, policy),
        })
        .collect();
    let good: Vec<&Scalar> = outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().ok())
        .filter(|v| v.converged)
        .map(|v| &v.value)
        .collect();
    let mut max_discrepancy: Option<Scalar> = None;
    for (i, a) in good.iter().enumerate() {
        for b in &good[i + 1..] {
            let d = a.rel_diff(b);
            if max_discrepancy.as_ref().map_or(true, |m| d > *m) {
                max_discrepancy = Some(d);
            }
        }
    }
    let hahn_c3_converged = match (family.tag(), n) {
        (crate::families::FamilyTag::Hahn, 1..) => outcomes
            .iter()
            .find(|o| o.method == Method::ClosedForm)
            .and_then(|o| o.result.as_ref().ok())
            .map(|v| v.converged),
        _ => None,
    };
    FisherReport {
        family: family.clone(),
        degree: n,
        outcomes,
        max_discrepancy,
        hahn_c3_converged,
    }
}
