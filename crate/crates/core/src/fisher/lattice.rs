//! Weighted sums `Σ_x w̃(x) q(x)` over a family's lattice, where `q` is a
//! polynomial in `x` (a product of the family's polynomials).
//!
//! Three regimes:
//! * bounded support: the finite sum, exact for exact parameters;
//! * unbounded support, exact parameters: `q` is expanded in falling
//!   factorials `x(x-1)···(x-k+1)` through its Newton forward differences,
//!   and every falling moment of the weight is known in closed form, so the
//!   infinite sum is exact up to the family constant;
//! * unbounded support, float parameters: truncated summation with a
//!   geometric tail bound (see [`TruncationPolicy`]).

use super::TruncationPolicy;
use crate::error::{Error, Result};
use crate::families::{FamilySpec, Params};
use crate::numerics::{factorial, Factored, Scalar};

/// Which terms are summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Shift {
    /// `Σ_{x ≥ 0} w̃(x) q(x)`
    None,
    /// `Σ_{x ≥ 1} w̃(x) · (w(x-1)/w(x)) · q(x) = Σ_{x ≥ 1} w̃(x-1) q(x)`
    Back,
}

/// A polynomial summand: its degree and an evaluator.
pub(crate) struct Summand<'a> {
    pub degree: usize,
    /// Upper bound on the real zeros of `q`; beyond it `q > 0`.
    pub zero_bound: f64,
    pub eval: &'a (dyn Fn(&Scalar) -> Scalar + Sync),
}

pub(crate) fn weighted_sum(
    family: &FamilySpec,
    summand: &Summand<'_>,
    shift: Shift,
    policy: &TruncationPolicy,
) -> Result<Factored> {
    if let Some(points) = family.support().points() {
        let mut acc = Scalar::zero();
        for x in points {
            if shift == Shift::Back && x == 0 {
                continue;
            }
            let mut w = family.reduced_weight(x)?;
            if shift == Shift::Back {
                w = w * family.weight_ratio(x)?;
            }
            acc = acc + w * (summand.eval)(&Scalar::from(x));
        }
        return Ok(Factored::plain(acc));
    }
    if family.backend().is_exact() {
        moment_sum(family, summand, shift)
    } else {
        truncated_sum(family, summand, shift, policy).map(Factored::plain)
    }
}

fn moment_sum(family: &FamilySpec, summand: &Summand<'_>, shift: Shift) -> Result<Factored> {
    let offset = match shift {
        Shift::None => 0,
        Shift::Back => 1,
    };
    // Σ_{x≥1} w̃(x-1) q(x) = Σ_{y≥0} w̃(y) q(y+1)
    let mut diffs: Vec<Scalar> = (0..=summand.degree as i64)
        .map(|x| (summand.eval)(&Scalar::from(x + offset)))
        .collect();
    let mut total: Option<Factored> = None;
    for k in 0..=summand.degree {
        let coeff = &diffs[0] / &factorial(k as u64);
        if !coeff.is_zero() {
            let moment = family
                .falling_moment(k as u64)
                .expect("moment summation applies to unbounded families");
            let term = moment.scale(&coeff);
            total = Some(match total {
                None => term,
                Some(t) => t.add(&term).expect("moments share one constant"),
            });
        }
        for i in 0..diffs.len() - 1 {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
        diffs.pop();
    }
    Ok(total.unwrap_or_else(|| Factored::plain(Scalar::zero())))
}

/// Limit of `w̃(x+1)/w̃(x)` as `x → ∞`.
fn ratio_limit(family: &FamilySpec) -> Scalar {
    match family.params() {
        Params::Meixner { mu, .. } => mu.clone(),
        _ => Scalar::zero(),
    }
}

fn truncated_sum(
    family: &FamilySpec,
    summand: &Summand<'_>,
    shift: Shift,
    policy: &TruncationPolicy,
) -> Result<Scalar> {
    let first: i64 = match shift {
        Shift::None => 0,
        Shift::Back => 1,
    };
    // u(x) = w̃(x - shift); u(x+1)/u(x) = 1 / weight_ratio(x + 1 - shift)
    let step = |x: i64| -> Result<Scalar> {
        family
            .weight_ratio(x + 1 - first)?
            .recip()
            .ok_or_else(|| Error::Degenerate("weight ratio".into()))
    };
    let mut u = family.reduced_weight(0)?;
    if shift == Shift::Back {
        u = family.reduced_weight(1)? * family.weight_ratio(1)?;
    }
    let limit = ratio_limit(family);
    let one = Scalar::one();
    let start_checks = (summand.zero_bound.max(0.0).floor() as i64 + 1).max(first);

    let mut x = first;
    let mut q = (summand.eval)(&Scalar::from(x));
    let mut term = &u * &q;
    let mut sum = Scalar::zero();
    let mut abs_sum = Scalar::zero();
    loop {
        sum = sum + &term;
        abs_sum = abs_sum + term.abs();
        let u_ratio = step(x)?;
        let u_next = &u * &u_ratio;
        let q_next = (summand.eval)(&Scalar::from(x + 1));
        let term_next = &u_next * &q_next;
        if x >= start_checks && !q.is_zero() {
            let u_bound = if u_ratio > limit { u_ratio } else { limit.clone() };
            let r = u_bound * (&q_next / &q);
            if r < one {
                let tail = &term_next.abs() / &(Scalar::one() - &r);
                if tail <= &policy.tail_tol * &abs_sum {
                    return Ok(sum);
                }
            }
        }
        if (x - first) as u64 >= policy.hard_cap {
            return Err(Error::TruncationCapExceeded {
                cap: policy.hard_cap,
            });
        }
        x += 1;
        u = u_next;
        q = q_next;
        term = term_next;
    }
}
