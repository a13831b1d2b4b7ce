//! Rising factorials, binomials and generalized hypergeometric series.
//!
//! Series are summed with the term-ratio recurrence
//! `t_{k+1} = t_k · Π(a_i + k) / Π(b_j + k) · z / (k + 1)`, so no factorial
//! or Pochhammer symbol is ever recomputed from scratch.

use rug::Integer;

use super::scalar::{digits_to_bits, Scalar, DEFAULT_DIGITS};
use crate::error::{Error, Result};

/// Rising factorial `(a)_k = a (a+1) ··· (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &Scalar, k: u64) -> Scalar {
    let mut acc = Scalar::one();
    let mut factor = a.clone();
    for _ in 0..k {
        acc = acc * &factor;
        factor = factor + 1;
    }
    acc
}

/// `n choose k`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    let k = u32::try_from(k.min(n - k)).expect("binomial index too large");
    Scalar::from(Integer::from(Integer::from(n).binomial(k)))
}

pub fn factorial(n: u64) -> Scalar {
    let n = u32::try_from(n).expect("factorial argument too large");
    Scalar::from(Integer::from(Integer::factorial(n)))
}

/// Parameters of `pFq(a_1..a_p; b_1..b_q; z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PfqSpec {
    pub numerator: Vec<Scalar>,
    pub denominator: Vec<Scalar>,
    pub argument: Scalar,
}

impl PfqSpec {
    pub fn new(numerator: Vec<Scalar>, denominator: Vec<Scalar>, argument: Scalar) -> Self {
        PfqSpec {
            numerator,
            denominator,
            argument,
        }
    }

    /// Index of the last nonzero term when some numerator parameter is a
    /// nonpositive integer `-m` (the smallest such `m` wins).
    pub fn termination_index(&self) -> Option<u64> {
        self.numerator
            .iter()
            .filter_map(Scalar::nonpositive_integer_magnitude)
            .min()
    }

    /// Ratio `t_{k+1} / t_k`, or the offending parameter if a denominator
    /// factor `b + k` vanishes.
    fn term_ratio(&self, k: u64) -> std::result::Result<Scalar, usize> {
        let kk = Scalar::from(k);
        let mut ratio = self.argument.clone();
        for a in &self.numerator {
            ratio = ratio * (a + &kk);
        }
        for (idx, b) in self.denominator.iter().enumerate() {
            let factor = b + &kk;
            if factor.is_zero() {
                return Err(idx);
            }
            ratio = ratio / factor;
        }
        Ok(ratio / (k as i64 + 1))
    }

    fn pole(&self, idx: usize, k: u64) -> Error {
        Error::DenominatorPole {
            parameter: self.denominator[idx].to_string(),
            index: k + 1,
        }
    }
}

/// Sum of a terminating series `Σ_{k=0}^{m} Π(a)_k / Π(b)_k · z^k / k!`.
///
/// A denominator parameter that is a nonpositive integer is harmless as long
/// as its pole lies beyond the last term; otherwise `DenominatorPole`.
/// A zero argument always returns 1.
pub fn terminating_pfq(spec: &PfqSpec) -> Result<Scalar> {
    if spec.argument.is_zero() {
        return Ok(Scalar::one());
    }
    let last = spec.termination_index().ok_or(Error::NotTerminating)?;
    let mut term = Scalar::one();
    let mut sum = Scalar::one();
    for k in 0..last {
        let ratio = spec.term_ratio(k).map_err(|idx| spec.pole(idx, k))?;
        term = term * ratio;
        sum = sum + &term;
    }
    Ok(sum)
}

/// Result of [`accelerated_pfq_at_minus_one`].
#[derive(Clone, Debug, PartialEq)]
pub struct Accelerated {
    pub value: Scalar,
    pub converged: bool,
    /// Number of transformed terms (or series terms, when terminating) used.
    pub terms: usize,
}

/// `pFq(a; b; -1)` for series that need not converge, summed with the Euler
/// transformation
///
/// ```text
/// Σ_k (-1)^k c_k = Σ_j (-1)^j Δ^j c_0 / 2^(j+1)
/// ```
///
/// where `c_k = Π(a)_k / (Π(b)_k k!)` and `Δ` is the forward difference in
/// `k`. For `p = q + 1` the only singularity of the series is the branch
/// point at `z = 1`, so the transformed series converges geometrically (ratio
/// 1/2) to the analytic continuation even when the original diverges with
/// algebraically growing terms.
///
/// `converged` is set once three successive transformed estimates differ by
/// less than `tol` relative to the running estimate. Terminating input is
/// summed directly and always reports convergence.
pub fn accelerated_pfq_at_minus_one(spec: &PfqSpec, tol: &Scalar) -> Result<Accelerated> {
    if spec.argument != Scalar::from(-1) {
        return Err(Error::Domain(format!(
            "accelerated summation expects argument -1, got {}",
            spec.argument
        )));
    }
    if let Some(last) = spec.termination_index() {
        let value = terminating_pfq(spec)?;
        return Ok(Accelerated {
            value,
            converged: true,
            terms: last as usize + 1,
        });
    }

    let tol_digits = {
        let t = tol.abs().to_f64();
        if t > 0.0 && t.is_finite() {
            (-t.log10()).ceil().clamp(1.0, 2000.0) as u32
        } else {
            2000
        }
    };
    let input_bits = spec
        .numerator
        .iter()
        .chain(&spec.denominator)
        .filter_map(Scalar::precision_bits)
        .max();
    let out_bits = input_bits
        .unwrap_or(0)
        .max(digits_to_bits(DEFAULT_DIGITS))
        .max(digits_to_bits(tol_digits + 10));
    // Each transformed term gains one bit; forming Δ^j c_0 loses about j bits.
    let max_terms = (f64::from(tol_digits + 10) * std::f64::consts::LOG2_10).ceil() as usize + 40;
    let work_bits = out_bits + max_terms as u32 + 64;

    let lift = |s: &Scalar| Scalar::from_float(s.to_float(work_bits));
    let work_spec = PfqSpec {
        numerator: spec.numerator.iter().map(lift).collect(),
        denominator: spec.denominator.iter().map(lift).collect(),
        argument: Scalar::one(),
    };
    let mut coeffs = Vec::with_capacity(max_terms + 1);
    coeffs.push(lift(&Scalar::one()));
    for k in 0..max_terms as u64 {
        let ratio = work_spec.term_ratio(k).map_err(|idx| spec.pole(idx, k))?;
        let next = coeffs.last().unwrap() * &ratio;
        coeffs.push(next);
    }

    let tol_work = lift(&tol.abs());
    let mut estimate = lift(&Scalar::zero());
    let mut weight = lift(&Scalar::ratio(1, 2));
    let mut streak = 0;
    let mut converged = false;
    let mut used = 0;
    let mut diffs = coeffs;
    for j in 0..=max_terms {
        let mut term = &diffs[0] * &weight;
        if j % 2 == 1 {
            term = -term;
        }
        estimate = estimate + &term;
        used = j + 1;
        if term.abs() <= &tol_work * &estimate.abs() {
            streak += 1;
            if streak >= 3 {
                converged = true;
                break;
            }
        } else {
            streak = 0;
        }
        weight = weight / 2;
        let len = diffs.len();
        if len < 2 {
            break;
        }
        for i in 0..len - 1 {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
        diffs.pop();
    }

    Ok(Accelerated {
        value: Scalar::from_float(estimate.to_float(out_bits)),
        converged,
        terms: used,
    })
}
