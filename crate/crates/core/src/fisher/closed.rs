//! Closed-form expressions for the relative Fisher information, evaluated
//! literally.

use crate::error::{Error, Result};
use crate::families::{FamilySpec, Params};
use crate::numerics::{
    accelerated_pfq_at_minus_one, bits_to_digits, factorial, pochhammer, terminating_pfq, PfqSpec,
    Scalar,
};

/// A closed-form value and whether every series inside it converged.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedValue {
    pub value: Scalar,
    pub converged: bool,
}

/// The Hahn closed form `A (B1 B2 B3 + C1 C2 C3 + D1 D2 D3)`.
///
/// The Gamma functions of the displayed factors are grouped into rising
/// factorials: `a` collects the whole prefactor, and the `Γ(s+n+1)` of `C3`
/// with the `1/Γ(s+2)` of `C2` becomes `gamma_ratio = (s+2)_{n-1}` with
/// `s = α + β`. `c2` excludes that Gamma, and `c3_series` is the bare
/// `3F2(1, (s+3)/2+n, s+n+1; n+1, (s+1)/2+n | -1)`, which diverges for
/// `s > -1` and is summed by the Euler transform.
#[derive(Clone, Debug, PartialEq)]
pub struct HahnClosedFactors {
    pub a: Scalar,
    pub b1: Scalar,
    pub b2: Scalar,
    pub b3: Scalar,
    pub c1: Scalar,
    pub c2: Scalar,
    pub gamma_ratio: Scalar,
    pub c3_series: Scalar,
    pub c3_converged: bool,
    pub d1: Scalar,
    pub d2: Scalar,
    pub d3: Scalar,
}

impl HahnClosedFactors {
    pub fn value(&self) -> Scalar {
        let b = &self.b1 * &self.b2 * &self.b3;
        let c = &self.c1 * &self.c2 * &self.gamma_ratio * &self.c3_series;
        let d = &self.d1 * &self.d2 * &self.d3;
        &self.a * &(b + c + d)
    }
}

fn ratio(num: Scalar, den: Scalar, what: &str) -> Result<Scalar> {
    num.checked_div(&den)
        .ok_or_else(|| Error::Degenerate(what.to_string()))
}

pub fn closed_form(family: &FamilySpec, n: u32) -> Result<ClosedValue> {
    family.check_degree(n)?;
    if n == 0 {
        return Ok(ClosedValue {
            value: Scalar::zero(),
            converged: true,
        });
    }
    let nn = Scalar::from(n);
    let ni = i64::from(n);
    let value = match family.params() {
        Params::Charlier { mu } => &nn / mu,
        Params::Meixner { gamma, mu } => {
            let q = Scalar::one() - mu;
            let pre = &nn * &q.square() / (mu * &(gamma + (ni - 1)));
            let series = terminating_pfq(&PfqSpec::new(
                vec![Scalar::from(1 - ni), Scalar::one()],
                vec![Scalar::from(2 - ni) - gamma],
                mu.clone(),
            ))?;
            pre * series
        }
        Params::Kravchuk { p, size } => {
            let big = i64::from(*size);
            let q = Scalar::one() - p;
            let pre = &nn / &(p * &q * (big - ni + 1));
            let series = terminating_pfq(&PfqSpec::new(
                vec![Scalar::from(1 - ni), Scalar::one()],
                vec![Scalar::from(big - ni + 2)],
                p / &(p - 1),
            ))?;
            pre * series
        }
        Params::Hahn { .. } => {
            let factors = hahn_factors(family, n)?;
            return Ok(ClosedValue {
                value: factors.value(),
                converged: factors.c3_converged,
            });
        }
    };
    Ok(ClosedValue {
        value,
        converged: true,
    })
}

/// Factors of the Hahn closed form at degree `n ≥ 1`.
pub fn hahn_factors(family: &FamilySpec, n: u32) -> Result<HahnClosedFactors> {
    let Params::Hahn { alpha, beta, size } = family.params() else {
        return Err(Error::Domain(format!("{family} is not a Hahn family")));
    };
    family.check_degree(n)?;
    if n == 0 {
        return Err(Error::Domain("the Hahn closed form starts at degree 1".into()));
    }
    let big = i64::from(*size);
    let ni = i64::from(n);
    let nu = u64::from(n);
    let m = nu - 1;
    let s = alpha + beta;
    let half_lo = (&s + 1) / 2;
    let half_hi = (&s + 3) / 2;
    let p = pochhammer;
    let sign = |k: i64| if k % 2 == 0 { Scalar::one() } else { Scalar::from(-1) };
    let fact_m = factorial(m);

    // (s+1)_n / (s+1) = (s+2)_{n-1} keeps the prefactor finite at s = -1.
    let a = Scalar::from(ni * ni) * (&s + (2 * ni + 1)) * factorial(u64::try_from(big - ni - 1).unwrap())
        / factorial(nu)
        * p(&(&s + (ni + 1)), nu).square()
        / factorial(u64::try_from(big - 1).unwrap())
        * p(&(&s + 2), m);
    let a = ratio(
        a,
        p(&(alpha + 1), nu) * p(&(beta + 1), nu) * p(&(&s + (big + 1)), nu),
        "Hahn prefactor",
    )?;

    let common_den = p(&(&s + (ni + 2)), m) * p(&(-&s - (ni + 1)), m) * (&s + 2);
    let b1 = ratio(
        &fact_m * &(beta + 1) * (&s + (big + 1)) * p(&(-&s - (ni + big)), m) * p(&(beta + 2), m),
        &common_den * &(beta + big),
        "B1",
    )?
    .square();
    let b2 = ratio(
        sign(ni - 1) * p(&(alpha + 1), m) * p(&half_hi, m) * p(&(&s + 1), m) * p(&Scalar::from(1 - big), m),
        &fact_m * &p(&half_lo, m) * p(&(beta + 1), m) * p(&(&s + (big + 1)), m),
        "B2",
    )?;
    let b3 = terminating_pfq(&PfqSpec::new(
        vec![
            Scalar::from(1 - ni),
            Scalar::one(),
            -beta + (1 - ni),
            -&s + (1 - ni - big),
            -&half_lo + (2 - ni),
        ],
        vec![
            -alpha + (1 - ni),
            -&half_hi + (2 - ni),
            -&s + (1 - ni),
            Scalar::from(1 - ni + big),
        ],
        Scalar::from(-1),
    ))?;

    let c1 = ratio(
        Scalar::from(2) * sign(ni) * fact_m.square() * (beta + 1) * (&s + (big + 1)) * p(&(-&s - (ni + big)), m),
        p(&(&s + (ni + 2)), m).square() * p(&(-&s - (ni + 1)), m).square() * (&s + 2).square(),
        "C1",
    )?;
    let c2 = ratio(
        p(&(beta + 2), m)
            * Scalar::from(1 - big)
            * (alpha + 1)
            * p(&(-alpha - ni), m)
            * p(&Scalar::from(2 - big), m)
            * (&s + (2 * ni + 1)),
        factorial(nu) * (-beta - big).square(),
        "C2",
    )?;
    let gamma_ratio = p(&(&s + 2), m);
    let bits = family.backend().bits();
    let tol = Scalar::pow10(-(bits_to_digits(bits) as i32 / 2));
    let c3 = accelerated_pfq_at_minus_one(
        &PfqSpec::new(
            vec![Scalar::one(), &half_hi + ni, &s + (ni + 1)],
            vec![Scalar::from(ni + 1), &half_lo + ni],
            Scalar::from(-1),
        ),
        &tol,
    )?;

    let d1 = ratio(
        &fact_m * &Scalar::from(big - 1) * (alpha + 1) * p(&(-alpha - ni), m) * p(&Scalar::from(2 - big), m),
        &common_den * &(beta + big),
        "D1",
    )?
    .square();
    let d2 = ratio(
        sign(ni - 1) * p(&half_hi, m) * p(&(beta + 1), m) * p(&(&s + (big + 1)), m) * p(&(&s + 1), m),
        &fact_m * &p(&Scalar::from(1 - big), m) * p(&(alpha + 1), m) * p(&half_lo, m),
        "D2",
    )?;
    let d3 = terminating_pfq(&PfqSpec::new(
        vec![
            Scalar::from(1 - ni),
            Scalar::one(),
            Scalar::from(1 - ni + big),
            -alpha + (1 - ni),
            -&half_lo + (2 - ni),
        ],
        vec![
            -&half_hi + (2 - ni),
            -beta + (1 - ni),
            -&s + (1 - ni - big),
            -&s + (1 - ni),
        ],
        Scalar::from(-1),
    ))?;

    Ok(HahnClosedFactors {
        a,
        b1,
        b2,
        b3,
        c1,
        c2,
        gamma_ratio,
        c3_series: c3.value,
        c3_converged: c3.converged,
        d1,
        d2,
        d3,
    })
}
