//! Values of the form `rational · constant`, where the constant is a
//! transcendental factor shared by every norm and lattice sum of one family
//! (`e^μ` for Charlier, `(1-μ)^(-γ-k)` for Meixner). Ratios of such values
//! cancel the constant and stay exact.

use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum ConstantFactor {
    One,
    /// `e^arg`
    Exp(Scalar),
    /// `base^exponent`, `base > 0`
    Power { base: Scalar, exponent: Scalar },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factored {
    pub rational: Scalar,
    pub factor: ConstantFactor,
}

impl Factored {
    pub fn plain(value: Scalar) -> Self {
        Factored {
            rational: value,
            factor: ConstantFactor::One,
        }
    }

    pub fn new(rational: Scalar, factor: ConstantFactor) -> Self {
        Factored { rational, factor }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    /// The numeric value; a float whenever the constant is irrational.
    pub fn value(&self, bits: u32) -> Scalar {
        match &self.factor {
            ConstantFactor::One => self.rational.clone(),
            ConstantFactor::Exp(arg) => &self.rational * &arg.exp(bits),
            ConstantFactor::Power { base, exponent } => {
                let p = base
                    .powf(exponent, bits)
                    .expect("power factor requires a positive base");
                &self.rational * &p
            }
        }
    }

    pub fn scale(&self, by: &Scalar) -> Factored {
        Factored {
            rational: &self.rational * by,
            factor: self.factor.clone(),
        }
    }

    /// `self / other`. Exact when both share the constant (or their power
    /// exponents differ by an integer); otherwise a float at `bits`.
    pub fn ratio(&self, other: &Factored, bits: u32) -> Result<Scalar> {
        let base_ratio = self
            .rational
            .checked_div(&other.rational)
            .ok_or_else(|| Error::Degenerate("normalising sum".into()))?;
        let correction = match (&self.factor, &other.factor) {
            (ConstantFactor::One, ConstantFactor::One) => None,
            (ConstantFactor::Exp(a), ConstantFactor::Exp(b)) => {
                if a == b {
                    None
                } else {
                    Some((a - b).exp(bits))
                }
            }
            (
                ConstantFactor::Power {
                    base: b1,
                    exponent: e1,
                },
                ConstantFactor::Power {
                    base: b2,
                    exponent: e2,
                },
            ) if b1 == b2 => {
                let diff = e1 - e2;
                if diff.is_zero() {
                    None
                } else {
                    Some(
                        b1.powf(&diff, bits)
                            .ok_or_else(|| Error::Degenerate("power base".into()))?,
                    )
                }
            }
            _ => {
                let num = Factored::new(Scalar::one(), self.factor.clone()).value(bits);
                let den = Factored::new(Scalar::one(), other.factor.clone()).value(bits);
                Some(num / den)
            }
        };
        Ok(match correction {
            None => base_ratio,
            Some(c) => base_ratio * c,
        })
    }

    /// Sum of two values carrying the same constant.
    pub fn add(&self, other: &Factored) -> Option<Factored> {
        (self.factor == other.factor).then(|| Factored {
            rational: &self.rational + &other.rational,
            factor: self.factor.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::digits_to_bits;

    #[test]
    fn shared_constants_cancel_exactly() {
        let mu = Scalar::from(2);
        let a = Factored::new(Scalar::from(48), ConstantFactor::Exp(mu.clone()));
        let b = Factored::new(Scalar::from(8), ConstantFactor::Exp(mu));
        assert_eq!(a.ratio(&b, 200).unwrap(), Scalar::from(6));
    }

    #[test]
    fn power_exponents_differing_by_integers_stay_exact() {
        let base = Scalar::ratio(1, 2);
        let gamma = Scalar::ratio(3, 2);
        let a = Factored::new(
            Scalar::one(),
            ConstantFactor::Power {
                base: base.clone(),
                exponent: -(&gamma + 2),
            },
        );
        let b = Factored::new(
            Scalar::one(),
            ConstantFactor::Power {
                base,
                exponent: -gamma,
            },
        );
        assert_eq!(a.ratio(&b, 200).unwrap(), Scalar::from(4));
    }

    #[test]
    fn irrational_value_is_float() {
        let v = Factored::new(Scalar::one(), ConstantFactor::Exp(Scalar::one()));
        let e = v.value(digits_to_bits(60));
        assert!(!e.is_exact());
        assert!((e.to_f64() - std::f64::consts::E).abs() < 1e-15);
    }
}
