//! Scalar backends and hypergeometric building blocks.

mod factored;
mod hyper;
mod scalar;

pub use factored::{ConstantFactor, Factored};
pub use hyper::{
    accelerated_pfq_at_minus_one, binomial, factorial, pochhammer, terminating_pfq, Accelerated,
    PfqSpec,
};
pub use scalar::{
    bits_to_digits, digits_to_bits, Backend, ParseScalarError, Scalar, DEFAULT_DIGITS, MIN_DIGITS,
};
