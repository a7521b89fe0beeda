use num_rational::BigRational;

use super::coefficient::rational_to_f64;
use super::RingElement;
use crate::error::Result;
use crate::group::GroupSpec;

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// A float element with a bound on the pointwise distance to the exact one:
/// |exact(g) − value(g)| ≤ error for every g.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatElement {
    pub value: RingElement<f64>,
    pub error: f64,
}

impl FloatElement {
    pub fn exact(value: RingElement<f64>) -> Self {
        FloatElement { value, error: 0.0 }
    }

    pub fn from_rational(q: &RingElement<BigRational>) -> Self {
        let value = q.map(rational_to_f64);
        let error = value.iter().map(|(_, c)| c.abs() * UNIT_ROUNDOFF).fold(0.0, f64::max);
        FloatElement { value, error }
    }

    pub fn group(&self) -> GroupSpec {
        self.value.group()
    }

    /// ε_out = ε_a‖b‖₁ + ε_b‖a‖₁ + ε_a ε_b |supp| plus float rounding of the sums.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        let value = self.value.convolve(&other.value)?;
        let a1 = self.value.norms().l1;
        let b1 = other.value.norms().l1;
        let supp = self.value.support_len().max(other.value.support_len()) as f64;
        let terms = self.value.support_len().min(other.value.support_len()) as f64;
        let propagated = self.error * b1 + other.error * a1 + self.error * other.error * supp;
        let rounding = 2.0 * (terms + 1.0) * UNIT_ROUNDOFF * a1 * b1;
        Ok(FloatElement { value, error: propagated + rounding })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let value = self.value.add(&other.value)?;
        let scale = value.norms().linf;
        Ok(FloatElement { value, error: self.error + other.error + scale * UNIT_ROUNDOFF })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_expression;

    #[test]
    fn error_bound_covers_exact_convolution() {
        let g = GroupSpec::FreeAbelian(2);
        let a = parse_expression(g, "1/3 + 2/7 a - 5/11 b^-1").unwrap();
        let b = parse_expression(g, "1/9 a b - 1/13 + 4/17 b").unwrap();
        let exact = a.convolve(&b).unwrap();
        let fa = a.to_float();
        let fb = b.to_float();
        let fc = fa.convolve(&fb).unwrap();
        for (g, c) in exact.iter() {
            let diff = (rational_to_f64(c) - fc.value.get(g)).abs();
            assert!(diff <= fc.error, "{diff} > {}", fc.error);
        }
        assert!(fc.error < 1e-14);
    }
}
