//! Independent reference computations used to check the main engines.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::QElement;

/// τ(xᵏ) by summing the weight of every k-step path that returns to 1.
pub fn return_probability_by_paths(x: &QElement, k: usize) -> Result<BigRational> {
    let spec = x.group();
    let steps: Vec<_> = x.sorted_terms().into_iter().map(|(g, c)| (g.clone(), c.clone())).collect();
    let paths = (steps.len() as f64).powi(k as i32);
    if paths > 5e7 {
        return Err(Error::CapExceeded { cap: 50_000_000, context: format!("enumerating {paths:e} paths") });
    }
    let mut total = BigRational::zero();
    let mut stack = vec![(spec.identity(), BigRational::one(), 0usize)];
    while let Some((g, w, depth)) = stack.pop() {
        if depth == k {
            if spec.is_identity(&g) {
                total += w;
            }
            continue;
        }
        for (s, c) in &steps {
            stack.push((spec.mul(&g, s), &w * c, depth + 1));
        }
    }
    Ok(total)
}

/// ∫₀¹ log(1 − cos 2πt) dt by double-exponential quadrature, which copes
/// with the logarithmic endpoint singularities. The exact value is −log 2.
pub fn log_det_symmetric_line() -> (f64, f64) {
    let r = quadrature::double_exponential::integrate(
        |t: f64| (2.0 * (PI * t).sin().powi(2)).ln(),
        0.0,
        1.0,
        1e-12,
    );
    (r.integral, r.error_estimate)
}

/// C(2j, j) 4^{−j}, the return probability of the line walk at time 2j.
pub fn central_binomial_ratio(j: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 1..=j {
        // consecutive terms differ by the factor (2i − 1)/(2i)
        acc *= BigRational::new(((2 * i - 1) as i64).into(), ((2 * i) as i64).into());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_expression;

    #[test]
    fn paths_on_the_line() {
        let x = parse_expression("z(1)".parse().unwrap(), "1/2 a + 1/2 a^-1").unwrap();
        assert_eq!(return_probability_by_paths(&x, 2).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(return_probability_by_paths(&x, 4).unwrap(), BigRational::new(3.into(), 8.into()));
        assert!(return_probability_by_paths(&x, 3).unwrap().is_zero());
        assert_eq!(central_binomial_ratio(2), BigRational::new(3.into(), 8.into()));
    }

    #[test]
    fn quadrature_oracle() {
        let (v, err) = log_det_symmetric_line();
        assert!((v + 2f64.ln()).abs() < 1e-10, "{v} {err}");
    }
}
