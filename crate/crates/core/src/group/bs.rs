//! BS(1,n) as affine maps x ↦ nᵗ x + r with r ∈ ℤ[1/n].
//!
//! a is x ↦ n x and b is x ↦ x + 1, composed right to left, so a b a⁻¹ = bⁿ.

use serde::{Deserialize, Serialize};

/// num / n^exp in lowest terms: either `exp == 0` or n does not divide `num`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RadixFraction {
    pub num: i128,
    pub exp: u32,
}

fn power(n: u32, e: u32) -> i128 {
    (n as i128)
        .checked_pow(e)
        .unwrap_or_else(|| panic!("BS(1,{n}) coordinate overflow at {n}^{e}"))
}

fn scale(num: i128, by: i128) -> i128 {
    num.checked_mul(by)
        .unwrap_or_else(|| panic!("BS(1,n) coordinate overflow"))
}

impl RadixFraction {
    pub fn zero() -> Self {
        RadixFraction { num: 0, exp: 0 }
    }

    pub fn integer(num: i128) -> Self {
        RadixFraction { num, exp: 0 }
    }

    pub(super) fn is_canonical(&self, n: u32) -> bool {
        self.exp == 0 || (self.num % n as i128 != 0)
    }

    fn normalize(mut num: i128, mut exp: u32, n: u32) -> Self {
        if num == 0 {
            return Self::zero();
        }
        let n = n as i128;
        while exp > 0 && num % n == 0 {
            num /= n;
            exp -= 1;
        }
        RadixFraction { num, exp }
    }

    /// self · n^shift for any integer shift.
    fn shifted(self, shift: i64, n: u32) -> Self {
        let e = self.exp as i64 - shift;
        if e >= 0 {
            Self::normalize(self.num, e as u32, n)
        } else {
            RadixFraction {
                num: scale(self.num, power(n, (-e) as u32)),
                exp: 0,
            }
        }
    }

    fn add(self, other: Self, n: u32) -> Self {
        let e = self.exp.max(other.exp);
        let a = scale(self.num, power(n, e - self.exp));
        let b = scale(other.num, power(n, e - other.exp));
        Self::normalize(
            a.checked_add(b)
                .unwrap_or_else(|| panic!("BS(1,{n}) coordinate overflow")),
            e,
            n,
        )
    }

    pub fn to_f64(self, n: u32) -> f64 {
        self.num as f64 / (n as f64).powi(self.exp as i32)
    }

    /// Sign of the represented rational.
    pub fn signum(self) -> i64 {
        self.num.signum() as i64
    }
}

pub(super) fn mul(
    n: u32,
    (t1, r1): (i64, &RadixFraction),
    (t2, r2): (i64, &RadixFraction),
) -> (i64, RadixFraction) {
    (t1 + t2, r1.add(r2.shifted(t1, n), n))
}

pub(super) fn inv(n: u32, (t, r): (i64, &RadixFraction)) -> (i64, RadixFraction) {
    let moved = r.shifted(-t, n);
    (-t, RadixFraction { num: -moved.num, exp: moved.exp })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_stay_reduced() {
        let half = RadixFraction { num: 1, exp: 1 };
        let sum = half.add(half, 2);
        assert_eq!(sum, RadixFraction::integer(1));
        assert_eq!(RadixFraction::integer(3).shifted(-2, 2), RadixFraction { num: 3, exp: 2 });
        assert_eq!(RadixFraction { num: 3, exp: 2 }.shifted(3, 2), RadixFraction::integer(6));
    }

    #[test]
    fn inverse_composes_to_identity() {
        let g = (3, RadixFraction { num: 5, exp: 2 });
        let gi = inv(2, (g.0, &g.1));
        assert_eq!(mul(2, (g.0, &g.1), (gi.0, &gi.1)), (0, RadixFraction::zero()));
        assert_eq!(mul(2, (gi.0, &gi.1), (g.0, &g.1)), (0, RadixFraction::zero()));
    }
}
