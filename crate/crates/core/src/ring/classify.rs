use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Coefficient, QElement, RingElement, ZElement};
use crate::error::{Error, Result};
use crate::group::GroupElement;

/// ℓ¹, squared ℓ², ℓ∞ norms and the augmentation Σ_g α(g).
#[derive(Clone, Debug, PartialEq)]
pub struct Norms<C> {
    pub l1: C,
    pub l2_squared: C,
    pub linf: C,
    pub augmentation: C,
}

impl<C: Coefficient> Norms<C> {
    pub fn l2(&self) -> f64 {
        self.l2_squared.to_f64().sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LopsidedClass {
    /// m > Σ_{g≠1} |f(g)|.
    Lopsided,
    /// m = Σ_{g≠1} |f(g)| without being well-balanced.
    SemiLopsidedBoundary,
    /// Off-identity coefficients ≤ 0 and Σ_g f(g) = 0.
    WellBalanced,
    None,
}

/// Classification of an integer element f with f(1) = m > 0.
#[derive(Clone, Debug, PartialEq)]
pub struct LopsidedProfile {
    pub m: BigInt,
    pub tail_l1: BigInt,
    /// Σ_{s∈S} f(s), signed.
    pub off_identity_sum: BigInt,
    pub class: LopsidedClass,
    pub semi_lopsided: bool,
    pub well_balanced: bool,
    /// supp(f) ∖ {1}, sorted.
    pub support: Vec<GroupElement>,
}

impl LopsidedProfile {
    /// Strict case of coefficient reduction: m > Σ_s f(s).
    pub fn strict_reduction_case(&self) -> bool {
        self.m > self.off_identity_sum
    }
}

impl RingElement<BigInt> {
    pub fn classify(&self) -> Result<LopsidedProfile> {
        let m = self.trace();
        if !m.is_positive() {
            return Err(Error::hypothesis(format!(
                "trace of `{self}` is {m}; negate f first, X_f = X_{{-f}}"
            )));
        }
        let id = self.group.identity();
        let mut tail_l1 = <BigInt as Zero>::zero();
        let mut off_identity_sum = <BigInt as Zero>::zero();
        let mut all_nonpositive = true;
        for (g, c) in self.iter() {
            if *g == id {
                continue;
            }
            tail_l1 += Signed::abs(c);
            off_identity_sum += c;
            all_nonpositive &= !c.is_positive();
        }
        let well_balanced = all_nonpositive && Zero::is_zero(&(&m + &off_identity_sum));
        let semi_lopsided = m >= tail_l1;
        let class = if m > tail_l1 {
            LopsidedClass::Lopsided
        } else if well_balanced {
            LopsidedClass::WellBalanced
        } else if semi_lopsided {
            LopsidedClass::SemiLopsidedBoundary
        } else {
            LopsidedClass::None
        };
        let mut support: Vec<GroupElement> = self.iter().map(|(g, _)| g.clone()).filter(|g| *g != id).collect();
        support.sort();
        Ok(LopsidedProfile { m, tail_l1, off_identity_sum, class, semi_lopsided, well_balanced, support })
    }
}

/// f = m(1 − x) with x = y/m and y = −Σ_{s≠1} f(s) s.
#[derive(Clone, Debug)]
pub struct HarmonicParts {
    pub m: BigInt,
    pub y: ZElement,
}

impl HarmonicParts {
    pub fn x(&self) -> QElement {
        let m = BigRational::from_integer(self.m.clone());
        self.y.map(|c| BigRational::from_integer(c.clone()) / &m)
    }
}

/// Splits f with f(1) > 0 into its harmonic parts.
pub fn harmonic_parts(f: &ZElement) -> Result<HarmonicParts> {
    let m = f.trace();
    if !m.is_positive() {
        return Err(Error::hypothesis(format!("f(1) = {m} must be positive")));
    }
    let id = f.group().identity();
    let y = f.filter(|g, _| *g != id).neg();
    Ok(HarmonicParts { m, y })
}
