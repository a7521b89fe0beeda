//! Coefficient reduction α = β + c f, denominator witnesses, and the
//! resulting semi-decision for membership in the left ideal ℤ(G)f.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, OrderedGroup, Positivity};
use crate::inverse::{InverseImage, InverseLimits, InversePartial};
use crate::ring::ZElement;

/// Which bounds on β coefficient reduction guarantees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionCase {
    /// m > Σ_s f(s): every |β(g)| ≤ m − 1.
    Strict,
    /// f(s) > 0 for all s and Σ_s f(s) = m: β(g) ∈ [−m, m − 1], and
    /// β(g) = −m forces β(g s⁻¹) < 0 for every s.
    Boundary,
}

#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub alpha: ZElement,
    pub beta: ZElement,
    pub c: ZElement,
    pub case: ReductionCase,
    /// Truncation order at which every rounding was unambiguous.
    pub order: usize,
    pub beta_linf: BigInt,
    /// Holds vacuously in the strict case.
    pub neighbor_condition: bool,
    /// False when some tail bound was extrapolated rather than proved.
    pub certified: bool,
    pub image: InverseImage,
}

/// Classifies f for coefficient reduction.
pub fn reduction_case(f: &ZElement) -> Result<ReductionCase> {
    let profile = f.classify()?;
    if !profile.semi_lopsided {
        return Err(Error::hypothesis(format!("`{f}` is not semi-lopsided")));
    }
    if profile.strict_reduction_case() {
        return Ok(ReductionCase::Strict);
    }
    // Σ|f(s)| ≤ m = Σ f(s) leaves only positive coefficients
    Ok(ReductionCase::Boundary)
}

/// floor(v + 1/2), the [−1/2, 1/2) rounding.
fn round_half_down(v: &BigRational) -> BigInt {
    (v + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Rounds αξ at one truncation; `None` when some value is too close to a
/// rounding boundary for the tail bound to decide.
fn try_round(image: &InverseImage, spec: crate::group::GroupSpec) -> Option<ZElement> {
    if image.tail_everywhere() >= 0.5 {
        return None;
    }
    let mut c = ZElement::zero(spec);
    for (g, num) in image.numerators.iter() {
        let v = BigRational::new(num.clone(), image.denominator.clone());
        let t = image.tail_at(spec, g);
        let k = round_half_down(&v);
        if t > 0.0 {
            let vf = v.to_f64().unwrap_or(f64::NAN);
            let slack = t * (1.0 + 1e-9) + 1e-15 * (1.0 + vf.abs());
            let lo = (vf - slack + 0.5).floor();
            let hi = (vf + slack + 0.5).floor();
            if lo != hi || !lo.is_finite() {
                return None;
            }
        }
        c.add_term(g.clone(), &k);
    }
    Some(c)
}

pub fn reduce_coefficients(alpha: &ZElement, inv: &InversePartial) -> Result<ReductionResult> {
    reduce_coefficients_with(alpha, inv, InverseLimits::default())
}

/// Rounds αξ to c and sets β = α − c f, doubling the truncation order while
/// any rounding is undecided.
pub fn reduce_coefficients_with(
    alpha: &ZElement,
    inv: &InversePartial,
    limits: InverseLimits,
) -> Result<ReductionResult> {
    let f = &inv.f;
    let spec = f.group();
    if alpha.group() != spec {
        return Err(Error::GroupMismatch(format!("α over {} but f over {spec}", alpha.group())));
    }
    let case = reduction_case(f)?;
    let mut start = inv.order.max(4);
    if let Some(grading) = &inv.grading {
        let degrees: Vec<BigRational> = alpha.iter().map(|(g, _)| grading.degree(spec, g)).collect();
        if let (Some(lo), Some(hi)) = (degrees.iter().min(), degrees.iter().max()) {
            let spread = (hi - lo).ceil().to_integer().to_usize().unwrap_or(usize::MAX);
            start = start.max(spread.saturating_add(4));
        }
    }
    let mut current = inv.clone();
    let mut order = start;
    loop {
        if order > current.order {
            if let Err(e) = current.extend_to(order.min(limits.max_order), limits) {
                return Err(depth_error(order, &e.to_string()));
            }
        }
        let image = InverseImage::compute(alpha, &current)?;
        if let Some(c) = try_round(&image, spec) {
            return finish(alpha, f, c, case, image);
        }
        if current.order >= limits.max_order {
            return Err(depth_error(current.order, "a value of αξ stays within the tail bound of a rounding boundary"));
        }
        order = (current.order * 2).min(limits.max_order);
    }
}

fn depth_error(order: usize, detail: &str) -> Error {
    Error::AdaptiveDepthExceeded { max_order: order, detail: detail.to_string() }
}

fn finish(alpha: &ZElement, f: &ZElement, c: ZElement, case: ReductionCase, image: InverseImage) -> Result<ReductionResult> {
    let spec = f.group();
    let beta = alpha.sub(&c.convolve_unchecked(f))?;
    let m = f.trace();
    let beta_linf = beta.norms().linf;
    let support: Vec<GroupElement> = f.support().into_iter().filter(|g| !spec.is_identity(g)).collect();
    let (within, neighbor_condition) = match case {
        ReductionCase::Strict => (beta_linf < m, true),
        ReductionCase::Boundary => {
            let neg_m = -m.clone();
            let range = beta.iter().all(|(_, b)| *b >= neg_m && *b < m);
            let neighbors = beta.iter().filter(|(_, b)| **b == neg_m).all(|(g, _)| {
                support
                    .iter()
                    .all(|s| beta.get(&spec.mul(g, &spec.inverse(s))).is_negative())
            });
            (range, neighbors)
        }
    };
    let certified = image.certified();
    if !(within && neighbor_condition) {
        let detail = format!("β = {beta} breaks the {case:?} bounds for α = {alpha}");
        return Err(if certified {
            Error::hypothesis(detail)
        } else {
            depth_error(image.order, &format!("{detail}; tail bound was extrapolated"))
        });
    }
    Ok(ReductionResult {
        alpha: alpha.clone(),
        beta,
        c,
        case,
        order: image.order,
        beta_linf,
        neighbor_condition,
        certified,
        image,
    })
}

/// A ⪯-minimal element of supp β; ties go to the least canonical form.
pub fn minimal_support_element(beta: &ZElement, og: &OrderedGroup) -> Result<GroupElement> {
    if beta.group() != og.spec() {
        return Err(Error::GroupMismatch(format!("β over {} but order on {}", beta.group(), og.spec())));
    }
    let support = beta.support();
    og.minimal_elements(&support)
        .into_iter()
        .next()
        .cloned()
        .ok_or_else(|| Error::hypothesis("β = 0 has no minimal support element"))
}

/// g₀ with (αξ)(g₀) ∈ (1/m)ℤ ∖ ℤ.
#[derive(Clone, Debug)]
pub struct Witness {
    pub g0: GroupElement,
    /// β(g₀)/m.
    pub value: BigRational,
    pub via_beta: ZElement,
    /// |(αξ_N)(g₀) − value − c(g₀)|.
    pub discrepancy: f64,
    /// Bound on |(αξ)(g₀) − (αξ_N)(g₀)|.
    pub tail_bound: f64,
    pub order: usize,
}

/// Tail allowed at the witness before the truncation is deepened.
pub const WITNESS_TAIL_TOLERANCE: f64 = 1e-9;

fn check_positive_support(f: &ZElement, og: &OrderedGroup) -> Result<()> {
    let spec = f.group();
    if spec != og.spec() {
        return Err(Error::GroupMismatch(format!("f over {spec} but order on {}", og.spec())));
    }
    for s in f.support() {
        if !spec.is_identity(&s) && og.is_positive(&s) != Positivity::Positive {
            return Err(Error::hypothesis(format!(
                "support element {} of f is not positive",
                spec.format_element(&s)
            )));
        }
    }
    Ok(())
}

/// Reduces and returns the witness, or `None` when β = 0.
pub fn denominator_witness(alpha: &ZElement, inv: &InversePartial, og: &OrderedGroup) -> Result<Option<Witness>> {
    Ok(witness_from(alpha, inv, og, InverseLimits::default())?.1)
}

fn witness_from(
    alpha: &ZElement,
    inv: &InversePartial,
    og: &OrderedGroup,
    limits: InverseLimits,
) -> Result<(ReductionResult, Option<Witness>)> {
    check_positive_support(&inv.f, og)?;
    let spec = inv.f.group();
    let m = inv.f.trace();
    let mut current = inv.clone();
    loop {
        let red = reduce_coefficients_with(alpha, &current, limits)?;
        if red.beta.is_zero() {
            return Ok((red, None));
        }
        let g0 = minimal_support_element(&red.beta, og)?;
        let tail = red.image.tail_at(spec, &g0);
        if tail > WITNESS_TAIL_TOLERANCE {
            if red.order >= limits.max_order {
                return Err(depth_error(red.order, "witness tail above tolerance"));
            }
            current.extend_to((red.order * 2).min(limits.max_order), limits)
                .map_err(|e| depth_error(red.order, &e.to_string()))?;
            continue;
        }
        let b0 = red.beta.get(&g0);
        if b0.abs() >= m {
            return Err(Error::hypothesis(format!("β(g₀) = {b0} is not a proper residue mod {m}")));
        }
        let value = BigRational::new(b0, m.clone());
        let gap = red.image.value(&g0) - &value - BigRational::from_integer(red.c.get(&g0));
        let discrepancy = gap.abs().to_f64().unwrap_or(f64::INFINITY);
        if discrepancy > tail * (1.0 + 1e-9) + 1e-300 {
            return Err(Error::hypothesis(format!(
                "(αξ_N)(g₀) misses β(g₀)/m by {discrepancy:e}, beyond the tail {tail:e}; is supp f positive?"
            )));
        }
        let witness = Witness {
            g0,
            value,
            via_beta: red.beta.clone(),
            discrepancy,
            tail_bound: tail,
            order: red.order,
        };
        return Ok((red, Some(witness)));
    }
}

#[derive(Clone, Debug)]
pub enum Membership {
    Member { c: ZElement },
    NonMember(Witness),
    Inconclusive { reason: String },
}

impl Membership {
    pub fn label(&self) -> &'static str {
        match self {
            Membership::Member { .. } => "member",
            Membership::NonMember(_) => "non_member",
            Membership::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// α ∈ ℤ(G)f iff β = 0; a nonzero β comes with a witness.
pub fn ideal_membership(alpha: &ZElement, inv: &InversePartial, og: &OrderedGroup) -> Result<Membership> {
    match witness_from(alpha, inv, og, InverseLimits::default()) {
        Ok((red, None)) => {
            if red.c.convolve_unchecked(&inv.f) != *alpha {
                return Err(Error::hypothesis("β = 0 but c f ≠ α"));
            }
            Ok(Membership::Member { c: red.c })
        }
        Ok((_, Some(w))) => Ok(Membership::NonMember(w)),
        Err(Error::AdaptiveDepthExceeded { max_order, detail }) => Ok(Membership::Inconclusive {
            reason: format!("undecided at order {max_order}: {detail}"),
        }),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub g0: String,
    pub value_num: String,
    pub value_den: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionRecord {
    pub alpha: String,
    pub beta: String,
    pub c: String,
    pub case: ReductionCase,
    pub order: usize,
    pub certified: bool,
    pub witness: Option<WitnessRecord>,
}

impl ReductionRecord {
    pub fn new(red: &ReductionResult, witness: Option<&Witness>) -> Self {
        let spec = red.alpha.group();
        ReductionRecord {
            alpha: red.alpha.to_string(),
            beta: red.beta.to_string(),
            c: red.c.to_string(),
            case: red.case,
            order: red.order,
            certified: red.certified,
            witness: witness.map(|w| WitnessRecord {
                g0: spec.format_element(&w.g0),
                value_num: w.value.numer().to_string(),
                value_den: w.value.denom().to_string(),
            }),
        }
    }
}

/// Reduction plus witness in one record.
pub fn reduction_record(alpha: &ZElement, inv: &InversePartial, og: &OrderedGroup) -> Result<ReductionRecord> {
    let (red, w) = witness_from(alpha, inv, og, InverseLimits::default())?;
    Ok(ReductionRecord::new(&red, w.as_ref()))
}

/// True when m·value is an integer not divisible by m.
pub fn witness_is_proper(w: &Witness, m: &BigInt) -> bool {
    let scaled = &w.value * BigRational::from_integer(m.clone());
    scaled.is_integer() && !scaled.to_integer().is_multiple_of(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::inverse::geometric_l2_partial;
    use crate::ring::parse_integer_expression;

    fn z(spec: &str, text: &str) -> ZElement {
        parse_integer_expression(spec.parse().unwrap(), text).unwrap()
    }

    fn setup(spec: &str, f: &str) -> (InversePartial, OrderedGroup) {
        let inv = geometric_l2_partial(&z(spec, f), 8).unwrap();
        let og = OrderedGroup::natural(spec.parse().unwrap()).unwrap();
        (inv, og)
    }

    #[test]
    fn reduction_examples_on_the_line() {
        let (inv, _) = setup("z(1)", "3 - a");
        let red = reduce_coefficients(&z("z(1)", "5"), &inv).unwrap();
        assert_eq!(red.beta, z("z(1)", "-1 - a + a^2"));
        assert_eq!(red.c, z("z(1)", "2 + a"));
        assert_eq!(red.case, ReductionCase::Strict);
        let red = reduce_coefficients(&z("z(1)", "3 - a"), &inv).unwrap();
        assert!(red.beta.is_zero());
        assert_eq!(red.c, z("z(1)", "1"));
        let red = reduce_coefficients(&z("z(1)", "a"), &inv).unwrap();
        assert_eq!(red.beta, z("z(1)", "a"));
        assert!(red.c.is_zero());
    }

    #[test]
    fn deeper_truncation_gives_the_same_reduction() {
        let (inv, _) = setup("heisenberg(1)", "3 - a - b");
        let alpha = z("heisenberg(1)", "7 - 4 a b^-1 + 9 c + 2 b^2");
        let a = reduce_coefficients(&alpha, &inv).unwrap();
        let deep = geometric_l2_partial(&inv.f, 2 * a.order).unwrap();
        let b = reduce_coefficients(&alpha, &deep).unwrap();
        assert_eq!((a.beta, a.c), (b.beta, b.c));
    }

    #[test]
    fn boundary_case_on_z5() {
        let f = z("z(5)", "5 + e1 + e2 + e3 + e4 + e5");
        assert_eq!(reduction_case(&f).unwrap(), ReductionCase::Boundary);
        let inv = geometric_l2_partial(&f, 8).unwrap();
        let red = reduce_coefficients(&z("z(5)", "-9 e1 + 4 e2^-1 - 10"), &inv).unwrap();
        assert_eq!(red.case, ReductionCase::Boundary);
        assert!(red.neighbor_condition);
        assert_eq!(reduction_case(&z("z(5)", "5 - e1 - e2 - e3 - e4 - e5")).unwrap(), ReductionCase::Strict);
    }

    #[test]
    fn minimal_elements_with_tie_breaks() {
        let beta = z("z(1)", "-1 - a + a^2");
        let og = OrderedGroup::natural(GroupSpec::FreeAbelian(1)).unwrap();
        assert!(GroupSpec::FreeAbelian(1).is_identity(&minimal_support_element(&beta, &og).unwrap()));
        let free = OrderedGroup::natural(GroupSpec::FreeGroup(2)).unwrap();
        let g = minimal_support_element(&z("free(2)", "a + b"), &free).unwrap();
        assert_eq!(free.spec().format_element(&g), "a");
        let h = OrderedGroup::natural(GroupSpec::Heisenberg(1)).unwrap();
        let g = minimal_support_element(&z("heisenberg(1)", "a + a b + b"), &h).unwrap();
        assert_eq!(h.spec().format_element(&g), "b");
        assert!(minimal_support_element(&ZElement::zero(GroupSpec::FreeAbelian(1)), &og).is_err());
    }

    #[test]
    fn witnesses_on_the_line() {
        let (inv, og) = setup("z(1)", "3 - a");
        let w = denominator_witness(&z("z(1)", "1"), &inv, &og).unwrap().unwrap();
        assert!(og.spec().is_identity(&w.g0));
        assert_eq!(w.value, BigRational::new(1.into(), 3.into()));
        assert_eq!(w.discrepancy, 0.0);
        let w = denominator_witness(&z("z(1)", "5"), &inv, &og).unwrap().unwrap();
        assert_eq!(w.value, BigRational::new((-1).into(), 3.into()));
        assert!(witness_is_proper(&w, &BigInt::from(3)));
        let member = z("z(1)", "(1 + a)(3 - a)");
        assert!(denominator_witness(&member, &inv, &og).unwrap().is_none());
    }

    #[test]
    fn membership_verdicts() {
        let (inv, og) = setup("z(1)", "3 - a");
        let m = ideal_membership(&ZElement::zero(og.spec()), &inv, &og).unwrap();
        assert!(matches!(m, Membership::Member { ref c } if c.is_zero()));
        let m = ideal_membership(&z("z(1)", "(2 + a)(3 - a)"), &inv, &og).unwrap();
        assert!(matches!(m, Membership::Member { ref c } if *c == z("z(1)", "2 + a")));
        assert_eq!(ideal_membership(&z("z(1)", "1"), &inv, &og).unwrap().label(), "non_member");
    }

    #[test]
    fn non_positive_support_is_rejected() {
        let f = z("z(1)", "3 - a^-1");
        let inv = geometric_l2_partial(&f, 4).unwrap();
        let og = OrderedGroup::natural(GroupSpec::FreeAbelian(1)).unwrap();
        assert!(matches!(denominator_witness(&z("z(1)", "1"), &inv, &og), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn record_serializes() {
        let (inv, og) = setup("z(1)", "3 - a");
        let rec = reduction_record(&z("z(1)", "5"), &inv, &og).unwrap();
        assert_eq!(rec.beta, "-1 - a + a^2");
        let w = rec.witness.unwrap();
        assert_eq!((w.g0.as_str(), w.value_num.as_str(), w.value_den.as_str()), ("1", "-1", "3"));
    }
}
