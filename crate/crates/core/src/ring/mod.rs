//! Finitely supported functions G → scalars with convolution
//! (αβ)(g) = Σ_h α(h) β(h⁻¹g), adjoint α*(g) = α(g⁻¹) and trace τ(α) = α(1).

mod classify;
mod coefficient;
mod float;
mod parse;
mod serial;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

pub use classify::{harmonic_parts, HarmonicParts, LopsidedClass, LopsidedProfile, Norms};
pub use coefficient::Coefficient;
pub use float::FloatElement;
pub use parse::{parse_expression, parse_integer_expression};
pub use serial::TermRecord;

/// Exact rational scalars.
pub type Rational = BigRational;

/// An element of ℚ(G).
pub type QElement = RingElement<BigRational>;

/// An element of ℤ(G).
pub type ZElement = RingElement<BigInt>;

/// A finitely supported function on a group. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct RingElement<C> {
    group: GroupSpec,
    coeffs: FxHashMap<GroupElement, C>,
}

impl<C: Coefficient> RingElement<C> {
    pub fn zero(group: GroupSpec) -> Self {
        RingElement { group, coeffs: FxHashMap::default() }
    }

    /// δ₁.
    pub fn one(group: GroupSpec) -> Self {
        Self::monomial(group, group.identity(), C::one())
    }

    pub fn delta(group: GroupSpec, g: GroupElement) -> Self {
        Self::monomial(group, g, C::one())
    }

    pub fn monomial(group: GroupSpec, g: GroupElement, c: C) -> Self {
        let mut out = Self::zero(group);
        out.add_term(g, &c);
        out
    }

    pub fn scalar(group: GroupSpec, c: C) -> Self {
        Self::monomial(group, group.identity(), c)
    }

    /// Sums repeated group elements.
    pub fn from_terms(group: GroupSpec, terms: impl IntoIterator<Item = (GroupElement, C)>) -> Self {
        let mut out = Self::zero(group);
        for (g, c) in terms {
            out.add_term(g, &c);
        }
        out
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficient(&self, g: &GroupElement) -> Option<&C> {
        self.coeffs.get(g)
    }

    /// Coefficient at `g`, zero off the support.
    pub fn get(&self, g: &GroupElement) -> C {
        self.coeffs.get(g).cloned().unwrap_or_else(C::zero)
    }

    /// Unordered iteration; use [`Self::sorted_terms`] for a canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &C)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> Vec<GroupElement> {
        let mut s: Vec<GroupElement> = self.coeffs.keys().cloned().collect();
        s.sort();
        s
    }

    /// Terms sorted by canonical element order.
    pub fn sorted_terms(&self) -> Vec<(&GroupElement, &C)> {
        let mut t: Vec<_> = self.coeffs.iter().collect();
        t.sort_by(|a, b| a.0.cmp(b.0));
        t
    }

    pub fn add_term(&mut self, g: GroupElement, c: &C) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.coeffs.entry(g) {
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!(
                "operands live over {} and {}",
                self.group, other.group
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (g, c) in &other.coeffs {
            out.add_term(g.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(self.group);
        for (g, c) in &self.coeffs {
            out.add_term(g.clone(), &c.mul(k));
        }
        out
    }

    /// Applies `f` coefficientwise, dropping zeros.
    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> RingElement<D> {
        let mut out = RingElement::zero(self.group);
        for (g, c) in &self.coeffs {
            out.add_term(g.clone(), &f(c));
        }
        out
    }

    /// Keeps the terms for which `keep` holds.
    pub fn filter(&self, keep: impl Fn(&GroupElement, &C) -> bool) -> Self {
        RingElement {
            group: self.group,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(g, c)| keep(g, c))
                .map(|(g, c)| (g.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.convolve_unchecked(other))
    }

    pub(crate) fn convolve_unchecked(&self, other: &Self) -> Self {
        RingElement { group: self.group, coeffs: convolve_maps(self.group, &self.coeffs, &other.coeffs) }
    }

    /// Coefficient at g of `self * other` without forming the product.
    pub fn convolve_at(&self, other: &Self, g: &GroupElement) -> C {
        let spec = self.group;
        let mut acc = C::zero();
        for (h, a) in &self.coeffs {
            let rest = spec.mul(&spec.inverse(h), g);
            if let Some(b) = other.coeffs.get(&rest) {
                acc.add_product(a, b);
            }
        }
        acc
    }

    /// `self^n` by repeated convolution, n ≥ 0.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.group);
        for _ in 0..n {
            acc = acc.convolve_unchecked(self);
        }
        acc
    }

    /// α*(g) = α(g⁻¹) for real scalars.
    pub fn adjoint(&self) -> Self {
        RingElement {
            group: self.group,
            coeffs: self
                .coeffs
                .iter()
                .map(|(g, c)| (self.group.inverse(g), c.clone()))
                .collect(),
        }
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(g, c)| self.coeffs.get(&self.group.inverse(g)) == Some(c))
    }

    pub fn trace(&self) -> C {
        self.get(&self.group.identity())
    }

    /// τ(self · other) = Σ_g self(g) other(g⁻¹), without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> C {
        let mut acc = C::zero();
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        // τ(ab) = τ(ba), so iterate over the smaller support.
        for (g, a) in &small.coeffs {
            if let Some(b) = large.coeffs.get(&self.group.inverse(g)) {
                acc.add_product(a, b);
            }
        }
        acc
    }

    pub fn norms(&self) -> Norms<C> {
        let mut n = Norms { l1: C::zero(), l2_squared: C::zero(), linf: C::zero(), augmentation: C::zero() };
        for c in self.coeffs.values() {
            let a = c.abs();
            n.l1.add_assign(&a);
            n.l2_squared.add_product(c, c);
            if a > n.linf {
                n.linf = a;
            }
            n.augmentation.add_assign(c);
        }
        n
    }

    /// Formats a group element as its canonical word.
    pub fn word(&self, g: &GroupElement) -> String {
        self.group.format_element(g)
    }
}

fn convolve_maps<C: Coefficient>(
    spec: GroupSpec,
    a: &FxHashMap<GroupElement, C>,
    b: &FxHashMap<GroupElement, C>,
) -> FxHashMap<GroupElement, C> {
    #[cfg(feature = "parallel")]
    {
        const CHUNK: usize = 512;
        if a.len() > 2 * CHUNK && b.len() > 16 {
            use rayon::prelude::*;
            let left: Vec<_> = a.iter().collect();
            let partials: Vec<FxHashMap<GroupElement, C>> = left
                .par_chunks(CHUNK)
                .map(|chunk| convolve_terms(spec, chunk.iter().copied(), b))
                .collect();
            let mut out = FxHashMap::default();
            for part in partials {
                merge_into(&mut out, part);
            }
            out.retain(|_, c: &mut C| !c.is_zero());
            return out;
        }
    }
    let mut out = convolve_terms(spec, a.iter(), b);
    out.retain(|_, c| !c.is_zero());
    out
}

fn convolve_terms<'a, C: Coefficient + 'a>(
    spec: GroupSpec,
    left: impl Iterator<Item = (&'a GroupElement, &'a C)>,
    b: &FxHashMap<GroupElement, C>,
) -> FxHashMap<GroupElement, C> {
    let mut out: FxHashMap<GroupElement, C> = FxHashMap::default();
    for (g, x) in left {
        for (h, y) in b {
            out.entry(spec.mul(g, h)).or_insert_with(C::zero).add_product(x, y);
        }
    }
    out
}

#[cfg(feature = "parallel")]
fn merge_into<C: Coefficient>(out: &mut FxHashMap<GroupElement, C>, part: FxHashMap<GroupElement, C>) {
    for (g, c) in part {
        match out.get_mut(&g) {
            Some(v) => v.add_assign(&c),
            None => {
                out.insert(g, c);
            }
        }
    }
}

impl RingElement<BigInt> {
    pub fn to_rational(&self) -> QElement {
        self.map(|c| BigRational::from_integer(c.clone()))
    }
}

impl RingElement<BigRational> {
    /// The integer element when every coefficient is integral.
    pub fn to_integer(&self) -> Option<ZElement> {
        if self.coeffs.values().all(|c| c.is_integer()) {
            Some(self.map(|c| c.to_integer()))
        } else {
            None
        }
    }

    pub fn to_float(&self) -> FloatElement {
        FloatElement::from_rational(self)
    }
}

impl<C: Coefficient> fmt::Debug for RingElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement[{}]({self})", self.group)
    }
}

impl<C: Coefficient> fmt::Display for RingElement<C> {
    /// Canonical text accepted by [`parse_expression`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let id = self.group.identity();
        let mut terms = self.sorted_terms();
        // identity first
        terms.sort_by_key(|(g, _)| **g != id);
        for (i, (g, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = if negative { c.neg() } else { c.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *g == id {
                write!(f, "{}", mag.display())?;
            } else {
                let word = self.group.format_element(g);
                let word = if word.contains(' ') { format!("({word})") } else { word };
                if mag.is_one() {
                    f.write_str(&word)?;
                } else {
                    write!(f, "{} {word}", mag.display())?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
