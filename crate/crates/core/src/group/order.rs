//! Left-invariant orders given by positive semigroups P ⊂ G.
//!
//! `g ⪯ h` iff `g⁻¹h ∈ P ∪ {1}`. Each family carries one natural order;
//! partial orders are first-class and `compare` can answer `Incomparable`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{free, unitriangular, GroupElement, GroupSpec};
use crate::error::{Error, Result};

/// The construction behind an order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    /// Lexicographic on a filtration with abelian quotients (ℤ^d, H_N, T_N).
    LexTotal,
    /// Nonempty positive words (free groups, F_k ⋊ ℤ/k with any rotor).
    PositiveWordPartial,
    /// Pulled back along G → ℤ with an ordered kernel (BS(1,n)).
    ExactSequence,
    /// Lamp configurations componentwise ≥ 0 and nonzero, any rotor.
    WreathProductPartial,
    /// The semigroup generated by the generator set (ℤ/k ∗ ℤ/k with xy, x²y²).
    SemigroupGenerated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Positivity {
    Positive,
    Negative,
    IdentityOrIncomparable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// A group, a generating set S ⊂ P and the positive semigroup P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedGroup {
    spec: GroupSpec,
    generators: Vec<GroupElement>,
    kind: OrderKind,
    negated: bool,
}

impl OrderedGroup {
    /// The catalog order of `spec` with its default generators.
    pub fn natural(spec: GroupSpec) -> Result<Self> {
        Self::with_generators(spec, spec.default_generators())
    }

    /// The catalog order of `spec` with a caller-chosen S. Every s ∈ S must
    /// be positive, which also forces S ∩ S⁻¹ = ∅.
    pub fn with_generators(spec: GroupSpec, generators: Vec<GroupElement>) -> Result<Self> {
        spec.validate()?;
        if let GroupSpec::FreeProductCyclic(k) = spec {
            if k < 3 {
                return Err(Error::hypothesis(
                    "ℤ/2 ∗ ℤ/2 has x²y² = 1, so ⟨xy, x²y²⟩ is not a positive semigroup",
                ));
            }
        }
        let kind = match spec {
            GroupSpec::FreeAbelian(_) | GroupSpec::Heisenberg(_) | GroupSpec::Unitriangular(_) => {
                OrderKind::LexTotal
            }
            GroupSpec::FreeGroup(_) | GroupSpec::FreeTimesCyclic(_) => {
                OrderKind::PositiveWordPartial
            }
            GroupSpec::BaumslagSolitar(_) => OrderKind::ExactSequence,
            GroupSpec::WreathZmodK(_) | GroupSpec::WreathZ => OrderKind::WreathProductPartial,
            GroupSpec::FreeProductCyclic(_) => OrderKind::SemigroupGenerated,
        };
        let og = OrderedGroup { spec, generators, kind, negated: false };
        for s in &og.generators {
            if !spec.contains(s) {
                return Err(Error::GroupMismatch(format!("generator {s:?} not in {spec}")));
            }
            if !og.in_cone(s) {
                return Err(Error::hypothesis(format!(
                    "generator `{}` is not positive in the {spec} order",
                    spec.format_element(s)
                )));
            }
        }
        Ok(og)
    }

    /// The same data with the positivity predicate negated. Only useful as a
    /// negative control for [`check_order_axioms`].
    pub fn with_negated_predicate(&self) -> Self {
        OrderedGroup { negated: !self.negated, ..self.clone() }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn is_total(&self) -> bool {
        matches!(self.kind, OrderKind::LexTotal | OrderKind::ExactSequence)
    }

    /// Raw membership g ∈ P.
    pub fn in_cone(&self, g: &GroupElement) -> bool {
        cone_contains(self.spec, g) != self.negated
    }

    pub fn is_positive(&self, g: &GroupElement) -> Positivity {
        if self.in_cone(g) {
            Positivity::Positive
        } else if self.in_cone(&self.spec.inverse(g)) {
            Positivity::Negative
        } else {
            Positivity::IdentityOrIncomparable
        }
    }

    /// Classifies `g⁻¹h`.
    pub fn compare(&self, g: &GroupElement, h: &GroupElement) -> Comparison {
        if g == h {
            return Comparison::Equal;
        }
        let d = self.spec.mul(&self.spec.inverse(g), h);
        match self.is_positive(&d) {
            Positivity::Positive => Comparison::Less,
            Positivity::Negative => Comparison::Greater,
            Positivity::IdentityOrIncomparable => Comparison::Incomparable,
        }
    }

    /// Elements of `set` with nothing strictly below them in `set`.
    pub fn minimal_elements<'a>(&self, set: &'a [GroupElement]) -> Vec<&'a GroupElement> {
        set.iter()
            .filter(|g| {
                !set.iter()
                    .any(|h| h != *g && self.compare(h, g) == Comparison::Less)
            })
            .collect()
    }
}

fn first_nonzero_positive(values: impl IntoIterator<Item = i64>) -> bool {
    values.into_iter().find(|&v| v != 0).is_some_and(|v| v > 0)
}

fn cone_contains(spec: GroupSpec, g: &GroupElement) -> bool {
    use GroupElement as E;
    match (spec, g) {
        (_, E::Abelian(v)) | (_, E::Heisenberg(v)) => first_nonzero_positive(v.iter().copied()),
        (GroupSpec::Unitriangular(n), E::Unitriangular(v)) => {
            first_nonzero_positive(unitriangular::lex_positions(n).into_iter().map(|i| v[i]))
        }
        (_, E::Free(w)) => free::is_positive_word(w),
        (_, E::FreeTimesCyclic { word, .. }) => free::is_positive_word(word),
        (_, E::BaumslagSolitar { t, r }) => *t > 0 || (*t == 0 && r.signum() > 0),
        (_, E::WreathZmodK { lamps, .. }) => {
            lamps.iter().all(|&v| v >= 0) && lamps.iter().any(|&v| v != 0)
        }
        (_, E::WreathZ { lamps, .. }) => !lamps.is_empty() && lamps.iter().all(|l| l.1 > 0),
        (_, E::FreeProductCyclic(s)) => {
            // blocks x^e y^e with e ∈ {1, 2} never merge, so the greedy parse is exact
            !s.is_empty()
                && s.len() % 2 == 0
                && s.chunks(2).all(|p| {
                    p[0].0 == 0 && p[1].0 == 1 && p[0].1 == p[1].1 && (p[0].1 == 1 || p[0].1 == 2)
                })
        }
        _ => panic!("element family does not match {spec}: {g:?}"),
    }
}

/// One axiom of a positive semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    IdentityNotPositive,
    GeneratorsPositive,
    ClosedUnderProduct,
    Antisymmetric,
    LeftInvariant,
    Total,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::IdentityNotPositive => "1 ∉ P",
            Axiom::GeneratorsPositive => "S ⊂ P",
            Axiom::ClosedUnderProduct => "P·P ⊂ P",
            Axiom::Antisymmetric => "P ∩ P⁻¹ = ∅",
            Axiom::LeftInvariant => "g ≺ h ⇒ kg ≺ kh",
            Axiom::Total => "totality",
        };
        f.write_str(s)
    }
}

/// First counterexample found for an axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub group: String,
    pub triples: usize,
    /// Number of (g, h) pairs with both positive, i.e. closure instances.
    pub closure_checks: usize,
    pub total_order: bool,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, axiom: Axiom, witness: impl FnOnce() -> String) {
        if !self.violations.iter().any(|v| v.axiom == axiom) {
            self.violations.push(Violation { axiom, witness: witness() });
        }
    }
}

/// How triples are drawn from the sample.
#[derive(Clone, Copy, Debug)]
pub enum Sampling {
    /// Every ordered pair (g, h), with k running over S ∪ S⁻¹.
    Exhaustive,
    /// `count` triples drawn uniformly with a seeded generator.
    Random { count: usize, seed: u64 },
}

/// Checks the positive-semigroup axioms on elements drawn from `sample`.
pub fn check_order_axioms(og: &OrderedGroup, sample: &[GroupElement], sampling: Sampling) -> AxiomReport {
    let spec = og.spec;
    let word = |g: &GroupElement| spec.format_element(g);
    let mut report = AxiomReport {
        group: spec.to_string(),
        total_order: og.is_total(),
        ..AxiomReport::default()
    };
    let id = spec.identity();
    if og.in_cone(&id) {
        report.record(Axiom::IdentityNotPositive, || "1 ∈ P".into());
    }
    for s in &og.generators {
        if !og.in_cone(s) {
            report.record(Axiom::GeneratorsPositive, || format!("s = {}", word(s)));
        }
    }

    let check = |report: &mut AxiomReport, g: &GroupElement, h: &GroupElement, k: &GroupElement| {
        report.triples += 1;
        let (pg, ph) = (og.in_cone(g), og.in_cone(h));
        if pg && ph {
            report.closure_checks += 1;
            let gh = spec.mul(g, h);
            if !og.in_cone(&gh) {
                report.record(Axiom::ClosedUnderProduct, || {
                    format!("g = {}, h = {}, gh = {}", word(g), word(h), word(&gh))
                });
            }
        }
        if pg && og.in_cone(&spec.inverse(g)) {
            report.record(Axiom::Antisymmetric, || format!("g = {} and g⁻¹ both in P", word(g)));
        }
        if og.is_total() && *g != id && !pg && !og.in_cone(&spec.inverse(g)) {
            report.record(Axiom::Total, || format!("g = {} is incomparable to 1", word(g)));
        }
        let before = og.compare(g, h);
        let after = og.compare(&spec.mul(k, g), &spec.mul(k, h));
        if before != after {
            report.record(Axiom::LeftInvariant, || {
                format!(
                    "g = {}, h = {}, k = {}: {before:?} became {after:?}",
                    word(g),
                    word(h),
                    word(k)
                )
            });
        }
    };

    match sampling {
        Sampling::Exhaustive => {
            let shifts: Vec<GroupElement> = og
                .generators
                .iter()
                .flat_map(|s| [s.clone(), spec.inverse(s)])
                .collect();
            for (i, g) in sample.iter().enumerate() {
                for h in sample {
                    let k = &shifts[i % shifts.len().max(1)];
                    check(&mut report, g, h, k);
                }
            }
        }
        Sampling::Random { count, seed } => {
            if !sample.is_empty() {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..count {
                    let g = &sample[rng.gen_range(0..sample.len())];
                    let h = &sample[rng.gen_range(0..sample.len())];
                    let k = &sample[rng.gen_range(0..sample.len())];
                    check(&mut report, g, h, k);
                }
            }
        }
    }
    report
}
