//! Finitely generated groups with exact canonical forms.
//!
//! Every element is stored in a family-specific canonical payload, so
//! structural equality of [`GroupElement`] values is equality in the group
//! and the derived `Hash`/`Ord` can key sparse coefficient maps directly.
//! Arithmetic goes through [`GroupSpec`], which carries the family
//! parameters (rank, modulus, ...) that the payload alone does not.

mod abelian;
mod ball;
mod bs;
mod free;
mod free_product;
mod heisenberg;
mod names;
mod order;
mod unitriangular;
mod wreath;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ball::{
    enumerate_ball, enumerate_ball_layers, enumerate_ball_with_cap, sphere_sizes, BallLayers,
    DEFAULT_ELEMENT_CAP,
};
pub(crate) use ball::symmetric_steps;
pub use bs::RadixFraction;
pub use order::{
    check_order_axioms, Axiom, AxiomReport, Comparison, OrderKind, OrderedGroup, Positivity,
    Sampling, Violation,
};

/// A group family together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    /// ℤ^d.
    FreeAbelian(u32),
    /// H_N: (N+2)×(N+2) unitriangular matrices supported on the first row and
    /// last column. H_1 is the discrete Heisenberg group.
    Heisenberg(u32),
    /// T_N: all (N+2)×(N+2) upper unitriangular integer matrices.
    Unitriangular(u32),
    /// Free group of rank r.
    FreeGroup(u32),
    /// BS(1,n) = ⟨a, b | a b a⁻¹ = bⁿ⟩.
    BaumslagSolitar(u32),
    /// ℤ ≀ ℤ/kℤ.
    WreathZmodK(u32),
    /// ℤ ≀ ℤ.
    WreathZ,
    /// ℤ/kℤ ∗ ℤ/kℤ.
    FreeProductCyclic(u32),
    /// F_k ⋊ ℤ/kℤ with the rotation action on the free generators.
    FreeTimesCyclic(u32),
}

/// Canonical-form payload of a group element. See [`GroupSpec`] for the
/// family that gives each variant its meaning.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupElement {
    /// Integer coordinate vector.
    Abelian(Vec<i64>),
    /// Normal-form exponents (n₁,…,n_{2N+1}) of a₁^{n₁} b₁^{n₂} ⋯ a_N b_N c^{n_{2N+1}}.
    Heisenberg(Vec<i64>),
    /// Strictly upper triangular entries, row-major.
    Unitriangular(Vec<i64>),
    /// Freely reduced word; letter `i` is a_i and `-i` is a_i⁻¹ (1-based).
    Free(Vec<i32>),
    /// The affine map x ↦ nᵗ x + r.
    BaumslagSolitar { t: i64, r: RadixFraction },
    /// Lamp vector of length k and rotor in ℤ/k.
    WreathZmodK { lamps: Vec<i64>, rotor: u32 },
    /// Sorted nonzero lamps (position, value) and rotor in ℤ.
    WreathZ { lamps: Vec<(i64, i64)>, rotor: i64 },
    /// Alternating syllables (factor, exponent) with factor 0 = x, 1 = y and
    /// exponent in 1..k.
    FreeProductCyclic(Vec<(u8, u32)>),
    /// Reduced word in a₁..a_k and rotor in ℤ/k.
    FreeTimesCyclic { word: Vec<i32>, rotor: u32 },
}

impl GroupSpec {
    /// Checks parameter ranges.
    pub fn validate(self) -> Result<Self> {
        let (ok, what) = match self {
            GroupSpec::FreeAbelian(d) => (d >= 1, "d >= 1"),
            GroupSpec::Heisenberg(n) => (n >= 1, "N >= 1"),
            GroupSpec::Unitriangular(n) => (n >= 1, "N >= 1"),
            GroupSpec::FreeGroup(r) => (r >= 2, "r >= 2"),
            GroupSpec::BaumslagSolitar(n) => (n >= 2, "n >= 2"),
            GroupSpec::WreathZmodK(k) => (k >= 2, "k >= 2"),
            GroupSpec::WreathZ => (true, ""),
            GroupSpec::FreeProductCyclic(k) => (k >= 2, "k >= 2"),
            GroupSpec::FreeTimesCyclic(k) => (k >= 2, "k >= 2"),
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidGroup(format!("{self}: requires {what}")))
        }
    }

    pub fn identity(self) -> GroupElement {
        match self {
            GroupSpec::FreeAbelian(d) => GroupElement::Abelian(vec![0; d as usize]),
            GroupSpec::Heisenberg(n) => GroupElement::Heisenberg(vec![0; 2 * n as usize + 1]),
            GroupSpec::Unitriangular(n) => {
                GroupElement::Unitriangular(vec![0; unitriangular::entry_count(n)])
            }
            GroupSpec::FreeGroup(_) => GroupElement::Free(Vec::new()),
            GroupSpec::BaumslagSolitar(_) => GroupElement::BaumslagSolitar {
                t: 0,
                r: RadixFraction::zero(),
            },
            GroupSpec::WreathZmodK(k) => GroupElement::WreathZmodK {
                lamps: vec![0; k as usize],
                rotor: 0,
            },
            GroupSpec::WreathZ => GroupElement::WreathZ {
                lamps: Vec::new(),
                rotor: 0,
            },
            GroupSpec::FreeProductCyclic(_) => GroupElement::FreeProductCyclic(Vec::new()),
            GroupSpec::FreeTimesCyclic(_) => GroupElement::FreeTimesCyclic {
                word: Vec::new(),
                rotor: 0,
            },
        }
    }

    pub fn is_identity(self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    /// True when `g` is a well-formed canonical payload for this group.
    pub fn contains(self, g: &GroupElement) -> bool {
        use GroupElement as E;
        match (self, g) {
            (GroupSpec::FreeAbelian(d), E::Abelian(v)) => v.len() == d as usize,
            (GroupSpec::Heisenberg(n), E::Heisenberg(v)) => v.len() == 2 * n as usize + 1,
            (GroupSpec::Unitriangular(n), E::Unitriangular(v)) => {
                v.len() == unitriangular::entry_count(n)
            }
            (GroupSpec::FreeGroup(r), E::Free(w)) => free::is_reduced(w, r),
            (GroupSpec::BaumslagSolitar(n), E::BaumslagSolitar { r, .. }) => r.is_canonical(n),
            (GroupSpec::WreathZmodK(k), E::WreathZmodK { lamps, rotor }) => {
                lamps.len() == k as usize && *rotor < k
            }
            (GroupSpec::WreathZ, E::WreathZ { lamps, .. }) => {
                lamps.windows(2).all(|w| w[0].0 < w[1].0) && lamps.iter().all(|l| l.1 != 0)
            }
            (GroupSpec::FreeProductCyclic(k), E::FreeProductCyclic(s)) => {
                free_product::is_canonical(s, k)
            }
            (GroupSpec::FreeTimesCyclic(k), E::FreeTimesCyclic { word, rotor }) => {
                free::is_reduced(word, k) && *rotor < k
            }
            _ => false,
        }
    }

    /// Product `gh` in canonical form.
    pub fn multiply(self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        if !self.contains(g) || !self.contains(h) {
            return Err(Error::GroupMismatch(format!(
                "operands {g:?} and {h:?} are not both elements of {self}"
            )));
        }
        Ok(self.mul(g, h))
    }

    /// Unchecked product. Panics if the payloads do not belong to this family.
    pub(crate) fn mul(self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        use GroupElement as E;
        match (self, g, h) {
            (GroupSpec::FreeAbelian(_), E::Abelian(a), E::Abelian(b)) => {
                E::Abelian(abelian::mul(a, b))
            }
            (GroupSpec::Heisenberg(_), E::Heisenberg(a), E::Heisenberg(b)) => {
                E::Heisenberg(heisenberg::mul(a, b))
            }
            (GroupSpec::Unitriangular(n), E::Unitriangular(a), E::Unitriangular(b)) => {
                E::Unitriangular(unitriangular::mul(n, a, b))
            }
            (GroupSpec::FreeGroup(_), E::Free(a), E::Free(b)) => E::Free(free::mul(a, b)),
            (
                GroupSpec::BaumslagSolitar(n),
                E::BaumslagSolitar { t: t1, r: r1 },
                E::BaumslagSolitar { t: t2, r: r2 },
            ) => {
                let (t, r) = bs::mul(n, (*t1, r1), (*t2, r2));
                E::BaumslagSolitar { t, r }
            }
            (
                GroupSpec::WreathZmodK(k),
                E::WreathZmodK { lamps: l1, rotor: r1 },
                E::WreathZmodK { lamps: l2, rotor: r2 },
            ) => {
                let (lamps, rotor) = wreath::mul_mod(k, (l1, *r1), (l2, *r2));
                E::WreathZmodK { lamps, rotor }
            }
            (
                GroupSpec::WreathZ,
                E::WreathZ { lamps: l1, rotor: r1 },
                E::WreathZ { lamps: l2, rotor: r2 },
            ) => {
                let (lamps, rotor) = wreath::mul_z((l1, *r1), (l2, *r2));
                E::WreathZ { lamps, rotor }
            }
            (GroupSpec::FreeProductCyclic(k), E::FreeProductCyclic(a), E::FreeProductCyclic(b)) => {
                E::FreeProductCyclic(free_product::mul(k, a, b))
            }
            (
                GroupSpec::FreeTimesCyclic(k),
                E::FreeTimesCyclic { word: w1, rotor: r1 },
                E::FreeTimesCyclic { word: w2, rotor: r2 },
            ) => {
                let rotated = free::rotate(w2, *r1, k);
                E::FreeTimesCyclic {
                    word: free::mul(w1, &rotated),
                    rotor: (r1 + r2) % k,
                }
            }
            _ => panic!("element family does not match {self}: {g:?} * {h:?}"),
        }
    }

    pub fn inverse(self, g: &GroupElement) -> GroupElement {
        use GroupElement as E;
        match (self, g) {
            (_, E::Abelian(a)) => E::Abelian(abelian::inv(a)),
            (_, E::Heisenberg(a)) => E::Heisenberg(heisenberg::inv(a)),
            (GroupSpec::Unitriangular(n), E::Unitriangular(a)) => {
                E::Unitriangular(unitriangular::inv(n, a))
            }
            (_, E::Free(w)) => E::Free(free::inv(w)),
            (GroupSpec::BaumslagSolitar(n), E::BaumslagSolitar { t, r }) => {
                let (t, r) = bs::inv(n, (*t, r));
                E::BaumslagSolitar { t, r }
            }
            (GroupSpec::WreathZmodK(k), E::WreathZmodK { lamps, rotor }) => {
                let (lamps, rotor) = wreath::inv_mod(k, (lamps, *rotor));
                E::WreathZmodK { lamps, rotor }
            }
            (_, E::WreathZ { lamps, rotor }) => {
                let (lamps, rotor) = wreath::inv_z((lamps, *rotor));
                E::WreathZ { lamps, rotor }
            }
            (GroupSpec::FreeProductCyclic(k), E::FreeProductCyclic(s)) => {
                E::FreeProductCyclic(free_product::inv(k, s))
            }
            (GroupSpec::FreeTimesCyclic(k), E::FreeTimesCyclic { word, rotor }) => {
                let back = (k - rotor) % k;
                E::FreeTimesCyclic {
                    word: free::rotate(&free::inv(word), back, k),
                    rotor: back,
                }
            }
            _ => panic!("element family does not match {self}: {g:?}"),
        }
    }

    /// `g^e` by repeated squaring; negative exponents invert first.
    pub fn pow(self, g: &GroupElement, e: i64) -> GroupElement {
        let mut base = if e < 0 { self.inverse(g) } else { g.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// An integer e such that every torsion element has order dividing e.
    /// Consequently `g` has infinite order iff `g^e ≠ 1`.
    pub fn torsion_exponent(self) -> i64 {
        match self {
            GroupSpec::WreathZmodK(k)
            | GroupSpec::FreeProductCyclic(k)
            | GroupSpec::FreeTimesCyclic(k) => k as i64,
            _ => 1,
        }
    }

    pub fn has_infinite_order(self, g: &GroupElement) -> bool {
        !self.is_identity(&self.pow(g, self.torsion_exponent()))
    }

    /// A homomorphism G → ℤʳ (a quotient of the abelianization).
    pub fn abelianization(self, g: &GroupElement) -> Vec<i64> {
        use GroupElement as E;
        match g {
            E::Abelian(v) => v.clone(),
            E::Heisenberg(v) => v[..v.len() - 1].to_vec(),
            E::Unitriangular(v) => {
                let GroupSpec::Unitriangular(n) = self else {
                    unreachable!()
                };
                unitriangular::superdiagonal(n, v)
            }
            E::Free(w) => {
                let GroupSpec::FreeGroup(r) = self else {
                    unreachable!()
                };
                free::exponent_sums(w, r)
            }
            E::BaumslagSolitar { t, .. } => vec![*t],
            E::WreathZmodK { lamps, .. } => vec![lamps.iter().sum()],
            E::WreathZ { lamps, rotor } => vec![lamps.iter().map(|l| l.1).sum(), *rotor],
            E::FreeProductCyclic(_) => Vec::new(),
            E::FreeTimesCyclic { word, .. } => {
                vec![word.iter().map(|l| l.signum() as i64).sum()]
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::FreeAbelian(d) => write!(f, "z({d})"),
            GroupSpec::Heisenberg(n) => write!(f, "heisenberg({n})"),
            GroupSpec::Unitriangular(n) => write!(f, "unitriangular({n})"),
            GroupSpec::FreeGroup(r) => write!(f, "free({r})"),
            GroupSpec::BaumslagSolitar(n) => write!(f, "bs(1,{n})"),
            GroupSpec::WreathZmodK(k) => write!(f, "wreath(zmod:{k})"),
            GroupSpec::WreathZ => write!(f, "wreath(z)"),
            GroupSpec::FreeProductCyclic(k) => write!(f, "freeprod({k})"),
            GroupSpec::FreeTimesCyclic(k) => write!(f, "freecyclic({k})"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses the compact group syntax, e.g. `heisenberg(1)`, `free(2)`,
    /// `bs(1,2)`, `wreath(zmod:3)`, `wreath(z)`, `z(5)`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let compact = compact.to_ascii_lowercase();
        let (name, args) = match compact.find('(') {
            Some(open) if compact.ends_with(')') => {
                (&compact[..open], &compact[open + 1..compact.len() - 1])
            }
            _ => return Err(Error::parse(format!("group spec `{s}`: expected name(args)"))),
        };
        let int = |a: &str| -> Result<u32> {
            a.parse::<u32>()
                .map_err(|_| Error::parse(format!("group spec `{s}`: bad integer `{a}`")))
        };
        let spec = match name {
            "z" | "zn" | "abelian" | "free_abelian" => GroupSpec::FreeAbelian(int(args)?),
            "heisenberg" | "h" => GroupSpec::Heisenberg(int(args)?),
            "unitriangular" | "t" => GroupSpec::Unitriangular(int(args)?),
            "free" | "f" => GroupSpec::FreeGroup(int(args)?),
            "bs" => {
                let (one, n) = args
                    .split_once(',')
                    .ok_or_else(|| Error::parse(format!("group spec `{s}`: expected bs(1,n)")))?;
                if one != "1" {
                    return Err(Error::parse(format!(
                        "group spec `{s}`: only BS(1,n) is supported"
                    )));
                }
                GroupSpec::BaumslagSolitar(int(n)?)
            }
            "wreath" => match args {
                "z" => GroupSpec::WreathZ,
                _ => {
                    let k = args.strip_prefix("zmod:").ok_or_else(|| {
                        Error::parse(format!("group spec `{s}`: expected wreath(zmod:k) or wreath(z)"))
                    })?;
                    GroupSpec::WreathZmodK(int(k)?)
                }
            },
            "freeprod" | "free_product" => GroupSpec::FreeProductCyclic(int(args)?),
            "freecyclic" | "free_times_cyclic" => GroupSpec::FreeTimesCyclic(int(args)?),
            _ => return Err(Error::parse(format!("unknown group family `{name}`"))),
        };
        spec.validate()
    }
}
