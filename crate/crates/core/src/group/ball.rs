//! Breadth-first enumeration of word-metric balls B_R(S) = (S ∪ {1} ∪ S⁻¹)^R.

use rustc_hash::FxHashSet;

use super::{GroupElement, GroupSpec};
use crate::error::{Error, Result};

/// Default bound on the number of elements held during enumeration.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

/// A ball split into spheres; `spheres[r]` holds the elements of word length r.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BallLayers {
    pub spheres: Vec<Vec<GroupElement>>,
}

impl BallLayers {
    pub fn radius(&self) -> usize {
        self.spheres.len().saturating_sub(1)
    }

    /// Cumulative sizes |B_0|, |B_1|, ….
    pub fn ball_sizes(&self) -> Vec<usize> {
        self.spheres
            .iter()
            .scan(0, |acc, s| {
                *acc += s.len();
                Some(*acc)
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.spheres.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.spheres.iter().flatten()
    }

    pub fn into_elements(self) -> Vec<GroupElement> {
        self.spheres.into_iter().flatten().collect()
    }
}

/// S ∪ S⁻¹ without the identity or repeats, in a fixed order.
pub(crate) fn symmetric_steps(spec: GroupSpec, generators: &[GroupElement]) -> Vec<GroupElement> {
    let mut steps = Vec::new();
    for s in generators {
        for t in [s.clone(), spec.inverse(s)] {
            if !spec.is_identity(&t) && !steps.contains(&t) {
                steps.push(t);
            }
        }
    }
    steps
}

fn check_generators(spec: GroupSpec, generators: &[GroupElement]) -> Result<()> {
    spec.validate()?;
    match generators.iter().find(|s| !spec.contains(s)) {
        Some(s) => Err(Error::GroupMismatch(format!("generator {s:?} not in {spec}"))),
        None => Ok(()),
    }
}

/// The ball of radius `radius`, sphere by sphere.
pub fn enumerate_ball_layers(
    spec: GroupSpec,
    generators: &[GroupElement],
    radius: usize,
    cap: usize,
) -> Result<BallLayers> {
    check_generators(spec, generators)?;
    let steps = symmetric_steps(spec, generators);
    let mut seen: FxHashSet<GroupElement> = FxHashSet::default();
    let id = spec.identity();
    seen.insert(id.clone());
    let mut spheres = vec![vec![id]];
    for r in 1..=radius {
        let mut next = Vec::new();
        for g in &spheres[r - 1] {
            for s in &steps {
                let h = spec.mul(g, s);
                if !seen.contains(&h) {
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded {
                            cap,
                            context: format!("enumerating the radius-{radius} ball of {spec}"),
                        });
                    }
                    seen.insert(h.clone());
                    next.push(h);
                }
            }
        }
        spheres.push(next);
    }
    Ok(BallLayers { spheres })
}

/// Elements of B_R(S) in breadth-first order, with the default cap.
pub fn enumerate_ball(spec: GroupSpec, generators: &[GroupElement], radius: usize) -> Result<Vec<GroupElement>> {
    enumerate_ball_with_cap(spec, generators, radius, DEFAULT_ELEMENT_CAP)
}

pub fn enumerate_ball_with_cap(
    spec: GroupSpec,
    generators: &[GroupElement],
    radius: usize,
    cap: usize,
) -> Result<Vec<GroupElement>> {
    Ok(enumerate_ball_layers(spec, generators, radius, cap)?.into_elements())
}

/// Sphere sizes |S_0|, …, |S_R| holding only three spheres at a time.
///
/// Neighbours of the sphere of radius r lie in radii r-1, r, r+1, so the
/// new sphere is the neighbourhood minus the previous two.
pub fn sphere_sizes(spec: GroupSpec, generators: &[GroupElement], radius: usize, cap: usize) -> Result<Vec<usize>> {
    check_generators(spec, generators)?;
    let steps = symmetric_steps(spec, generators);
    let mut prev: FxHashSet<GroupElement> = FxHashSet::default();
    let mut cur: FxHashSet<GroupElement> = FxHashSet::default();
    cur.insert(spec.identity());
    let mut sizes = vec![1];
    for _ in 1..=radius {
        let mut next: FxHashSet<GroupElement> = FxHashSet::default();
        for g in &cur {
            for s in &steps {
                let h = spec.mul(g, s);
                if !cur.contains(&h)
                    && !prev.contains(&h)
                    && next.insert(h)
                    && prev.len() + cur.len() + next.len() > cap
                {
                    return Err(Error::CapExceeded {
                        cap,
                        context: format!("counting spheres of radius {radius} in {spec}"),
                    });
                }
            }
        }
        sizes.push(next.len());
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_balls() {
        let z2 = GroupSpec::FreeAbelian(2);
        assert_eq!(enumerate_ball(z2, &z2.default_generators(), 1).unwrap().len(), 5);
        let f2 = GroupSpec::FreeGroup(2);
        assert_eq!(enumerate_ball(f2, &f2.default_generators(), 2).unwrap().len(), 17);
        let h = GroupSpec::Heisenberg(1);
        assert_eq!(enumerate_ball(h, &h.default_generators(), 1).unwrap().len(), 5);
    }

    #[test]
    fn free_group_closed_form() {
        for r in 2..=4u32 {
            let f = GroupSpec::FreeGroup(r);
            let layers = enumerate_ball_layers(f, &f.default_generators(), 5, DEFAULT_ELEMENT_CAP).unwrap();
            let q = 2 * r as usize - 1;
            for (radius, size) in layers.ball_sizes().into_iter().enumerate() {
                let expected = 2 * r as usize * (q.pow(radius as u32) - 1) / (q - 1) + 1;
                assert_eq!(size, expected);
            }
        }
    }

    #[test]
    fn sphere_counts_match_full_enumeration() {
        for spec in [GroupSpec::Heisenberg(1), GroupSpec::WreathZmodK(2), GroupSpec::BaumslagSolitar(2)] {
            let gens = spec.default_generators();
            let full = enumerate_ball_layers(spec, &gens, 6, DEFAULT_ELEMENT_CAP).unwrap();
            let counts: Vec<usize> = full.spheres.iter().map(Vec::len).collect();
            assert_eq!(sphere_sizes(spec, &gens, 6, DEFAULT_ELEMENT_CAP).unwrap(), counts);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let f = GroupSpec::FreeGroup(2);
        let err = enumerate_ball_with_cap(f, &f.default_generators(), 6, 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 100, .. }));
    }
}
