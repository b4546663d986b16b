//! Subgroups: generation, centralizers, normality, conjugacy of subgroups,
//! and re-packaging a subgroup as a standalone group.

use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{build_group, FiniteGroup, GroupElement, Ops};
use crate::error::{Error, Result};

/// A subgroup, stored as its sorted member list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<GroupElement>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.members == other.members
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn member_indices(&self) -> Vec<u64> {
        self.members.iter().map(|m| m.index()).collect()
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_whole_group(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn is_normal(&self) -> bool {
        self.parent.elements().all(|g| {
            let gi = self.parent.inv(g);
            self.members
                .iter()
                .all(|&m| self.contains(self.parent.mul(self.parent.mul(g, m), gi)))
        })
    }

    /// The conjugate subgroup `g H g^-1`.
    pub fn conjugate_by(&self, g: GroupElement) -> Subgroup {
        let gi = self.parent.inv(g);
        let mut members: Vec<GroupElement> = self
            .members
            .iter()
            .map(|&m| self.parent.mul(self.parent.mul(g, m), gi))
            .collect();
        members.sort();
        Subgroup {
            parent: self.parent.clone(),
            members,
        }
    }

    /// Repackages the subgroup as a standalone group via its restricted
    /// multiplication table. Returns the group and the map from new element
    /// indices back to parent elements (in member order).
    pub fn as_group(&self) -> (FiniteGroup, Vec<GroupElement>) {
        let n = self.members.len();
        let pos = |g: GroupElement| -> u64 {
            self.members
                .binary_search(&g)
                .expect("subgroup not closed under multiplication") as u64
        };
        let mut mul = vec![0u64; n * n];
        for (i, &a) in self.members.iter().enumerate() {
            for (j, &b) in self.members.iter().enumerate() {
                mul[i * n + j] = pos(self.parent.mul(a, b));
            }
        }
        let identity = pos(self.parent.identity());
        let inv: Vec<u64> = self
            .members
            .iter()
            .map(|&a| pos(self.parent.inv(a)))
            .collect();
        let group = build_group(
            format!("sub<{} of {}>", n, self.parent.label()),
            n as u64,
            Ops::Table { mul, inv, identity },
            None,
        );
        (group, self.members.clone())
    }
}

/// Closure of the given elements (plus the identity) under multiplication.
pub fn generated_subgroup(g: &FiniteGroup, gens: &[GroupElement]) -> Subgroup {
    for &x in gens {
        assert!(g.contains(x), "generator from a different group");
    }
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let e = g.identity();
    seen.insert(e);
    queue.push_back(e);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut members: Vec<GroupElement> = seen.into_iter().collect();
    members.sort();
    Subgroup {
        parent: g.clone(),
        members,
    }
}

/// The centralizer `C_G(x) = {h : hx = xh}`.
pub fn centralizer(g: &FiniteGroup, x: GroupElement) -> Subgroup {
    assert!(g.contains(x), "element from a different group");
    let members: Vec<GroupElement> = g
        .elements()
        .filter(|&h| g.mul(h, x) == g.mul(x, h))
        .collect();
    Subgroup {
        parent: g.clone(),
        members,
    }
}

/// A conjugacy class of subgroups. The representative has the
/// lexicographically least member-index vector in its class.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    pub class_size: usize,
}

/// The lexicographically least member-index vector among all conjugates.
pub(crate) fn canonical_conjugate_indices(parent: &FiniteGroup, sub: &Subgroup) -> Vec<u64> {
    let mut best: Option<Vec<u64>> = None;
    for g in parent.elements() {
        let c = sub.conjugate_by(g).member_indices();
        if best.as_ref().map_or(true, |b| c < *b) {
            best = Some(c);
        }
    }
    best.unwrap()
}

/// All subgroups of `g` up to conjugacy.
///
/// Subgroups are found by closing every generating set of size at most two,
/// then saturating the collection under pairwise joins; every subgroup is a
/// join of cyclic subgroups, so this reaches the whole lattice. Errors if
/// the group order exceeds `max_order`.
pub fn subgroup_conjugacy_classes(g: &FiniteGroup, max_order: u64) -> Result<Vec<SubgroupClass>> {
    if g.order() > max_order {
        return Err(Error::SubgroupBound(g.order(), max_order));
    }
    let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut subs: Vec<Subgroup> = Vec::new();
    let mut add = |s: Subgroup, subs: &mut Vec<Subgroup>, found: &mut BTreeSet<Vec<u64>>| {
        if found.insert(s.member_indices()) {
            subs.push(s);
        }
    };

    add(generated_subgroup(g, &[]), &mut subs, &mut found);
    let elems: Vec<GroupElement> = g.elements().collect();
    for (i, &a) in elems.iter().enumerate() {
        add(generated_subgroup(g, &[a]), &mut subs, &mut found);
        for &b in &elems[i + 1..] {
            add(generated_subgroup(g, &[a, b]), &mut subs, &mut found);
        }
    }

    // close under pairwise joins
    let mut frontier: Vec<Subgroup> = subs.clone();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for a in &frontier {
            for b in subs.clone() {
                let mut gens = a.members().to_vec();
                gens.extend_from_slice(b.members());
                let join = generated_subgroup(g, &gens);
                if found.insert(join.member_indices()) {
                    fresh.push(join.clone());
                    subs.push(join);
                }
            }
        }
        frontier = fresh;
    }

    // group by conjugacy, with a canonical representative per class
    let mut classes: Vec<(Vec<u64>, usize)> = Vec::new();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    for s in &subs {
        let key = s.member_indices();
        if seen.contains(&key) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        for h in g.elements() {
            orbit.insert(s.conjugate_by(h).member_indices());
        }
        for o in &orbit {
            seen.insert(o.clone());
        }
        let canon = orbit.iter().next().unwrap().clone();
        classes.push((canon, orbit.len()));
    }
    classes.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    Ok(classes
        .into_iter()
        .map(|(indices, class_size)| SubgroupClass {
            representative: Subgroup {
                parent: g.clone(),
                members: indices.into_iter().map(|i| g.element(i)).collect(),
            },
            class_size,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;

    #[test]
    fn generated_subgroup_examples() {
        let z6 = named_group("Z_6").unwrap();
        assert_eq!(generated_subgroup(&z6, &[]).order(), 1);
        assert_eq!(generated_subgroup(&z6, &[z6.element(2)]).order(), 3);

        let s3 = named_group("S_3").unwrap();
        let transpositions: Vec<GroupElement> = s3
            .elements()
            .filter(|&g| s3.element_order(g) == 2)
            .collect();
        assert_eq!(transpositions.len(), 3);
        let sub = generated_subgroup(&s3, &transpositions[..2]);
        assert_eq!(sub.order(), 6);
    }

    #[test]
    fn centralizer_examples() {
        let s3 = named_group("S_3").unwrap();
        assert_eq!(centralizer(&s3, s3.identity()).order(), 6);
        let t = s3.elements().find(|&g| s3.element_order(g) == 2).unwrap();
        assert_eq!(centralizer(&s3, t).order(), 2);

        let z6 = named_group("Z_6").unwrap();
        for g in z6.elements() {
            assert_eq!(centralizer(&z6, g).order(), 6);
        }
    }

    #[test]
    fn as_group_preserves_structure() {
        let s3 = named_group("S_3").unwrap();
        let t = s3.elements().find(|&g| s3.element_order(g) == 2).unwrap();
        let sub = generated_subgroup(&s3, &[t]);
        let (grp, map) = sub.as_group();
        assert_eq!(grp.order(), 2);
        for a in grp.elements() {
            for b in grp.elements() {
                let lifted = s3.mul(map[a.index() as usize], map[b.index() as usize]);
                assert_eq!(map[grp.mul(a, b).index() as usize], lifted);
            }
        }
    }

    #[test]
    fn subgroup_classes_of_small_groups() {
        let z4 = named_group("Z_4").unwrap();
        assert_eq!(subgroup_conjugacy_classes(&z4, 24).unwrap().len(), 3);

        let s3 = named_group("S_3").unwrap();
        assert_eq!(subgroup_conjugacy_classes(&s3, 24).unwrap().len(), 4);

        let klein = named_group("Z_2xZ_2").unwrap();
        assert_eq!(subgroup_conjugacy_classes(&klein, 24).unwrap().len(), 5);
    }

    #[test]
    fn subgroup_classes_of_s4_match_known_count() {
        let s4 = named_group("S_4").unwrap();
        let classes = subgroup_conjugacy_classes(&s4, 24).unwrap();
        assert_eq!(classes.len(), 11);
        let total: usize = classes.iter().map(|c| c.class_size).sum();
        assert_eq!(total, 30);
    }

    #[test]
    fn subgroup_bound_respected() {
        let s5 = named_group("S_5").unwrap();
        assert!(matches!(
            subgroup_conjugacy_classes(&s5, 24),
            Err(Error::SubgroupBound(120, 24))
        ));
    }
}
