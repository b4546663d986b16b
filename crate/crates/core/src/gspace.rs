//! Finite G-sets: finite point sets with a validated group action.
//!
//! The compactly-supported Euler characteristic of a finite discrete space is
//! its cardinality, so every chi computation on these spaces is a counting
//! problem. Empty G-sets are first class; fixed point sets are often empty.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement, Subgroup};
use crate::hash::Fingerprinter;

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

struct Inner {
    uid: u64,
    group: FiniteGroup,
    points: usize,
    /// Flattened action table: `table[g * points + x]` is the image of `x`.
    table: Vec<u32>,
    fingerprint: u128,
}

/// A finite set with an action of a finite group. Immutable, cheap to clone.
#[derive(Clone)]
pub struct FiniteGSet {
    inner: Arc<Inner>,
}

impl std::fmt::Debug for FiniteGSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FiniteGSet({} points over {:?})",
            self.inner.points, self.inner.group
        )
    }
}

fn gset_fingerprint(group: &FiniteGroup, points: usize, table: &[u32]) -> u128 {
    let mut f = Fingerprinter::new("gset");
    f.write_u128(group.fingerprint());
    f.write_u64(points as u64);
    for &v in table {
        f.write_u64(v as u64);
    }
    f.finish()
}

impl FiniteGSet {
    fn make(group: FiniteGroup, points: usize, table: Vec<u32>) -> FiniteGSet {
        debug_assert_eq!(table.len(), group.order() as usize * points);
        let fingerprint = gset_fingerprint(&group, points, &table);
        FiniteGSet {
            inner: Arc::new(Inner {
                uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
                group,
                points,
                table,
                fingerprint,
            }),
        }
    }

    /// Table constructor for internally derived actions whose axioms hold by
    /// construction.
    pub(crate) fn from_table_unchecked(
        group: FiniteGroup,
        points: usize,
        table: Vec<u32>,
    ) -> FiniteGSet {
        FiniteGSet::make(group, points, table)
    }

    /// Builds a G-set from a full `|G| x points` action table and validates
    /// the action axioms (identity row, bijective rows, compatibility with
    /// multiplication; compatibility is sampled above a million pair-cells).
    pub fn from_table(group: &FiniteGroup, points: usize, table: Vec<u32>) -> Result<FiniteGSet> {
        let order = group.order() as usize;
        if table.len() != order * points {
            return Err(Error::Malformed(format!(
                "action table has {} cells, expected {}",
                table.len(),
                order * points
            )));
        }
        for row in 0..order {
            let mut seen = vec![false; points];
            for x in 0..points {
                let y = table[row * points + x] as usize;
                if y >= points || std::mem::replace(&mut seen[y], true) {
                    return Err(Error::ActionAxiom(format!(
                        "element {row} does not act as a permutation"
                    )));
                }
            }
        }
        let e = group.identity().index() as usize;
        for x in 0..points {
            if table[e * points + x] as usize != x {
                return Err(Error::ActionAxiom("identity does not act trivially".into()));
            }
        }
        let gset = FiniteGSet::make(group.clone(), points, table);
        let pair_cells = (order as u64) * (order as u64) * (points as u64);
        if pair_cells <= 1_000_000 {
            for g in group.elements() {
                for h in group.elements() {
                    let gh = group.mul(g, h);
                    for x in 0..points {
                        if gset.apply(gh, x) != gset.apply(g, gset.apply(h, x)) {
                            return Err(Error::ActionAxiom(format!(
                                "action incompatible with multiplication at ({}, {})",
                                g.index(),
                                h.index()
                            )));
                        }
                    }
                }
            }
        } else {
            let mut state = 0x517cc1b727220a95u64;
            for _ in 0..100_000 {
                let mut next = |m: u64| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    state % m
                };
                let g = group.element(next(order as u64));
                let h = group.element(next(order as u64));
                let x = next(points as u64) as usize;
                if gset.apply(group.mul(g, h), x) != gset.apply(g, gset.apply(h, x)) {
                    return Err(Error::ActionAxiom(
                        "action incompatible with multiplication".into(),
                    ));
                }
            }
        }
        Ok(gset)
    }

    /// Builds a G-set from per-generator point permutations, for groups built
    /// from permutation generators. Consistency with the group's relations is
    /// verified while transporting the images along the closure.
    pub fn from_generator_images(
        group: &FiniteGroup,
        points: usize,
        images: &[Vec<u32>],
        budget: &Budget,
    ) -> Result<FiniteGSet> {
        let gens = group.generators().ok_or_else(|| {
            Error::Malformed("generator images need a permutation-built group".into())
        })?;
        if gens.len() != images.len() {
            return Err(Error::Malformed(format!(
                "expected {} generator images, got {}",
                gens.len(),
                images.len()
            )));
        }
        for img in images {
            if img.len() != points {
                return Err(Error::Malformed("generator image has wrong length".into()));
            }
            let mut seen = vec![false; points];
            for &y in img {
                if y as usize >= points || std::mem::replace(&mut seen[y as usize], true) {
                    return Err(Error::ActionAxiom(
                        "generator image is not a permutation of the points".into(),
                    ));
                }
            }
        }
        let order = group.order() as usize;
        let cells = order as u64 * points as u64;
        if cells > budget.action_cells {
            return Err(Error::BudgetExceeded {
                what: "action table",
                needed: cells,
                budget: budget.action_cells,
            });
        }
        let parents = group
            .perm_parents()
            .expect("permutation-built group has parent links");
        let mut table = vec![u32::MAX; order * points];
        let set =
            |table: &mut Vec<u32>, el: usize, perm: &[u32]| -> bool {
                if table[el * points] != u32::MAX {
                    return (0..points).all(|x| table[el * points + x] == perm[x]);
                }
                table[el * points..(el + 1) * points].copy_from_slice(perm);
                true
            };
        let id_perm: Vec<u32> = (0..points as u32).collect();
        let e = group.identity().index() as usize;
        set(&mut table, e, &id_perm);
        for (gi, g) in gens.iter().enumerate() {
            if !set(&mut table, g.index() as usize, &images[gi]) {
                return Err(Error::ActionAxiom(format!(
                    "generator {gi} received two different images"
                )));
            }
        }
        // transport along the closure: pi(j * gen_i) = pi(j) ∘ pi(gen_i)
        for el in 0..order {
            if let Some((j, gi)) = parents[el] {
                let j = j as usize;
                debug_assert!(table[j * points] != u32::MAX, "closure order broken");
                let composed: Vec<u32> = (0..points)
                    .map(|x| table[j * points + images[gi][x] as usize])
                    .collect();
                if !set(&mut table, el, &composed) {
                    return Err(Error::ActionAxiom(
                        "generator images are inconsistent with the group relations".into(),
                    ));
                }
            }
        }
        // verify the homomorphism property against every generator
        for el in 0..order {
            let g = group.element(el as u64);
            for (gi, gen) in gens.iter().enumerate() {
                let prod = group.mul(g, *gen).index() as usize;
                for x in 0..points {
                    let lhs = table[prod * points + x];
                    let rhs = table[el * points + images[gi][x] as usize];
                    if lhs != rhs {
                        return Err(Error::ActionAxiom(
                            "generator images are inconsistent with the group relations".into(),
                        ));
                    }
                }
            }
        }
        Ok(FiniteGSet::make(group.clone(), points, table))
    }

    /// The trivial action on `points` points.
    pub fn trivial(group: &FiniteGroup, points: usize) -> FiniteGSet {
        let order = group.order() as usize;
        let mut table = Vec::with_capacity(order * points);
        for _ in 0..order {
            table.extend(0..points as u32);
        }
        FiniteGSet::make(group.clone(), points, table)
    }

    /// The empty G-set.
    pub fn empty(group: &FiniteGroup) -> FiniteGSet {
        FiniteGSet::make(group.clone(), 0, Vec::new())
    }

    /// The group acting on itself by left multiplication.
    pub fn regular(group: &FiniteGroup, budget: &Budget) -> Result<FiniteGSet> {
        let order = group.order();
        let cells = order * order;
        if cells > budget.action_cells {
            return Err(Error::BudgetExceeded {
                what: "regular action table",
                needed: cells,
                budget: budget.action_cells,
            });
        }
        let n = order as usize;
        let mut table = vec![0u32; n * n];
        for g in group.elements() {
            for x in group.elements() {
                table[g.index() as usize * n + x.index() as usize] =
                    group.mul(g, x).index() as u32;
            }
        }
        Ok(FiniteGSet::make(group.clone(), n, table))
    }

    /// The natural action of a permutation-built group on its points.
    pub fn natural(group: &FiniteGroup) -> Result<FiniteGSet> {
        let probe = group.perm_image(group.identity()).ok_or_else(|| {
            Error::Unsupported("natural action needs a permutation-built group".into())
        })?;
        let points = probe.len();
        let order = group.order() as usize;
        let mut table = vec![0u32; order * points];
        for g in group.elements() {
            let img = group.perm_image(g).unwrap();
            table[g.index() as usize * points..(g.index() as usize + 1) * points]
                .copy_from_slice(img);
        }
        Ok(FiniteGSet::make(group.clone(), points, table))
    }

    /// Left action of the group on the cosets of a subgroup. Cosets are
    /// numbered in order of their least element.
    pub fn coset_space(group: &FiniteGroup, h: &Subgroup) -> FiniteGSet {
        assert!(h.parent() == group, "subgroup of a different group");
        let order = group.order() as usize;
        let mut coset_of = vec![u32::MAX; order];
        let mut count = 0u32;
        for a in group.elements() {
            if coset_of[a.index() as usize] != u32::MAX {
                continue;
            }
            for m in h.members() {
                coset_of[group.mul(a, *m).index() as usize] = count;
            }
            count += 1;
        }
        let points = count as usize;
        let mut rep = vec![0u64; points];
        for a in (0..order as u64).rev() {
            rep[coset_of[a as usize] as usize] = a;
        }
        let mut table = vec![0u32; order * points];
        for g in group.elements() {
            for (x, &r) in rep.iter().enumerate() {
                table[g.index() as usize * points + x] =
                    coset_of[group.mul(g, group.element(r)).index() as usize];
            }
        }
        FiniteGSet::make(group.clone(), points, table)
    }

    /// Disjoint union of two actions of the same group object.
    pub fn disjoint_union(&self, other: &FiniteGSet) -> Result<FiniteGSet> {
        if self.group() != other.group() {
            return Err(Error::GroupMismatch);
        }
        let (m1, m2) = (self.points(), other.points());
        let points = m1 + m2;
        let order = self.group().order() as usize;
        let mut table = vec![0u32; order * points];
        for g in 0..order {
            for x in 0..m1 {
                table[g * points + x] = self.inner.table[g * m1 + x];
            }
            for x in 0..m2 {
                table[g * points + m1 + x] = other.inner.table[g * m2 + x] + m1 as u32;
            }
        }
        Ok(FiniteGSet::make(self.group().clone(), points, table))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.inner.group
    }

    pub fn points(&self) -> usize {
        self.inner.points
    }

    pub fn is_empty(&self) -> bool {
        self.inner.points == 0
    }

    pub fn fingerprint(&self) -> u128 {
        self.inner.fingerprint
    }

    pub fn apply(&self, g: GroupElement, x: usize) -> usize {
        assert!(self.inner.group.contains(g), "element of a different group");
        self.inner.table[g.index() as usize * self.inner.points + x] as usize
    }

    /// Orbits of the full group, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.orbits_under_indices(&(0..self.group().order()).collect::<Vec<_>>())
    }

    /// Orbits of a subgroup of the acting group.
    pub fn orbits_under(&self, h: &Subgroup) -> Vec<Vec<usize>> {
        assert!(h.parent() == self.group(), "subgroup of a different group");
        self.orbits_under_indices(&h.member_indices())
    }

    fn orbits_under_indices(&self, element_indices: &[u64]) -> Vec<Vec<usize>> {
        let m = self.inner.points;
        let mut seen = vec![false; m];
        let mut orbits = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut head = 0;
            while head < orbit.len() {
                let x = orbit[head];
                for &gi in element_indices {
                    let y = self.inner.table[gi as usize * m + x] as usize;
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                head += 1;
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    /// Number of orbits of the full group: `chi(X/G)` in the finite model.
    pub fn orbit_count(&self) -> usize {
        self.orbits().len()
    }

    /// Number of orbits of a subgroup.
    pub fn orbit_count_under(&self, h: &Subgroup) -> usize {
        self.orbits_under(h).len()
    }

    /// Points fixed by every listed element (equivalently, by the subgroup
    /// they generate).
    pub fn fixed_point_set(&self, gens: &[GroupElement]) -> Vec<usize> {
        (0..self.inner.points)
            .filter(|&x| gens.iter().all(|&g| self.apply(g, x) == x))
            .collect()
    }

    /// Isotropy subgroup of a point.
    pub fn isotropy(&self, x: usize) -> Subgroup {
        let fixing: Vec<GroupElement> = self
            .group()
            .elements()
            .filter(|&g| self.apply(g, x) == x)
            .collect();
        crate::group::generated_subgroup(self.group(), &fixing)
    }

    /// Restriction of the action to a subgroup, repackaged over the
    /// subgroup's standalone group.
    pub fn restricted_to(&self, h: &Subgroup) -> FiniteGSet {
        fixed_points(self, &[], h).expect("empty generator set is always preserved")
    }
}

/// The fixed point set of the listed elements, packaged with the action of a
/// caller-supplied subgroup (typically a centralizer). Errors if the acting
/// subgroup does not preserve the fixed set.
pub fn fixed_points(
    x: &FiniteGSet,
    gens: &[GroupElement],
    acting: &Subgroup,
) -> Result<FiniteGSet> {
    assert!(acting.parent() == x.group(), "subgroup of a different group");
    let fixed = x.fixed_point_set(gens);
    let mut new_index = vec![u32::MAX; x.points()];
    for (i, &p) in fixed.iter().enumerate() {
        new_index[p] = i as u32;
    }
    for &p in &fixed {
        for h in acting.members() {
            if new_index[x.apply(*h, p)] == u32::MAX {
                return Err(Error::NotPreserved);
            }
        }
    }
    let (group, member_map) = acting.as_group();
    let m = fixed.len();
    let mut table = vec![0u32; group.order() as usize * m];
    for (hi, &h) in member_map.iter().enumerate() {
        for (i, &p) in fixed.iter().enumerate() {
            table[hi * m + i] = new_index[x.apply(h, p)];
        }
    }
    Ok(FiniteGSet::from_table_unchecked(group, m, table))
}

/// Cartesian product with the componentwise action of the product group.
pub fn product_space(x1: &FiniteGSet, x2: &FiniteGSet) -> FiniteGSet {
    let group = crate::group::direct_product(x1.group(), x2.group());
    let (m1, m2) = (x1.points(), x2.points());
    let points = m1 * m2;
    let mut table = vec![0u32; group.order() as usize * points];
    for g in group.elements() {
        let (g1, g2) = group.split(g);
        for p1 in 0..m1 {
            let q1 = x1.apply(g1, p1);
            for p2 in 0..m2 {
                let q2 = x2.apply(g2, p2);
                table[g.index() as usize * points + p1 * m2 + p2] = (q1 * m2 + q2) as u32;
            }
        }
    }
    FiniteGSet::from_table_unchecked(group, points, table)
}

/// A stratum of points whose isotropy subgroups form one conjugacy class.
#[derive(Clone, Debug)]
pub struct IsotropyStratum {
    /// Canonical representative of the isotropy class (least conjugate).
    pub representative: Subgroup,
    pub points: Vec<usize>,
    /// Number of G-orbits in the stratum: `chi(X^([H])/G)`.
    pub orbit_count: usize,
}

/// Partition of the points by conjugacy class of isotropy subgroup, with the
/// per-stratum orbit counts. Strata are ordered by canonical representative.
pub fn isotropy_strata(x: &FiniteGSet, budget: &Budget) -> Result<Vec<IsotropyStratum>> {
    let g = x.group();
    if g.order() > budget.subgroup_order {
        return Err(Error::SubgroupBound(g.order(), budget.subgroup_order));
    }
    let mut buckets: std::collections::BTreeMap<Vec<u64>, Vec<usize>> =
        std::collections::BTreeMap::new();
    let mut canon_cache: std::collections::HashMap<Vec<u64>, Vec<u64>> =
        std::collections::HashMap::new();
    for p in 0..x.points() {
        let iso = x.isotropy(p);
        let key = iso.member_indices();
        let canon = canon_cache
            .entry(key)
            .or_insert_with(|| crate::group::canonical_conjugate_indices(g, &iso))
            .clone();
        buckets.entry(canon).or_default().push(p);
    }
    let mut strata = Vec::new();
    for (canon, points) in buckets {
        let representative = subgroup_from_indices(g, &canon);
        // orbit count of G restricted to the stratum
        let mut point_pos = vec![usize::MAX; x.points()];
        for (i, &p) in points.iter().enumerate() {
            point_pos[p] = i;
        }
        let mut seen = vec![false; points.len()];
        let mut orbit_count = 0;
        for i in 0..points.len() {
            if seen[i] {
                continue;
            }
            orbit_count += 1;
            let mut stack = vec![i];
            seen[i] = true;
            while let Some(j) = stack.pop() {
                for el in g.elements() {
                    let q = x.apply(el, points[j]);
                    let qp = point_pos[q];
                    debug_assert_ne!(qp, usize::MAX, "stratum must be invariant");
                    if !seen[qp] {
                        seen[qp] = true;
                        stack.push(qp);
                    }
                }
            }
        }
        strata.push(IsotropyStratum {
            representative,
            points,
            orbit_count,
        });
    }
    Ok(strata)
}

fn subgroup_from_indices(g: &FiniteGroup, indices: &[u64]) -> Subgroup {
    let members: Vec<GroupElement> = indices.iter().map(|&i| g.element(i)).collect();
    crate::group::generated_subgroup(g, &members)
}
