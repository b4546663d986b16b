//! Finite groups with dense element indices.
//!
//! A [`FiniteGroup`] is an immutable, cheaply clonable handle. Elements are
//! opaque indices `0..order` tagged with the owning group, so elements of
//! different groups never compare equal. Conjugacy classes are computed once
//! per group and cached.

mod build;
mod subgroup;

pub use build::{
    adjoin_root, direct_product, from_cayley_table, from_permutations, named_group, quotient_group,
    AdjoinedGroup, QuotientGroup,
};
pub use subgroup::{
    centralizer, generated_subgroup, subgroup_conjugacy_classes, Subgroup, SubgroupClass,
};
pub(crate) use subgroup::canonical_conjugate_indices;

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::hash::Fingerprinter;

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

fn fresh_uid() -> u64 {
    NEXT_UID.fetch_add(1, Ordering::Relaxed)
}

/// Largest order for which the fingerprint hashes the full multiplication
/// table; larger groups are fingerprinted by their construction recipe.
const CONTENT_FP_LIMIT: u64 = 1024;

/// An element of a [`FiniteGroup`]: an index into the group's enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: u64,
    index: u64,
}

impl GroupElement {
    pub fn index(&self) -> u64 {
        self.index
    }
}

/// A conjugacy class; the representative is the least element index in the class.
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub representative: GroupElement,
    pub members: Vec<GroupElement>,
}

impl ConjugacyClass {
    pub fn size(&self) -> u64 {
        self.members.len() as u64
    }
}

pub(crate) enum Ops {
    Table {
        mul: Vec<u64>,
        inv: Vec<u64>,
        identity: u64,
    },
    Perm {
        elems: Vec<Vec<u32>>,
        index: HashMap<Vec<u32>, u64>,
        inv: Vec<u64>,
        generators: Vec<u64>,
        /// parent[k] = (j, i): element k was first reached as elems[j] * gen_i.
        parents: Vec<Option<(u64, usize)>>,
    },
    Product {
        left: FiniteGroup,
        right: FiniteGroup,
    },
    Quotient {
        parent: FiniteGroup,
        reps: Vec<u64>,
        coset_of: Vec<u64>,
    },
    Wreath {
        base: FiniteGroup,
        n: usize,
        factorials: Vec<u64>,
    },
}

pub(crate) struct Inner {
    uid: u64,
    order: u64,
    label: String,
    ops: Ops,
    fingerprint: u128,
    classes: OnceLock<Vec<ConjugacyClass>>,
}

/// An immutable finite group. Cloning is cheap (shared handle).
#[derive(Clone)]
pub struct FiniteGroup {
    inner: Arc<Inner>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FiniteGroup({}, order {})",
            self.inner.label, self.inner.order
        )
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.inner.uid == other.inner.uid
    }
}
impl Eq for FiniteGroup {}

// Raw multiplication on the ops representation, by index.
fn raw_mul(ops: &Ops, a: u64, b: u64) -> u64 {
    match ops {
        Ops::Table { mul, inv, .. } => {
            let n = inv.len();
            mul[a as usize * n + b as usize]
        }
        Ops::Perm { elems, index, .. } => {
            let pa = &elems[a as usize];
            let pb = &elems[b as usize];
            let composed: Vec<u32> = (0..pa.len()).map(|i| pa[pb[i] as usize]).collect();
            index[&composed]
        }
        Ops::Product { left, right } => {
            let (al, ar) = (a / right.order(), a % right.order());
            let (bl, br) = (b / right.order(), b % right.order());
            let l = left.inner.raw_mul(al, bl);
            let r = right.inner.raw_mul(ar, br);
            l * right.order() + r
        }
        Ops::Quotient {
            parent,
            reps,
            coset_of,
        } => {
            let p = parent.inner.raw_mul(reps[a as usize], reps[b as usize]);
            coset_of[p as usize]
        }
        Ops::Wreath {
            base,
            n,
            factorials,
        } => {
            let wa = decode_wreath(base, *n, factorials, a);
            let wb = decode_wreath(base, *n, factorials, b);
            // (g, s)(h, t) = (g * s(h), st): component i is g_i * h_{s^-1(i)}
            let mut a_perm_inv = vec![0usize; *n];
            for (i, &p) in wa.1.iter().enumerate() {
                a_perm_inv[p as usize] = i;
            }
            let tuple: Vec<u64> = (0..*n)
                .map(|i| base.inner.raw_mul(wa.0[i], wb.0[a_perm_inv[i]]))
                .collect();
            let perm: Vec<u32> = (0..*n).map(|i| wa.1[wb.1[i] as usize]).collect();
            encode_wreath(base, *n, factorials, &tuple, &perm)
        }
    }
}

fn raw_inv(ops: &Ops, a: u64) -> u64 {
    match ops {
        Ops::Table { inv, .. } => inv[a as usize],
        Ops::Perm { inv, .. } => inv[a as usize],
        Ops::Product { left, right } => {
            let (al, ar) = (a / right.order(), a % right.order());
            left.inner.raw_inv(al) * right.order() + right.inner.raw_inv(ar)
        }
        Ops::Quotient {
            parent,
            reps,
            coset_of,
        } => coset_of[parent.inner.raw_inv(reps[a as usize]) as usize],
        Ops::Wreath {
            base,
            n,
            factorials,
        } => {
            let (tuple, perm) = decode_wreath(base, *n, factorials, a);
            let mut perm_inv = vec![0u32; *n];
            for (i, &p) in perm.iter().enumerate() {
                perm_inv[p as usize] = i as u32;
            }
            // (g, s)^-1 = (s^-1(g^-1), s^-1), i.e. component i is g_{s(i)}^-1.
            let inv_tuple: Vec<u64> = (0..*n)
                .map(|i| base.inner.raw_inv(tuple[perm[i] as usize]))
                .collect();
            encode_wreath(base, *n, factorials, &inv_tuple, &perm_inv)
        }
    }
}

fn raw_identity(ops: &Ops) -> u64 {
    match ops {
        Ops::Table { identity, .. } => *identity,
        Ops::Perm { .. } => 0,
        Ops::Product { left, right } => {
            left.inner.raw_identity() * right.order() + right.inner.raw_identity()
        }
        Ops::Quotient {
            parent, coset_of, ..
        } => coset_of[parent.inner.raw_identity() as usize],
        Ops::Wreath {
            base,
            n,
            factorials,
        } => {
            let tuple = vec![base.inner.raw_identity(); *n];
            let perm: Vec<u32> = (0..*n as u32).collect();
            encode_wreath(base, *n, factorials, &tuple, &perm)
        }
    }
}

pub(crate) fn decode_wreath(
    base: &FiniteGroup,
    n: usize,
    factorials: &[u64],
    id: u64,
) -> (Vec<u64>, Vec<u32>) {
    let nf = factorials[n];
    let mut tuple_rank = id / nf;
    let perm_rank = id % nf;
    let mut tuple = Vec::with_capacity(n);
    for _ in 0..n {
        tuple.push(tuple_rank % base.order());
        tuple_rank /= base.order();
    }
    (tuple, unrank_permutation(n, perm_rank, factorials))
}

pub(crate) fn encode_wreath(
    base: &FiniteGroup,
    n: usize,
    factorials: &[u64],
    tuple: &[u64],
    perm: &[u32],
) -> u64 {
    let mut tuple_rank = 0u64;
    for &g in tuple.iter().rev() {
        tuple_rank = tuple_rank * base.order() + g;
    }
    tuple_rank * factorials[n] + rank_permutation(perm, factorials)
}

/// Lehmer-code rank of a permutation given as images.
pub(crate) fn rank_permutation(perm: &[u32], factorials: &[u64]) -> u64 {
    let n = perm.len();
    let mut rank = 0u64;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count() as u64;
        rank += smaller * factorials[n - 1 - i];
    }
    rank
}

pub(crate) fn unrank_permutation(n: usize, mut rank: u64, factorials: &[u64]) -> Vec<u32> {
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let f = factorials[n - 1 - i];
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

impl Inner {
    pub(crate) fn raw_mul(&self, a: u64, b: u64) -> u64 {
        raw_mul(&self.ops, a, b)
    }
    pub(crate) fn raw_inv(&self, a: u64) -> u64 {
        raw_inv(&self.ops, a)
    }
    pub(crate) fn raw_identity(&self) -> u64 {
        raw_identity(&self.ops)
    }
}

fn content_fingerprint(label: &str, order: u64, ops: &Ops) -> u128 {
    let mut f = Fingerprinter::new("group-content");
    let _ = label;
    f.write_u64(order);
    for a in 0..order {
        for b in 0..order {
            f.write_u64(raw_mul(ops, a, b));
        }
    }
    f.finish()
}

/// A lazily multiplied wreath product `base wr S_n` with mixed-radix element
/// encoding; enumeration-free multiplication and inversion.
pub(crate) fn wreath_ops_group(
    base: &FiniteGroup,
    n: usize,
    factorials: &[u64],
    order: u64,
) -> FiniteGroup {
    let mut recipe = Fingerprinter::new("group-wreath");
    recipe.write_u128(base.fingerprint());
    recipe.write_u64(n as u64);
    build_group(
        format!("{} wr S_{n}", base.label()),
        order,
        Ops::Wreath {
            base: base.clone(),
            n,
            factorials: factorials.to_vec(),
        },
        Some(recipe.finish()),
    )
}

pub(crate) fn build_group(label: String, order: u64, ops: Ops, recipe_fp: Option<u128>) -> FiniteGroup {
    let fingerprint = match recipe_fp {
        Some(fp) if order > CONTENT_FP_LIMIT => fp,
        _ => content_fingerprint(&label, order, &ops),
    };
    FiniteGroup {
        inner: Arc::new(Inner {
            uid: fresh_uid(),
            order,
            label,
            ops,
            fingerprint,
            classes: OnceLock::new(),
        }),
    }
}

impl FiniteGroup {
    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn uid(&self) -> u64 {
        self.inner.uid
    }

    /// Content-based structural hash, stable across identical constructions.
    pub fn fingerprint(&self) -> u128 {
        self.inner.fingerprint
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            group: self.inner.uid,
            index: self.inner.raw_identity(),
        }
    }

    /// The element with the given index.
    ///
    /// Panics if the index is out of range.
    pub fn element(&self, index: u64) -> GroupElement {
        assert!(index < self.inner.order, "element index out of range");
        GroupElement {
            group: self.inner.uid,
            index,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.inner.order).map(move |i| self.element(i))
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        g.group == self.inner.uid
    }

    fn check_member(&self, g: GroupElement) {
        assert!(
            g.group == self.inner.uid,
            "element belongs to a different group"
        );
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.check_member(a);
        self.check_member(b);
        self.element(self.inner.raw_mul(a.index, b.index))
    }

    pub fn inv(&self, a: GroupElement) -> GroupElement {
        self.check_member(a);
        self.element(self.inner.raw_inv(a.index))
    }

    pub fn pow(&self, a: GroupElement, e: i64) -> GroupElement {
        self.check_member(a);
        let mut base = if e < 0 { self.inv(a) } else { a };
        let mut exp = e.unsigned_abs();
        let mut acc = self.identity();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: GroupElement) -> u64 {
        let e = self.identity();
        let mut x = a;
        let mut k = 1u64;
        while x != e {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.conjugacy_classes().len() as u64 == self.order()
    }

    /// Conjugacy classes, partitioning the group, ordered by representative
    /// index; the representative is the least index in its class.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        self.inner.classes.get_or_init(|| {
            let n = self.inner.order;
            let mut seen = vec![false; n as usize];
            let mut classes = Vec::new();
            for i in 0..n {
                if seen[i as usize] {
                    continue;
                }
                let mut members = Vec::new();
                for h in 0..n {
                    let hi = self.inner.raw_inv(h);
                    let c = self.inner.raw_mul(self.inner.raw_mul(h, i), hi);
                    if !seen[c as usize] {
                        seen[c as usize] = true;
                        members.push(c);
                    }
                }
                members.sort_unstable();
                classes.push(ConjugacyClass {
                    representative: self.element(members[0]),
                    members: members.into_iter().map(|m| self.element(m)).collect(),
                });
            }
            classes
        })
    }

    /// Errors if the group is too large for the given element-enumeration budget.
    pub fn check_enumerable(&self, budget: u64) -> Result<()> {
        if self.order() > budget {
            return Err(Error::BudgetExceeded {
                what: "group element enumeration",
                needed: self.order(),
                budget,
            });
        }
        Ok(())
    }

    /// Generator elements, for groups built from permutation generators.
    pub fn generators(&self) -> Option<Vec<GroupElement>> {
        match &self.inner.ops {
            Ops::Perm { generators, .. } => {
                Some(generators.iter().map(|&g| self.element(g)).collect())
            }
            _ => None,
        }
    }

    /// The permutation image of an element, for permutation-built groups.
    pub fn perm_image(&self, g: GroupElement) -> Option<&[u32]> {
        self.check_member(g);
        match &self.inner.ops {
            Ops::Perm { elems, .. } => Some(&elems[g.index as usize]),
            _ => None,
        }
    }

    /// For permutation-built groups: `(parent, generator)` pairs along the
    /// closure BFS, used to transport generator-level data to all elements.
    pub(crate) fn perm_parents(&self) -> Option<&[Option<(u64, usize)>]> {
        match &self.inner.ops {
            Ops::Perm { parents, .. } => Some(parents),
            _ => None,
        }
    }

    /// For product groups: the pair of factors.
    pub fn product_factors(&self) -> Option<(&FiniteGroup, &FiniteGroup)> {
        match &self.inner.ops {
            Ops::Product { left, right } => Some((left, right)),
            _ => None,
        }
    }

    /// Index pairing for product groups.
    pub fn pair(&self, l: GroupElement, r: GroupElement) -> GroupElement {
        match &self.inner.ops {
            Ops::Product { left, right } => {
                left.check_member(l);
                right.check_member(r);
                self.element(l.index * right.order() + r.index)
            }
            _ => panic!("pair() is only defined on product groups"),
        }
    }

    /// Inverse of [`FiniteGroup::pair`].
    pub fn split(&self, g: GroupElement) -> (GroupElement, GroupElement) {
        self.check_member(g);
        match &self.inner.ops {
            Ops::Product { left, right } => (
                left.element(g.index / right.order()),
                right.element(g.index % right.order()),
            ),
            _ => panic!("split() is only defined on product groups"),
        }
    }

    pub(crate) fn ops(&self) -> &Ops {
        &self.inner.ops
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_basics() {
        let g = named_group("Z_4").unwrap();
        assert_eq!(g.order(), 4);
        let e = g.identity();
        let a = g.element(1);
        assert_eq!(g.element_order(a), 4);
        assert_eq!(g.pow(a, 4), e);
        assert_eq!(g.pow(a, -1), g.inv(a));
        assert_eq!(g.conjugacy_classes().len(), 4);
    }

    #[test]
    fn s3_class_sizes() {
        let g = named_group("S_3").unwrap();
        assert_eq!(g.order(), 6);
        let mut sizes: Vec<u64> = g.conjugacy_classes().iter().map(|c| c.size()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn q8_class_sizes() {
        let g = named_group("Q_8").unwrap();
        let mut sizes: Vec<u64> = g.conjugacy_classes().iter().map(|c| c.size()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn class_equation_holds() {
        for name in ["Z_6", "S_4", "D_4", "A_4", "Q_8"] {
            let g = named_group(name).unwrap();
            let total: u64 = g.conjugacy_classes().iter().map(|c| c.size()).sum();
            assert_eq!(total, g.order(), "class equation fails for {name}");
            for class in g.conjugacy_classes() {
                let cent = centralizer(&g, class.representative);
                assert_eq!(class.size() * cent.order(), g.order());
            }
        }
    }

    #[test]
    fn elements_of_distinct_groups_differ() {
        let g1 = named_group("Z_2").unwrap();
        let g2 = named_group("Z_2").unwrap();
        assert_ne!(g1.element(0), g2.element(0));
        // identical content still fingerprints identically
        assert_eq!(g1.fingerprint(), g2.fingerprint());
    }

    #[test]
    fn permutation_ranking_roundtrip() {
        let factorials: Vec<u64> = {
            let mut f = vec![1u64];
            for i in 1..=8 {
                f.push(f[i - 1] * i as u64);
            }
            f
        };
        for rank in 0..24 {
            let p = unrank_permutation(4, rank, &factorials);
            assert_eq!(rank_permutation(&p, &factorials), rank);
        }
    }
}
