//! Wreath products `G_n = G wr S_n`, their action on `X^n`, the type-based
//! conjugacy classification, and the type-driven chi^(k) engine.
//!
//! An element is a pair `(g, s)` of a tuple `g in G^n` and a permutation `s`,
//! multiplying as `(g, s)(h, t) = (g * s(h), st)`. For each cycle
//! `z = (i_1, ..., i_r)` of `s` the cycle-product `g_{i_r} ... g_{i_1}`
//! has a well-defined conjugacy class, and the multiset
//! `{m_r(c)}` of (class, cycle length) multiplicities -- the type -- is a
//! complete conjugacy invariant of `(g, s)`.
//!
//! The engine [`chi_k_wreath`] evaluates `chi^(k)(X^n, G_n)` as a sum over
//! types: the fixed space of a type is the product of `(X^<c>)^{m_r(c)}`,
//! its centralizer acts factorwise as `(C_G(c)·<a_{r,c}>) wr S_{m_r(c)}`
//! with `a_{r,c}^r = c` acting trivially, and multiplicativity reduces each
//! type to smaller wreath problems of order k-1. The base cases are
//! `chi^(0)(X^n, G_n) = C(chi(X/G) + n - 1, n)` (symmetric powers) and
//! `n = 1`, which delegates to the plain recursion. No step assumes the
//! generating-series identity, so comparing against [`crate::series`] is a
//! genuine two-sided check.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{
    adjoin_root, centralizer, AdjoinedGroup, FiniteGroup, GroupElement,
};
use crate::gspace::FiniteGSet;
use crate::orbifold::{chi_k_raw, ChiOrder};

/// An element of `G wr S_n`: a tuple over the base group and a permutation
/// given by images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathElement {
    pub tuple: Vec<GroupElement>,
    pub perm: Vec<u32>,
}

/// The wreath-product algebra over a base group, for a fixed `n`.
pub struct Wreath {
    base: FiniteGroup,
    n: usize,
    factorials: Vec<u64>,
}

impl Wreath {
    pub fn new(base: &FiniteGroup, n: usize) -> Wreath {
        let mut factorials = vec![1u64];
        for i in 1..=n {
            factorials.push(factorials[i - 1].saturating_mul(i as u64));
        }
        Wreath {
            base: base.clone(),
            n,
            factorials,
        }
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `|G|^n * n!` if it fits in a u64.
    pub fn order(&self) -> Option<u64> {
        let mut order = self.factorials.get(self.n).copied()?;
        if self.n > 0 && self.factorials[self.n] == u64::MAX {
            return None;
        }
        for _ in 0..self.n {
            order = order.checked_mul(self.base.order())?;
        }
        Some(order)
    }

    pub fn order_big(&self) -> BigUint {
        let mut f = BigUint::one();
        for i in 1..=self.n {
            f *= BigUint::from(i as u64);
        }
        f * BigUint::from(self.base.order()).pow(self.n as u32)
    }

    pub fn identity(&self) -> WreathElement {
        WreathElement {
            tuple: vec![self.base.identity(); self.n],
            perm: (0..self.n as u32).collect(),
        }
    }

    /// `(g, s)(h, t) = (g * s(h), st)`.
    pub fn mul(&self, a: &WreathElement, b: &WreathElement) -> WreathElement {
        let tuple: Vec<GroupElement> = (0..self.n)
            .map(|i| {
                self.base
                    .mul(a.tuple[i], b.tuple[invert_at(&a.perm, i)])
            })
            .collect();
        let perm: Vec<u32> = (0..self.n).map(|i| a.perm[b.perm[i] as usize]).collect();
        WreathElement { tuple, perm }
    }

    pub fn inv(&self, a: &WreathElement) -> WreathElement {
        let mut perm = vec![0u32; self.n];
        for (i, &p) in a.perm.iter().enumerate() {
            perm[p as usize] = i as u32;
        }
        let tuple: Vec<GroupElement> = (0..self.n)
            .map(|i| self.base.inv(a.tuple[a.perm[i] as usize]))
            .collect();
        WreathElement { tuple, perm }
    }

    /// For each cycle of the permutation, the cycle length and the
    /// cycle-product element `g_{i_r} g_{i_{r-1}} ... g_{i_1}`.
    pub fn cycle_products(&self, w: &WreathElement) -> Vec<(u64, GroupElement)> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            // walk the cycle i_1 = start, i_{j+1} = s(i_j)
            let mut cycle = Vec::new();
            let mut at = start;
            loop {
                seen[at] = true;
                cycle.push(at);
                at = w.perm[at] as usize;
                if at == start {
                    break;
                }
            }
            let mut product = self.base.identity();
            for &i in cycle.iter() {
                // accumulate g_{i_r} ... g_{i_1}: right-to-left over the cycle
                product = self.base.mul(w.tuple[i], product);
            }
            out.push((cycle.len() as u64, product));
        }
        out
    }

    /// The type `{m_r(c)}` of an element: multiplicities keyed by
    /// (conjugacy class of the cycle-product, cycle length).
    pub fn type_of(&self, w: &WreathElement) -> WreathType {
        let class_rep = class_representative_map(&self.base);
        let mut entries: BTreeMap<(u64, u64), u64> = BTreeMap::new();
        for (r, product) in self.cycle_products(w) {
            let rep = class_rep[product.index() as usize];
            *entries.entry((rep, r)).or_insert(0) += 1;
        }
        WreathType {
            entries,
            n: self.n as u64,
        }
    }

    /// A canonical representative element of a type: for each `(c, r)` entry,
    /// `m_r(c)` disjoint r-cycles carrying the class representative in one
    /// slot and identities elsewhere.
    pub fn representative(&self, ty: &WreathType) -> WreathElement {
        assert_eq!(ty.n, self.n as u64, "type of a different degree");
        let mut tuple = vec![self.base.identity(); self.n];
        let mut perm: Vec<u32> = (0..self.n as u32).collect();
        let mut pos = 0usize;
        for (&(class_rep, r), &m) in &ty.entries {
            for _ in 0..m {
                let r = r as usize;
                for j in 0..r {
                    perm[pos + j] = (pos + (j + 1) % r) as u32;
                }
                tuple[pos] = self.base.element(class_rep);
                pos += r;
            }
        }
        debug_assert_eq!(pos, self.n);
        WreathElement { tuple, perm }
    }

    /// All types of weight `n`, in canonical order. The count equals the
    /// number of conjugacy classes of `G wr S_n`.
    pub fn enumerate_types(&self, budget: &Budget) -> Result<Vec<WreathType>> {
        enumerate_types(&self.base, self.n as u64, budget)
    }

    /// The explicitly enumerated wreath product as a [`FiniteGroup`].
    pub fn group(&self) -> Result<FiniteGroup> {
        let order = self.order().ok_or(Error::OrderOverflow)?;
        Ok(crate::group::wreath_ops_group(
            &self.base,
            self.n,
            &self.factorials,
            order,
        ))
    }

    pub fn element_id(&self, w: &WreathElement) -> u64 {
        let tuple: Vec<u64> = w.tuple.iter().map(|g| g.index()).collect();
        crate::group::encode_wreath(&self.base, self.n, &self.factorials, &tuple, &w.perm)
    }

    pub fn from_id(&self, id: u64) -> WreathElement {
        let (tuple, perm) = crate::group::decode_wreath(&self.base, self.n, &self.factorials, id);
        WreathElement {
            tuple: tuple.into_iter().map(|i| self.base.element(i)).collect(),
            perm,
        }
    }
}

fn invert_at(perm: &[u32], i: usize) -> usize {
    perm.iter().position(|&p| p as usize == i).unwrap()
}

/// Map from element index to the index of its class representative.
fn class_representative_map(g: &FiniteGroup) -> Vec<u64> {
    let mut map = vec![0u64; g.order() as usize];
    for class in g.conjugacy_classes() {
        for m in &class.members {
            map[m.index() as usize] = class.representative.index();
        }
    }
    map
}

/// The conjugacy invariant of `G wr S_n`: multiplicities `m_r(c)` keyed by
/// (class representative index, cycle length), with `sum r * m_r(c) = n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WreathType {
    entries: BTreeMap<(u64, u64), u64>,
    n: u64,
}

impl WreathType {
    pub fn entries(&self) -> impl Iterator<Item = ((u64, u64), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn weight(&self) -> u64 {
        self.entries.iter().map(|(&(_, r), &m)| r * m).sum()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Checks internal consistency against a base group.
    pub fn validate(&self, base: &FiniteGroup) -> Result<()> {
        if self.weight() != self.n {
            return Err(Error::Malformed(format!(
                "type weight {} does not match n = {}",
                self.weight(),
                self.n
            )));
        }
        let reps: Vec<u64> = base
            .conjugacy_classes()
            .iter()
            .map(|c| c.representative.index())
            .collect();
        for ((c, r), _) in self.entries() {
            if r == 0 || !reps.contains(&c) {
                return Err(Error::Malformed(
                    "type entry is not a (class representative, cycle length) pair".into(),
                ));
            }
        }
        Ok(())
    }
}

/// All types of weight `n` over the classes of `base`, canonically ordered.
pub fn enumerate_types(base: &FiniteGroup, n: u64, budget: &Budget) -> Result<Vec<WreathType>> {
    let reps: Vec<u64> = base
        .conjugacy_classes()
        .iter()
        .map(|c| c.representative.index())
        .collect();
    let mut out = Vec::new();
    let mut current: BTreeMap<(u64, u64), u64> = BTreeMap::new();

    // Distribute the remaining weight over classes in order; within a class,
    // spend it on cycle lengths r = 1..remaining in increasing order.
    fn fill(
        reps: &[u64],
        class_idx: usize,
        min_r: u64,
        remaining: u64,
        current: &mut BTreeMap<(u64, u64), u64>,
        out: &mut Vec<WreathType>,
        n: u64,
        budget: &Budget,
    ) -> Result<()> {
        if remaining == 0 {
            if out.len() as u64 >= budget.type_count {
                return Err(Error::BudgetExceeded {
                    what: "wreath type enumeration",
                    needed: out.len() as u64 + 1,
                    budget: budget.type_count,
                });
            }
            out.push(WreathType {
                entries: current.clone(),
                n,
            });
            return Ok(());
        }
        if class_idx >= reps.len() {
            return Ok(());
        }
        // skip to the next class (spend nothing more on this one)
        fill(reps, class_idx + 1, 1, remaining, current, out, n, budget)?;
        for r in min_r..=remaining {
            for m in 1..=(remaining / r) {
                current.insert((reps[class_idx], r), m);
                fill(
                    reps,
                    class_idx,
                    r + 1,
                    remaining - r * m,
                    current,
                    out,
                    n,
                    budget,
                )?;
                current.remove(&(reps[class_idx], r));
            }
        }
        Ok(())
    }

    fill(&reps, 0, 1, n, &mut current, &mut out, n, budget)?;
    out.sort();
    Ok(out)
}

/// Class size and centralizer order of the class with the given type:
/// centralizer order `prod m_r(c)! * (r * |C_G(c)|)^{m_r(c)}`, class size
/// `|G_n| /` that.
pub fn type_class_data(base: &FiniteGroup, n: u64, ty: &WreathType) -> Result<(BigUint, BigUint)> {
    ty.validate(base)?;
    let centralizer_order_of: HashMap<u64, u64> = base
        .conjugacy_classes()
        .iter()
        .map(|c| (c.representative.index(), base.order() / c.size()))
        .collect();
    let mut cent = BigUint::one();
    for ((c, r), m) in ty.entries() {
        let factor = BigUint::from(r * centralizer_order_of[&c]).pow(m as u32);
        let mut mfact = BigUint::one();
        for i in 1..=m {
            mfact *= BigUint::from(i);
        }
        cent *= mfact * factor;
    }
    let total = Wreath::new(base, n as usize).order_big();
    debug_assert!((&total % &cent).is_zero(), "centralizer order must divide");
    let class_size = total / &cent;
    Ok((class_size, cent))
}

/// One factor of the fixed space and centralizer attached to a type entry
/// `(c, r)` with multiplicity `m`: the fixed set `X^<c>` carrying the action
/// of the extension `C_G(c)·<a>` (with `a^r = c` acting trivially), plus the
/// same set over the plain centralizer.
pub struct TypeFactor {
    pub class_rep: GroupElement,
    pub cycle_len: u64,
    pub multiplicity: u64,
    /// `X^<c>` over the extension `C_G(c)·<a_{r,c}>`; the root acts trivially.
    pub fixed: FiniteGSet,
    /// `X^<c>` over the plain centralizer `C_G(c)`.
    pub fixed_plain: FiniteGSet,
    pub extension: AdjoinedGroup,
}

/// Decomposes a type over a given base space into its factors.
pub fn decompose_type(x: &FiniteGSet, ty: &WreathType) -> Result<Vec<TypeFactor>> {
    let g = x.group();
    ty.validate(g)?;
    let mut out = Vec::new();
    for ((c, r), m) in ty.entries() {
        let rep = g.element(c);
        let cent = centralizer(g, rep);
        let (cgroup, member_map) = cent.as_group();
        let c_in_cgroup = cgroup.element(
            member_map
                .iter()
                .position(|&p| p == rep)
                .expect("an element lies in its own centralizer") as u64,
        );
        let extension = adjoin_root(&cgroup, c_in_cgroup, r)?;

        let fixed_pts = x.fixed_point_set(&[rep]);
        let mut new_index = vec![u32::MAX; x.points()];
        for (i, &p) in fixed_pts.iter().enumerate() {
            new_index[p] = i as u32;
        }
        let pts = fixed_pts.len();
        let mut plain_table = vec![0u32; cgroup.order() as usize * pts];
        for (hi, &h) in member_map.iter().enumerate() {
            for (i, &p) in fixed_pts.iter().enumerate() {
                plain_table[hi * pts + i] = new_index[x.apply(h, p)];
            }
        }
        let fixed_plain =
            FiniteGSet::from_table_unchecked(cgroup.clone(), pts, plain_table.clone());

        // The extension acts through any base component: powers of c fix
        // X^<c> pointwise, so the choice of representative does not matter.
        let ext_group = extension.group.clone();
        let mut ext_table = vec![0u32; ext_group.order() as usize * pts];
        for e in ext_group.elements() {
            let h = extension.base_part(e);
            for i in 0..pts {
                ext_table[e.index() as usize * pts + i] =
                    plain_table[h.index() as usize * pts + i];
            }
        }
        let fixed = FiniteGSet::from_table_unchecked(ext_group, pts, ext_table);

        out.push(TypeFactor {
            class_rep: rep,
            cycle_len: r,
            multiplicity: m,
            fixed,
            fixed_plain,
            extension,
        });
    }
    Ok(out)
}

/// The fixed space of any representative of a type, described as the product
/// of its factors: `prod (X^<c>)^{m_r(c)}` over entries `(c, r)`.
pub struct FixedSpaceDescription {
    pub factors: Vec<TypeFactor>,
}

impl FixedSpaceDescription {
    /// Total cardinality `prod |X^<c>|^{m_r(c)}`.
    pub fn cardinality(&self) -> BigUint {
        let mut out = BigUint::one();
        for f in &self.factors {
            out *= BigUint::from(f.fixed.points() as u64).pow(f.multiplicity as u32);
        }
        out
    }
}

/// The product description of the fixed space of a type.
pub fn fixed_space_of_type(x: &FiniteGSet, ty: &WreathType) -> Result<FixedSpaceDescription> {
    Ok(FixedSpaceDescription {
        factors: decompose_type(x, ty)?,
    })
}

/// The product structure of the centralizer of a type: for every `(c, r)`
/// with `m_r(c) > 0`, the factor `(C_G(c)·<a_{r,c}>) wr S_{m_r(c)}`.
pub struct CentralizerDescription {
    pub factors: Vec<TypeFactor>,
}

impl CentralizerDescription {
    /// Total order `prod m! * (r |C_G(c)|)^m`, which must match
    /// [`type_class_data`].
    pub fn order(&self) -> BigUint {
        let mut out = BigUint::one();
        for f in &self.factors {
            let mut mfact = BigUint::one();
            for i in 1..=f.multiplicity {
                mfact *= BigUint::from(i);
            }
            out *= mfact * BigUint::from(f.extension.group.order()).pow(f.multiplicity as u32);
        }
        out
    }
}

/// The centralizer structure of a type over a given base space.
pub fn centralizer_of_type(x: &FiniteGSet, ty: &WreathType) -> Result<CentralizerDescription> {
    Ok(CentralizerDescription {
        factors: decompose_type(x, ty)?,
    })
}

/// Engine options. The root-scaling shortcut replaces `chi^(k)(Y, C·<a>)`
/// with `r^k * chi^(k)(Y, C)` wherever the recursion bottoms out on an
/// extension whose adjoined root acts trivially; the default path carries the
/// extension concretely and makes no such assumption.
#[derive(Clone, Copy, Debug, Default)]
pub struct WreathOptions {
    pub root_scaling_shortcut: bool,
}

/// The explicitly enumerated wreath product `G wr S_n`.
pub fn wreath_group(base: &FiniteGroup, n: usize) -> Result<FiniteGroup> {
    Wreath::new(base, n).group()
}

/// As [`wreath_group`], but errors when the order exceeds the explicit
/// enumeration budget.
pub fn wreath_group_explicit(
    base: &FiniteGroup,
    n: usize,
    budget: &Budget,
) -> Result<FiniteGroup> {
    let w = Wreath::new(base, n);
    let order = w.order().ok_or(Error::OrderOverflow)?;
    if order > budget.explicit_elements {
        return Err(Error::BudgetExceeded {
            what: "explicit wreath product",
            needed: order,
            budget: budget.explicit_elements,
        });
    }
    w.group()
}

/// The action of `G wr S_n` on `X^n`:
/// `((g_1..g_n), s)(x_1..x_n) = (g_1 x_{s^-1(1)}, ..., g_n x_{s^-1(n)})`.
pub fn wreath_gset(x: &FiniteGSet, n: usize, budget: &Budget) -> Result<FiniteGSet> {
    let group = wreath_group_explicit(x.group(), n, budget)?;
    let w = Wreath::new(x.group(), n);
    let m = x.points();
    let points = m.checked_pow(n as u32).ok_or(Error::OrderOverflow)?;
    let cells = group.order().checked_mul(points as u64).ok_or(Error::OrderOverflow)?;
    if cells > budget.action_cells {
        return Err(Error::BudgetExceeded {
            what: "wreath action table",
            needed: cells,
            budget: budget.action_cells,
        });
    }
    let mut table = vec![0u32; cells as usize];
    let decode = |p: usize| -> Vec<usize> {
        let mut digits = Vec::with_capacity(n);
        let mut p = p;
        for _ in 0..n {
            digits.push(p % m.max(1));
            p /= m.max(1);
        }
        digits
    };
    for id in 0..group.order() {
        let el = w.from_id(id);
        let mut perm_inv = vec![0usize; n];
        for (i, &p) in el.perm.iter().enumerate() {
            perm_inv[p as usize] = i;
        }
        for p in 0..points {
            let xs = decode(p);
            let mut q = 0usize;
            for i in (0..n).rev() {
                q = q * m + x.apply(el.tuple[i], xs[perm_inv[i]]);
            }
            table[id as usize * points + p] = q as u32;
        }
    }
    Ok(FiniteGSet::from_table_unchecked(group, points, table))
}

fn multiset_count(options: u64, picks: u64) -> BigUint {
    // C(options + picks - 1, picks)
    if picks == 0 {
        return BigUint::one();
    }
    if options == 0 {
        return BigUint::zero();
    }
    let mut out = BigUint::one();
    for i in 0..picks {
        out = out * BigUint::from(options + picks - 1 - i) / BigUint::from(i + 1);
    }
    out
}

struct BaseSpace {
    gset: FiniteGSet,
    /// Root order of the trivially-acting adjoined root; 1 when plain.
    root_order: u64,
    /// The same space over the plain centralizer (shortcut path only).
    plain: Option<FiniteGSet>,
}

fn wreath_memo() -> &'static Mutex<HashMap<(u128, u128, u64, u64, u32, bool), BigInt>> {
    static MEMO: OnceLock<Mutex<HashMap<(u128, u128, u64, u64, u32, bool), BigInt>>> =
        OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn chi_wreath_rec(
    base: &BaseSpace,
    m: u64,
    k: u32,
    options: &WreathOptions,
    budget: &Budget,
) -> Result<BigInt> {
    if m == 0 {
        return Ok(BigInt::one());
    }
    if k == 0 {
        let orbits = base.gset.orbit_count() as u64;
        return Ok(BigInt::from(multiset_count(orbits, m)));
    }
    if base.gset.is_empty() {
        return Ok(BigInt::zero());
    }
    let key = (
        base.gset.fingerprint(),
        base.plain.as_ref().map_or(0, |p| p.fingerprint()),
        base.root_order,
        m,
        k,
        options.root_scaling_shortcut,
    );
    if let Some(v) = wreath_memo().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let value = if m == 1 {
        if options.root_scaling_shortcut && base.root_order > 1 {
            let plain = base.plain.as_ref().expect("extensions carry a plain view");
            BigInt::from(base.root_order).pow(k) * BigInt::from(chi_k_raw(plain, k))
        } else {
            BigInt::from(chi_k_raw(&base.gset, k))
        }
    } else {
        let types = enumerate_types(base.gset.group(), m, budget)?;
        let mut total = BigInt::zero();
        'types: for ty in &types {
            let mut product = BigInt::one();
            for factor in decompose_type(&base.gset, ty)? {
                let derived = BaseSpace {
                    gset: factor.fixed,
                    root_order: factor.cycle_len,
                    plain: Some(factor.fixed_plain),
                };
                let v = chi_wreath_rec(&derived, factor.multiplicity, k - 1, options, budget)?;
                if v.is_zero() {
                    continue 'types;
                }
                product *= v;
            }
            total += product;
        }
        total
    };
    wreath_memo()
        .lock()
        .unwrap()
        .insert(key, value.clone());
    Ok(value)
}

/// `chi^(k)(X^n, G_n)` by the type-based engine. `n = 0` returns 1 (empty
/// product); no explicit wreath product is ever constructed.
pub fn chi_k_wreath(
    x: &FiniteGSet,
    n: u64,
    k: ChiOrder,
    options: &WreathOptions,
    budget: &Budget,
) -> Result<BigInt> {
    let base = BaseSpace {
        gset: x.clone(),
        root_order: 1,
        plain: None,
    };
    chi_wreath_rec(&base, n, k.get(), options, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;
    use crate::orbifold::{chi_k, chi0};

    fn z2_swap() -> FiniteGSet {
        let z2 = named_group("Z_2").unwrap();
        FiniteGSet::from_generator_images(&z2, 2, &[vec![1, 0]], &Budget::default()).unwrap()
    }

    #[test]
    fn wreath_orders() {
        let z2 = named_group("Z_2").unwrap();
        let s3 = named_group("S_3").unwrap();
        assert_eq!(Wreath::new(&z2, 2).order(), Some(8));
        assert_eq!(Wreath::new(&z2, 3).order(), Some(48));
        assert_eq!(Wreath::new(&s3, 2).order(), Some(72));
        assert_eq!(wreath_group(&z2, 3).unwrap().order(), 48);
    }

    #[test]
    fn wreath_group_axioms_hold() {
        let z2 = named_group("Z_2").unwrap();
        let g = wreath_group(&z2, 2).unwrap();
        // sampled associativity and inverse checks on the full order-8 group
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in g.elements() {
                for c in g.elements() {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn cycle_products_examples() {
        let z2 = named_group("Z_2").unwrap();
        let w3 = Wreath::new(&z2, 3);
        let id = w3.identity();
        let products = w3.cycle_products(&id);
        assert_eq!(products.len(), 3);
        assert!(products.iter().all(|&(r, p)| r == 1 && p == z2.identity()));

        let w2 = Wreath::new(&z2, 2);
        let c = z2.element(1);
        // ((c, e), (12)): one 2-cycle with product c
        let el = WreathElement {
            tuple: vec![c, z2.identity()],
            perm: vec![1, 0],
        };
        let products = w2.cycle_products(&el);
        assert_eq!(products, vec![(2, c)]);

        // ((g, h), id): two 1-cycles
        let el = WreathElement {
            tuple: vec![c, z2.identity()],
            perm: vec![0, 1],
        };
        let mut products = w2.cycle_products(&el);
        products.sort_by_key(|&(r, p)| (r, p.index()));
        assert_eq!(products, vec![(1, z2.identity()), (1, c)]);
    }

    #[test]
    fn type_counts_match_class_counts() {
        let budget = Budget::default();
        let z2 = named_group("Z_2").unwrap();
        assert_eq!(enumerate_types(&z2, 1, &budget).unwrap().len(), 2);
        assert_eq!(enumerate_types(&z2, 2, &budget).unwrap().len(), 5);
        assert_eq!(enumerate_types(&z2, 3, &budget).unwrap().len(), 10);

        // trivial base group: types are the partitions of n
        let z1 = named_group("Z_1").unwrap();
        for (n, partitions) in [(1u64, 1usize), (2, 2), (3, 3), (4, 5), (5, 7), (6, 11)] {
            assert_eq!(enumerate_types(&z1, n, &budget).unwrap().len(), partitions);
        }
    }

    #[test]
    fn type_of_identity_and_twists() {
        let z2 = named_group("Z_2").unwrap();
        let w2 = Wreath::new(&z2, 2);
        let ty = w2.type_of(&w2.identity());
        assert_eq!(ty.entries().collect::<Vec<_>>(), vec![((0, 1), 2)]);

        let c = z2.element(1);
        let swap = WreathElement {
            tuple: vec![z2.identity(), z2.identity()],
            perm: vec![1, 0],
        };
        assert_eq!(
            w2.type_of(&swap).entries().collect::<Vec<_>>(),
            vec![((0, 2), 1)]
        );
        let twisted = WreathElement {
            tuple: vec![c, z2.identity()],
            perm: vec![1, 0],
        };
        assert_eq!(
            w2.type_of(&twisted).entries().collect::<Vec<_>>(),
            vec![((1, 2), 1)]
        );
    }

    #[test]
    fn type_class_data_examples() {
        let budget = Budget::default();
        let z2 = named_group("Z_2").unwrap();
        // identity type: the centralizer is the whole group
        let w2 = Wreath::new(&z2, 2);
        let id_type = w2.type_of(&w2.identity());
        let (size, cent) = type_class_data(&z2, 2, &id_type).unwrap();
        assert_eq!(size, BigUint::from(1u32));
        assert_eq!(cent, BigUint::from(8u32));

        // single 2-cycle with identity product: centralizer order 4
        let swap_type = w2.type_of(&WreathElement {
            tuple: vec![z2.identity(), z2.identity()],
            perm: vec![1, 0],
        });
        let (size, cent) = type_class_data(&z2, 2, &swap_type).unwrap();
        assert_eq!(cent, BigUint::from(4u32));
        assert_eq!(size, BigUint::from(2u32));

        // trivial base, one 3-cycle in S_3: centralizer order 3, class size 2
        let z1 = named_group("Z_1").unwrap();
        let types = enumerate_types(&z1, 3, &budget).unwrap();
        let three_cycle = types
            .iter()
            .find(|t| t.entries().any(|((_, r), _)| r == 3))
            .unwrap();
        let (size, cent) = type_class_data(&z1, 3, three_cycle).unwrap();
        assert_eq!(cent, BigUint::from(3u32));
        assert_eq!(size, BigUint::from(2u32));
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        let budget = Budget::default();
        for (name, n) in [("Z_2", 2usize), ("Z_2", 3), ("S_3", 2), ("Z_3", 2)] {
            let g = named_group(name).unwrap();
            let types = enumerate_types(&g, n as u64, &budget).unwrap();
            let mut total = BigUint::zero();
            for ty in &types {
                total += type_class_data(&g, n as u64, ty).unwrap().0;
            }
            assert_eq!(total, Wreath::new(&g, n).order_big(), "{name} wr S_{n}");
        }
    }

    #[test]
    fn wreath_gset_examples() {
        let budget = Budget::default();
        let x = z2_swap();
        // n = 1 is a relabeled copy of X
        let y = wreath_gset(&x, 1, &budget).unwrap();
        assert_eq!(y.points(), 2);
        assert_eq!(y.orbit_count(), 1);

        // orbit count of X^2 under the full wreath action: multisets from X/G
        let y = wreath_gset(&x, 2, &budget).unwrap();
        assert_eq!(y.points(), 4);
        assert_eq!(y.orbit_count(), 1);

        // trivial G on 2 points: orbit count of X^n under S_n is n + 1
        let z1 = named_group("Z_1").unwrap();
        let two = FiniteGSet::trivial(&z1, 2);
        for n in 1..=4usize {
            let y = wreath_gset(&two, n, &budget).unwrap();
            assert_eq!(y.orbit_count(), n + 1);
        }
    }

    #[test]
    fn fixed_space_cardinality_matches_brute_force() {
        let budget = Budget::default();
        let x = z2_swap();
        let z2 = x.group().clone();
        for n in 1..=3usize {
            let w = Wreath::new(&z2, n);
            let explicit = wreath_gset(&x, n, &budget).unwrap();
            for ty in enumerate_types(&z2, n as u64, &budget).unwrap() {
                let rep = w.representative(&ty);
                let rep_id = explicit.group().element(w.element_id(&rep));
                let brute = explicit.fixed_point_set(&[rep_id]).len();
                let described = fixed_space_of_type(&x, &ty).unwrap().cardinality();
                assert_eq!(described, BigUint::from(brute as u64), "type {ty:?}");
            }
        }
    }

    #[test]
    fn engine_matches_partition_numbers() {
        let budget = Budget::default();
        let opts = WreathOptions::default();
        let x = z2_swap();
        let k1 = ChiOrder::new(1).unwrap();
        let expected = [1i64, 1, 2, 3, 5, 7];
        for (n, &p) in expected.iter().enumerate() {
            let v = chi_k_wreath(&x, n as u64, k1, &opts, &budget).unwrap();
            assert_eq!(v, BigInt::from(p), "n = {n}");
        }
    }

    #[test]
    fn engine_agrees_with_explicit_brute_force() {
        let budget = Budget::default();
        let opts = WreathOptions::default();
        let x = z2_swap();
        for k in 0..=2u32 {
            let ko = ChiOrder::new(k).unwrap();
            for n in 0..=3usize {
                let engine = chi_k_wreath(&x, n as u64, ko, &opts, &budget).unwrap();
                let explicit = wreath_gset(&x, n, &budget).unwrap();
                let brute = chi_k(&explicit, ko);
                assert_eq!(engine, BigInt::from(brute), "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn engine_base_cases() {
        let budget = Budget::default();
        let opts = WreathOptions::default();
        let x = z2_swap();
        let k2 = ChiOrder::new(2).unwrap();
        assert_eq!(
            chi_k_wreath(&x, 0, k2, &opts, &budget).unwrap(),
            BigInt::one()
        );
        let empty = FiniteGSet::empty(x.group());
        assert_eq!(chi0(&empty), 0);
        assert_eq!(
            chi_k_wreath(&empty, 3, k2, &opts, &budget).unwrap(),
            BigInt::zero()
        );
    }

    #[test]
    fn shortcut_path_agrees() {
        let budget = Budget::default();
        let default_opts = WreathOptions::default();
        let shortcut = WreathOptions {
            root_scaling_shortcut: true,
        };
        let x = z2_swap();
        let s3 = named_group("S_3").unwrap();
        let y = FiniteGSet::natural(&s3).unwrap();
        for k in 0..=2u32 {
            let ko = ChiOrder::new(k).unwrap();
            for n in 0..=4u64 {
                assert_eq!(
                    chi_k_wreath(&x, n, ko, &default_opts, &budget).unwrap(),
                    chi_k_wreath(&x, n, ko, &shortcut, &budget).unwrap(),
                    "swap action, k = {k}, n = {n}"
                );
                assert_eq!(
                    chi_k_wreath(&y, n, ko, &default_opts, &budget).unwrap(),
                    chi_k_wreath(&y, n, ko, &shortcut, &budget).unwrap(),
                    "natural S_3 action, k = {k}, n = {n}"
                );
            }
        }
    }
}
