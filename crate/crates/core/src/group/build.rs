//! Group constructors: validated Cayley tables, permutation closures, named
//! groups, direct products, quotients, and central root extensions.

use std::collections::HashMap;

use super::{build_group, FiniteGroup, GroupElement, Ops};
use crate::error::{Error, Result};
use crate::group::subgroup::{generated_subgroup, Subgroup};
use crate::hash::Fingerprinter;

/// Orders up to which the Cayley-table axioms are verified exhaustively;
/// beyond this, associativity is checked on sampled triples.
const FULL_VALIDATION_LIMIT: u64 = 512;

/// Builds a group from a full multiplication table `table[a][b] = ab`.
pub fn from_cayley_table(table: Vec<Vec<u64>>) -> Result<FiniteGroup> {
    let n = table.len() as u64;
    if n == 0 {
        return Err(Error::Malformed("empty multiplication table".into()));
    }
    for row in &table {
        if row.len() as u64 != n {
            return Err(Error::Malformed("multiplication table is not square".into()));
        }
        if row.iter().any(|&v| v >= n) {
            return Err(Error::Malformed("table entry out of range".into()));
        }
    }
    // Latin square property: rows and columns are bijections.
    for a in 0..n as usize {
        let mut row_seen = vec![false; n as usize];
        let mut col_seen = vec![false; n as usize];
        for b in 0..n as usize {
            if std::mem::replace(&mut row_seen[table[a][b] as usize], true) {
                return Err(Error::NonBijective(a as u64));
            }
            if std::mem::replace(&mut col_seen[table[b][a] as usize], true) {
                return Err(Error::NonBijective(a as u64));
            }
        }
    }
    // Two-sided identity.
    let identity = (0..n)
        .find(|&e| {
            (0..n).all(|x| {
                table[e as usize][x as usize] == x && table[x as usize][e as usize] == x
            })
        })
        .ok_or(Error::MissingIdentity)?;
    // Inverses.
    let mut inv = vec![0u64; n as usize];
    for a in 0..n {
        let b = (0..n)
            .find(|&b| {
                table[a as usize][b as usize] == identity
                    && table[b as usize][a as usize] == identity
            })
            .ok_or(Error::MissingInverse(a))?;
        inv[a as usize] = b;
    }
    // Associativity: exhaustive at small orders, sampled beyond.
    let check = |a: u64, b: u64, c: u64| -> Result<()> {
        let ab_c = table[table[a as usize][b as usize] as usize][c as usize];
        let a_bc = table[a as usize][table[b as usize][c as usize] as usize];
        if ab_c != a_bc {
            return Err(Error::NonAssociative(a, b, c));
        }
        Ok(())
    };
    if n <= FULL_VALIDATION_LIMIT {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    check(a, b, c)?;
                }
            }
        }
    } else {
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..1_000_000 {
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state % n
            };
            let (a, b, c) = (next(), next(), next());
            check(a, b, c)?;
        }
    }

    let mul: Vec<u64> = table.into_iter().flatten().collect();
    Ok(build_group(
        format!("cayley<{n}>"),
        n,
        Ops::Table { mul, inv, identity },
        None,
    ))
}

/// Builds the group generated by permutations of `0..degree`, by closure.
/// The identity gets index 0 and the generators keep their listed order.
pub fn from_permutations(
    degree: usize,
    generator_images: &[Vec<u32>],
    max_elements: u64,
) -> Result<FiniteGroup> {
    for g in generator_images {
        if g.len() != degree {
            return Err(Error::Malformed("generator has wrong degree".into()));
        }
        let mut seen = vec![false; degree];
        for &img in g {
            if img as usize >= degree || std::mem::replace(&mut seen[img as usize], true) {
                return Err(Error::NonBijective(0));
            }
        }
    }
    let identity: Vec<u32> = (0..degree as u32).collect();
    let mut elems = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity, 0u64);
    let mut parents: Vec<Option<(u64, usize)>> = vec![None];
    let mut generators = Vec::new();

    // Seed the generators so their indices are stable and recorded.
    for (gi, g) in generator_images.iter().enumerate() {
        if !index.contains_key(g) {
            let id = elems.len() as u64;
            index.insert(g.clone(), id);
            elems.push(g.clone());
            parents.push(Some((0, gi)));
        }
        generators.push(index[g]);
    }

    let mut head = 0usize;
    while head < elems.len() {
        let current = elems[head].clone();
        for (gi, g) in generator_images.iter().enumerate() {
            // right-multiply: (current * g)(x) = current(g(x))
            let product: Vec<u32> = (0..degree).map(|x| current[g[x] as usize]).collect();
            if !index.contains_key(&product) {
                if elems.len() as u64 >= max_elements {
                    return Err(Error::BudgetExceeded {
                        what: "permutation group closure",
                        needed: max_elements + 1,
                        budget: max_elements,
                    });
                }
                let id = elems.len() as u64;
                index.insert(product.clone(), id);
                elems.push(product);
                parents.push(Some((head as u64, gi)));
            }
        }
        head += 1;
    }

    let mut inv = vec![0u64; elems.len()];
    for (i, p) in elems.iter().enumerate() {
        let mut q = vec![0u32; degree];
        for (x, &img) in p.iter().enumerate() {
            q[img as usize] = x as u32;
        }
        inv[i] = index[&q];
    }

    let order = elems.len() as u64;
    Ok(build_group(
        format!("perm<{degree}, order {order}>"),
        order,
        Ops::Perm {
            elems,
            index,
            inv,
            generators,
            parents,
        },
        None,
    ))
}

fn cycle(degree: usize, points: &[u32]) -> Vec<u32> {
    let mut img: Vec<u32> = (0..degree as u32).collect();
    for w in 0..points.len() {
        img[points[w] as usize] = points[(w + 1) % points.len()];
    }
    img
}

fn quaternion_table() -> Vec<Vec<u64>> {
    // elements: 1, -1, i, -i, j, -j, k, -k
    // encode as (unit, sign): index = 2*unit + sign, units 0=1, 1=i, 2=j, 3=k
    let unit_mul = |u: usize, v: usize| -> (usize, bool) {
        match (u, v) {
            (0, x) => (x, false),
            (x, 0) => (x, false),
            (1, 1) => (0, true),
            (2, 2) => (0, true),
            (3, 3) => (0, true),
            (1, 2) => (3, false),
            (2, 1) => (3, true),
            (2, 3) => (1, false),
            (3, 2) => (1, true),
            (3, 1) => (2, false),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let mut table = vec![vec![0u64; 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (ua, sa) = (a / 2, a % 2 == 1);
            let (ub, sb) = (b / 2, b % 2 == 1);
            let (uc, flip) = unit_mul(ua, ub);
            let sc = sa ^ sb ^ flip;
            table[a][b] = (2 * uc + sc as usize) as u64;
        }
    }
    table
}

/// Builds one of the named groups:
/// `Z_n`, `S_n` (n <= 5), `A_4`, `D_4`, `Q_8`, `Z_2xZ_2`.
pub fn named_group(name: &str) -> Result<FiniteGroup> {
    let name = name.trim().replace('×', "x");
    let bad = || Error::Malformed(format!("unknown group name: {name}"));
    if name == "Z_2xZ_2" {
        return from_permutations(4, &[cycle(4, &[0, 1]), cycle(4, &[2, 3])], 16);
    }
    if name == "D_4" {
        return from_permutations(4, &[cycle(4, &[0, 1, 2, 3]), cycle(4, &[1, 3])], 16);
    }
    if name == "Q_8" {
        return from_cayley_table(quaternion_table());
    }
    if name == "A_4" {
        let swap = {
            let mut img = cycle(4, &[0, 1]);
            let img2 = cycle(4, &[2, 3]);
            for (x, v) in img2.iter().enumerate() {
                if *v != x as u32 {
                    img[x] = *v;
                }
            }
            img
        };
        return from_permutations(4, &[cycle(4, &[0, 1, 2]), swap], 16);
    }
    if let Some(n) = name.strip_prefix("Z_").and_then(|s| s.parse::<usize>().ok()) {
        if n == 0 {
            return Err(bad());
        }
        let points: Vec<u32> = (0..n as u32).collect();
        return from_permutations(n, &[cycle(n, &points)], n as u64 + 1);
    }
    if let Some(n) = name.strip_prefix("S_").and_then(|s| s.parse::<usize>().ok()) {
        if n == 0 || n > 5 {
            return Err(bad());
        }
        if n == 1 {
            return from_permutations(1, &[vec![0]], 2);
        }
        let points: Vec<u32> = (0..n as u32).collect();
        return from_permutations(n, &[cycle(n, &[0, 1]), cycle(n, &points)], 200);
    }
    Err(bad())
}

/// Direct product with componentwise multiplication; the factors stay
/// recoverable through [`FiniteGroup::split`].
pub fn direct_product(left: &FiniteGroup, right: &FiniteGroup) -> FiniteGroup {
    let order = left.order() * right.order();
    let mut recipe = Fingerprinter::new("group-product");
    recipe.write_u128(left.fingerprint());
    recipe.write_u128(right.fingerprint());
    build_group(
        format!("{} x {}", left.label(), right.label()),
        order,
        Ops::Product {
            left: left.clone(),
            right: right.clone(),
        },
        Some(recipe.finish()),
    )
}

/// A quotient group together with its natural projection.
pub struct QuotientGroup {
    pub group: FiniteGroup,
    parent: FiniteGroup,
    coset_of: Vec<u64>,
}

impl QuotientGroup {
    pub fn project(&self, g: GroupElement) -> GroupElement {
        assert!(self.parent.contains(g), "element not in the quotient parent");
        self.group.element(self.coset_of[g.index() as usize])
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }
}

/// Quotient of `g` by a normal subgroup. Cosets are numbered in order of
/// their least parent element.
pub fn quotient_group(g: &FiniteGroup, n: &Subgroup) -> Result<QuotientGroup> {
    assert!(n.parent() == g, "subgroup of a different group");
    if !n.is_normal() {
        return Err(Error::NotNormal);
    }
    let order = g.order();
    let mut coset_of = vec![u64::MAX; order as usize];
    let mut reps = Vec::new();
    for a in g.elements() {
        if coset_of[a.index() as usize] != u64::MAX {
            continue;
        }
        let id = reps.len() as u64;
        reps.push(a.index());
        for m in n.members() {
            let c = g.mul(a, *m);
            coset_of[c.index() as usize] = id;
        }
    }
    let q_order = reps.len() as u64;
    debug_assert_eq!(q_order * n.order(), order);
    let group = build_group(
        format!("{} / N{}", g.label(), n.order()),
        q_order,
        Ops::Quotient {
            parent: g.clone(),
            reps,
            coset_of: coset_of.clone(),
        },
        None,
    );
    Ok(QuotientGroup {
        group,
        parent: g.clone(),
        coset_of,
    })
}

/// The extension `G·<a>` of `G` by a central root: `a` commutes with
/// everything, `a^r` equals the given central element `c`, and
/// `<a> ∩ G = <c>`. Realized as `(G × Z_{r·d}) / <(c, -r)>` with `d = ord(c)`.
pub struct AdjoinedGroup {
    pub group: FiniteGroup,
    pub root: GroupElement,
    pub root_exponent: u64,
    base: FiniteGroup,
    embed: Vec<GroupElement>,
    base_component: Vec<GroupElement>,
}

impl AdjoinedGroup {
    /// Image of a base-group element inside the extension.
    pub fn embed(&self, g: GroupElement) -> GroupElement {
        assert!(self.base.contains(g), "element not in the adjoined base");
        self.embed[g.index() as usize]
    }

    /// A base-group component of a representative of the given extension
    /// element. Well defined up to powers of the adjoined centre, so it is
    /// the right thing to act through whenever that centre acts trivially.
    pub fn base_part(&self, e: GroupElement) -> GroupElement {
        assert!(self.group.contains(e), "element not in the extension");
        self.base_component[e.index() as usize]
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }
}

/// Adjoins a root `a` with `a^r = c` to a group with central element `c`.
pub fn adjoin_root(g: &FiniteGroup, c: GroupElement, r: u64) -> Result<AdjoinedGroup> {
    assert!(g.contains(c), "root target not in the group");
    assert!(r >= 1, "root exponent must be positive");
    let central = g.elements().all(|h| g.mul(h, c) == g.mul(c, h));
    if !central {
        return Err(Error::NotCentral);
    }
    let d = g.element_order(c);
    let rd = r
        .checked_mul(d)
        .ok_or(Error::OrderOverflow)?;
    let cyclic = named_group(&format!("Z_{rd}"))?;
    let product = direct_product(g, &cyclic);
    // the relation (c, -r): identify c with a^r
    let minus_r = (rd - r % rd) % rd;
    let relation = product.pair(c, cyclic.element(minus_r));
    let kernel = generated_subgroup(&product, &[relation]);
    let quotient = quotient_group(&product, &kernel)?;

    let embed: Vec<GroupElement> = g
        .elements()
        .map(|h| quotient.project(product.pair(h, cyclic.identity())))
        .collect();
    let root = quotient.project(product.pair(g.identity(), cyclic.element(1 % rd)));

    let base_component: Vec<GroupElement> = (0..quotient.group.order())
        .map(|q| {
            let rep = g
                .elements()
                .flat_map(|h| cyclic.elements().map(move |z| (h, z)))
                .find(|(h, z)| quotient.project(product.pair(*h, *z)) == quotient.group.element(q))
                .expect("every coset has a representative");
            rep.0
        })
        .collect();

    let out = AdjoinedGroup {
        group: quotient.group,
        root,
        root_exponent: r,
        base: g.clone(),
        embed,
        base_component,
    };
    debug_assert_eq!(out.group.order(), g.order() * r);
    debug_assert_eq!(out.group.pow(out.root, r as i64), out.embed(c));
    Ok(out)
}
