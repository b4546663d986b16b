//! The three chi^(k) engines for finite group actions.
//!
//! For a finite group G acting on a finite set X:
//!
//! - [`chi_k`] evaluates the recursion
//!   `chi^(k)(X, G) = sum over classes [g] of chi^(k-1)(X^<g>, C_G(g))`,
//!   with base case `chi^(0)(X, G) = chi(X/G)` (the orbit count);
//! - [`chi_k_oracle`] evaluates the commuting-tuple definition
//!   `(1/|G|) * sum over commuting (k+1)-tuples g of |X^<g>|` directly,
//!   with the division checked exact;
//! - [`chi_k_by_orbit_types`] evaluates the orbit-type decomposition
//!   `sum over subgroup classes [H] of chi(X^([H])/G) * chi^(k)(G/H, G)`.
//!
//! The three routes agree; the test suites treat that agreement as the
//! primary correctness check rather than as an assumption.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{centralizer, subgroup_conjugacy_classes};
use crate::gspace::{fixed_points, isotropy_strata, FiniteGSet};

/// Default cap on the chi order.
pub const DEFAULT_MAX_ORDER: u32 = 4;

/// A validated chi order `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChiOrder(u32);

impl ChiOrder {
    /// Validates against the default maximum order.
    pub fn new(k: u32) -> Result<ChiOrder> {
        ChiOrder::with_max(k, DEFAULT_MAX_ORDER)
    }

    /// Validates against an explicit maximum order.
    pub fn with_max(k: u32, max: u32) -> Result<ChiOrder> {
        if k > max {
            return Err(Error::OrderTooLarge(k, max));
        }
        Ok(ChiOrder(k))
    }

    pub fn get(&self) -> u32 {
        self.0
    }
}

/// `chi^(0)(X, G) = chi(X/G)`: the number of orbits.
pub fn chi0(x: &FiniteGSet) -> i64 {
    x.orbit_count() as i64
}

fn memo() -> &'static Mutex<HashMap<(u128, u32), i64>> {
    static MEMO: OnceLock<Mutex<HashMap<(u128, u32), i64>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `chi^(k)(X, G)` by recursion over conjugacy classes.
pub fn chi_k(x: &FiniteGSet, k: ChiOrder) -> i64 {
    chi_k_raw(x, k.get())
}

pub(crate) fn chi_k_raw(x: &FiniteGSet, k: u32) -> i64 {
    if k == 0 {
        return chi0(x);
    }
    let key = (x.fingerprint(), k);
    if let Some(&v) = memo().lock().unwrap().get(&key) {
        return v;
    }
    let g = x.group();
    let mut total = 0i64;
    for class in g.conjugacy_classes() {
        let rep = class.representative;
        let cent = centralizer(g, rep);
        let fixed = fixed_points(x, &[rep], &cent)
            .expect("a centralizer preserves the fixed set of its element");
        total += chi_k_raw(&fixed, k - 1);
    }
    memo().lock().unwrap().insert(key, total);
    total
}

/// Outcome of the commuting-tuple evaluation, with the raw sum exposed so the
/// divisibility of the sum by |G| can be checked independently.
#[derive(Clone, Debug)]
pub struct OracleOutcome {
    /// `sum over commuting (k+1)-tuples of |X^<tuple>|`.
    pub tuple_sum: u128,
    /// Search-tree nodes visited.
    pub visits: u64,
    pub value: i64,
}

/// `chi^(k)(X, G)` from the commuting-tuple definition. Requires `k >= 1`.
pub fn chi_k_oracle(x: &FiniteGSet, k: ChiOrder, budget: &Budget) -> Result<i64> {
    Ok(chi_k_oracle_report(x, k, budget)?.value)
}

/// As [`chi_k_oracle`], also reporting the raw tuple sum and visit count.
pub fn chi_k_oracle_report(x: &FiniteGSet, k: ChiOrder, budget: &Budget) -> Result<OracleOutcome> {
    let k = k.get();
    assert!(k >= 1, "the tuple definition needs k >= 1");
    let g = x.group();
    let order = g.order();
    g.check_enumerable(budget.explicit_elements)?;

    // Depth-first over tuples (g_0, ..., g_k) with all pairs commuting.
    // Candidates at each depth are the running centralizer intersection, and
    // the running fixed set is intersected as the tuple grows; a branch with
    // an empty fixed set contributes nothing at any depth and is pruned.
    struct Dfs<'a> {
        x: &'a FiniteGSet,
        all: Vec<u64>,
        depth_target: u32,
        visits: u64,
        visit_budget: u64,
        sum: u128,
    }
    impl Dfs<'_> {
        fn run(&mut self, depth: u32, candidates: &[u64], fixed: &[usize]) -> Result<()> {
            let g = self.x.group().clone();
            for &c in candidates {
                self.visits += 1;
                if self.visits > self.visit_budget {
                    return Err(Error::BudgetExceeded {
                        what: "commuting tuple visits",
                        needed: self.visits,
                        budget: self.visit_budget,
                    });
                }
                let ce = g.element(c);
                let next_fixed: Vec<usize> = fixed
                    .iter()
                    .copied()
                    .filter(|&p| self.x.apply(ce, p) == p)
                    .collect();
                if next_fixed.is_empty() {
                    continue;
                }
                if depth == self.depth_target {
                    self.sum += next_fixed.len() as u128;
                    continue;
                }
                let next_candidates: Vec<u64> = candidates
                    .iter()
                    .copied()
                    .filter(|&h| {
                        let he = g.element(h);
                        g.mul(he, ce) == g.mul(ce, he)
                    })
                    .collect();
                self.run(depth + 1, &next_candidates, &next_fixed)?;
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        x,
        all: (0..order).collect(),
        depth_target: k,
        visits: 0,
        visit_budget: budget.tuple_visits,
        sum: 0,
    };
    let all = dfs.all.clone();
    let every_point: Vec<usize> = (0..x.points()).collect();
    dfs.run(0, &all, &every_point)?;

    if dfs.sum % order as u128 != 0 {
        return Err(Error::InexactDivision {
            sum: dfs.sum.to_string(),
            order,
        });
    }
    let value = (dfs.sum / order as u128) as i64;
    Ok(OracleOutcome {
        tuple_sum: dfs.sum,
        visits: dfs.visits,
        value,
    })
}

/// `chi^(k)(X, G)` from the orbit-type decomposition: isotropy strata paired
/// with the coset spaces `G/H`.
pub fn chi_k_by_orbit_types(x: &FiniteGSet, k: ChiOrder, budget: &Budget) -> Result<i64> {
    let g = x.group();
    let classes = subgroup_conjugacy_classes(g, budget.subgroup_order)?;
    let strata = isotropy_strata(x, budget)?;
    let mut total = 0i64;
    for class in &classes {
        let key = class.representative.member_indices();
        let stratum_orbits = strata
            .iter()
            .find(|s| s.representative.member_indices() == key)
            .map_or(0, |s| s.orbit_count) as i64;
        if stratum_orbits == 0 {
            continue;
        }
        let cosets = FiniteGSet::coset_space(g, &class.representative);
        total += stratum_orbits * chi_k_raw(&cosets, k.get());
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{direct_product, named_group};
    use crate::gspace::product_space;

    fn z2_swap() -> FiniteGSet {
        let z2 = named_group("Z_2").unwrap();
        FiniteGSet::from_generator_images(&z2, 2, &[vec![1, 0]], &Budget::default()).unwrap()
    }

    #[test]
    fn chi0_examples() {
        let z2 = named_group("Z_2").unwrap();
        assert_eq!(chi0(&z2_swap()), 1);
        assert_eq!(chi0(&FiniteGSet::trivial(&z2, 7)), 7);
        assert_eq!(chi0(&FiniteGSet::regular(&z2, &Budget::default()).unwrap()), 1);
        assert_eq!(chi0(&FiniteGSet::empty(&z2)), 0);
    }

    #[test]
    fn chi1_of_the_swap_action() {
        let k1 = ChiOrder::new(1).unwrap();
        assert_eq!(chi_k(&z2_swap(), k1), 1);
        assert_eq!(
            chi_k_oracle(&z2_swap(), k1, &Budget::default()).unwrap(),
            1
        );
        assert_eq!(
            chi_k_by_orbit_types(&z2_swap(), k1, &Budget::default()).unwrap(),
            1
        );
    }

    #[test]
    fn abelian_point_gives_order_power() {
        for name in ["Z_2", "Z_3", "Z_4", "Z_2xZ_2", "Z_6"] {
            let g = named_group(name).unwrap();
            let pt = FiniteGSet::trivial(&g, 1);
            for k in 0..=3u32 {
                let expected = (g.order() as i64).pow(k);
                assert_eq!(chi_k(&pt, ChiOrder::new(k).unwrap()), expected, "{name}");
            }
        }
    }

    #[test]
    fn point_oracle_counts_classes() {
        // chi^(1)(pt, G) = number of commuting pairs / |G| = class count
        let s3 = named_group("S_3").unwrap();
        let pt = FiniteGSet::trivial(&s3, 1);
        let k1 = ChiOrder::new(1).unwrap();
        assert_eq!(chi_k_oracle(&pt, k1, &Budget::default()).unwrap(), 3);
        assert_eq!(chi_k(&pt, k1), 3);
    }

    #[test]
    fn s3_natural_chi_values() {
        let s3 = named_group("S_3").unwrap();
        let x = FiniteGSet::natural(&s3).unwrap();
        assert_eq!(chi_k(&x, ChiOrder::new(1).unwrap()), 2);
        assert_eq!(chi_k(&x, ChiOrder::new(2).unwrap()), 4);
        let budget = Budget::default();
        assert_eq!(chi_k_oracle(&x, ChiOrder::new(1).unwrap(), &budget).unwrap(), 2);
        assert_eq!(chi_k_oracle(&x, ChiOrder::new(2).unwrap(), &budget).unwrap(), 4);
    }

    #[test]
    fn orbit_type_decomposition_examples() {
        let budget = Budget::default();
        let k1 = ChiOrder::new(1).unwrap();
        let z2 = named_group("Z_2").unwrap();

        let free = FiniteGSet::regular(&z2, &budget).unwrap();
        assert_eq!(chi_k_by_orbit_types(&free, k1, &budget).unwrap(), 1);

        let pt = FiniteGSet::trivial(&z2, 1);
        assert_eq!(chi_k_by_orbit_types(&pt, k1, &budget).unwrap(), 2);

        let empty = FiniteGSet::empty(&z2);
        assert_eq!(chi_k_by_orbit_types(&empty, k1, &budget).unwrap(), 0);
    }

    #[test]
    fn additivity_over_disjoint_union() {
        let s3 = named_group("S_3").unwrap();
        let a = FiniteGSet::natural(&s3).unwrap();
        let b = FiniteGSet::trivial(&s3, 2);
        let u = a.disjoint_union(&b).unwrap();
        for k in 0..=2u32 {
            let k = ChiOrder::new(k).unwrap();
            assert_eq!(chi_k(&u, k), chi_k(&a, k) + chi_k(&b, k));
        }
    }

    #[test]
    fn multiplicativity_over_products() {
        let budget = Budget::default();
        let z2 = named_group("Z_2").unwrap();
        let s3 = named_group("S_3").unwrap();
        let x1 = z2_swap();
        let x2 = FiniteGSet::natural(&s3).unwrap();
        let p = product_space(&x1, &x2);
        let _ = direct_product(&z2, &s3);
        for k in 0..=2u32 {
            let k = ChiOrder::new(k).unwrap();
            assert_eq!(chi_k(&p, k), chi_k(&x1, k) * chi_k(&x2, k));
        }
        let _ = budget;
    }

    #[test]
    fn chi_order_bound_enforced() {
        assert!(ChiOrder::new(4).is_ok());
        assert!(matches!(ChiOrder::new(5), Err(Error::OrderTooLarge(5, 4))));
        assert!(ChiOrder::with_max(6, 8).is_ok());
    }
}
