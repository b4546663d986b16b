//! Enumeration budgets for the brute-force paths.
//!
//! Every exhaustive computation (commuting-tuple sums, explicit wreath
//! products, full action tables, type enumeration) is capped; exceeding a cap
//! is a reported error, never a silent truncation. The `OEC_BUDGET`
//! environment variable overrides the enumeration caps with a single value.

#[derive(Clone, Debug)]
pub struct Budget {
    /// Nodes visited while enumerating commuting tuples.
    pub tuple_visits: u64,
    /// Largest group order for which full element enumeration is allowed.
    pub explicit_elements: u64,
    /// Largest action table, counted in (element, point) cells.
    pub action_cells: u64,
    /// Largest number of wreath types enumerated for one computation.
    pub type_count: u64,
    /// Largest group order for which all subgroups are enumerated.
    pub subgroup_order: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            tuple_visits: 100_000_000,
            explicit_elements: 100_000,
            action_cells: 1_000_000,
            type_count: 200_000,
            subgroup_order: 24,
        }
    }
}

impl Budget {
    /// Default budgets, with the enumeration caps replaced by `OEC_BUDGET`
    /// when that variable is set to a positive integer.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Ok(raw) = std::env::var("OEC_BUDGET") {
            if let Ok(v) = raw.trim().parse::<u64>() {
                if v > 0 {
                    b.tuple_visits = v;
                    b.explicit_elements = v;
                    b.action_cells = v;
                    b.type_count = v;
                }
            }
        }
        b
    }
}
