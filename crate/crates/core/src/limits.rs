/// Size caps for the exhaustive checks and enumerations in this crate.
///
/// Every cap has a default matching the documented behaviour; callers (the CLI
/// in particular) may override individual fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest sequence for which general position is checked over every
    /// (d+1)-subset. Larger sequences are checked lazily.
    pub gp_exhaustive_cap: usize,
    /// Maximum number of (d+1)-tuples a full signature may enumerate.
    pub signature_budget: u128,
    /// Largest input accepted by the brute-force homogeneous oracle.
    pub brute_force_cap: usize,
    /// Largest index set accepted by the facet-enumeration checks.
    pub hull_max_points: usize,
    /// Largest dimension accepted by the facet-enumeration checks.
    pub hull_max_dim: usize,
    /// Pivot count up to which the refinement output is re-verified exhaustively.
    pub pivot_check_cap: usize,
    /// Bit length above which threshold values are kept symbolic.
    pub bound_bit_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            gp_exhaustive_cap: 30,
            signature_budget: 10_000_000,
            brute_force_cap: 25,
            hull_max_points: 15,
            hull_max_dim: 5,
            pivot_check_cap: 30,
            bound_bit_cap: 1_000_000,
        }
    }
}
