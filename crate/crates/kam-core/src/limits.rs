/// Size guards for operations that materialize or enumerate structures.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Largest carrier accepted for any algebra or module, including lazy ones.
    pub max_carrier: usize,
    /// Largest carrier for which full operation tables are materialized.
    pub max_table_carrier: usize,
    /// Largest number of candidate maps visited when enumerating hom sets.
    pub hom_bound: u64,
    /// Largest label set (|M| * |N|) accepted by the element-pair tensor path.
    pub max_tensor_labels: usize,
    /// Largest number of (a, b, x) triples visited by the star induction check.
    pub max_induction_triples: u64,
    /// Node budget for isomorphism backtracking.
    pub iso_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: 65_536,
            max_table_carrier: 4_096,
            hom_bound: 1 << 20,
            max_tensor_labels: 4_096,
            max_induction_triples: 1 << 28,
            iso_budget: 1 << 24,
        }
    }
}

impl Limits {
    pub fn with_max_carrier(mut self, bound: usize) -> Self {
        self.max_carrier = bound;
        self.max_table_carrier = self.max_table_carrier.min(bound);
        self
    }

    pub fn with_hom_bound(mut self, bound: u64) -> Self {
        self.hom_bound = bound;
        self
    }
}
