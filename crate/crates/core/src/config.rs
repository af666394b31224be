use serde::{Deserialize, Serialize};

/// Search and memory limits shared by the whole pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Exhaustive permutation searches may visit at most `brute_degree!` elements.
    pub brute_degree: usize,
    /// Largest alphabet for the two-word reversor oracle.
    pub bry_degree: usize,
    /// Highest supertile level tried while the legal-block set stabilizes.
    pub kmax: usize,
    pub max_dimension: usize,
    /// Largest materialized supertile, in cells.
    pub supertile_cells: u128,
    /// Largest box side used by the patch oracle.
    pub patch_side: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            brute_degree: 10,
            bry_degree: 6,
            kmax: 12,
            max_dimension: 4,
            supertile_cells: 1 << 24,
            patch_side: 3,
        }
    }
}
