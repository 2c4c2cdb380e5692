//! Enumeration budgets. Exceeding a cap is an explicit error, never a silent
//! truncation.

#[derive(Clone, Debug)]
pub struct Budget {
    /// Cap on total dimension for submodule / indecomposable enumeration.
    pub max_total_dim: usize,
    /// Cap on the prime field size used in enumerations.
    pub max_prime: u64,
    /// Cap on exhaustive coefficient-combination searches.
    pub max_field_ops: u64,
    /// Cap on arrow-map tuples per dimension vector during enumeration.
    pub max_tuples: u64,
    /// Primes used when re-evaluating rational representations over F_p.
    pub profile_primes: Vec<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_total_dim: 6,
            max_prime: 5,
            max_field_ops: 1 << 16,
            max_tuples: 1 << 22,
            profile_primes: vec![2],
        }
    }
}
