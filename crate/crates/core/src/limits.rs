/// Resource caps shared by the enumerating procedures.
///
/// A run that hits a cap fails with [`crate::Error::CapExceeded`]; nothing is
/// truncated silently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Members per arity in a generated fragment.
    pub members: usize,
    /// Candidate tables or subsets visited by a brute-force enumeration.
    pub enumeration: u64,
    /// Set partitions visited by the exhaustive cover search.
    pub partitions: u64,
    /// Entries `m^(n*lambda)` above which equalizer sets stay lazy.
    pub equalizer_entries: usize,
    /// Vectors enumerated when checking that subspaces cover a space.
    pub vectors: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            members: 1 << 16,
            enumeration: 1 << 22,
            partitions: 1 << 20,
            equalizer_entries: 4096,
            vectors: 4096,
        }
    }
}
