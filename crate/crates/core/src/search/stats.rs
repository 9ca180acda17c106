use std::fmt;
use std::ops::AddAssign;

/// Counters kept by every search and census run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// `nodes_by_size[s]`: partial blocks of size `s` that passed every
    /// partial check. The initial block counts as the single node of its size.
    pub nodes_by_size: Vec<u64>,
    /// Candidates rejected by the cumulative row condition.
    pub pruned_row: u64,
    /// Candidates rejected because their column cannot take another point.
    pub pruned_column: u64,
    pub pruned_symmetry: u64,
    pub pruned_orbit: u64,
    /// Nodes whose remaining candidates were all cut off at once because the
    /// completed columns could no longer be matched to the column vector.
    pub column_cutoffs: u64,
    /// Full-size blocks that passed all partial checks but failed an exact one.
    pub leaves_rejected: u64,
    pub found: u64,
}

impl SearchStats {
    pub(crate) fn sized(k: usize) -> Self {
        SearchStats {
            nodes_by_size: vec![0; k + 1],
            ..Default::default()
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes_by_size.iter().sum()
    }

    pub fn nodes_at(&self, size: usize) -> u64 {
        self.nodes_by_size.get(size).copied().unwrap_or(0)
    }
}

impl AddAssign<&SearchStats> for SearchStats {
    fn add_assign(&mut self, rhs: &SearchStats) {
        if self.nodes_by_size.len() < rhs.nodes_by_size.len() {
            self.nodes_by_size.resize(rhs.nodes_by_size.len(), 0);
        }
        for (a, b) in self.nodes_by_size.iter_mut().zip(&rhs.nodes_by_size) {
            *a += b;
        }
        self.pruned_row += rhs.pruned_row;
        self.pruned_column += rhs.pruned_column;
        self.pruned_symmetry += rhs.pruned_symmetry;
        self.pruned_orbit += rhs.pruned_orbit;
        self.column_cutoffs += rhs.column_cutoffs;
        self.leaves_rejected += rhs.leaves_rejected;
        self.found += rhs.found;
    }
}

/// Stable `key: value` lines.
impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes: {}", self.nodes())?;
        for (size, n) in self.nodes_by_size.iter().enumerate() {
            if *n > 0 {
                writeln!(f, "nodes.size{size}: {n}")?;
            }
        }
        writeln!(f, "pruned.row: {}", self.pruned_row)?;
        writeln!(f, "pruned.column: {}", self.pruned_column)?;
        writeln!(f, "pruned.symmetry: {}", self.pruned_symmetry)?;
        writeln!(f, "pruned.orbit: {}", self.pruned_orbit)?;
        writeln!(f, "column_cutoffs: {}", self.column_cutoffs)?;
        writeln!(f, "leaves_rejected: {}", self.leaves_rejected)?;
        writeln!(f, "found: {}", self.found)
    }
}
