//! Lexicographic backtracking for starter blocks.
//!
//! A block grows from a fixed initial block `I` by appending points in
//! ascending id order. Ids run down each column before moving right, so when
//! a point of column `c` is appended every column left of `c` is final. A
//! candidate is appended only if the row condition, the column condition, the
//! configured symmetry rules and the pair-orbit bound all still hold:
//!
//! * rows: for every `t >= 1`, at most `sum_{j>=t} d_j` rows hold `t` or more
//!   points (`d` the row intercept vector);
//! * columns: the final columns must take their exact counts from the column
//!   intercept vector, and the open columns must each be matchable to a
//!   remaining entry at least as large as their current count (a Hall check on
//!   a threshold graph).
//!
//! All four checks are monotone along ascending chains, so pruning never loses
//! a block. Full-size blocks must also match both vectors exactly, meet every
//! pair-orbit target, and have a stabilizer of the required order.

mod engine;
mod set1;
mod stats;

use std::fmt;

use crate::dd::InterceptVector;
use crate::error::{Error, Result};
use crate::group::{GridGeometry, PairOrbitTable, PermGroup, Point};
use crate::orbit_condition::{OrbitTargets, PairTally};

pub use engine::{census, census_count, search, search_par};
pub use set1::{search_set1, set1_candidate_count, SetOneOutcome};
pub use stats::SearchStats;

/// Normalizations that cut the search down to one representative per
/// equivalence class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymmetryRules {
    /// The initial block is a normalization, not a free choice. Recorded in
    /// the provenance; the engine always starts from the initial block.
    pub fixed_initial_block: bool,
    /// The smallest appended point lies in row 1.
    pub first_extension_in_row_1: bool,
    /// Once column 0 is final, column 1 never holds more points than it.
    pub col0_at_least_col1: bool,
}

impl SymmetryRules {
    pub const TAGS: [&'static str; 3] = ["fixed_initial_block", "first_extension_in_row_1", "col0_at_least_col1"];

    /// `fixed_initial_block` and `first_extension_in_row_1`.
    pub fn standard() -> Self {
        SymmetryRules {
            fixed_initial_block: true,
            first_extension_in_row_1: true,
            col0_at_least_col1: false,
        }
    }

    pub fn from_tags<S: AsRef<str>>(tags: &[S]) -> Result<Self> {
        let mut rules = SymmetryRules::default();
        for tag in tags {
            match tag.as_ref() {
                "fixed_initial_block" => rules.fixed_initial_block = true,
                "first_extension_in_row_1" => rules.first_extension_in_row_1 = true,
                "col0_at_least_col1" => rules.col0_at_least_col1 = true,
                "none" => {}
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown symmetry rule {other:?}; expected one of {}",
                        Self::TAGS.join(", ")
                    )))
                }
            }
        }
        Ok(rules)
    }

    pub fn tags(&self) -> Vec<&'static str> {
        let on = [self.fixed_initial_block, self.first_extension_in_row_1, self.col0_at_least_col1];
        Self::TAGS.iter().zip(on).filter(|(_, on)| *on).map(|(t, _)| *t).collect()
    }
}

impl fmt::Display for SymmetryRules {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tags = self.tags();
        if tags.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&tags.join("+"))
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig<'a> {
    /// Label carried into each result's provenance.
    pub name: String,
    pub geometry: GridGeometry,
    pub group: &'a PermGroup,
    pub table: &'a PairOrbitTable,
    pub targets: &'a OrbitTargets,
    /// Intercept vector on the rows (classes of `n_cols` points).
    pub row_vector: InterceptVector,
    /// Intercept vector on the columns (classes of `n_rows` points).
    pub col_vector: InterceptVector,
    pub initial_block: Vec<Point>,
    pub symmetry: SymmetryRules,
    /// Stop at partial blocks of this size and count them instead of searching.
    pub census_depth: Option<usize>,
    pub census_with_orbit_condition: bool,
}

impl SearchConfig<'_> {
    pub fn k(&self) -> usize {
        self.targets.k as usize
    }

    pub fn v(&self) -> usize {
        self.geometry.degree()
    }

    /// Depth at which a run stops: the census depth, or `k`.
    pub fn depth(&self) -> usize {
        self.census_depth.unwrap_or(self.k())
    }

    fn orbit_active(&self) -> bool {
        self.census_depth.is_none() || self.census_with_orbit_condition
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        let (v, k) = (self.v(), self.k());
        let geom = &self.geometry;
        if self.group.degree() != v || self.table.degree() != v || self.targets.v as usize != v {
            return bad(format!("group, orbit table and targets must all act on the {v} grid points"));
        }
        if self.targets.targets.len() != self.table.num_orbits() {
            return bad("targets do not belong to this orbit table".into());
        }
        if self.row_vector.k() != k || self.col_vector.k() != k {
            return bad(format!(
                "intercept vectors {} and {} are not for lines of size k = {k}",
                self.row_vector, self.col_vector
            ));
        }
        if self.row_vector.num_classes() != geom.n_rows as u64 || self.row_vector.class_size() as usize != geom.n_cols {
            return bad(format!("row vector {} does not fit {} rows of {}", self.row_vector, geom.n_rows, geom.n_cols));
        }
        if self.col_vector.num_classes() != geom.n_cols as u64 || self.col_vector.class_size() as usize != geom.n_rows {
            return bad(format!(
                "column vector {} does not fit {} columns of {}",
                self.col_vector, geom.n_cols, geom.n_rows
            ));
        }
        let mut init = self.initial_block.clone();
        init.sort_unstable();
        init.dedup();
        if init.len() != self.initial_block.len() || init.last().is_some_and(|&p| p as usize >= v) {
            return bad("initial block must hold distinct grid points".into());
        }
        if init.len() > k {
            return bad(format!("initial block has {} points, more than k = {k}", init.len()));
        }
        if let Some(q) = self.census_depth {
            if q < init.len() || q > k {
                return bad(format!("census depth {q} outside {}..={k}", init.len()));
            }
        }
        let checker = Checker::new(self);
        if let Some(reason) = checker.initial_rejection() {
            return bad(format!("initial block fails the {reason} condition"));
        }
        Ok(())
    }
}

/// Which partial check rejected a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reject {
    Row,
    Column,
    Symmetry,
    Orbit,
}

impl fmt::Display for Reject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reject::Row => "row",
            Reject::Column => "column",
            Reject::Symmetry => "symmetry",
            Reject::Orbit => "orbit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarterBlock {
    /// Ascending point ids.
    pub points: Vec<Point>,
    /// Config name and symmetry normalization.
    pub provenance: String,
}

/// Outcome of a full search or a census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Starter blocks in lexicographic order (census: partial blocks, if collected).
    pub blocks: Vec<StarterBlock>,
    pub stats: SearchStats,
}

/// The partial checks evaluated from scratch on a whole block. The engine
/// keeps the same conditions incrementally; this version exists for the
/// validator, the tests, and anyone wanting to audit a single block.
pub struct Checker<'c, 'a> {
    cfg: &'c SearchConfig<'a>,
}

impl<'c, 'a> Checker<'c, 'a> {
    pub fn new(cfg: &'c SearchConfig<'a>) -> Self {
        Checker { cfg }
    }

    /// First failing check for `I` plus `added` (ascending, disjoint from `I`),
    /// with the last element of `added` as the newest point.
    pub fn reject(&self, added: &[Point]) -> Option<Reject> {
        let cfg = self.cfg;
        let geom = &cfg.geometry;
        let mut block = cfg.initial_block.clone();
        block.extend_from_slice(added);
        let newest_col = added.last().map(|&a| geom.col(a));

        let mut row_count = vec![0u32; geom.n_rows];
        let mut col_count = vec![0u32; geom.n_cols];
        for &p in &block {
            row_count[geom.row(p)] += 1;
            col_count[geom.col(p)] += 1;
        }
        if !cumulative_ok(&row_count, &cfg.row_vector) {
            return Some(Reject::Row);
        }
        if !columns_feasible(&col_count, newest_col.unwrap_or(0), &cfg.col_vector) {
            return Some(Reject::Column);
        }
        if let Some(&first) = added.first() {
            if cfg.symmetry.first_extension_in_row_1 && geom.row(first) != 1 {
                return Some(Reject::Symmetry);
            }
        }
        if cfg.symmetry.col0_at_least_col1 && newest_col.is_some_and(|c| c >= 1) && col_count[1] > col_count[0] {
            return Some(Reject::Symmetry);
        }
        if cfg.orbit_active() && !PairTally::from_block(&block, cfg.table).within(cfg.targets) {
            return Some(Reject::Orbit);
        }
        None
    }

    fn initial_rejection(&self) -> Option<Reject> {
        self.reject(&[])
    }

    /// Whether a full-size block passes the exact checks a leaf must meet.
    pub fn is_starter_block(&self, block: &[Point]) -> bool {
        let cfg = self.cfg;
        let geom = &cfg.geometry;
        if block.len() != cfg.k() {
            return false;
        }
        let mut row_count = vec![0u32; geom.n_rows];
        let mut col_count = vec![0u32; geom.n_cols];
        for &p in block {
            row_count[geom.row(p)] += 1;
            col_count[geom.col(p)] += 1;
        }
        let k = cfg.k();
        InterceptVector::from_occupancies(&row_count, k, geom.n_cols as u32).is_ok_and(|r| r == cfg.row_vector)
            && InterceptVector::from_occupancies(&col_count, k, geom.n_rows as u32).is_ok_and(|c| c == cfg.col_vector)
            && crate::orbit_condition::full_orbit_condition(block, cfg.table, cfg.targets, cfg.group)
    }
}

/// `|{classes with >= t points}| <= sum_{j>=t} d_j` for every `t >= 1`.
pub(crate) fn cumulative_ok(counts: &[u32], target: &InterceptVector) -> bool {
    let k = target.k();
    let mut hist = vec![0u32; k + 2];
    for &c in counts {
        if c as usize > k {
            return false;
        }
        hist[c as usize] += 1;
    }
    let mut at_least = 0;
    for t in (1..=k).rev() {
        at_least += hist[t];
        if at_least > target.at_least(t) {
            return false;
        }
    }
    true
}

/// Columns `< first_open` are final and need an entry of `target` equal to
/// their count; the rest need distinct entries at least their count.
pub(crate) fn columns_feasible(counts: &[u32], first_open: usize, target: &InterceptVector) -> bool {
    let k = target.k();
    let mut residual: Vec<i64> = target.entries().iter().map(|&d| d as i64).collect();
    for &c in &counts[..first_open] {
        match residual.get_mut(c as usize) {
            Some(r) if *r > 0 => *r -= 1,
            _ => return false,
        }
    }
    let mut open_hist = vec![0i64; k + 2];
    for &c in &counts[first_open..] {
        if c as usize > k {
            return false;
        }
        open_hist[c as usize] += 1;
    }
    let (mut open_at_least, mut slots_at_least) = (0, 0);
    for t in (1..=k).rev() {
        open_at_least += open_hist[t];
        slots_at_least += residual[t];
        if open_at_least > slots_at_least {
            return false;
        }
    }
    true
}
