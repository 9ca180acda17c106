use rayon::prelude::*;

use super::{columns_feasible, Reject, SearchConfig, SearchOutcome, SearchStats, StarterBlock};
use crate::error::Result;
use crate::group::Point;

enum Gate {
    Open,
    /// No candidate in this column can be appended.
    Closed(Reject),
    /// Neither this column nor any later one can take a point.
    Dead,
}

/// Everything derived once from a config and shared read-only by all branches.
struct Engine<'c, 'a> {
    cfg: &'c SearchConfig<'a>,
    v: usize,
    k: usize,
    depth: usize,
    n_rows: usize,
    n_cols: usize,
    /// `orbit[a * v + b]`
    orbit: Vec<u32>,
    targets: &'c [u32],
    orbit_active: bool,
    census: bool,
    in_initial: Vec<bool>,
    row_at_least_cap: Vec<u32>,
    provenance: String,
}

/// Mutable per-branch state; every change is undone on the way back up.
#[derive(Clone)]
struct State {
    block: Vec<Point>,
    added: usize,
    tally: Vec<u32>,
    row_count: Vec<u32>,
    rows_at_least: Vec<u32>,
    col_count: Vec<u32>,
}

impl<'c, 'a> Engine<'c, 'a> {
    fn new(cfg: &'c SearchConfig<'a>) -> Result<Self> {
        cfg.validate()?;
        let v = cfg.v();
        let k = cfg.k();
        let mut in_initial = vec![false; v];
        for &p in &cfg.initial_block {
            in_initial[p as usize] = true;
        }
        Ok(Engine {
            cfg,
            v,
            k,
            depth: cfg.depth(),
            n_rows: cfg.geometry.n_rows,
            n_cols: cfg.geometry.n_cols,
            orbit: cfg.table.dense(),
            targets: &cfg.targets.targets,
            orbit_active: cfg.orbit_active(),
            census: cfg.census_depth.is_some(),
            in_initial,
            row_at_least_cap: (0..=k + 1).map(|t| cfg.row_vector.at_least(t)).collect(),
            provenance: format!("{}; symmetry={}", cfg.name, cfg.symmetry),
        })
    }

    fn root(&self) -> State {
        let mut s = State {
            block: Vec::with_capacity(self.k),
            added: 0,
            tally: vec![0; self.targets.len()],
            row_count: vec![0; self.n_rows],
            rows_at_least: vec![0; self.k + 2],
            col_count: vec![0; self.n_cols],
        };
        for &p in &self.cfg.initial_block {
            self.push(&mut s, p);
        }
        s.added = 0;
        s
    }

    #[inline]
    fn push(&self, s: &mut State, a: Point) {
        let r = a as usize % self.n_rows;
        s.row_count[r] += 1;
        s.rows_at_least[s.row_count[r] as usize] += 1;
        s.col_count[a as usize / self.n_rows] += 1;
        if self.orbit_active {
            let base = a as usize * self.v;
            for &p in &s.block {
                s.tally[self.orbit[base + p as usize] as usize] += 1;
            }
        }
        s.block.push(a);
        s.added += 1;
    }

    #[inline]
    fn pop(&self, s: &mut State) {
        let a = s.block.pop().expect("non-empty block");
        s.added -= 1;
        let r = a as usize % self.n_rows;
        s.rows_at_least[s.row_count[r] as usize] -= 1;
        s.row_count[r] -= 1;
        s.col_count[a as usize / self.n_rows] -= 1;
        if self.orbit_active {
            let base = a as usize * self.v;
            for &p in &s.block {
                s.tally[self.orbit[base + p as usize] as usize] -= 1;
            }
        }
    }

    /// Adds the pairs through `a` to the tally unless some orbit overflows.
    #[inline]
    fn orbit_fits(&self, s: &mut State, a: Point) -> bool {
        let base = a as usize * self.v;
        for (i, &p) in s.block.iter().enumerate() {
            let o = self.orbit[base + p as usize] as usize;
            s.tally[o] += 1;
            if s.tally[o] > self.targets[o] {
                for &q in &s.block[..=i] {
                    s.tally[self.orbit[base + q as usize] as usize] -= 1;
                }
                return false;
            }
        }
        true
    }

    /// Column-level checks shared by every candidate in column `c`.
    fn column_gate(&self, s: &mut State, c: usize) -> Gate {
        let vector = &self.cfg.col_vector;
        if !columns_feasible(&s.col_count, c, vector) {
            return Gate::Dead;
        }
        s.col_count[c] += 1;
        let fits = columns_feasible(&s.col_count, c, vector);
        let symmetric = !(self.cfg.symmetry.col0_at_least_col1 && c >= 1 && s.col_count[1] > s.col_count[0]);
        s.col_count[c] -= 1;
        if !fits {
            Gate::Closed(Reject::Column)
        } else if !symmetric {
            Gate::Closed(Reject::Symmetry)
        } else {
            Gate::Open
        }
    }

    /// Accepted children of the current node, in ascending order. Each child
    /// is left applied to `s` while `visit` runs, then undone.
    fn expand(&self, s: &mut State, start: usize, stats: &mut SearchStats, visit: &mut dyn FnMut(&Self, &mut State, Point, &mut SearchStats)) {
        let mut a = start;
        let mut current_col = usize::MAX;
        while a < self.v {
            let c = a / self.n_rows;
            if c != current_col {
                current_col = c;
                match self.column_gate(s, c) {
                    Gate::Open => {}
                    Gate::Dead => {
                        // completing more columns only makes matching harder
                        stats.column_cutoffs += 1;
                        break;
                    }
                    Gate::Closed(reason) => {
                        let end = (c + 1) * self.n_rows;
                        let skipped = (a..end).filter(|&p| !self.in_initial[p]).count() as u64;
                        if reason == Reject::Symmetry {
                            stats.pruned_symmetry += skipped;
                        } else {
                            stats.pruned_column += skipped;
                        }
                        a = end;
                        continue;
                    }
                }
            }
            if self.in_initial[a] {
                a += 1;
                continue;
            }
            let p = a as Point;
            let r = a % self.n_rows;
            let next = s.row_count[r] as usize + 1;
            if next > self.k || s.rows_at_least[next] + 1 > self.row_at_least_cap[next] {
                stats.pruned_row += 1;
            } else if s.added == 0 && self.cfg.symmetry.first_extension_in_row_1 && r != 1 {
                stats.pruned_symmetry += 1;
            } else if self.orbit_active && !self.orbit_fits(s, p) {
                stats.pruned_orbit += 1;
            } else {
                if self.orbit_active {
                    // `orbit_fits` already counted the new pairs
                    self.push_counted(s, p);
                } else {
                    self.push(s, p);
                }
                stats.nodes_by_size[s.block.len()] += 1;
                visit(self, s, p, stats);
                self.pop(s);
            }
            a += 1;
        }
    }

    /// `push` for a point whose pairs are already in the tally.
    #[inline]
    fn push_counted(&self, s: &mut State, a: Point) {
        let r = a as usize % self.n_rows;
        s.row_count[r] += 1;
        s.rows_at_least[s.row_count[r] as usize] += 1;
        s.col_count[a as usize / self.n_rows] += 1;
        s.block.push(a);
        s.added += 1;
    }

    /// Called with a freshly accepted node applied to `s`.
    fn descend(&self, s: &mut State, last: Point, stats: &mut SearchStats, sink: &mut dyn FnMut(&[Point])) {
        if s.block.len() == self.depth {
            if self.census {
                sink(&sorted(&s.block));
            } else if self.leaf_ok(s) {
                stats.found += 1;
                sink(&sorted(&s.block));
            } else {
                stats.leaves_rejected += 1;
            }
            return;
        }
        self.expand(s, last as usize + 1, stats, &mut |eng, st, p, stats| eng.descend(st, p, stats, sink));
    }

    fn leaf_ok(&self, s: &State) -> bool {
        let rows = &self.cfg.row_vector;
        for i in 0..=self.k {
            let at_least = |t: usize| if t == 0 { self.n_rows as u32 } else { s.rows_at_least[t] };
            if at_least(i) - at_least(i + 1) != rows.get(i) {
                return false;
            }
        }
        let mut col_hist = vec![0u32; self.k + 1];
        for &c in &s.col_count {
            col_hist[c as usize] += 1;
        }
        if col_hist != self.cfg.col_vector.entries() {
            return false;
        }
        if s.tally != self.targets {
            return false;
        }
        self.cfg.group.setwise_stabilizer_order(&s.block) as u64 == self.cfg.targets.required_stabilizer_order
    }

    /// Handles `depth == |I|`, where the root itself is the only candidate.
    fn root_is_result(&self, s: &State, stats: &mut SearchStats) -> Option<Vec<Point>> {
        if self.census {
            return Some(sorted(&s.block));
        }
        if self.leaf_ok(s) {
            stats.found += 1;
            Some(sorted(&s.block))
        } else {
            stats.leaves_rejected += 1;
            None
        }
    }

    fn stats(&self) -> SearchStats {
        let mut stats = SearchStats::sized(self.k);
        stats.nodes_by_size[self.cfg.initial_block.len()] = 1;
        stats
    }

    fn wrap(&self, blocks: Vec<Vec<Point>>) -> Vec<StarterBlock> {
        let mut blocks: Vec<StarterBlock> = blocks
            .into_iter()
            .map(|points| StarterBlock {
                points,
                provenance: self.provenance.clone(),
            })
            .collect();
        blocks.sort();
        blocks
    }

    fn run_sequential(&self, sink: &mut dyn FnMut(&[Point])) -> SearchStats {
        let mut stats = self.stats();
        let mut s = self.root();
        if s.block.len() == self.depth {
            if let Some(b) = self.root_is_result(&s, &mut stats) {
                sink(&b);
            }
            return stats;
        }
        self.expand(&mut s, 0, &mut stats, &mut |eng, st, p, stats| eng.descend(st, p, stats, sink));
        stats
    }

    /// Splits on the first appended point; each branch runs on its own copy
    /// of the state and the results are merged in branch order.
    fn run_parallel(&self, collect: bool) -> (Vec<Vec<Point>>, SearchStats) {
        let mut stats = self.stats();
        let mut s = self.root();
        if s.block.len() == self.depth {
            let found = self.root_is_result(&s, &mut stats).into_iter().collect();
            return (found, stats);
        }
        let mut children = Vec::new();
        self.expand(&mut s, 0, &mut stats, &mut |_, _, p, _| children.push(p));
        // `expand` counted each child node; the branches recount them
        stats.nodes_by_size[s.block.len() + 1] -= children.len() as u64;
        let branches: Vec<(Vec<Vec<Point>>, SearchStats)> = children
            .par_iter()
            .map(|&p| {
                let mut st = s.clone();
                let mut branch_stats = SearchStats::sized(self.k);
                let fits = !self.orbit_active || self.orbit_fits(&mut st, p);
                debug_assert!(fits);
                if self.orbit_active {
                    self.push_counted(&mut st, p);
                } else {
                    self.push(&mut st, p);
                }
                branch_stats.nodes_by_size[st.block.len()] += 1;
                let mut found = Vec::new();
                self.descend(&mut st, p, &mut branch_stats, &mut |b: &[Point]| {
                    if collect {
                        found.push(b.to_vec());
                    }
                });
                (found, branch_stats)
            })
            .collect();
        let mut all = Vec::new();
        for (found, branch_stats) in branches {
            all.extend(found);
            stats += &branch_stats;
        }
        (all, stats)
    }
}

fn sorted(block: &[Point]) -> Vec<Point> {
    let mut b = block.to_vec();
    b.sort_unstable();
    b
}

/// Every starter block reachable from the configuration, single-threaded.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let engine = Engine::new(cfg)?;
    let mut found = Vec::new();
    let stats = engine.run_sequential(&mut |b: &[Point]| found.push(b.to_vec()));
    Ok(SearchOutcome {
        blocks: engine.wrap(found),
        stats,
    })
}

/// Same result as [`search`], with the first-level branches run on the
/// current rayon pool.
pub fn search_par(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let engine = Engine::new(cfg)?;
    let (found, stats) = engine.run_parallel(true);
    Ok(SearchOutcome {
        blocks: engine.wrap(found),
        stats,
    })
}

/// Streams every partial block of size `census_depth` to `sink` in search
/// order (ascending ids within each block), single-threaded.
pub fn census(cfg: &SearchConfig, sink: &mut dyn FnMut(&[Point])) -> Result<SearchStats> {
    if cfg.census_depth.is_none() {
        return Err(crate::Error::InvalidArgument("census needs a census depth".into()));
    }
    let engine = Engine::new(cfg)?;
    Ok(engine.run_sequential(sink))
}

/// Census statistics only, computed in parallel. The count is
/// `stats.nodes_at(depth)`.
pub fn census_count(cfg: &SearchConfig) -> Result<SearchStats> {
    if cfg.census_depth.is_none() {
        return Err(crate::Error::InvalidArgument("census needs a census depth".into()));
    }
    let engine = Engine::new(cfg)?;
    Ok(engine.run_parallel(false).1)
}
