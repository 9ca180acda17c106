//! Direct enumeration for the dihedral parameter set, where `e -> -e` lets
//! every candidate line be normalized to a fixed shape: the points `(0,0)` and
//! `(0,1)`, plus two points `{e, -e}` in each of `(k-2)/2` further columns.
//! The lowest of those columns carries rows `{1, -1}`; the others take
//! distinct row pairs from the remaining `(rows-1)/2 - 1`.

use rayon::prelude::*;

use super::{SearchConfig, StarterBlock};
use crate::error::{Error, Result};
use crate::group::Point;
use crate::orbit_condition::full_orbit_condition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetOneOutcome {
    pub candidates: u64,
    pub blocks: Vec<StarterBlock>,
}

fn shape(cfg: &SearchConfig) -> Result<(usize, usize, usize)> {
    let (rows, cols) = (cfg.geometry.n_rows, cfg.geometry.n_cols);
    let k = cfg.k();
    if rows % 2 == 0 || k < 4 || k % 2 != 0 || cols < 2 + (k - 2) / 2 {
        return Err(Error::UnsupportedShape(format!(
            "normalized enumeration needs odd rows, even k >= 4 and enough columns (grid {rows}x{cols}, k = {k})"
        )));
    }
    Ok((rows, cols, (k - 2) / 2))
}

fn combinations(n: usize, m: usize, from: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(from, n, m, &mut Vec::new(), &mut out);
    out
}

/// Ordered choices of `m` distinct values from `values`.
fn arrangements(values: &[usize], m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in values.iter().enumerate() {
        let rest: Vec<usize> = values.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &y)| y).collect();
        for mut tail in arrangements(&rest, m - 1) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// `C(cols-2, m) * (h-1)(h-2)..(h-m+1)` with `h = (rows-1)/2`.
pub fn set1_candidate_count(cfg: &SearchConfig) -> Result<u64> {
    let (rows, cols, m) = shape(cfg)?;
    let h = (rows - 1) / 2;
    let choose = combinations(cols, m, 2).len() as u64;
    let arrange: u64 = (0..m as u64 - 1).map(|i| (h as u64 - 1).saturating_sub(i)).product();
    Ok(choose * arrange)
}

/// Checks every normalized candidate against the full orbit condition.
pub fn search_set1(cfg: &SearchConfig) -> Result<SetOneOutcome> {
    let (rows, cols, m) = shape(cfg)?;
    let geom = cfg.geometry;
    let h = (rows - 1) / 2;
    let column_sets = combinations(cols, m, 2);
    let row_choices = arrangements(&(2..=h).collect::<Vec<_>>(), m - 1);
    let provenance = format!("{}; normalized set-1 enumeration", cfg.name);

    let per_set: Vec<(u64, Vec<Vec<Point>>)> = column_sets
        .par_iter()
        .map(|columns| {
            let mut found = Vec::new();
            let mut n = 0u64;
            let mut block: Vec<Point> = Vec::with_capacity(cfg.k());
            for choice in &row_choices {
                block.clear();
                block.push(geom.point(0, 0));
                block.push(geom.point(0, 1));
                let pairs = std::iter::once(1).chain(choice.iter().copied());
                for (&col, e) in columns.iter().zip(pairs) {
                    block.push(geom.point(e, col));
                    block.push(geom.point(rows - e, col));
                }
                n += 1;
                if full_orbit_condition(&block, cfg.table, cfg.targets, cfg.group) {
                    let mut b = block.clone();
                    b.sort_unstable();
                    found.push(b);
                }
            }
            (n, found)
        })
        .collect();

    let mut candidates = 0;
    let mut blocks = Vec::new();
    for (n, found) in per_set {
        candidates += n;
        blocks.extend(found.into_iter().map(|points| StarterBlock {
            points,
            provenance: provenance.clone(),
        }));
    }
    blocks.sort();
    Ok(SetOneOutcome { candidates, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_combinatorics() {
        assert_eq!(combinations(11, 4, 2).len(), 126);
        assert_eq!(combinations(4, 2, 0), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(arrangements(&[1, 2, 3], 2).len(), 6);
        assert_eq!(arrangements(&(2..=20).collect::<Vec<_>>(), 3).len(), 19 * 18 * 17);
    }
}
