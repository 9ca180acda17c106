//! Delandtsheer–Doyen arithmetic for a design with an invariant partition of
//! `d` classes of size `c`: inner-pair counts, intercept vectors, and masks
//! combining the row and column partitions.

use std::fmt;

use crate::error::{Error, Result};

pub fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// One solution `(x, y)` of `c = (C(k,2) - x) / y`, `d = (C(k,2) - y) / x`.
/// `x` is the number of inner pairs per line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DdParams {
    pub k: u64,
    pub c: u64,
    pub d: u64,
    pub x: u64,
    pub y: u64,
}

impl DdParams {
    pub fn outer_pairs(&self) -> u64 {
        pairs(self.k) - self.x
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdAnalysis {
    pub solutions: Vec<DdParams>,
    pub v: u64,
    /// `(C(k,2) - 1)^2`
    pub bound: u64,
    pub bound_holds: bool,
}

/// All `(x, y)` with `1 <= x, y <= C(k,2)` satisfying both equations.
pub fn dd_solve(k: u64, c: u64, d: u64) -> Result<Vec<DdParams>> {
    if k < 2 || c < 2 || d < 2 {
        return Err(Error::InvalidArgument(format!(
            "need k, c, d >= 2 (got k={k}, c={c}, d={d})"
        )));
    }
    let total = pairs(k);
    let mut out = Vec::new();
    for x in 1..=total {
        for y in 1..=total {
            if total - x == c * y && total - y == d * x {
                out.push(DdParams { k, c, d, x, y });
            }
        }
    }
    Ok(out)
}

pub fn dd_analyze(k: u64, c: u64, d: u64) -> Result<DdAnalysis> {
    let solutions = dd_solve(k, c, d)?;
    let bound = (pairs(k) - 1).pow(2);
    let v = c * d;
    Ok(DdAnalysis {
        solutions,
        v,
        bound,
        bound_holds: v <= bound,
    })
}

/// `[d_0, .., d_k]`: `d_i` classes meet a line in exactly `i` points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InterceptVector {
    entries: Vec<u32>,
    class_size: u32,
}

impl InterceptVector {
    /// `entries[i] = d_i` for `i = 0..=k`. Occupancies above `class_size` must be zero.
    pub fn new(entries: Vec<u32>, class_size: u32) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidArgument("intercept vector needs k >= 1".into()));
        }
        if let Some(i) = (class_size as usize + 1..entries.len()).find(|&i| entries[i] != 0) {
            return Err(Error::InvalidArgument(format!(
                "occupancy {i} exceeds the class size {class_size}"
            )));
        }
        let v = InterceptVector { entries, class_size };
        if v.line_size() != v.entries.len() as u64 - 1 {
            return Err(Error::InvalidArgument(format!(
                "entries {:?} describe a line of {} points, not k = {}",
                v.entries,
                v.line_size(),
                v.entries.len() - 1
            )));
        }
        Ok(v)
    }

    /// The intercept vector of a line given how many of its points fall in each class.
    pub fn from_occupancies(occupancy: &[u32], k: usize, class_size: u32) -> Result<Self> {
        let mut entries = vec![0u32; k + 1];
        for &o in occupancy {
            *entries
                .get_mut(o as usize)
                .ok_or_else(|| Error::InvalidArgument(format!("occupancy {o} exceeds k = {k}")))? += 1;
        }
        Self::new(entries, class_size)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries.get(i).copied().unwrap_or(0)
    }

    pub fn k(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn class_size(&self) -> u32 {
        self.class_size
    }

    /// Number of classes, `sum d_i`.
    pub fn num_classes(&self) -> u64 {
        self.entries.iter().map(|&e| e as u64).sum()
    }

    /// `sum i d_i`
    pub fn line_size(&self) -> u64 {
        self.entries.iter().enumerate().map(|(i, &e)| i as u64 * e as u64).sum()
    }

    /// `sum C(i,2) d_i`
    pub fn inner_pairs(&self) -> u64 {
        self.entries.iter().enumerate().map(|(i, &e)| pairs(i as u64) * e as u64).sum()
    }

    /// `sum_{j >= i} d_j`, the most classes that may end with at least `i` points.
    pub fn at_least(&self, i: usize) -> u32 {
        self.entries.iter().skip(i).sum()
    }
}

/// Prints `[d_0,d_1,..]` without trailing zeros.
impl fmt::Display for InterceptVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.entries.iter().rposition(|&e| e != 0).unwrap_or(0);
        let body: Vec<String> = self.entries[..=last].iter().map(u32::to_string).collect();
        write!(f, "[{}]", body.join(","))
    }
}

impl fmt::Debug for InterceptVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InterceptVector{self}")
    }
}

/// Every intercept vector for lines of size `k` with `x` inner pairs on a
/// partition of `d` classes of size `c`, in lexicographic order.
pub fn intercept_vectors(k: u64, x: u64, d: u64, c: u64) -> Vec<InterceptVector> {
    let k = k as usize;
    let max_occ = k.min(c as usize);
    let mut out = Vec::new();
    let mut entries = vec![0u32; k + 1];
    fill(&mut entries, max_occ, k as u64, x, d, &mut out);
    let mut out: Vec<InterceptVector> = out
        .into_iter()
        .map(|e| InterceptVector::new(e, c as u32).expect("enumerated vectors are consistent"))
        .collect();
    out.sort();
    out
}

// Chooses d_i for i = occ, occ-1, .., 1 against the remaining point, pair
// and class budgets; d_0 takes whatever classes are left.
fn fill(entries: &mut Vec<u32>, occ: usize, points: u64, inner: u64, classes: u64, out: &mut Vec<Vec<u32>>) {
    if occ == 0 {
        if points == 0 && inner == 0 {
            entries[0] = classes as u32;
            out.push(entries.clone());
            entries[0] = 0;
        }
        return;
    }
    let per_class_pairs = pairs(occ as u64);
    let mut n = 0u64;
    loop {
        let used_points = n * occ as u64;
        let used_pairs = n * per_class_pairs;
        if used_points > points || used_pairs > inner || n > classes {
            break;
        }
        entries[occ] = n as u32;
        fill(entries, occ - 1, points - used_points, inner - used_pairs, classes - n, out);
        n += 1;
    }
    entries[occ] = 0;
}

/// A line pattern across both partitions when the rows have a unique 2-row:
/// the column occupancies `(m1 <= m2)` of the columns holding the 2-row's points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    pub row_vector: InterceptVector,
    pub column_vector: InterceptVector,
    pub anchors: (u32, u32),
}

/// One mask per feasible unordered pair of anchor column occupancies.
///
/// Only the unique-2-row shape is supported: the row vector must have
/// `d_2 = 1` and no occupancy above 2.
pub fn enumerate_masks(row_vector: &InterceptVector, column_vector: &InterceptVector) -> Result<Vec<Mask>> {
    let top = row_vector.entries().iter().rposition(|&e| e != 0).unwrap_or(0);
    if row_vector.get(2) != 1 || top > 2 {
        return Err(Error::UnsupportedShape(format!(
            "row vector {row_vector} does not have a unique 2-row"
        )));
    }
    let mut masks = Vec::new();
    for m1 in 1..=column_vector.k() {
        for m2 in m1..=column_vector.k() {
            let available = if m1 == m2 {
                column_vector.get(m1) >= 2
            } else {
                column_vector.get(m1) >= 1 && column_vector.get(m2) >= 1
            };
            if available {
                masks.push(Mask {
                    row_vector: row_vector.clone(),
                    column_vector: column_vector.clone(),
                    anchors: (m1 as u32, m2 as u32),
                });
            }
        }
    }
    Ok(masks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(entries: &[u32], c: u32) -> InterceptVector {
        InterceptVector::new(entries.to_vec(), c).unwrap()
    }

    fn padded(v: &[u32], k: usize) -> Vec<u32> {
        let mut e = v.to_vec();
        e.resize(k + 1, 0);
        e
    }

    #[test]
    fn solves_the_451_point_shape() {
        let s = dd_solve(10, 41, 11).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].x, s[0].y), (4, 1));
        let s = dd_solve(10, 11, 41).unwrap();
        assert_eq!((s[0].x, s[0].y), (1, 4));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn fifty_seven_points_need_lines_of_eight() {
        let s = dd_solve(8, 3, 19).unwrap();
        assert_eq!(s.iter().map(|p| (p.x, p.y)).collect::<Vec<_>>(), vec![(1, 9)]);
        assert!(dd_solve(7, 3, 19).unwrap().is_empty());
        assert!(dd_solve(7, 19, 3).unwrap().is_empty());
    }

    #[test]
    fn bound_check() {
        assert!(dd_analyze(10, 41, 11).unwrap().bound_holds);
        let a = dd_analyze(10, 40, 50).unwrap();
        assert_eq!(a.bound, 1936);
        assert!(!a.bound_holds);
    }

    #[test]
    fn bad_arguments() {
        assert!(dd_solve(1, 3, 3).is_err());
        assert!(dd_solve(4, 1, 3).is_err());
    }

    #[test]
    fn row_and_column_vectors() {
        let rows = intercept_vectors(10, 1, 41, 11);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].entries(), &padded(&[32, 8, 1], 10)[..]);
        assert_eq!(rows[0].to_string(), "[32,8,1]");
        let cols = intercept_vectors(10, 4, 11, 41);
        let got: Vec<_> = cols.iter().map(|v| v.entries().to_vec()).collect();
        assert_eq!(got, vec![padded(&[4, 5, 1, 1], 10), padded(&[5, 2, 4], 10)]);
    }

    #[test]
    fn no_inner_pairs_means_all_singletons() {
        let v = intercept_vectors(5, 0, 9, 4);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].entries(), &[4, 5, 0, 0, 0, 0]);
    }

    #[test]
    fn class_size_caps_occupancy() {
        // with c = 2 no class can hold 3 points
        let v = intercept_vectors(4, 3, 6, 2);
        assert!(v.is_empty());
        let v = intercept_vectors(4, 3, 6, 3);
        assert_eq!(v.iter().map(|v| v.entries().to_vec()).collect::<Vec<_>>(), vec![vec![4, 1, 0, 1, 0]]);
    }

    #[test]
    fn masks_for_both_column_vectors() {
        let rows = iv(&padded(&[32, 8, 1], 10), 11);
        let a = enumerate_masks(&rows, &iv(&padded(&[4, 5, 1, 1], 10), 41)).unwrap();
        let b = enumerate_masks(&rows, &iv(&padded(&[5, 2, 4], 10), 41)).unwrap();
        assert_eq!(a.iter().map(|m| m.anchors).collect::<Vec<_>>(), vec![(1, 1), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(b.iter().map(|m| m.anchors).collect::<Vec<_>>(), vec![(1, 1), (1, 2), (2, 2)]);
        assert_eq!(a.len() + b.len(), 7);
    }

    #[test]
    fn mask_needs_unique_two_row() {
        let cols = iv(&padded(&[4, 5, 1, 1], 10), 41);
        let bad_rows = iv(&padded(&[35, 4, 0, 2], 10), 11);
        assert!(matches!(enumerate_masks(&bad_rows, &cols), Err(Error::UnsupportedShape(_))));
    }

    #[test]
    fn invalid_vectors() {
        assert!(InterceptVector::new(vec![1, 2, 1], 5).is_err());
        assert!(InterceptVector::new(vec![0, 0, 0, 1], 2).is_err());
        assert_eq!(iv(&[1, 0, 1], 2).inner_pairs(), 1);
    }
}
