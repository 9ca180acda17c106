//! Developing a starter block into its line orbit and checking the result.
//!
//! Everything here counts pairs directly from the blocks and never consults
//! pair-orbit tables, so it can catch mistakes in the search.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};

use crate::dd::pairs;
use crate::error::{Error, Result};
use crate::group::{class_index, PermGroup, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    pub v: usize,
    pub k: usize,
    /// Distinct blocks, each ascending, in lexicographic order.
    pub blocks: Vec<Vec<Point>>,
}

impl Design {
    pub fn new(v: usize, blocks: Vec<Vec<Point>>) -> Result<Self> {
        let k = blocks.first().map(Vec::len).unwrap_or(0);
        let mut set = BTreeSet::new();
        for mut b in blocks {
            b.sort_unstable();
            if b.len() != k {
                return Err(Error::InvalidArgument(format!(
                    "block sizes differ ({} vs {k})",
                    b.len()
                )));
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument("block repeats a point".into()));
            }
            if b.last().is_some_and(|&p| p as usize >= v) {
                return Err(Error::InvalidArgument(format!("block point outside 1..={v}")));
            }
            if !set.insert(b) {
                return Err(Error::InvalidArgument("repeated block".into()));
            }
        }
        Ok(Design {
            v,
            k,
            blocks: set.into_iter().collect(),
        })
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }
}

/// The distinct images of `block` under every element of `group`.
pub fn develop(group: &PermGroup, block: &[Point]) -> Design {
    let images: BTreeSet<Vec<Point>> = group.elements().map(|g| g.image_of_set(block)).collect();
    Design {
        v: group.degree(),
        k: block.len(),
        blocks: images.into_iter().collect(),
    }
}

/// A count that should be the same everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Uniform {
    Constant(u64),
    Varies { min: u64, max: u64 },
}

impl Uniform {
    fn of(values: impl IntoIterator<Item = u64>) -> Uniform {
        let mut it = values.into_iter();
        let Some(first) = it.next() else {
            return Uniform::Constant(0);
        };
        let (min, max) = it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)));
        if min == max {
            Uniform::Constant(min)
        } else {
            Uniform::Varies { min, max }
        }
    }

    pub fn constant(self) -> Option<u64> {
        match self {
            Uniform::Constant(c) => Some(c),
            Uniform::Varies { .. } => None,
        }
    }
}

impl fmt::Display for Uniform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Uniform::Constant(c) => write!(f, "{c}"),
            Uniform::Varies { min, max } => write!(f, "non-constant({min}..{max})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCheck {
    pub classes: usize,
    pub class_size: Uniform,
    /// `None` when no group was supplied.
    pub invariant: Option<bool>,
    pub inner_pairs_per_line: Uniform,
    pub outer_pairs_per_line: Uniform,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub v: usize,
    pub k: usize,
    pub b: usize,
    pub lambda: Uniform,
    pub r: Uniform,
    pub is_design: bool,
    pub identities_hold: bool,
    pub is_projective_plane: bool,
    pub line_transitive: Option<bool>,
    pub partitions: Vec<PartitionCheck>,
}

impl VerificationReport {
    /// 2-(v,k,1) design, line-transitive under the supplied group, and every
    /// supplied partition invariant with a constant inner-pair count.
    pub fn all_ok(&self) -> bool {
        self.is_design
            && self.identities_hold
            && self.line_transitive != Some(false)
            && self
                .partitions
                .iter()
                .all(|p| p.invariant != Some(false) && p.inner_pairs_per_line.constant().is_some())
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "v: {}", self.v)?;
        writeln!(f, "k: {}", self.k)?;
        writeln!(f, "b: {}", self.b)?;
        writeln!(f, "r: {}", self.r)?;
        writeln!(f, "lambda: {}", self.lambda)?;
        writeln!(f, "is_design: {}", self.is_design)?;
        writeln!(f, "identities_hold: {}", self.identities_hold)?;
        writeln!(f, "is_projective_plane: {}", self.is_projective_plane)?;
        match self.line_transitive {
            Some(t) => writeln!(f, "line_transitive: {t}")?,
            None => writeln!(f, "line_transitive: unchecked")?,
        }
        for (i, p) in self.partitions.iter().enumerate() {
            let inv = match p.invariant {
                Some(t) => t.to_string(),
                None => "unchecked".into(),
            };
            writeln!(
                f,
                "partition.{}: classes={} class_size={} invariant={} inner_pairs={} outer_pairs={}",
                i + 1,
                p.classes,
                p.class_size,
                inv,
                p.inner_pairs_per_line,
                p.outer_pairs_per_line
            )?;
        }
        Ok(())
    }
}

/// Exhaustive checks on `design`: pair coverage, the counting identities,
/// the plane criterion `b = v`, and optionally line-transitivity under `group`
/// and invariance plus inner-pair counts for each partition.
pub fn verify(design: &Design, group: Option<&PermGroup>, partitions: &[Vec<Vec<Point>>]) -> Result<VerificationReport> {
    let (v, k, b) = (design.v, design.k, design.b());
    if let Some(g) = group {
        if g.degree() != v {
            return Err(Error::DegreeMismatch {
                left: v,
                right: g.degree(),
            });
        }
    }

    // pair coverage on a full v x v triangle
    let mut cover = vec![0u32; v * v];
    let mut replication = vec![0u64; v];
    for block in &design.blocks {
        for (i, &a) in block.iter().enumerate() {
            replication[a as usize] += 1;
            for &c in &block[i + 1..] {
                cover[a as usize * v + c as usize] += 1;
            }
        }
    }
    let lambda = Uniform::of((0..v).flat_map(|a| (a + 1..v).map(move |c| (a, c))).map(|(a, c)| cover[a * v + c] as u64));
    let r = Uniform::of(replication.iter().copied());
    let is_design = v >= 2 && k >= 2 && lambda == Uniform::Constant(1);

    let (v64, k64, b64) = (v as u64, k as u64, b as u64);
    let identities_hold = match r.constant() {
        Some(r) => {
            k >= 2 && b64 * k64 * (k64 - 1) == v64 * (v64 - 1) && b64 * k64 == v64 * r && v64 - 1 == r * (k64 - 1)
        }
        None => false,
    };
    let is_projective_plane = is_design && b == v;

    let line_transitive = group.map(|g| blocks_form_one_orbit(design, g));

    let mut checks = Vec::with_capacity(partitions.len());
    for partition in partitions {
        let class_of = class_index(v, partition)?;
        let invariant = group.map(|g| g.partition_is_invariant(partition)).transpose()?;
        let inner = Uniform::of(design.blocks.iter().map(|block| {
            let mut per_class: HashMap<usize, u64> = HashMap::new();
            for &p in block {
                *per_class.entry(class_of[p as usize]).or_default() += 1;
            }
            per_class.values().map(|&n| pairs(n)).sum()
        }));
        let outer = match inner {
            Uniform::Constant(x) => Uniform::Constant(pairs(k64) - x),
            Uniform::Varies { min, max } => Uniform::Varies {
                min: pairs(k64) - max,
                max: pairs(k64) - min,
            },
        };
        checks.push(PartitionCheck {
            classes: partition.len(),
            class_size: Uniform::of(partition.iter().map(|c| c.len() as u64)),
            invariant,
            inner_pairs_per_line: inner,
            outer_pairs_per_line: outer,
        });
    }

    Ok(VerificationReport {
        v,
        k,
        b,
        lambda,
        r,
        is_design,
        identities_hold,
        is_projective_plane,
        line_transitive,
        partitions: checks,
    })
}

// Closed under the generators and reachable from the first block.
fn blocks_form_one_orbit(design: &Design, group: &PermGroup) -> bool {
    let all: BTreeSet<&[Point]> = design.blocks.iter().map(Vec::as_slice).collect();
    let Some(first) = design.blocks.first() else {
        return false;
    };
    let mut seen: BTreeSet<Vec<Point>> = BTreeSet::new();
    seen.insert(first.clone());
    let mut queue = vec![first.clone()];
    while let Some(block) = queue.pop() {
        for g in group.generators() {
            let image = g.image_of_set(&block);
            if !all.contains(image.as_slice()) {
                return false;
            }
            if seen.insert(image.clone()) {
                queue.push(image);
            }
        }
    }
    seen.len() == design.blocks.len()
}

/// Pair-orbit bookkeeping by brute force over group elements, independent of
/// any precomputed orbit table. A pair's orbit is named by its smallest image.
pub struct PairOrbitOracle<'g> {
    group: &'g PermGroup,
    b_hat_num: u64,
    b_hat_den: u64,
    cache: HashMap<(Point, Point), (Point, Point)>,
}

impl<'g> PairOrbitOracle<'g> {
    pub fn new(group: &'g PermGroup, k: usize) -> Self {
        let v = group.degree() as u64;
        PairOrbitOracle {
            group,
            b_hat_num: v * (v - 1),
            b_hat_den: (k * (k - 1)) as u64,
            cache: HashMap::new(),
        }
    }

    pub fn representative(&mut self, a: Point, b: Point) -> (Point, Point) {
        let key = (a.min(b), a.max(b));
        if let Some(&rep) = self.cache.get(&key) {
            return rep;
        }
        let rep = self
            .group
            .elements()
            .map(|g| {
                let (x, y) = (g.apply(a), g.apply(b));
                (x.min(y), x.max(y))
            })
            .min()
            .expect("group is non-empty");
        self.cache.insert(key, rep);
        rep
    }

    /// `|orbit| / b̂`, with the orbit size taken as `|G| / |G_{a,b}|`.
    pub fn target(&self, a: Point, b: Point) -> Option<u64> {
        let stab = self.group.setwise_stabilizer_order(&[a, b]) as u64;
        let orbit = self.group.order() as u64 / stab;
        let num = orbit * self.b_hat_den;
        (num % self.b_hat_num == 0).then(|| num / self.b_hat_num)
    }

    /// Whether no pair orbit is over-represented in `block`.
    pub fn within_targets(&mut self, block: &[Point]) -> bool {
        let mut counts: HashMap<(Point, Point), u64> = HashMap::new();
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                *counts.entry(self.representative(a, b)).or_default() += 1;
            }
        }
        counts
            .into_iter()
            .all(|((a, b), n)| self.target(a, b).is_some_and(|t| n <= t))
    }
}

/// One block per line, ascending 1-based point ids separated by spaces.
pub fn write_blocks<W: Write>(mut out: W, blocks: &[Vec<Point>]) -> Result<()> {
    for block in blocks {
        let mut sorted = block.clone();
        sorted.sort_unstable();
        let line: Vec<String> = sorted.iter().map(|&p| (p as usize + 1).to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Reads the block-list format; blank lines and `#` comments are skipped.
pub fn read_blocks<R: BufRead>(input: R, v: usize) -> Result<Vec<Vec<Point>>> {
    let mut blocks = Vec::new();
    for (no, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut block = Vec::new();
        for tok in line.split_whitespace() {
            let id: usize = tok.parse().map_err(|_| Error::Parse {
                line: no + 1,
                message: format!("bad point id {tok:?}"),
            })?;
            if id == 0 || id > v {
                return Err(Error::Parse {
                    line: no + 1,
                    message: format!("point id {id} outside 1..={v}"),
                });
            }
            block.push((id - 1) as Point);
        }
        block.sort_unstable();
        blocks.push(block);
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_group, Permutation};
    use crate::singer::build_plane;

    fn fano() -> (Design, PermGroup) {
        let plane = build_plane(2).unwrap();
        let g = plane.singer_group().unwrap();
        (Design::new(7, plane.lines.clone()).unwrap(), g)
    }

    #[test]
    fn fano_plane_verifies() {
        let (d, g) = fano();
        let rep = verify(&d, Some(&g), &[]).unwrap();
        assert!(rep.is_design);
        assert_eq!((rep.v, rep.k, rep.b), (7, 3, 7));
        assert_eq!(rep.r, Uniform::Constant(3));
        assert!(rep.identities_hold);
        assert!(rep.is_projective_plane);
        assert_eq!(rep.line_transitive, Some(true));
        assert!(rep.all_ok());
    }

    #[test]
    fn missing_block_breaks_coverage() {
        let (mut d, g) = fano();
        d.blocks.pop();
        let rep = verify(&d, Some(&g), &[]).unwrap();
        assert!(!rep.is_design);
        assert_eq!(rep.lambda, Uniform::Varies { min: 0, max: 1 });
        assert!(!rep.identities_hold);
        assert_eq!(rep.line_transitive, Some(false));
    }

    #[test]
    fn develop_fixed_block() {
        let c = Permutation::from_fn(6, |x| (x + 2) % 6).unwrap();
        let g = enumerate_group(&[c], 10).unwrap();
        assert_eq!(develop(&g, &[0, 2, 4]).b(), 1);
        assert_eq!(develop(&g, &[0, 1]).b(), 3);
    }

    #[test]
    fn design_rejects_bad_blocks() {
        assert!(Design::new(5, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(Design::new(5, vec![vec![0, 1], vec![2]]).is_err());
        assert!(Design::new(5, vec![vec![0, 5]]).is_err());
        assert!(Design::new(5, vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn block_io_round_trip() {
        let blocks = vec![vec![0, 41, 7], vec![3, 2, 1]];
        let mut buf = Vec::new();
        write_blocks(&mut buf, &blocks).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "1 8 42\n2 3 4\n");
        let back = read_blocks(&buf[..], 451).unwrap();
        assert_eq!(back, vec![vec![0, 7, 41], vec![1, 2, 3]]);
        assert!(read_blocks(&b"1 0\n"[..], 10).is_err());
        assert!(read_blocks(&b"1 11\n"[..], 10).is_err());
    }

    #[test]
    fn oracle_targets_on_fano() {
        let (_, g) = fano();
        let mut oracle = PairOrbitOracle::new(&g, 3);
        // Singer group of order 7 is regular on 21 pairs: three orbits of size 7
        let reps: BTreeSet<_> = (0..7u16)
            .flat_map(|a| (a + 1..7).map(move |b| (a, b)))
            .map(|(a, b)| oracle.representative(a, b))
            .collect();
        assert_eq!(reps.len(), 3);
        assert_eq!(oracle.target(0, 1), Some(1));
    }
}
