//! Orbit condition for starter blocks of a 2-(v,k,1) design: a k-subset whose
//! group orbit is the line set must contain exactly `b_i = |O_i| / b̂` pairs
//! from each pair orbit `O_i`, where `b̂ = v(v-1) / (k(k-1))`, and its
//! set-wise stabilizer must have order `|G| / b̂`.

use std::fmt;

use crate::dd::pairs;
use crate::error::{Error, Result};
use crate::group::{PairOrbitTable, PermGroup, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTargets {
    pub v: u64,
    pub k: u64,
    pub b_hat: u64,
    /// `targets[i] = |O_i| / b̂`
    pub targets: Vec<u32>,
    pub group_order: u64,
    pub required_stabilizer_order: u64,
}

/// Why no 2-(v,k,1) design can arise from this group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Infeasible {
    LineCountNotIntegral { numerator: u64, denominator: u64 },
    TargetNotIntegral { orbit: usize, orbit_size: u64, b_hat: u64 },
    StabilizerNotIntegral { group_order: u64, b_hat: u64 },
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasible::LineCountNotIntegral { numerator, denominator } => {
                write!(f, "b = {numerator}/{denominator} is not an integer")
            }
            Infeasible::TargetNotIntegral { orbit, orbit_size, b_hat } => write!(
                f,
                "orbit {} has {orbit_size} pairs, not a multiple of b = {b_hat}",
                orbit + 1
            ),
            Infeasible::StabilizerNotIntegral { group_order, b_hat } => {
                write!(f, "|G| = {group_order} is not a multiple of b = {b_hat}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(OrbitTargets),
    Infeasible(Infeasible),
}

impl Feasibility {
    pub fn feasible(self) -> Option<OrbitTargets> {
        match self {
            Feasibility::Feasible(t) => Some(t),
            Feasibility::Infeasible(_) => None,
        }
    }
}

pub fn make_targets(v: u64, k: u64, table: &PairOrbitTable, group_order: u64) -> Result<Feasibility> {
    if table.degree() as u64 != v {
        return Err(Error::InvalidArgument(format!(
            "orbit table has degree {}, expected v = {v}",
            table.degree()
        )));
    }
    if k < 2 || k > v {
        return Err(Error::InvalidArgument(format!("need 2 <= k <= v, got k = {k}")));
    }
    let numerator = v * (v - 1);
    let denominator = k * (k - 1);
    if numerator % denominator != 0 {
        return Ok(Feasibility::Infeasible(Infeasible::LineCountNotIntegral {
            numerator,
            denominator,
        }));
    }
    let b_hat = numerator / denominator;
    let mut targets = Vec::with_capacity(table.num_orbits());
    for (orbit, &size) in table.orbit_sizes().iter().enumerate() {
        let size = size as u64;
        if size % b_hat != 0 {
            return Ok(Feasibility::Infeasible(Infeasible::TargetNotIntegral {
                orbit,
                orbit_size: size,
                b_hat,
            }));
        }
        targets.push((size / b_hat) as u32);
    }
    if group_order % b_hat != 0 {
        return Ok(Feasibility::Infeasible(Infeasible::StabilizerNotIntegral { group_order, b_hat }));
    }
    debug_assert_eq!(targets.iter().map(|&t| t as u64).sum::<u64>(), pairs(k));
    Ok(Feasibility::Feasible(OrbitTargets {
        v,
        k,
        b_hat,
        targets,
        group_order,
        required_stabilizer_order: group_order / b_hat,
    }))
}

/// Per-orbit pair counts of a growing block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTally {
    counts: Vec<u32>,
}

impl PairTally {
    pub fn new(num_orbits: usize) -> Self {
        PairTally {
            counts: vec![0; num_orbits],
        }
    }

    /// Tally of every pair inside `block`, computed from scratch.
    pub fn from_block(block: &[Point], table: &PairOrbitTable) -> Self {
        let mut t = PairTally::new(table.num_orbits());
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                t.counts[table.orbit_of(a, b)] += 1;
            }
        }
        t
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Adds the pairs `{new_point, p}` for `p` in `block`. If some orbit
    /// would exceed its target the tally is left unchanged and `false` is
    /// returned; otherwise the pairs stay counted until [`PairTally::remove`].
    pub fn try_add(&mut self, new_point: Point, block: &[Point], table: &PairOrbitTable, targets: &OrbitTargets) -> bool {
        for (i, &p) in block.iter().enumerate() {
            let o = table.orbit_of(new_point, p);
            self.counts[o] += 1;
            if self.counts[o] > targets.targets[o] {
                for &q in &block[..=i] {
                    self.counts[table.orbit_of(new_point, q)] -= 1;
                }
                return false;
            }
        }
        true
    }

    /// Undoes a successful [`PairTally::try_add`] with the same arguments.
    pub fn remove(&mut self, new_point: Point, block: &[Point], table: &PairOrbitTable) {
        for &p in block {
            self.counts[table.orbit_of(new_point, p)] -= 1;
        }
    }

    pub fn within(&self, targets: &OrbitTargets) -> bool {
        self.counts.iter().zip(&targets.targets).all(|(c, t)| c <= t)
    }

    pub fn matches(&self, targets: &OrbitTargets) -> bool {
        self.counts == targets.targets
    }
}

/// Checks adding `new_point` to `block` against the targets, updating `tally`
/// on success.
pub fn partial_orbit_check(
    tally: &mut PairTally,
    new_point: Point,
    block: &[Point],
    table: &PairOrbitTable,
    targets: &OrbitTargets,
) -> bool {
    tally.try_add(new_point, block, table, targets)
}

/// Exact pair counts per orbit plus the stabilizer order: the full condition
/// for `block` to develop into a 2-(v,k,1) design.
pub fn full_orbit_condition(block: &[Point], table: &PairOrbitTable, targets: &OrbitTargets, group: &PermGroup) -> bool {
    block.len() as u64 == targets.k
        && PairTally::from_block(block, table).matches(targets)
        && group.setwise_stabilizer_order(block) as u64 == targets.required_stabilizer_order
}
