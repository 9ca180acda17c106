#![allow(dead_code)]

use ltsearch_core::dd::InterceptVector;
use ltsearch_core::group::{
    build_parameter_set_group, orbits_on_pairs, translation_group, GridGeometry, PairOrbitTable,
    ParameterSet, PermGroup, Point,
};
use ltsearch_core::orbit_condition::{make_targets, OrbitTargets};
use ltsearch_core::search::{SearchConfig, SymmetryRules};

pub fn vector(entries: &[u32], k: usize, class_size: u32) -> InterceptVector {
    let mut e = entries.to_vec();
    e.resize(k + 1, 0);
    InterceptVector::new(e, class_size).unwrap()
}

/// A group with its pair-orbit table and targets, owned together so configs
/// can borrow from it.
pub struct Instance {
    pub geom: GridGeometry,
    pub group: PermGroup,
    pub table: PairOrbitTable,
    pub targets: OrbitTargets,
    pub row_vector: InterceptVector,
    pub col_vector: InterceptVector,
    pub initial_block: Vec<Point>,
    pub symmetry: SymmetryRules,
}

impl Instance {
    pub fn config(&self, census_depth: Option<usize>, census_with_orbit_condition: bool) -> SearchConfig<'_> {
        SearchConfig {
            name: "test".into(),
            geometry: self.geom,
            group: &self.group,
            table: &self.table,
            targets: &self.targets,
            row_vector: self.row_vector.clone(),
            col_vector: self.col_vector.clone(),
            initial_block: self.initial_block.clone(),
            symmetry: self.symmetry,
            census_depth,
            census_with_orbit_condition,
        }
    }
}

fn translations(rows: usize, cols: usize) -> (GridGeometry, PermGroup, PairOrbitTable) {
    let geom = GridGeometry::new(rows, cols).unwrap();
    let group = translation_group(&geom).unwrap();
    let table = orbits_on_pairs(&group);
    (geom, group, table)
}

/// 21 points on a 7 x 3 grid under `Z7 x Z3`, lines of 5: the plane of order 4.
pub fn plane_of_order_four() -> Instance {
    let (geom, group, table) = translations(7, 3);
    let targets = make_targets(21, 5, &table, 21).unwrap().feasible().unwrap();
    Instance {
        geom,
        group,
        table,
        targets,
        row_vector: vector(&[3, 3, 1], 5, 3),
        col_vector: vector(&[0, 2, 0, 1], 5, 7),
        initial_block: vec![geom.point(0, 0), geom.point(0, 1)],
        symmetry: SymmetryRules::standard(),
    }
}

/// 5 x 3 grid, k = 4, with hand-set targets: no pair from the first
/// translation orbit and at most one from each of the other six.
pub fn synthetic_five_by_three() -> Instance {
    let (geom, group, table) = translations(5, 3);
    assert_eq!(table.num_orbits(), 7);
    let mut targets = vec![1u32; 7];
    targets[0] = 0;
    Instance {
        geom,
        group,
        table,
        targets: OrbitTargets {
            v: 15,
            k: 4,
            b_hat: 15,
            targets,
            group_order: 15,
            required_stabilizer_order: 1,
        },
        row_vector: vector(&[2, 2, 1], 4, 3),
        col_vector: vector(&[0, 2, 1], 4, 5),
        initial_block: vec![geom.point(0, 0), geom.point(0, 1)],
        symmetry: SymmetryRules::standard(),
    }
}

/// The 57-point control: `Z19 x Z3` on a 19 x 3 grid, lines of 8.
pub fn plane_of_order_seven() -> Instance {
    let (geom, group, table) = translations(19, 3);
    let targets = make_targets(57, 8, &table, 57).unwrap().feasible().unwrap();
    let mut symmetry = SymmetryRules::standard();
    symmetry.col0_at_least_col1 = true;
    Instance {
        geom,
        group,
        table,
        targets,
        row_vector: vector(&[12, 6, 1], 8, 3),
        col_vector: vector(&[0, 1, 0, 1, 1], 8, 19),
        initial_block: vec![geom.point(0, 0), geom.point(0, 1)],
        symmetry,
    }
}

/// Parameter set 2, group `i`, column vector `[4,5,1,1]` or `[5,2,4,0]`.
pub fn set_two(i: u64, first_vector: bool) -> Instance {
    let geom = GridGeometry::grid_451();
    let group = build_parameter_set_group(ParameterSet::Two, i).unwrap();
    let table = orbits_on_pairs(&group);
    let targets = make_targets(451, 10, &table, group.order() as u64).unwrap().feasible().unwrap();
    let col = if first_vector { &[4, 5, 1, 1][..] } else { &[5, 2, 4, 0][..] };
    Instance {
        geom,
        group,
        table,
        targets,
        row_vector: vector(&[32, 8, 1], 10, 11),
        col_vector: vector(col, 10, 41),
        initial_block: vec![geom.point(0, 0), geom.point(0, 1)],
        symmetry: SymmetryRules::standard(),
    }
}

/// Ascending subsets of `pool` of size `m`.
pub fn subsets(pool: &[Point], m: usize) -> Vec<Vec<Point>> {
    fn go(pool: &[Point], m: usize, start: usize, cur: &mut Vec<Point>, out: &mut Vec<Vec<Point>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            go(pool, m, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, m, 0, &mut Vec::new(), &mut out);
    out
}
