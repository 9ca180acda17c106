mod common;

use common::{plane_of_order_seven, set_two};
use ltsearch_core::dd::dd_solve;
use ltsearch_core::design::{develop, verify, Uniform};
use ltsearch_core::group::Point;
use ltsearch_core::search::{census, census_count, search, search_par, SearchConfig, SymmetryRules};

#[test]
fn plane_of_order_seven_has_one_normalized_starter_block() {
    let inst = plane_of_order_seven();
    let cfg = inst.config(None, false);
    let out = search(&cfg).unwrap();
    assert_eq!(out.blocks.len(), 1);
    // rows 0,1,7,11 of column 0, rows 0,4 of column 1, rows 4,9 of column 2
    let expected: Vec<Point> = vec![0, 1, 7, 11, 19, 42, 44, 47];
    assert_eq!(out.blocks[0].points, expected);
    assert_eq!(out.stats.found, 1);

    let geom = inst.geom;
    let design = develop(&inst.group, &out.blocks[0].points);
    let report = verify(&design, Some(&inst.group), &[geom.columns(), geom.rows()]).unwrap();
    assert!(report.is_design && report.is_projective_plane && report.all_ok());
    assert_eq!((report.v, report.b), (57, 57));
    assert_eq!(report.line_transitive, Some(true));
    let dd = dd_solve(8, 19, 3).unwrap();
    assert_eq!(dd.len(), 1);
    assert_eq!(report.partitions[0].inner_pairs_per_line, Uniform::Constant(dd[0].x));
    assert_eq!(report.partitions[1].inner_pairs_per_line, Uniform::Constant(dd[0].y));
}

#[test]
fn relaxed_column_rule_admits_the_mirror_block() {
    let inst = plane_of_order_seven();
    let relaxed = SearchConfig {
        symmetry: SymmetryRules::standard(),
        ..inst.config(None, false)
    };
    let out = search(&relaxed).unwrap();
    let blocks: Vec<Vec<Point>> = out.blocks.into_iter().map(|b| b.points).collect();
    assert_eq!(blocks, vec![vec![0, 1, 7, 11, 19, 42, 44, 47], vec![0, 19, 20, 26, 30, 42, 44, 47]]);
}

#[test]
fn parallel_runs_match_sequential_runs() {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let plane = plane_of_order_seven();
    let cfg = plane.config(None, false);
    let seq = search(&cfg).unwrap();
    assert_eq!(pool.install(|| search_par(&cfg)).unwrap(), seq);
    assert_eq!(search_par(&cfg).unwrap(), seq);

    let inst = set_two(3, false);
    let cfg = inst.config(Some(5), true);
    let mut streamed = 0u64;
    let seq = census(&cfg, &mut |_: &[Point]| streamed += 1).unwrap();
    assert_eq!(seq.nodes_at(5), streamed);
    assert_eq!(pool.install(|| census_count(&cfg)).unwrap(), seq);
    assert_eq!(seq.to_string(), census_count(&cfg).unwrap().to_string());
}
