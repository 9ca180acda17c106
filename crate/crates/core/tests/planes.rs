use std::collections::BTreeSet;

use ltsearch_core::design::{verify, Design, Uniform};
use ltsearch_core::group::Point;
use ltsearch_core::singer::{build_plane, singer_partition};

fn check_incidence(p: u64) {
    let plane = build_plane(p).unwrap();
    let n = (p * p + p + 1) as usize;
    assert_eq!(plane.num_points(), n);
    assert_eq!(plane.lines.len(), n);
    assert!(plane.lines.iter().all(|l| l.len() == p as usize + 1));

    let mut cover = vec![vec![0u32; n]; n];
    for line in &plane.lines {
        for (i, &a) in line.iter().enumerate() {
            for &b in &line[i + 1..] {
                cover[a as usize][b as usize] += 1;
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            assert_eq!(cover[a][b], 1, "points {a},{b} of PG(2,{p})");
        }
    }
    for (i, l) in plane.lines.iter().enumerate() {
        let l: BTreeSet<Point> = l.iter().copied().collect();
        for m in &plane.lines[i + 1..] {
            assert_eq!(m.iter().filter(|x| l.contains(x)).count(), 1);
        }
    }

    // Singer cycle: one cycle on points, one orbit on lines
    assert_eq!(plane.singer.cycle_lengths(), vec![n]);
    let all: BTreeSet<Vec<Point>> = plane.lines.iter().cloned().collect();
    let mut orbit = BTreeSet::new();
    let mut line = plane.lines[0].clone();
    for _ in 0..n {
        assert!(all.contains(&line));
        orbit.insert(line.clone());
        line = plane.singer.image_of_set(&line);
    }
    assert_eq!(orbit.len(), n);

    let g = plane.singer_group().unwrap();
    assert_eq!(g.order(), n);
    let report = verify(&Design::new(n, plane.lines.clone()).unwrap(), Some(&g), &[]).unwrap();
    assert!(report.is_design && report.identities_hold && report.is_projective_plane);
    assert_eq!(report.r, Uniform::Constant(p + 1));
    assert_eq!(report.line_transitive, Some(true));
}

#[test]
fn fano_plane_incidence() {
    check_incidence(2);
}

#[test]
fn plane_of_order_seven_incidence() {
    check_incidence(7);
}

#[test]
fn planes_of_orders_three_and_five() {
    check_incidence(3);
    check_incidence(5);
}

#[test]
fn singer_partitions_of_the_57_point_plane() {
    let plane = build_plane(7).unwrap();
    let g = plane.singer_group().unwrap();
    let design = Design::new(57, plane.lines.clone()).unwrap();
    let three = singer_partition(&plane, 3).unwrap();
    let nineteen = singer_partition(&plane, 19).unwrap();
    let report = verify(&design, Some(&g), &[three, nineteen]).unwrap();
    assert!(report.all_ok());
    let [a, b] = &report.partitions[..] else { panic!() };
    assert_eq!((a.classes, a.class_size), (3, Uniform::Constant(19)));
    assert_eq!((b.classes, b.class_size), (19, Uniform::Constant(3)));
    assert_eq!(a.invariant, Some(true));
    assert_eq!(b.invariant, Some(true));
    // inner pairs: 9 in the 3-class partition, 1 in the 19-class partition
    assert_eq!(a.inner_pairs_per_line, Uniform::Constant(9));
    assert_eq!(b.inner_pairs_per_line, Uniform::Constant(1));
    assert_eq!(a.outer_pairs_per_line, Uniform::Constant(19));
}
