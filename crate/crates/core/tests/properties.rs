mod common;

use std::sync::LazyLock;

use common::{plane_of_order_seven, set_two, Instance};
use ltsearch_core::group::{
    build_parameter_set_group, enumerate_group, orbits_on_pairs, PairOrbitTable, ParameterSet, Permutation, Point,
};
use ltsearch_core::orbit_condition::{OrbitTargets, PairTally};
use ltsearch_core::search::Checker;
use proptest::prelude::*;
use proptest::sample::subsequence;
use proptest::test_runner::{RngAlgorithm, RngSeed};
use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};

static SET_TWO: LazyLock<Instance> = LazyLock::new(|| set_two(1, true));
static PLANE: LazyLock<Instance> = LazyLock::new(plane_of_order_seven);

fn non_initial(inst: &Instance) -> Vec<Point> {
    (0..inst.geom.degree() as Point).filter(|p| !inst.initial_block.contains(p)).collect()
}

/// Once a prefix of an ascending chain is rejected, every longer prefix is too.
fn assert_monotone(inst: &Instance, chain: &[Point], census: bool) {
    let cfg = if census {
        inst.config(Some(inst.targets.k as usize), false)
    } else {
        inst.config(None, false)
    };
    let checker = Checker::new(&cfg);
    let mut rejected = None;
    for n in 1..=chain.len() {
        let r = checker.reject(&chain[..n]);
        if let Some(first) = rejected {
            assert!(r.is_some(), "prefix {n} of {chain:?} passes after a {first} rejection");
        } else if r.is_some() {
            rejected = r;
        }
    }
}

fn chain_strategy(pool: Vec<Point>) -> impl Strategy<Value = Vec<Point>> {
    (1usize..=8).prop_flat_map(move |n| subsequence(pool.clone(), n))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, rng_algorithm: RngAlgorithm::ChaCha, rng_seed: RngSeed::Fixed(451), ..ProptestConfig::default() })]

    #[test]
    fn pruning_is_monotone_on_451_points(chain in chain_strategy(non_initial(&SET_TWO))) {
        assert_monotone(&SET_TWO, &chain, false);
        assert_monotone(&SET_TWO, &chain, true);
    }

    #[test]
    fn pruning_is_monotone_on_57_points(chain in chain_strategy(non_initial(&PLANE))) {
        assert_monotone(&PLANE, &chain, false);
    }

    #[test]
    fn pruning_is_monotone_on_chains_through_row_one(
        cols in subsequence((0..11usize).collect::<Vec<_>>(), 1..=4),
        rows in subsequence((1..41usize).collect::<Vec<_>>(), 4),
    ) {
        // dense chains near the feasible region exercise the column rules
        let inst = &*SET_TWO;
        let mut chain: Vec<Point> = cols.iter().zip(&rows).map(|(&c, &r)| inst.geom.point(r, c)).collect();
        chain.sort_unstable();
        chain.retain(|p| !inst.initial_block.contains(p));
        assert_monotone(inst, &chain, false);
    }

    #[test]
    fn orbit_table_text_round_trip(n in 2usize..40, step in 1usize..40) {
        let c = Permutation::from_fn(n, |x| (x + step) % n).unwrap();
        let g = enumerate_group(&[c], 1000).unwrap();
        let t = orbits_on_pairs(&g);
        let mut buf = Vec::new();
        t.write_text(&mut buf).unwrap();
        prop_assert_eq!(PairOrbitTable::read_text(&buf[..]).unwrap(), t);
    }
}

#[test]
fn incremental_tally_matches_batch_tally() {
    let inst = &*SET_TWO;
    let table = &inst.table;
    let loose = OrbitTargets {
        targets: vec![u32::MAX; table.num_orbits()],
        ..inst.targets.clone()
    };
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let block: Vec<Point> = sample(&mut rng, 451, 6).into_iter().map(|p| p as Point).collect();
        let mut tally = PairTally::new(table.num_orbits());
        let mut strict = PairTally::new(table.num_orbits());
        let mut strict_ok = true;
        for i in 0..block.len() {
            assert!(tally.try_add(block[i], &block[..i], table, &loose));
            if strict_ok {
                strict_ok = strict.try_add(block[i], &block[..i], table, &inst.targets);
                let batch = PairTally::from_block(&block[..=i], table);
                if strict_ok {
                    assert_eq!(strict, batch);
                } else {
                    assert!(!batch.within(&inst.targets));
                    assert_eq!(strict, PairTally::from_block(&block[..i], table));
                }
            }
        }
        assert_eq!(tally, PairTally::from_block(&block, table));
        let mut undo = tally.clone();
        undo.remove(block[5], &block[..5], table);
        assert_eq!(undo, PairTally::from_block(&block[..5], table));
    }
}

#[test]
fn orbit_stabilizer_on_random_pairs() {
    for set in [ParameterSet::One, ParameterSet::Two] {
        let g = build_parameter_set_group(set, 2).unwrap();
        let t = orbits_on_pairs(&g);
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..100 {
            let a: Point = rng.gen_range(0..451);
            let b: Point = (a + rng.gen_range(1..451)) % 451;
            let orbit = t.orbit_sizes()[t.orbit_of(a, b)];
            assert_eq!(orbit * g.setwise_stabilizer_order(&[a, b]), g.order());
        }
    }
}

#[test]
fn orbit_table_of_a_451_point_group_round_trips() {
    let t = &SET_TWO.table;
    let mut buf = Vec::new();
    t.write_text(&mut buf).unwrap();
    assert_eq!(PairOrbitTable::read_text(&buf[..]).unwrap(), *t);
}
