mod common;

use common::*;
use drsys::corpus::{self, GRAPHS};
use drsys::graph::Cylinder;
use drsys::{BoundaryPoint, DRSystem, PeriodicityReport};
use proptest::prelude::*;

fn o2() -> drsys::DirectedGraph {
    corpus::graph("o2")
}

proptest! {
    #[test]
    fn canonical_lasso_expands_like_its_input(
        prefix in proptest::collection::vec(0usize..2, 0..5),
        cycle in proptest::collection::vec(0usize..2, 1..5),
    ) {
        let g = o2();
        let word = |w: &[usize]| -> Vec<_> {
            w.iter().map(|&i| g.edge_by_name(["a", "b"][i]).unwrap()).collect()
        };
        let (p, c) = (word(&prefix), word(&cycle));
        let v = g.vertex_by_name("v").unwrap();
        let x = BoundaryPoint::lasso(&g, &g.path(v, p.clone()).unwrap(), &c).unwrap();
        let n = prefix.len() + 3 * cycle.len();
        let expected: Vec<_> = p.iter().chain(c.iter().cycle()).take(n).copied().collect();
        prop_assert_eq!(x.expand(n), expected);
    }

    #[test]
    fn equality_matches_long_expansion(seed in any::<u64>()) {
        let g = o2();
        let mut r = rng(seed);
        let (x, y) = (point(&g, &mut r), point(&g, &mut r));
        prop_assume!(x.description_length() + y.description_length() <= 12);
        prop_assert_eq!(x == y, x.expand(50) == y.expand(50));
    }

    #[test]
    fn literals_round_trip(seed in any::<u64>(), which in 0usize..13) {
        let g = corpus::graph(GRAPHS[which].0);
        let x = point(&g, &mut rng(seed));
        prop_assert_eq!(g.parse_point(&g.point_literal(&x)).unwrap(), x);
    }
}

#[test]
fn every_point_lies_in_exactly_one_partition_cell() {
    let mut r = rng(1);
    for (name, _) in GRAPHS {
        let g = corpus::graph(name);
        for d in 0..=6 {
            let cells = g.cylinder_partition(d);
            for _ in 0..200 {
                let x = point(&g, &mut r);
                let hits = cells.iter().filter(|c| c.contains(&x)).count();
                assert_eq!(hits, 1, "{name} depth {d} {}", g.point_literal(&x));
            }
        }
    }
}

#[test]
fn shift_on_an_edge_cylinder_is_a_bijection() {
    let mut r = rng(2);
    for name in ["o2", "o2_split", "sink_loop", "btree"] {
        let g = corpus::graph(name);
        let sys = DRSystem::new(g.clone());
        for e in g.edges() {
            let cyl = Cylinder::new(g.edge_path(&[e]).unwrap());
            let mut seen = 0;
            while seen < 100 {
                let x = point(&g, &mut r);
                if !cyl.contains(&x) {
                    continue;
                }
                seen += 1;
                let y = sys.shift(&x, 1).unwrap();
                assert_eq!(y.start(), g.dst(e));
                let back = y.after_path(&g, &g.edge_path(&[e]).unwrap()).unwrap();
                assert_eq!(back, x);
            }
        }
    }
}

#[test]
fn preimages_shift_back() {
    let mut r = rng(3);
    for (name, _) in GRAPHS {
        let sys = DRSystem::new(corpus::graph(name));
        for _ in 0..50 {
            let x = point(sys.graph(), &mut r);
            for p in sys.preimages(&x) {
                assert_eq!(sys.shift(&p, 1).unwrap(), x);
            }
        }
    }
}

#[test]
fn periodicity_is_shift_equivariant() {
    let mut r = rng(4);
    for name in ["o2", "o2_split", "o3", "loop", "sink_loop"] {
        let sys = DRSystem::new(corpus::graph(name));
        for _ in 0..200 {
            let x = point(sys.graph(), &mut r);
            if !x.in_dom(1) {
                continue;
            }
            let sx = sys.shift(&x, 1).unwrap();
            match (sys.periodicity(&x), sys.periodicity(&sx)) {
                (PeriodicityReport::Periodic { p }, after) => {
                    assert_eq!(after, PeriodicityReport::Periodic { p })
                }
                (PeriodicityReport::EventuallyPeriodic { n: 1, p }, after) => {
                    assert_eq!(after, PeriodicityReport::Periodic { p })
                }
                (PeriodicityReport::EventuallyPeriodic { n, p }, after) => {
                    assert_eq!(after, PeriodicityReport::EventuallyPeriodic { n: n - 1, p })
                }
                (PeriodicityReport::Aperiodic, _) => {}
            }
        }
    }
}

#[test]
fn trace_formula_matches_closed_path_count() {
    for (name, _) in GRAPHS {
        let sys = DRSystem::new(corpus::graph(name));
        for p in 1..=6 {
            assert_eq!(
                sys.periodic_count(p).unwrap(),
                sys.periodic_count_enumerated(p) as u128,
                "{name} p={p}"
            );
        }
    }
}

/// Under Condition L every cylinder contains a point that is not periodic.
#[test]
fn condition_l_gives_non_periodic_points_in_every_cylinder() {
    for (name, _) in GRAPHS {
        let sys = DRSystem::new(corpus::graph(name));
        let g = sys.graph();
        if !sys.is_topologically_free() {
            continue;
        }
        let pts = drsys::point::enumerate_points(g, 8);
        for base in g.paths_up_to(4) {
            let cyl = Cylinder::new(base.clone());
            assert!(
                pts.iter().any(|x| cyl.contains(x)
                    && !matches!(sys.periodicity(x), PeriodicityReport::Periodic { .. })),
                "{name}: {}",
                g.path_literal(&base)
            );
        }
    }
}

#[test]
fn random_points_are_reproducible() {
    let g = o2();
    let (mut r1, mut r2) = (rng(9), rng(9));
    for _ in 0..20 {
        assert_eq!(point(&g, &mut r1), point(&g, &mut r2));
    }
}
