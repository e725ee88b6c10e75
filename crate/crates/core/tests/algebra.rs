mod common;

use common::*;
use drsys::corpus::{self, GRAPHS, INSTANCES};
use drsys::cstar::{
    block_decomposition, convolve, fixed_point_intersection, gauge, indicator_family,
    induced_star_iso, star, ConvElement, FiniteGroupoid, LegMap, TOLERANCE,
};
use drsys::DRSystem;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

const ACYCLIC: [&str; 7] = ["pt", "p2", "p2x2", "tree2", "btree", "chain3", "diamond"];

fn groupoid(name: &str) -> FiniteGroupoid {
    FiniteGroupoid::build(&DRSystem::new(corpus::graph(name))).unwrap()
}

fn close(a: &ConvElement, b: &ConvElement) -> bool {
    a.distance(b).unwrap() < TOLERANCE
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn star_algebra_axioms(seed in any::<u64>(), which in 0usize..7) {
        let gr = groupoid(ACYCLIC[which]);
        let mut r = rng(seed);
        let (a, b, c) = (
            ConvElement::random(&gr, &mut r),
            ConvElement::random(&gr, &mut r),
            ConvElement::random(&gr, &mut r),
        );
        let m = |x: &ConvElement, y: &ConvElement| convolve(&gr, x, y).unwrap();
        let s = |x: &ConvElement| star(&gr, x).unwrap();
        prop_assert!(close(&m(&m(&a, &b), &c), &m(&a, &m(&b, &c))));
        prop_assert!(close(&m(&a, &b.add(&c).unwrap()), &m(&a, &b).add(&m(&a, &c)).unwrap()));
        prop_assert!(close(&s(&m(&a, &b)), &m(&s(&b), &s(&a))));
        prop_assert!(close(&s(&s(&a)), &a));
    }

    #[test]
    fn gauge_action_is_a_group_action(seed in any::<u64>(), which in 0usize..7) {
        let gr = groupoid(ACYCLIC[which]);
        let mut r = rng(seed);
        let f = int_fn(gr.system().graph(), &mut r, 2);
        let vals = gr.cocycle_values(&f).unwrap();
        let z = Complex64::from_polar(1.0, r.gen_range(0.0..6.3));
        let w = Complex64::from_polar(1.0, r.gen_range(0.0..6.3));
        let xi = ConvElement::random(&gr, &mut r);
        let twice = gauge(&vals, z, &gauge(&vals, w, &xi).unwrap()).unwrap();
        prop_assert!(close(&twice, &gauge(&vals, z * w, &xi).unwrap()));
        // and an automorphism of the *-algebra
        let eta = ConvElement::random(&gr, &mut r);
        let g = |x: &ConvElement| gauge(&vals, z, x).unwrap();
        prop_assert!(close(&g(&convolve(&gr, &xi, &eta).unwrap()), &convolve(&gr, &g(&xi), &g(&eta)).unwrap()));
        prop_assert!(close(&g(&star(&gr, &xi).unwrap()), &star(&gr, &g(&xi)).unwrap()));
    }
}

#[test]
fn blocks_match_orbits() {
    for name in ACYCLIC {
        let gr = groupoid(name);
        let blocks = block_decomposition(&gr).unwrap();
        let g = gr.system().graph();
        assert_eq!(blocks.len(), g.sinks().len());
        assert_eq!(blocks.iter().map(|b| b.size).sum::<usize>(), gr.point_count());
    }
}

#[test]
fn fixed_points_of_the_indicator_family_are_diagonal() {
    for (name, _) in GRAPHS {
        let sys = DRSystem::new(corpus::graph(name));
        let Some(depth) = sys.graph().longest_path() else { continue };
        let gr = FiniteGroupoid::build(&sys).unwrap();
        if gr.point_count() > 64 {
            continue;
        }
        let rep = fixed_point_intersection(&gr, &indicator_family(sys.graph(), depth), 0).unwrap();
        assert!(rep.is_diagonal && rep.numeric_agrees, "{name}: {rep:?}");
        assert!(rep.max_residual < TOLERANCE);
        assert!(rep.samples as u64 >= 2 * rep.max_degree + 1);
    }
}

#[test]
fn acyclic_conjugacies_induce_intertwining_isomorphisms() {
    let mut n = 0;
    for inst in INSTANCES.iter().filter(|i| i.is_acyclic()) {
        let h = inst.homeomorphism().unwrap();
        if inst.conjugacy {
            let phi = induced_star_iso(h, 3, 0).unwrap();
            assert!(phi.check_star_iso(0).unwrap().ok(), "{}", inst.name);
            assert!(phi.verify_intertwining(3, 0).unwrap().ok, "{}", inst.name);
            n += 1;
        } else {
            let legs = LegMap::new(h).unwrap();
            let rep = legs.verify_intertwining(3, 0).unwrap();
            assert!(rep.max_residual >= 1e-6, "{}", inst.name);
            assert!(rep.witness_g.is_some() && rep.witness_z.is_some());
        }
    }
    assert!(n >= 3);
}
