mod common;

use common::*;
use drsys::corpus::{self, INSTANCES};
use drsys::funcspace::{check_prop_sigma, LocallyConstantFn};
use drsys::homcheck::check_conjugacy;
use drsys::DirectedGraph;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn rat_fn(g: &DirectedGraph, r: &mut ChaCha8Rng, depth: usize) -> LocallyConstantFn<Rational64> {
    let pieces = g
        .cylinder_partition(depth)
        .into_iter()
        .map(|c| (c.base().clone(), Rational64::new(r.gen_range(-6..=6), r.gen_range(1..=4))))
        .collect();
    LocallyConstantFn::from_pieces(g, pieces).unwrap()
}

fn rat(r: &mut ChaCha8Rng) -> Rational64 {
    Rational64::new(r.gen_range(-5..=5), r.gen_range(1..=3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_operators_are_linear(seed in any::<u64>(), which in 0usize..4) {
        let g = corpus::graph(["o2", "o2_split", "sink_loop", "o3"][which]);
        let mut r = rng(seed);
        let (f, h) = (rat_fn(&g, &mut r, 2), rat_fn(&g, &mut r, 1));
        let (s, t) = (rat(&mut r), rat(&mut r));
        let comb = f.scale(&g, &s).add(&g, &h.scale(&g, &t));
        prop_assert_eq!(
            comb.sigma_upper_star(&g),
            f.sigma_upper_star(&g).scale(&g, &s).add(&g, &h.sigma_upper_star(&g).scale(&g, &t))
        );
        // sigma^* lands in dom(sigma), where sigma_* is defined
        let (fu, hu) = (f.sigma_upper_star(&g), h.sigma_upper_star(&g));
        let lhs = fu.scale(&g, &s).add(&g, &hu.scale(&g, &t)).sigma_lower_star(&g).unwrap();
        let rhs = fu
            .sigma_lower_star(&g)
            .unwrap()
            .scale(&g, &s)
            .add(&g, &hu.sigma_lower_star(&g).unwrap().scale(&g, &t));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lower_after_upper_doubles_on_the_two_shift(seed in any::<u64>()) {
        let g = corpus::graph("o2");
        let f = rat_fn(&g, &mut rng(seed), 3);
        let two = Rational64::from_integer(2);
        prop_assert_eq!(f.sigma_upper_star(&g).sigma_lower_star(&g).unwrap(), f.scale(&g, &two));
    }

    #[test]
    fn pushforward_is_a_ring_map(seed in any::<u64>(), which in 0usize..17) {
        let inst = &INSTANCES[which];
        let h = inst.homeomorphism().unwrap();
        let e = h.source().clone();
        let mut r = rng(seed);
        let (f, k) = (rat_fn(&e, &mut r, 2), rat_fn(&e, &mut r, 2));
        let f_ = h.target().clone();
        let push = |x: &LocallyConstantFn<Rational64>| h.push(x).unwrap();
        prop_assert_eq!(push(&f.mul(&e, &k)), push(&f).mul(&f_, &push(&k)));
        prop_assert_eq!(push(&f.add(&e, &k)), push(&f).add(&f_, &push(&k)));
        prop_assert_eq!(push(&f.conj(&e)), push(&f).conj(&f_));
        // pull undoes push
        prop_assert_eq!(h.pull(&push(&f)).unwrap(), f);
    }
}

#[test]
fn pointwise_evaluation_of_composites() {
    let mut r = rng(8);
    for inst in INSTANCES {
        let h = inst.homeomorphism().unwrap();
        let (e, f) = inst.graphs();
        let g = int_fn(&f, &mut r, 2);
        let pulled = h.pull(&g).unwrap();
        for _ in 0..30 {
            let x = point(&e, &mut r);
            assert_eq!(pulled.evaluate(&x), g.evaluate(&h.apply(&x).unwrap()), "{}", inst.name);
        }
    }
}

#[test]
fn operator_conditions_agree_with_the_conjugacy_verdict() {
    for inst in INSTANCES {
        let h = inst.homeomorphism().unwrap();
        let rep = check_prop_sigma(&h, 3).unwrap();
        let verdict = check_conjugacy(h.forward(), h.backward(), 3, 0).unwrap();
        assert_eq!(rep.cond_upper, verdict.is_conjugacy, "{}", inst.name);
        assert_eq!(rep.cond_lower, verdict.is_conjugacy, "{}", inst.name);
    }
}
