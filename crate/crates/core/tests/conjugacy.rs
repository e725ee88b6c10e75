mod common;

use common::*;
use drsys::corpus::{self, INSTANCES};
use drsys::homcheck::{check_conjugacy, eventual_k, sample_points, Condition};

#[test]
fn verdicts_are_symmetric() {
    for inst in INSTANCES {
        let (t, u) = inst.transducers().unwrap();
        let there = check_conjugacy(&t, &u, 3, 0).unwrap();
        let back = check_conjugacy(&u, &t, 3, 0).unwrap();
        assert_eq!(there.is_conjugacy, back.is_conjugacy, "{}", inst.name);
        assert!(there.routes_agree && back.routes_agree, "{}", inst.name);
    }
}

#[test]
fn zero_lag_everywhere_iff_commuting() {
    for inst in INSTANCES {
        let (t, u) = inst.transducers().unwrap();
        let v = check_conjugacy(&t, &u, 3, 0).unwrap();
        if v.failing_condition == Some(Condition::Dom) {
            continue;
        }
        let lags: Vec<usize> = sample_points(t.source(), 3, 32, 5)
            .iter()
            .filter(|x| x.in_dom(1))
            .map(|x| eventual_k(&t, x).unwrap())
            .collect();
        let all_zero = lags.iter().all(|&k| k == 0);
        assert_eq!(all_zero, v.failing_condition != Some(Condition::Commute), "{}", inst.name);
        if let Some(k) = v.eventual_k_bound {
            assert!(lags.iter().all(|&l| l <= k), "{}", inst.name);
        }
    }
}

#[test]
fn out_split_code_round_trips() {
    let inst = corpus::instance("o2-out-split").unwrap();
    let h = inst.homeomorphism().unwrap();
    let v = check_conjugacy(h.forward(), h.backward(), 3, 0).unwrap();
    assert!(v.is_conjugacy);
    let (e, _) = inst.graphs();
    let mut r = rng(12);
    for _ in 0..200 {
        let x = point(&e, &mut r);
        assert_eq!(h.apply_inverse(&h.apply(&x).unwrap()).unwrap(), x);
    }
}

#[test]
fn example_verdicts() {
    let v = |name: &str| {
        let (t, u) = corpus::instance(name).unwrap().transducers().unwrap();
        check_conjugacy(&t, &u, 3, 0).unwrap()
    };
    let pt = v("pt-loop");
    assert_eq!(pt.failing_condition, Some(Condition::Dom));
    let first = v("o2-first-letter-swap");
    assert_eq!(first.failing_condition, Some(Condition::Commute));
    assert_eq!(first.eventual_k_bound, Some(1));
    let swap = v("p2-point-swap");
    assert_eq!(swap.failing_condition, Some(Condition::Dom));
    assert_eq!(swap.eventual_k_bound, None);
    assert!(v("o2-swap").is_conjugacy);
}

#[test]
fn verdicts_do_not_depend_on_the_seed() {
    for inst in INSTANCES {
        let (t, u) = inst.transducers().unwrap();
        let a = check_conjugacy(&t, &u, 2, 1).unwrap();
        let b = check_conjugacy(&t, &u, 2, 99).unwrap();
        assert_eq!(a.is_conjugacy, b.is_conjugacy, "{}", inst.name);
    }
}
