use proptest::prelude::*;
use relsem::finrel::{general_intersect, general_union, FinRel, SetAlgebra};
use relsem::gen::{self, case_rng, GenConfig};
use relsem::universe::{enumerate_tuples, Limits, Sort, Tuple};

/// All subsets of `space`, built by recursion on its length.
fn powerset(space: &[Tuple]) -> Vec<Vec<Tuple>> {
    match space.split_first() {
        None => vec![vec![]],
        Some((t, rest)) => {
            let without = powerset(rest);
            let mut with: Vec<Vec<Tuple>> = without
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    s.insert(0, t.clone());
                    s
                })
                .collect();
            with.extend(without);
            with
        }
    }
}

fn check_general_ops(sig: &[Sort], pred: impl Fn(&FinRel) -> bool) {
    let space = enumerate_tuples(sig, 1 << 20).unwrap();
    let mut union = Vec::new();
    let mut inter: Option<Vec<Tuple>> = None;
    for s in powerset(&space) {
        let r = FinRel::new(sig.to_vec(), s.clone()).unwrap();
        if pred(&r) {
            union.extend(s.iter().cloned());
            inter = Some(match inter {
                None => s,
                Some(acc) => acc.into_iter().filter(|t| s.contains(t)).collect(),
            });
        }
    }
    let want_union = FinRel::new(sig.to_vec(), union).unwrap();
    let want_inter = FinRel::new(sig.to_vec(), inter.unwrap_or(space)).unwrap();
    let lim = Limits::default();
    assert_eq!(general_union(&pred, sig, &lim).unwrap(), want_union);
    assert_eq!(general_intersect(&pred, sig, &lim).unwrap(), want_inter);
}

#[test]
fn general_union_contains_zero() {
    let s = Sort::ints("A", 0, 1).unwrap();
    let sig = vec![s];
    let zero = Tuple(vec![relsem::universe::Atom::Int(0)]);
    let got = general_union(|r| r.member(&zero).unwrap(), &sig, &Limits::default()).unwrap();
    assert_eq!(got.len(), 2);
}

#[test]
fn general_ops_match_powerset_oracle() {
    let a = Sort::ints("A", 0, 1).unwrap();
    let b = Sort::ints("B", 0, 2).unwrap();
    check_general_ops(&[a.clone(), b.clone()], |r| r.len() % 2 == 0);
    check_general_ops(&[a.clone(), b.clone()], |r| r.len() >= 5);
    check_general_ops(&[a.clone(), b], |_| false);
    check_general_ops(&[], |r| r.is_empty());
    let first = Tuple(vec![a.carrier()[0].clone(), a.carrier()[1].clone()]);
    check_general_ops(&[a.clone(), a], move |r| r.member(&first).unwrap());
}

proptest! {
    #[test]
    fn inclusion_is_union_absorption(seed in any::<u64>()) {
        let cfg = GenConfig::default();
        let mut rng = case_rng(seed, 0, 0);
        let a = gen::sort(&mut rng, "A", 4);
        let b = gen::sort(&mut rng, "B", 4);
        let sig = vec![a, b];
        let x = gen::rel(&mut rng, &sig, &cfg);
        let y = gen::rel(&mut rng, &sig, &cfg);
        prop_assert_eq!(x.included(&y).unwrap(), x.union(&y).unwrap() == y);
        prop_assert_eq!(x.included(&y).unwrap(), x.intersect(&y).unwrap() == x);
        prop_assert!(x.intersect(&y).unwrap().included(&x.union(&y).unwrap()).unwrap());
    }

    #[test]
    fn union_with_empty_and_full(seed in any::<u64>()) {
        let cfg = GenConfig::default();
        let mut rng = case_rng(seed, 1, 0);
        let a = gen::sort(&mut rng, "A", 4);
        let sig = vec![a.clone(), a];
        let x = gen::rel(&mut rng, &sig, &cfg);
        let full = FinRel::full(sig.clone(), &Limits::default()).unwrap();
        prop_assert_eq!(x.union(&FinRel::empty(sig.clone())).unwrap(), x.clone());
        prop_assert_eq!(x.intersect(&full).unwrap(), x.clone());
        prop_assert!(x.len() as u128 <= x.tuple_space());
    }
}
