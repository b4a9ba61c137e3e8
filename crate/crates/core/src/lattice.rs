//! The powerset lattice of a finite tuple space: Kleene iteration for least
//! and greatest fixed points, and sample-based checks of the lattice axioms.

use std::fmt;

use crate::error::{Error, Result};
use crate::finrel::{FinRel, SetAlgebra};
use crate::universe::{enumerate_tuples, Limits, Sort};

type ApplyFn<'a> = dyn Fn(&FinRel) -> Result<FinRel> + Send + Sync + 'a;

/// A map on relations of one signature, assumed monotone w.r.t. inclusion.
pub struct MonotoneMap<'a> {
    sig: Vec<Sort>,
    apply: Box<ApplyFn<'a>>,
}

impl<'a> MonotoneMap<'a> {
    pub fn new(
        sig: Vec<Sort>,
        apply: impl Fn(&FinRel) -> Result<FinRel> + Send + Sync + 'a,
    ) -> Self {
        MonotoneMap {
            sig,
            apply: Box::new(apply),
        }
    }

    pub fn sig(&self) -> &[Sort] {
        &self.sig
    }

    pub fn apply(&self, x: &FinRel) -> Result<FinRel> {
        let y = (self.apply)(x)?;
        if y.sig() != self.sig {
            return Err(Error::SigMismatch {
                left: crate::universe::render_sig(&self.sig),
                right: crate::universe::render_sig(y.sig()),
            });
        }
        Ok(y)
    }

    fn height(&self) -> usize {
        self.sig.iter().map(Sort::len).product()
    }
}

impl fmt::Debug for MonotoneMap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneMap").field("sig", &self.sig).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixpoint<T> {
    pub value: T,
    /// Number of applications of the map.
    pub iterations: usize,
    pub reached: bool,
}

/// Iterates `f` from `start` until two consecutive iterates agree or
/// `max_iter` applications have been made.
pub fn kleene<T: SetAlgebra + PartialEq>(
    start: T,
    max_iter: usize,
    mut f: impl FnMut(&T) -> Result<T>,
) -> Result<Fixpoint<T>> {
    let mut x = start;
    for n in 1..=max_iter {
        let next = f(&x)?;
        if next == x {
            return Ok(Fixpoint {
                value: x,
                iterations: n,
                reached: true,
            });
        }
        x = next;
    }
    Ok(Fixpoint {
        value: x,
        iterations: max_iter,
        reached: false,
    })
}

/// Least fixed point by iteration from `∅`.
pub fn lfp(f: &MonotoneMap<'_>) -> Result<Fixpoint<FinRel>> {
    let limit = f.height() + 1;
    let fp = kleene(FinRel::empty(f.sig.clone()), limit, |x| f.apply(x))?;
    if !fp.reached {
        return Err(Error::NonMonotone { limit });
    }
    Ok(fp)
}

/// Greatest fixed point by iteration from `full`.
pub fn gfp(f: &MonotoneMap<'_>, limits: &Limits) -> Result<Fixpoint<FinRel>> {
    let limit = f.height() + 1;
    let top = FinRel::full(f.sig.clone(), limits)?;
    let fp = kleene(top, limit, |x| f.apply(x))?;
    if !fp.reached {
        return Err(Error::NonMonotone { limit });
    }
    Ok(fp)
}

/// Outcome of a sampled law check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

fn short(x: &FinRel) -> String {
    let items: Vec<String> = x.tuples().iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(","))
}

/// Extensional equality: agreement of membership at every tuple of the space.
fn pointwise_equal(x: &FinRel, y: &FinRel, limits: &Limits) -> Result<bool> {
    for t in enumerate_tuples(x.sig(), limits.tuple_space)? {
        if x.member(&t)? != y.member(&t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reflexivity, antisymmetry and transitivity of `⊆` over all sample triples.
pub fn check_partial_order(sig: &[Sort], samples: &[FinRel], limits: &Limits) -> Result<Report> {
    let mut rep = Report::default();
    for x in samples {
        if x.sig() != sig {
            return Err(Error::SigMismatch {
                left: crate::universe::render_sig(sig),
                right: x.describe_shape(),
            });
        }
    }
    for x in samples {
        rep.check(x.included(x)?, || format!("not reflexive at {}", short(x)));
        for y in samples {
            if x.included(y)? && y.included(x)? {
                let eq = pointwise_equal(x, y, limits)?;
                rep.check(eq, || format!("antisymmetry fails: {} vs {}", short(x), short(y)));
            }
            if !x.included(y)? {
                continue;
            }
            for z in samples {
                if y.included(z)? {
                    rep.check(x.included(z)?, || {
                        format!("transitivity fails: {} {} {}", short(x), short(y), short(z))
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// Checks that the union of `family` is an upper bound of it and lies below
/// every sampled upper bound.
pub fn check_lub(family: &[FinRel], samples: &[FinRel]) -> Result<Report> {
    let mut rep = Report::default();
    let Some(first) = family.first() else {
        return Ok(rep);
    };
    let mut lub = first.empty_like();
    for m in family {
        lub = lub.union(m)?;
    }
    for m in family {
        rep.check(m.included(&lub)?, || format!("{} not below lub", short(m)));
    }
    for u in samples {
        let mut upper = true;
        for m in family {
            upper &= m.included(u)?;
        }
        if upper {
            rep.check(lub.included(u)?, || {
                format!("lub {} not below upper bound {}", short(&lub), short(u))
            });
        }
    }
    Ok(rep)
}

/// For every sampled pair `x ⊆ y`, checks `f(x) ⊆ f(y)`.
pub fn check_monotone(f: &MonotoneMap<'_>, samples: &[FinRel]) -> Result<Report> {
    let mut rep = Report::default();
    let images = samples.iter().map(|x| f.apply(x)).collect::<Result<Vec<_>>>()?;
    for (i, x) in samples.iter().enumerate() {
        for (j, y) in samples.iter().enumerate() {
            if x.included(y)? {
                rep.check(images[i].included(&images[j])?, || {
                    format!("not monotone: {} ⊆ {} but images are not", short(x), short(y))
                });
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rels::compose_rr;
    use crate::universe::Tuple;
    use std::collections::{BTreeSet, VecDeque};

    fn n(k: i64) -> Sort {
        Sort::ints("N", 0, k - 1).unwrap()
    }

    fn bin(s: &Sort, pairs: &[(i64, i64)]) -> FinRel {
        FinRel::new(
            vec![s.clone(), s.clone()],
            pairs.iter().map(|&(a, b)| Tuple::from([a, b])),
        )
        .unwrap()
    }

    fn unary(s: &Sort, xs: &[i64]) -> FinRel {
        FinRel::new(vec![s.clone()], xs.iter().map(|&x| Tuple::from([x]))).unwrap()
    }

    #[test]
    fn lfp_of_constant() {
        let s = n(3);
        let c = unary(&s, &[0, 2]);
        let f = MonotoneMap::new(vec![s.clone()], |_| Ok(c.clone()));
        assert_eq!(lfp(&f).unwrap().value, c);
        assert_eq!(gfp(&f, &Limits::default()).unwrap().value, c);
    }

    #[test]
    fn lfp_adding_one_tuple() {
        let s = n(3);
        let t = unary(&s, &[1]);
        let f = MonotoneMap::new(vec![s.clone()], |x| x.union(&t));
        let fp = lfp(&f).unwrap();
        assert_eq!(fp.value, t);
        assert_eq!(fp.iterations, 2);
    }

    #[test]
    fn gfp_of_intersection() {
        let s = n(4);
        let d = unary(&s, &[1, 3]);
        let f = MonotoneMap::new(vec![s.clone()], |x| x.intersect(&d));
        let fp = gfp(&f, &Limits::default()).unwrap();
        assert_eq!(fp.value, d);
        assert_eq!(fp.iterations, 2);
    }

    #[test]
    fn gfp_of_acyclic_preimage_is_empty() {
        let s = n(4);
        let step = bin(&s, &[(0, 1), (1, 2), (2, 3), (0, 2)]);
        let f = MonotoneMap::new(vec![s.clone()], |x| crate::rels::compose_rs(&step, x));
        assert!(gfp(&f, &Limits::default()).unwrap().value.is_empty());
    }

    fn bfs_closure(step: &FinRel, base: &FinRel) -> BTreeSet<Tuple> {
        // (a,c) reachable iff a -step*-> b and (b,c) in base
        let mut out = BTreeSet::new();
        let states: Vec<i64> = (0..5).collect();
        for &a in &states {
            let mut seen = BTreeSet::from([a]);
            let mut q = VecDeque::from([a]);
            while let Some(b) = q.pop_front() {
                for t in base.tuples() {
                    if t.0[0].as_int() == Some(b) {
                        out.insert(Tuple(vec![a.into(), t.0[1].clone()]));
                    }
                }
                for t in step.tuples() {
                    if t.0[0].as_int() == Some(b) {
                        let c = t.0[1].as_int().unwrap();
                        if seen.insert(c) {
                            q.push_back(c);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn lfp_matches_graph_search() {
        let s = n(5);
        let step = bin(&s, &[(0, 1), (1, 2), (2, 0), (3, 4)]);
        let base = bin(&s, &[(2, 2), (4, 3)]);
        let f = MonotoneMap::new(vec![s.clone(), s.clone()], |x| {
            compose_rr(&step, x)?.union(&base)
        });
        let fp = lfp(&f).unwrap();
        assert_eq!(fp.value.tuples(), &bfs_closure(&step, &base));
        assert!(fp.iterations <= 26);
    }

    #[test]
    fn non_monotone_map_is_detected() {
        let s = n(2);
        let full = FinRel::full(vec![s.clone()], &Limits::default()).unwrap();
        let fl = full.clone();
        let f = MonotoneMap::new(vec![s.clone()], move |x| {
            Ok(fl.with_elems(fl.tuples().difference(x.tuples()).cloned().collect()))
        });
        assert!(matches!(lfp(&f), Err(Error::NonMonotone { .. })));
        let samples = vec![FinRel::empty(vec![s.clone()]), full];
        let rep = check_monotone(&f, &samples).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn monotone_checks_pass() {
        let s = n(3);
        let r = bin(&s, &[(0, 1), (1, 1), (2, 0)]);
        let samples = vec![
            bin(&s, &[]),
            bin(&s, &[(0, 0)]),
            bin(&s, &[(0, 0), (1, 2)]),
            bin(&s, &[(0, 0), (1, 2), (2, 2)]),
        ];
        let id = MonotoneMap::new(vec![s.clone(), s.clone()], |x| Ok(x.clone()));
        assert!(check_monotone(&id, &samples).unwrap().passed());
        let comp = MonotoneMap::new(vec![s.clone(), s.clone()], |x| compose_rr(&r, x));
        let rep = check_monotone(&comp, &samples).unwrap();
        assert!(rep.passed() && rep.checked >= 10);
    }

    #[test]
    fn partial_order_and_lub() {
        let s = n(4);
        let samples = vec![
            unary(&s, &[]),
            unary(&s, &[1]),
            unary(&s, &[1, 2]),
            unary(&s, &[2, 1]),
            unary(&s, &[1, 2, 3]),
        ];
        let rep = check_partial_order(&[s.clone()], &samples, &Limits::default()).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        let fam = vec![unary(&s, &[1]), unary(&s, &[2])];
        let rep = check_lub(&fam, &[unary(&s, &[1, 2, 3]), unary(&s, &[3])]).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.checked, 3);
    }
}
