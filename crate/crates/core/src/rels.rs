//! Relation composition in its five operand typings, the identity relations,
//! event traces, and lasso-encoded infinite traces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::finrel::{FinRel, SetAlgebra};
use crate::universe::{render_sig, Atom, Sort, Tuple};

/// A finite event trace.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Trace(pub Vec<Atom>);

impl Trace {
    pub fn nil() -> Trace {
        Trace(Vec::new())
    }

    pub fn labels(ls: &[&str]) -> Trace {
        Trace(ls.iter().map(|l| Atom::label(l)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Trace) -> Trace {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Trace(v)
    }

    pub fn over(&self, events: &Sort) -> bool {
        self.0.iter().all(|e| events.contains(e))
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

/// The ultimately periodic word `prefix · cycle^ω`, always in canonical form:
/// the cycle is primitive and the prefix is fully rolled into it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lasso {
    prefix: Trace,
    cycle: Trace,
}

/// Canonical form of `prefix · cycle^ω`. Two lassos denote the same ω-word
/// iff their canonical forms are equal.
pub fn canonicalize(prefix: &[Atom], cycle: &[Atom]) -> Result<Lasso> {
    if cycle.is_empty() {
        return Err(Error::EmptyCycle);
    }
    let n = cycle.len();
    let root = (1..=n)
        .find(|&d| n % d == 0 && (d..n).all(|i| cycle[i] == cycle[i - d]))
        .unwrap_or(n);
    let mut cycle: Vec<Atom> = cycle[..root].to_vec();
    let mut prefix = prefix.to_vec();
    while prefix.last().is_some_and(|p| Some(p) == cycle.last()) {
        prefix.pop();
        cycle.rotate_right(1);
    }
    Ok(Lasso {
        prefix: Trace(prefix),
        cycle: Trace(cycle),
    })
}

impl Lasso {
    pub fn new(prefix: Trace, cycle: Trace) -> Result<Lasso> {
        canonicalize(&prefix.0, &cycle.0)
    }

    pub fn prefix(&self) -> &Trace {
        &self.prefix
    }

    pub fn cycle(&self) -> &Trace {
        &self.cycle
    }

    /// The `i`-th letter of the ω-word.
    pub fn letter(&self, i: usize) -> &Atom {
        let p = self.prefix.len();
        if i < p {
            &self.prefix.0[i]
        } else {
            &self.cycle.0[(i - p) % self.cycle.len()]
        }
    }

    /// `l +++ self`: the finite trace prepended to the stream.
    pub fn prepend(&self, l: &Trace) -> Lasso {
        canonicalize(&l.concat(&self.prefix).0, &self.cycle.0).expect("cycle is nonempty")
    }

    pub fn over(&self, events: &Sort) -> bool {
        self.prefix.over(events) && self.cycle.over(events)
    }
}

impl fmt::Display for Lasso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.prefix)?;
        for (i, e) in self.cycle.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")^w")
    }
}

fn endpoint_error(what: &str, a: &Atom, sort: &Sort) -> Error {
    Error::IllSorted {
        tuple: format!("{what} {a}"),
        sig: sort.name().to_string(),
    }
}

fn event_error(t: &dyn fmt::Display, events: &Sort) -> Error {
    Error::IllSorted {
        tuple: t.to_string(),
        sig: format!("list {}", events.name()),
    }
}

/// Relation `A × E* × B`: triples of source, trace, destination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRel {
    src: Sort,
    events: Sort,
    dst: Sort,
    triples: BTreeSet<(Atom, Trace, Atom)>,
}

impl TraceRel {
    pub fn new(
        src: Sort,
        events: Sort,
        dst: Sort,
        triples: impl IntoIterator<Item = (Atom, Trace, Atom)>,
    ) -> Result<TraceRel> {
        let triples: BTreeSet<_> = triples.into_iter().collect();
        for (a, l, b) in &triples {
            if !src.contains(a) {
                return Err(endpoint_error("source", a, &src));
            }
            if !dst.contains(b) {
                return Err(endpoint_error("destination", b, &dst));
            }
            if !l.over(&events) {
                return Err(event_error(l, &events));
            }
        }
        Ok(TraceRel {
            src,
            events,
            dst,
            triples,
        })
    }

    pub fn empty(src: Sort, events: Sort, dst: Sort) -> TraceRel {
        TraceRel {
            src,
            events,
            dst,
            triples: BTreeSet::new(),
        }
    }

    pub(crate) fn from_parts(
        src: Sort,
        events: Sort,
        dst: Sort,
        triples: BTreeSet<(Atom, Trace, Atom)>,
    ) -> TraceRel {
        TraceRel {
            src,
            events,
            dst,
            triples,
        }
    }

    pub fn src(&self) -> &Sort {
        &self.src
    }

    pub fn dst(&self) -> &Sort {
        &self.dst
    }

    pub fn events(&self) -> &Sort {
        &self.events
    }

    pub fn triples(&self) -> &BTreeSet<(Atom, Trace, Atom)> {
        &self.triples
    }

    pub fn max_trace_len(&self) -> usize {
        self.triples.iter().map(|(_, l, _)| l.len()).max().unwrap_or(0)
    }

    /// Keeps only triples whose trace has length at most `k`.
    pub fn truncate(&self, k: usize) -> TraceRel {
        self.with_elems(
            self.triples
                .iter()
                .filter(|(_, l, _)| l.len() <= k)
                .cloned()
                .collect(),
        )
    }
}

impl SetAlgebra for TraceRel {
    type Elem = (Atom, Trace, Atom);

    fn shape_eq(&self, other: &Self) -> bool {
        self.src == other.src && self.events == other.events && self.dst == other.dst
    }

    fn describe_shape(&self) -> String {
        format!("{}*list {}*{}", self.src, self.events, self.dst)
    }

    fn elems(&self) -> &BTreeSet<Self::Elem> {
        &self.triples
    }

    fn with_elems(&self, elems: BTreeSet<Self::Elem>) -> Self {
        TraceRel::from_parts(self.src.clone(), self.events.clone(), self.dst.clone(), elems)
    }
}

impl fmt::Display for TraceRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, l, b) in &self.triples {
            writeln!(f, "({a},{l},{b})")?;
        }
        Ok(())
    }
}

/// Set `B × E*` of source/trace pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSet {
    src: Sort,
    events: Sort,
    pairs: BTreeSet<(Atom, Trace)>,
}

impl TraceSet {
    pub fn new(
        src: Sort,
        events: Sort,
        pairs: impl IntoIterator<Item = (Atom, Trace)>,
    ) -> Result<TraceSet> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for (a, l) in &pairs {
            if !src.contains(a) {
                return Err(endpoint_error("source", a, &src));
            }
            if !l.over(&events) {
                return Err(event_error(l, &events));
            }
        }
        Ok(TraceSet { src, events, pairs })
    }

    pub fn empty(src: Sort, events: Sort) -> TraceSet {
        TraceSet {
            src,
            events,
            pairs: BTreeSet::new(),
        }
    }

    pub fn src(&self) -> &Sort {
        &self.src
    }

    pub fn events(&self) -> &Sort {
        &self.events
    }

    pub fn pairs(&self) -> &BTreeSet<(Atom, Trace)> {
        &self.pairs
    }

    pub fn max_trace_len(&self) -> usize {
        self.pairs.iter().map(|(_, l)| l.len()).max().unwrap_or(0)
    }
}

impl SetAlgebra for TraceSet {
    type Elem = (Atom, Trace);

    fn shape_eq(&self, other: &Self) -> bool {
        self.src == other.src && self.events == other.events
    }

    fn describe_shape(&self) -> String {
        format!("{}*list {}", self.src, self.events)
    }

    fn elems(&self) -> &BTreeSet<Self::Elem> {
        &self.pairs
    }

    fn with_elems(&self, elems: BTreeSet<Self::Elem>) -> Self {
        TraceSet {
            src: self.src.clone(),
            events: self.events.clone(),
            pairs: elems,
        }
    }
}

impl fmt::Display for TraceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, l) in &self.pairs {
            writeln!(f, "({a},{l})")?;
        }
        Ok(())
    }
}

/// Set `B × E^ω` of source/ultimately-periodic-stream pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSet {
    src: Sort,
    events: Sort,
    pairs: BTreeSet<(Atom, Lasso)>,
}

impl OmegaSet {
    pub fn new(
        src: Sort,
        events: Sort,
        pairs: impl IntoIterator<Item = (Atom, Lasso)>,
    ) -> Result<OmegaSet> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for (a, w) in &pairs {
            if !src.contains(a) {
                return Err(endpoint_error("source", a, &src));
            }
            if !w.over(&events) {
                return Err(event_error(w, &events));
            }
        }
        Ok(OmegaSet { src, events, pairs })
    }

    pub fn empty(src: Sort, events: Sort) -> OmegaSet {
        OmegaSet {
            src,
            events,
            pairs: BTreeSet::new(),
        }
    }

    pub fn src(&self) -> &Sort {
        &self.src
    }

    pub fn pairs(&self) -> &BTreeSet<(Atom, Lasso)> {
        &self.pairs
    }
}

impl SetAlgebra for OmegaSet {
    type Elem = (Atom, Lasso);

    fn shape_eq(&self, other: &Self) -> bool {
        self.src == other.src && self.events == other.events
    }

    fn describe_shape(&self) -> String {
        format!("{}*Stream {}", self.src, self.events)
    }

    fn elems(&self) -> &BTreeSet<Self::Elem> {
        &self.pairs
    }

    fn with_elems(&self, elems: BTreeSet<Self::Elem>) -> Self {
        OmegaSet {
            src: self.src.clone(),
            events: self.events.clone(),
            pairs: elems,
        }
    }
}

impl fmt::Display for OmegaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, w) in &self.pairs {
            writeln!(f, "({a},{w})")?;
        }
        Ok(())
    }
}

fn check_middle(left: &Sort, right: &Sort) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::SigMismatch {
            left: left.name().to_string(),
            right: right.name().to_string(),
        })
    }
}

fn check_events(left: &Sort, right: &Sort) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::SigMismatch {
            left: format!("list {left}"),
            right: format!("list {right}"),
        })
    }
}

fn check_arity(r: &FinRel, n: usize) -> Result<()> {
    if r.arity() == n {
        Ok(())
    } else {
        Err(Error::IllFormed(format!(
            "expected a relation of arity {n}, got {}",
            render_sig(r.sig())
        )))
    }
}

/// `{(a,c) | ∃b. (a,b) ∈ r ∧ (b,c) ∈ s}`.
pub fn compose_rr(r: &FinRel, s: &FinRel) -> Result<FinRel> {
    check_arity(r, 2)?;
    check_arity(s, 2)?;
    check_middle(&r.sig()[1], &s.sig()[0])?;
    let mut succ: BTreeMap<&Atom, Vec<&Atom>> = BTreeMap::new();
    for (b, c) in s.pairs() {
        succ.entry(b).or_default().push(c);
    }
    let mut out = BTreeSet::new();
    for (a, b) in r.pairs() {
        for &c in succ.get(b).into_iter().flatten() {
            out.insert(Tuple(vec![a.clone(), c.clone()]));
        }
    }
    Ok(FinRel::from_parts(
        vec![r.sig()[0].clone(), s.sig()[1].clone()],
        out,
    ))
}

/// `{a | ∃b. (a,b) ∈ r ∧ b ∈ s}`.
pub fn compose_rs(r: &FinRel, s: &FinRel) -> Result<FinRel> {
    check_arity(r, 2)?;
    check_arity(s, 1)?;
    check_middle(&r.sig()[1], &s.sig()[0])?;
    let out = r
        .pairs()
        .filter(|(_, b)| s.tuples().contains(&Tuple(vec![(*b).clone()])))
        .map(|(a, _)| Tuple(vec![a.clone()]))
        .collect();
    Ok(FinRel::from_parts(vec![r.sig()[0].clone()], out))
}

fn trace_successors(s: &TraceRel) -> BTreeMap<&Atom, Vec<(&Trace, &Atom)>> {
    let mut succ: BTreeMap<&Atom, Vec<(&Trace, &Atom)>> = BTreeMap::new();
    for (b, l, c) in &s.triples {
        succ.entry(b).or_default().push((l, c));
    }
    succ
}

/// `{(a, l1++l2, c) | ∃b. (a,l1,b) ∈ r ∧ (b,l2,c) ∈ s}`.
pub fn compose_tt(r: &TraceRel, s: &TraceRel) -> Result<TraceRel> {
    check_middle(&r.dst, &s.src)?;
    check_events(&r.events, &s.events)?;
    let succ = trace_successors(s);
    let mut out = BTreeSet::new();
    for (a, l1, b) in &r.triples {
        for &(l2, c) in succ.get(b).into_iter().flatten() {
            out.insert((a.clone(), l1.concat(l2), c.clone()));
        }
    }
    Ok(TraceRel::from_parts(
        r.src.clone(),
        r.events.clone(),
        s.dst.clone(),
        out,
    ))
}

/// `{(a, l1++l2) | ∃b. (a,l1,b) ∈ r ∧ (b,l2) ∈ s}`.
pub fn compose_ts(r: &TraceRel, s: &TraceSet) -> Result<TraceSet> {
    check_middle(&r.dst, &s.src)?;
    check_events(&r.events, &s.events)?;
    let mut succ: BTreeMap<&Atom, Vec<&Trace>> = BTreeMap::new();
    for (b, l) in &s.pairs {
        succ.entry(b).or_default().push(l);
    }
    let mut out = BTreeSet::new();
    for (a, l1, b) in &r.triples {
        for &l2 in succ.get(b).into_iter().flatten() {
            out.insert((a.clone(), l1.concat(l2)));
        }
    }
    Ok(TraceSet {
        src: r.src.clone(),
        events: r.events.clone(),
        pairs: out,
    })
}

/// `{(a, l1 +++ w) | ∃b. (a,l1,b) ∈ r ∧ (b,w) ∈ s}`, canonicalized.
pub fn compose_tw(r: &TraceRel, s: &OmegaSet) -> Result<OmegaSet> {
    check_middle(&r.dst, &s.src)?;
    check_events(&r.events, &s.events)?;
    let mut succ: BTreeMap<&Atom, Vec<&Lasso>> = BTreeMap::new();
    for (b, w) in &s.pairs {
        succ.entry(b).or_default().push(w);
    }
    let mut out = BTreeSet::new();
    for (a, l1, b) in &r.triples {
        for &w in succ.get(b).into_iter().flatten() {
            out.insert((a.clone(), w.prepend(l1)));
        }
    }
    Ok(OmegaSet {
        src: r.src.clone(),
        events: r.events.clone(),
        pairs: out,
    })
}

/// The diagonal of `sort`.
pub fn id_r(sort: &Sort) -> FinRel {
    let tuples = sort
        .carrier()
        .iter()
        .map(|a| Tuple(vec![a.clone(), a.clone()]))
        .collect();
    FinRel::from_parts(vec![sort.clone(), sort.clone()], tuples)
}

/// The diagonal of `sort` with empty traces.
pub fn id_t(sort: &Sort, events: &Sort) -> TraceRel {
    let triples = sort
        .carrier()
        .iter()
        .map(|a| (a.clone(), Trace::nil(), a.clone()))
        .collect();
    TraceRel::from_parts(sort.clone(), events.clone(), sort.clone(), triples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n3() -> Sort {
        Sort::ints("N", 0, 2).unwrap()
    }

    fn ev() -> Sort {
        Sort::labels("E", &["a", "b"]).unwrap()
    }

    fn bin(pairs: &[(i64, i64)]) -> FinRel {
        FinRel::new(
            vec![n3(), n3()],
            pairs.iter().map(|&(a, b)| Tuple::from([a, b])),
        )
        .unwrap()
    }

    fn tr(triples: &[(i64, &[&str], i64)]) -> TraceRel {
        TraceRel::new(
            n3(),
            ev(),
            n3(),
            triples
                .iter()
                .map(|&(a, l, b)| (Atom::Int(a), Trace::labels(l), Atom::Int(b))),
        )
        .unwrap()
    }

    fn ts(pairs: &[(i64, &[&str])]) -> TraceSet {
        TraceSet::new(
            n3(),
            ev(),
            pairs.iter().map(|&(a, l)| (Atom::Int(a), Trace::labels(l))),
        )
        .unwrap()
    }

    fn lasso(p: &[&str], c: &[&str]) -> Lasso {
        Lasso::new(Trace::labels(p), Trace::labels(c)).unwrap()
    }

    #[test]
    fn compose_rr_examples() {
        let r = bin(&[(0, 1), (1, 2)]);
        let s = bin(&[(1, 2), (2, 0)]);
        assert_eq!(compose_rr(&r, &s).unwrap(), bin(&[(0, 2), (1, 0)]));
        assert_eq!(compose_rr(&r, &id_r(&n3())).unwrap(), r);
        assert!(compose_rr(&bin(&[]), &s).unwrap().is_empty());
        let other = FinRel::empty(vec![Sort::ints("M", 0, 2).unwrap(), n3()]);
        assert!(matches!(compose_rr(&r, &other), Err(Error::SigMismatch { .. })));
    }

    #[test]
    fn compose_rs_examples() {
        let u = |xs: &[i64]| FinRel::new(vec![n3()], xs.iter().map(|&x| Tuple::from([x]))).unwrap();
        let r = bin(&[(0, 1)]);
        assert_eq!(compose_rs(&r, &u(&[1])).unwrap(), u(&[0]));
        assert!(compose_rs(&r, &u(&[])).unwrap().is_empty());
        let r2 = bin(&[(0, 1), (2, 2), (2, 0)]);
        assert_eq!(compose_rs(&r2, &u(&[0, 1, 2])).unwrap(), u(&[0, 2]));
        assert!(compose_rs(&r, &r).is_err());
    }

    #[test]
    fn compose_tt_examples() {
        let r = tr(&[(0, &["a"], 1)]);
        let s = tr(&[(1, &["b"], 2)]);
        assert_eq!(compose_tt(&r, &s).unwrap(), tr(&[(0, &["a", "b"], 2)]));
        assert_eq!(compose_tt(&r, &id_t(&n3(), &ev())).unwrap(), r);
        let r = tr(&[(0, &[], 1), (0, &["a"], 1)]);
        let s = tr(&[(1, &[], 0)]);
        assert_eq!(compose_tt(&r, &s).unwrap(), tr(&[(0, &[], 0), (0, &["a"], 0)]));
    }

    #[test]
    fn compose_ts_examples() {
        let r = tr(&[(0, &["a"], 1)]);
        assert_eq!(compose_ts(&r, &ts(&[(1, &["b"])])).unwrap(), ts(&[(0, &["a", "b"])]));
        assert!(compose_ts(&r, &ts(&[])).unwrap().is_empty());
        assert_eq!(
            compose_ts(&tr(&[(0, &[], 1)]), &ts(&[(1, &[])])).unwrap(),
            ts(&[(0, &[])])
        );
    }

    #[test]
    fn compose_tw_examples() {
        let om = |pairs: Vec<(i64, Lasso)>| {
            OmegaSet::new(n3(), ev(), pairs.into_iter().map(|(a, w)| (Atom::Int(a), w))).unwrap()
        };
        let s = om(vec![(1, lasso(&[], &["b"]))]);
        assert_eq!(
            compose_tw(&tr(&[(0, &["a"], 1)]), &s).unwrap(),
            om(vec![(0, lasso(&["a"], &["b"]))])
        );
        let got = compose_tw(&tr(&[(0, &["b"], 1)]), &s).unwrap();
        assert_eq!(got, om(vec![(0, lasso(&[], &["b"]))]));
        assert_eq!(got.to_string(), "(0,[](b)^w)\n");
        let s2 = om(vec![(0, lasso(&["a"], &["a", "b"])), (2, lasso(&[], &["b"]))]);
        assert_eq!(compose_tw(&id_t(&n3(), &ev()), &s2).unwrap(), s2);
    }

    #[test]
    fn identities() {
        assert_eq!(id_r(&Sort::ints("B", 0, 1).unwrap()).to_string(), "(0,0)\n(1,1)\n");
        let zero = Sort::ints("Z", 0, 0).unwrap();
        assert_eq!(id_t(&zero, &ev()).to_string(), "(0,[],0)\n");
        let i = id_r(&n3());
        assert_eq!(compose_rr(&i, &i).unwrap(), i);
    }

    #[test]
    fn canonicalize_examples() {
        let c = canonicalize(&Trace::labels(&["a", "b"]).0, &Trace::labels(&["b"]).0).unwrap();
        assert_eq!(c, lasso(&["a"], &["b"]));
        assert_eq!(c.to_string(), "[a](b)^w");
        let c = canonicalize(&[], &Trace::labels(&["a", "b", "a", "b"]).0).unwrap();
        assert_eq!(c.to_string(), "[](a,b)^w");
        assert_eq!(lasso(&[], &["a"]).to_string(), "[](a)^w");
        assert_eq!(lasso(&["b", "a"], &["b", "a"]).to_string(), "[](b,a)^w");
        assert!(matches!(canonicalize(&[], &[]), Err(Error::EmptyCycle)));
    }

    #[test]
    fn lifted_set_ops() {
        let u = tr(&[(0, &["a"], 1)]).union(&tr(&[(0, &["b"], 1)])).unwrap();
        assert_eq!(u.len(), 2);
        let om = |p: &[&str], c: &[&str]| OmegaSet::new(n3(), ev(), [(Atom::Int(0), lasso(p, c))]).unwrap();
        assert!(om(&["a", "b"], &["b"]).equiv(&om(&["a"], &["b"])).unwrap());
        let x = ts(&[(0, &["a"])]);
        let y = ts(&[(1, &[])]);
        assert!(x.included(&x.union(&y).unwrap()).unwrap());
        let other = TraceSet::empty(Sort::ints("M", 0, 2).unwrap(), ev());
        assert!(x.union(&other).is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(TraceRel::new(n3(), ev(), n3(), [(Atom::Int(5), Trace::nil(), Atom::Int(0))]).is_err());
        assert!(TraceRel::new(n3(), ev(), n3(), [(Atom::Int(0), Trace::labels(&["z"]), Atom::Int(0))]).is_err());
        assert!(TraceSet::new(n3(), ev(), [(Atom::Int(0), Trace::labels(&["z"]))]).is_err());
    }
}
