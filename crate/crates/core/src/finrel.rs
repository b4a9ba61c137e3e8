//! Arity-generic finite relations and the set operators shared by every
//! set-like value in the crate.
//!
//! An n-ary relation is a set of n-tuples over a signature. Arity 0 is the
//! propositional base case: `{}` is false and `{()}` is true.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::universe::{enumerate_tuples, render_sig, Atom, Limits, Sort, Tuple};

/// Operators common to all set-like values: finite sets of elements with a
/// shape (signature) that must agree for binary operations.
pub trait SetAlgebra: Sized + Clone + fmt::Debug {
    type Elem: Ord + Clone + fmt::Debug;

    fn shape_eq(&self, other: &Self) -> bool;
    fn describe_shape(&self) -> String;
    fn elems(&self) -> &BTreeSet<Self::Elem>;
    /// A value with the same shape and the given elements (assumed well-formed).
    fn with_elems(&self, elems: BTreeSet<Self::Elem>) -> Self;

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.shape_eq(other) {
            Ok(())
        } else {
            Err(Error::SigMismatch {
                left: self.describe_shape(),
                right: other.describe_shape(),
            })
        }
    }

    fn empty_like(&self) -> Self {
        self.with_elems(BTreeSet::new())
    }

    fn union(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.elems().clone();
        out.extend(other.elems().iter().cloned());
        Ok(self.with_elems(out))
    }

    fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let out = self.elems().intersection(other.elems()).cloned().collect();
        Ok(self.with_elems(out))
    }

    fn included(&self, other: &Self) -> Result<bool> {
        self.check_shape(other)?;
        Ok(self.elems().is_subset(other.elems()))
    }

    fn equiv(&self, other: &Self) -> Result<bool> {
        self.check_shape(other)?;
        Ok(self.elems() == other.elems())
    }

    fn len(&self) -> usize {
        self.elems().len()
    }

    fn is_empty(&self) -> bool {
        self.elems().is_empty()
    }
}

/// A finite relation over a signature of sorts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinRel {
    sig: Vec<Sort>,
    tuples: BTreeSet<Tuple>,
}

impl FinRel {
    pub fn new(sig: Vec<Sort>, tuples: impl IntoIterator<Item = Tuple>) -> Result<FinRel> {
        let tuples: BTreeSet<Tuple> = tuples.into_iter().collect();
        if let Some(bad) = tuples.iter().find(|t| !t.well_sorted(&sig)) {
            return Err(Error::IllSorted {
                tuple: bad.to_string(),
                sig: render_sig(&sig),
            });
        }
        Ok(FinRel { sig, tuples })
    }

    /// Builds without checking well-sortedness; callers guarantee it.
    pub(crate) fn from_parts(sig: Vec<Sort>, tuples: BTreeSet<Tuple>) -> FinRel {
        debug_assert!(tuples.iter().all(|t| t.well_sorted(&sig)));
        FinRel { sig, tuples }
    }

    pub fn empty(sig: Vec<Sort>) -> FinRel {
        FinRel {
            sig,
            tuples: BTreeSet::new(),
        }
    }

    pub fn full(sig: Vec<Sort>, limits: &Limits) -> Result<FinRel> {
        let tuples = enumerate_tuples(&sig, limits.tuple_space)?;
        Ok(FinRel {
            sig,
            tuples: tuples.into_iter().collect(),
        })
    }

    /// The propositional value `true` (`{()}`) or `false` (`{}`).
    pub fn prop(value: bool) -> FinRel {
        let tuples = if value {
            BTreeSet::from([Tuple::default()])
        } else {
            BTreeSet::new()
        };
        FinRel { sig: vec![], tuples }
    }

    pub fn sig(&self) -> &[Sort] {
        &self.sig
    }

    pub fn arity(&self) -> usize {
        self.sig.len()
    }

    pub fn tuples(&self) -> &BTreeSet<Tuple> {
        &self.tuples
    }

    pub fn member(&self, t: &Tuple) -> Result<bool> {
        if !t.well_sorted(&self.sig) {
            return Err(Error::IllSorted {
                tuple: t.to_string(),
                sig: render_sig(&self.sig),
            });
        }
        Ok(self.tuples.contains(t))
    }

    /// Number of tuples in the full relation over this signature.
    pub fn tuple_space(&self) -> u128 {
        self.sig.iter().map(|s| s.len() as u128).product()
    }

    /// Pairs of a binary relation, as references.
    pub fn pairs(&self) -> impl Iterator<Item = (&Atom, &Atom)> {
        self.tuples.iter().map(|t| (&t.0[0], &t.0[1]))
    }

    /// Renders with a custom atom printer, one tuple per line.
    pub fn render_with(&self, mut atom: impl FnMut(usize, &Atom) -> String) -> String {
        if self.sig.is_empty() {
            return if self.tuples.is_empty() { "false" } else { "true" }.to_string();
        }
        let mut out = String::new();
        for t in &self.tuples {
            let parts: Vec<String> = t.0.iter().enumerate().map(|(i, a)| atom(i, a)).collect();
            out.push('(');
            out.push_str(&parts.join(","));
            out.push_str(")\n");
        }
        out
    }
}

impl SetAlgebra for FinRel {
    type Elem = Tuple;

    fn shape_eq(&self, other: &Self) -> bool {
        self.sig == other.sig
    }

    fn describe_shape(&self) -> String {
        render_sig(&self.sig)
    }

    fn elems(&self) -> &BTreeSet<Tuple> {
        &self.tuples
    }

    fn with_elems(&self, elems: BTreeSet<Tuple>) -> Self {
        FinRel::from_parts(self.sig.clone(), elems)
    }
}

/// Dump format: canonical order, one tuple per line; arity 0 as `true`/`false`.
impl fmt::Display for FinRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(|_, a| a.to_string()))
    }
}

/// A total map from an index sort to set values of one shape.
#[derive(Clone, Debug)]
pub struct IndexedFamily<T> {
    index: Sort,
    members: Vec<T>,
}

impl<T: SetAlgebra> IndexedFamily<T> {
    /// `members` must cover every index atom exactly once.
    pub fn new(index: Sort, members: impl IntoIterator<Item = (Atom, T)>) -> Result<Self> {
        let mut slots: Vec<Option<T>> = vec![None; index.len()];
        for (i, m) in members {
            let pos = index.position(&i).ok_or_else(|| {
                Error::IllFormed(format!("index `{i}` is not in sort `{}`", index.name()))
            })?;
            if slots[pos].replace(m).is_some() {
                return Err(Error::IllFormed(format!("index `{i}` mapped twice")));
            }
        }
        let members = slots
            .into_iter()
            .zip(index.carrier())
            .map(|(m, i)| m.ok_or_else(|| Error::IllFormed(format!("index `{i}` is unmapped"))))
            .collect::<Result<Vec<T>>>()?;
        for m in &members[1..] {
            members[0].check_shape(m)?;
        }
        Ok(IndexedFamily { index, members })
    }

    /// Builds a family by evaluating `f` at every index.
    pub fn tabulate(index: Sort, f: impl FnMut(&Atom) -> T) -> Result<Self> {
        let members: Vec<T> = index.carrier().iter().map(f).collect();
        let pairs: Vec<(Atom, T)> = index.carrier().iter().cloned().zip(members).collect();
        IndexedFamily::new(index, pairs)
    }

    pub fn index(&self) -> &Sort {
        &self.index
    }

    pub fn members(&self) -> &[T] {
        &self.members
    }

    pub fn get(&self, i: &Atom) -> Option<&T> {
        self.index.position(i).map(|p| &self.members[p])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &T)> {
        self.index.carrier().iter().zip(&self.members)
    }

    /// Pointwise image of the family.
    pub fn map<U: SetAlgebra>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<IndexedFamily<U>> {
        let members = self.members.iter().map(f).collect::<Result<Vec<U>>>()?;
        IndexedFamily::new(self.index.clone(), self.index.carrier().iter().cloned().zip(members))
    }

    pub fn indexed_union(&self) -> T {
        let mut acc = self.members[0].elems().clone();
        for m in &self.members[1..] {
            acc.extend(m.elems().iter().cloned());
        }
        self.members[0].with_elems(acc)
    }

    pub fn indexed_intersect(&self) -> T {
        let mut acc = self.members[0].elems().clone();
        for m in &self.members[1..] {
            acc.retain(|e| m.elems().contains(e));
        }
        self.members[0].with_elems(acc)
    }
}

fn powerset_space(sig: &[Sort], limits: &Limits) -> Result<Vec<Tuple>> {
    let space = enumerate_tuples(sig, limits.tuple_space)?;
    if space.len() > limits.powerset_tuple_space {
        return Err(Error::SizeLimit {
            what: "powerset tuple space",
            needed: space.len() as u128,
            limit: limits.powerset_tuple_space as u128,
        });
    }
    Ok(space)
}

fn subsets<'a>(sig: &[Sort], space: &'a [Tuple]) -> impl Iterator<Item = FinRel> + 'a {
    let sig = sig.to_vec();
    (0u64..1 << space.len()).map(move |mask| {
        let tuples = space
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, t)| t.clone())
            .collect();
        FinRel::from_parts(sig.clone(), tuples)
    })
}

/// Union of every relation over `sig` that satisfies `pred`.
pub fn general_union(
    pred: impl Fn(&FinRel) -> bool,
    sig: &[Sort],
    limits: &Limits,
) -> Result<FinRel> {
    let space = powerset_space(sig, limits)?;
    let mut acc = BTreeSet::new();
    for s in subsets(sig, &space).filter(|s| pred(s)) {
        acc.extend(s.tuples);
    }
    Ok(FinRel::from_parts(sig.to_vec(), acc))
}

/// Intersection of every relation over `sig` that satisfies `pred`; the
/// intersection of the empty class is `full(sig)`.
pub fn general_intersect(
    pred: impl Fn(&FinRel) -> bool,
    sig: &[Sort],
    limits: &Limits,
) -> Result<FinRel> {
    let space = powerset_space(sig, limits)?;
    let mut acc: BTreeSet<Tuple> = space.iter().cloned().collect();
    for s in subsets(sig, &space).filter(|s| pred(s)) {
        acc.retain(|t| s.tuples.contains(t));
    }
    Ok(FinRel::from_parts(sig.to_vec(), acc))
}
