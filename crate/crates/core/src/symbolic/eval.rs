//! Finite-model evaluation: direct semantics of set expressions and
//! first-order satisfaction of unfolded formulas.

use std::collections::BTreeMap;

use super::expr::{kind_of, render_slots, Kind, SetExpr, Slot, Statement, Value};
use super::formula::{Formula, SetRef, Term};
use super::unfold::unfold;
use crate::error::{Error, Result};
use crate::finrel::{FinRel, IndexedFamily, SetAlgebra};
use crate::rels::{compose_rr, compose_rs, compose_ts, compose_tt, id_r, id_t, Trace, TraceRel, TraceSet};
use crate::universe::{Atom, Sort, Tuple, Universe};

/// A set value of one of the three finite kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetValue {
    Rel(FinRel),
    Traces(TraceRel),
    TraceSet(TraceSet),
}

impl SetValue {
    pub fn max_trace_len(&self) -> usize {
        match self {
            SetValue::Rel(_) => 0,
            SetValue::Traces(r) => r.max_trace_len(),
            SetValue::TraceSet(s) => s.max_trace_len(),
        }
    }

    /// Symbolic signature of the value.
    pub fn slots(&self) -> Vec<Slot> {
        let s = |x: &Sort| Slot::Sort(x.name().to_string());
        match self {
            SetValue::Rel(r) => r.sig().iter().map(s).collect(),
            SetValue::Traces(r) => vec![s(r.src()), Slot::Trace, s(r.dst())],
            SetValue::TraceSet(t) => vec![s(t.src()), Slot::Trace],
        }
    }

    pub fn contains(&self, vals: &[Value]) -> Result<bool> {
        let atom = |v: &Value| match v {
            Value::Atom(a) => Ok(a.clone()),
            Value::Trace(t) => Err(Error::IllSorted {
                tuple: t.to_string(),
                sig: "sort".into(),
            }),
        };
        let trace = |v: &Value| match v {
            Value::Trace(t) => Ok(t.clone()),
            Value::Atom(a) => Err(Error::IllSorted {
                tuple: a.to_string(),
                sig: "trace".into(),
            }),
        };
        let arity = |n: usize| {
            if vals.len() == n {
                Ok(())
            } else {
                Err(Error::IllSorted {
                    tuple: format!("{vals:?}"),
                    sig: render_slots(&self.slots()),
                })
            }
        };
        match self {
            SetValue::Rel(r) => {
                let t = Tuple(vals.iter().map(atom).collect::<Result<_>>()?);
                r.member(&t)
            }
            SetValue::Traces(r) => {
                arity(3)?;
                let e = (atom(&vals[0])?, trace(&vals[1])?, atom(&vals[2])?);
                Ok(r.triples().contains(&e))
            }
            SetValue::TraceSet(s) => {
                arity(2)?;
                let e = (atom(&vals[0])?, trace(&vals[1])?);
                Ok(s.pairs().contains(&e))
            }
        }
    }

    fn union(&self, other: &SetValue) -> Result<SetValue> {
        Ok(match (self, other) {
            (SetValue::Rel(a), SetValue::Rel(b)) => SetValue::Rel(a.union(b)?),
            (SetValue::Traces(a), SetValue::Traces(b)) => SetValue::Traces(a.union(b)?),
            (SetValue::TraceSet(a), SetValue::TraceSet(b)) => SetValue::TraceSet(a.union(b)?),
            _ => return Err(kind_mismatch(self, other)),
        })
    }

    fn intersect(&self, other: &SetValue) -> Result<SetValue> {
        Ok(match (self, other) {
            (SetValue::Rel(a), SetValue::Rel(b)) => SetValue::Rel(a.intersect(b)?),
            (SetValue::Traces(a), SetValue::Traces(b)) => SetValue::Traces(a.intersect(b)?),
            (SetValue::TraceSet(a), SetValue::TraceSet(b)) => SetValue::TraceSet(a.intersect(b)?),
            _ => return Err(kind_mismatch(self, other)),
        })
    }

    pub fn included(&self, other: &SetValue) -> Result<bool> {
        match (self, other) {
            (SetValue::Rel(a), SetValue::Rel(b)) => a.included(b),
            (SetValue::Traces(a), SetValue::Traces(b)) => a.included(b),
            (SetValue::TraceSet(a), SetValue::TraceSet(b)) => a.included(b),
            _ => Err(kind_mismatch(self, other)),
        }
    }

    pub fn equiv(&self, other: &SetValue) -> Result<bool> {
        match (self, other) {
            (SetValue::Rel(a), SetValue::Rel(b)) => a.equiv(b),
            (SetValue::Traces(a), SetValue::Traces(b)) => a.equiv(b),
            (SetValue::TraceSet(a), SetValue::TraceSet(b)) => a.equiv(b),
            _ => Err(kind_mismatch(self, other)),
        }
    }
}

fn kind_mismatch(a: &SetValue, b: &SetValue) -> Error {
    Error::SigMismatch {
        left: render_slots(&a.slots()),
        right: render_slots(&b.slots()),
    }
}

/// An indexed family of set values.
#[derive(Clone, Debug)]
pub enum FamilyValue {
    Rel(IndexedFamily<FinRel>),
    Traces(IndexedFamily<TraceRel>),
    TraceSet(IndexedFamily<TraceSet>),
}

impl FamilyValue {
    fn index(&self) -> &Sort {
        match self {
            FamilyValue::Rel(f) => f.index(),
            FamilyValue::Traces(f) => f.index(),
            FamilyValue::TraceSet(f) => f.index(),
        }
    }

    fn get(&self, i: &Atom) -> Option<SetValue> {
        match self {
            FamilyValue::Rel(f) => f.get(i).cloned().map(SetValue::Rel),
            FamilyValue::Traces(f) => f.get(i).cloned().map(SetValue::Traces),
            FamilyValue::TraceSet(f) => f.get(i).cloned().map(SetValue::TraceSet),
        }
    }

    fn max_trace_len(&self) -> usize {
        match self {
            FamilyValue::Rel(_) => 0,
            FamilyValue::Traces(f) => f.members().iter().map(TraceRel::max_trace_len).max().unwrap_or(0),
            FamilyValue::TraceSet(f) => f.members().iter().map(TraceSet::max_trace_len).max().unwrap_or(0),
        }
    }

    fn slots(&self) -> Vec<Slot> {
        self.get(&self.index().carrier()[0]).expect("family is total").slots()
    }

    fn fold(&self, union: bool) -> SetValue {
        match (self, union) {
            (FamilyValue::Rel(f), true) => SetValue::Rel(f.indexed_union()),
            (FamilyValue::Rel(f), false) => SetValue::Rel(f.indexed_intersect()),
            (FamilyValue::Traces(f), true) => SetValue::Traces(f.indexed_union()),
            (FamilyValue::Traces(f), false) => SetValue::Traces(f.indexed_intersect()),
            (FamilyValue::TraceSet(f), true) => SetValue::TraceSet(f.indexed_union()),
            (FamilyValue::TraceSet(f), false) => SetValue::TraceSet(f.indexed_intersect()),
        }
    }
}

/// Assignment of set names and family names over a universe.
#[derive(Clone, Debug)]
pub struct Model {
    universe: Universe,
    sets: BTreeMap<String, SetValue>,
    families: BTreeMap<String, FamilyValue>,
}

impl Model {
    pub fn new(universe: Universe) -> Model {
        Model {
            universe,
            sets: BTreeMap::new(),
            families: BTreeMap::new(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn insert(&mut self, name: &str, v: SetValue) -> &mut Self {
        self.sets.insert(name.to_string(), v);
        self
    }

    pub fn insert_family(&mut self, name: &str, f: FamilyValue) -> &mut Self {
        self.families.insert(name.to_string(), f);
        self
    }

    pub fn get(&self, name: &str) -> Result<&SetValue> {
        self.sets.get(name).ok_or_else(|| Error::Unassigned(name.to_string()))
    }

    fn family(&self, name: &str) -> Result<&FamilyValue> {
        self.families.get(name).ok_or_else(|| Error::Unassigned(name.to_string()))
    }

    pub fn max_trace_len(&self) -> usize {
        let sets = self.sets.values().map(SetValue::max_trace_len);
        let fams = self.families.values().map(FamilyValue::max_trace_len);
        sets.chain(fams).max().unwrap_or(0)
    }

    fn sort(&self, slot: &Slot) -> Result<&Sort> {
        match slot {
            Slot::Sort(n) => self.universe.require_sort(n),
            Slot::Trace => self.universe.require_events(),
        }
    }

    fn sorts(&self, sig: &[Slot]) -> Result<Vec<Sort>> {
        sig.iter()
            .filter(|s| matches!(s, Slot::Sort(_)))
            .map(|s| self.sort(s).cloned())
            .collect()
    }

    fn empty_value(&self, sig: &[Slot]) -> Result<SetValue> {
        let sorts = self.sorts(sig)?;
        Ok(match kind_of(sig)? {
            Kind::Rel => SetValue::Rel(FinRel::empty(sorts)),
            Kind::TraceRel => SetValue::Traces(TraceRel::empty(
                sorts[0].clone(),
                self.universe.require_events()?.clone(),
                sorts[1].clone(),
            )),
            Kind::TraceSet => SetValue::TraceSet(TraceSet::empty(
                sorts[0].clone(),
                self.universe.require_events()?.clone(),
            )),
        })
    }
}

fn expect_sig(name: &str, declared: &[Slot], actual: &[Slot]) -> Result<()> {
    if declared == actual {
        Ok(())
    } else {
        Err(Error::SigMismatch {
            left: format!("{name} : {}", render_slots(declared)),
            right: render_slots(actual),
        })
    }
}

/// Direct semantics of an expression in a model.
pub fn eval_expr(e: &SetExpr, m: &Model) -> Result<SetValue> {
    use SetExpr::*;
    let rel = |v: SetValue| match v {
        SetValue::Rel(r) => Ok(r),
        other => Err(Error::IllFormed(format!(
            "expected a relation, got {}",
            render_slots(&other.slots())
        ))),
    };
    let traces = |v: SetValue| match v {
        SetValue::Traces(r) => Ok(r),
        other => Err(Error::IllFormed(format!(
            "expected a traced relation, got {}",
            render_slots(&other.slots())
        ))),
    };
    Ok(match e {
        Var { name, sig } => {
            let v = m.get(name)?;
            expect_sig(name, sig, &v.slots())?;
            v.clone()
        }
        Empty(sig) => m.empty_value(sig)?,
        Full(sig) => {
            e.sig()?;
            SetValue::Rel(FinRel::full(m.sorts(sig)?, m.universe.limits())?)
        }
        Union(a, b) => eval_expr(a, m)?.union(&eval_expr(b, m)?)?,
        Intersect(a, b) => eval_expr(a, m)?.intersect(&eval_expr(b, m)?)?,
        IndexedUnion { family, sig, .. } | IndexedIntersect { family, sig, .. } => {
            let f = m.family(family)?;
            expect_sig(family, sig, &f.slots())?;
            f.fold(matches!(e, IndexedUnion { .. }))
        }
        ConcatRR(a, b) => SetValue::Rel(compose_rr(&rel(eval_expr(a, m)?)?, &rel(eval_expr(b, m)?)?)?),
        ConcatRS(a, b) => SetValue::Rel(compose_rs(&rel(eval_expr(a, m)?)?, &rel(eval_expr(b, m)?)?)?),
        ConcatTT(a, b) => {
            SetValue::Traces(compose_tt(&traces(eval_expr(a, m)?)?, &traces(eval_expr(b, m)?)?)?)
        }
        ConcatTS(a, b) => {
            let r = traces(eval_expr(a, m)?)?;
            match eval_expr(b, m)? {
                SetValue::TraceSet(s) => SetValue::TraceSet(compose_ts(&r, &s)?),
                other => {
                    return Err(Error::IllFormed(format!(
                        "expected a trace set, got {}",
                        render_slots(&other.slots())
                    )))
                }
            }
        }
        IdR(a) => SetValue::Rel(id_r(m.universe.require_sort(a)?)),
        IdT(a) => SetValue::Traces(id_t(
            m.universe.require_sort(a)?,
            m.universe.require_events()?,
        )),
    })
}

/// Direct truth of a statement, computed with the set operators.
pub fn eval_statement(s: &Statement, m: &Model) -> Result<bool> {
    s.check()?;
    match s {
        Statement::Equiv(a, b) => eval_expr(a, m)?.equiv(&eval_expr(b, m)?),
        Statement::Included(a, b) => eval_expr(a, m)?.included(&eval_expr(b, m)?),
        Statement::Member(vals, e) => eval_expr(e, m)?.contains(vals),
    }
}

/// Upper bound on the trace lengths occurring in the value of `e`.
pub fn trace_len_bound(e: &SetExpr, m: &Model) -> Result<usize> {
    Ok(len_bound(e, m)?.unwrap_or(0))
}

/// `None` when `e` is empty whatever the model says.
fn len_bound(e: &SetExpr, m: &Model) -> Result<Option<usize>> {
    use SetExpr::*;
    Ok(match e {
        Var { name, .. } => Some(m.get(name)?.max_trace_len()),
        IndexedUnion { family, .. } | IndexedIntersect { family, .. } => {
            Some(m.family(family)?.max_trace_len())
        }
        Empty(_) => None,
        Full(_) | IdR(_) | IdT(_) => Some(0),
        Union(a, b) => match (len_bound(a, m)?, len_bound(b, m)?) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        },
        Intersect(a, b) => match (len_bound(a, m)?, len_bound(b, m)?) {
            (Some(x), Some(y)) => Some(x.min(y)),
            _ => None,
        },
        ConcatRR(a, b) | ConcatRS(a, b) => match (len_bound(a, m)?, len_bound(b, m)?) {
            (Some(_), Some(_)) => Some(0),
            _ => None,
        },
        ConcatTT(a, b) | ConcatTS(a, b) => match (len_bound(a, m)?, len_bound(b, m)?) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        },
    })
}

struct Evaluator<'m> {
    model: &'m Model,
    trace_len: usize,
    env: Vec<(String, Value)>,
    trace_domain: Option<Vec<Trace>>,
}

impl Evaluator<'_> {
    fn lookup(&self, name: &str) -> Option<&Value> {
        self.env.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    fn term(&self, t: &Term) -> Result<Value> {
        match t {
            Term::Const(v) => Ok(v.clone()),
            Term::Var(n) => self
                .lookup(n)
                .cloned()
                .ok_or_else(|| Error::IllFormed(format!("unbound variable `{n}`"))),
        }
    }

    fn trace_term(&self, t: &Term) -> Result<Trace> {
        match self.term(t)? {
            Value::Trace(l) => Ok(l),
            Value::Atom(a) => Err(Error::IllFormed(format!("`{a}` is not a trace"))),
        }
    }

    fn domain(&mut self, ty: &Slot) -> Result<Vec<Value>> {
        match ty {
            Slot::Sort(n) => Ok(self
                .model
                .universe
                .require_sort(n)?
                .carrier()
                .iter()
                .cloned()
                .map(Value::Atom)
                .collect()),
            Slot::Trace => {
                if self.trace_domain.is_none() {
                    self.trace_domain = Some(self.build_trace_domain()?);
                }
                let d = self.trace_domain.as_ref().expect("just built");
                Ok(d.iter().cloned().map(Value::Trace).collect())
            }
        }
    }

    fn build_trace_domain(&self) -> Result<Vec<Trace>> {
        let events = self.model.universe.require_events()?;
        let cap = self.model.universe.limits().trace_domain;
        let k = events.len() as u128;
        let needed: u128 = (0..=self.trace_len as u32).map(|i| k.saturating_pow(i)).sum();
        if needed > cap as u128 {
            return Err(Error::SizeLimit {
                what: "trace quantifier domain",
                needed,
                limit: cap as u128,
            });
        }
        let mut all = vec![Trace::nil()];
        let mut layer = vec![Trace::nil()];
        for _ in 0..self.trace_len {
            layer = layer
                .iter()
                .flat_map(|t| {
                    events.carrier().iter().map(move |e| {
                        let mut v = t.0.clone();
                        v.push(e.clone());
                        Trace(v)
                    })
                })
                .collect();
            all.extend(layer.iter().cloned());
        }
        Ok(all)
    }

    /// Values a trace variable can take for `body` to hold, read off a
    /// conjunct `l = ... ++ v ++ ...` whose left side is already known.
    /// `None` means no such constraint was found.
    fn split_candidates(&self, v: &str, body: &Formula) -> Result<Option<Vec<Trace>>> {
        let mut conj = Vec::new();
        let mut shadow = Vec::new();
        collect_conjuncts(body, v, &mut shadow, &mut conj);
        let known = |t: &Term, shadow: &[String]| match t {
            Term::Const(_) => true,
            Term::Var(n) => !shadow.contains(n) && n != v && self.lookup(n).is_some(),
        };
        let mut best: Option<Vec<Trace>> = None;
        for (atom, shadow) in conj {
            let Formula::TraceEq(lhs, parts) = atom else { continue };
            let is_v = |t: &Term| matches!(t, Term::Var(n) if n == v);
            let cands = if is_v(lhs) {
                if !parts.iter().all(|p| known(p, &shadow)) {
                    continue;
                }
                let mut acc = Trace::nil();
                for p in parts {
                    acc = acc.concat(&self.trace_term(p)?);
                }
                vec![acc]
            } else if known(lhs, &shadow) && parts.iter().filter(|p| is_v(p)).count() == 1 {
                let whole = self.trace_term(lhs)?;
                let pos = parts.iter().position(is_v).expect("counted above");
                if parts[..pos].iter().all(|p| known(p, &shadow)) {
                    let mut pre = Trace::nil();
                    for p in &parts[..pos] {
                        pre = pre.concat(&self.trace_term(p)?);
                    }
                    let Some(rest) = whole.0.strip_prefix(pre.0.as_slice()) else {
                        return Ok(Some(vec![]));
                    };
                    if parts[pos + 1..].iter().all(|p| known(p, &shadow)) {
                        let mut post = Trace::nil();
                        for p in &parts[pos + 1..] {
                            post = post.concat(&self.trace_term(p)?);
                        }
                        match rest.strip_suffix(post.0.as_slice()) {
                            Some(mid) => vec![Trace(mid.to_vec())],
                            None => vec![],
                        }
                    } else {
                        (0..=rest.len()).map(|k| Trace(rest[..k].to_vec())).collect()
                    }
                } else {
                    let n = whole.len();
                    let mut fs: Vec<Trace> = (0..=n)
                        .flat_map(|i| (i..=n).map(move |j| (i, j)))
                        .map(|(i, j)| Trace(whole.0[i..j].to_vec()))
                        .collect();
                    fs.sort();
                    fs.dedup();
                    fs
                }
            } else {
                continue;
            };
            if best.as_ref().map_or(true, |b| cands.len() < b.len()) {
                best = Some(cands);
            }
        }
        Ok(best)
    }

    fn eval(&mut self, f: &Formula) -> Result<bool> {
        use Formula::*;
        Ok(match f {
            True => true,
            False => false,
            Not(a) => !self.eval(a)?,
            And(a, b) => self.eval(a)? && self.eval(b)?,
            Or(a, b) => self.eval(a)? || self.eval(b)?,
            Implies(a, b) => !self.eval(a)? || self.eval(b)?,
            Iff(a, b) => self.eval(a)? == self.eval(b)?,
            Forall(binder, body) => {
                for v in self.domain(&binder.ty)? {
                    self.env.push((binder.name.clone(), v));
                    let r = self.eval(body);
                    self.env.pop();
                    if !r? {
                        return Ok(false);
                    }
                }
                true
            }
            Exists(binder, body) => {
                let cands = match binder.ty {
                    Slot::Trace => match self.split_candidates(&binder.name, body)? {
                        Some(c) => c.into_iter().map(Value::Trace).collect(),
                        None => self.domain(&binder.ty)?,
                    },
                    Slot::Sort(_) => self.domain(&binder.ty)?,
                };
                for v in cands {
                    self.env.push((binder.name.clone(), v));
                    let r = self.eval(body);
                    self.env.pop();
                    if r? {
                        return Ok(true);
                    }
                }
                false
            }
            Mem(args, set) => {
                let vals = args.iter().map(|t| self.term(t)).collect::<Result<Vec<_>>>()?;
                match set {
                    SetRef::Named(n) => self.model.get(n)?.contains(&vals)?,
                    SetRef::Member { family, index } => {
                        let fam = self.model.family(family)?;
                        let Value::Atom(i) = self.term(index)? else {
                            return Err(Error::IllFormed("trace used as index".into()));
                        };
                        let member = fam.get(&i).ok_or_else(|| Error::IllSorted {
                            tuple: i.to_string(),
                            sig: fam.index().name().to_string(),
                        })?;
                        member.contains(&vals)?
                    }
                }
            }
            Eq(a, b) => self.term(a)? == self.term(b)?,
            TraceEq(lhs, parts) => {
                let whole = self.trace_term(lhs)?;
                let mut acc = Trace::nil();
                for p in parts {
                    acc = acc.concat(&self.trace_term(p)?);
                }
                whole == acc
            }
        })
    }
}

/// Atoms reachable from `f` through conjunctions and nested existentials,
/// each paired with the names bound between `f` and the atom.
fn collect_conjuncts<'f>(
    f: &'f Formula,
    v: &str,
    shadow: &mut Vec<String>,
    out: &mut Vec<(&'f Formula, Vec<String>)>,
) {
    match f {
        Formula::And(a, b) => {
            collect_conjuncts(a, v, shadow, out);
            collect_conjuncts(b, v, shadow, out);
        }
        Formula::Exists(binder, body) => {
            if binder.name == v {
                return;
            }
            shadow.push(binder.name.clone());
            collect_conjuncts(body, v, shadow, out);
            shadow.pop();
        }
        other => out.push((other, shadow.clone())),
    }
}

/// Evaluates a closed formula. Trace-typed universal quantifiers range over
/// traces of length at most `trace_len`.
pub fn eval_formula_with(f: &Formula, m: &Model, trace_len: usize) -> Result<bool> {
    Evaluator {
        model: m,
        trace_len,
        env: Vec::new(),
        trace_domain: None,
    }
    .eval(f)
}

/// Evaluates a closed formula, bounding trace quantifiers by the longest
/// trace any concatenation in `f` can build from the model's traces.
pub fn eval_formula(f: &Formula, m: &Model) -> Result<bool> {
    let bound = m.max_trace_len() * (1 + f.concat_atoms());
    eval_formula_with(f, m, bound)
}

/// Returns `(direct truth, truth of the unfolded formula)`; the two agree
/// whenever the transform is sound.
pub fn check_soundness(s: &Statement, m: &Model) -> Result<(bool, bool)> {
    let direct = eval_statement(s, m)?;
    let bound = match s {
        Statement::Equiv(a, b) | Statement::Included(a, b) => {
            trace_len_bound(a, m)?.max(trace_len_bound(b, m)?)
        }
        Statement::Member(..) => 0,
    };
    let unfolded = eval_formula_with(&unfold(s)?, m, bound)?;
    Ok((direct, unfolded))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::parse_universe;

    fn model() -> Model {
        let u = parse_universe("sort A = {0, 1, 2}\nsort B = {0, 1, 2}\nevents a b").unwrap();
        Model::new(u)
    }

    fn rel(m: &Model, sig: &[&str], tuples: &[&[i64]]) -> SetValue {
        let sorts = sig.iter().map(|s| m.universe().sort(s).unwrap().clone()).collect();
        SetValue::Rel(
            FinRel::new(sorts, tuples.iter().map(|t| Tuple(t.iter().map(|&x| Atom::Int(x)).collect()))).unwrap(),
        )
    }

    #[test]
    fn trivially_true_formula() {
        let m = model();
        let f = Formula::forall(
            "a",
            Slot::sort("A"),
            Formula::implies(
                Formula::Mem(vec![Term::var("a")], SetRef::Named("X".into())),
                Formula::Mem(vec![Term::var("a")], SetRef::Named("X".into())),
            ),
        );
        let mut m1 = m.clone();
        m1.insert("X", rel(&m, &["A"], &[&[1]]));
        assert!(eval_formula(&f, &m1).unwrap());
        assert!(matches!(eval_formula(&f, &m), Err(Error::Unassigned(_))));
    }

    #[test]
    fn inclusion_in_union() {
        let mut m = model();
        let base = m.clone();
        m.insert("X", rel(&base, &["A", "A"], &[&[0, 0]]))
            .insert("Y", rel(&base, &["A", "A"], &[]))
            .insert("Z", rel(&base, &["A", "A"], &[&[0, 0]]));
        let v = |n: &str| SetExpr::var(n, &["A", "A"]);
        let s = Statement::Included(v("X"), SetExpr::union(v("Y"), v("Z")));
        assert!(eval_formula(&unfold(&s).unwrap(), &m).unwrap());
        assert_eq!(check_soundness(&s, &m).unwrap(), (true, true));
    }

    #[test]
    fn distinct_sets_not_equivalent() {
        let mut m = model();
        let base = m.clone();
        m.insert("X", rel(&base, &["A"], &[&[1]])).insert("Y", rel(&base, &["A"], &[&[2]]));
        let s = Statement::Equiv(SetExpr::var("X", &["A"]), SetExpr::var("Y", &["A"]));
        assert!(!eval_formula(&unfold(&s).unwrap(), &m).unwrap());
        assert_eq!(check_soundness(&s, &m).unwrap(), (false, false));
    }

    #[test]
    fn member_of_composition() {
        let mut m = model();
        let base = m.clone();
        m.insert("R", rel(&base, &["A", "B"], &[&[0, 1]]))
            .insert("S", rel(&base, &["B", "A"], &[&[1, 2]]));
        let s = Statement::Member(
            vec![Value::Atom(Atom::Int(0)), Value::Atom(Atom::Int(2))],
            SetExpr::concat_rr(SetExpr::var("R", &["A", "B"]), SetExpr::var("S", &["B", "A"])),
        );
        assert_eq!(check_soundness(&s, &m).unwrap(), (true, true));
    }

    #[test]
    fn union_commutes_under_unfolding() {
        let mut m = model();
        let base = m.clone();
        m.insert("X", rel(&base, &["A"], &[&[0], &[2]])).insert("Y", rel(&base, &["A"], &[&[1]]));
        let x = SetExpr::var("X", &["A"]);
        let y = SetExpr::var("Y", &["A"]);
        let s = Statement::Equiv(SetExpr::union(x.clone(), y.clone()), SetExpr::union(y, x));
        assert_eq!(check_soundness(&s, &m).unwrap(), (true, true));
    }

    #[test]
    fn traced_soundness_uses_split_enumeration() {
        let mut m = model();
        let u = m.universe().clone();
        let a = u.sort("A").unwrap().clone();
        let ev = u.events().unwrap().clone();
        let tr = |ts: &[(i64, &[&str], i64)]| {
            SetValue::Traces(
                TraceRel::new(
                    a.clone(),
                    ev.clone(),
                    a.clone(),
                    ts.iter().map(|&(x, l, y)| (Atom::Int(x), Trace::labels(l), Atom::Int(y))),
                )
                .unwrap(),
            )
        };
        m.insert("R", tr(&[(0, &["a"], 1), (1, &["b", "b"], 2)]))
            .insert("S", tr(&[(1, &["b"], 2), (2, &[], 0)]))
            .insert("T", tr(&[(0, &["a", "b"], 2)]));
        let v = |n: &str| SetExpr::var(n, &["A", "trace", "A"]);
        let s = Statement::Equiv(SetExpr::concat_tt(v("R"), v("S")), v("T"));
        assert_eq!(check_soundness(&s, &m).unwrap(), (false, false));
        let s = Statement::Included(v("T"), SetExpr::concat_tt(v("R"), v("S")));
        assert_eq!(check_soundness(&s, &m).unwrap(), (true, true));
        let s = Statement::Member(
            vec![Value::Atom(Atom::Int(1)), Value::Trace(Trace::labels(&["b", "b"])), Value::Atom(Atom::Int(0))],
            SetExpr::concat_tt(v("R"), v("S")),
        );
        assert_eq!(check_soundness(&s, &m).unwrap(), (true, true));
    }

    #[test]
    fn trace_domain_cap() {
        let u = parse_universe("sort A = {0}\nevents a b c d").unwrap();
        let mut lim = *u.limits();
        lim.trace_domain = 10;
        let m = Model::new(u.with_limits(lim));
        let f = Formula::forall("l", Slot::Trace, Formula::True);
        assert!(matches!(eval_formula_with(&f, &m, 3), Err(Error::SizeLimit { .. })));
        assert!(eval_formula_with(&f, &m, 1).unwrap());
    }
}
