//! Structural translation of set statements into pointwise formulas.

use std::collections::BTreeSet;

use super::expr::{SetExpr, Slot, Statement};
use super::formula::{Binder, Formula, SetRef, Term};
use crate::error::Result;

/// Allocates bound-variable names. A sort named by a single letter gives its
/// lowercase letter, other sorts give `a`, traces give `l`; clashes with names
/// in scope get a numeric suffix (`a0`, `a1`, ... and `l1`, `l2`, ...).
struct Namer {
    scope: Vec<String>,
    reserved: BTreeSet<String>,
}

impl Namer {
    fn taken(&self, n: &str) -> bool {
        self.reserved.contains(n) || self.scope.iter().any(|s| s == n)
    }

    fn fresh(&mut self, ty: &Slot) -> String {
        let (base, first) = match ty {
            Slot::Sort(s) if s.len() == 1 && s.chars().all(|c| c.is_ascii_alphabetic()) => {
                (s.to_ascii_lowercase(), 0)
            }
            Slot::Sort(_) => ("a".to_string(), 0),
            Slot::Trace => ("l".to_string(), 1),
        };
        let name = if !self.taken(&base) {
            base
        } else {
            (first..)
                .map(|i| format!("{base}{i}"))
                .find(|n| !self.taken(n))
                .expect("unbounded supply of names")
        };
        self.scope.push(name.clone());
        name
    }

    fn release(&mut self, n: usize) {
        for _ in 0..n {
            self.scope.pop();
        }
    }
}

fn sort_slot(sig: &[Slot], i: usize) -> Slot {
    sig[i].clone()
}

impl Namer {
    /// Membership of `args` in `e`, expanded down to atoms.
    fn mem(&mut self, e: &SetExpr, args: Vec<Term>) -> Result<Formula> {
        use SetExpr::*;
        Ok(match e {
            Var { name, .. } => Formula::Mem(args, SetRef::Named(name.clone())),
            Empty(_) => Formula::False,
            Full(_) => Formula::True,
            Union(a, b) => Formula::or(self.mem(a, args.clone())?, self.mem(b, args)?),
            Intersect(a, b) => Formula::and(self.mem(a, args.clone())?, self.mem(b, args)?),
            IndexedUnion { family, index, .. } | IndexedIntersect { family, index, .. } => {
                let ty = Slot::Sort(index.clone());
                let i = self.fresh(&ty);
                let atom = Formula::Mem(
                    args,
                    SetRef::Member {
                        family: family.clone(),
                        index: Term::Var(i.clone()),
                    },
                );
                self.release(1);
                let binder = Binder { name: i, ty };
                if matches!(e, IndexedUnion { .. }) {
                    Formula::Exists(binder, Box::new(atom))
                } else {
                    Formula::Forall(binder, Box::new(atom))
                }
            }
            ConcatRR(r, s) | ConcatRS(r, s) => {
                let mid = sort_slot(&r.sig()?, 1);
                let b = self.fresh(&mid);
                let mut sargs = vec![Term::Var(b.clone())];
                sargs.extend(args[1..].iter().cloned());
                let body = Formula::and(
                    self.mem(r, vec![args[0].clone(), Term::Var(b.clone())])?,
                    self.mem(s, sargs)?,
                );
                self.release(1);
                Formula::exists(&b, mid, body)
            }
            ConcatTT(r, s) | ConcatTS(r, s) => {
                let mid = sort_slot(&r.sig()?, 2);
                let b = self.fresh(&mid);
                let l1 = self.fresh(&Slot::Trace);
                let l2 = self.fresh(&Slot::Trace);
                let mut sargs = vec![Term::Var(b.clone()), Term::Var(l2.clone())];
                sargs.extend(args[2..].iter().cloned());
                let body = Formula::and(
                    self.mem(
                        r,
                        vec![args[0].clone(), Term::Var(l1.clone()), Term::Var(b.clone())],
                    )?,
                    Formula::and(
                        self.mem(s, sargs)?,
                        Formula::TraceEq(
                            args[1].clone(),
                            vec![Term::Var(l1.clone()), Term::Var(l2.clone())],
                        ),
                    ),
                );
                self.release(3);
                Formula::exists(
                    &b,
                    mid,
                    Formula::exists(&l1, Slot::Trace, Formula::exists(&l2, Slot::Trace, body)),
                )
            }
            IdR(_) => Formula::Eq(args[0].clone(), args[1].clone()),
            IdT(_) => Formula::and(
                Formula::Eq(args[0].clone(), args[2].clone()),
                Formula::TraceEq(args[1].clone(), vec![]),
            ),
        })
    }
}

/// Unfolds `==` into a universally closed `<->`, `⊆` into `->`, and
/// membership in composite expressions into connectives and quantifiers.
pub fn unfold(s: &Statement) -> Result<Formula> {
    let sig = s.check()?;
    let mut namer = Namer {
        scope: Vec::new(),
        reserved: s.names().into_iter().collect(),
    };
    match s {
        Statement::Member(vals, e) => {
            let args = vals.iter().cloned().map(Term::Const).collect();
            namer.mem(e, args)
        }
        Statement::Equiv(a, b) | Statement::Included(a, b) => {
            let names: Vec<String> = sig.iter().map(|ty| namer.fresh(ty)).collect();
            let args: Vec<Term> = names.iter().cloned().map(Term::Var).collect();
            let (fa, fb) = (namer.mem(a, args.clone())?, namer.mem(b, args)?);
            let mut body = if matches!(s, Statement::Equiv(..)) {
                Formula::iff(fa, fb)
            } else {
                Formula::implies(fa, fb)
            };
            for (name, ty) in names.iter().zip(sig).rev() {
                body = Formula::Forall(
                    Binder {
                        name: name.clone(),
                        ty,
                    },
                    Box::new(body),
                );
            }
            Ok(body)
        }
    }
}
