//! Denotational semantics: plain relations, normal/divergent pairs, and
//! traced relations, each built compositionally from `rels` operators.

use super::ast::{eval_aexp, eval_bexp, BExp, Command};
use crate::error::{Error, Result};
use crate::finrel::{FinRel, SetAlgebra};
use crate::lattice::{gfp, lfp, MonotoneMap};
use crate::rels::{compose_rr, compose_rs, compose_tt, id_r, id_t, Trace, TraceRel};
use crate::universe::{Atom, Tuple, Universe};

/// Side-channel counters of a denotation run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub states: usize,
    /// Kleene iterations summed over every loop.
    pub iterations: usize,
    /// Assignment transitions dropped because the value left the variable's range.
    pub pruned: usize,
    /// Whether every traced loop iteration stabilized.
    pub fixpoint_reached: bool,
}

/// Normal-termination relation and the set of states that may diverge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NrmInf {
    pub nrm: FinRel,
    pub inf: FinRel,
}

fn st(i: usize) -> Atom {
    Atom::Int(i as i64)
}

fn test(b: &BExp, u: &Universe, want: bool) -> FinRel {
    let s = u.state_sort().clone();
    let tuples = (0..u.state_count())
        .filter(|&i| eval_bexp(b, &u.decode_state(i)) == want)
        .map(|i| Tuple(vec![st(i), st(i)]));
    FinRel::new(vec![s.clone(), s], tuples).expect("states are in range")
}

/// Diagonal on the states satisfying `b`.
pub fn test_true(b: &BExp, u: &Universe) -> FinRel {
    test(b, u, true)
}

/// Diagonal on the states falsifying `b`.
pub fn test_false(b: &BExp, u: &Universe) -> FinRel {
    test(b, u, false)
}

fn traced_test(b: &BExp, u: &Universe, want: bool) -> Result<TraceRel> {
    let s = u.state_sort().clone();
    let triples = (0..u.state_count())
        .filter(|&i| eval_bexp(b, &u.decode_state(i)) == want)
        .map(|i| (st(i), Trace::nil(), st(i)));
    TraceRel::new(s.clone(), u.require_events()?.clone(), s, triples)
}

/// Successor of state `i` under `x := e`, or `None` when out of range.
pub(crate) fn assign(u: &Universe, var: usize, e: &super::ast::AExp, i: usize) -> Option<usize> {
    let mut vals = u.decode_state(i);
    let v = eval_aexp(e, &vals);
    vals[var] = i64::try_from(v).ok()?;
    u.encode_state(&vals)
}

pub(crate) fn event(u: &Universe, e: &super::ast::AExp, i: usize) -> Result<Atom> {
    let v = eval_aexp(e, &u.decode_state(i));
    u.event_for_value(v).cloned().ok_or_else(|| Error::EventOutOfAlphabet {
        value: v,
        state: u.render_state(i),
    })
}

fn no_write() -> Error {
    Error::Flavor("`write` needs the traced semantics".into())
}

struct Den<'u> {
    u: &'u Universe,
    stats: Stats,
    max_iter: usize,
}

impl Den<'_> {
    fn assign_rel(&mut self, var: usize, e: &super::ast::AExp) -> FinRel {
        let s = self.u.state_sort().clone();
        let mut tuples = Vec::new();
        for i in 0..self.u.state_count() {
            match assign(self.u, var, e, i) {
                Some(j) => tuples.push(Tuple(vec![st(i), st(j)])),
                None => self.stats.pruned += 1,
            }
        }
        FinRel::new(vec![s.clone(), s], tuples).expect("states are in range")
    }

    fn plain(&mut self, c: &Command) -> Result<FinRel> {
        Ok(match c {
            Command::Skip => id_r(self.u.state_sort()),
            Command::Assign(_, var, e) => self.assign_rel(*var, e),
            Command::Seq(a, b) => compose_rr(&self.plain(a)?, &self.plain(b)?)?,
            Command::If(b, t, f) => {
                let t = compose_rr(&test_true(b, self.u), &self.plain(t)?)?;
                let f = compose_rr(&test_false(b, self.u), &self.plain(f)?)?;
                t.union(&f)?
            }
            Command::While(b, body) => {
                let body = self.plain(body)?;
                self.while_nrm(b, &body)?
            }
            Command::Choice(a, b) => self.plain(a)?.union(&self.plain(b)?)?,
            Command::Write(_) => return Err(no_write()),
        })
    }

    /// `lfp X. test_true(b) ∘ body ∘ X ∪ test_false(b)`
    fn while_nrm(&mut self, b: &BExp, body: &FinRel) -> Result<FinRel> {
        let step = compose_rr(&test_true(b, self.u), body)?;
        let exit = test_false(b, self.u);
        let s = self.u.state_sort().clone();
        let f = MonotoneMap::new(vec![s.clone(), s], move |x| compose_rr(&step, x)?.union(&exit));
        let fp = lfp(&f)?;
        self.stats.iterations += fp.iterations;
        Ok(fp.value)
    }

    fn nrm_inf(&mut self, c: &Command) -> Result<NrmInf> {
        let none = || FinRel::empty(vec![self.u.state_sort().clone()]);
        Ok(match c {
            Command::Skip | Command::Assign(..) => NrmInf {
                nrm: self.plain(c)?,
                inf: none(),
            },
            Command::Seq(a, b) => {
                let (a, b) = (self.nrm_inf(a)?, self.nrm_inf(b)?);
                NrmInf {
                    nrm: compose_rr(&a.nrm, &b.nrm)?,
                    inf: a.inf.union(&compose_rs(&a.nrm, &b.inf)?)?,
                }
            }
            Command::If(b, t, f) => {
                let (t, f) = (self.nrm_inf(t)?, self.nrm_inf(f)?);
                let (tt, tf) = (test_true(b, self.u), test_false(b, self.u));
                NrmInf {
                    nrm: compose_rr(&tt, &t.nrm)?.union(&compose_rr(&tf, &f.nrm)?)?,
                    inf: compose_rs(&tt, &t.inf)?.union(&compose_rs(&tf, &f.inf)?)?,
                }
            }
            Command::Choice(a, b) => {
                let (a, b) = (self.nrm_inf(a)?, self.nrm_inf(b)?);
                NrmInf {
                    nrm: a.nrm.union(&b.nrm)?,
                    inf: a.inf.union(&b.inf)?,
                }
            }
            Command::While(b, body) => {
                let body = self.nrm_inf(body)?;
                let nrm = self.while_nrm(b, &body.nrm)?;
                let step = compose_rr(&test_true(b, self.u), &body.nrm)?;
                let sig = vec![self.u.state_sort().clone()];
                // states with an infinite run of complete iterations
                let spin = {
                    let step = step.clone();
                    MonotoneMap::new(sig.clone(), move |y| compose_rs(&step, y))
                };
                let spin = gfp(&spin, self.u.limits())?;
                // states that reach a diverging run of the body
                let enter = compose_rs(&test_true(b, self.u), &body.inf)?;
                let reach = MonotoneMap::new(sig, move |x| compose_rs(&step, x)?.union(&enter));
                let reach = lfp(&reach)?;
                self.stats.iterations += spin.iterations + reach.iterations;
                NrmInf {
                    nrm,
                    inf: spin.value.union(&reach.value)?,
                }
            }
            Command::Write(_) => return Err(no_write()),
        })
    }

    fn traced(&mut self, c: &Command) -> Result<TraceRel> {
        let u = self.u;
        let s = u.state_sort().clone();
        let ev = u.require_events()?.clone();
        Ok(match c {
            Command::Skip => id_t(&s, &ev),
            Command::Assign(_, var, e) => {
                let rel = self.assign_rel(*var, e);
                let triples = rel.pairs().map(|(a, b)| (a.clone(), Trace::nil(), b.clone()));
                TraceRel::new(s.clone(), ev, s, triples)?
            }
            Command::Write(e) => {
                let mut triples = Vec::new();
                for i in 0..u.state_count() {
                    triples.push((st(i), Trace(vec![event(u, e, i)?]), st(i)));
                }
                TraceRel::new(s.clone(), ev, s, triples)?
            }
            Command::Seq(a, b) => compose_tt(&self.traced(a)?, &self.traced(b)?)?,
            Command::If(b, t, f) => {
                let t = compose_tt(&traced_test(b, u, true)?, &self.traced(t)?)?;
                let f = compose_tt(&traced_test(b, u, false)?, &self.traced(f)?)?;
                t.union(&f)?
            }
            Command::Choice(a, b) => self.traced(a)?.union(&self.traced(b)?)?,
            Command::While(b, body) => {
                let body = self.traced(body)?;
                let step = compose_tt(&traced_test(b, u, true)?, &body)?;
                let exit = traced_test(b, u, false)?;
                let mut x = TraceRel::empty(s.clone(), ev, s);
                let mut reached = false;
                for _ in 0..self.max_iter {
                    self.stats.iterations += 1;
                    let next = compose_tt(&step, &x)?.union(&exit)?;
                    if next == x {
                        reached = true;
                        break;
                    }
                    x = next;
                    if x.len() > u.limits().trace_triples {
                        break;
                    }
                }
                self.stats.fixpoint_reached &= reached;
                x
            }
        })
    }
}

fn den(u: &Universe, max_iter: usize) -> Den<'_> {
    Den {
        u,
        stats: Stats {
            states: u.state_count(),
            fixpoint_reached: true,
            ..Stats::default()
        },
        max_iter,
    }
}

/// Relation over `state × state`; loops by least fixed point.
pub fn denote_plain(c: &Command, u: &Universe) -> Result<(FinRel, Stats)> {
    let mut d = den(u, 0);
    let r = d.plain(c)?;
    Ok((r, d.stats))
}

/// `nrm` as in [`denote_plain`]; `inf` collects the states from which some
/// run does not terminate. For a loop, `inf` is the union of the greatest
/// fixed point of `Y ↦ step ∘ Y` (endless iteration) and the least fixed
/// point of `X ↦ test_true(b) ∘ inf(body) ∪ step ∘ X` (reaching a diverging
/// body), where `step = test_true(b) ∘ nrm(body)`.
pub fn denote_nrm_inf(c: &Command, u: &Universe) -> Result<(NrmInf, Stats)> {
    let mut d = den(u, 0);
    let r = d.nrm_inf(c)?;
    Ok((r, d.stats))
}

/// Traced relation; each loop runs at most `max_iter` Kleene steps, and
/// `Stats::fixpoint_reached` reports whether all of them stabilized.
pub fn denote_traced(c: &Command, u: &Universe, max_iter: usize) -> Result<(TraceRel, Stats)> {
    let mut d = den(u, max_iter);
    let r = d.traced(c)?;
    Ok((r, d.stats))
}
