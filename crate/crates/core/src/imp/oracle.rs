//! Small-step interpreter used as an independent check on the denotations.
//!
//! A configuration is a continuation stack of command nodes plus a state;
//! the transition graph over configurations is finite because a loop only
//! re-pushes itself after its body has been popped.

use std::collections::{HashMap, HashSet, VecDeque};

use super::ast::{eval_bexp, Command};
use super::denote::{assign, event};
use crate::error::{Error, Result};
use crate::finrel::FinRel;
use crate::rels::{Trace, TraceRel};
use crate::universe::{Atom, Tuple, Universe};

type Config = (Vec<u32>, usize);

struct Arena<'c> {
    nodes: Vec<&'c Command>,
    kids: Vec<[u32; 2]>,
}

impl<'c> Arena<'c> {
    fn build(c: &'c Command) -> Arena<'c> {
        let mut a = Arena {
            nodes: Vec::new(),
            kids: Vec::new(),
        };
        a.add(c);
        a
    }

    fn add(&mut self, c: &'c Command) -> u32 {
        let id = self.nodes.len();
        self.nodes.push(c);
        self.kids.push([0, 0]);
        let kids = match c {
            Command::Seq(a, b) | Command::If(_, a, b) | Command::Choice(a, b) => {
                [self.add(a), self.add(b)]
            }
            Command::While(_, body) => [self.add(body), 0],
            _ => [0, 0],
        };
        self.kids[id] = kids;
        id as u32
    }

    /// Successors of a non-terminal configuration, with the event emitted.
    /// A pruned assignment has no successor.
    fn step(&self, u: &Universe, (stack, s): &Config) -> Result<Vec<(Option<Atom>, Config)>> {
        let mut rest = stack.clone();
        let top = rest.pop().expect("non-terminal configuration") as usize;
        let [k0, k1] = self.kids[top];
        let vals = || u.decode_state(*s);
        let push = |mut r: Vec<u32>, ids: &[u32]| {
            r.extend_from_slice(ids);
            r
        };
        Ok(match self.nodes[top] {
            Command::Skip => vec![(None, (rest, *s))],
            Command::Assign(_, var, e) => match assign(u, *var, e, *s) {
                Some(t) => vec![(None, (rest, t))],
                None => vec![],
            },
            Command::Seq(..) => vec![(None, (push(rest, &[k1, k0]), *s))],
            Command::If(b, ..) => {
                let k = if eval_bexp(b, &vals()) { k0 } else { k1 };
                vec![(None, (push(rest, &[k]), *s))]
            }
            Command::While(b, _) => {
                if eval_bexp(b, &vals()) {
                    vec![(None, (push(rest, &[top as u32, k0]), *s))]
                } else {
                    vec![(None, (rest, *s))]
                }
            }
            Command::Choice(..) => vec![
                (None, (push(rest.clone(), &[k0]), *s)),
                (None, (push(rest, &[k1]), *s)),
            ],
            Command::Write(e) => vec![(Some(event(u, e, *s)?), (rest, *s))],
        })
    }
}

fn cap_exceeded(u: &Universe, n: usize) -> Result<()> {
    let limit = u.limits().config_space;
    if n > limit {
        return Err(Error::SizeLimit {
            what: "configuration space",
            needed: n as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

fn no_write(c: &Command) -> Result<()> {
    if c.uses_write() {
        return Err(Error::Flavor("`write` needs the traced semantics".into()));
    }
    Ok(())
}

fn st(i: usize) -> Atom {
    Atom::Int(i as i64)
}

/// Terminal states reachable from each initial state.
pub fn oracle_plain(c: &Command, u: &Universe) -> Result<FinRel> {
    no_write(c)?;
    let arena = Arena::build(c);
    let mut out = Vec::new();
    let mut visited_total = 0;
    for s0 in 0..u.state_count() {
        let start: Config = (vec![0], s0);
        let mut seen = HashSet::from([start.clone()]);
        let mut todo = vec![start];
        while let Some(cfg) = todo.pop() {
            if cfg.0.is_empty() {
                out.push(Tuple(vec![st(s0), st(cfg.1)]));
                continue;
            }
            for (_, next) in arena.step(u, &cfg)? {
                if seen.insert(next.clone()) {
                    todo.push(next);
                }
            }
        }
        visited_total += seen.len();
        cap_exceeded(u, visited_total)?;
    }
    let s = u.state_sort().clone();
    FinRel::new(vec![s.clone(), s], out)
}

/// Initial states with an infinite run, i.e. that reach a cycle of the
/// configuration graph.
pub fn oracle_inf(c: &Command, u: &Universe) -> Result<FinRel> {
    no_write(c)?;
    let arena = Arena::build(c);
    let mut ids: HashMap<Config, usize> = HashMap::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    for s0 in 0..u.state_count() {
        let cfg: Config = (vec![0], s0);
        ids.entry(cfg.clone()).or_insert_with(|| {
            succ.push(vec![]);
            queue.push_back(cfg);
            succ.len() - 1
        });
    }
    while let Some(cfg) = queue.pop_front() {
        let id = ids[&cfg];
        if cfg.0.is_empty() {
            continue;
        }
        for (_, next) in arena.step(u, &cfg)? {
            let nid = match ids.get(&next) {
                Some(&n) => n,
                None => {
                    succ.push(vec![]);
                    let n = succ.len() - 1;
                    ids.insert(next.clone(), n);
                    queue.push_back(next);
                    n
                }
            };
            succ[id].push(nid);
        }
        cap_exceeded(u, succ.len())?;
    }
    // peel off configurations all of whose runs are finite
    let n = succ.len();
    let mut preds: Vec<Vec<usize>> = vec![vec![]; n];
    let mut out_deg: Vec<usize> = vec![0; n];
    for (v, ss) in succ.iter().enumerate() {
        out_deg[v] = ss.len();
        for &w in ss {
            preds[w].push(v);
        }
    }
    let mut dead: Vec<bool> = vec![false; n];
    let mut work: Vec<usize> = (0..n).filter(|&v| out_deg[v] == 0).collect();
    while let Some(v) = work.pop() {
        if dead[v] {
            continue;
        }
        dead[v] = true;
        for &p in &preds[v] {
            out_deg[p] -= 1;
            if out_deg[p] == 0 {
                work.push(p);
            }
        }
    }
    let out = (0..u.state_count())
        .filter(|&s0| !dead[ids[&(vec![0], s0)]])
        .map(|s0| Tuple(vec![st(s0)]));
    FinRel::new(vec![u.state_sort().clone()], out)
}

/// Terminating runs whose event trace has length at most `len_bound`.
pub fn oracle_traced(c: &Command, u: &Universe, len_bound: usize) -> Result<TraceRel> {
    let arena = Arena::build(c);
    let mut out = Vec::new();
    let mut visited_total = 0;
    for s0 in 0..u.state_count() {
        let start = ((vec![0], s0), Vec::<Atom>::new());
        let mut seen = HashSet::from([start.clone()]);
        let mut todo = vec![start];
        while let Some((cfg, trace)) = todo.pop() {
            if cfg.0.is_empty() {
                out.push((st(s0), Trace(trace), st(cfg.1)));
                continue;
            }
            for (ev, next) in arena.step(u, &cfg)? {
                let mut t = trace.clone();
                if let Some(e) = ev {
                    if t.len() == len_bound {
                        continue;
                    }
                    t.push(e);
                }
                let item = (next, t);
                if seen.insert(item.clone()) {
                    todo.push(item);
                }
            }
        }
        visited_total += seen.len();
        cap_exceeded(u, visited_total)?;
    }
    let s = u.state_sort().clone();
    TraceRel::new(s.clone(), u.require_events()?.clone(), s, out)
}
