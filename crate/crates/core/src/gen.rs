//! Seeded random instances for the property suites.
//!
//! Distributions: each candidate tuple is included independently with
//! probability `density` (0.5 by default); trace lengths are geometric with
//! success probability 1/3 (mean 2), capped at `max_trace`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::finrel::{FinRel, IndexedFamily};
use crate::imp::{AExp, BExp, Command};
use crate::rels::{Lasso, OmegaSet, Trace, TraceRel, TraceSet};
use crate::symbolic::{FamilyValue, Model, SetExpr, SetValue, Sig, Slot, Statement, Value};
use crate::universe::{Atom, Sort, Tuple, Universe, VarDecl};

pub type Rng64 = ChaCha8Rng;

/// Independent generator for case `case` of stream `stream` under `seed`.
pub fn case_rng(seed: u64, stream: u64, case: u64) -> Rng64 {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream << 32 | case);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub max_carrier: usize,
    pub density: f64,
    pub trace_p: f64,
    pub max_trace: usize,
    pub events: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_carrier: 4,
            density: 0.5,
            trace_p: 1.0 / 3.0,
            max_trace: 4,
            events: 2,
        }
    }
}

const EVENT_LABELS: [&str; 4] = ["a", "b", "c", "d"];

pub fn event_sort(n: usize) -> Sort {
    Sort::labels("E", &EVENT_LABELS[..n.clamp(1, 4)]).expect("distinct labels")
}

/// `{0, .., k-1}` with `k` uniform in `1..=max`.
pub fn sort(rng: &mut Rng64, name: &str, max: usize) -> Sort {
    let k = rng.gen_range(1..=max.max(1));
    Sort::ints(name, 0, k as i64 - 1).expect("nonempty range")
}

pub fn rel(rng: &mut Rng64, sig: &[Sort], cfg: &GenConfig) -> FinRel {
    let space = crate::universe::enumerate_tuples(sig, u128::MAX).expect("small signature");
    let tuples: Vec<Tuple> = space.into_iter().filter(|_| rng.gen_bool(cfg.density)).collect();
    FinRel::new(sig.to_vec(), tuples).expect("tuples come from the signature")
}

fn pick(rng: &mut Rng64, s: &Sort) -> Atom {
    s.carrier().choose(rng).expect("nonempty carrier").clone()
}

pub fn trace(rng: &mut Rng64, events: &Sort, cfg: &GenConfig) -> Trace {
    let mut n = 0;
    while n < cfg.max_trace && !rng.gen_bool(cfg.trace_p) {
        n += 1;
    }
    Trace((0..n).map(|_| pick(rng, events)).collect())
}

/// Each endpoint pair carries up to two random traces.
pub fn trace_rel(rng: &mut Rng64, src: &Sort, events: &Sort, dst: &Sort, cfg: &GenConfig) -> TraceRel {
    let mut triples = Vec::new();
    for a in src.carrier() {
        for b in dst.carrier() {
            for _ in 0..2 {
                if rng.gen_bool(cfg.density) {
                    triples.push((a.clone(), trace(rng, events, cfg), b.clone()));
                }
            }
        }
    }
    TraceRel::new(src.clone(), events.clone(), dst.clone(), triples).expect("well-sorted")
}

pub fn trace_set(rng: &mut Rng64, src: &Sort, events: &Sort, cfg: &GenConfig) -> TraceSet {
    let mut pairs = Vec::new();
    for a in src.carrier() {
        for _ in 0..2 {
            if rng.gen_bool(cfg.density) {
                pairs.push((a.clone(), trace(rng, events, cfg)));
            }
        }
    }
    TraceSet::new(src.clone(), events.clone(), pairs).expect("well-sorted")
}

/// Prefix and cycle lengths drawn like traces; the cycle is nonempty.
pub fn lasso(rng: &mut Rng64, events: &Sort, cfg: &GenConfig) -> Lasso {
    let prefix = trace(rng, events, cfg);
    let mut cycle = trace(rng, events, cfg);
    if cycle.is_empty() {
        cycle.0.push(pick(rng, events));
    }
    Lasso::new(prefix, cycle).expect("nonempty cycle")
}

pub fn omega_set(rng: &mut Rng64, src: &Sort, events: &Sort, cfg: &GenConfig) -> OmegaSet {
    let mut pairs = Vec::new();
    for a in src.carrier() {
        for _ in 0..2 {
            if rng.gen_bool(cfg.density) {
                pairs.push((a.clone(), lasso(rng, events, cfg)));
            }
        }
    }
    OmegaSet::new(src.clone(), events.clone(), pairs).expect("well-sorted")
}

/// A random family indexed by a random sort `I`.
pub fn family<T: crate::finrel::SetAlgebra>(
    rng: &mut Rng64,
    cfg: &GenConfig,
    mut member: impl FnMut(&mut Rng64) -> T,
) -> IndexedFamily<T> {
    let index = sort(rng, "I", cfg.max_carrier);
    IndexedFamily::tabulate(index, |_| member(rng)).expect("members share a shape")
}

// ---- statements and models ----

/// Sorts `A`, `B`, `C`, index sort `I` and events `E`, all small.
pub fn symbolic_universe(rng: &mut Rng64, cfg: &GenConfig) -> Universe {
    let max = cfg.max_carrier.min(3);
    let sorts = vec![sort(rng, "A", max), sort(rng, "B", max), sort(rng, "C", max), sort(rng, "I", max)];
    let events = event_sort(cfg.events).carrier().to_vec();
    Universe::new(sorts, vec![], Some(events), vec![]).expect("valid universe")
}

const SORTS: [&str; 3] = ["A", "B", "C"];

fn random_sort_name(rng: &mut Rng64) -> String {
    SORTS.choose(rng).expect("nonempty").to_string()
}

fn random_sig(rng: &mut Rng64) -> Sig {
    let s = |rng: &mut Rng64| Slot::Sort(random_sort_name(rng));
    match rng.gen_range(0..6) {
        0 => vec![],
        1 => vec![s(rng)],
        2 | 3 => vec![s(rng), s(rng)],
        4 => vec![s(rng), Slot::Trace, s(rng)],
        _ => vec![s(rng), Slot::Trace],
    }
}

struct ExprGen<'r> {
    rng: &'r mut Rng64,
    vars: Vec<(String, Sig)>,
    families: Vec<(String, Sig)>,
}

impl ExprGen<'_> {
    fn var(&mut self, sig: &Sig) -> SetExpr {
        let same: Vec<&(String, Sig)> = self.vars.iter().filter(|(_, s)| s == sig).collect();
        let name = if !same.is_empty() && (same.len() >= 2 || self.rng.gen_bool(0.5)) {
            same.choose(self.rng).expect("nonempty").0.clone()
        } else {
            let n = format!("X{}", self.vars.len());
            self.vars.push((n.clone(), sig.clone()));
            n
        };
        SetExpr::Var {
            name,
            sig: sig.clone(),
        }
    }

    fn family(&mut self, sig: &Sig, union: bool) -> SetExpr {
        let family = match self.families.iter().find(|(_, s)| s == sig) {
            Some((n, _)) if self.rng.gen_bool(0.5) => n.clone(),
            _ => {
                let n = format!("F{}", self.families.len());
                self.families.push((n.clone(), sig.clone()));
                n
            }
        };
        let (index, sig) = ("I".to_string(), sig.clone());
        if union {
            SetExpr::IndexedUnion { family, index, sig }
        } else {
            SetExpr::IndexedIntersect { family, index, sig }
        }
    }

    fn expr(&mut self, sig: &Sig, depth: usize) -> SetExpr {
        let traced = sig.contains(&Slot::Trace);
        let leaf = depth == 0 || self.rng.gen_bool(0.3);
        if leaf {
            return match self.rng.gen_range(0..10) {
                0 => SetExpr::Empty(sig.clone()),
                1 if !traced => SetExpr::Full(sig.clone()),
                2 => match sig.as_slice() {
                    [Slot::Sort(a), Slot::Sort(b)] if a == b => SetExpr::IdR(a.clone()),
                    [Slot::Sort(a), Slot::Trace, Slot::Sort(b)] if a == b => SetExpr::IdT(a.clone()),
                    _ => self.var(sig),
                },
                3 => self.family(sig, true),
                4 => self.family(sig, false),
                _ => self.var(sig),
            };
        }
        let composable = matches!(sig.len(), 1..=3) && sig[0] != Slot::Trace;
        match self.rng.gen_range(0..5) {
            0 | 1 if composable => {
                let m = Slot::Sort(random_sort_name(self.rng));
                let (ls, rs): (Sig, Sig) = match sig.as_slice() {
                    [x, Slot::Trace, z] => (vec![x.clone(), Slot::Trace, m.clone()], vec![m, Slot::Trace, z.clone()]),
                    [x, Slot::Trace] => (vec![x.clone(), Slot::Trace, m.clone()], vec![m, Slot::Trace]),
                    [x, z] => (vec![x.clone(), m.clone()], vec![m, z.clone()]),
                    [x] => (vec![x.clone(), m.clone()], vec![m]),
                    _ => unreachable!("composable signatures"),
                };
                let (l, r) = (self.expr(&ls, depth - 1), self.expr(&rs, depth - 1));
                match (ls.len(), rs.len()) {
                    (2, 2) => SetExpr::concat_rr(l, r),
                    (2, 1) => SetExpr::concat_rs(l, r),
                    (3, 3) => SetExpr::concat_tt(l, r),
                    _ => SetExpr::concat_ts(l, r),
                }
            }
            0 | 2 => SetExpr::union(self.expr(sig, depth - 1), self.expr(sig, depth - 1)),
            _ => SetExpr::intersect(self.expr(sig, depth - 1), self.expr(sig, depth - 1)),
        }
    }
}

fn slot_sort(u: &Universe, s: &Slot) -> Sort {
    match s {
        Slot::Sort(n) => u.sort(n).expect("generated sorts exist").clone(),
        Slot::Trace => u.events().expect("events declared").clone(),
    }
}

fn random_value(rng: &mut Rng64, u: &Universe, sig: &Sig, cfg: &GenConfig) -> SetValue {
    let sorts: Vec<Sort> = sig.iter().filter(|s| **s != Slot::Trace).map(|s| slot_sort(u, s)).collect();
    let ev = u.events().expect("events declared");
    match sig.as_slice() {
        [_, Slot::Trace, _] => SetValue::Traces(trace_rel(rng, &sorts[0], ev, &sorts[1], cfg)),
        [_, Slot::Trace] => SetValue::TraceSet(trace_set(rng, &sorts[0], ev, cfg)),
        _ => SetValue::Rel(rel(rng, &sorts, cfg)),
    }
}

/// A random well-formed statement of depth at most `depth` together with a
/// model assigning every name it mentions.
///
/// Model traces are capped at length 2: the unfolded formula quantifies over
/// every trace up to the summed lengths along a concatenation chain, which
/// grows exponentially in that sum.
pub fn statement_and_model(rng: &mut Rng64, cfg: &GenConfig, depth: usize) -> (Statement, Model) {
    let cfg = &GenConfig {
        max_trace: cfg.max_trace.min(2),
        ..*cfg
    };
    let u = symbolic_universe(rng, cfg);
    let sig = random_sig(rng);
    let mut g = ExprGen {
        rng,
        vars: vec![],
        families: vec![],
    };
    let stmt = match g.rng.gen_range(0..5) {
        0 | 1 => Statement::Equiv(g.expr(&sig, depth), g.expr(&sig, depth)),
        2 | 3 => Statement::Included(g.expr(&sig, depth), g.expr(&sig, depth)),
        _ => {
            let e = g.expr(&sig, depth);
            let vals = sig
                .iter()
                .map(|s| match s {
                    Slot::Trace => Value::Trace(trace(g.rng, u.events().expect("events"), cfg)),
                    s => Value::Atom(pick(g.rng, &slot_sort(&u, s))),
                })
                .collect();
            Statement::Member(vals, e)
        }
    };
    let (vars, families) = (g.vars, g.families);
    let mut m = Model::new(u.clone());
    for (name, sig) in vars {
        let v = random_value(rng, &u, &sig, cfg);
        m.insert(&name, v);
    }
    let index = u.sort("I").expect("index sort").clone();
    for (name, sig) in families {
        let members: Vec<(Atom, SetValue)> = index
            .carrier()
            .iter()
            .map(|i| (i.clone(), random_value(rng, &u, &sig, cfg)))
            .collect();
        let fam = match &members[0].1 {
            SetValue::Rel(_) => FamilyValue::Rel(
                IndexedFamily::new(
                    index.clone(),
                    members.into_iter().map(|(i, v)| match v {
                        SetValue::Rel(r) => (i, r),
                        _ => unreachable!(),
                    }),
                )
                .expect("total family"),
            ),
            SetValue::Traces(_) => FamilyValue::Traces(
                IndexedFamily::new(
                    index.clone(),
                    members.into_iter().map(|(i, v)| match v {
                        SetValue::Traces(r) => (i, r),
                        _ => unreachable!(),
                    }),
                )
                .expect("total family"),
            ),
            SetValue::TraceSet(_) => FamilyValue::TraceSet(
                IndexedFamily::new(
                    index.clone(),
                    members.into_iter().map(|(i, v)| match v {
                        SetValue::TraceSet(r) => (i, r),
                        _ => unreachable!(),
                    }),
                )
                .expect("total family"),
            ),
        };
        m.insert_family(&name, fam);
    }
    (stmt, m)
}

// ---- programs ----

/// Options for random programs: at most `max_depth` levels of commands.
#[derive(Clone, Copy, Debug)]
pub struct ProgramGen {
    pub max_depth: usize,
    pub allow_write: bool,
    pub allow_choice: bool,
}

/// One or two variables with ranges `0..hi`, `hi ≤ 3`, and events `a..d`
/// mapped to `0..3`, so every expression over the variables or constants
/// `0..3` is a valid event value.
pub fn program_universe(rng: &mut Rng64) -> Universe {
    let names = ["x", "y"];
    let n = rng.gen_range(1..=2);
    let vars = names[..n]
        .iter()
        .map(|name| VarDecl {
            name: name.to_string(),
            lo: 0,
            hi: rng.gen_range(1..=3),
        })
        .collect();
    let events: Vec<Atom> = EVENT_LABELS.iter().map(|l| Atom::label(l)).collect();
    let values = events.iter().cloned().zip(0..).collect();
    Universe::new(vec![], vars, Some(events), values).expect("valid universe")
}

fn var(rng: &mut Rng64, u: &Universe) -> AExp {
    let i = rng.gen_range(0..u.vars().len());
    AExp::Var(u.vars()[i].name.clone(), i)
}

pub fn aexp(rng: &mut Rng64, u: &Universe, depth: usize) -> AExp {
    if depth == 0 || rng.gen_bool(0.5) {
        return if rng.gen_bool(0.5) {
            AExp::Num(rng.gen_range(0..=3))
        } else {
            var(rng, u)
        };
    }
    let (a, b) = (aexp(rng, u, depth - 1), aexp(rng, u, depth - 1));
    match rng.gen_range(0..4) {
        0 | 1 => AExp::add(a, b),
        2 => AExp::sub(a, b),
        _ => AExp::mul(a, b),
    }
}

/// A variable or a constant in `0..=3`; always a mapped event value.
fn event_arg(rng: &mut Rng64, u: &Universe) -> AExp {
    if rng.gen_bool(0.5) {
        AExp::Num(rng.gen_range(0..=3))
    } else {
        var(rng, u)
    }
}

pub fn bexp(rng: &mut Rng64, u: &Universe, depth: usize) -> BExp {
    if depth == 0 || rng.gen_bool(0.6) {
        let (a, b) = (aexp(rng, u, 1), aexp(rng, u, 1));
        return match rng.gen_range(0..8) {
            0 => BExp::True,
            1 => BExp::False,
            2 | 3 => BExp::Eq(a, b),
            4 | 5 => BExp::Le(a, b),
            _ => BExp::Lt(a, b),
        };
    }
    match rng.gen_range(0..3) {
        0 => BExp::not(bexp(rng, u, depth - 1)),
        1 => BExp::and(bexp(rng, u, depth - 1), bexp(rng, u, depth - 1)),
        _ => BExp::or(bexp(rng, u, depth - 1), bexp(rng, u, depth - 1)),
    }
}

impl ProgramGen {
    pub fn command(&self, rng: &mut Rng64, u: &Universe) -> Command {
        self.at(rng, u, self.max_depth)
    }

    fn leaf(&self, rng: &mut Rng64, u: &Universe) -> Command {
        match rng.gen_range(0..6) {
            0 => Command::Skip,
            1 if self.allow_write => Command::Write(event_arg(rng, u)),
            _ => {
                let AExp::Var(x, i) = var(rng, u) else { unreachable!() };
                Command::Assign(x, i, aexp(rng, u, 1))
            }
        }
    }

    /// `while (x < k) do { body; x := x + 1 }`: terminates whenever the body
    /// does and leaves `x` alone, so loops also produce long finite traces.
    fn counting_loop(&self, rng: &mut Rng64, u: &Universe, depth: usize) -> Command {
        let AExp::Var(x, i) = var(rng, u) else { unreachable!() };
        let k = rng.gen_range(1..=u.vars()[i].hi);
        let body = self.at(rng, u, depth);
        let step = Command::Assign(x.clone(), i, AExp::add(AExp::Var(x.clone(), i), AExp::Num(1)));
        Command::while_(
            BExp::Lt(AExp::Var(x, i), AExp::Num(k)),
            Command::seq(body, step),
        )
    }

    fn at(&self, rng: &mut Rng64, u: &Universe, depth: usize) -> Command {
        if depth <= 1 || rng.gen_bool(0.25) {
            return self.leaf(rng, u);
        }
        let d = depth - 1;
        match rng.gen_range(0..9) {
            0..=2 => Command::seq(self.at(rng, u, d), self.at(rng, u, d)),
            3 | 4 => Command::if_(bexp(rng, u, 1), self.at(rng, u, d), self.at(rng, u, d)),
            5 | 6 => Command::while_(bexp(rng, u, 1), self.at(rng, u, d)),
            7 if d >= 2 => self.counting_loop(rng, u, d - 1),
            _ if self.allow_choice => Command::choice(self.at(rng, u, d), self.at(rng, u, d)),
            _ => Command::seq(self.at(rng, u, d), self.at(rng, u, d)),
        }
    }
}
