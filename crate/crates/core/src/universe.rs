//! Finite sorts, program variables and the event alphabet.
//!
//! Everything downstream works extensionally, so every sort carries an
//! explicit, sorted carrier. The `state` sort is synthesized from the declared
//! variable ranges: its atoms are the integers `0..n`, each one the rank of a
//! variable assignment in lexicographic (variable-name) order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Name of the synthesized sort of program states.
pub const STATE_SORT: &str = "state";
/// Name of the event-alphabet sort.
pub const EVENT_SORT: &str = "E";

/// An element of some carrier. Integers order before labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Int(i64),
    Label(Arc<str>),
}

impl Atom {
    pub fn label(s: &str) -> Atom {
        Atom::Label(Arc::from(s))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Atom::Int(v) => Some(*v),
            Atom::Label(_) => None,
        }
    }
}

impl From<i64> for Atom {
    fn from(v: i64) -> Self {
        Atom::Int(v)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::label(s)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Int(v) => write!(f, "{v}"),
            Atom::Label(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
struct SortInner {
    name: String,
    carrier: Vec<Atom>,
}

/// A named finite carrier. Cheap to clone.
#[derive(Clone, Debug, Eq)]
pub struct Sort(Arc<SortInner>);

impl PartialEq for Sort {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Sort {
    /// Builds a sort; the carrier is put in canonical (ascending) order.
    pub fn new(name: impl Into<String>, atoms: impl IntoIterator<Item = Atom>) -> Result<Sort> {
        let name = name.into();
        let mut carrier: Vec<Atom> = atoms.into_iter().collect();
        if carrier.is_empty() {
            return Err(Error::EmptyCarrier(name));
        }
        carrier.sort();
        if let Some(w) = carrier.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateAtom {
                sort: name,
                atom: w[0].to_string(),
            });
        }
        Ok(Sort(Arc::new(SortInner { name, carrier })))
    }

    pub fn ints(name: impl Into<String>, lo: i64, hi: i64) -> Result<Sort> {
        let name = name.into();
        if lo > hi {
            return Err(Error::EmptyRange { name, lo, hi });
        }
        Sort::new(name, (lo..=hi).map(Atom::Int))
    }

    pub fn labels(name: impl Into<String>, labels: &[&str]) -> Result<Sort> {
        Sort::new(name, labels.iter().map(|l| Atom::label(l)))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn carrier(&self) -> &[Atom] {
        &self.0.carrier
    }

    pub fn len(&self) -> usize {
        self.0.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.0.carrier.binary_search(a).is_ok()
    }

    pub fn position(&self, a: &Atom) -> Option<usize> {
        self.0.carrier.binary_search(a).ok()
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Renders a signature as `A*B*C` (`unit` for arity 0).
pub fn render_sig(sig: &[Sort]) -> String {
    if sig.is_empty() {
        return "unit".to_string();
    }
    sig.iter().map(Sort::name).collect::<Vec<_>>().join("*")
}

/// A tuple of atoms; ordering is lexicographic, i.e. componentwise atom order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Tuple(pub Vec<Atom>);

impl Tuple {
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn well_sorted(&self, sig: &[Sort]) -> bool {
        self.0.len() == sig.len() && self.0.iter().zip(sig).all(|(a, s)| s.contains(a))
    }
}

impl<const N: usize> From<[i64; N]> for Tuple {
    fn from(v: [i64; N]) -> Self {
        Tuple(v.iter().copied().map(Atom::Int).collect())
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Caps that keep the extensional operations finite and cheap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of tuples materialized by `enumerate_tuples`.
    pub tuple_space: u128,
    /// Maximum tuple-space size admitted by `general_union`/`general_intersect`.
    pub powerset_tuple_space: usize,
    /// Maximum number of traces in a trace-quantifier domain.
    pub trace_domain: usize,
    /// Maximum configurations visited by the operational oracles.
    pub config_space: usize,
    /// Maximum triples a traced loop denotation may grow to before its
    /// iteration is cut off.
    pub trace_triples: usize,
    /// Iteration bound for traced loops.
    pub loop_iterations: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            tuple_space: 1_000_000,
            powerset_tuple_space: 16,
            trace_domain: 100_000,
            config_space: 1_000_000,
            trace_triples: 200_000,
            loop_iterations: 64,
        }
    }
}

/// All tuples of `sig` in canonical order. The empty signature has exactly one
/// (empty) tuple.
pub fn enumerate_tuples(sig: &[Sort], limit: u128) -> Result<Vec<Tuple>> {
    let needed = sig
        .iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
        .unwrap_or(u128::MAX);
    if needed > limit {
        return Err(Error::SizeLimit {
            what: "tuple enumeration",
            needed,
            limit,
        });
    }
    let mut out = Vec::with_capacity(needed as usize);
    let mut idx = vec![0usize; sig.len()];
    loop {
        out.push(Tuple(
            idx.iter().zip(sig).map(|(&i, s)| s.carrier()[i].clone()).collect(),
        ));
        // odometer, last component fastest
        let mut k = sig.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < sig[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

impl VarDecl {
    pub fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn contains(&self, v: i128) -> bool {
        v >= self.lo as i128 && v <= self.hi as i128
    }
}

/// Declared sorts, variables and events. Immutable once built.
#[derive(Clone, Debug)]
pub struct Universe {
    sorts: BTreeMap<String, Sort>,
    vars: Vec<VarDecl>,
    state: Sort,
    events: Option<Sort>,
    event_values: BTreeMap<i64, Atom>,
    limits: Limits,
}

impl Universe {
    /// Builds a universe from parts. Variables are reordered by name.
    pub fn new(
        sorts: Vec<Sort>,
        mut vars: Vec<VarDecl>,
        events: Option<Vec<Atom>>,
        event_values: Vec<(Atom, i64)>,
    ) -> Result<Universe> {
        vars.sort_by(|a, b| a.name.cmp(&b.name));
        if let Some(w) = vars.windows(2).find(|w| w[0].name == w[1].name) {
            return Err(Error::DuplicateName(w[0].name.clone()));
        }
        for v in &vars {
            if v.lo > v.hi {
                return Err(Error::EmptyRange {
                    name: v.name.clone(),
                    lo: v.lo,
                    hi: v.hi,
                });
            }
        }
        let count = vars
            .iter()
            .try_fold(1u128, |acc, v| acc.checked_mul(v.width() as u128))
            .unwrap_or(u128::MAX);
        let limits = Limits::default();
        if count > limits.tuple_space {
            return Err(Error::SizeLimit {
                what: "state space",
                needed: count,
                limit: limits.tuple_space,
            });
        }
        let state = Sort::ints(STATE_SORT, 0, count as i64 - 1)?;

        let mut map = BTreeMap::new();
        let mut insert = |s: Sort| -> Result<()> {
            if map.insert(s.name().to_string(), s.clone()).is_some() {
                return Err(Error::DuplicateName(s.name().to_string()));
            }
            Ok(())
        };
        insert(state.clone())?;
        let events = match events {
            Some(atoms) => {
                let s = Sort::new(EVENT_SORT, atoms)?;
                insert(s.clone())?;
                Some(s)
            }
            None => None,
        };
        for s in sorts {
            insert(s)?;
        }
        let mut values = BTreeMap::new();
        for (label, v) in event_values {
            match &events {
                Some(ev) if ev.contains(&label) => {}
                _ => return Err(Error::IllFormed(format!("event `{label}` is not in the alphabet"))),
            }
            if values.insert(v, label).is_some() {
                return Err(Error::DuplicateName(format!("event value {v}")));
            }
        }
        Ok(Universe {
            sorts: map,
            vars,
            state,
            events,
            event_values: values,
            limits,
        })
    }

    pub fn with_limits(mut self, limits: Limits) -> Universe {
        self.limits = limits;
        self
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn sort(&self, name: &str) -> Option<&Sort> {
        self.sorts.get(name)
    }

    pub fn sorts(&self) -> impl Iterator<Item = &Sort> {
        self.sorts.values()
    }

    pub fn require_sort(&self, name: &str) -> Result<&Sort> {
        self.sort(name).ok_or_else(|| Error::UnknownSort(name.to_string()))
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn state_sort(&self) -> &Sort {
        &self.state
    }

    pub fn state_count(&self) -> usize {
        self.state.len()
    }

    pub fn events(&self) -> Option<&Sort> {
        self.events.as_ref()
    }

    pub fn require_events(&self) -> Result<&Sort> {
        self.events.as_ref().ok_or(Error::NoEvents)
    }

    pub fn event_for_value(&self, v: i128) -> Option<&Atom> {
        i64::try_from(v).ok().and_then(|v| self.event_values.get(&v))
    }

    /// Variable values of the state with the given rank.
    pub fn decode_state(&self, mut idx: usize) -> Vec<i64> {
        let mut vals = vec![0; self.vars.len()];
        for (k, v) in self.vars.iter().enumerate().rev() {
            let w = v.width();
            vals[k] = v.lo + (idx % w) as i64;
            idx /= w;
        }
        vals
    }

    /// Rank of a state; `None` if some value is out of its range.
    pub fn encode_state(&self, vals: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for (v, &x) in self.vars.iter().zip(vals) {
            if x < v.lo || x > v.hi {
                return None;
            }
            idx = idx * v.width() + (x - v.lo) as usize;
        }
        Some(idx)
    }

    pub fn render_state(&self, idx: usize) -> String {
        let vals = self.decode_state(idx);
        let body: Vec<String> = self
            .vars
            .iter()
            .zip(vals)
            .map(|(v, x)| format!("{}={}", v.name, x))
            .collect();
        format!("({})", body.join(","))
    }

    /// Renders a `state` atom; other atoms render as themselves.
    pub fn render_state_atom(&self, a: &Atom) -> String {
        match a {
            Atom::Int(i) if *i >= 0 && (*i as usize) < self.state_count() => {
                self.render_state(*i as usize)
            }
            other => other.to_string(),
        }
    }
}

impl Default for Universe {
    fn default() -> Self {
        Universe::new(vec![], vec![], None, vec![]).expect("empty universe is valid")
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        msg: msg.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn parse_atom(s: &str, line: usize) -> Result<Atom> {
    let s = s.trim();
    if let Ok(v) = s.parse::<i64>() {
        Ok(Atom::Int(v))
    } else if is_ident(s) {
        Ok(Atom::label(s))
    } else {
        Err(syntax(line, format!("bad atom `{s}`")))
    }
}

fn parse_int(s: &str, line: usize) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| syntax(line, format!("expected integer, found `{}`", s.trim())))
}

/// Parses the universe config format:
///
/// ```text
/// var <ident> : <int>..<int>
/// sort <ident> = { <atom> (, <atom>)* }
/// events <label> (<label>)*
/// event <label> = <int>
/// ```
pub fn parse_universe(text: &str) -> Result<Universe> {
    let mut sorts = Vec::new();
    let mut vars: Vec<VarDecl> = Vec::new();
    let mut events: Option<Vec<Atom>> = None;
    let mut event_values = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (kw, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let rest = rest.trim();
        match kw {
            "var" => {
                let (name, range) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax(line, "expected `var <ident> : <lo>..<hi>`"))?;
                let name = name.trim();
                if !is_ident(name) {
                    return Err(syntax(line, format!("bad identifier `{name}`")));
                }
                let (lo, hi) = range
                    .split_once("..")
                    .ok_or_else(|| syntax(line, "expected `<lo>..<hi>`"))?;
                let (lo, hi) = (parse_int(lo, line)?, parse_int(hi, line)?);
                if lo > hi {
                    return Err(Error::EmptyRange {
                        name: name.to_string(),
                        lo,
                        hi,
                    });
                }
                if vars.iter().any(|v| v.name == name) {
                    return Err(Error::DuplicateName(name.to_string()));
                }
                vars.push(VarDecl {
                    name: name.to_string(),
                    lo,
                    hi,
                });
            }
            "sort" => {
                let (name, body) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(line, "expected `sort <ident> = { ... }`"))?;
                let name = name.trim();
                if !is_ident(name) {
                    return Err(syntax(line, format!("bad identifier `{name}`")));
                }
                let body = body.trim();
                let inner = body
                    .strip_prefix('{')
                    .and_then(|b| b.strip_suffix('}'))
                    .ok_or_else(|| syntax(line, "expected `{ <atom>, ... }`"))?;
                let atoms = inner
                    .split(',')
                    .map(|a| parse_atom(a, line))
                    .collect::<Result<Vec<_>>>()?;
                sorts.push(Sort::new(name, atoms)?);
            }
            "events" => {
                if events.is_some() {
                    return Err(Error::DuplicateName(EVENT_SORT.to_string()));
                }
                let labels = rest
                    .split_whitespace()
                    .map(|l| {
                        if is_ident(l) {
                            Ok(Atom::label(l))
                        } else {
                            Err(syntax(line, format!("bad event label `{l}`")))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                if labels.is_empty() {
                    return Err(syntax(line, "`events` needs at least one label"));
                }
                events = Some(labels);
            }
            "event" => {
                let (label, value) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(line, "expected `event <label> = <int>`"))?;
                let label = label.trim();
                if !is_ident(label) {
                    return Err(syntax(line, format!("bad event label `{label}`")));
                }
                event_values.push((Atom::label(label), parse_int(value, line)?));
            }
            other => return Err(syntax(line, format!("unknown declaration `{other}`"))),
        }
    }
    Universe::new(sorts, vars, events, event_values)
}
