use std::fmt;

use crate::error::{Error, Result};
use crate::rels::Trace;
use crate::universe::Atom;

/// One component of a symbolic signature: a named sort or an event trace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Sort(String),
    Trace,
}

impl Slot {
    pub fn sort(name: &str) -> Slot {
        Slot::Sort(name.to_string())
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Sort(n) => f.write_str(n),
            Slot::Trace => f.write_str("trace"),
        }
    }
}

pub type Sig = Vec<Slot>;

pub fn render_slots(sig: &[Slot]) -> String {
    if sig.is_empty() {
        return "unit".into();
    }
    sig.iter().map(ToString::to_string).collect::<Vec<_>>().join("*")
}

/// The runtime kind a signature denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Plain relation over sorts (any arity).
    Rel,
    /// `A × E* × B`.
    TraceRel,
    /// `A × E*`.
    TraceSet,
}

pub fn kind_of(sig: &[Slot]) -> Result<Kind> {
    match sig {
        s if s.iter().all(|x| matches!(x, Slot::Sort(_))) => Ok(Kind::Rel),
        [Slot::Sort(_), Slot::Trace, Slot::Sort(_)] => Ok(Kind::TraceRel),
        [Slot::Sort(_), Slot::Trace] => Ok(Kind::TraceSet),
        _ => Err(Error::IllFormed(format!(
            "unsupported signature {}",
            render_slots(sig)
        ))),
    }
}

/// Symbolic set-algebra expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    Var { name: String, sig: Sig },
    Empty(Sig),
    Full(Sig),
    Union(Box<SetExpr>, Box<SetExpr>),
    Intersect(Box<SetExpr>, Box<SetExpr>),
    IndexedUnion { family: String, index: String, sig: Sig },
    IndexedIntersect { family: String, index: String, sig: Sig },
    ConcatRR(Box<SetExpr>, Box<SetExpr>),
    ConcatRS(Box<SetExpr>, Box<SetExpr>),
    ConcatTT(Box<SetExpr>, Box<SetExpr>),
    ConcatTS(Box<SetExpr>, Box<SetExpr>),
    IdR(String),
    IdT(String),
}

fn mismatch(l: &[Slot], r: &[Slot]) -> Error {
    Error::SigMismatch {
        left: render_slots(l),
        right: render_slots(r),
    }
}

impl SetExpr {
    pub fn var(name: &str, sig: &[&str]) -> SetExpr {
        SetExpr::Var {
            name: name.to_string(),
            sig: sig
                .iter()
                .map(|s| if *s == "trace" { Slot::Trace } else { Slot::sort(s) })
                .collect(),
        }
    }

    pub fn union(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn intersect(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::Intersect(Box::new(a), Box::new(b))
    }

    pub fn concat_rr(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::ConcatRR(Box::new(a), Box::new(b))
    }

    pub fn concat_rs(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::ConcatRS(Box::new(a), Box::new(b))
    }

    pub fn concat_tt(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::ConcatTT(Box::new(a), Box::new(b))
    }

    pub fn concat_ts(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::ConcatTS(Box::new(a), Box::new(b))
    }

    /// Signature of the expression, checking every composition rule.
    pub fn sig(&self) -> Result<Sig> {
        use SetExpr::*;
        match self {
            Var { sig, .. } | Empty(sig) => {
                kind_of(sig)?;
                Ok(sig.clone())
            }
            Full(sig) => match kind_of(sig)? {
                Kind::Rel => Ok(sig.clone()),
                _ => Err(Error::IllFormed(format!(
                    "full over {} is infinite",
                    render_slots(sig)
                ))),
            },
            Union(a, b) | Intersect(a, b) => {
                let (sa, sb) = (a.sig()?, b.sig()?);
                if sa != sb {
                    return Err(mismatch(&sa, &sb));
                }
                Ok(sa)
            }
            IndexedUnion { sig, .. } | IndexedIntersect { sig, .. } => {
                kind_of(sig)?;
                Ok(sig.clone())
            }
            ConcatRR(a, b) => match (a.sig()?.as_slice(), b.sig()?.as_slice()) {
                ([x @ Slot::Sort(_), m1 @ Slot::Sort(_)], [m2, z @ Slot::Sort(_)]) if m1 == m2 => {
                    Ok(vec![x.clone(), z.clone()])
                }
                (l, r) => Err(mismatch(l, r)),
            },
            ConcatRS(a, b) => match (a.sig()?.as_slice(), b.sig()?.as_slice()) {
                ([x @ Slot::Sort(_), m1 @ Slot::Sort(_)], [m2]) if m1 == m2 => Ok(vec![x.clone()]),
                (l, r) => Err(mismatch(l, r)),
            },
            ConcatTT(a, b) => match (a.sig()?.as_slice(), b.sig()?.as_slice()) {
                (
                    [x @ Slot::Sort(_), Slot::Trace, m1 @ Slot::Sort(_)],
                    [m2, Slot::Trace, z @ Slot::Sort(_)],
                ) if m1 == m2 => Ok(vec![x.clone(), Slot::Trace, z.clone()]),
                (l, r) => Err(mismatch(l, r)),
            },
            ConcatTS(a, b) => match (a.sig()?.as_slice(), b.sig()?.as_slice()) {
                ([x @ Slot::Sort(_), Slot::Trace, m1 @ Slot::Sort(_)], [m2, Slot::Trace])
                    if m1 == m2 =>
                {
                    Ok(vec![x.clone(), Slot::Trace])
                }
                (l, r) => Err(mismatch(l, r)),
            },
            IdR(a) => Ok(vec![Slot::sort(a), Slot::sort(a)]),
            IdT(a) => Ok(vec![Slot::sort(a), Slot::Trace, Slot::sort(a)]),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        use SetExpr::*;
        match self {
            Union(a, b) | Intersect(a, b) | ConcatRR(a, b) | ConcatRS(a, b) | ConcatTT(a, b)
            | ConcatTS(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    /// Names of the set variables and families referenced.
    pub fn names(&self, out: &mut Vec<String>) {
        use SetExpr::*;
        match self {
            Var { name, .. } => out.push(name.clone()),
            IndexedUnion { family, .. } | IndexedIntersect { family, .. } => {
                out.push(family.clone())
            }
            Union(a, b) | Intersect(a, b) | ConcatRR(a, b) | ConcatRS(a, b) | ConcatTT(a, b)
            | ConcatTS(a, b) => {
                a.names(out);
                b.names(out);
            }
            Empty(_) | Full(_) | IdR(_) | IdT(_) => {}
        }
    }

    fn prec(&self) -> u8 {
        use SetExpr::*;
        match self {
            Union(..) => 1,
            Intersect(..) => 2,
            ConcatRR(..) | ConcatRS(..) | ConcatTT(..) | ConcatTS(..) => 3,
            _ => 4,
        }
    }
}

/// Unicode rendering: `∪`, `∩`, `∘`, `∅`, `⋃`, `⋂`; `∘` binds tightest and
/// all binary operators associate to the left.
pub fn render_expr(e: &SetExpr) -> String {
    e.to_string()
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SetExpr::*;
        let bin = |f: &mut fmt::Formatter<'_>, a: &SetExpr, op: &str, b: &SetExpr| {
            let p = self.prec();
            if a.prec() < p {
                write!(f, "({a})")?;
            } else {
                write!(f, "{a}")?;
            }
            write!(f, " {op} ")?;
            if b.prec() <= p {
                write!(f, "({b})")
            } else {
                write!(f, "{b}")
            }
        };
        match self {
            Var { name, .. } => f.write_str(name),
            Empty(_) => f.write_str("∅"),
            Full(_) => f.write_str("full"),
            Union(a, b) => bin(f, a, "∪", b),
            Intersect(a, b) => bin(f, a, "∩", b),
            ConcatRR(a, b) | ConcatRS(a, b) | ConcatTT(a, b) | ConcatTS(a, b) => bin(f, a, "∘", b),
            IndexedUnion { family, .. } => write!(f, "⋃ {family}"),
            IndexedIntersect { family, .. } => write!(f, "⋂ {family}"),
            IdR(_) | IdT(_) => f.write_str("id"),
        }
    }
}

/// A literal component of a membership statement.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Atom(Atom),
    Trace(Trace),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(a) => write!(f, "{a}"),
            Value::Trace(t) => write!(f, "{t}"),
        }
    }
}

/// A set-level statement to be unfolded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Equiv(SetExpr, SetExpr),
    Included(SetExpr, SetExpr),
    Member(Vec<Value>, SetExpr),
}

impl Statement {
    /// Checks signatures; returns the common signature.
    pub fn check(&self) -> Result<Sig> {
        match self {
            Statement::Equiv(a, b) | Statement::Included(a, b) => {
                let (sa, sb) = (a.sig()?, b.sig()?);
                if sa != sb {
                    return Err(mismatch(&sa, &sb));
                }
                Ok(sa)
            }
            Statement::Member(vals, e) => {
                let sig = e.sig()?;
                let ok = vals.len() == sig.len()
                    && vals.iter().zip(&sig).all(|(v, s)| {
                        matches!((v, s), (Value::Atom(_), Slot::Sort(_)) | (Value::Trace(_), Slot::Trace))
                    });
                if !ok {
                    let vs: Vec<String> = vals.iter().map(ToString::to_string).collect();
                    return Err(Error::IllSorted {
                        tuple: format!("({})", vs.join(",")),
                        sig: render_slots(&sig),
                    });
                }
                Ok(sig)
            }
        }
    }

    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            Statement::Equiv(a, b) | Statement::Included(a, b) => {
                a.names(&mut out);
                b.names(&mut out);
            }
            Statement::Member(_, e) => e.names(&mut out),
        }
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Equiv(a, b) => write!(f, "{a} == {b}"),
            Statement::Included(a, b) => write!(f, "{a} ⊆ {b}"),
            Statement::Member(vals, e) => {
                let vs: Vec<String> = vals.iter().map(ToString::to_string).collect();
                if vs.len() == 1 {
                    write!(f, "{} ∈ {e}", vs[0])
                } else {
                    write!(f, "({}) ∈ {e}", vs.join(", "))
                }
            }
        }
    }
}
