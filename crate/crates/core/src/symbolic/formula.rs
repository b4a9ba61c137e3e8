use std::fmt;

use super::expr::{Slot, Value};

/// A first-order term: a bound variable or a literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(Value),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(Value::Atom(a)) => write!(f, "{a}"),
            Term::Const(Value::Trace(t)) if t.is_empty() => f.write_str("nil"),
            Term::Const(Value::Trace(t)) => {
                let items: Vec<String> = t.0.iter().map(ToString::to_string).collect();
                write!(f, "[{}]", items.join("; "))
            }
        }
    }
}

/// The set a membership atom refers to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetRef {
    Named(String),
    Member { family: String, index: Term },
}

impl fmt::Display for SetRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetRef::Named(n) => f.write_str(n),
            SetRef::Member { family, index } => write!(f, "{family} {index}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binder {
    pub name: String,
    pub ty: Slot,
}

/// Pointwise first-order formulas over membership atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Binder, Box<Formula>),
    Exists(Binder, Box<Formula>),
    Mem(Vec<Term>, SetRef),
    Eq(Term, Term),
    /// `lhs = parts[0] ++ parts[1] ++ ...`; no parts means `nil`.
    TraceEq(Term, Vec<Term>),
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn forall(name: &str, ty: Slot, body: Formula) -> Formula {
        Formula::Forall(
            Binder {
                name: name.to_string(),
                ty,
            },
            Box::new(body),
        )
    }

    pub fn exists(name: &str, ty: Slot, body: Formula) -> Formula {
        Formula::Exists(
            Binder {
                name: name.to_string(),
                ty,
            },
            Box::new(body),
        )
    }

    pub fn size(&self) -> usize {
        use Formula::*;
        match self {
            True | False | Mem(..) | Eq(..) | TraceEq(..) => 1,
            Not(a) | Forall(_, a) | Exists(_, a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Number of trace-concatenation atoms (`l = l1 ++ l2` with two or more parts).
    pub fn concat_atoms(&self) -> usize {
        use Formula::*;
        match self {
            TraceEq(_, parts) if parts.len() >= 2 => 1,
            True | False | Mem(..) | Eq(..) | TraceEq(..) => 0,
            Not(a) | Forall(_, a) | Exists(_, a) => a.concat_atoms(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => a.concat_atoms() + b.concat_atoms(),
        }
    }

    fn level(&self) -> u8 {
        use Formula::*;
        match self {
            Forall(..) | Exists(..) => 200,
            Implies(..) => 99,
            Iff(..) => 95,
            Or(..) => 85,
            And(..) => 80,
            Not(..) => 75,
            Mem(..) | Eq(..) | TraceEq(..) => 70,
            True | False => 0,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, max: u8) -> fmt::Result {
        if self.level() > max {
            f.write_str("(")?;
            self.write_bare(f)?;
            f.write_str(")")
        } else {
            self.write_bare(f)
        }
    }

    fn write_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => f.write_str("True"),
            False => f.write_str("False"),
            Not(a) => {
                f.write_str("~ ")?;
                a.write_at(f, 75)
            }
            And(a, b) => infix(f, a, "/\\", b, 79, 80),
            Or(a, b) => infix(f, a, "\\/", b, 84, 85),
            Implies(a, b) => infix(f, a, "->", b, 98, 99),
            Iff(a, b) => infix(f, a, "<->", b, 94, 94),
            Forall(binder, body) => {
                f.write_str("forall ")?;
                f.write_str(&binder.name)?;
                let mut body = body.as_ref();
                while let Forall(next, rest) = body {
                    write!(f, " {}", next.name)?;
                    body = rest;
                }
                f.write_str(", ")?;
                body.write_at(f, 200)
            }
            Exists(binder, body) => {
                write!(f, "exists {} : ", binder.name)?;
                match &binder.ty {
                    Slot::Sort(s) => f.write_str(s)?,
                    Slot::Trace => f.write_str("list E")?,
                }
                f.write_str(", ")?;
                body.write_at(f, 200)
            }
            Mem(args, set) => {
                match args.as_slice() {
                    [one] => write!(f, "{one}")?,
                    many => {
                        let items: Vec<String> = many.iter().map(ToString::to_string).collect();
                        write!(f, "({})", items.join(", "))?
                    }
                }
                write!(f, " ∈ {set}")
            }
            Eq(a, b) => write!(f, "{a} = {b}"),
            TraceEq(l, parts) => {
                write!(f, "{l} = ")?;
                if parts.is_empty() {
                    return f.write_str("nil");
                }
                let items: Vec<String> = parts.iter().map(ToString::to_string).collect();
                f.write_str(&items.join(" ++ "))
            }
        }
    }
}

fn infix(
    f: &mut fmt::Formatter<'_>,
    a: &Formula,
    op: &str,
    b: &Formula,
    left: u8,
    right: u8,
) -> fmt::Result {
    a.write_at(f, left)?;
    write!(f, " {op} ")?;
    b.write_at(f, right)
}

/// Renders with the operator precedences of Coq's notation levels, so that
/// `->` / `\/` / `/\` and binder parenthesization match proof-assistant goal
/// displays.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 200)
    }
}
