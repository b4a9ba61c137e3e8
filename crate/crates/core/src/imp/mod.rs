//! A small imperative language with three denotational semantics and an
//! operational oracle for each.

mod ast;
mod denote;
mod oracle;
mod parse;

use std::fmt;
use std::str::FromStr;

pub use ast::{eval_aexp, eval_bexp, AExp, BExp, Command};
pub use denote::{denote_nrm_inf, denote_plain, denote_traced, test_false, test_true, NrmInf, Stats};
pub use oracle::{oracle_inf, oracle_plain, oracle_traced};
pub use parse::parse_program;

use crate::error::{Error, Result};
use crate::finrel::{FinRel, SetAlgebra};
use crate::rels::TraceRel;
use crate::universe::Universe;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Plain,
    NrmInf,
    Traced,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::Plain, Flavor::NrmInf, Flavor::Traced];
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Flavor> {
        match s {
            "plain" => Ok(Flavor::Plain),
            "nrminf" => Ok(Flavor::NrmInf),
            "traced" => Ok(Flavor::Traced),
            other => Err(Error::Flavor(format!("unknown flavor `{other}`"))),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Plain => "plain",
            Flavor::NrmInf => "nrminf",
            Flavor::Traced => "traced",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Denotation {
    Plain(FinRel),
    NrmInf(NrmInf),
    Traced(TraceRel),
}

/// Denotation in the given flavor; traced loops are bounded by the
/// universe's `loop_iterations` limit.
pub fn denote(c: &Command, u: &Universe, flavor: Flavor) -> Result<(Denotation, Stats)> {
    Ok(match flavor {
        Flavor::Plain => {
            let (r, s) = denote_plain(c, u)?;
            (Denotation::Plain(r), s)
        }
        Flavor::NrmInf => {
            let (r, s) = denote_nrm_inf(c, u)?;
            (Denotation::NrmInf(r), s)
        }
        Flavor::Traced => {
            let (r, s) = denote_traced(c, u, u.limits().loop_iterations)?;
            (Denotation::Traced(r), s)
        }
    })
}

fn plain_lines(r: &FinRel, u: &Universe) -> Vec<String> {
    r.pairs()
        .map(|(a, b)| format!("{} -> {}", u.render_state_atom(a), u.render_state_atom(b)))
        .collect()
}

fn inf_lines(r: &FinRel, u: &Universe) -> Vec<String> {
    r.tuples()
        .iter()
        .map(|t| format!("{} -> inf", u.render_state_atom(&t.0[0])))
        .collect()
}

fn traced_line(u: &Universe, (a, l, b): &(crate::universe::Atom, crate::rels::Trace, crate::universe::Atom)) -> String {
    format!("{} -{}-> {}", u.render_state_atom(a), l, u.render_state_atom(b))
}

/// One transition per line in canonical order.
pub fn render_denotation(d: &Denotation, u: &Universe) -> String {
    let lines = match d {
        Denotation::Plain(r) => plain_lines(r, u),
        Denotation::NrmInf(d) => {
            let mut l = plain_lines(&d.nrm, u);
            l.extend(inf_lines(&d.inf, u));
            l
        }
        Denotation::Traced(r) => r.triples().iter().map(|t| traced_line(u, t)).collect(),
    };
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equiv,
    /// A rendered element in one denotation but not the other.
    Distinct(String),
    /// A traced loop did not stabilize within the iteration bound.
    Inconclusive(String),
}

fn first_diff<T: SetAlgebra>(a: &T, b: &T, render: impl Fn(&T::Elem) -> String) -> Option<String>
where
    T::Elem: Ord,
{
    if let Some(e) = a.elems().difference(b.elems()).next() {
        return Some(format!("{} (first only)", render(e)));
    }
    b.elems()
        .difference(a.elems())
        .next()
        .map(|e| format!("{} (second only)", render(e)))
}

/// Compares the denotations of two programs componentwise.
pub fn check_equiv(c1: &Command, c2: &Command, flavor: Flavor, u: &Universe) -> Result<Verdict> {
    let (d1, s1) = denote(c1, u, flavor)?;
    let (d2, s2) = denote(c2, u, flavor)?;
    let pair = |t: &crate::universe::Tuple| {
        format!("{} -> {}", u.render_state_atom(&t.0[0]), u.render_state_atom(&t.0[1]))
    };
    let diff = match (&d1, &d2) {
        (Denotation::Plain(a), Denotation::Plain(b)) => first_diff(a, b, pair),
        (Denotation::NrmInf(a), Denotation::NrmInf(b)) => first_diff(&a.nrm, &b.nrm, pair).or_else(|| {
            first_diff(&a.inf, &b.inf, |t| format!("{} -> inf", u.render_state_atom(&t.0[0])))
        }),
        (Denotation::Traced(a), Denotation::Traced(b)) => {
            if !(s1.fixpoint_reached && s2.fixpoint_reached) {
                return Ok(Verdict::Inconclusive(format!(
                    "a traced loop did not stabilize within {} iterations",
                    u.limits().loop_iterations
                )));
            }
            first_diff(a, b, |t| traced_line(u, t))
        }
        _ => unreachable!("same flavor"),
    };
    Ok(match diff {
        None => Verdict::Equiv,
        Some(cx) => Verdict::Distinct(cx),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::parse_universe;

    #[test]
    fn rendering() {
        let u = parse_universe("var x : 0..1\nevents a b\nevent a = 0\nevent b = 1").unwrap();
        let c = parse_program("x := 1", &u).unwrap();
        let (d, _) = denote(&c, &u, Flavor::Plain).unwrap();
        assert_eq!(render_denotation(&d, &u), "(x=0) -> (x=1)\n(x=1) -> (x=1)\n");
        let c = parse_program("write(x); write(1)", &u).unwrap();
        let (d, _) = denote(&c, &u, Flavor::Traced).unwrap();
        assert_eq!(render_denotation(&d, &u), "(x=0) -[a,b]-> (x=0)\n(x=1) -[b,b]-> (x=1)\n");
        let c = parse_program("while (x == 0) do { skip }", &u).unwrap();
        let (d, _) = denote(&c, &u, Flavor::NrmInf).unwrap();
        assert_eq!(render_denotation(&d, &u), "(x=1) -> (x=1)\n(x=0) -> inf\n");
    }

    #[test]
    fn verdicts() {
        let u = parse_universe("var x : 0..2\nevents a\nevent a = 0").unwrap();
        let p = |s: &str| parse_program(s, &u).unwrap();
        for f in Flavor::ALL {
            let want = if f == Flavor::Traced {
                "(x=0) -[]-> (x=1) (first only)"
            } else {
                "(x=0) -> (x=1) (first only)"
            };
            assert_eq!(
                check_equiv(&p("x := 1"), &p("x := 2"), f, &u).unwrap(),
                Verdict::Distinct(want.into())
            );
            let lhs = p("{ if (x < 1) then { x := 1 } else { skip } }; x := x + 1");
            let rhs = p("if (x < 1) then { x := 1; x := x + 1 } else { skip; x := x + 1 }");
            assert_eq!(check_equiv(&lhs, &rhs, f, &u).unwrap(), Verdict::Equiv);
        }
        let spin = p("while (x == 0) do { choice { write(0) } or { x := 1 } }");
        assert!(matches!(
            check_equiv(&spin, &spin, Flavor::Traced, &u).unwrap(),
            Verdict::Inconclusive(_)
        ));
        assert!(matches!(check_equiv(&spin, &spin, Flavor::Plain, &u), Err(Error::Flavor(_))));
        assert!("loud".parse::<Flavor>().is_err());
    }
}
