//! Text syntax for statements and finite models.
//!
//! ```text
//! rel X Y : A*B            # declarations, one kind per line
//! rel T : A*trace*B
//! family F : I -> A*B
//! X <= Y + Z               # exactly one statement
//! ```
//!
//! Expressions: identifiers, `empty`, `full`, `id`, `id[A]`, `idt[A]`,
//! `bigcup F`, `bigcap F`, and the infix operators `;` (composition), `&`
//! (intersection) and `+` (union), in decreasing binding strength.

use std::collections::BTreeMap;

use super::eval::{FamilyValue, Model, SetValue};
use super::expr::{kind_of, render_slots, Kind, SetExpr, Sig, Slot, Statement, Value};
use crate::error::{Error, Result};
use crate::finrel::{FinRel, IndexedFamily};
use crate::rels::{Trace, TraceRel, TraceSet};
use crate::universe::{Atom, Tuple, Universe};

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        msg: msg.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => f.write_str(s),
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Sym(s) => f.write_str(s),
        }
    }
}

const SYMS: &[&str] = &[
    "==", "<=", "->", "+", "&", ";", "(", ")", "[", "]", "{", "}", ",", ":", "*", "=",
];

fn lex(text: &str, first_line: usize) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = first_line + i;
        let s = raw.split('#').next().unwrap_or("");
        let b = s.as_bytes();
        let mut p = 0;
        while p < b.len() {
            let c = b[p] as char;
            if c.is_whitespace() {
                p += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = p;
                while p < b.len() && ((b[p] as char).is_ascii_alphanumeric() || b[p] == b'_') {
                    p += 1;
                }
                out.push((Tok::Ident(s[start..p].to_string()), line));
            } else if c.is_ascii_digit() || (c == '-' && p + 1 < b.len() && b[p + 1].is_ascii_digit()) {
                let start = p;
                p += 1;
                while p < b.len() && b[p].is_ascii_digit() {
                    p += 1;
                }
                let n = s[start..p]
                    .parse()
                    .map_err(|_| syntax(line, format!("integer `{}` out of range", &s[start..p])))?;
                out.push((Tok::Int(n), line));
            } else if let Some(sym) = SYMS.iter().find(|sym| s[p..].starts_with(**sym)) {
                out.push((Tok::Sym(sym), line));
                p += sym.len();
            } else {
                return Err(syntax(line, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    last_line: usize,
}

impl Cursor {
    fn new(toks: Vec<(Tok, usize)>, last_line: usize) -> Cursor {
        Cursor {
            toks,
            pos: 0,
            last_line,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).map_or(self.last_line, |(_, l)| *l)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{sym}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            Some(t) => syntax(self.line(), format!("expected {wanted}, found `{t}`")),
            None => syntax(self.line(), format!("expected {wanted}, found end of input")),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// Declared signatures of set names and families.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decls {
    pub rels: BTreeMap<String, Sig>,
    /// family name ↦ (index sort, member signature)
    pub families: BTreeMap<String, (String, Sig)>,
}

impl Decls {
    fn declare(&mut self, name: String, line: usize) -> Result<String> {
        if self.rels.contains_key(&name) || self.families.contains_key(&name) {
            return Err(syntax(line, format!("`{name}` declared twice")));
        }
        Ok(name)
    }
}

fn parse_sig(c: &mut Cursor) -> Result<Sig> {
    let mut sig = Vec::new();
    loop {
        let n = c.ident()?;
        match n.as_str() {
            "unit" if sig.is_empty() => return Ok(sig),
            "trace" => sig.push(Slot::Trace),
            _ => sig.push(Slot::Sort(n)),
        }
        if !c.eat("*") {
            break;
        }
    }
    kind_of(&sig).map_err(|e| syntax(c.line(), e.to_string()))?;
    Ok(sig)
}

/// Parses one declaration line body after the `rel`/`family` keyword.
fn parse_decl(kw: &str, c: &mut Cursor, decls: &mut Decls) -> Result<()> {
    let line = c.line();
    let mut names = vec![c.ident()?];
    while !c.eat(":") {
        names.push(c.ident()?);
    }
    if kw == "rel" {
        let sig = parse_sig(c)?;
        for n in names {
            let n = decls.declare(n, line)?;
            decls.rels.insert(n, sig.clone());
        }
    } else {
        let index = c.ident()?;
        c.expect("->")?;
        let sig = parse_sig(c)?;
        for n in names {
            let n = decls.declare(n, line)?;
            decls.families.insert(n, (index.clone(), sig.clone()));
        }
    }
    Ok(())
}

/// Untyped expression tree; signatures are resolved afterwards.
#[derive(Clone, Debug)]
enum Raw {
    Name(String, usize),
    Empty,
    Full,
    Id(Option<String>),
    IdT(Option<String>),
    Big(bool, String, usize),
    Union(Box<Raw>, Box<Raw>),
    Inter(Box<Raw>, Box<Raw>),
    Seq(Box<Raw>, Box<Raw>),
}

fn parse_union(c: &mut Cursor) -> Result<Raw> {
    let mut e = parse_inter(c)?;
    while c.eat("+") {
        e = Raw::Union(Box::new(e), Box::new(parse_inter(c)?));
    }
    Ok(e)
}

fn parse_inter(c: &mut Cursor) -> Result<Raw> {
    let mut e = parse_seq(c)?;
    while c.eat("&") {
        e = Raw::Inter(Box::new(e), Box::new(parse_seq(c)?));
    }
    Ok(e)
}

fn parse_seq(c: &mut Cursor) -> Result<Raw> {
    let mut e = parse_atom_expr(c)?;
    while c.eat(";") {
        e = Raw::Seq(Box::new(e), Box::new(parse_atom_expr(c)?));
    }
    Ok(e)
}

fn parse_atom_expr(c: &mut Cursor) -> Result<Raw> {
    if c.eat("(") {
        let e = parse_union(c)?;
        c.expect(")")?;
        return Ok(e);
    }
    let line = c.line();
    let name = c.ident()?;
    let sort_arg = |c: &mut Cursor| -> Result<Option<String>> {
        if c.eat("[") {
            let s = c.ident()?;
            c.expect("]")?;
            Ok(Some(s))
        } else {
            Ok(None)
        }
    };
    Ok(match name.as_str() {
        "empty" => Raw::Empty,
        "full" => Raw::Full,
        "id" => Raw::Id(sort_arg(c)?),
        "idt" => Raw::IdT(sort_arg(c)?),
        "bigcup" | "bigcap" => {
            let line = c.line();
            Raw::Big(name == "bigcup", c.ident()?, line)
        }
        _ => Raw::Name(name, line),
    })
}

struct Typer<'d> {
    decls: &'d Decls,
    line: usize,
}

impl Typer<'_> {
    fn err(&self, msg: String) -> Error {
        syntax(self.line, msg)
    }

    /// Bottom-up signature, when it is determined without context.
    fn synth(&self, e: &Raw) -> Result<Option<Sig>> {
        Ok(match e {
            Raw::Name(n, line) => Some(
                self.decls
                    .rels
                    .get(n)
                    .cloned()
                    .ok_or_else(|| Error::UndeclaredVar {
                        name: n.clone(),
                        line: *line,
                    })?,
            ),
            Raw::Big(_, f, line) => Some(
                self.decls
                    .families
                    .get(f)
                    .map(|(_, s)| s.clone())
                    .ok_or_else(|| Error::UndeclaredVar {
                        name: f.clone(),
                        line: *line,
                    })?,
            ),
            Raw::Empty | Raw::Full | Raw::Id(None) | Raw::IdT(None) => None,
            Raw::Id(Some(a)) => Some(vec![Slot::sort(a), Slot::sort(a)]),
            Raw::IdT(Some(a)) => Some(vec![Slot::sort(a), Slot::Trace, Slot::sort(a)]),
            Raw::Union(a, b) | Raw::Inter(a, b) => match self.synth(a)? {
                Some(s) => Some(s),
                None => self.synth(b)?,
            },
            Raw::Seq(a, b) => match (self.synth(a)?, self.synth(b)?) {
                (Some(sa), Some(sb)) => Some(self.seq_sig(&sa, &sb)?.2),
                _ => None,
            },
        })
    }

    /// Operand and result signatures of `a ; b`, plus which composition it is.
    fn seq_sig(&self, sa: &[Slot], sb: &[Slot]) -> Result<(Sig, Sig, Sig)> {
        let bad = || {
            self.err(format!(
                "cannot compose {} with {}",
                render_slots(sa),
                render_slots(sb)
            ))
        };
        let out = match (sa, sb) {
            ([x, m1], [m2, z]) if m1 == m2 && *x != Slot::Trace && *z != Slot::Trace => {
                vec![x.clone(), z.clone()]
            }
            ([x, m1], [m2]) if m1 == m2 && *x != Slot::Trace => vec![x.clone()],
            ([x, Slot::Trace, m1], [m2, Slot::Trace, z]) if m1 == m2 => {
                vec![x.clone(), Slot::Trace, z.clone()]
            }
            ([x, Slot::Trace, m1], [m2, Slot::Trace]) if m1 == m2 => vec![x.clone(), Slot::Trace],
            _ => return Err(bad()),
        };
        Ok((sa.to_vec(), sb.to_vec(), out))
    }

    /// Top-down check against an expected signature.
    fn check(&self, e: &Raw, want: &Sig) -> Result<SetExpr> {
        let mismatch = |got: &Sig| {
            self.err(format!(
                "expected {}, found {}",
                render_slots(want),
                render_slots(got)
            ))
        };
        Ok(match e {
            Raw::Name(n, _) => {
                let sig = self.synth(e)?.expect("names have signatures");
                if &sig != want {
                    return Err(mismatch(&sig));
                }
                SetExpr::Var {
                    name: n.clone(),
                    sig,
                }
            }
            Raw::Big(union, f, _) => {
                let sig = self.synth(e)?.expect("families have signatures");
                if &sig != want {
                    return Err(mismatch(&sig));
                }
                let index = self.decls.families[f].0.clone();
                let (family, sig) = (f.clone(), sig);
                if *union {
                    SetExpr::IndexedUnion { family, index, sig }
                } else {
                    SetExpr::IndexedIntersect { family, index, sig }
                }
            }
            Raw::Empty => SetExpr::Empty(want.clone()),
            Raw::Full => {
                let e = SetExpr::Full(want.clone());
                e.sig().map_err(|err| self.err(err.to_string()))?;
                e
            }
            Raw::Id(a) | Raw::IdT(a) => {
                let traced = matches!(e, Raw::IdT(_));
                let e = match (want.as_slice(), traced) {
                    ([Slot::Sort(x), Slot::Sort(y)], false) if x == y => SetExpr::IdR(x.clone()),
                    ([Slot::Sort(x), Slot::Trace, Slot::Sort(y)], _) if x == y => {
                        SetExpr::IdT(x.clone())
                    }
                    _ => {
                        return Err(self.err(format!(
                            "identity cannot have signature {}",
                            render_slots(want)
                        )))
                    }
                };
                if let Some(a) = a {
                    if !matches!(&e, SetExpr::IdR(x) | SetExpr::IdT(x) if x == a) {
                        return Err(self.err(format!(
                            "identity on `{a}` cannot have signature {}",
                            render_slots(want)
                        )));
                    }
                }
                e
            }
            Raw::Union(a, b) => SetExpr::union(self.check(a, want)?, self.check(b, want)?),
            Raw::Inter(a, b) => SetExpr::intersect(self.check(a, want)?, self.check(b, want)?),
            Raw::Seq(a, b) => {
                let (sa, sb) = match (self.synth(a)?, self.synth(b)?) {
                    (Some(sa), Some(sb)) => (sa, sb),
                    (Some(sa), None) => {
                        let sb = self.right_operand(&sa, want)?;
                        (sa, sb)
                    }
                    (None, Some(sb)) => {
                        let sa = self.left_operand(&sb, want)?;
                        (sa, sb)
                    }
                    (None, None) => {
                        return Err(self.err("cannot infer the signature of a composition".into()))
                    }
                };
                let (_, _, out) = self.seq_sig(&sa, &sb)?;
                if &out != want {
                    return Err(mismatch(&out));
                }
                let (ea, eb) = (self.check(a, &sa)?, self.check(b, &sb)?);
                match (sa.len(), sb.len()) {
                    (2, 2) => SetExpr::concat_rr(ea, eb),
                    (2, 1) => SetExpr::concat_rs(ea, eb),
                    (3, 3) => SetExpr::concat_tt(ea, eb),
                    _ => SetExpr::concat_ts(ea, eb),
                }
            }
        })
    }

    fn right_operand(&self, sa: &[Slot], want: &[Slot]) -> Result<Sig> {
        let m = sa.last().cloned().ok_or_else(|| self.err("cannot compose unit".into()))?;
        Ok(match (sa.len(), want) {
            (2, [_, z]) => vec![m, z.clone()],
            (2, [_]) => vec![m],
            (3, [_, Slot::Trace, z]) => vec![m, Slot::Trace, z.clone()],
            (3, [_, Slot::Trace]) => vec![m, Slot::Trace],
            _ => {
                return Err(self.err(format!(
                    "cannot compose {} into {}",
                    render_slots(sa),
                    render_slots(want)
                )))
            }
        })
    }

    fn left_operand(&self, sb: &[Slot], want: &[Slot]) -> Result<Sig> {
        let m = sb.first().cloned().ok_or_else(|| self.err("cannot compose unit".into()))?;
        Ok(match (want, sb.get(1)) {
            ([x, _], _) | ([x], _) if *x != Slot::Trace && !sb.contains(&Slot::Trace) => {
                vec![x.clone(), m]
            }
            ([x, Slot::Trace, ..], Some(Slot::Trace)) => vec![x.clone(), Slot::Trace, m],
            _ => {
                return Err(self.err(format!(
                    "cannot compose into {} from {}",
                    render_slots(want),
                    render_slots(sb)
                )))
            }
        })
    }
}

fn parse_value(c: &mut Cursor) -> Result<Value> {
    if c.eat("[") {
        let mut items = Vec::new();
        if !c.eat("]") {
            loop {
                items.push(parse_atom_value(c)?);
                if c.eat("]") {
                    break;
                }
                c.expect(",")?;
            }
        }
        return Ok(Value::Trace(Trace(items)));
    }
    Ok(Value::Atom(parse_atom_value(c)?))
}

fn parse_atom_value(c: &mut Cursor) -> Result<Atom> {
    match c.next() {
        Some(Tok::Int(n)) => Ok(Atom::Int(n)),
        Some(Tok::Ident(s)) => Ok(Atom::label(&s)),
        _ => {
            c.pos -= 1;
            Err(c.unexpected("an atom"))
        }
    }
}

/// `(v, ...)` or a bare value.
fn parse_tuple(c: &mut Cursor) -> Result<Vec<Value>> {
    if c.eat("(") {
        let mut vals = Vec::new();
        if !c.eat(")") {
            loop {
                vals.push(parse_value(c)?);
                if c.eat(")") {
                    break;
                }
                c.expect(",")?;
            }
        }
        Ok(vals)
    } else {
        Ok(vec![parse_value(c)?])
    }
}

fn statement_from(c: &mut Cursor, decls: &Decls) -> Result<Statement> {
    let line = c.line();
    let typer = Typer { decls, line };
    let member_start = matches!(c.peek(), Some(Tok::Int(_)) | Some(Tok::Sym("[")))
        || (matches!(c.peek(), Some(Tok::Ident(_)))
            && matches!(c.toks.get(c.pos + 1), Some((Tok::Ident(k), _)) if k == "in"));
    // `(` can open either a tuple or a parenthesized expression.
    let tuple_start = matches!(c.peek(), Some(Tok::Sym("("))) && {
        let save = c.pos;
        let ok = parse_tuple(c).is_ok() && matches!(c.peek(), Some(Tok::Ident(k)) if k == "in");
        c.pos = save;
        ok
    };
    if member_start || tuple_start {
        let vals = parse_tuple(c)?;
        match c.next() {
            Some(Tok::Ident(k)) if k == "in" => {}
            _ => {
                c.pos -= 1;
                return Err(c.unexpected("`in`"));
            }
        }
        let raw = parse_union(c)?;
        let sig = match typer.synth(&raw)? {
            Some(s) => s,
            // Nothing fixes the sorts: record the shape of the literal.
            None => vals
                .iter()
                .map(|v| match v {
                    Value::Atom(_) => Slot::sort("_"),
                    Value::Trace(_) => Slot::Trace,
                })
                .collect(),
        };
        let e = typer.check(&raw, &sig)?;
        let s = Statement::Member(vals, e);
        s.check().map_err(|e| syntax(line, e.to_string()))?;
        return Ok(s);
    }
    let lhs = parse_union(c)?;
    let equiv = if c.eat("==") {
        true
    } else if c.eat("<=") {
        false
    } else {
        return Err(c.unexpected("`==` or `<=`"));
    };
    let rhs = parse_union(c)?;
    let sig = match typer.synth(&lhs)? {
        Some(s) => s,
        None => typer
            .synth(&rhs)?
            .ok_or_else(|| syntax(line, "cannot infer the signature of the statement"))?,
    };
    let (a, b) = (typer.check(&lhs, &sig)?, typer.check(&rhs, &sig)?);
    Ok(if equiv {
        Statement::Equiv(a, b)
    } else {
        Statement::Included(a, b)
    })
}

/// Parses declarations followed by exactly one statement.
pub fn parse_statement(text: &str) -> Result<(Decls, Statement)> {
    let mut decls = Decls::default();
    let mut stmt_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = lex(raw, line)?;
        match toks.first() {
            None => continue,
            Some((Tok::Ident(kw), _)) if kw == "rel" || kw == "family" => {
                let kw = kw.clone();
                let mut c = Cursor::new(toks[1..].to_vec(), line);
                parse_decl(&kw, &mut c, &mut decls)?;
                if !c.done() {
                    return Err(c.unexpected("end of line"));
                }
            }
            Some(_) => stmt_lines.push((toks, line)),
        }
    }
    let last = stmt_lines.last().map_or(text.lines().count().max(1), |(_, l)| *l);
    let toks: Vec<(Tok, usize)> = stmt_lines.into_iter().flat_map(|(t, _)| t).collect();
    if toks.is_empty() {
        return Err(syntax(last, "no statement"));
    }
    let mut c = Cursor::new(toks, last);
    let s = statement_from(&mut c, &decls)?;
    if !c.done() {
        return Err(c.unexpected("end of statement"));
    }
    Ok((decls, s))
}

fn value_set(c: &mut Cursor) -> Result<Vec<Vec<Value>>> {
    c.expect("{")?;
    let mut out = Vec::new();
    if c.eat("}") {
        return Ok(out);
    }
    loop {
        out.push(parse_tuple(c)?);
        if c.eat("}") {
            return Ok(out);
        }
        c.expect(",")?;
    }
}

fn build_value(u: &Universe, sig: &Sig, elems: Vec<Vec<Value>>, line: usize) -> Result<SetValue> {
    let ill = |vals: &[Value]| {
        let vs: Vec<String> = vals.iter().map(ToString::to_string).collect();
        Error::IllSorted {
            tuple: format!("({})", vs.join(",")),
            sig: render_slots(sig),
        }
    };
    let sort = |s: &Slot| match s {
        Slot::Sort(n) => u.require_sort(n).cloned(),
        Slot::Trace => u.require_events().cloned(),
    };
    let atom = |v: &Value| match v {
        Value::Atom(a) => Some(a.clone()),
        Value::Trace(_) => None,
    };
    let trace = |v: &Value| match v {
        Value::Trace(t) => Some(t.clone()),
        Value::Atom(_) => None,
    };
    let wrap = |e: Error| match e {
        Error::Syntax { .. } => e,
        other => syntax(line, other.to_string()),
    };
    let sorts: Vec<_> = sig.iter().map(sort).collect::<Result<_>>().map_err(wrap)?;
    Ok(match kind_of(sig)? {
        Kind::Rel => {
            let mut tuples = Vec::new();
            for vals in elems {
                let t: Option<Vec<Atom>> = vals.iter().map(atom).collect();
                tuples.push(Tuple(t.ok_or_else(|| wrap(ill(&vals)))?));
            }
            SetValue::Rel(FinRel::new(sorts, tuples).map_err(wrap)?)
        }
        Kind::TraceRel => {
            let mut ts = Vec::new();
            for vals in elems {
                match vals.as_slice() {
                    [a, l, b] => match (atom(a), trace(l), atom(b)) {
                        (Some(a), Some(l), Some(b)) => ts.push((a, l, b)),
                        _ => return Err(wrap(ill(&vals))),
                    },
                    _ => return Err(wrap(ill(&vals))),
                }
            }
            let [a, e, b] = <[_; 3]>::try_from(sorts).expect("traced signature");
            SetValue::Traces(TraceRel::new(a, e, b, ts).map_err(wrap)?)
        }
        Kind::TraceSet => {
            let mut ps = Vec::new();
            for vals in elems {
                match vals.as_slice() {
                    [a, l] => match (atom(a), trace(l)) {
                        (Some(a), Some(l)) => ps.push((a, l)),
                        _ => return Err(wrap(ill(&vals))),
                    },
                    _ => return Err(wrap(ill(&vals))),
                }
            }
            let [a, e] = <[_; 2]>::try_from(sorts).expect("trace-set signature");
            SetValue::TraceSet(TraceSet::new(a, e, ps).map_err(wrap)?)
        }
    })
}

/// Parses model assignments `X = { ... }` and `F[i] = { ... }` against the
/// declarations. Family members that are not assigned are empty.
pub fn parse_model(text: &str, decls: &Decls, universe: &Universe) -> Result<Model> {
    let last = text.lines().count().max(1);
    let mut c = Cursor::new(lex(text, 1)?, last);
    let mut model = Model::new(universe.clone());
    let mut members: BTreeMap<String, Vec<(Atom, SetValue)>> = BTreeMap::new();
    let mut seen = Vec::new();
    while !c.done() {
        let line = c.line();
        let name = c.ident()?;
        let index = if c.eat("[") {
            let i = parse_atom_value(&mut c)?;
            c.expect("]")?;
            Some(i)
        } else {
            None
        };
        c.expect("=")?;
        let elems = value_set(&mut c)?;
        let key = match &index {
            Some(i) => format!("{name}[{i}]"),
            None => name.clone(),
        };
        if seen.contains(&key) {
            return Err(syntax(line, format!("`{key}` assigned twice")));
        }
        seen.push(key);
        match index {
            None => {
                let sig = decls
                    .rels
                    .get(&name)
                    .ok_or_else(|| Error::UndeclaredVar { name: name.clone(), line })?;
                model.insert(&name, build_value(universe, sig, elems, line)?);
            }
            Some(i) => {
                let (_, sig) = decls
                    .families
                    .get(&name)
                    .ok_or_else(|| Error::UndeclaredVar { name: name.clone(), line })?;
                let v = build_value(universe, sig, elems, line)?;
                members.entry(name).or_default().push((i, v));
            }
        }
    }
    for (name, (index, sig)) in &decls.families {
        let index = universe.require_sort(index)?;
        let mut given = members.remove(name).unwrap_or_default();
        for i in index.carrier() {
            if !given.iter().any(|(j, _)| j == i) {
                given.push((i.clone(), build_value(universe, sig, vec![], last)?));
            }
        }
        let fam = family_value(index.clone(), given)?;
        model.insert_family(name, fam);
    }
    Ok(model)
}

fn family_value(index: crate::universe::Sort, members: Vec<(Atom, SetValue)>) -> Result<FamilyValue> {
    match members.first().map(|(_, v)| v) {
        Some(SetValue::Rel(_)) | None => {
            let ms = members.into_iter().map(|(i, v)| match v {
                SetValue::Rel(r) => (i, r),
                _ => unreachable!("one signature per family"),
            });
            Ok(FamilyValue::Rel(IndexedFamily::new(index, ms)?))
        }
        Some(SetValue::Traces(_)) => {
            let ms = members.into_iter().map(|(i, v)| match v {
                SetValue::Traces(r) => (i, r),
                _ => unreachable!("one signature per family"),
            });
            Ok(FamilyValue::Traces(IndexedFamily::new(index, ms)?))
        }
        Some(SetValue::TraceSet(_)) => {
            let ms = members.into_iter().map(|(i, v)| match v {
                SetValue::TraceSet(r) => (i, r),
                _ => unreachable!("one signature per family"),
            });
            Ok(FamilyValue::TraceSet(IndexedFamily::new(index, ms)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{check_soundness, render, render_expr, unfold};
    use crate::universe::parse_universe;

    fn rendered(text: &str) -> String {
        let (_, s) = parse_statement(text).unwrap();
        render(&unfold(&s).unwrap())
    }

    #[test]
    fn inclusion_goal_from_text() {
        assert_eq!(
            rendered("rel X Y Z : A*B\nX <= Y + Z"),
            "forall a b, (a, b) ∈ X -> (a, b) ∈ Y \\/ (a, b) ∈ Z"
        );
    }

    #[test]
    fn member_of_empty() {
        assert_eq!(rendered("t in empty"), "False");
        assert_eq!(rendered("rel X : A\n0 in X & empty"), "0 ∈ X /\\ False");
    }

    #[test]
    fn precedence_and_inference() {
        let (_, s) = parse_statement("rel R : A*B\nrel S : B*A\nrel X : A*A\nX == R;S + id & X").unwrap();
        let Statement::Equiv(_, rhs) = &s else { panic!() };
        assert_eq!(render_expr(rhs), "R ∘ S ∪ id ∩ X");
        assert!(matches!(rhs, SetExpr::Union(_, b) if matches!(**b, SetExpr::Intersect(..))));
        let (_, s) = parse_statement("rel R : A*trace*B\nR == id;R").unwrap();
        let Statement::Equiv(_, SetExpr::ConcatTT(l, _)) = &s else { panic!("{s:?}") };
        assert_eq!(**l, SetExpr::IdT("A".into()));
        let (_, s) = parse_statement("rel R : A*B\nrel U : B\nrel V : A\nV <= R;U").unwrap();
        assert!(matches!(s, Statement::Included(_, SetExpr::ConcatRS(..))));
    }

    #[test]
    fn parse_errors_are_located() {
        assert!(matches!(
            parse_statement("rel X : A\n\nX == Y"),
            Err(Error::UndeclaredVar { line: 3, .. })
        ));
        assert!(matches!(parse_statement("rel X : A\nX == "), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(
            parse_statement("rel X : A\nrel Y : B\nX == Y"),
            Err(Error::Syntax { line: 3, .. })
        ));
        assert!(parse_statement("rel X : A*trace\nX == full").is_err());
        assert!(parse_statement("empty == empty").is_err());
    }

    #[test]
    fn model_round_trip() {
        let u = parse_universe("sort A = {0,1,2}\nsort I = {0,1}\nevents a b").unwrap();
        let (decls, s) = parse_statement(
            "rel X : A*A\nfamily F : I -> A*A\nrel T : A*trace*A\nX & bigcup F <= bigcup F",
        )
        .unwrap();
        let m = parse_model(
            "X = {(0,1), (1,2)}\nF[0] = {(0,1)}\nT = {(0,[a,b],1), (1,[],1)}",
            &decls,
            &u,
        )
        .unwrap();
        assert_eq!(check_soundness(&s, &m).unwrap(), (true, true));
        assert!(matches!(
            parse_model("X = {(0,7)}", &decls, &u),
            Err(Error::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_model("Q = {}", &decls, &u),
            Err(Error::UndeclaredVar { .. })
        ));
    }
}
