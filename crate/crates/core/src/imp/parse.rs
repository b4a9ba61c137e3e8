//! Recursive-descent parser for the command language.
//!
//! ```text
//! com  := item (";" com)?
//! item := "skip" | ident ":=" aexp | "{" com "}"
//!       | "if" "(" bexp ")" "then" "{" com "}" "else" "{" com "}"
//!       | "while" "(" bexp ")" "do" "{" com "}"
//!       | "choice" "{" com "}" "or" "{" com "}"
//!       | "write" "(" aexp ")"
//! ```

use super::ast::{AExp, BExp, Command};
use crate::error::{Error, Result};
use crate::universe::Universe;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
}

const SYMS: &[&str] = &[
    ":=", "==", "<=", "&&", "||", "<", "!", "+", "-", "*", "(", ")", "{", "}", ";",
];

const KEYWORDS: &[&str] = &[
    "skip", "if", "then", "else", "while", "do", "choice", "or", "write", "true", "false",
];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.split('#').next().unwrap_or("");
        let b = s.as_bytes();
        let mut p = 0;
        while p < b.len() {
            let c = b[p] as char;
            if c.is_whitespace() {
                p += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = p;
                while p < b.len() && (b[p].is_ascii_alphanumeric() || b[p] == b'_') {
                    p += 1;
                }
                out.push((Tok::Ident(s[start..p].to_string()), line));
            } else if c.is_ascii_digit() {
                let start = p;
                while p < b.len() && b[p].is_ascii_digit() {
                    p += 1;
                }
                let n = s[start..p].parse().map_err(|_| Error::Syntax {
                    line,
                    msg: format!("integer `{}` out of range", &s[start..p]),
                })?;
                out.push((Tok::Int(n), line));
            } else if let Some(sym) = SYMS.iter().find(|sym| s[p..].starts_with(**sym)) {
                out.push((Tok::Sym(sym), line));
                p += sym.len();
            } else {
                return Err(Error::Syntax {
                    line,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'u> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    universe: &'u Universe,
    end_line: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_line, |(_, l)| *l)
    }

    fn err(&self, wanted: &str) -> Error {
        let found = match self.peek() {
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Int(n)) => format!("`{n}`"),
            Some(Tok::Sym(s)) => format!("`{s}`"),
            None => "end of input".into(),
        };
        Error::Syntax {
            line: self.line(),
            msg: format!("expected {wanted}, found {found}"),
        }
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
            Err(self.err(&format!("`{sym}`")))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.keyword(kw) {
            Ok(())
        } else {
            Err(self.err(&format!("`{kw}`")))
        }
    }

    fn var(&mut self, name: String, line: usize) -> Result<(String, usize)> {
        match self.universe.var_index(&name) {
            Some(i) => Ok((name, i)),
            None => Err(Error::UndeclaredVar { name, line }),
        }
    }

    fn block(&mut self) -> Result<Command> {
        self.expect("{")?;
        let c = self.com()?;
        self.expect("}")?;
        Ok(c)
    }

    fn com(&mut self) -> Result<Command> {
        let first = self.item()?;
        if self.eat(";") {
            Ok(Command::seq(first, self.com()?))
        } else {
            Ok(first)
        }
    }

    fn item(&mut self) -> Result<Command> {
        let line = self.line();
        if matches!(self.peek(), Some(Tok::Sym("{"))) {
            return self.block();
        }
        let Some(Tok::Ident(word)) = self.peek().cloned() else {
            return Err(self.err("a command"));
        };
        self.pos += 1;
        Ok(match word.as_str() {
            "skip" => Command::Skip,
            "if" => {
                self.expect("(")?;
                let b = self.bexp()?;
                self.expect(")")?;
                self.expect_kw("then")?;
                let t = self.block()?;
                self.expect_kw("else")?;
                let e = self.block()?;
                Command::if_(b, t, e)
            }
            "while" => {
                self.expect("(")?;
                let b = self.bexp()?;
                self.expect(")")?;
                self.expect_kw("do")?;
                Command::while_(b, self.block()?)
            }
            "choice" => {
                let a = self.block()?;
                self.expect_kw("or")?;
                Command::choice(a, self.block()?)
            }
            "write" => {
                self.expect("(")?;
                let e = self.aexp()?;
                self.expect(")")?;
                Command::Write(e)
            }
            w if KEYWORDS.contains(&w) => {
                self.pos -= 1;
                return Err(self.err("a command"));
            }
            _ => {
                if !self.eat(":=") {
                    return Err(self.err("`:=`"));
                }
                let (x, i) = self.var(word, line)?;
                Command::Assign(x, i, self.aexp()?)
            }
        })
    }

    fn aexp(&mut self) -> Result<AExp> {
        let mut e = self.term()?;
        loop {
            if self.eat("+") {
                e = AExp::add(e, self.term()?);
            } else if self.eat("-") {
                e = AExp::sub(e, self.term()?);
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<AExp> {
        let mut e = self.factor()?;
        while self.eat("*") {
            e = AExp::mul(e, self.factor()?);
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<AExp> {
        let line = self.line();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(AExp::Num(n))
            }
            Some(Tok::Sym("-")) => {
                self.pos += 1;
                match self.peek().cloned() {
                    Some(Tok::Int(n)) => {
                        self.pos += 1;
                        Ok(AExp::Num(-n))
                    }
                    _ => Ok(AExp::sub(AExp::Num(0), self.factor()?)),
                }
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.aexp()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(Tok::Ident(x)) if !KEYWORDS.contains(&x.as_str()) => {
                self.pos += 1;
                let (x, i) = self.var(x, line)?;
                Ok(AExp::Var(x, i))
            }
            _ => Err(self.err("an integer expression")),
        }
    }

    fn bexp(&mut self) -> Result<BExp> {
        let mut e = self.conj()?;
        while self.eat("||") {
            e = BExp::or(e, self.conj()?);
        }
        Ok(e)
    }

    fn conj(&mut self) -> Result<BExp> {
        let mut e = self.neg()?;
        while self.eat("&&") {
            e = BExp::and(e, self.neg()?);
        }
        Ok(e)
    }

    fn neg(&mut self) -> Result<BExp> {
        if self.eat("!") {
            Ok(BExp::not(self.neg()?))
        } else {
            self.batom()
        }
    }

    fn batom(&mut self) -> Result<BExp> {
        if self.keyword("true") {
            return Ok(BExp::True);
        }
        if self.keyword("false") {
            return Ok(BExp::False);
        }
        // `(` opens either a comparison operand or a parenthesized condition
        let save = self.pos;
        match self.comparison() {
            Ok(b) => Ok(b),
            Err(first) => {
                let after = self.pos;
                self.pos = save;
                if self.eat("(") {
                    let b = self.bexp()?;
                    self.expect(")")?;
                    Ok(b)
                } else {
                    self.pos = after;
                    Err(first)
                }
            }
        }
    }

    fn comparison(&mut self) -> Result<BExp> {
        let a = self.aexp()?;
        let op = match self.peek() {
            Some(Tok::Sym(s @ ("==" | "<=" | "<"))) => *s,
            _ => return Err(self.err("`==`, `<=` or `<`")),
        };
        self.pos += 1;
        let b = self.aexp()?;
        Ok(match op {
            "==" => BExp::Eq(a, b),
            "<=" => BExp::Le(a, b),
            _ => BExp::Lt(a, b),
        })
    }
}

/// Parses a program against the universe's declared variables.
pub fn parse_program(text: &str, universe: &Universe) -> Result<Command> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        universe,
        end_line: text.lines().count().max(1),
    };
    let c = p.com()?;
    if p.peek().is_some() {
        return Err(p.err("end of program"));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::parse_universe;

    fn u() -> Universe {
        parse_universe("var x : 0..3\nvar y : 0..3").unwrap()
    }

    fn x() -> AExp {
        AExp::Var("x".into(), 0)
    }

    #[test]
    fn literal_parses() {
        assert_eq!(parse_program("skip", &u()).unwrap(), Command::Skip);
        assert_eq!(
            parse_program("x := x + 1; skip", &u()).unwrap(),
            Command::seq(
                Command::Assign("x".into(), 0, AExp::add(x(), AExp::Num(1))),
                Command::Skip
            )
        );
        let a = Command::Assign("x".into(), 0, AExp::Num(1));
        let b = Command::Assign("y".into(), 1, AExp::Num(2));
        let c = Command::Write(AExp::Num(3));
        assert_eq!(
            parse_program("x := 1; y := 2; write(3)", &u()).unwrap(),
            Command::seq(a.clone(), Command::seq(b.clone(), c.clone()))
        );
        assert_eq!(
            parse_program("{x := 1; y := 2}; write(3)", &u()).unwrap(),
            Command::seq(Command::seq(a, b), c)
        );
    }

    #[test]
    fn precedence() {
        let c = parse_program("while (!x < 1 || x == 2 && true) do { x := 1 + 2 * x }", &u()).unwrap();
        let Command::While(b, body) = c else { panic!() };
        assert_eq!(
            b,
            BExp::or(
                BExp::not(BExp::Lt(x(), AExp::Num(1))),
                BExp::and(BExp::Eq(x(), AExp::Num(2)), BExp::True)
            )
        );
        assert_eq!(
            *body,
            Command::Assign("x".into(), 0, AExp::add(AExp::Num(1), AExp::mul(AExp::Num(2), x())))
        );
        let c = parse_program("if ((x + 1) < 2 && (true || false)) then {skip} else {skip}", &u()).unwrap();
        let Command::If(b, ..) = c else { panic!() };
        assert_eq!(
            b,
            BExp::and(
                BExp::Lt(AExp::add(x(), AExp::Num(1)), AExp::Num(2)),
                BExp::or(BExp::True, BExp::False)
            )
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_program("skip;\nz := 1", &u()),
            Err(Error::UndeclaredVar { line: 2, .. })
        ));
        assert!(matches!(parse_program("skip;\n\nif (x) then", &u()), Err(Error::Syntax { line: 3, .. })));
        assert!(matches!(parse_program("skip skip", &u()), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse_program("x := ", &u()), Err(Error::Syntax { line: 1, .. })));
        assert!(parse_program("while (true) do { skip; }", &u()).is_err());
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "choice { x := x - -1 } or { write(x * (y + 1)) }",
            "{ skip; skip }; if (!(x == 1) || y <= 2) then { skip } else { x := 0 - (1 - y) }",
            "while (!(true && false)) do { y := 3 }",
        ] {
            let c = parse_program(src, &u()).unwrap();
            assert_eq!(parse_program(&c.to_string(), &u()).unwrap(), c, "{src}");
        }
    }
}
