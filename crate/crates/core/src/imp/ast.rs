use std::fmt;

/// Integer expressions. Variables carry their index in the universe's
/// (name-sorted) variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AExp {
    Num(i64),
    Var(String, usize),
    Add(Box<AExp>, Box<AExp>),
    Sub(Box<AExp>, Box<AExp>),
    Mul(Box<AExp>, Box<AExp>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BExp {
    True,
    False,
    Eq(AExp, AExp),
    Le(AExp, AExp),
    Lt(AExp, AExp),
    Not(Box<BExp>),
    And(Box<BExp>, Box<BExp>),
    Or(Box<BExp>, Box<BExp>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Skip,
    Assign(String, usize, AExp),
    Seq(Box<Command>, Box<Command>),
    If(BExp, Box<Command>, Box<Command>),
    While(BExp, Box<Command>),
    Choice(Box<Command>, Box<Command>),
    Write(AExp),
}

impl AExp {
    pub fn add(a: AExp, b: AExp) -> AExp {
        AExp::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: AExp, b: AExp) -> AExp {
        AExp::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: AExp, b: AExp) -> AExp {
        AExp::Mul(Box::new(a), Box::new(b))
    }

    fn prec(&self) -> u8 {
        match self {
            AExp::Add(..) | AExp::Sub(..) => 1,
            AExp::Mul(..) => 2,
            AExp::Num(n) if *n < 0 => 3,
            _ => 4,
        }
    }
}

impl BExp {
    pub fn not(a: BExp) -> BExp {
        BExp::Not(Box::new(a))
    }

    pub fn and(a: BExp, b: BExp) -> BExp {
        BExp::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BExp, b: BExp) -> BExp {
        BExp::Or(Box::new(a), Box::new(b))
    }

    fn prec(&self) -> u8 {
        match self {
            BExp::Or(..) => 1,
            BExp::And(..) => 2,
            BExp::Not(..) => 3,
            _ => 4,
        }
    }
}

impl Command {
    pub fn seq(a: Command, b: Command) -> Command {
        Command::Seq(Box::new(a), Box::new(b))
    }

    pub fn if_(b: BExp, t: Command, f: Command) -> Command {
        Command::If(b, Box::new(t), Box::new(f))
    }

    pub fn while_(b: BExp, body: Command) -> Command {
        Command::While(b, Box::new(body))
    }

    pub fn choice(a: Command, b: Command) -> Command {
        Command::Choice(Box::new(a), Box::new(b))
    }

    pub fn uses_write(&self) -> bool {
        match self {
            Command::Write(_) => true,
            Command::Skip | Command::Assign(..) => false,
            Command::Seq(a, b) | Command::If(_, a, b) | Command::Choice(a, b) => {
                a.uses_write() || b.uses_write()
            }
            Command::While(_, c) => c.uses_write(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Command::Skip | Command::Assign(..) | Command::Write(_) => 1,
            Command::Seq(a, b) | Command::If(_, a, b) | Command::Choice(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Command::While(_, c) => 1 + c.depth(),
        }
    }
}

/// Arithmetic over unbounded integers, approximated by saturating `i128`.
pub fn eval_aexp(e: &AExp, s: &[i64]) -> i128 {
    match e {
        AExp::Num(n) => *n as i128,
        AExp::Var(_, i) => s[*i] as i128,
        AExp::Add(a, b) => eval_aexp(a, s).saturating_add(eval_aexp(b, s)),
        AExp::Sub(a, b) => eval_aexp(a, s).saturating_sub(eval_aexp(b, s)),
        AExp::Mul(a, b) => eval_aexp(a, s).saturating_mul(eval_aexp(b, s)),
    }
}

pub fn eval_bexp(e: &BExp, s: &[i64]) -> bool {
    match e {
        BExp::True => true,
        BExp::False => false,
        BExp::Eq(a, b) => eval_aexp(a, s) == eval_aexp(b, s),
        BExp::Le(a, b) => eval_aexp(a, s) <= eval_aexp(b, s),
        BExp::Lt(a, b) => eval_aexp(a, s) < eval_aexp(b, s),
        BExp::Not(a) => !eval_bexp(a, s),
        BExp::And(a, b) => eval_bexp(a, s) && eval_bexp(b, s),
        BExp::Or(a, b) => eval_bexp(a, s) || eval_bexp(b, s),
    }
}

fn bin<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    p: u8,
    a: (&T, u8),
    op: &str,
    b: (&T, u8),
) -> fmt::Result {
    // left-associative: the right operand needs parens at equal precedence
    if a.1 < p {
        write!(f, "({})", a.0)?;
    } else {
        write!(f, "{}", a.0)?;
    }
    write!(f, " {op} ")?;
    if b.1 <= p {
        write!(f, "({})", b.0)
    } else {
        write!(f, "{}", b.0)
    }
}

impl fmt::Display for AExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prec();
        match self {
            AExp::Num(n) => write!(f, "{n}"),
            AExp::Var(x, _) => f.write_str(x),
            AExp::Add(a, b) => bin(f, p, (&**a, a.prec()), "+", (&**b, b.prec())),
            AExp::Sub(a, b) => bin(f, p, (&**a, a.prec()), "-", (&**b, b.prec())),
            AExp::Mul(a, b) => bin(f, p, (&**a, a.prec()), "*", (&**b, b.prec())),
        }
    }
}

impl fmt::Display for BExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prec();
        match self {
            BExp::True => f.write_str("true"),
            BExp::False => f.write_str("false"),
            BExp::Eq(a, b) => write!(f, "{a} == {b}"),
            BExp::Le(a, b) => write!(f, "{a} <= {b}"),
            BExp::Lt(a, b) => write!(f, "{a} < {b}"),
            BExp::Not(a) if a.prec() < p || matches!(**a, BExp::Eq(..) | BExp::Le(..) | BExp::Lt(..)) => {
                write!(f, "!({a})")
            }
            BExp::Not(a) => write!(f, "!{a}"),
            BExp::And(a, b) => bin(f, p, (&**a, a.prec()), "&&", (&**b, b.prec())),
            BExp::Or(a, b) => bin(f, p, (&**a, a.prec()), "||", (&**b, b.prec())),
        }
    }
}

/// Prints in the concrete syntax; `{ }` groups a left-nested sequence.
impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Skip => f.write_str("skip"),
            Command::Assign(x, _, e) => write!(f, "{x} := {e}"),
            Command::Seq(a, b) => {
                if matches!(**a, Command::Seq(..)) {
                    write!(f, "{{ {a} }}; {b}")
                } else {
                    write!(f, "{a}; {b}")
                }
            }
            Command::If(b, t, e) => write!(f, "if ({b}) then {{ {t} }} else {{ {e} }}"),
            Command::While(b, c) => write!(f, "while ({b}) do {{ {c} }}"),
            Command::Choice(a, b) => write!(f, "choice {{ {a} }} or {{ {b} }}"),
            Command::Write(e) => write!(f, "write({e})"),
        }
    }
}
