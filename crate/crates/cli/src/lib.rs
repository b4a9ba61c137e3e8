//! The `relsem` command line: argument parsing and the subcommands, each
//! returning its report and exit code so they can be tested in-process.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use relsem::gen::GenConfig;
use relsem::imp::{check_equiv, denote, parse_program, render_denotation, Flavor, Verdict};
use relsem::laws::{catalog, run_laws, LawConfig};
use relsem::par::Exec;
use relsem::symbolic::{check_soundness, parse_model, parse_statement, render, unfold};
use relsem::universe::{parse_universe, Limits, Universe};

/// Exit code for a run where everything held.
pub const OK: u8 = 0;
/// Exit code when a counterexample was found.
pub const COUNTEREXAMPLE: u8 = 1;
/// Exit code for usage, parse and config errors.
pub const USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "relsem", version, about = "Finite relation algebra, set unfolding and program semantics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the denotation of a program as a table.
    Denote {
        program: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Decide whether two programs have the same denotation.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Unfold a set statement into a pointwise formula.
    Unfold {
        /// Statement file (declarations followed by one statement).
        file: Option<PathBuf>,
        /// Inline statement text instead of a file.
        #[arg(short = 'e', long = "expr", conflicts_with = "file")]
        inline: Option<String>,
        /// Evaluate the statement directly and unfolded in this model.
        #[arg(long, requires = "universe")]
        model: Option<PathBuf>,
        #[arg(long)]
        universe: Option<PathBuf>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Check the law catalog on seeded random instances.
    Laws {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
        /// Largest carrier size of generated sorts.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        max_carrier: u64,
        /// Run cases one at a time.
        #[arg(long)]
        sequential: bool,
    },
    /// Parse a program and print it back in normal form.
    Parse {
        program: PathBuf,
        #[arg(long)]
        universe: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long, default_value = "plain")]
    pub flavor: Flavor,
    #[arg(long)]
    pub universe: PathBuf,
    #[command(flatten)]
    pub caps: Caps,
}

/// Overrides for the size caps; unset caps keep their defaults.
#[derive(Args, Debug, Default)]
pub struct Caps {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_tuples: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_powerset: Option<u64>,
    /// Maximum number of traces a trace quantifier may range over.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_traces: Option<u64>,
    /// Iteration bound for traced loops.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_iterations: Option<u64>,
}

impl Caps {
    pub fn limits(&self) -> Limits {
        let mut l = Limits::default();
        if let Some(n) = self.max_tuples {
            l.tuple_space = n as u128;
        }
        if let Some(n) = self.max_powerset {
            l.powerset_tuple_space = n as usize;
        }
        if let Some(n) = self.max_traces {
            l.trace_domain = n as usize;
        }
        if let Some(n) = self.max_iterations {
            l.loop_iterations = n as usize;
        }
        l
    }
}

/// What a subcommand prints and how the process should exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String, code: u8) -> Output {
        Output {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn error(msg: impl std::fmt::Display) -> Output {
        Output {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: USAGE,
        }
    }
}

type CmdResult = Result<Output, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn in_file(path: &Path, e: relsem::Error) -> String {
    format!("{}: {e}", path.display())
}

fn load_universe(path: &Path, caps: &Caps) -> Result<Universe, String> {
    let u = parse_universe(&read(path)?).map_err(|e| in_file(path, e))?;
    Ok(u.with_limits(caps.limits()))
}

pub fn cmd_denote(universe: &Path, program: &Path, flavor: Flavor, caps: &Caps) -> CmdResult {
    let u = load_universe(universe, caps)?;
    let c = parse_program(&read(program)?, &u).map_err(|e| in_file(program, e))?;
    let (d, stats) = denote(&c, &u, flavor).map_err(|e| e.to_string())?;
    let mut out = render_denotation(&d, &u);
    out.push_str(&format!(
        "# states: {}, iterations: {}, fixpointReached: {}\n",
        stats.states, stats.iterations, stats.fixpoint_reached
    ));
    if stats.pruned > 0 {
        out.push_str(&format!("# pruned out-of-range transitions: {}\n", stats.pruned));
    }
    Ok(Output::ok(out, OK))
}

pub fn cmd_equiv(universe: &Path, first: &Path, second: &Path, flavor: Flavor, caps: &Caps) -> CmdResult {
    let u = load_universe(universe, caps)?;
    let c1 = parse_program(&read(first)?, &u).map_err(|e| in_file(first, e))?;
    let c2 = parse_program(&read(second)?, &u).map_err(|e| in_file(second, e))?;
    Ok(match check_equiv(&c1, &c2, flavor, &u).map_err(|e| e.to_string())? {
        Verdict::Equiv => Output::ok("EQUIV\n".into(), OK),
        Verdict::Distinct(cx) => Output::ok(format!("DISTINCT\n{cx}\n"), COUNTEREXAMPLE),
        Verdict::Inconclusive(why) => Output {
            stdout: String::new(),
            stderr: format!("inconclusive: {why}\n"),
            code: USAGE,
        },
    })
}

/// Unfolds `text`; with a model, also prints the direct and unfolded truths
/// and exits 1 if they disagree.
pub fn cmd_unfold(text: &str, model: Option<(&Path, &Path)>, caps: &Caps) -> CmdResult {
    let (decls, s) = parse_statement(text).map_err(|e| e.to_string())?;
    let mut out = render(&unfold(&s).map_err(|e| e.to_string())?);
    out.push('\n');
    let mut code = OK;
    if let Some((universe, model)) = model {
        let u = load_universe(universe, caps)?;
        let m = parse_model(&read(model)?, &decls, &u).map_err(|e| in_file(model, e))?;
        let (direct, unfolded) = check_soundness(&s, &m).map_err(|e| e.to_string())?;
        out.push_str(&format!("direct: {direct}\nunfolded: {unfolded}\n"));
        if direct != unfolded {
            code = COUNTEREXAMPLE;
        }
    }
    Ok(Output::ok(out, code))
}

pub fn cmd_laws(cfg: &LawConfig, exec: Exec) -> Output {
    let report = run_laws(&catalog(), cfg, exec);
    let code = if report.passed() { OK } else { COUNTEREXAMPLE };
    Output::ok(report.to_string(), code)
}

pub fn cmd_parse(universe: &Path, program: &Path) -> CmdResult {
    let u = load_universe(universe, &Caps::default())?;
    let c = parse_program(&read(program)?, &u).map_err(|e| in_file(program, e))?;
    Ok(Output::ok(format!("{c}\n"), OK))
}

pub fn run(cli: Cli) -> Output {
    let r = match cli.command {
        Command::Denote { program, run } => cmd_denote(&run.universe, &program, run.flavor, &run.caps),
        Command::Equiv { first, second, run } => {
            cmd_equiv(&run.universe, &first, &second, run.flavor, &run.caps)
        }
        Command::Unfold {
            file,
            inline,
            model,
            universe,
            caps,
        } => {
            let text = match (file, inline) {
                (_, Some(t)) => Ok(t),
                (Some(f), None) => read(&f),
                (None, None) => Err("give a statement file or --expr".to_string()),
            };
            text.and_then(|t| {
                let m = model.as_deref().zip(universe.as_deref()).map(|(m, u)| (u, m));
                cmd_unfold(&t, m, &caps)
            })
        }
        Command::Laws {
            seed,
            cases,
            max_carrier,
            sequential,
        } => {
            let cfg = LawConfig {
                seed,
                cases: cases as usize,
                gen: GenConfig {
                    max_carrier: max_carrier as usize,
                    ..GenConfig::default()
                },
            };
            Ok(cmd_laws(&cfg, if sequential { Exec::Sequential } else { Exec::Parallel }))
        }
        Command::Parse { program, universe } => cmd_parse(&universe, &program),
    };
    r.unwrap_or_else(Output::error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_override_only_what_is_given() {
        let caps = Caps {
            max_iterations: Some(8),
            ..Caps::default()
        };
        let l = caps.limits();
        assert_eq!(l.loop_iterations, 8);
        assert_eq!(l.tuple_space, Limits::default().tuple_space);
    }
}
