use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use synka::checks::{self, CheckConfig, Suite};
use synka::normalform::{build_system, solve};
use synka::{
    build_automaton, classify, equiv_with_cap, eval_cm, member, parse_alphabet, parse_term, parse_term_in, sem_bounded,
    standard_valuation, SymSet, SyncWord, Term, DEFAULT_PAIR_CAP,
};

#[derive(Parser, Debug)]
#[command(name = "synka", version, about = "Synchronous Kleene algebra toolkit")]
struct Cli {
    /// Letters allowed in terms, e.g. `abc`. Defaults to the letters that occur.
    #[arg(long, global = true)]
    alphabet: Option<String>,
    /// Word-length bound for bounded semantics.
    #[arg(long, global = true, default_value_t = 4)]
    bound: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    iters: usize,
    /// Maximum number of state pairs visited by the equivalence check.
    #[arg(long, global = true, default_value_t = DEFAULT_PAIR_CAP)]
    cap: usize,
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse terms and report their fragments.
    Parse {
        terms: Vec<String>,
        /// Read one term per line; blank lines and `#` comments are skipped.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Decide whether a word such as `{a}{a,b}` (or `eps`) is in a term's language.
    Member { word: String, term: String },
    /// Decide language equality of two terms.
    Equiv { left: String, right: String },
    /// Print an equivalent term in the NSF fragment.
    Nf {
        term: String,
        /// Also dump the linear system.
        #[arg(long)]
        system: bool,
    },
    /// Build the syntactic automaton.
    Automaton {
        term: String,
        /// Write Graphviz output here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// List the words of the language up to `--bound`.
    Sem { term: String },
    /// Evaluate an H-free term in the countermodel.
    EvalCm { term: String },
    /// Run a seeded property suite.
    Check {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Largest random term.
        #[arg(long, default_value_t = 12)]
        max_size: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Axioms,
    Derivatives,
    Fundamental,
    Normalform,
    Countermodel,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Axioms => Suite::Axioms,
            SuiteArg::Derivatives => Suite::Derivatives,
            SuiteArg::Fundamental => Suite::Fundamental,
            SuiteArg::Normalform => Suite::Normalform,
            SuiteArg::Countermodel => Suite::Countermodel,
        }
    }
}

/// Exit status: 0 success, 1 negative answer or failed property.
struct Outcome {
    positive: bool,
}

type Result<T> = std::result::Result<T, String>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome { positive: true }) => ExitCode::SUCCESS,
        Ok(Outcome { positive: false }) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        print!("{}", text());
    }
}

fn alphabet(cli: &Cli) -> Result<Option<SymSet>> {
    cli.alphabet.as_deref().map(parse_alphabet).transpose().map_err(|e| e.to_string())
}

fn term(cli: &Cli, text: &str) -> Result<Term> {
    let parsed = match alphabet(cli)? {
        Some(sigma) => parse_term_in(text, sigma),
        None => parse_term(text),
    };
    parsed.map_err(|e| format!("in `{text}`: {e}"))
}

fn read_terms(path: &PathBuf) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

#[derive(Serialize)]
struct ParsedTerm {
    input: String,
    term: String,
    size: usize,
    fragments: synka::Fragments,
}

#[derive(Serialize)]
struct Membership {
    word: String,
    term: String,
    member: bool,
}

#[derive(Serialize)]
struct Equivalence {
    left: String,
    right: String,
    equivalent: bool,
    witness: Option<String>,
}

#[derive(Serialize)]
struct NormalForm {
    term: String,
    normal_form: String,
    system: Option<String>,
}

#[derive(Serialize)]
struct AutomatonSummary {
    term: String,
    states: Vec<String>,
    accepting: Vec<usize>,
    transitions: usize,
    dot: Option<String>,
}

#[derive(Serialize)]
struct Bounded {
    term: String,
    bound: usize,
    words: Vec<String>,
}

#[derive(Serialize)]
struct CmValue {
    term: String,
    value: String,
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Parse { terms, file } => {
            let mut inputs = terms.clone();
            if let Some(path) = file {
                inputs.extend(read_terms(path)?);
            }
            if inputs.is_empty() {
                return Err("no terms given".into());
            }
            let mut parsed = Vec::new();
            for input in inputs {
                let t = term(cli, &input)?;
                parsed.push(ParsedTerm { term: t.to_string(), size: t.size(), fragments: classify(&t), input });
            }
            emit(cli, &parsed, || {
                parsed
                    .iter()
                    .map(|p| {
                        let f = p.fragments;
                        let mut tags = Vec::new();
                        for (on, name) in [(f.sl, "sl"), (f.ska, "ska"), (f.sf1, "sf1"), (f.nsf, "nsf")] {
                            if on {
                                tags.push(name);
                            }
                        }
                        format!("{}\tsize {}\t{}\n", p.term, p.size, tags.join(","))
                    })
                    .collect()
            });
            Ok(Outcome { positive: true })
        }
        Command::Member { word, term: text } => {
            let t = term(cli, text)?;
            let w = SyncWord::parse(word).map_err(|e| format!("in `{word}`: {e}"))?;
            let m = member(&w, &t);
            let report = Membership { word: w.to_string(), term: t.to_string(), member: m };
            emit(cli, &report, || if m { "member\n".into() } else { "not member\n".into() });
            Ok(Outcome { positive: m })
        }
        Command::Equiv { left, right } => {
            let (e, f) = (term(cli, left)?, term(cli, right)?);
            let r = equiv_with_cap(&e, &f, cli.cap).map_err(|e| e.to_string())?;
            let report = Equivalence {
                left: e.to_string(),
                right: f.to_string(),
                equivalent: r.equivalent,
                witness: r.witness.as_ref().map(SyncWord::to_string),
            };
            emit(cli, &report, || match &r.witness {
                None => "equivalent\n".into(),
                Some(w) => format!("not equivalent, witness {w}\n"),
            });
            Ok(Outcome { positive: r.equivalent })
        }
        Command::Nf { term: text, system } => {
            let t = term(cli, text)?;
            let sys = build_system(&t);
            let sol = solve(&sys).map_err(|e| e.to_string())?;
            let nf = sol.assignment[0].clone();
            let report = NormalForm {
                term: t.to_string(),
                normal_form: nf.to_string(),
                system: system.then(|| sys.to_string()),
            };
            emit(cli, &report, || match &report.system {
                Some(s) => format!("{s}\n{nf}\n"),
                None => format!("{nf}\n"),
            });
            Ok(Outcome { positive: true })
        }
        Command::Automaton { term: text, dot } => {
            let t = term(cli, text)?;
            let aut = build_automaton(&t);
            let graph = aut.to_dot();
            if let Some(path) = dot {
                fs::write(path, &graph).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            let report = AutomatonSummary {
                term: t.to_string(),
                states: aut.states().iter().map(Term::to_string).collect(),
                accepting: (0..aut.len()).filter(|&q| aut.is_accepting(q)).collect(),
                transitions: aut.transition_count(),
                dot: dot.is_none().then(|| graph.clone()),
            };
            emit(cli, &report, || {
                if dot.is_some() {
                    let mut s = String::new();
                    for (q, st) in report.states.iter().enumerate() {
                        let mark = if aut.is_accepting(q) { "*" } else { " " };
                        s.push_str(&format!("{mark}{q}\t{st}\n"));
                    }
                    s.push_str(&format!("{} states, {} transitions\n", aut.len(), report.transitions));
                    s
                } else {
                    graph.clone()
                }
            });
            Ok(Outcome { positive: true })
        }
        Command::Sem { term: text } => {
            let t = term(cli, text)?;
            let lang = sem_bounded(&t, cli.bound);
            let report = Bounded {
                term: t.to_string(),
                bound: cli.bound,
                words: lang.words().iter().map(SyncWord::to_string).collect(),
            };
            emit(cli, &report, || report.words.iter().map(|w| format!("{w}\n")).collect());
            Ok(Outcome { positive: true })
        }
        Command::EvalCm { term: text } => {
            let t = term(cli, text)?;
            let v = eval_cm(&t, &standard_valuation(&t)).map_err(|e| e.to_string())?;
            let report = CmValue { term: t.to_string(), value: v.to_string() };
            emit(cli, &report, || format!("{v}\n"));
            Ok(Outcome { positive: true })
        }
        Command::Check { suite, max_size } => {
            let config = CheckConfig {
                seed: cli.seed,
                iters: cli.iters,
                bound: cli.bound,
                cap: cli.cap,
                alphabet: alphabet(cli)?.unwrap_or(SymSet::of("abc")),
                max_size: *max_size,
            };
            if *max_size == 0 {
                return Err("--max-size must be positive".into());
            }
            let report = checks::run((*suite).into(), &config);
            emit(cli, &report, || report.to_string());
            Ok(Outcome { positive: report.ok() })
        }
    }
}
