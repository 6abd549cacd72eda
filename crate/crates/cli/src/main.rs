use std::error::Error as StdError;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use backref::avd::{savd_bruteforce, VarAnalysis, SAVD_VAR_CAP};
use backref::engine::{recommend, Compiled, Engine, DEFAULT_AVD_CAP};
use backref::mdet::{analyse, bounded_sync_check};
use backref::mfa::{build_crude, export_dot, export_json, import_json, Consume, Label, Mfa, DEFAULT_BUDGET};
use backref::sync::SyncMatcher;
use backref::syntax::Regex;
use backref::testgen::{one_in_three_mfa, sat_sync_bound, sat_sync_mfa, set_cover_regex, Cnf, SetCover};
use backref::{symbols, tokens, word_to_string, Symbol};
use clap::{Parser, Subcommand, ValueEnum};

type CliResult<T> = Result<T, Box<dyn StdError>>;

#[derive(Parser)]
#[command(name = "backref", version, about = "Regular expressions with backreferences: matching and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Match an input against a pattern (exit 0: match, 1: no match, 2: error).
    Match(MatchArgs),
    /// Active variable degree and per-definition active variables.
    Avd {
        pattern: String,
        /// Also compute the strong degree by brute force.
        #[arg(long)]
        savd: bool,
    },
    /// Decide memory determinism of a pattern's automaton or of an automaton file.
    Mdet {
        #[arg(required_unless_present = "mfa", conflicts_with = "mfa")]
        pattern: Option<String>,
        #[arg(long)]
        mfa: Option<PathBuf>,
        /// Longest input tried when searching for a witness word.
        #[arg(long, default_value_t = 6)]
        check_len: usize,
    },
    /// Generate a pattern or automaton from a combinatorial instance.
    Gen {
        kind: GenKind,
        instance: PathBuf,
        /// Cover size bound for `setcover`.
        #[arg(long, required_if_eq("kind", "setcover"))]
        k: Option<usize>,
    },
    /// Classify every pattern of a corpus file (one per line) as CSV.
    Classify {
        corpus: PathBuf,
        #[arg(long, default_value_t = DEFAULT_AVD_CAP)]
        avd_cap: usize,
    },
    /// Print the canonical automaton of a pattern as JSON, or DOT with `--dot`.
    Export {
        pattern: String,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Auto,
    Oracle,
    Bfs,
    Reuse,
    Sync,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Setcover,
    Onein3,
    Satsync,
}

#[derive(clap::Args)]
struct MatchArgs {
    #[arg(long, value_enum, default_value_t = EngineChoice::Auto)]
    engine: EngineChoice,
    #[arg(long, default_value_t = DEFAULT_AVD_CAP)]
    avd_cap: usize,
    /// Search budget for the oracle and automaton search engines.
    #[arg(long)]
    budget: Option<usize>,
    /// Run the sync engine even when memory determinism does not hold.
    #[arg(long)]
    force_sync: bool,
    /// Match against an automaton file instead of a pattern.
    #[arg(long)]
    mfa: Option<PathBuf>,
    /// Split the input on whitespace into tokens instead of characters.
    #[arg(long)]
    tokens: bool,
    /// `<pattern> <input>`, or just `<input>` with `--mfa`. The input is a
    /// file path if such a file exists, else the literal text.
    #[arg(num_args = 1..=2, required = true)]
    operands: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Match(args) => cmd_match(&args),
        Command::Avd { pattern, savd } => cmd_avd(&pattern, savd),
        Command::Mdet { pattern, mfa, check_len } => cmd_mdet(pattern.as_deref(), mfa.as_deref(), check_len),
        Command::Gen { kind, instance, k } => cmd_gen(kind, &instance, k),
        Command::Classify { corpus, avd_cap } => cmd_classify(&corpus, avd_cap),
        Command::Export { pattern, dot } => cmd_export(&pattern, dot),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_input(operand: &str, as_tokens: bool) -> CliResult<Vec<Symbol>> {
    let path = Path::new(operand);
    let text = if path.is_file() {
        let mut text = fs::read_to_string(path)?;
        if text.ends_with('\n') {
            text.pop();
            if text.ends_with('\r') {
                text.pop();
            }
        }
        text
    } else {
        operand.to_string()
    };
    Ok(if as_tokens { tokens(&text) } else { symbols(&text) })
}

fn load_mfa(path: &Path) -> CliResult<Mfa> {
    Ok(import_json(&fs::read_to_string(path)?)?)
}

fn cmd_match(args: &MatchArgs) -> CliResult<ExitCode> {
    let (pattern, input) = match (&args.mfa, args.operands.as_slice()) {
        (Some(_), [input]) => (None, input),
        (None, [pattern, input]) => (Some(pattern), input),
        (Some(_), _) => return Err("with --mfa give only the input".into()),
        (None, _) => return Err("expected a pattern and an input".into()),
    };
    let w = read_input(input, args.tokens)?;
    let (compiled, engine) = match pattern {
        Some(p) => compile_pattern(&Regex::parse(p)?, args)?,
        None => compile_mfa(load_mfa(args.mfa.as_deref().unwrap())?, args)?,
    };
    let compiled = match args.budget {
        Some(b) => compiled.with_budget(b),
        None => compiled,
    };
    let hit = compiled.is_match(&w)?;
    println!("{}\tengine={engine}", if hit { "match" } else { "no match" });
    Ok(if hit { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn refuse_sync() -> Box<dyn StdError> {
    "refusing to run the sync engine: the automaton is not memory-deterministic (pass --force-sync to override)".into()
}

fn compile_pattern(regex: &Regex, args: &MatchArgs) -> CliResult<(Compiled, Engine)> {
    let engine = match args.engine {
        EngineChoice::Auto => recommend(regex, args.avd_cap).engine,
        EngineChoice::Oracle => Engine::Oracle,
        EngineChoice::Bfs => Engine::GenericBfs,
        EngineChoice::Reuse => Engine::ReuseMfa(VarAnalysis::new(regex).avd()),
        EngineChoice::Sync => {
            if !args.force_sync && !recommend(regex, args.avd_cap).mdet {
                return Err(refuse_sync());
            }
            Engine::Sync
        }
    };
    Ok((Compiled::new(regex, engine)?, engine))
}

fn compile_mfa(mfa: Mfa, args: &MatchArgs) -> CliResult<(Compiled, Engine)> {
    match args.engine {
        EngineChoice::Auto if analyse(&mfa).deterministic => {
            Ok((Compiled::Sync(Box::new(SyncMatcher::new(mfa))), Engine::Sync))
        }
        EngineChoice::Auto | EngineChoice::Bfs => Ok((Compiled::Bfs(mfa, DEFAULT_BUDGET), Engine::GenericBfs)),
        EngineChoice::Sync => {
            if !args.force_sync && !analyse(&mfa).deterministic {
                return Err(refuse_sync());
            }
            Ok((Compiled::Sync(Box::new(SyncMatcher::new(mfa))), Engine::Sync))
        }
        EngineChoice::Oracle | EngineChoice::Reuse => Err("this engine needs a pattern, not an automaton".into()),
    }
}

fn var_set(regex: &Regex, vars: &[usize]) -> String {
    let names: Vec<&str> = vars.iter().map(|&v| regex.var_name(v)).collect();
    format!("{{{}}}", names.join(", "))
}

fn cmd_avd(pattern: &str, savd: bool) -> CliResult<ExitCode> {
    let regex = Regex::parse(pattern)?;
    let analysis = VarAnalysis::new(&regex);
    let mut out = io::stdout().lock();
    writeln!(out, "avd={}", analysis.avd())?;
    for d in &analysis.definitions {
        writeln!(out, "  {} active={}", regex.subpattern(d.definition), var_set(&regex, &d.active))?;
    }
    if savd {
        if regex.var_count() > SAVD_VAR_CAP {
            eprintln!("warning: savd skipped, {} variables exceed the cap of {SAVD_VAR_CAP}", regex.var_count());
        } else {
            writeln!(out, "savd={}", savd_bruteforce(&regex)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_mdet(pattern: Option<&str>, mfa_path: Option<&Path>, check_len: usize) -> CliResult<ExitCode> {
    let mfa = match (pattern, mfa_path) {
        (Some(p), _) => build_crude(&Regex::parse(p)?),
        (None, Some(path)) => load_mfa(path)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let report = analyse(&mfa);
    let mut out = io::stdout().lock();
    writeln!(out, "memory-deterministic: {}", if report.deterministic { "yes" } else { "no" })?;
    if let Some(w) = &report.witness {
        writeln!(out, "witness: origin={} first={} second={}", w.origin, w.first, w.second)?;
        let labels: Vec<String> = w.labels.iter().map(|&c| mfa.label_text(consume_label(c))).collect();
        writeln!(out, "labels: {}", labels.join(" "))?;
        for len in 0..=check_len {
            match bounded_sync_check(&mfa, len) {
                Ok(Some(v)) => {
                    writeln!(out, "witness word: {:?}", word_to_string(&v.word))?;
                    break;
                }
                Ok(None) => {}
                Err(_) => break,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn consume_label(c: Consume) -> Label {
    match c {
        Consume::Sym(s) => Label::Char(s),
        Consume::Mem(m) => Label::Recall(m),
    }
}

fn cmd_gen(kind: GenKind, instance: &Path, k: Option<usize>) -> CliResult<ExitCode> {
    let text = fs::read_to_string(instance)?;
    match kind {
        GenKind::Setcover => {
            let inst = SetCover::parse(&text, k.expect("clap requires --k"))?;
            println!("{}", set_cover_regex(&inst)?);
        }
        GenKind::Onein3 => {
            let (mfa, probe) = one_in_three_mfa(&Cnf::parse(&text)?)?;
            eprintln!("probe={}", word_to_string(&probe));
            println!("{}", export_json(&mfa));
        }
        GenKind::Satsync => {
            let cnf = Cnf::parse(&text)?;
            let mfa = sat_sync_mfa(&cnf)?;
            eprintln!("bound={}", sat_sync_bound(&cnf));
            println!("{}", export_json(&mfa));
        }
    }
    Ok(ExitCode::SUCCESS)
}

struct Record {
    pattern: String,
    parse_ok: bool,
    vars: Option<usize>,
    avd: Option<usize>,
    mdet: Option<bool>,
    engine: Option<Engine>,
    millis: f64,
}

fn classify_one(pattern: &str, avd_cap: usize) -> Record {
    let start = Instant::now();
    let info = Regex::parse(pattern).ok().map(|r| recommend(&r, avd_cap));
    Record {
        pattern: pattern.to_string(),
        parse_ok: info.is_some(),
        vars: info.as_ref().map(|i| i.vars),
        avd: info.as_ref().map(|i| i.avd),
        mdet: info.as_ref().map(|i| i.mdet),
        engine: info.as_ref().map(|i| i.engine),
        millis: start.elapsed().as_secs_f64() * 1000.0,
    }
}

fn cmd_classify(corpus: &Path, avd_cap: usize) -> CliResult<ExitCode> {
    let text = fs::read_to_string(corpus)?;
    let patterns: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(patterns.len().max(1));
    let chunk = patterns.len().div_ceil(workers).max(1);
    let records: Vec<Record> = std::thread::scope(|s| {
        let handles: Vec<_> = patterns
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|p| classify_one(p, avd_cap)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("classification worker panicked")).collect()
    });
    let mut out = csv::Writer::from_writer(io::stdout().lock());
    out.write_record(["pattern", "parseOk", "numVars", "avd", "mdet", "recommendedEngine", "analysisMs"])?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in records {
        out.write_record([
            r.pattern,
            r.parse_ok.to_string(),
            opt(r.vars.map(|v| v.to_string())),
            opt(r.avd.map(|v| v.to_string())),
            opt(r.mdet.map(|v| v.to_string())),
            opt(r.engine.map(|v| v.to_string())),
            format!("{:.3}", r.millis),
        ])?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(pattern: &str, dot: bool) -> CliResult<ExitCode> {
    let mfa = build_crude(&Regex::parse(pattern)?);
    println!("{}", if dot { export_dot(&mfa) } else { export_json(&mfa) });
    Ok(ExitCode::SUCCESS)
}
