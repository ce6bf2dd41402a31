//! `catgram`: parse controlled English into logical forms, check derivation
//! certificates, run corpora and lint lexicons.
//!
//! Exit codes:
//!
//! | code | meaning                                              |
//! |------|------------------------------------------------------|
//! | 0    | success                                              |
//! | 1    | I/O error, unreadable input, lexicon failed to load  |
//! | 2    | true ambiguity                                       |
//! | 3    | no parse or unknown word                             |
//! | 4    | fuel exhausted                                       |
//! | 5    | certificate rejected                                 |
//! | 6    | lexicon lint errors                                  |
//! | 7    | ambiguity audit flags under `--strict`               |
//! | 8    | corpus cases failed                                  |

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use catgram::{
    check_certificate, emit_certificate, emit_term, emit_theorem, parse_sentence, run_case, Ambiguity, CertMeta,
    Certificate, CheckMode, Corpus, EmitOptions, Lexicon, LexiconError, Limits, Outcome, ParseError, ParseOptions,
    Target,
};

const EXIT_IO: u8 = 1;
const EXIT_AMBIGUOUS: u8 = 2;
const EXIT_NO_PARSE: u8 = 3;
const EXIT_FUEL: u8 = 4;
const EXIT_REJECTED: u8 = 5;
const EXIT_LINT: u8 = 6;
const EXIT_STRICT: u8 = 7;
const EXIT_CORPUS_FAIL: u8 = 8;

#[derive(Parser)]
#[command(name = "catgram", version, about = "Categorial-grammar semantic parser")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse one sentence and print its logical form.
    Parse(ParseArgs),
    /// Re-check a derivation certificate without parsing.
    CheckCert(CheckArgs),
    /// Run every case of a corpus file.
    Corpus(CorpusArgs),
    /// Type-check lexicon files and audit them for ambiguity.
    Lint(LintArgs),
}

#[derive(Args, Clone)]
struct GrammarArgs {
    /// Lexicon file; repeat to merge several, left to right. Defaults to
    /// the built-in demo lexicon.
    #[arg(long = "lexicon", value_name = "FILE")]
    lexicons: Vec<PathBuf>,
    /// Enable an optional lexicon feature, e.g. pair-coordination.
    #[arg(long = "feature", value_name = "NAME")]
    features: Vec<String>,
    #[arg(long, default_value_t = Limits::default().max_lift)]
    max_lift: usize,
    #[arg(long, default_value_t = Limits::default().fuel)]
    fuel: u64,
    #[arg(long, default_value_t = Limits::default().max_entries_per_word)]
    max_entries: usize,
}

impl GrammarArgs {
    fn options(&self) -> ParseOptions {
        let mut o = ParseOptions::default();
        o.limits.max_lift = self.max_lift;
        o.limits.fuel = self.fuel;
        o.limits.max_entries_per_word = self.max_entries;
        o.features.extend(self.features.iter().cloned());
        o
    }
}

#[derive(Args)]
struct ParseArgs {
    #[command(flatten)]
    grammar: GrammarArgs,
    /// Output form: `plain` prints the term, `lean` and `coq` a theorem.
    #[arg(long, default_value = "plain", value_parser = parse_target)]
    emit: Target,
    /// Theorem name for `--emit lean|coq`.
    #[arg(long, default_value = "spec")]
    name: String,
    /// Also declare the constants and types the theorem uses.
    #[arg(long)]
    stubs: bool,
    /// Annotate binders with their types.
    #[arg(long)]
    typed_binders: bool,
    /// Write a certificate for the derivation to this path.
    #[arg(long, value_name = "PATH")]
    certificate: Option<PathBuf>,
    /// Print every derivation, not only the meaning.
    #[arg(long)]
    all_parses: bool,
    /// Print chart statistics to stderr.
    #[arg(long)]
    stats: bool,
    sentence: String,
}

#[derive(Args)]
struct CheckArgs {
    document: PathBuf,
    /// Lexicon the inlined entries must match. Defaults to the demo lexicon.
    #[arg(long = "lexicon", value_name = "FILE")]
    lexicons: Vec<PathBuf>,
    /// Check internal consistency only, ignoring any lexicon.
    #[arg(long, conflicts_with = "lexicons")]
    standalone: bool,
}

#[derive(Args)]
struct CorpusArgs {
    file: PathBuf,
    #[command(flatten)]
    grammar: GrammarArgs,
    /// Also write one JSON record per case to this path (`-` for stdout).
    #[arg(long, value_name = "PATH")]
    records: Option<String>,
}

#[derive(Args)]
struct LintArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Fail when the ambiguity audit flags any pair of entries.
    #[arg(long)]
    strict: bool,
}

fn parse_target(s: &str) -> Result<Target, String> {
    Target::from_name(s).ok_or_else(|| format!("unknown target `{s}` (expected plain, lean or coq)"))
}

fn load_lexicon(paths: &[PathBuf]) -> Result<Lexicon, ExitCode> {
    if paths.is_empty() {
        return Ok(Lexicon::demo());
    }
    Lexicon::load_files(paths).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_IO)
    })
}

/// Up to three lexicon words closest to `word`.
fn nearest_words(lex: &Lexicon, word: &str) -> Vec<String> {
    let mut scored: Vec<(usize, &str)> = lex
        .words()
        .chain(lex.coordinators.keys().map(String::as_str))
        .map(|w| (strsim::damerau_levenshtein(word, w), w))
        .filter(|(d, w)| *d <= (w.len().max(word.len()) / 2).max(1))
        .collect();
    scored.sort();
    scored.dedup_by(|a, b| a.1 == b.1);
    scored.into_iter().take(3).map(|(_, w)| w.to_string()).collect()
}

fn report_parse_error(e: &ParseError, lex: &Lexicon) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        ParseError::UnknownWord { token, .. } => {
            let near = nearest_words(lex, token);
            if !near.is_empty() {
                eprintln!("hint: nearest entries: {}", near.join(", "));
            }
            ExitCode::from(EXIT_NO_PARSE)
        }
        ParseError::NoParse => ExitCode::from(EXIT_NO_PARSE),
        ParseError::FuelExhausted { .. } => ExitCode::from(EXIT_FUEL),
        ParseError::EmptyInput | ParseError::TooManyEntries { .. } => ExitCode::from(EXIT_IO),
    }
}

fn cmd_parse(a: &ParseArgs) -> ExitCode {
    let lex = match load_lexicon(&a.grammar.lexicons) {
        Ok(l) => l,
        Err(c) => return c,
    };
    let opts = a.grammar.options();
    let r = match parse_sentence(&a.sentence, &lex, &opts) {
        Ok(r) => r,
        Err(e) => return report_parse_error(&e, &lex),
    };
    if a.stats {
        let s = &r.stats;
        eprintln!(
            "items {} analyses {} rule attempts {} fuel {} invariant checks {} violations {} time {:.3} ms",
            s.items,
            s.analyses,
            s.rule_attempts,
            s.fuel_used,
            s.invariant_checks,
            s.invariant_violations,
            s.wall_time.as_secs_f64() * 1000.0
        );
    }
    if a.all_parses {
        println!("{} derivations", r.derivations.len());
        for (i, d) in r.derivations.iter().enumerate() {
            println!("# derivation {}", i + 1);
            print!("{}", d.render());
        }
    }
    let emit_opts = EmitOptions {
        typed_binders: a.typed_binders,
        stubs: a.stubs,
    };
    let render = |t: &catgram::Term| match a.emit {
        Target::Plain => emit_term(t, Target::Plain, &lex.signature, &emit_opts),
        target => emit_theorem(&a.name, t, target, &lex.signature, &emit_opts),
    };
    match r.classify() {
        Ambiguity::Unique(t) => {
            match render(&t) {
                Ok(s) => println!("{s}"),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_IO);
                }
            }
            if let Some(path) = &a.certificate {
                let cert = emit_certificate(
                    &r.derivations[r.classes[0].derivations[0]],
                    &CertMeta {
                        sentence: &a.sentence,
                        tokens: &r.tokens,
                        features: &opts.features,
                        limits: (&opts.limits).into(),
                        signature: &lex.signature,
                    },
                );
                if let Err(e) = std::fs::write(path, cert.to_json()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_IO);
                }
            }
            ExitCode::SUCCESS
        }
        Ambiguity::TrueAmbiguity(ts) => {
            eprintln!("error: true ambiguity: {} readings", ts.len());
            for (i, t) in ts.iter().enumerate() {
                match render(t) {
                    Ok(s) => println!("reading {}: {s}", i + 1),
                    Err(e) => eprintln!("reading {}: {e}", i + 1),
                }
            }
            ExitCode::from(EXIT_AMBIGUOUS)
        }
    }
}

fn cmd_check_cert(a: &CheckArgs) -> ExitCode {
    let text = match std::fs::read_to_string(&a.document) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", a.document.display());
            return ExitCode::from(EXIT_IO);
        }
    };
    let cert = match Certificate::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", a.document.display());
            return ExitCode::from(EXIT_IO);
        }
    };
    let lex;
    let mode = if a.standalone {
        CheckMode::Standalone
    } else {
        lex = match load_lexicon(&a.lexicons) {
            Ok(l) => l,
            Err(c) => return c,
        };
        CheckMode::Live(&lex)
    };
    let v = check_certificate(&cert, mode);
    if v.accepted {
        println!("accepted");
        ExitCode::SUCCESS
    } else {
        println!("rejected: {} failures", v.failures.len());
        for f in &v.failures {
            println!("  {f}");
        }
        ExitCode::from(EXIT_REJECTED)
    }
}

fn cmd_corpus(a: &CorpusArgs) -> ExitCode {
    let lex = match load_lexicon(&a.grammar.lexicons) {
        Ok(l) => l,
        Err(c) => return c,
    };
    let text = match std::fs::read_to_string(&a.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", a.file.display());
            return ExitCode::from(EXIT_IO);
        }
    };
    let name = a.file.display().to_string();
    let corpus = match Corpus::from_str(&name, &text, &lex.signature) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_IO);
        }
    };
    let opts = a.grammar.options();
    let reports: Vec<_> = corpus
        .cases
        .par_iter()
        .map(|c| run_case(c, &lex, &opts, corpus.budget))
        .collect();

    let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    println!(
        "{:<width$}  {:<6} {:>9} {:>6} {:>6}  detail",
        "id", "result", "ms", "items", "derivs"
    );
    for r in &reports {
        let result = match r.result {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
        };
        println!(
            "{:<width$}  {:<6} {:>9.2} {:>6} {:>6}  {}",
            r.id, result, r.ms, r.items, r.derivations, r.detail
        );
    }
    let passed = reports.iter().filter(|r| r.result == Outcome::Pass).count();
    println!("{passed}/{} passed", reports.len());

    if let Some(dest) = &a.records {
        let lines: String = reports.iter().map(|r| r.to_json_line() + "\n").collect();
        if dest == "-" {
            print!("{lines}");
        } else if let Err(e) = std::fs::write(dest, lines) {
            eprintln!("error: cannot write {dest}: {e}");
            return ExitCode::from(EXIT_IO);
        }
    }
    if passed == reports.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CORPUS_FAIL)
    }
}

fn cmd_lint(a: &LintArgs) -> ExitCode {
    let lex = match Lexicon::load_files(&a.files) {
        Ok(l) => l,
        Err(LexiconError::Io { file, message }) => {
            eprintln!("error: cannot read {file}: {message}");
            return ExitCode::from(EXIT_IO);
        }
        Err(LexiconError::Lint(errs)) => {
            for e in &errs {
                println!("{e}");
            }
            println!("{} lint errors", errs.len());
            return ExitCode::from(EXIT_LINT);
        }
        Err(e) => {
            println!("{e}");
            return ExitCode::from(EXIT_LINT);
        }
    };
    let audit = lex.ambiguity_audit();
    let flagged: Vec<_> = audit.flagged().collect();
    for p in &flagged {
        println!(
            "warning: `{}` may be truly ambiguous: {} overlaps {}",
            p.word, p.first, p.second
        );
    }
    let files: BTreeSet<&Path> = a.files.iter().map(PathBuf::as_path).collect();
    println!(
        "{} entries in {} files, {} lint errors, {} ambiguity warnings",
        lex.entry_count(),
        files.len(),
        0,
        flagged.len()
    );
    if a.strict && !flagged.is_empty() {
        ExitCode::from(EXIT_STRICT)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.cmd {
        Cmd::Parse(a) => cmd_parse(a),
        Cmd::CheckCert(a) => cmd_check_cert(a),
        Cmd::Corpus(a) => cmd_corpus(a),
        Cmd::Lint(a) => cmd_lint(a),
    }
}
