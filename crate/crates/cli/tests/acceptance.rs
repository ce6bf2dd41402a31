//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use catgram::syntax::print_term;
use catgram::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const SENTENCE_BUDGET: Duration = Duration::from_secs(2);

fn core_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core").join(rel)
}

fn term(lex: &Lexicon, src: &str) -> Term {
    elab::parse_term(src, &lex.signature, &BTreeSet::new(), Some(&SemType::Truth))
        .unwrap_or_else(|e| panic!("reference term `{src}`: {e}"))
}

fn keys(r: &ParseResult) -> BTreeSet<String> {
    r.classes.iter().map(|c| c.sem.alpha_key()).collect()
}

/// Canonical shape used only to relate the two reassociated corpus rows to
/// their literal forms: conjunctions flattened, universals pushed through
/// conjunctions, equations oriented by a fixed order on their sides.
fn canon(t: &Term) -> Term {
    fn conjuncts(t: Term, out: &mut Vec<Term>) {
        match t {
            Term::And(l, r) => {
                conjuncts(*l, out);
                conjuncts(*r, out);
            }
            other => out.push(other),
        }
    }
    fn rebuild(mut cs: Vec<Term>) -> Term {
        let last = cs.pop().expect("at least one conjunct");
        cs.into_iter().rev().fold(last, |acc, c| Term::and(c, acc))
    }
    match t {
        Term::And(l, r) => {
            let mut cs = Vec::new();
            conjuncts(Term::and(canon(l), canon(r)), &mut cs);
            rebuild(cs)
        }
        Term::ForAll(x, ty, b) => {
            let body = canon(b);
            let mut cs = Vec::new();
            conjuncts(body, &mut cs);
            let parts = cs.into_iter().map(|c| Term::forall(x.clone(), ty.clone(), c)).collect();
            rebuild(parts)
        }
        Term::Exists(x, ty, b) => Term::exists(x.clone(), ty.clone(), canon(b)),
        Term::Eq(ty, l, r) => {
            let (l, r) = (canon(l), canon(r));
            if l.alpha_key() <= r.alpha_key() {
                Term::eq(ty.clone(), l, r)
            } else {
                Term::eq(ty.clone(), r, l)
            }
        }
        Term::Or(l, r) => Term::or(canon(l), canon(r)),
        Term::Implies(l, r) => Term::implies(canon(l), canon(r)),
        Term::Not(x) => Term::not(canon(x)),
        Term::Lam(x, ty, b) => Term::lam(x.clone(), ty.clone(), canon(b)),
        Term::App(f, a) => Term::app(canon(f), canon(a)),
        other => other.clone(),
    }
}

struct Report {
    lines: Vec<String>,
    failed: usize,
}

impl Report {
    fn record(&mut self, n: usize, name: &str, verdict: Result<String, String>) {
        let line = match verdict {
            Ok(d) => format!("criterion {n} ({name}): PASS: {d}"),
            Err(d) => {
                self.failed += 1;
                format!("criterion {n} ({name}): FAIL: {d}")
            }
        };
        println!("{line}");
        self.lines.push(line);
    }
}

/// Reference statements for the VFA corpus, written in the term syntax.
/// Row 9 uses `contents (sort l)`; the unparenthesized `contents sort l` does not
/// typecheck as written.
const REFERENCE: [(&str, &str); 10] = [
    ("vfa-1", "forall a:Nat. forall l:List. sorted l -> sorted (insert a l)"),
    ("vfa-2", "forall l:List. sorted (sort l)"),
    (
        "vfa-3",
        "forall x:Nat. forall l:List. Permutation (cons x l) (insert x l)",
    ),
    ("vfa-4", "forall l:List. Permutation l (sort l)"),
    (
        "vfa-5",
        "exists a:List -> List. (forall l:List. sorted (a l)) /\\ (forall l:List. Permutation l (a l)) /\\ a = sort",
    ),
    (
        "vfa-6",
        "forall a b c:Multiset. union a (union b c) = union (union a b) c",
    ),
    ("vfa-7", "forall a b:Multiset. union a b = union b a"),
    (
        "vfa-8",
        "forall x:Nat. forall l:List. contents (insert x l) = contents (cons x l)",
    ),
    ("vfa-9", "forall l:List. contents l = contents (sort l)"),
    (
        "vfa-10",
        "forall l:List. contents l = contents (sort l) /\\ sorted (sort l)",
    ),
];

/// Rows whose conjunction association differs from the reference.
const REASSOCIATED: [&str; 2] = ["vfa-5", "vfa-10"];

fn vfa_reproduction(lex: &Lexicon) -> Result<String, String> {
    let corpus = Corpus::vfa(lex);
    let base = ParseOptions::default();
    let mut problems = Vec::new();
    let mut slowest = Duration::ZERO;
    for (id, literal) in REFERENCE {
        let case = corpus
            .cases
            .iter()
            .find(|c| c.id == id)
            .ok_or(format!("{id} missing"))?;
        if id == "vfa-8" && !case.features.iter().any(|f| f == "pair-coordination") {
            problems.push(format!("{id}: pair-coordination not enabled"));
        }
        let start = Instant::now();
        let r = parse_sentence(&case.sentence, lex, &case.options(&base));
        let took = start.elapsed();
        slowest = slowest.max(took);
        if took >= SENTENCE_BUDGET {
            problems.push(format!("{id}: took {took:?}"));
        }
        let got = match r.map(|r| r.classify()) {
            Ok(Ambiguity::Unique(t)) => t,
            Ok(Ambiguity::TrueAmbiguity(ts)) => {
                problems.push(format!("{id}: {} classes", ts.len()));
                continue;
            }
            Err(e) => {
                problems.push(format!("{id}: {e}"));
                continue;
            }
        };
        let literal = term(lex, literal);
        if REASSOCIATED.contains(&id) {
            // Exact against the documented association ...
            if !alpha_eq(&got, &case.terms[0]) {
                problems.push(format!("{id}: got {got}, documented {}", case.terms[0]));
            }
            // ... and the same statement as the reference once
            // conjunctions are reassociated.
            if !alpha_eq(&canon(&got), &canon(&literal)) {
                problems.push(format!("{id}: {got} is not a reassociation of {literal}"));
            }
        } else if !alpha_eq(&got, &literal) {
            problems.push(format!("{id}: got {got}, reference is {literal}"));
        }
    }
    if problems.is_empty() {
        Ok(format!(
            "10/10 unique and alpha-equivalent (rows 5 and 10 by documented association), slowest {:.1} ms",
            slowest.as_secs_f64() * 1000.0
        ))
    } else {
        Err(problems.join("; "))
    }
}

fn worked_examples(lex: &Lexicon) -> Result<String, String> {
    let cases = [
        ("four is even", "even 4"),
        ("every natural is even", "forall n:Nat. even n"),
        ("every odd natural is even", "forall n:Nat. odd n -> even n"),
        ("addone given 3 is 4", "addone 3 = 4"),
        ("addone given 3 returns a natural", "exists x:Nat. addone 3 = x"),
        (
            "every natural is non-negative and some natural is even",
            "(forall n:Nat. ge n 0) /\\ (exists n:Nat. even n)",
        ),
    ];
    let mut problems = Vec::new();
    for (s, want) in cases {
        let start = Instant::now();
        let r = parse_sentence(s, lex, &ParseOptions::default());
        let took = start.elapsed();
        if took >= SENTENCE_BUDGET {
            problems.push(format!("`{s}` took {took:?}"));
        }
        match r.map(|r| r.classify()) {
            Ok(Ambiguity::Unique(t)) if alpha_eq(&t, &term(lex, want)) => {}
            Ok(Ambiguity::Unique(t)) => problems.push(format!("`{s}` gave {t}")),
            Ok(Ambiguity::TrueAmbiguity(ts)) => problems.push(format!("`{s}` has {} classes", ts.len())),
            Err(e) => problems.push(format!("`{s}`: {e}")),
        }
    }
    if problems.is_empty() {
        Ok(format!("{}/{} alpha-equivalent", cases.len(), cases.len()))
    } else {
        Err(problems.join("; "))
    }
}

/// Corpus sentences plus hand-picked demo sentences.
fn known_sentences(lex: &Lexicon) -> Vec<(String, ParseOptions)> {
    let base = ParseOptions::default();
    let mut out: Vec<(String, ParseOptions)> = Vec::new();
    for c in Corpus::vfa(lex).cases.iter().chain(Corpus::worked(lex).cases.iter()) {
        out.push((c.sentence.clone(), c.options(&base)));
    }
    for s in [
        "four is even",
        "four is even and positive",
        "four is even or odd",
        "addone is monotone",
        "every natural is positive",
        "some natural is odd",
        "addone given four is 4",
        "sort is a permutation",
        "union is associative",
        "union is commutative",
        "insert is a permutation of cons",
        "every even natural is non-negative",
        "four is odd and positive",
        "even is four",
    ] {
        out.push((s.to_string(), base.clone()));
    }
    out
}

fn oracle_equivalence(lex: &Lexicon) -> Result<String, String> {
    let mut sentences: Vec<(Vec<String>, ParseOptions)> = known_sentences(lex)
        .into_iter()
        .map(|(s, o)| (tokenize(&s).unwrap(), o))
        .filter(|(t, _)| t.len() <= 6)
        .collect();
    let fixed = sentences.len();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..300 {
        let t = common::random_sentence(lex, &mut rng, 6);
        sentences.push((t, ParseOptions::default().with_feature("pair-coordination")));
    }
    let mut problems = Vec::new();
    let mut parsed = 0;
    for (t, o) in &sentences {
        match (parse(t, lex, o), naive_enumerate(t, lex, o)) {
            (Ok(a), Ok(b)) => {
                parsed += 1;
                if keys(&a) != keys(&b) {
                    problems.push(format!(
                        "{}: chart {} classes, naive {}",
                        t.join(" "),
                        a.classes.len(),
                        b.classes.len()
                    ));
                }
            }
            (Err(a), Err(b)) if a == b => {}
            (a, b) => problems.push(format!(
                "{}: chart {:?}, naive {:?}",
                t.join(" "),
                a.map(|r| r.classes.len()),
                b.map(|r| r.classes.len())
            )),
        }
    }
    if problems.is_empty() {
        Ok(format!(
            "{} sentences of at most 6 tokens ({fixed} corpus/demo, {} random; {parsed} parsed) agree",
            sentences.len(),
            sentences.len() - fixed
        ))
    } else {
        Err(format!("{} disagreements: {}", problems.len(), problems.join("; ")))
    }
}

/// Demo plus the extra-words fixture plus renamed copies of a random
/// sample of demo entries, so random sentences also hit overlapping words.
fn fuzz_lexicon(rng: &mut StdRng) -> Lexicon {
    use rand::seq::SliceRandom;
    let demo = Lexicon::demo();
    let mut entries: Vec<&LexEntry> = demo.all_entries().filter(|e| e.feature.is_none()).collect();
    entries.shuffle(rng);
    let mut text = String::new();
    for (i, e) in entries.iter().take(16).enumerate() {
        let vars: Vec<String> = e.vars.iter().map(|v| format!("\"{v}\"")).collect();
        let sem = print_term(&e.sem).replace('\\', "\\\\");
        let cat = e.cat.to_string().replace('\\', "\\\\");
        text.push_str(&format!(
            "[[entry]]\nword = \"fz{i}\"\nvars = [{}]\ncat = \"{cat}\"\nsem = \"{sem}\"\n\n",
            vars.join(", ")
        ));
    }
    let extra = std::fs::read_to_string(core_path("tests/fixtures/extra_words.toml")).unwrap();
    Lexicon::from_sources(&[
        (lexicon::DEMO_SOURCE, lexicon::DEMO_TEXT),
        ("extra_words.toml", &extra),
        ("fuzz.toml", &text),
    ])
    .expect("fuzz lexicon lints")
}

fn type_soundness(lex: &Lexicon) -> Result<String, String> {
    let opts = |o: &ParseOptions| ParseOptions {
        check_invariants: true,
        ..o.clone()
    };
    let (mut checks, mut violations, mut runs, mut parsed) = (0usize, 0usize, 0usize, 0usize);
    let mut tally = |stats: &Stats, ok: bool| {
        checks += stats.invariant_checks;
        violations += stats.invariant_violations;
        runs += 1;
        parsed += ok as usize;
    };
    let known = known_sentences(lex);
    let corpus_runs = known.len();
    for (s, o) in known {
        let (r, stats) = parse_with_stats(&tokenize(&s).unwrap(), lex, &opts(&o));
        tally(&stats, r.is_ok());
    }
    let mut rng = StdRng::seed_from_u64(0xf022);
    let fuzz = fuzz_lexicon(&mut rng);
    let fuzz_opts = opts(&ParseOptions::default().with_feature("pair-coordination"));
    for _ in 0..1200 {
        let t = common::random_sentence(&fuzz, &mut rng, 8);
        let (r, stats) = parse_with_stats(&t, &fuzz, &fuzz_opts);
        tally(&stats, r.is_ok());
    }
    let random = runs - corpus_runs;
    let detail = format!(
        "{corpus_runs} corpus/demo + {random} random sentences ({parsed} parsed), {checks} item checks, {violations} violations"
    );
    if violations == 0 && checks > 0 && random >= 1000 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn normal_form_pruning(lex: &Lexicon) -> Result<String, String> {
    let base = ParseOptions::default();
    let loose_of = |o: &ParseOptions| ParseOptions {
        normal_form: false,
        ..o.clone()
    };
    let mut problems = Vec::new();
    let mut grew = Vec::new();
    let mut classes = 0;
    for c in Corpus::vfa(lex).cases.iter().chain(Corpus::worked(lex).cases.iter()) {
        if c.expect == Expectation::NoParse {
            continue;
        }
        let o = c.options(&base);
        let strict = match parse_sentence(&c.sentence, lex, &o) {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!("{}: {e}", c.id));
                continue;
            }
        };
        for cl in &strict.classes {
            classes += 1;
            if cl.derivations.len() != 1 {
                problems.push(format!("{}: a class has {} derivations", c.id, cl.derivations.len()));
            }
        }
        match parse_sentence(&c.sentence, lex, &loose_of(&o)) {
            Ok(loose) => {
                if keys(&loose) != keys(&strict) {
                    problems.push(format!("{}: classes change without normal form", c.id));
                }
                if strict.tokens.len() >= 5 && loose.derivations.len() > strict.derivations.len() {
                    grew.push(format!(
                        "{} {}->{}",
                        c.id,
                        strict.derivations.len(),
                        loose.derivations.len()
                    ));
                }
            }
            Err(e) => problems.push(format!("{} without normal form: {e}", c.id)),
        }
    }
    if grew.is_empty() {
        problems.push("no sentence of 5+ tokens gains derivations without normal form".into());
    }
    if problems.is_empty() {
        Ok(format!(
            "{classes} classes with one derivation each; without normal form: {}",
            grew.join(", ")
        ))
    } else {
        Err(problems.join("; "))
    }
}

fn certificate_soundness(lex: &Lexicon) -> Result<String, String> {
    let certs = common::corpus_certificates(lex);
    let mut problems = Vec::new();
    for (id, c) in &certs {
        let back = match Certificate::from_json(&c.to_json()) {
            Ok(b) => b,
            Err(e) => {
                problems.push(format!("{id}: {e}"));
                continue;
            }
        };
        for (name, mode) in [("live", CheckMode::Live(lex)), ("standalone", CheckMode::Standalone)] {
            let v = check_certificate(&back, mode);
            if !v.accepted {
                problems.push(format!("{id} ({name}) rejected: {:?}", v.failures));
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0xce47);
    let (mut mutants, mut exempt, mut draws) = (0, 0, 0);
    while mutants < 600 && draws < 100_000 {
        draws += 1;
        let (id, c) = &certs[draws % certs.len()];
        let Some((what, m)) = common::mutate(c, &mut rng) else {
            exempt += 1;
            continue;
        };
        mutants += 1;
        let m = Certificate::from_json(&m.to_json()).map_err(|e| e.to_string())?;
        for (name, mode) in [("live", CheckMode::Live(lex)), ("standalone", CheckMode::Standalone)] {
            if check_certificate(&m, mode).accepted {
                problems.push(format!("{id} ({name}) accepted mutant: {what}"));
            }
        }
    }
    if mutants < 500 {
        problems.push(format!("only {mutants} mutants generated"));
    }
    if problems.is_empty() {
        Ok(format!(
            "{} certificates accepted in both modes; {mutants} mutants rejected in both modes ({exempt} draws skipped as no-ops or alpha-equivalent)",
            certs.len()
        ))
    } else {
        Err(format!("{} problems: {}", problems.len(), problems.join("; ")))
    }
}

fn lexicon_linting() -> Result<String, String> {
    let bad = core_path("tests/fixtures/ill_typed.toml");
    let diag = match Lexicon::load_files(&[&bad]) {
        Ok(_) => return Err("ill-typed fixture loaded".into()),
        Err(e) => e.to_string(),
    };
    let names_types = diag.contains("expected Nat -> Nat -> Prop") && diag.contains("found Nat -> Prop");
    if !names_types {
        return Err(format!("diagnostic lacks expected/found types: {diag}"));
    }
    let demo = Lexicon::load_files(&[core_path("data/demo.toml")]).map_err(|e| format!("demo rejected: {e}"))?;
    let first = diag.lines().next().unwrap_or_default().to_string();
    Ok(format!(
        "fixture rejected ({first}); demo loads clean with {} entries",
        demo.entry_count()
    ))
}

fn ambiguity_detection() -> Result<String, String> {
    let path = core_path("tests/fixtures/ambiguous_even.toml");
    let lex = Lexicon::load_files(&[&path]).map_err(|e| e.to_string())?;
    let r = parse_sentence("four is even", &lex, &ParseOptions::default()).map_err(|e| e.to_string())?;
    let n = match r.classify() {
        Ambiguity::TrueAmbiguity(ts) => ts.len(),
        Ambiguity::Unique(t) => return Err(format!("unique: {t}")),
    };
    let out = Command::new(env!("CARGO_BIN_EXE_catgram"))
        .args(["parse", "--lexicon", path.to_str().unwrap(), "four is even"])
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code();
    if n == 2 && code == Some(2) {
        Ok("TrueAmbiguity with 2 classes, cli exit 2".into())
    } else {
        Err(format!("{n} classes, cli exit {code:?}"))
    }
}

fn main() -> ExitCode {
    let lex = Lexicon::demo();
    let mut report = Report {
        lines: Vec::new(),
        failed: 0,
    };
    report.record(1, "VFA reproduction", vfa_reproduction(&lex));
    report.record(2, "worked examples", worked_examples(&lex));
    report.record(3, "oracle equivalence", oracle_equivalence(&lex));
    report.record(4, "type soundness", type_soundness(&lex));
    report.record(5, "normal-form pruning", normal_form_pruning(&lex));
    report.record(6, "certificate soundness", certificate_soundness(&lex));
    report.record(7, "lexicon linting", lexicon_linting());
    report.record(8, "ambiguity detection", ambiguity_detection());
    println!(
        "{}/{} criteria passed",
        report.lines.len() - report.failed,
        report.lines.len()
    );
    if report.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
