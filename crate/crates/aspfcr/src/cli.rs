//! Command-line front end.
//!
//! Four file-driven modes (solve, ground, stats, check) plus a corpus runner
//! for regression suites. All of them take one or more program files, which
//! are concatenated in order; diagnostics are mapped back to the file and
//! line they came from.
//!
//! Exit codes follow the usual solver convention: 10 when at least one
//! answer was reported, 20 when the search completed with none, 75 when the
//! time budget ran out before anything was found, 65 for input errors, and
//! 70 for internal failures such as an oracle disagreement or a corpus
//! mismatch. Ground, stats, and corpus runs that succeed exit 0.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::crsolver::{merged, oracle_supports, solve_cr, support_label, ORACLE_SUPPORT_BOUND};
use crate::grounder::{ground, stats, GroundError, GroundProgram};
use crate::parser::parse;
use crate::semantics::SeedSet;
use crate::solver::{
    check_model, oracle_solve, solve, SolveLimits, Verdict, ORACLE_BOUND,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_INPUT: i32 = 65;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_BUDGET: i32 = 75;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Solve,
    Ground,
    Stats,
    Check,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub mode: Mode,
    pub files: Vec<PathBuf>,
    /// Maximum number of answers to report; 0 means all of them.
    pub max_models: usize,
    /// Time budget in seconds.
    pub time_budget: Option<f64>,
    /// Suppress answers whose visible projection repeats an earlier one.
    pub distinct: bool,
    /// Cross-check the solver against exhaustive enumeration before
    /// reporting.
    pub oracle: bool,
    /// Model file for check mode.
    pub model_file: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mode: Mode::Solve,
            files: Vec::new(),
            max_models: 0,
            time_budget: None,
            distinct: false,
            oracle: false,
            model_file: None,
        }
    }
}

struct Segment {
    name: String,
    first: u32,
    lines: u32,
}

/// Maps a line of the concatenated program text back to its source file.
pub struct SourceMap {
    segments: Vec<Segment>,
}

impl SourceMap {
    fn locate(&self, line: u32) -> (String, u32) {
        for seg in &self.segments {
            if line < seg.first + seg.lines {
                return (seg.name.clone(), line - seg.first + 1);
            }
        }
        match self.segments.last() {
            Some(seg) => (seg.name.clone(), line.saturating_sub(seg.first) + 1),
            None => ("<empty>".to_string(), line),
        }
    }
}

/// Reads and concatenates the given files; `-` reads standard input.
pub fn load_sources(files: &[PathBuf]) -> io::Result<(String, SourceMap)> {
    let mut text = String::new();
    let mut segments = Vec::new();
    for f in files {
        let (name, mut part) = if f.as_os_str() == "-" {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf)?;
            ("<stdin>".to_string(), buf)
        } else {
            let buf = fs::read_to_string(f)
                .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", f.display())))?;
            (f.display().to_string(), buf)
        };
        if !part.ends_with('\n') {
            part.push('\n');
        }
        let lines = part.lines().count() as u32;
        segments.push(Segment { name, first: (text.lines().count() + 1) as u32, lines });
        text.push_str(&part);
    }
    Ok((text, SourceMap { segments }))
}

/// Splits a `line N[, column C]: message` diagnostic into its parts.
fn split_message(msg: &str) -> &str {
    msg.split_once(": ").map(|(_, rest)| rest).unwrap_or(msg)
}

fn ground_error_line(e: &GroundError) -> u32 {
    match e {
        GroundError::Unsafe { line, .. }
        | GroundError::UnsafeChoiceLocal { line, .. }
        | GroundError::IllSorted { line, .. }
        | GroundError::DivisionByZero { line }
        | GroundError::Overflow { line }
        | GroundError::HeadNotSeed { line, .. } => *line,
    }
}

fn remap(map: &SourceMap, line: u32, msg: &str) -> String {
    let (file, local) = map.locate(line);
    format!("{file}:{local}: {}", split_message(msg))
}

fn literal_name_arity(l: &crate::grounder::GLiteral) -> (String, usize) {
    use crate::grounder::{GLiteral, GTerm};
    match l {
        GLiteral::Reg { atom, .. } => (atom.name.clone(), atom.args.len()),
        GLiteral::Cmp { lhs: GTerm::Simple(s), .. } => (s.name.clone(), s.args.len()),
        GLiteral::Cmp { .. } => (String::new(), 0),
    }
}

/// The visible projection of a model: hidden `#` atoms dropped, the `#show`
/// filter applied, literals sorted and space-joined.
pub fn model_line(m: &SeedSet, shows: &[(String, usize)]) -> String {
    let mut items: Vec<String> = Vec::new();
    for l in m.literals() {
        let (name, arity) = literal_name_arity(&l);
        if name.starts_with('#') {
            continue;
        }
        if !shows.is_empty() && !shows.contains(&(name.clone(), arity)) {
            continue;
        }
        items.push(l.to_string());
    }
    items.sort();
    items.join(" ")
}

/// Runs one of the file-driven modes, writing reports to `out` and
/// diagnostics to `err`, and returns the process exit code.
pub fn run(opts: &Options, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_inner(opts, out, err) {
        Ok(code) => code,
        Err(_) => EXIT_SOFTWARE,
    }
}

fn run_inner(opts: &Options, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    if let Some(t) = opts.time_budget {
        if !t.is_finite() || t < 0.0 {
            writeln!(err, "error: time budget must be a non-negative number of seconds")?;
            return Ok(EXIT_INPUT);
        }
    }
    let (text, map) = match load_sources(&opts.files) {
        Ok(x) => x,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_INPUT);
        }
    };
    let prog = match parse(&text) {
        Ok(p) => p,
        Err(e) => {
            let (file, local) = map.locate(e.line);
            writeln!(err, "{file}:{local}:{}: {}", e.col, split_message(&e.to_string()))?;
            return Ok(EXIT_INPUT);
        }
    };
    let g = match ground(&prog) {
        Ok(g) => g,
        Err(e) => {
            writeln!(err, "{}", remap(&map, ground_error_line(&e), &e.to_string()))?;
            return Ok(EXIT_INPUT);
        }
    };
    for w in &g.warnings {
        let line: Option<u32> = w
            .strip_prefix("line ")
            .and_then(|rest| rest.split_once(':'))
            .and_then(|(n, _)| n.parse().ok());
        match line {
            Some(l) => writeln!(err, "warning: {}", remap(&map, l, w))?,
            None => writeln!(err, "warning: {w}")?,
        }
    }
    match opts.mode {
        Mode::Solve => run_solve(&g, opts, out, err),
        Mode::Ground => {
            write!(out, "{}", g.render())?;
            Ok(EXIT_OK)
        }
        Mode::Stats => {
            let st = stats(&g);
            write!(out, "{}", st.to_csv())?;
            writeln!(
                err,
                "total={} seed_universe={} warnings={}",
                st.total,
                st.seed_universe,
                g.warnings.len()
            )?;
            Ok(EXIT_OK)
        }
        Mode::Check => run_check(&g, opts, out, err),
    }
}

fn limits_of(opts: &Options) -> SolveLimits {
    SolveLimits {
        max_models: opts.max_models,
        time_budget: opts.time_budget.map(Duration::from_secs_f64),
    }
}

fn run_solve(
    g: &GroundProgram,
    opts: &Options,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    if opts.oracle {
        if let Some(code) = oracle_disagreement(g, err)? {
            return Ok(code);
        }
    }
    let limits = limits_of(opts);
    // (projected line, support label) per answer, in emission order
    let mut records: Vec<(String, Option<String>)> = Vec::new();
    let timed_out;
    if g.cr_rules.is_empty() {
        let res = match solve(g, &limits) {
            Ok(r) => r,
            Err(e) => {
                writeln!(err, "error: {e}")?;
                return Ok(EXIT_INPUT);
            }
        };
        timed_out = res.timed_out;
        for m in &res.models {
            records.push((model_line(m, &g.shows), None));
        }
    } else {
        let res = match solve_cr(g, &limits) {
            Ok(r) => r,
            Err(e) => {
                writeln!(err, "error: {e}")?;
                return Ok(EXIT_INPUT);
            }
        };
        timed_out = res.timed_out;
        for a in &res.answers {
            records.push((
                model_line(&a.model, &g.shows),
                Some(support_label(g, &a.support)),
            ));
        }
    }
    let mut seen: BTreeSet<(String, Option<String>)> = BTreeSet::new();
    let mut k = 0usize;
    for rec in records {
        if opts.distinct && !seen.insert(rec.clone()) {
            continue;
        }
        k += 1;
        writeln!(out, "Answer: {k}")?;
        writeln!(out, "{}", rec.0)?;
        if let Some(sup) = rec.1 {
            writeln!(out, "Support: {sup}")?;
        }
    }
    if k > 0 {
        writeln!(out, "SATISFIABLE")?;
        Ok(EXIT_SAT)
    } else if timed_out {
        writeln!(out, "UNKNOWN")?;
        Ok(EXIT_BUDGET)
    } else {
        writeln!(out, "UNSATISFIABLE")?;
        Ok(EXIT_UNSAT)
    }
}

/// Compares the solver against the exhaustive oracle. Returns an exit code
/// when the comparison could not be made or failed, None on agreement.
fn oracle_disagreement(g: &GroundProgram, err: &mut dyn Write) -> io::Result<Option<i32>> {
    let full = SolveLimits::default();
    if g.cr_rules.is_empty() {
        let expected = match oracle_solve(g, ORACLE_BOUND) {
            Ok(v) => v,
            Err(e) => {
                writeln!(err, "error: {e}")?;
                return Ok(Some(EXIT_INPUT));
            }
        };
        let got = match solve(g, &full) {
            Ok(r) => r.models,
            Err(e) => {
                writeln!(err, "error: {e}")?;
                return Ok(Some(EXIT_INPUT));
            }
        };
        return Ok(compare_model_sets(&expected, &got, "", err)?);
    }
    let expected_supports = match oracle_supports(g, ORACLE_SUPPORT_BOUND) {
        Ok(v) => v,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(Some(EXIT_INPUT));
        }
    };
    let res = match solve_cr(g, &full) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(Some(EXIT_INPUT));
        }
    };
    let got: BTreeSet<Vec<usize>> = res.supports.iter().cloned().collect();
    let want: BTreeSet<Vec<usize>> = expected_supports.into_iter().collect();
    if got != want {
        writeln!(err, "oracle disagreement: supports differ")?;
        writeln!(err, "  solver: {got:?}")?;
        writeln!(err, "  oracle: {want:?}")?;
        return Ok(Some(EXIT_SOFTWARE));
    }
    for sup in &res.supports {
        let m = merged(g, sup);
        let expected = match oracle_solve(&m, ORACLE_BOUND) {
            Ok(v) => v,
            Err(e) => {
                writeln!(err, "error: {e}")?;
                return Ok(Some(EXIT_INPUT));
            }
        };
        let got: Vec<SeedSet> = res
            .answers
            .iter()
            .filter(|a| &a.support == sup)
            .map(|a| a.model.clone())
            .collect();
        let label = support_label(g, sup);
        if let Some(code) = compare_model_sets(&expected, &got, &label, err)? {
            return Ok(Some(code));
        }
    }
    Ok(None)
}

fn compare_model_sets(
    expected: &[SeedSet],
    got: &[SeedSet],
    context: &str,
    err: &mut dyn Write,
) -> io::Result<Option<i32>> {
    let want: BTreeSet<String> = expected.iter().map(|m| m.to_string()).collect();
    let have: BTreeSet<String> = got.iter().map(|m| m.to_string()).collect();
    if want == have {
        return Ok(None);
    }
    let ctx = if context.is_empty() { String::new() } else { format!(" under {context}") };
    writeln!(err, "oracle disagreement{ctx}: solver found {}, oracle {}", have.len(), want.len())?;
    for m in want.difference(&have) {
        writeln!(err, "  missing {m}")?;
    }
    for m in have.difference(&want) {
        writeln!(err, "  spurious {m}")?;
    }
    Ok(Some(EXIT_SOFTWARE))
}

/// Parses a model file: literals separated by whitespace, optionally with
/// the braces and commas the solver's debug rendering uses.
pub fn parse_model(text: &str) -> Result<SeedSet, String> {
    let mut src = String::new();
    for tok in text.split_whitespace() {
        let tok = tok.trim_matches(|c| c == '{' || c == '}' || c == ',');
        if tok.is_empty() {
            continue;
        }
        src.push_str(tok);
        src.push_str(".\n");
    }
    let prog = parse(&src).map_err(|e| e.to_string())?;
    let g = ground(&prog).map_err(|e| e.to_string())?;
    SeedSet::from_literals(g.rules.iter().map(|r| &r.head)).map_err(|e| e.to_string())
}

fn run_check(
    g: &GroundProgram,
    opts: &Options,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let path = match &opts.model_file {
        Some(p) => p,
        None => {
            writeln!(err, "error: check mode needs a model file")?;
            return Ok(EXIT_INPUT);
        }
    };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            writeln!(err, "error: {}: {e}", path.display())?;
            return Ok(EXIT_INPUT);
        }
    };
    let s = match parse_model(&text) {
        Ok(s) => s,
        Err(e) => {
            writeln!(err, "error: model file: {e}")?;
            return Ok(EXIT_INPUT);
        }
    };
    let verdict = match check_model(g, &s) {
        Ok(v) => v,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_INPUT);
        }
    };
    match verdict {
        Verdict::AnswerSet => {
            writeln!(out, "answer-set")?;
            Ok(EXIT_SAT)
        }
        Verdict::NotClosed { rule } => {
            writeln!(out, "not-closed: {rule}")?;
            Ok(EXIT_UNSAT)
        }
        Verdict::NotMinimal { witness } => {
            writeln!(out, "not-minimal: proper closed subset {witness}")?;
            Ok(EXIT_UNSAT)
        }
        Verdict::NotReproduced { detail } => {
            writeln!(out, "not-reproduced: {detail}")?;
            Ok(EXIT_UNSAT)
        }
    }
}

/// Runs every `.aspf` program in `dir` and compares its answers against the
/// matching `.expected` file (one projected model per line, `|` separating
/// the support label for programs with cr-rules; an empty file means the
/// program must have no answers). Order of lines is irrelevant.
pub fn run_corpus(dir: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match corpus_inner(dir, out, err) {
        Ok(code) => code,
        Err(_) => EXIT_SOFTWARE,
    }
}

/// The answer lines solve mode would print for `g`, in the corpus format.
pub fn answer_lines(g: &GroundProgram) -> Result<Vec<String>, String> {
    let limits = SolveLimits::default();
    if g.cr_rules.is_empty() {
        let res = solve(g, &limits).map_err(|e| e.to_string())?;
        Ok(res.models.iter().map(|m| model_line(m, &g.shows)).collect())
    } else {
        let res = solve_cr(g, &limits).map_err(|e| e.to_string())?;
        Ok(res
            .answers
            .iter()
            .map(|a| {
                format!("{} | {}", model_line(&a.model, &g.shows), support_label(g, &a.support))
            })
            .collect())
    }
}

fn corpus_inner(dir: &Path, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let mut programs: Vec<PathBuf> = Vec::new();
    let entries = match fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) => {
            writeln!(err, "error: {}: {e}", dir.display())?;
            return Ok(EXIT_INPUT);
        }
    };
    for entry in entries {
        let path = entry?.path();
        if path.extension().is_some_and(|x| x == "aspf") {
            programs.push(path);
        }
    }
    programs.sort();
    if programs.is_empty() {
        writeln!(err, "error: {}: no .aspf programs found", dir.display())?;
        return Ok(EXIT_INPUT);
    }
    let mut hard_error = false;
    let mut failures = 0usize;
    for path in &programs {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let expected_path = path.with_extension("expected");
        let outcome = corpus_case(path, &expected_path);
        match outcome {
            Err(msg) => {
                hard_error = true;
                writeln!(out, "ERROR {name}")?;
                writeln!(err, "{name}: {msg}")?;
            }
            Ok(Some(diff)) => {
                failures += 1;
                writeln!(out, "FAIL {name}")?;
                write!(err, "{diff}")?;
            }
            Ok(None) => {
                writeln!(out, "PASS {name}")?;
            }
        }
    }
    if hard_error {
        Ok(EXIT_INPUT)
    } else if failures > 0 {
        Ok(EXIT_SOFTWARE)
    } else {
        Ok(EXIT_OK)
    }
}

/// Runs one corpus case. `Err` is a processing problem, `Ok(Some(diff))` a
/// mismatch, `Ok(None)` a pass.
fn corpus_case(program: &Path, expected: &Path) -> Result<Option<String>, String> {
    let src = fs::read_to_string(program).map_err(|e| format!("{}: {e}", program.display()))?;
    let prog = parse(&src).map_err(|e| e.to_string())?;
    let g = ground(&prog).map_err(|e| e.to_string())?;
    let mut actual = answer_lines(&g)?;
    let expected_text =
        fs::read_to_string(expected).map_err(|e| format!("{}: {e}", expected.display()))?;
    let mut want: Vec<String> =
        expected_text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect();
    actual.sort();
    want.sort();
    if actual == want {
        return Ok(None);
    }
    let mut diff = String::new();
    let wset: BTreeSet<&String> = want.iter().collect();
    let aset: BTreeSet<&String> = actual.iter().collect();
    for l in wset.difference(&aset) {
        diff.push_str(&format!("  missing  {l}\n"));
    }
    for l in aset.difference(&wset) {
        diff.push_str(&format!("  spurious {l}\n"));
    }
    if diff.is_empty() {
        diff = format!("  expected {} answers, got {}\n", want.len(), actual.len());
    }
    Ok(Some(diff))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_file(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
        let path = dir.path().join(name);
        let mut f = fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    fn run_capture(opts: &Options) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(opts, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn solve_opts(files: Vec<PathBuf>) -> Options {
        Options { files, ..Options::default() }
    }

    #[test]
    fn solve_prints_answers_and_footer() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "p :- not q.\n");
        let (code, out, _) = run_capture(&solve_opts(vec![f]));
        assert_eq!(code, EXIT_SAT);
        assert_eq!(out, "Answer: 1\np\nSATISFIABLE\n");
    }

    #[test]
    fn unsatisfiable_program_exits_20() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "p.\n:- p.\n");
        let (code, out, _) = run_capture(&solve_opts(vec![f]));
        assert_eq!(code, EXIT_UNSAT);
        assert_eq!(out, "UNSATISFIABLE\n");
    }

    #[test]
    fn hidden_atoms_are_not_printed() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "1 { p(1) ; p(2) } 1.\n");
        let (code, out, _) = run_capture(&solve_opts(vec![f]));
        assert_eq!(code, EXIT_SAT);
        assert_eq!(out, "Answer: 1\np(2)\nAnswer: 2\np(1)\nSATISFIABLE\n");
    }

    #[test]
    fn show_filters_the_projection() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "f=1. q. #show f/0.\n");
        let (_, out, _) = run_capture(&solve_opts(vec![f]));
        assert_eq!(out, "Answer: 1\nf=1\nSATISFIABLE\n");
    }

    #[test]
    fn distinct_collapses_equal_projections() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "1 { p(1) ; p(2) } 1. q. #show q/0.\n");
        let mut opts = solve_opts(vec![f]);
        opts.distinct = true;
        let (code, out, _) = run_capture(&opts);
        assert_eq!(code, EXIT_SAT);
        assert_eq!(out, "Answer: 1\nq\nSATISFIABLE\n");
    }

    #[test]
    fn max_models_truncates_output() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "0 { p(1) ; p(2) } 2.\n");
        let mut opts = solve_opts(vec![f]);
        opts.max_models = 2;
        let (code, out, _) = run_capture(&opts);
        assert_eq!(code, EXIT_SAT);
        assert_eq!(out.matches("Answer:").count(), 2);
    }

    #[test]
    fn zero_time_budget_reports_unknown() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "p :- not q.\n");
        let mut opts = solve_opts(vec![f]);
        opts.time_budget = Some(0.0);
        let (code, out, _) = run_capture(&opts);
        assert_eq!(code, EXIT_BUDGET);
        assert_eq!(out, "UNKNOWN\n");
    }

    #[test]
    fn support_lines_appear_for_cr_programs() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "a :+.\n:- not a.\n");
        let (code, out, _) = run_capture(&solve_opts(vec![f]));
        assert_eq!(code, EXIT_SAT);
        assert_eq!(out, "Answer: 1\na\nSupport: {cr@1}\nSATISFIABLE\n");
    }

    #[test]
    fn parse_errors_name_the_file_and_local_line() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_file(&dir, "a.aspf", "p.\nq.\n");
        let b = write_file(&dir, "b.aspf", "r.\ns :- .\n");
        let (code, _, err) = run_capture(&solve_opts(vec![a, b]));
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("b.aspf:2:"), "{err}");
    }

    #[test]
    fn ground_errors_name_the_file_and_local_line() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_file(&dir, "a.aspf", "p(1).\n");
        let b = write_file(&dir, "b.aspf", "q(X) :- not p(X).\n");
        let (code, _, err) = run_capture(&solve_opts(vec![a, b]));
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("b.aspf:1: unsafe rule"), "{err}");
    }

    #[test]
    fn missing_file_is_an_input_error() {
        let (code, _, err) = run_capture(&solve_opts(vec![PathBuf::from("/nonexistent.aspf")]));
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("nonexistent"), "{err}");
    }

    #[test]
    fn ground_mode_prints_the_ground_program() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "dom(1). dom(2).\np(X) :- dom(X).\n");
        let mut opts = solve_opts(vec![f]);
        opts.mode = Mode::Ground;
        let (code, out, _) = run_capture(&opts);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "dom(1).\ndom(2).\np(1) :- dom(1).\np(2) :- dom(2).\n");
    }

    #[test]
    fn stats_mode_prints_csv_and_totals() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "dom(1). dom(2).\np(X) :- dom(X).\n");
        let mut opts = solve_opts(vec![f]);
        opts.mode = Mode::Stats;
        let (code, out, err) = run_capture(&opts);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("line,hash,instances\n"), "{out}");
        assert_eq!(out.lines().count(), 4);
        assert!(err.contains("total=4"), "{err}");
        assert!(err.contains("seed_universe="), "{err}");
    }

    #[test]
    fn check_mode_accepts_an_answer_set() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "p.\nf=1.\n");
        let m = write_file(&dir, "p.model", "p f=1\n");
        let mut opts = solve_opts(vec![f]);
        opts.mode = Mode::Check;
        opts.model_file = Some(m);
        let (code, out, _) = run_capture(&opts);
        assert_eq!(code, EXIT_SAT);
        assert_eq!(out, "answer-set\n");
    }

    #[test]
    fn check_mode_classifies_unsupported_models() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "s :- not t.\nt :- not s.\nq :- s.\nq :- q.\n");
        let m = write_file(&dir, "p.model", "t q\n");
        let mut opts = solve_opts(vec![f]);
        opts.mode = Mode::Check;
        opts.model_file = Some(m);
        let (code, out, _) = run_capture(&opts);
        assert_eq!(code, EXIT_UNSAT);
        assert!(out.starts_with("not-minimal:"), "{out}");
    }

    #[test]
    fn check_mode_rejects_inconsistent_model_files() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "f=1.\n");
        let m = write_file(&dir, "p.model", "f=1 f=2\n");
        let mut opts = solve_opts(vec![f]);
        opts.mode = Mode::Check;
        opts.model_file = Some(m);
        let (code, _, err) = run_capture(&opts);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("model file"), "{err}");
    }

    #[test]
    fn oracle_agreement_passes_through() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "p :- not q.\nq :- not p.\n");
        let mut opts = solve_opts(vec![f]);
        opts.oracle = true;
        let (code, out, _) = run_capture(&opts);
        assert_eq!(code, EXIT_SAT);
        assert_eq!(out.matches("Answer:").count(), 2);
    }

    #[test]
    fn oracle_checks_cr_programs_per_support() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_file(&dir, "p.aspf", "a :+.\n:- not a.\n");
        let mut opts = solve_opts(vec![f]);
        opts.oracle = true;
        let (code, out, _) = run_capture(&opts);
        assert_eq!(code, EXIT_SAT);
        assert!(out.contains("Support: {cr@1}"), "{out}");
    }

    #[test]
    fn corpus_runner_reports_pass_and_fail() {
        let dir = tempfile::tempdir().unwrap();
        write_file(&dir, "good.aspf", "p :- not q.\n");
        write_file(&dir, "good.expected", "p\n");
        write_file(&dir, "bad.aspf", "p :- not q.\n");
        write_file(&dir, "bad.expected", "q\n");
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_corpus(dir.path(), &mut out, &mut err);
        let out = String::from_utf8(out).unwrap();
        let err = String::from_utf8(err).unwrap();
        assert_eq!(code, EXIT_SOFTWARE);
        assert!(out.contains("FAIL bad"), "{out}");
        assert!(out.contains("PASS good"), "{out}");
        assert!(err.contains("missing  q"), "{err}");
        assert!(err.contains("spurious p"), "{err}");
    }

    #[test]
    fn corpus_empty_expected_means_unsatisfiable() {
        let dir = tempfile::tempdir().unwrap();
        write_file(&dir, "unsat.aspf", "p.\n:- p.\n");
        write_file(&dir, "unsat.expected", "\n");
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_corpus(dir.path(), &mut out, &mut err);
        assert_eq!(code, EXIT_OK);
        assert!(String::from_utf8(out).unwrap().contains("PASS unsat"));
    }

    #[test]
    fn corpus_missing_expected_is_an_input_error() {
        let dir = tempfile::tempdir().unwrap();
        write_file(&dir, "orphan.aspf", "p.\n");
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_corpus(dir.path(), &mut out, &mut err);
        assert_eq!(code, EXIT_INPUT);
        assert!(String::from_utf8(out).unwrap().contains("ERROR orphan"));
    }
}
