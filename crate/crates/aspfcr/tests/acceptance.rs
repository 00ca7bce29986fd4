//! The acceptance suite: ten end-to-end criteria, one test each, printing
//! one `ACCEPTANCE nn PASS|FAIL` line per criterion (visible under
//! `--nocapture`). Expected values come from oracles computed inside this
//! file (permutation enumeration, exhaustive substitution counting, subset
//! search, hand simulation), never from the solver under test.

mod common;

use std::collections::BTreeSet;
use std::panic::AssertUnwindSafe;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use aspfcr::cli::{self, Mode, Options};
use aspfcr::crsolver::merged;
use aspfcr::grounder::{stats, GLiteral};
use aspfcr::semantics::{
    body_satisfied, positive_answer_set, reduct, satisfies, PositiveResult, SeedSet,
};
use aspfcr::solver::ORACLE_BOUND;
use aspfcr::{
    abductive_supports, check_model, oracle_solve, solve, solve_cr, SolveLimits, Verdict,
};
use common::{grounded, lit, random_ground_source, random_positive_source, seed_set};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !($cond) {
            return Err(format!($($arg)+));
        }
    };
}

fn criterion(
    n: usize,
    name: &str,
    budget: Option<Duration>,
    body: impl FnOnce() -> Result<(), String>,
) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let failure = match outcome {
        Ok(Ok(())) => match budget {
            Some(b) if elapsed > b => Some(format!("took {elapsed:?}, budget {b:?}")),
            _ => None,
        },
        Ok(Err(msg)) => Some(msg),
        Err(payload) => Some(panic_text(payload)),
    };
    let status = if failure.is_none() { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {n:02} {status} {name} ({elapsed:.2?})");
    if let Some(why) = failure {
        panic!("acceptance criterion {n:02} ({name}): {why}");
    }
}

fn panic_text(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic without message".to_string())
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn corpus_source(name: &str) -> String {
    let path = corpus_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn model_texts(g: &aspfcr::grounder::GroundProgram) -> Result<Vec<String>, String> {
    let out = solve(g, &SolveLimits::default()).map_err(|e| e.to_string())?;
    ensure!(!out.timed_out, "solve timed out without a budget");
    Ok(out.models.iter().map(|m| m.to_string()).collect())
}

#[test]
fn criterion_01_guarded_defaults_model_reduct_and_rejection() {
    criterion(
        1,
        "guarded defaults: model, reduct, rejected extension",
        Some(Duration::from_secs(1)),
        || {
            let src = "p :- f=2, not g=1, not h=0.\nq :- p, not g != 2.\ng=3.\nf=2.\n";
            let g = grounded(src);
            let models = model_texts(&g)?;
            ensure!(models == ["{f=2 g=3 p}"], "models were {models:?}");

            let s3 = seed_set(&["g=3", "f=2", "p", "q"]);
            let mut r: Vec<String> = reduct(&g.rules, &s3)
                .map_err(|e| e.to_string())?
                .iter()
                .map(|rule| rule.to_string())
                .collect();
            r.sort();
            ensure!(r == ["f=2.", "g=3.", "p :- f=2."], "reduct was {r:?}");

            let s4 = seed_set(&["g=3", "f=2", "p", "q", "h=1"]);
            let verdict = check_model(&g, &s4).map_err(|e| e.to_string())?;
            ensure!(
                matches!(verdict, Verdict::NotReproduced { .. }),
                "verdict was {verdict:?}"
            );
            Ok(())
        },
    );
}

#[test]
fn criterion_02_toy_programs_least_model_and_conflict() {
    criterion(
        2,
        "toy programs: least model and unsatisfiable value conflict",
        Some(Duration::from_secs(1)),
        || {
            let one = grounded("p :- f=2.\nf=2.\nq :- q.\n");
            let models = model_texts(&one)?;
            ensure!(models == ["{f=2 p}"], "models were {models:?}");

            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let path = dir.path().join("conflict.aspf");
            std::fs::write(&path, "f=3.\nf=2 :- q.\nq.\n").map_err(|e| e.to_string())?;
            let opts = Options { mode: Mode::Solve, files: vec![path], ..Options::default() };
            let mut out: Vec<u8> = Vec::new();
            let mut err: Vec<u8> = Vec::new();
            let code = cli::run(&opts, &mut out, &mut err);
            let text = String::from_utf8_lossy(&out);
            ensure!(code == cli::EXIT_UNSAT, "exit code was {code}, output:\n{text}");
            ensure!(text.ends_with("UNSATISFIABLE\n"), "output was:\n{text}");
            Ok(())
        },
    );
}

#[test]
fn criterion_03_solver_equals_exhaustive_oracle_on_random_programs() {
    criterion(
        3,
        "solver agrees with the subset-enumeration oracle on 500 random programs",
        Some(Duration::from_secs(300)),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0003);
            for case in 0..500 {
                let src = random_ground_source(&mut rng);
                let g = grounded(&src);
                let fast: BTreeSet<String> = model_texts(&g)?.into_iter().collect();
                let slow: BTreeSet<String> = oracle_solve(&g, ORACLE_BOUND)
                    .map_err(|e| e.to_string())?
                    .iter()
                    .map(|m| m.to_string())
                    .collect();
                ensure!(
                    fast == slow,
                    "case {case} diverged\nprogram:\n{src}solver: {fast:?}\noracle: {slow:?}"
                );
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_04_positive_programs_unique_minimal_closed_set() {
    criterion(
        4,
        "positive programs: unique minimal closed set, order-invariant fixpoint",
        Some(Duration::from_secs(120)),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0004);
            let mut kept = 0usize;
            let mut attempts = 0usize;
            while kept < 200 {
                attempts += 1;
                ensure!(attempts <= 4000, "too many inconsistent samples in a row");
                let src = random_positive_source(&mut rng);
                let g = grounded(&src);
                let fix = match positive_answer_set(&g.rules).map_err(|e| e.to_string())? {
                    PositiveResult::Consistent(s) => s,
                    PositiveResult::Inconsistent(_) => continue,
                };

                let universe: Vec<GLiteral> = g.head_universe().into_iter().collect();
                ensure!(universe.len() <= 16, "universe too large: {}", universe.len());
                let mut closed: Vec<SeedSet> = Vec::new();
                'mask: for mask in 0u32..(1u32 << universe.len()) {
                    let mut s = SeedSet::empty();
                    for (i, l) in universe.iter().enumerate() {
                        if mask & (1 << i) != 0 && s.try_insert_mut(l).is_err() {
                            continue 'mask;
                        }
                    }
                    for rule in &g.rules {
                        let fires = body_satisfied(&s, &rule.pos, &[])
                            .map_err(|e| e.to_string())?;
                        if fires && !satisfies(&s, &rule.head).map_err(|e| e.to_string())? {
                            continue 'mask;
                        }
                    }
                    closed.push(s);
                }
                let minimal: Vec<&SeedSet> = closed
                    .iter()
                    .filter(|s| !closed.iter().any(|o| o != *s && o.is_subset(s)))
                    .collect();
                ensure!(
                    minimal.len() == 1,
                    "expected one minimal closed set, found {} in:\n{src}",
                    minimal.len()
                );
                ensure!(
                    minimal[0] == &fix,
                    "fixpoint {fix} differs from minimal closed set {} in:\n{src}",
                    minimal[0]
                );

                for _ in 0..10 {
                    let mut rules = g.rules.clone();
                    rules.shuffle(&mut rng);
                    match positive_answer_set(&rules).map_err(|e| e.to_string())? {
                        PositiveResult::Consistent(s) => {
                            ensure!(s == fix, "rule shuffle changed the fixpoint in:\n{src}");
                        }
                        PositiveResult::Inconsistent(d) => {
                            return Err(format!("shuffle made the program inconsistent: {d}"));
                        }
                    }
                }
                kept += 1;
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_05_dependents_enumeration_and_supports() {
    criterion(
        5,
        "dependents: default enumeration, complete record, missing record",
        Some(Duration::from_secs(5)),
        || {
            let enumerate = grounded(&corpus_source("dependents_enumerate.aspf"));
            let fast = model_texts(&enumerate)?;
            let slow = oracle_solve(&enumerate, ORACLE_BOUND).map_err(|e| e.to_string())?;
            ensure!(slow.len() == 4, "oracle found {} models", slow.len());
            ensure!(fast.len() == 4, "solver found {} models", fast.len());

            let complete = grounded(&corpus_source("dependents_complete.aspf"));
            let out = solve_cr(&complete, &SolveLimits::default()).map_err(|e| e.to_string())?;
            ensure!(!out.timed_out, "solve_cr timed out");
            ensure!(out.answers.len() == 1, "expected 1 answer, got {}", out.answers.len());
            ensure!(
                out.answers[0].support.is_empty(),
                "support was not empty: {:?}",
                out.answers[0].support
            );
            ensure!(
                out.answers[0].model.contains(&lit("dependents(p1) = 3")),
                "model misses dependents(p1)=3: {}",
                out.answers[0].model
            );

            let missing = grounded(&corpus_source("dependents_missing_info.aspf"));
            let out = solve_cr(&missing, &SolveLimits::default()).map_err(|e| e.to_string())?;
            ensure!(!out.timed_out, "solve_cr timed out");
            ensure!(out.answers.len() == 4, "expected 4 answers, got {}", out.answers.len());
            for a in &out.answers {
                ensure!(
                    a.support.len() == 1,
                    "support {:?} is not a singleton for {}",
                    a.support,
                    a.model
                );
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_06_supports_are_minimal_antichains() {
    criterion(
        6,
        "abductive supports: pairwise incomparable, proper subsets inconsistent",
        Some(Duration::from_secs(30)),
        || {
            let mut programs: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
                .map_err(|e| e.to_string())?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "aspf"))
                .collect();
            programs.sort();
            let mut cr_programs = 0usize;
            for path in &programs {
                let src = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
                let g = grounded(&src);
                if g.cr_rules.is_empty() {
                    continue;
                }
                cr_programs += 1;
                let name = path.file_name().unwrap().to_string_lossy();
                let (supports, timed_out) =
                    abductive_supports(&g, None).map_err(|e| e.to_string())?;
                ensure!(!timed_out, "{name}: support enumeration timed out");

                let as_sets: Vec<BTreeSet<usize>> =
                    supports.iter().map(|s| s.iter().copied().collect()).collect();
                for (i, a) in as_sets.iter().enumerate() {
                    for (j, b) in as_sets.iter().enumerate() {
                        if i != j {
                            ensure!(
                                !a.is_subset(b),
                                "{name}: support {a:?} is contained in {b:?}"
                            );
                        }
                    }
                }

                for support in &supports {
                    for mask in 0u32..(1u32 << support.len()) {
                        if mask.count_ones() as usize == support.len() {
                            continue;
                        }
                        let subset: Vec<usize> = support
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask & (1 << i) != 0)
                            .map(|(_, &r)| r)
                            .collect();
                        let restricted = merged(&g, &subset);
                        let out = solve(
                            &restricted,
                            &SolveLimits { max_models: 1, time_budget: None },
                        )
                        .map_err(|e| e.to_string())?;
                        ensure!(
                            out.models.is_empty(),
                            "{name}: proper subset {subset:?} of {support:?} is consistent"
                        );
                    }
                }
            }
            ensure!(cr_programs >= 3, "only {cr_programs} cr programs in the corpus");
            Ok(())
        },
    );
}

/// All safe placements for an n-by-n board: column per row, rows distinct
/// by construction, columns by permutation, diagonals checked pairwise.
fn safe_placements(n: usize) -> Vec<Vec<usize>> {
    fn go(cols: &mut Vec<usize>, remaining: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining.is_empty() {
            out.push(cols.clone());
            return;
        }
        for i in 0..remaining.len() {
            let c = remaining.remove(i);
            let row = cols.len() + 1;
            let ok = cols
                .iter()
                .enumerate()
                .all(|(r0, &c0)| c0.abs_diff(c) != row - (r0 + 1));
            if ok {
                cols.push(c);
                go(cols, remaining, out);
                cols.pop();
            }
            remaining.insert(i, c);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (1..=n).collect(), &mut out);
    out
}

fn placement_lines(n: usize, placements: &[Vec<usize>]) -> BTreeSet<String> {
    placements
        .iter()
        .map(|cols| {
            let mut lits: Vec<String> = Vec::new();
            for q in 1..=n {
                lits.push(format!("queen({q})"));
                lits.push(format!("row({q})={q}"));
                lits.push(format!("col({q})={}", cols[q - 1]));
            }
            for v in 1..=n {
                lits.push(format!("vdom({v})"));
            }
            lits.sort();
            lits.join(" ")
        })
        .collect()
}

#[test]
fn criterion_07_queens_models_match_placement_enumerator() {
    criterion(7, "queens: models equal the enumerated safe placements", None, || {
        for (file, n, classic) in [("queens_n4.aspf", 4usize, 2usize), ("queens_n5.aspf", 5, 10)]
        {
            let placements = safe_placements(n);
            ensure!(
                placements.len() == classic,
                "enumerator found {} placements for n={n}",
                placements.len()
            );
            let g = grounded(&corpus_source(file));
            let started = Instant::now();
            let out = solve(&g, &SolveLimits::default()).map_err(|e| e.to_string())?;
            ensure!(!out.timed_out, "{file}: solve timed out");
            ensure!(
                started.elapsed() < Duration::from_secs(60),
                "{file}: took {:?}",
                started.elapsed()
            );
            let actual: BTreeSet<String> =
                out.models.iter().map(|m| cli::model_line(m, &g.shows)).collect();
            let expected = placement_lines(n, &placements);
            ensure!(out.models.len() == classic, "{file}: {} models", out.models.len());
            ensure!(
                actual == expected,
                "{file}: models differ\nactual: {actual:?}\nexpected: {expected:?}"
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_08_grounding_growth_quadratic_vs_quartic() {
    criterion(
        8,
        "grounding growth: quadratic functional vs quartic relational diagonal",
        None,
        || {
            let mut fn_counts: Vec<usize> = Vec::new();
            let mut rel_counts: Vec<usize> = Vec::new();
            for n in [4usize, 6, 8, 12] {
                let g = grounded(&corpus_source(&format!("stats/queens_fn_n{n}.aspf")));
                let st = stats(&g);
                let mut pairs = 0usize;
                for i in 1..=n {
                    for j in 1..=n {
                        if i < j {
                            pairs += 1;
                        }
                    }
                }
                let diag = st
                    .per_rule
                    .iter()
                    .find(|r| r.line == 10)
                    .ok_or_else(|| format!("n={n}: no stats row for the diagonal line"))?;
                ensure!(
                    diag.instances == pairs,
                    "functional n={n}: {} instances, pair count {pairs}",
                    diag.instances
                );
                fn_counts.push(diag.instances);

                let g = grounded(&corpus_source(&format!("stats/queens_rel_n{n}.aspf")));
                let st = stats(&g);
                let mut subs = 0usize;
                for x1 in 1..=n {
                    for x2 in 1..=n {
                        for _y1 in 1..=n {
                            for _y2 in 1..=n {
                                if x1 < x2 {
                                    subs += 1;
                                }
                            }
                        }
                    }
                }
                let diag = st
                    .per_rule
                    .iter()
                    .find(|r| r.line == 8)
                    .ok_or_else(|| format!("n={n}: no stats row for the guarded line"))?;
                ensure!(
                    diag.instances == subs,
                    "relational n={n}: {} instances, substitution count {subs}",
                    diag.instances
                );
                rel_counts.push(diag.instances);
            }
            ensure!(fn_counts == [6, 15, 28, 66], "functional counts were {fn_counts:?}");
            ensure!(
                rel_counts == [96, 540, 1792, 9504],
                "relational counts were {rel_counts:?}"
            );
            Ok(())
        },
    );
}

#[test]
fn criterion_09_buckets_plan_and_inertia_forms() {
    criterion(
        9,
        "buckets: hand-simulated plan, equivalent inertia formulations",
        Some(Duration::from_secs(10)),
        || {
            let mut balanced: Vec<(char, i64, i64, i64)> = Vec::new();
            for bucket in ['a', 'b'] {
                for amount in 1..=2i64 {
                    let va = if bucket == 'a' { 4 + amount } else { 4 };
                    let vb = if bucket == 'b' { 6 + amount } else { 6 };
                    if va == vb {
                        balanced.push((bucket, amount, va, vb));
                    }
                }
            }
            ensure!(balanced == [('a', 2, 6, 6)], "hand simulation found {balanced:?}");

            let g = grounded(&corpus_source("buckets_plan.aspf"));
            let out = solve(&g, &SolveLimits::default()).map_err(|e| e.to_string())?;
            ensure!(!out.timed_out, "solve timed out");
            ensure!(!out.models.is_empty(), "no model for the plan instance");
            for m in &out.models {
                ensure!(m.contains(&lit("pour(a,0,2)")), "model misses pour(a,0,2): {m}");
                ensure!(m.contains(&lit("volume(a,1) = 6")), "model misses volume(a,1)=6: {m}");
                ensure!(m.contains(&lit("volume(b,1) = 6")), "model misses volume(b,1)=6: {m}");
            }

            let direct = grounded(&corpus_source("buckets_fluent_direct.aspf"));
            let generic = grounded(&corpus_source("buckets_fluent_generic.aspf"));
            let direct_out =
                solve(&direct, &SolveLimits::default()).map_err(|e| e.to_string())?;
            let generic_out =
                solve(&generic, &SolveLimits::default()).map_err(|e| e.to_string())?;
            let a: BTreeSet<String> =
                direct_out.models.iter().map(|m| cli::model_line(m, &direct.shows)).collect();
            let b: BTreeSet<String> =
                generic_out.models.iter().map(|m| cli::model_line(m, &generic.shows)).collect();
            ensure!(a == b, "inertia forms disagree\ndirect: {a:?}\ngeneric: {b:?}");
            ensure!(!a.is_empty(), "inertia instances have no models");
            Ok(())
        },
    );
}

#[test]
fn criterion_10_corpus_output_is_deterministic() {
    criterion(10, "repeated corpus runs produce byte-identical output", None, || {
        let dir = corpus_dir();
        let run_corpus_once = || {
            let mut out: Vec<u8> = Vec::new();
            let mut err: Vec<u8> = Vec::new();
            let code = cli::run_corpus(&dir, &mut out, &mut err);
            (out, err, code)
        };
        let first = run_corpus_once();
        let second = run_corpus_once();
        ensure!(first == second, "corpus runner output differs between runs");
        ensure!(first.2 == cli::EXIT_OK, "corpus run failed with exit {}", first.2);

        let mut programs: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map_err(|e| e.to_string())?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "aspf"))
            .collect();
        programs.sort();
        for path in &programs {
            let solve_once = || {
                let opts = Options {
                    mode: Mode::Solve,
                    files: vec![path.clone()],
                    ..Options::default()
                };
                let mut out: Vec<u8> = Vec::new();
                let mut err: Vec<u8> = Vec::new();
                let code = cli::run(&opts, &mut out, &mut err);
                (out, err, code)
            };
            ensure!(
                solve_once() == solve_once(),
                "solve output differs between runs for {}",
                path.display()
            );
        }
        Ok(())
    });
}
