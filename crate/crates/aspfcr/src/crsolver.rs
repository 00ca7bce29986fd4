//! Abduction over consistency-restoring rules.
//!
//! A cr-rule `h :+ body.` may be turned into the regular rule `h :- body.`
//! when that is the only way to make the program consistent. An *abductive
//! support* is a subset R of the ground cr-rules such that the regular part
//! plus the converted rules of R is consistent, and R is minimal under set
//! inclusion. Answer sets of the full program are the answer sets of the
//! regular part extended by any abductive support.
//!
//! Supports are enumerated breadth-first by cardinality, trying index
//! combinations in lexicographic order; supersets of recorded supports are
//! skipped, which both enforces minimality and keeps the recorded supports a
//! pairwise incomparable family.

use std::time::{Duration, Instant};

use crate::grounder::{GroundProgram, GroundRule};
use crate::semantics::{EvalError, SeedSet};
use crate::solver::{oracle_solve, solve, OracleError, SolveLimits};
use crate::syntax::RuleKind;

/// Converts a cr-rule into its regular counterpart.
pub fn alpha(r: &GroundRule) -> GroundRule {
    GroundRule { kind: RuleKind::Regular, ..r.clone() }
}

/// The regular part of `g` extended with the converted cr-rules selected by
/// `support` (indices into `g.cr_rules`).
pub fn merged(g: &GroundProgram, support: &[usize]) -> GroundProgram {
    let mut m = g.clone();
    m.cr_rules = Vec::new();
    for &i in support {
        m.rules.push(alpha(&g.cr_rules[i]));
    }
    m
}

/// One enumerated answer: the support that enabled it and the model itself.
#[derive(Debug, Clone)]
pub struct CrAnswer {
    pub support: Vec<usize>,
    pub model: SeedSet,
}

/// All answers of a program with cr-rules, grouped by abductive support.
#[derive(Debug, Clone)]
pub struct CrOutput {
    pub answers: Vec<CrAnswer>,
    pub supports: Vec<Vec<usize>>,
    pub timed_out: bool,
}

/// A human-readable support label: the selected ground cr-rules as
/// `cr@line[bindings]` tags, sorted, inside braces.
pub fn support_label(g: &GroundProgram, support: &[usize]) -> String {
    let mut tags: Vec<String> =
        support.iter().map(|&i| format!("cr{}", g.cr_rules[i].origin.tag())).collect();
    tags.sort();
    format!("{{{}}}", tags.join(", "))
}

fn remaining(deadline: Option<Instant>) -> Option<Duration> {
    deadline.map(|d| d.saturating_duration_since(Instant::now()))
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.contains(x))
}

/// Advances `combo` to the next k-combination of `0..n` in lexicographic
/// order; returns false when exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Enumerates the abductive supports of `g`, smallest first. The boolean is
/// true when the time budget expired before the enumeration finished.
pub fn abductive_supports(
    g: &GroundProgram,
    time_budget: Option<Duration>,
) -> Result<(Vec<Vec<usize>>, bool), EvalError> {
    let deadline = time_budget.map(|d| Instant::now() + d);
    supports_until(g, deadline)
}

fn supports_until(
    g: &GroundProgram,
    deadline: Option<Instant>,
) -> Result<(Vec<Vec<usize>>, bool), EvalError> {
    let n = g.cr_rules.len();
    let mut found: Vec<Vec<usize>> = Vec::new();
    for k in 0..=n {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            if let Some(d) = deadline {
                if Instant::now() >= d {
                    return Ok((found, true));
                }
            }
            if !found.iter().any(|s| is_subset(s, &combo)) {
                let candidate = merged(g, &combo);
                let out = solve(
                    &candidate,
                    &SolveLimits { max_models: 1, time_budget: remaining(deadline) },
                )?;
                if out.timed_out && out.models.is_empty() {
                    return Ok((found, true));
                }
                if !out.models.is_empty() {
                    found.push(combo.clone());
                }
            }
            if k == 0 || !next_combination(&mut combo, n) {
                break;
            }
        }
        // the empty support subsumes everything else
        if k == 0 && !found.is_empty() {
            break;
        }
    }
    Ok((found, false))
}

/// How many cr-rules `oracle_supports` is willing to enumerate subsets of.
pub const ORACLE_SUPPORT_BOUND: usize = 12;

/// Enumerates abductive supports the slow way: decide consistency of every
/// subset of the cr-rules with the exhaustive model oracle, then keep the
/// inclusion-minimal consistent subsets. Exists as an independent reference
/// for `abductive_supports`.
pub fn oracle_supports(
    g: &GroundProgram,
    bound: usize,
) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = g.cr_rules.len();
    if n > bound {
        return Err(OracleError::TooLarge { size: n, bound });
    }
    let mut consistent: Vec<u64> = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if !oracle_solve(&merged(g, &support), crate::solver::ORACLE_BOUND)?.is_empty() {
            consistent.push(mask);
        }
    }
    let mut minimal: Vec<Vec<usize>> = consistent
        .iter()
        .filter(|&&m| !consistent.iter().any(|&o| o != m && o & m == o))
        .map(|&m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    minimal.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(minimal)
}

/// Solves a program with cr-rules: enumerates abductive supports, then the
/// answer sets each support admits. `max_models` bounds the total number of
/// answers across supports.
pub fn solve_cr(g: &GroundProgram, limits: &SolveLimits) -> Result<CrOutput, EvalError> {
    let deadline = limits.time_budget.map(|d| Instant::now() + d);
    let (supports, mut timed_out) = supports_until(g, deadline)?;
    let mut answers: Vec<CrAnswer> = Vec::new();
    for sup in &supports {
        if timed_out {
            break;
        }
        let max = if limits.max_models > 0 {
            let left = limits.max_models.saturating_sub(answers.len());
            if left == 0 {
                break;
            }
            left
        } else {
            0
        };
        let out = solve(
            &merged(g, sup),
            &SolveLimits { max_models: max, time_budget: remaining(deadline) },
        )?;
        timed_out |= out.timed_out;
        answers.extend(
            out.models.into_iter().map(|m| CrAnswer { support: sup.clone(), model: m }),
        );
    }
    Ok(CrOutput { answers, supports, timed_out })
}
