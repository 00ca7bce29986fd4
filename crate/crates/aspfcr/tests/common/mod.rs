//! Helpers shared by the integration test targets. Not every target uses
//! every helper.
#![allow(dead_code)]

use aspfcr::grounder::{GLiteral, GroundProgram};
use aspfcr::semantics::SeedSet;
use aspfcr::{ground, parse};
use rand::Rng;

/// Parses and grounds a source text, panicking on any diagnostic.
pub fn grounded(src: &str) -> GroundProgram {
    let program = parse(src).unwrap_or_else(|e| panic!("parse failed: {e}\n{src}"));
    ground(&program).unwrap_or_else(|e| panic!("ground failed: {e}\n{src}"))
}

/// Builds the ground literal written in `text` (without the trailing dot).
pub fn lit(text: &str) -> GLiteral {
    grounded(&format!("{text}.\n")).rules[0].head.clone()
}

/// Builds a seed set from literal texts.
pub fn seed_set(lits: &[&str]) -> SeedSet {
    let parsed: Vec<GLiteral> = lits.iter().map(|t| lit(t)).collect();
    SeedSet::from_literals(parsed.iter()).unwrap()
}

const ATOMS: [&str; 3] = ["p0", "p1", "p2"];
const TERMS: [&str; 2] = ["f", "g"];
const CMP_OPS: [&str; 6] = ["=", "!=", "<", "<=", ">", ">="];

fn random_value(rng: &mut impl Rng) -> i64 {
    rng.random_range(0..=2)
}

/// A random ground seed literal: an atom, a strongly negated atom, or a
/// value assignment to a term.
pub fn random_seed_literal(rng: &mut impl Rng) -> String {
    if rng.random_bool(0.5) {
        let a = ATOMS[rng.random_range(0..ATOMS.len())];
        if rng.random_bool(0.25) {
            format!("-{a}")
        } else {
            a.to_string()
        }
    } else {
        let t = TERMS[rng.random_range(0..TERMS.len())];
        format!("{t} = {}", random_value(rng))
    }
}

/// A random ground body literal: a seed literal or a dependent t-atom over
/// the term pool, including arithmetic on both sides.
pub fn random_body_literal(rng: &mut impl Rng) -> String {
    let f = TERMS[rng.random_range(0..TERMS.len())];
    let g = TERMS[rng.random_range(0..TERMS.len())];
    let op = CMP_OPS[rng.random_range(0..CMP_OPS.len())];
    match rng.random_range(0..8) {
        0..=3 => random_seed_literal(rng),
        4 => format!("{f} {op} {g}"),
        5 => format!("{f} {op} {}", random_value(rng)),
        6 => format!("|{f} - {g}| = {}", random_value(rng)),
        _ => format!("{f} + {g} {op} {}", random_value(rng)),
    }
}

fn random_head(rng: &mut impl Rng, used: &mut Vec<String>, max_distinct: usize) -> String {
    let fresh = random_seed_literal(rng);
    if used.contains(&fresh) {
        return fresh;
    }
    if used.len() >= max_distinct {
        return used[rng.random_range(0..used.len())].clone();
    }
    used.push(fresh.clone());
    fresh
}

/// A random ground program with default negation, strong negation,
/// constraints, and mixed t-atoms: at most `max_rules` rules and at most
/// ten distinct head seed literals.
pub fn random_ground_source(rng: &mut impl Rng) -> String {
    let n_rules = rng.random_range(1..=12);
    let mut used: Vec<String> = Vec::new();
    let mut src = String::new();
    for _ in 0..n_rules {
        let constraint = rng.random_bool(0.15);
        let body_len =
            if constraint { rng.random_range(1..=3) } else { rng.random_range(0..=3) };
        let body: Vec<String> = (0..body_len)
            .map(|_| {
                let l = random_body_literal(rng);
                if rng.random_bool(0.4) {
                    format!("not {l}")
                } else {
                    l
                }
            })
            .collect();
        if constraint {
            src.push_str(&format!(":- {}.\n", body.join(", ")));
        } else {
            let head = random_head(rng, &mut used, 10);
            if body.is_empty() {
                src.push_str(&format!("{head}.\n"));
            } else {
                src.push_str(&format!("{head} :- {}.\n", body.join(", ")));
            }
        }
    }
    src
}

/// A random positive ground program: no default negation, no constraints.
pub fn random_positive_source(rng: &mut impl Rng) -> String {
    let n_rules = rng.random_range(1..=8);
    let mut used: Vec<String> = Vec::new();
    let mut src = String::new();
    for _ in 0..n_rules {
        let head = random_head(rng, &mut used, 10);
        let body_len = rng.random_range(0..=3);
        let body: Vec<String> = (0..body_len).map(|_| random_body_literal(rng)).collect();
        if body.is_empty() {
            src.push_str(&format!("{head}.\n"));
        } else {
            src.push_str(&format!("{head} :- {}.\n", body.join(", ")));
        }
    }
    src
}

/// A random ground program with cr-rules on top of a regular part.
pub fn random_cr_source(rng: &mut impl Rng) -> String {
    let mut src = random_ground_source(rng);
    for _ in 0..rng.random_range(1..=3) {
        let head = random_seed_literal(rng);
        if rng.random_bool(0.5) {
            src.push_str(&format!("{head} :+.\n"));
        } else {
            src.push_str(&format!("{head} :+ {}.\n", random_body_literal(rng)));
        }
    }
    src
}
