//! Answer-set enumeration for ground programs.
//!
//! The candidate space is built from rule heads: every atom occurring in a
//! head becomes an in/out decision, every simple term a value decision over
//! the head-occurring values plus "no value". Search is depth-first in a
//! fixed lexicographic order with three-valued propagation at every node:
//! heads of rules whose body is settled true are forced, entries whose every
//! potentially deriving rule is dead are forced out, and cardinality bounds
//! prune early. Every complete assignment is verified with the independent
//! answer-set test before it is emitted, so propagation can only affect
//! speed, never the result.
//!
//! `oracle_solve` is a deliberately naive second route: it enumerates every
//! subset of the head universe and keeps the ones that pass the answer-set
//! test. It exists to cross-check the search solver and is capped to small
//! universes.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::grounder::{GAtom, GLiteral, GSimple, GTerm, GroundProgram, GroundRule};
use crate::semantics::{
    body_satisfied, checks_hold, is_answer_set, positive_answer_set, reduct, satisfies,
    EvalError, PositiveResult, SeedSet,
};
use crate::syntax::{CmpOp, Constant};

/// Enumeration limits. `max_models` of zero means unbounded.
#[derive(Debug, Clone, Default)]
pub struct SolveLimits {
    pub max_models: usize,
    pub time_budget: Option<Duration>,
}

/// Enumerated models, in emission order, plus whether the time budget ran
/// out before the search space was exhausted.
#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub models: Vec<SeedSet>,
    pub timed_out: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AtomState {
    Unknown,
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TermState {
    Unknown,
    Val(usize),
    NoValue,
}

#[derive(Debug, Clone)]
struct AtomEntry {
    strong_neg: bool,
    atom: GAtom,
    complement: Option<usize>,
    rules: Vec<usize>,
}

#[derive(Debug, Clone)]
struct TermEntry {
    term: GSimple,
    values: Vec<Constant>,
    /// per value index, the rules whose head assigns it
    rules: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy)]
enum Dec {
    Atom(usize),
    Term(usize),
}

#[derive(Debug, Clone, Copy)]
enum HeadRef {
    Falsum,
    Atom(usize),
    TermVal(usize, usize),
}

struct Universe {
    atoms: Vec<AtomEntry>,
    terms: Vec<TermEntry>,
    atom_index: BTreeMap<(bool, String, Vec<Constant>), usize>,
    term_index: BTreeMap<(String, Vec<Constant>), usize>,
    heads: Vec<HeadRef>,
    decisions: Vec<Dec>,
}

fn build_universe(g: &GroundProgram, order_seed: Option<u64>) -> Universe {
    let mut atom_index = BTreeMap::new();
    let mut term_index = BTreeMap::new();
    let mut atoms: Vec<AtomEntry> = Vec::new();
    let mut terms: Vec<TermEntry> = Vec::new();

    for r in &g.rules {
        match &r.head {
            GLiteral::Reg { strong_neg, atom } => {
                if atom.is_falsum() {
                    continue;
                }
                let key = (*strong_neg, atom.name.clone(), atom.args.clone());
                atom_index.entry(key).or_insert_with(|| {
                    atoms.push(AtomEntry {
                        strong_neg: *strong_neg,
                        atom: atom.clone(),
                        complement: None,
                        rules: Vec::new(),
                    });
                    atoms.len() - 1
                });
            }
            GLiteral::Cmp { op: CmpOp::Eq, lhs: GTerm::Simple(t), rhs: GTerm::Const(v) } => {
                let key = (t.name.clone(), t.args.clone());
                let idx = *term_index.entry(key).or_insert_with(|| {
                    terms.push(TermEntry {
                        term: t.clone(),
                        values: Vec::new(),
                        rules: Vec::new(),
                    });
                    terms.len() - 1
                });
                if !terms[idx].values.contains(v) {
                    terms[idx].values.push(v.clone());
                }
            }
            GLiteral::Cmp { .. } => unreachable!("ground rule heads are seed literals"),
        }
    }
    for t in &mut terms {
        t.values.sort();
        t.rules = vec![Vec::new(); t.values.len()];
    }

    // wire complements and head references, then collect rule support
    for i in 0..atoms.len() {
        let comp_key =
            (!atoms[i].strong_neg, atoms[i].atom.name.clone(), atoms[i].atom.args.clone());
        atoms[i].complement = atom_index.get(&comp_key).copied();
    }
    let mut heads = Vec::with_capacity(g.rules.len());
    for (ri, r) in g.rules.iter().enumerate() {
        let h = match &r.head {
            GLiteral::Reg { strong_neg, atom } => {
                if atom.is_falsum() {
                    HeadRef::Falsum
                } else {
                    let idx =
                        atom_index[&(*strong_neg, atom.name.clone(), atom.args.clone())];
                    atoms[idx].rules.push(ri);
                    HeadRef::Atom(idx)
                }
            }
            GLiteral::Cmp { op: CmpOp::Eq, lhs: GTerm::Simple(t), rhs: GTerm::Const(v) } => {
                let idx = term_index[&(t.name.clone(), t.args.clone())];
                let vi = terms[idx].values.iter().position(|w| w == v).unwrap();
                terms[idx].rules[vi].push(ri);
                HeadRef::TermVal(idx, vi)
            }
            GLiteral::Cmp { .. } => unreachable!(),
        };
        heads.push(h);
    }

    let mut decisions: Vec<(String, Dec)> = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        let display =
            GLiteral::Reg { strong_neg: a.strong_neg, atom: a.atom.clone() }.to_string();
        decisions.push((display, Dec::Atom(i)));
    }
    for (i, t) in terms.iter().enumerate() {
        decisions.push((t.term.to_string(), Dec::Term(i)));
    }
    decisions.sort_by(|a, b| a.0.cmp(&b.0));
    let mut decisions: Vec<Dec> = decisions.into_iter().map(|(_, d)| d).collect();
    if let Some(seed) = order_seed {
        shuffle(&mut decisions, seed);
    }

    Universe { atoms, terms, atom_index, term_index, heads, decisions }
}

/// Fisher-Yates with a splitmix64 stream; used only to randomize the
/// decision order for determinism diagnostics.
fn shuffle<T>(items: &mut [T], seed: u64) {
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    for i in (1..items.len()).rev() {
        let j = (next() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

#[derive(Clone)]
struct Asg {
    atoms: Vec<AtomState>,
    terms: Vec<TermState>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    T,
    F,
    U,
}

/// Three-valued term evaluation against a partial assignment. Terms outside
/// the universe are permanently undefined.
enum V3 {
    Def(Constant),
    Undef,
    Open,
}

fn eval3(t: &GTerm, asg: &Asg, uni: &Universe) -> Result<V3, EvalError> {
    match t {
        GTerm::Const(c) => Ok(V3::Def(c.clone())),
        GTerm::Simple(s) => {
            match uni.term_index.get(&(s.name.clone(), s.args.clone())) {
                None => Ok(V3::Undef),
                Some(&i) => match asg.terms[i] {
                    TermState::Unknown => Ok(V3::Open),
                    TermState::NoValue => Ok(V3::Undef),
                    TermState::Val(vi) => Ok(V3::Def(uni.terms[i].values[vi].clone())),
                },
            }
        }
        GTerm::Neg(x) => match eval3(x, asg, uni)? {
            V3::Def(Constant::Int(n)) => {
                Ok(n.checked_neg().map(|m| V3::Def(Constant::Int(m))).unwrap_or(V3::Undef))
            }
            V3::Def(_) => Err(EvalError::IllSortedArith { term: t.to_string() }),
            other => Ok(other),
        },
        GTerm::Abs(x) => match eval3(x, asg, uni)? {
            V3::Def(Constant::Int(n)) => {
                Ok(n.checked_abs().map(|m| V3::Def(Constant::Int(m))).unwrap_or(V3::Undef))
            }
            V3::Def(_) => Err(EvalError::IllSortedArith { term: t.to_string() }),
            other => Ok(other),
        },
        GTerm::Bin { op, lhs, rhs } => {
            let a = eval3(lhs, asg, uni)?;
            let b = eval3(rhs, asg, uni)?;
            for side in [&a, &b] {
                if let V3::Def(c) = side {
                    if !c.is_numeric() {
                        return Err(EvalError::IllSortedArith { term: t.to_string() });
                    }
                }
            }
            match (a, b) {
                (V3::Undef, _) | (_, V3::Undef) => Ok(V3::Undef),
                (V3::Open, _) | (_, V3::Open) => Ok(V3::Open),
                (V3::Def(Constant::Int(x)), V3::Def(Constant::Int(y))) => {
                    let r = match op {
                        crate::syntax::ArithOp::Add => x.checked_add(y),
                        crate::syntax::ArithOp::Sub => x.checked_sub(y),
                        crate::syntax::ArithOp::Mul => x.checked_mul(y),
                        crate::syntax::ArithOp::Div => {
                            if y == 0 {
                                None
                            } else {
                                x.checked_div(y)
                            }
                        }
                    };
                    Ok(r.map(|n| V3::Def(Constant::Int(n))).unwrap_or(V3::Undef))
                }
                _ => unreachable!("non-integer defined operands are rejected above"),
            }
        }
    }
}

fn lit_status(lit: &GLiteral, asg: &Asg, uni: &Universe) -> Result<Tri, EvalError> {
    match lit {
        GLiteral::Reg { strong_neg, atom } => {
            match uni.atom_index.get(&(*strong_neg, atom.name.clone(), atom.args.clone())) {
                None => Ok(Tri::F),
                Some(&i) => Ok(match asg.atoms[i] {
                    AtomState::Unknown => Tri::U,
                    AtomState::In => Tri::T,
                    AtomState::Out => Tri::F,
                }),
            }
        }
        GLiteral::Cmp { op: CmpOp::Eq, lhs: GTerm::Simple(t), rhs: GTerm::Const(v) } => {
            match uni.term_index.get(&(t.name.clone(), t.args.clone())) {
                None => Ok(Tri::F),
                Some(&i) => {
                    let entry = &uni.terms[i];
                    match asg.terms[i] {
                        TermState::Unknown => {
                            if entry.values.contains(v) {
                                Ok(Tri::U)
                            } else {
                                Ok(Tri::F)
                            }
                        }
                        TermState::NoValue => Ok(Tri::F),
                        TermState::Val(vi) => {
                            Ok(if &entry.values[vi] == v { Tri::T } else { Tri::F })
                        }
                    }
                }
            }
        }
        GLiteral::Cmp { op, lhs, rhs } => {
            let a = eval3(lhs, asg, uni)?;
            let b = eval3(rhs, asg, uni)?;
            match (a, b) {
                (V3::Undef, _) | (_, V3::Undef) => Ok(Tri::F),
                (V3::Open, _) | (_, V3::Open) => Ok(Tri::U),
                (V3::Def(x), V3::Def(y)) => {
                    let holds = match op {
                        CmpOp::Eq => x == y,
                        CmpOp::Ne => x != y,
                        _ => match (&x, &y) {
                            (Constant::Int(m), Constant::Int(n)) => match op {
                                CmpOp::Lt => m < n,
                                CmpOp::Le => m <= n,
                                CmpOp::Gt => m > n,
                                CmpOp::Ge => m >= n,
                                _ => unreachable!(),
                            },
                            _ => {
                                return Err(EvalError::IllSortedCompare {
                                    lhs: x.to_string(),
                                    rhs: y.to_string(),
                                })
                            }
                        },
                    };
                    Ok(if holds { Tri::T } else { Tri::F })
                }
            }
        }
    }
}

/// Body status of a rule: settled true (fires in every completion), dead
/// (fires in none), or open.
fn body_status(r: &GroundRule, asg: &Asg, uni: &Universe) -> Result<Tri, EvalError> {
    let mut all_true = true;
    for l in &r.pos {
        match lit_status(l, asg, uni)? {
            Tri::F => return Ok(Tri::F),
            Tri::U => all_true = false,
            Tri::T => {}
        }
    }
    for l in &r.neg {
        match lit_status(l, asg, uni)? {
            Tri::T => return Ok(Tri::F),
            Tri::U => all_true = false,
            Tri::F => {}
        }
    }
    Ok(if all_true { Tri::T } else { Tri::U })
}

struct Searcher<'a> {
    g: &'a GroundProgram,
    uni: Universe,
    limits: SolveLimits,
    deadline: Option<Instant>,
    models: Vec<SeedSet>,
    timed_out: bool,
}

enum Stop {
    Limit,
    Timeout,
    Eval(EvalError),
}

impl<'a> Searcher<'a> {
    /// Forces an atom in, checking the complement. Returns false on conflict.
    fn set_atom_in(&self, asg: &mut Asg, i: usize) -> bool {
        match asg.atoms[i] {
            AtomState::Out => false,
            AtomState::In => true,
            AtomState::Unknown => {
                if let Some(c) = self.uni.atoms[i].complement {
                    if asg.atoms[c] == AtomState::In {
                        return false;
                    }
                }
                asg.atoms[i] = AtomState::In;
                true
            }
        }
    }

    /// One propagation pass; returns false on conflict.
    fn propagate(&self, asg: &mut Asg) -> Result<bool, EvalError> {
        loop {
            let mut changed = false;
            let mut body: Vec<Tri> = Vec::with_capacity(self.g.rules.len());
            for r in &self.g.rules {
                body.push(body_status(r, asg, &self.uni)?);
            }
            // force heads of rules that certainly fire
            for (ri, _) in self.g.rules.iter().enumerate() {
                if body[ri] != Tri::T {
                    continue;
                }
                match self.uni.heads[ri] {
                    HeadRef::Falsum => return Ok(false),
                    HeadRef::Atom(i) => match asg.atoms[i] {
                        AtomState::In => {}
                        AtomState::Out => return Ok(false),
                        AtomState::Unknown => {
                            if !self.set_atom_in(asg, i) {
                                return Ok(false);
                            }
                            changed = true;
                        }
                    },
                    HeadRef::TermVal(t, vi) => match asg.terms[t] {
                        TermState::Val(w) if w == vi => {}
                        TermState::Unknown => {
                            asg.terms[t] = TermState::Val(vi);
                            changed = true;
                        }
                        _ => return Ok(false),
                    },
                }
                if let HeadRef::Atom(i) = self.uni.heads[ri] {
                    if let Some(c) = self.uni.atoms[i].complement {
                        if asg.atoms[c] == AtomState::In && asg.atoms[i] == AtomState::In {
                            return Ok(false);
                        }
                    }
                }
            }
            // entries whose every potentially deriving rule is dead cannot
            // appear in any answer set extending this assignment
            for (i, a) in self.uni.atoms.iter().enumerate() {
                let alive = a.rules.iter().any(|&ri| body[ri] != Tri::F);
                if !alive {
                    match asg.atoms[i] {
                        AtomState::In => return Ok(false),
                        AtomState::Out => {}
                        AtomState::Unknown => {
                            asg.atoms[i] = AtomState::Out;
                            changed = true;
                        }
                    }
                }
            }
            for (t, entry) in self.uni.terms.iter().enumerate() {
                let value_alive: Vec<bool> = entry
                    .rules
                    .iter()
                    .map(|rs| rs.iter().any(|&ri| body[ri] != Tri::F))
                    .collect();
                match asg.terms[t] {
                    TermState::Val(vi) if !value_alive[vi] => return Ok(false),
                    TermState::Unknown if value_alive.iter().all(|v| !v) => {
                        asg.terms[t] = TermState::NoValue;
                        changed = true;
                    }
                    _ => {}
                }
            }
            // cardinality bounds over settled check bodies
            for c in &self.g.checks {
                let mut settled = true;
                let mut dead = false;
                for l in &c.pos {
                    match lit_status(l, asg, &self.uni)? {
                        Tri::F => dead = true,
                        Tri::U => settled = false,
                        Tri::T => {}
                    }
                }
                for l in &c.neg {
                    match lit_status(l, asg, &self.uni)? {
                        Tri::T => dead = true,
                        Tri::U => settled = false,
                        Tri::F => {}
                    }
                }
                if dead || !settled {
                    continue;
                }
                let mut ins = 0u64;
                let mut open = 0u64;
                for cand in &c.candidates {
                    match self
                        .uni
                        .atom_index
                        .get(&(false, cand.name.clone(), cand.args.clone()))
                    {
                        None => {}
                        Some(&i) => match asg.atoms[i] {
                            AtomState::In => ins += 1,
                            AtomState::Unknown => open += 1,
                            AtomState::Out => {}
                        },
                    }
                }
                if ins > c.upper || ins + open < c.lower {
                    return Ok(false);
                }
            }
            if !changed {
                return Ok(true);
            }
        }
    }

    fn leaf(&mut self, asg: &Asg) -> Result<(), Stop> {
        let mut s = SeedSet::empty();
        for (i, a) in self.uni.atoms.iter().enumerate() {
            if asg.atoms[i] == AtomState::In {
                let lit = GLiteral::Reg { strong_neg: a.strong_neg, atom: a.atom.clone() };
                if s.try_insert_mut(&lit).is_err() {
                    return Ok(());
                }
            }
        }
        for (t, entry) in self.uni.terms.iter().enumerate() {
            if let TermState::Val(vi) = asg.terms[t] {
                let lit =
                    GLiteral::seed_value(entry.term.clone(), entry.values[vi].clone());
                if s.try_insert_mut(&lit).is_err() {
                    return Ok(());
                }
            }
        }
        match is_answer_set(self.g, &s) {
            Err(e) => Err(Stop::Eval(e)),
            Ok(false) => Ok(()),
            Ok(true) => {
                self.models.push(s);
                if self.limits.max_models > 0 && self.models.len() >= self.limits.max_models
                {
                    Err(Stop::Limit)
                } else {
                    Ok(())
                }
            }
        }
    }

    fn search(&mut self, asg: &Asg, from: usize) -> Result<(), Stop> {
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                self.timed_out = true;
                return Err(Stop::Timeout);
            }
        }
        let mut current = asg.clone();
        match self.propagate(&mut current) {
            Err(e) => return Err(Stop::Eval(e)),
            Ok(false) => return Ok(()),
            Ok(true) => {}
        }
        let mut next = None;
        for (di, d) in self.uni.decisions.iter().enumerate().skip(from) {
            let open = match *d {
                Dec::Atom(i) => current.atoms[i] == AtomState::Unknown,
                Dec::Term(t) => current.terms[t] == TermState::Unknown,
            };
            if open {
                next = Some((di, *d));
                break;
            }
        }
        let Some((di, dec)) = next else {
            return self.leaf(&current);
        };
        match dec {
            Dec::Atom(i) => {
                let mut b = current.clone();
                if self.set_atom_in(&mut b, i) {
                    self.search(&b, di + 1)?;
                }
                let mut b = current;
                b.atoms[i] = AtomState::Out;
                self.search(&b, di + 1)
            }
            Dec::Term(t) => {
                for vi in 0..self.uni.terms[t].values.len() {
                    let mut b = current.clone();
                    b.terms[t] = TermState::Val(vi);
                    self.search(&b, di + 1)?;
                }
                let mut b = current;
                b.terms[t] = TermState::NoValue;
                self.search(&b, di + 1)
            }
        }
    }
}

/// Enumerates the answer sets of a ground program (cr-rules are ignored; the
/// cr search layers on top of this). Deterministic: models come out in
/// lexicographic decision order.
pub fn solve(g: &GroundProgram, limits: &SolveLimits) -> Result<SolveOutput, EvalError> {
    solve_ordered(g, limits, None)
}

/// Like `solve` but with a permuted decision order; the set of models must
/// not depend on the permutation.
pub fn solve_ordered(
    g: &GroundProgram,
    limits: &SolveLimits,
    order_seed: Option<u64>,
) -> Result<SolveOutput, EvalError> {
    let uni = build_universe(g, order_seed);
    let asg = Asg {
        atoms: vec![AtomState::Unknown; uni.atoms.len()],
        terms: vec![TermState::Unknown; uni.terms.len()],
    };
    let deadline = limits.time_budget.map(|d| Instant::now() + d);
    let mut searcher = Searcher {
        g,
        uni,
        limits: limits.clone(),
        deadline,
        models: Vec::new(),
        timed_out: false,
    };
    match searcher.search(&asg, 0) {
        Ok(()) | Err(Stop::Limit) | Err(Stop::Timeout) => {}
        Err(Stop::Eval(e)) => return Err(e),
    }
    Ok(SolveOutput { models: searcher.models, timed_out: searcher.timed_out })
}

/// Oracle failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle universe has {size} literals, above the bound of {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Default universe cap for the subset-enumeration oracle.
pub const ORACLE_BOUND: usize = 24;

/// Enumerates answer sets by trying every subset of the head universe.
/// Exponential; refuses universes above `bound`.
pub fn oracle_solve(g: &GroundProgram, bound: usize) -> Result<Vec<SeedSet>, OracleError> {
    let universe: Vec<GLiteral> = g
        .rules
        .iter()
        .map(|r| r.head.clone())
        .filter(|h| !h.is_falsum())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    if universe.len() > bound {
        return Err(OracleError::TooLarge { size: universe.len(), bound });
    }
    let mut models = Vec::new();
    for mask in 0u64..(1u64 << universe.len()) {
        let mut s = SeedSet::empty();
        let mut consistent = true;
        for (i, lit) in universe.iter().enumerate() {
            if mask & (1 << i) != 0 && s.try_insert_mut(lit).is_err() {
                consistent = false;
                break;
            }
        }
        if !consistent {
            continue;
        }
        if s.len() != mask.count_ones() as usize {
            continue; // two mask bits mapped to the same literal
        }
        if is_answer_set(g, &s)? {
            models.push(s);
        }
    }
    models.sort_by_key(|m| m.to_string());
    Ok(models)
}

/// Verdicts of the model checker.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    AnswerSet,
    /// A reduct rule fires but its head is not in the model.
    NotClosed { rule: GroundRule },
    /// The model is closed but strictly contains the reduct's answer set;
    /// every excess literal is still supported (a self-supporting loop).
    NotMinimal { witness: SeedSet },
    /// Some literal cannot be reproduced by any applicable reduct rule, or a
    /// cardinality bound fails.
    NotReproduced { detail: String },
}

/// Explains why a candidate model is or is not an answer set.
pub fn check_model(g: &GroundProgram, s: &SeedSet) -> Result<Verdict, EvalError> {
    if s.has_falsum() {
        return Ok(Verdict::NotReproduced {
            detail: "the model contains the reserved falsum atom".to_string(),
        });
    }
    let r = reduct(&g.rules, s)?;
    for rule in &r {
        if body_satisfied(s, &rule.pos, &[])? && !satisfies(s, &rule.head)? {
            return Ok(Verdict::NotClosed { rule: rule.clone() });
        }
    }
    let f = match positive_answer_set(&r)? {
        PositiveResult::Consistent(f) => f,
        PositiveResult::Inconsistent(detail) => {
            return Ok(Verdict::NotReproduced { detail });
        }
    };
    if &f == s {
        if !checks_hold(g, s)? {
            let witness = g
                .checks
                .iter()
                .find_map(|c| {
                    let body_ok = body_satisfied(s, &c.pos, &c.neg).ok()?;
                    if !body_ok {
                        return None;
                    }
                    let n = c.candidates.iter().filter(|a| s.has_atom(a)).count() as u64;
                    if n < c.lower || n > c.upper {
                        Some(format!("cardinality bounds fail for {c} (count {n})"))
                    } else {
                        None
                    }
                })
                .unwrap_or_else(|| "cardinality bounds fail".to_string());
            return Ok(Verdict::NotReproduced { detail: witness });
        }
        return Ok(Verdict::AnswerSet);
    }
    let extra: Vec<GLiteral> =
        s.literals().into_iter().filter(|l| !f.contains(l)).collect();
    for l in &extra {
        let supported = r
            .iter()
            .map(|rule| {
                Ok::<bool, EvalError>(
                    rule.head == *l && body_satisfied(s, &rule.pos, &[])?,
                )
            })
            .collect::<Result<Vec<bool>, EvalError>>()?
            .into_iter()
            .any(|b| b);
        if !supported {
            return Ok(Verdict::NotReproduced {
                detail: format!("`{l}` has no applicable rule in the reduct"),
            });
        }
    }
    Ok(Verdict::NotMinimal { witness: f })
}
