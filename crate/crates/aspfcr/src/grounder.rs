//! Bottom-up grounder: turns a program with variables into a variable-free
//! ground program.
//!
//! Instantiation is driven by the positive regular body literals of each
//! rule. A possibly-derivable atom set is computed as a semi-naive fixpoint
//! seeded by facts and rule heads (negation, t-atoms, and cr-heads are
//! over-approximated), then every rule is instantiated by joining its
//! positive regular literals against that set. During instantiation all
//! arithmetic over constants is folded; comparison t-atoms whose two sides
//! fold to constants are *static guards* and are eliminated: a false guard in
//! the positive body (or a true one under `not`) drops the instance, a
//! satisfied guard is deleted from the body. Choice rules are expanded into
//! generator rule pairs over a hidden complement atom plus a cardinality
//! check record for the solver.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::syntax::{
    ArithOp, Atom, ChoiceElement, ChoiceRule, Classification, CmpOp, Constant, Literal,
    Program, Rule, RuleKind, Statement, Term, CHOICE_OUT_PREFIX, FALSUM,
};

/// A fully instantiated simple term `f(c1,...,cn)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GSimple {
    pub name: String,
    pub args: Vec<Constant>,
}

impl fmt::Display for GSimple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", GAtom { name: self.name.clone(), args: self.args.clone() })
    }
}

/// A fully instantiated atom `p(c1,...,cn)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GAtom {
    pub name: String,
    pub args: Vec<Constant>,
}

impl GAtom {
    pub fn falsum() -> GAtom {
        GAtom { name: FALSUM.to_string(), args: Vec::new() }
    }

    pub fn is_falsum(&self) -> bool {
        self.name == FALSUM
    }

    /// The hidden complement atom used by choice-rule generators.
    pub fn complement(&self) -> GAtom {
        GAtom { name: format!("{CHOICE_OUT_PREFIX}{}", self.name), args: self.args.clone() }
    }
}

impl fmt::Display for GAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A ground term: constant, simple term, or arithmetic over those.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GTerm {
    Const(Constant),
    Simple(GSimple),
    Neg(Box<GTerm>),
    Abs(Box<GTerm>),
    Bin { op: ArithOp, lhs: Box<GTerm>, rhs: Box<GTerm> },
}

impl GTerm {
    fn precedence(&self) -> u8 {
        match self {
            GTerm::Bin { op: ArithOp::Add | ArithOp::Sub, .. } => 1,
            GTerm::Bin { .. } => 2,
            _ => 3,
        }
    }

    /// Collects the simple terms occurring in this term.
    pub fn collect_simples<'a>(&'a self, out: &mut Vec<&'a GSimple>) {
        match self {
            GTerm::Const(_) => {}
            GTerm::Simple(s) => out.push(s),
            GTerm::Neg(t) | GTerm::Abs(t) => t.collect_simples(out),
            GTerm::Bin { lhs, rhs, .. } => {
                lhs.collect_simples(out);
                rhs.collect_simples(out);
            }
        }
    }
}

impl fmt::Display for GTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GTerm::Const(c) => write!(f, "{c}"),
            GTerm::Simple(s) => write!(f, "{s}"),
            GTerm::Neg(t) => {
                if t.precedence() == 3 {
                    write!(f, "-{t}")
                } else {
                    write!(f, "-({t})")
                }
            }
            GTerm::Abs(t) => write!(f, "|{t}|"),
            GTerm::Bin { op, lhs, rhs } => {
                let prec = self.precedence();
                if lhs.precedence() < prec {
                    write!(f, "({lhs})")?;
                } else {
                    write!(f, "{lhs}")?;
                }
                write!(f, "{}", op.symbol())?;
                if rhs.precedence() <= prec {
                    write!(f, "({rhs})")
                } else {
                    write!(f, "{rhs}")
                }
            }
        }
    }
}

/// A ground literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GLiteral {
    Reg { strong_neg: bool, atom: GAtom },
    Cmp { op: CmpOp, lhs: GTerm, rhs: GTerm },
}

impl GLiteral {
    pub fn pos_atom(atom: GAtom) -> GLiteral {
        GLiteral::Reg { strong_neg: false, atom }
    }

    pub fn seed_value(simple: GSimple, value: Constant) -> GLiteral {
        GLiteral::Cmp { op: CmpOp::Eq, lhs: GTerm::Simple(simple), rhs: GTerm::Const(value) }
    }

    pub fn is_falsum(&self) -> bool {
        matches!(self, GLiteral::Reg { strong_neg: false, atom } if atom.is_falsum())
    }

    /// Seed/dependent classification, mirroring the source-level one.
    pub fn classification(&self) -> Classification {
        match self {
            GLiteral::Reg { .. } => Classification::Seed,
            GLiteral::Cmp { op: CmpOp::Eq, lhs: GTerm::Simple(_), rhs: GTerm::Const(_) } => {
                Classification::Seed
            }
            GLiteral::Cmp { .. } => Classification::Dependent,
        }
    }
}

impl fmt::Display for GLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GLiteral::Reg { strong_neg, atom } => {
                if *strong_neg {
                    write!(f, "-")?;
                }
                write!(f, "{atom}")
            }
            GLiteral::Cmp { op, lhs, rhs } => write!(f, "{lhs}{}{rhs}", op.symbol()),
        }
    }
}

/// Where a ground rule came from: source statement index, source line, and
/// the substitution that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Origin {
    pub src_index: usize,
    pub line: u32,
    pub subst: BTreeMap<String, Constant>,
}

impl Origin {
    /// Renders as `@line` or `@line[X=a,Y=2]`, variables sorted by name.
    pub fn tag(&self) -> String {
        if self.subst.is_empty() {
            format!("@{}", self.line)
        } else {
            let binds: Vec<String> =
                self.subst.iter().map(|(v, c)| format!("{v}={c}")).collect();
            format!("@{}[{}]", self.line, binds.join(","))
        }
    }
}

/// A ground rule. `synthesized` marks choice-generator rules, which are
/// printed back as choice rules rather than directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundRule {
    pub head: GLiteral,
    pub pos: Vec<GLiteral>,
    pub neg: Vec<GLiteral>,
    pub kind: RuleKind,
    pub origin: Origin,
    pub synthesized: bool,
}

impl GroundRule {
    pub fn is_constraint(&self) -> bool {
        self.head.is_falsum()
    }
}

impl fmt::Display for GroundRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.kind {
            RuleKind::Regular => ":-",
            RuleKind::Cr => ":+",
        };
        if self.is_constraint() {
            write!(f, ":- ")?;
            let mut first = true;
            for l in &self.pos {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "{l}")?;
            }
            for l in self.neg.iter().filter(|l| !l.is_falsum()) {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "not {l}")?;
            }
            return write!(f, ".");
        }
        write!(f, "{}", self.head)?;
        if self.pos.is_empty() && self.neg.is_empty() {
            return match self.kind {
                RuleKind::Regular => write!(f, "."),
                RuleKind::Cr => write!(f, " :+."),
            };
        }
        write!(f, " {arrow} ")?;
        let mut first = true;
        for l in &self.pos {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{l}")?;
        }
        for l in &self.neg {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "not {l}")?;
        }
        write!(f, ".")
    }
}

/// A ground cardinality check: when the body holds, the number of candidate
/// atoms in the model must lie in `lower..=upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalityCheck {
    pub lower: u64,
    pub upper: u64,
    pub candidates: Vec<GAtom>,
    pub pos: Vec<GLiteral>,
    pub neg: Vec<GLiteral>,
    pub origin: Origin,
}

impl fmt::Display for CardinalityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{ ", self.lower)?;
        for (i, c) in self.candidates.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}} {}", self.upper)?;
        if !self.pos.is_empty() || !self.neg.is_empty() {
            write!(f, " :- ")?;
            let mut first = true;
            for l in &self.pos {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "{l}")?;
            }
            for l in &self.neg {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "not {l}")?;
            }
        }
        write!(f, ".")
    }
}

/// Canonical text and line of a source statement, kept for stats output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceInfo {
    pub line: u32,
    pub text: String,
}

/// The output of grounding: regular rules (including desugared constraints
/// and choice generators), cr-rules, cardinality checks, and provenance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundProgram {
    pub rules: Vec<GroundRule>,
    pub cr_rules: Vec<GroundRule>,
    pub checks: Vec<CardinalityCheck>,
    pub sources: Vec<SourceInfo>,
    pub shows: Vec<(String, usize)>,
    pub warnings: Vec<String>,
}

impl GroundProgram {
    /// Renders the ground program in concrete syntax. Choice expansions are
    /// printed as enumerated ground choice rules so the output reparses.
    pub fn render(&self) -> String {
        let mut items: Vec<(usize, usize, String)> = Vec::new();
        for (i, r) in self.rules.iter().enumerate() {
            if !r.synthesized {
                items.push((r.origin.src_index, i, r.to_string()));
            }
        }
        for (i, c) in self.checks.iter().enumerate() {
            items.push((c.origin.src_index, self.rules.len() + i, c.to_string()));
        }
        for (i, r) in self.cr_rules.iter().enumerate() {
            items.push((
                r.origin.src_index,
                self.rules.len() + self.checks.len() + i,
                r.to_string(),
            ));
        }
        items.sort();
        let mut out = String::new();
        for (_, _, s) in items {
            out.push_str(&s);
            out.push('\n');
        }
        out
    }

    /// Distinct seed literals occurring in rule heads (falsum excluded).
    pub fn head_universe(&self) -> BTreeSet<GLiteral> {
        self.rules
            .iter()
            .chain(self.cr_rules.iter())
            .map(|r| r.head.clone())
            .filter(|h| !h.is_falsum())
            .collect()
    }
}

/// Per-source-rule grounding statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleStat {
    pub line: u32,
    pub text_hash: String,
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundingStats {
    pub per_rule: Vec<RuleStat>,
    pub total: usize,
    pub seed_universe: usize,
}

impl GroundingStats {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("line,hash,instances\n");
        for r in &self.per_rule {
            out.push_str(&format!("{},{},{}\n", r.line, r.text_hash, r.instances));
        }
        out
    }
}

/// Computes per-source-rule instance counts, the grand total, and the size
/// of the seed-literal head universe.
pub fn stats(g: &GroundProgram) -> GroundingStats {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for r in self_rules(g) {
        *counts.entry(r.origin.src_index).or_insert(0) += 1;
    }
    let per_rule = g
        .sources
        .iter()
        .enumerate()
        .map(|(i, s)| RuleStat {
            line: s.line,
            text_hash: short_hash(&s.text),
            instances: counts.get(&i).copied().unwrap_or(0),
        })
        .collect();
    GroundingStats {
        per_rule,
        total: g.rules.len() + g.cr_rules.len(),
        seed_universe: g.head_universe().len(),
    }
}

fn self_rules(g: &GroundProgram) -> impl Iterator<Item = &GroundRule> {
    g.rules.iter().chain(g.cr_rules.iter())
}

fn short_hash(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    let digest = h.finalize();
    digest[..4].iter().map(|b| format!("{b:02x}")).collect()
}

/// Grounding diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroundError {
    #[error("line {line}: unsafe rule: variable {var} does not occur in a positive regular body literal")]
    Unsafe { var: String, line: u32 },
    #[error("line {line}: unsafe choice candidate: local {var} is bound neither by a condition literal nor by closed numeric guards")]
    UnsafeChoiceLocal { var: String, line: u32 },
    #[error("line {line}: ill-sorted expression: {detail}")]
    IllSorted { detail: String, line: u32 },
    #[error("line {line}: division by zero in a constant expression")]
    DivisionByZero { line: u32 },
    #[error("line {line}: integer overflow in a constant expression")]
    Overflow { line: u32 },
    #[error("line {line}: head `{head}` does not ground to a seed literal")]
    HeadNotSeed { head: String, line: u32 },
}

/// Options controlling grounding. `eliminate_static_guards` is on by
/// default; switching it off keeps statically decidable guards in rule
/// bodies (and the instances they would have dropped), which must not change
/// the program's answer sets.
#[derive(Debug, Clone, Copy)]
pub struct GroundOptions {
    pub eliminate_static_guards: bool,
}

impl Default for GroundOptions {
    fn default() -> Self {
        GroundOptions { eliminate_static_guards: true }
    }
}

/// Grounds a program with default options.
pub fn ground(program: &Program) -> Result<GroundProgram, GroundError> {
    ground_with(program, GroundOptions::default())
}

/// Grounds a program.
pub fn ground_with(program: &Program, opts: GroundOptions) -> Result<GroundProgram, GroundError> {
    check_safety(program)?;
    let db = derivable_atoms(program)?;
    instantiate(program, &db, opts)
}

type AtomKey = (bool, String, usize);
type Db = BTreeMap<AtomKey, BTreeSet<Vec<Constant>>>;
type Subst = BTreeMap<String, Constant>;

fn atom_key(strong_neg: bool, atom: &Atom) -> AtomKey {
    (strong_neg, atom.name.clone(), atom.args.len())
}

/// Variables bound by matching a term pattern in a positive regular literal:
/// plain variables and variables nested inside record patterns.
fn binding_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::Simple { args, .. } => args.iter().for_each(|a| binding_vars(a, out)),
        _ => {}
    }
}

fn rule_binders(pos: &[Literal]) -> BTreeSet<String> {
    let mut bound = BTreeSet::new();
    for l in pos {
        if let Literal::Reg { atom, .. } = l {
            for a in &atom.args {
                binding_vars(a, &mut bound);
            }
        }
    }
    bound
}

fn check_safety(program: &Program) -> Result<(), GroundError> {
    for stmt in &program.statements {
        match stmt {
            Statement::Rule(r) => {
                let bound = rule_binders(&r.pos);
                for v in r.collect_vars() {
                    if !bound.contains(&v) {
                        return Err(GroundError::Unsafe { var: v, line: r.line });
                    }
                }
            }
            Statement::Choice(c) => {
                let bound = rule_binders(&c.pos);
                // body variables must be safe; element locals are checked
                // during expansion where guard ranges are available
                let mut body_vars = Vec::new();
                for l in c.pos.iter().chain(c.neg.iter()) {
                    l.collect_vars(&mut body_vars);
                }
                for v in body_vars {
                    if !bound.contains(&v) {
                        return Err(GroundError::Unsafe { var: v, line: c.line });
                    }
                }
            }
            Statement::Show(_, _) => {}
        }
    }
    Ok(())
}

/// Matching a pattern term against a ground constant. Arithmetic argument
/// patterns cannot bind; they are deferred and checked once the substitution
/// is complete.
enum ArgMatch {
    Ok,
    Fail,
    Deferred,
}

fn match_arg(pattern: &Term, value: &Constant, subst: &mut Subst, deferred: &mut Vec<(Term, Constant)>) -> ArgMatch {
    match pattern {
        Term::Var(v) => match subst.get(v) {
            Some(c) if c == value => ArgMatch::Ok,
            Some(_) => ArgMatch::Fail,
            None => {
                subst.insert(v.clone(), value.clone());
                ArgMatch::Ok
            }
        },
        Term::Const(c) => {
            if c == value {
                ArgMatch::Ok
            } else {
                ArgMatch::Fail
            }
        }
        Term::Simple { name, args } => match value {
            Constant::Record(rname, rargs) if rname == name && rargs.len() == args.len() => {
                for (p, v) in args.iter().zip(rargs.iter()) {
                    match match_arg(p, v, subst, deferred) {
                        ArgMatch::Ok => {}
                        ArgMatch::Fail => return ArgMatch::Fail,
                        ArgMatch::Deferred => unreachable!("records defer no arguments"),
                    }
                }
                ArgMatch::Ok
            }
            _ => ArgMatch::Fail,
        },
        Term::Neg(_) | Term::Abs(_) | Term::Bin { .. } => {
            deferred.push((pattern.clone(), value.clone()));
            ArgMatch::Deferred
        }
    }
}

fn match_atom(
    pattern: &Atom,
    candidate: &[Constant],
    subst: &mut Subst,
    deferred: &mut Vec<(Term, Constant)>,
) -> bool {
    for (p, v) in pattern.args.iter().zip(candidate.iter()) {
        match match_arg(p, v, subst, deferred) {
            ArgMatch::Fail => return false,
            ArgMatch::Ok | ArgMatch::Deferred => {}
        }
    }
    true
}

/// Enumerates substitutions that match `pos`'s regular literals against the
/// database, in sorted database order. When `pivot` is set, literal
/// `pivot.0` is matched against the delta set `pivot.1` instead.
fn join<'a>(
    pos: &[Literal],
    db: &'a Db,
    pivot: Option<(usize, &'a Db)>,
    line: u32,
    eliminate: bool,
    mut emit: impl FnMut(Subst) -> Result<(), GroundError>,
) -> Result<(), GroundError> {
    let regs: Vec<(usize, bool, &Atom)> = pos
        .iter()
        .enumerate()
        .filter_map(|(i, l)| match l {
            Literal::Reg { strong_neg, atom } => Some((i, *strong_neg, atom)),
            _ => None,
        })
        .collect();
    let guards: Vec<&Literal> =
        pos.iter().filter(|l| matches!(l, Literal::Cmp { .. })).collect();

    fn rec(
        regs: &[(usize, bool, &Atom)],
        k: usize,
        db: &Db,
        pivot: Option<(usize, &Db)>,
        subst: Subst,
        deferred: Vec<(Term, Constant)>,
        guards: &[&Literal],
        line: u32,
        eliminate: bool,
        emit: &mut impl FnMut(Subst) -> Result<(), GroundError>,
    ) -> Result<(), GroundError> {
        if k == regs.len() {
            for (t, v) in &deferred {
                match fold_arg(t, &subst, line) {
                    Ok(c) => {
                        if &c != v {
                            return Ok(());
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
            if eliminate {
                for g in guards {
                    if let Some(holds) = static_guard_value(g, &subst, line)? {
                        if !holds {
                            return Ok(());
                        }
                    }
                }
            }
            return emit(subst);
        }
        let (idx, sn, atom) = regs[k];
        let source = match pivot {
            Some((p, delta)) if p == idx => delta,
            _ => db,
        };
        let key = atom_key(sn, atom);
        if let Some(tuples) = source.get(&key) {
            for tuple in tuples {
                let mut s2 = subst.clone();
                let mut d2 = deferred.clone();
                if match_atom(atom, tuple, &mut s2, &mut d2) {
                    rec(regs, k + 1, db, pivot, s2, d2, guards, line, eliminate, emit)?;
                }
            }
        }
        Ok(())
    }

    // early exit: a pivot index that is not a regular literal never matches
    if let Some((p, _)) = pivot {
        if !regs.iter().any(|(i, _, _)| *i == p) {
            return Ok(());
        }
    }
    rec(&regs, 0, db, pivot, Subst::new(), Vec::new(), &guards, line, eliminate, &mut emit)
}

/// Evaluates a guard if both sides fold to constants under `subst`;
/// returns None when the guard still contains simple terms or variables.
fn static_guard_value(
    lit: &Literal,
    subst: &Subst,
    line: u32,
) -> Result<Option<bool>, GroundError> {
    let Literal::Cmp { op, lhs, rhs } = lit else { return Ok(None) };
    let l = fold_top(lhs, subst, line)?;
    let r = fold_top(rhs, subst, line)?;
    match (&l, &r) {
        (GTerm::Const(a), GTerm::Const(b)) => Ok(Some(compare_constants(*op, a, b, line)?)),
        _ => Ok(None),
    }
}

fn compare_constants(op: CmpOp, a: &Constant, b: &Constant, line: u32) -> Result<bool, GroundError> {
    match op {
        CmpOp::Eq => Ok(a == b),
        CmpOp::Ne => Ok(a != b),
        _ => match (a, b) {
            (Constant::Int(x), Constant::Int(y)) => Ok(match op {
                CmpOp::Lt => x < y,
                CmpOp::Le => x <= y,
                CmpOp::Gt => x > y,
                CmpOp::Ge => x >= y,
                _ => unreachable!(),
            }),
            _ => Err(GroundError::IllSorted {
                detail: format!("order comparison between {a} and {b}"),
                line,
            }),
        },
    }
}

/// Folds a term in argument position down to a constant.
fn fold_arg(t: &Term, subst: &Subst, line: u32) -> Result<Constant, GroundError> {
    match t {
        Term::Const(c) => Ok(c.clone()),
        Term::Var(v) => subst.get(v).cloned().ok_or_else(|| GroundError::Unsafe {
            var: v.clone(),
            line,
        }),
        Term::Simple { name, args } => {
            let folded: Result<Vec<Constant>, GroundError> =
                args.iter().map(|a| fold_arg(a, subst, line)).collect();
            Ok(Constant::Record(name.clone(), folded?))
        }
        Term::Neg(x) => match fold_arg(x, subst, line)? {
            Constant::Int(n) => {
                n.checked_neg().map(Constant::Int).ok_or(GroundError::Overflow { line })
            }
            c => Err(GroundError::IllSorted { detail: format!("-{c}"), line }),
        },
        Term::Abs(x) => match fold_arg(x, subst, line)? {
            Constant::Int(n) => {
                n.checked_abs().map(Constant::Int).ok_or(GroundError::Overflow { line })
            }
            c => Err(GroundError::IllSorted { detail: format!("|{c}|"), line }),
        },
        Term::Bin { op, lhs, rhs } => {
            let a = fold_arg(lhs, subst, line)?;
            let b = fold_arg(rhs, subst, line)?;
            fold_int_op(*op, &a, &b, line).map(Constant::Int)
        }
    }
}

fn fold_int_op(op: ArithOp, a: &Constant, b: &Constant, line: u32) -> Result<i64, GroundError> {
    let (Constant::Int(x), Constant::Int(y)) = (a, b) else {
        return Err(GroundError::IllSorted {
            detail: format!("{a} {} {b}", op.symbol()),
            line,
        });
    };
    let r = match op {
        ArithOp::Add => x.checked_add(*y),
        ArithOp::Sub => x.checked_sub(*y),
        ArithOp::Mul => x.checked_mul(*y),
        ArithOp::Div => {
            if *y == 0 {
                return Err(GroundError::DivisionByZero { line });
            }
            x.checked_div(*y)
        }
    };
    r.ok_or(GroundError::Overflow { line })
}

/// Folds a term on a comparison side: simple terms survive as function
/// applications (with folded arguments), everything around them folds as far
/// as the constants allow.
fn fold_top(t: &Term, subst: &Subst, line: u32) -> Result<GTerm, GroundError> {
    match t {
        Term::Const(c) => Ok(GTerm::Const(c.clone())),
        Term::Var(v) => subst
            .get(v)
            .map(|c| GTerm::Const(c.clone()))
            .ok_or_else(|| GroundError::Unsafe { var: v.clone(), line }),
        Term::Simple { name, args } => {
            let folded: Result<Vec<Constant>, GroundError> =
                args.iter().map(|a| fold_arg(a, subst, line)).collect();
            Ok(GTerm::Simple(GSimple { name: name.clone(), args: folded? }))
        }
        Term::Neg(x) => {
            let inner = fold_top(x, subst, line)?;
            match inner {
                GTerm::Const(Constant::Int(n)) => n
                    .checked_neg()
                    .map(|m| GTerm::Const(Constant::Int(m)))
                    .ok_or(GroundError::Overflow { line }),
                GTerm::Const(c) => {
                    Err(GroundError::IllSorted { detail: format!("-{c}"), line })
                }
                other => Ok(GTerm::Neg(Box::new(other))),
            }
        }
        Term::Abs(x) => {
            let inner = fold_top(x, subst, line)?;
            match inner {
                GTerm::Const(Constant::Int(n)) => n
                    .checked_abs()
                    .map(|m| GTerm::Const(Constant::Int(m)))
                    .ok_or(GroundError::Overflow { line }),
                GTerm::Const(c) => {
                    Err(GroundError::IllSorted { detail: format!("|{c}|"), line })
                }
                other => Ok(GTerm::Abs(Box::new(other))),
            }
        }
        Term::Bin { op, lhs, rhs } => {
            let a = fold_top(lhs, subst, line)?;
            let b = fold_top(rhs, subst, line)?;
            match (&a, &b) {
                (GTerm::Const(x), GTerm::Const(y)) => {
                    fold_int_op(*op, x, y, line).map(|n| GTerm::Const(Constant::Int(n)))
                }
                (GTerm::Const(c), _) | (_, GTerm::Const(c)) if !c.is_numeric() => {
                    Err(GroundError::IllSorted {
                        detail: format!("{c} used in arithmetic"),
                        line,
                    })
                }
                _ => Ok(GTerm::Bin { op: *op, lhs: Box::new(a), rhs: Box::new(b) }),
            }
        }
    }
}

fn fold_literal(lit: &Literal, subst: &Subst, line: u32) -> Result<GLiteral, GroundError> {
    match lit {
        Literal::Reg { strong_neg, atom } => {
            let args: Result<Vec<Constant>, GroundError> =
                atom.args.iter().map(|a| fold_arg(a, subst, line)).collect();
            Ok(GLiteral::Reg {
                strong_neg: *strong_neg,
                atom: GAtom { name: atom.name.clone(), args: args? },
            })
        }
        Literal::Cmp { op, lhs, rhs } => Ok(GLiteral::Cmp {
            op: *op,
            lhs: fold_top(lhs, subst, line)?,
            rhs: fold_top(rhs, subst, line)?,
        }),
    }
}

/// Computes the possibly-derivable atom set: a semi-naive fixpoint over the
/// positive regular fragment, treating t-atoms as satisfiable unless they
/// are statically false and ignoring negation. Heads of cr-rules and choice
/// candidates count as derivable.
fn derivable_atoms(program: &Program) -> Result<Db, GroundError> {
    let mut db: Db = Db::new();
    let mut delta: Db = Db::new();

    let add = |db: &mut Db, delta: &mut Db, key: AtomKey, tuple: Vec<Constant>| {
        if db.entry(key.clone()).or_default().insert(tuple.clone()) {
            delta.entry(key).or_default().insert(tuple);
        }
    };

    // round 0: naive pass; then semi-naive rounds driven by the last delta
    let mut first = true;
    loop {
        let last_delta = std::mem::take(&mut delta);
        let mut changed = false;
        for stmt in &program.statements {
            match stmt {
                Statement::Rule(r) => {
                    let head = match &r.head {
                        Literal::Reg { strong_neg, atom } if !atom.is_falsum() => {
                            Some((*strong_neg, atom))
                        }
                        _ => None,
                    };
                    let Some((sn, head_atom)) = head else { continue };
                    let pivots: Vec<Option<(usize, &Db)>> = if first {
                        vec![None]
                    } else {
                        (0..r.pos.len()).map(|i| Some((i, &last_delta))).collect()
                    };
                    for pivot in pivots {
                        let mut new_tuples = Vec::new();
                        join(&r.pos, &db, pivot, r.line, true, |subst| {
                            let args: Result<Vec<Constant>, GroundError> = head_atom
                                .args
                                .iter()
                                .map(|a| fold_arg(a, &subst, r.line))
                                .collect();
                            new_tuples.push(args?);
                            Ok(())
                        })?;
                        for t in new_tuples {
                            let before = db
                                .get(&atom_key(sn, head_atom))
                                .map(|s| s.len())
                                .unwrap_or(0);
                            add(&mut db, &mut delta, atom_key(sn, head_atom), t);
                            if db[&atom_key(sn, head_atom)].len() > before {
                                changed = true;
                            }
                        }
                    }
                }
                Statement::Choice(c) => {
                    let pivots: Vec<Option<(usize, &Db)>> = if first {
                        vec![None]
                    } else {
                        (0..c.pos.len()).map(|i| Some((i, &last_delta))).collect()
                    };
                    for pivot in pivots {
                        let mut outer = Vec::new();
                        join(&c.pos, &db, pivot, c.line, true, |subst| {
                            outer.push(subst);
                            Ok(())
                        })?;
                        for subst in outer {
                            let db_snapshot = db.clone();
                            for e in &c.elements {
                                for cand in
                                    element_candidates(e, &subst, &db_snapshot, c.line)?
                                {
                                    let key =
                                        (false, cand.name.clone(), cand.args.len());
                                    let before =
                                        db.get(&key).map(|s| s.len()).unwrap_or(0);
                                    add(&mut db, &mut delta, key.clone(), cand.args);
                                    if db[&key].len() > before {
                                        changed = true;
                                    }
                                }
                            }
                        }
                    }
                }
                Statement::Show(_, _) => {}
            }
        }
        first = false;
        if !changed {
            break;
        }
    }
    Ok(db)
}

/// Enumerates the ground candidate atoms of one choice element under an
/// outer substitution. Locals are bound by condition literals or by closed
/// numeric guard ranges; guards filter the result.
fn element_candidates(
    e: &ChoiceElement,
    outer: &Subst,
    db: &Db,
    line: u32,
) -> Result<Vec<GAtom>, GroundError> {
    let mut locals: Vec<String> = Vec::new();
    let mut vars = Vec::new();
    e.schema.args.iter().for_each(|a| a.collect_vars(&mut vars));
    for c in &e.conds {
        c.collect_vars(&mut vars);
    }
    for v in vars {
        if !outer.contains_key(&v) && !locals.contains(&v) {
            locals.push(v);
        }
    }
    let cond_regs: Vec<&Literal> =
        e.conds.iter().filter(|l| matches!(l, Literal::Reg { .. })).collect();
    let cond_guards: Vec<&Literal> =
        e.conds.iter().filter(|l| matches!(l, Literal::Cmp { .. })).collect();

    let mut bound_by_regs = BTreeSet::new();
    for l in &cond_regs {
        if let Literal::Reg { atom, .. } = l {
            for a in &atom.args {
                binding_vars(a, &mut bound_by_regs);
            }
        }
    }

    // locals not bound by condition literals need closed numeric ranges
    let mut ranges: BTreeMap<String, (Option<i64>, Option<i64>)> = BTreeMap::new();
    for v in &locals {
        if !bound_by_regs.contains(v) {
            ranges.insert(v.clone(), (None, None));
        }
    }
    for g in &cond_guards {
        let Literal::Cmp { op, lhs, rhs } = g else { unreachable!() };
        let bound = |ranges: &mut BTreeMap<String, (Option<i64>, Option<i64>)>,
                     v: &str,
                     op: CmpOp,
                     n: i64| {
            if let Some((lo, hi)) = ranges.get_mut(v) {
                match op {
                    CmpOp::Ge => *lo = Some((*lo).map_or(n, |x| x.max(n))),
                    CmpOp::Gt => *lo = Some((*lo).map_or(n + 1, |x| x.max(n + 1))),
                    CmpOp::Le => *hi = Some((*hi).map_or(n, |x| x.min(n))),
                    CmpOp::Lt => *hi = Some((*hi).map_or(n - 1, |x| x.min(n - 1))),
                    CmpOp::Eq => {
                        *lo = Some((*lo).map_or(n, |x| x.max(n)));
                        *hi = Some((*hi).map_or(n, |x| x.min(n)));
                    }
                    CmpOp::Ne => {}
                }
            }
        };
        match (lhs, rhs) {
            (Term::Var(v), Term::Const(Constant::Int(n))) => bound(&mut ranges, v, *op, *n),
            (Term::Const(Constant::Int(n)), Term::Var(v)) => {
                let flipped = match op {
                    CmpOp::Lt => CmpOp::Gt,
                    CmpOp::Le => CmpOp::Ge,
                    CmpOp::Gt => CmpOp::Lt,
                    CmpOp::Ge => CmpOp::Le,
                    other => *other,
                };
                bound(&mut ranges, v, flipped, *n)
            }
            _ => {}
        }
    }
    for (v, (lo, hi)) in &ranges {
        if lo.is_none() || hi.is_none() {
            return Err(GroundError::UnsafeChoiceLocal { var: v.clone(), line });
        }
    }

    // enumerate: join condition literals, then expand guard ranges; the
    // join starts from an empty substitution, so matches that contradict the
    // outer bindings are dropped afterwards
    let mut partials = Vec::new();
    let cond_pos: Vec<Literal> = cond_regs.iter().map(|l| (*l).clone()).collect();
    join(&cond_pos, db, None, line, true, |subst| {
        partials.push(subst);
        Ok(())
    })?;
    let mut seeded = Vec::new();
    for mut p in partials {
        let mut ok = true;
        for (k, v) in outer {
            match p.get(k) {
                Some(c) if c != v => {
                    ok = false;
                    break;
                }
                _ => {
                    p.insert(k.clone(), v.clone());
                }
            }
        }
        if ok {
            seeded.push(p);
        }
    }

    let range_vars: Vec<(String, i64, i64)> = ranges
        .iter()
        .map(|(v, (lo, hi))| (v.clone(), lo.unwrap(), hi.unwrap()))
        .collect();

    let mut out = BTreeSet::new();
    for base in seeded {
        let mut stack = vec![base];
        for (v, lo, hi) in &range_vars {
            let mut next = Vec::new();
            for s in &stack {
                for n in *lo..=*hi {
                    let mut s2 = s.clone();
                    s2.insert(v.clone(), Constant::Int(n));
                    next.push(s2);
                }
            }
            stack = next;
        }
        'subst: for s in stack {
            for g in &cond_guards {
                match static_guard_value(g, &s, line)? {
                    Some(false) => continue 'subst,
                    Some(true) => {}
                    None => {
                        return Err(GroundError::IllSorted {
                            detail: format!("choice guard {g} is not decidable at grounding"),
                            line,
                        })
                    }
                }
            }
            let args: Result<Vec<Constant>, GroundError> =
                e.schema.args.iter().map(|a| fold_arg(a, &s, line)).collect();
            out.insert(GAtom { name: e.schema.name.clone(), args: args? });
        }
    }
    Ok(out.into_iter().collect())
}

/// Final instantiation pass against the completed derivable-atom set.
fn instantiate(
    program: &Program,
    db: &Db,
    opts: GroundOptions,
) -> Result<GroundProgram, GroundError> {
    let mut g = GroundProgram {
        shows: program.shows(),
        ..GroundProgram::default()
    };
    for (idx, stmt) in program.statements.iter().enumerate() {
        g.sources.push(SourceInfo {
            line: statement_line(stmt),
            text: stmt.to_string(),
        });
        match stmt {
            Statement::Rule(r) => {
                let mut substs = Vec::new();
                join(&r.pos, db, None, r.line, opts.eliminate_static_guards, |s| {
                    substs.push(s);
                    Ok(())
                })?;
                for subst in substs {
                    if let Some(rule) = instantiate_rule(r, idx, &subst, opts)? {
                        match r.kind {
                            RuleKind::Regular => g.rules.push(rule),
                            RuleKind::Cr => g.cr_rules.push(rule),
                        }
                    }
                }
            }
            Statement::Choice(c) => {
                let mut substs = Vec::new();
                join(&c.pos, db, None, c.line, opts.eliminate_static_guards, |s| {
                    substs.push(s);
                    Ok(())
                })?;
                for subst in substs {
                    expand_choice_instance(c, idx, &subst, db, opts, &mut g)?;
                }
            }
            Statement::Show(_, _) => {}
        }
    }
    Ok(g)
}

fn statement_line(stmt: &Statement) -> u32 {
    match stmt {
        Statement::Rule(r) => r.line,
        Statement::Choice(c) => c.line,
        Statement::Show(_, _) => 0,
    }
}

/// Retains the substitution entries for variables that occur in the rule.
fn narrow_subst(vars: &[String], subst: &Subst) -> Subst {
    vars.iter()
        .filter_map(|v| subst.get(v).map(|c| (v.clone(), c.clone())))
        .collect()
}

fn instantiate_rule(
    r: &Rule,
    src_index: usize,
    subst: &Subst,
    opts: GroundOptions,
) -> Result<Option<GroundRule>, GroundError> {
    let head = fold_literal(&r.head, subst, r.line)?;
    if !head.is_falsum() && head.classification() != Classification::Seed {
        return Err(GroundError::HeadNotSeed { head: head.to_string(), line: r.line });
    }
    let mut pos = Vec::new();
    for l in &r.pos {
        let gl = fold_literal(l, subst, r.line)?;
        if opts.eliminate_static_guards {
            if let GLiteral::Cmp { op, lhs: GTerm::Const(a), rhs: GTerm::Const(b) } = &gl {
                if compare_constants(*op, a, b, r.line)? {
                    continue; // satisfied guard: delete
                } else {
                    return Ok(None); // false guard: drop the instance
                }
            }
        }
        if !pos.contains(&gl) {
            pos.push(gl);
        }
    }
    let mut neg = Vec::new();
    for l in &r.neg {
        let gl = fold_literal(l, subst, r.line)?;
        if opts.eliminate_static_guards && !gl.is_falsum() {
            if let GLiteral::Cmp { op, lhs: GTerm::Const(a), rhs: GTerm::Const(b) } = &gl {
                if compare_constants(*op, a, b, r.line)? {
                    return Ok(None); // `not` over a true guard never holds
                } else {
                    continue; // `not` over a false guard always holds
                }
            }
        }
        if !neg.contains(&gl) {
            neg.push(gl);
        }
    }
    Ok(Some(GroundRule {
        head,
        pos,
        neg,
        kind: r.kind,
        origin: Origin {
            src_index,
            line: r.line,
            subst: narrow_subst(&r.collect_vars(), subst),
        },
        synthesized: false,
    }))
}

fn expand_choice_instance(
    c: &ChoiceRule,
    src_index: usize,
    subst: &Subst,
    db: &Db,
    opts: GroundOptions,
    g: &mut GroundProgram,
) -> Result<(), GroundError> {
    let mut pos = Vec::new();
    for l in &c.pos {
        let gl = fold_literal(l, subst, c.line)?;
        if opts.eliminate_static_guards {
            if let GLiteral::Cmp { op, lhs: GTerm::Const(a), rhs: GTerm::Const(b) } = &gl {
                if compare_constants(*op, a, b, c.line)? {
                    continue;
                } else {
                    return Ok(());
                }
            }
        }
        if !pos.contains(&gl) {
            pos.push(gl);
        }
    }
    let mut neg = Vec::new();
    for l in &c.neg {
        let gl = fold_literal(l, subst, c.line)?;
        if opts.eliminate_static_guards {
            if let GLiteral::Cmp { op, lhs: GTerm::Const(a), rhs: GTerm::Const(b) } = &gl {
                if compare_constants(*op, a, b, c.line)? {
                    return Ok(());
                } else {
                    continue;
                }
            }
        }
        if !neg.contains(&gl) {
            neg.push(gl);
        }
    }

    let mut candidates = BTreeSet::new();
    for e in &c.elements {
        for cand in element_candidates(e, subst, db, c.line)? {
            candidates.insert(cand);
        }
    }
    let candidates: Vec<GAtom> = candidates.into_iter().collect();
    if candidates.is_empty() && c.lower >= 1 {
        g.warnings.push(format!(
            "line {}: choice has no candidates but requires at least {}",
            c.line, c.lower
        ));
    }

    let mut body_vars = Vec::new();
    for l in c.pos.iter().chain(c.neg.iter()) {
        l.collect_vars(&mut body_vars);
    }
    let origin =
        Origin { src_index, line: c.line, subst: narrow_subst(&body_vars, subst) };

    for cand in &candidates {
        let comp = cand.complement();
        let mut neg_in = neg.clone();
        neg_in.push(GLiteral::pos_atom(comp.clone()));
        g.rules.push(GroundRule {
            head: GLiteral::pos_atom(cand.clone()),
            pos: pos.clone(),
            neg: neg_in,
            kind: RuleKind::Regular,
            origin: origin.clone(),
            synthesized: true,
        });
        let mut neg_out = neg.clone();
        neg_out.push(GLiteral::pos_atom(cand.clone()));
        g.rules.push(GroundRule {
            head: GLiteral::pos_atom(comp),
            pos: pos.clone(),
            neg: neg_out,
            kind: RuleKind::Regular,
            origin: origin.clone(),
            synthesized: true,
        });
    }
    g.checks.push(CardinalityCheck {
        lower: c.lower,
        upper: c.upper,
        candidates,
        pos,
        neg,
        origin,
    });
    Ok(())
}
