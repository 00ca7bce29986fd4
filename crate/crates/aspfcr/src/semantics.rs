//! Evaluation of ground programs: seed-literal sets, term values,
//! satisfaction, the reduct, and the positive-program fixpoint.
//!
//! A *seed literal* is a regular literal or a t-atom `f(..)=c`; a consistent
//! set of seed literals is the model object of this language. It may not
//! contain an atom together with its strong negation, nor two values for the
//! same simple term. Simple terms without an entry are undefined, and
//! arithmetic is strict in undefined: any undefined operand makes the whole
//! term undefined. Dependent t-atoms are evaluated from values and are false
//! whenever either side is undefined; ordering comparisons require integers
//! on both sides.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::grounder::{GAtom, GLiteral, GSimple, GTerm, GroundProgram, GroundRule};
use crate::syntax::{ArithOp, Classification, CmpOp, Constant, FALSUM};

/// The value of a term: a constant, or undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Defined(Constant),
    Undefined,
}

impl Value {
    pub fn is_defined(&self) -> bool {
        matches!(self, Value::Defined(_))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Defined(c) => write!(f, "{c}"),
            Value::Undefined => write!(f, "undefined"),
        }
    }
}

/// Evaluation diagnostics: expressions that no consistent value assignment
/// can make meaningful.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("ill-sorted arithmetic: {term} has a non-integer operand")]
    IllSortedArith { term: String },
    #[error("ill-sorted comparison: order between {lhs} and {rhs}")]
    IllSortedCompare { lhs: String, rhs: String },
}

/// Rejected insertions into a seed-literal set.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InsertError {
    #[error("`{attempted}` conflicts with `{existing}` already in the set")]
    Conflict { existing: GLiteral, attempted: GLiteral },
    #[error("`{0}` is not a seed literal")]
    NotSeed(GLiteral),
}

type AtomKey = (String, Vec<Constant>);

/// A consistent set of seed literals. Insertion enforces consistency; the
/// representation maps atom keys to their polarity and simple terms to their
/// single value.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeedSet {
    atoms: BTreeMap<AtomKey, bool>,
    vals: BTreeMap<AtomKey, Constant>,
}

impl SeedSet {
    pub fn empty() -> SeedSet {
        SeedSet::default()
    }

    pub fn len(&self) -> usize {
        self.atoms.len() + self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.vals.is_empty()
    }

    /// Membership of a positive, non-negated atom.
    pub fn has_atom(&self, atom: &GAtom) -> bool {
        self.atoms.get(&(atom.name.clone(), atom.args.clone())) == Some(&false)
    }

    /// The assigned value of a simple term, if any.
    pub fn value_of(&self, t: &GSimple) -> Option<&Constant> {
        self.vals.get(&(t.name.clone(), t.args.clone()))
    }

    /// Membership test for a seed literal; dependent t-atoms are never
    /// members.
    pub fn contains(&self, lit: &GLiteral) -> bool {
        match lit {
            GLiteral::Reg { strong_neg, atom } => {
                self.atoms.get(&(atom.name.clone(), atom.args.clone())) == Some(strong_neg)
            }
            GLiteral::Cmp { op: CmpOp::Eq, lhs: GTerm::Simple(t), rhs: GTerm::Const(v) } => {
                self.value_of(t) == Some(v)
            }
            GLiteral::Cmp { .. } => false,
        }
    }

    /// Inserts in place. Returns whether the set grew.
    pub fn try_insert_mut(&mut self, lit: &GLiteral) -> Result<bool, InsertError> {
        match lit {
            GLiteral::Reg { strong_neg, atom } => {
                let key = (atom.name.clone(), atom.args.clone());
                match self.atoms.get(&key) {
                    Some(sn) if sn == strong_neg => Ok(false),
                    Some(sn) => Err(InsertError::Conflict {
                        existing: GLiteral::Reg { strong_neg: *sn, atom: atom.clone() },
                        attempted: lit.clone(),
                    }),
                    None => {
                        self.atoms.insert(key, *strong_neg);
                        Ok(true)
                    }
                }
            }
            GLiteral::Cmp { op: CmpOp::Eq, lhs: GTerm::Simple(t), rhs: GTerm::Const(v) } => {
                let key = (t.name.clone(), t.args.clone());
                match self.vals.get(&key) {
                    Some(w) if w == v => Ok(false),
                    Some(w) => Err(InsertError::Conflict {
                        existing: GLiteral::seed_value(t.clone(), w.clone()),
                        attempted: lit.clone(),
                    }),
                    None => {
                        self.vals.insert(key, v.clone());
                        Ok(true)
                    }
                }
            }
            GLiteral::Cmp { .. } => Err(InsertError::NotSeed(lit.clone())),
        }
    }

    /// Persistent insertion: returns an extended copy, leaving `self` as-is.
    pub fn try_insert(&self, lit: &GLiteral) -> Result<SeedSet, InsertError> {
        let mut next = self.clone();
        next.try_insert_mut(lit)?;
        Ok(next)
    }

    /// Builds a set from literals, rejecting the first inconsistency.
    pub fn from_literals<'a>(
        lits: impl IntoIterator<Item = &'a GLiteral>,
    ) -> Result<SeedSet, InsertError> {
        let mut s = SeedSet::empty();
        for l in lits {
            s.try_insert_mut(l)?;
        }
        Ok(s)
    }

    /// The member literals, atoms first, each group in key order.
    pub fn literals(&self) -> Vec<GLiteral> {
        let mut out = Vec::with_capacity(self.len());
        for ((name, args), sn) in &self.atoms {
            out.push(GLiteral::Reg {
                strong_neg: *sn,
                atom: GAtom { name: name.clone(), args: args.clone() },
            });
        }
        for ((name, args), v) in &self.vals {
            out.push(GLiteral::seed_value(
                GSimple { name: name.clone(), args: args.clone() },
                v.clone(),
            ));
        }
        out
    }

    pub fn is_subset(&self, other: &SeedSet) -> bool {
        self.atoms.iter().all(|(k, v)| other.atoms.get(k) == Some(v))
            && self.vals.iter().all(|(k, v)| other.vals.get(k) == Some(v))
    }

    pub fn has_falsum(&self) -> bool {
        self.atoms.get(&(FALSUM.to_string(), Vec::new())) == Some(&false)
    }
}

impl fmt::Display for SeedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.literals().iter().map(|l| l.to_string()).collect();
        parts.sort();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// The value of a ground term w.r.t. a seed-literal set. Division by zero
/// and overflow yield Undefined; non-integer operands in arithmetic are
/// ill-sorted errors.
pub fn val(t: &GTerm, s: &SeedSet) -> Result<Value, EvalError> {
    match t {
        GTerm::Const(c) => Ok(Value::Defined(c.clone())),
        GTerm::Simple(f) => {
            Ok(s.value_of(f).cloned().map(Value::Defined).unwrap_or(Value::Undefined))
        }
        GTerm::Neg(x) => match val(x, s)? {
            Value::Defined(Constant::Int(n)) => {
                Ok(n.checked_neg().map(|m| Value::Defined(Constant::Int(m))).unwrap_or(Value::Undefined))
            }
            Value::Defined(_) => Err(EvalError::IllSortedArith { term: t.to_string() }),
            Value::Undefined => Ok(Value::Undefined),
        },
        GTerm::Abs(x) => match val(x, s)? {
            Value::Defined(Constant::Int(n)) => {
                Ok(n.checked_abs().map(|m| Value::Defined(Constant::Int(m))).unwrap_or(Value::Undefined))
            }
            Value::Defined(_) => Err(EvalError::IllSortedArith { term: t.to_string() }),
            Value::Undefined => Ok(Value::Undefined),
        },
        GTerm::Bin { op, lhs, rhs } => {
            let a = val(lhs, s)?;
            let b = val(rhs, s)?;
            for side in [&a, &b] {
                if let Value::Defined(c) = side {
                    if !c.is_numeric() {
                        return Err(EvalError::IllSortedArith { term: t.to_string() });
                    }
                }
            }
            match (a, b) {
                (Value::Defined(Constant::Int(x)), Value::Defined(Constant::Int(y))) => {
                    let r = match op {
                        ArithOp::Add => x.checked_add(y),
                        ArithOp::Sub => x.checked_sub(y),
                        ArithOp::Mul => x.checked_mul(y),
                        ArithOp::Div => {
                            if y == 0 {
                                None
                            } else {
                                x.checked_div(y)
                            }
                        }
                    };
                    Ok(r.map(|n| Value::Defined(Constant::Int(n))).unwrap_or(Value::Undefined))
                }
                _ => Ok(Value::Undefined),
            }
        }
    }
}

fn compare_defined(op: CmpOp, a: &Constant, b: &Constant) -> Result<bool, EvalError> {
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
            _ => Err(EvalError::IllSortedCompare { lhs: a.to_string(), rhs: b.to_string() }),
        },
    }
}

/// Literal satisfaction: seed literals by membership, dependent t-atoms by
/// value (false when either side is undefined).
pub fn satisfies(s: &SeedSet, lit: &GLiteral) -> Result<bool, EvalError> {
    if lit.classification() == Classification::Seed {
        return Ok(s.contains(lit));
    }
    let GLiteral::Cmp { op, lhs, rhs } = lit else { unreachable!() };
    match (val(lhs, s)?, val(rhs, s)?) {
        (Value::Defined(a), Value::Defined(b)) => compare_defined(*op, &a, &b),
        _ => Ok(false),
    }
}

/// Satisfaction of an extended literal `l` or `not l`.
pub fn satisfies_extended(s: &SeedSet, naf: bool, lit: &GLiteral) -> Result<bool, EvalError> {
    let sat = satisfies(s, lit)?;
    Ok(if naf { !sat } else { sat })
}

/// Satisfaction of a rule body: every positive literal holds and every
/// negated one does not.
pub fn body_satisfied(
    s: &SeedSet,
    pos: &[GLiteral],
    neg: &[GLiteral],
) -> Result<bool, EvalError> {
    for l in pos {
        if !satisfies(s, l)? {
            return Ok(false);
        }
    }
    for l in neg {
        if satisfies(s, l)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The reduct w.r.t. `s`: rules whose negative part is satisfied (no `not l`
/// with `s ⊨ l`), with the negative part removed.
pub fn reduct(rules: &[GroundRule], s: &SeedSet) -> Result<Vec<GroundRule>, EvalError> {
    let mut out = Vec::new();
    for r in rules {
        let mut keep = true;
        for l in &r.neg {
            if satisfies(s, l)? {
                keep = false;
                break;
            }
        }
        if keep {
            out.push(GroundRule { neg: Vec::new(), ..r.clone() });
        }
    }
    Ok(out)
}

/// Outcome of positive-program evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum PositiveResult {
    Consistent(SeedSet),
    /// No answer set: a constraint fired or two conflicting seed literals
    /// were derived. The string describes the clash.
    Inconsistent(String),
}

/// The unique answer set of a positive ground program, computed as the least
/// fixpoint of the closure operator starting from the empty set.
pub fn positive_answer_set(rules: &[GroundRule]) -> Result<PositiveResult, EvalError> {
    let mut s = SeedSet::empty();
    loop {
        let mut changed = false;
        for r in rules {
            debug_assert!(r.neg.is_empty(), "positive evaluation requires a reduct");
            if !body_satisfied(&s, &r.pos, &[])? {
                continue;
            }
            if r.head.is_falsum() {
                return Ok(PositiveResult::Inconsistent(format!(
                    "constraint {} fires",
                    r.origin.tag()
                )));
            }
            match s.try_insert_mut(&r.head) {
                Ok(true) => changed = true,
                Ok(false) => {}
                Err(e) => return Ok(PositiveResult::Inconsistent(e.to_string())),
            }
        }
        if !changed {
            return Ok(PositiveResult::Consistent(s));
        }
    }
}

/// Whether all cardinality checks of `g` hold in `s`.
pub fn checks_hold(g: &GroundProgram, s: &SeedSet) -> Result<bool, EvalError> {
    for c in &g.checks {
        if body_satisfied(s, &c.pos, &c.neg)? {
            let n = c.candidates.iter().filter(|a| s.has_atom(a)).count() as u64;
            if n < c.lower || n > c.upper {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The answer-set test: `s` must reproduce itself as the unique answer set
/// of the reduct, and every cardinality check must hold.
pub fn is_answer_set(g: &GroundProgram, s: &SeedSet) -> Result<bool, EvalError> {
    if s.has_falsum() {
        return Ok(false);
    }
    let r = reduct(&g.rules, s)?;
    match positive_answer_set(&r)? {
        PositiveResult::Consistent(f) if f == *s => checks_hold(g, s),
        _ => Ok(false),
    }
}
