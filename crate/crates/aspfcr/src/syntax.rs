//! Abstract syntax for logic programs over partial, non-Herbrand functions.
//!
//! A program is built from relation atoms `p(c1,...,cn)`, simple function
//! terms `f(c1,...,cn)`, arithmetic terms over those, and comparison atoms
//! (t-atoms) `t1 op t2` with `op` in `= != < <= > >=`. A t-atom of the shape
//! `f = v` (simple term on the left, constant on the right) is a *seed*
//! t-atom: it can be made true by putting it into an interpretation. Every
//! other t-atom is *dependent*: its truth is computed from the values the
//! seed literals assign. Rule heads are restricted to seed literals; `:-`
//! constraints are desugared onto a reserved falsum atom.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Reserved nullary atom used as the head of desugared constraints.
/// The leading `#` keeps it outside the identifier grammar, so source
/// programs can never declare or mention it.
pub const FALSUM: &str = "#false";

/// Prefix for generated complement atoms of choice-rule candidates.
pub const CHOICE_OUT_PREFIX: &str = "#out_";

/// True for generated atoms that never appear in printed models.
pub fn is_hidden_name(name: &str) -> bool {
    name.starts_with('#')
}

/// A ground value: integer, symbolic constant, or a symbolic record such as
/// `volume(a)` built by instantiating a constructor over further constants.
/// Records have no term algebra; they are opaque names with visible structure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constant {
    Int(i64),
    Sym(String),
    Record(String, Vec<Constant>),
}

impl Constant {
    pub fn is_numeric(&self) -> bool {
        matches!(self, Constant::Int(_))
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Int(n) => write!(f, "{n}"),
            Constant::Sym(s) => write!(f, "{s}"),
            Constant::Record(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Binary arithmetic operators. Division is integer division truncating
/// toward zero; division by zero has no value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }
}

/// Comparison operators usable in t-atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    /// True for the order comparisons, which are only defined on integers.
    pub fn is_order(self) -> bool {
        matches!(self, CmpOp::Lt | CmpOp::Le | CmpOp::Gt | CmpOp::Ge)
    }
}

/// A term: constant, variable, simple function term, or arithmetic
/// combination. Arguments of simple terms may themselves be arithmetic or
/// record expressions; grounding folds them down to constants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(Constant),
    Var(String),
    Simple { name: String, args: Vec<Term> },
    Neg(Box<Term>),
    Abs(Box<Term>),
    Bin { op: ArithOp, lhs: Box<Term>, rhs: Box<Term> },
}

impl Term {
    pub fn int(n: i64) -> Term {
        Term::Const(Constant::Int(n))
    }

    pub fn sym(s: &str) -> Term {
        Term::Const(Constant::Sym(s.to_string()))
    }

    pub fn var(v: &str) -> Term {
        Term::Var(v.to_string())
    }

    pub fn simple(name: &str, args: Vec<Term>) -> Term {
        Term::Simple { name: name.to_string(), args }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Const(_) => true,
            Term::Var(_) => false,
            Term::Simple { args, .. } => args.iter().all(Term::is_ground),
            Term::Neg(t) | Term::Abs(t) => t.is_ground(),
            Term::Bin { lhs, rhs, .. } => lhs.is_ground() && rhs.is_ground(),
        }
    }

    /// Collects variable names into `out`, preserving first-occurrence order.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Const(_) => {}
            Term::Var(v) => {
                if !out.iter().any(|x| x == v) {
                    out.push(v.clone());
                }
            }
            Term::Simple { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Neg(t) | Term::Abs(t) => t.collect_vars(out),
            Term::Bin { lhs, rhs, .. } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Bin { op: ArithOp::Add | ArithOp::Sub, .. } => 1,
            Term::Bin { op: ArithOp::Mul | ArithOp::Div, .. } => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Simple { name, args } => {
                write!(f, "{name}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            Term::Neg(t) => {
                if t.precedence() == 3 {
                    write!(f, "-{t}")
                } else {
                    write!(f, "-({t})")
                }
            }
            Term::Abs(t) => write!(f, "|{t}|"),
            Term::Bin { op, lhs, rhs } => {
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

/// A relation atom `p(t1,...,tn)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(name: &str, args: Vec<Term>) -> Atom {
        Atom { name: name.to_string(), args }
    }

    pub fn falsum() -> Atom {
        Atom { name: FALSUM.to_string(), args: Vec::new() }
    }

    pub fn is_falsum(&self) -> bool {
        self.name == FALSUM
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Term::Simple { name: self.name.clone(), args: self.args.clone() })
    }
}

/// A literal: a relation atom with optional strong negation, or a t-atom
/// comparing two terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    /// `p(...)` or `-p(...)`; `strong_neg` marks the latter.
    Reg { strong_neg: bool, atom: Atom },
    /// `t1 op t2`.
    Cmp { op: CmpOp, lhs: Term, rhs: Term },
}

impl Literal {
    pub fn pos_atom(atom: Atom) -> Literal {
        Literal::Reg { strong_neg: false, atom }
    }

    pub fn neg_atom(atom: Atom) -> Literal {
        Literal::Reg { strong_neg: true, atom }
    }

    pub fn cmp(op: CmpOp, lhs: Term, rhs: Term) -> Literal {
        Literal::Cmp { op, lhs, rhs }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Literal::Reg { atom, .. } => atom.is_ground(),
            Literal::Cmp { lhs, rhs, .. } => lhs.is_ground() && rhs.is_ground(),
        }
    }

    pub fn is_falsum(&self) -> bool {
        matches!(self, Literal::Reg { strong_neg: false, atom } if atom.is_falsum())
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Literal::Reg { atom, .. } => atom.args.iter().for_each(|a| a.collect_vars(out)),
            Literal::Cmp { lhs, rhs, .. } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Reg { strong_neg, atom } => {
                if *strong_neg {
                    write!(f, "-")?;
                }
                write!(f, "{atom}")
            }
            Literal::Cmp { op, lhs, rhs } => write!(f, "{lhs}{}{rhs}", op.symbol()),
        }
    }
}

/// Seed/dependent split of literals. Regular literals and t-atoms of the
/// shape `simple-term = constant` are seed literals: an interpretation makes
/// them true by containing them. All other t-atoms are dependent: their truth
/// is evaluated from assigned values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Seed,
    Dependent,
}

/// Classifies a literal. Classification is total and is meant for ground
/// literals; a non-ground t-atom classifies as dependent unless it already
/// has the `simple-term = constant` shape, so folding arguments first (as the
/// grounder does) never flips a seed into a dependent.
pub fn classify(lit: &Literal) -> Classification {
    match lit {
        Literal::Reg { .. } => Classification::Seed,
        Literal::Cmp { op: CmpOp::Eq, lhs: Term::Simple { .. }, rhs: Term::Const(_) } => {
            Classification::Seed
        }
        Literal::Cmp { .. } => Classification::Dependent,
    }
}

/// Regular rule vs consistency-restoring rule (`:+`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Regular,
    Cr,
}

/// A rule `head :- pos, not neg.` (or `head :+ ...` for cr-rules).
/// Constraints carry the falsum head installed by [`desugar_constraint`].
#[derive(Debug, Clone)]
pub struct Rule {
    pub head: Literal,
    pub pos: Vec<Literal>,
    pub neg: Vec<Literal>,
    pub kind: RuleKind,
    /// 1-based source line of the rule, 0 for synthesized rules.
    pub line: u32,
}

impl Rule {
    pub fn fact(head: Literal) -> Rule {
        Rule { head, pos: Vec::new(), neg: Vec::new(), kind: RuleKind::Regular, line: 0 }
    }

    /// True when this rule was produced by [`desugar_constraint`].
    pub fn is_constraint(&self) -> bool {
        self.head.is_falsum()
    }

    pub fn collect_vars(&self) -> Vec<String> {
        let mut vars = Vec::new();
        self.head.collect_vars(&mut vars);
        for l in self.pos.iter().chain(self.neg.iter()) {
            l.collect_vars(&mut vars);
        }
        vars
    }
}

// Source lines are provenance, not meaning; rule equality ignores them.
impl PartialEq for Rule {
    fn eq(&self, other: &Rule) -> bool {
        self.head == other.head
            && self.pos == other.pos
            && self.neg == other.neg
            && self.kind == other.kind
    }
}

impl Eq for Rule {}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.kind {
            RuleKind::Regular => ":-",
            RuleKind::Cr => ":+",
        };
        if self.is_constraint() {
            write!(f, ":- ")?;
            write_body(f, &self.pos, self.neg.iter().filter(|l| !l.is_falsum()))?;
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
        write_body(f, &self.pos, self.neg.iter())?;
        write!(f, ".")
    }
}

fn write_body<'a>(
    f: &mut fmt::Formatter<'_>,
    pos: &[Literal],
    neg: impl Iterator<Item = &'a Literal>,
) -> fmt::Result {
    let mut first = true;
    for l in pos {
        if !first {
            write!(f, ", ")?;
        }
        first = false;
        write!(f, "{l}")?;
    }
    for l in neg {
        if !first {
            write!(f, ", ")?;
        }
        first = false;
        write!(f, "not {l}")?;
    }
    Ok(())
}

/// One element of a choice rule: an atom schema with its local conditions
/// (regular literals that bind locals, or comparison guards that restrict
/// them).
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceElement {
    pub schema: Atom,
    pub conds: Vec<Literal>,
}

impl fmt::Display for ChoiceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.schema)?;
        for c in &self.conds {
            write!(f, " : {c}")?;
        }
        Ok(())
    }
}

/// A cardinality choice `L { elem ; ... } U :- body.`
#[derive(Debug, Clone)]
pub struct ChoiceRule {
    pub lower: u64,
    pub upper: u64,
    pub elements: Vec<ChoiceElement>,
    pub pos: Vec<Literal>,
    pub neg: Vec<Literal>,
    pub line: u32,
}

impl PartialEq for ChoiceRule {
    fn eq(&self, other: &ChoiceRule) -> bool {
        self.lower == other.lower
            && self.upper == other.upper
            && self.elements == other.elements
            && self.pos == other.pos
            && self.neg == other.neg
    }
}

impl fmt::Display for ChoiceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{ ", self.lower)?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{e}")?;
        }
        if self.elements.is_empty() {
            // keep `{ }` parseable
        }
        write!(f, "}} {}", self.upper)?;
        if !self.pos.is_empty() || !self.neg.is_empty() {
            write!(f, " :- ")?;
            write_body(f, &self.pos, self.neg.iter())?;
        }
        write!(f, ".")
    }
}

/// One program statement in source order.
#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Rule(Rule),
    Choice(ChoiceRule),
    /// `#show name/arity.`
    Show(String, usize),
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Rule(r) => write!(f, "{r}"),
            Statement::Choice(c) => write!(f, "{c}"),
            Statement::Show(name, arity) => write!(f, "#show {name}/{arity}."),
        }
    }
}

/// A parsed program: statements in source order plus the collected signature.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub statements: Vec<Statement>,
    pub signature: Signature,
}

impl Program {
    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Rule(r) => Some(r),
            _ => None,
        })
    }

    pub fn choices(&self) -> impl Iterator<Item = &ChoiceRule> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Choice(c) => Some(c),
            _ => None,
        })
    }

    /// `#show` filters in source order; empty means "show everything".
    pub fn shows(&self) -> Vec<(String, usize)> {
        self.statements
            .iter()
            .filter_map(|s| match s {
                Statement::Show(n, a) => Some((n.clone(), *a)),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// The signature of a program: constants, function symbols, and relation
/// symbols, the latter two as name/arity pairs. Record constructors are
/// tracked separately so their names join the disjointness check.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Signature {
    pub constants: BTreeSet<Constant>,
    pub functions: BTreeSet<(String, usize)>,
    pub relations: BTreeSet<(String, usize)>,
    pub constructors: BTreeSet<(String, usize)>,
}

/// Errors raised while building a signature.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignatureError {
    #[error("line {line}: {name} used as {role_a} and as {role_b}")]
    RoleClash { name: String, role_a: &'static str, role_b: &'static str, line: u32 },
    #[error("line {line}: {name} used with arities {a} and {b}")]
    ArityClash { name: String, a: usize, b: usize, line: u32 },
    #[error("line {line}: {name} is a reserved name")]
    Reserved { name: String, line: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Role {
    ConstantSym,
    Function,
    Relation,
    Constructor,
}

impl Role {
    fn label(self) -> &'static str {
        match self {
            Role::ConstantSym => "a constant",
            Role::Function => "a function symbol",
            Role::Relation => "a relation symbol",
            Role::Constructor => "a record constructor",
        }
    }
}

/// Collects the signature of a program, rejecting name reuse across roles,
/// conflicting arities, and reserved names. Generated atoms (falsum, choice
/// complements) are exempt from the reserved-name check when `internal`
/// names are expected to be present, which is the case for ground programs;
/// at the source level the parser cannot produce them.
pub fn collect_signature(program: &Program) -> Result<Signature, SignatureError> {
    let mut b = SignatureBuilder::default();
    for stmt in &program.statements {
        match stmt {
            Statement::Rule(r) => b.rule(r)?,
            Statement::Choice(c) => b.choice(c)?,
            Statement::Show(_, _) => {}
        }
    }
    Ok(b.sig)
}

/// Incremental signature builder shared by the parser and the grounder.
#[derive(Debug, Default)]
pub struct SignatureBuilder {
    pub sig: Signature,
    roles: BTreeMap<String, (Role, usize, u32)>,
}

impl SignatureBuilder {
    pub fn rule(&mut self, r: &Rule) -> Result<(), SignatureError> {
        self.literal(&r.head, r.line)?;
        for l in r.pos.iter().chain(r.neg.iter()) {
            self.literal(l, r.line)?;
        }
        Ok(())
    }

    pub fn choice(&mut self, c: &ChoiceRule) -> Result<(), SignatureError> {
        for e in &c.elements {
            self.atom(&e.schema, c.line)?;
            for l in &e.conds {
                self.literal(l, c.line)?;
            }
        }
        for l in c.pos.iter().chain(c.neg.iter()) {
            self.literal(l, c.line)?;
        }
        Ok(())
    }

    pub fn literal(&mut self, lit: &Literal, line: u32) -> Result<(), SignatureError> {
        match lit {
            Literal::Reg { atom, .. } => self.atom(atom, line),
            Literal::Cmp { lhs, rhs, .. } => {
                self.top_term(lhs, line)?;
                self.top_term(rhs, line)
            }
        }
    }

    fn atom(&mut self, atom: &Atom, line: u32) -> Result<(), SignatureError> {
        if !is_hidden_name(&atom.name) {
            self.claim(&atom.name, Role::Relation, atom.args.len(), line)?;
            self.sig.relations.insert((atom.name.clone(), atom.args.len()));
        }
        for a in &atom.args {
            self.arg_term(a, line)?;
        }
        Ok(())
    }

    /// A term at t-atom top level: an applied name is a function symbol.
    fn top_term(&mut self, t: &Term, line: u32) -> Result<(), SignatureError> {
        match t {
            Term::Const(c) => self.constant(c, line),
            Term::Var(_) => Ok(()),
            Term::Simple { name, args } => {
                self.claim(name, Role::Function, args.len(), line)?;
                self.sig.functions.insert((name.clone(), args.len()));
                for a in args {
                    self.arg_term(a, line)?;
                }
                Ok(())
            }
            Term::Neg(x) | Term::Abs(x) => self.top_term(x, line),
            Term::Bin { lhs, rhs, .. } => {
                self.top_term(lhs, line)?;
                self.top_term(rhs, line)
            }
        }
    }

    /// A term in argument position: an applied name is a record constructor.
    fn arg_term(&mut self, t: &Term, line: u32) -> Result<(), SignatureError> {
        match t {
            Term::Const(c) => self.constant(c, line),
            Term::Var(_) => Ok(()),
            Term::Simple { name, args } => {
                self.claim(name, Role::Constructor, args.len(), line)?;
                self.sig.constructors.insert((name.clone(), args.len()));
                for a in args {
                    self.arg_term(a, line)?;
                }
                Ok(())
            }
            Term::Neg(x) | Term::Abs(x) => self.arg_term(x, line),
            Term::Bin { lhs, rhs, .. } => {
                self.arg_term(lhs, line)?;
                self.arg_term(rhs, line)
            }
        }
    }

    fn constant(&mut self, c: &Constant, line: u32) -> Result<(), SignatureError> {
        match c {
            Constant::Int(_) => {
                self.sig.constants.insert(c.clone());
                Ok(())
            }
            Constant::Sym(s) => {
                self.claim(s, Role::ConstantSym, 0, line)?;
                self.sig.constants.insert(c.clone());
                Ok(())
            }
            Constant::Record(name, args) => {
                self.claim(name, Role::Constructor, args.len(), line)?;
                self.sig.constructors.insert((name.clone(), args.len()));
                self.sig.constants.insert(c.clone());
                for a in args {
                    self.constant(a, line)?;
                }
                Ok(())
            }
        }
    }

    fn claim(&mut self, name: &str, role: Role, arity: usize, line: u32) -> Result<(), SignatureError> {
        if is_hidden_name(name) {
            return Err(SignatureError::Reserved { name: name.to_string(), line });
        }
        match self.roles.get(name) {
            None => {
                self.roles.insert(name.to_string(), (role, arity, line));
                Ok(())
            }
            Some(&(r, a, _)) if r == role => {
                if a == arity {
                    Ok(())
                } else {
                    Err(SignatureError::ArityClash {
                        name: name.to_string(),
                        a: a.min(arity),
                        b: a.max(arity),
                        line,
                    })
                }
            }
            Some(&(r, _, _)) => Err(SignatureError::RoleClash {
                name: name.to_string(),
                role_a: r.min(role).label(),
                role_b: r.max(role).label(),
                line,
            }),
        }
    }
}

/// Errors raised by [`desugar_constraint`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesugarError {
    #[error("line {0}: constraint with an empty body")]
    EmptyBody(u32),
}

/// Turns a headless constraint body into a regular rule
/// `#false :- pos, not neg, not #false.`
pub fn desugar_constraint(
    pos: Vec<Literal>,
    mut neg: Vec<Literal>,
    kind: RuleKind,
    line: u32,
) -> Result<Rule, DesugarError> {
    if pos.is_empty() && neg.is_empty() {
        return Err(DesugarError::EmptyBody(line));
    }
    neg.push(Literal::pos_atom(Atom::falsum()));
    Ok(Rule { head: Literal::pos_atom(Atom::falsum()), pos, neg, kind, line })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f_eq_const(name: &str, v: i64) -> Literal {
        Literal::cmp(CmpOp::Eq, Term::simple(name, vec![]), Term::int(v))
    }

    #[test]
    fn classify_seed_equality() {
        assert_eq!(classify(&f_eq_const("f", 3)), Classification::Seed);
    }

    #[test]
    fn classify_disequality_is_dependent() {
        let l = Literal::cmp(CmpOp::Ne, Term::simple("f", vec![]), Term::simple("h", vec![]));
        assert_eq!(classify(&l), Classification::Dependent);
    }

    #[test]
    fn classify_arithmetic_comparison_is_dependent() {
        // (f+g)/2 = 4
        let sum = Term::Bin {
            op: ArithOp::Add,
            lhs: Box::new(Term::simple("f", vec![])),
            rhs: Box::new(Term::simple("g", vec![])),
        };
        let avg = Term::Bin { op: ArithOp::Div, lhs: Box::new(sum), rhs: Box::new(Term::int(2)) };
        let l = Literal::cmp(CmpOp::Eq, avg, Term::int(4));
        assert_eq!(classify(&l), Classification::Dependent);
    }

    #[test]
    fn classify_regular_literals_are_seed() {
        let a = Literal::pos_atom(Atom::new("p", vec![Term::sym("a")]));
        let n = Literal::neg_atom(Atom::new("p", vec![Term::sym("a")]));
        assert_eq!(classify(&a), Classification::Seed);
        assert_eq!(classify(&n), Classification::Seed);
    }

    #[test]
    fn classify_constant_on_left_is_dependent() {
        let l = Literal::cmp(CmpOp::Eq, Term::int(3), Term::simple("f", vec![]));
        assert_eq!(classify(&l), Classification::Dependent);
    }

    #[test]
    fn desugar_installs_falsum_head_and_guard() {
        let body = vec![f_eq_const("f", 1)];
        let r = desugar_constraint(body.clone(), vec![], RuleKind::Regular, 7).unwrap();
        assert!(r.is_constraint());
        assert_eq!(r.pos, body);
        assert_eq!(r.neg, vec![Literal::pos_atom(Atom::falsum())]);
        // falsum appears in the head and in neg, nowhere else
        assert!(r.pos.iter().all(|l| !l.is_falsum()));
    }

    #[test]
    fn desugar_rejects_empty_body() {
        assert_eq!(
            desugar_constraint(vec![], vec![], RuleKind::Regular, 3),
            Err(DesugarError::EmptyBody(3))
        );
    }

    #[test]
    fn desugared_constraint_prints_as_constraint() {
        let r = desugar_constraint(
            vec![Literal::pos_atom(Atom::new("p", vec![]))],
            vec![Literal::pos_atom(Atom::new("q", vec![]))],
            RuleKind::Regular,
            1,
        )
        .unwrap();
        assert_eq!(r.to_string(), ":- p, not q.");
    }

    #[test]
    fn signature_collects_three_sets() {
        // p(a) :- f(a)=3, not q.
        let rule = Rule {
            head: Literal::pos_atom(Atom::new("p", vec![Term::sym("a")])),
            pos: vec![Literal::cmp(
                CmpOp::Eq,
                Term::simple("f", vec![Term::sym("a")]),
                Term::int(3),
            )],
            neg: vec![Literal::pos_atom(Atom::new("q", vec![]))],
            kind: RuleKind::Regular,
            line: 1,
        };
        let prog = Program { statements: vec![Statement::Rule(rule)], signature: Signature::default() };
        let sig = collect_signature(&prog).unwrap();
        assert!(sig.constants.contains(&Constant::Sym("a".into())));
        assert!(sig.constants.contains(&Constant::Int(3)));
        assert!(sig.functions.contains(&("f".into(), 1)));
        assert!(sig.relations.contains(&("p".into(), 1)));
        assert!(sig.relations.contains(&("q".into(), 0)));
    }

    #[test]
    fn signature_rejects_relation_arity_clash() {
        // p(a). p(a,b).
        let r1 = Rule::fact(Literal::pos_atom(Atom::new("p", vec![Term::sym("a")])));
        let r2 = Rule::fact(Literal::pos_atom(Atom::new(
            "p",
            vec![Term::sym("a"), Term::sym("b")],
        )));
        let prog = Program {
            statements: vec![Statement::Rule(r1), Statement::Rule(r2)],
            signature: Signature::default(),
        };
        assert!(matches!(
            collect_signature(&prog),
            Err(SignatureError::ArityClash { a: 1, b: 2, .. })
        ));
    }

    #[test]
    fn signature_rejects_function_relation_overlap() {
        // f(a). ... f(a)=3 ...
        let r1 = Rule::fact(Literal::pos_atom(Atom::new("f", vec![Term::sym("a")])));
        let r2 = Rule::fact(Literal::cmp(
            CmpOp::Eq,
            Term::simple("f", vec![Term::sym("a")]),
            Term::int(3),
        ));
        let prog = Program {
            statements: vec![Statement::Rule(r1), Statement::Rule(r2)],
            signature: Signature::default(),
        };
        assert!(matches!(collect_signature(&prog), Err(SignatureError::RoleClash { .. })));
    }

    #[test]
    fn signature_rejects_constant_relation_overlap() {
        // p. q(p).
        let r1 = Rule::fact(Literal::pos_atom(Atom::new("p", vec![])));
        let r2 = Rule::fact(Literal::pos_atom(Atom::new("q", vec![Term::sym("p")])));
        let prog = Program {
            statements: vec![Statement::Rule(r1), Statement::Rule(r2)],
            signature: Signature::default(),
        };
        assert!(matches!(collect_signature(&prog), Err(SignatureError::RoleClash { .. })));
    }

    #[test]
    fn signature_exempts_hidden_atoms_but_rejects_hidden_functions() {
        // desugared constraints route the falsum atom through the builder,
        // so hidden names are legal in relation position only
        let r = Rule::fact(Literal::pos_atom(Atom::new("#out_p", vec![])));
        let prog = Program { statements: vec![Statement::Rule(r)], signature: Signature::default() };
        assert!(collect_signature(&prog).is_ok());

        let f = Rule::fact(Literal::Cmp {
            op: CmpOp::Eq,
            lhs: Term::simple("#f", vec![]),
            rhs: Term::int(1),
        });
        let prog = Program { statements: vec![Statement::Rule(f)], signature: Signature::default() };
        assert!(matches!(collect_signature(&prog), Err(SignatureError::Reserved { .. })));
    }

    #[test]
    fn term_printing_respects_precedence() {
        // (f+g)/2
        let sum = Term::Bin {
            op: ArithOp::Add,
            lhs: Box::new(Term::simple("f", vec![])),
            rhs: Box::new(Term::simple("g", vec![])),
        };
        let avg = Term::Bin { op: ArithOp::Div, lhs: Box::new(sum), rhs: Box::new(Term::int(2)) };
        assert_eq!(avg.to_string(), "(f+g)/2");
        let abs = Term::Abs(Box::new(Term::Bin {
            op: ArithOp::Sub,
            lhs: Box::new(Term::simple("f", vec![])),
            rhs: Box::new(Term::simple("g", vec![])),
        }));
        assert_eq!(abs.to_string(), "|f-g|");
    }

    #[test]
    fn record_constants_render_with_structure() {
        let c = Constant::Record("volume".into(), vec![Constant::Sym("a".into())]);
        assert_eq!(c.to_string(), "volume(a)");
    }
}
