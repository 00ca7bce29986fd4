//! Recursive-descent parser for the rule language.
//!
//! Grammar sketch (statements end with `.`):
//!
//! ```text
//! statement := "#show" ident "/" int "."
//!            | int "{" [element (";" element)*] "}" int [":-" body] "."
//!            | ":-" body "."
//!            | head [(":-" | ":+") body] "."
//!            | head ":+" "."
//! element   := atom (":" literal)*
//! body      := ("not" literal | literal) ("," ...)*
//! literal   := term cmp term | ["-"] atom
//! term      := addition over mult over (int | ident | ident "(" args ")"
//!            | variable | "-" term | "|" term "|" | "(" term ")")
//! ```
//!
//! A lowercase name is a relation when it stands as an atom, a function when
//! it is applied on a comparison side, and a record constructor when it is
//! applied in argument position. A *bare* name on a comparison side is
//! ambiguous between a nullary function and a symbolic constant; it resolves
//! to whichever role the rest of the program gives it, defaulting to a
//! nullary function (so `f=2.` reads as assigning 2 to `f`).

pub mod lexer;

use std::fmt;

use thiserror::Error;

use crate::syntax::{
    classify, desugar_constraint, Atom, ChoiceElement, ChoiceRule, Classification, CmpOp,
    Constant, DesugarError, Literal, Program, Rule, RuleKind, Signature, SignatureBuilder,
    SignatureError, Statement, Term,
};
use lexer::{lex, Tok, Token};

/// A parse diagnostic pointing at a 1-based source position.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub message: String,
    pub line: u32,
    pub col: u32,
}

impl From<lexer::LexError> for ParseError {
    fn from(e: lexer::LexError) -> ParseError {
        ParseError { message: e.message, line: e.line, col: e.col }
    }
}

impl From<SignatureError> for ParseError {
    fn from(e: SignatureError) -> ParseError {
        let line = match &e {
            SignatureError::RoleClash { line, .. }
            | SignatureError::ArityClash { line, .. }
            | SignatureError::Reserved { line, .. } => *line,
        };
        ParseError { message: e.to_string(), line, col: 1 }
    }
}

impl From<DesugarError> for ParseError {
    fn from(e: DesugarError) -> ParseError {
        let DesugarError::EmptyBody(line) = e;
        ParseError { message: e.to_string(), line, col: 1 }
    }
}

/// Parses a program and collects its signature.
pub fn parse(text: &str) -> Result<Program, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut statements = Vec::new();
    while !p.at(&Tok::Eof) {
        statements.push(p.statement()?);
    }
    let mut program = Program { statements, signature: Signature::default() };
    resolve_bare_names(&mut program);
    validate_heads(&program)?;
    let mut sb = SignatureBuilder::default();
    for stmt in &program.statements {
        match stmt {
            Statement::Rule(r) => sb.rule(r)?,
            Statement::Choice(c) => sb.choice(c)?,
            Statement::Show(_, _) => {}
        }
    }
    program.signature = sb.sig;
    Ok(program)
}

/// Renders a program in canonical concrete syntax, one statement per line.
pub fn print(program: &Program) -> String {
    program.to_string()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek2(&self) -> &Token {
        &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)]
    }

    fn at(&self, t: &Tok) -> bool {
        &self.peek().tok == t
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<Token, ParseError> {
        if self.at(t) {
            Ok(self.bump())
        } else {
            Err(self.err_here(&format!("expected `{t}`, found `{}`", self.peek().tok)))
        }
    }

    fn err_here(&self, message: &str) -> ParseError {
        let t = self.peek();
        ParseError { message: message.to_string(), line: t.line, col: t.col }
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let start = self.peek().clone();
        match (&start.tok, &self.peek2().tok) {
            (Tok::Show, _) => self.show_directive(),
            (Tok::Int(_), Tok::LBrace) => self.choice_rule(start.line),
            (Tok::ColonDash, _) => {
                self.bump();
                let (pos, neg) = self.body()?;
                self.expect(&Tok::Dot)?;
                Ok(Statement::Rule(desugar_constraint(pos, neg, RuleKind::Regular, start.line)?))
            }
            _ => self.headed_rule(start.line),
        }
    }

    fn show_directive(&mut self) -> Result<Statement, ParseError> {
        self.expect(&Tok::Show)?;
        let name = match self.bump() {
            Token { tok: Tok::Ident(s), .. } => s,
            t => {
                return Err(ParseError {
                    message: format!("expected a name after #show, found `{}`", t.tok),
                    line: t.line,
                    col: t.col,
                })
            }
        };
        self.expect(&Tok::Slash)?;
        let arity = match self.bump() {
            Token { tok: Tok::Int(n), .. } if n >= 0 => n as usize,
            t => {
                return Err(ParseError {
                    message: "expected a nonnegative arity".to_string(),
                    line: t.line,
                    col: t.col,
                })
            }
        };
        self.expect(&Tok::Dot)?;
        Ok(Statement::Show(name, arity))
    }

    fn headed_rule(&mut self, line: u32) -> Result<Statement, ParseError> {
        let head = self.literal()?;
        let (kind, pos, neg) = if self.eat(&Tok::ColonDash) {
            let (pos, neg) = self.body()?;
            (RuleKind::Regular, pos, neg)
        } else if self.eat(&Tok::ColonPlus) {
            if self.at(&Tok::Dot) {
                (RuleKind::Cr, Vec::new(), Vec::new())
            } else {
                let (pos, neg) = self.body()?;
                (RuleKind::Cr, pos, neg)
            }
        } else {
            (RuleKind::Regular, Vec::new(), Vec::new())
        };
        self.expect(&Tok::Dot)?;
        Ok(Statement::Rule(Rule { head, pos, neg, kind, line }))
    }

    fn choice_rule(&mut self, line: u32) -> Result<Statement, ParseError> {
        let lower_tok = self.bump();
        let lower = match lower_tok.tok {
            Tok::Int(n) if n >= 0 => n as u64,
            _ => {
                return Err(ParseError {
                    message: "choice lower bound must be a nonnegative integer".to_string(),
                    line: lower_tok.line,
                    col: lower_tok.col,
                })
            }
        };
        self.expect(&Tok::LBrace)?;
        let mut elements = Vec::new();
        if !self.at(&Tok::RBrace) {
            loop {
                elements.push(self.choice_element()?);
                if !self.eat(&Tok::Semi) {
                    break;
                }
            }
        }
        self.expect(&Tok::RBrace)?;
        let upper_tok = self.bump();
        let upper = match upper_tok.tok {
            Tok::Int(n) if n >= 0 => n as u64,
            _ => {
                return Err(ParseError {
                    message: "choice upper bound must be a nonnegative integer".to_string(),
                    line: upper_tok.line,
                    col: upper_tok.col,
                })
            }
        };
        if lower > upper {
            return Err(ParseError {
                message: format!("choice bounds out of order: {lower} > {upper}"),
                line: upper_tok.line,
                col: upper_tok.col,
            });
        }
        let (pos, neg) = if self.eat(&Tok::ColonDash) { self.body()? } else { (Vec::new(), Vec::new()) };
        self.expect(&Tok::Dot)?;
        Ok(Statement::Choice(ChoiceRule { lower, upper, elements, pos, neg, line }))
    }

    fn choice_element(&mut self) -> Result<ChoiceElement, ParseError> {
        let lit = self.literal()?;
        let schema = match lit {
            Literal::Reg { strong_neg: false, atom } => atom,
            _ => return Err(self.err_here("choice candidate must be a plain atom")),
        };
        let mut conds = Vec::new();
        while self.eat(&Tok::Colon) {
            if self.at(&Tok::Not) {
                return Err(self.err_here("`not` is not allowed in a choice condition"));
            }
            conds.push(self.literal()?);
        }
        Ok(ChoiceElement { schema, conds })
    }

    fn body(&mut self) -> Result<(Vec<Literal>, Vec<Literal>), ParseError> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        loop {
            if self.eat(&Tok::Not) {
                neg.push(self.literal()?);
            } else {
                pos.push(self.literal()?);
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok((pos, neg))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        // Try `term cmp term` first; fall back to a regular literal.
        let save = self.pos;
        if let Ok(lhs) = self.term() {
            if let Some(op) = self.cmp_op() {
                let rhs = self.term()?;
                return Ok(Literal::Cmp { op, lhs, rhs });
            }
        }
        self.pos = save;
        let strong_neg = self.eat(&Tok::Minus);
        let atom = self.atom()?;
        Ok(Literal::Reg { strong_neg, atom })
    }

    fn cmp_op(&mut self) -> Option<CmpOp> {
        let op = match self.peek().tok {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return None,
        };
        self.bump();
        Some(op)
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let t = self.bump();
        let name = match t.tok {
            Tok::Ident(s) => s,
            other => {
                return Err(ParseError {
                    message: format!("expected an atom, found `{other}`"),
                    line: t.line,
                    col: t.col,
                })
            }
        };
        let args = if self.eat(&Tok::LParen) {
            let args = self.args()?;
            self.expect(&Tok::RParen)?;
            args
        } else {
            Vec::new()
        };
        Ok(Atom { name, args })
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        loop {
            args.push(self.term()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.mul_term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => crate::syntax::ArithOp::Add,
                Tok::Minus => crate::syntax::ArithOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.mul_term()?;
            t = Term::Bin { op, lhs: Box::new(t), rhs: Box::new(rhs) };
        }
        Ok(t)
    }

    fn mul_term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.unary_term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => crate::syntax::ArithOp::Mul,
                Tok::Slash => crate::syntax::ArithOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary_term()?;
            t = Term::Bin { op, lhs: Box::new(t), rhs: Box::new(rhs) };
        }
        Ok(t)
    }

    fn unary_term(&mut self) -> Result<Term, ParseError> {
        if self.eat(&Tok::Minus) {
            let inner = self.unary_term()?;
            // fold a negated integer literal into a negative constant
            if let Term::Const(Constant::Int(n)) = inner {
                return Ok(Term::Const(Constant::Int(-n)));
            }
            return Ok(Term::Neg(Box::new(inner)));
        }
        if self.eat(&Tok::Pipe) {
            let inner = self.term()?;
            self.expect(&Tok::Pipe)?;
            return Ok(Term::Abs(Box::new(inner)));
        }
        self.primary_term()
    }

    fn primary_term(&mut self) -> Result<Term, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => Ok(Term::Const(Constant::Int(n))),
            Tok::Var(v) => Ok(Term::Var(v)),
            Tok::Ident(name) => {
                if self.eat(&Tok::LParen) {
                    let args = self.args()?;
                    self.expect(&Tok::RParen)?;
                    Ok(Term::Simple { name, args })
                } else {
                    Ok(Term::Const(Constant::Sym(name)))
                }
            }
            Tok::LParen => {
                let inner = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            other => Err(ParseError {
                message: format!("expected a term, found `{other}`"),
                line: t.line,
                col: t.col,
            }),
        }
    }
}

/// Role evidence for bare lowercase names: seen in argument position
/// (constant) vs applied on a comparison side or coerced in a seed head
/// (nullary function).
#[derive(Default)]
struct Evidence {
    constants: std::collections::BTreeSet<String>,
    functions: std::collections::BTreeSet<String>,
}

fn resolve_bare_names(program: &mut Program) {
    // Seed heads are unambiguous: `f=2.` can only assign to a function.
    for stmt in &mut program.statements {
        if let Statement::Rule(r) = stmt {
            if let Literal::Cmp { op: CmpOp::Eq, lhs, .. } = &mut r.head {
                if let Term::Const(Constant::Sym(s)) = lhs {
                    *lhs = Term::Simple { name: s.clone(), args: Vec::new() };
                }
            }
        }
    }
    let mut ev = Evidence::default();
    for stmt in &program.statements {
        match stmt {
            Statement::Rule(r) => {
                evidence_literal(&r.head, true, &mut ev);
                for l in r.pos.iter().chain(r.neg.iter()) {
                    evidence_literal(l, false, &mut ev);
                }
            }
            Statement::Choice(c) => {
                for e in &c.elements {
                    for a in &e.schema.args {
                        evidence_arg(a, &mut ev);
                    }
                    for l in &e.conds {
                        evidence_literal(l, false, &mut ev);
                    }
                }
                for l in c.pos.iter().chain(c.neg.iter()) {
                    evidence_literal(l, false, &mut ev);
                }
            }
            Statement::Show(_, _) => {}
        }
    }
    let coerce = |t: &mut Term| coerce_tops(t, &ev);
    for stmt in &mut program.statements {
        match stmt {
            Statement::Rule(r) => {
                for l in r.pos.iter_mut().chain(r.neg.iter_mut()) {
                    if let Literal::Cmp { lhs, rhs, .. } = l {
                        coerce(lhs);
                        coerce(rhs);
                    }
                }
            }
            Statement::Choice(c) => {
                for e in &mut c.elements {
                    for l in &mut e.conds {
                        if let Literal::Cmp { lhs, rhs, .. } = l {
                            coerce(lhs);
                            coerce(rhs);
                        }
                    }
                }
                for l in c.pos.iter_mut().chain(c.neg.iter_mut()) {
                    if let Literal::Cmp { lhs, rhs, .. } = l {
                        coerce(lhs);
                        coerce(rhs);
                    }
                }
            }
            Statement::Show(_, _) => {}
        }
    }
}

fn evidence_literal(lit: &Literal, is_seed_head: bool, ev: &mut Evidence) {
    match lit {
        Literal::Reg { atom, .. } => {
            for a in &atom.args {
                evidence_arg(a, ev);
            }
        }
        Literal::Cmp { lhs, rhs, .. } => {
            evidence_top(lhs, ev);
            if is_seed_head {
                // head right side is a value position
                if let Term::Const(Constant::Sym(s)) = rhs {
                    ev.constants.insert(s.clone());
                }
                for v in collect_arg_terms(rhs) {
                    evidence_arg(&v, ev);
                }
            } else {
                evidence_top(rhs, ev);
            }
        }
    }
}

fn collect_arg_terms(t: &Term) -> Vec<Term> {
    match t {
        Term::Simple { args, .. } => args.clone(),
        Term::Neg(x) | Term::Abs(x) => collect_arg_terms(x),
        Term::Bin { lhs, rhs, .. } => {
            let mut v = collect_arg_terms(lhs);
            v.extend(collect_arg_terms(rhs));
            v
        }
        _ => Vec::new(),
    }
}

fn evidence_top(t: &Term, ev: &mut Evidence) {
    match t {
        Term::Simple { name, args } => {
            if !args.is_empty() {
                ev.functions.insert(name.clone());
            }
            for a in args {
                evidence_arg(a, ev);
            }
        }
        Term::Neg(x) | Term::Abs(x) => evidence_top(x, ev),
        Term::Bin { lhs, rhs, .. } => {
            evidence_top(lhs, ev);
            evidence_top(rhs, ev);
        }
        Term::Const(_) | Term::Var(_) => {}
    }
}

fn evidence_arg(t: &Term, ev: &mut Evidence) {
    match t {
        Term::Const(Constant::Sym(s)) => {
            ev.constants.insert(s.clone());
        }
        Term::Const(_) | Term::Var(_) => {}
        Term::Simple { args, .. } => {
            for a in args {
                evidence_arg(a, ev);
            }
        }
        Term::Neg(x) | Term::Abs(x) => evidence_arg(x, ev),
        Term::Bin { lhs, rhs, .. } => {
            evidence_arg(lhs, ev);
            evidence_arg(rhs, ev);
        }
    }
}

/// Rewrites bare symbols on comparison sides into nullary function terms
/// unless the program uses them as constants elsewhere.
fn coerce_tops(t: &mut Term, ev: &Evidence) {
    match t {
        Term::Const(Constant::Sym(s)) => {
            if ev.functions.contains(s) || !ev.constants.contains(s) {
                *t = Term::Simple { name: s.clone(), args: Vec::new() };
            }
        }
        Term::Neg(x) | Term::Abs(x) => coerce_tops(x, ev),
        Term::Bin { lhs, rhs, .. } => {
            coerce_tops(lhs, ev);
            coerce_tops(rhs, ev);
        }
        Term::Const(_) | Term::Var(_) | Term::Simple { .. } => {}
    }
}

fn validate_heads(program: &Program) -> Result<(), ParseError> {
    for stmt in &program.statements {
        let Statement::Rule(r) = stmt else { continue };
        if r.head.is_falsum() {
            continue;
        }
        match &r.head {
            Literal::Reg { .. } => {}
            Literal::Cmp { op, lhs, rhs } => {
                let shape_ok = *op == CmpOp::Eq
                    && matches!(lhs, Term::Simple { .. })
                    && !contains_simple(rhs);
                if !shape_ok {
                    return Err(ParseError {
                        message: format!("head `{}` is not a seed literal", r.head),
                        line: r.line,
                        col: 1,
                    });
                }
                // a ground constant head must already classify as seed
                if r.head.is_ground() && rhs_is_plain_const(rhs) {
                    debug_assert_eq!(classify(&r.head), Classification::Seed);
                }
            }
        }
    }
    Ok(())
}

fn rhs_is_plain_const(t: &Term) -> bool {
    matches!(t, Term::Const(_))
}

fn contains_simple(t: &Term) -> bool {
    match t {
        Term::Simple { .. } => true,
        Term::Neg(x) | Term::Abs(x) => contains_simple(x),
        Term::Bin { lhs, rhs, .. } => contains_simple(lhs) || contains_simple(rhs),
        Term::Const(_) | Term::Var(_) => false,
    }
}

impl fmt::Debug for Parser {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Parser@{}", self.pos)
    }
}
