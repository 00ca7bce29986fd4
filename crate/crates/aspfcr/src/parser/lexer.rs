//! Tokenizer for the concrete rule syntax. Tracks line/column positions so
//! parse diagnostics can point into the source. `%` starts a line comment.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase identifier: constant, function, relation, or constructor.
    Ident(String),
    /// Uppercase identifier: a variable.
    Var(String),
    Int(i64),
    Show,
    Not,
    ColonDash,
    ColonPlus,
    Colon,
    Dot,
    Comma,
    Semi,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
    Plus,
    Minus,
    Star,
    Slash,
    Pipe,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Var(s) => write!(f, "{s}"),
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Show => write!(f, "#show"),
            Tok::Not => write!(f, "not"),
            Tok::ColonDash => write!(f, ":-"),
            Tok::ColonPlus => write!(f, ":+"),
            Tok::Colon => write!(f, ":"),
            Tok::Dot => write!(f, "."),
            Tok::Comma => write!(f, ","),
            Tok::Semi => write!(f, ";"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::Eq => write!(f, "="),
            Tok::Ne => write!(f, "!="),
            Tok::Le => write!(f, "<="),
            Tok::Lt => write!(f, "<"),
            Tok::Ge => write!(f, ">="),
            Tok::Gt => write!(f, ">"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Slash => write!(f, "/"),
            Tok::Pipe => write!(f, "|"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

/// A token with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct LexError {
    pub message: String,
    pub line: u32,
    pub col: u32,
}

/// Tokenizes `text`, appending a final `Eof` token.
pub fn lex(text: &str) -> Result<Vec<Token>, LexError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! push {
        ($tok:expr, $l:expr, $c:expr) => {
            tokens.push(Token { tok: $tok, line: $l, col: $c })
        };
    }

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |i: &mut usize, line: &mut u32, col: &mut u32| {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => advance(&mut i, &mut line, &mut col),
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(&mut i, &mut line, &mut col);
                }
            }
            '0'..='9' => {
                let mut n: i64 = 0;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    let d = chars[i] as i64 - '0' as i64;
                    n = n
                        .checked_mul(10)
                        .and_then(|x| x.checked_add(d))
                        .ok_or_else(|| LexError {
                            message: "integer literal overflows 64 bits".to_string(),
                            line: tl,
                            col: tc,
                        })?;
                    advance(&mut i, &mut line, &mut col);
                }
                if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                    return Err(LexError {
                        message: "identifier cannot start with a digit".to_string(),
                        line: tl,
                        col: tc,
                    });
                }
                push!(Tok::Int(n), tl, tc);
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    advance(&mut i, &mut line, &mut col);
                }
                let word: String = chars[start..i].iter().collect();
                let tok = if word == "not" {
                    Tok::Not
                } else if c.is_ascii_uppercase() {
                    Tok::Var(word)
                } else {
                    Tok::Ident(word)
                };
                push!(tok, tl, tc);
            }
            '#' => {
                advance(&mut i, &mut line, &mut col);
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    advance(&mut i, &mut line, &mut col);
                }
                let word: String = chars[start..i].iter().collect();
                if word == "show" {
                    push!(Tok::Show, tl, tc);
                } else {
                    return Err(LexError {
                        message: format!("unknown directive #{word}"),
                        line: tl,
                        col: tc,
                    });
                }
            }
            ':' => {
                advance(&mut i, &mut line, &mut col);
                if i < chars.len() && chars[i] == '-' {
                    advance(&mut i, &mut line, &mut col);
                    push!(Tok::ColonDash, tl, tc);
                } else if i < chars.len() && chars[i] == '+' {
                    advance(&mut i, &mut line, &mut col);
                    push!(Tok::ColonPlus, tl, tc);
                } else {
                    push!(Tok::Colon, tl, tc);
                }
            }
            '!' => {
                advance(&mut i, &mut line, &mut col);
                if i < chars.len() && chars[i] == '=' {
                    advance(&mut i, &mut line, &mut col);
                    push!(Tok::Ne, tl, tc);
                } else {
                    return Err(LexError {
                        message: "expected `=` after `!`".to_string(),
                        line: tl,
                        col: tc,
                    });
                }
            }
            '<' => {
                advance(&mut i, &mut line, &mut col);
                if i < chars.len() && chars[i] == '=' {
                    advance(&mut i, &mut line, &mut col);
                    push!(Tok::Le, tl, tc);
                } else {
                    push!(Tok::Lt, tl, tc);
                }
            }
            '>' => {
                advance(&mut i, &mut line, &mut col);
                if i < chars.len() && chars[i] == '=' {
                    advance(&mut i, &mut line, &mut col);
                    push!(Tok::Ge, tl, tc);
                } else {
                    push!(Tok::Gt, tl, tc);
                }
            }
            '=' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::Eq, tl, tc);
            }
            '.' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::Dot, tl, tc);
            }
            ',' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::Comma, tl, tc);
            }
            ';' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::Semi, tl, tc);
            }
            '(' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::LParen, tl, tc);
            }
            ')' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::RParen, tl, tc);
            }
            '{' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::LBrace, tl, tc);
            }
            '}' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::RBrace, tl, tc);
            }
            '+' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::Plus, tl, tc);
            }
            '-' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::Minus, tl, tc);
            }
            '*' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::Star, tl, tc);
            }
            '/' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::Slash, tl, tc);
            }
            '|' => {
                advance(&mut i, &mut line, &mut col);
                push!(Tok::Pipe, tl, tc);
            }
            '_' => {
                return Err(LexError {
                    message: "identifiers must start with a letter".to_string(),
                    line: tl,
                    col: tc,
                })
            }
            other => {
                return Err(LexError {
                    message: format!("unexpected character `{other}`"),
                    line: tl,
                    col: tc,
                })
            }
        }
    }
    tokens.push(Token { tok: Tok::Eof, line, col });
    Ok(tokens)
}
