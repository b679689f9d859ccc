//! Recursive-descent parser for the formula text format.
//!
//! ```text
//! formula := quant | binary
//! quant   := ("E" | "A") var "." formula
//! binary  := unary (("&" | "|" | "->" | "<->") unary)*     ! > & > | > -> > <->
//! unary   := "!" unary | "(" formula ")" | quant | atom
//! atom    := var "<=" var | var "=" var | var "!=" var | ident "(" var ("," var)* ")"
//! ```
//!
//! `->` is right-associative, the other binary connectives associate to the
//! left. A quantifier body extends as far right as possible. The Unicode
//! forms `∃ ∀ ¬ ∧ ∨ → ↔ ≤ ≠` are accepted as synonyms, and `#` starts a
//! comment running to the end of the line.

use thiserror::Error;

use super::{Atom, Formula, RawAtom, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown token `{0}`")]
    UnknownToken(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(String),
    #[error("free variable {0}")]
    FreeVariable(String),
    #[error("{0}")]
    Vocabulary(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Exists,
    Forall,
    Dot,
    Comma,
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Le,
    Eq,
    Ne,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Exists => "`E`".into(),
            Tok::Forall => "`A`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Ne => "`!=`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let next = chars.get(i + 1).copied();
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                col: start_col,
            });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '&' | '∧' => push(Tok::And, 1, &mut i, &mut col),
            '|' | '∨' => push(Tok::Or, 1, &mut i, &mut col),
            '¬' => push(Tok::Not, 1, &mut i, &mut col),
            '∃' => push(Tok::Exists, 1, &mut i, &mut col),
            '∀' => push(Tok::Forall, 1, &mut i, &mut col),
            '→' => push(Tok::Implies, 1, &mut i, &mut col),
            '↔' => push(Tok::Iff, 1, &mut i, &mut col),
            '≤' => push(Tok::Le, 1, &mut i, &mut col),
            '≠' => push(Tok::Ne, 1, &mut i, &mut col),
            '=' => push(Tok::Eq, 1, &mut i, &mut col),
            '!' if next == Some('=') => push(Tok::Ne, 2, &mut i, &mut col),
            '!' => push(Tok::Not, 1, &mut i, &mut col),
            '-' if next == Some('>') => push(Tok::Implies, 2, &mut i, &mut col),
            '<' if next == Some('=') => push(Tok::Le, 2, &mut i, &mut col),
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::Iff, 3, &mut i, &mut col)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "E" => Tok::Exists,
                    "A" => Tok::Forall,
                    _ => Tok::Ident(word),
                };
                let len = j - i;
                push(tok, len, &mut i, &mut col);
            }
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnknownToken(other),
                    line,
                    col,
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'t> {
    toks: &'t [Spanned],
    pos: usize,
    end: (usize, usize),
    scope: Vec<String>,
    /// First unbound variable occurrence, kept for sentence checks.
    first_free: Option<(String, usize, usize)>,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn error_here(&self, expected: &str) -> ParseError {
        match self.toks.get(self.pos) {
            Some(s) => ParseError {
                kind: ParseErrorKind::Unexpected {
                    expected: expected.to_string(),
                    found: s.tok.describe(),
                },
                line: s.line,
                col: s.col,
            },
            None => ParseError {
                kind: ParseErrorKind::UnexpectedEnd(expected.to_string()),
                line: self.end.0,
                col: self.end.1,
            },
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(&tok.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize, usize), ParseError> {
        match self.toks.get(self.pos) {
            Some(Spanned {
                tok: Tok::Ident(name),
                line,
                col,
            }) => {
                self.pos += 1;
                Ok((name.clone(), *line, *col))
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn var_use(&mut self) -> Result<Var, ParseError> {
        let (name, line, col) = self.ident("a variable")?;
        if !self.scope.contains(&name) && self.first_free.is_none() {
            self.first_free = Some((name.clone(), line, col));
        }
        Ok(Var::new(name))
    }

    fn formula<A: Atom>(&mut self) -> Result<Formula<A>, ParseError> {
        let mut left = self.implication()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication<A: Atom>(&mut self) -> Result<Formula<A>, ParseError> {
        let left = self.disjunction()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction<A: Atom>(&mut self) -> Result<Formula<A>, ParseError> {
        let mut left = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction<A: Atom>(&mut self) -> Result<Formula<A>, ParseError> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary<A: Atom>(&mut self) -> Result<Formula<A>, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Exists) | Some(Tok::Forall) => {
                let is_exists = self.peek() == Some(&Tok::Exists);
                self.pos += 1;
                let (name, _, _) = self.ident("a variable after the quantifier")?;
                self.expect(Tok::Dot)?;
                self.scope.push(name.clone());
                let body = self.formula()?;
                self.scope.pop();
                Ok(if is_exists {
                    Formula::exists(Var::new(name), body)
                } else {
                    Formula::forall(Var::new(name), body)
                })
            }
            Some(Tok::Ident(_)) => self.atom(),
            _ => Err(self.error_here("a formula")),
        }
    }

    fn atom<A: Atom>(&mut self) -> Result<Formula<A>, ParseError> {
        let start = &self.toks[self.pos];
        let (line, col) = (start.line, start.col);
        let raw = if self.toks.get(self.pos + 1).map(|s| &s.tok) == Some(&Tok::LParen) {
            let (name, _, _) = self.ident("a predicate")?;
            self.expect(Tok::LParen)?;
            let mut args = vec![self.var_use()?];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                args.push(self.var_use()?);
            }
            self.expect(Tok::RParen)?;
            RawAtom::Pred(name, args)
        } else {
            let x = self.var_use()?;
            let op = self.peek().cloned();
            match op {
                Some(Tok::Le) | Some(Tok::Eq) | Some(Tok::Ne) => self.pos += 1,
                _ => return Err(self.error_here("`<=`, `=` or `!=`")),
            }
            let y = self.var_use()?;
            match op {
                Some(Tok::Le) => RawAtom::Le(x, y),
                Some(Tok::Eq) => RawAtom::Eq(x, y),
                _ => {
                    let atom = A::from_raw(RawAtom::Eq(x, y)).map_err(|msg| ParseError {
                        kind: ParseErrorKind::Vocabulary(msg),
                        line,
                        col,
                    })?;
                    return Ok(Formula::not(Formula::Atom(atom)));
                }
            }
        };
        let atom = A::from_raw(raw).map_err(|msg| ParseError {
            kind: ParseErrorKind::Vocabulary(msg),
            line,
            col,
        })?;
        Ok(Formula::Atom(atom))
    }
}

fn parse_inner<A: Atom>(text: &str) -> Result<(Formula<A>, Option<(String, usize, usize)>), ParseError> {
    let toks = lex(text)?;
    let end = text
        .lines()
        .enumerate()
        .last()
        .map(|(i, l)| (i + 1, l.chars().count() + 1))
        .unwrap_or((1, 1));
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        end,
        scope: Vec::new(),
        first_free: None,
    };
    let f = parser.formula()?;
    if parser.pos < toks.len() {
        return Err(parser.error_here("end of input"));
    }
    Ok((f.rename_apart(), parser.first_free))
}

/// Parse a formula, which may have free variables. Implications and
/// biconditionals are desugared and bound variables are renamed apart; the
/// result is not yet in negation normal form.
pub fn parse<A: Atom>(text: &str) -> Result<Formula<A>, ParseError> {
    parse_inner(text).map(|(f, _)| f)
}

/// Parse a formula and require it to be a sentence.
pub fn parse_sentence<A: Atom>(text: &str) -> Result<Formula<A>, ParseError> {
    let (f, free) = parse_inner(text)?;
    match free {
        None => Ok(f),
        Some((name, line, col)) => Err(ParseError {
            kind: ParseErrorKind::FreeVariable(name),
            line,
            col,
        }),
    }
}
