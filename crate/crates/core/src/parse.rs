//! Recursive-descent term parser.
//!
//! ```text
//! sum  := atom ("+" atom)*
//! atom := "0" | ident | ident "(" sum ("," sum)* ")" | "(" sum ")"
//! ```
//! `xor(t1, …, tn)` is read as `t1 + … + tn`. Positions are 1-based columns.

use crate::error::{Error, Result};
use crate::signature::{Signature, SymbolKind};
use crate::term::{Term, FRESH_PREFIX, PLUS, ZERO};

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        sig,
    };
    let t = p.sum()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.syntax(format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(t.canonical())
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    sig: &'a Signature,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl Parser<'_> {
    fn syntax(&self, message: String) -> Error {
        self.syntax_at(self.pos, message)
    }

    fn syntax_at(&self, pos: usize, message: String) -> Error {
        Error::Syntax {
            line: 1,
            column: pos + 1,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.syntax(format!("expected `{c}`, found `{d}`"))),
            None => Err(self.syntax(format!("expected `{c}`, found end of input"))),
        }
    }

    fn combine(&self, terms: Vec<Term>, at: usize) -> Result<Term> {
        if terms.len() == 1 {
            return Ok(terms.into_iter().next().unwrap());
        }
        match self.sig.lookup(PLUS) {
            Some(s) if s.kind == SymbolKind::AcBinary => Ok(Term::sum(terms)),
            Some(s) if s.arity == 2 => {
                let mut it = terms.into_iter();
                let first = it.next().unwrap();
                Ok(it.fold(first, |acc, t| Term::app(PLUS, vec![acc, t])))
            }
            _ => Err(Error::UnknownSymbol {
                name: PLUS.into(),
                line: 1,
                column: at + 1,
            }),
        }
    }

    fn sum(&mut self) -> Result<Term> {
        let mut terms = vec![self.atom()?];
        let mut plus_at = None;
        while self.peek() == Some('+') {
            plus_at.get_or_insert(self.pos);
            self.pos += 1;
            terms.push(self.atom()?);
        }
        self.combine(terms, plus_at.unwrap_or(self.pos))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && is_ident_char(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<Term> {
        let start = match self.peek() {
            None => return Err(self.syntax("expected a term, found end of input".into())),
            Some(_) => self.pos,
        };
        let c = self.chars[start];
        if c == '(' {
            self.pos += 1;
            let t = self.sum()?;
            self.expect(')')?;
            return Ok(t);
        }
        if c == '0' {
            self.pos += 1;
            if self.pos < self.chars.len() && is_ident_char(self.chars[self.pos]) {
                return Err(self.syntax_at(start, "identifiers must start with a letter or `_`".into()));
            }
            return match self.sig.lookup(ZERO) {
                Some(_) => Ok(Term::zero()),
                None => Err(Error::UnknownSymbol {
                    name: ZERO.into(),
                    line: 1,
                    column: start + 1,
                }),
            };
        }
        if !is_ident_start(c) {
            return Err(self.syntax(format!("unexpected `{c}`")));
        }
        let name = self.ident();
        if name.starts_with(FRESH_PREFIX) {
            return Err(self.syntax_at(start, format!("prefix `{FRESH_PREFIX}` is reserved (in `{name}`)")));
        }
        if self.peek() == Some('(') {
            self.pos += 1;
            let mut args = vec![self.sum()?];
            while self.peek() == Some(',') {
                self.pos += 1;
                args.push(self.sum()?);
            }
            self.expect(')')?;
            return self.application(name, args, start);
        }
        match self.sig.lookup(&name) {
            Some(s) if s.kind == SymbolKind::Constant => Ok(Term::constant(&name)),
            Some(s) => Err(Error::Arity {
                name,
                expected: s.arity,
                found: 0,
                line: 1,
                column: start + 1,
            }),
            None => match self.sig.variables() {
                Some(vars) if !vars.iter().any(|v| **v == *name) => Err(Error::UnknownSymbol {
                    name,
                    line: 1,
                    column: start + 1,
                }),
                _ => Ok(Term::var(&name)),
            },
        }
    }

    fn application(&self, name: String, args: Vec<Term>, start: usize) -> Result<Term> {
        if name == "xor" && self.sig.lookup("xor").is_none() {
            return self.combine(args, start);
        }
        let Some(sym) = self.sig.lookup(&name) else {
            return Err(Error::UnknownSymbol {
                name,
                line: 1,
                column: start + 1,
            });
        };
        if sym.kind != SymbolKind::Function || sym.arity != args.len() {
            return Err(Error::Arity {
                name,
                expected: sym.arity,
                found: args.len(),
                line: 1,
                column: start + 1,
            });
        }
        Ok(Term::app(&name, args))
    }
}
