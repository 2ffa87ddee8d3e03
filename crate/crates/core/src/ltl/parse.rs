//! Parser for the LTL text syntax: the propositional syntax extended with
//! prefix `X F G` and infix left-associative `U`. The single capital
//! letters `X`, `F`, `G` and `U` are reserved operator names; atoms are
//! any other identifiers.
//!
//! Precedence: `!`/`X`/`F`/`G` bind tightest, then `U`, `&`, `|`, `->`,
//! `<->` in that order, arrows associating to the right.

use super::{Ltl, LtlError};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,
    Eventually,
    Globally,
    Until,
    LParen,
    RParen,
}

fn err(position: usize, message: impl Into<String>) -> LtlError {
    LtlError::FormulaParse { position, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, LtlError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let start = pos;
        let c = bytes[pos] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => pos += 1,
            '(' => {
                tokens.push((start, Token::LParen));
                pos += 1;
            }
            ')' => {
                tokens.push((start, Token::RParen));
                pos += 1;
            }
            '!' => {
                tokens.push((start, Token::Not));
                pos += 1;
            }
            '&' => {
                tokens.push((start, Token::And));
                pos += 1;
            }
            '|' => {
                tokens.push((start, Token::Or));
                pos += 1;
            }
            '-' => {
                if text[pos..].starts_with("->") {
                    tokens.push((start, Token::Implies));
                    pos += 2;
                } else {
                    return Err(err(start, "expected `->`"));
                }
            }
            '<' => {
                if text[pos..].starts_with("<->") {
                    tokens.push((start, Token::Iff));
                    pos += 3;
                } else {
                    return Err(err(start, "expected `<->`"));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = pos + 1;
                while end < bytes.len()
                    && ((bytes[end] as char).is_ascii_alphanumeric() || bytes[end] as char == '_')
                {
                    end += 1;
                }
                let word = &text[pos..end];
                let token = match word {
                    "true" => Token::True,
                    "false" => Token::False,
                    "X" => Token::Next,
                    "F" => Token::Eventually,
                    "G" => Token::Globally,
                    "U" => Token::Until,
                    _ => Token::Ident(word.to_string()),
                };
                tokens.push((start, token));
                pos = end;
            }
            _ => return Err(err(start, format!("unexpected character `{c}`"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    index: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.index).map_or(self.end, |(p, _)| *p)
    }

    fn iff(&mut self) -> Result<Ltl, LtlError> {
        let left = self.implies()?;
        if self.peek() == Some(&Token::Iff) {
            self.index += 1;
            return Ok(Ltl::iff(left, self.iff()?));
        }
        Ok(left)
    }

    fn implies(&mut self) -> Result<Ltl, LtlError> {
        let left = self.or()?;
        if self.peek() == Some(&Token::Implies) {
            self.index += 1;
            return Ok(Ltl::implies(left, self.implies()?));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Ltl, LtlError> {
        let mut parts = vec![self.and()?];
        while self.peek() == Some(&Token::Or) {
            self.index += 1;
            parts.push(self.and()?);
        }
        Ok(Ltl::or(parts))
    }

    fn and(&mut self) -> Result<Ltl, LtlError> {
        let mut parts = vec![self.until()?];
        while self.peek() == Some(&Token::And) {
            self.index += 1;
            parts.push(self.until()?);
        }
        Ok(Ltl::and(parts))
    }

    fn until(&mut self) -> Result<Ltl, LtlError> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Token::Until) {
            self.index += 1;
            let right = self.unary()?;
            left = Ltl::until(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Ltl, LtlError> {
        match self.peek() {
            Some(Token::Not) => {
                self.index += 1;
                Ok(Ltl::not(self.unary()?))
            }
            Some(Token::Next) => {
                self.index += 1;
                Ok(Ltl::next(self.unary()?))
            }
            Some(Token::Eventually) => {
                self.index += 1;
                Ok(Ltl::eventually(self.unary()?))
            }
            Some(Token::Globally) => {
                self.index += 1;
                Ok(Ltl::globally(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Ltl, LtlError> {
        let position = self.position();
        let token = self.tokens.get(self.index).map(|(_, t)| t.clone());
        self.index += 1;
        match token {
            Some(Token::True) => Ok(Ltl::True),
            Some(Token::False) => Ok(Ltl::False),
            Some(Token::Ident(name)) => Ok(Ltl::Atom(name)),
            Some(Token::LParen) => {
                let inner = self.iff()?;
                if self.peek() == Some(&Token::RParen) {
                    self.index += 1;
                    Ok(inner)
                } else {
                    Err(err(self.position(), "expected `)`"))
                }
            }
            _ => Err(err(position, "expected an atom, constant or `(`")),
        }
    }
}

pub(super) fn parse_ltl(text: &str) -> Result<Ltl, LtlError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, index: 0, end: text.len() };
    let formula = parser.iff()?;
    if parser.peek().is_some() {
        return Err(err(parser.position(), "trailing tokens after formula"));
    }
    Ok(formula)
}
