//! Recursive-descent parser for the shared formula syntax.

use super::{Formula, FormulaError};

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
    LParen,
    RParen,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    tokens: Vec<(usize, Token)>,
}

fn err(position: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Parse { position, message: message.into() }
}

impl<'a> Lexer<'a> {
    fn lex(text: &'a str) -> Result<Vec<(usize, Token)>, FormulaError> {
        let mut lexer = Lexer { text, pos: 0, tokens: Vec::new() };
        lexer.run()?;
        Ok(lexer.tokens)
    }

    fn run(&mut self) -> Result<(), FormulaError> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() {
            let start = self.pos;
            let c = bytes[self.pos] as char;
            match c {
                ' ' | '\t' | '\n' | '\r' => self.pos += 1,
                '(' => self.push(start, Token::LParen, 1),
                ')' => self.push(start, Token::RParen, 1),
                '!' => self.push(start, Token::Not, 1),
                '&' => self.push(start, Token::And, 1),
                '|' => self.push(start, Token::Or, 1),
                '-' => {
                    if self.text[self.pos..].starts_with("->") {
                        self.push(start, Token::Implies, 2);
                    } else {
                        return Err(err(start, "expected `->`"));
                    }
                }
                '<' => {
                    if self.text[self.pos..].starts_with("<->") {
                        self.push(start, Token::Iff, 3);
                    } else {
                        return Err(err(start, "expected `<->`"));
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut end = self.pos + 1;
                    while end < bytes.len()
                        && ((bytes[end] as char).is_ascii_alphanumeric()
                            || bytes[end] as char == '_')
                    {
                        end += 1;
                    }
                    let word = &self.text[self.pos..end];
                    let token = match word {
                        "true" => Token::True,
                        "false" => Token::False,
                        _ => Token::Ident(word.to_string()),
                    };
                    self.pos = end;
                    self.tokens.push((start, token));
                }
                _ => return Err(err(start, format!("unexpected character `{c}`"))),
            }
        }
        Ok(())
    }

    fn push(&mut self, start: usize, token: Token, len: usize) {
        self.tokens.push((start, token));
        self.pos += len;
    }
}

pub(super) struct Parser {
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

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.index).map(|(_, t)| t.clone());
        self.index += 1;
        t
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), FormulaError> {
        if self.peek() == Some(&token) {
            self.index += 1;
            Ok(())
        } else {
            Err(err(self.position(), format!("expected {what}")))
        }
    }

    // iff := implies (`<->` iff)?          right-associative
    fn iff(&mut self) -> Result<Formula, FormulaError> {
        let left = self.implies()?;
        if self.peek() == Some(&Token::Iff) {
            self.index += 1;
            let right = self.iff()?;
            return Ok(Formula::iff(left, right));
        }
        Ok(left)
    }

    // implies := or (`->` implies)?        right-associative
    fn implies(&mut self) -> Result<Formula, FormulaError> {
        let left = self.or()?;
        if self.peek() == Some(&Token::Implies) {
            self.index += 1;
            let right = self.implies()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut parts = vec![self.and()?];
        while self.peek() == Some(&Token::Or) {
            self.index += 1;
            parts.push(self.and()?);
        }
        Ok(Formula::or(parts))
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut parts = vec![self.unary()?];
        while self.peek() == Some(&Token::And) {
            self.index += 1;
            parts.push(self.unary()?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Some(Token::Not) => {
                self.index += 1;
                Ok(Formula::not(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let position = self.position();
        match self.bump() {
            Some(Token::True) => Ok(Formula::True),
            Some(Token::False) => Ok(Formula::False),
            Some(Token::Ident(name)) => Ok(Formula::Atom(name)),
            Some(Token::LParen) => {
                let inner = self.iff()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(err(position, "expected an atom, constant or `(`")),
        }
    }
}

pub(super) fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let tokens = Lexer::lex(text)?;
    let mut parser = Parser { tokens, index: 0, end: text.len() };
    let formula = parser.iff()?;
    if parser.peek().is_some() {
        return Err(err(parser.position(), "trailing tokens after formula"));
    }
    Ok(formula)
}
