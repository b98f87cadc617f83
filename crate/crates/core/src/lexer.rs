//! Tokenizer shared by the word and element grammars.

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Num(BigInt),
    Letter(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Caret,
    Plus,
    Minus,
    Star,
    Slash,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'[' => Token::LBracket,
            b']' => Token::RBracket,
            b',' => Token::Comma,
            b'^' => Token::Caret,
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'x' | b'X' => {
                i += 1;
                let d0 = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if d0 == i {
                    return Err(Error::Parse {
                        offset: start,
                        message: "expected generator index after 'x'".into(),
                    });
                }
                let index = src[d0..i].parse::<usize>().map_err(|e| Error::Parse {
                    offset: d0,
                    message: e.to_string(),
                })?;
                out.push((start, Token::Letter(index)));
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((start, Token::Num(n)));
                continue;
            }
            _ => {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unexpected character {:?}", c as char),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor {
    toks: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Cursor {
    pub(crate) fn new(src: &str) -> Result<Self> {
        Ok(Cursor {
            toks: tokenize(src)?,
            pos: 0,
            len: src.len(),
        })
    }

    pub(crate) fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.len)
    }

    pub(crate) fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    pub(crate) fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, t: &Token) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(format!("expected {t:?}")))
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.offset(),
            message: message.into(),
        }
    }

    /// Parses `^n` or `^-n` if present.
    pub(crate) fn exponent(&mut self) -> Result<Option<i64>> {
        if !self.eat(&Token::Caret) {
            return Ok(None);
        }
        let neg = self.eat(&Token::Minus);
        match self.bump() {
            Some(Token::Num(n)) => {
                let v: i64 = n.try_into().map_err(|_| self.error("exponent too large"))?;
                Ok(Some(if neg { -v } else { v }))
            }
            _ => Err(self.error("expected integer exponent")),
        }
    }
}
