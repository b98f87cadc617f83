//! Words over the generators `x0 .. x{q-1}`: free monoid and free group
//! words, the Thue-Morse substitution and the cyclic generator shift.

use std::cmp::Ordering;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::lexer::{Cursor, Token};

/// Alphabet size `q >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        Ok(Alphabet(q))
    }

    pub fn size(self) -> usize {
        self.0
    }
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(index: usize) -> Self {
        Letter {
            index,
            inverse: false,
        }
    }

    pub fn inv(index: usize) -> Self {
        Letter {
            index,
            inverse: true,
        }
    }

    pub fn inverted(self) -> Self {
        Letter {
            index: self.index,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "x{}^-1", self.index)
        } else {
            write!(f, "x{}", self.index)
        }
    }
}

/// An element of the free monoid, as a sequence of generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MonoidWord(pub Vec<usize>);

impl MonoidWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_group_word(&self) -> GroupWord {
        GroupWord(self.0.iter().map(|&i| Letter::gen(i)).collect())
    }
}

impl fmt::Display for MonoidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_group_word(), f)
    }
}

/// A word in the free group `F = <x0, ..., x{q-1}>`. Not necessarily
/// reduced; see [`free_reduce`].
///
/// Words are ordered shortlex (length first, then letterwise with a
/// generator before its inverse), so the empty word is the least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupWord(pub Vec<Letter>);

impl Ord for GroupWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for GroupWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    pub fn gen(index: usize) -> Self {
        GroupWord(vec![Letter::gen(index)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn has_inverse_letters(&self) -> bool {
        self.0.iter().any(|l| l.inverse)
    }

    pub fn validate(&self, q: usize) -> Result<()> {
        match self.0.iter().find(|l| l.index >= q) {
            Some(l) => Err(Error::InvalidLetter { index: l.index, q }),
            None => Ok(()),
        }
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut out = self.clone();
        out.push_reduced(other);
        out
    }

    /// Appends `other`, cancelling at the junction only. If `self` and
    /// `other` are reduced the result is reduced.
    pub fn push_reduced(&mut self, other: &GroupWord) {
        for &l in &other.0 {
            if self.0.last() == Some(&l.inverted()) {
                self.0.pop();
            } else {
                self.0.push(l);
            }
        }
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GroupWord(v)
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    /// `self^n` for any integer `n`, freely reduced.
    pub fn pow(&self, n: i64) -> GroupWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let base = free_reduce(&base);
        let mut out = GroupWord::identity();
        for _ in 0..n.unsigned_abs() {
            out.push_reduced(&base);
        }
        out
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &GroupWord, b: &GroupWord) -> GroupWord {
        free_reduce(&a.inverse().concat(&b.inverse()).concat(a).concat(b))
    }

    /// Parses the grammar `x0 x1^-1 (x0 x2)^3 [x0, x1] 1`.
    pub fn parse(src: &str) -> Result<GroupWord> {
        let mut cur = Cursor::new(src)?;
        let w = parse_word(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.error("trailing input"));
        }
        Ok(w)
    }

    /// Parses and checks indices against `q`.
    pub fn parse_for(src: &str, q: usize) -> Result<GroupWord> {
        let w = Self::parse(src)?;
        w.validate(q)?;
        Ok(w)
    }
}

fn parse_word(cur: &mut Cursor) -> Result<GroupWord> {
    let mut out = GroupWord::identity();
    loop {
        let atom = match cur.peek() {
            Some(Token::Letter(i)) => {
                let i = *i;
                cur.bump();
                GroupWord::gen(i)
            }
            Some(Token::Num(n)) if n.is_one() => {
                cur.bump();
                GroupWord::identity()
            }
            Some(Token::LParen) => {
                cur.bump();
                let w = parse_word(cur)?;
                cur.expect(&Token::RParen)?;
                w
            }
            Some(Token::LBracket) => {
                cur.bump();
                let a = parse_word(cur)?;
                cur.expect(&Token::Comma)?;
                let b = parse_word(cur)?;
                cur.expect(&Token::RBracket)?;
                GroupWord::commutator(&a, &b)
            }
            _ => break,
        };
        let atom = match cur.exponent()? {
            Some(e) => atom.pow(e),
            None => atom,
        };
        out = out.concat(&atom);
    }
    Ok(out)
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Image of a single generator under the Thue-Morse substitution:
/// `x_i x_{i+1} ... x_{q-1} x_0 ... x_{i-1}`.
pub fn theta_letter(i: usize, q: Alphabet) -> Vec<usize> {
    let q = q.size();
    (0..q).map(|k| (i + k) % q).collect()
}

/// The Thue-Morse substitution extended to the free group, with
/// `theta(x^-1) = theta(x)^-1`.
pub fn theta(w: &GroupWord, q: Alphabet) -> Result<GroupWord> {
    w.validate(q.size())?;
    let mut out = Vec::with_capacity(w.len() * q.size());
    for l in &w.0 {
        let img = theta_letter(l.index, q);
        if l.inverse {
            out.extend(img.into_iter().rev().map(Letter::inv));
        } else {
            out.extend(img.into_iter().map(Letter::gen));
        }
    }
    Ok(GroupWord(out))
}

/// Cyclic relabelling `x_i -> x_{i+shift mod q}`; signs are kept.
pub fn gamma(w: &GroupWord, shift: i64, q: Alphabet) -> GroupWord {
    let q = q.size() as i64;
    GroupWord(
        w.0.iter()
            .map(|l| Letter {
                index: (l.index as i64 + shift).rem_euclid(q) as usize,
                inverse: l.inverse,
            })
            .collect(),
    )
}

/// First `n` letters of the fixed point of the substitution starting at
/// `x0`. Memory stays linear in `n`: the prefix of length `n` is the
/// substitution applied to the prefix of length `ceil(n/q)`.
pub fn tm_prefix(q: Alphabet, n: usize) -> MonoidWord {
    let qs = q.size();
    if n <= 1 {
        return MonoidWord(vec![0; n]);
    }
    let shorter = tm_prefix(q, n.div_ceil(qs));
    let mut out = Vec::with_capacity(shorter.len() * qs);
    for &i in &shorter.0 {
        out.extend(theta_letter(i, q));
        if out.len() >= n {
            break;
        }
    }
    out.truncate(n);
    MonoidWord(out)
}

/// Cancels adjacent inverse pairs until none remain.
pub fn free_reduce(w: &GroupWord) -> GroupWord {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if out.last() == Some(&l.inverted()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    GroupWord(out)
}

pub fn is_freely_reduced(w: &GroupWord) -> bool {
    w.0.windows(2).all(|p| p[0] != p[1].inverted())
}
