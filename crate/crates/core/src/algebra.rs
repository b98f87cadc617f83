//! Sparse noncommutative polynomials over `x0 .. x{q-1}` and the matrix
//! recursion `phi: T -> M_q(T)`.
//!
//! A monomial decomposes as a monomial matrix: row `a` holds the section
//! at `a` in column `pi(a)`, following the wreath recursion of
//! [`WreathRecursion::thue_morse`]. Rows are sources, so `phi` is
//! multiplicative for the ordinary matrix product.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::WreathRecursion;
use crate::lexer::{Cursor, Token};
use crate::words::{self, free_reduce, Alphabet, GroupWord};

pub type Scalar = BigRational;

/// Coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    Rationals,
    Integers,
    PrimeField(u64),
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p));
        }
        Ok(Ring::PrimeField(p))
    }

    /// Accepts `Q`, `Z` and `Fp:<p>`.
    pub fn parse(s: &str) -> Result<Ring> {
        match s {
            "Q" | "q" => Ok(Ring::Rationals),
            "Z" | "z" => Ok(Ring::Integers),
            _ => {
                let p = s
                    .strip_prefix("Fp:")
                    .or_else(|| s.strip_prefix("F:"))
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown ring {s:?}")))?;
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad modulus {p:?}")))?;
                Ring::prime_field(p)
            }
        }
    }

    fn modulus(self) -> Option<BigInt> {
        match self {
            Ring::PrimeField(p) => Some(BigInt::from(p)),
            _ => None,
        }
    }

    /// Canonical representative; prime-field values live in `0..p`.
    pub fn reduce(self, x: Scalar) -> Scalar {
        match self.modulus() {
            Some(p) => {
                debug_assert!(x.is_integer());
                let n = x.to_integer();
                let r = ((n % &p) + &p) % &p;
                BigRational::from_integer(r)
            }
            None => x,
        }
    }

    /// Embeds a rational literal.
    pub fn from_rational(self, x: Scalar) -> Result<Scalar> {
        match self {
            Ring::Rationals => Ok(x),
            Ring::Integers => {
                if x.is_integer() {
                    Ok(x)
                } else {
                    Err(Error::InvalidArgument(format!("{x} is not an integer")))
                }
            }
            Ring::PrimeField(_) => {
                let num = self.reduce(BigRational::from_integer(x.numer().clone()));
                let den = self.reduce(BigRational::from_integer(x.denom().clone()));
                let inv = self
                    .inverse(&den)
                    .ok_or_else(|| Error::InvalidArgument(format!("{x} has no image mod p")))?;
                Ok(self.mul(&num, &inv))
            }
        }
    }

    pub fn add(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn mul(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    /// Multiplicative inverse, computed in the field of fractions for
    /// `Integers`.
    pub fn inverse(self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self.modulus() {
            Some(p) => {
                let e = &p - 2;
                Some(BigRational::from_integer(a.to_integer().modpow(&e, &p)))
            }
            None => Some(a.recip()),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rationals => f.write_str("Q"),
            Ring::Integers => f.write_str("Z"),
            Ring::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// `A` is the free algebra on positive letters; `B` is the group ring of
/// the free group, where monomials are freely reduced words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "A" | "a" => Ok(Mode::A),
            "B" | "b" => Ok(Mode::B),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

/// Finite sum of coefficient times monomial; zero coefficients are never
/// stored. Terms are kept in shortlex order of monomials.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    terms: BTreeMap<GroupWord, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn terms(&self) -> &BTreeMap<GroupWord, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient if the element is a nonzero scalar.
    pub fn as_scalar(&self) -> Option<&Scalar> {
        match self.terms.iter().next() {
            Some((w, c)) if self.terms.len() == 1 && w.is_empty() => Some(c),
            _ => None,
        }
    }

    /// `(monomial, coefficient)` if the element is a nonzero multiple of a
    /// single monomial.
    pub fn as_monomial(&self) -> Option<(&GroupWord, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&GroupWord, &Scalar)> {
        self.terms.iter().next()
    }

    pub fn coefficient(&self, w: &GroupWord) -> Option<&Scalar> {
        self.terms.get(w)
    }

    /// Every monomial has length at most one.
    pub fn is_linear(&self) -> bool {
        self.terms.keys().all(|w| w.len() <= 1)
    }
}

/// A `q x q` matrix of elements, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixDec {
    q: usize,
    entries: Vec<Element>,
}

impl MatrixDec {
    pub fn zero(q: usize) -> Self {
        MatrixDec {
            q,
            entries: vec![Element::zero(); q * q],
        }
    }

    pub fn dim(&self) -> usize {
        self.q
    }

    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.entries[i * self.q + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Element {
        &mut self.entries[i * self.q + j]
    }

    /// `(row, col, entry)` for the nonzero entries.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &Element)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(move |(k, e)| (k / self.q, k % self.q, e))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Element::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.nonzero().all(|(i, j, _)| i == j)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (0..self.q)
            .map(|i| (0..self.q).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        json!(rows)
    }
}

impl fmt::Display for MatrixDec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.q {
            let row: Vec<String> = (0..self.q).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[ {} ]", row.join(" | "))?;
        }
        Ok(())
    }
}

/// Outcome of the zero test in the injective quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroVerdict {
    /// `phi^depth` is the zero matrix.
    Zero {
        depth: usize,
    },
    /// Entry `(row, col)` of `phi^depth` is the nonzero scalar `scalar`;
    /// scalars are fixed by `phi`, so no iterate vanishes.
    NonZero {
        depth: usize,
        row: Vec<usize>,
        col: Vec<usize>,
        scalar: Scalar,
    },
    Unknown {
        cap: usize,
    },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroVerdict::Zero { .. })
    }

    pub fn is_nonzero(&self) -> bool {
        matches!(self, ZeroVerdict::NonZero { .. })
    }
}

impl fmt::Display for ZeroVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroVerdict::Zero { depth } => write!(f, "zero (depth {depth})"),
            ZeroVerdict::NonZero {
                depth,
                row,
                col,
                scalar,
            } => write!(
                f,
                "nonzero (scalar {scalar} at row {row:?}, column {col:?}, depth {depth})"
            ),
            ZeroVerdict::Unknown { cap } => write!(f, "unknown(cap={cap})"),
        }
    }
}

/// Largest number of distinct entries tracked by the iterated zero and
/// contraction tests.
pub const ENTRY_CAP: usize = 200_000;

/// Sparse entries of an iterated decomposition: `(row, column, entry)`
/// with indices in base `q`.
pub type SparseMatrix = Vec<(u64, u64, Element)>;

/// The algebra context: alphabet, mode and coefficient ring.
#[derive(Debug, Clone)]
pub struct Algebra {
    q: Alphabet,
    mode: Mode,
    ring: Ring,
    rec: WreathRecursion,
}

impl Algebra {
    pub fn new(q: Alphabet, mode: Mode, ring: Ring) -> Self {
        Algebra {
            q,
            mode,
            ring,
            rec: WreathRecursion::thue_morse(q),
        }
    }

    pub fn q(&self) -> usize {
        self.q.size()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.q
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    fn check_word(&self, w: &GroupWord) -> Result<GroupWord> {
        w.validate(self.q())?;
        match self.mode {
            Mode::A if w.has_inverse_letters() => Err(Error::InverseInModeA),
            Mode::A => Ok(w.clone()),
            Mode::B => Ok(free_reduce(w)),
        }
    }

    pub fn validate(&self, e: &Element) -> Result<()> {
        for (w, c) in &e.terms {
            if self.check_word(w)? != *w {
                return Err(Error::InvalidArgument(format!(
                    "monomial {w} is not reduced"
                )));
            }
            if c.is_zero() || self.ring.reduce(c.clone()) != *c {
                return Err(Error::InvalidArgument(format!(
                    "coefficient {c} is not canonical"
                )));
            }
        }
        Ok(())
    }

    pub fn one(&self) -> Element {
        self.scalar(Scalar::one())
    }

    pub fn scalar(&self, c: Scalar) -> Element {
        self.term(GroupWord::identity(), c)
    }

    pub fn int(&self, n: i64) -> Element {
        self.scalar(BigRational::from_integer(n.into()))
    }

    fn term(&self, w: GroupWord, c: Scalar) -> Element {
        let c = self.ring.reduce(c);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Element { terms }
    }

    pub fn monomial(&self, w: &GroupWord) -> Result<Element> {
        Ok(self.term(self.check_word(w)?, Scalar::one()))
    }

    pub fn gen(&self, i: usize) -> Result<Element> {
        self.monomial(&GroupWord::gen(i))
    }

    fn add_term(&self, e: &mut Element, w: GroupWord, c: &Scalar) {
        use std::collections::btree_map::Entry;
        match e.terms.entry(w) {
            Entry::Vacant(v) => {
                let c = self.ring.reduce(c.clone());
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = self.ring.add(o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let mut out = a.clone();
        for (w, c) in &b.terms {
            self.add_term(&mut out, w.clone(), c);
        }
        out
    }

    pub fn neg(&self, a: &Element) -> Element {
        Element {
            terms: a
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), self.ring.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Element, c: &Scalar) -> Element {
        let mut out = Element::zero();
        for (w, d) in &a.terms {
            self.add_term(&mut out, w.clone(), &self.ring.mul(c, d));
        }
        out
    }

    fn join(&self, u: &GroupWord, v: &GroupWord) -> GroupWord {
        match self.mode {
            Mode::A => u.concat(v),
            Mode::B => u.mul(v),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (u, c) in &a.terms {
            for (v, d) in &b.terms {
                self.add_term(&mut out, self.join(u, v), &self.ring.mul(c, d));
            }
        }
        out
    }

    /// `a^n`; negative powers are allowed for unit multiples of a monomial
    /// in mode B.
    pub fn pow(&self, a: &Element, n: i64) -> Result<Element> {
        let base = if n < 0 { self.invert(a)? } else { a.clone() };
        let mut result = self.one();
        let mut sq = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(&result, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        Ok(result)
    }

    fn invert(&self, a: &Element) -> Result<Element> {
        let (w, c) = a
            .as_monomial()
            .ok_or_else(|| Error::InvalidArgument(format!("{a} is not invertible")))?;
        if !w.is_empty() && self.mode == Mode::A {
            return Err(Error::InverseInModeA);
        }
        let inv = self
            .ring
            .inverse(c)
            .ok_or_else(|| Error::InvalidArgument(format!("{c} is not invertible")))?;
        Ok(self.term(w.inverse(), inv))
    }

    /// Sum of the coefficients: the algebra map sending every generator to 1.
    /// It vanishes on every iterated kernel of `phi`.
    pub fn augmentation(&self, a: &Element) -> Scalar {
        a.terms
            .values()
            .fold(Scalar::zero(), |acc, c| self.ring.add(&acc, c))
    }

    /// Scales so that the leading (shortlex-least) coefficient is 1.
    pub fn normalize(&self, a: &Element) -> Element {
        match a.leading() {
            None => Element::zero(),
            Some((_, c)) if c.is_one() => a.clone(),
            Some((_, c)) => {
                let inv = self.ring.inverse(c).expect("nonzero leading coefficient");
                // Integers: the class key lives in the field of fractions.
                Element {
                    terms: a
                        .terms
                        .iter()
                        .map(|(w, d)| {
                            let v = match self.ring {
                                Ring::Integers => d * &inv,
                                _ => self.ring.mul(d, &inv),
                            };
                            (w.clone(), v)
                        })
                        .collect(),
                }
            }
        }
    }

    /// The decomposition of an element.
    pub fn phi(&self, a: &Element) -> MatrixDec {
        let q = self.q();
        let mut m = MatrixDec::zero(q);
        for (w, c) in &a.terms {
            for row in 0..q {
                let (s, col) = self.rec.section_at(w, row);
                self.add_term(m.get_mut(row, col), s, c);
            }
        }
        m
    }

    pub fn matrix_mul(&self, a: &MatrixDec, b: &MatrixDec) -> MatrixDec {
        let q = a.q;
        let mut m = MatrixDec::zero(q);
        for i in 0..q {
            for k in 0..q {
                let x = a.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..q {
                    let y = b.get(k, j);
                    if !y.is_zero() {
                        let p = self.mul(x, y);
                        *m.get_mut(i, j) = self.add(m.get(i, j), &p);
                    }
                }
            }
        }
        m
    }

    pub fn matrix_add(&self, a: &MatrixDec, b: &MatrixDec) -> MatrixDec {
        MatrixDec {
            q: a.q,
            entries: a
                .entries
                .iter()
                .zip(&b.entries)
                .map(|(x, y)| self.add(x, y))
                .collect(),
        }
    }

    /// Nonzero entries of `phi^n(a)`, materialized explicitly.
    pub fn phi_power_sparse(&self, a: &Element, n: usize) -> SparseMatrix {
        let q = self.q() as u64;
        let mut cache: HashMap<Element, Vec<(usize, usize, Element)>> = HashMap::new();
        let mut cur: SparseMatrix = if a.is_zero() {
            Vec::new()
        } else {
            vec![(0, 0, a.clone())]
        };
        for _ in 0..n {
            let mut next = Vec::with_capacity(cur.len() * self.q());
            for (r, c, e) in &cur {
                let img = cache.entry(e.clone()).or_insert_with(|| {
                    self.phi(e)
                        .nonzero()
                        .map(|(i, j, x)| (i, j, x.clone()))
                        .collect()
                });
                for (i, j, x) in img.iter() {
                    next.push((r * q + *i as u64, c * q + *j as u64, x.clone()));
                }
            }
            cur = next;
        }
        cur
    }

    /// Decides membership in the union of the iterated kernels of `phi`.
    pub fn is_zero(&self, a: &Element, cap_depth: usize) -> ZeroVerdict {
        // distinct entries of phi^depth(a), each with one position
        let mut level: HashMap<Element, (Vec<usize>, Vec<usize>)> = HashMap::new();
        if !a.is_zero() {
            level.insert(a.clone(), (Vec::new(), Vec::new()));
        }
        for depth in 0..=cap_depth {
            if level.is_empty() {
                return ZeroVerdict::Zero { depth };
            }
            let witness = level
                .iter()
                .filter_map(|(e, p)| e.as_scalar().map(|s| (s, p)))
                .min_by(|x, y| x.1.cmp(y.1));
            if let Some((s, (row, col))) = witness {
                return ZeroVerdict::NonZero {
                    depth,
                    row: row.clone(),
                    col: col.clone(),
                    scalar: s.clone(),
                };
            }
            if depth == cap_depth {
                break;
            }
            let mut next: HashMap<Element, (Vec<usize>, Vec<usize>)> = HashMap::new();
            for (e, (row, col)) in &level {
                for (i, j, x) in self.phi(e).nonzero() {
                    next.entry(x.clone()).or_insert_with(|| {
                        let mut r = row.clone();
                        r.push(i);
                        let mut c = col.clone();
                        c.push(j);
                        (r, c)
                    });
                }
            }
            if next.len() > ENTRY_CAP {
                break;
            }
            level = next;
        }
        ZeroVerdict::Unknown { cap: cap_depth }
    }

    /// Reverses each monomial and inverts its letters.
    pub fn star(&self, a: &Element) -> Result<Element> {
        if self.mode != Mode::B {
            return Err(Error::UnsupportedMode);
        }
        Ok(Element {
            terms: a
                .terms
                .iter()
                .map(|(w, c)| (w.inverse(), c.clone()))
                .collect(),
        })
    }

    pub fn theta(&self, a: &Element) -> Result<Element> {
        let mut out = Element::zero();
        for (w, c) in &a.terms {
            let t = words::theta(w, self.q)?;
            self.add_term(&mut out, self.check_word(&t)?, c);
        }
        Ok(out)
    }

    pub fn gamma(&self, a: &Element, shift: i64) -> Element {
        let mut out = Element::zero();
        for (w, c) in &a.terms {
            self.add_term(&mut out, words::gamma(w, shift, self.q), c);
        }
        out
    }

    /// `theta(s_0) + x1 theta(s_1) + ... + x1^{q-1} theta(s_{q-1})`.
    pub fn sigma(&self, parts: &[Element]) -> Result<Element> {
        if parts.len() != self.q() {
            return Err(Error::InvalidArgument(format!(
                "sigma takes {} arguments, got {}",
                self.q(),
                parts.len()
            )));
        }
        let x1 = self.gen(1)?;
        let mut power = self.one();
        let mut out = Element::zero();
        for s in parts {
            out = self.add(&out, &self.mul(&power, &self.theta(s)?));
            power = self.mul(&power, &x1);
        }
        Ok(out)
    }

    /// `1 - gamma^i((x0 x1 ... x{q-1})^{q^k})`.
    pub fn omega_generator(&self, i: usize, k: u32) -> Element {
        let base = GroupWord((0..self.q()).map(crate::words::Letter::gen).collect());
        let w = base.pow((self.q() as i64).pow(k));
        let w = words::gamma(&w, i as i64, self.q);
        self.sub(&self.one(), &self.term(w, Scalar::one()))
    }

    /// Level `n` of the family built from the base generators with
    /// exponent parameter `k <= k_max` by iterating `gamma^i sigma`.
    /// Tuples are visited lexicographically and at most `size_cap`
    /// syntactically distinct elements are kept.
    pub fn omega(&self, n: usize, k_max: u32, size_cap: usize) -> Result<Vec<Element>> {
        let mut level = vec![Element::zero()];
        'base: for k in 0..=k_max {
            for i in 0..self.q() {
                if level.len() >= size_cap {
                    break 'base;
                }
                let g = self.omega_generator(i, k);
                if !level.contains(&g) {
                    level.push(g);
                }
            }
        }
        for _ in 0..n {
            let mut seen: HashSet<Element> = HashSet::new();
            let mut next = Vec::new();
            let m = level.len();
            let mut idx = vec![0usize; self.q()];
            'tuples: loop {
                let tuple: Vec<Element> = idx.iter().map(|&j| level[j].clone()).collect();
                let s = self.sigma(&tuple)?;
                for i in 0..self.q() {
                    let e = self.gamma(&s, i as i64);
                    if seen.insert(e.clone()) {
                        next.push(e);
                        if next.len() >= size_cap {
                            break 'tuples;
                        }
                    }
                }
                // odometer, last position fastest
                let mut p = self.q();
                loop {
                    if p == 0 {
                        break 'tuples;
                    }
                    p -= 1;
                    idx[p] += 1;
                    if idx[p] < m {
                        break;
                    }
                    idx[p] = 0;
                }
            }
            level = next;
        }
        Ok(level)
    }

    /// Whether every monomial is a single letter or empty.
    fn is_nuclear(&self, e: &Element) -> bool {
        e.is_linear()
    }

    /// Least `n` such that every entry of `phi^n(a)` lies in the span of
    /// `1` and the single letters.
    pub fn contraction_depth(&self, a: &Element, cap: usize) -> Option<usize> {
        let mut level: HashSet<Element> = HashSet::new();
        if !a.is_zero() {
            level.insert(a.clone());
        }
        for depth in 0..=cap {
            if level.iter().all(|e| self.is_nuclear(e)) {
                return Some(depth);
            }
            if depth == cap {
                break;
            }
            let mut next = HashSet::new();
            for e in &level {
                for (_, _, x) in self.phi(e).nonzero() {
                    next.insert(x.clone());
                }
            }
            if next.len() > ENTRY_CAP {
                break;
            }
            level = next;
        }
        None
    }

    /// For each level `0..=depth`, the largest number of nonzero entries in
    /// a row and in a column of `phi^n(a)`.
    pub fn row_col_bound_profile(&self, a: &Element, depth: usize) -> Vec<(usize, usize)> {
        let q = self.q() as u64;
        let mut cache: HashMap<Element, Vec<(usize, usize, Element)>> = HashMap::new();
        let mut cur: SparseMatrix = if a.is_zero() {
            Vec::new()
        } else {
            vec![(0, 0, a.clone())]
        };
        let mut out = Vec::with_capacity(depth + 1);
        for n in 0..=depth {
            let mut rows: HashMap<u64, usize> = HashMap::new();
            let mut cols: HashMap<u64, usize> = HashMap::new();
            for (r, c, _) in &cur {
                *rows.entry(*r).or_default() += 1;
                *cols.entry(*c).or_default() += 1;
            }
            out.push((
                rows.values().copied().max().unwrap_or(0),
                cols.values().copied().max().unwrap_or(0),
            ));
            if n == depth {
                break;
            }
            let mut next = Vec::with_capacity(cur.len() * self.q());
            for (r, c, e) in &cur {
                let img = cache.entry(e.clone()).or_insert_with(|| {
                    self.phi(e)
                        .nonzero()
                        .map(|(i, j, x)| (i, j, x.clone()))
                        .collect()
                });
                for (i, j, x) in img.iter() {
                    next.push((r * q + *i as u64, c * q + *j as u64, x.clone()));
                }
            }
            cur = next;
        }
        out
    }

    /// Parses the grammar `2*x0 x1 - 1 + x1^-1 x0`, with parentheses and
    /// integer powers.
    pub fn parse(&self, src: &str) -> Result<Element> {
        let mut cur = Cursor::new(src)?;
        let e = self.parse_expr(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.error("trailing input"));
        }
        Ok(e)
    }

    fn parse_expr(&self, cur: &mut Cursor) -> Result<Element> {
        let mut negate = false;
        if cur.eat(&Token::Minus) {
            negate = true;
        } else {
            cur.eat(&Token::Plus);
        }
        let mut acc = Element::zero();
        loop {
            let t = self.parse_term(cur)?;
            acc = if negate {
                self.sub(&acc, &t)
            } else {
                self.add(&acc, &t)
            };
            if cur.eat(&Token::Plus) {
                negate = false;
            } else if cur.eat(&Token::Minus) {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_term(&self, cur: &mut Cursor) -> Result<Element> {
        let mut acc = self.parse_factor(cur)?;
        loop {
            if cur.eat(&Token::Star) {
                let f = self.parse_factor(cur)?;
                acc = self.mul(&acc, &f);
                continue;
            }
            match cur.peek() {
                Some(Token::Num(_)) | Some(Token::Letter(_)) | Some(Token::LParen) => {
                    let f = self.parse_factor(cur)?;
                    acc = self.mul(&acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&self, cur: &mut Cursor) -> Result<Element> {
        let atom = match cur.bump() {
            Some(Token::Num(n)) => {
                let mut r = BigRational::from_integer(n);
                if cur.eat(&Token::Slash) {
                    match cur.bump() {
                        Some(Token::Num(d)) if !d.is_zero() => r /= BigRational::from_integer(d),
                        _ => return Err(cur.error("expected nonzero denominator")),
                    }
                }
                self.scalar(self.ring.from_rational(r)?)
            }
            Some(Token::Letter(i)) => self.gen(i)?,
            Some(Token::LParen) => {
                let e = self.parse_expr(cur)?;
                cur.expect(&Token::RParen)?;
                e
            }
            _ => return Err(cur.error("expected a number, a generator or '('")),
        };
        match cur.exponent()? {
            Some(n) => self.pow(&atom, n),
            None => Ok(atom),
        }
    }

    /// `{"q": .., "mode": .., "ring": .., "terms": {monomial: coefficient}}`.
    pub fn to_json(&self, a: &Element) -> serde_json::Value {
        let terms: serde_json::Map<String, serde_json::Value> = a
            .terms
            .iter()
            .map(|(w, c)| (w.to_string(), json!(c.to_string())))
            .collect();
        json!({
            "q": self.q(),
            "mode": format!("{:?}", self.mode),
            "ring": self.ring.to_string(),
            "terms": terms,
        })
    }

    pub fn from_json(&self, v: &serde_json::Value) -> Result<Element> {
        let terms = v
            .get("terms")
            .and_then(|t| t.as_object())
            .ok_or_else(|| Error::InvalidArgument("missing terms object".into()))?;
        let mut out = Element::zero();
        for (w, c) in terms {
            let w = self.check_word(&GroupWord::parse(w)?)?;
            let c = c
                .as_str()
                .ok_or_else(|| Error::InvalidArgument("coefficient must be a string".into()))?;
            let c = self.parse(c)?;
            let c = c.as_scalar().cloned().unwrap_or_else(Scalar::zero);
            self.add_term(&mut out, w, &c);
        }
        Ok(out)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(q: usize, mode: Mode) -> Algebra {
        Algebra::new(Alphabet::new(q).unwrap(), mode, Ring::Rationals)
    }

    #[test]
    fn phi_generators() {
        for q in 2..5 {
            let a = alg(q, Mode::A);
            let m = a.phi(&a.parse("x1").unwrap());
            for i in 0..q {
                for j in 0..q {
                    let expected = if i == (j + 1) % q {
                        a.one()
                    } else {
                        Element::zero()
                    };
                    assert_eq!(*m.get(i, j), expected);
                }
            }
            assert_eq!(a.phi(&a.one()), {
                let mut id = MatrixDec::zero(q);
                for i in 0..q {
                    *id.get_mut(i, i) = a.one();
                }
                id
            });
            if q > 2 {
                assert!(a.phi(&a.parse("x1 - x2").unwrap()).is_zero());
            }
            // 1 - x0: ones on the diagonal, -x_{j+1} at (j+1, j)
            let m = a.phi(&a.parse("1 - x0").unwrap());
            for i in 0..q {
                for j in 0..q {
                    let expected = if i == j {
                        a.one()
                    } else if i == (j + 1) % q {
                        a.neg(&a.gen(i).unwrap())
                    } else {
                        Element::zero()
                    };
                    assert_eq!(*m.get(i, j), expected, "q={q} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn zero_test_examples() {
        let b = alg(3, Mode::B);
        assert!(b.is_zero(&b.parse("x1^3 - 1").unwrap(), 4).is_zero());
        let rel = b.parse("((x0 x1^-1)^3 - 1)((x1^-1 x0)^3 - 1)").unwrap();
        assert!(b.is_zero(&rel, 6).is_zero());
        match b.is_zero(&b.parse("x0 - 1").unwrap(), 4) {
            ZeroVerdict::NonZero {
                depth,
                row,
                col,
                scalar,
            } => {
                assert_eq!(depth, 1);
                assert_eq!(row, col);
                assert_eq!(scalar, -Scalar::one());
            }
            v => panic!("unexpected {v:?}"),
        }
        assert_eq!(
            b.is_zero(&Element::zero(), 3),
            ZeroVerdict::Zero { depth: 0 }
        );
    }

    #[test]
    fn star_examples() {
        let b = alg(2, Mode::B);
        assert_eq!(
            b.star(&b.parse("x0 x1").unwrap()).unwrap(),
            b.parse("x1^-1 x0^-1").unwrap()
        );
        assert_eq!(b.star(&b.one()).unwrap(), b.one());
        let a = alg(2, Mode::A);
        assert_eq!(a.star(&a.one()), Err(Error::UnsupportedMode));
    }

    #[test]
    fn theta_gamma_examples() {
        let a = alg(2, Mode::A);
        assert_eq!(
            a.theta(&a.parse("x0").unwrap()).unwrap(),
            a.parse("x0 x1").unwrap()
        );
        assert_eq!(a.theta(&a.int(2)).unwrap(), a.int(2));
        let a3 = alg(3, Mode::A);
        assert_eq!(
            a3.gamma(&a3.parse("1 - x0").unwrap(), 1),
            a3.parse("1 - x1").unwrap()
        );
    }

    #[test]
    fn sigma_examples() {
        let a = alg(3, Mode::A);
        let z = Element::zero();
        assert_eq!(a.sigma(&[a.one(), z.clone(), z.clone()]).unwrap(), a.one());
        assert_eq!(a.sigma(&[z.clone(), z.clone(), z.clone()]).unwrap(), z);
        assert!(a.sigma(std::slice::from_ref(&z)).is_err());

        let a = alg(2, Mode::A);
        let s = a.parse("1 - x0 x1").unwrap();
        let sg = a.sigma(&[s.clone(), Element::zero()]).unwrap();
        assert_eq!(
            sg,
            a.sub(&a.one(), &a.theta(&a.parse("x0 x1").unwrap()).unwrap())
        );
        let m = a.phi(&sg);
        assert!(m.is_diagonal());
        assert_eq!(*m.get(0, 0), s);
        assert_eq!(*m.get(1, 1), a.parse("1 - x1 x0").unwrap());
    }

    #[test]
    fn omega_base_level() {
        let a = alg(2, Mode::A);
        let o = a.omega(0, 1, 1000).unwrap();
        assert!(o.contains(&Element::zero()));
        assert!(o.contains(&a.parse("1 - (x0 x1)^2").unwrap()));
        assert!(o.contains(&a.parse("1 - (x1 x0)^2").unwrap()));
        let o1 = a.omega(1, 1, 100_000).unwrap();
        assert!(o1.len() <= 2 * o.len().pow(2));
    }

    #[test]
    fn contraction_examples() {
        let a = alg(2, Mode::A);
        assert_eq!(a.contraction_depth(&a.parse("x0").unwrap(), 5), Some(0));
        assert_eq!(a.contraction_depth(&a.parse("x0 x1").unwrap(), 5), Some(1));
        for q in 2..5 {
            let a = alg(q, Mode::A);
            let e = a.parse(&format!("1 - x0^{q}")).unwrap();
            assert_eq!(a.contraction_depth(&e, 5), Some(2), "q={q}");
        }
    }

    #[test]
    fn row_col_examples() {
        let a = alg(3, Mode::A);
        for s in ["x1", "x0"] {
            let p = a.row_col_bound_profile(&a.parse(s).unwrap(), 4);
            assert!(p.iter().all(|&rc| rc == (1, 1)), "{s}: {p:?}");
        }
        let p = a.row_col_bound_profile(&a.parse("1 + x1").unwrap(), 4);
        assert_eq!(p[0], (1, 1));
        assert!(p[1..].iter().all(|&rc| rc == (2, 2)), "{p:?}");
    }

    #[test]
    fn parse_and_display() {
        let b = alg(2, Mode::B);
        let e = b.parse("2*x0 x1 - 1 + x1^-1 x0").unwrap();
        assert_eq!(e.to_string(), "-1 + 2*x0 x1 + x1^-1 x0");
        assert_eq!(b.parse(&e.to_string()).unwrap(), e);
        assert_eq!(b.parse("x0 x0^-1").unwrap(), b.one());
        assert_eq!(b.parse("3/2 x0 - 1/2*x0").unwrap(), b.gen(0).unwrap());
        let a = alg(2, Mode::A);
        assert_eq!(a.parse("x0^-1"), Err(Error::InverseInModeA));
        assert!(a.parse("x2").is_err());
        assert_eq!(b.from_json(&b.to_json(&e)).unwrap(), e);
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Algebra::new(
            Alphabet::new(2).unwrap(),
            Mode::A,
            Ring::prime_field(3).unwrap(),
        );
        assert_eq!(f.parse("3*x0").unwrap(), Element::zero());
        assert_eq!(f.parse("1/2").unwrap(), f.int(2));
        assert_eq!(f.parse("-1").unwrap(), f.int(2));
        assert_eq!(Ring::prime_field(4), Err(Error::NotPrime(4)));
        assert_eq!(Ring::parse("Fp:7").unwrap(), Ring::PrimeField(7));
        assert!(Ring::parse("Fp:9").is_err());
    }
}
