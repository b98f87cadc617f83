//! Exact self-similar characters.
//!
//! A character is determined by its recursion `q chi(s) = sum k(i,j)
//! chi(phi(s)_{ij})`. Starting from an element we close the set of entry
//! classes reachable through `phi`, then solve the resulting linear system
//! exactly, strongly connected component by component.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde_json::json;

use crate::algebra::{Algebra, Element, Ring, Scalar, ZeroVerdict};
use crate::error::{Error, Result};
use crate::group::{is_trivial, Verdict, WreathRecursion};
use crate::words::{GroupWord, Letter};

pub const DEFAULT_CLASS_CAP: usize = 10_000;

/// Exact rational value of a character.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactQ(BigRational);

impl ExactQ {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactQ(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        ExactQ(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactQ(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        ExactQ::new(n, 1)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.0.is_negative()
    }

    pub fn add(&self, other: &ExactQ) -> ExactQ {
        ExactQ(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &ExactQ) -> ExactQ {
        ExactQ(&self.0 - &other.0)
    }

    pub fn mul(&self, other: &ExactQ) -> ExactQ {
        ExactQ(&self.0 * &other.0)
    }

    /// `k` with `denominator = q^k`.
    pub fn q_exponent(&self, q: usize) -> Option<u32> {
        let q = BigInt::from(q);
        let mut d = self.denom().clone();
        let mut k = 0;
        while !d.is_one() {
            if (&d % &q).is_zero() {
                d /= &q;
                k += 1;
            } else {
                return None;
            }
        }
        Some(k)
    }

    /// Membership in the nonnegative rationals with denominator a power
    /// of `q`.
    pub fn in_image(&self, q: usize) -> bool {
        self.is_nonnegative() && self.q_exponent(q).is_some()
    }

    /// `"p/q^k"` when the denominator is a power of `q`, else `"num/den"`.
    pub fn render(&self, q: usize) -> String {
        match self.q_exponent(q) {
            Some(0) => self.numer().to_string(),
            Some(1) => format!("{}/{q}", self.numer()),
            Some(k) => format!("{}/{q}^{k}", self.numer()),
            None => self.to_string(),
        }
    }

    /// Accepts `a`, `a/b` and `a/b^k`.
    pub fn parse(s: &str) -> Result<ExactQ> {
        let bad = || Error::InvalidArgument(format!("bad rational {s:?}"));
        let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
        match s.split_once('/') {
            None => Ok(ExactQ(BigRational::from_integer(int(s)?))),
            Some((n, d)) => {
                let den = match d.split_once('^') {
                    None => int(d)?,
                    Some((b, e)) => {
                        let e: u32 = e.trim().parse().map_err(|_| bad())?;
                        num_traits::pow(int(b)?, e as usize)
                    }
                };
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(ExactQ(BigRational::new(int(n)?, den)))
            }
        }
    }
}

impl From<BigRational> for ExactQ {
    fn from(r: BigRational) -> Self {
        ExactQ(r)
    }
}

impl fmt::Display for ExactQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The weights `k(a, b)` of a self-similar character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    q: usize,
    entries: Vec<ExactQ>,
}

impl Kernel {
    pub fn new(rows: Vec<Vec<ExactQ>>) -> Result<Self> {
        let q = rows.len();
        if q < 2 || rows.iter().any(|r| r.len() != q) {
            return Err(Error::InvalidArgument(
                "kernel must be a square matrix of size at least 2".into(),
            ));
        }
        Ok(Kernel {
            q,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// `delta(a, b)`: the fixed-point character.
    pub fn identity(q: usize) -> Self {
        let entries = (0..q * q)
            .map(|k| {
                if k / q == k % q {
                    ExactQ::one()
                } else {
                    ExactQ::zero()
                }
            })
            .collect();
        Kernel { q, entries }
    }

    /// The constant kernel 1: the spread character on algebras, the
    /// trivial character on groups.
    pub fn ones(q: usize) -> Self {
        Kernel {
            q,
            entries: vec![ExactQ::one(); q * q],
        }
    }

    /// Rows separated by `;`, entries by `,`; also `identity` and `ones`.
    pub fn parse(s: &str, q: usize) -> Result<Self> {
        let k = match s {
            "identity" | "id" => Kernel::identity(q),
            "ones" | "one" => Kernel::ones(q),
            _ => Kernel::new(
                s.split(';')
                    .map(|row| {
                        row.split(',')
                            .map(ExactQ::parse)
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            )?,
        };
        if k.q != q {
            return Err(Error::InvalidArgument(format!(
                "kernel has size {}, expected {q}",
                k.q
            )));
        }
        Ok(k)
    }

    pub fn dim(&self) -> usize {
        self.q
    }

    pub fn get(&self, a: usize, b: usize) -> &ExactQ {
        &self.entries[a * self.q + b]
    }

    pub fn trace(&self) -> ExactQ {
        (0..self.q).fold(ExactQ::zero(), |acc, a| acc.add(self.get(a, a)))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.q).all(|a| (0..a).all(|b| self.get(a, b) == self.get(b, a)))
    }

    /// Exact check through principal minors; `None` for a non-symmetric
    /// kernel.
    pub fn is_positive_semidefinite(&self) -> Option<bool> {
        if !self.is_symmetric() {
            return None;
        }
        let q = self.q;
        for mask in 1u32..(1 << q) {
            let idx: Vec<usize> = (0..q).filter(|i| mask >> i & 1 == 1).collect();
            let m: Vec<Vec<BigRational>> = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.get(i, j).0.clone()).collect())
                .collect();
            if determinant(m).is_negative() {
                return Some(false);
            }
        }
        Some(true)
    }
}

#[allow(clippy::needless_range_loop)]
fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    det
}

/// The character on scalars.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseCharacter {
    /// `0 -> 0`, every nonzero scalar `-> 1`.
    Trivial,
    /// Experimental: `F_p^*` embedded in the complex roots of unity by
    /// sending `generator` to `exp(2 pi i / (p - 1))`. Only scalars can be
    /// evaluated in this mode, since class normalization divides out
    /// scalars.
    UnitEmbedding { p: u64, generator: u64 },
}

/// Exact value of a base character: zero or a root of unity
/// `exp(2 pi i exponent / order)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseValue {
    Zero,
    RootOfUnity { exponent: u64, order: u64 },
}

impl BaseCharacter {
    pub fn unit_embedding(ring: Ring) -> Result<Self> {
        let Ring::PrimeField(p) = ring else {
            return Err(Error::InvalidArgument(
                "unit embedding needs a prime field".into(),
            ));
        };
        let n = p - 1;
        let factors: Vec<u64> = (2..=n)
            .filter(|d| n % d == 0 && (2..*d).all(|e| d % e != 0))
            .collect();
        let generator = (1..p)
            .find(|&g| factors.iter().all(|f| mod_pow(g, n / f, p) != 1))
            .expect("prime fields have primitive roots");
        Ok(BaseCharacter::UnitEmbedding { p, generator })
    }

    pub fn eval(&self, c: &Scalar) -> BaseValue {
        if c.is_zero() {
            return BaseValue::Zero;
        }
        match *self {
            BaseCharacter::Trivial => BaseValue::RootOfUnity {
                exponent: 0,
                order: 1,
            },
            BaseCharacter::UnitEmbedding { p, generator } => {
                let x = c
                    .to_integer()
                    .to_u64()
                    .expect("prime-field scalars are reduced");
                let mut acc = 1;
                let mut k = 0;
                while acc != x % p {
                    acc = acc * generator % p;
                    k += 1;
                }
                BaseValue::RootOfUnity {
                    exponent: k,
                    order: p - 1,
                }
            }
        }
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    b = r as u64;
    b
}

/// How a class's value is obtained.
enum Rule<K> {
    Base(BigRational),
    /// `divisor * v = sum weight * v(child)`.
    Recur(Vec<(BigRational, K)>),
}

/// An evaluated character value with closure statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharValue {
    pub value: ExactQ,
    /// Number of classes in the closed system.
    pub classes: usize,
    /// Largest distance from the input to a class in the closure.
    pub depth: usize,
}

impl CharValue {
    pub fn to_json(&self, q: usize) -> serde_json::Value {
        json!({
            "value": self.value.render(q),
            "num": self.value.numer().to_string(),
            "den": self.value.denom().to_string(),
            "classes_used": self.classes,
            "depth": self.depth,
        })
    }
}

/// Closes the class system reachable from `root` and solves it.
fn solve<K, F>(root: K, divisor: usize, cap: usize, mut expand: F) -> Result<CharValue>
where
    K: Clone + Eq + Hash,
    F: FnMut(&K) -> Result<Rule<K>>,
{
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut depth_of: Vec<usize> = Vec::new();
    let mut rules: Vec<Rule<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(root.clone(), 0);
    depth_of.push(0);
    queue.push_back(root);
    while let Some(key) = queue.pop_front() {
        let id = index[&key];
        let rule = match expand(&key)? {
            Rule::Base(v) => Rule::Base(v),
            Rule::Recur(children) => {
                let mut merged: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (w, child) in children {
                    if w.is_zero() {
                        continue;
                    }
                    let n = index.len();
                    let cid = match index.entry(child) {
                        Entry::Occupied(o) => *o.get(),
                        Entry::Vacant(v) => {
                            if n >= cap {
                                return Err(Error::Inconclusive { cap, reached: n });
                            }
                            queue.push_back(v.key().clone());
                            v.insert(n);
                            depth_of.push(depth_of[id] + 1);
                            n
                        }
                    };
                    *merged.entry(cid).or_insert_with(BigRational::zero) += w;
                }
                Rule::Recur(
                    merged
                        .into_iter()
                        .filter(|(_, w)| !w.is_zero())
                        .map(|(c, w)| (w, c))
                        .collect(),
                )
            }
        };
        debug_assert_eq!(rules.len(), id);
        rules.push(rule);
    }

    let n = rules.len();
    let mut graph: DiGraph<usize, ()> = DiGraph::with_capacity(n, 0);
    let nodes: Vec<NodeIndex> = (0..n).map(|i| graph.add_node(i)).collect();
    for (i, r) in rules.iter().enumerate() {
        if let Rule::Recur(children) = r {
            for (_, c) in children {
                graph.add_edge(nodes[i], nodes[*c], ());
            }
        }
    }
    let divisor = BigRational::from_integer(divisor.into());
    let mut values: Vec<Option<BigRational>> = vec![None; n];
    // components arrive dependencies first
    for scc in tarjan_scc(&graph) {
        let members: Vec<usize> = scc.iter().map(|&v| graph[v]).collect();
        let local: HashMap<usize, usize> =
            members.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let m = members.len();
        let mut a = vec![vec![BigRational::zero(); m + 1]; m];
        for (row, &c) in members.iter().enumerate() {
            match &rules[c] {
                Rule::Base(v) => {
                    a[row][row] = BigRational::one();
                    a[row][m] = v.clone();
                }
                Rule::Recur(children) => {
                    a[row][row] = divisor.clone();
                    for (w, d) in children {
                        match local.get(d) {
                            Some(&col) => a[row][col] -= w,
                            None => {
                                let known = values[*d].as_ref().expect("dependencies solved first");
                                a[row][m] += w * known;
                            }
                        }
                    }
                }
            }
        }
        let sol = gauss(a).ok_or(Error::Singular { classes: n })?;
        for (k, v) in sol.into_iter().enumerate() {
            values[members[k]] = Some(v);
        }
    }
    Ok(CharValue {
        value: ExactQ(values[0].take().expect("root solved")),
        classes: n,
        depth: depth_of.iter().copied().max().unwrap_or(0),
    })
}

/// Solves an augmented `m x (m+1)` system exactly.
#[allow(clippy::needless_range_loop)]
fn gauss(mut a: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let m = a.len();
    for c in 0..m {
        let p = (c..m).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let inv = a[c][c].recip();
        for k in c..=m {
            a[c][k] *= &inv;
        }
        for r in 0..m {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in c..=m {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    Some(a.into_iter().map(|row| row[m].clone()).collect())
}

fn checked_spread(alg: &Algebra, v: CharValue) -> Result<CharValue> {
    if v.value.in_image(alg.q()) {
        Ok(v)
    } else {
        Err(Error::OutsideImage(v.value.to_string()))
    }
}

/// The spread character: constant kernel 1, with every nonzero multiple of
/// a monomial evaluating to 1. Values are checked to be nonnegative with a
/// power of `q` as denominator.
pub fn spread_char(alg: &Algebra, s: &Element, cap: usize) -> Result<CharValue> {
    let root = alg.normalize(s);
    let v = solve(root, alg.q(), cap, |e: &Element| {
        Ok(if e.is_zero() {
            Rule::Base(BigRational::zero())
        } else if e.as_monomial().is_some() {
            Rule::Base(BigRational::one())
        } else {
            Rule::Recur(
                alg.phi(e)
                    .nonzero()
                    .map(|(_, _, x)| (BigRational::one(), alg.normalize(x)))
                    .collect(),
            )
        })
    })?;
    checked_spread(alg, v)
}

/// The spread character evaluated after forcing two levels of the
/// recursion on the input, monomials included. Agrees with
/// [`spread_char`] whenever the recursion is consistent.
pub fn spread_char_expanded(alg: &Algebra, s: &Element, cap: usize) -> Result<CharValue> {
    let q = alg.q();
    let mut total = ExactQ::zero();
    let mut classes = 0;
    let mut depth = 0;
    for (_, _, x) in alg.phi(s).nonzero() {
        for (_, _, y) in alg.phi(x).nonzero() {
            let v = spread_char(alg, y, cap)?;
            total = total.add(&v.value);
            classes = classes.max(v.classes);
            depth = depth.max(v.depth + 2);
        }
    }
    let v = CharValue {
        value: total.mul(&ExactQ::new(1, q * q)),
        classes,
        depth,
    };
    checked_spread(alg, v)
}

/// Character with kernel `k` on the algebra; nonzero scalars evaluate to 1.
pub fn algebra_char(alg: &Algebra, s: &Element, kernel: &Kernel, cap: usize) -> Result<CharValue> {
    check_kernel(kernel, alg.q())?;
    solve(alg.normalize(s), alg.q(), cap, |e: &Element| {
        Ok(if e.is_zero() {
            Rule::Base(BigRational::zero())
        } else if e.as_scalar().is_some() {
            Rule::Base(BigRational::one())
        } else {
            Rule::Recur(
                alg.phi(e)
                    .nonzero()
                    .map(|(i, j, x)| (kernel.get(i, j).0.clone(), alg.normalize(x)))
                    .collect(),
            )
        })
    })
}

fn check_kernel(kernel: &Kernel, q: usize) -> Result<()> {
    if kernel.dim() == q {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "kernel has size {}, expected {q}",
            kernel.dim()
        )))
    }
}

/// Character with kernel `k` on the group: `q chi(g) = sum_a k(a, pi(a))
/// chi(g_a)`, with the identity class evaluating to 1. Classes are freely
/// reduced words; words certified trivial join the identity class.
pub fn group_char(
    r: &WreathRecursion,
    g: &GroupWord,
    kernel: &Kernel,
    cap: usize,
    state_cap: usize,
) -> Result<CharValue> {
    check_kernel(kernel, r.q())?;
    g.validate(r.q())?;
    solve(crate::words::free_reduce(g), r.q(), cap, |w: &GroupWord| {
        if w.is_empty() || is_trivial(r, w, state_cap)? == Verdict::True {
            return Ok(Rule::Base(BigRational::one()));
        }
        Ok(Rule::Recur(
            (0..r.q())
                .map(|a| {
                    let (s, b) = r.section_at(w, a);
                    (kernel.get(a, b).0.clone(), s)
                })
                .collect(),
        ))
    })
}

/// Fraction of the vertices of level `n` fixed by `g`, by direct count.
pub fn fixed_vertex_fraction(r: &WreathRecursion, g: &GroupWord, n: usize) -> ExactQ {
    let q = r.q();
    let total = q.pow(n as u32);
    let mut fixed = 0usize;
    let mut v = vec![0usize; n];
    for code in 0..total {
        let mut c = code;
        for slot in v.iter_mut().rev() {
            *slot = c % q;
            c /= q;
        }
        if r.act(g, &v) == v {
            fixed += 1;
        }
    }
    ExactQ::new(fixed as i64, total as i64)
}

/// Result of the language count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountL {
    pub count: BigUint,
    /// Distinct entry classes at the final level.
    pub classes: usize,
    /// Final classes whose membership the zero test could not settle;
    /// they are not counted.
    pub undecided: usize,
}

/// Depth bound used when reducing an entry to a multiple of `1`, `x0` or
/// `x1`.
pub const COLLAPSE_DEPTH: usize = 12;

/// Whether `e` is a nonzero multiple of `1`, `x0` or `x1` in the quotient
/// by the kernel of iterated `phi`.
fn in_language(alg: &Algebra, e: &Element) -> Option<bool> {
    if e.is_zero() {
        return Some(false);
    }
    if let Some((w, _)) = e.as_monomial() {
        let short = w.is_empty() || *w == GroupWord::gen(0) || *w == GroupWord::gen(1);
        if short {
            return Some(true);
        }
    }
    // a multiple lambda * m must have lambda equal to the augmentation,
    // which is well defined on the quotient
    let lambda = alg.augmentation(e);
    if lambda.is_zero() {
        return Some(false);
    }
    let mut undecided = false;
    for m in [GroupWord::identity(), GroupWord::gen(0), GroupWord::gen(1)] {
        let mono = alg.monomial(&m).expect("positive letters");
        let diff = alg.sub(e, &alg.scale(&mono, &lambda));
        match alg.is_zero(&diff, COLLAPSE_DEPTH) {
            ZeroVerdict::Zero { .. } => return Some(true),
            ZeroVerdict::NonZero { .. } => {}
            ZeroVerdict::Unknown { .. } => undecided = true,
        }
    }
    if undecided {
        None
    } else {
        Some(false)
    }
}

/// Number of positions `(u, v)` of length `k` where `phi^k(s)` is a nonzero
/// multiple of `1`, `x0` or `x1`.
///
/// The matrix is never materialized: a multiset of entry classes is
/// evolved level by level, and `phi` is computed once per class. Classes
/// are processed sequentially; no parallel merge is used.
pub fn count_l(alg: &Algebra, s: &Element, k: usize, cap: usize) -> Result<CountL> {
    let mut level: HashMap<Element, BigUint> = HashMap::new();
    if !s.is_zero() {
        level.insert(alg.normalize(s), BigUint::one());
    }
    let mut cache: HashMap<Element, Vec<Element>> = HashMap::new();
    for _ in 0..k {
        let mut next: HashMap<Element, BigUint> = HashMap::new();
        for (class, count) in &level {
            let children = cache.entry(class.clone()).or_insert_with(|| {
                alg.phi(class)
                    .nonzero()
                    .map(|(_, _, x)| alg.normalize(x))
                    .collect()
            });
            for c in children.iter() {
                *next.entry(c.clone()).or_insert_with(BigUint::zero) += count;
            }
        }
        if next.len() > cap {
            return Err(Error::Inconclusive {
                cap,
                reached: next.len(),
            });
        }
        level = next;
    }
    let mut count = BigUint::zero();
    let mut undecided = 0;
    for (class, n) in &level {
        match in_language(alg, class) {
            Some(true) => count += n,
            Some(false) => {}
            None => undecided += 1,
        }
    }
    Ok(CountL {
        count,
        classes: level.len(),
        undecided,
    })
}

/// `q^k chi_s(s) - count_L(s, k)` across a range of depths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthReport {
    pub chi: ExactQ,
    /// `(k, q^k chi - count)` for each depth.
    pub differences: Vec<(usize, ExactQ)>,
    pub constant: ExactQ,
    pub stable: bool,
}

pub fn growth_constant(
    alg: &Algebra,
    s: &Element,
    k_min: usize,
    k_max: usize,
    cap: usize,
) -> Result<GrowthReport> {
    if k_min >= k_max {
        return Err(Error::InvalidArgument("k_min must be below k_max".into()));
    }
    let chi = spread_char(alg, s, cap)?.value;
    let mut differences = Vec::new();
    for k in k_min..=k_max {
        let c = count_l(alg, s, k, cap)?;
        let scale = ExactQ::new(BigInt::from(alg.q()).pow(k as u32), 1);
        let count = ExactQ::new(BigInt::from(c.count), 1);
        differences.push((k, scale.mul(&chi).sub(&count)));
    }
    let constant = differences.last().expect("nonempty range").1.clone();
    let stable = differences.iter().all(|(_, d)| *d == constant);
    Ok(GrowthReport {
        chi,
        differences,
        constant,
        stable,
    })
}

/// Both sides of the additivity identity for `sigma`, plus the side
/// conditions on each component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditivityReport {
    pub lhs: ExactQ,
    pub components: Vec<ExactQ>,
    pub rhs: ExactQ,
    pub additive: bool,
    /// Per component: `phi(s_i)` is a diagonal matrix.
    pub diagonal: Vec<bool>,
    /// Per component: the value is unchanged under every power of gamma.
    pub gamma_invariant: Vec<bool>,
}

impl AdditivityReport {
    pub fn holds(&self) -> bool {
        self.additive && self.gamma_invariant.iter().all(|&b| b)
    }
}

pub fn additivity_check(alg: &Algebra, parts: &[Element], cap: usize) -> Result<AdditivityReport> {
    let sigma = alg.sigma(parts)?;
    let lhs = spread_char(alg, &sigma, cap)?.value;
    let mut components = Vec::new();
    let mut diagonal = Vec::new();
    let mut gamma_invariant = Vec::new();
    for s in parts {
        let v = spread_char(alg, s, cap)?.value;
        diagonal.push(alg.phi(s).is_diagonal());
        let mut inv = true;
        for i in 1..alg.q() {
            inv &= spread_char(alg, &alg.gamma(s, i as i64), cap)?.value == v;
        }
        gamma_invariant.push(inv);
        components.push(v);
    }
    let rhs = components.iter().fold(ExactQ::zero(), |a, b| a.add(b));
    Ok(AdditivityReport {
        additive: lhs == rhs,
        lhs,
        components,
        rhs,
        diagonal,
        gamma_invariant,
    })
}

/// Outcome of the witness search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Found {
        element: Element,
        value: ExactQ,
        /// The building blocks combined through `sigma`.
        atoms: Vec<Element>,
    },
    NotFound {
        /// Values available as building blocks.
        frontier: Vec<ExactQ>,
        evaluations: usize,
    },
}

/// Searches for an element whose spread character is exactly `target`.
///
/// Building blocks are `x0` (value 1), the elements `1 - gamma^i((x0 ...
/// x{q-1})^{q^j})` (value `2/q^j`) and `1 - w`, `1 + w` for short words
/// `w`. A shortest combination of block values summing to the target is
/// assembled with nested `sigma`, and the result is evaluated before it
/// is returned. `budget` bounds the number of character evaluations.
pub fn theorem_witness(
    alg: &Algebra,
    target: &ExactQ,
    budget: usize,
    cap: usize,
) -> Result<Witness> {
    let q = alg.q();
    let Some(k) = target.q_exponent(q).filter(|_| target.is_nonnegative()) else {
        return Err(Error::OutsideImage(target.to_string()));
    };
    if target.is_zero() {
        return Ok(Witness::Found {
            element: Element::zero(),
            value: ExactQ::zero(),
            atoms: Vec::new(),
        });
    }
    let mut evaluations = 0;
    let mut blocks: BTreeMap<ExactQ, Element> = BTreeMap::new();
    let mut consider = |e: Element, blocks: &mut BTreeMap<ExactQ, Element>| -> Result<bool> {
        if evaluations >= budget {
            return Ok(false);
        }
        evaluations += 1;
        let v = spread_char(alg, &e, cap)?.value;
        if !v.is_zero() && v.q_exponent(q).is_some_and(|e| e <= k) {
            blocks.entry(v).or_insert(e);
        }
        Ok(true)
    };
    consider(alg.gen(0)?, &mut blocks)?;
    for j in 0..=k + 1 {
        consider(alg.omega_generator(0, j), &mut blocks)?;
    }
    let one = alg.one();
    'words: for len in 1..=3usize {
        for code in 0..q.pow(len as u32) {
            let mut c = code;
            let w = GroupWord(
                (0..len)
                    .map(|_| {
                        let l = Letter::gen(c % q);
                        c /= q;
                        l
                    })
                    .collect(),
            );
            let m = alg.monomial(&w)?;
            for e in [alg.sub(&one, &m), alg.add(&one, &m)] {
                if !consider(e, &mut blocks)? {
                    break 'words;
                }
            }
        }
    }

    // coin change over numerators with the common denominator q^k
    let scale = BigInt::from(q).pow(k);
    let to_units = |v: &ExactQ| -> Option<usize> { (v.numer() * &scale / v.denom()).to_usize() };
    let frontier: Vec<ExactQ> = blocks.keys().cloned().collect();
    let goal = to_units(target).ok_or_else(|| Error::InvalidArgument("target too large".into()))?;
    let coins: Vec<(usize, &Element)> = blocks
        .iter()
        .filter_map(|(v, e)| to_units(v).map(|u| (u, e)))
        .filter(|(u, _)| *u > 0 && *u <= goal)
        .collect();
    let mut best: Vec<Option<(usize, usize)>> = vec![None; goal + 1];
    best[0] = Some((0, usize::MAX));
    for t in 1..=goal {
        for (ci, (u, _)) in coins.iter().enumerate() {
            if *u <= t {
                if let Some((n, _)) = best[t - u] {
                    if best[t].is_none_or(|(m, _)| n + 1 < m) {
                        best[t] = Some((n + 1, ci));
                    }
                }
            }
        }
    }
    if best[goal].is_none() {
        return Ok(Witness::NotFound {
            frontier,
            evaluations,
        });
    }
    let mut atoms = Vec::new();
    let mut t = goal;
    while t > 0 {
        let (_, ci) = best[t].expect("reachable");
        atoms.push(coins[ci].1.clone());
        t -= coins[ci].0;
    }
    let element = assemble(alg, &atoms)?;
    let value = spread_char(alg, &element, cap)?.value;
    if value == *target {
        Ok(Witness::Found {
            element,
            value,
            atoms,
        })
    } else {
        Ok(Witness::NotFound {
            frontier,
            evaluations,
        })
    }
}

/// Combines elements into one with nested `sigma`, padding with zeros.
fn assemble(alg: &Algebra, atoms: &[Element]) -> Result<Element> {
    let q = alg.q();
    let mut layer = atoms.to_vec();
    while layer.len() > 1 {
        let mut next = Vec::new();
        for chunk in layer.chunks(q) {
            let mut parts = chunk.to_vec();
            parts.resize(q, Element::zero());
            next.push(alg.sigma(&parts)?);
        }
        layer = next;
    }
    Ok(layer.pop().unwrap_or_default())
}
