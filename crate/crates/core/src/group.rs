//! Wreath recursions and the self-similar groups `G_q`, `H_q`.
//!
//! Elements act on the right on the `q`-regular rooted tree: in a product
//! `gh` the factor `g` acts first, so `v^(gh) = (v^g)^h`. A vertex
//! `a w` is sent to `pi(a) (w)^{g_a}` where `<g_a> pi` is the decomposition,
//! and the wreath product is
//!
//! ```text
//! <g_a> pi  *  <h_a> rho  =  <g_a h_{pi(a)}> (rho . pi)
//! ```
//!
//! With this convention the Thue-Morse substitution splits:
//! `decompose(theta(w)) = <w, gamma(w), ..., gamma^{q-1}(w)>` exactly.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde_json::json;

use crate::error::{Error, Result};
use crate::words::{free_reduce, Alphabet, GroupWord};

/// Default budget of closure states for the word problem.
pub const DEFAULT_STATE_CAP: usize = 100_000;

/// A permutation of `{0, .., q-1}` stored by images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(q: usize) -> Self {
        Permutation((0..q).collect())
    }

    /// `a -> a + k mod q`.
    pub fn shift(q: usize, k: i64) -> Self {
        Permutation(
            (0..q)
                .map(|a| (a as i64 + k).rem_euclid(q as i64) as usize)
                .collect(),
        )
    }

    pub fn transposition(q: usize, i: usize, j: usize) -> Self {
        let mut v: Vec<usize> = (0..q).collect();
        v.swap(i, j);
        Permutation(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, a: usize) -> usize {
        self.0[a]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&a| other.0[a]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut v = vec![0; self.0.len()];
        for (a, &b) in self.0.iter().enumerate() {
            v[b] = a;
        }
        Permutation(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(a, &b)| a == b)
    }
}

/// A decorated permutation `<g_0, .., g_{q-1}> pi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathElement {
    pub sections: Vec<GroupWord>,
    pub perm: Permutation,
}

impl WreathElement {
    pub fn identity(q: usize) -> Self {
        WreathElement {
            sections: vec![GroupWord::identity(); q],
            perm: Permutation::identity(q),
        }
    }

    /// Product in the permutational wreath product, `self` acting first.
    pub fn mul(&self, other: &WreathElement) -> WreathElement {
        let sections = self
            .sections
            .iter()
            .enumerate()
            .map(|(a, s)| s.mul(&other.sections[self.perm.apply(a)]))
            .collect();
        WreathElement {
            sections,
            perm: self.perm.then(&other.perm),
        }
    }

    pub fn inverse(&self) -> WreathElement {
        let mut sections = vec![GroupWord::identity(); self.sections.len()];
        for (a, s) in self.sections.iter().enumerate() {
            sections[self.perm.apply(a)] = s.inverse();
        }
        WreathElement {
            sections,
            perm: self.perm.inverse(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "perm": self.perm.images(),
            "sections": self.sections.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (a, s) in self.sections.iter().enumerate() {
            if a > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ">{:?}", self.perm.images())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecursionName {
    G,
    H,
    Custom(String),
}

/// Images of the generators under the decomposition map.
#[derive(Debug, Clone)]
pub struct WreathRecursion {
    q: Alphabet,
    images: Vec<WreathElement>,
    inverse_images: Vec<WreathElement>,
    pub name: RecursionName,
}

impl WreathRecursion {
    pub fn custom(q: Alphabet, images: Vec<WreathElement>, name: &str) -> Result<Self> {
        let n = q.size();
        if images.len() != n {
            return Err(Error::InvalidArgument(format!(
                "expected {n} generator images, got {}",
                images.len()
            )));
        }
        for img in &images {
            if img.sections.len() != n || img.perm.degree() != n {
                return Err(Error::InvalidArgument(
                    "generator image has the wrong arity".into(),
                ));
            }
            for s in &img.sections {
                s.validate(n)?;
            }
        }
        let images: Vec<WreathElement> = images
            .into_iter()
            .map(|img| WreathElement {
                sections: img.sections.iter().map(free_reduce).collect(),
                perm: img.perm,
            })
            .collect();
        let inverse_images = images.iter().map(WreathElement::inverse).collect();
        Ok(WreathRecursion {
            q,
            images,
            inverse_images,
            name: RecursionName::Custom(name.to_string()),
        })
    }

    /// The Thue-Morse group: `x0 = <x0, .., x{q-1}>(j -> j-1)` and
    /// `x_i = <1, .., 1>(j -> j-1)` for `i >= 1`.
    pub fn thue_morse(q: Alphabet) -> Self {
        let n = q.size();
        let shift = Permutation::shift(n, -1);
        let mut images = vec![WreathElement {
            sections: (0..n).map(GroupWord::gen).collect(),
            perm: shift.clone(),
        }];
        for _ in 1..n {
            images.push(WreathElement {
                sections: vec![GroupWord::identity(); n],
                perm: shift.clone(),
            });
        }
        let mut r = Self::custom(q, images, "G").expect("valid preset");
        r.name = RecursionName::G;
        r
    }

    /// The variant `x0 = <x0^-1, .., x{q-1}^-1>(a_i -> a_{i-1})`,
    /// `x_i = <1, .., 1>(a_0 <-> a_i)`.
    pub fn variant(q: Alphabet) -> Self {
        let n = q.size();
        let mut images = vec![WreathElement {
            sections: (0..n).map(|i| GroupWord::gen(i).inverse()).collect(),
            perm: Permutation::shift(n, -1),
        }];
        for i in 1..n {
            images.push(WreathElement {
                sections: vec![GroupWord::identity(); n],
                perm: Permutation::transposition(n, 0, i),
            });
        }
        let mut r = Self::custom(q, images, "H").expect("valid preset");
        r.name = RecursionName::H;
        r
    }

    /// Every generator acts trivially with trivial sections.
    pub fn trivial(q: Alphabet) -> Self {
        let images = vec![WreathElement::identity(q.size()); q.size()];
        Self::custom(q, images, "trivial").expect("valid preset")
    }

    pub fn q(&self) -> usize {
        self.q.size()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.q
    }

    pub fn generator_image(&self, i: usize) -> &WreathElement {
        &self.images[i]
    }

    fn letter_image(&self, index: usize, inverse: bool) -> &WreathElement {
        if inverse {
            &self.inverse_images[index]
        } else {
            &self.images[index]
        }
    }

    /// Section of `g` at the first-level vertex `a`, and the image of `a`.
    pub fn section_at(&self, g: &GroupWord, a: usize) -> (GroupWord, usize) {
        let mut out = GroupWord::identity();
        let mut v = a;
        for l in g.letters() {
            let img = self.letter_image(l.index, l.inverse);
            out.push_reduced(&img.sections[v]);
            v = img.perm.apply(v);
        }
        (free_reduce(&out), v)
    }

    pub fn decompose(&self, g: &GroupWord) -> Result<WreathElement> {
        g.validate(self.q())?;
        let mut sections = Vec::with_capacity(self.q());
        let mut images = Vec::with_capacity(self.q());
        for a in 0..self.q() {
            let (s, b) = self.section_at(g, a);
            sections.push(s);
            images.push(b);
        }
        Ok(WreathElement {
            sections,
            perm: Permutation(images),
        })
    }

    /// Image of the vertex `v`, computed letter by letter down the tree.
    pub fn act(&self, g: &GroupWord, v: &[usize]) -> Vec<usize> {
        let mut cur = free_reduce(g);
        let mut out = Vec::with_capacity(v.len());
        for &a in v {
            let (s, b) = self.section_at(&cur, a);
            out.push(b);
            cur = s;
        }
        out
    }

    /// Iterated section `g_v`, freely reduced.
    pub fn section(&self, g: &GroupWord, v: &[usize]) -> GroupWord {
        let mut cur = free_reduce(g);
        for &a in v {
            cur = self.section_at(&cur, a).0;
        }
        cur
    }

    pub fn portrait(&self, g: &GroupWord, depth: usize) -> Portrait {
        let g = free_reduce(g);
        let mut perm = Vec::with_capacity(self.q());
        let mut children = Vec::new();
        for a in 0..self.q() {
            let (s, b) = self.section_at(&g, a);
            perm.push(b);
            if depth > 0 {
                children.push(self.portrait(&s, depth - 1));
            }
        }
        Portrait {
            perm: Permutation(perm),
            children,
        }
    }
}

/// Depth-truncated tree of root permutations of all sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Portrait {
    pub perm: Permutation,
    pub children: Vec<Portrait>,
}

impl Portrait {
    pub fn is_trivial(&self) -> bool {
        self.perm.is_identity() && self.children.iter().all(Portrait::is_trivial)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "perm": self.perm.images(),
            "children": self.children.iter().map(Portrait::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Three-valued answer of a semi-decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Unknown { cap: usize },
}

impl Verdict {
    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    pub fn is_false(self) -> bool {
        self == Verdict::False
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True => f.write_str("true"),
            Verdict::False => f.write_str("false"),
            Verdict::Unknown { cap } => write!(f, "unknown(cap={cap})"),
        }
    }
}

/// Decides triviality in the injective quotient by coinduction: a set of
/// reduced words closed under sections, all with trivial root permutation,
/// consists of trivial elements.
pub fn is_trivial(r: &WreathRecursion, g: &GroupWord, cap: usize) -> Result<Verdict> {
    if cap == 0 {
        return Err(Error::InvalidArgument("state cap must be positive".into()));
    }
    g.validate(r.q())?;
    let g = free_reduce(g);
    if g.is_empty() {
        return Ok(Verdict::True);
    }
    let mut seen: HashSet<GroupWord> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(g.clone());
    queue.push_back(g);
    while let Some(w) = queue.pop_front() {
        let mut sections = Vec::with_capacity(r.q());
        for a in 0..r.q() {
            let (s, b) = r.section_at(&w, a);
            if b != a {
                return Ok(Verdict::False);
            }
            sections.push(s);
        }
        for s in sections {
            if !s.is_empty() && seen.insert(s.clone()) {
                if seen.len() > cap {
                    return Ok(Verdict::Unknown { cap });
                }
                queue.push_back(s);
            }
        }
    }
    Ok(Verdict::True)
}

pub fn equal(r: &WreathRecursion, g: &GroupWord, h: &GroupWord, cap: usize) -> Result<Verdict> {
    is_trivial(r, &g.concat(&h.inverse()), cap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Unknown { cap: u64 },
}

/// Least `n <= cap` with `g^n` certified trivial.
pub fn order_of(r: &WreathRecursion, g: &GroupWord, cap: u64, state_cap: usize) -> Result<Order> {
    if cap == 0 {
        return Err(Error::InvalidArgument(
            "order cap must be at least 1".into(),
        ));
    }
    g.validate(r.q())?;
    let g = free_reduce(g);
    let mut power = GroupWord::identity();
    for n in 1..=cap {
        power.push_reduced(&g);
        if is_trivial(r, &power, state_cap)?.is_true() {
            return Ok(Order::Finite(n));
        }
    }
    Ok(Order::Unknown { cap })
}

/// A shortest vertex moved by `g`, searched breadth-first up to `depth_cap`.
pub fn moved_vertex(r: &WreathRecursion, g: &GroupWord, depth_cap: usize) -> Option<Vec<usize>> {
    let g = free_reduce(g);
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(g.clone());
    queue.push_back((g, Vec::new()));
    while let Some((w, path)) = queue.pop_front() {
        if path.len() >= depth_cap {
            continue;
        }
        let mut next = Vec::new();
        for a in 0..r.q() {
            let (s, b) = r.section_at(&w, a);
            let mut p = path.clone();
            p.push(a);
            if b != a {
                return Some(p);
            }
            next.push((s, p));
        }
        for (s, p) in next {
            if !s.is_empty() && seen.insert(s.clone()) {
                queue.push_back((s, p));
            }
        }
    }
    None
}

/// Per level `0..=depth`, the number of vertices whose section is not
/// certified trivial. Sections are tracked as a multiset of words.
pub fn boundedness_profile(
    r: &WreathRecursion,
    g: &GroupWord,
    depth: usize,
    state_cap: usize,
) -> Result<Vec<BigUint>> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    g.validate(r.q())?;
    let mut trivial: HashMap<GroupWord, bool> = HashMap::new();
    let mut level: HashMap<GroupWord, BigUint> = HashMap::new();
    level.insert(free_reduce(g), BigUint::one());
    let mut out = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let mut count = BigUint::zero();
        for (w, c) in &level {
            let t = match trivial.get(w) {
                Some(&t) => t,
                None => {
                    let t = is_trivial(r, w, state_cap)?.is_true();
                    trivial.insert(w.clone(), t);
                    t
                }
            };
            if !t {
                count += c;
            }
        }
        out.push(count);
        if n == depth {
            break;
        }
        let mut next: HashMap<GroupWord, BigUint> = HashMap::new();
        for (w, c) in &level {
            for a in 0..r.q() {
                let s = r.section_at(w, a).0;
                *next.entry(s).or_default() += c;
            }
        }
        level = next;
    }
    Ok(out)
}

/// Representatives of the nucleus together with a closure flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nucleus {
    pub elements: Vec<GroupWord>,
    /// False when the class cap was hit or an equality test was
    /// inconclusive.
    pub closed: bool,
}

struct Classes<'a> {
    r: &'a WreathRecursion,
    reps: Vec<GroupWord>,
    lookup: HashMap<GroupWord, usize>,
    state_cap: usize,
    inconclusive: bool,
}

impl Classes<'_> {
    fn class_of(&mut self, w: &GroupWord) -> Result<usize> {
        let w = free_reduce(w);
        if let Some(&i) = self.lookup.get(&w) {
            return Ok(i);
        }
        for (i, rep) in self.reps.iter().enumerate() {
            match equal(self.r, &w, rep, self.state_cap)? {
                Verdict::True => {
                    self.lookup.insert(w, i);
                    return Ok(i);
                }
                Verdict::False => {}
                Verdict::Unknown { .. } => self.inconclusive = true,
            }
        }
        let i = self.reps.len();
        self.reps.push(w.clone());
        self.lookup.insert(w, i);
        Ok(i)
    }
}

/// Computes the nucleus: the elements that occur as sections at
/// arbitrarily deep levels. Starting from the generators, their inverses
/// and the identity, each round keeps the classes lying on a cycle of the
/// section graph (and everything below them), then adds pairwise products
/// and repeats until nothing new appears.
pub fn nucleus(r: &WreathRecursion, cap: usize, state_cap: usize) -> Result<Nucleus> {
    let mut classes = Classes {
        r,
        reps: Vec::new(),
        lookup: HashMap::new(),
        state_cap,
        inconclusive: false,
    };
    let mut start: Vec<GroupWord> = vec![GroupWord::identity()];
    for i in 0..r.q() {
        start.push(GroupWord::gen(i));
        start.push(GroupWord::gen(i).inverse());
    }
    let mut seeds = Vec::new();
    for w in &start {
        seeds.push(classes.class_of(w)?);
    }
    let mut edges: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut current: Vec<usize> = Vec::new();
    let mut closed = true;
    loop {
        let Some(core) = section_core(&mut classes, &mut edges, &seeds, cap)? else {
            closed = false;
            break;
        };
        if core == current {
            break;
        }
        current = core;
        let mut next = current.clone();
        for &a in &current {
            for &b in &current {
                let p = classes.reps[a].mul(&classes.reps[b]);
                next.push(classes.class_of(&p)?);
                if classes.reps.len() > cap {
                    closed = false;
                    break;
                }
            }
        }
        if !closed {
            break;
        }
        next.sort_unstable();
        next.dedup();
        seeds = next;
    }
    let mut elements: Vec<GroupWord> = current.iter().map(|&i| classes.reps[i].clone()).collect();
    elements.sort();
    Ok(Nucleus {
        elements,
        closed: closed && !classes.inconclusive,
    })
}

/// Classes reachable from `seeds` that lie on a cycle of the section graph,
/// closed under taking sections. `None` when more than `cap` classes appear.
fn section_core(
    classes: &mut Classes<'_>,
    edges: &mut HashMap<usize, Vec<usize>>,
    seeds: &[usize],
    cap: usize,
) -> Result<Option<Vec<usize>>> {
    let mut reach: Vec<usize> = Vec::new();
    let mut seen = HashSet::new();
    let mut queue: VecDeque<usize> = seeds.iter().copied().collect();
    for &s in seeds {
        seen.insert(s);
    }
    while let Some(c) = queue.pop_front() {
        reach.push(c);
        if let std::collections::hash_map::Entry::Vacant(e) = edges.entry(c) {
            let w = classes.reps[c].clone();
            let mut out = Vec::with_capacity(classes.r.q());
            for a in 0..classes.r.q() {
                let s = classes.r.section_at(&w, a).0;
                out.push(classes.class_of(&s)?);
            }
            if classes.reps.len() > cap {
                return Ok(None);
            }
            e.insert(out);
        }
        for &d in &edges[&c] {
            if seen.insert(d) {
                queue.push_back(d);
            }
        }
    }

    let mut graph = DiGraph::<usize, ()>::new();
    let idx: HashMap<usize, _> = reach.iter().map(|&c| (c, graph.add_node(c))).collect();
    for &c in &reach {
        for &d in &edges[&c] {
            graph.add_edge(idx[&c], idx[&d], ());
        }
    }
    let mut cyclic = Vec::new();
    for scc in tarjan_scc(&graph) {
        let n = scc[0];
        if scc.len() > 1 || graph.contains_edge(n, n) {
            cyclic.extend(scc.iter().map(|&n| graph[n]));
        }
    }
    let mut core: HashSet<usize> = HashSet::new();
    let mut stack = cyclic;
    while let Some(c) = stack.pop() {
        if core.insert(c) {
            stack.extend(edges[&c].iter().copied());
        }
    }
    let mut core: Vec<usize> = core.into_iter().collect();
    core.sort_unstable();
    Ok(Some(core))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{gamma, theta};

    fn w(s: &str) -> GroupWord {
        GroupWord::parse(s).unwrap()
    }

    fn g(q: usize) -> WreathRecursion {
        WreathRecursion::thue_morse(Alphabet::new(q).unwrap())
    }

    #[test]
    fn decompose_generators() {
        let d = g(2).decompose(&w("x0")).unwrap();
        assert_eq!(d.sections, vec![w("x0"), w("x1")]);
        assert_eq!(d.perm.images(), &[1, 0]);

        let d = g(3).decompose(&w("1")).unwrap();
        assert_eq!(d, WreathElement::identity(3));

        let d = g(2).decompose(&w("x1 x1")).unwrap();
        assert_eq!(d, WreathElement::identity(2));

        assert!(g(2).decompose(&w("x2")).is_err());
    }

    #[test]
    fn wreath_product_matches_word_product() {
        let r = g(3);
        let a = w("x0 x1^-1 x0");
        let b = w("x2 x0^-1");
        let lhs = r.decompose(&a.concat(&b)).unwrap();
        let rhs = r.decompose(&a).unwrap().mul(&r.decompose(&b).unwrap());
        assert_eq!(lhs, rhs);
        let inv = r.decompose(&a).unwrap().inverse();
        assert_eq!(inv, r.decompose(&a.inverse()).unwrap());
    }

    #[test]
    fn theta_splits_diagonally() {
        for q in 2..6 {
            let r = g(q);
            let a = Alphabet::new(q).unwrap();
            for s in ["x0", "x1", "x0 x1^-1 x0", "x2^-1 x0"] {
                let s = w(s);
                if s.validate(q).is_err() {
                    continue;
                }
                let d = r.decompose(&theta(&s, a).unwrap()).unwrap();
                assert!(d.perm.is_identity());
                for i in 0..q {
                    assert_eq!(d.sections[i], free_reduce(&gamma(&s, i as i64, a)));
                }
            }
        }
    }

    #[test]
    fn act_examples() {
        let r = g(2);
        assert_eq!(r.act(&w("1"), &[0, 1, 1]), vec![0, 1, 1]);
        // trivial sections: only the first letter moves
        assert_eq!(r.act(&w("x1"), &[0, 0]), vec![1, 0]);
        assert_eq!(r.act(&w("x0"), &[0, 0]), vec![1, 1]);
        assert_eq!(r.act(&w("x0"), &[0]), vec![1]);
    }

    #[test]
    fn section_examples() {
        let r = g(2);
        assert_eq!(r.section(&w("x0 x1"), &[]), w("x0 x1"));
        assert_eq!(r.section(&w("x0"), &[0]), w("x0"));
        assert_eq!(r.section(&w("x0"), &[1]), w("x1"));
        assert_eq!(r.section(&w("x0"), &[0, 0]), w("x0"));
    }

    #[test]
    fn word_problem_examples() {
        let r = g(3);
        let cap = DEFAULT_STATE_CAP;
        assert_eq!(is_trivial(&r, &w("x1 x2^-1"), cap).unwrap(), Verdict::True);
        assert_eq!(is_trivial(&r, &w("x1^3"), cap).unwrap(), Verdict::True);
        assert_eq!(is_trivial(&r, &w("x0"), cap).unwrap(), Verdict::False);
        let c = w("[(x0 x1^-1)^3, (x1^-1 x0)^3]");
        assert_eq!(is_trivial(&r, &c, cap).unwrap(), Verdict::True);
        assert!(is_trivial(&r, &w("x0"), 0).is_err());
    }

    #[test]
    fn equality_examples() {
        let r = g(3);
        let cap = DEFAULT_STATE_CAP;
        let a = w("x0 x2 x1^-1");
        assert_eq!(equal(&r, &a, &a, cap).unwrap(), Verdict::True);
        assert_eq!(equal(&r, &w("x1"), &w("x2"), cap).unwrap(), Verdict::True);
        assert_eq!(equal(&r, &w("x0"), &w("x1"), cap).unwrap(), Verdict::False);
    }

    #[test]
    fn orders() {
        let cap = DEFAULT_STATE_CAP;
        assert_eq!(
            order_of(&g(3), &w("x1"), 10, cap).unwrap(),
            Order::Finite(3)
        );
        assert_eq!(order_of(&g(3), &w("1"), 10, cap).unwrap(), Order::Finite(1));
        assert_eq!(
            order_of(&g(2), &w("x0"), 20, cap).unwrap(),
            Order::Unknown { cap: 20 }
        );
    }

    #[test]
    fn moved_vertices() {
        let r = g(2);
        assert_eq!(moved_vertex(&r, &w("x0"), 8), Some(vec![0]));
        assert_eq!(moved_vertex(&r, &w("1"), 8), None);
        let t = theta(&w("x0"), Alphabet::new(2).unwrap()).unwrap();
        assert_eq!(moved_vertex(&r, &t.concat(&w("x0 x1").inverse()), 12), None);
        // x0 x1 fixes the first level and moves every vertex of the second
        assert_eq!(moved_vertex(&r, &w("x0 x1"), 8), Some(vec![0, 0]));
    }

    #[test]
    fn nucleus_of_presets() {
        for q in 2..5 {
            let n = nucleus(&g(q), 1000, DEFAULT_STATE_CAP).unwrap();
            assert!(n.closed);
            let mut expected = vec![w("1"), w("x0"), w("x0^-1"), w("x1")];
            if q > 2 {
                expected.push(w("x1^-1"));
            }
            expected.sort();
            assert_eq!(n.elements, expected, "q={q}");
        }
        let t = nucleus(
            &WreathRecursion::trivial(Alphabet::new(3).unwrap()),
            100,
            1000,
        )
        .unwrap();
        assert_eq!(t.elements, vec![w("1")]);
        let h = nucleus(
            &WreathRecursion::variant(Alphabet::new(2).unwrap()),
            1000,
            1000,
        )
        .unwrap();
        assert_eq!(h.elements, nucleus(&g(2), 1000, 1000).unwrap().elements);
    }

    #[test]
    fn boundedness() {
        let r = g(3);
        let p = boundedness_profile(&r, &w("x1"), 6, 1000).unwrap();
        assert!(p[1..].iter().all(|c| c.is_zero()));
        let p = boundedness_profile(&r, &w("x0"), 6, 1000).unwrap();
        assert!(p.iter().all(|c| *c <= BigUint::from(3u32)));
        let p = boundedness_profile(&r, &w("1"), 4, 1000).unwrap();
        assert!(p.iter().all(|c| c.is_zero()));
        assert!(boundedness_profile(&r, &w("x0"), 0, 1000).is_err());
    }

    #[test]
    fn portraits() {
        let r = g(2);
        assert!(r.portrait(&w("1"), 2).is_trivial());
        let p = r.portrait(&w("x0"), 1);
        assert_eq!(p.perm.images(), &[1, 0]);
        assert_eq!(p.children[0].perm.images(), &[1, 0]);
        assert_eq!(p.children[1].perm.images(), &[1, 0]);
        // sections of x0^2 are x0 x1 and x1 x0, both fixing the first level
        let p = r.portrait(&w("x0^2"), 1);
        assert!(p.perm.is_identity());
        assert!(p.children.iter().all(|c| c.perm.is_identity()));
    }

    #[test]
    fn verdict_rendering() {
        assert_eq!(Verdict::True.to_string(), "true");
        assert_eq!(Verdict::Unknown { cap: 7 }.to_string(), "unknown(cap=7)");
    }
}
