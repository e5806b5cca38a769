//! Open subsets of the Cantor space `{0,1}^ℕ`.
//!
//! A [`CylTree`] is a prefix tree whose internal nodes may point back to
//! earlier nodes, so one finite graph describes the clopen sets, the
//! complement of an eventually periodic point, and self-similar periodic
//! families alike. A node stands for the residual set below some word `w`;
//! `Covered` nodes are cylinders inside the set and `Empty` nodes are
//! cylinders disjoint from it. Every tree is kept in a canonical minimal
//! form, so two trees are equal exactly when they present the same open set.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over `{0,1}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitWord(Vec<u8>);

impl BitWord {
    pub fn new() -> BitWord {
        BitWord(Vec::new())
    }

    pub fn from_bits(bits: Vec<u8>) -> BitWord {
        assert!(bits.iter().all(|&b| b <= 1), "bits must be 0 or 1");
        BitWord(bits)
    }

    /// The `len`-bit word whose bits spell `value` in big-endian order.
    pub fn from_index(value: u64, len: usize) -> BitWord {
        BitWord((0..len).map(|i| ((value >> (len - 1 - i)) & 1) as u8).collect())
    }

    /// All words of length `len` in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = BitWord> {
        (0..1u64 << len).map(move |v| BitWord::from_index(v, len))
    }

    pub fn zeros(len: usize) -> BitWord {
        BitWord(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn push(&mut self, bit: u8) {
        assert!(bit <= 1);
        self.0.push(bit);
    }

    pub fn concat(&self, other: &BitWord) -> BitWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BitWord(v)
    }

    pub fn is_prefix_of(&self, other: &BitWord) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn xor_prefix(&self, x: &CantorPoint) -> BitWord {
        BitWord(self.0.iter().enumerate().map(|(i, b)| b ^ x.bit(i)).collect())
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("invalid bit `{c}` in word `{s}`"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BitWord)
    }
}

impl Serialize for BitWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// An eventually periodic sequence `pre ⌢ period ⌢ period ⌢ …`, kept with
/// a primitive period and the shortest possible preperiod.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CantorPoint {
    pre: BitWord,
    period: BitWord,
}

impl CantorPoint {
    pub fn new(pre: BitWord, period: BitWord) -> Result<CantorPoint> {
        if period.is_empty() {
            return Err(Error::Parse("period of a Cantor point must be nonempty".into()));
        }
        let mut period = period.0;
        let n = period.len();
        if let Some(d) = (1..n).find(|d| n.is_multiple_of(*d) && period.chunks(*d).all(|c| c == &period[..*d])) {
            period.truncate(d);
        }
        let mut pre = pre.0;
        while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
            if a != b {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Ok(CantorPoint { pre: BitWord(pre), period: BitWord(period) })
    }

    pub fn zero() -> CantorPoint {
        CantorPoint { pre: BitWord::new(), period: BitWord(vec![0]) }
    }

    pub fn constant(bit: u8) -> CantorPoint {
        CantorPoint { pre: BitWord::new(), period: BitWord(vec![bit]) }
    }

    pub fn pre(&self) -> &BitWord {
        &self.pre
    }

    pub fn period(&self) -> &BitWord {
        &self.period
    }

    /// Number of distinct positions of the lasso `pre ⌢ period^ω`.
    pub fn lasso_len(&self) -> usize {
        self.pre.len() + self.period.len()
    }

    /// Lasso position of coordinate `i`.
    pub fn position(&self, i: usize) -> usize {
        if i < self.pre.len() {
            i
        } else {
            self.pre.len() + (i - self.pre.len()) % self.period.len()
        }
    }

    pub fn next_position(&self, p: usize) -> usize {
        if p + 1 < self.lasso_len() {
            p + 1
        } else {
            self.pre.len()
        }
    }

    pub fn bit_at_position(&self, p: usize) -> u8 {
        if p < self.pre.len() {
            self.pre.0[p]
        } else {
            self.period.0[p - self.pre.len()]
        }
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.bit_at_position(self.position(i))
    }

    /// `x|len`
    pub fn prefix(&self, len: usize) -> BitWord {
        BitWord((0..len).map(|i| self.bit(i)).collect())
    }

    /// Coordinatewise sum mod 2.
    pub fn xor(&self, other: &CantorPoint) -> CantorPoint {
        // the sum is periodic from max(pre) with period lcm(periods)
        let start = self.pre.len().max(other.pre.len());
        let (p, q) = (self.period.len(), other.period.len());
        let lcm = p / gcd(p, q) * q;
        let bits = |range: std::ops::Range<usize>| -> BitWord {
            BitWord(range.map(|i| self.bit(i) ^ other.bit(i)).collect())
        };
        CantorPoint::new(bits(0..start), bits(start..start + lcm)).expect("nonempty period")
    }

    /// Every point with `|pre| <= max_pre` and `|period| <= max_period`,
    /// deduplicated after canonicalization and sorted.
    pub fn enumerate(max_pre: usize, max_period: usize) -> Vec<CantorPoint> {
        let mut out = BTreeSet::new();
        for a in 0..=max_pre {
            for pre in BitWord::all(a) {
                for b in 1..=max_period {
                    for period in BitWord::all(b) {
                        out.insert(CantorPoint::new(pre.clone(), period).expect("nonempty period"));
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.pre, self.period)
    }
}

impl fmt::Debug for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `pre(period)`, e.g. `01(10)` for `0 1 1 0 1 0 …`.
impl FromStr for CantorPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected a Cantor point `pre(period)`, got `{s}`"));
        let (pre, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let period = rest.strip_suffix(')').ok_or_else(bad)?;
        CantorPoint::new(pre.parse()?, period.parse()?)
    }
}

impl<'de> Deserialize<'de> for CantorPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(default)]
            pre: BitWord,
            period: BitWord,
        }
        let raw = Raw::deserialize(deserializer)?;
        CantorPoint::new(raw.pre, raw.period).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CylStatus {
    Covered,
    Empty,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Node {
    Covered,
    Empty,
    Split([usize; 2]),
}

/// Canonical presentation of an open subset of the Cantor space. The root
/// is node `0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CylTree {
    nodes: Vec<Node>,
}

impl fmt::Debug for CylTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.covered_antichain() {
            Some(words) => write!(f, "CylTree{words:?}"),
            None => write!(f, "CylTree(lazy, {} nodes)", self.nodes.len()),
        }
    }
}

impl CylTree {
    pub fn empty() -> CylTree {
        CylTree { nodes: vec![Node::Empty] }
    }

    pub fn full() -> CylTree {
        CylTree { nodes: vec![Node::Covered] }
    }

    /// `⋃ U(w)` over a prefix-free set of words.
    pub fn from_antichain<'a>(words: impl IntoIterator<Item = &'a BitWord>) -> Result<CylTree> {
        let words: Vec<&BitWord> = words.into_iter().collect();
        for (a, wa) in words.iter().enumerate() {
            for wb in &words[a + 1..] {
                if wa.is_prefix_of(wb) || wb.is_prefix_of(wa) {
                    return Err(Error::ComparableWords(wa.to_string(), wb.to_string()));
                }
            }
        }
        // raw trie: index 0 = root, 1 = shared Empty, 2 = shared Covered
        let mut nodes = vec![Node::Empty, Node::Empty, Node::Covered];
        for w in words {
            if w.is_empty() {
                return Ok(CylTree::full());
            }
            let mut at = 0;
            for (depth, &b) in w.bits().iter().enumerate() {
                let last = depth + 1 == w.len();
                if nodes[at] == Node::Empty {
                    nodes[at] = Node::Split([1, 1]);
                }
                let Node::Split(mut kids) = nodes[at] else { unreachable!() };
                let next = if last {
                    2
                } else if kids[b as usize] == 1 {
                    nodes.push(Node::Empty);
                    nodes.len() - 1
                } else {
                    kids[b as usize]
                };
                kids[b as usize] = next;
                nodes[at] = Node::Split(kids);
                at = next;
            }
        }
        Ok(canonicalize(nodes, 0))
    }

    /// `{0,1}^ℕ ∖ {x}`.
    pub fn co_point(x: &CantorPoint) -> CylTree {
        let n = x.lasso_len();
        let covered = n;
        let mut nodes: Vec<Node> = (0..n)
            .map(|p| {
                let mut kids = [covered; 2];
                kids[x.bit_at_position(p) as usize] = x.next_position(p);
                Node::Split(kids)
            })
            .collect();
        nodes.push(Node::Covered);
        canonicalize(nodes, 0)
    }

    /// `⋃_{m ≥ 0} ⋃_{a ∈ words} U(period^m ⌢ a)`.
    pub fn periodic_rule(period: &BitWord, words: &[BitWord]) -> Result<CylTree> {
        if period.is_empty() {
            return Err(Error::Unsupported("periodic rule needs a nonempty period".into()));
        }
        // Trie over words ∪ {period}; reading the last bit of the period
        // also re-enters the root.
        let mut children: Vec<[Option<usize>; 2]> = vec![[None, None]];
        let mut accept = vec![false];
        let insert = |w: &BitWord, children: &mut Vec<[Option<usize>; 2]>, accept: &mut Vec<bool>| {
            let mut at = 0;
            for &b in w.bits() {
                at = match children[at][b as usize] {
                    Some(c) => c,
                    None => {
                        children.push([None, None]);
                        accept.push(false);
                        let c = children.len() - 1;
                        children[at][b as usize] = Some(c);
                        c
                    }
                };
            }
            at
        };
        for w in words {
            let end = insert(w, &mut children, &mut accept);
            accept[end] = true;
        }
        let loop_end = insert(period, &mut children, &mut accept);

        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut raw: Vec<Node> = Vec::new();
        let mut queue = VecDeque::new();
        let start: BTreeSet<usize> = [0].into();
        index.insert(start.clone(), 0);
        raw.push(Node::Empty);
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            let id = index[&set];
            if set.iter().any(|&s| accept[s]) {
                raw[id] = Node::Covered;
                continue;
            }
            if set.is_empty() {
                raw[id] = Node::Empty;
                continue;
            }
            let mut kids = [0usize; 2];
            for b in 0..2 {
                let mut next = BTreeSet::new();
                for &s in &set {
                    if let Some(c) = children[s][b] {
                        next.insert(c);
                        if c == loop_end {
                            next.insert(0);
                        }
                    }
                }
                kids[b] = *index.entry(next.clone()).or_insert_with(|| {
                    raw.push(Node::Empty);
                    queue.push_back(next);
                    raw.len() - 1
                });
            }
            raw[id] = Node::Split(kids);
        }
        Ok(canonicalize(raw, 0))
    }

    fn product(&self, other: &CylTree, leaf: impl Fn(Node, Node) -> Option<Node>) -> CylTree {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut raw = vec![Node::Empty];
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        index.insert((0, 0), 0);
        while let Some((a, b)) = queue.pop_front() {
            let id = index[&(a, b)];
            let (na, nb) = (self.nodes[a], other.nodes[b]);
            if let Some(l) = leaf(na, nb) {
                raw[id] = l;
                continue;
            }
            let kid = |n: Node, own: usize, bit: usize| match n {
                Node::Split(k) => k[bit],
                _ => own,
            };
            let mut kids = [0; 2];
            for bit in 0..2 {
                let key = (kid(na, a, bit), kid(nb, b, bit));
                kids[bit] = *index.entry(key).or_insert_with(|| {
                    raw.push(Node::Empty);
                    queue.push_back(key);
                    raw.len() - 1
                });
            }
            raw[id] = Node::Split(kids);
        }
        canonicalize(raw, 0)
    }

    pub fn union(&self, other: &CylTree) -> CylTree {
        self.product(other, |a, b| match (a, b) {
            (Node::Covered, _) | (_, Node::Covered) => Some(Node::Covered),
            (Node::Empty, Node::Empty) => Some(Node::Empty),
            _ => None,
        })
    }

    pub fn intersection(&self, other: &CylTree) -> CylTree {
        self.product(other, |a, b| match (a, b) {
            (Node::Empty, _) | (_, Node::Empty) => Some(Node::Empty),
            (Node::Covered, Node::Covered) => Some(Node::Covered),
            _ => None,
        })
    }

    pub fn is_subset(&self, other: &CylTree) -> bool {
        self.intersection(other) == *self
    }

    /// The exterior `(cl T)^c`, i.e. the regular open kernel of the
    /// complement of `T`.
    pub fn exterior(&self) -> CylTree {
        let swapped = self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Covered => Node::Empty,
                Node::Empty => Node::Covered,
                split => *split,
            })
            .collect();
        canonicalize(swapped, 0)
    }

    /// `int(cl(T))`. A node is covered by the kernel exactly when no `Empty`
    /// node is reachable below it; for these finite presentations the
    /// saturation is exact at every depth.
    pub fn regular_open_kernel(&self) -> CylTree {
        let reaches_empty = self.reaches(|n| n == Node::Empty);
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| if reaches_empty[i] { *n } else { Node::Covered })
            .collect();
        canonicalize(nodes, 0)
    }

    /// `T − x = T + x`: node `w` of the result has the status of `w ⊕ x|{|w|}`.
    pub fn translate(&self, x: &CantorPoint) -> CylTree {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut raw = vec![Node::Empty];
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        index.insert((0, 0), 0);
        while let Some((node, pos)) = queue.pop_front() {
            let id = index[&(node, pos)];
            let Node::Split(kids) = self.nodes[node] else {
                raw[id] = self.nodes[node];
                continue;
            };
            let mut out = [0; 2];
            for b in 0..2 {
                let key = (kids[b ^ x.bit_at_position(pos) as usize], x.next_position(pos));
                out[b] = *index.entry(key).or_insert_with(|| {
                    raw.push(Node::Empty);
                    queue.push_back(key);
                    raw.len() - 1
                });
            }
            raw[id] = Node::Split(out);
        }
        canonicalize(raw, 0)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> usize {
        0
    }

    /// State reached after reading `bit` at `state`.
    pub fn step(&self, state: usize, bit: u8) -> usize {
        match self.nodes[state] {
            Node::Split(k) => k[bit as usize],
            _ => state,
        }
    }

    pub fn walk(&self, state: usize, w: &BitWord) -> usize {
        w.bits().iter().fold(state, |s, &b| self.step(s, b))
    }

    pub fn state_status(&self, state: usize) -> CylStatus {
        match self.nodes[state] {
            Node::Covered => CylStatus::Covered,
            Node::Empty => CylStatus::Empty,
            Node::Split(_) => CylStatus::Mixed,
        }
    }

    /// Status of `T ∩ U(w)`.
    pub fn cylinder_status(&self, w: &BitWord) -> CylStatus {
        self.state_status(self.walk(0, w))
    }

    /// Shortest number of further bits after which some cylinder below
    /// each state is disjoint from the set; `None` if none ever is.
    pub fn distance_to_empty(&self) -> Vec<Option<usize>> {
        let n = self.nodes.len();
        let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, node) in self.nodes.iter().enumerate() {
            if let Node::Split(k) = node {
                parents[k[0]].push(i);
                parents[k[1]].push(i);
            }
        }
        let mut dist = vec![None; n];
        let mut queue = VecDeque::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if *node == Node::Empty {
                dist[i] = Some(0);
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            let d = dist[i].expect("queued nodes have distances");
            for &p in &parents[i] {
                if dist[p].is_none() {
                    dist[p] = Some(d + 1);
                    queue.push_back(p);
                }
            }
        }
        dist
    }

    fn reaches(&self, target: impl Fn(Node) -> bool) -> Vec<bool> {
        let mut hit: Vec<bool> = self.nodes.iter().map(|&n| target(n)).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for (i, node) in self.nodes.iter().enumerate() {
                if let Node::Split([a, b]) = node {
                    if !hit[i] && (hit[*a] || hit[*b]) {
                        hit[i] = true;
                        changed = true;
                    }
                }
            }
        }
        hit
    }

    /// Walks `x` from `state` until a leaf decides, or the (node, lasso
    /// position) pair repeats; `on_cycle` answers in the latter case.
    fn run_point(&self, x: &CantorPoint, on_cycle: bool) -> (bool, bool) {
        let mut seen = BTreeSet::new();
        let (mut state, mut pos) = (0, 0);
        loop {
            match self.nodes[state] {
                Node::Covered => return (true, true),
                Node::Empty => return (false, false),
                Node::Split(k) => {
                    if !seen.insert((state, pos)) {
                        return (false, on_cycle);
                    }
                    state = k[x.bit_at_position(pos) as usize];
                    pos = x.next_position(pos);
                }
            }
        }
    }

    pub fn contains(&self, x: &CantorPoint) -> bool {
        self.run_point(x, false).0
    }

    pub fn closure_contains(&self, x: &CantorPoint) -> bool {
        self.run_point(x, true).1
    }

    /// True when the set is clopen, i.e. the tree has no cycles.
    pub fn is_clopen(&self) -> bool {
        self.depth().is_some()
    }

    /// Length of the longest path to a leaf, or `None` for cyclic trees.
    pub fn depth(&self) -> Option<usize> {
        fn visit(t: &CylTree, i: usize, on_stack: &mut Vec<bool>, memo: &mut Vec<Option<usize>>) -> Option<usize> {
            if let Some(d) = memo[i] {
                return Some(d);
            }
            let Node::Split([a, b]) = t.nodes[i] else {
                memo[i] = Some(0);
                return Some(0);
            };
            if on_stack[i] {
                return None;
            }
            on_stack[i] = true;
            let d = 1 + visit(t, a, on_stack, memo)?.max(visit(t, b, on_stack, memo)?);
            on_stack[i] = false;
            memo[i] = Some(d);
            Some(d)
        }
        let n = self.nodes.len();
        visit(self, 0, &mut vec![false; n], &mut vec![None; n])
    }

    /// The maximal covered cylinders of a clopen tree, lexicographically.
    pub fn covered_antichain(&self) -> Option<Vec<BitWord>> {
        self.depth()?;
        let mut out = Vec::new();
        let mut stack = vec![(0usize, BitWord::new())];
        while let Some((i, w)) = stack.pop() {
            match self.nodes[i] {
                Node::Covered => out.push(w),
                Node::Empty => {}
                Node::Split([a, b]) => {
                    let mut w1 = w.clone();
                    w1.push(1);
                    let mut w0 = w;
                    w0.push(0);
                    stack.push((b, w1));
                    stack.push((a, w0));
                }
            }
        }
        Some(out)
    }

    /// Labels of every node of the explicit prefix tree down to `depth`,
    /// stopping below decided cylinders.
    pub fn labels(&self, depth: usize) -> Vec<(BitWord, CylStatus)> {
        let mut out = Vec::new();
        let mut queue = VecDeque::from([(0usize, BitWord::new())]);
        while let Some((i, w)) = queue.pop_front() {
            out.push((w.clone(), self.state_status(i)));
            if let Node::Split(k) = self.nodes[i] {
                if w.len() < depth {
                    for b in 0..2u8 {
                        let mut c = w.clone();
                        c.push(b);
                        queue.push_back((k[b as usize], c));
                    }
                }
            }
        }
        out
    }

    /// Every clopen set all of whose cylinders are decided at `depth`.
    pub fn all_clopen(depth: usize) -> Vec<CylTree> {
        let leaves: Vec<BitWord> = BitWord::all(depth).collect();
        let count = 1u64 << leaves.len();
        (0..count)
            .map(|mask| {
                let chosen: Vec<&BitWord> = leaves
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, w)| w)
                    .collect();
                CylTree::from_antichain(chosen).expect("equal-length words are incomparable")
            })
            .collect()
    }
}

/// Decides cover/emptiness for every node of a raw graph, merges
/// indistinguishable nodes and renumbers breadth-first from the root.
fn canonicalize(raw: Vec<Node>, root: usize) -> CylTree {
    let n = raw.len();
    // least fixpoint: covered iff every infinite path hits a Covered leaf
    let mut covered: Vec<bool> = raw.iter().map(|&x| x == Node::Covered).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            if let Node::Split([a, b]) = raw[i] {
                if !covered[i] && covered[a] && covered[b] {
                    covered[i] = true;
                    changed = true;
                }
            }
        }
    }
    let tmp = CylTree { nodes: raw.clone() };
    let live = tmp.reaches(|x| x == Node::Covered);
    let decided: Vec<Node> = (0..n)
        .map(|i| {
            if covered[i] {
                Node::Covered
            } else if !live[i] {
                Node::Empty
            } else {
                raw[i]
            }
        })
        .collect();

    // partition refinement
    let mut class: Vec<usize> = decided
        .iter()
        .map(|x| match x {
            Node::Covered => 0,
            Node::Empty => 1,
            Node::Split(_) => 2,
        })
        .collect();
    loop {
        let mut sig: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        let next: Vec<usize> = (0..n)
            .map(|i| {
                let key = match decided[i] {
                    Node::Split([a, b]) => (class[i], class[a], class[b]),
                    _ => (class[i], usize::MAX, usize::MAX),
                };
                let len = sig.len();
                *sig.entry(key).or_insert(len)
            })
            .collect();
        let stable = sig.len() == class.iter().collect::<BTreeSet<_>>().len();
        class = next;
        if stable {
            break;
        }
    }

    let mut rep: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        rep.entry(class[i]).or_insert(i);
    }
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([class[root]]);
    number.insert(class[root], 0);
    while let Some(c) = queue.pop_front() {
        order.push(c);
        if let Node::Split([a, b]) = decided[rep[&c]] {
            for k in [class[a], class[b]] {
                if !number.contains_key(&k) {
                    number.insert(k, number.len());
                    queue.push_back(k);
                }
            }
        }
    }
    let nodes = order
        .iter()
        .map(|c| match decided[rep[c]] {
            Node::Split([a, b]) => Node::Split([number[&class[a]], number[&class[b]]]),
            leaf => leaf,
        })
        .collect();
    CylTree { nodes }
}

impl PartialOrd for CylTree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CylTree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.nodes.cmp(&other.nodes)
    }
}
