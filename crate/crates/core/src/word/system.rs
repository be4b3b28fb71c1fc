use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Serialize, Serializer};

use super::config::{GroupConfig, Order};
use super::gen::{parse_word, word_to_string, Gen, GenSet};
use crate::error::{Error, Result};

/// Default bound on the size of a single braid-move orbit.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// A group element, stored by its ShortLex-least reduced word.
///
/// Elements are produced by a [`CoxeterSystem`] and only compare meaningfully
/// with elements of the same system. The order is ShortLex on the canonical word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    word: Vec<Gen>,
    weight: u64,
    left: GenSet,
    right: GenSet,
}

impl Element {
    pub(crate) fn from_parts(word: Vec<Gen>, weight: u64, left: GenSet, right: GenSet) -> Element {
        Element {
            word,
            weight,
            left,
            right,
        }
    }

    pub fn word(&self) -> &[Gen] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// `L(w)`.
    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn left_descents(&self) -> GenSet {
        self.left
    }

    pub fn right_descents(&self) -> GenSet {
        self.right
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// The canonical word, with the identity written as the empty string.
    pub fn word_string(&self) -> String {
        word_to_string(&self.word)
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.word, &other.word)
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "e")
        } else {
            write!(f, "{}", self.word_string())
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.word_string())
    }
}

pub fn shortlex(a: &[Gen], b: &[Gen]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Debug)]
struct WordInfo {
    canonical: Vec<Gen>,
    left: GenSet,
    right: GenSet,
    // for each right descent g, some reduced word of the element ending in g
    ending: [Option<Vec<Gen>>; 3],
}

/// Exact word problem for a rank-3 Coxeter system.
///
/// Reduced words are explored through their braid-move orbit; every orbit
/// found is memoized under both the query word and the canonical word. The
/// memo only ever stores canonical data, so concurrent writers agree.
pub struct CoxeterSystem {
    config: GroupConfig,
    node_cap: usize,
    memo: Mutex<HashMap<Vec<Gen>, Arc<WordInfo>>>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("config", &self.config)
            .field("node_cap", &self.node_cap)
            .finish()
    }
}

impl CoxeterSystem {
    pub fn new(config: GroupConfig) -> Self {
        Self::with_node_cap(config, DEFAULT_NODE_CAP)
    }

    pub fn with_node_cap(config: GroupConfig, node_cap: usize) -> Self {
        CoxeterSystem {
            config,
            node_cap,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &GroupConfig {
        &self.config
    }

    pub fn node_cap(&self) -> usize {
        self.node_cap
    }

    pub fn identity(&self) -> Element {
        Element {
            word: Vec::new(),
            weight: 0,
            left: GenSet::EMPTY,
            right: GenSet::EMPTY,
        }
    }

    pub fn generator(&self, g: Gen) -> Element {
        Element {
            word: vec![g],
            weight: self.config.weight(g) as u64,
            left: GenSet::singleton(g),
            right: GenSet::singleton(g),
        }
    }

    fn element_from(&self, info: &WordInfo) -> Element {
        Element {
            weight: self.config.word_weight(&info.canonical),
            word: info.canonical.clone(),
            left: info.left,
            right: info.right,
        }
    }

    /// Braid-move orbit of a word assumed reduced.
    fn analyze(&self, reduced: &[Gen]) -> Result<Arc<WordInfo>> {
        if let Some(info) = self.memo.lock().expect("memo lock").get(reduced) {
            return Ok(info.clone());
        }
        let info = Arc::new(self.braid_orbit(reduced)?);
        let mut memo = self.memo.lock().expect("memo lock");
        memo.insert(reduced.to_vec(), info.clone());
        memo.entry(info.canonical.clone()).or_insert_with(|| info.clone());
        Ok(info)
    }

    fn braid_orbit(&self, word: &[Gen]) -> Result<WordInfo> {
        let mut seen: HashSet<Vec<Gen>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(word.to_vec());
        queue.push_back(word.to_vec());
        let mut info = WordInfo {
            canonical: word.to_vec(),
            left: GenSet::EMPTY,
            right: GenSet::EMPTY,
            ending: [None, None, None],
        };
        while let Some(w) = queue.pop_front() {
            if let (Some(&first), Some(&last)) = (w.first(), w.last()) {
                info.left = info.left.with(first);
                info.right = info.right.with(last);
                if info.ending[last.index()].is_none() {
                    info.ending[last.index()] = Some(w.clone());
                }
            }
            if w < info.canonical {
                info.canonical = w.clone();
            }
            for i in 0..w.len().saturating_sub(1) {
                let (a, b) = (w[i], w[i + 1]);
                if a == b {
                    return Err(Error::Invariant(format!(
                        "braid orbit of '{}' reached the non-reduced word '{}'",
                        word_to_string(word),
                        word_to_string(&w)
                    )));
                }
                let m = match self.config.m(a, b) {
                    Order::Finite(m) => m as usize,
                    Order::Infinite => continue,
                };
                if i + m > w.len() {
                    continue;
                }
                let alternating = (0..m).all(|j| w[i + j] == if j % 2 == 0 { a } else { b });
                if !alternating {
                    continue;
                }
                let mut next = w.clone();
                for j in 0..m {
                    next[i + j] = if j % 2 == 0 { b } else { a };
                }
                if seen.insert(next.clone()) {
                    if seen.len() > self.node_cap {
                        return Err(Error::Resource {
                            what: format!("braid orbit of '{}'", word_to_string(word)),
                            cap: self.node_cap,
                        });
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(info)
    }

    fn info_of(&self, x: &Element) -> Result<Arc<WordInfo>> {
        self.analyze(&x.word)
    }

    /// `x·g`.
    pub fn mul_gen(&self, x: &Element, g: Gen) -> Result<Element> {
        if x.right.contains(g) {
            let info = self.info_of(x)?;
            let ending = info.ending[g.index()]
                .as_ref()
                .ok_or_else(|| Error::Invariant("missing descent witness".into()))?;
            let shorter = self.analyze(&ending[..ending.len() - 1])?;
            Ok(self.element_from(&shorter))
        } else {
            let mut w = x.word.clone();
            w.push(g);
            Ok(self.element_from(&*self.analyze(&w)?))
        }
    }

    /// `g·x`.
    pub fn gen_mul(&self, g: Gen, x: &Element) -> Result<Element> {
        let inv = self.inverse(x)?;
        self.inverse(&self.mul_gen(&inv, g)?)
    }

    /// The element represented by an arbitrary word.
    pub fn normalize(&self, word: &[Gen]) -> Result<Element> {
        let mut x = self.identity();
        for &g in word {
            x = self.mul_gen(&x, g)?;
        }
        Ok(x)
    }

    /// Parse and normalize a word such as `"srst"` or `"e"`.
    pub fn parse(&self, s: &str) -> Result<Element> {
        self.normalize(&parse_word(s)?)
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        let mut z = x.clone();
        for &g in &y.word {
            z = self.mul_gen(&z, g)?;
        }
        Ok(z)
    }

    pub fn inverse(&self, x: &Element) -> Result<Element> {
        let rev: Vec<Gen> = x.word.iter().rev().copied().collect();
        Ok(self.element_from(&*self.analyze(&rev)?))
    }

    /// `(ℒ(w), ℛ(w))`.
    pub fn descents(&self, w: &Element) -> (GenSet, GenSet) {
        (w.left, w.right)
    }

    /// Whether a word is a reduced expression.
    pub fn is_reduced(&self, word: &[Gen]) -> Result<bool> {
        Ok(self.normalize(word)?.length() == word.len())
    }

    /// All reduced words of `w`, ShortLex sorted.
    pub fn reduced_words(&self, w: &Element) -> Result<Vec<Vec<Gen>>> {
        let mut seen: HashSet<Vec<Gen>> = HashSet::new();
        let mut queue = VecDeque::from([w.word.clone()]);
        seen.insert(w.word.clone());
        while let Some(x) = queue.pop_front() {
            for i in 0..x.len().saturating_sub(1) {
                let (a, b) = (x[i], x[i + 1]);
                let Order::Finite(m) = self.config.m(a, b) else {
                    continue;
                };
                let m = m as usize;
                if i + m > x.len() || !(0..m).all(|j| x[i + j] == if j % 2 == 0 { a } else { b }) {
                    continue;
                }
                let mut next = x.clone();
                for j in 0..m {
                    next[i + j] = if j % 2 == 0 { b } else { a };
                }
                if seen.insert(next.clone()) {
                    if seen.len() > self.node_cap {
                        return Err(Error::Resource {
                            what: format!("reduced words of '{w}'"),
                            cap: self.node_cap,
                        });
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Bruhat order, by the lifting recursion on a right descent of `y`.
    pub fn bruhat_leq(&self, x: &Element, y: &Element) -> Result<bool> {
        let (mut x, mut y) = (x.clone(), y.clone());
        loop {
            if x.length() > y.length() {
                return Ok(false);
            }
            if x.length() == y.length() {
                return Ok(x == y);
            }
            if x.is_identity() {
                return Ok(true);
            }
            let s = y.right.iter().next().expect("nonidentity has a descent");
            if x.right.contains(s) {
                x = self.mul_gen(&x, s)?;
            }
            y = self.mul_gen(&y, s)?;
        }
    }

    /// All `(u, y)` with `w = u·y` and `l(u) + l(y) = l(w)`, sorted by `u`.
    pub fn prefix_decompositions(&self, w: &Element) -> Result<Vec<(Element, Element)>> {
        let mut seen: HashMap<Vec<Gen>, (Element, Element)> = HashMap::new();
        let mut queue = VecDeque::from([(w.clone(), self.identity())]);
        seen.insert(w.word.clone(), (w.clone(), self.identity()));
        while let Some((u, y)) = queue.pop_front() {
            for s in u.right.iter() {
                let u2 = self.mul_gen(&u, s)?;
                if seen.contains_key(&u2.word) {
                    continue;
                }
                let y2 = self.gen_mul(s, &y)?;
                seen.insert(u2.word.clone(), (u2.clone(), y2.clone()));
                queue.push_back((u2, y2));
            }
        }
        let mut out: Vec<_> = seen.into_values().collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(m: (u32, u32, u32), w: [u32; 3]) -> CoxeterSystem {
        CoxeterSystem::new(GroupConfig::from_orders(m.0, m.1, m.2, w).unwrap())
    }

    /// Closure of a word under braid moves and deletion of `gg`; the
    /// ShortLex-least word reached is the canonical form.
    fn oracle_normal_form(cfg: &GroupConfig, word: &[Gen]) -> Vec<Gen> {
        let mut seen: HashSet<Vec<Gen>> = HashSet::from([word.to_vec()]);
        let mut stack = vec![word.to_vec()];
        while let Some(w) = stack.pop() {
            let mut nexts = Vec::new();
            for i in 0..w.len().saturating_sub(1) {
                if w[i] == w[i + 1] {
                    let mut n = w.clone();
                    n.drain(i..i + 2);
                    nexts.push(n);
                    continue;
                }
                if let Order::Finite(m) = cfg.m(w[i], w[i + 1]) {
                    let m = m as usize;
                    let (a, b) = (w[i], w[i + 1]);
                    if i + m <= w.len() && (0..m).all(|j| w[i + j] == if j % 2 == 0 { a } else { b }) {
                        let mut n = w.clone();
                        for j in 0..m {
                            n[i + j] = if j % 2 == 0 { b } else { a };
                        }
                        nexts.push(n);
                    }
                }
            }
            for n in nexts {
                if seen.insert(n.clone()) {
                    stack.push(n);
                }
            }
        }
        seen.into_iter().min_by(|a, b| shortlex(a, b)).unwrap()
    }

    fn words(len: usize) -> Vec<Vec<Gen>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    Gen::ALL.into_iter().map(move |g| {
                        let mut w2 = w.clone();
                        w2.push(g);
                        w2
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn normalize_examples() {
        let s = sys((0, 2, 2), [1, 1, 1]);
        assert!(s.parse("ss").unwrap().is_identity());
        assert_eq!(s.parse("tsrst").unwrap().word_string(), "srs");
        let s3 = sys((0, 3, 2), [1, 1, 1]);
        assert_eq!(s3.parse("tst").unwrap().word_string(), "sts");
    }

    #[test]
    fn normalize_matches_oracle() {
        for (m, w) in [
            ((0, 2, 2), [1, 2, 1]),
            ((3, 3, 3), [1, 1, 1]),
            ((5, 4, 2), [1, 1, 2]),
            ((0, 0, 0), [1, 1, 1]),
        ] {
            let s = sys(m, w);
            for len in 0..=6 {
                for word in words(len) {
                    let got = s.normalize(&word).unwrap();
                    assert_eq!(
                        got.word(),
                        oracle_normal_form(s.config(), &word).as_slice(),
                        "{}",
                        word_to_string(&word)
                    );
                }
            }
        }
    }

    #[test]
    fn multiply_examples() {
        let s = sys((0, 2, 2), [1, 1, 1]);
        let (sr, rs) = (s.parse("sr").unwrap(), s.parse("rs").unwrap());
        assert!(s.multiply(&sr, &rs).unwrap().is_identity());
        let w = s.parse("srst").unwrap();
        assert_eq!(s.multiply(&s.identity(), &w).unwrap(), w);
        let p = s.multiply(&s.parse("st").unwrap(), &rs).unwrap();
        assert_eq!(p.length(), 4);
        assert_eq!(p.word_string(), "srst");
    }

    #[test]
    fn descent_examples() {
        let s = sys((0, 2, 2), [1, 1, 1]);
        assert_eq!(s.descents(&s.identity()), (GenSet::EMPTY, GenSet::EMPTY));
        let st = GenSet::parse("st").unwrap();
        assert_eq!(s.descents(&s.parse("srst").unwrap()), (st, st));
        let d = sys((2, 5, 3), [1, 1, 1]);
        assert_eq!(d.descents(&d.parse("ststs").unwrap()), (st, st));
    }

    #[test]
    fn bruhat_examples() {
        let s = sys((3, 3, 2), [1, 1, 1]);
        let sts = s.parse("sts").unwrap();
        assert!(s.bruhat_leq(&s.identity(), &sts).unwrap());
        assert!(s.bruhat_leq(&s.parse("s").unwrap(), &sts).unwrap());
        assert!(!s.bruhat_leq(&s.parse("sr").unwrap(), &s.parse("st").unwrap()).unwrap());
    }

    fn subwords_reduced(s: &CoxeterSystem, y: &Element) -> HashSet<Vec<Gen>> {
        let w = y.word();
        let mut out = HashSet::new();
        for mask in 0u32..(1 << w.len()) {
            let sub: Vec<Gen> = (0..w.len()).filter(|i| mask & (1 << i) != 0).map(|i| w[i]).collect();
            out.insert(s.normalize(&sub).unwrap().word().to_vec());
        }
        out
    }

    #[test]
    fn bruhat_matches_subword_oracle() {
        for (m, wt) in [((0, 3, 2), [1, 1, 1]), ((4, 4, 2), [1, 2, 1]), ((3, 3, 3), [1, 1, 1])] {
            let s = sys(m, wt);
            let elems: Vec<Element> = (0..=5)
                .flat_map(words)
                .map(|w| s.normalize(&w).unwrap())
                .collect::<HashSet<_>>()
                .into_iter()
                .collect();
            for y in &elems {
                let below = subwords_reduced(&s, y);
                for x in &elems {
                    assert_eq!(s.bruhat_leq(x, y).unwrap(), below.contains(x.word()), "{x} <= {y}");
                }
            }
        }
    }

    #[test]
    fn prefix_decomposition_examples() {
        let s = sys((0, 2, 2), [1, 1, 1]);
        let show = |w: &str| -> Vec<(String, String)> {
            s.prefix_decompositions(&s.parse(w).unwrap())
                .unwrap()
                .into_iter()
                .map(|(u, y)| (u.to_string(), y.to_string()))
                .collect()
        };
        let pairs = |v: &[(&str, &str)]| -> Vec<(String, String)> {
            v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
        };
        assert_eq!(show("s"), pairs(&[("e", "s"), ("s", "e")]));
        assert_eq!(show("st"), pairs(&[("e", "st"), ("s", "t"), ("t", "s"), ("st", "e")]));
        assert_eq!(show("e"), pairs(&[("e", "e")]));
    }

    #[test]
    fn node_cap_signals_resource_error() {
        let s = CoxeterSystem::with_node_cap(GroupConfig::from_orders(2, 2, 2, [1, 1, 1]).unwrap(), 2);
        assert!(matches!(s.parse("rst"), Err(Error::Resource { .. })));
    }

    #[test]
    fn exchange_property() {
        let s = sys((4, 3, 2), [1, 1, 1]);
        for word in words(5) {
            let w = s.normalize(&word).unwrap();
            for g in Gen::ALL {
                let gw = s.gen_mul(g, &w).unwrap();
                let wg = s.mul_gen(&w, g).unwrap();
                assert_eq!(w.left_descents().contains(g), gw.length() + 1 == w.length());
                assert_eq!(w.right_descents().contains(g), wg.length() + 1 == w.length());
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn config_strategy() -> impl Strategy<Value = GroupConfig> {
            let order = prop_oneof![Just(0u32), 2u32..=7];
            (order.clone(), order.clone(), order, 1u32..=3, 1u32..=3, 1u32..=3)
                .prop_filter_map("valid weights", |(a, b, c, x, y, z)| {
                    GroupConfig::from_orders(a, b, c, [x, y, z]).ok()
                })
        }

        proptest! {
            #[test]
            fn normalize_is_idempotent(cfg in config_strategy(), word in proptest::collection::vec(0usize..3, 0..=12)) {
                let s = CoxeterSystem::new(cfg);
                let word: Vec<Gen> = word.into_iter().map(Gen::from_index).collect();
                let w = s.normalize(&word).unwrap();
                let again = s.normalize(w.word()).unwrap();
                prop_assert_eq!(&w, &again);
                prop_assert_eq!(w.length(), w.word().len());
            }

            #[test]
            fn weight_is_constant_on_reduced_words(cfg in config_strategy(), word in proptest::collection::vec(0usize..3, 0..=9)) {
                let s = CoxeterSystem::new(cfg);
                let word: Vec<Gen> = word.into_iter().map(Gen::from_index).collect();
                let w = s.normalize(&word).unwrap();
                for r in s.reduced_words(&w).unwrap() {
                    prop_assert_eq!(cfg.word_weight(&r), w.weight());
                }
            }
        }
    }
}
