use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::config::GroupConfig;
use super::gen::{word_to_string, Gen, GenSet};
use super::system::{CoxeterSystem, Element};
use crate::error::{Error, Result};

/// Index of an element inside a [`GroupBall`]. Ids are assigned in ShortLex
/// order, so comparing ids compares elements ShortLex.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemId(pub u32);

impl ElemId {
    pub const IDENTITY: ElemId = ElemId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A Cayley edge: multiplying by a generator either lengthens the element,
/// shortens it, or lengthens it past the radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Edge {
    Ascent(ElemId),
    Descent(ElemId),
    OutOfBall,
}

impl Edge {
    pub fn target(self) -> Option<ElemId> {
        match self {
            Edge::Ascent(id) | Edge::Descent(id) => Some(id),
            Edge::OutOfBall => None,
        }
    }
}

/// All elements of length at most `radius`, with left and right Cayley edges.
#[derive(Clone, Serialize, Deserialize)]
pub struct GroupBall {
    config: GroupConfig,
    radius: usize,
    words: Vec<Vec<Gen>>,
    weights: Vec<u64>,
    left_descents: Vec<GenSet>,
    right_descents: Vec<GenSet>,
    right_edges: Vec<[Edge; 3]>,
    left_edges: Vec<[Edge; 3]>,
    inverses: Vec<ElemId>,
    level_start: Vec<usize>,
    exhausted: bool,
    #[serde(skip)]
    index: HashMap<Vec<Gen>, ElemId>,
}

impl fmt::Debug for GroupBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupBall")
            .field("config", &self.config)
            .field("radius", &self.radius)
            .field("len", &self.words.len())
            .finish()
    }
}

impl PartialEq for GroupBall {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
            && self.radius == other.radius
            && self.words == other.words
            && self.weights == other.weights
            && self.left_descents == other.left_descents
            && self.right_descents == other.right_descents
            && self.right_edges == other.right_edges
            && self.left_edges == other.left_edges
            && self.inverses == other.inverses
            && self.level_start == other.level_start
            && self.exhausted == other.exhausted
    }
}

impl GroupBall {
    /// Enumerate the ball of the given radius with a fresh word-problem solver.
    pub fn new(config: GroupConfig, radius: usize) -> Result<GroupBall> {
        Self::enumerate(&CoxeterSystem::new(config), radius)
    }

    /// Breadth-first enumeration by length level, deduplicating through the
    /// canonical form of each candidate `u·g` with `g ∉ ℛ(u)`.
    pub fn enumerate(system: &CoxeterSystem, radius: usize) -> Result<GroupBall> {
        let config = *system.config();
        let mut ball = GroupBall {
            config,
            radius,
            words: vec![Vec::new()],
            weights: vec![0],
            left_descents: vec![GenSet::EMPTY],
            right_descents: vec![GenSet::EMPTY],
            right_edges: vec![[Edge::OutOfBall; 3]],
            left_edges: Vec::new(),
            inverses: Vec::new(),
            level_start: vec![0, 1],
            exhausted: false,
            index: HashMap::new(),
        };
        for k in 0..radius {
            let level = ball.level_start[k]..ball.level_start[k + 1];
            let mut next: BTreeMap<Vec<Gen>, (Element, Vec<(usize, Gen)>)> = BTreeMap::new();
            for u in level.clone() {
                let ue = ball.element_parts(u);
                for g in Gen::ALL {
                    if ball.right_descents[u].contains(g) {
                        continue;
                    }
                    let w = system.mul_gen(&ue, g)?;
                    next.entry(w.word().to_vec())
                        .or_insert_with(|| (w, Vec::new()))
                        .1
                        .push((u, g));
                }
            }
            if next.is_empty() {
                break;
            }
            for (word, (elem, sources)) in next {
                let id = ball.words.len();
                ball.words.push(word);
                ball.weights.push(elem.weight());
                ball.left_descents.push(elem.left_descents());
                ball.right_descents.push(elem.right_descents());
                ball.right_edges.push([Edge::OutOfBall; 3]);
                for (u, g) in sources {
                    ball.right_edges[u][g.index()] = Edge::Ascent(ElemId(u32::try_from(id).expect("ball size")));
                    ball.right_edges[id][g.index()] = Edge::Descent(ElemId(u as u32));
                }
            }
            ball.level_start.push(ball.words.len());
        }
        while ball.level_start.len() < radius + 2 {
            ball.level_start.push(ball.words.len());
        }
        ball.rebuild_index();
        ball.exhausted = ball
            .right_edges
            .iter()
            .all(|edges| edges.iter().all(|e| *e != Edge::OutOfBall));

        ball.inverses = Vec::with_capacity(ball.words.len());
        for id in 0..ball.words.len() {
            let inv = system.inverse(&ball.element_parts(id))?;
            let inv_id = ball.lookup(inv.word()).ok_or_else(|| {
                Error::Invariant(format!(
                    "inverse of '{}' missing from ball",
                    word_to_string(&ball.words[id])
                ))
            })?;
            ball.inverses.push(inv_id);
        }
        ball.left_edges = (0..ball.words.len())
            .map(|id| {
                let inv = ball.inverses[id];
                let mut edges = [Edge::OutOfBall; 3];
                for g in Gen::ALL {
                    edges[g.index()] = match ball.right_edges[inv.index()][g.index()] {
                        Edge::Ascent(x) => Edge::Ascent(ball.inverses[x.index()]),
                        Edge::Descent(x) => Edge::Descent(ball.inverses[x.index()]),
                        Edge::OutOfBall => Edge::OutOfBall,
                    };
                }
                edges
            })
            .collect();
        Ok(ball)
    }

    fn element_parts(&self, id: usize) -> Element {
        Element::from_parts(
            self.words[id].clone(),
            self.weights[id],
            self.left_descents[id],
            self.right_descents[id],
        )
    }

    /// Rebuild the word index after deserialization.
    pub fn rebuild_index(&mut self) {
        self.index = self
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), ElemId(i as u32)))
            .collect();
    }

    pub fn config(&self) -> &GroupConfig {
        &self.config
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Whether the ball is the whole (finite) group.
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = ElemId> + ExactSizeIterator {
        (0..self.words.len() as u32).map(ElemId)
    }

    /// Ids of length exactly `k` (empty past the radius).
    pub fn level(&self, k: usize) -> Range<usize> {
        if k + 1 >= self.level_start.len() {
            return self.words.len()..self.words.len();
        }
        self.level_start[k]..self.level_start[k + 1]
    }

    pub fn level_ids(&self, k: usize) -> impl Iterator<Item = ElemId> {
        self.level(k).map(|i| ElemId(i as u32))
    }

    /// Ids of length at most `k`.
    pub fn up_to(&self, k: usize) -> impl Iterator<Item = ElemId> {
        let end = self.level(k.min(self.radius)).end;
        (0..end as u32).map(ElemId)
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        (0..=self.radius).map(|k| self.level(k).len()).collect()
    }

    pub fn identity(&self) -> ElemId {
        ElemId::IDENTITY
    }

    pub fn generator(&self, g: Gen) -> Result<ElemId> {
        self.mul_gen(ElemId::IDENTITY, g)
    }

    pub fn word(&self, id: ElemId) -> &[Gen] {
        &self.words[id.index()]
    }

    /// Canonical word as a string; the identity is `""`.
    pub fn word_string(&self, id: ElemId) -> String {
        word_to_string(self.word(id))
    }

    /// Canonical word for display; the identity is `"e"`.
    pub fn display(&self, id: ElemId) -> String {
        if id == ElemId::IDENTITY {
            "e".to_string()
        } else {
            self.word_string(id)
        }
    }

    pub fn length(&self, id: ElemId) -> usize {
        self.words[id.index()].len()
    }

    pub fn weight(&self, id: ElemId) -> u64 {
        self.weights[id.index()]
    }

    pub fn left_descents(&self, id: ElemId) -> GenSet {
        self.left_descents[id.index()]
    }

    pub fn right_descents(&self, id: ElemId) -> GenSet {
        self.right_descents[id.index()]
    }

    pub fn element(&self, id: ElemId) -> Element {
        self.element_parts(id.index())
    }

    pub fn right_edge(&self, id: ElemId, g: Gen) -> Edge {
        self.right_edges[id.index()][g.index()]
    }

    pub fn left_edge(&self, id: ElemId, g: Gen) -> Edge {
        self.left_edges[id.index()][g.index()]
    }

    pub fn inverse(&self, id: ElemId) -> ElemId {
        self.inverses[id.index()]
    }

    /// Id of a canonical word.
    pub fn lookup(&self, canonical: &[Gen]) -> Option<ElemId> {
        self.index.get(canonical).copied()
    }

    /// Id of an element, or an out-of-ball error.
    pub fn id_of(&self, x: &Element) -> Result<ElemId> {
        self.lookup(x.word()).ok_or(Error::OutOfBall {
            needed: x.length(),
            radius: self.radius,
        })
    }

    fn out_of_ball(&self, needed: usize) -> Error {
        Error::OutOfBall {
            needed,
            radius: self.radius,
        }
    }

    /// `x·g`.
    pub fn mul_gen(&self, x: ElemId, g: Gen) -> Result<ElemId> {
        self.right_edge(x, g)
            .target()
            .ok_or_else(|| self.out_of_ball(self.length(x) + 1))
    }

    /// `g·x`.
    pub fn gen_mul(&self, g: Gen, x: ElemId) -> Result<ElemId> {
        self.left_edge(x, g)
            .target()
            .ok_or_else(|| self.out_of_ball(self.length(x) + 1))
    }

    /// Evaluate an arbitrary word by walking right edges from the identity.
    /// Fails if some prefix leaves the ball.
    pub fn locate(&self, word: &[Gen]) -> Result<ElemId> {
        let mut x = ElemId::IDENTITY;
        for &g in word {
            x = self.mul_gen(x, g)?;
        }
        Ok(x)
    }

    /// `x·y`, failing if the walk along the canonical word of `y` leaves the ball.
    pub fn mul(&self, x: ElemId, y: ElemId) -> Result<ElemId> {
        let mut z = x;
        for &g in self.word(y) {
            z = self.mul_gen(z, g)?;
        }
        Ok(z)
    }

    /// `x·y` when the product is length-additive, `None` when it is not.
    /// Errors when `l(x) + l(y)` exceeds the radius.
    pub fn reduced_mul(&self, x: ElemId, y: ElemId) -> Result<Option<ElemId>> {
        let total = self.length(x) + self.length(y);
        if total > self.radius {
            return Err(self.out_of_ball(total));
        }
        let mut z = x;
        for &g in self.word(y) {
            match self.right_edge(z, g) {
                Edge::Ascent(next) => z = next,
                Edge::Descent(_) => return Ok(None),
                Edge::OutOfBall => return Err(self.out_of_ball(total)),
            }
        }
        Ok(Some(z))
    }

    /// Whether `u` is a reduced left factor of `w`, i.e. `l(u⁻¹w) = l(w) − l(u)`.
    pub fn is_prefix(&self, u: ElemId, w: ElemId) -> bool {
        if self.length(u) > self.length(w) {
            return false;
        }
        let rest = self.mul(self.inverse(u), w).expect("shorter product stays in ball");
        self.length(rest) + self.length(u) == self.length(w)
    }

    /// Whether `y` is a reduced right factor of `w`.
    pub fn is_suffix(&self, y: ElemId, w: ElemId) -> bool {
        self.is_prefix(self.inverse(y), self.inverse(w))
    }

    /// Bruhat order via the lifting recursion on a right descent of `y`.
    pub fn bruhat_leq(&self, x: ElemId, y: ElemId) -> bool {
        let (mut x, mut y) = (x, y);
        loop {
            let (lx, ly) = (self.length(x), self.length(y));
            if lx > ly {
                return false;
            }
            if lx == ly {
                return x == y;
            }
            if x == ElemId::IDENTITY {
                return true;
            }
            let s = self.right_descents(y).iter().next().expect("descent");
            if self.right_descents(x).contains(s) {
                x = self.mul_gen(x, s).expect("descent stays in ball");
            }
            y = self.mul_gen(y, s).expect("descent stays in ball");
        }
    }

    /// `{x : x ≤ w}` sorted, using `[e, w] = [e, ws] ∪ [e, ws]·s` for `s ∈ ℛ(w)`.
    pub fn bruhat_interval(&self, w: ElemId) -> Vec<ElemId> {
        let mut set: HashSet<ElemId> = HashSet::from([ElemId::IDENTITY]);
        let word = self.word(w).to_vec();
        for &g in &word {
            let extra: Vec<ElemId> = set
                .iter()
                .map(|&x| self.mul_gen(x, g).expect("interval stays in ball"))
                .collect();
            set.extend(extra);
        }
        let mut out: Vec<_> = set.into_iter().collect();
        out.sort();
        out
    }

    /// All `(u, y)` with `w = u·y` reduced, sorted by `u`.
    pub fn prefix_decompositions(&self, w: ElemId) -> Vec<(ElemId, ElemId)> {
        let mut seen: BTreeMap<ElemId, ElemId> = BTreeMap::from([(w, ElemId::IDENTITY)]);
        let mut queue = VecDeque::from([(w, ElemId::IDENTITY)]);
        while let Some((u, y)) = queue.pop_front() {
            for s in self.right_descents(u).iter() {
                let u2 = self.mul_gen(u, s).expect("descent");
                if seen.contains_key(&u2) {
                    continue;
                }
                let y2 = self.gen_mul(s, y).expect("prefix product stays in ball");
                seen.insert(u2, y2);
                queue.push_back((u2, y2));
            }
        }
        seen.into_iter().collect()
    }

    /// A copy of the ball cut down to a smaller radius.
    pub fn truncate(&self, radius: usize) -> GroupBall {
        if radius >= self.radius {
            return self.clone();
        }
        let end = self.level(radius).end;
        let cut = |edges: &[Edge; 3]| -> [Edge; 3] {
            edges.map(|e| match e {
                Edge::Ascent(x) if x.index() >= end => Edge::OutOfBall,
                other => other,
            })
        };
        let mut ball = GroupBall {
            config: self.config,
            radius,
            words: self.words[..end].to_vec(),
            weights: self.weights[..end].to_vec(),
            left_descents: self.left_descents[..end].to_vec(),
            right_descents: self.right_descents[..end].to_vec(),
            right_edges: self.right_edges[..end].iter().map(cut).collect(),
            left_edges: self.left_edges[..end].iter().map(cut).collect(),
            inverses: self.inverses[..end].to_vec(),
            level_start: self.level_start[..radius + 2].to_vec(),
            exhausted: false,
            index: HashMap::new(),
        };
        ball.exhausted = ball
            .right_edges
            .iter()
            .all(|edges| edges.iter().all(|e| *e != Edge::OutOfBall));
        ball.rebuild_index();
        ball
    }
}
