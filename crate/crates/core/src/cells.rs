//! The lowest two-sided cell: membership, frames `B_J`/`U_J`, left and right
//! cell ids, the canonical three-part factorization, and `Δ`/`n_z` data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::kl::KlTable;
use crate::laurent::Degree;
use crate::word::{ClassificationReport, ElemId, GenSet, GroupBall, GroupType, Order};

/// A longest element `w_J` of maximal weight, located in the ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frame {
    pub j: GenSet,
    pub longest: ElemId,
    pub weight: u64,
}

/// The left cell `Γ_{J,y} = B_J·w_J·y`, naming `J` by its index in the frame list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId {
    pub frame: usize,
    pub y: ElemId,
}

/// `w = x·p·y` with `p ∈ P_{J,J'}`, `x ∈ U_J^-1`, `y ∈ U_{J'}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub x: ElemId,
    pub p: ElemId,
    pub y: ElemId,
    pub left_frame: usize,
    pub right_frame: usize,
}

pub struct CellAtlas {
    ball: Arc<GroupBall>,
    n: u64,
    group_type: GroupType,
    frames: Vec<Frame>,
    lambda: Vec<bool>,
    left_ids: Vec<Option<CellId>>,
}

impl fmt::Debug for CellAtlas {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CellAtlas")
            .field("ball", &self.ball)
            .field("n", &self.n)
            .field("frames", &self.frames)
            .finish()
    }
}

impl CellAtlas {
    pub fn new(ball: Arc<GroupBall>, report: &ClassificationReport) -> Result<CellAtlas> {
        let mut frames = Vec::new();
        for p in &report.m {
            let longest = ball.lookup(p.longest.word()).ok_or(Error::OutOfBall {
                needed: p.longest.length(),
                radius: ball.radius(),
            })?;
            frames.push(Frame {
                j: p.set,
                longest,
                weight: p.weight,
            });
        }
        // w ∈ Λ iff some reduced left factor u of w has J ⊆ ℛ(u) for a frame J;
        // the reduced left factors of w are w itself and those of w·s, s ∈ ℛ(w).
        let mut lambda = vec![false; ball.len()];
        for w in ball.ids() {
            let rd = ball.right_descents(w);
            lambda[w.index()] = frames.iter().any(|f| f.j.is_subset(rd))
                || rd.iter().any(|s| lambda[ball.mul_gen(w, s).expect("descent").index()]);
        }
        let mut atlas = CellAtlas {
            ball,
            n: report.n,
            group_type: report.group_type,
            frames,
            lambda,
            left_ids: Vec::new(),
        };
        let mut left_ids = Vec::with_capacity(atlas.ball.len());
        for w in atlas.ball.ids() {
            left_ids.push(if atlas.lambda[w.index()] {
                Some(atlas.compute_left_cell_id(w)?)
            } else {
                None
            });
        }
        atlas.left_ids = left_ids;
        Ok(atlas)
    }

    pub fn ball(&self) -> &GroupBall {
        &self.ball
    }

    pub fn ball_arc(&self) -> &Arc<GroupBall> {
        &self.ball
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn group_type(&self) -> GroupType {
        self.group_type
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn frame(&self, i: usize) -> &Frame {
        &self.frames[i]
    }

    /// Index of the frame with generator set `j`.
    pub fn frame_index(&self, j: GenSet) -> Option<usize> {
        self.frames.iter().position(|f| f.j == j)
    }

    pub fn is_in_m(&self, w: ElemId) -> bool {
        self.frames.iter().any(|f| f.longest == w)
    }

    /// `w ∈ Λ`.
    pub fn in_lambda(&self, w: ElemId) -> bool {
        self.lambda[w.index()]
    }

    /// `Λ ∩ ball`, ShortLex sorted.
    pub fn lambda_members(&self) -> Vec<ElemId> {
        self.ball.ids().filter(|w| self.in_lambda(*w)).collect()
    }

    /// `x ∈ B_J`: `ℛ(x) ⊆ S∖J`.
    pub fn in_b(&self, frame: usize, x: ElemId) -> bool {
        !self.ball.right_descents(x).intersects(self.frames[frame].j)
    }

    /// `y ∈ U_J`: `ℒ(y) ⊆ S∖J` and `s·w_J·y ∉ Λ` for every `s ∈ J`.
    pub fn in_u(&self, frame: usize, y: ElemId) -> Result<bool> {
        let f = &self.frames[frame];
        if self.ball.left_descents(y).intersects(f.j) {
            return Ok(false);
        }
        for s in f.j.iter() {
            let sw = self.ball.gen_mul(s, f.longest).expect("descent of w_J");
            let z = self.ball.reduced_mul(sw, y)?.ok_or_else(|| {
                Error::Invariant(format!(
                    "{}·{} not reduced although ℒ(y) avoids J",
                    self.ball.display(sw),
                    self.ball.display(y)
                ))
            })?;
            if self.in_lambda(z) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Largest length `l(y)` for which `U_J` membership is decidable in this ball.
    pub fn u_radius(&self, frame: usize) -> usize {
        (self.ball.radius() + 1).saturating_sub(self.ball.length(self.frames[frame].longest))
    }

    /// `(B_J ∩ ball, U_J ∩ ball)`, the latter up to [`Self::u_radius`].
    pub fn cell_frame(&self, frame: usize) -> Result<(Vec<ElemId>, Vec<ElemId>)> {
        let b = self.ball.ids().filter(|&x| self.in_b(frame, x)).collect();
        let mut u = Vec::new();
        for y in self.ball.up_to(self.u_radius(frame)) {
            if self.in_u(frame, y)? {
                u.push(y);
            }
        }
        Ok((b, u))
    }

    fn compute_left_cell_id(&self, w: ElemId) -> Result<CellId> {
        let mut found = BTreeSet::new();
        for (u, y) in self.ball.prefix_decompositions(w) {
            let rd = self.ball.right_descents(u);
            for (i, f) in self.frames.iter().enumerate() {
                if f.j.is_subset(rd) && self.in_u(i, y)? {
                    found.insert(CellId { frame: i, y });
                }
            }
        }
        match found.len() {
            1 => Ok(*found.iter().next().expect("one id")),
            0 => Err(Error::Invariant(format!(
                "{} ∈ Λ has no left cell id",
                self.ball.display(w)
            ))),
            _ => Err(Error::Invariant(format!(
                "{} has several left cell ids: {}",
                self.ball.display(w),
                found.iter().map(|c| self.cell_name(*c)).collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    /// The `(J, y)` with `w ∈ B_J·w_J·y`, `y ∈ U_J`.
    pub fn left_cell_id(&self, w: ElemId) -> Result<CellId> {
        self.left_ids[w.index()].ok_or_else(|| Error::Domain(format!("{} is not in Λ", self.ball.display(w))))
    }

    /// The `(x, J)` with `w ∈ x·w_J·B_J^-1`, read off the left id of `w^-1`.
    pub fn right_cell_id(&self, w: ElemId) -> Result<(ElemId, usize)> {
        let id = self.left_cell_id(self.ball.inverse(w))?;
        Ok((self.ball.inverse(id.y), id.frame))
    }

    /// `w = x·p_w·y` with `p_w ∈ P_{J,J'}`, `x ∈ U_J^-1`, `y ∈ U_{J'}`.
    pub fn factorize(&self, w: ElemId) -> Result<Factorization> {
        let left = self.left_cell_id(w)?;
        let (x, right_frame) = self.right_cell_id(w)?;
        let ball = &self.ball;
        let p = ball.mul(ball.mul(ball.inverse(x), w)?, ball.inverse(left.y))?;
        let total = ball.length(x) + ball.length(p) + ball.length(left.y);
        let (jl, jr) = (self.frames[right_frame].j, self.frames[left.frame].j);
        if total != ball.length(w) || ball.left_descents(p) != jl || ball.right_descents(p) != jr {
            return Err(Error::Invariant(format!(
                "factorization of {} as {}·{}·{} is not of the expected shape",
                ball.display(w),
                ball.display(x),
                ball.display(p),
                ball.display(left.y)
            )));
        }
        Ok(Factorization {
            x,
            p,
            y: left.y,
            left_frame: right_frame,
            right_frame: left.frame,
        })
    }

    /// Members of a left cell inside the ball.
    pub fn members(&self, cell: CellId) -> Vec<ElemId> {
        self.ball
            .ids()
            .filter(|&w| self.left_ids[w.index()] == Some(cell))
            .collect()
    }

    /// All left cell ids realized in the ball.
    pub fn left_cells(&self) -> Vec<CellId> {
        let set: BTreeSet<CellId> = self.left_ids.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// `"J:y"`, e.g. `"st:r"` or `"st:e"`.
    pub fn cell_name(&self, cell: CellId) -> String {
        format!("{}:{}", self.frames[cell.frame].j, self.ball.display(cell.y))
    }

    /// Number of left cells whose shortest member `w_J·y` has length at most `k`.
    pub fn count_at(&self, k: usize) -> usize {
        self.left_cells()
            .into_iter()
            .filter(|c| self.ball.length(self.frames[c.frame].longest) + self.ball.length(c.y) <= k)
            .count()
    }

    /// Left cell counts at the three largest radii together with the
    /// count predicted by the rank-3 case split.
    pub fn census(&self) -> LeftCellCensus {
        let r = self.ball.radius();
        let radii: Vec<usize> = (r.saturating_sub(2)..=r).collect();
        let counts = radii.iter().map(|&k| self.count_at(k)).collect();
        LeftCellCensus {
            radii,
            counts,
            expected: expected_left_cells(self),
            cells: self.left_cells().into_iter().map(|c| self.cell_name(c)).collect(),
        }
    }

    /// The unique `d ∈ Γ` with `Δ(d) = N`.
    pub fn distinguished(&self, cell: CellId, kl: &KlTable) -> Result<ElemId> {
        let members = self.members(cell);
        let mut hits = Vec::new();
        for &z in &members {
            let (delta, _) = delta_invariants(kl, z)?;
            if delta == self.n as i64 {
                hits.push(z);
            }
        }
        match hits.len() {
            1 => Ok(hits[0]),
            0 => {
                let candidate = 2 * self.ball.length(cell.y) + self.ball.length(self.frames[cell.frame].longest);
                if candidate > self.ball.radius() {
                    Err(Error::OutOfBall {
                        needed: candidate,
                        radius: self.ball.radius(),
                    })
                } else {
                    Err(Error::Invariant(format!(
                        "left cell {} has no distinguished element",
                        self.cell_name(cell)
                    )))
                }
            }
            _ => Err(Error::Invariant(format!(
                "left cell {} has {} distinguished elements",
                self.cell_name(cell),
                hits.len()
            ))),
        }
    }

    /// JSON export: cells keyed `"J:y"` with ShortLex-sorted members and,
    /// when a KL table is supplied, the distinguished element.
    pub fn export(&self, kl: Option<&KlTable>) -> Result<AtlasExport> {
        let mut cells = BTreeMap::new();
        for c in self.left_cells() {
            let members = self.members(c).into_iter().map(|w| self.ball.word_string(w)).collect();
            let distinguished = match kl {
                Some(kl) => match self.distinguished(c, kl) {
                    Ok(d) => Some(self.ball.word_string(d)),
                    Err(Error::OutOfBall { .. }) => None,
                    Err(e) => return Err(e),
                },
                None => None,
            };
            cells.insert(self.cell_name(c), CellExport { members, distinguished });
        }
        Ok(AtlasExport {
            radius: self.ball.radius(),
            n: self.n,
            m: self.frames.iter().map(|f| self.ball.word_string(f.longest)).collect(),
            lambda_size: self.lambda_members().len(),
            census: self.census(),
            cells,
        })
    }
}

/// `(Δ(z), n_z)` from `p_{e,z} = n_z v^{-Δ(z)} + lower terms`.
pub fn delta_invariants(kl: &KlTable, z: ElemId) -> Result<(i64, Int)> {
    let p = kl.p(ElemId::IDENTITY, z)?;
    match p.degree() {
        Degree::Finite(d) => Ok((-d, p.leading_coeff())),
        Degree::NegInf => Err(Error::Invariant(format!("p_{{e,{}}} vanishes", kl.ball().display(z)))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellExport {
    pub members: Vec<String>,
    pub distinguished: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AtlasExport {
    pub radius: usize,
    pub n: u64,
    pub m: Vec<String>,
    pub lambda_size: usize,
    pub census: LeftCellCensus,
    pub cells: BTreeMap<String, CellExport>,
}

/// The number of left cells in the lowest cell predicted by the rank-3 case split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum ExpectedCount {
    Finite(usize),
    Infinite,
}

impl fmt::Display for ExpectedCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectedCount::Finite(n) => write!(f, "{n}"),
            ExpectedCount::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LeftCellCensus {
    pub radii: Vec<usize>,
    pub counts: Vec<usize>,
    pub expected: ExpectedCount,
    pub cells: Vec<String>,
}

impl LeftCellCensus {
    /// Finite predictions need the same count at all three radii; infinite
    /// ones need strictly increasing counts.
    pub fn consistent(&self) -> bool {
        match self.expected {
            ExpectedCount::Finite(n) => self.counts.iter().all(|&c| c == n),
            ExpectedCount::Infinite => self.counts.windows(2).all(|w| w[0] < w[1]),
        }
    }
}

/// Predicted left cell count, following the case split by the number of
/// infinite bonds and the weights of the finite parabolics.
pub fn expected_left_cells(atlas: &CellAtlas) -> ExpectedCount {
    use crate::word::Gen;
    let ball = atlas.ball();
    let cfg = ball.config();
    match atlas.group_type() {
        GroupType::Finite => return ExpectedCount::Finite(1),
        GroupType::Affine => {
            let max_m = [cfg.m_sr(), cfg.m_st(), cfg.m_rt()]
                .iter()
                .filter_map(|o| o.finite())
                .max()
                .unwrap_or(0);
            return ExpectedCount::Finite(match max_m {
                3 => 6,
                4 => 8,
                _ => 12,
            });
        }
        GroupType::Other => {}
    }
    let pairs = [(Gen::R, Gen::S), (Gen::R, Gen::T), (Gen::S, Gen::T)];
    let finite: Vec<(Gen, Gen, u32)> = pairs
        .iter()
        .filter_map(|&(a, b)| match cfg.m(a, b) {
            Order::Finite(m) => Some((a, b, m)),
            Order::Infinite => None,
        })
        .collect();
    match finite.len() {
        0 => {
            let mut w: Vec<u32> = cfg.weights().to_vec();
            w.sort_unstable_by(|a, b| b.cmp(a));
            if w[0] == w[2] {
                ExpectedCount::Finite(3)
            } else if w[0] == w[1] {
                ExpectedCount::Finite(4)
            } else {
                ExpectedCount::Infinite
            }
        }
        1 => {
            let (a, b, m) = finite[0];
            let c = Gen::ALL
                .into_iter()
                .find(|g| *g != a && *g != b)
                .expect("third generator");
            let lab = if m % 2 == 0 {
                m as u64 / 2 * (cfg.weight(a) + cfg.weight(b)) as u64
            } else {
                m as u64 * cfg.weight(a) as u64
            };
            if lab > cfg.weight(c) as u64 {
                ExpectedCount::Infinite
            } else {
                ExpectedCount::Finite(2 * m as usize)
            }
        }
        2 if finite.iter().all(|&(_, _, m)| m == 2) => ExpectedCount::Finite(2),
        _ => ExpectedCount::Infinite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{classify, parse_word, CoxeterSystem, GroupConfig};

    fn atlas(m: (u32, u32, u32), w: [u32; 3], r: usize) -> CellAtlas {
        let cfg = GroupConfig::from_orders(m.0, m.1, m.2, w).unwrap();
        let sys = CoxeterSystem::new(cfg);
        let report = classify(&sys).unwrap();
        let ball = Arc::new(GroupBall::enumerate(&sys, r).unwrap());
        CellAtlas::new(ball, &report).unwrap()
    }

    fn id(a: &CellAtlas, w: &str) -> ElemId {
        a.ball().locate(&parse_word(w).unwrap()).unwrap()
    }

    /// Λ membership straight from the definition: some reduced word of w
    /// contains a reduced word of some w_J as a consecutive block.
    fn lambda_oracle(a: &CellAtlas, w: ElemId) -> bool {
        let sys = CoxeterSystem::new(*a.ball().config());
        let elem = a.ball().element(w);
        let blocks: Vec<Vec<crate::word::Gen>> = a
            .frames()
            .iter()
            .flat_map(|f| sys.reduced_words(&a.ball().element(f.longest)).unwrap())
            .collect();
        sys.reduced_words(&elem).unwrap().iter().any(|word| {
            blocks
                .iter()
                .any(|b| word.windows(b.len()).any(|win| win == b.as_slice()))
        })
    }

    #[test]
    fn lambda_matches_definition() {
        for (m, w) in [
            ((0, 2, 2), [1, 2, 1]),
            ((3, 3, 3), [1, 1, 1]),
            ((0, 3, 2), [1, 1, 1]),
            ((0, 0, 0), [2, 2, 1]),
        ] {
            let a = atlas(m, w, 6);
            for x in a.ball().ids() {
                assert_eq!(a.in_lambda(x), lambda_oracle(&a, x), "{}", a.ball().display(x));
            }
        }
    }

    #[test]
    fn lambda_examples() {
        let a = atlas((0, 2, 2), [1, 2, 1], 5);
        let st = id(&a, "st");
        assert!(a.in_lambda(st));
        assert!(!a.in_lambda(ElemId::IDENTITY));
        assert!(!a.in_lambda(id(&a, "srs")));
    }

    #[test]
    fn left_cell_examples() {
        let a = atlas((0, 2, 2), [1, 2, 1], 6);
        let st = id(&a, "st");
        let f = a.frame_index(GenSet::parse("st").unwrap()).unwrap();
        assert_eq!(
            a.left_cell_id(st).unwrap(),
            CellId {
                frame: f,
                y: ElemId::IDENTITY
            }
        );
        assert_eq!(
            a.left_cell_id(id(&a, "rst")).unwrap(),
            CellId {
                frame: f,
                y: ElemId::IDENTITY
            }
        );
        assert_eq!(
            a.left_cell_id(id(&a, "str")).unwrap(),
            CellId {
                frame: f,
                y: id(&a, "r")
            }
        );
        assert!(matches!(a.left_cell_id(ElemId::IDENTITY), Err(Error::Domain(_))));
    }

    #[test]
    fn frames_in_weighted_example() {
        let a = atlas((0, 2, 2), [1, 2, 1], 8);
        let f = a.frame_index(GenSet::parse("st").unwrap()).unwrap();
        let (b, u) = a.cell_frame(f).unwrap();
        let u: Vec<String> = u.iter().map(|&y| a.ball().display(y)).collect();
        assert_eq!(u, vec!["e", "r"]);
        for x in b {
            assert!(!a.ball().right_descents(x).intersects(GenSet::parse("st").unwrap()));
        }
    }

    #[test]
    fn factorization_examples() {
        let a = atlas((0, 2, 2), [1, 2, 1], 7);
        let st = id(&a, "st");
        let fz = a.factorize(st).unwrap();
        assert_eq!((fz.x, fz.p, fz.y), (ElemId::IDENTITY, st, ElemId::IDENTITY));
        let srst = id(&a, "srst");
        let fz = a.factorize(srst).unwrap();
        assert_eq!((fz.x, fz.p, fz.y), (ElemId::IDENTITY, srst, ElemId::IDENTITY));
        let r = id(&a, "r");
        let fz = a.factorize(id(&a, "rstr")).unwrap();
        assert_eq!((fz.x, fz.p, fz.y), (r, st, r));
    }

    #[test]
    fn counts() {
        let a = atlas((0, 2, 2), [1, 2, 1], 8);
        let c = a.census();
        assert_eq!(c.expected, ExpectedCount::Finite(2));
        assert!(c.consistent(), "{c:?}");
        let a = atlas((3, 3, 3), [1, 1, 1], 9);
        let c = a.census();
        assert_eq!(c.expected, ExpectedCount::Finite(6));
        assert!(c.consistent(), "{c:?}");
        let a = atlas((0, 0, 0), [1, 1, 1], 5);
        assert_eq!(a.census().cells, vec!["r:e", "s:e", "t:e"]);
        let a = atlas((0, 0, 0), [2, 2, 1], 6);
        assert_eq!(a.census().cells, vec!["r:e", "r:t", "s:e", "s:t"]);
    }

    #[test]
    fn delta_examples() {
        let a = atlas((0, 2, 2), [1, 2, 1], 6);
        let kl = KlTable::new(a.ball_arc().clone());
        let s = id(&a, "s");
        assert_eq!(delta_invariants(&kl, s).unwrap(), (2, Int::ONE));
        let st = id(&a, "st");
        assert_eq!(delta_invariants(&kl, st).unwrap(), (3, Int::ONE));
        let f = a.frame_index(GenSet::parse("st").unwrap()).unwrap();
        let cell = CellId {
            frame: f,
            y: ElemId::IDENTITY,
        };
        assert_eq!(a.distinguished(cell, &kl).unwrap(), st);
        let cell_r = CellId {
            frame: f,
            y: id(&a, "r"),
        };
        assert_eq!(a.distinguished(cell_r, &kl).unwrap(), id(&a, "rstr"));
    }
}
