//! The based ring `J₀` on the lowest cell: products of basis elements `t_w`
//! through top coefficients of T-basis products, indecomposable elements and
//! the closed-form product for them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cells::CellAtlas;
use crate::error::{Error, Result};
use crate::hecke::HeckeAlgebra;
use crate::int::Int;
use crate::word::{ElemId, GroupBall, GroupType};

/// An integer combination of basis elements `t_w`, `w` in the lowest cell.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JElement {
    terms: BTreeMap<ElemId, Int>,
}

impl JElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(w: ElemId) -> Self {
        let mut e = Self::zero();
        e.add_term(w, &Int::ONE);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: ElemId) -> Int {
        self.terms.get(&w).cloned().unwrap_or(Int::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (ElemId, &Int)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn add_term(&mut self, w: ElemId, c: &Int) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert(Int::ZERO);
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &JElement, c: &Int) {
        for (w, d) in &other.terms {
            self.add_term(*w, &(d * c));
        }
    }

    /// `[[word, coeff], ...]` in ShortLex order.
    pub fn to_pairs(&self, ball: &GroupBall) -> Vec<(String, Int)> {
        self.terms
            .iter()
            .map(|(w, c)| (ball.word_string(*w), c.clone()))
            .collect()
    }

    pub fn render(&self, ball: &GroupBall) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                if c.is_one() {
                    format!("t_{}", ball.display(*w))
                } else {
                    format!("{}·t_{}", c, ball.display(*w))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// `t_x t_y = t_{x·w_J'·y} + δ t_{w_J·x·y}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedFormProduct {
    pub main: ElemId,
    pub extra: Option<ElemId>,
}

impl ClosedFormProduct {
    pub fn delta(&self) -> bool {
        self.extra.is_some()
    }

    pub fn to_element(&self) -> JElement {
        let mut e = JElement::basis(self.main);
        if let Some(z) = self.extra {
            e.add_term(z, &Int::ONE);
        }
        e
    }
}

/// Which glued factorizations count when deciding decomposability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GlueReading {
    /// `x = x₁'·w_J''·x₂'` length-additive.
    Amalgam,
    /// `x = x₁·w_J''·x₂` as a plain group product.
    Literal,
}

#[derive(Clone, Copy)]
pub struct JRing<'a> {
    atlas: &'a CellAtlas,
    algebra: &'a HeckeAlgebra,
}

impl<'a> JRing<'a> {
    pub fn new(atlas: &'a CellAtlas, algebra: &'a HeckeAlgebra) -> Self {
        JRing { atlas, algebra }
    }

    pub fn atlas(&self) -> &CellAtlas {
        self.atlas
    }

    fn ball(&self) -> &GroupBall {
        self.atlas.ball()
    }

    fn require_c0(&self, w: ElemId) -> Result<()> {
        if self.atlas.in_lambda(w) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{} is not in the lowest cell",
                self.ball().display(w)
            )))
        }
    }

    /// `t_x t_y` with the coefficient of `t_z` read off as the `v^N`
    /// coefficient of `T_z` in `T_x T_y`.
    pub fn product(&self, x: ElemId, y: ElemId) -> Result<JElement> {
        self.require_c0(x)?;
        self.require_c0(y)?;
        let ball = self.ball();
        let needed = ball.length(x) + ball.length(y);
        if needed > ball.radius() {
            return Err(Error::OutOfBall {
                needed,
                radius: ball.radius(),
            });
        }
        let n = self.atlas.n() as i64;
        let prod = self.algebra.t_product(x, y)?;
        let mut out = JElement::zero();
        for (z, c) in prod.terms() {
            let top = c.coeff(n);
            if top.is_zero() {
                continue;
            }
            if !self.atlas.in_lambda(z) {
                return Err(Error::Invariant(format!(
                    "T_{}·T_{} has a degree-N term at {} outside the lowest cell",
                    ball.display(x),
                    ball.display(y),
                    ball.display(z)
                )));
            }
            out.add_term(z, &top);
        }
        Ok(out)
    }

    /// `(J, J')` frame indices with `x ∈ P_{J,J'}`.
    pub fn p_frames(&self, x: ElemId) -> Option<(usize, usize)> {
        let ball = self.ball();
        let l = self.atlas.frame_index(ball.left_descents(x))?;
        let r = self.atlas.frame_index(ball.right_descents(x))?;
        Some((l, r))
    }

    /// `P_{J,J'} ∩ ball` for every pair of frames.
    pub fn p_sets(&self) -> BTreeMap<(usize, usize), Vec<ElemId>> {
        let mut out: BTreeMap<(usize, usize), Vec<ElemId>> = BTreeMap::new();
        for x in self.ball().ids() {
            if let Some(key) = self.p_frames(x) {
                out.entry(key).or_default().push(x);
            }
        }
        out
    }

    fn in_p_minus_m(&self, x: ElemId, l: usize, r: usize) -> bool {
        self.p_frames(x) == Some((l, r)) && !self.atlas.is_in_m(x)
    }

    /// A glued factorization `(x₁, J'', x₂)` of `x`, if one exists in the ball.
    pub fn glue_witness(&self, x: ElemId, reading: GlueReading) -> Result<Option<(ElemId, usize, ElemId)>> {
        let (jl, jr) = self
            .p_frames(x)
            .ok_or_else(|| Error::Domain(format!("{} is not in any P_{{J,J'}}", self.ball().display(x))))?;
        let ball = self.ball();
        match reading {
            GlueReading::Amalgam => {
                for (x1, rest) in ball.prefix_decompositions(x) {
                    for (k, f) in self.atlas.frames().iter().enumerate() {
                        if !self.in_p_minus_m(x1, jl, k) {
                            continue;
                        }
                        if let Some(x2) = ball.reduced_mul(f.longest, rest)? {
                            if self.in_p_minus_m(x2, k, jr) {
                                return Ok(Some((x1, k, x2)));
                            }
                        }
                    }
                }
            }
            GlueReading::Literal => {
                for x1 in ball.ids() {
                    for (k, f) in self.atlas.frames().iter().enumerate() {
                        if !self.in_p_minus_m(x1, jl, k) {
                            continue;
                        }
                        let x2 = match ball.mul(ball.inverse(x1), x).and_then(|u| ball.mul(f.longest, u)) {
                            Ok(x2) => x2,
                            Err(Error::OutOfBall { .. }) => continue,
                            Err(e) => return Err(e),
                        };
                        if self.in_p_minus_m(x2, k, jr) {
                            return Ok(Some((x1, k, x2)));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_indecomposable_with(&self, x: ElemId, reading: GlueReading) -> Result<bool> {
        if self.p_frames(x).is_none() {
            return Err(Error::Domain(format!(
                "{} is not in any P_{{J,J'}}",
                self.ball().display(x)
            )));
        }
        if self.atlas.is_in_m(x) {
            return Ok(false);
        }
        Ok(self.glue_witness(x, reading)?.is_none())
    }

    pub fn is_indecomposable(&self, x: ElemId) -> Result<bool> {
        self.is_indecomposable_with(x, GlueReading::Amalgam)
    }

    /// Indecomposable elements of the ball, ShortLex sorted.
    pub fn indecomposables(&self, reading: GlueReading) -> Result<Vec<ElemId>> {
        let mut out = Vec::new();
        for x in self.ball().ids() {
            if self.p_frames(x).is_some() && self.is_indecomposable_with(x, reading)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Elements of `P` whose verdict differs between the two readings.
    pub fn reading_disagreements(&self) -> Result<Vec<ElemId>> {
        let mut out = Vec::new();
        for x in self.ball().ids() {
            if self.p_frames(x).is_some()
                && self.is_indecomposable_with(x, GlueReading::Amalgam)?
                    != self.is_indecomposable_with(x, GlueReading::Literal)?
            {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// The closed form for `t_x t_y`, `x ∈ P_{J,J'}` indecomposable, `y ∈ P_{J',J''}`.
    pub fn closed_form(&self, x: ElemId, y: ElemId) -> Result<ClosedFormProduct> {
        let ball = self.ball();
        if self.atlas.group_type() == GroupType::Affine {
            return Err(Error::Domain("the closed form excludes affine groups".into()));
        }
        if !self.is_indecomposable(x)? {
            return Err(Error::Domain(format!("{} is not indecomposable", ball.display(x))));
        }
        let (jl, jr) = self.p_frames(x).expect("checked above");
        match self.p_frames(y) {
            Some((yl, _)) if yl == jr => {}
            _ => {
                return Err(Error::Domain(format!(
                    "{} is not in P_{{{},*}}",
                    ball.display(y),
                    self.atlas.frame(jr).j
                )))
            }
        }
        let main = ball.mul(ball.mul(x, self.atlas.frame(jr).longest)?, y)?;
        let extra = if ball.is_prefix(ball.inverse(x), y) {
            Some(ball.mul(self.atlas.frame(jl).longest, ball.mul(x, y)?)?)
        } else {
            None
        };
        Ok(ClosedFormProduct { main, extra })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{classify, parse_word, CoxeterSystem, GroupConfig};
    use std::sync::Arc;

    fn setup(m: (u32, u32, u32), w: [u32; 3], r: usize) -> (CellAtlas, HeckeAlgebra) {
        let cfg = GroupConfig::from_orders(m.0, m.1, m.2, w).unwrap();
        let sys = CoxeterSystem::new(cfg);
        let report = classify(&sys).unwrap();
        let ball = Arc::new(GroupBall::enumerate(&sys, r).unwrap());
        let atlas = CellAtlas::new(ball.clone(), &report).unwrap();
        (atlas, HeckeAlgebra::new(ball))
    }

    fn id(a: &CellAtlas, w: &str) -> ElemId {
        a.ball().locate(&parse_word(w).unwrap()).unwrap()
    }

    fn names(a: &CellAtlas, v: &[ElemId]) -> Vec<String> {
        v.iter().map(|&x| a.ball().display(x)).collect()
    }

    #[test]
    fn worked_square() {
        let (a, h) = setup((0, 2, 2), [1, 2, 1], 8);
        let j = JRing::new(&a, &h);
        let x = id(&a, "srst");
        let p = j.product(x, x).unwrap();
        assert_eq!(
            p.to_pairs(a.ball()),
            vec![("st".to_string(), Int::ONE), ("srsrst".to_string(), Int::ONE)]
        );
        let c = j.closed_form(x, x).unwrap();
        assert!(c.delta());
        assert_eq!(c.to_element(), p);
    }

    #[test]
    fn longest_is_idempotent() {
        let (a, h) = setup((0, 3, 2), [1, 1, 1], 6);
        let j = JRing::new(&a, &h);
        for f in a.frames() {
            assert_eq!(j.product(f.longest, f.longest).unwrap(), JElement::basis(f.longest));
        }
    }

    #[test]
    fn mismatched_frames_vanish() {
        let (a, h) = setup((0, 0, 0), [1, 1, 1], 4);
        let j = JRing::new(&a, &h);
        assert!(j.product(id(&a, "r"), id(&a, "s")).unwrap().is_zero());
    }

    #[test]
    fn indecomposable_examples() {
        let (a, h) = setup((0, 2, 2), [1, 2, 1], 10);
        let j = JRing::new(&a, &h);
        assert!(j.is_indecomposable(id(&a, "srst")).unwrap());
        assert!(!j.is_indecomposable(id(&a, "st")).unwrap());
        assert!(!j.is_indecomposable(id(&a, "srsrst")).unwrap());
        assert!(matches!(j.is_indecomposable(id(&a, "r")), Err(Error::Domain(_))));
        assert_eq!(
            names(&a, &j.indecomposables(GlueReading::Amalgam).unwrap()),
            vec!["srst"]
        );
    }

    #[test]
    fn affine_refused() {
        let (a, h) = setup((3, 3, 3), [1, 1, 1], 6);
        let j = JRing::new(&a, &h);
        let x = id(&a, "rs");
        assert!(matches!(j.closed_form(x, x), Err(Error::Domain(_))));
    }
}
