//! The Hecke algebra in the standard basis `{T_w}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock};

use crate::error::Result;
use crate::int::Int;
use crate::laurent::{Degree, LaurentPoly};
use crate::word::{Edge, ElemId, Gen, GroupBall};

/// A finite `Z[v, v^-1]`-combination of basis elements indexed by ball ids.
/// The same type carries expansions in the `T` basis and in the `C` basis.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct HeckeElement {
    terms: BTreeMap<ElemId, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        HeckeElement::default()
    }

    pub fn basis(w: ElemId) -> Self {
        Self::monomial(w, LaurentPoly::one())
    }

    pub fn monomial(w: ElemId, c: LaurentPoly) -> Self {
        let mut h = Self::zero();
        h.add_term(w, &c);
        h
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

    pub fn get(&self, w: ElemId) -> Option<&LaurentPoly> {
        self.terms.get(&w)
    }

    pub fn coeff(&self, w: ElemId) -> LaurentPoly {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    /// Terms in increasing (ShortLex) id order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (ElemId, &LaurentPoly)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn support(&self) -> Vec<ElemId> {
        self.terms.keys().copied().collect()
    }

    /// The ShortLex-largest support element.
    pub fn max_support(&self) -> Option<ElemId> {
        self.terms.keys().next_back().copied()
    }

    /// The largest support element strictly below `bound`.
    pub fn support_below(&self, bound: ElemId) -> Option<ElemId> {
        self.terms.range(..bound).next_back().map(|(w, _)| *w)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (ElemId, LaurentPoly)>) -> Self {
        let mut h = Self::zero();
        for (w, c) in pairs {
            h.add_term(w, &c);
        }
        h
    }

    pub fn into_pairs(self) -> Vec<(ElemId, LaurentPoly)> {
        self.terms.into_iter().collect()
    }

    pub fn add_term(&mut self, w: ElemId, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &HeckeElement, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            if c.is_one() {
                self.add_term(*w, x);
            } else {
                self.add_term(*w, &(x * c));
            }
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// The largest degree of a coefficient (`-inf` for zero).
    pub fn degree(&self) -> Degree {
        self.terms
            .values()
            .map(LaurentPoly::degree)
            .max()
            .unwrap_or(Degree::NegInf)
    }

    /// Coefficients with their canonical words, ShortLex sorted.
    pub fn to_pairs(&self, ball: &GroupBall) -> Vec<(String, LaurentPoly)> {
        self.terms
            .iter()
            .map(|(w, c)| (ball.word_string(*w), c.clone()))
            .collect()
    }

    /// Human-readable form such as `T_st + (v^-1) T_e` for a given basis symbol.
    pub fn render(&self, ball: &GroupBall, symbol: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .rev()
            .map(|(w, c)| {
                if c.is_one() {
                    format!("{symbol}_{}", ball.display(*w))
                } else {
                    format!("({c}) {symbol}_{}", ball.display(*w))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl Add<&HeckeElement> for &HeckeElement {
    type Output = HeckeElement;
    fn add(self, rhs: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentPoly::one());
        out
    }
}

impl Sub<&HeckeElement> for &HeckeElement {
    type Output = HeckeElement;
    fn sub(self, rhs: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentPoly::monomial(-1, 0));
        out
    }
}

impl Neg for &HeckeElement {
    type Output = HeckeElement;
    fn neg(self) -> HeckeElement {
        self.scale(&LaurentPoly::monomial(-1, 0))
    }
}

/// Multiplication in the standard basis over a fixed ball.
///
/// Products are computed one generator at a time with
/// `T_w T_s = T_{ws}` if `ws > w`, else `T_{ws} + (v_s - v_s^-1) T_w`.
/// A product that needs an element past the radius fails with an
/// out-of-ball error.
pub struct HeckeAlgebra {
    ball: Arc<GroupBall>,
    q: [LaurentPoly; 3],
    bar_cache: Vec<OnceLock<HeckeElement>>,
}

impl fmt::Debug for HeckeAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeckeAlgebra").field("ball", &self.ball).finish()
    }
}

impl HeckeAlgebra {
    pub fn new(ball: Arc<GroupBall>) -> Self {
        let q = Gen::ALL.map(|g| {
            let l = ball.config().weight(g) as i64;
            LaurentPoly::from_terms([(l, 1), (-l, -1)])
        });
        let bar_cache = (0..ball.len()).map(|_| OnceLock::new()).collect();
        HeckeAlgebra { ball, q, bar_cache }
    }

    pub fn ball(&self) -> &GroupBall {
        &self.ball
    }

    pub fn ball_arc(&self) -> &Arc<GroupBall> {
        &self.ball
    }

    /// `v_s - v_s^-1`.
    pub fn q(&self, g: Gen) -> &LaurentPoly {
        &self.q[g.index()]
    }

    /// `v_w = v^{L(w)}`.
    pub fn v_w(&self, w: ElemId) -> LaurentPoly {
        LaurentPoly::v_pow(self.ball.weight(w) as i64)
    }

    fn out_of_ball(&self, needed: usize) -> crate::Error {
        crate::Error::OutOfBall {
            needed,
            radius: self.ball.radius(),
        }
    }

    /// `h · T_g`.
    pub fn mul_gen_right(&self, h: &HeckeElement, g: Gen) -> Result<HeckeElement> {
        let mut out = HeckeElement::zero();
        for (w, c) in h.terms() {
            match self.ball.right_edge(w, g) {
                Edge::Ascent(wg) => out.add_term(wg, c),
                Edge::Descent(wg) => {
                    out.add_term(wg, c);
                    out.add_term(w, &(c * self.q(g)));
                }
                Edge::OutOfBall => return Err(self.out_of_ball(self.ball.length(w) + 1)),
            }
        }
        Ok(out)
    }

    /// `T_g · h`.
    pub fn mul_gen_left(&self, g: Gen, h: &HeckeElement) -> Result<HeckeElement> {
        let mut out = HeckeElement::zero();
        for (w, c) in h.terms() {
            match self.ball.left_edge(w, g) {
                Edge::Ascent(gw) => out.add_term(gw, c),
                Edge::Descent(gw) => {
                    out.add_term(gw, c);
                    out.add_term(w, &(c * self.q(g)));
                }
                Edge::OutOfBall => return Err(self.out_of_ball(self.ball.length(w) + 1)),
            }
        }
        Ok(out)
    }

    /// `h · T_y`, along the canonical word of `y`.
    pub fn mul_t_right(&self, h: &HeckeElement, y: ElemId) -> Result<HeckeElement> {
        let mut out = h.clone();
        for &g in self.ball.word(y) {
            out = self.mul_gen_right(&out, g)?;
        }
        Ok(out)
    }

    /// `T_x · h`.
    pub fn mul_t_left(&self, x: ElemId, h: &HeckeElement) -> Result<HeckeElement> {
        let mut out = h.clone();
        for &g in self.ball.word(x).iter().rev() {
            out = self.mul_gen_left(g, &out)?;
        }
        Ok(out)
    }

    /// General product. Right factors `T_y` are built from `T_{ys}` for
    /// `s ∈ ℛ(y)`, sharing work across the support of `h2`.
    pub fn mul(&self, h1: &HeckeElement, h2: &HeckeElement) -> Result<HeckeElement> {
        let mut memo: HashMap<ElemId, HeckeElement> = HashMap::new();
        memo.insert(ElemId::IDENTITY, h1.clone());
        let mut out = HeckeElement::zero();
        for (y, c) in h2.terms() {
            let prod = self.memo_product(&mut memo, y)?;
            out.add_scaled(&prod, c);
        }
        Ok(out)
    }

    fn memo_product(&self, memo: &mut HashMap<ElemId, HeckeElement>, y: ElemId) -> Result<HeckeElement> {
        if let Some(h) = memo.get(&y) {
            return Ok(h.clone());
        }
        // walk down to a memoized prefix, then back up
        let word = self.ball.word(y).to_vec();
        let mut k = word.len();
        let mut prefix = y;
        while !memo.contains_key(&prefix) {
            k -= 1;
            prefix = self.ball.mul_gen(prefix, word[k]).expect("descent");
        }
        let mut h = memo[&prefix].clone();
        for &g in &word[k..] {
            h = self.mul_gen_right(&h, g)?;
            prefix = self.ball.mul_gen(prefix, g).expect("prefix of an in-ball word");
            memo.insert(prefix, h.clone());
        }
        Ok(h)
    }

    /// `T_x T_y`.
    pub fn t_product(&self, x: ElemId, y: ElemId) -> Result<HeckeElement> {
        self.mul_t_right(&HeckeElement::basis(x), y)
    }

    /// `T_x T_y` for every `y` of length at most `max_len`, indexed by id.
    pub fn t_row(&self, x: ElemId, max_len: usize) -> Result<Vec<HeckeElement>> {
        let ids: Vec<ElemId> = self.ball.up_to(max_len).collect();
        let mut row: Vec<HeckeElement> = Vec::with_capacity(ids.len());
        for y in ids {
            if y == ElemId::IDENTITY {
                row.push(HeckeElement::basis(x));
                continue;
            }
            let g = *self.ball.word(y).last().expect("nonidentity");
            let parent = self.ball.mul_gen(y, g).expect("descent");
            let h = self.mul_gen_right(&row[parent.index()], g)?;
            row.push(h);
        }
        Ok(row)
    }

    /// `f_{x,y,z}`, the coefficient of `T_z` in `T_x T_y`.
    pub fn f_poly(&self, x: ElemId, y: ElemId, z: ElemId) -> Result<LaurentPoly> {
        Ok(self.t_product(x, y)?.coeff(z))
    }

    /// `β_{x,y,z} = π_n(f_{x,y,z^-1})`.
    pub fn beta(&self, x: ElemId, y: ElemId, z: ElemId, n: u64) -> Result<Int> {
        Ok(self.f_poly(x, y, self.ball.inverse(z))?.coeff(n as i64))
    }

    /// `bar(T_w) = T_{w^-1}^{-1}`, built from `bar(T_{ws}) (T_s - (v_s - v_s^-1))`.
    pub fn bar_t(&self, w: ElemId) -> &HeckeElement {
        self.bar_cache[w.index()].get_or_init(|| {
            if w == ElemId::IDENTITY {
                return HeckeElement::basis(w);
            }
            let g = *self.ball.word(w).last().expect("nonidentity");
            let parent = self.ball.mul_gen(w, g).expect("descent");
            let prev = self.bar_t(parent);
            let mut out = self
                .mul_gen_right(prev, g)
                .expect("Bruhat interval stays inside the ball");
            out.add_scaled(prev, &-self.q(g));
            out
        })
    }

    /// The bar involution on the standard basis.
    pub fn bar(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (w, c) in h.terms() {
            out.add_scaled(self.bar_t(w), &c.bar());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{GroupBall, GroupConfig};

    fn algebra(m: (u32, u32, u32), w: [u32; 3], r: usize) -> HeckeAlgebra {
        let cfg = GroupConfig::from_orders(m.0, m.1, m.2, w).unwrap();
        HeckeAlgebra::new(Arc::new(GroupBall::new(cfg, r).unwrap()))
    }

    fn id(h: &HeckeAlgebra, w: &str) -> ElemId {
        h.ball().locate(&crate::word::parse_word(w).unwrap()).unwrap()
    }

    #[test]
    fn quadratic_relation() {
        let h = algebra((0, 2, 2), [1, 2, 1], 4);
        let s = id(&h, "s");
        let p = h.t_product(s, s).unwrap();
        let mut expected = HeckeElement::basis(ElemId::IDENTITY);
        expected.add_term(s, &LaurentPoly::from_terms([(2, 1), (-2, -1)]));
        assert_eq!(p, expected);
    }

    #[test]
    fn reduced_products_are_basis_elements() {
        let h = algebra((0, 2, 2), [1, 2, 1], 6);
        let rst = id(&h, "rst");
        let r = id(&h, "r");
        assert_eq!(h.t_product(rst, r).unwrap(), HeckeElement::basis(id(&h, "rstr")));
        let (sr, rs) = (id(&h, "sr"), id(&h, "rs"));
        assert_eq!(h.t_product(sr, rs).unwrap().coeff(ElemId::IDENTITY), LaurentPoly::one());
    }

    #[test]
    fn f_examples() {
        let h = algebra((2, 3, 4), [1, 1, 1], 6);
        let (sr, r) = (id(&h, "rs"), id(&h, "r"));
        // sr = rs here; multiplying by r on the right descends once
        let sr_id = id(&h, "sr");
        assert_eq!(sr, sr_id);
        let f = h.f_poly(sr, r, sr).unwrap();
        assert_eq!(f, LaurentPoly::from_terms([(1, 1), (-1, -1)]));
    }

    #[test]
    fn f_at_identity_is_kronecker() {
        let h = algebra((0, 3, 2), [2, 1, 1], 6);
        for x in h.ball().up_to(3) {
            for y in h.ball().up_to(3) {
                let f = h.f_poly(x, y, ElemId::IDENTITY).unwrap();
                let expected = if x == h.ball().inverse(y) {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                };
                assert_eq!(f, expected);
            }
        }
    }

    #[test]
    fn general_mul_matches_basis_products() {
        let h = algebra((5, 4, 2), [1, 1, 2], 8);
        let a = &HeckeElement::monomial(id(&h, "rs"), LaurentPoly::v_pow(1)) + &HeckeElement::basis(id(&h, "t"));
        let b = &HeckeElement::monomial(id(&h, "srt"), LaurentPoly::v_pow(-2)) + &HeckeElement::basis(id(&h, "st"));
        let got = h.mul(&a, &b).unwrap();
        let mut expected = HeckeElement::zero();
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                expected.add_scaled(&h.t_product(x, y).unwrap(), &(cx * cy));
            }
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn t_row_matches_products() {
        let h = algebra((0, 0, 2), [1, 2, 1], 8);
        let x = id(&h, "srt");
        let row = h.t_row(x, 4).unwrap();
        for y in h.ball().up_to(4) {
            assert_eq!(row[y.index()], h.t_product(x, y).unwrap());
        }
    }

    #[test]
    fn out_of_ball_is_reported() {
        let h = algebra((0, 0, 0), [1, 1, 1], 3);
        let x = id(&h, "rst");
        assert!(matches!(
            h.t_product(x, id(&h, "r")),
            Err(crate::Error::OutOfBall { .. })
        ));
    }

    #[test]
    fn bar_examples() {
        let h = algebra((0, 2, 2), [1, 2, 1], 5);
        assert_eq!(h.bar_t(ElemId::IDENTITY), &HeckeElement::basis(ElemId::IDENTITY));
        let s = id(&h, "s");
        let mut expected = HeckeElement::basis(s);
        expected.add_term(ElemId::IDENTITY, &-h.q(Gen::S));
        assert_eq!(h.bar_t(s), &expected);
        for w in h.ball().up_to(4) {
            let b = h.bar(&HeckeElement::basis(w));
            assert_eq!(h.bar(&b), HeckeElement::basis(w));
        }
    }

    #[test]
    fn bar_t_is_inverse_of_t_inverse() {
        let h = algebra((0, 3, 2), [1, 1, 1], 8);
        for w in h.ball().up_to(4) {
            let winv = h.ball().inverse(w);
            let prod = h.mul(h.bar_t(w), &HeckeElement::basis(winv)).unwrap();
            assert_eq!(prod, HeckeElement::basis(ElemId::IDENTITY));
        }
    }

    #[test]
    fn bar_is_multiplicative() {
        let h = algebra((4, 4, 2), [2, 1, 1], 8);
        for x in h.ball().level_ids(3).step_by(2) {
            for y in h.ball().level_ids(2) {
                let p = h.t_product(x, y).unwrap();
                let lhs = h.bar(&p);
                let rhs = h.mul(h.bar_t(x), h.bar_t(y)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn associativity() {
        let h = algebra((0, 3, 2), [2, 1, 1], 9);
        let xs: Vec<ElemId> = h.ball().level_ids(3).take(4).collect();
        for &x in &xs {
            for &y in &xs {
                for &z in &xs {
                    let left = h.mul(&h.t_product(x, y).unwrap(), &HeckeElement::basis(z)).unwrap();
                    let right = h.mul(&HeckeElement::basis(x), &h.t_product(y, z).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }
}
