//! The Kazhdan–Lusztig basis `{C_w}` with unequal parameters.
//!
//! Columns `C_w = Σ p_{x,w} T_x` are computed lazily from `C_{ws} C_s` by
//! subtracting bar-invariant multiples of lower `C_z` until every
//! coefficient other than that of `T_w` lies in `v^-1 Z[v^-1]`. The
//! independent global solver [`KlTable::bar_fixing_column`] computes the same
//! column from the bar involution alone.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElement};
use crate::int::Int;
use crate::laurent::{Degree, LaurentPoly};
use crate::word::{ElemId, Gen, GroupBall};

pub struct KlTable {
    algebra: HeckeAlgebra,
    columns: Vec<OnceLock<HeckeElement>>,
}

impl fmt::Debug for KlTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KlTable")
            .field("ball", self.ball())
            .field("computed", &self.columns.iter().filter(|c| c.get().is_some()).count())
            .finish()
    }
}

impl KlTable {
    pub fn new(ball: Arc<GroupBall>) -> Self {
        let columns = (0..ball.len()).map(|_| OnceLock::new()).collect();
        KlTable {
            algebra: HeckeAlgebra::new(ball),
            columns,
        }
    }

    pub fn algebra(&self) -> &HeckeAlgebra {
        &self.algebra
    }

    pub fn ball(&self) -> &GroupBall {
        self.algebra.ball()
    }

    /// Compute every column of length at most `max_len`, level by level,
    /// in parallel within a level.
    pub fn build(&self, max_len: usize) -> Result<()> {
        for k in 0..=max_len.min(self.ball().radius()) {
            let level: Vec<ElemId> = self.ball().level_ids(k).collect();
            level.par_iter().try_for_each(|&w| self.c(w).map(|_| ()))?;
        }
        Ok(())
    }

    /// `C_w` in the standard basis.
    pub fn c(&self, w: ElemId) -> Result<&HeckeElement> {
        if let Some(col) = self.columns[w.index()].get() {
            return Ok(col);
        }
        let col = self.compute_column(w)?;
        Ok(self.columns[w.index()].get_or_init(|| col))
    }

    fn compute_column(&self, w: ElemId) -> Result<HeckeElement> {
        let ball = self.ball();
        if w == ElemId::IDENTITY {
            return Ok(HeckeElement::basis(w));
        }
        let g = *ball.word(w).last().expect("nonidentity");
        let prev = ball.mul_gen(w, g).expect("descent");
        let c_prev = self.c(prev)?;
        // C_{ws} C_s = C_{ws} (T_s + v_s^-1)
        let mut acc = self.algebra.mul_gen_right(c_prev, g)?;
        acc.add_scaled(c_prev, &LaurentPoly::v_pow(-(ball.config().weight(g) as i64)));
        let mut cursor = w;
        while let Some(z) = acc.support_below(cursor) {
            let mu = acc.coeff(z).symmetric_completion();
            if !mu.is_zero() {
                let cz = self.c(z)?;
                acc.add_scaled(cz, &-&mu);
            }
            cursor = z;
        }
        check_column_shape(ball, w, &acc)?;
        Ok(acc)
    }

    /// `p_{x,w}`.
    pub fn p(&self, x: ElemId, w: ElemId) -> Result<LaurentPoly> {
        Ok(self.c(w)?.coeff(x))
    }

    /// Columns already computed, for export.
    pub fn computed_columns(&self) -> Vec<(ElemId, &HeckeElement)> {
        self.columns
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.get().map(|h| (ElemId(i as u32), h)))
            .collect()
    }

    /// Install a column loaded from elsewhere (for instance a cache). Returns
    /// false if a different column was already present.
    pub fn insert_column(&self, w: ElemId, col: HeckeElement) -> bool {
        let stored = self.columns[w.index()].get_or_init(|| col.clone());
        *stored == col
    }

    /// `C_x C_y` in the standard basis.
    pub fn c_product_t(&self, x: ElemId, y: ElemId) -> Result<HeckeElement> {
        self.algebra.mul(self.c(x)?, self.c(y)?)
    }

    /// Rewrite an element of the standard basis in the `C` basis by repeatedly
    /// removing the ShortLex-largest support element.
    pub fn to_c_basis(&self, h: &HeckeElement) -> Result<HeckeElement> {
        let mut rest = h.clone();
        let mut out = HeckeElement::zero();
        while let Some(z) = rest.max_support() {
            let c = rest.coeff(z);
            rest.add_scaled(self.c(z)?, &-&c);
            out.add_term(z, &c);
        }
        Ok(out)
    }

    /// `C_x C_y = Σ h_{x,y,z} C_z`, returned as the map `z ↦ h_{x,y,z}`.
    pub fn h_expansion(&self, x: ElemId, y: ElemId) -> Result<HeckeElement> {
        self.to_c_basis(&self.c_product_t(x, y)?)
    }

    pub fn h_poly(&self, x: ElemId, y: ElemId, z: ElemId) -> Result<LaurentPoly> {
        Ok(self.h_expansion(x, y)?.coeff(z))
    }

    /// `γ_{x,y,z} = π_{a_z}(h_{x,y,z^-1})`.
    pub fn gamma(&self, x: ElemId, y: ElemId, z: ElemId, a_z: u64) -> Result<Int> {
        Ok(self.h_poly(x, y, self.ball().inverse(z))?.coeff(a_z as i64))
    }

    /// `E_x` relative to `w = x·w_J`: the sum of `p_{x'w_J, w} T_{x'}` over
    /// `x' ≤ x` with `x'·w_J` reduced.
    pub fn e_element(&self, x: ElemId, w_j: ElemId) -> Result<HeckeElement> {
        let ball = self.ball();
        let w = ball
            .reduced_mul(x, w_j)?
            .ok_or_else(|| Error::Domain(format!("{}·{} is not reduced", ball.display(x), ball.display(w_j))))?;
        let cw = self.c(w)?;
        let mut out = HeckeElement::zero();
        for xp in ball.bruhat_interval(x) {
            if let Some(xw) = ball.reduced_mul(xp, w_j)? {
                out.add_term(xp, &cw.coeff(xw));
            }
        }
        Ok(out)
    }

    /// `F_y` relative to `w = w_J·y`.
    pub fn f_element(&self, w_j: ElemId, y: ElemId) -> Result<HeckeElement> {
        let ball = self.ball();
        let w = ball
            .reduced_mul(w_j, y)?
            .ok_or_else(|| Error::Domain(format!("{}·{} is not reduced", ball.display(w_j), ball.display(y))))?;
        let cw = self.c(w)?;
        let mut out = HeckeElement::zero();
        for yp in ball.bruhat_interval(y) {
            if let Some(wy) = ball.reduced_mul(w_j, yp)? {
                out.add_term(yp, &cw.coeff(wy));
            }
        }
        Ok(out)
    }

    /// `C_x C_y` in the `C` basis for all `x, y` of length at most `radius`.
    pub fn product_table(&self, radius: usize) -> Result<ProductTable> {
        let ids: Vec<ElemId> = self.ball().up_to(radius).collect();
        let needed = 2 * radius;
        if needed > self.ball().radius() {
            return Err(Error::OutOfBall {
                needed,
                radius: self.ball().radius(),
            });
        }
        self.build(needed)?;
        let rows: Vec<Vec<HeckeElement>> = ids
            .par_iter()
            .map(|&x| ids.iter().map(|&y| self.h_expansion(x, y)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductTable {
            radius,
            n: ids.len(),
            rows,
        })
    }

    /// Checks `bar(C_w) = C_w`, `p_{w,w} = 1` and `p_{x,w} ∈ v^-1 Z[v^-1]` for `x ≠ w`.
    pub fn verify_column(&self, w: ElemId) -> Result<()> {
        let col = self.c(w)?;
        check_column_shape(self.ball(), w, col)?;
        let barred = self.algebra.bar(col);
        if &barred != col {
            return Err(Error::Invariant(format!(
                "C_{} is not bar invariant",
                self.ball().display(w)
            )));
        }
        Ok(())
    }

    /// `C_w` from the bar involution alone: writing `bar(T_x) = Σ r_{y,x} T_y`,
    /// each `p_{y,w}` for `y < w` (taken downward) is the strictly negative
    /// part of `Σ_{y < x ≤ w} bar(p_{x,w}) r_{y,x}`, which must be
    /// antisymmetric under bar for a solution to exist.
    pub fn bar_fixing_column(&self, w: ElemId) -> Result<HeckeElement> {
        let ball = self.ball();
        let interval = ball.bruhat_interval(w);
        let mut p: BTreeMap<ElemId, LaurentPoly> = BTreeMap::new();
        p.insert(w, LaurentPoly::one());
        for &y in interval.iter().rev().skip(1) {
            let mut rhs = LaurentPoly::zero();
            for (&x, px) in p.range(y..).skip_while(|(x, _)| **x == y) {
                if let Some(r) = self.algebra.bar_t(x).get(y) {
                    rhs.add_scaled(r, &px.bar());
                }
            }
            let neg = rhs.negative_part();
            let expected = &neg - &neg.bar();
            if rhs != expected {
                return Err(Error::Invariant(format!(
                    "bar-fixing system for C_{} has no solution at {}",
                    ball.display(w),
                    ball.display(y)
                )));
            }
            if !neg.is_zero() {
                p.insert(y, neg);
            }
        }
        Ok(HeckeElement::from_pairs(p))
    }
}

fn check_column_shape(ball: &GroupBall, w: ElemId, col: &HeckeElement) -> Result<()> {
    if !col.coeff(w).is_one() {
        return Err(Error::Invariant(format!("p_{{w,w}} != 1 for w = {}", ball.display(w))));
    }
    for (x, c) in col.terms() {
        if x != w && !c.is_strictly_negative() {
            return Err(Error::Invariant(format!(
                "p_{{{},{}}} = {c} is not in v^-1 Z[v^-1]",
                ball.display(x),
                ball.display(w)
            )));
        }
        if x != w && !ball.bruhat_leq(x, w) {
            return Err(Error::Invariant(format!(
                "p_{{{},{}}} nonzero although x is not below w",
                ball.display(x),
                ball.display(w)
            )));
        }
    }
    Ok(())
}

/// `h_{x,y,z}` for all `x, y` in a ball of the given radius.
#[derive(Clone, Debug)]
pub struct ProductTable {
    radius: usize,
    n: usize,
    rows: Vec<Vec<HeckeElement>>,
}

/// A lower bound `max deg h_{x,y,w}` together with a pair attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ABound {
    pub degree: Degree,
    pub witness: Option<(ElemId, ElemId)>,
}

impl ProductTable {
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// The `C`-basis expansion of `C_x C_y`.
    pub fn get(&self, x: ElemId, y: ElemId) -> Option<&HeckeElement> {
        if x.index() < self.n && y.index() < self.n {
            Some(&self.rows[x.index()][y.index()])
        } else {
            None
        }
    }

    pub fn h(&self, x: ElemId, y: ElemId, z: ElemId) -> Option<LaurentPoly> {
        self.get(x, y).map(|e| e.coeff(z))
    }

    /// `max deg h_{x,y,w}` over the table, with the ShortLex-first pair attaining it.
    pub fn a_lower_bound(&self, w: ElemId) -> ABound {
        let mut best = ABound {
            degree: Degree::NegInf,
            witness: None,
        };
        for (i, row) in self.rows.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let d = e.get(w).map_or(Degree::NegInf, LaurentPoly::degree);
                if d > best.degree {
                    best = ABound {
                        degree: d,
                        witness: Some((ElemId(i as u32), ElemId(j as u32))),
                    };
                }
            }
        }
        best
    }

    /// All `(x, y)` with `deg h_{x,y,w} = target`.
    pub fn witnesses(&self, w: ElemId, target: i64) -> Vec<(ElemId, ElemId)> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if e.get(w).map_or(Degree::NegInf, LaurentPoly::degree) == Degree::Finite(target) {
                    out.push((ElemId(i as u32), ElemId(j as u32)));
                }
            }
        }
        out
    }

    /// Largest degree of any `h_{x,y,z}` in the table.
    pub fn max_degree(&self) -> Degree {
        self.rows
            .iter()
            .flatten()
            .map(HeckeElement::degree)
            .max()
            .unwrap_or(Degree::NegInf)
    }
}

/// `C_s = T_s + v_s^-1 T_e`, handy in tests and checks.
pub fn c_generator(ball: &GroupBall, g: Gen) -> Result<HeckeElement> {
    let s = ball.generator(g)?;
    let mut h = HeckeElement::basis(s);
    h.add_term(ElemId::IDENTITY, &LaurentPoly::v_pow(-(ball.config().weight(g) as i64)));
    Ok(h)
}
